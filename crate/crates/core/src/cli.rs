//! Command-line front end.
//!
//! Exit status: 0 on success, 1 when `verify` fails or an orbit ends
//! exhausted, 2 for usage and parse errors. All exact values are printed in
//! canonical `p/q` form, never as decimals.

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::analysis::{
    basin_decomposition, classify_lambda, fixed_points, predict_limit, BasinDecomposition, FixedPointSet,
    LambdaRegion,
};
use crate::orbit::{cobweb_points, default_max_steps, omega_limit, simulate_orbit, Classification, Orbit};
use crate::rational::{Integer, ParseRationalError, Rational};
use crate::verify::{
    default_exhaustive_instances, verify_lemma1, verify_small_instance_exhaustive, verify_theorems, GridSpec,
    VerifyReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    #[default]
    Plain,
}

fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    text.parse()
}

#[derive(Debug, Parser)]
#[command(name = "floordyn", version, about = "Fixed points, basins and orbits of x -> floor(lambda * x)")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = OutputFormat::Plain, global = true)]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the fixed-point set.
    FixedPoints {
        #[arg(value_parser = parse_rational, allow_hyphen_values = true)]
        lambda: Rational,
    },
    /// Print the parameter region and its index m.
    Classify {
        #[arg(value_parser = parse_rational, allow_hyphen_values = true)]
        lambda: Rational,
    },
    /// Print the basin decomposition of the real line.
    Basins {
        #[arg(value_parser = parse_rational, allow_hyphen_values = true)]
        lambda: Rational,
    },
    /// Print the predicted limit of the orbit of x0.
    Predict {
        #[arg(value_parser = parse_rational, allow_hyphen_values = true)]
        lambda: Rational,
        #[arg(value_parser = parse_rational, allow_hyphen_values = true)]
        x0: Rational,
    },
    /// Simulate the orbit of x0 and print its certified classification.
    Orbit {
        #[arg(value_parser = parse_rational, allow_hyphen_values = true)]
        lambda: Rational,
        #[arg(value_parser = parse_rational, allow_hyphen_values = true)]
        x0: Rational,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_steps: Option<u64>,
    },
    /// Print the simulated limit of the orbit of x0.
    Omega {
        #[arg(value_parser = parse_rational, allow_hyphen_values = true)]
        lambda: Rational,
        #[arg(value_parser = parse_rational, allow_hyphen_values = true)]
        x0: Rational,
    },
    /// Print cobweb vertices as CSV.
    Cobweb {
        #[arg(value_parser = parse_rational, allow_hyphen_values = true)]
        lambda: Rational,
        #[arg(value_parser = parse_rational, allow_hyphen_values = true)]
        x0: Rational,
        #[arg(long = "n", value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// Region and fixed-point count for every lambda = p/D in [from, to].
    Scan {
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        from: Rational,
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        to: Rational,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        den: u64,
    },
    /// Run the verification suites; exits 0 iff all pass.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random lambdas drawn per parameter family.
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// Extra exhaustive instance: LAMBDA BOUND (repeatable).
        #[arg(long, num_args = 2, value_names = ["LAMBDA", "BOUND"], allow_hyphen_values = true, action = clap::ArgAction::Append)]
        exhaustive: Vec<String>,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CliOutput {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CliOutput {
    fn ok(stdout: String) -> Self {
        CliOutput { status: 0, stdout, stderr: String::new() }
    }

    fn usage(message: String) -> Self {
        CliOutput { status: 2, stdout: String::new(), stderr: message }
    }
}

// JSON schema. Field names are stable; exact numbers are canonical strings.

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FixedPointsJson {
    /// Always `"Z"`.
    AllIntegers(String),
    Points(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionJson {
    pub lambda: String,
    pub region: String,
    pub m: Option<String>,
    pub fixed_points: FixedPointsJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceJson {
    /// `"-inf"` when unbounded.
    pub lower: String,
    pub lower_closed: bool,
    /// `"+inf"` when unbounded.
    pub upper: String,
    pub upper_closed: bool,
    pub behavior: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasinsJson {
    pub lambda: String,
    pub region: String,
    pub m: Option<String>,
    pub pieces: Vec<PieceJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BehaviorJson {
    pub lambda: String,
    pub x0: String,
    pub behavior: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub kind: String,
    pub witness: String,
    pub region: String,
    pub m: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitJson {
    pub lambda: String,
    pub x0: String,
    pub prefix: Vec<String>,
    /// Behaviour token, or `"exhausted"`.
    pub behavior: String,
    pub steps: usize,
    pub certificate: Option<CertificateJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointJson {
    pub x: String,
    pub y: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRowJson {
    pub lambda: String,
    pub region: String,
    pub m: Option<String>,
    /// Decimal count, or `"inf"` for `lambda = 1`.
    pub fix_count: String,
}

fn m_of(region: &LambdaRegion) -> Option<String> {
    region.index().map(Integer::to_string)
}

fn fixed_points_json(set: &FixedPointSet) -> FixedPointsJson {
    match set {
        FixedPointSet::AllIntegers => FixedPointsJson::AllIntegers("Z".to_string()),
        FixedPointSet::Finite(points) => FixedPointsJson::Points(points.iter().map(Integer::to_string).collect()),
    }
}

fn bracketed(set: &FixedPointSet) -> String {
    match set {
        FixedPointSet::AllIntegers => "Z".to_string(),
        FixedPointSet::Finite(points) => {
            let items: Vec<String> = points.iter().map(Integer::to_string).collect();
            format!("[{}]", items.join(","))
        }
    }
}

fn csv_field(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn csv_row(fields: &[String]) -> String {
    let mut line = fields.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(",");
    line.push('\n');
    line
}

fn to_json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn region_json(lambda: &Rational) -> RegionJson {
    let region = classify_lambda(lambda);
    RegionJson {
        lambda: lambda.to_string(),
        region: region.tag().to_string(),
        m: m_of(&region),
        fixed_points: fixed_points_json(&fixed_points(lambda)),
    }
}

pub fn basins_json(d: &BasinDecomposition) -> BasinsJson {
    BasinsJson {
        lambda: d.lambda.to_string(),
        region: d.region.tag().to_string(),
        m: m_of(&d.region),
        pieces: d
            .pieces
            .iter()
            .map(|p| PieceJson {
                lower: p.interval.lower.as_ref().map_or("-inf".to_string(), Rational::to_string),
                lower_closed: p.interval.lower_closed,
                upper: p.interval.upper.as_ref().map_or("+inf".to_string(), Rational::to_string),
                upper_closed: p.interval.upper_closed,
                behavior: p.behavior.token(),
            })
            .collect(),
    }
}

pub fn orbit_json(orbit: &Orbit) -> OrbitJson {
    OrbitJson {
        lambda: orbit.lambda.to_string(),
        x0: orbit.start.to_string(),
        prefix: orbit.prefix.iter().map(Integer::to_string).collect(),
        behavior: orbit.classification.token(),
        steps: orbit.steps(),
        certificate: orbit.certificate.as_ref().map(|c| CertificateJson {
            kind: c.kind_tag().to_string(),
            witness: c.witness().to_string(),
            region: c.region.tag().to_string(),
            m: m_of(&c.region),
        }),
    }
}

fn cmd_fixed_points(lambda: &Rational, format: OutputFormat) -> CliOutput {
    let set = fixed_points(lambda);
    CliOutput::ok(match format {
        OutputFormat::Plain => format!("{set}\n"),
        OutputFormat::Json => to_json_line(&region_json(lambda)),
        OutputFormat::Csv => {
            let region = classify_lambda(lambda);
            let mut out = csv_row(&["lambda".into(), "region".into(), "m".into(), "fixed_points".into()]);
            out += &csv_row(&[
                lambda.to_string(),
                region.tag().to_string(),
                m_of(&region).unwrap_or_default(),
                bracketed(&set),
            ]);
            out
        }
    })
}

fn cmd_classify(lambda: &Rational, format: OutputFormat) -> CliOutput {
    let region = classify_lambda(lambda);
    let set = fixed_points(lambda);
    CliOutput::ok(match format {
        OutputFormat::Plain => {
            let fix = match &set {
                FixedPointSet::AllIntegers => "all integers".to_string(),
                finite => finite.to_string(),
            };
            format!("{region} (Fix = {fix})\n")
        }
        OutputFormat::Json => to_json_line(&region_json(lambda)),
        OutputFormat::Csv => {
            let mut out = csv_row(&["lambda".into(), "region".into(), "m".into()]);
            out += &csv_row(&[lambda.to_string(), region.tag().to_string(), m_of(&region).unwrap_or_default()]);
            out
        }
    })
}

fn cmd_basins(lambda: &Rational, format: OutputFormat) -> CliOutput {
    let d = basin_decomposition(lambda);
    CliOutput::ok(match format {
        OutputFormat::Plain => d.pieces.iter().fold(String::new(), |mut out, p| {
            let _ = writeln!(out, "{} -> {}", p.interval, p.behavior);
            out
        }),
        OutputFormat::Json => to_json_line(&basins_json(&d)),
        OutputFormat::Csv => {
            let mut out = csv_row(&[
                "lower".into(),
                "lower_closed".into(),
                "upper".into(),
                "upper_closed".into(),
                "behavior".into(),
            ]);
            for p in basins_json(&d).pieces {
                out += &csv_row(&[
                    p.lower,
                    p.lower_closed.to_string(),
                    p.upper,
                    p.upper_closed.to_string(),
                    p.behavior,
                ]);
            }
            out
        }
    })
}

fn behavior_output(lambda: &Rational, x0: &Rational, b: &crate::analysis::LimitBehavior, format: OutputFormat) -> CliOutput {
    CliOutput::ok(match format {
        OutputFormat::Plain => format!("{b}\n"),
        OutputFormat::Json => to_json_line(&BehaviorJson {
            lambda: lambda.to_string(),
            x0: x0.to_string(),
            behavior: b.token(),
        }),
        OutputFormat::Csv => {
            csv_row(&["lambda".into(), "x0".into(), "behavior".into()])
                + &csv_row(&[lambda.to_string(), x0.to_string(), b.token()])
        }
    })
}

fn cmd_orbit(lambda: &Rational, x0: &Rational, max_steps: Option<u64>, format: OutputFormat) -> CliOutput {
    let budget = max_steps.map_or_else(|| default_max_steps(x0), |n| usize::try_from(n).unwrap_or(usize::MAX));
    let orbit = simulate_orbit(lambda, x0, budget).expect("budget is at least 1");
    let stdout = match format {
        OutputFormat::Plain => {
            let prefix: Vec<String> = orbit.prefix.iter().map(Integer::to_string).collect();
            let cert = orbit.certificate.as_ref().map_or("none".to_string(), |c| c.to_string());
            format!(
                "prefix: [{}]\nclassification: {}\nsteps: {}\ncertificate: {}\n",
                prefix.join(", "),
                orbit.classification,
                orbit.steps(),
                cert
            )
        }
        OutputFormat::Json => to_json_line(&orbit_json(&orbit)),
        OutputFormat::Csv => {
            let mut out = csv_row(&["n".into(), "value".into()]);
            for (i, v) in orbit.prefix.iter().enumerate() {
                out += &csv_row(&[(i + 1).to_string(), v.to_string()]);
            }
            out
        }
    };
    if orbit.classification == Classification::Exhausted {
        CliOutput {
            status: 1,
            stdout,
            stderr: format!("orbit not classified within {} steps\n", orbit.steps()),
        }
    } else {
        CliOutput::ok(stdout)
    }
}

fn cmd_cobweb(lambda: &Rational, x0: &Rational, n: u64, format: OutputFormat) -> CliOutput {
    let points = cobweb_points(lambda, x0, usize::try_from(n).unwrap_or(usize::MAX));
    CliOutput::ok(match format {
        OutputFormat::Json => {
            let rows: Vec<PointJson> =
                points.iter().map(|(x, y)| PointJson { x: x.to_string(), y: y.to_string() }).collect();
            to_json_line(&rows)
        }
        OutputFormat::Plain | OutputFormat::Csv => {
            let mut out = csv_row(&["x".into(), "y".into()]);
            for (x, y) in &points {
                out += &csv_row(&[x.to_string(), y.to_string()]);
            }
            out
        }
    })
}

/// Rows of the fixed-point staircase `lambda = p/den` for `from <= lambda <= to`.
pub fn scan_rows(from: &Rational, to: &Rational, den: u64) -> Vec<ScanRowJson> {
    let den_q = Rational::from_integer(Integer::from(den));
    let first = (from * &den_q).ceil();
    let last = (to * &den_q).floor();
    let mut rows = Vec::new();
    let mut p = first;
    while p <= last {
        let lambda = Rational::new(p.clone(), Integer::from(den)).expect("den >= 1");
        let region = classify_lambda(&lambda);
        rows.push(ScanRowJson {
            lambda: lambda.to_string(),
            region: region.tag().to_string(),
            m: m_of(&region),
            fix_count: fixed_points(&lambda).len().map_or("inf".to_string(), |n| n.to_string()),
        });
        p += 1;
    }
    rows
}

fn cmd_scan(from: &Rational, to: &Rational, den: u64, format: OutputFormat) -> CliOutput {
    if from > to {
        return CliOutput::usage(format!("scan: --from {from} is greater than --to {to}\n"));
    }
    let rows = scan_rows(from, to, den);
    CliOutput::ok(match format {
        OutputFormat::Json => to_json_line(&rows),
        OutputFormat::Plain | OutputFormat::Csv => {
            let mut out = String::from("lambda, region, m, fix_count\n");
            for r in rows {
                let _ = writeln!(
                    out,
                    "{}, {}, m={}, {}",
                    r.lambda,
                    r.region,
                    r.m.as_deref().unwrap_or("-"),
                    r.fix_count
                );
            }
            out
        }
    })
}

fn summary_line(name: &str, r: &VerifyReport) -> String {
    let verdict = if r.passed() { "PASS" } else { "FAIL" };
    let mut line = format!(
        "{name}: {verdict} cases={} mismatches={} fixed_point_failures={} region_failures={} partition_failures={} identity_failures={} period_failures={} exhausted={}",
        r.cases_run,
        r.mismatches.len(),
        r.fixed_point_failures.len(),
        r.region_failures.len(),
        r.partition_failures.len(),
        r.identity_failures.len(),
        r.period_failures.len(),
        r.exhausted,
    );
    if !r.eventual_periods.is_empty() {
        let periods: Vec<String> = r.eventual_periods.iter().map(|(p, c)| format!("{p}:{c}")).collect();
        let _ = write!(line, " periods={{{}}}", periods.join(","));
    }
    if r.step_bound.checked > 0 {
        let _ = write!(
            line,
            " conjectured_step_bound_exceeded={}/{}",
            r.step_bound.exceeded, r.step_bound.checked
        );
    }
    line.push('\n');
    for m in r.mismatches.iter().take(20) {
        let _ = writeln!(
            line,
            "  {} mismatch lambda={} x0={} predicted={} observed={}",
            m.source.tag(),
            m.lambda,
            m.x0,
            m.predicted.token(),
            m.observed.token()
        );
    }
    line
}

fn cmd_verify(seed: u64, samples: usize, exhaustive: &[String], format: OutputFormat) -> CliOutput {
    let mut instances = default_exhaustive_instances();
    for pair in exhaustive.chunks(2) {
        let lambda = match parse_rational(&pair[0]) {
            Ok(l) => l,
            Err(e) => return CliOutput::usage(format!("verify --exhaustive: {e}\n")),
        };
        let bound = match pair[1].parse::<i64>() {
            Ok(b) if b >= 1 => b,
            _ => return CliOutput::usage(format!("verify --exhaustive: bound must be a positive integer, got `{}`\n", pair[1])),
        };
        instances.push((lambda, bound));
    }
    if format == OutputFormat::Csv {
        return CliOutput::usage("verify: nested reports support only --format json or plain\n".to_string());
    }

    let grid = GridSpec::default_grid(seed, samples);
    let lemma1 = verify_lemma1(&grid);
    let theorems = verify_theorems(&grid);
    let exhaustive: Vec<(Rational, i64, VerifyReport)> = instances
        .into_iter()
        .map(|(l, b)| {
            let r = verify_small_instance_exhaustive(&l, b);
            (l, b, r)
        })
        .collect();
    let passed = lemma1.passed() && theorems.passed() && exhaustive.iter().all(|(_, _, r)| r.passed());
    let elapsed = lemma1.timing + theorems.timing + exhaustive.iter().map(|(_, _, r)| r.timing).sum();

    let stdout = match format {
        OutputFormat::Json => {
            let value = json!({
                "passed": passed,
                "seed": seed,
                "samples": samples,
                "lemma1": lemma1.to_json(),
                "theorems": theorems.to_json(),
                "exhaustive": exhaustive.iter().map(|(l, b, r)| json!({
                    "lambda": l.to_string(),
                    "bound": b,
                    "report": r.to_json(),
                })).collect::<Vec<_>>(),
            });
            to_json_line(&value)
        }
        _ => {
            let mut out = summary_line("lemma1", &lemma1) + &summary_line("theorems", &theorems);
            for (l, b, r) in &exhaustive {
                out += &summary_line(&format!("exhaustive lambda={l} bound={b}"), r);
            }
            out += if passed { "overall: PASS\n" } else { "overall: FAIL\n" };
            out
        }
    };
    CliOutput {
        status: if passed { 0 } else { 1 },
        stdout,
        stderr: format!("elapsed: {} ms\n", elapsed.as_millis()),
    }
}

pub fn execute(cli: Cli) -> CliOutput {
    let format = cli.format;
    match cli.command {
        Command::FixedPoints { lambda } => cmd_fixed_points(&lambda, format),
        Command::Classify { lambda } => cmd_classify(&lambda, format),
        Command::Basins { lambda } => cmd_basins(&lambda, format),
        Command::Predict { lambda, x0 } => behavior_output(&lambda, &x0, &predict_limit(&lambda, &x0), format),
        Command::Orbit { lambda, x0, max_steps } => cmd_orbit(&lambda, &x0, max_steps, format),
        Command::Omega { lambda, x0 } => match omega_limit(&lambda, &x0) {
            Ok(b) => behavior_output(&lambda, &x0, &b, format),
            Err(e) => CliOutput { status: 1, stdout: String::new(), stderr: format!("{e}\n") },
        },
        Command::Cobweb { lambda, x0, n } => cmd_cobweb(&lambda, &x0, n, format),
        Command::Scan { from, to, den } => cmd_scan(&from, &to, den, format),
        Command::Verify { seed, samples, exhaustive } => cmd_verify(seed, samples, &exhaustive, format),
    }
}

/// Parses `argv` (program name first) and runs the selected subcommand.
pub fn run<I, T>(argv: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(argv) {
        Ok(cli) => execute(cli),
        Err(e) => {
            let rendered = e.render().to_string();
            if e.use_stderr() {
                CliOutput::usage(rendered)
            } else {
                // --help and --version
                CliOutput::ok(rendered)
            }
        }
    }
}
