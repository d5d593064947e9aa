//! Cross-checks between the closed-form answers in [`crate::analysis`] and
//! brute-force iteration in [`crate::orbit`].
//!
//! Each suite takes a [`GridSpec`] and returns a [`VerifyReport`]. Grid
//! points are evaluated in parallel; the per-case results are merged and
//! sorted before the report is returned, so a fixed spec always yields the
//! same report (timing aside).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::analysis::{
    basin_decomposition, classify_lambda, fixed_points, in_above_one, in_pos_unit, predict_limit,
    BasinDecomposition, BasinPiece, FixedPointSet, LambdaRegion, LimitBehavior,
    PieceBehavior, Sign,
};
use crate::orbit::{apply_map, conjectured_step_bound, default_max_steps, simulate_orbit, Classification};
use crate::rational::{Integer, Rational};

/// Parameter families that random lambdas are drawn from. The unbounded
/// families are truncated to `(-10, -1)` and `(1, 10)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    BelowMinusOne,
    NegOpenUnit,
    PosUnit,
    AboveOne,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::BelowMinusOne, Family::NegOpenUnit, Family::PosUnit, Family::AboveOne];

    /// Open interval `(lo, hi)` sampled for this family.
    pub fn range(self) -> (i64, i64) {
        match self {
            Family::BelowMinusOne => (-10, -1),
            Family::NegOpenUnit => (-1, 0),
            Family::PosUnit => (0, 1),
            Family::AboveOne => (1, 10),
        }
    }
}

/// Draws `count` rationals `p/q` with `q <= 1000`, uniform in `q` and then
/// uniform over the numerators that put `p/q` strictly inside the family's range.
pub fn random_lambdas(rng: &mut impl Rng, family: Family, count: usize) -> Vec<Rational> {
    let (lo, hi) = family.range();
    (0..count)
        .map(|_| loop {
            let q: i64 = rng.gen_range(1..=1000);
            let (p_lo, p_hi) = (lo * q + 1, hi * q - 1);
            // Empty for q = 1 on a unit-width range; draw again.
            if p_lo <= p_hi {
                break Rational::new(rng.gen_range(p_lo..=p_hi), q).unwrap();
            }
        })
        .collect()
}

/// `count` rationals with `|p| <= max_abs_numer` and `1 <= q <= max_denom`.
pub fn random_rationals(rng: &mut impl Rng, count: usize, max_abs_numer: i64, max_denom: i64) -> Vec<Rational> {
    (0..count)
        .map(|_| {
            let p = rng.gen_range(-max_abs_numer..=max_abs_numer);
            let q = rng.gen_range(1..=max_denom);
            Rational::new(p, q).unwrap()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSpec {
    pub lambda_samples: Vec<Rational>,
    /// Number of seeded random lambdas drawn from each [`Family`].
    pub random_per_region: usize,
    pub x0_samples_per_piece: usize,
    /// Starting points checked for every lambda, in addition to the per-piece samples.
    pub extra_x0: Vec<Rational>,
    pub seed: u64,
}

fn lit(text: &str) -> Rational {
    text.parse().expect("literal")
}

impl GridSpec {
    /// Every region boundary `m/(m+1)` and `(m+1)/m` for `m = 1..=8`, the
    /// special values `-1, 0, 1, 2`, and an interior point of each region.
    pub fn default_grid(seed: u64, random_per_region: usize) -> Self {
        let mut lambdas: Vec<Rational> = [
            "-7", "-2", "-3/2", "-1", "-2/3", "-1/2", "0", "1/2", "2/3", "3/4", "4/5", "5/7", "1", "6/5", "5/4",
            "4/3", "3/2", "2", "7", "999/1000", "1001/1000", "-999/1000", "-1001/1000",
        ]
        .iter()
        .map(|s| lit(s))
        .collect();
        for m in 1..=8i64 {
            lambdas.push(Rational::new(m, m + 1).unwrap());
            lambdas.push(Rational::new(m + 1, m).unwrap());
        }
        GridSpec {
            lambda_samples: lambdas,
            random_per_region,
            x0_samples_per_piece: 7,
            extra_x0: ["0", "7/10", "-7/10", "1", "-1", "13/3", "-13/3"].iter().map(|s| lit(s)).collect(),
            seed,
        }
    }

    /// Explicit lambdas followed by the seeded random draws, sorted and deduplicated.
    pub fn lambdas(&self) -> Vec<Rational> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut all: BTreeSet<Rational> = self.lambda_samples.iter().cloned().collect();
        for family in Family::ALL {
            all.extend(random_lambdas(&mut rng, family, self.random_per_region));
        }
        all.into_iter().collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MismatchSource {
    /// Simulated orbit disagrees with `predict_limit`.
    Simulation,
    /// The basin piece containing the point carries a different label than `predict_limit`.
    BasinLabel,
    /// Visited-set detector disagrees with `predict_limit`.
    Exhaustive,
}

impl MismatchSource {
    pub fn tag(self) -> &'static str {
        match self {
            MismatchSource::Simulation => "simulation",
            MismatchSource::BasinLabel => "basin-label",
            MismatchSource::Exhaustive => "exhaustive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub source: MismatchSource,
    pub lambda: Rational,
    pub x0: Rational,
    pub predicted: LimitBehavior,
    pub observed: Classification,
}

/// One orbit measured against the conjectured `|floor(lambda * x0)| + 3` step bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepBoundSample {
    pub lambda: Rational,
    pub x0: Rational,
    pub steps: usize,
    pub bound: Integer,
}

impl StepBoundSample {
    fn excess(&self) -> Integer {
        Integer::from(self.steps) - &self.bound
    }
}

/// Diagnostic only; does not affect [`VerifyReport::passed`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StepBoundStats {
    pub checked: usize,
    pub exceeded: usize,
    pub worst: Option<StepBoundSample>,
}

impl StepBoundStats {
    fn record(&mut self, sample: StepBoundSample) {
        self.checked += 1;
        if sample.excess().is_positive() {
            self.exceeded += 1;
        }
        self.offer_worst(sample);
    }

    fn offer_worst(&mut self, sample: StepBoundSample) {
        let better = match &self.worst {
            None => true,
            Some(w) => {
                let (a, b) = (sample.excess(), w.excess());
                a > b || (a == b && (&sample.lambda, &sample.x0) < (&w.lambda, &w.x0))
            }
        };
        if better {
            self.worst = Some(sample);
        }
    }

    fn merge(&mut self, other: StepBoundStats) {
        self.checked += other.checked;
        self.exceeded += other.exceeded;
        if let Some(w) = other.worst {
            self.offer_worst(w);
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub cases_run: usize,
    pub mismatches: Vec<Mismatch>,
    pub fixed_point_failures: Vec<Rational>,
    pub region_failures: Vec<Rational>,
    pub partition_failures: Vec<Rational>,
    /// `(lambda, x)` pairs at `lambda = -1` with `f^3(x) != f(x)`.
    pub identity_failures: Vec<(Rational, Rational)>,
    /// `(lambda, x0, period)` for eventual periods other than 1 or 2.
    pub period_failures: Vec<(Rational, Rational, usize)>,
    /// Orbits that ended `Exhausted`; each one also appears in `mismatches`.
    pub exhausted: usize,
    /// Histogram of eventual periods found by the visited-set detector; escaping orbits are not counted.
    pub eventual_periods: BTreeMap<usize, usize>,
    pub step_bound: StepBoundStats,
    pub timing: Duration,
}

// Timing is excluded so that reports from identical specs compare equal.
impl PartialEq for VerifyReport {
    fn eq(&self, other: &Self) -> bool {
        self.to_json() == other.to_json()
    }
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
            && self.fixed_point_failures.is_empty()
            && self.region_failures.is_empty()
            && self.partition_failures.is_empty()
            && self.identity_failures.is_empty()
            && self.period_failures.is_empty()
            && self.exhausted == 0
    }

    pub fn merge(&mut self, other: VerifyReport) {
        self.cases_run += other.cases_run;
        self.mismatches.extend(other.mismatches);
        self.fixed_point_failures.extend(other.fixed_point_failures);
        self.region_failures.extend(other.region_failures);
        self.partition_failures.extend(other.partition_failures);
        self.identity_failures.extend(other.identity_failures);
        self.period_failures.extend(other.period_failures);
        self.exhausted += other.exhausted;
        for (period, count) in other.eventual_periods {
            *self.eventual_periods.entry(period).or_default() += count;
        }
        self.step_bound.merge(other.step_bound);
    }

    /// Puts every list in canonical order.
    fn canonicalize(&mut self) {
        self.mismatches.sort_by(|a, b| {
            (a.source, &a.lambda, &a.x0, a.predicted.token(), a.observed.token()).cmp(&(
                b.source,
                &b.lambda,
                &b.x0,
                b.predicted.token(),
                b.observed.token(),
            ))
        });
        for list in [&mut self.fixed_point_failures, &mut self.region_failures, &mut self.partition_failures] {
            list.sort();
            list.dedup();
        }
        self.identity_failures.sort();
        self.period_failures.sort();
    }

    /// Deterministic JSON rendering; timing is omitted.
    pub fn to_json(&self) -> Value {
        let rats = |v: &[Rational]| v.iter().map(|q| q.to_string()).collect::<Vec<_>>();
        json!({
            "passed": self.passed(),
            "cases_run": self.cases_run,
            "mismatches": self.mismatches.iter().map(|m| json!({
                "source": m.source.tag(),
                "lambda": m.lambda.to_string(),
                "x0": m.x0.to_string(),
                "predicted": m.predicted.token(),
                "observed": m.observed.token(),
            })).collect::<Vec<_>>(),
            "fixed_point_failures": rats(&self.fixed_point_failures),
            "region_failures": rats(&self.region_failures),
            "partition_failures": rats(&self.partition_failures),
            "identity_failures": self.identity_failures.iter()
                .map(|(l, x)| json!({"lambda": l.to_string(), "x": x.to_string()}))
                .collect::<Vec<_>>(),
            "period_failures": self.period_failures.iter()
                .map(|(l, x, p)| json!({"lambda": l.to_string(), "x0": x.to_string(), "period": p}))
                .collect::<Vec<_>>(),
            "exhausted": self.exhausted,
            "eventual_periods": self.eventual_periods.iter()
                .map(|(p, c)| (p.to_string(), json!(c)))
                .collect::<serde_json::Map<_, _>>(),
            "step_bound": {
                "checked": self.step_bound.checked,
                "exceeded": self.step_bound.exceeded,
                "worst": self.step_bound.worst.as_ref().map(|w| json!({
                    "lambda": w.lambda.to_string(),
                    "x0": w.x0.to_string(),
                    "steps": w.steps,
                    "bound": w.bound.to_string(),
                })),
            },
        })
    }
}

fn run_parallel<F>(lambdas: Vec<Rational>, per_lambda: F) -> VerifyReport
where
    F: Fn(&Rational) -> VerifyReport + Sync + Send,
{
    let start = Instant::now();
    let mut report = lambdas
        .par_iter()
        .map(per_lambda)
        .reduce(VerifyReport::default, |mut a, b| {
            a.merge(b);
            a
        });
    report.canonicalize();
    report.timing = start.elapsed();
    report
}

/// Brute-force fixed points `{x : |x| <= bound, floor(lambda*x) = x}`.
pub fn brute_force_fixed_points(lambda: &Rational, bound: i64) -> Vec<Integer> {
    (-bound..=bound)
        .map(Integer::from)
        .filter(|x| apply_map(lambda, &Rational::from(x)) == *x)
        .collect()
}

fn region_is_consistent(lambda: &Rational, region: &LambdaRegion) -> bool {
    let one = Rational::one();
    match region {
        LambdaRegion::BelowMinusOne => *lambda < -&one,
        LambdaRegion::MinusOne => *lambda == -&one,
        LambdaRegion::NegOpenUnit => *lambda > -&one && lambda.is_negative(),
        LambdaRegion::Zero => lambda.is_zero(),
        LambdaRegion::PosUnit { m } => in_pos_unit(lambda, m),
        LambdaRegion::One => *lambda == one,
        LambdaRegion::AboveOne { m } => in_above_one(lambda, m),
    }
}

fn check_lemma1(lambda: &Rational) -> VerifyReport {
    let mut report = VerifyReport { cases_run: 1, ..Default::default() };
    let region = classify_lambda(lambda);
    if !region_is_consistent(lambda, &region) {
        report.region_failures.push(lambda.clone());
    }
    let ok = match fixed_points(lambda) {
        FixedPointSet::AllIntegers => brute_force_fixed_points(lambda, 1000).len() == 2001,
        FixedPointSet::Finite(points) => {
            let m = region.index().map_or(0, |m| i64::try_from(m).unwrap_or(i64::MAX - 50));
            points == brute_force_fixed_points(lambda, m + 50)
                && points.iter().all(|k| apply_map(lambda, &Rational::from(k)) == *k)
        }
    };
    if !ok {
        report.fixed_point_failures.push(lambda.clone());
    }
    report
}

/// Fixed-point sets against a direct scan, for every lambda in the grid.
pub fn verify_lemma1(spec: &GridSpec) -> VerifyReport {
    run_parallel(spec.lambdas(), check_lemma1)
}

/// Shift used to step just inside a piece from a finite endpoint `e`:
/// `1/(7 * denom(e))`, shrunk to a seventh of the piece width when the piece is narrower.
fn inward_offset(endpoint: &Rational, width: Option<&Rational>) -> Rational {
    let offset = Rational::new(1, endpoint.denom() * 7).unwrap();
    match width {
        Some(w) if offset >= *w => w.checked_div(&Rational::from(7)).unwrap(),
        _ => offset,
    }
}

/// At least `count` points for `piece`: finite endpoints, the midpoint,
/// near-boundary offsets, and far or deep-interior points.
pub fn piece_samples(piece: &BasinPiece, count: usize) -> Vec<Rational> {
    let iv = &piece.interval;
    let mut out: BTreeSet<Rational> = BTreeSet::new();
    let far = |base: &Rational, toward_plus: bool, out: &mut BTreeSet<Rational>| {
        for (k, mag) in ["1", "1000", "1000000", "7/3", "10", "100", "100000", "31/7"].iter().enumerate() {
            if out.len() >= count && k >= 3 {
                break;
            }
            let d = lit(mag);
            out.insert(if toward_plus { base + &d } else { base - &d });
        }
    };
    match (&iv.lower, &iv.upper) {
        (Some(l), Some(u)) => {
            let width = u - l;
            out.insert(l.clone());
            out.insert(u.clone());
            out.insert(l.midpoint(u));
            out.insert(l + &inward_offset(l, Some(&width)));
            out.insert(u - &inward_offset(u, Some(&width)));
            let mut j = 1i64;
            while out.len() < count {
                // Deep interior points l + width * j / (j + 2).
                let t = Rational::new(j, j + 2).unwrap();
                out.insert(l + &(&width * &t));
                j += 1;
            }
        }
        (None, Some(u)) => {
            out.insert(u.clone());
            out.insert(u - &inward_offset(u, None));
            far(u, false, &mut out);
        }
        (Some(l), None) => {
            out.insert(l.clone());
            out.insert(l + &inward_offset(l, None));
            far(l, true, &mut out);
        }
        (None, None) => {
            for s in ["0", "1/3", "-1/3", "5/2", "-5/2", "1000", "-1000", "1000001/7", "-1000001/7"] {
                out.insert(lit(s));
            }
        }
    }
    out.into_iter().collect()
}

/// Finite endpoints a correct decomposition may use: `k/lambda` for the
/// region's labels `k`, plus `1/lambda` and `0` for `lambda < -1`.
fn endpoint_allowed(d: &BasinDecomposition, e: &Rational) -> bool {
    let lambda = &d.lambda;
    match &d.region {
        LambdaRegion::BelowMinusOne => *e == lambda.recip().unwrap() || e.is_zero(),
        LambdaRegion::PosUnit { m } | LambdaRegion::AboveOne { m } => {
            // e = k / lambda with |k| <= m
            let k = e * lambda;
            k.is_integer() && k.numer().abs() <= *m
        }
        _ => false,
    }
}

fn check_partition(d: &BasinDecomposition) -> bool {
    d.validate().is_ok()
        && d.pieces.iter().all(|p| {
            [&p.interval.lower, &p.interval.upper]
                .into_iter()
                .flatten()
                .all(|e| endpoint_allowed(d, e))
        })
}

fn compare_point(lambda: &Rational, x0: &Rational, d: &BasinDecomposition, report: &mut VerifyReport) {
    report.cases_run += 1;
    let predicted = predict_limit(lambda, x0);
    let orbit = simulate_orbit(lambda, x0, default_max_steps(x0)).expect("budget is positive");
    if orbit.classification == Classification::Exhausted {
        report.exhausted += 1;
    }
    if orbit.classification.limit() != Some(&predicted) {
        report.mismatches.push(Mismatch {
            source: MismatchSource::Simulation,
            lambda: lambda.clone(),
            x0: x0.clone(),
            predicted: predicted.clone(),
            observed: orbit.classification.clone(),
        });
    }
    if let Some(piece) = d.locate(x0) {
        if let PieceBehavior::Limit(label) = &piece.behavior {
            if *label != predicted {
                report.mismatches.push(Mismatch {
                    source: MismatchSource::BasinLabel,
                    lambda: lambda.clone(),
                    x0: x0.clone(),
                    predicted: predicted.clone(),
                    observed: Classification::Limit(label.clone()),
                });
            }
        }
    }
    if lambda.abs() <= Rational::one() {
        report.step_bound.record(StepBoundSample {
            lambda: lambda.clone(),
            x0: x0.clone(),
            steps: orbit.steps(),
            bound: conjectured_step_bound(lambda, x0),
        });
    }
}

/// `f^3(x) == f(x)` at `lambda = -1` for `count` seeded rationals.
pub fn minus_one_identity_failures(seed: u64, count: usize) -> Vec<Rational> {
    let minus_one = -Rational::one();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_f3f1);
    random_rationals(&mut rng, count, 1_000_000, 1000)
        .into_iter()
        .filter(|x| {
            let f1 = apply_map(&minus_one, x);
            let f3 = minus_one.floor_mul_int(&minus_one.floor_mul_int(&f1));
            f3 != f1
        })
        .collect()
}

fn check_theorems(lambda: &Rational, spec: &GridSpec) -> VerifyReport {
    let mut report = VerifyReport::default();
    let d = basin_decomposition(lambda);
    report.cases_run += 1;
    if !check_partition(&d) {
        report.partition_failures.push(lambda.clone());
    }
    let mut points: BTreeSet<Rational> = spec.extra_x0.iter().cloned().collect();
    for piece in &d.pieces {
        points.extend(piece_samples(piece, spec.x0_samples_per_piece));
    }
    if d.pieces.iter().any(|p| p.behavior == PieceBehavior::PerPoint) {
        // Per-cell behaviour: probe integers, their neighbours, and random points.
        for k in -6i64..=6 {
            let k = Rational::from(k);
            points.insert(k.clone());
            points.insert(&k + &lit("1/2"));
            points.insert(&k - &lit("1/7"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        points.extend(random_rationals(&mut rng, 50, 10_000, 100));
    }
    for x0 in &points {
        compare_point(lambda, x0, &d, &mut report);
    }
    if *lambda == -Rational::one() {
        report.cases_run += 1;
        report.identity_failures.extend(
            minus_one_identity_failures(spec.seed, 1000)
                .into_iter()
                .map(|x| (lambda.clone(), x)),
        );
    }
    report
}

/// Limits from simulation against the closed-form prediction on every
/// basin piece, plus the partition invariants and the `lambda = -1` identity.
pub fn verify_theorems(spec: &GridSpec) -> VerifyReport {
    run_parallel(spec.lambdas(), |lambda| check_theorems(lambda, spec))
}

/// Outcome of the visited-set detector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Eventual {
    /// The orbit revisited a value; `cycle` lists one full period in orbit order.
    Periodic { cycle: Vec<Integer> },
    /// No revisit before the magnitude cap; `tail` holds the last iterates and `tail_start` the index `n` of `tail[0] = f^n(x0)`.
    Escaped { tail: Vec<Integer>, tail_start: usize },
    /// Neither within the step cap.
    Undecided,
}

const ESCAPE_DIGITS: usize = 30;
const DETECTOR_STEP_CAP: usize = 100_000;

/// Visited-set orbit detector. Records every value seen, so it finds cycles
/// of any period.
pub fn detect_eventual(lambda: &Rational, x0: &Rational) -> Eventual {
    let mut seen: HashMap<Integer, usize> = HashMap::new();
    let mut seq: Vec<Integer> = Vec::new();
    let mut v = apply_map(lambda, x0);
    while seq.len() < DETECTOR_STEP_CAP {
        if let Some(&i) = seen.get(&v) {
            return Eventual::Periodic { cycle: seq[i..].to_vec() };
        }
        if v.abs().to_string().len() > ESCAPE_DIGITS && seq.len() >= 8 {
            let start = seq.len() - 8;
            return Eventual::Escaped { tail: seq[start..].to_vec(), tail_start: start + 1 };
        }
        seen.insert(v.clone(), seq.len());
        seq.push(v.clone());
        v = lambda.floor_mul_int(&v);
    }
    Eventual::Undecided
}

/// Reads a divergence direction off an escaped tail: monotone in one
/// direction, or strictly growing in absolute value with alternating signs.
pub fn escaped_trend(tail: &[Integer], tail_start: usize) -> Option<LimitBehavior> {
    let increasing = tail.windows(2).all(|w| w[1] > w[0]);
    let decreasing = tail.windows(2).all(|w| w[1] < w[0]);
    if increasing && tail.iter().all(|v| v.is_positive()) {
        return Some(LimitBehavior::PlusInfinity);
    }
    if decreasing && tail.iter().all(|v| v.is_negative()) {
        return Some(LimitBehavior::MinusInfinity);
    }
    let alternating = tail.windows(2).all(|w| w[0].is_positive() != w[1].is_positive() && !w[1].is_zero());
    let growing = tail.windows(2).all(|w| w[1].abs() >= w[0].abs());
    let grows_over_two = tail.windows(3).all(|w| w[2].abs() > w[0].abs());
    if alternating && growing && grows_over_two {
        let even_index = if tail_start.is_multiple_of(2) { 0 } else { 1 };
        let even_sign = if tail[even_index].is_positive() { Sign::Plus } else { Sign::Minus };
        return Some(LimitBehavior::AlternatingInfinity { even_sign });
    }
    None
}

/// Starting points `p/q` with `|p| <= bound` and `1 <= q <= 8`, deduplicated.
pub fn exhaustive_starts(bound: i64) -> Vec<Rational> {
    let set: BTreeSet<Rational> = (-bound..=bound)
        .flat_map(|p| (1..=8i64).map(move |q| Rational::new(p, q).unwrap()))
        .collect();
    set.into_iter().collect()
}

/// Runs the visited-set detector from every small start and checks that
/// each orbit ends in period 1 or 2 (or escapes) as `predict_limit` says.
pub fn verify_small_instance_exhaustive(lambda: &Rational, bound: i64) -> VerifyReport {
    let start = Instant::now();
    let starts = exhaustive_starts(bound.max(1));
    let mut report = starts
        .par_iter()
        .map(|x0| {
            let mut r = VerifyReport { cases_run: 1, ..Default::default() };
            let predicted = predict_limit(lambda, x0);
            let observed = match detect_eventual(lambda, x0) {
                Eventual::Periodic { cycle } => {
                    *r.eventual_periods.entry(cycle.len()).or_default() += 1;
                    match cycle.as_slice() {
                        [k] => Classification::Limit(LimitBehavior::Fixed(k.clone())),
                        [a, b] => Classification::Limit(LimitBehavior::two_cycle(a.clone(), b.clone())),
                        _ => {
                            r.period_failures.push((lambda.clone(), x0.clone(), cycle.len()));
                            Classification::Exhausted
                        }
                    }
                }
                Eventual::Escaped { tail, tail_start } => {
                    escaped_trend(&tail, tail_start).map_or(Classification::Exhausted, Classification::Limit)
                }
                Eventual::Undecided => Classification::Exhausted,
            };
            if observed.limit() != Some(&predicted) {
                r.mismatches.push(Mismatch {
                    source: MismatchSource::Exhaustive,
                    lambda: lambda.clone(),
                    x0: x0.clone(),
                    predicted,
                    observed,
                });
            }
            r
        })
        .reduce(VerifyReport::default, |mut a, b| {
            a.merge(b);
            a
        });
    report.canonicalize();
    report.timing = start.elapsed();
    report
}

/// Default exhaustive instances: one per behaviour class, with bound 30.
pub fn default_exhaustive_instances() -> Vec<(Rational, i64)> {
    ["-2/3", "-1", "-3/2", "1/2", "1", "3/2"].iter().map(|s| (lit(s), 30)).collect()
}
