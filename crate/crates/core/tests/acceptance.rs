//! Acceptance criteria, one test per criterion. Each prints a single
//! `criterion N: PASS|FAIL ...` line (run with `--nocapture` to see them).
//!
//! Oracles here use plain `i128` floor division (`div_euclid` with a
//! positive divisor) so they do not share the library's arithmetic path.

use std::process::Command;
use std::time::{Duration, Instant};

use floordyn::analysis::{basin_decomposition, classify_lambda, fixed_points, predict_limit, FixedPointSet, LambdaRegion};
use floordyn::orbit::{omega_limit, simulate_orbit, default_max_steps, CertificateKind, Classification};
use floordyn::verify::{piece_samples, random_lambdas, random_rationals, verify_small_instance_exhaustive, Family};
use floordyn::{Integer, LimitBehavior, Rational, Sign};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x00f1_00d5;

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

fn parts(x: &Rational) -> (i128, i128) {
    (
        i128::try_from(x.numer()).expect("fits i128"),
        i128::try_from(x.denom()).expect("fits i128"),
    )
}

/// floor(lambda * x) for rational x, in i128.
fn oracle_apply(lambda: &Rational, x: &Rational) -> i128 {
    let (lp, lq) = parts(lambda);
    let (xp, xq) = parts(x);
    (lp * xp).div_euclid(lq * xq)
}

fn oracle_step(lambda: &Rational, v: i128) -> i128 {
    let (lp, lq) = parts(lambda);
    (lp * v).div_euclid(lq)
}

fn report(n: u32, ok: bool, detail: String) {
    println!("criterion {n}: {} {detail}", if ok { "PASS" } else { "FAIL" });
}

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ tag)
}

#[test]
fn criterion_1_lemma1_equivalence() {
    let start = Instant::now();
    let mut lambdas: Vec<Rational> = ["-2", "-1", "-1/2", "0", "1/2", "2/3", "3/4", "4/5", "1", "6/5", "5/4", "4/3", "3/2", "2", "7"]
        .iter()
        .map(|s| q(s))
        .collect();
    let mut r = rng(1);
    for family in Family::ALL {
        lambdas.extend(random_lambdas(&mut r, family, 100));
    }

    let mut mismatches = Vec::new();
    for lambda in &lambdas {
        let region = classify_lambda(lambda);
        let ok = match fixed_points(lambda) {
            FixedPointSet::AllIntegers => (-1000..=1000i128).all(|x| oracle_step(lambda, x) == x),
            FixedPointSet::Finite(points) => {
                let m = region.index().map_or(0, |m| i128::try_from(m).unwrap());
                let brute: Vec<Integer> = (-(m + 50)..=(m + 50))
                    .filter(|&x| oracle_step(lambda, x) == x)
                    .map(Integer::from)
                    .collect();
                points == brute
            }
        };
        if !ok {
            mismatches.push(lambda.clone());
        }
    }
    let elapsed = start.elapsed();
    let ok = mismatches.is_empty() && elapsed < Duration::from_secs(5);
    report(1, ok, format!("lambdas={} mismatches={:?} elapsed={elapsed:?}", lambdas.len(), mismatches));
    assert!(ok);
}

#[test]
fn criterion_2_region_boundaries() {
    let mut failures = Vec::new();
    for m in 1..=8i64 {
        let lower = Rational::new(m, m + 1).unwrap();
        if classify_lambda(&lower) != (LambdaRegion::PosUnit { m: Integer::from(m) }) {
            failures.push(lower);
        }
        let upper = Rational::new(m + 1, m).unwrap();
        if classify_lambda(&upper) != (LambdaRegion::AboveOne { m: Integer::from(m) }) {
            failures.push(upper);
        }
        if m >= 2 {
            let open_end = Rational::new(m, m - 1).unwrap();
            if classify_lambda(&open_end) != (LambdaRegion::AboveOne { m: Integer::from(m - 1) }) {
                failures.push(open_end);
            }
        }
    }
    let ok = failures.is_empty();
    report(2, ok, format!("failures={failures:?}"));
    assert!(ok);
}

/// Mixed-sign starts with `|x0| <= 10^6`: half integers, half rationals with denominators up to 1000.
fn mixed_starts(r: &mut ChaCha8Rng, count: usize) -> Vec<Rational> {
    let mut xs = random_rationals(r, count / 2, 1_000_000, 1);
    xs.extend(random_rationals(r, count - count / 2, 1_000_000, 1000));
    for (i, x) in xs.iter_mut().enumerate() {
        let want_negative = i % 2 == 1;
        if x.is_negative() != want_negative {
            *x = -&*x;
        }
    }
    xs
}

#[test]
fn criterion_3_negative_unit_converges_fast() {
    let start = Instant::now();
    let mut r = rng(3);
    let lambdas = random_lambdas(&mut r, Family::NegOpenUnit, 50);
    let mut not_zero = Vec::new();
    let mut over_bound = 0usize;
    let mut worst: Option<(Rational, Rational, usize, i128)> = None;
    let mut total = 0usize;
    for lambda in &lambdas {
        for x0 in mixed_starts(&mut r, 100) {
            total += 1;
            let orbit = simulate_orbit(lambda, &x0, default_max_steps(&x0)).unwrap();
            if orbit.classification != Classification::Limit(LimitBehavior::Fixed(Integer::from(0))) {
                not_zero.push((lambda.clone(), x0.clone()));
            }
            let bound = oracle_apply(lambda, &x0).abs() + 3;
            let steps = orbit.steps();
            if steps as i128 > bound {
                over_bound += 1;
                if worst.as_ref().is_none_or(|w| steps as i128 - bound > w.2 as i128 - w.3) {
                    worst = Some((lambda.clone(), x0.clone(), steps, bound));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = not_zero.is_empty() && over_bound == 0 && elapsed < Duration::from_secs(10);
    report(
        3,
        ok,
        format!(
            "orbits={total} not_fixed_zero={} over_step_bound={over_bound} worst={:?} elapsed={elapsed:?}",
            not_zero.len(),
            worst
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_4_minus_one_period_two() {
    let minus_one = q("-1");
    let mut r = rng(4);
    let xs = random_rationals(&mut r, 1000, 1_000_000, 1000);
    let mut failures = Vec::new();
    for x in &xs {
        let f1 = oracle_apply(&minus_one, x);
        let f2 = oracle_step(&minus_one, f1);
        let f3 = oracle_step(&minus_one, f2);
        let orbit = simulate_orbit(&minus_one, x, default_max_steps(x)).unwrap();
        let class_ok = match &orbit.classification {
            Classification::Limit(LimitBehavior::Fixed(k)) => *k == Integer::from(0),
            Classification::Limit(LimitBehavior::TwoCycle(a, b)) => *a == -b,
            _ => false,
        };
        if f3 != f1 || !class_ok {
            failures.push(x.clone());
        }
    }
    let ok = failures.is_empty();
    report(4, ok, format!("samples={} failures={failures:?}", xs.len()));
    assert!(ok);
}

#[test]
fn criterion_5_below_minus_one_alternates() {
    let mut r = rng(5);
    let lambdas = random_lambdas(&mut r, Family::BelowMinusOne, 50);
    let mut failures = Vec::new();
    let mut checked = 0usize;
    for lambda in &lambdas {
        let inv = lambda.recip().unwrap();
        let tiny = Rational::new(1, lambda.numer() * lambda.denom() * 7).unwrap().abs();
        let inside = [Rational::zero(), -&tiny, &inv + &tiny, inv.midpoint(&Rational::zero())];
        let outside = [
            inv.clone(),
            &inv - &tiny,
            &inv - &q("1"),
            q("-1000001/3"),
            tiny.clone(),
            q("1/3"),
            q("1"),
            q("999999"),
        ];
        for x0 in &inside {
            checked += 1;
            let orbit = simulate_orbit(lambda, x0, default_max_steps(x0)).unwrap();
            let ok = oracle_apply(lambda, x0) == 0
                && orbit.prefix[0] == Integer::from(0)
                && orbit.classification == Classification::Limit(LimitBehavior::Fixed(Integer::from(0)));
            if !ok {
                failures.push((lambda.clone(), x0.clone()));
            }
        }
        for x0 in &outside {
            checked += 1;
            let orbit = simulate_orbit(lambda, x0, default_max_steps(x0)).unwrap();
            let expected_even = if x0.is_positive() { Sign::Plus } else { Sign::Minus };
            // Independent tail check: iterate further and look at the signs of even iterates.
            let mut v = oracle_apply(lambda, x0);
            let mut tail_ok = true;
            let mut prev_abs = v.abs();
            for n in 1..=12usize {
                let even_positive = v > 0;
                if n % 2 == 0 && even_positive != (expected_even == Sign::Plus) {
                    tail_ok = false;
                }
                if n >= 2 && v.abs() < prev_abs {
                    tail_ok = false;
                }
                prev_abs = v.abs();
                v = oracle_step(lambda, v);
            }
            let cert_ok = matches!(
                orbit.certificate.as_ref().map(|c| &c.kind),
                Some(CertificateKind::Alternating { .. })
            ) && orbit.steps() <= 2;
            let class_ok =
                orbit.classification == Classification::Limit(LimitBehavior::AlternatingInfinity { even_sign: expected_even });
            if !(cert_ok && class_ok && tail_ok) {
                failures.push((lambda.clone(), x0.clone()));
            }
        }
    }
    let ok = failures.is_empty();
    report(5, ok, format!("lambdas={} samples={checked} failures={failures:?}", lambdas.len()));
    assert!(ok);
}

/// Independent partition check: ascending, joined end to end, with
/// exactly one side closed at each finite junction.
fn partition_ok(lambda: &Rational) -> bool {
    let d = basin_decomposition(lambda);
    let pieces = &d.pieces;
    if pieces.is_empty() || pieces[0].interval.lower.is_some() || pieces.last().unwrap().interval.upper.is_some() {
        return false;
    }
    pieces.windows(2).all(|w| {
        let (a, b) = (&w[0].interval, &w[1].interval);
        match (&a.upper, &b.lower) {
            (Some(u), Some(l)) => u == l && (a.upper_closed ^ b.lower_closed),
            _ => false,
        }
    }) && pieces.iter().all(|p| match (&p.interval.lower, &p.interval.upper) {
        (Some(l), Some(u)) => l < u,
        _ => true,
    })
}

#[test]
fn criterion_6_basins_match_simulation() {
    let start = Instant::now();
    let mut r = rng(6);
    let mut lambdas = random_lambdas(&mut r, Family::PosUnit, 50);
    lambdas.extend(random_lambdas(&mut r, Family::AboveOne, 50));
    let mut mismatches = Vec::new();
    let mut bad_partitions = Vec::new();
    let mut samples = 0usize;
    let mut thin_pieces = 0usize;
    for lambda in &lambdas {
        if !partition_ok(lambda) {
            bad_partitions.push(lambda.clone());
        }
        for piece in &basin_decomposition(lambda).pieces {
            let points = piece_samples(piece, 5);
            if points.len() < 5
                || [&piece.interval.lower, &piece.interval.upper]
                    .into_iter()
                    .flatten()
                    .any(|e| !points.contains(e))
            {
                thin_pieces += 1;
            }
            for x0 in points {
                samples += 1;
                let predicted = predict_limit(lambda, &x0);
                match omega_limit(lambda, &x0) {
                    Ok(observed) if observed == predicted => {}
                    other => mismatches.push((lambda.clone(), x0.clone(), predicted, format!("{other:?}"))),
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = mismatches.is_empty() && bad_partitions.is_empty() && thin_pieces == 0 && elapsed < Duration::from_secs(30);
    report(
        6,
        ok,
        format!(
            "lambdas={} samples={samples} mismatches={} bad_partitions={} thin_pieces={thin_pieces} elapsed={elapsed:?}",
            lambdas.len(),
            mismatches.len(),
            bad_partitions.len()
        ),
    );
    assert!(ok, "{mismatches:?} {bad_partitions:?}");
}

#[test]
fn criterion_7_exhaustive_small_instances() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut cases = 0usize;
    for l in ["-2/3", "-1", "-3/2", "1/2", "1", "3/2"] {
        let report = verify_small_instance_exhaustive(&q(l), 30);
        cases += report.cases_run;
        let periods_ok = report.eventual_periods.keys().all(|&p| p == 1 || p == 2);
        if !report.passed() || !periods_ok {
            failures.push(l);
        }
    }
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed < Duration::from_secs(5);
    report(7, ok, format!("cases={cases} failures={failures:?} elapsed={elapsed:?}"));
    assert!(ok);
}

#[test]
fn criterion_8_verify_exits_zero_without_exhaustion() {
    let out = Command::new(env!("CARGO_BIN_EXE_floordyn"))
        .args(["verify", "--format", "json"])
        .output()
        .expect("run floordyn verify");
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).expect("verify emits JSON");
    let mut exhausted = json["lemma1"]["exhausted"].as_u64().unwrap() + json["theorems"]["exhausted"].as_u64().unwrap();
    for e in json["exhaustive"].as_array().unwrap() {
        exhausted += e["report"]["exhausted"].as_u64().unwrap();
    }
    let ok = out.status.code() == Some(0) && json["passed"] == serde_json::Value::Bool(true) && exhausted == 0;
    report(8, ok, format!("exit={:?} exhausted={exhausted}", out.status.code()));
    assert!(ok);
}
