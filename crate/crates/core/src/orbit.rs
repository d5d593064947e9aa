//! Exact forward orbits with certified terminal classification.
//!
//! A simulated orbit stops for one of three reasons: it hits a fixed point,
//! it closes a two-cycle, or one of its values satisfies a monotone-escape
//! inequality that proves divergence. Orbits are never labelled divergent
//! because their values grew large or the step budget ran out; running out
//! of budget is reported as [`Classification::Exhausted`].

use std::fmt;

use num_traits::{One, Signed, ToPrimitive};
use thiserror::Error;

use crate::analysis::{classify_lambda, LambdaRegion, LimitBehavior, Sign};
use crate::rational::{Integer, Rational};

/// `floor(lambda * x)`.
pub fn apply_map(lambda: &Rational, x: &Rational) -> Integer {
    (lambda * x).floor()
}

/// Iterates `f(x0), f^2(x0), ...` without end.
pub fn iterates<'a>(lambda: &'a Rational, x0: &Rational) -> impl Iterator<Item = Integer> + 'a {
    let first = apply_map(lambda, x0);
    std::iter::successors(Some(first), move |v| Some(lambda.floor_mul_int(v)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateKind {
    /// `witness >= m` in `AboveOne { m }`: every later iterate grows by at least one.
    PositiveRay { witness: Integer },
    /// Negative witness for `lambda > 1`: every later iterate drops by at least one.
    NegativeRay { witness: Integer },
    /// Positive witness `v` for `lambda < -1` with `f(v) <= -(v+1)` and `f^2(v) >= v+1`.
    Alternating { positive_witness: Integer },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivergenceCertificate {
    pub kind: CertificateKind,
    pub region: LambdaRegion,
}

impl DivergenceCertificate {
    pub fn witness(&self) -> &Integer {
        match &self.kind {
            CertificateKind::PositiveRay { witness }
            | CertificateKind::NegativeRay { witness }
            | CertificateKind::Alternating { positive_witness: witness } => witness,
        }
    }

    pub fn kind_tag(&self) -> &'static str {
        match self.kind {
            CertificateKind::PositiveRay { .. } => "positive-ray",
            CertificateKind::NegativeRay { .. } => "negative-ray",
            CertificateKind::Alternating { .. } => "alternating",
        }
    }

    /// Behaviour implied by the certificate when the witness is `f^n(x0)`.
    pub fn behavior_at(&self, n: usize) -> LimitBehavior {
        match self.kind {
            CertificateKind::PositiveRay { .. } => LimitBehavior::PlusInfinity,
            CertificateKind::NegativeRay { .. } => LimitBehavior::MinusInfinity,
            CertificateKind::Alternating { .. } => {
                // The witness is positive, so iterates with the witness's parity go to +inf.
                let even_sign = if n.is_multiple_of(2) { Sign::Plus } else { Sign::Minus };
                LimitBehavior::AlternatingInfinity { even_sign }
            }
        }
    }
}

impl fmt::Display for DivergenceCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}) in {}", self.kind_tag(), self.witness(), self.region)
    }
}

pub fn certify_divergence(lambda: &Rational, v: &Integer) -> Option<DivergenceCertificate> {
    certify_in_region(&classify_lambda(lambda), lambda, v)
}

fn certify_in_region(
    region: &LambdaRegion,
    lambda: &Rational,
    v: &Integer,
) -> Option<DivergenceCertificate> {
    let next = lambda.floor_mul_int(v);
    let kind = match region {
        LambdaRegion::AboveOne { m } if v >= m && next > *v => {
            CertificateKind::PositiveRay { witness: v.clone() }
        }
        LambdaRegion::AboveOne { .. } if v.is_negative() && next < *v => {
            CertificateKind::NegativeRay { witness: v.clone() }
        }
        LambdaRegion::BelowMinusOne if v.is_positive() => {
            let bound = v + 1;
            if next > -&bound || lambda.floor_mul_int(&next) < bound {
                return None;
            }
            CertificateKind::Alternating { positive_witness: v.clone() }
        }
        _ => return None,
    };
    Some(DivergenceCertificate { kind, region: region.clone() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    Limit(LimitBehavior),
    /// Step budget ran out before any terminal condition fired.
    Exhausted,
}

impl Classification {
    pub fn limit(&self) -> Option<&LimitBehavior> {
        match self {
            Classification::Limit(b) => Some(b),
            Classification::Exhausted => None,
        }
    }

    pub fn token(&self) -> String {
        match self {
            Classification::Limit(b) => b.token(),
            Classification::Exhausted => "exhausted".to_string(),
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Limit(b) => write!(f, "{b}"),
            Classification::Exhausted => f.write_str("exhausted"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    pub lambda: Rational,
    pub start: Rational,
    /// `f(start), f^2(start), ...` up to and including the terminal witness.
    pub prefix: Vec<Integer>,
    pub classification: Classification,
    pub certificate: Option<DivergenceCertificate>,
}

impl Orbit {
    /// Number of map applications performed.
    pub fn steps(&self) -> usize {
        self.prefix.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrbitError {
    #[error("max_steps must be at least 1")]
    ZeroSteps,
    #[error("orbit of {} under lambda={} not classified within {} steps", .0.x0, .0.lambda, .0.steps)]
    Exhausted(Box<ExhaustedRun>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExhaustedRun {
    pub lambda: Rational,
    pub x0: Rational,
    pub steps: usize,
}

pub fn simulate_orbit(lambda: &Rational, x0: &Rational, max_steps: usize) -> Result<Orbit, OrbitError> {
    if max_steps == 0 {
        return Err(OrbitError::ZeroSteps);
    }
    let region = classify_lambda(lambda);
    let mut prefix: Vec<Integer> = Vec::new();
    let mut certificate = None;
    let mut classification = Classification::Exhausted;

    for value in iterates(lambda, x0).take(max_steps) {
        prefix.push(value);
        let n = prefix.len();
        let last = &prefix[n - 1];
        if n >= 2 && *last == prefix[n - 2] {
            classification = Classification::Limit(LimitBehavior::Fixed(last.clone()));
            break;
        }
        if n >= 3 && *last == prefix[n - 3] {
            classification =
                Classification::Limit(LimitBehavior::two_cycle(prefix[n - 2].clone(), last.clone()));
            break;
        }
        if let Some(cert) = certify_in_region(&region, lambda, last) {
            classification = Classification::Limit(cert.behavior_at(n));
            certificate = Some(cert);
            break;
        }
    }

    Ok(Orbit {
        lambda: lambda.clone(),
        start: x0.clone(),
        prefix,
        classification,
        certificate,
    })
}

/// `10 * (|numer(x0)| + denom(x0)) + 64`, saturating at `usize::MAX`.
pub fn default_max_steps(x0: &Rational) -> usize {
    let budget: Integer = (x0.numer().abs() + x0.denom()) * 10 + 64;
    budget.to_usize().unwrap_or(usize::MAX)
}

/// Certified limit of the orbit of `x0` under the default step budget.
pub fn omega_limit(lambda: &Rational, x0: &Rational) -> Result<LimitBehavior, OrbitError> {
    let orbit = simulate_orbit(lambda, x0, default_max_steps(x0))?;
    match orbit.classification {
        Classification::Limit(b) => Ok(b),
        Classification::Exhausted => Err(OrbitError::Exhausted(Box::new(ExhaustedRun {
            lambda: lambda.clone(),
            x0: x0.clone(),
            steps: orbit.prefix.len(),
        }))),
    }
}

/// Staircase vertices `(x0, f(x0)), (f(x0), f(x0)), (f(x0), f^2(x0)), ...`.
///
/// At most `2n` points; stops early once the orbit lands on a fixed point,
/// closes a two-cycle, or produces a divergence certificate.
pub fn cobweb_points(lambda: &Rational, x0: &Rational, n: usize) -> Vec<(Rational, Rational)> {
    let region = classify_lambda(lambda);
    let mut points = Vec::with_capacity(2 * n);
    let mut previous: Option<Rational> = None;
    let mut current = x0.clone();
    for _ in 0..n {
        let next = Rational::from(apply_map(lambda, &current));
        points.push((current.clone(), next.clone()));
        points.push((next.clone(), next.clone()));
        let done = next == current
            || previous.as_ref() == Some(&next)
            || certify_in_region(&region, lambda, &next.floor()).is_some();
        if done {
            break;
        }
        previous = Some(std::mem::replace(&mut current, next));
    }
    points
}

/// Bound on orbit length conjectured for `|lambda| <= 1`: `|floor(lambda * x0)| + 3`.
///
/// It does not hold near `lambda = -1`; see [`proven_step_bound`].
pub fn conjectured_step_bound(lambda: &Rational, x0: &Rational) -> Integer {
    apply_map(lambda, x0).abs() + 3
}

/// Step bound that holds for every `-1 <= lambda <= 1`: `2 * |floor(lambda * x0)| + 3`.
///
/// For `-1 < lambda < 0` the absolute value of the iterates drops by at
/// least one every two steps, so `|f(x0)|` can take up to twice that many
/// steps to reach zero.
pub fn proven_step_bound(lambda: &Rational, x0: &Rational) -> Integer {
    apply_map(lambda, x0).abs() * 2 + 3
}

/// Re-checks the escape inequality of `cert` at a later orbit value `v`.
pub fn certificate_holds_at(cert: &DivergenceCertificate, lambda: &Rational, v: &Integer) -> bool {
    let next = lambda.floor_mul_int(v);
    match (&cert.kind, &cert.region) {
        (CertificateKind::PositiveRay { .. }, LambdaRegion::AboveOne { m }) => v >= m && next >= v + Integer::one(),
        (CertificateKind::NegativeRay { .. }, _) => v.is_negative() && next <= v - Integer::one(),
        (CertificateKind::Alternating { .. }, _) => {
            // Positive iterates keep satisfying the two-step escape; negative ones map to a positive one.
            if v.is_positive() {
                next <= -(v + Integer::one()) && lambda.floor_mul_int(&next) > *v
            } else {
                next.is_positive() && next >= v.abs()
            }
        }
        _ => false,
    }
}
