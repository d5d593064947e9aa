//! Closed-form theory of `f(x) = floor(lambda * x)`.
//!
//! Everything here is computed from the parameter alone, without iterating
//! the map: the parameter region and its index `m`, the fixed-point set, the
//! limit of the orbit from a given start, and the partition of the real line
//! into basins. The `orbit` module checks these answers by simulation.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{Integer, Rational};

/// Location of lambda among the seven parameter cases.
///
/// `PosUnit { m }` holds exactly when `(m-1)/m < lambda <= m/(m+1)`, and
/// `AboveOne { m }` when `(m+1)/m <= lambda < m/(m-1)` (no upper bound for `m = 1`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LambdaRegion {
    BelowMinusOne,
    MinusOne,
    NegOpenUnit,
    Zero,
    PosUnit { m: Integer },
    One,
    AboveOne { m: Integer },
}

impl LambdaRegion {
    pub fn tag(&self) -> &'static str {
        match self {
            LambdaRegion::BelowMinusOne => "below-minus-one",
            LambdaRegion::MinusOne => "minus-one",
            LambdaRegion::NegOpenUnit => "neg-open-unit",
            LambdaRegion::Zero => "zero",
            LambdaRegion::PosUnit { .. } => "pos-unit",
            LambdaRegion::One => "one",
            LambdaRegion::AboveOne { .. } => "above-one",
        }
    }

    /// Region index `m`, for the two families that carry one.
    pub fn index(&self) -> Option<&Integer> {
        match self {
            LambdaRegion::PosUnit { m } | LambdaRegion::AboveOne { m } => Some(m),
            _ => None,
        }
    }
}

impl fmt::Display for LambdaRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index() {
            Some(m) => write!(f, "{} m={}", self.tag(), m),
            None => f.write_str(self.tag()),
        }
    }
}

fn ratio(numer: &Integer, denom: &Integer) -> Rational {
    Rational::new(numer.clone(), denom.clone()).expect("region bounds have positive denominators")
}

/// `(m-1)/m < lambda <= m/(m+1)`, checked with exact comparisons.
pub fn in_pos_unit(lambda: &Rational, m: &Integer) -> bool {
    if !m.is_positive() {
        return false;
    }
    let one = Integer::one();
    ratio(&(m - &one), m) < *lambda && *lambda <= ratio(m, &(m + &one))
}

/// `(m+1)/m <= lambda < m/(m-1)`, with `m = 1` meaning `lambda >= 2`.
pub fn in_above_one(lambda: &Rational, m: &Integer) -> bool {
    if !m.is_positive() {
        return false;
    }
    let one = Integer::one();
    let lower_ok = ratio(&(m + &one), m) <= *lambda;
    let upper_ok = m.is_one() || *lambda < ratio(m, &(m - &one));
    lower_ok && upper_ok
}

fn scan_index(lambda: &Rational, member: fn(&Rational, &Integer) -> bool) -> Integer {
    let mut m = Integer::one();
    while !member(lambda, &m) {
        m += 1;
    }
    m
}

pub fn classify_lambda(lambda: &Rational) -> LambdaRegion {
    let one = Rational::one();
    let minus_one = -&one;
    if *lambda < minus_one {
        LambdaRegion::BelowMinusOne
    } else if *lambda == minus_one {
        LambdaRegion::MinusOne
    } else if lambda.is_negative() {
        LambdaRegion::NegOpenUnit
    } else if lambda.is_zero() {
        LambdaRegion::Zero
    } else if *lambda < one {
        // m = ceil(lambda / (1 - lambda))
        let guess = lambda
            .checked_div(&(&one - lambda))
            .expect("lambda < 1")
            .ceil();
        let m = if in_pos_unit(lambda, &guess) {
            guess
        } else {
            scan_index(lambda, in_pos_unit)
        };
        LambdaRegion::PosUnit { m }
    } else if *lambda == one {
        LambdaRegion::One
    } else {
        // m = ceil(1 / (lambda - 1))
        let guess = (lambda - &one).recip().expect("lambda > 1").ceil();
        let m = if in_above_one(lambda, &guess) {
            guess
        } else {
            scan_index(lambda, in_above_one)
        };
        LambdaRegion::AboveOne { m }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FixedPointSet {
    /// Ascending, duplicate-free.
    Finite(Vec<Integer>),
    AllIntegers,
}

impl FixedPointSet {
    pub fn contains(&self, x: &Integer) -> bool {
        match self {
            FixedPointSet::Finite(points) => points.binary_search(x).is_ok(),
            FixedPointSet::AllIntegers => true,
        }
    }

    /// Cardinality; `None` for the full integer lattice.
    pub fn len(&self) -> Option<usize> {
        match self {
            FixedPointSet::Finite(points) => Some(points.len()),
            FixedPointSet::AllIntegers => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }
}

impl fmt::Display for FixedPointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixedPointSet::AllIntegers => f.write_str("Z"),
            FixedPointSet::Finite(points) => {
                f.write_str("{")?;
                for (i, p) in points.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str("}")
            }
        }
    }
}

pub fn fixed_points(lambda: &Rational) -> FixedPointSet {
    match classify_lambda(lambda) {
        LambdaRegion::BelowMinusOne
        | LambdaRegion::MinusOne
        | LambdaRegion::NegOpenUnit
        | LambdaRegion::Zero => FixedPointSet::Finite(vec![Integer::zero()]),
        LambdaRegion::PosUnit { m } => {
            let mut points = Vec::new();
            let mut k = -m;
            while !k.is_positive() {
                points.push(k.clone());
                k += 1;
            }
            FixedPointSet::Finite(points)
        }
        LambdaRegion::One => FixedPointSet::AllIntegers,
        LambdaRegion::AboveOne { m } => {
            let mut points = Vec::new();
            let mut k = Integer::zero();
            while k < m {
                points.push(k.clone());
                k += 1;
            }
            FixedPointSet::Finite(points)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Asymptotic behaviour of a forward orbit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LimitBehavior {
    Fixed(Integer),
    /// Stored with `a < b`; build through [`LimitBehavior::two_cycle`].
    TwoCycle(Integer, Integer),
    PlusInfinity,
    MinusInfinity,
    /// Even-indexed iterates tend to `even_sign * inf`, odd-indexed ones to the opposite sign.
    AlternatingInfinity { even_sign: Sign },
}

impl LimitBehavior {
    /// Orders the pair; collapses to `Fixed` when both values coincide.
    pub fn two_cycle(a: Integer, b: Integer) -> Self {
        if a == b {
            LimitBehavior::Fixed(a)
        } else if a < b {
            LimitBehavior::TwoCycle(a, b)
        } else {
            LimitBehavior::TwoCycle(b, a)
        }
    }

    pub fn is_divergent(&self) -> bool {
        !matches!(self, LimitBehavior::Fixed(_) | LimitBehavior::TwoCycle(..))
    }

    /// Compact machine form used in JSON and CSV output:
    /// `fixed(k)`, `two-cycle(a,b)`, `+inf`, `-inf`, `alt(+inf,-inf)`, `alt(-inf,+inf)`.
    pub fn token(&self) -> String {
        match self {
            LimitBehavior::Fixed(k) => format!("fixed({k})"),
            LimitBehavior::TwoCycle(a, b) => format!("two-cycle({a},{b})"),
            LimitBehavior::PlusInfinity => "+inf".to_string(),
            LimitBehavior::MinusInfinity => "-inf".to_string(),
            LimitBehavior::AlternatingInfinity { even_sign } => {
                format!("alt({}inf,{}inf)", even_sign.symbol(), even_sign.flip().symbol())
            }
        }
    }
}

impl fmt::Display for LimitBehavior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimitBehavior::Fixed(k) => write!(f, "fixed {k}"),
            LimitBehavior::TwoCycle(a, b) => write!(f, "two-cycle {{{a}, {b}}}"),
            other => f.write_str(&other.token()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unrecognised behaviour token `{0}`")]
pub struct ParseBehaviorError(pub String);

impl FromStr for LimitBehavior {
    type Err = ParseBehaviorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseBehaviorError(s.to_string());
        let int = |t: &str| t.trim().parse::<Integer>().map_err(|_| err());
        match s {
            "+inf" => return Ok(LimitBehavior::PlusInfinity),
            "-inf" => return Ok(LimitBehavior::MinusInfinity),
            "alt(+inf,-inf)" => return Ok(LimitBehavior::AlternatingInfinity { even_sign: Sign::Plus }),
            "alt(-inf,+inf)" => {
                return Ok(LimitBehavior::AlternatingInfinity { even_sign: Sign::Minus })
            }
            _ => {}
        }
        if let Some(inner) = s.strip_prefix("fixed(").and_then(|r| r.strip_suffix(')')) {
            return Ok(LimitBehavior::Fixed(int(inner)?));
        }
        if let Some(inner) = s.strip_prefix("two-cycle(").and_then(|r| r.strip_suffix(')')) {
            let (a, b) = inner.split_once(',').ok_or_else(err)?;
            let (a, b) = (int(a)?, int(b)?);
            if a >= b {
                return Err(err());
            }
            return Ok(LimitBehavior::TwoCycle(a, b));
        }
        Err(err())
    }
}

/// Limit of the orbit of `x0`, read off the case tables without iterating
/// beyond the first one or two applications of the map.
pub fn predict_limit(lambda: &Rational, x0: &Rational) -> LimitBehavior {
    let fx = (lambda * x0).floor();
    match classify_lambda(lambda) {
        LambdaRegion::BelowMinusOne => {
            // (1/lambda, 0] maps to 0; x > 0 sends even iterates to +inf.
            let inv = lambda.recip().expect("lambda < -1");
            if x0.is_positive() {
                LimitBehavior::AlternatingInfinity { even_sign: Sign::Plus }
            } else if *x0 <= inv {
                LimitBehavior::AlternatingInfinity { even_sign: Sign::Minus }
            } else {
                LimitBehavior::Fixed(Integer::zero())
            }
        }
        LambdaRegion::MinusOne => {
            // f^3 = f, so the orbit settles on {f(x0), -f(x0)} after one step.
            let neg = -&fx;
            LimitBehavior::two_cycle(fx, neg)
        }
        LambdaRegion::NegOpenUnit | LambdaRegion::Zero => LimitBehavior::Fixed(Integer::zero()),
        LambdaRegion::PosUnit { m } => {
            if !x0.is_negative() {
                LimitBehavior::Fixed(Integer::zero())
            } else if fx < -&m {
                LimitBehavior::Fixed(-m)
            } else {
                LimitBehavior::Fixed(fx)
            }
        }
        LambdaRegion::One => LimitBehavior::Fixed(x0.floor()),
        LambdaRegion::AboveOne { m } => {
            if x0.is_negative() {
                LimitBehavior::MinusInfinity
            } else if fx >= m {
                LimitBehavior::PlusInfinity
            } else {
                LimitBehavior::Fixed(fx)
            }
        }
    }
}

/// Interval of the real line. `None` endpoints are infinite and always open.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lower: Option<Rational>,
    pub lower_closed: bool,
    pub upper: Option<Rational>,
    pub upper_closed: bool,
}

impl Interval {
    pub fn real_line() -> Self {
        Interval { lower: None, lower_closed: false, upper: None, upper_closed: false }
    }

    /// `[lower, upper)`
    pub fn closed_open(lower: Rational, upper: Rational) -> Self {
        Interval { lower: Some(lower), lower_closed: true, upper: Some(upper), upper_closed: false }
    }

    /// `(lower, upper]`
    pub fn open_closed(lower: Rational, upper: Rational) -> Self {
        Interval { lower: Some(lower), lower_closed: false, upper: Some(upper), upper_closed: true }
    }

    /// `(-inf, upper)` or `(-inf, upper]`
    pub fn below(upper: Rational, closed: bool) -> Self {
        Interval { lower: None, lower_closed: false, upper: Some(upper), upper_closed: closed }
    }

    /// `[lower, +inf)` or `(lower, +inf)`
    pub fn above(lower: Rational, closed: bool) -> Self {
        Interval { lower: Some(lower), lower_closed: closed, upper: None, upper_closed: false }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let lower_ok = match &self.lower {
            None => true,
            Some(l) if self.lower_closed => l <= x,
            Some(l) => l < x,
        };
        let upper_ok = match &self.upper {
            None => true,
            Some(u) if self.upper_closed => x <= u,
            Some(u) => x < u,
        };
        lower_ok && upper_ok
    }

    pub fn is_empty(&self) -> bool {
        match (&self.lower, &self.upper) {
            (Some(l), Some(u)) => l > u || (l == u && !(self.lower_closed && self.upper_closed)),
            _ => false,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.lower_closed { "[" } else { "(" })?;
        match &self.lower {
            Some(l) => write!(f, "{l}")?,
            None => f.write_str("-inf")?,
        }
        f.write_str(", ")?;
        match &self.upper {
            Some(u) => write!(f, "{u}")?,
            None => f.write_str("+inf")?,
        }
        f.write_str(if self.upper_closed { "]" } else { ")" })
    }
}

/// Behaviour attached to a basin piece. `PerPoint` marks the two parameters
/// (`lambda = -1` and `lambda = 1`) whose true decomposition has countably
/// many cells; query [`predict_limit`] for individual points there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PieceBehavior {
    Limit(LimitBehavior),
    PerPoint,
}

impl PieceBehavior {
    pub fn token(&self) -> String {
        match self {
            PieceBehavior::Limit(b) => b.token(),
            PieceBehavior::PerPoint => "per-point".to_string(),
        }
    }
}

impl fmt::Display for PieceBehavior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PieceBehavior::Limit(b) => write!(f, "{b}"),
            PieceBehavior::PerPoint => f.write_str("per-point (use predict)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasinPiece {
    pub interval: Interval,
    pub behavior: PieceBehavior,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasinDecomposition {
    pub lambda: Rational,
    pub region: LambdaRegion,
    pub pieces: Vec<BasinPiece>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PartitionError {
    #[error("decomposition has no pieces")]
    NoPieces,
    #[error("piece {0} is empty")]
    EmptyPiece(usize),
    #[error("first piece does not start at -inf")]
    MissingLowerTail,
    #[error("last piece does not end at +inf")]
    MissingUpperTail,
    #[error("gap or overlap between pieces {0} and {1}")]
    BadJoin(usize, usize),
}

impl BasinDecomposition {
    /// Checks that the pieces are ascending, pairwise disjoint, and cover the real line.
    pub fn validate(&self) -> Result<(), PartitionError> {
        let first = self.pieces.first().ok_or(PartitionError::NoPieces)?;
        let last = self.pieces.last().expect("non-empty");
        if first.interval.lower.is_some() {
            return Err(PartitionError::MissingLowerTail);
        }
        if last.interval.upper.is_some() {
            return Err(PartitionError::MissingUpperTail);
        }
        for (i, piece) in self.pieces.iter().enumerate() {
            if piece.interval.is_empty() {
                return Err(PartitionError::EmptyPiece(i));
            }
        }
        for (i, pair) in self.pieces.windows(2).enumerate() {
            let (left, right) = (&pair[0].interval, &pair[1].interval);
            let joined = match (&left.upper, &right.lower) {
                (Some(u), Some(l)) => u == l && (left.upper_closed != right.lower_closed),
                _ => false,
            };
            if !joined {
                return Err(PartitionError::BadJoin(i, i + 1));
            }
        }
        Ok(())
    }

    /// The piece containing `x`.
    pub fn locate(&self, x: &Rational) -> Option<&BasinPiece> {
        self.pieces.iter().find(|p| p.interval.contains(x))
    }
}

fn piece(interval: Interval, behavior: LimitBehavior) -> BasinPiece {
    BasinPiece { interval, behavior: PieceBehavior::Limit(behavior) }
}

pub fn basin_decomposition(lambda: &Rational) -> BasinDecomposition {
    let region = classify_lambda(lambda);
    let over_lambda = |k: &Integer| {
        Rational::from(k)
            .checked_div(lambda)
            .expect("lambda is nonzero in this branch")
    };
    let zero = Integer::zero();

    let pieces = match &region {
        LambdaRegion::BelowMinusOne => {
            let inv = lambda.recip().expect("lambda < -1");
            vec![
                piece(
                    Interval::below(inv.clone(), true),
                    LimitBehavior::AlternatingInfinity { even_sign: Sign::Minus },
                ),
                piece(Interval::open_closed(inv, Rational::zero()), LimitBehavior::Fixed(zero)),
                piece(
                    Interval::above(Rational::zero(), false),
                    LimitBehavior::AlternatingInfinity { even_sign: Sign::Plus },
                ),
            ]
        }
        LambdaRegion::NegOpenUnit | LambdaRegion::Zero => {
            vec![piece(Interval::real_line(), LimitBehavior::Fixed(zero))]
        }
        LambdaRegion::MinusOne | LambdaRegion::One => vec![BasinPiece {
            interval: Interval::real_line(),
            behavior: PieceBehavior::PerPoint,
        }],
        LambdaRegion::PosUnit { m } => {
            // (-inf, -m/l) -> -m, then [k/l, (k+1)/l) -> k for k = -m..=-1, then [0, inf) -> 0.
            let mut pieces = vec![piece(Interval::below(over_lambda(&-m), false), LimitBehavior::Fixed(-m))];
            let mut k = -m;
            while k.is_negative() {
                let next = &k + 1;
                pieces.push(piece(
                    Interval::closed_open(over_lambda(&k), over_lambda(&next)),
                    LimitBehavior::Fixed(k.clone()),
                ));
                k = next;
            }
            pieces.push(piece(Interval::above(Rational::zero(), true), LimitBehavior::Fixed(zero)));
            pieces
        }
        LambdaRegion::AboveOne { m } => {
            let mut pieces = vec![piece(Interval::below(Rational::zero(), false), LimitBehavior::MinusInfinity)];
            let mut k = Integer::zero();
            while k < *m {
                let next = &k + 1;
                pieces.push(piece(
                    Interval::closed_open(over_lambda(&k), over_lambda(&next)),
                    LimitBehavior::Fixed(k.clone()),
                ));
                k = next;
            }
            pieces.push(piece(Interval::above(over_lambda(m), true), LimitBehavior::PlusInfinity));
            pieces
        }
    };

    BasinDecomposition { lambda: lambda.clone(), region, pieces }
}
