//! Exact arithmetic on the extended half-line `[0, ∞]`.
//!
//! [`ExtScalar`] is the value space of every functional, rank ratio and
//! radius of comparison in this crate. Finite values are canonical
//! nonnegative rationals; `∞` is a distinguished value above all of them.
//!
//! Conventions that are not forced by ordinary arithmetic:
//!
//! * `0 · ∞ = 0`, so that scaling a functional by zero (or evaluating the
//!   trivial functional at `0`) gives `0`.
//! * [`ExtScalar::ratio`] returns `0` for `0/0` and `∞/∞`: a functional that
//!   sees both sides as `0` (or both as `∞`) imposes no constraint on `r` in
//!   `λ(x) ≤ r·λ(y)`.
//!
//! [`ExtNat`] is the integer counterpart `Z≥0 ∪ {∞}` used for element
//! payloads (multiplicities, ranks).

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("negative value {0} is outside [0, inf]")]
    Negative(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse `{0}` as a value in [0, inf]")]
    Parse(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Repr {
    Finite(BigRational),
    Infinity,
}

/// A value in `[0, ∞]`, exact.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtScalar(Repr);

impl ExtScalar {
    pub const INFINITY: ExtScalar = ExtScalar(Repr::Infinity);

    pub fn zero() -> Self {
        ExtScalar(Repr::Finite(BigRational::zero()))
    }

    pub fn one() -> Self {
        ExtScalar(Repr::Finite(BigRational::one()))
    }

    pub fn infinity() -> Self {
        Self::INFINITY
    }

    pub fn from_int(n: u64) -> Self {
        ExtScalar(Repr::Finite(BigRational::from_integer(BigInt::from(n))))
    }

    /// `num/den` in lowest terms.
    pub fn ratio_of(num: i64, den: i64) -> Result<Self, ScalarError> {
        if den == 0 {
            return Err(ScalarError::ZeroDenominator);
        }
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Panicking shorthand for literals in tests and tables.
    pub fn frac(num: i64, den: i64) -> Self {
        Self::ratio_of(num, den).expect("valid nonnegative fraction")
    }

    pub fn from_rational(r: BigRational) -> Result<Self, ScalarError> {
        if r.is_negative() {
            return Err(ScalarError::Negative(r.to_string()));
        }
        Ok(ExtScalar(Repr::Finite(r)))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self.0, Repr::Infinity)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_infinite()
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.0, Repr::Finite(r) if r.is_zero())
    }

    /// Finite and strictly positive.
    pub fn is_positive_finite(&self) -> bool {
        matches!(&self.0, Repr::Finite(r) if r.is_positive())
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Finite(r) => Some(r),
            Repr::Infinity => None,
        }
    }

    /// Extended sum; `∞` absorbs.
    pub fn add(&self, other: &ExtScalar) -> ExtScalar {
        match (&self.0, &other.0) {
            (Repr::Finite(a), Repr::Finite(b)) => ExtScalar(Repr::Finite(a + b)),
            _ => Self::INFINITY,
        }
    }

    /// Extended product with `0 · ∞ = 0`.
    pub fn mul(&self, other: &ExtScalar) -> ExtScalar {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        match (&self.0, &other.0) {
            (Repr::Finite(a), Repr::Finite(b)) => ExtScalar(Repr::Finite(a * b)),
            _ => Self::INFINITY,
        }
    }

    /// The least `r` with `self ≤ r · other`, with the conventions described
    /// at module level: `0/b = 0`, `a/0 = ∞` for `a > 0`, `a/∞ = 0` for
    /// finite `a`, `∞/b = ∞` for finite `b`, and `∞/∞ = 0`.
    pub fn ratio(&self, other: &ExtScalar) -> ExtScalar {
        if self.is_zero() {
            return Self::zero();
        }
        match (&self.0, &other.0) {
            (Repr::Finite(a), Repr::Finite(b)) => {
                if b.is_zero() {
                    Self::INFINITY
                } else {
                    ExtScalar(Repr::Finite(a / b))
                }
            }
            (Repr::Finite(_), Repr::Infinity) => Self::zero(),
            (Repr::Infinity, Repr::Finite(_)) => Self::INFINITY,
            (Repr::Infinity, Repr::Infinity) => Self::zero(),
        }
    }

    /// `1/x` with `1/0 = ∞` and `1/∞ = 0`.
    pub fn recip(&self) -> ExtScalar {
        match &self.0 {
            Repr::Infinity => Self::zero(),
            Repr::Finite(r) if r.is_zero() => Self::INFINITY,
            Repr::Finite(r) => ExtScalar(Repr::Finite(r.recip())),
        }
    }

    /// Truncated difference `max(self - other, 0)` for finite operands;
    /// `∞ - finite = ∞`, anything minus `∞` is `0`.
    pub fn saturating_sub(&self, other: &ExtScalar) -> ExtScalar {
        match (&self.0, &other.0) {
            (_, Repr::Infinity) => Self::zero(),
            (Repr::Infinity, _) => Self::INFINITY,
            (Repr::Finite(a), Repr::Finite(b)) => {
                if a > b {
                    ExtScalar(Repr::Finite(a - b))
                } else {
                    Self::zero()
                }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Infinity => f64::INFINITY,
            Repr::Finite(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }
}

impl Default for ExtScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<u64> for ExtScalar {
    fn from(n: u64) -> Self {
        ExtScalar::from_int(n)
    }
}

impl From<ExtNat> for ExtScalar {
    fn from(n: ExtNat) -> Self {
        match n {
            ExtNat::Fin(k) => ExtScalar::from_int(k),
            ExtNat::Inf => ExtScalar::INFINITY,
        }
    }
}

impl Add for ExtScalar {
    type Output = ExtScalar;
    fn add(self, rhs: ExtScalar) -> ExtScalar {
        ExtScalar::add(&self, &rhs)
    }
}

impl<'a> Add<&'a ExtScalar> for &'a ExtScalar {
    type Output = ExtScalar;
    fn add(self, rhs: &ExtScalar) -> ExtScalar {
        ExtScalar::add(self, rhs)
    }
}

impl Mul for ExtScalar {
    type Output = ExtScalar;
    fn mul(self, rhs: ExtScalar) -> ExtScalar {
        ExtScalar::mul(&self, &rhs)
    }
}

impl<'a> Mul<&'a ExtScalar> for &'a ExtScalar {
    type Output = ExtScalar;
    fn mul(self, rhs: &ExtScalar) -> ExtScalar {
        ExtScalar::mul(self, rhs)
    }
}

impl Sum for ExtScalar {
    fn sum<I: Iterator<Item = ExtScalar>>(iter: I) -> Self {
        iter.fold(ExtScalar::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for ExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Infinity => f.write_str("inf"),
            Repr::Finite(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl FromStr for ExtScalar {
    type Err = ScalarError;

    /// Accepts `inf`, integers and `p/q`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(Self::INFINITY);
        }
        let parse_int =
            |t: &str| BigInt::from_str(t.trim()).map_err(|_| ScalarError::Parse(s.to_string()));
        let r = match s.split_once('/') {
            Some((n, d)) => {
                let d = parse_int(d)?;
                if d.is_zero() {
                    return Err(ScalarError::ZeroDenominator);
                }
                BigRational::new(parse_int(n)?, d)
            }
            None => BigRational::from_integer(parse_int(s)?),
        };
        Self::from_rational(r)
    }
}

/// `Z≥0 ∪ {∞}` with extended addition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtNat {
    Fin(u64),
    Inf,
}

impl ExtNat {
    pub const ZERO: ExtNat = ExtNat::Fin(0);

    pub fn is_zero(self) -> bool {
        self == ExtNat::ZERO
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtNat::Fin(_))
    }

    pub fn scale(self, n: u64) -> ExtNat {
        match self {
            ExtNat::Fin(k) => ExtNat::Fin(k * n),
            ExtNat::Inf if n == 0 => ExtNat::ZERO,
            ExtNat::Inf => ExtNat::Inf,
        }
    }

    /// `sup_n n·self`: `0` stays `0`, everything else becomes `∞`.
    pub fn infinity_times(self) -> ExtNat {
        if self.is_zero() {
            ExtNat::ZERO
        } else {
            ExtNat::Inf
        }
    }
}

impl Add for ExtNat {
    type Output = ExtNat;
    fn add(self, rhs: ExtNat) -> ExtNat {
        match (self, rhs) {
            (ExtNat::Fin(a), ExtNat::Fin(b)) => ExtNat::Fin(a + b),
            _ => ExtNat::Inf,
        }
    }
}

impl Default for ExtNat {
    fn default() -> Self {
        ExtNat::ZERO
    }
}

impl From<u64> for ExtNat {
    fn from(n: u64) -> Self {
        ExtNat::Fin(n)
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Fin(k) => write!(f, "{k}"),
            ExtNat::Inf => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtNat {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(ExtNat::Inf);
        }
        if s.starts_with('-') {
            return Err(ScalarError::Negative(s.to_string()));
        }
        s.parse::<u64>()
            .map(ExtNat::Fin)
            .map_err(|_| ScalarError::Parse(s.to_string()))
    }
}

impl PartialEq<ExtNat> for ExtScalar {
    fn eq(&self, other: &ExtNat) -> bool {
        *self == ExtScalar::from(*other)
    }
}

impl PartialOrd<ExtNat> for ExtScalar {
    fn partial_cmp(&self, other: &ExtNat) -> Option<Ordering> {
        Some(self.cmp(&ExtScalar::from(*other)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> ExtScalar {
        ExtScalar::frac(n, d)
    }
    const INF: ExtScalar = ExtScalar::INFINITY;

    #[test]
    fn add_examples() {
        assert_eq!(q(1, 2) + q(1, 3), q(5, 6));
        assert_eq!(q(7, 1) + INF, INF);
        assert_eq!(ExtScalar::zero() + ExtScalar::zero(), ExtScalar::zero());
    }

    #[test]
    fn mul_examples() {
        assert_eq!(ExtScalar::zero() * INF, ExtScalar::zero());
        assert_eq!(q(3, 1) * INF, INF);
        assert_eq!(q(1, 2) * q(2, 3), q(1, 3));
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(q(2, 1).ratio(&q(1, 2)), q(4, 1));
        assert_eq!(ExtScalar::zero().ratio(&ExtScalar::zero()), ExtScalar::zero());
        assert_eq!(q(5, 1).ratio(&ExtScalar::zero()), INF);
        assert_eq!(q(5, 1).ratio(&INF), ExtScalar::zero());
        assert_eq!(INF.ratio(&q(5, 1)), INF);
        assert_eq!(INF.ratio(&INF), ExtScalar::zero());
    }

    #[test]
    fn recip_conventions() {
        assert_eq!(ExtScalar::zero().recip(), INF);
        assert_eq!(INF.recip(), ExtScalar::zero());
        assert_eq!(q(3, 4).recip(), q(4, 3));
    }

    #[test]
    fn render_and_parse() {
        assert_eq!(q(6, 4).to_string(), "3/2");
        assert_eq!(q(4, 2).to_string(), "2");
        assert_eq!(INF.to_string(), "inf");
        assert_eq!("3/2".parse::<ExtScalar>().unwrap(), q(3, 2));
        assert_eq!("10/4".parse::<ExtScalar>().unwrap(), q(5, 2));
        assert_eq!("inf".parse::<ExtScalar>().unwrap(), INF);
        assert_eq!(" 7 ".parse::<ExtScalar>().unwrap(), q(7, 1));
        assert!(matches!("-1".parse::<ExtScalar>(), Err(ScalarError::Negative(_))));
        assert!(matches!("1/0".parse::<ExtScalar>(), Err(ScalarError::ZeroDenominator)));
        assert!("x".parse::<ExtScalar>().is_err());
        assert_eq!("inf".parse::<ExtNat>().unwrap(), ExtNat::Inf);
        assert!("-3".parse::<ExtNat>().is_err());
    }

    #[test]
    fn infinity_above_everything() {
        assert!(q(1_000_000, 1) < INF);
        assert!(ExtNat::Fin(u64::MAX) < ExtNat::Inf);
    }

    pub(crate) fn arb_ext() -> impl Strategy<Value = ExtScalar> {
        prop_oneof![
            1 => Just(ExtScalar::INFINITY),
            1 => Just(ExtScalar::zero()),
            6 => (0i64..40, 1i64..12).prop_map(|(n, d)| ExtScalar::frac(n, d)),
        ]
    }

    proptest! {
        #[test]
        fn add_mul_commutative_associative(a in arb_ext(), b in arb_ext(), c in arb_ext()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn distributive_with_at_most_one_infinity(a in arb_ext(), b in arb_ext(), c in arb_ext()) {
            let infs = [&a, &b, &c].iter().filter(|v| v.is_infinite()).count();
            prop_assume!(infs <= 1);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        // ratio(a, b) is the least finite r with a <= r*b; checked against a grid of r.
        #[test]
        fn ratio_is_least_multiplier(an in 0i64..30, ad in 1i64..6, bn in 0i64..30, bd in 1i64..6,
                                     a_inf in any::<bool>(), b_inf in any::<bool>()) {
            let a = if a_inf { INF } else { q(an, ad) };
            let b = if b_inf { INF } else { q(bn, bd) };
            let rho = a.ratio(&b);
            let grid: Vec<ExtScalar> = (1..=400).map(|j| q(j, 12)).collect();
            let feasible: Vec<&ExtScalar> = grid.iter().filter(|r| a <= *r * &b).collect();
            if rho.is_infinite() {
                prop_assert!(feasible.is_empty());
            } else {
                // every grid point above rho is feasible, every grid point below is not
                for r in &grid {
                    prop_assert_eq!(a <= r * &b, *r >= rho, "r = {}", r);
                }
            }
        }
    }
}
