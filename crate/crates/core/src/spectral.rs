//! Diagonal elements of `C([0,1]) ⊗ M_n` given by piecewise-linear
//! eigenvalue functions, and their exact integer rank functions.
//!
//! The Cu-semigroup of `C([0,1])` is modelled by lower semicontinuous step
//! functions `[0,1] → Z≥0 ∪ {∞}` ([`RankFn`]) under pointwise order and
//! addition. A [`SpectralProfile`] maps into it through
//! [`SpectralProfile::rank_function`]. Every breakpoint of every function
//! here is rational, so all evaluations are exact.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cucore::{CuModel, Ray};
use crate::error::{Error, Result};
use crate::scalar::{ExtNat, ExtScalar};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn qi(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn mid(a: &BigRational, b: &BigRational) -> BigRational {
    (a + b) / qi(2)
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::MalformedPayload(format!("`{s}` is not a rational number"));
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Merges sorted breakpoint lists, removing duplicates.
fn merge_breaks<'a>(lists: impl IntoIterator<Item = &'a [BigRational]>) -> Vec<BigRational> {
    let mut all: Vec<BigRational> = lists.into_iter().flatten().cloned().collect();
    all.sort();
    all.dedup();
    all
}

/// A continuous piecewise-linear function on `[0, 1]`, stored as knots
/// `(t, f(t))` with `t` strictly increasing from `0` to `1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlFunction {
    knots: Vec<(BigRational, BigRational)>,
}

impl PlFunction {
    pub fn new(knots: Vec<(BigRational, BigRational)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::MalformedPayload(
                "a piecewise-linear function needs knots at 0 and 1".into(),
            ));
        }
        if !knots[0].0.is_zero() || !knots[knots.len() - 1].0.is_one() {
            return Err(Error::MalformedPayload(
                "knots must start at t = 0 and end at t = 1".into(),
            ));
        }
        if knots.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::MalformedPayload(
                "knot positions must be strictly increasing".into(),
            ));
        }
        if let Some((_, v)) = knots.iter().find(|(_, v)| v.is_negative()) {
            return Err(Error::MalformedPayload(format!("negative value {v}")));
        }
        Ok(PlFunction { knots }.simplified())
    }

    pub fn constant(v: BigRational) -> Self {
        PlFunction::new(vec![(BigRational::zero(), v.clone()), (BigRational::one(), v)])
            .expect("constant function")
    }

    /// `f(t) = t`.
    pub fn identity() -> Self {
        PlFunction::new(vec![
            (BigRational::zero(), BigRational::zero()),
            (BigRational::one(), BigRational::one()),
        ])
        .expect("identity function")
    }

    pub fn knots(&self) -> &[(BigRational, BigRational)] {
        &self.knots
    }

    pub fn breakpoints(&self) -> Vec<BigRational> {
        self.knots.iter().map(|(t, _)| t.clone()).collect()
    }

    fn simplified(mut self) -> Self {
        let mut out: Vec<(BigRational, BigRational)> = Vec::with_capacity(self.knots.len());
        for k in self.knots.drain(..) {
            if out.len() >= 2 {
                let (t0, v0) = &out[out.len() - 2];
                let (t1, v1) = &out[out.len() - 1];
                // Drop the middle knot when it is collinear with its neighbours.
                if (v1 - v0) * (&k.0 - t1) == (&k.1 - v1) * (t1 - t0) {
                    out.pop();
                }
            }
            out.push(k);
        }
        PlFunction { knots: out }
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        let i = match self.knots.binary_search_by(|(s, _)| s.cmp(t)) {
            Ok(i) => return self.knots[i].1.clone(),
            Err(i) => i,
        };
        assert!(i > 0 && i < self.knots.len(), "t = {t} outside [0, 1]");
        let (t0, v0) = &self.knots[i - 1];
        let (t1, v1) = &self.knots[i];
        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    }

    /// Points strictly inside a segment where the function crosses `level`.
    pub fn crossings(&self, level: &BigRational) -> Vec<BigRational> {
        let mut out = Vec::new();
        for w in self.knots.windows(2) {
            let (t0, v0) = &w[0];
            let (t1, v1) = &w[1];
            let (lo, hi) = if v0 <= v1 { (v0, v1) } else { (v1, v0) };
            if lo < level && level < hi {
                out.push(t0 + (level - v0) * (t1 - t0) / (v1 - v0));
            }
        }
        out
    }

    /// `g ∘ f` for a map `g` that is linear between consecutive `kinks`.
    pub fn compose(
        &self,
        kinks: &[BigRational],
        g: impl Fn(&BigRational) -> BigRational,
    ) -> PlFunction {
        let mut ts = self.breakpoints();
        for k in kinks {
            ts.extend(self.crossings(k));
        }
        ts.sort();
        ts.dedup();
        let knots = ts
            .into_iter()
            .map(|t| {
                let v = g(&self.eval(&t));
                (t, v)
            })
            .collect();
        PlFunction { knots }.simplified()
    }

    pub fn max_value(&self) -> BigRational {
        self.knots.iter().map(|(_, v)| v).max().cloned().unwrap_or_default()
    }

    pub fn min_value(&self) -> BigRational {
        self.knots.iter().map(|(_, v)| v).min().cloned().unwrap_or_default()
    }

    pub fn scaled(&self, c: &BigRational) -> PlFunction {
        PlFunction {
            knots: self.knots.iter().map(|(t, v)| (t.clone(), v * c)).collect(),
        }
        .simplified()
    }

    pub fn parse(src: &str) -> Result<Self> {
        let body = src
            .trim()
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| Error::MalformedPayload(format!("`{src}` is not a `[t:v, …]` list")))?;
        let knots = body
            .split(',')
            .map(|pair| {
                let (t, v) = pair.split_once(':').ok_or_else(|| {
                    Error::MalformedPayload(format!("`{}` is not a `t:v` pair", pair.trim()))
                })?;
                Ok((parse_rational(t)?, parse_rational(v)?))
            })
            .collect::<Result<Vec<_>>>()?;
        PlFunction::new(knots)
    }
}

impl fmt::Display for PlFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.knots.iter().map(|(t, v)| format!("{t}:{v}")).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// A diagonal positive element `diag(f_1, …, f_n)` of `C([0,1]) ⊗ M_n`
/// with eigenvalue functions in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpectralProfile {
    eigen: Vec<PlFunction>,
}

impl SpectralProfile {
    pub fn new(eigen: Vec<PlFunction>) -> Result<Self> {
        if eigen.is_empty() {
            return Err(Error::MalformedPayload("a profile needs at least one eigenvalue".into()));
        }
        if let Some(f) = eigen.iter().find(|f| f.max_value() > BigRational::one()) {
            return Err(Error::MalformedPayload(format!(
                "eigenvalue function {f} exceeds 1"
            )));
        }
        Ok(SpectralProfile { eigen })
    }

    /// `diag(t, 1, …, 1)` in `M_n`.
    pub fn identity_with_units(n: usize) -> Self {
        assert!(n >= 1);
        let mut eigen = vec![PlFunction::identity()];
        eigen.extend((1..n).map(|_| PlFunction::constant(BigRational::one())));
        SpectralProfile { eigen }
    }

    pub fn fiber(&self) -> usize {
        self.eigen.len()
    }

    pub fn eigenvalues(&self) -> &[PlFunction] {
        &self.eigen
    }

    /// The union of all eigenvalue breakpoints.
    pub fn breakpoints(&self) -> Vec<BigRational> {
        let lists: Vec<Vec<BigRational>> = self.eigen.iter().map(|f| f.breakpoints()).collect();
        merge_breaks(lists.iter().map(Vec::as_slice))
    }

    /// `t ↦ #{i : f_i(t) > ε}` as an exact step function.
    pub fn rank_function(&self, epsilon: &BigRational) -> RankFn {
        let mut breaks = self.breakpoints();
        for f in &self.eigen {
            breaks.extend(f.crossings(epsilon));
        }
        breaks.sort();
        breaks.dedup();
        let count = |t: &BigRational| {
            ExtNat::Fin(self.eigen.iter().filter(|f| &f.eval(t) > epsilon).count() as u64)
        };
        let points = breaks.iter().map(count).collect();
        let pieces = breaks.windows(2).map(|w| count(&mid(&w[0], &w[1]))).collect();
        RankFn::from_parts(breaks, points, pieces)
    }

    /// The support rank `rank_function(0)`.
    pub fn rank(&self) -> RankFn {
        self.rank_function(&BigRational::zero())
    }

    /// `(a − ε)_+`, eigenvalue-wise `max(f − ε, 0)`.
    pub fn cutdown(&self, epsilon: &BigRational) -> SpectralProfile {
        let eps = epsilon.clone();
        self.map_eigen(std::slice::from_ref(epsilon), move |x| {
            if x > &eps {
                x - &eps
            } else {
                BigRational::zero()
            }
        })
    }

    /// `(a − 1/m)_+`.
    pub fn cutdown_recip(&self, m: u64) -> SpectralProfile {
        self.cutdown(&q(1, m as i64))
    }

    /// `f_ε(a)`: `0` on `[0, ε/2]`, `2x/ε − 1` on `[ε/2, ε]`, `1` above `ε`.
    pub fn smooth(&self, epsilon: &BigRational) -> SpectralProfile {
        assert!(epsilon.is_positive(), "smoothing parameter must be positive");
        let eps = epsilon.clone();
        let half = &eps / qi(2);
        self.map_eigen(&[half.clone(), eps.clone()], move |x| smoothing_map(&eps, x))
    }

    fn map_eigen(
        &self,
        kinks: &[BigRational],
        g: impl Fn(&BigRational) -> BigRational,
    ) -> SpectralProfile {
        SpectralProfile {
            eigen: self.eigen.iter().map(|f| f.compose(kinks, &g)).collect(),
        }
    }

    /// Normalized Dirac dimension `rank_0(t)/n`.
    pub fn dimension_at(&self, t: &BigRational) -> ExtScalar {
        let r = self.rank().eval(t);
        ExtScalar::from(r).ratio(&ExtScalar::from_int(self.fiber() as u64))
    }

    /// Normalized Dirac trace `(1/n)·Σ f_i(t)`.
    pub fn trace_at(&self, t: &BigRational) -> ExtScalar {
        let sum: BigRational = self.eigen.iter().map(|f| f.eval(t)).sum();
        ExtScalar::from_rational(sum / qi(self.fiber() as u64)).expect("nonnegative trace")
    }

    /// `‖a‖ = max_i max_t f_i(t)`.
    pub fn norm(&self) -> BigRational {
        self.eigen.iter().map(|f| f.max_value()).max().unwrap_or_default()
    }

    /// `a/‖a‖`, or `None` for the zero profile.
    pub fn normalized(&self) -> Option<SpectralProfile> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let c = n.recip();
        Some(SpectralProfile {
            eigen: self.eigen.iter().map(|f| f.scaled(&c)).collect(),
        })
    }

    /// Full exactly when some eigenvalue is positive at every `t`.
    pub fn is_full(&self) -> bool {
        self.rank().min_value() >= ExtNat::Fin(1)
    }

    /// The smallest positive eigenvalue value at a breakpoint of the profile
    /// or of `extra`, or `None` when every such value is zero.
    pub fn min_positive_value(&self, extra: &[&[BigRational]]) -> Option<BigRational> {
        let own = self.breakpoints();
        let ts = merge_breaks(std::iter::once(own.as_slice()).chain(extra.iter().copied()));
        ts.iter()
            .flat_map(|t| self.eigen.iter().map(move |f| f.eval(t)))
            .filter(|v| v.is_positive())
            .min()
    }

    /// The smallest positive value at which two eigenvalues of one segment,
    /// vanishing at opposite endpoints, can both sit: `u·v/(u + v)` where
    /// `u`, `v` are their values at the other endpoints.
    fn min_crossing_value(&self, extra: &[&[BigRational]]) -> Option<BigRational> {
        let own = self.breakpoints();
        let ts = merge_breaks(std::iter::once(own.as_slice()).chain(extra.iter().copied()));
        let mut best: Option<BigRational> = None;
        for w in ts.windows(2) {
            let (s, t) = (&w[0], &w[1]);
            let ends: Vec<(BigRational, BigRational)> =
                self.eigen.iter().map(|f| (f.eval(s), f.eval(t))).collect();
            for (ls, lt) in &ends {
                if !ls.is_zero() || !lt.is_positive() {
                    continue;
                }
                for (rs, rt) in &ends {
                    if rt.is_zero() && rs.is_positive() {
                        let v = lt * rs / (lt + rs);
                        if best.as_ref().is_none_or(|b| &v < b) {
                            best = Some(v);
                        }
                    }
                }
            }
        }
        best
    }

    /// The first `m` with `1/m` below every positive breakpoint value and
    /// below every crossing value of eigenvalues vanishing at opposite ends
    /// of a segment.
    ///
    /// On each segment between merged breakpoints each `f_i` is linear, so
    /// it is either bounded below by the minimum breakpoint value or
    /// vanishes at an endpoint. Past this index the set `{0 < f_i ≤ 1/m}`
    /// for each `i` is a short interval at a zero endpoint, and no point
    /// lies in two such intervals attached to opposite endpoints. Every rank
    /// ratio or defect built from `(a − 1/m)_+` or `f_{1/m}(a)` against step
    /// functions with breakpoints in `extra` then no longer changes.
    pub fn stable_index(&self, extra: &[&[BigRational]]) -> u64 {
        let threshold = match (self.min_positive_value(extra), self.min_crossing_value(extra)) {
            (Some(a), Some(b)) => a.min(b),
            (a, b) => match a.or(b) {
                Some(v) => v,
                None => return 1,
            },
        };
        let fl = threshold.recip().floor().to_integer();
        u64::try_from(fl).expect("breakpoint value too small") + 1
    }

    /// Increasing cutdown chain `rank((a − 1/m)_+)` listed up to the stable
    /// index (at `m = 1, 2, 4, …` and at the stable index itself).
    pub fn cutdown_chain(&self, extra: &[&[BigRational]]) -> (u64, Vec<RankFn>) {
        let m_star = self.stable_index(extra);
        let mut ms = Vec::new();
        let mut m = 1;
        while m < m_star {
            ms.push(m);
            m *= 2;
        }
        ms.push(m_star);
        let terms = ms
            .into_iter()
            .map(|m| self.cutdown(&q(1, m as i64)).rank())
            .collect();
        (m_star, terms)
    }

    pub fn parse(src: &str) -> Result<Self> {
        let src = src.trim();
        let mut eigen = Vec::new();
        let mut rest = src;
        while !rest.is_empty() {
            if !rest.starts_with('[') {
                return Err(Error::MalformedPayload(format!(
                    "expected `[` in profile `{src}`"
                )));
            }
            let close = rest.find(']').ok_or_else(|| {
                Error::MalformedPayload(format!("unterminated `[` in profile `{src}`"))
            })?;
            eigen.push(PlFunction::parse(&rest[..=close])?);
            rest = rest[close + 1..].trim_start();
        }
        SpectralProfile::new(eigen)
    }
}

/// The smoothing function `f_ε`.
pub fn smoothing_map(eps: &BigRational, x: &BigRational) -> BigRational {
    let half = eps / qi(2);
    if x <= &half {
        BigRational::zero()
    } else if x >= eps {
        BigRational::one()
    } else {
        qi(2) * x / eps - BigRational::one()
    }
}

impl fmt::Display for SpectralProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.eigen.iter().map(|e| e.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// A lower semicontinuous step function `[0,1] → Z≥0 ∪ {∞}`.
///
/// Breakpoints `0 = t_0 < … < t_m = 1` carry point values; the open pieces
/// between them carry constant values. Lower semicontinuity means each
/// point value is at most the adjacent piece values. The representation is
/// canonical: interior breakpoints where nothing changes are removed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RankFn {
    breaks: Vec<BigRational>,
    points: Vec<ExtNat>,
    pieces: Vec<ExtNat>,
}

/// Where a step function attains a value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Location {
    Point(BigRational),
    Piece(BigRational, BigRational),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Point(t) => write!(f, "t={t}"),
            Location::Piece(a, b) => write!(f, "t in ({a}, {b})"),
        }
    }
}

impl RankFn {
    pub fn new(breaks: Vec<BigRational>, points: Vec<ExtNat>, pieces: Vec<ExtNat>) -> Result<Self> {
        let bad = |m: &str| Err(Error::MalformedPayload(m.into()));
        if breaks.len() < 2 || points.len() != breaks.len() || pieces.len() + 1 != breaks.len() {
            return bad("step function needs breakpoints 0 and 1 and matching values");
        }
        if !breaks[0].is_zero() || !breaks[breaks.len() - 1].is_one() {
            return bad("breakpoints must start at 0 and end at 1");
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return bad("breakpoints must be strictly increasing");
        }
        let lsc = points.iter().enumerate().all(|(j, p)| {
            (j == 0 || *p <= pieces[j - 1]) && (j == pieces.len() || *p <= pieces[j])
        });
        if !lsc {
            return bad("step function is not lower semicontinuous");
        }
        Ok(Self::from_parts(breaks, points, pieces))
    }

    fn from_parts(breaks: Vec<BigRational>, points: Vec<ExtNat>, pieces: Vec<ExtNat>) -> Self {
        let mut out = RankFn {
            breaks: vec![breaks[0].clone()],
            points: vec![points[0]],
            pieces: Vec::new(),
        };
        for j in 1..breaks.len() {
            let last = j == breaks.len() - 1;
            let same = !last && pieces[j - 1] == points[j] && points[j] == pieces[j];
            if same {
                continue;
            }
            out.pieces.push(pieces[j - 1]);
            out.breaks.push(breaks[j].clone());
            out.points.push(points[j]);
        }
        out
    }

    pub fn constant(v: ExtNat) -> Self {
        RankFn {
            breaks: vec![BigRational::zero(), BigRational::one()],
            points: vec![v, v],
            pieces: vec![v],
        }
    }

    pub fn breaks(&self) -> &[BigRational] {
        &self.breaks
    }

    pub fn points(&self) -> &[ExtNat] {
        &self.points
    }

    pub fn pieces(&self) -> &[ExtNat] {
        &self.pieces
    }

    pub fn eval(&self, t: &BigRational) -> ExtNat {
        match self.breaks.binary_search(t) {
            Ok(i) => self.points[i],
            Err(i) => {
                assert!(i > 0 && i < self.breaks.len(), "t = {t} outside [0, 1]");
                self.pieces[i - 1]
            }
        }
    }

    /// `(left limit, value, right limit)` at `t`; missing sides repeat the value.
    pub fn limits_at(&self, t: &BigRational) -> (ExtNat, ExtNat, ExtNat) {
        match self.breaks.binary_search(t) {
            Ok(i) => {
                let p = self.points[i];
                let l = if i == 0 { p } else { self.pieces[i - 1] };
                let r = if i == self.pieces.len() { p } else { self.pieces[i] };
                (l, p, r)
            }
            Err(i) => {
                let v = self.pieces[i - 1];
                (v, v, v)
            }
        }
    }

    /// Merged breakpoints of several step functions, interleaved with the
    /// midpoints of the pieces between them. Every one of the functions is
    /// constant on each merged open piece, so these points see every value.
    pub fn sample_points(fns: &[&RankFn]) -> Vec<BigRational> {
        let breaks = merge_breaks(fns.iter().map(|f| f.breaks.as_slice()));
        let mut out = Vec::with_capacity(2 * breaks.len());
        for (j, t) in breaks.iter().enumerate() {
            if j > 0 {
                out.push(mid(&breaks[j - 1], t));
            }
            out.push(t.clone());
        }
        out
    }

    /// Merged breakpoints and the pieces between them as [`Location`]s.
    pub fn locations(fns: &[&RankFn]) -> Vec<(Location, BigRational)> {
        let breaks = merge_breaks(fns.iter().map(|f| f.breaks.as_slice()));
        let mut out = Vec::with_capacity(2 * breaks.len());
        for (j, t) in breaks.iter().enumerate() {
            if j > 0 {
                let a = &breaks[j - 1];
                out.push((Location::Piece(a.clone(), t.clone()), mid(a, t)));
            }
            out.push((Location::Point(t.clone()), t.clone()));
        }
        out
    }

    pub fn zip_with(&self, other: &RankFn, f: impl Fn(ExtNat, ExtNat) -> ExtNat) -> RankFn {
        let breaks = merge_breaks([self.breaks.as_slice(), other.breaks.as_slice()]);
        let points = breaks.iter().map(|t| f(self.eval(t), other.eval(t))).collect();
        let pieces = breaks
            .windows(2)
            .map(|w| {
                let m = mid(&w[0], &w[1]);
                f(self.eval(&m), other.eval(&m))
            })
            .collect();
        RankFn::from_parts(breaks, points, pieces)
    }

    pub fn map(&self, f: impl Fn(ExtNat) -> ExtNat) -> RankFn {
        RankFn::from_parts(
            self.breaks.clone(),
            self.points.iter().map(|&v| f(v)).collect(),
            self.pieces.iter().map(|&v| f(v)).collect(),
        )
    }

    pub fn leq(&self, other: &RankFn) -> bool {
        RankFn::sample_points(&[self, other])
            .iter()
            .all(|t| self.eval(t) <= other.eval(t))
    }

    /// Whether the upper semicontinuous envelope of `self` lies below `other`.
    pub fn usc_envelope_leq(&self, other: &RankFn) -> bool {
        RankFn::sample_points(&[self, other]).iter().all(|t| {
            let (l, p, r) = self.limits_at(t);
            l.max(p).max(r) <= other.eval(t)
        })
    }

    pub fn is_finite(&self) -> bool {
        self.pieces.iter().chain(&self.points).all(|v| v.is_finite())
    }

    pub fn is_constant(&self) -> bool {
        self.pieces.len() == 1 && self.points.iter().all(|&p| p == self.pieces[0])
    }

    pub fn min_value(&self) -> ExtNat {
        self.points.iter().chain(&self.pieces).copied().min().unwrap_or(ExtNat::ZERO)
    }

    pub fn max_value(&self) -> ExtNat {
        self.points.iter().chain(&self.pieces).copied().max().unwrap_or(ExtNat::ZERO)
    }

    /// The leftmost location where the maximum is attained.
    pub fn argmax(&self) -> Location {
        let best = self.max_value();
        RankFn::locations(&[self])
            .into_iter()
            .find(|(_, t)| self.eval(t) == best)
            .map(|(loc, _)| loc)
            .expect("step function has at least one location")
    }

    /// The leftmost breakpoint where the function is not locally constant.
    pub fn first_jump(&self) -> Option<BigRational> {
        (0..self.breaks.len())
            .find(|&i| {
                let (l, p, r) = self.limits_at(&self.breaks[i]);
                l != p || p != r
            })
            .map(|i| self.breaks[i].clone())
    }

    /// `t ↦ min{g(s) : |s − t| ≤ h}`, which is again lower semicontinuous.
    pub fn erode(&self, h: &BigRational) -> RankFn {
        let zero = BigRational::zero();
        let one = BigRational::one();
        let mut cands: Vec<BigRational> = vec![zero.clone(), one.clone()];
        for b in &self.breaks {
            for c in [b - h, b + h, b.clone()] {
                if c >= zero && c <= one {
                    cands.push(c);
                }
            }
        }
        cands.sort();
        cands.dedup();
        let window_min = |t: &BigRational| {
            let lo = t - h;
            let hi = t + h;
            let at_points = self
                .breaks
                .iter()
                .zip(&self.points)
                .filter(|(b, _)| **b >= lo && **b <= hi)
                .map(|(_, v)| *v);
            let at_pieces = self
                .breaks
                .windows(2)
                .zip(&self.pieces)
                .filter(|(w, _)| w[0] < hi && w[1] > lo)
                .map(|(_, v)| *v);
            at_points.chain(at_pieces).min().expect("window is nonempty")
        };
        let points = cands.iter().map(window_min).collect();
        let pieces = cands.windows(2).map(|w| window_min(&mid(&w[0], &w[1]))).collect();
        RankFn::from_parts(cands, points, pieces)
    }
}

impl fmt::Display for RankFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (j, t) in self.breaks.iter().enumerate() {
            if j > 0 {
                parts.push(format!("({}, {}):{}", self.breaks[j - 1], t, self.pieces[j - 1]));
            }
            parts.push(format!("{}:{}", t, self.points[j]));
        }
        write!(f, "rank{{{}}}", parts.join(", "))
    }
}

/// The Cu-semigroup of `C([0,1]) ⊗ M_n`, realized on rank functions.
///
/// Dirac evaluations `δ_t` are the extreme normalized functionals. The
/// order is pointwise, so it is decided by Dirac rays at the merged
/// breakpoints and piece midpoints. `x ≪ y` holds when `x` is finite and
/// its upper semicontinuous envelope lies below `y`: a chain with
/// supremum `y` eventually exceeds each finite value of `x` on a compact
/// neighbourhood, but never above a level where `y` itself is lower.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpectralModel {
    fiber: u32,
}

impl SpectralModel {
    pub fn new(fiber: u32) -> Self {
        assert!(fiber >= 1, "fiber dimension must be positive");
        SpectralModel { fiber }
    }

    pub fn fiber(&self) -> u32 {
        self.fiber
    }

    /// The class of the unit, the constant rank `n`.
    pub fn unit(&self) -> RankFn {
        RankFn::constant(ExtNat::Fin(self.fiber as u64))
    }

    pub fn parse_profile(&self, payload: &str) -> Result<SpectralProfile> {
        let p = SpectralProfile::parse(payload)?;
        if p.fiber() != self.fiber as usize {
            return Err(Error::MalformedPayload(format!(
                "profile has {} eigenvalues, model fiber is {}",
                p.fiber(),
                self.fiber
            )));
        }
        Ok(p)
    }

    pub fn parse_element(&self, payload: &str) -> Result<RankFn> {
        Ok(self.parse_profile(payload)?.rank())
    }
}

impl CuModel for SpectralModel {
    type Elem = RankFn;

    fn name(&self) -> String {
        format!("spectral({})", self.fiber)
    }

    fn zero(&self) -> RankFn {
        RankFn::constant(ExtNat::ZERO)
    }

    fn add(&self, x: &RankFn, y: &RankFn) -> RankFn {
        x.zip_with(y, |a, b| a + b)
    }

    fn leq(&self, x: &RankFn, y: &RankFn) -> bool {
        x.leq(y)
    }

    fn scale(&self, x: &RankFn, n: u64) -> RankFn {
        x.map(|v| v.scale(n))
    }

    fn infinity_times(&self, x: &RankFn) -> RankFn {
        x.map(ExtNat::infinity_times)
    }

    fn largest(&self) -> RankFn {
        RankFn::constant(ExtNat::Inf)
    }

    fn compactly_contained(&self, x: &RankFn, y: &RankFn) -> bool {
        x.is_finite() && x.usc_envelope_leq(y)
    }

    fn rays_for(&self, elems: &[&RankFn]) -> Vec<Ray> {
        RankFn::sample_points(elems).into_iter().map(Ray::Dirac).collect()
    }

    fn eval_ray(&self, ray: &Ray, x: &RankFn) -> ExtScalar {
        match ray {
            Ray::Dirac(t) => x.eval(t).into(),
            other => panic!("ray {other} does not belong to a spectral model"),
        }
    }

    fn order_determined_by_rays(&self) -> bool {
        true
    }

    /// Finite `w` forces `x < y` pointwise. Where `w = ∞` (an open set, by
    /// lower semicontinuity) nothing is constrained, and a bump of `x` there
    /// defeats every `r`.
    fn rc_strict_formula(&self, w: &RankFn) -> Option<ExtScalar> {
        Some(if w.is_finite() {
            ExtScalar::zero()
        } else {
            ExtScalar::INFINITY
        })
    }

    /// Step functions with breakpoints `{0, 1/2, 1}` and values at most
    /// `min(bound, 2)`, deduplicated after canonicalization.
    fn enumerate(&self, bound: u64) -> Vec<RankFn> {
        let top = bound.min(2);
        let breaks = vec![BigRational::zero(), q(1, 2), BigRational::one()];
        let mut out: Vec<RankFn> = Vec::new();
        for a in 0..=top {
            for b in 0..=top {
                for p0 in 0..=a {
                    for p1 in 0..=a.min(b) {
                        for p2 in 0..=b {
                            let f = RankFn::from_parts(
                                breaks.clone(),
                                [p0, p1, p2].map(ExtNat::Fin).to_vec(),
                                vec![ExtNat::Fin(a), ExtNat::Fin(b)],
                            );
                            if !out.contains(&f) {
                                out.push(f);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Erosions `min_{|s − t| ≤ 1/(j+1)} x(s)`, capped at `j`.
    fn canonical_chain(&self, x: &RankFn, len: usize) -> Vec<RankFn> {
        (1..=len as u64)
            .map(|j| {
                let cap = ExtNat::Fin(j);
                x.erode(&q(1, j as i64 + 1)).map(|v| v.min(cap))
            })
            .collect()
    }

    fn render(&self, x: &RankFn) -> String {
        x.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cucore::is_full;

    fn diag_t_1() -> SpectralProfile {
        SpectralProfile::identity_with_units(2)
    }

    #[test]
    fn rank_of_identity() {
        let a = SpectralProfile::identity_with_units(1);
        let r = a.rank();
        assert_eq!(r.eval(&q(0, 1)), ExtNat::Fin(0));
        assert_eq!(r.eval(&q(1, 1000)), ExtNat::Fin(1));
        assert_eq!(r.eval(&q(1, 1)), ExtNat::Fin(1));
        assert_eq!(r.breaks().len(), 2);
    }

    #[test]
    fn rank_at_positive_threshold() {
        let a = SpectralProfile::identity_with_units(1);
        let r = a.rank_function(&q(1, 2));
        // Dense rational sampling against t > 1/2.
        for j in 0..=240 {
            let t = q(j, 240);
            let expect = if t > q(1, 2) { 1 } else { 0 };
            assert_eq!(r.eval(&t), ExtNat::Fin(expect), "t = {t}");
        }
        let ones = SpectralProfile::parse("[0:1, 1:1] [0:1, 1:1]").unwrap();
        assert_eq!(ones.rank_function(&q(1, 2)), RankFn::constant(ExtNat::Fin(2)));
    }

    #[test]
    fn cutdown_examples() {
        let a = SpectralProfile::identity_with_units(1);
        let c = a.cutdown(&q(1, 2));
        let f = &c.eigenvalues()[0];
        assert_eq!(f.eval(&q(1, 4)), q(0, 1));
        assert_eq!(f.eval(&q(3, 4)), q(1, 4));
        assert_eq!(a.cutdown(&q(0, 1)), a);
        let quarter = SpectralProfile::parse("[0:1/4, 1:1/4]").unwrap();
        assert_eq!(
            quarter.cutdown(&q(1, 2)),
            SpectralProfile::parse("[0:0, 1:0]").unwrap()
        );
    }

    #[test]
    fn smoothing_examples() {
        let one = SpectralProfile::parse("[0:1, 1:1]").unwrap();
        assert_eq!(one.smooth(&q(1, 3)), one);
        let a = SpectralProfile::identity_with_units(1);
        assert_eq!(a.smooth(&q(1, 2)).eigenvalues()[0].eval(&q(3, 8)), q(1, 2));
        let small = SpectralProfile::parse("[0:1/8, 1:1/8]").unwrap();
        assert_eq!(
            small.smooth(&q(1, 2)),
            SpectralProfile::parse("[0:0, 1:0]").unwrap()
        );
    }

    #[test]
    fn dimension_examples() {
        let a = diag_t_1();
        assert_eq!(a.dimension_at(&q(0, 1)), ExtScalar::frac(1, 2));
        assert_eq!(a.dimension_at(&q(1, 2)), ExtScalar::one());
        let z = SpectralProfile::parse("[0:0, 1:0]").unwrap();
        assert_eq!(z.dimension_at(&q(1, 3)), ExtScalar::zero());
    }

    #[test]
    fn fullness() {
        let m = SpectralModel::new(1);
        let a = SpectralProfile::identity_with_units(1);
        assert!(!a.is_full());
        assert!(!is_full(&m, &a.rank()));
        let m2 = SpectralModel::new(2);
        assert!(diag_t_1().is_full());
        assert!(is_full(&m2, &diag_t_1().rank()));
    }

    #[test]
    fn parse_errors() {
        assert!(SpectralProfile::parse("[0:0, 1:2]").is_err());
        assert!(SpectralProfile::parse("[0:0, 1/2:1]").is_err());
        assert!(SpectralProfile::parse("[0:0 1:1]").is_err());
        assert!(SpectralProfile::parse("").is_err());
        assert!(SpectralModel::new(2).parse_element("[0:0, 1:1]").is_err());
    }

    #[test]
    fn pl_round_trip_and_simplification() {
        let f = PlFunction::parse("[0:0, 1/2:1/2, 1:1]").unwrap();
        assert_eq!(f, PlFunction::identity());
        let g = PlFunction::parse("[0:0, 1/3:1, 1:1/2]").unwrap();
        assert_eq!(PlFunction::parse(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn lsc_validation() {
        let b = vec![q(0, 1), q(1, 2), q(1, 1)];
        let f = ExtNat::Fin;
        assert!(RankFn::new(b.clone(), vec![f(0), f(2), f(1)], vec![f(1), f(1)]).is_err());
        let ok = RankFn::new(b, vec![f(0), f(1), f(1)], vec![f(1), f(1)]).unwrap();
        assert_eq!(ok.breaks().len(), 2);
    }

    #[test]
    fn compact_containment_uses_the_envelope() {
        let m = SpectralModel::new(1);
        let open = SpectralProfile::identity_with_units(1).rank();
        assert!(!m.compactly_contained(&open, &open));
        assert!(m.compactly_contained(&open, &RankFn::constant(ExtNat::Fin(1))));
        let one = RankFn::constant(ExtNat::Fin(1));
        assert!(m.compactly_contained(&one, &one));
    }

    #[test]
    fn erosion_chain_is_rapidly_increasing() {
        let m = SpectralModel::new(2);
        let x = diag_t_1().rank();
        let chain = m.canonical_chain(&x, 8);
        for w in chain.windows(2) {
            assert!(m.compactly_contained(&w[0], &w[1]));
        }
        assert!(chain.iter().all(|c| m.leq(c, &x)));
        let last = chain.last().unwrap();
        assert_eq!(last.eval(&q(1, 2)), ExtNat::Fin(2));
        assert_eq!(last.eval(&q(0, 1)), ExtNat::Fin(1));
    }

    #[test]
    fn stable_index_examples() {
        let a = diag_t_1();
        // Positive breakpoint values are 1 only, so m* = 2.
        assert_eq!(a.stable_index(&[]), 2);
        let b = SpectralProfile::parse("[0:1/4, 1:1]").unwrap();
        assert_eq!(b.stable_index(&[]), 5);
        let extra = [q(0, 1), q(1, 100), q(1, 1)];
        assert_eq!(a.stable_index(&[&extra]), 101);
        // Both eigenvalues equal 1/8 at t = 1/2, so m* = 9 rather than 5.
        let c = SpectralProfile::parse("[0:0, 1:1/4] [0:1/4, 1:0]").unwrap();
        assert_eq!(c.stable_index(&[]), 9);
    }
}
