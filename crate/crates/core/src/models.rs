//! Concrete models with a finite description: point functions, the
//! perforated monoid, the idempotent monoid and direct sums, plus the
//! [`AnyModel`] wrapper used by front ends that pick a model at runtime.

use std::fmt;

use crate::cucore::{CuModel, Ray};
use crate::error::{Error, Result};
use crate::functionals::has_normalizing_ray;
use crate::scalar::{ExtNat, ExtScalar};
use crate::spectral::{RankFn, SpectralModel};

/// Functions `P → Z≥0 ∪ {∞}` on a finite point set with pointwise order.
///
/// Point evaluations `δ_p` determine the order, so every comparison premise
/// forces the conclusion and the radius of comparison is `0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointFnModel {
    labels: Vec<String>,
}

impl PointFnModel {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Self {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        assert!(!labels.is_empty(), "point set must be nonempty");
        PointFnModel { labels }
    }

    /// Points labelled `p0, p1, …`.
    pub fn with_points(n: usize) -> Self {
        Self::new((0..n).map(|i| format!("p{i}")))
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn element(&self, values: &[ExtNat]) -> Result<Vec<ExtNat>> {
        if values.len() != self.dim() {
            return Err(Error::MalformedPayload(format!(
                "expected {} coordinates, got {}",
                self.dim(),
                values.len()
            )));
        }
        Ok(values.to_vec())
    }

    pub fn parse_element(&self, payload: &str) -> Result<Vec<ExtNat>> {
        let values = payload
            .split(',')
            .map(|s| parse_nat(s.trim()))
            .collect::<Result<Vec<_>>>()?;
        self.element(&values)
    }
}

fn parse_nat(s: &str) -> Result<ExtNat> {
    s.parse::<ExtNat>()
        .map_err(|e| Error::MalformedPayload(format!("`{s}`: {e}")))
}

impl CuModel for PointFnModel {
    type Elem = Vec<ExtNat>;

    fn name(&self) -> String {
        format!("pointfn({})", self.labels.join(","))
    }

    fn zero(&self) -> Self::Elem {
        vec![ExtNat::ZERO; self.dim()]
    }

    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        x.iter().zip(y).map(|(&a, &b)| a + b).collect()
    }

    fn leq(&self, x: &Self::Elem, y: &Self::Elem) -> bool {
        x.iter().zip(y).all(|(a, b)| a <= b)
    }

    fn scale(&self, x: &Self::Elem, n: u64) -> Self::Elem {
        x.iter().map(|a| a.scale(n)).collect()
    }

    fn infinity_times(&self, x: &Self::Elem) -> Self::Elem {
        x.iter().map(|a| a.infinity_times()).collect()
    }

    fn largest(&self) -> Self::Elem {
        vec![ExtNat::Inf; self.dim()]
    }

    /// In `Z≥0 ∪ {∞}` a chain with finite supremum stabilizes, and a chain
    /// with supremum `∞` passes every finite value, so `a ≪ b` exactly when
    /// `a ≤ b` and `a` is finite whenever `b` is infinite.
    fn compactly_contained(&self, x: &Self::Elem, y: &Self::Elem) -> bool {
        x.iter()
            .zip(y)
            .all(|(a, b)| a <= b && (b.is_finite() || a.is_finite()))
    }

    fn rays_for(&self, _elems: &[&Self::Elem]) -> Vec<Ray> {
        (0..self.dim()).map(Ray::Point).collect()
    }

    fn eval_ray(&self, ray: &Ray, x: &Self::Elem) -> ExtScalar {
        match ray {
            Ray::Point(i) => x[*i].into(),
            other => panic!("ray {other} does not belong to a point-function model"),
        }
    }

    fn describe_ray(&self, ray: &Ray) -> String {
        match ray {
            Ray::Point(i) => format!("delta_{}", self.labels[*i]),
            other => other.to_string(),
        }
    }

    fn order_determined_by_rays(&self) -> bool {
        true
    }

    /// With `w` finite the premise forces `x(p) < y(p)` at every point. An
    /// infinite coordinate of `w` leaves that point unconstrained, so no
    /// `r` works.
    fn rc_strict_formula(&self, w: &Self::Elem) -> Option<ExtScalar> {
        Some(if w.iter().all(|a| a.is_finite()) {
            ExtScalar::zero()
        } else {
            ExtScalar::INFINITY
        })
    }

    /// All finite vectors with coordinates at most `bound`, lexicographic.
    fn enumerate(&self, bound: u64) -> Vec<Self::Elem> {
        let mut out = vec![Vec::new()];
        for _ in 0..self.dim() {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<ExtNat>| {
                    (0..=bound).map(move |v| {
                        let mut next = prefix.clone();
                        next.push(ExtNat::Fin(v));
                        next
                    })
                })
                .collect();
        }
        out
    }

    /// `min(x, n·1)`.
    fn canonical_chain(&self, x: &Self::Elem, len: usize) -> Vec<Self::Elem> {
        (1..=len as u64)
            .map(|n| x.iter().map(|&a| a.min(ExtNat::Fin(n))).collect())
            .collect()
    }

    fn render(&self, x: &Self::Elem) -> String {
        x.iter()
            .map(ExtNat::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// `Z≥0 ∪ {∞}` with ordinary addition and the gapped order
/// `a ≤_k b ⟺ a = b, a = 0, a + k ≤ b, or b = ∞`.
///
/// The order is compatible with addition on the submonoid
/// `{0} ∪ [k, ∞]`, where it is the algebraic order of that numerical
/// semigroup. Elements strictly between `0` and `k` break compatibility:
/// `1 ≤_k 1` and `0 ≤_k 1`, yet `1 ≰_k 2` for `k ≥ 2`. They are kept
/// because the radius values relative to small `w` are defined through the
/// order and rays alone and do not use compatibility.
///
/// The only normalizable functional is the identity scaling, which cannot
/// see the gap: `x + r·m ≤ y` fails to force `x ≤_k y` exactly when some
/// integer `y − x` lies in `[r·m, k − 1]`. Hence `rc(S, m) = (k − 1)/m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PerforatedModel {
    gap: u64,
}

impl PerforatedModel {
    pub fn new(gap: u64) -> Self {
        assert!(gap >= 1, "perforation gap must be positive");
        PerforatedModel { gap }
    }

    pub fn gap(&self) -> u64 {
        self.gap
    }

    pub fn parse_element(&self, payload: &str) -> Result<ExtNat> {
        parse_nat(payload.trim())
    }
}

impl CuModel for PerforatedModel {
    type Elem = ExtNat;

    fn name(&self) -> String {
        format!("perforated({})", self.gap)
    }

    fn zero(&self) -> ExtNat {
        ExtNat::ZERO
    }

    fn add(&self, x: &ExtNat, y: &ExtNat) -> ExtNat {
        *x + *y
    }

    fn leq(&self, x: &ExtNat, y: &ExtNat) -> bool {
        match (*x, *y) {
            _ if x == y => true,
            (ExtNat::Fin(0), _) | (_, ExtNat::Inf) => true,
            (ExtNat::Fin(a), ExtNat::Fin(b)) => a.saturating_add(self.gap) <= b,
            (ExtNat::Inf, ExtNat::Fin(_)) => false,
        }
    }

    fn scale(&self, x: &ExtNat, n: u64) -> ExtNat {
        x.scale(n)
    }

    fn infinity_times(&self, x: &ExtNat) -> ExtNat {
        x.infinity_times()
    }

    fn largest(&self) -> ExtNat {
        ExtNat::Inf
    }

    /// Finite chains stabilize and a chain with supremum `∞` is unbounded,
    /// so it eventually lies `k` above any finite value.
    fn compactly_contained(&self, x: &ExtNat, y: &ExtNat) -> bool {
        self.leq(x, y) && (y.is_finite() || x.is_finite())
    }

    fn rays_for(&self, _elems: &[&ExtNat]) -> Vec<Ray> {
        vec![Ray::Scale]
    }

    fn eval_ray(&self, ray: &Ray, x: &ExtNat) -> ExtScalar {
        match ray {
            Ray::Scale => (*x).into(),
            other => panic!("ray {other} does not belong to a perforated model"),
        }
    }

    fn order_determined_by_rays(&self) -> bool {
        self.gap == 1
    }

    fn rc_formula(&self, w: &ExtNat) -> Option<ExtScalar> {
        match *w {
            ExtNat::Fin(0) => None,
            ExtNat::Fin(m) => Some(ExtScalar::frac((self.gap - 1) as i64, m as i64)),
            ExtNat::Inf => Some(ExtScalar::zero()),
        }
    }

    /// Strict premise `x + r·m < y`: a violation needs an integer `y − x`
    /// in `(r·m, k − 1]`, so the infimum is again `(k − 1)/m`.
    fn rc_strict_formula(&self, w: &ExtNat) -> Option<ExtScalar> {
        match *w {
            ExtNat::Fin(0) | ExtNat::Inf => None,
            ExtNat::Fin(m) => Some(ExtScalar::frac((self.gap - 1) as i64, m as i64)),
        }
    }

    fn enumerate(&self, bound: u64) -> Vec<ExtNat> {
        (0..=bound).map(ExtNat::Fin).collect()
    }

    /// The element itself when finite, `n·k` for `∞`.
    fn canonical_chain(&self, x: &ExtNat, len: usize) -> Vec<ExtNat> {
        (1..=len as u64)
            .map(|n| match x {
                ExtNat::Fin(_) => *x,
                ExtNat::Inf => ExtNat::Fin(n * self.gap),
            })
            .collect()
    }

    fn render(&self, x: &ExtNat) -> String {
        x.to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Idem {
    Zero,
    U,
}

impl fmt::Display for Idem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Idem::Zero => "0",
            Idem::U => "u",
        })
    }
}

/// `{0, u}` with `u + u = u`. Every functional sends `u` to `0` or `∞`, so
/// no functional is normalizable at `u`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IdempotentModel;

impl IdempotentModel {
    pub fn parse_element(&self, payload: &str) -> Result<Idem> {
        match payload.trim() {
            "0" => Ok(Idem::Zero),
            "u" => Ok(Idem::U),
            other => Err(Error::MalformedPayload(format!(
                "`{other}`: expected `0` or `u`"
            ))),
        }
    }
}

impl CuModel for IdempotentModel {
    type Elem = Idem;

    fn name(&self) -> String {
        "idempotent".into()
    }

    fn zero(&self) -> Idem {
        Idem::Zero
    }

    fn add(&self, x: &Idem, y: &Idem) -> Idem {
        (*x).max(*y)
    }

    fn leq(&self, x: &Idem, y: &Idem) -> bool {
        x <= y
    }

    fn scale(&self, x: &Idem, n: u64) -> Idem {
        if n == 0 {
            Idem::Zero
        } else {
            *x
        }
    }

    fn infinity_times(&self, x: &Idem) -> Idem {
        *x
    }

    fn largest(&self) -> Idem {
        Idem::U
    }

    /// Increasing chains in a two-element set are eventually constant.
    fn compactly_contained(&self, x: &Idem, y: &Idem) -> bool {
        x <= y
    }

    fn rays_for(&self, _elems: &[&Idem]) -> Vec<Ray> {
        vec![Ray::Indicator]
    }

    fn eval_ray(&self, ray: &Ray, x: &Idem) -> ExtScalar {
        match (ray, x) {
            (Ray::Indicator, Idem::Zero) => ExtScalar::zero(),
            (Ray::Indicator, Idem::U) => ExtScalar::INFINITY,
            (other, _) => panic!("ray {other} does not belong to the idempotent model"),
        }
    }

    fn order_determined_by_rays(&self) -> bool {
        true
    }

    fn enumerate(&self, _bound: u64) -> Vec<Idem> {
        vec![Idem::Zero, Idem::U]
    }

    fn canonical_chain(&self, x: &Idem, len: usize) -> Vec<Idem> {
        vec![*x; len]
    }

    fn render(&self, x: &Idem) -> String {
        x.to_string()
    }
}

/// `S ⊕ T` with componentwise structure. Rays are the disjoint union of
/// the component rays.
///
/// A comparison premise splits into one premise per component, and a
/// violation in one component lifts to the sum by pairing it with
/// `(0, largest)` in the other. So `rc` of a sum is the larger component
/// value, exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectSum<A, B> {
    pub left: A,
    pub right: B,
}

impl<A: CuModel, B: CuModel> DirectSum<A, B> {
    pub fn new(left: A, right: B) -> Self {
        DirectSum { left, right }
    }

    fn all_left(&self, bound: u64) -> Vec<A::Elem> {
        let mut v = self.left.enumerate(bound);
        v.extend(self.left.extra_targets(bound));
        v
    }

    fn all_right(&self, bound: u64) -> Vec<B::Elem> {
        let mut v = self.right.enumerate(bound);
        v.extend(self.right.extra_targets(bound));
        v
    }
}

impl<A: CuModel, B: CuModel> CuModel for DirectSum<A, B> {
    type Elem = (A::Elem, B::Elem);

    fn name(&self) -> String {
        format!("sum({}, {})", self.left.name(), self.right.name())
    }

    fn zero(&self) -> Self::Elem {
        (self.left.zero(), self.right.zero())
    }

    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        (self.left.add(&x.0, &y.0), self.right.add(&x.1, &y.1))
    }

    fn leq(&self, x: &Self::Elem, y: &Self::Elem) -> bool {
        self.left.leq(&x.0, &y.0) && self.right.leq(&x.1, &y.1)
    }

    fn scale(&self, x: &Self::Elem, n: u64) -> Self::Elem {
        (self.left.scale(&x.0, n), self.right.scale(&x.1, n))
    }

    fn infinity_times(&self, x: &Self::Elem) -> Self::Elem {
        (self.left.infinity_times(&x.0), self.right.infinity_times(&x.1))
    }

    fn largest(&self) -> Self::Elem {
        (self.left.largest(), self.right.largest())
    }

    fn compactly_contained(&self, x: &Self::Elem, y: &Self::Elem) -> bool {
        self.left.compactly_contained(&x.0, &y.0) && self.right.compactly_contained(&x.1, &y.1)
    }

    fn rays_for(&self, elems: &[&Self::Elem]) -> Vec<Ray> {
        let lefts: Vec<&A::Elem> = elems.iter().map(|e| &e.0).collect();
        let rights: Vec<&B::Elem> = elems.iter().map(|e| &e.1).collect();
        let mut rays: Vec<Ray> = self
            .left
            .rays_for(&lefts)
            .into_iter()
            .map(|r| Ray::Left(Box::new(r)))
            .collect();
        rays.extend(
            self.right
                .rays_for(&rights)
                .into_iter()
                .map(|r| Ray::Right(Box::new(r))),
        );
        rays
    }

    fn eval_ray(&self, ray: &Ray, x: &Self::Elem) -> ExtScalar {
        match ray {
            Ray::Left(r) => self.left.eval_ray(r, &x.0),
            Ray::Right(r) => self.right.eval_ray(r, &x.1),
            other => panic!("ray {other} does not belong to a direct sum"),
        }
    }

    fn describe_ray(&self, ray: &Ray) -> String {
        match ray {
            Ray::Left(r) => format!("left.{}", self.left.describe_ray(r)),
            Ray::Right(r) => format!("right.{}", self.right.describe_ray(r)),
            other => other.to_string(),
        }
    }

    fn order_determined_by_rays(&self) -> bool {
        self.left.order_determined_by_rays() && self.right.order_determined_by_rays()
    }

    fn rays_complete(&self) -> bool {
        self.left.rays_complete() && self.right.rays_complete()
    }

    fn rc_formula(&self, w: &Self::Elem) -> Option<ExtScalar> {
        let a = self.left.rc_formula(&w.0)?;
        let b = self.right.rc_formula(&w.1)?;
        Some(a.max(b))
    }

    /// If one component admits no normalized functional at its part of `w`
    /// that component is unconstrained by the strict premise and every `r`
    /// fails.
    fn rc_strict_formula(&self, w: &Self::Elem) -> Option<ExtScalar> {
        let l = has_normalizing_ray(&self.left, &w.0);
        let r = has_normalizing_ray(&self.right, &w.1);
        match (l, r) {
            (true, true) => {
                let a = self.left.rc_strict_formula(&w.0)?;
                let b = self.right.rc_strict_formula(&w.1)?;
                Some(a.max(b))
            }
            (false, false) => None,
            _ => Some(ExtScalar::INFINITY),
        }
    }

    fn enumerate(&self, bound: u64) -> Vec<Self::Elem> {
        let rights = self.right.enumerate(bound);
        self.left
            .enumerate(bound)
            .into_iter()
            .flat_map(|a| rights.iter().map(move |b| (a.clone(), b.clone())))
            .collect()
    }

    /// Every pair that involves an extra target of some component.
    fn extra_targets(&self, bound: u64) -> Vec<Self::Elem> {
        let base_l = self.left.enumerate(bound);
        let base_r = self.right.enumerate(bound);
        let all_l = self.all_left(bound);
        let all_r = self.all_right(bound);
        let mut out = Vec::new();
        for a in &all_l {
            for b in &all_r {
                if !(base_l.contains(a) && base_r.contains(b)) {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
        out
    }

    fn canonical_chain(&self, x: &Self::Elem, len: usize) -> Vec<Self::Elem> {
        self.left
            .canonical_chain(&x.0, len)
            .into_iter()
            .zip(self.right.canonical_chain(&x.1, len))
            .collect()
    }

    fn render(&self, x: &Self::Elem) -> String {
        format!("<{}> <{}>", self.left.render(&x.0), self.right.render(&x.1))
    }
}

/// A model chosen at runtime.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyModel {
    PointFn(PointFnModel),
    Perforated(PerforatedModel),
    Idempotent(IdempotentModel),
    Spectral(SpectralModel),
    Sum(Box<DirectSum<AnyModel, AnyModel>>),
}

/// An element of an [`AnyModel`].
#[derive(Clone, Debug, PartialEq)]
pub enum AnyElement {
    PointFn(Vec<ExtNat>),
    Perforated(ExtNat),
    Idempotent(Idem),
    Spectral(RankFn),
    Sum(Box<(AnyElement, AnyElement)>),
}

/// Bridges a concrete model and the [`AnyElement`] variant holding its
/// elements.
trait Variant: CuModel {
    fn wrap(&self, e: Self::Elem) -> AnyElement;
    fn unwrap<'a>(&self, e: &'a AnyElement) -> &'a Self::Elem;
}

fn mismatch(model: &str, e: &AnyElement) -> ! {
    panic!("element {e:?} does not belong to model {model}")
}

macro_rules! variant {
    ($model:ty, $tag:ident) => {
        impl Variant for $model {
            fn wrap(&self, e: Self::Elem) -> AnyElement {
                AnyElement::$tag(e)
            }
            fn unwrap<'a>(&self, e: &'a AnyElement) -> &'a Self::Elem {
                match e {
                    AnyElement::$tag(v) => v,
                    other => mismatch(&self.name(), other),
                }
            }
        }
    };
}

variant!(PointFnModel, PointFn);
variant!(PerforatedModel, Perforated);
variant!(IdempotentModel, Idempotent);
variant!(SpectralModel, Spectral);

impl Variant for DirectSum<AnyModel, AnyModel> {
    fn wrap(&self, e: Self::Elem) -> AnyElement {
        AnyElement::Sum(Box::new(e))
    }
    fn unwrap<'a>(&self, e: &'a AnyElement) -> &'a Self::Elem {
        match e {
            AnyElement::Sum(pair) => pair,
            other => mismatch(&self.name(), other),
        }
    }
}

macro_rules! with_model {
    ($self:expr, |$m:ident| $body:expr) => {
        match $self {
            AnyModel::PointFn($m) => $body,
            AnyModel::Perforated($m) => $body,
            AnyModel::Idempotent($m) => $body,
            AnyModel::Spectral($m) => $body,
            AnyModel::Sum(boxed) => {
                let $m = &**boxed;
                $body
            }
        }
    };
}

impl AnyModel {
    pub fn perforated(gap: u64) -> Self {
        AnyModel::Perforated(PerforatedModel::new(gap))
    }

    pub fn point_fn<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Self {
        AnyModel::PointFn(PointFnModel::new(labels))
    }

    pub fn sum(left: AnyModel, right: AnyModel) -> Self {
        AnyModel::Sum(Box::new(DirectSum::new(left, right)))
    }

    /// Parses a model expression such as `perforated(4)`, `pointfn(p, q)`,
    /// `idempotent`, `spectral(2)` or `sum(perforated(3), idempotent)`.
    pub fn parse(src: &str) -> Result<AnyModel> {
        let src = src.trim();
        let (head, args) = match src.find('(') {
            Some(open) => {
                if !src.ends_with(')') {
                    return Err(Error::UnknownModel(src.into()));
                }
                (src[..open].trim(), Some(&src[open + 1..src.len() - 1]))
            }
            None => (src, None),
        };
        let bad_args = || Error::MalformedPayload(format!("bad parameters in `{src}`"));
        let positive = |s: &str| -> Result<u64> {
            match s.trim().parse::<u64>() {
                Ok(n) if n >= 1 => Ok(n),
                _ => Err(bad_args()),
            }
        };
        match (head, args) {
            ("idempotent", None) => Ok(AnyModel::Idempotent(IdempotentModel)),
            ("perforated", Some(a)) => Ok(AnyModel::perforated(positive(a)?)),
            ("spectral", Some(a)) => {
                let n = positive(a)?;
                Ok(AnyModel::Spectral(SpectralModel::new(
                    u32::try_from(n).map_err(|_| bad_args())?,
                )))
            }
            ("pointfn", Some(a)) => {
                let labels: Vec<&str> = a.split(',').map(str::trim).collect();
                if labels.iter().any(|l| l.is_empty()) {
                    return Err(bad_args());
                }
                let mut sorted = labels.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != labels.len() {
                    return Err(Error::MalformedPayload(format!(
                        "duplicate point label in `{src}`"
                    )));
                }
                Ok(AnyModel::point_fn(labels))
            }
            ("sum", Some(a)) => {
                let parts = split_top_level(a, ',');
                if parts.len() != 2 {
                    return Err(bad_args());
                }
                Ok(AnyModel::sum(
                    AnyModel::parse(parts[0])?,
                    AnyModel::parse(parts[1])?,
                ))
            }
            _ => Err(Error::UnknownModel(src.into())),
        }
    }

    /// Builds an element from its textual payload.
    ///
    /// Payload syntax: point functions `1, 2, inf`; perforated `3` or `inf`;
    /// idempotent `0` or `u`; spectral one bracketed breakpoint list per
    /// eigenvalue, `[0:0, 1:1] [0:1, 1:1]`; sums `<left> <right>`.
    pub fn make_element(&self, payload: &str) -> Result<AnyElement> {
        Ok(match self {
            AnyModel::PointFn(m) => AnyElement::PointFn(m.parse_element(payload)?),
            AnyModel::Perforated(m) => AnyElement::Perforated(m.parse_element(payload)?),
            AnyModel::Idempotent(m) => AnyElement::Idempotent(m.parse_element(payload)?),
            AnyModel::Spectral(m) => AnyElement::Spectral(m.parse_element(payload)?),
            AnyModel::Sum(s) => {
                let parts = split_angle_groups(payload)?;
                if parts.len() != 2 {
                    return Err(Error::MalformedPayload(format!(
                        "sum payload needs `<left> <right>`, got `{}`",
                        payload.trim()
                    )));
                }
                AnyElement::Sum(Box::new((
                    s.left.make_element(parts[0])?,
                    s.right.make_element(parts[1])?,
                )))
            }
        })
    }
}

/// Splits at `sep` outside parentheses.
fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut depth = 0usize;
    let mut start = 0;
    let mut out = Vec::new();
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            c if c == sep && depth == 0 => {
                out.push(s[start..i].trim());
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

/// Extracts the contents of top-level `<…>` groups.
fn split_angle_groups(s: &str) -> Result<Vec<&str>> {
    let mut depth = 0usize;
    let mut start = 0;
    let mut out = Vec::new();
    for (i, c) in s.char_indices() {
        match c {
            '<' => {
                if depth == 0 {
                    start = i + 1;
                }
                depth += 1;
            }
            '>' => {
                if depth == 0 {
                    return Err(Error::MalformedPayload(format!("unbalanced `>` in `{s}`")));
                }
                depth -= 1;
                if depth == 0 {
                    out.push(s[start..i].trim());
                }
            }
            c if depth == 0 && !c.is_whitespace() => {
                return Err(Error::MalformedPayload(format!(
                    "unexpected `{c}` outside `<…>` in `{s}`"
                )));
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::MalformedPayload(format!("unbalanced `<` in `{s}`")));
    }
    Ok(out)
}

impl CuModel for AnyModel {
    type Elem = AnyElement;

    fn name(&self) -> String {
        with_model!(self, |m| m.name())
    }

    fn zero(&self) -> AnyElement {
        with_model!(self, |m| m.wrap(m.zero()))
    }

    fn add(&self, x: &AnyElement, y: &AnyElement) -> AnyElement {
        with_model!(self, |m| m.wrap(m.add(m.unwrap(x), m.unwrap(y))))
    }

    fn leq(&self, x: &AnyElement, y: &AnyElement) -> bool {
        with_model!(self, |m| m.leq(m.unwrap(x), m.unwrap(y)))
    }

    fn scale(&self, x: &AnyElement, n: u64) -> AnyElement {
        with_model!(self, |m| m.wrap(m.scale(m.unwrap(x), n)))
    }

    fn infinity_times(&self, x: &AnyElement) -> AnyElement {
        with_model!(self, |m| m.wrap(m.infinity_times(m.unwrap(x))))
    }

    fn largest(&self) -> AnyElement {
        with_model!(self, |m| m.wrap(m.largest()))
    }

    fn compactly_contained(&self, x: &AnyElement, y: &AnyElement) -> bool {
        with_model!(self, |m| m.compactly_contained(m.unwrap(x), m.unwrap(y)))
    }

    fn rays_for(&self, elems: &[&AnyElement]) -> Vec<Ray> {
        with_model!(self, |m| {
            let inner: Vec<_> = elems.iter().map(|e| m.unwrap(e)).collect();
            m.rays_for(&inner)
        })
    }

    fn eval_ray(&self, ray: &Ray, x: &AnyElement) -> ExtScalar {
        with_model!(self, |m| m.eval_ray(ray, m.unwrap(x)))
    }

    fn describe_ray(&self, ray: &Ray) -> String {
        with_model!(self, |m| m.describe_ray(ray))
    }

    fn order_determined_by_rays(&self) -> bool {
        with_model!(self, |m| m.order_determined_by_rays())
    }

    fn rays_complete(&self) -> bool {
        with_model!(self, |m| m.rays_complete())
    }

    fn rc_formula(&self, w: &AnyElement) -> Option<ExtScalar> {
        with_model!(self, |m| m.rc_formula(m.unwrap(w)))
    }

    fn rc_strict_formula(&self, w: &AnyElement) -> Option<ExtScalar> {
        with_model!(self, |m| m.rc_strict_formula(m.unwrap(w)))
    }

    fn enumerate(&self, bound: u64) -> Vec<AnyElement> {
        with_model!(self, |m| m
            .enumerate(bound)
            .into_iter()
            .map(|e| m.wrap(e))
            .collect())
    }

    fn extra_targets(&self, bound: u64) -> Vec<AnyElement> {
        with_model!(self, |m| m
            .extra_targets(bound)
            .into_iter()
            .map(|e| m.wrap(e))
            .collect())
    }

    fn canonical_chain(&self, x: &AnyElement, len: usize) -> Vec<AnyElement> {
        with_model!(self, |m| m
            .canonical_chain(m.unwrap(x), len)
            .into_iter()
            .map(|e| m.wrap(e))
            .collect())
    }

    fn render(&self, x: &AnyElement) -> String {
        with_model!(self, |m| m.render(m.unwrap(x)))
    }
}

impl fmt::Display for AnyModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cucore::{ideal_membership, is_full};

    fn fin(v: &[u64]) -> Vec<ExtNat> {
        v.iter().map(|&a| ExtNat::Fin(a)).collect()
    }

    #[test]
    fn point_fn_payloads() {
        let m = PointFnModel::new(["p", "q"]);
        assert_eq!(m.parse_element("1, 2").unwrap(), fin(&[1, 2]));
        assert_eq!(
            m.parse_element("inf,0").unwrap(),
            vec![ExtNat::Inf, ExtNat::ZERO]
        );
        assert!(matches!(m.parse_element("1"), Err(Error::MalformedPayload(_))));
        assert!(matches!(m.parse_element("1, -2"), Err(Error::MalformedPayload(_))));
    }

    #[test]
    fn largest_elements() {
        assert_eq!(PointFnModel::new(["p", "q"]).largest(), vec![ExtNat::Inf; 2]);
        assert_eq!(PerforatedModel::new(2).largest(), ExtNat::Inf);
        assert_eq!(IdempotentModel.largest(), Idem::U);
        let s = DirectSum::new(PerforatedModel::new(2), IdempotentModel);
        assert_eq!(s.largest(), (ExtNat::Inf, Idem::U));
    }

    #[test]
    fn infinity_times_examples() {
        assert_eq!(PerforatedModel::new(3).infinity_times(&ExtNat::Fin(2)), ExtNat::Inf);
        let m = PointFnModel::new(["p", "q"]);
        assert_eq!(m.infinity_times(&fin(&[1, 0])), vec![ExtNat::Inf, ExtNat::ZERO]);
        assert_eq!(IdempotentModel.infinity_times(&Idem::U), Idem::U);
        // Direct chain: n·u is u for every n ≥ 1.
        assert!((1..5).all(|n| IdempotentModel.scale(&Idem::U, n) == Idem::U));
    }

    #[test]
    fn fullness_and_ideals() {
        let m = PointFnModel::new(["p", "q"]);
        assert!(!is_full(&m, &fin(&[1, 0])));
        assert!(is_full(&PerforatedModel::new(4), &ExtNat::Fin(1)));
        assert!(ideal_membership(&m, &fin(&[1, 0]), &fin(&[5, 0])));
        assert!(!ideal_membership(&m, &fin(&[1, 0]), &fin(&[0, 1])));
        assert!(ideal_membership(&IdempotentModel, &Idem::U, &Idem::U));
    }

    #[test]
    fn compact_containment_examples() {
        let m = PointFnModel::new(["p", "q"]);
        assert!(m.compactly_contained(&fin(&[1, 1]), &fin(&[1, 1])));
        let inf0 = vec![ExtNat::Inf, ExtNat::ZERO];
        assert!(!m.compactly_contained(&inf0, &inf0));
        // The chain (n, 0) has supremum (∞, 0) but never reaches it.
        let chain = m.canonical_chain(&inf0, 50);
        assert!(chain.iter().all(|c| !m.leq(&inf0, c)));
        let p = PerforatedModel::new(3);
        assert!(p.compactly_contained(&ExtNat::Fin(7), &ExtNat::Inf));
        let chain = p.canonical_chain(&ExtNat::Inf, 10);
        assert!(chain.iter().any(|c| p.leq(&ExtNat::Fin(7), c)));
    }

    #[test]
    fn perforated_order_table() {
        let p = PerforatedModel::new(4);
        let f = ExtNat::Fin;
        assert!(p.leq(&f(0), &f(3)));
        assert!(p.leq(&f(2), &f(2)));
        assert!(!p.leq(&f(1), &f(4)));
        assert!(p.leq(&f(1), &f(5)));
        assert!(p.leq(&f(9), &ExtNat::Inf));
        assert!(!p.leq(&ExtNat::Inf, &f(9)));
    }

    #[test]
    fn perforated_order_is_a_partial_order() {
        for k in 1..=5 {
            let p = PerforatedModel::new(k);
            let vals: Vec<ExtNat> = (0..14).map(ExtNat::Fin).chain([ExtNat::Inf]).collect();
            for a in &vals {
                assert!(p.leq(a, a));
                for b in &vals {
                    if p.leq(a, b) && p.leq(b, a) {
                        assert_eq!(a, b);
                    }
                    for c in &vals {
                        if p.leq(a, b) && p.leq(b, c) {
                            assert!(p.leq(a, c));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn perforated_order_is_compatible_on_the_gap_submonoid() {
        for k in 1..=5 {
            let p = PerforatedModel::new(k);
            let vals: Vec<ExtNat> = [0]
                .into_iter()
                .chain(k..k + 14)
                .map(ExtNat::Fin)
                .chain([ExtNat::Inf])
                .collect();
            for a in &vals {
                for b in vals.iter().filter(|b| p.leq(a, b)) {
                    for c in &vals {
                        for d in vals.iter().filter(|d| p.leq(c, d)) {
                            assert!(p.leq(&(*a + *c), &(*b + *d)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn perforated_order_is_not_compatible_below_the_gap() {
        let p = PerforatedModel::new(2);
        let (zero, one) = (ExtNat::Fin(0), ExtNat::Fin(1));
        assert!(p.leq(&one, &one) && p.leq(&zero, &one));
        assert!(!p.leq(&(one + zero), &(one + one)));
    }

    #[test]
    fn any_model_parsing() {
        assert_eq!(AnyModel::parse("perforated(4)").unwrap(), AnyModel::perforated(4));
        assert_eq!(AnyModel::parse(" pointfn(p, q) ").unwrap(), AnyModel::point_fn(["p", "q"]));
        let s = AnyModel::parse("sum(perforated(3), pointfn(a,b))").unwrap();
        assert_eq!(s.name(), "sum(perforated(3), pointfn(a,b))");
        assert!(matches!(AnyModel::parse("banach(2)"), Err(Error::UnknownModel(_))));
        assert!(matches!(
            AnyModel::parse("perforated(0)"),
            Err(Error::MalformedPayload(_))
        ));
        assert!(matches!(
            AnyModel::parse("pointfn(p,p)"),
            Err(Error::MalformedPayload(_))
        ));
    }

    #[test]
    fn sum_payload_round_trip() {
        let s = AnyModel::parse("sum(perforated(3), pointfn(a,b))").unwrap();
        let e = s.make_element("<2> <1, inf>").unwrap();
        assert_eq!(s.render(&e), "<2> <1, inf>");
        assert_eq!(s.make_element(&s.render(&e)).unwrap(), e);
        assert!(s.make_element("<2>").is_err());
        assert!(s.make_element("2 <1, 1>").is_err());
    }

    #[test]
    fn sum_extra_targets_pair_with_largest() {
        let s = DirectSum::new(PerforatedModel::new(3), PerforatedModel::new(2));
        let extra = s.extra_targets(2);
        assert!(extra.contains(&(ExtNat::Fin(1), ExtNat::Inf)));
        assert!(extra.contains(&(ExtNat::Inf, ExtNat::Inf)));
        assert!(!extra.contains(&(ExtNat::Fin(1), ExtNat::Fin(1))));
    }
}
