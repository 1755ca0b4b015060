//! Generators for models, elements, chains and spectral profiles.
//!
//! All generators are proptest strategies, so failing cases shrink: integer
//! values shrink toward `0` (or toward the smallest admissible value),
//! `∞` shrinks to a finite value, breakpoint sets shrink by dropping
//! breakpoints, and chains shrink by dropping increments.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::collection::vec;
use proptest::prelude::*;
use proptest::sample::subsequence;

use crate::cucore::CuModel;
use crate::models::{AnyElement, AnyModel, Idem, IdempotentModel, PointFnModel};
use crate::scalar::ExtNat;
use crate::spectral::{PlFunction, RankFn, SpectralModel, SpectralProfile};

/// The model families of the catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    PointFn,
    Perforated,
    Idempotent,
    Spectral,
    Sum,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::PointFn,
        Family::Perforated,
        Family::Idempotent,
        Family::Spectral,
        Family::Sum,
    ];
}

/// Constraints on generated element values.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ElemSpec {
    /// Values at least `1` everywhere, which makes the element full.
    pub full: bool,
    /// Allow `∞` values.
    pub infinite: bool,
    /// Largest finite value; `None` picks a per-model default.
    pub bound: Option<u64>,
}

impl ElemSpec {
    pub const ANY: ElemSpec = ElemSpec {
        full: false,
        infinite: true,
        bound: None,
    };
    pub const FULL: ElemSpec = ElemSpec {
        full: true,
        infinite: true,
        bound: None,
    };
    pub const FULL_FINITE: ElemSpec = ElemSpec {
        full: true,
        infinite: false,
        bound: None,
    };
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Default largest value: past the gap of a perforated model, small
/// elsewhere.
pub fn default_bound(model: &AnyModel) -> u64 {
    match model {
        AnyModel::Perforated(p) => 3 * p.gap() + 2,
        AnyModel::PointFn(_) => 4,
        AnyModel::Spectral(_) => 3,
        AnyModel::Idempotent(_) => 1,
        AnyModel::Sum(s) => default_bound(&s.left).max(default_bound(&s.right)),
    }
}

fn arb_nat(lo: u64, hi: u64, infinite: bool) -> BoxedStrategy<ExtNat> {
    let hi = hi.max(lo);
    if infinite {
        prop_oneof![8 => (lo..=hi).prop_map(ExtNat::Fin), 1 => Just(ExtNat::Inf)].boxed()
    } else {
        (lo..=hi).prop_map(ExtNat::Fin).boxed()
    }
}

fn simple_model(family: Family) -> BoxedStrategy<AnyModel> {
    match family {
        Family::PointFn => (1..=3usize)
            .prop_map(|n| AnyModel::PointFn(PointFnModel::with_points(n)))
            .boxed(),
        Family::Perforated => (1..=6u64).prop_map(AnyModel::perforated).boxed(),
        Family::Idempotent => Just(AnyModel::Idempotent(IdempotentModel)).boxed(),
        Family::Spectral => (1..=3u32)
            .prop_map(|n| AnyModel::Spectral(SpectralModel::new(n)))
            .boxed(),
        Family::Sum => {
            let part = || {
                prop_oneof![
                    simple_model(Family::PointFn),
                    simple_model(Family::Perforated),
                    simple_model(Family::Idempotent),
                    simple_model(Family::Spectral),
                ]
            };
            (part(), part())
                .prop_map(|(a, b)| AnyModel::sum(a, b))
                .boxed()
        }
    }
}

/// Models of one family.
pub fn arb_model_of(family: Family) -> BoxedStrategy<AnyModel> {
    simple_model(family)
}

/// Any catalog model; sums are two simple summands.
pub fn arb_model() -> BoxedStrategy<AnyModel> {
    prop_oneof![
        2 => simple_model(Family::PointFn),
        3 => simple_model(Family::Perforated),
        1 => simple_model(Family::Idempotent),
        2 => simple_model(Family::Spectral),
        3 => simple_model(Family::Sum),
    ]
    .boxed()
}

/// Models small enough for exhaustive bounded searches.
pub fn arb_small_model() -> BoxedStrategy<AnyModel> {
    let part = || {
        prop_oneof![
            Just(AnyModel::PointFn(PointFnModel::with_points(1))),
            (1..=4u64).prop_map(AnyModel::perforated),
            Just(AnyModel::Idempotent(IdempotentModel)),
        ]
    };
    prop_oneof![
        2 => (1..=6u64).prop_map(AnyModel::perforated),
        1 => (1..=2usize).prop_map(|n| AnyModel::PointFn(PointFnModel::with_points(n))),
        1 => Just(AnyModel::Idempotent(IdempotentModel)),
        1 => Just(AnyModel::Spectral(SpectralModel::new(1))),
        2 => (part(), part()).prop_map(|(a, b)| AnyModel::sum(a, b)),
    ]
    .boxed()
}

/// Models whose components are all perforated, with sums allowed.
pub fn arb_perforated_or_sum() -> BoxedStrategy<AnyModel> {
    let other = prop_oneof![
        (1..=6u64).prop_map(AnyModel::perforated),
        simple_model(Family::PointFn),
        simple_model(Family::Idempotent),
    ];
    prop_oneof![
        (1..=6u64).prop_map(AnyModel::perforated),
        ((1..=6u64).prop_map(AnyModel::perforated), other)
            .prop_map(|(a, b)| AnyModel::sum(a, b)),
    ]
    .boxed()
}

/// Purely infinite models: every component idempotent.
pub fn arb_purely_infinite_model() -> BoxedStrategy<AnyModel> {
    let idem = || AnyModel::Idempotent(IdempotentModel);
    prop_oneof![
        Just(idem()),
        Just(AnyModel::sum(idem(), idem())),
        Just(AnyModel::sum(idem(), AnyModel::sum(idem(), idem()))),
    ]
    .boxed()
}

/// Lower semicontinuous step functions with breakpoints on the `1/8`
/// grid. Point values sit at or below the adjacent pieces.
pub fn arb_rank_fn(lo: u64, hi: u64, infinite: bool) -> BoxedStrategy<RankFn> {
    let inner: Vec<i64> = (1..8).collect();
    subsequence(inner, 0..=3)
        .prop_flat_map(move |inner| {
            let pieces = vec(arb_nat(lo, hi, infinite), inner.len() + 1);
            let drops = vec(prop_oneof![3 => Just(0u64), 1 => 1..=2u64], inner.len() + 2);
            (Just(inner), pieces, drops)
        })
        .prop_map(move |(inner, pieces, drops)| {
            let mut breaks = vec![q(0, 1)];
            breaks.extend(inner.iter().map(|&j| q(j, 8)));
            breaks.push(q(1, 1));
            let points = (0..breaks.len())
                .map(|j| {
                    let left = if j == 0 { None } else { Some(pieces[j - 1]) };
                    let right = pieces.get(j).copied();
                    let cap = match (left, right) {
                        (Some(a), Some(b)) => a.min(b),
                        (Some(a), None) | (None, Some(a)) => a,
                        (None, None) => unreachable!(),
                    };
                    lower(cap, drops[j], lo, hi)
                })
                .collect();
            RankFn::new(breaks, points, pieces).expect("generated step function is lsc")
        })
        .boxed()
}

fn lower(v: ExtNat, drop: u64, lo: u64, hi: u64) -> ExtNat {
    match (v, drop) {
        (_, 0) => v,
        (ExtNat::Fin(n), d) => ExtNat::Fin(n.saturating_sub(d).max(lo)),
        (ExtNat::Inf, _) => ExtNat::Fin(hi.max(lo)),
    }
}

/// Elements of `model` under `spec`.
pub fn arb_elem(model: &AnyModel, spec: ElemSpec) -> BoxedStrategy<AnyElement> {
    let lo = u64::from(spec.full);
    let hi = spec.bound.unwrap_or_else(|| default_bound(model)).max(lo);
    match model {
        AnyModel::PointFn(m) => vec(arb_nat(lo, hi, spec.infinite), m.dim())
            .prop_map(AnyElement::PointFn)
            .boxed(),
        AnyModel::Perforated(_) => arb_nat(lo, hi, spec.infinite)
            .prop_map(AnyElement::Perforated)
            .boxed(),
        AnyModel::Idempotent(_) => {
            if spec.full {
                Just(AnyElement::Idempotent(Idem::U)).boxed()
            } else {
                prop_oneof![Just(Idem::Zero), Just(Idem::U)]
                    .prop_map(AnyElement::Idempotent)
                    .boxed()
            }
        }
        AnyModel::Spectral(_) => arb_rank_fn(lo, hi, spec.infinite)
            .prop_map(AnyElement::Spectral)
            .boxed(),
        AnyModel::Sum(s) => {
            let inner = |m: &AnyModel| ElemSpec {
                bound: spec.bound.or(Some(default_bound(m))),
                ..spec
            };
            (arb_elem(&s.left, inner(&s.left)), arb_elem(&s.right, inner(&s.right)))
                .prop_map(|(a, b)| AnyElement::Sum(Box::new((a, b))))
                .boxed()
        }
    }
}

/// Increments `a` that keep `x ≤ x + a` in every catalog model: `0` or at
/// least the gap in perforated components, anything elsewhere.
pub fn arb_increment(model: &AnyModel) -> BoxedStrategy<AnyElement> {
    match model {
        AnyModel::Perforated(p) => {
            let k = p.gap();
            prop_oneof![
                2 => Just(ExtNat::ZERO),
                4 => (k..=2 * k + 2).prop_map(ExtNat::Fin),
                1 => Just(ExtNat::Inf),
            ]
            .prop_map(AnyElement::Perforated)
            .boxed()
        }
        AnyModel::Sum(s) => (arb_increment(&s.left), arb_increment(&s.right))
            .prop_map(|(a, b)| AnyElement::Sum(Box::new((a, b))))
            .boxed(),
        other => arb_elem(other, ElemSpec::ANY),
    }
}

/// Mostly order-safe increments, sometimes arbitrary elements.
pub fn arb_step(model: &AnyModel) -> BoxedStrategy<AnyElement> {
    prop_oneof![3 => arb_increment(model), 1 => arb_elem(model, ElemSpec::ANY)].boxed()
}

/// A model together with values drawn from a strategy built for it.
pub fn with_model<S, F>(models: BoxedStrategy<AnyModel>, f: F) -> BoxedStrategy<(AnyModel, S::Value)>
where
    S: Strategy + 'static,
    F: Fn(&AnyModel) -> S + 'static,
{
    models
        .prop_flat_map(move |m| (Just(m.clone()), f(&m)))
        .boxed()
}

/// A candidate increasing sequence: partial sums of a first term and
/// increments, followed by a top element. The candidate may fail to be
/// increasing; callers check.
#[derive(Clone, Debug)]
pub struct ChainCandidate {
    pub terms: Vec<AnyElement>,
    pub top: AnyElement,
}

/// Chains `x_1 ≤ … ≤ x_N ≤ x` from partial sums. With `cap` the top is
/// the last term, otherwise the last term plus one more step.
pub fn arb_chain(model: &AnyModel, first: ElemSpec, max_len: usize) -> BoxedStrategy<ChainCandidate> {
    let m = model.clone();
    (
        arb_elem(model, first),
        vec(arb_step(model), 1..max_len.max(2)),
        arb_step(model),
        any::<bool>(),
    )
        .prop_map(move |(x1, steps, extra, cap)| {
            let mut terms = vec![x1];
            for s in steps {
                let next = m.add(terms.last().unwrap(), &s);
                terms.push(next);
            }
            let last = terms.last().unwrap().clone();
            let top = if cap { last } else { m.add(&last, &extra) };
            ChainCandidate { terms, top }
        })
        .boxed()
}

fn arb_pl(max_inner: usize, positive: bool) -> BoxedStrategy<PlFunction> {
    let inner: Vec<i64> = (1..8).collect();
    let lo = i64::from(positive);
    subsequence(inner, 0..=max_inner.min(7))
        .prop_flat_map(move |inner| {
            let n = inner.len() + 2;
            (Just(inner), vec(lo..=4i64, n))
        })
        .prop_map(|(inner, vals)| {
            let mut ts = vec![0i64];
            ts.extend(inner);
            ts.push(8);
            let knots = ts
                .iter()
                .zip(&vals)
                .map(|(&t, &v)| (q(t, 8), q(v, 4)))
                .collect();
            PlFunction::new(knots).expect("grid knots are valid")
        })
        .boxed()
}

/// Profiles with `fiber` eigenvalues, knots on the `1/8` grid and values
/// in `{0, 1/4, …, 1}`. Some are bounded below, most touch zero.
pub fn arb_profile(fiber: usize, max_inner: usize) -> BoxedStrategy<SpectralProfile> {
    prop_oneof![
        3 => vec(arb_pl(max_inner, false), fiber),
        1 => vec(arb_pl(max_inner, true), fiber),
    ]
    .prop_map(|eigen| SpectralProfile::new(eigen).expect("values lie in [0, 1]"))
    .boxed()
}

/// Full profiles of norm one. A profile that vanishes somewhere gets its
/// last eigenvalue replaced by the constant `1`; then the profile is
/// rescaled to norm one.
pub fn arb_full_profile(fiber: usize, max_inner: usize) -> BoxedStrategy<SpectralProfile> {
    arb_profile(fiber, max_inner)
        .prop_map(|p| {
            let p = if p.is_full() {
                p
            } else {
                let mut eigen = p.eigenvalues().to_vec();
                *eigen.last_mut().expect("fiber is positive") = PlFunction::constant(q(1, 1));
                SpectralProfile::new(eigen).expect("values lie in [0, 1]")
            };
            p.normalized().expect("full profiles are nonzero")
        })
        .boxed()
}

/// Profiles with fiber `1..=3` and at most three interior knots.
pub fn arb_any_profile() -> BoxedStrategy<SpectralProfile> {
    (1..=3usize).prop_flat_map(|n| arb_profile(n, 3)).boxed()
}

pub fn arb_any_full_profile() -> BoxedStrategy<SpectralProfile> {
    (1..=3usize).prop_flat_map(|n| arb_full_profile(n, 3)).boxed()
}
