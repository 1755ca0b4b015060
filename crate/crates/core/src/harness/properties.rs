//! The property registry. Each entry pairs a generator with hypotheses and
//! a conclusion; see the module docs of [`crate::harness`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::collection::vec;
use proptest::prelude::*;

use super::gen::*;
use super::{check, Outcome, Property, PropertyReport, SuiteConfig};
use crate::cucore::{check_increasing, ideal_membership, is_full, is_zero, ChainLaw, CuModel};
use crate::functionals::{
    has_normalizing_ray, lambda_ideal, lambda_infinity, normalize_at, normalized_family_for,
    Functional,
};
use crate::models::{AnyElement, AnyModel};
use crate::oscillation::{
    contrank_check, cutdown_defect_sup, limit_rho_cutdown, omega, smoothed_defect_sup,
};
use crate::radius::{irc, premise_holds, rc_exact, rc_search, rc_strict, strict_premise_holds};
use crate::rankratio::{rho, rho_chain_limits, rho_normalized, rho_sampled};
use crate::scalar::{ExtNat, ExtScalar};
use crate::spectral::{RankFn, SpectralProfile};
use crate::Error;

type E = AnyElement;

macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return Outcome::Fail(format!($($arg)*));
        }
    };
}

macro_rules! registry {
    ($($name:literal => $f:ident : $summary:literal),* $(,)?) => {
        pub(crate) static REGISTRY: &[Property] = &[
            $(Property { name: $name, summary: $summary, run: $f }),*
        ];
    };
}

registry! {
    "scalar.laws" => scalar_laws: "+ and · are commutative and associative; · distributes when at most one operand is ∞",
    "scalar.ratio_grid" => scalar_ratio_grid: "a ≤ r·b exactly when r ≥ ratio(a, b), on a grid of r",
    "order.axioms" => order_axioms: "≤ is a partial order with 0 least; + is commutative, associative and order-compatible",
    "perforated.compatibility" => perforated_compatibility: "the gapped order is transitive and compatible with + on {0} ∪ [k, ∞]",
    "AbstractDfnFull" => abstract_dfn_full: "x is full iff Idl(x) = S; Idl(x) ⊆ Idl(y) iff ∞x ≤ ∞y",
    "O2.canonical_chain" => o2_canonical_chain: "canonical chains are ≪-increasing with supremum x",
    "FunctionalDFn" => functional_dfn: "ray combinations are additive, monotone, vanish at 0 and preserve suprema",
    "lambda_ideal.axioms" => lambda_ideal_axioms: "λ_I and λ_∞ are {0, ∞}-valued functionals",
    "Exa.PurelyInfinite" => exa_purely_infinite: "purely infinite elements: F = ∅, ρ = 0 both ways, rc = 0, Irc = ∞",
    "ResiduallyAndFullEquivalent" => residually_and_full: "x is full iff inf over F_1 of λ(x) is positive",
    "InfofFullElem" => inf_of_full_elem: "full profiles have positive infimal trace and dimension",
    "FullElements_Lem" => full_elements_lem: "a profile is full iff some eigenvalue is positive at every t",
    "Fulfunctional" => fulfunctional: "x ≤ y, x full and F_y ≠ ∅ give an explicit member of F_x",
    "FunCal.1" => funcal_1: "rank of f_2ε(a) equals rank of (a − ε)_+",
    "FunCal.4" => funcal_4: "τ(f_ε(a)) ≤ d((a − δ)_+) ≤ τ(f_δ(a)) at every Dirac point, δ ≤ ε/8",
    "cutdown.monotone" => cutdown_monotone: "ranks of cutdowns decrease as ε grows",
    "LemTrace" => lem_trace: "τ(b) ≤ d(b) ≤ τ(a') ≤ d(a') for b = f_ε(a), a' = f_ε/4(a)",
    "IncDesrho.homogeneity" => incdesrho_homogeneity: "ρ(x, n·y) = ρ(x, y)/n in every model family",
    "IncDesrho.monotonicity" => incdesrho_monotonicity: "x ≤ y ≤ z gives ρ(z, y) ≤ ρ(z, x) and ρ(x, z) ≤ ρ(y, z)",
    "IncDesrho.additivity" => incdesrho_additivity: "ρ(x + y, z) ≥ max and ρ(z, x + y) ≤ min of the parts",
    "RkRatioProperty" => rk_ratio_property: "bounds on ρ(x, y) and ρ(y, x) for x ≤ y",
    "Rkiszero" => rk_is_zero: "for full x, y: ρ(x, y) = 0 iff F_y = ∅",
    "lemRhoInvese" => lem_rho_inverse: "ρ(x, y) = 0 forces ρ(y, x) ∈ {0, ∞} according to F_x",
    "rhorho0" => rho_rho0: "ρ_z(x, y) ≤ ρ(x, y) where ρ_z is defined",
    "Prp.rhoequiavalent" => prp_rho_equivalent: "on point and spectral models ρ = ρ_1 = the largest pointwise ratio",
    "LimofRank" => lim_of_rank: "ρ(x_n, x) increases to at most 1 and ρ(x, x_n) decreases along chains",
    "oracle.rho_sampled" => oracle_rho_sampled: "sampled lower bounds never exceed ρ and grow with the sample count",
    "rcProperties.a_0" => rc_properties_a0: "x̂ ≤ η·ŷ gives rc(y)/η ≤ rc(x)",
    "rcProperties.a_1" => rc_properties_a1: "x ≤ y gives rc(y) ≤ rc(x)",
    "rcProperties.b" => rc_properties_b: "x̂ = η·ŷ gives rc(y)/η = rc(x)",
    "rcProperties.c_0" => rc_properties_c0: "rc(x) < ∞ and ŷ ∈ {0, ∞} give rc(y) = 0",
    "rcProperties.c" => rc_properties_c: "rc(x) < ∞ gives rc(∞·x) = 0",
    "rcProperties.d" => rc_properties_d: "rc(n·x) = rc(x)/n in every model family",
    "rcProperties.f" => rc_properties_f: "rc(x + y) ≤ min(rc(x), rc(y))",
    "LemFuRCDf" => lem_fu_rc_df: "a comparison premise with a full weight forces y to be full",
    "Rkrc.sandwich" => rkrc_sandwich: "rc(y)/ρ(x, y) ≤ rc(x) ≤ ρ(y, x)·rc(y) for full x ≤ y",
    "MainThmForRCLim" => main_thm_for_rc_lim: "the sandwich passes to limits along chains",
    "rclimrho1" => rc_lim_rho1: "lim ρ(y, y_n) = 1 gives lim rc(y_n) = rc(y)",
    "RkRation0" => rk_ratio0: "ρ(x, y) = 0 pins down rc(y)",
    "ExtremeInfiniteRho" => extreme_infinite_rho: "chains under an element with F_y = ∅ and lim ρ(y, y_n) = ∞",
    "ExtremeZeroRho" => extreme_zero_rho: "lim ρ(y, y_n) = 0 gives eventually empty families and equal radii",
    "IrcProperties" => irc_properties: "Irc is monotone, homogeneous and continuous along chains",
    "CorRrc=rc" => cor_rrc_eq_rc: "the strict normalized radius equals rc on residually finite weights",
    "PropR1234" => prop_r1234: "non-strict comparison at r gives strict comparison at r and conversely at r + 1/4",
    "search.soundness" => search_soundness: "bounded-search certificates re-verify and stay below rc",
    "RcPurelyInfinite" => rc_purely_infinite: "purely infinite models have rc = 0 and no violations",
    "Oscillation-Equvallence" => oscillation_equivalence: "ω(a) = 0 iff the cutdown defect vanishes; both are stable past m*",
    "ContRank" => cont_rank: "the four continuity conditions agree on full norm-one profiles",
    "oscillation.dirac_mixtures" => oscillation_dirac_mixtures: "finite mixtures of Dirac points stay below the defect suprema",
}

// ---------------------------------------------------------------- helpers

fn show(m: &AnyModel, items: &[(&str, &E)]) -> String {
    let parts: Vec<String> = items
        .iter()
        .map(|(n, e)| format!("{n} = {}", m.render(e)))
        .collect();
    format!("in {m}: {}", parts.join(", "))
}

fn r(m: &AnyModel, x: &E, y: &E) -> ExtScalar {
    rho(m, x, y).value
}

fn fam(m: &AnyModel, z: &E) -> bool {
    has_normalizing_ray(m, z)
}

fn rc(m: &AnyModel, w: &E) -> ExtScalar {
    rc_exact(m, w).expect("full element with a closed form").value
}

fn int(n: u64) -> ExtScalar {
    ExtScalar::from_int(n)
}

fn qr(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn any_elem(m: &AnyModel) -> BoxedStrategy<E> {
    arb_elem(m, ElemSpec::ANY)
}

fn full_elem(m: &AnyModel) -> BoxedStrategy<E> {
    arb_elem(m, ElemSpec::FULL)
}

/// Full elements with random components replaced by their `∞` multiples.
fn full_or_infinite(m: &AnyModel) -> BoxedStrategy<E> {
    match m {
        AnyModel::Sum(s) => (full_or_infinite(&s.left), full_or_infinite(&s.right))
            .prop_map(|(a, b)| AnyElement::Sum(Box::new((a, b))))
            .boxed(),
        _ => {
            let mm = m.clone();
            (full_elem(m), any::<bool>())
                .prop_map(move |(x, inf)| if inf { mm.infinity_times(&x) } else { x })
                .boxed()
        }
    }
}

/// Elements of perforated components avoid `1..k−1`, where the order
/// stops being compatible with addition.
fn gap_free(m: &AnyModel, x: &E) -> bool {
    match (m, x) {
        (AnyModel::Perforated(p), AnyElement::Perforated(ExtNat::Fin(n))) => {
            *n == 0 || *n >= p.gap()
        }
        (AnyModel::Sum(s), AnyElement::Sum(pair)) => {
            gap_free(&s.left, &pair.0) && gap_free(&s.right, &pair.1)
        }
        _ => true,
    }
}

fn purely_infinite(m: &AnyModel) -> bool {
    match m {
        AnyModel::Idempotent(_) => true,
        AnyModel::Sum(s) => purely_infinite(&s.left) && purely_infinite(&s.right),
        _ => false,
    }
}

/// Every component of `w` has a finite positive ray, i.e. no component is
/// purely infinite or infinite at `w`.
fn residually_finite(m: &AnyModel, w: &E) -> bool {
    match (m, w) {
        (AnyModel::Idempotent(_), _) => false,
        (AnyModel::Sum(s), AnyElement::Sum(pair)) => {
            residually_finite(&s.left, &pair.0) && residually_finite(&s.right, &pair.1)
        }
        _ => fam(m, w),
    }
}

/// The class of the unit, where the model has one.
fn unit_of(m: &AnyModel) -> Option<E> {
    Some(match m {
        AnyModel::PointFn(p) => AnyElement::PointFn(vec![ExtNat::Fin(1); p.dim()]),
        AnyModel::Perforated(_) => AnyElement::Perforated(ExtNat::Fin(1)),
        AnyModel::Spectral(s) => AnyElement::Spectral(s.unit()),
        AnyModel::Idempotent(_) => return None,
        AnyModel::Sum(s) => AnyElement::Sum(Box::new((unit_of(&s.left)?, unit_of(&s.right)?))),
    })
}

fn residual_model() -> BoxedStrategy<AnyModel> {
    let simple = || {
        prop_oneof![
            arb_model_of(Family::PointFn),
            arb_model_of(Family::Perforated),
            arb_model_of(Family::Spectral),
        ]
    };
    prop_oneof![3 => simple(), 1 => (simple(), simple()).prop_map(|(a, b)| AnyModel::sum(a, b))]
        .boxed()
}

fn rays_agree(m: &AnyModel, x: &E, y: &E) -> bool {
    m.rays_for(&[x, y])
        .iter()
        .all(|ray| m.eval_ray(ray, x) == m.eval_ray(ray, y))
}

fn nondecreasing(v: &[ExtScalar]) -> bool {
    v.windows(2).all(|w| w[0] <= w[1])
}

fn nonincreasing(v: &[ExtScalar]) -> bool {
    v.windows(2).all(|w| w[0] >= w[1])
}

fn ceil(v: &ExtScalar) -> Option<u64> {
    let q = v.as_rational()?;
    u64::try_from(q.ceil().to_integer()).ok()
}

fn arb_scalar() -> BoxedStrategy<ExtScalar> {
    prop_oneof![
        1 => Just(ExtScalar::INFINITY),
        1 => Just(ExtScalar::zero()),
        6 => (0i64..40, 1i64..12).prop_map(|(n, d)| ExtScalar::frac(n, d)),
    ]
    .boxed()
}

fn arb_coefficient() -> BoxedStrategy<ExtScalar> {
    prop_oneof![
        1 => Just(ExtScalar::zero()),
        6 => (1i64..=12, 1i64..=4).prop_map(|(n, d)| ExtScalar::frac(n, d)),
        1 => Just(ExtScalar::INFINITY),
    ]
    .boxed()
}

fn chain_of(c: &ChainCandidate) -> (Vec<E>, E) {
    (c.terms.clone(), c.top.clone())
}

fn increasing(m: &AnyModel, terms: &[E], top: &E) -> bool {
    check_increasing(m, &ChainLaw::Eventually(terms.to_vec()), top).is_ok()
}

// ---------------------------------------------------------------- scalars

fn scalar_laws(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    check(cfg, name, (arb_scalar(), arb_scalar(), arb_scalar()), |(a, b, c)| {
        ensure!(a.add(&b) == b.add(&a), "{a} + {b} is not commutative");
        ensure!(a.mul(&b) == b.mul(&a), "{a} · {b} is not commutative");
        ensure!(a.add(&b).add(&c) == a.add(&b.add(&c)), "+ not associative at {a}, {b}, {c}");
        ensure!(a.mul(&b).mul(&c) == a.mul(&b.mul(&c)), "· not associative at {a}, {b}, {c}");
        let infinite = [&a, &b, &c].iter().filter(|v| v.is_infinite()).count();
        if infinite <= 1 {
            ensure!(
                a.mul(&b.add(&c)) == a.mul(&b).add(&a.mul(&c)),
                "· does not distribute at {a}, {b}, {c}"
            );
        }
        Outcome::Pass
    })
}

fn scalar_ratio_grid(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    check(cfg, name, (arb_scalar(), arb_scalar()), |(a, b)| {
        let q = a.ratio(&b);
        for j in 1..=12 * 40 {
            let r = ExtScalar::frac(j, 12);
            ensure!(
                (a <= r.mul(&b)) == (r >= q),
                "ratio({a}, {b}) = {q} but r = {r} disagrees"
            );
        }
        Outcome::Pass
    })
}

// ---------------------------------------------------------------- structure

fn order_axioms(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let s = with_model(arb_model(), |m| {
        (any_elem(m), arb_step(m), arb_step(m), any_elem(m), any::<bool>())
    });
    check(cfg, name, s, |(m, (x, a, b, c, chained))| {
        let (y, z) = if chained {
            let y = m.add(&x, &a);
            let z = m.add(&y, &b);
            (y, z)
        } else {
            (a, b)
        };
        let ctx = || show(&m, &[("x", &x), ("y", &y), ("z", &z), ("c", &c)]);
        ensure!(m.leq(&x, &x), "reflexivity fails {}", ctx());
        ensure!(m.leq(&m.zero(), &x), "0 ≤ x fails {}", ctx());
        ensure!(
            !(m.leq(&x, &y) && m.leq(&y, &x)) || x == y,
            "antisymmetry fails {}",
            ctx()
        );
        ensure!(
            !(m.leq(&x, &y) && m.leq(&y, &z)) || m.leq(&x, &z),
            "transitivity fails {}",
            ctx()
        );
        ensure!(m.add(&x, &y) == m.add(&y, &x), "+ not commutative {}", ctx());
        ensure!(
            m.add(&m.add(&x, &y), &z) == m.add(&x, &m.add(&y, &z)),
            "+ not associative {}",
            ctx()
        );
        if [&x, &y, &c].iter().all(|e| gap_free(&m, e)) && m.leq(&x, &y) {
            ensure!(
                m.leq(&m.add(&x, &c), &m.add(&y, &c)),
                "x ≤ y but x + c ≰ y + c {}",
                ctx()
            );
        }
        Outcome::Pass
    })
}

fn perforated_compatibility(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let s = (1..=6u64).prop_flat_map(|k| {
        let v = prop_oneof![
            2 => Just(ExtNat::ZERO),
            6 => (k..=200).prop_map(ExtNat::Fin),
            1 => (0..=200u64).prop_map(ExtNat::Fin),
            1 => Just(ExtNat::Inf),
        ];
        (Just(k), v.clone(), v.clone(), v.clone(), v)
    });
    check(cfg, name, s, |(k, a, b, c, d)| {
        let m = crate::models::PerforatedModel::new(k);
        let sub = |v: &ExtNat| matches!(v, ExtNat::Fin(n) if *n == 0 || *n >= k) || !v.is_finite();
        let mut used = false;
        if m.leq(&a, &b) && m.leq(&b, &c) {
            used = true;
            ensure!(m.leq(&a, &c), "k = {k}: {a} ≤ {b} ≤ {c} but {a} ≰ {c}");
        }
        if [&a, &b, &c, &d].iter().all(|v| sub(v)) && m.leq(&a, &b) && m.leq(&c, &d) {
            used = true;
            ensure!(
                m.leq(&(a + c), &(b + d)),
                "k = {k}: {a} ≤ {b}, {c} ≤ {d} but sums are not ordered"
            );
        }
        if used {
            Outcome::Pass
        } else {
            Outcome::Vacuous
        }
    })
}

fn abstract_dfn_full(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let s = with_model(arb_model(), |m| (any_elem(m), any_elem(m)));
    check(cfg, name, s, |(m, (x, y))| {
        let ix = m.infinity_times(&x);
        let iy = m.infinity_times(&y);
        let mut tests = m.enumerate(2);
        tests.extend(m.extra_targets(2));
        tests.extend([x.clone(), y.clone(), ix.clone(), iy.clone()]);
        let everything = tests.iter().all(|e| ideal_membership(&m, &x, e));
        ensure!(
            is_full(&m, &x) == everything,
            "is_full disagrees with Idl(x) = S {}",
            show(&m, &[("x", &x)])
        );
        let included = tests
            .iter()
            .all(|e| !ideal_membership(&m, &x, e) || ideal_membership(&m, &y, e));
        ensure!(
            included == m.leq(&ix, &iy),
            "Idl(x) ⊆ Idl(y) disagrees with ∞x ≤ ∞y {}",
            show(&m, &[("x", &x), ("y", &y)])
        );
        let direct = match (&m, &x) {
            (AnyModel::PointFn(_), AnyElement::PointFn(v)) => Some(v.iter().all(|c| !c.is_zero())),
            (AnyModel::Spectral(_), AnyElement::Spectral(f)) => Some(!f.min_value().is_zero()),
            _ => None,
        };
        if let Some(d) = direct {
            ensure!(d == is_full(&m, &x), "coordinatewise fullness disagrees {}", show(&m, &[("x", &x)]));
        }
        Outcome::Pass
    })
}

fn o2_canonical_chain(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    const LEN: usize = 20;
    let s = with_model(arb_model(), any_elem);
    check(cfg, name, s, |(m, x)| {
        let chain = m.canonical_chain(&x, LEN);
        let ctx = || show(&m, &[("x", &x)]);
        ensure!(chain.len() == LEN, "chain has {} terms {}", chain.len(), ctx());
        for (i, w) in chain.windows(2).enumerate() {
            ensure!(
                m.leq(&w[0], &w[1]) && m.compactly_contained(&w[0], &w[1]),
                "term {} is not ≪ term {} {}",
                i + 1,
                i + 2,
                ctx()
            );
        }
        ensure!(chain.iter().all(|t| m.leq(t, &x)), "a term exceeds x {}", ctx());
        let (prev, last) = (&chain[LEN - 2], &chain[LEN - 1]);
        for ray in m.rays_for(&[&x]) {
            let vx = m.eval_ray(&ray, &x);
            let vl = m.eval_ray(&ray, last);
            let ok = if vx.is_finite() {
                vl == vx
            } else {
                vl.is_infinite() || vl > m.eval_ray(&ray, prev)
            };
            ensure!(ok, "chain does not reach x at {} {}", m.describe_ray(&ray), ctx());
        }
        Outcome::Pass
    })
}

fn functional_dfn(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let s = with_model(arb_model(), |m| {
        (any_elem(m), any_elem(m), vec(arb_coefficient(), 1..6))
    });
    check(cfg, name, s, |(m, (x, y, coeffs))| {
        let sum = m.add(&x, &y);
        let rays = m.rays_for(&[&x, &y, &sum]);
        let lam: Functional<E> = Functional::Combination(
            rays.iter()
                .cloned()
                .zip(coeffs.iter().cycle().cloned())
                .collect(),
        );
        let ctx = || format!("{} with {}", show(&m, &[("x", &x), ("y", &y)]), lam.describe(&m));
        let ev = |e: &E| lam.eval(&m, e);
        ensure!(ev(&m.zero()).is_zero(), "λ(0) ≠ 0 {}", ctx());
        ensure!(ev(&sum) == ev(&x).add(&ev(&y)), "λ is not additive {}", ctx());
        ensure!(!m.leq(&x, &y) || ev(&x) <= ev(&y), "λ is not monotone {}", ctx());
        let chain = m.canonical_chain(&x, 20);
        let vals: Vec<ExtScalar> = chain.iter().map(ev).collect();
        ensure!(nondecreasing(&vals), "λ decreases along a chain {}", ctx());
        let last = &vals[19];
        let ok = if ev(&x).is_finite() {
            *last == ev(&x)
        } else {
            last.is_infinite() || *last > vals[18]
        };
        ensure!(ok, "λ does not preserve the supremum {}", ctx());
        Outcome::Pass
    })
}

fn lambda_ideal_axioms(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let s = with_model(arb_model(), |m| (any_elem(m), any_elem(m), any_elem(m)));
    check(cfg, name, s, |(m, (g, x, y))| {
        let ctx = || show(&m, &[("g", &g), ("x", &x), ("y", &y)]);
        for lam in [lambda_ideal(&m, &g), lambda_infinity(&m)] {
            let ev = |e: &E| lam.eval(&m, e);
            for e in [&x, &y] {
                let v = ev(e);
                ensure!(v.is_zero() || v.is_infinite(), "value {v} outside {{0, ∞}} {}", ctx());
            }
            ensure!(ev(&m.zero()).is_zero(), "λ(0) ≠ 0 {}", ctx());
            ensure!(ev(&m.add(&x, &y)) == ev(&x).add(&ev(&y)), "not additive {}", ctx());
            ensure!(!m.leq(&x, &y) || ev(&x) <= ev(&y), "not monotone {}", ctx());
            let chain = m.canonical_chain(&x, 20);
            let vals: Vec<ExtScalar> = chain.iter().map(ev).collect();
            ensure!(nondecreasing(&vals) && vals[19] == ev(&x), "supremum not preserved {}", ctx());
        }
        ensure!(lambda_ideal(&m, &g).eval(&m, &g).is_zero(), "λ_Idl(g)(g) ≠ 0 {}", ctx());
        ensure!(
            lambda_infinity(&m).eval(&m, &x).is_zero() == is_zero(&m, &x),
            "λ_∞ vanishes off 0 {}",
            ctx()
        );
        Outcome::Pass
    })
}

fn exa_purely_infinite(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let models = prop_oneof![arb_purely_infinite_model(), arb_model()].boxed();
    let s = with_model(models, |m| (full_elem(m), full_elem(m)));
    check(cfg, name, s, |(m, (x, y))| {
        let pi = purely_infinite(&m);
        let (a, b) = if pi {
            (x, y)
        } else {
            (m.infinity_times(&x), m.infinity_times(&y))
        };
        let ctx = || show(&m, &[("a", &a), ("b", &b)]);
        ensure!(!fam(&m, &a) && !fam(&m, &b), "normalized family is nonempty {}", ctx());
        ensure!(r(&m, &a, &b).is_zero() && r(&m, &b, &a).is_zero(), "ρ ≠ 0 {}", ctx());
        ensure!(rc(&m, &a).is_zero() && rc(&m, &b).is_zero(), "rc ≠ 0 {}", ctx());
        ensure!(irc(&m, &a).map(|v| v.is_infinite()).unwrap_or(false), "Irc ≠ ∞ {}", ctx());
        if pi {
            for ray in m.rays_for(&[&a, &b]) {
                for e in [&a, &b] {
                    let v = m.eval_ray(&ray, e);
                    ensure!(v.is_zero() || v.is_infinite(), "ray value {v} {}", ctx());
                }
            }
            let range = crate::radius::rc_range_sample(&m, 2).expect("closed forms exist");
            ensure!(
                range.iter().all(ExtScalar::is_zero),
                "rc takes a nonzero value on {m}"
            );
        }
        Outcome::Pass
    })
}

fn residually_and_full(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let s = with_model(residual_model(), any_elem);
    check(cfg, name, s, |(m, x)| {
        let unit = unit_of(&m).expect("residual models have a unit");
        let family = normalized_family_for(&m, &unit, &[&x]);
        let least = family.functionals().map(|l| l.eval(&m, &x)).min();
        let positive = least.as_ref().map(|v| !v.is_zero()).unwrap_or(false);
        ensure!(
            positive == is_full(&m, &x),
            "inf over F_1 is {:?} but is_full = {} {}",
            least.map(|v| v.to_string()),
            is_full(&m, &x),
            show(&m, &[("x", &x)])
        );
        Outcome::Pass
    })
}

/// Every merged breakpoint and the midpoint of every merged piece.
fn profile_points(profiles: &[&SpectralProfile], ranks: &[&RankFn]) -> Vec<BigRational> {
    let mut ts: Vec<BigRational> = profiles.iter().flat_map(|p| p.breakpoints()).collect();
    ts.extend(ranks.iter().flat_map(|f| f.breaks().to_vec()));
    ts.sort();
    ts.dedup();
    let mut out = Vec::new();
    for (j, t) in ts.iter().enumerate() {
        if j > 0 {
            out.push((&ts[j - 1] + t) / qr(2, 1));
        }
        out.push(t.clone());
    }
    out
}

fn inf_of_full_elem(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    check(cfg, name, arb_any_full_profile(), |a| {
        let rank = a.rank();
        let pts = profile_points(&[&a], &[&rank]);
        let n = a.fiber() as u64;
        let least_trace = pts.iter().map(|t| a.trace_at(t)).min().expect("points");
        let least_dim = pts.iter().map(|t| ExtScalar::from(rank.eval(t)).ratio(&int(n))).min();
        ensure!(!least_trace.is_zero(), "trace vanishes somewhere on full {a}");
        ensure!(
            least_dim.map(|d| !d.is_zero()).unwrap_or(false),
            "dimension vanishes somewhere on full {a}"
        );
        let m = AnyModel::Spectral(crate::spectral::SpectralModel::new(n as u32));
        let x = AnyElement::Spectral(rank);
        let unit = unit_of(&m).expect("spectral models have a unit");
        let family = normalized_family_for(&m, &unit, &[&x]);
        ensure!(
            family.functionals().all(|l| !l.eval(&m, &x).is_zero()),
            "a normalized Dirac functional vanishes on full {a}"
        );
        Outcome::Pass
    })
}

fn full_elements_lem(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    check(cfg, name, arb_any_profile(), |a| {
        let pts = profile_points(&[&a], &[]);
        let positive = pts.iter().all(|t| {
            a.eigenvalues()
                .iter()
                .any(|f| f.eval(t) > BigRational::zero())
        });
        ensure!(positive == a.is_full(), "is_full = {} for {a}", a.is_full());
        Outcome::Pass
    })
}

fn fulfunctional(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let s = with_model(arb_model(), |m| (full_elem(m), arb_step(m)));
    check(cfg, name, s, |(m, (x, a))| {
        let y = m.add(&x, &a);
        if !m.leq(&x, &y) || !fam(&m, &y) {
            return Outcome::Vacuous;
        }
        let ctx = || show(&m, &[("x", &x), ("y", &y)]);
        let ray = m
            .rays_for(&[&x, &y])
            .into_iter()
            .find(|ray| m.eval_ray(ray, &y).is_positive_finite())
            .expect("F_y is nonempty");
        let lam = normalize_at(&m, &Functional::ray(ray), &y).expect("finite positive at y");
        let c = lam.eval(&m, &x);
        ensure!(
            c.is_positive_finite() && c <= ExtScalar::one(),
            "λ(x) = {c} for λ ∈ F_y {}",
            ctx()
        );
        let mu = match normalize_at(&m, &lam, &x) {
            Ok(mu) => mu,
            Err(e) => return Outcome::Fail(format!("cannot normalize at x: {e} {}", ctx())),
        };
        ensure!(mu.eval(&m, &x) == ExtScalar::one(), "witness is not in F_x {}", ctx());
        ensure!(fam(&m, &x), "F_x reported empty {}", ctx());
        Outcome::Pass
    })
}

// ---------------------------------------------------------------- spectral

#[derive(Clone, Copy)]
enum Dirac<'a> {
    Trace(&'a SpectralProfile),
    Dim(&'a SpectralProfile, &'a RankFn),
}

/// Checks `v_1(t) ≤ v_2(t) ≤ …` at every `t ∈ [0, 1]`. Traces are linear
/// and dimensions constant between merged breakpoints, so points and
/// piece endpoints (with dimensions read at midpoints) cover everything.
fn dirac_chain(terms: &[Dirac<'_>]) -> Result<(), String> {
    let profiles: Vec<&SpectralProfile> = terms
        .iter()
        .map(|d| match d {
            Dirac::Trace(p) | Dirac::Dim(p, _) => *p,
        })
        .collect();
    let ranks: Vec<&RankFn> = terms
        .iter()
        .filter_map(|d| match d {
            Dirac::Dim(_, f) => Some(*f),
            Dirac::Trace(_) => None,
        })
        .collect();
    let mut ts: Vec<BigRational> = profiles.iter().flat_map(|p| p.breakpoints()).collect();
    ts.extend(ranks.iter().flat_map(|f| f.breaks().to_vec()));
    ts.sort();
    ts.dedup();
    let value = |d: &Dirac<'_>, at: &BigRational, mid: &BigRational| match d {
        Dirac::Trace(p) => p.trace_at(at),
        Dirac::Dim(p, f) => ExtScalar::from(f.eval(mid)).ratio(&int(p.fiber() as u64)),
    };
    let verify = |at: &BigRational, mid: &BigRational, label: String| {
        let vals: Vec<ExtScalar> = terms.iter().map(|d| value(d, at, mid)).collect();
        if nondecreasing(&vals) {
            Ok(())
        } else {
            let shown: Vec<String> = vals.iter().map(ToString::to_string).collect();
            Err(format!("{label}: values {}", shown.join(" ≤ ")))
        }
    };
    for (j, t) in ts.iter().enumerate() {
        verify(t, t, format!("t = {t}"))?;
        if j > 0 {
            let s = &ts[j - 1];
            let mid = (s + t) / qr(2, 1);
            verify(s, &mid, format!("t → {s}+"))?;
            verify(t, &mid, format!("t → {t}-"))?;
        }
    }
    Ok(())
}

fn arb_eps() -> BoxedStrategy<BigRational> {
    prop_oneof![Just(qr(1, 8)), Just(qr(1, 4)), Just(qr(1, 2)), Just(qr(1, 1))].boxed()
}

fn funcal_1(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let eps = prop_oneof![Just(qr(1, 8)), Just(qr(1, 4)), Just(qr(1, 2))];
    check(cfg, name, (arb_any_profile(), eps), |(a, e)| {
        let cut = a.cutdown(&e).rank();
        let smooth = a.smooth(&(&e * qr(2, 1))).rank();
        ensure!(smooth == cut, "ε = {e}: rank f_2ε(a) = {smooth}, rank (a−ε)+ = {cut}, a = {a}");
        let direct = a.rank_function(&e);
        ensure!(direct == cut, "ε = {e}: rank_function = {direct} vs {cut}, a = {a}");
        Outcome::Pass
    })
}

fn funcal_4(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let s = (arb_any_profile(), arb_eps(), prop_oneof![Just(8i64), Just(16i64)]);
    check(cfg, name, s, |(a, e, div)| {
        let delta = &e / qr(div, 1);
        let f_eps = a.smooth(&e);
        let cut = a.cutdown(&delta);
        let cut_rank = cut.rank();
        let f_delta = a.smooth(&delta);
        let terms = [Dirac::Trace(&f_eps), Dirac::Dim(&cut, &cut_rank), Dirac::Trace(&f_delta)];
        match dirac_chain(&terms) {
            Ok(()) => Outcome::Pass,
            Err(msg) => Outcome::Fail(format!("ε = {e}, δ = {delta}, a = {a}: {msg}")),
        }
    })
}

fn cutdown_monotone(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let s = (arb_any_profile(), 1..=8i64, 0..=8i64);
    check(cfg, name, s, |(a, i, extra)| {
        let e1 = qr(i, 8);
        let e2 = qr((i + extra).min(8), 8);
        let r1 = a.cutdown(&e1).rank();
        let r2 = a.cutdown(&e2).rank();
        ensure!(r2.leq(&r1), "rank (a−{e2})+ = {r2} ≰ rank (a−{e1})+ = {r1}, a = {a}");
        ensure!(r1.leq(&a.rank()), "cutdown rank exceeds rank of a = {a}");
        Outcome::Pass
    })
}

fn lem_trace(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    check(cfg, name, (arb_any_profile(), arb_eps()), |(a, e)| {
        let b = a.smooth(&e);
        let a2 = a.smooth(&(&e / qr(4, 1)));
        let (rb, ra2) = (b.rank(), a2.rank());
        let terms = [
            Dirac::Trace(&b),
            Dirac::Dim(&b, &rb),
            Dirac::Trace(&a2),
            Dirac::Dim(&a2, &ra2),
        ];
        match dirac_chain(&terms) {
            Ok(()) => Outcome::Pass,
            Err(msg) => Outcome::Fail(format!("ε = {e}, a = {a}: {msg}")),
        }
    })
}

// ---------------------------------------------------------------- rank ratio

fn per_family<S, F>(f: F) -> impl Strategy<Value = [(AnyModel, S::Value); 5]>
where
    S: Strategy + 'static,
    S::Value: Clone,
    F: Fn(&AnyModel) -> S + Clone + 'static,
{
    let one = |fam: Family| with_model(arb_model_of(fam), f.clone());
    (
        one(Family::PointFn),
        one(Family::Perforated),
        one(Family::Idempotent),
        one(Family::Spectral),
        one(Family::Sum),
    )
        .prop_map(|(a, b, c, d, e)| [a, b, c, d, e])
}

fn incdesrho_homogeneity(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let s = per_family(|m| (any_elem(m), any_elem(m), 1..=10u64));
    check(cfg, name, s, |cases| {
        for (m, (x, y, n)) in &cases {
            let lhs = r(m, x, &m.scale(y, *n));
            let rhs = r(m, x, y).ratio(&int(*n));
            ensure!(
                lhs == rhs,
                "n = {n}: ρ(x, n·y) = {lhs}, ρ(x, y)/n = {rhs} {}",
                show(m, &[("x", x), ("y", y)])
            );
        }
        Outcome::Pass
    })
}

fn incdesrho_monotonicity(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let s = with_model(arb_model(), |m| (any_elem(m), arb_step(m), arb_step(m)));
    check(cfg, name, s, |(m, (x, a, b))| {
        let y = m.add(&x, &a);
        let z = m.add(&y, &b);
        if !(m.leq(&x, &y) && m.leq(&y, &z)) {
            return Outcome::Vacuous;
        }
        let ctx = || show(&m, &[("x", &x), ("y", &y), ("z", &z)]);
        ensure!(r(&m, &z, &y) <= r(&m, &z, &x), "ρ(z, y) > ρ(z, x) {}", ctx());
        ensure!(r(&m, &x, &z) <= r(&m, &y, &z), "ρ(x, z) > ρ(y, z) {}", ctx());
        Outcome::Pass
    })
}

fn incdesrho_additivity(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let s = with_model(arb_model(), |m| (any_elem(m), any_elem(m), any_elem(m)));
    check(cfg, name, s, |(m, (x, y, z))| {
        let s = m.add(&x, &y);
        let ctx = || show(&m, &[("x", &x), ("y", &y), ("z", &z)]);
        ensure!(
            r(&m, &s, &z) >= r(&m, &x, &z).max(r(&m, &y, &z)),
            "ρ(x + y, z) below a part {}",
            ctx()
        );
        ensure!(
            r(&m, &z, &s) <= r(&m, &z, &x).min(r(&m, &z, &y)),
            "ρ(z, x + y) above a part {}",
            ctx()
        );
        Outcome::Pass
    })
}

fn rk_ratio_property(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let s = with_model(arb_model(), |m| (any_elem(m), arb_step(m), 0..4u8));
    check(cfg, name, s, |(m, (x0, a, mode))| {
        let x = if mode == 0 { m.zero() } else { x0 };
        let y = m.add(&x, &a);
        if !m.leq(&x, &y) {
            return Outcome::Vacuous;
        }
        let ctx = || show(&m, &[("x", &x), ("y", &y)]);
        let (rxy, ryx) = (r(&m, &x, &y), r(&m, &y, &x));
        if is_zero(&m, &x) && !is_zero(&m, &y) {
            ensure!(rxy.is_zero() && ryx.is_infinite(), "ρ(0, y) = {rxy}, ρ(y, 0) = {ryx} {}", ctx());
        }
        ensure!(rxy <= ExtScalar::one(), "ρ(x, y) = {rxy} > 1 {}", ctx());
        if fam(&m, &y) && is_full(&m, &x) {
            ensure!(!rxy.is_zero(), "ρ(x, y) = 0 with x full and F_y ≠ ∅ {}", ctx());
        }
        if fam(&m, &x) {
            ensure!(ryx >= ExtScalar::one(), "ρ(y, x) = {ryx} < 1 {}", ctx());
        }
        if ryx == ExtScalar::one() {
            ensure!(
                rays_agree(&m, &x, &y) && m.leq(&m.infinity_times(&y), &m.infinity_times(&x)),
                "ρ(y, x) = 1 but the ranks differ {}",
                ctx()
            );
        }
        if is_full(&m, &x) && fam(&m, &x) && m.compactly_contained(&y, &m.infinity_times(&x)) {
            let k = ceil(&ryx);
            ensure!(
                k.is_some() && ryx >= ExtScalar::one() && ryx <= int(k.unwrap_or(0)),
                "ρ(y, x) = {ryx} has no integer bound {}",
                ctx()
            );
        }
        Outcome::Pass
    })
}

fn rk_is_zero(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let s = with_model(arb_model(), |m| (full_or_infinite(m), full_or_infinite(m)));
    check(cfg, name, s, |(m, (x, y))| {
        let v = r(&m, &x, &y);
        ensure!(
            v.is_zero() == !fam(&m, &y),
            "ρ(x, y) = {v} but F_y empty = {} {}",
            !fam(&m, &y),
            show(&m, &[("x", &x), ("y", &y)])
        );
        Outcome::Pass
    })
}

fn lem_rho_inverse(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let s = with_model(arb_model(), |m| (full_or_infinite(m), full_or_infinite(m)));
    check(cfg, name, s, |(m, (x, y))| {
        if !r(&m, &x, &y).is_zero() {
            return Outcome::Vacuous;
        }
        let back = r(&m, &y, &x);
        let want = if fam(&m, &x) {
            ExtScalar::INFINITY
        } else {
            ExtScalar::zero()
        };
        ensure!(back == want, "ρ(y, x) = {back}, expected {want} {}", show(&m, &[("x", &x), ("y", &y)]));
        Outcome::Pass
    })
}

fn rho_rho0(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let s = with_model(arb_model(), |m| (full_elem(m), any_elem(m), any_elem(m)));
    check(cfg, name, s, |(m, (z, x, y))| {
        match rho_normalized(&m, &z, &x, &y) {
            Ok(v) => {
                let full = r(&m, &x, &y);
                ensure!(
                    v.value <= full,
                    "ρ_z = {} > ρ = {full} {}",
                    v.value,
                    show(&m, &[("z", &z), ("x", &x), ("y", &y)])
                );
                Outcome::Pass
            }
            Err(Error::EmptyNormalizedFamily | Error::NotCompactlyDominated(_)) => Outcome::Vacuous,
            Err(e) => Outcome::Fail(format!("unexpected error {e}")),
        }
    })
}

fn prp_rho_equivalent(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let models = prop_oneof![arb_model_of(Family::PointFn), arb_model_of(Family::Spectral)].boxed();
    let spec = ElemSpec::FULL_FINITE;
    let s = with_model(models, move |m| (arb_elem(m, spec), arb_elem(m, spec)));
    check(cfg, name, s, |(m, (x, y))| {
        let unit = unit_of(&m).expect("unit");
        let ctx = || show(&m, &[("x", &x), ("y", &y)]);
        let plain = r(&m, &x, &y);
        let normalized = match rho_normalized(&m, &unit, &x, &y) {
            Ok(v) => v.value,
            Err(e) => return Outcome::Fail(format!("ρ_1 undefined: {e} {}", ctx())),
        };
        let ratios: Vec<ExtScalar> = match (&x, &y) {
            (AnyElement::PointFn(a), AnyElement::PointFn(b)) => a
                .iter()
                .zip(b)
                .map(|(p, q)| ExtScalar::from(*p).ratio(&ExtScalar::from(*q)))
                .collect(),
            (AnyElement::Spectral(a), AnyElement::Spectral(b)) => (0..=16)
                .map(|j| {
                    let t = qr(j, 16);
                    ExtScalar::from(a.eval(&t)).ratio(&ExtScalar::from(b.eval(&t)))
                })
                .collect(),
            _ => unreachable!("point or spectral model"),
        };
        let oracle = ratios.into_iter().max().expect("nonempty");
        ensure!(
            plain == normalized && plain == oracle && plain.is_finite(),
            "ρ = {plain}, ρ_1 = {normalized}, pointwise = {oracle} {}",
            ctx()
        );
        Outcome::Pass
    })
}

fn lim_of_rank(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let s = with_model(arb_model(), |m| (arb_chain(m, ElemSpec::ANY, 5), 0..3u8));
    check(cfg, name, s, |(m, (cand, mode))| {
        let (terms, top) = match mode {
            0 => chain_of(&cand),
            1 => (m.canonical_chain(&cand.top, 6), cand.top.clone()),
            _ => {
                let b = cand.terms[0].clone();
                let law = ChainLaw::Multiples(b.clone());
                let top = m.infinity_times(&b);
                if check_increasing(&m, &law, &top).is_err() {
                    return Outcome::Vacuous;
                }
                let limits = rho_chain_limits(&m, &law, &top).expect("checked");
                let fwd: Vec<ExtScalar> = (1..=8).map(|n| r(&m, &law.term(&m, n), &top)).collect();
                let bwd: Vec<ExtScalar> = (1..=8).map(|n| r(&m, &top, &law.term(&m, n))).collect();
                let ctx = || show(&m, &[("b", &b)]);
                ensure!(
                    nondecreasing(&fwd) && fwd.iter().all(|v| *v <= ExtScalar::one()),
                    "ρ(n·b, ∞·b) not increasing below 1 {}",
                    ctx()
                );
                ensure!(nonincreasing(&bwd), "ρ(∞·b, n·b) not decreasing {}", ctx());
                ensure!(limits.forward.is_zero(), "lim ρ(n·b, ∞·b) = {} ≠ 0 {}", limits.forward, ctx());
                let b1 = &bwd[0];
                let want = if b1.is_finite() {
                    ExtScalar::zero()
                } else {
                    ExtScalar::INFINITY
                };
                ensure!(limits.backward == want, "lim ρ(∞·b, n·b) = {} {}", limits.backward, ctx());
                return Outcome::Pass;
            }
        };
        if !increasing(&m, &terms, &top) {
            return Outcome::Vacuous;
        }
        let ctx = || {
            let mut items: Vec<(String, &E)> = terms
                .iter()
                .enumerate()
                .map(|(i, t)| (format!("x{}", i + 1), t))
                .collect();
            items.push(("x".into(), &top));
            let borrowed: Vec<(&str, &E)> = items.iter().map(|(n, e)| (n.as_str(), *e)).collect();
            show(&m, &borrowed)
        };
        let fwd: Vec<ExtScalar> = terms.iter().map(|t| r(&m, t, &top)).collect();
        let bwd: Vec<ExtScalar> = terms.iter().map(|t| r(&m, &top, t)).collect();
        ensure!(nondecreasing(&fwd), "ρ(x_n, x) decreases {}", ctx());
        ensure!(fwd.iter().all(|v| *v <= ExtScalar::one()), "ρ(x_n, x) > 1 {}", ctx());
        ensure!(nonincreasing(&bwd), "ρ(x, x_n) increases {}", ctx());
        let limits = rho_chain_limits(&m, &ChainLaw::Eventually(terms.clone()), &top)
            .expect("checked increasing");
        ensure!(
            Some(&limits.forward) == fwd.last() && Some(&limits.backward) == bwd.last(),
            "chain limits disagree with the terms {}",
            ctx()
        );
        if terms.iter().all(|t| is_full(&m, t)) && fam(&m, &top) {
            ensure!(!limits.forward.is_zero(), "lim ρ(x_n, x) = 0 {}", ctx());
            ensure!(limits.backward >= ExtScalar::one(), "lim ρ(x, x_n) < 1 {}", ctx());
        }
        Outcome::Pass
    })
}

fn oracle_rho_sampled(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let s = with_model(arb_model(), |m| (any_elem(m), any_elem(m), any::<u64>(), 1..=48usize));
    check(cfg, name, s, |(m, (x, y, seed, samples))| {
        let exact = r(&m, &x, &y);
        let few = rho_sampled(&m, &x, &y, samples, seed).value;
        let more = rho_sampled(&m, &x, &y, 2 * samples, seed).value;
        ensure!(
            few <= more && more <= exact,
            "sampled {few} / {more} vs exact {exact} (seed {seed}) {}",
            show(&m, &[("x", &x), ("y", &y)])
        );
        Outcome::Pass
    })
}

// ---------------------------------------------------------------- radius

fn rc_properties_a0(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let s = with_model(arb_model(), |m| (full_elem(m), full_elem(m), 0..=4i64));
    check(cfg, name, s, |(m, (x, y, j))| {
        let base = r(&m, &x, &y);
        if !base.is_positive_finite() {
            return Outcome::Vacuous;
        }
        let eta = base.mul(&ExtScalar::frac(4 + j, 4));
        let lhs = rc(&m, &y).mul(&eta.recip());
        ensure!(
            lhs <= rc(&m, &x),
            "η = {eta}: rc(y)/η = {lhs} > rc(x) = {} {}",
            rc(&m, &x),
            show(&m, &[("x", &x), ("y", &y)])
        );
        Outcome::Pass
    })
}

fn rc_properties_a1(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let s = with_model(arb_model(), |m| (full_elem(m), arb_step(m)));
    check(cfg, name, s, |(m, (x, a))| {
        let y = m.add(&x, &a);
        if !m.leq(&x, &y) {
            return Outcome::Vacuous;
        }
        ensure!(
            rc(&m, &y) <= rc(&m, &x),
            "rc(y) = {} > rc(x) = {} {}",
            rc(&m, &y),
            rc(&m, &x),
            show(&m, &[("x", &x), ("y", &y)])
        );
        Outcome::Pass
    })
}

fn rc_properties_b(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let s = with_model(arb_model(), |m| (full_elem(m), 1..=6u64, 1..=6u64));
    check(cfg, name, s, |(m, (w, n, k))| {
        let x = m.scale(&w, n);
        let y = m.scale(&w, k);
        let eta = ExtScalar::frac(n as i64, k as i64);
        let ctx = || show(&m, &[("x", &x), ("y", &y)]);
        let proportional = m.rays_for(&[&x, &y]).iter().all(|ray| {
            m.eval_ray(ray, &x) == eta.mul(&m.eval_ray(ray, &y))
        });
        ensure!(proportional, "x̂ ≠ {eta}·ŷ {}", ctx());
        let lhs = rc(&m, &y).mul(&eta.recip());
        ensure!(lhs == rc(&m, &x), "rc(y)/η = {lhs} ≠ rc(x) = {} {}", rc(&m, &x), ctx());
        Outcome::Pass
    })
}

fn rc_properties_c0(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let s = with_model(arb_model(), |m| (full_elem(m), full_or_infinite(m)));
    check(cfg, name, s, |(m, (x, y))| {
        let dichotomous = m.rays_for(&[&y]).iter().all(|ray| {
            let v = m.eval_ray(ray, &y);
            v.is_zero() || v.is_infinite()
        });
        if !dichotomous || rc(&m, &x).is_infinite() {
            return Outcome::Vacuous;
        }
        ensure!(rc(&m, &y).is_zero(), "rc(y) = {} {}", rc(&m, &y), show(&m, &[("y", &y)]));
        Outcome::Pass
    })
}

fn rc_properties_c(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let s = with_model(arb_model(), full_elem);
    check(cfg, name, s, |(m, x)| {
        if rc(&m, &x).is_infinite() {
            return Outcome::Vacuous;
        }
        let ix = m.infinity_times(&x);
        ensure!(rc(&m, &ix).is_zero(), "rc(∞·x) = {} {}", rc(&m, &ix), show(&m, &[("x", &x)]));
        Outcome::Pass
    })
}

fn rc_properties_d(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let s = per_family(|m| (full_elem(m), 1..=6u64));
    check(cfg, name, s, |cases| {
        for (m, (w, n)) in &cases {
            let lhs = rc(m, &m.scale(w, *n));
            let rhs = rc(m, w).ratio(&int(*n));
            ensure!(lhs == rhs, "n = {n}: rc(n·w) = {lhs}, rc(w)/n = {rhs} {}", show(m, &[("w", w)]));
        }
        Outcome::Pass
    })
}

fn rc_properties_f(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let s = with_model(arb_model(), |m| (full_elem(m), full_elem(m)));
    check(cfg, name, s, |(m, (x, y))| {
        let s = rc(&m, &m.add(&x, &y));
        let bound = rc(&m, &x).min(rc(&m, &y));
        ensure!(s <= bound, "rc(x + y) = {s} > {bound} {}", show(&m, &[("x", &x), ("y", &y)]));
        Outcome::Pass
    })
}

fn lem_fu_rc_df(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let s = with_model(arb_model(), |m| {
        (any_elem(m), full_elem(m), any_elem(m), any_elem(m), 1..=8i64, any::<bool>())
    });
    check(cfg, name, s, |(m, (x, e, c, other, j, built))| {
        let rr = ExtScalar::frac(j, 4);
        let y = if built {
            m.add(&m.add(&x, &m.scale(&e, 2)), &c)
        } else {
            other
        };
        if !premise_holds(&m, &x, &y, &e, &rr) {
            return Outcome::Vacuous;
        }
        let ctx = || show(&m, &[("x", &x), ("y", &y), ("e", &e)]);
        let lam = lambda_ideal(&m, &y);
        ensure!(lam.eval(&m, &e).is_zero(), "λ_Idl(y)(e) ≠ 0 {}", ctx());
        ensure!(is_full(&m, &y), "premise holds at r = {rr} but y is not full {}", ctx());
        Outcome::Pass
    })
}

fn rkrc_sandwich(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let s = with_model(arb_perforated_or_sum(), |m| (full_elem(m), arb_step(m)));
    check(cfg, name, s, |(m, (x, a))| {
        let y = m.add(&x, &a);
        if !m.leq(&x, &y) || !fam(&m, &y) {
            return Outcome::Vacuous;
        }
        let ryx = r(&m, &y, &x);
        if ryx.is_infinite() {
            return Outcome::Vacuous;
        }
        let rxy = r(&m, &x, &y);
        let (rcx, rcy) = (rc(&m, &x), rc(&m, &y));
        let lo = rcy.mul(&rxy.recip());
        let hi = ryx.mul(&rcy);
        ensure!(
            lo <= rcx && rcx <= hi,
            "{lo} ≤ rc(x) = {rcx} ≤ {hi} fails (ρ(x, y) = {rxy}, ρ(y, x) = {ryx}, rc(y) = {rcy}) {}",
            show(&m, &[("x", &x), ("y", &y)])
        );
        Outcome::Pass
    })
}

/// Chains for the limit theorems: random partial sums, or on perforated
/// models the capped chain `1 + n·k` up to `1 + M·k`.
fn limit_chain_strategy() -> BoxedStrategy<(AnyModel, (ChainCandidate, bool, u64))> {
    let models = prop_oneof![arb_perforated_or_sum(), arb_model()].boxed();
    with_model(models, |m| (arb_chain(m, ElemSpec::FULL, 6), any::<bool>(), 3..=8u64))
}

fn limit_chain(m: &AnyModel, cand: &ChainCandidate, capped: bool, big_m: u64) -> (Vec<E>, E) {
    match m {
        AnyModel::Perforated(p) if capped => {
            let k = p.gap();
            let term = |n: u64| AnyElement::Perforated(ExtNat::Fin(1 + n * k));
            ((1..=big_m).map(term).collect(), term(big_m))
        }
        _ => chain_of(cand),
    }
}

struct LimitData {
    terms: Vec<E>,
    top: E,
    lim_fwd: ExtScalar,
    lim_bwd: ExtScalar,
    lim_rc: ExtScalar,
    rc_top: ExtScalar,
}

/// Hypotheses shared by the limit theorems: `y_n ≤ y_{n+1} ≤ y` in
/// `Full(S)`, `F_y ≠ ∅` and `lim ρ(y, y_n) < ∞`.
fn limit_data(m: &AnyModel, terms: Vec<E>, top: E) -> Result<LimitData, Outcome> {
    if !increasing(m, &terms, &top) || !terms.iter().all(|t| is_full(m, t)) || !fam(m, &top) {
        return Err(Outcome::Vacuous);
    }
    let limits = rho_chain_limits(m, &ChainLaw::Eventually(terms.clone()), &top)
        .expect("checked increasing");
    if limits.backward.is_infinite() {
        return Err(Outcome::Vacuous);
    }
    let rcs: Vec<ExtScalar> = terms.iter().map(|t| rc(m, t)).collect();
    if !nonincreasing(&rcs) {
        return Err(Outcome::Fail(format!(
            "rc(y_n) is not decreasing along an increasing chain in {m}"
        )));
    }
    Ok(LimitData {
        lim_rc: rcs.last().expect("nonempty").clone(),
        rc_top: rc(m, &top),
        lim_fwd: limits.forward,
        lim_bwd: limits.backward,
        terms,
        top,
    })
}

fn chain_context(m: &AnyModel, terms: &[E], top: &E) -> String {
    let shown: Vec<String> = terms.iter().map(|t| m.render(t)).collect();
    format!("in {m}: y_n = [{}], y = {}", shown.join("; "), m.render(top))
}

fn main_thm_for_rc_lim(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    check(cfg, name, limit_chain_strategy(), |(m, (cand, capped, big_m))| {
        let (terms, top) = limit_chain(&m, &cand, capped, big_m);
        let d = match limit_data(&m, terms, top) {
            Ok(d) => d,
            Err(o) => return o,
        };
        let lo = d.rc_top.mul(&d.lim_fwd.recip());
        let hi = d.lim_bwd.mul(&d.rc_top);
        ensure!(
            lo <= d.lim_rc && d.lim_rc <= hi,
            "{lo} ≤ lim rc = {} ≤ {hi} fails {}",
            d.lim_rc,
            chain_context(&m, &d.terms, &d.top)
        );
        Outcome::Pass
    })
}

fn rc_lim_rho1(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    check(cfg, name, limit_chain_strategy(), |(m, (cand, capped, big_m))| {
        let (terms, top) = limit_chain(&m, &cand, capped, big_m);
        let d = match limit_data(&m, terms, top) {
            Ok(d) => d,
            Err(o) => return o,
        };
        if d.lim_bwd != ExtScalar::one() {
            return Outcome::Vacuous;
        }
        ensure!(
            d.lim_rc == d.rc_top,
            "lim rc(y_n) = {} ≠ rc(y) = {} {}",
            d.lim_rc,
            d.rc_top,
            chain_context(&m, &d.terms, &d.top)
        );
        Outcome::Pass
    })
}

fn rk_ratio0(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let s = with_model(arb_model(), |m| (full_or_infinite(m), full_or_infinite(m)));
    check(cfg, name, s, |(m, (x, y))| {
        if !r(&m, &x, &y).is_zero() {
            return Outcome::Vacuous;
        }
        let ctx = || show(&m, &[("x", &x), ("y", &y)]);
        let (rcx, rcy) = (rc(&m, &x), rc(&m, &y));
        for n in 1..=4 {
            ensure!(rcy <= rc(&m, &m.scale(&x, n)), "rc(y) > rc({n}·x) {}", ctx());
        }
        if rcx.is_finite() {
            ensure!(rcy.is_zero(), "rc(y) = {rcy} ≠ 0 {}", ctx());
        }
        if r(&m, &y, &x).is_zero() {
            ensure!(rcx == rcy, "rc(x) = {rcx} ≠ rc(y) = {rcy} {}", ctx());
            if rcy.is_finite() {
                ensure!(rcx.is_zero() && rcy.is_zero(), "radii not zero {}", ctx());
            }
        }
        Outcome::Pass
    })
}

fn extreme_infinite_rho(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let s = with_model(arb_model(), |m| arb_chain(m, ElemSpec::FULL, 5));
    check(cfg, name, s, |(m, cand)| {
        let y = m.largest();
        let terms = cand.terms.clone();
        if !increasing(&m, &terms, &y) || !terms.iter().all(|t| is_full(&m, t)) || fam(&m, &y) {
            return Outcome::Vacuous;
        }
        let last = terms.last().expect("nonempty");
        if !r(&m, &y, last).is_infinite() {
            return Outcome::Vacuous;
        }
        let ctx = || chain_context(&m, &terms, &y);
        ensure!(terms.iter().all(|t| fam(&m, t)), "some F_(y_n) is empty {}", ctx());
        let n_terms = terms.len();
        let seq: Vec<ExtScalar> = (1..=n_terms + 6)
            .map(|n| {
                let t = &terms[(n - 1).min(n_terms - 1)];
                let v = rc(&m, &m.scale(t, n as u64));
                (v, rc(&m, t).ratio(&int(n as u64)))
            })
            .map(|(v, want)| if v == want { v } else { ExtScalar::INFINITY })
            .collect();
        ensure!(
            nonincreasing(&seq) && seq.iter().all(|v| v.is_finite()),
            "rc(n·y_n) is not rc(y_n)/n decreasing {}",
            ctx()
        );
        if terms.iter().any(|t| rc(&m, t).is_finite()) {
            // rc(n·y_n) = rc(y_N)/n for n ≥ N, which tends to 0.
            ensure!(rc(&m, last).is_finite(), "rc(y_N) = ∞ {}", ctx());
            ensure!(rc(&m, &y).is_zero(), "rc(y) ≠ 0 {}", ctx());
        }
        Outcome::Pass
    })
}

fn extreme_zero_rho(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let s = with_model(arb_model(), |m| (arb_chain(m, ElemSpec::FULL, 5), 0..=5usize, any::<bool>()));
    check(cfg, name, s, |(m, (cand, switch, capped))| {
        let terms: Vec<E> = cand
            .terms
            .iter()
            .enumerate()
            .map(|(i, t)| if i >= switch { m.infinity_times(t) } else { t.clone() })
            .collect();
        let last = terms.last().expect("nonempty").clone();
        let y = if capped { last.clone() } else { m.largest() };
        if !increasing(&m, &terms, &y) || !terms.iter().all(|t| is_full(&m, t)) {
            return Outcome::Vacuous;
        }
        if !r(&m, &y, &last).is_zero() {
            return Outcome::Vacuous;
        }
        let ctx = || chain_context(&m, &terms, &y);
        ensure!(!fam(&m, &y) && !fam(&m, &last), "normalized families are not empty {}", ctx());
        let (lim_rc, rc_y) = (rc(&m, &last), rc(&m, &y));
        ensure!(lim_rc == rc_y, "lim rc(y_n) = {lim_rc} ≠ rc(y) = {rc_y} {}", ctx());
        if rc_y.is_finite() {
            ensure!(rc_y.is_zero(), "rc(y) = {rc_y} ≠ 0 {}", ctx());
        }
        Outcome::Pass
    })
}

fn irc_properties(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let s = with_model(arb_model(), |m| {
        (full_elem(m), arb_step(m), 1..=6u64, arb_chain(m, ElemSpec::FULL, 5))
    });
    check(cfg, name, s, |(m, (x, a, n, cand))| {
        let inv = |e: &E| irc(&m, e).expect("full");
        let y = m.add(&x, &a);
        let ctx = || show(&m, &[("x", &x), ("y", &y)]);
        if m.leq(&x, &y) {
            ensure!(inv(&x) <= inv(&y), "Irc(x) = {} > Irc(y) = {} {}", inv(&x), inv(&y), ctx());
        }
        let scaled = inv(&m.scale(&x, n));
        ensure!(scaled == int(n).mul(&inv(&x)), "Irc({n}·x) = {scaled} {}", ctx());
        let terms = cand.terms;
        let sup = terms.last().expect("nonempty").clone();
        if increasing(&m, &terms, &sup)
            && terms.iter().all(|t| is_full(&m, t))
            && fam(&m, &sup)
            && r(&m, &sup, &sup) == ExtScalar::one()
        {
            let best = terms.iter().map(&inv).max().expect("nonempty");
            ensure!(best == inv(&sup), "sup Irc(x_n) = {best} ≠ Irc(x) {}", chain_context(&m, &terms, &sup));
        }
        Outcome::Pass
    })
}

fn cor_rrc_eq_rc(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let s = with_model(arb_model(), |m| arb_elem(m, ElemSpec::FULL_FINITE));
    check(cfg, name, s, |(m, w)| {
        if !residually_finite(&m, &w) || !m.compactly_contained(&w, &w) {
            return Outcome::Vacuous;
        }
        let strict = match rc_strict(&m, &w) {
            Ok(v) => v.value,
            Err(e) => return Outcome::Fail(format!("strict radius failed: {e} {}", show(&m, &[("w", &w)]))),
        };
        ensure!(strict == rc(&m, &w), "strict {strict} ≠ rc {} {}", rc(&m, &w), show(&m, &[("w", &w)]));
        Outcome::Pass
    })
}

/// Element bound for exhaustive searches: past every gap, small elsewhere.
fn search_bound(m: &AnyModel) -> u64 {
    match m {
        AnyModel::Perforated(p) => 2 * p.gap() + 1,
        AnyModel::PointFn(p) if p.dim() == 1 => 4,
        AnyModel::PointFn(_) => 3,
        AnyModel::Idempotent(_) => 1,
        AnyModel::Spectral(_) => 2,
        AnyModel::Sum(s) => {
            let gap = |m: &AnyModel| match m {
                AnyModel::Perforated(p) => p.gap() + 1,
                _ => 2,
            };
            gap(&s.left).max(gap(&s.right)).max(3)
        }
    }
}

/// Largest finite coordinate of `w` in point and perforated components.
/// Spectral and idempotent components contribute nothing: their radii
/// vanish and neither comparison can fail there.
fn coordinate_size(m: &AnyModel, w: &E) -> u64 {
    match (m, w) {
        (AnyModel::Perforated(_), AnyElement::Perforated(ExtNat::Fin(n))) => *n,
        (AnyModel::PointFn(_), AnyElement::PointFn(v)) => v
            .iter()
            .filter_map(|c| match c {
                ExtNat::Fin(n) => Some(*n),
                ExtNat::Inf => None,
            })
            .max()
            .unwrap_or(0),
        (AnyModel::Sum(s), AnyElement::Sum(pair)) => {
            coordinate_size(&s.left, &pair.0).max(coordinate_size(&s.right, &pair.1))
        }
        _ => 0,
    }
}

fn prop_r1234(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let spec = ElemSpec {
        bound: Some(2),
        ..ElemSpec::FULL_FINITE
    };
    let s = with_model(arb_small_model(), move |m| (arb_elem(m, spec), 1..=12i64));
    check(cfg, name, s, |(m, (w, j))| {
        if !residually_finite(&m, &w) || !m.compactly_contained(&w, &w) {
            return Outcome::Vacuous;
        }
        // The strict premise needs y ≥ x + r·w coordinatewise with y finite,
        // so the enumeration must reach past (r + 1/4)·w.
        let reach = (coordinate_size(&m, &w) * (j as u64 + 1)).div_ceil(4);
        let bound = search_bound(&m) + reach;
        let xs = m.enumerate(bound);
        let mut ys = xs.clone();
        ys.extend(m.extra_targets(bound));
        let big = m.infinity_times(&w);
        let finite: Vec<&E> = ys.iter().filter(|e| m.compactly_contained(e, &big)).collect();
        let nonstrict = |rr: &ExtScalar| {
            xs.iter().all(|x| {
                ys.iter()
                    .all(|y| !premise_holds(&m, x, y, &w, rr) || m.leq(x, y))
            })
        };
        let strict = |rr: &ExtScalar| {
            finite.iter().all(|x| {
                finite
                    .iter()
                    .all(|y| !strict_premise_holds(&m, x, y, &w, rr) || m.leq(x, y))
            })
        };
        let rr = ExtScalar::frac(j, 4);
        let next = ExtScalar::frac(j + 1, 4);
        let ctx = || format!("r = {rr}, bound {bound}, {}", show(&m, &[("w", &w)]));
        if nonstrict(&rr) {
            ensure!(strict(&rr), "non-strict comparison holds but strict fails, {}", ctx());
        }
        if strict(&rr) {
            ensure!(nonstrict(&next), "strict comparison holds but non-strict fails at r + 1/4, {}", ctx());
        }
        Outcome::Pass
    })
}

fn search_grid() -> Vec<ExtScalar> {
    (1..=24).map(|j| ExtScalar::frac(j, 4)).collect()
}

fn search_soundness(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let spec = ElemSpec {
        bound: Some(3),
        ..ElemSpec::FULL
    };
    let s = with_model(arb_small_model(), move |m| arb_elem(m, spec));
    check(cfg, name, s, |(m, w)| {
        let bound = search_bound(&m);
        let found = match rc_search(&m, &w, bound, &search_grid()) {
            Ok(f) => f,
            Err(e) => return Outcome::Fail(format!("search failed: {e}")),
        };
        let ctx = || show(&m, &[("w", &w)]);
        let exact = rc(&m, &w);
        ensure!(found.value <= exact, "lower bound {} > rc = {exact} {}", found.value, ctx());
        if let Some(c) = &found.certificate {
            ensure!(
                premise_holds(&m, &c.x, &c.y, &w, &c.r) && !m.leq(&c.x, &c.y) && c.r == found.value,
                "certificate ({}, {}) at r = {} does not verify {}",
                m.render(&c.x),
                m.render(&c.y),
                c.r,
                ctx()
            );
        } else {
            ensure!(found.value.is_zero(), "positive bound without certificate {}", ctx());
        }
        if let Some(clear) = &found.clear_from {
            ensure!(*clear > found.value, "clear_from {clear} not above the bound {}", ctx());
        }
        Outcome::Pass
    })
}

fn rc_purely_infinite(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let s = with_model(arb_purely_infinite_model(), full_elem);
    check(cfg, name, s, |(m, a)| {
        let ctx = || show(&m, &[("a", &a)]);
        ensure!(rc(&m, &a).is_zero(), "rc = {} {}", rc(&m, &a), ctx());
        let found = rc_search(&m, &a, 2, &search_grid()).expect("full");
        ensure!(
            found.value.is_zero() && found.certificate.is_none(),
            "violation found at r = {} {}",
            found.value,
            ctx()
        );
        Outcome::Pass
    })
}

// ---------------------------------------------------------------- oscillation

fn oscillation_equivalence(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    check(cfg, name, arb_any_profile(), |a| {
        let m_star = a.stable_index(&[]);
        let om = omega(&a);
        let (defect, _) = cutdown_defect_sup(&a, m_star);
        ensure!(
            om.is_zero() == defect.is_zero(),
            "ω = {om} but cutdown defect = {defect} for {a}"
        );
        for m in [m_star + 1, 2 * m_star, 3 * m_star + 1] {
            let s = smoothed_defect_sup(&a, m).0;
            let c = cutdown_defect_sup(&a, m).0;
            ensure!(
                s == om && c == defect,
                "not stable past m* = {m_star}: at m = {m} defects {s}, {c} vs {om}, {defect} for {a}"
            );
        }
        Outcome::Pass
    })
}

fn cont_rank(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    check(cfg, name, arb_any_full_profile(), |a| {
        let rep = match contrank_check(&a) {
            Ok(rep) => rep,
            Err(e) => return Outcome::Fail(format!("contrank_check rejected {a}: {e}")),
        };
        ensure!(rep.all_agree(), "conditions disagree {:?} for {a}", rep.conditions());
        ensure!(rep.omega == omega(&a), "report ω differs for {a}");
        ensure!(rep.limit_rho_cutdown == limit_rho_cutdown(&a), "report limit differs for {a}");
        let pts = profile_points(&[&a], &[]);
        let dims: Vec<ExtScalar> = pts.iter().map(|t| a.dimension_at(t)).collect();
        let constant = dims.windows(2).all(|w| w[0] == w[1]);
        ensure!(constant == rep.rank_continuous, "continuity oracle disagrees for {a}");
        Outcome::Pass
    })
}

fn oscillation_dirac_mixtures(cfg: &SuiteConfig, name: &str) -> PropertyReport {
    let s = (
        arb_any_profile(),
        1..=12u64,
        vec((0..=64i64, 1..=5i64), 1..=4),
    );
    check(cfg, name, s, |(a, m, atoms)| {
        let eps = qr(1, m as i64);
        let smooth = a.smooth(&eps);
        let cut = a.cutdown(&eps);
        let sup_s = smoothed_defect_sup(&a, m).0;
        let sup_c = cutdown_defect_sup(&a, m).0;
        let total: i64 = atoms.iter().map(|(_, w)| w).sum();
        let mut mix_s = ExtScalar::zero();
        let mut mix_c = ExtScalar::zero();
        for (j, w) in &atoms {
            let t = qr(*j, 64);
            let d = a.dimension_at(&t);
            let weight = ExtScalar::frac(*w, total);
            mix_s = mix_s.add(&weight.mul(&d.saturating_sub(&smooth.trace_at(&t))));
            mix_c = mix_c.add(&weight.mul(&d.saturating_sub(&cut.dimension_at(&t))));
        }
        ensure!(mix_s <= sup_s, "m = {m}: smoothed mixture {mix_s} > sup {sup_s} for {a}");
        ensure!(mix_c <= sup_c, "m = {m}: cutdown mixture {mix_c} > sup {sup_c} for {a}");
        Outcome::Pass
    })
}
