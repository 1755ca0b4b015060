//! Independent brute-force oracles, written against plain integers and
//! rationals rather than the crate's own order and functional code.

use cuntz_core::radius::{rc_exact, rc_search};
use cuntz_core::rankratio::{rho, rho_sampled};
use cuntz_core::{AnyModel, CuModel, ExtNat, ExtScalar, PerforatedModel, PointFnModel};
use num_rational::Ratio;
use proptest::prelude::*;

type Q = Ratio<i64>;

/// `None` is `∞`.
type Nat = Option<i64>;

fn perforated_leq(k: i64, a: Nat, b: Nat) -> bool {
    match (a, b) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(a), Some(b)) => a == b || a == 0 || a + k <= b,
    }
}

/// `x + r·w ≤ y` under the single rank functional, plus `λ_∞`.
fn perforated_premise(x: Nat, y: Nat, w: i64, r: Q) -> bool {
    match (x, y) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(x), Some(y)) => Q::from(x) + r * Q::from(w) <= Q::from(y),
    }
}

fn perforated_violation(k: i64, w: i64, r: Q, max: i64) -> Option<(Nat, Nat)> {
    let values: Vec<Nat> = (0..=max).map(Some).chain([None]).collect();
    for &x in &values {
        for &y in &values {
            if perforated_premise(x, y, w, r) && !perforated_leq(k, x, y) {
                return Some((x, y));
            }
        }
    }
    None
}

fn as_scalar(q: Q) -> ExtScalar {
    ExtScalar::frac(*q.numer(), *q.denom())
}

#[test]
fn perforated_radius_matches_exhaustive_search() {
    for k in 2..=6i64 {
        for w in 1..=4i64 {
            let grid: Vec<Q> = (1..=12 * k).map(|j| Q::new(j, 12)).collect();
            let oracle = grid
                .iter()
                .copied()
                .filter(|&r| perforated_violation(k, w, r, 50).is_some())
                .max()
                .unwrap_or(Q::from(0));
            let first_clear = grid.iter().copied().find(|&r| r > oracle);
            assert!(
                grid.iter()
                    .filter(|&&r| r > oracle)
                    .all(|&r| perforated_violation(k, w, r, 50).is_none()),
                "violations are not downward closed for k = {k}, w = {w}"
            );
            assert_eq!(oracle, Q::new(k - 1, w), "k = {k}, w = {w}");
            assert!(first_clear.is_some());

            let m = PerforatedModel::new(k as u64);
            let exact = rc_exact(&m, &ExtNat::Fin(w as u64)).unwrap().value;
            assert_eq!(exact, as_scalar(oracle), "k = {k}, w = {w}");
            let scalars: Vec<ExtScalar> = grid.iter().map(|&r| as_scalar(r)).collect();
            let found = rc_search(&m, &ExtNat::Fin(w as u64), 12, &scalars).unwrap();
            assert_eq!(found.value, exact, "search at k = {k}, w = {w}");
        }
    }
}

fn point_ratio(x: &[Nat], y: &[Nat]) -> Option<Q> {
    // None stands for ∞; the sup of per-point ratios with 0/0 = 0.
    let mut best = Some(Q::from(0));
    for (a, b) in x.iter().zip(y) {
        let v = match (a, b) {
            (Some(0), _) => Some(Q::from(0)),
            (_, Some(0)) => None,
            (None, None) => Some(Q::from(0)),
            (None, Some(_)) => None,
            (Some(_), None) => Some(Q::from(0)),
            (Some(a), Some(b)) => Some(Q::new(*a, *b)),
        };
        best = match (best, v) {
            (None, _) | (_, None) => None,
            (Some(p), Some(q)) => Some(p.max(q)),
        };
    }
    best
}

fn to_ext(v: &[Nat]) -> Vec<ExtNat> {
    v.iter()
        .map(|c| c.map_or(ExtNat::Inf, |n| ExtNat::Fin(n as u64)))
        .collect()
}

fn arb_coord() -> impl Strategy<Value = Nat> {
    prop_oneof![8 => (0..6i64).prop_map(Some), 1 => Just(None)]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 500, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn point_function_rank_ratio_is_the_largest_coordinate_ratio(
        x in proptest::collection::vec(arb_coord(), 3),
        y in proptest::collection::vec(arb_coord(), 3),
    ) {
        let m = PointFnModel::with_points(3);
        let got = rho(&m, &to_ext(&x), &to_ext(&y)).value;
        let want = point_ratio(&x, &y).map_or(ExtScalar::INFINITY, as_scalar);
        prop_assert_eq!(got, want);
    }

    #[test]
    fn sampled_rank_ratio_never_exceeds_the_exact_value(
        x in proptest::collection::vec(arb_coord(), 2),
        y in proptest::collection::vec(arb_coord(), 2),
        samples in 1usize..40,
        seed in any::<u64>(),
    ) {
        let m = AnyModel::point_fn(["p", "q"]);
        let (x, y) = (m.make_element(&render(&x)).unwrap(), m.make_element(&render(&y)).unwrap());
        let exact = rho(&m, &x, &y).value;
        let sampled = rho_sampled(&m, &x, &y, samples, seed).value;
        prop_assert!(sampled <= exact);
        // Every single ray is among the first samples, so enough samples
        // reach the exact value on point functions.
        prop_assert_eq!(rho_sampled(&m, &x, &y, 64, seed).value, exact);
    }
}

fn render(v: &[Nat]) -> String {
    v.iter()
        .map(|c| c.map_or("inf".to_string(), |n| n.to_string()))
        .collect::<Vec<_>>()
        .join(", ")
}

#[test]
fn direct_sum_radius_is_the_larger_component() {
    let m = AnyModel::parse("sum(perforated(3), perforated(5))").unwrap();
    for (a, b) in [(1u64, 1u64), (2, 1), (1, 3), (4, 6)] {
        let w = m.make_element(&format!("<{a}> <{b}>")).unwrap();
        let want = Q::new(2, a as i64).max(Q::new(4, b as i64));
        assert_eq!(rc_exact(&m, &w).unwrap().value, as_scalar(want), "w = ({a}, {b})");
        let grid: Vec<ExtScalar> = (1..=60).map(|j| ExtScalar::frac(j, 12)).collect();
        let found = rc_search(&m, &w, 7, &grid).unwrap();
        assert_eq!(found.value, as_scalar(want), "search at w = ({a}, {b})");
    }
}

#[test]
fn zero_is_never_full_and_infinity_has_radius_zero() {
    let m = PerforatedModel::new(4);
    assert!(rc_exact(&m, &ExtNat::ZERO).is_err());
    assert_eq!(rc_exact(&m, &ExtNat::Inf).unwrap().value, ExtScalar::zero());
    assert_eq!(m.render(&ExtNat::Inf), "inf");
}
