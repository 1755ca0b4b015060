//! Relative radius of comparison
//! `rc(S, w) = inf{r > 0 : x̂ + r·ŵ ≤ ŷ implies x ≤ y}`, its strict
//! normalized variant, a certified bounded search, and `Irc = 1/rc`.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;

use crate::cucore::{ideal_membership, is_full, CuModel};
use crate::error::{Error, Result};
use crate::functionals::has_normalizing_ray;
use crate::scalar::ExtScalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RcMethod {
    ExactFormula,
    BoundedSearch,
}

impl fmt::Display for RcMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RcMethod::ExactFormula => "exact-formula",
            RcMethod::BoundedSearch => "bounded-search",
        })
    }
}

/// A pair showing that `r`-comparison fails: the premise holds but `x ≰ y`.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation<E> {
    pub x: E,
    pub y: E,
    pub r: ExtScalar,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RcResult<E> {
    /// The exact infimum, or for a search the certified lower bound.
    pub value: ExtScalar,
    pub method: RcMethod,
    /// For a search, the violation proving the lower bound.
    pub certificate: Option<Violation<E>>,
    /// For a search, the element bound used.
    pub bound: Option<u64>,
    /// For a search, the smallest grid value above the lower bound at which
    /// no violation was found. Not a certificate: elements past the bound
    /// were not examined.
    pub clear_from: Option<ExtScalar>,
}

impl<E> RcResult<E> {
    fn exact(value: ExtScalar) -> Self {
        RcResult {
            value,
            method: RcMethod::ExactFormula,
            certificate: None,
            bound: None,
            clear_from: None,
        }
    }
}

fn require_full<M: CuModel>(model: &M, w: &M::Elem) -> Result<()> {
    if is_full(model, w) {
        Ok(())
    } else {
        Err(Error::NotFull(model.render(w)))
    }
}

/// `rc(S, w)` from the model's closed form.
pub fn rc_exact<M: CuModel>(model: &M, w: &M::Elem) -> Result<RcResult<M::Elem>> {
    require_full(model, w)?;
    model
        .rc_formula(w)
        .map(RcResult::exact)
        .ok_or_else(|| Error::NoClosedForm(model.name()))
}

/// The radius with premise `λ(x) + r < λ(y)` for every `λ ∈ F_w`.
pub fn rc_strict<M: CuModel>(model: &M, w: &M::Elem) -> Result<RcResult<M::Elem>> {
    require_full(model, w)?;
    if !has_normalizing_ray(model, w) {
        return Err(Error::EmptyNormalizedFamily);
    }
    model
        .rc_strict_formula(w)
        .map(RcResult::exact)
        .ok_or_else(|| Error::NoClosedForm(model.name()))
}

/// `x̂ + r·ŵ ≤ ŷ`, checked on the rays and on all ideal functionals.
///
/// For `λ_I` the inequality says `y ∈ I ⟹ x, w ∈ I`, which is the same as
/// `x, w ∈ Idl(y)`.
pub fn premise_holds<M: CuModel>(
    model: &M,
    x: &M::Elem,
    y: &M::Elem,
    w: &M::Elem,
    r: &ExtScalar,
) -> bool {
    if !ideal_membership(model, y, x) || !ideal_membership(model, y, w) {
        return false;
    }
    model.rays_for(&[x, y, w]).iter().all(|ray| {
        let lhs = model.eval_ray(ray, x).add(&r.mul(&model.eval_ray(ray, w)));
        lhs <= model.eval_ray(ray, y)
    })
}

/// `λ(x) + r < λ(y)` for every vertex `λ = ray/ray(w)` of `F_w`.
///
/// Other members of `F_w` are convex combinations of vertices plus parts
/// vanishing at `w`, which can only be `0` or add `∞` to both sides.
pub fn strict_premise_holds<M: CuModel>(
    model: &M,
    x: &M::Elem,
    y: &M::Elem,
    w: &M::Elem,
    r: &ExtScalar,
) -> bool {
    model.rays_for(&[x, y, w]).iter().all(|ray| {
        let vw = model.eval_ray(ray, w);
        if !vw.is_positive_finite() {
            return true;
        }
        let c = vw.recip();
        let lhs = c.mul(&model.eval_ray(ray, x)).add(r);
        lhs < c.mul(&model.eval_ray(ray, y))
    })
}

/// First violation of `r`-comparison among bounded pairs, in enumeration
/// order (`x` outer, `y` inner).
pub fn find_violation<M: CuModel>(
    model: &M,
    w: &M::Elem,
    r: &ExtScalar,
    xs: &[M::Elem],
    ys: &[M::Elem],
) -> Option<Violation<M::Elem>> {
    for x in xs {
        for y in ys {
            if premise_holds(model, x, y, w, r) && !model.leq(x, y) {
                return Some(Violation {
                    x: x.clone(),
                    y: y.clone(),
                    r: r.clone(),
                });
            }
        }
    }
    None
}

/// The default grid `{j/12 : 1 ≤ j ≤ 12·bound}`.
pub fn default_grid(bound: u64) -> Vec<ExtScalar> {
    (1..=12 * bound as i64).map(|j| ExtScalar::frac(j, 12)).collect()
}

/// Certified lower bound for `rc(S, w)` by exhaustive search over elements
/// of complexity at most `bound`.
///
/// The value is the largest grid `r` admitting a violation (`0` if none),
/// carried with the first violation at that `r` in enumeration order. The
/// premise only weakens as `r` grows, so each incomparable pair is
/// located on the grid by bisection. Pairs are scanned in parallel; the
/// result does not depend on scheduling.
pub fn rc_search<M>(
    model: &M,
    w: &M::Elem,
    bound: u64,
    grid: &[ExtScalar],
) -> Result<RcResult<M::Elem>>
where
    M: CuModel + Sync,
    M::Elem: Send + Sync,
{
    require_full(model, w)?;
    let mut grid = grid.to_vec();
    grid.sort();
    grid.dedup();
    let xs = model.enumerate(bound);
    let mut ys = xs.clone();
    for e in model.extra_targets(bound) {
        if !ys.contains(&e) {
            ys.push(e);
        }
    }
    // Number of grid values at which (x, y) violates comparison.
    let reach = |x: &M::Elem, y: &M::Elem| -> usize {
        if model.leq(x, y) {
            return 0;
        }
        grid.partition_point(|r| premise_holds(model, x, y, w, r))
    };
    let top = xs
        .par_iter()
        .map(|x| ys.iter().map(|y| reach(x, y)).max().unwrap_or(0))
        .max()
        .unwrap_or(0);
    let (value, certificate) = match top {
        0 => (ExtScalar::zero(), None),
        n => {
            let r = &grid[n - 1];
            (r.clone(), find_violation(model, w, r, &xs, &ys))
        }
    };
    Ok(RcResult {
        value,
        method: RcMethod::BoundedSearch,
        certificate,
        bound: Some(bound),
        clear_from: grid.get(top).cloned(),
    })
}

/// `Irc(x) = 1/rc(S, x)` with `1/0 = ∞` and `1/∞ = 0`.
pub fn irc<M: CuModel>(model: &M, x: &M::Elem) -> Result<ExtScalar> {
    Ok(rc_exact(model, x)?.value.recip())
}

/// `{rc(S, w) : w full, complexity ≤ bound}`.
pub fn rc_range_sample<M: CuModel>(model: &M, bound: u64) -> Result<BTreeSet<ExtScalar>> {
    let mut out = BTreeSet::new();
    for w in model.enumerate(bound) {
        if is_full(model, &w) {
            out.insert(rc_exact(model, &w)?.value);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{DirectSum, Idem, IdempotentModel, PerforatedModel, PointFnModel};
    use crate::scalar::ExtNat;

    #[test]
    fn perforated_values() {
        let p = PerforatedModel::new(4);
        assert_eq!(rc_exact(&p, &ExtNat::Fin(1)).unwrap().value, ExtScalar::from_int(3));
        assert_eq!(rc_exact(&p, &ExtNat::Fin(2)).unwrap().value, ExtScalar::frac(3, 2));
        assert_eq!(rc_exact(&p, &ExtNat::Inf).unwrap().value, ExtScalar::zero());
        assert!(matches!(rc_exact(&p, &ExtNat::Fin(0)), Err(Error::NotFull(_))));
        assert_eq!(rc_strict(&p, &ExtNat::Fin(1)).unwrap().value, ExtScalar::from_int(3));
        assert!(matches!(
            rc_strict(&p, &ExtNat::Inf),
            Err(Error::EmptyNormalizedFamily)
        ));
    }

    #[test]
    fn other_models() {
        let m = PointFnModel::new(["p", "q"]);
        let w = vec![ExtNat::Fin(1), ExtNat::Fin(3)];
        assert_eq!(rc_exact(&m, &w).unwrap().value, ExtScalar::zero());
        assert_eq!(rc_strict(&m, &w).unwrap().value, ExtScalar::zero());
        assert_eq!(irc(&m, &w).unwrap(), ExtScalar::INFINITY);
        assert_eq!(rc_exact(&IdempotentModel, &Idem::U).unwrap().value, ExtScalar::zero());
        assert!(matches!(
            rc_strict(&IdempotentModel, &Idem::U),
            Err(Error::EmptyNormalizedFamily)
        ));
    }

    #[test]
    fn irc_examples() {
        let p = PerforatedModel::new(3);
        assert_eq!(irc(&p, &ExtNat::Fin(1)).unwrap(), ExtScalar::frac(1, 2));
        assert_eq!(irc(&p, &ExtNat::Inf).unwrap(), ExtScalar::INFINITY);
    }

    #[test]
    fn search_examples() {
        let p = PerforatedModel::new(5);
        let grid: Vec<ExtScalar> = (1..=40).map(|j| ExtScalar::frac(j, 4)).collect();
        let r = rc_search(&p, &ExtNat::Fin(1), 30, &grid).unwrap();
        assert_eq!(r.value, ExtScalar::from_int(4));
        let c = r.certificate.unwrap();
        assert_eq!((c.x, c.y), (ExtNat::Fin(1), ExtNat::Fin(5)));
        assert_eq!(r.clear_from, Some(ExtScalar::frac(17, 4)));

        let p2 = PerforatedModel::new(2);
        let grid = [ExtScalar::frac(1, 2), ExtScalar::one(), ExtScalar::frac(3, 2)];
        let r = rc_search(&p2, &ExtNat::Fin(1), 10, &grid).unwrap();
        assert_eq!(r.value, ExtScalar::one());
        let c = r.certificate.unwrap();
        assert_eq!((c.x, c.y), (ExtNat::Fin(1), ExtNat::Fin(2)));

        let p4 = PerforatedModel::new(4);
        let r = rc_search(&p4, &ExtNat::Fin(1), 30, &default_grid(30)).unwrap();
        assert_eq!(r.value, ExtScalar::from_int(3));
        let c = r.certificate.unwrap();
        assert_eq!((c.x, c.y), (ExtNat::Fin(1), ExtNat::Fin(4)));

        let m = PointFnModel::new(["p", "q"]);
        let r = rc_search(&m, &vec![ExtNat::Fin(1); 2], 3, &default_grid(3)).unwrap();
        assert_eq!(r.value, ExtScalar::zero());
        assert!(r.certificate.is_none());
    }

    #[test]
    fn range_sample() {
        let p = PerforatedModel::new(6);
        let got: Vec<ExtScalar> = rc_range_sample(&p, 4).unwrap().into_iter().collect();
        let want = [
            ExtScalar::frac(5, 4),
            ExtScalar::frac(5, 3),
            ExtScalar::frac(5, 2),
            ExtScalar::from_int(5),
        ];
        assert_eq!(got, want);
        let m = PointFnModel::new(["p", "q"]);
        assert_eq!(
            rc_range_sample(&m, 3).unwrap().into_iter().collect::<Vec<_>>(),
            vec![ExtScalar::zero()]
        );
        assert_eq!(
            rc_range_sample(&IdempotentModel, 3).unwrap().into_iter().collect::<Vec<_>>(),
            vec![ExtScalar::zero()]
        );
    }

    #[test]
    fn direct_sum_is_max_of_components() {
        let s = DirectSum::new(PerforatedModel::new(4), PerforatedModel::new(3));
        let w = (ExtNat::Fin(2), ExtNat::Fin(1));
        let exact = rc_exact(&s, &w).unwrap().value;
        assert_eq!(exact, ExtScalar::from_int(2));
        let found = rc_search(&s, &w, 6, &default_grid(3)).unwrap();
        assert_eq!(found.value, exact);
        assert_eq!(rc_strict(&s, &w).unwrap().value, exact);
        let mixed = DirectSum::new(PerforatedModel::new(4), IdempotentModel);
        let w = (ExtNat::Fin(1), Idem::U);
        assert_eq!(rc_strict(&mixed, &w).unwrap().value, ExtScalar::INFINITY);
    }

    #[test]
    fn strict_oracle_matches_formula() {
        // Exhaustive strict-premise search for the gapped order.
        for k in 1..=5u64 {
            let p = PerforatedModel::new(k);
            for m in 1..=3u64 {
                let w = ExtNat::Fin(m);
                let xs = p.enumerate(3 * k + 3);
                let mut ys = xs.clone();
                ys.push(ExtNat::Inf);
                let violated = |r: &ExtScalar| {
                    xs.iter().any(|x| {
                        ys.iter()
                            .any(|y| strict_premise_holds(&p, x, y, &w, r) && !p.leq(x, y))
                    })
                };
                let clear: Vec<ExtScalar> = default_grid(k)
                    .into_iter()
                    .chain([ExtScalar::zero()])
                    .filter(|r| !violated(r))
                    .collect();
                let least = clear.into_iter().min().unwrap();
                assert_eq!(least, rc_strict(&p, &w).unwrap().value, "k={k} m={m}");
            }
        }
    }
}
