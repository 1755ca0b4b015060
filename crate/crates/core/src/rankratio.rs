//! Rank ratios `ρ(x, y) = inf{r > 0 : λ(x) ≤ r·λ(y) for every functional λ}`
//! and the normalized variant `ρ_z`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cucore::{check_increasing, ideal_membership, is_full, ChainLaw, CuModel, Ray};
use crate::error::{Error, Result};
use crate::functionals::{has_normalizing_ray, Functional};
use crate::scalar::ExtScalar;

/// Why a rank ratio has its value.
#[derive(Clone, Debug, PartialEq)]
pub enum RhoWitness<E> {
    /// A ray attaining the supremum of `ray(x)/ray(y)`.
    Ray(Ray),
    /// A functional attaining a sampled value.
    Functional(Functional<E>),
    /// `λ_{Idl(y)}` vanishes at `y` but not at `x`, so no `r` works.
    Ideal(E),
    /// No functional constrains `r`.
    Vacuous,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RhoMethod {
    ExactRays,
    SampledLowerBound,
}

impl fmt::Display for RhoMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RhoMethod::ExactRays => "exact-rays",
            RhoMethod::SampledLowerBound => "sampled-lower-bound",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RhoResult<E> {
    pub value: ExtScalar,
    pub witness: RhoWitness<E>,
    pub method: RhoMethod,
}

impl<E: Clone + fmt::Debug + PartialEq> RhoResult<E> {
    pub fn describe_witness<M: CuModel<Elem = E>>(&self, model: &M) -> String {
        match &self.witness {
            RhoWitness::Ray(r) => model.describe_ray(r),
            RhoWitness::Functional(f) => f.describe(model),
            RhoWitness::Ideal(g) => format!("lambda_Idl({})", model.render(g)),
            RhoWitness::Vacuous => "vacuous".into(),
        }
    }
}

/// First ray attaining the largest `ratio(ray(x), ray(y))`, or `None` if
/// every ratio is zero.
fn best_ray<M: CuModel + Sync>(
    model: &M,
    rays: &[Ray],
    x: &M::Elem,
    y: &M::Elem,
) -> Option<(usize, ExtScalar)>
where
    M::Elem: Sync,
{
    rays.par_iter()
        .enumerate()
        .map(|(i, r)| (i, model.eval_ray(r, x).ratio(&model.eval_ray(r, y))))
        .filter(|(_, v)| !v.is_zero())
        // Ties resolve to the smallest index so the result is deterministic.
        .reduce_with(|a, b| match b.1.cmp(&a.1) {
            std::cmp::Ordering::Greater => b,
            std::cmp::Ordering::Less => a,
            std::cmp::Ordering::Equal => {
                if a.0 <= b.0 {
                    a
                } else {
                    b
                }
            }
        })
}

/// `ρ(x, y)`.
///
/// Ideal functionals contribute `∞` exactly when `x ∉ Idl(y)`; otherwise
/// the value is the largest ray ratio. `ρ(0, 0) = 0` with a vacuous witness.
pub fn rho<M: CuModel + Sync>(model: &M, x: &M::Elem, y: &M::Elem) -> RhoResult<M::Elem>
where
    M::Elem: Sync,
{
    let exact = |value, witness| RhoResult {
        value,
        witness,
        method: RhoMethod::ExactRays,
    };
    if !ideal_membership(model, y, x) {
        return exact(ExtScalar::INFINITY, RhoWitness::Ideal(y.clone()));
    }
    let rays = model.rays_for(&[x, y]);
    match best_ray(model, &rays, x, y) {
        Some((i, v)) => exact(v, RhoWitness::Ray(rays[i].clone())),
        None => exact(ExtScalar::zero(), RhoWitness::Vacuous),
    }
}

/// `ρ_z(x, y)`, the same infimum over functionals with `λ(z) = 1`.
///
/// The feasible set is a simplex whose vertices are the rays normalized at
/// `z`, and a ratio of linear functions attains its supremum at a vertex.
pub fn rho_normalized<M: CuModel + Sync>(
    model: &M,
    z: &M::Elem,
    x: &M::Elem,
    y: &M::Elem,
) -> Result<RhoResult<M::Elem>>
where
    M::Elem: Sync,
{
    if !is_full(model, z) {
        return Err(Error::NotFull(model.render(z)));
    }
    if !has_normalizing_ray(model, z) {
        return Err(Error::EmptyNormalizedFamily);
    }
    let big = model.infinity_times(z);
    for e in [x, y] {
        if !model.compactly_contained(e, &big) {
            return Err(Error::NotCompactlyDominated(model.render(e)));
        }
    }
    let rays: Vec<Ray> = model
        .rays_for(&[z, x, y])
        .into_iter()
        .filter(|r| model.eval_ray(r, z).is_positive_finite())
        .collect();
    let result = match best_ray(model, &rays, x, y) {
        Some((i, v)) => {
            let r = rays[i].clone();
            let c = model.eval_ray(&r, z).recip();
            RhoResult {
                value: v,
                witness: RhoWitness::Functional(Functional::Combination(vec![(r, c)])),
                method: RhoMethod::ExactRays,
            }
        }
        None => RhoResult {
            value: ExtScalar::zero(),
            witness: RhoWitness::Vacuous,
            method: RhoMethod::ExactRays,
        },
    };
    Ok(result)
}

/// Limits of `ρ(x_n, x)` and `ρ(x, x_n)` along an increasing chain below `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainLimits {
    pub forward: ExtScalar,
    pub backward: ExtScalar,
}

/// Evaluates both limits from the chain law.
///
/// Listed chains are constant in every rank ratio from their last term on.
/// For `x_n = n·b`, homogeneity gives `ρ(n·b, x) = n·ρ(b, x)` and
/// `ρ(x, n·b) = ρ(x, b)/n`, so the limits are `0` or `∞`.
pub fn rho_chain_limits<M: CuModel + Sync>(
    model: &M,
    chain: &ChainLaw<M::Elem>,
    x: &M::Elem,
) -> Result<ChainLimits>
where
    M::Elem: Sync,
{
    check_increasing(model, chain, x).map_err(Error::ChainNotIncreasing)?;
    Ok(match chain {
        ChainLaw::Eventually(terms) => {
            let last = terms.last().expect("checked nonempty");
            ChainLimits {
                forward: rho(model, last, x).value,
                backward: rho(model, x, last).value,
            }
        }
        ChainLaw::Multiples(b) => {
            let zero_or_inf = |zero: bool| {
                if zero {
                    ExtScalar::zero()
                } else {
                    ExtScalar::INFINITY
                }
            };
            ChainLimits {
                forward: zero_or_inf(rho(model, b, x).value.is_zero()),
                backward: zero_or_inf(rho(model, x, b).value.is_finite()),
            }
        }
    })
}

/// Lower bound for `ρ(x, y)` from random functionals.
///
/// The first samples are the single rays (coefficient `1`), the rest are
/// random nonnegative combinations with occasional `0` and `∞`
/// coefficients. The running maximum is nondecreasing in `samples` and
/// never exceeds [`rho`].
pub fn rho_sampled<M: CuModel>(
    model: &M,
    x: &M::Elem,
    y: &M::Elem,
    samples: usize,
    seed: u64,
) -> RhoResult<M::Elem> {
    let rays = model.rays_for(&[x, y]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = ExtScalar::zero();
    let mut witness = RhoWitness::Vacuous;
    for s in 0..samples {
        let lam = if s < rays.len() {
            Functional::ray(rays[s].clone())
        } else if rays.is_empty() {
            break;
        } else {
            Functional::Combination(
                rays.iter()
                    .map(|r| (r.clone(), random_coefficient(&mut rng)))
                    .collect(),
            )
        };
        let v = lam.eval(model, x).ratio(&lam.eval(model, y));
        if v > best {
            best = v;
            witness = RhoWitness::Functional(lam);
        }
    }
    RhoResult {
        value: best,
        witness,
        method: RhoMethod::SampledLowerBound,
    }
}

fn random_coefficient(rng: &mut ChaCha8Rng) -> ExtScalar {
    match rng.gen_range(0..12) {
        0..=3 => ExtScalar::zero(),
        4 => ExtScalar::INFINITY,
        _ => ExtScalar::frac(rng.gen_range(1..=96), rng.gen_range(1..=12)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{Idem, IdempotentModel, PerforatedModel, PointFnModel};
    use crate::scalar::ExtNat;
    use crate::spectral::{SpectralModel, SpectralProfile};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn fin(v: &[u64]) -> Vec<ExtNat> {
        v.iter().map(|&a| ExtNat::Fin(a)).collect()
    }

    /// `inf{r : x ≤ r·y pointwise}` by scanning `r` on a `1/12` grid up to 24.
    fn grid_oracle(x: &[ExtNat], y: &[ExtNat]) -> Option<ExtScalar> {
        let ok = |r: &ExtScalar| {
            x.iter()
                .zip(y)
                .all(|(a, b)| ExtScalar::from(*a) <= r.mul(&ExtScalar::from(*b)))
        };
        (1..=288)
            .map(|j| ExtScalar::frac(j, 12))
            .find(ok)
    }

    #[test]
    fn reciprocal_value_example() {
        let m = PointFnModel::new(["p", "q"]);
        let a = fin(&[1, 2]);
        let b = fin(&[2, 2]);
        assert_eq!(rho(&m, &a, &b).value, ExtScalar::one());
        assert_eq!(rho(&m, &b, &a).value, ExtScalar::from_int(2));
        let z = fin(&[1, 1]);
        assert_eq!(rho_normalized(&m, &z, &a, &b).unwrap().value, ExtScalar::one());
    }

    #[test]
    fn zero_and_infinite_examples() {
        let m = PointFnModel::new(["p"]);
        assert_eq!(rho(&m, &fin(&[0]), &fin(&[3])).value, ExtScalar::zero());
        let r = rho(&m, &fin(&[3]), &fin(&[0]));
        assert_eq!(r.value, ExtScalar::INFINITY);
        assert!(matches!(r.witness, RhoWitness::Ideal(_)));
        let zz = rho(&m, &fin(&[0]), &fin(&[0]));
        assert_eq!(zz.value, ExtScalar::zero());
        assert_eq!(zz.witness, RhoWitness::Vacuous);
        let p = PerforatedModel::new(3);
        for x in 1..10 {
            let x = ExtNat::Fin(x);
            assert_eq!(rho(&p, &x, &p.infinity_times(&x)).value, ExtScalar::zero());
        }
    }

    #[test]
    fn agrees_with_grid_oracle_on_point_functions() {
        let m = PointFnModel::new(["p", "q"]);
        for x in m.enumerate(3) {
            for y in m.enumerate(3) {
                let v = rho(&m, &x, &y).value;
                match grid_oracle(&x, &y) {
                    Some(r) if x.iter().all(|a| a.is_zero()) => assert!(v.is_zero(), "{r}"),
                    Some(r) => {
                        assert!(v <= r);
                        assert!(r <= v.add(&ExtScalar::frac(1, 12)));
                    }
                    None => assert_eq!(v, ExtScalar::INFINITY),
                }
            }
        }
    }

    #[test]
    fn normalized_errors() {
        assert!(matches!(
            rho_normalized(&IdempotentModel, &Idem::U, &Idem::U, &Idem::U),
            Err(Error::EmptyNormalizedFamily)
        ));
        let m = PointFnModel::new(["p", "q"]);
        assert!(matches!(
            rho_normalized(&m, &fin(&[1, 0]), &fin(&[1, 0]), &fin(&[1, 0])),
            Err(Error::NotFull(_))
        ));
        let inf = vec![ExtNat::Inf, ExtNat::Fin(1)];
        assert!(matches!(
            rho_normalized(&m, &fin(&[1, 1]), &inf, &fin(&[1, 0])),
            Err(Error::NotCompactlyDominated(_))
        ));
    }

    #[test]
    fn spectral_cutdown_ratio() {
        for n in 2..=4u32 {
            let m = SpectralModel::new(n);
            let a = SpectralProfile::identity_with_units(n as usize);
            let am = a
                .cutdown(&BigRational::new(BigInt::from(1), BigInt::from(7)))
                .rank();
            let r = rho_normalized(&m, &m.unit(), &a.rank(), &am).unwrap();
            assert_eq!(r.value, ExtScalar::frac(n as i64, n as i64 - 1));
            assert_eq!(rho(&m, &am, &a.rank()).value, ExtScalar::one());
        }
    }

    #[test]
    fn chain_limits_capped() {
        let p = PerforatedModel::new(3);
        let x = ExtNat::Fin(31);
        let terms: Vec<ExtNat> = (0..=10).map(|n| ExtNat::Fin(1 + 3 * n)).collect();
        let lim = rho_chain_limits(&p, &ChainLaw::Eventually(terms), &x).unwrap();
        assert_eq!(lim.forward, ExtScalar::one());
        assert_eq!(lim.backward, ExtScalar::one());
    }

    #[test]
    fn chain_limits_multiples() {
        let p = PerforatedModel::new(3);
        let lim = rho_chain_limits(&p, &ChainLaw::Multiples(ExtNat::Fin(3)), &ExtNat::Inf).unwrap();
        assert_eq!(lim.forward, ExtScalar::zero());
        // n·1 is not increasing under the gap-3 order.
        assert!(matches!(
            rho_chain_limits(&p, &ChainLaw::Multiples(ExtNat::Fin(1)), &ExtNat::Inf),
            Err(Error::ChainNotIncreasing(1))
        ));
    }

    #[test]
    fn sampled_is_a_lower_bound() {
        let m = PointFnModel::new(["p", "q"]);
        let x = fin(&[1, 2]);
        let y = fin(&[2, 2]);
        let s = rho_sampled(&m, &x, &y, 1000, 5);
        assert!(s.value >= ExtScalar::frac(1, 2) && s.value <= ExtScalar::one());
        assert_eq!(rho_sampled(&m, &y, &y, 1, 0).value, ExtScalar::one());
        assert_eq!(rho_sampled(&m, &x, &m.largest(), 50, 0).value, ExtScalar::zero());
        let mut prev = ExtScalar::zero();
        for n in [1, 2, 5, 20, 100] {
            let v = rho_sampled(&m, &fin(&[3, 1]), &fin(&[2, 5]), n, 9).value;
            assert!(v >= prev);
            prev = v;
        }
    }
}
