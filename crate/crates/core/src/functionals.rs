//! Functionals `S → [0, ∞]` in ray coordinates.
//!
//! Ray-complete models promise that an inequality `λ(x) ≤ r·λ(y)` holds for
//! every functional as soon as it holds for each listed ray, for the
//! trivial functional `λ_∞` and for every ideal functional `λ_I`. All
//! computations in this crate therefore work with three shapes of
//! functional: nonnegative combinations of rays, `λ_∞`, and `λ_I`.

use std::fmt;

use crate::cucore::{ideal_membership, CuModel, Ray};
use crate::error::{Error, Result};
use crate::scalar::ExtScalar;

#[derive(Clone, Debug, PartialEq)]
pub enum Functional<E> {
    /// `Σ c·ray`.
    Combination(Vec<(Ray, ExtScalar)>),
    /// `0` at `0`, `∞` elsewhere.
    Infinity,
    /// `0` on `Idl(generator)`, `∞` elsewhere.
    Ideal(E),
}

impl<E: Clone + fmt::Debug + PartialEq> Functional<E> {
    pub fn ray(ray: Ray) -> Self {
        Functional::Combination(vec![(ray, ExtScalar::one())])
    }

    pub fn eval<M: CuModel<Elem = E>>(&self, model: &M, x: &E) -> ExtScalar {
        match self {
            Functional::Combination(terms) => terms
                .iter()
                .map(|(r, c)| c.mul(&model.eval_ray(r, x)))
                .sum(),
            Functional::Infinity => lambda_ideal_value(model, &model.zero(), x),
            Functional::Ideal(g) => lambda_ideal_value(model, g, x),
        }
    }

    pub fn scaled(&self, c: &ExtScalar) -> Self {
        match self {
            Functional::Combination(terms) => Functional::Combination(
                terms.iter().map(|(r, k)| (r.clone(), k.mul(c))).collect(),
            ),
            other => other.clone(),
        }
    }

    pub fn describe<M: CuModel<Elem = E>>(&self, model: &M) -> String {
        match self {
            Functional::Combination(terms) if terms.is_empty() => "0".into(),
            Functional::Combination(terms) => terms
                .iter()
                .map(|(r, c)| {
                    if c == &ExtScalar::one() {
                        model.describe_ray(r)
                    } else {
                        format!("{c}*{}", model.describe_ray(r))
                    }
                })
                .collect::<Vec<_>>()
                .join(" + "),
            Functional::Infinity => "lambda_inf".into(),
            Functional::Ideal(g) => format!("lambda_Idl({})", model.render(g)),
        }
    }
}

fn lambda_ideal_value<M: CuModel>(model: &M, generator: &M::Elem, x: &M::Elem) -> ExtScalar {
    if ideal_membership(model, generator, x) {
        ExtScalar::zero()
    } else {
        ExtScalar::INFINITY
    }
}

/// The trivial functional `λ_∞`.
pub fn lambda_infinity<M: CuModel>(_model: &M) -> Functional<M::Elem> {
    Functional::Infinity
}

/// The ideal functional of `Idl(generator)`.
pub fn lambda_ideal<M: CuModel>(_model: &M, generator: &M::Elem) -> Functional<M::Elem> {
    Functional::Ideal(generator.clone())
}

/// `λ / λ(x)`, defined when `0 < λ(x) < ∞`.
pub fn normalize_at<M: CuModel>(
    model: &M,
    lam: &Functional<M::Elem>,
    x: &M::Elem,
) -> Result<Functional<M::Elem>> {
    let v = lam.eval(model, x);
    if !v.is_positive_finite() {
        return Err(Error::NotNormalizable(v.to_string()));
    }
    Ok(lam.scaled(&v.recip()))
}

/// Whether some ray takes a finite nonzero value at `z`.
///
/// `λ_∞` and ideal functionals only take the values `0` and `∞`, and a
/// combination of rays is finite and nonzero at `z` only if one of its rays
/// is. So this decides `F_z ≠ ∅` exactly.
pub fn has_normalizing_ray<M: CuModel>(model: &M, z: &M::Elem) -> bool {
    model
        .rays_for(&[z])
        .iter()
        .any(|r| model.eval_ray(r, z).is_positive_finite())
}

/// The normalized family `F_z = {λ : λ(z) = 1}`, described by its vertices:
/// the rays finite and nonzero at `z`, each scaled to value `1` there.
/// Every member of `F_z` restricted to ray combinations is a convex
/// combination of these vertices plus `{0, ∞}`-valued parts.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedFamily<E> {
    pub z: E,
    pub vertices: Vec<(Ray, ExtScalar)>,
}

impl<E: Clone + fmt::Debug + PartialEq> NormalizedFamily<E> {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn functionals(&self) -> impl Iterator<Item = Functional<E>> + '_ {
        self.vertices
            .iter()
            .map(|(r, c)| Functional::Combination(vec![(r.clone(), c.clone())]))
    }
}

pub fn normalized_family<M: CuModel>(model: &M, z: &M::Elem) -> NormalizedFamily<M::Elem> {
    normalized_family_for(model, z, &[])
}

/// Like [`normalized_family`] but with rays that also resolve `others`.
pub fn normalized_family_for<M: CuModel>(
    model: &M,
    z: &M::Elem,
    others: &[&M::Elem],
) -> NormalizedFamily<M::Elem> {
    let mut elems = vec![z];
    elems.extend_from_slice(others);
    let vertices = model
        .rays_for(&elems)
        .into_iter()
        .filter_map(|r| {
            let v = model.eval_ray(&r, z);
            v.is_positive_finite().then(|| (r, v.recip()))
        })
        .collect();
    NormalizedFamily {
        z: z.clone(),
        vertices,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{Idem, IdempotentModel, PerforatedModel, PointFnModel};
    use crate::scalar::ExtNat;

    fn fin(v: &[u64]) -> Vec<ExtNat> {
        v.iter().map(|&a| ExtNat::Fin(a)).collect()
    }

    #[test]
    fn trivial_functional() {
        let m = PointFnModel::new(["p", "q"]);
        let l = lambda_infinity(&m);
        assert_eq!(l.eval(&m, &fin(&[0, 0])), ExtScalar::zero());
        assert_eq!(l.eval(&m, &fin(&[1, 0])), ExtScalar::INFINITY);
        let p = PerforatedModel::new(3);
        assert_eq!(lambda_infinity(&p).eval(&p, &ExtNat::Fin(5)), ExtScalar::INFINITY);
    }

    #[test]
    fn ideal_functional() {
        let m = PointFnModel::new(["p", "q"]);
        let l = lambda_ideal(&m, &fin(&[1, 0]));
        assert_eq!(l.eval(&m, &fin(&[7, 0])), ExtScalar::zero());
        assert_eq!(l.eval(&m, &fin(&[0, 1])), ExtScalar::INFINITY);
        let whole = lambda_ideal(&m, &m.largest());
        assert_eq!(whole.eval(&m, &vec![ExtNat::Inf, ExtNat::Fin(3)]), ExtScalar::zero());
    }

    #[test]
    fn normalized_family_emptiness() {
        let p = PerforatedModel::new(3);
        let f = normalized_family(&p, &ExtNat::Fin(2));
        assert_eq!(f.vertices, vec![(Ray::Scale, ExtScalar::frac(1, 2))]);
        assert!(normalized_family(&IdempotentModel, &Idem::U).is_empty());
        let m = PointFnModel::new(["p", "q"]);
        assert!(normalized_family(&m, &m.largest()).is_empty());
        // Coefficient grid: no c in a grid of [0, 10] gives c·∞ = 1.
        for j in 0..=120 {
            let c = ExtScalar::frac(j, 12);
            assert_ne!(c.mul(&ExtScalar::INFINITY), ExtScalar::one());
        }
    }

    #[test]
    fn normalization() {
        let m = PointFnModel::new(["p", "q"]);
        let lam = Functional::Combination(vec![
            (Ray::Point(0), ExtScalar::one()),
            (Ray::Point(1), ExtScalar::one()),
        ]);
        let n = normalize_at(&m, &lam, &fin(&[1, 1])).unwrap();
        assert_eq!(
            n,
            Functional::Combination(vec![
                (Ray::Point(0), ExtScalar::frac(1, 2)),
                (Ray::Point(1), ExtScalar::frac(1, 2)),
            ])
        );
        assert!(matches!(
            normalize_at(&m, &lambda_infinity(&m), &fin(&[1, 1])),
            Err(Error::NotNormalizable(_))
        ));
        let p = PerforatedModel::new(2);
        let n = normalize_at(&p, &Functional::ray(Ray::Scale), &ExtNat::Fin(4)).unwrap();
        assert_eq!(n, Functional::Combination(vec![(Ray::Scale, ExtScalar::frac(1, 4))]));
    }
}
