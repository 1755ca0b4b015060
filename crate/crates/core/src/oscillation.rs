//! Oscillation of spectral profiles and the four equivalent continuity
//! conditions for the rank of a full, norm-one profile:
//!
//! 1. `lim_m ρ_1(a, (a − 1/m)_+) = 1`,
//! 2. `sup_t [d_t(a) − d_t((a − 1/m)_+)] → 0`,
//! 3. `ω(a) = 0`,
//! 4. the rank `t ↦ d_t(a)` is continuous.
//!
//! Suprema over normalized functionals are taken over Dirac evaluations,
//! which are the extreme points of the normalized family of this model.
//! Limits in `m` are read off at the stable index of the profile, past
//! which every quantity here is constant.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cucore::Ray;
use crate::error::{Error, Result};
use crate::rankratio::{rho_normalized, RhoWitness};
use crate::scalar::{ExtNat, ExtScalar};
use crate::spectral::{Location, RankFn, SpectralModel, SpectralProfile};

fn recip_int(m: u64) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(m))
}

fn scalar(q: BigRational) -> ExtScalar {
    ExtScalar::from_rational(q).expect("nonnegative")
}

/// `sup_t (1/n)·Σ_i [1{f_i(t) > 0} − f_{1/m}(f_i(t))]`, the largest gap
/// between the Dirac dimension and the Dirac trace of the smoothing
/// `f_{1/m}(a)`, with the leftmost location approaching it.
///
/// Between consecutive breakpoints of the smoothed profile the defect is
/// linear, so its supremum on an open piece is the larger one-sided limit.
pub fn smoothed_defect_sup(a: &SpectralProfile, m: u64) -> (ExtScalar, Location) {
    let eps = recip_int(m);
    let smooth = a.smooth(&eps);
    let n = BigRational::from_integer(BigInt::from(a.fiber()));
    let mut ts = a.breakpoints();
    ts.extend(smooth.breakpoints());
    ts.sort();
    ts.dedup();
    let support = |t: &BigRational| {
        a.eigenvalues()
            .iter()
            .filter(|f| f.eval(t).is_positive())
            .count()
    };
    let trace = |t: &BigRational| -> BigRational {
        smooth.eigenvalues().iter().map(|f| f.eval(t)).sum()
    };
    let mut best = (BigRational::zero(), Location::Point(ts[0].clone()));
    let mut consider = |v: BigRational, loc: Location| {
        if v > best.0 {
            best = (v, loc);
        }
    };
    for (j, t) in ts.iter().enumerate() {
        if j > 0 {
            let s = &ts[j - 1];
            let inside = BigRational::from_integer(BigInt::from(support(&((s + t) / BigRational::from_integer(2.into())))));
            let edge = trace(s).min(trace(t));
            consider(inside - edge, Location::Piece(s.clone(), t.clone()));
        }
        let at = BigRational::from_integer(BigInt::from(support(t))) - trace(t);
        consider(at, Location::Point(t.clone()));
    }
    (scalar(best.0 / n), best.1)
}

/// `sup_t [d_t(a) − d_t((a − 1/m)_+)]` with the leftmost attaining location.
pub fn cutdown_defect_sup(a: &SpectralProfile, m: u64) -> (ExtScalar, Location) {
    let d = a.rank();
    let dm = a.cutdown(&recip_int(m)).rank();
    let gap = d.zip_with(&dm, |x, y| match (x, y) {
        (ExtNat::Fin(x), ExtNat::Fin(y)) => ExtNat::Fin(x.saturating_sub(y)),
        _ => unreachable!("ranks of profiles are finite"),
    });
    let v = ExtScalar::from(gap.max_value()).ratio(&ExtScalar::from_int(a.fiber() as u64));
    (v, gap.argmax())
}

/// `ω(a) = lim_m sup_t [d_t(a) − τ_t(f_{1/m}(a))]`, evaluated at the stable
/// index.
pub fn omega(a: &SpectralProfile) -> ExtScalar {
    smoothed_defect_sup(a, a.stable_index(&[])).0
}

/// `lim_m ρ_1(a, (a − 1/m)_+)` with the normalizing element the unit.
pub fn limit_rho_cutdown(a: &SpectralProfile) -> ExtScalar {
    limit_rho_cutdown_with_witness(a).0
}

fn limit_rho_cutdown_with_witness(a: &SpectralProfile) -> (ExtScalar, Option<Location>) {
    let model = SpectralModel::new(a.fiber() as u32);
    let (_, terms) = a.cutdown_chain(&[]);
    let last = terms.last().expect("chain has a stable term");
    let r = rho_normalized(&model, &model.unit(), &a.rank(), last)
        .expect("the unit is full and ranks of profiles are finite");
    let loc = match r.witness {
        RhoWitness::Functional(crate::functionals::Functional::Combination(terms)) => {
            match terms.first().map(|(ray, _)| ray) {
                Some(Ray::Dirac(t)) => Some(Location::Point(t.clone())),
                _ => None,
            }
        }
        _ => None,
    };
    (r.value, loc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition {
    LimitRhoIsOne,
    UniformConvergence,
    OmegaIsZero,
    RankContinuous,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::LimitRhoIsOne => "limit_rho_is_one",
            Condition::UniformConvergence => "uniform_convergence",
            Condition::OmegaIsZero => "omega_is_zero",
            Condition::RankContinuous => "rank_continuous",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OscillationReport {
    pub omega: ExtScalar,
    pub limit_rho_cutdown: ExtScalar,
    /// `lim_m sup_t [d_t(a) − d_t((a − 1/m)_+)]`.
    pub uniform_defect: ExtScalar,
    pub uniform_convergence: bool,
    pub rank_continuous: bool,
    /// The index past which cutdown quantities no longer change.
    pub stable_index: u64,
    /// Where each failing condition fails.
    pub witnesses: Vec<(Condition, Location)>,
}

impl OscillationReport {
    pub fn conditions(&self) -> [(Condition, bool); 4] {
        [
            (Condition::LimitRhoIsOne, self.limit_rho_cutdown == ExtScalar::one()),
            (Condition::UniformConvergence, self.uniform_convergence),
            (Condition::OmegaIsZero, self.omega.is_zero()),
            (Condition::RankContinuous, self.rank_continuous),
        ]
    }

    pub fn all_agree(&self) -> bool {
        let c = self.conditions();
        c.iter().all(|(_, b)| *b == c[0].1)
    }
}

/// Evaluates the four conditions independently of one another.
pub fn contrank_check(a: &SpectralProfile) -> Result<OscillationReport> {
    let rank = a.rank();
    if !a.is_full() {
        return Err(Error::NotFull(a.to_string()));
    }
    if !a.norm().is_one() {
        return Err(Error::NormalizationRequired(a.norm().to_string()));
    }
    let m = a.stable_index(&[]);
    let (lim, rho_loc) = limit_rho_cutdown_with_witness(a);
    let (defect, defect_loc) = cutdown_defect_sup(a, m);
    let (om, om_loc) = smoothed_defect_sup(a, m);
    let mut witnesses = Vec::new();
    if lim != ExtScalar::one() {
        if let Some(loc) = rho_loc {
            witnesses.push((Condition::LimitRhoIsOne, loc));
        }
    }
    if !defect.is_zero() {
        witnesses.push((Condition::UniformConvergence, defect_loc));
    }
    if !om.is_zero() {
        witnesses.push((Condition::OmegaIsZero, om_loc));
    }
    let continuous = rank.is_constant();
    if let Some(t) = rank.first_jump() {
        witnesses.push((Condition::RankContinuous, Location::Point(t)));
    }
    Ok(OscillationReport {
        omega: om,
        limit_rho_cutdown: lim,
        uniform_convergence: defect.is_zero(),
        uniform_defect: defect,
        rank_continuous: continuous,
        stable_index: m,
        witnesses,
    })
}

/// Ranks `rank_0(a)` and `rank_0((a − 1/m)_+)` at the stable index, for
/// callers that want to inspect the stabilized structure directly.
pub fn stabilized_ranks(a: &SpectralProfile) -> (RankFn, RankFn) {
    let m = a.stable_index(&[]);
    (a.rank(), a.cutdown(&recip_int(m)).rank())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(src: &str) -> SpectralProfile {
        SpectralProfile::parse(src).unwrap()
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega(&p("[0:0, 1:1]")), ExtScalar::one());
        assert_eq!(omega(&SpectralProfile::identity_with_units(2)), ExtScalar::frac(1, 2));
        assert_eq!(omega(&p("[0:1/4, 1/2:1, 1:1/3]")), ExtScalar::zero());
        for m in [8, 16, 32] {
            assert_eq!(smoothed_defect_sup(&p("[0:0, 1:1]"), m).0, ExtScalar::one());
        }
    }

    #[test]
    fn limit_rho_examples() {
        assert_eq!(
            limit_rho_cutdown(&SpectralProfile::identity_with_units(2)),
            ExtScalar::from_int(2)
        );
        assert_eq!(limit_rho_cutdown(&p("[0:1/3, 1:1]")), ExtScalar::one());
        assert_eq!(limit_rho_cutdown(&p("[0:0, 1:1]")), ExtScalar::INFINITY);
    }

    #[test]
    fn contrank_negative_instance() {
        let r = contrank_check(&SpectralProfile::identity_with_units(2)).unwrap();
        assert_eq!(r.omega, ExtScalar::frac(1, 2));
        assert_eq!(r.limit_rho_cutdown, ExtScalar::from_int(2));
        assert!(r.conditions().iter().all(|(_, b)| !b));
        assert!(r.all_agree());
        assert_eq!(r.witnesses.len(), 4);
    }

    #[test]
    fn contrank_positive_instances() {
        let one = contrank_check(&p("[0:1, 1:1]")).unwrap();
        assert!(one.conditions().iter().all(|(_, b)| *b));
        let b = contrank_check(&p("[0:1/4, 1/2:1, 1:1/2] [0:1/2, 1:1/4]")).unwrap();
        assert!(b.conditions().iter().all(|(_, b)| *b));
        assert_eq!(b.stable_index, 5);
        // Direct stabilization check: cutdowns past 1/4 keep the full rank.
        let a = p("[0:1/4, 1/2:1, 1:1/2] [0:1/2, 1:1/4]");
        for m in 5..12 {
            assert_eq!(a.cutdown(&recip_int(m)).rank(), a.rank());
        }
    }

    #[test]
    fn contrank_errors() {
        assert!(matches!(contrank_check(&p("[0:0, 1:1]")), Err(Error::NotFull(_))));
        assert!(matches!(
            contrank_check(&p("[0:1/2, 1:1/2]")),
            Err(Error::NormalizationRequired(_))
        ));
    }
}
