//! Named, generator-driven property checks and the engine that runs them.
//!
//! Every property has hypotheses and a conclusion. A generated case whose
//! hypotheses fail is tallied as *vacuous*, never as a pass, and each
//! property must collect a minimum number of non-vacuous cases. Failures
//! are shrunk by proptest before they are reported.
//!
//! Runs are deterministic: the random stream of a property depends only on
//! the suite seed and the property name.

mod gen;
mod properties;

use std::cell::Cell;
use std::fmt;

use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestError, TestRng, TestRunner};
use rayon::prelude::*;

use crate::cucore::CuModel;
use crate::error::{Error, Result};
use crate::models::{AnyElement, AnyModel};
use crate::spectral::SpectralProfile;

pub use gen::{
    arb_any_full_profile, arb_any_profile, arb_chain, arb_elem, arb_full_profile, arb_increment,
    arb_model, arb_model_of, arb_profile, arb_rank_fn, arb_small_model, default_bound,
    ChainCandidate, ElemSpec, Family,
};

/// The checked-in list of property names the registry must cover.
pub const MANIFEST: &str = include_str!("manifest.txt");

/// Names listed in [`MANIFEST`], in file order.
pub fn manifest_names() -> Vec<&'static str> {
    MANIFEST
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .collect()
}

/// Result of evaluating one generated case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Hypotheses held and the conclusion was verified.
    Pass,
    /// Some hypothesis failed; nothing was asserted.
    Vacuous,
    Fail(String),
}


#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    /// Generated cases per property.
    pub cases: u32,
    pub seed: u64,
    /// Non-vacuous cases each property must reach. Capped at `cases`.
    pub min_non_vacuous: u32,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            cases: 256,
            seed: 0,
            min_non_vacuous: 50,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyReport {
    pub name: String,
    pub cases: u32,
    pub passed: u32,
    pub vacuous: u32,
    /// Required non-vacuous count.
    pub floor: u32,
    /// Minimal failing case after shrinking.
    pub failure: Option<String>,
}

impl PropertyReport {
    pub fn floor_met(&self) -> bool {
        self.passed >= self.floor
    }

    pub fn ok(&self) -> bool {
        self.failure.is_none() && self.floor_met()
    }

    pub fn status(&self) -> &'static str {
        if self.failure.is_some() {
            "fail"
        } else if !self.floor_met() {
            "vacuous"
        } else {
            "pass"
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub seed: u64,
    pub cases: u32,
    pub properties: Vec<PropertyReport>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.properties.iter().all(PropertyReport::ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PropertyReport> {
        self.properties.iter().filter(|p| !p.ok())
    }

    pub fn get(&self, name: &str) -> Option<&PropertyReport> {
        self.properties.iter().find(|p| p.name == name)
    }

    /// One line per property: `name status passed vacuous floor`.
    pub fn table(&self) -> String {
        let width = self.properties.iter().map(|p| p.name.len()).max().unwrap_or(4);
        let mut out = format!(
            "{:<width$}  {:<7}  {:>6}  {:>7}  {:>5}\n",
            "property", "status", "passed", "vacuous", "floor"
        );
        for p in &self.properties {
            out.push_str(&format!(
                "{:<width$}  {:<7}  {:>6}  {:>7}  {:>5}\n",
                p.name,
                p.status(),
                p.passed,
                p.vacuous,
                p.floor
            ));
        }
        out
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.table())?;
        for p in self.failures() {
            match &p.failure {
                Some(msg) => writeln!(f, "FAILED {}: {}", p.name, msg)?,
                None => writeln!(
                    f,
                    "FAILED {}: only {} non-vacuous cases, floor is {}",
                    p.name, p.passed, p.floor
                )?,
            }
        }
        let failed = self.failures().count();
        write!(
            f,
            "{} properties, {} failed (seed {}, {} cases each)",
            self.properties.len(),
            failed,
            self.seed,
            self.cases
        )
    }
}

pub(crate) type PropertyFn = fn(&SuiteConfig, &str) -> PropertyReport;

/// A registered property.
pub struct Property {
    pub name: &'static str,
    pub summary: &'static str,
    pub(crate) run: PropertyFn,
}

/// All registered property names, in registry order.
pub fn property_names() -> Vec<&'static str> {
    properties::REGISTRY.iter().map(|p| p.name).collect()
}

pub fn property(name: &str) -> Option<&'static Property> {
    properties::REGISTRY.iter().find(|p| p.name == name)
}

/// Runs the named properties (all of them when `names` is empty).
pub fn run_suite(names: &[&str], cases: u32, seed: u64) -> Result<SuiteReport> {
    run_suite_with(
        names,
        &SuiteConfig {
            cases,
            seed,
            ..SuiteConfig::default()
        },
    )
}

pub fn run_suite_with(names: &[&str], cfg: &SuiteConfig) -> Result<SuiteReport> {
    let selected: Vec<&Property> = if names.is_empty() {
        properties::REGISTRY.iter().collect()
    } else {
        names
            .iter()
            .map(|n| property(n).ok_or_else(|| Error::UnknownPropertyName(n.to_string())))
            .collect::<Result<_>>()?
    };
    let properties = selected.par_iter().map(|p| (p.run)(cfg, p.name)).collect();
    Ok(SuiteReport {
        seed: cfg.seed,
        cases: cfg.cases,
        properties,
    })
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn runner(label: &str, seed: u64, cases: u32) -> TestRunner {
    let mut state = fnv1a(label) ^ seed.rotate_left(17);
    let mut bytes = [0u8; 32];
    for chunk in bytes.chunks_mut(8) {
        chunk.copy_from_slice(&splitmix(&mut state).to_le_bytes());
    }
    let config = Config {
        cases,
        failure_persistence: None,
        max_shrink_iters: 2048,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &bytes))
}

/// Runs `body` on `cases` values of `strategy`, counting outcomes and
/// shrinking the first failure.
pub(crate) fn check<S>(
    cfg: &SuiteConfig,
    name: &str,
    strategy: S,
    body: impl Fn(S::Value) -> Outcome,
) -> PropertyReport
where
    S: Strategy,
{
    let mut runner = runner(name, cfg.seed, cfg.cases);
    let passed = Cell::new(0u32);
    let vacuous = Cell::new(0u32);
    // Shrinking re-runs the body; only the original cases are counted.
    let counting = Cell::new(true);
    let result = runner.run(&strategy, |value| match body(value) {
        Outcome::Pass => {
            if counting.get() {
                passed.set(passed.get() + 1);
            }
            Ok(())
        }
        Outcome::Vacuous => {
            if counting.get() {
                vacuous.set(vacuous.get() + 1);
            }
            Ok(())
        }
        Outcome::Fail(msg) => {
            counting.set(false);
            Err(TestCaseError::fail(msg))
        }
    });
    let failure = match result {
        Ok(()) => None,
        Err(TestError::Fail(reason, _)) => Some(reason.message().to_string()),
        Err(TestError::Abort(reason)) => Some(format!("aborted: {}", reason.message())),
    };
    PropertyReport {
        name: name.to_string(),
        cases: cfg.cases,
        passed: passed.get(),
        vacuous: vacuous.get(),
        floor: cfg.min_non_vacuous.min(cfg.cases),
        failure,
    }
}

/// What [`generate`] should produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Element,
    FullElement,
    /// An increasing sequence ending below a generated element.
    Chain,
    /// A spectral profile; the bound limits interior breakpoints.
    Profile,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Generated {
    Element(AnyElement),
    Chain(Vec<AnyElement>),
    Profile(SpectralProfile),
}

/// One deterministic sample. Element values are finite and at most
/// `bound`; full elements have every value at least `1`.
pub fn generate(model: &AnyModel, shape: Shape, bound: u64, seed: u64) -> Result<Generated> {
    let mut runner = runner("generate", seed, 1);
    let spec = |full| ElemSpec {
        full,
        infinite: false,
        bound: Some(bound),
    };
    let sample = |s: proptest::strategy::BoxedStrategy<_>, runner: &mut TestRunner| {
        s.new_tree(runner).expect("generators never reject").current()
    };
    Ok(match shape {
        Shape::Element => Generated::Element(sample(arb_elem(model, spec(false)), &mut runner)),
        Shape::FullElement => Generated::Element(sample(arb_elem(model, spec(true)), &mut runner)),
        Shape::Chain => {
            let top = sample(arb_elem(model, spec(false)), &mut runner);
            Generated::Chain(model.canonical_chain(&top, 6))
        }
        Shape::Profile => match model {
            AnyModel::Spectral(s) => {
                let p = arb_profile(s.fiber() as usize, bound as usize);
                Generated::Profile(p.new_tree(&mut runner).expect("generators never reject").current())
            }
            other => {
                return Err(Error::MalformedPayload(format!(
                    "profiles need a spectral model, got {other}"
                )))
            }
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cucore::is_full;
    use crate::scalar::ExtNat;

    #[test]
    fn registry_matches_manifest() {
        let mut registered = property_names();
        let mut listed = manifest_names();
        for name in &listed {
            assert!(property(name).is_some(), "manifest entry {name} is not registered");
        }
        for name in &registered {
            assert!(listed.contains(name), "property {name} is missing from the manifest");
        }
        registered.sort_unstable();
        listed.sort_unstable();
        let before = registered.len();
        registered.dedup();
        assert_eq!(before, registered.len(), "duplicate property names");
        assert_eq!(registered, listed);
    }

    #[test]
    fn unknown_property_is_rejected() {
        assert!(matches!(
            run_suite(&["no-such"], 10, 0),
            Err(Error::UnknownPropertyName(n)) if n == "no-such"
        ));
    }

    #[test]
    fn generate_is_deterministic_and_bounded() {
        let p = AnyModel::perforated(3);
        let a = generate(&p, Shape::Element, 20, 7).unwrap();
        assert_eq!(a, generate(&p, Shape::Element, 20, 7).unwrap());
        match a {
            Generated::Element(AnyElement::Perforated(ExtNat::Fin(n))) => assert!(n <= 20),
            other => panic!("unexpected {other:?}"),
        }
        let m = AnyModel::point_fn(["p", "q"]);
        for seed in 0..20 {
            let Generated::Element(AnyElement::PointFn(v)) =
                generate(&m, Shape::FullElement, 5, seed).unwrap()
            else {
                panic!("expected a point function");
            };
            assert!(v.iter().all(|c| *c >= ExtNat::Fin(1) && *c <= ExtNat::Fin(5)));
            assert!(is_full(&m, &AnyElement::PointFn(v)));
        }
        let s = AnyModel::parse("spectral(2)").unwrap();
        let Generated::Profile(p) = generate(&s, Shape::Profile, 4, 3).unwrap() else {
            panic!("expected a profile");
        };
        assert_eq!(p.fiber(), 2);
        assert!(p.breakpoints().len() <= 2 * 4 + 2);
        assert!(generate(&AnyModel::perforated(2), Shape::Profile, 4, 0).is_err());
    }

    #[test]
    fn chains_are_increasing() {
        let m = AnyModel::parse("sum(pointfn(p), spectral(1))").unwrap();
        let Generated::Chain(c) = generate(&m, Shape::Chain, 3, 11).unwrap() else {
            panic!("expected a chain");
        };
        assert!(c.windows(2).all(|w| m.leq(&w[0], &w[1])));
    }

    #[test]
    fn homogeneity_example_passes() {
        let r = run_suite(&["IncDesrho.homogeneity"], 200, 42).unwrap();
        let p = r.get("IncDesrho.homogeneity").unwrap();
        assert!(p.ok(), "{r}");
        assert_eq!(p.passed, 200);
    }

    #[test]
    fn rkiszero_example_is_non_vacuous() {
        let r = run_suite(&["Rkiszero"], 500, 1).unwrap();
        let p = r.get("Rkiszero").unwrap();
        assert!(p.ok(), "{r}");
        assert!(p.passed >= 100);
    }

    #[test]
    fn floor_failure_is_reported() {
        let cfg = SuiteConfig {
            cases: 20,
            seed: 3,
            min_non_vacuous: 20,
        };
        // Only sandwich-shaped pairs count, so twenty cases cannot all count.
        let r = run_suite_with(&["ExtremeZeroRho"], &cfg).unwrap();
        let p = &r.properties[0];
        assert!(p.failure.is_none());
        assert!(!p.floor_met());
        assert!(!r.ok());
    }

    #[test]
    fn failures_shrink_to_small_cases() {
        let cfg = SuiteConfig::default();
        let strategy = arb_elem(&AnyModel::perforated(4), ElemSpec::ANY);
        let r = check(&cfg, "demo", strategy, |x| match x {
            AnyElement::Perforated(ExtNat::Fin(n)) if n >= 3 => Outcome::Fail(format!("x = {n}")),
            _ => Outcome::Pass,
        });
        assert_eq!(r.failure.as_deref(), Some("x = 3"));
    }

    #[test]
    fn runs_are_reproducible() {
        let a = run_suite(&["Rkrc.sandwich", "ContRank"], 60, 9).unwrap();
        let b = run_suite(&["Rkrc.sandwich", "ContRank"], 60, 9).unwrap();
        assert_eq!(a, b);
    }
}
