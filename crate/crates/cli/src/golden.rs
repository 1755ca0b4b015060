//! The example table: every in-scope worked example, recomputed and
//! compared with a checked-in expectation file.

use std::collections::BTreeMap;

use cuntz_core::oscillation::limit_rho_cutdown;
use cuntz_core::radius::{rc_exact, rc_strict};
use cuntz_core::rankratio::{rho, rho_normalized};
use cuntz_core::{AnyElement, AnyModel, CuModel, ExtScalar, SpectralModel, SpectralProfile};

/// The checked-in expectations.
pub const EXPECTED: &str = include_str!("../golden/examples.expected");

/// Parses `name = value` lines, ignoring blanks and `#` comments.
pub fn parse_expected(src: &str) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    for (i, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected `name = value`", i + 1))?;
        if out.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
            return Err(format!("line {}: `{}` listed twice", i + 1, k.trim()));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Match,
    Mismatch { expected: String },
    /// Computed but absent from the expectation file.
    Unexpected,
    /// Expected but not computed.
    Missing { expected: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub name: String,
    pub value: Option<String>,
    pub status: Status,
}

impl Row {
    pub fn ok(&self) -> bool {
        self.status == Status::Match
    }
}

fn el(m: &AnyModel, payload: &str) -> AnyElement {
    m.make_element(payload).expect("example payloads are valid")
}

fn r(m: &AnyModel, x: &AnyElement, y: &AnyElement) -> ExtScalar {
    rho(m, x, y).value
}

fn rc(m: &AnyModel, w: &AnyElement) -> ExtScalar {
    rc_exact(m, w).expect("example weights are full").value
}

/// `diag(t, 1, …, 1)` in `M_n`.
fn ramp_profile(n: usize) -> SpectralProfile {
    let mut src = String::from("[0:0, 1:1]");
    for _ in 1..n {
        src.push_str(" [0:1, 1:1]");
    }
    SpectralProfile::parse(&src).expect("valid profile")
}

/// Every entry as `(name, exact value)`.
pub fn compute() -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = Vec::new();
    let mut put = |name: String, v: &dyn ToString| out.push((name, v.to_string()));

    let m = AnyModel::parse("pointfn(p, q)").expect("model");
    let (a, b) = (el(&m, "1, 2"), el(&m, "2, 2"));
    put("Exa.RecipricalValue.rho_a_b".into(), &r(&m, &a, &b));
    put("Exa.RecipricalValue.rho_b_a".into(), &r(&m, &b, &a));

    let perforated = AnyModel::perforated(3);
    let x = el(&perforated, "4");
    let ix = perforated.infinity_times(&x);
    put("rankration0Infty.perforated.rho_x_infx".into(), &r(&perforated, &x, &ix));
    put("rankration0Infty.perforated.rho_infx_x".into(), &r(&perforated, &ix, &x));
    let idem = AnyModel::parse("idempotent").expect("model");
    let u = el(&idem, "u");
    let iu = idem.infinity_times(&u);
    put("rankration0Infty.idempotent.rho_x_infx".into(), &r(&idem, &u, &iu));
    put("rankration0Infty.idempotent.rho_infx_x".into(), &r(&idem, &iu, &u));
    let partial = el(&m, "1, 0");
    let ipartial = m.infinity_times(&partial);
    put("rankration0Infty.pointfn.rho_x_infx".into(), &r(&m, &partial, &ipartial));
    put("rankration0Infty.pointfn.rho_infx_x".into(), &r(&m, &ipartial, &partial));

    for (tag, model, payload) in [("a", &perforated, "1"), ("b", &idem, "u")] {
        let a = el(model, payload);
        let ia = model.infinity_times(&a);
        for n in 1..=4 {
            let v = r(model, &ia, &model.scale(&a, n));
            put(format!("ExprhoofNA.{tag}.rho_infa_na.n{n}"), &v);
        }
        put(format!("ExprhoofNA.{tag}.rho_infa_infa"), &r(model, &ia, &ia));
    }

    let sum = AnyModel::parse("sum(perforated(3), perforated(5))").expect("model");
    let (one, p) = (el(&sum, "<1> <1>"), el(&sum, "<4> <6>"));
    let xi = r(&sum, &one, &p);
    let kappa = r(&sum, &p, &one).recip();
    let (rc1, rcp) = (rc(&sum, &one), rc(&sum, &p));
    let (lower, upper) = (kappa.mul(&rc1), xi.mul(&rc1));
    put("RCPand1.rho_1_p".into(), &xi);
    put("RCPand1.rho_p_1".into(), &r(&sum, &p, &one));
    put("RCPand1.kappa".into(), &kappa);
    put("RCPand1.xi".into(), &xi);
    put("RCPand1.rc_1".into(), &rc1);
    put("RCPand1.rc_p".into(), &rcp);
    put("RCPand1.rrc_p".into(), &rc_strict(&sum, &p).expect("residually finite").value);
    put("RCPand1.lower".into(), &lower);
    put("RCPand1.upper".into(), &upper);
    put("RCPand1.holds".into(), &(lower <= rcp && rcp <= upper));

    for n in 2..=4usize {
        let a = ramp_profile(n);
        let model = SpectralModel::new(n as u32);
        let unit = model.unit();
        let m_star = a.stable_index(&[]);
        let am = a.cutdown_recip(m_star).rank();
        let back = rho_normalized(&model, &unit, &am, &a.rank()).expect("full").value;
        put(format!("RankratioMeasureTheo.n{n}.lim_rho_a_am"), &limit_rho_cutdown(&a));
        put(format!("RankratioMeasureTheo.n{n}.lim_rho_am_a"), &back);
    }

    let a = SpectralProfile::parse("[0:1/2, 1:1]").expect("profile");
    let rank = a.rank();
    let from = (1..)
        .find(|&m| a.cutdown_recip(m).rank() == rank)
        .expect("a is bounded below");
    put("rc.ofCX.delta".into(), &a.eigenvalues()[0].min_value());
    put("rc.ofCX.equivalent_from_m".into(), &from);
    put("rc.ofCX.lim_rho_a_am".into(), &limit_rho_cutdown(&a));

    let x = el(&perforated, "1");
    let ix = perforated.infinity_times(&x);
    for n in 1..=4 {
        let nx = perforated.scale(&x, n);
        put(format!("AlgebraciExample.rho_infx_nx.n{n}"), &r(&perforated, &ix, &nx));
        put(format!("AlgebraciExample.rc_nx.n{n}"), &rc(&perforated, &nx));
    }
    put("AlgebraciExample.rho_infx_infx".into(), &r(&perforated, &ix, &ix));
    put("AlgebraciExample.rc_infx".into(), &rc(&perforated, &ix));
    out
}

/// Compares computed entries with `expected`, keeping entries whose name
/// contains `filter`.
pub fn diff(expected: &BTreeMap<String, String>, filter: Option<&str>) -> Vec<Row> {
    let keep = |name: &str| filter.is_none_or(|f| name.contains(f));
    let computed = compute();
    let mut rows: Vec<Row> = computed
        .iter()
        .filter(|(n, _)| keep(n))
        .map(|(name, value)| Row {
            name: name.clone(),
            value: Some(value.clone()),
            status: match expected.get(name) {
                Some(e) if e == value => Status::Match,
                Some(e) => Status::Mismatch { expected: e.clone() },
                None => Status::Unexpected,
            },
        })
        .collect();
    for (name, e) in expected {
        if keep(name) && !computed.iter().any(|(n, _)| n == name) {
            rows.push(Row {
                name: name.clone(),
                value: None,
                status: Status::Missing { expected: e.clone() },
            });
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checked_in_table_matches() {
        let expected = parse_expected(EXPECTED).unwrap();
        let rows = diff(&expected, None);
        let bad: Vec<&Row> = rows.iter().filter(|r| !r.ok()).collect();
        assert!(bad.is_empty(), "{bad:?}");
        assert_eq!(rows.len(), expected.len());
    }

    #[test]
    fn perturbed_entry_is_named() {
        let mut expected = parse_expected(EXPECTED).unwrap();
        expected.insert("Exa.RecipricalValue.rho_b_a".into(), "3".into());
        let rows = diff(&expected, None);
        let bad: Vec<&Row> = rows.iter().filter(|r| !r.ok()).collect();
        assert_eq!(bad.len(), 1);
        assert_eq!(bad[0].name, "Exa.RecipricalValue.rho_b_a");
    }

    #[test]
    fn filter_selects_one_family() {
        let expected = parse_expected(EXPECTED).unwrap();
        let rows = diff(&expected, Some("RankratioMeasureTheo"));
        assert_eq!(rows.len(), 6);
        assert!(rows.iter().all(|r| r.name.starts_with("RankratioMeasureTheo")));
    }

    #[test]
    fn expectation_syntax_errors() {
        assert!(parse_expected("a = 1\na = 2\n").is_err());
        assert!(parse_expected("no equals sign\n").is_err());
    }
}
