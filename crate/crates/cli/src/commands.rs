//! The `rho`, `rc` and `osc` queries.

use cuntz_core::oscillation::{contrank_check, cutdown_defect_sup, smoothed_defect_sup};
use cuntz_core::radius::{default_grid, irc, rc_exact, rc_range_sample, rc_search, rc_strict};
use cuntz_core::rankratio::{rho, rho_normalized, rho_sampled};
use cuntz_core::{AnyModel, CuModel, Error, ExtScalar, RcResult};

use crate::document::QueryDocument;
use crate::{CliError, Report};

/// Command-line values that take precedence over the document's query
/// section.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub bound: Option<u64>,
    pub grid: Option<String>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}

/// Grid `STEP` or `STEP:MAX`, listing `j·STEP ≤ MAX` for `j ≥ 1`. `MAX`
/// defaults to the search bound.
pub fn parse_grid(spec: &str, bound: u64) -> Result<Vec<ExtScalar>, String> {
    let (step, max) = match spec.split_once(':') {
        Some((s, m)) => (s, Some(m)),
        None => (spec, None),
    };
    let step: ExtScalar = step.trim().parse().map_err(|e| format!("grid step: {e}"))?;
    let max: ExtScalar = match max {
        Some(m) => m.trim().parse().map_err(|e| format!("grid maximum: {e}"))?,
        None => ExtScalar::from_int(bound),
    };
    if !step.is_positive_finite() || !max.is_finite() {
        return Err("grid step must be positive and the maximum finite".into());
    }
    let mut out = Vec::new();
    let mut r = step.clone();
    while r <= max {
        out.push(r.clone());
        r = r.add(&step);
    }
    Ok(out)
}

fn header(report: &mut Report, doc: &QueryDocument) {
    report.line(format!("{} in {}", doc.op, doc.model));
    report.quiet("op", &doc.op);
    report.quiet("model", &doc.model);
}

fn show_arg(report: &mut Report, doc: &QueryDocument, key: &str) -> Result<(), CliError> {
    let b = doc.element(key)?;
    report.field(key, doc.model.render(&b.element));
    Ok(())
}

pub fn cmd_rho(doc: &QueryDocument, ov: &Overrides) -> Result<Report, CliError> {
    if !["rho", "rho_normalized"].contains(&doc.op.as_str()) {
        return Err(CliError::validation(
            "query.op",
            format!("`{}` is not a rank-ratio operation (rho, rho_normalized)", doc.op),
        ));
    }
    let mut report = Report::default();
    header(&mut report, doc);
    let m = &doc.model;
    let (x, y) = (&doc.element("x")?.element, &doc.element("y")?.element);
    let result = match doc.op.as_str() {
        "rho" => {
            show_arg(&mut report, doc, "x")?;
            show_arg(&mut report, doc, "y")?;
            rho(m, x, y)
        }
        "rho_normalized" => {
            let z = &doc.element("z")?.element;
            show_arg(&mut report, doc, "z")?;
            show_arg(&mut report, doc, "x")?;
            show_arg(&mut report, doc, "y")?;
            rho_normalized(m, z, x, y).map_err(|e| CliError::operation(error_path(&e), e))?
        }
        _ => unreachable!("checked above"),
    };
    report.field("value", &result.value);
    report.field("method", result.method);
    report.field("witness", result.describe_witness(m));
    let samples = match ov.samples {
        Some(s) => Some(s),
        None => doc.number::<usize>("samples")?,
    };
    if let Some(samples) = samples {
        let seed = match ov.seed {
            Some(s) => s,
            None => doc.number::<u64>("seed")?.unwrap_or(0),
        };
        let sampled = rho_sampled(m, x, y, samples, seed);
        report.field("sampled.samples", samples);
        report.field("sampled.seed", seed);
        report.field("sampled.value", &sampled.value);
    }
    Ok(report)
}

fn error_path(e: &Error) -> &'static str {
    match e {
        Error::EmptyNormalizedFamily | Error::NotFull(_) => "query.z",
        Error::NotCompactlyDominated(_) => "query.x",
        _ => "query",
    }
}

fn rc_fields(report: &mut Report, m: &AnyModel, r: &RcResult<cuntz_core::AnyElement>) {
    report.field("value", &r.value);
    report.field("method", r.method);
    if let Some(b) = r.bound {
        report.field("bound", b);
    }
    if let Some(c) = &r.clear_from {
        report.field("clear_from", c);
    }
    if let Some(v) = &r.certificate {
        report.field("certificate.x", m.render(&v.x));
        report.field("certificate.y", m.render(&v.y));
        report.field("certificate.r", &v.r);
    }
}

pub fn cmd_rc(doc: &QueryDocument, ov: &Overrides) -> Result<Report, CliError> {
    let mut report = Report::default();
    header(&mut report, doc);
    let m = &doc.model;
    let bound = match ov.bound {
        Some(b) => b,
        None => doc.number::<u64>("bound")?.unwrap_or(10),
    };
    let w_path = "query.w";
    let fail = |e: Error| CliError::operation(w_path, e);
    match doc.op.as_str() {
        "rc" => {
            show_arg(&mut report, doc, "w")?;
            let w = &doc.element("w")?.element;
            let r = match rc_exact(m, w) {
                Err(Error::NoClosedForm(_)) => rc_search(m, w, bound, &default_grid(bound)),
                other => other,
            }
            .map_err(fail)?;
            rc_fields(&mut report, m, &r);
        }
        "rc_strict" => {
            show_arg(&mut report, doc, "w")?;
            let r = rc_strict(m, &doc.element("w")?.element).map_err(fail)?;
            rc_fields(&mut report, m, &r);
        }
        "rc_search" => {
            show_arg(&mut report, doc, "w")?;
            let grid_spec = ov.grid.clone().or_else(|| doc.args.get("grid").cloned());
            let grid = match grid_spec {
                Some(spec) => parse_grid(&spec, bound).map_err(|e| CliError::validation("query.grid", e))?,
                None => default_grid(bound),
            };
            let r = rc_search(m, &doc.element("w")?.element, bound, &grid).map_err(fail)?;
            rc_fields(&mut report, m, &r);
        }
        "irc" => {
            show_arg(&mut report, doc, "w")?;
            let v = irc(m, &doc.element("w")?.element).map_err(fail)?;
            report.field("value", v);
        }
        "rc_range" => {
            report.field("bound", bound);
            let values = rc_range_sample(m, bound).map_err(|e| CliError::operation("query", e))?;
            let shown: Vec<String> = values.iter().map(ToString::to_string).collect();
            report.field("values", shown.join(", "));
        }
        other => {
            return Err(CliError::validation(
                "query.op",
                format!("`{other}` is not a radius operation (rc, rc_strict, rc_search, irc, rc_range)"),
            ))
        }
    }
    Ok(report)
}

pub fn cmd_osc(doc: &QueryDocument) -> Result<Report, CliError> {
    if doc.op != "osc" {
        return Err(CliError::validation(
            "query.op",
            format!("`{}` is not an oscillation operation (osc)", doc.op),
        ));
    }
    let mut report = Report::default();
    header(&mut report, doc);
    let a = doc
        .element("a")?
        .profile
        .as_ref()
        .ok_or_else(|| CliError::validation("query.a", "needs an eigenvalue profile in a spectral model"))?;
    report.field("a", a);
    let m = a.stable_index(&[]);
    let (omega, at) = smoothed_defect_sup(a, m);
    let (defect, defect_at) = cutdown_defect_sup(a, m);
    report.field("stable_index", m);
    report.field("omega", &omega);
    report.field("omega_location", at);
    report.field("uniform_defect", &defect);
    report.field("uniform_defect_location", defect_at);
    match contrank_check(a) {
        Ok(rep) => {
            report.field("limit_rho_cutdown", &rep.limit_rho_cutdown);
            for (c, holds) in rep.conditions() {
                report.field(format!("condition.{c}"), holds);
            }
            report.field("all_agree", rep.all_agree());
            for (c, loc) in &rep.witnesses {
                report.field(format!("witness.{c}"), loc);
            }
        }
        Err(e) => {
            report.line(format!("  four-way check skipped: {e}"));
            report.quiet("contrank", "not-applicable");
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(src: &str) -> QueryDocument {
        QueryDocument::parse(src).unwrap()
    }

    #[test]
    fn grid_specs() {
        let g = parse_grid("1/2", 2).unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(g[3], ExtScalar::from_int(2));
        assert_eq!(parse_grid("1/4:1", 9).unwrap().len(), 4);
        assert!(parse_grid("0", 3).is_err());
        assert!(parse_grid("x", 3).is_err());
    }

    #[test]
    fn reciprocal_rank_ratios() {
        let base = "[model]\nkind = pointfn\npoints = p, q\n[elements]\na = 1, 2\nb = 2, 2\n[query]\nop = rho\n";
        let ab = cmd_rho(&doc(&format!("{base}x = a\ny = b\n")), &Overrides::default()).unwrap();
        assert_eq!(ab.get("value"), Some("1"));
        let ba = cmd_rho(&doc(&format!("{base}x = b\ny = a\n")), &Overrides::default()).unwrap();
        assert_eq!(ba.get("value"), Some("2"));
    }

    #[test]
    fn rank_ratio_against_infinite_multiple() {
        let src = "[model]\nexpr = perforated(3)\n[elements]\nx = 5\ny = inf * x\n[query]\nop = rho\nx = x\ny = y\n";
        let r = cmd_rho(&doc(src), &Overrides::default()).unwrap();
        assert_eq!(r.get("value"), Some("0"));
    }

    #[test]
    fn radius_queries() {
        let base = "[model]\nexpr = perforated(4)\n[elements]\nw = 1\n[query]\nw = w\n";
        let exact = cmd_rc(&doc(&format!("{base}op = rc\n")), &Overrides::default()).unwrap();
        assert_eq!(exact.get("value"), Some("3"));
        assert_eq!(exact.get("method"), Some("exact-formula"));
        let search = cmd_rc(&doc(&format!("{base}op = rc_search\nbound = 30\n")), &Overrides::default()).unwrap();
        assert_eq!(search.get("value"), Some("3"));
        assert_eq!(search.get("certificate.x"), Some("1"));
        assert_eq!(search.get("certificate.y"), Some("4"));
        let point = "[model]\nexpr = pointfn(p, q)\n[elements]\nw = 1, 3\n[query]\nop = rc\nw = w\n";
        assert_eq!(cmd_rc(&doc(point), &Overrides::default()).unwrap().get("value"), Some("0"));
    }

    #[test]
    fn operation_errors_name_the_argument() {
        let src = "[model]\nexpr = pointfn(p, q)\n[elements]\nw = 1, 0\n[query]\nop = rc\nw = w\n";
        let err = cmd_rc(&doc(src), &Overrides::default()).unwrap_err();
        assert!(err.to_string().starts_with("query.w: "), "{err}");
    }

    #[test]
    fn oscillation_of_the_negative_witness() {
        let src = "[model]\nexpr = spectral(2)\n[elements]\na = [0:0, 1:1] [0:1, 1:1]\n[query]\nop = osc\na = a\n";
        let r = cmd_osc(&doc(src)).unwrap();
        assert_eq!(r.get("omega"), Some("1/2"));
        assert_eq!(r.get("limit_rho_cutdown"), Some("2"));
        assert_eq!(r.get("all_agree"), Some("true"));
        assert_eq!(r.get("condition.rank_continuous"), Some("false"));
    }

    #[test]
    fn wrong_operation_for_command() {
        let src = "[model]\nexpr = idempotent\n[elements]\nw = u\n[query]\nop = rc\nw = w\nx = w\ny = w\n";
        assert!(matches!(
            cmd_rho(&doc(src), &Overrides::default()),
            Err(CliError::Validation { ref path, .. }) if path == "query.op"
        ));
    }
}
