//! The query document: a line-oriented `key = value` format with three
//! sections.
//!
//! ```text
//! # comments run to the end of the line
//! [model]
//! kind = pointfn
//! points = p, q
//!
//! [elements]
//! a = 1, 2
//! b = 2, 2
//! c = inf * a
//!
//! [query]
//! op = rho
//! x = a
//! y = b
//! ```
//!
//! The model is either `expr = <model expression>` or `kind` plus its
//! parameters (`gap`, `points`, `fiber`, or `left`/`right` expressions for
//! `sum`). Element payloads use the model's payload syntax, or `n * name`
//! and `inf * name` to scale an earlier binding.

use std::collections::BTreeMap;

use cuntz_core::{AnyElement, AnyModel, CuModel, ExtScalar, SpectralProfile};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Entry {
    key: String,
    value: String,
    line: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Section {
    Model,
    Elements,
    Query,
}

/// A binding from the `[elements]` section.
#[derive(Clone, Debug, PartialEq)]
pub struct Binding {
    pub payload: String,
    pub element: AnyElement,
    /// The eigenvalue profile, when the payload was one.
    pub profile: Option<SpectralProfile>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QueryDocument {
    pub model: AnyModel,
    pub elements: BTreeMap<String, Binding>,
    pub op: String,
    /// Query arguments other than `op`, unresolved.
    pub args: BTreeMap<String, String>,
}

impl QueryDocument {
    pub fn parse(src: &str) -> Result<QueryDocument, CliError> {
        let sections = split_sections(src)?;
        let model = build_model(&sections[0])?;
        let mut elements = BTreeMap::new();
        for e in &sections[1] {
            if elements.contains_key(&e.key) {
                return Err(CliError::parse(e.line, format!("element `{}` bound twice", e.key)));
            }
            let binding = bind(&model, &elements, e)?;
            elements.insert(e.key.clone(), binding);
        }
        let mut args = BTreeMap::new();
        let mut op = None;
        for e in &sections[2] {
            if e.key == "op" {
                op = Some(e.value.clone());
            } else if args.insert(e.key.clone(), e.value.clone()).is_some() {
                return Err(CliError::parse(e.line, format!("query key `{}` given twice", e.key)));
            }
        }
        let op = op.ok_or_else(|| CliError::validation("query.op", "missing"))?;
        Ok(QueryDocument {
            model,
            elements,
            op,
            args,
        })
    }

    /// The binding named by query argument `key`.
    pub fn element(&self, key: &str) -> Result<&Binding, CliError> {
        let path = format!("query.{key}");
        let name = self
            .args
            .get(key)
            .ok_or_else(|| CliError::validation(&path, "missing"))?;
        self.elements
            .get(name)
            .ok_or_else(|| CliError::validation(&path, format!("unbound element `{name}`")))
    }

    /// An optional numeric query argument.
    pub fn number<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.args
            .get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| CliError::validation(format!("query.{key}"), format!("not a number: `{v}`")))
            })
            .transpose()
    }

    pub fn scalar(&self, key: &str) -> Result<Option<ExtScalar>, CliError> {
        self.args
            .get(key)
            .map(|v| {
                v.parse::<ExtScalar>()
                    .map_err(|e| CliError::validation(format!("query.{key}"), e.to_string()))
            })
            .transpose()
    }
}

fn split_sections(src: &str) -> Result<[Vec<Entry>; 3], CliError> {
    let mut out: [Vec<Entry>; 3] = Default::default();
    let mut current: Option<Section> = None;
    let mut seen = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        if let Some(name) = text.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| CliError::parse(line, "unterminated section header"))?
                .trim();
            let section = match name {
                "model" => Section::Model,
                "elements" => Section::Elements,
                "query" => Section::Query,
                other => return Err(CliError::parse(line, format!("unknown section `[{other}]`"))),
            };
            if seen.contains(&section) {
                return Err(CliError::parse(line, format!("section `[{name}]` repeated")));
            }
            seen.push(section);
            current = Some(section);
            continue;
        }
        let (key, value) = text
            .split_once('=')
            .ok_or_else(|| CliError::parse(line, format!("expected `key = value`, got `{text}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(CliError::parse(line, format!("bad key `{key}`")));
        }
        let section = current.ok_or_else(|| CliError::parse(line, "entry before any section header"))?;
        out[section as usize].push(Entry {
            key: key.to_string(),
            value: value.to_string(),
            line,
        });
    }
    for (section, name) in [(Section::Model, "model"), (Section::Query, "query")] {
        if !seen.contains(&section) {
            return Err(CliError::validation(name, "section missing"));
        }
    }
    Ok(out)
}

fn build_model(entries: &[Entry]) -> Result<AnyModel, CliError> {
    let get = |k: &str| entries.iter().find(|e| e.key == k);
    for e in entries {
        if !["expr", "kind", "gap", "points", "fiber", "left", "right"].contains(&e.key.as_str()) {
            return Err(CliError::parse(e.line, format!("unknown model key `{}`", e.key)));
        }
    }
    let parse = |path: &str, expr: &str| {
        AnyModel::parse(expr).map_err(|err| CliError::validation(path, err.to_string()))
    };
    if let Some(e) = get("expr") {
        return parse("model.expr", &e.value);
    }
    let kind = get("kind").ok_or_else(|| CliError::validation("model.kind", "missing"))?;
    let param = |k: &str| {
        get(k)
            .map(|e| e.value.clone())
            .ok_or_else(|| CliError::validation(format!("model.{k}"), format!("required by kind `{}`", kind.value)))
    };
    let expr = match kind.value.as_str() {
        "idempotent" => "idempotent".to_string(),
        "perforated" => format!("perforated({})", param("gap")?),
        "pointfn" => format!("pointfn({})", param("points")?),
        "spectral" => format!("spectral({})", param("fiber")?),
        "sum" => {
            let left = parse("model.left", &param("left")?)?;
            let right = parse("model.right", &param("right")?)?;
            return Ok(AnyModel::sum(left, right));
        }
        other => return Err(CliError::validation("model.kind", format!("unknown kind `{other}`"))),
    };
    let path = match kind.value.as_str() {
        "perforated" => "model.gap",
        "pointfn" => "model.points",
        "spectral" => "model.fiber",
        _ => "model.kind",
    };
    parse(path, &expr)
}

fn bind(model: &AnyModel, earlier: &BTreeMap<String, Binding>, e: &Entry) -> Result<Binding, CliError> {
    let path = format!("elements.{}", e.key);
    if let Some((factor, name)) = e.value.split_once('*') {
        let (factor, name) = (factor.trim(), name.trim());
        let base = earlier
            .get(name)
            .ok_or_else(|| CliError::validation(&path, format!("unbound element `{name}`")))?;
        let element = if factor == "inf" {
            model.infinity_times(&base.element)
        } else {
            let n: u64 = factor
                .parse()
                .map_err(|_| CliError::validation(&path, format!("bad multiplier `{factor}`")))?;
            model.scale(&base.element, n)
        };
        return Ok(Binding {
            payload: e.value.clone(),
            element,
            profile: None,
        });
    }
    let element = model
        .make_element(&e.value)
        .map_err(|err| CliError::validation(&path, err.to_string()))?;
    let profile = match model {
        AnyModel::Spectral(s) => s.parse_profile(&e.value).ok(),
        _ => None,
    };
    Ok(Binding {
        payload: e.value.clone(),
        element,
        profile,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const RECIPROCAL: &str = "\
[model]
kind = pointfn
points = p, q

[elements]
a = 1, 2   # rank (1, 2)
b = 2, 2

[query]
op = rho
x = a
y = b
";

    #[test]
    fn parses_a_complete_document() {
        let doc = QueryDocument::parse(RECIPROCAL).unwrap();
        assert_eq!(doc.model.to_string(), "pointfn(p,q)");
        assert_eq!(doc.op, "rho");
        assert_eq!(doc.elements.len(), 2);
        assert_eq!(doc.element("x").unwrap().payload, "1, 2");
    }

    #[test]
    fn scaled_bindings() {
        let src = "[model]\nexpr = perforated(3)\n[elements]\nx = 4\ny = inf * x\nz = 2*x\n[query]\nop = rho\n";
        let doc = QueryDocument::parse(src).unwrap();
        assert_eq!(doc.model.render(&doc.elements["y"].element), "inf");
        assert_eq!(doc.model.render(&doc.elements["z"].element), "8");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = QueryDocument::parse("[model]\nkind = idempotent\nnonsense\n").unwrap_err();
        assert_eq!(err.to_string(), "line 3: expected `key = value`, got `nonsense`");
        let err = QueryDocument::parse("kind = idempotent\n").unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 1, .. }));
        let err = QueryDocument::parse("[model]\n[oops]\n").unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 2, .. }));
    }

    #[test]
    fn validation_errors_carry_field_paths() {
        let bad_payload = RECIPROCAL.replace("b = 2, 2", "b = 2, -2");
        match QueryDocument::parse(&bad_payload).unwrap_err() {
            CliError::Validation { path, .. } => assert_eq!(path, "elements.b"),
            other => panic!("unexpected {other}"),
        }
        let unbound = RECIPROCAL.replace("y = b", "y = nope");
        let doc = QueryDocument::parse(&unbound).unwrap();
        match doc.element("y").unwrap_err() {
            CliError::Validation { path, message } => {
                assert_eq!(path, "query.y");
                assert!(message.contains("nope"));
            }
            other => panic!("unexpected {other}"),
        }
        let no_gap = "[model]\nkind = perforated\n[query]\nop = rc\n";
        assert!(matches!(
            QueryDocument::parse(no_gap).unwrap_err(),
            CliError::Validation { ref path, .. } if path == "model.gap"
        ));
    }

    #[test]
    fn sum_models_from_parts() {
        let src = "[model]\nkind = sum\nleft = perforated(3)\nright = idempotent\n[elements]\nw = <1> <u>\n[query]\nop = rc\nw = w\n";
        let doc = QueryDocument::parse(src).unwrap();
        assert_eq!(doc.model.to_string(), "sum(perforated(3), idempotent)");
    }
}
