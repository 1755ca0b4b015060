//! Command output: a free-form human section followed by a fenced
//! `result` block of `key = value` lines. Only the block is contract.

use std::fmt;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub human: Vec<String>,
    pub fields: Vec<(String, String)>,
}

impl Report {
    pub fn line(&mut self, text: impl Into<String>) {
        self.human.push(text.into());
    }

    /// Adds a field to the block and echoes it in the human section.
    pub fn field(&mut self, key: impl Into<String>, value: impl ToString) {
        let (key, value) = (key.into(), value.to_string());
        self.human.push(format!("  {key:<30} {value}"));
        self.fields.push((key, value));
    }

    /// Adds a field to the block only.
    pub fn quiet(&mut self, key: impl Into<String>, value: impl ToString) {
        self.fields.push((key.into(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn block(&self) -> String {
        let mut out = String::from("```result\n");
        for (k, v) in &self.fields {
            out.push_str(&format!("{k} = {v}\n"));
        }
        out.push_str("```\n");
        out
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.human {
            writeln!(f, "{l}")?;
        }
        writeln!(f)?;
        f.write_str(&self.block())
    }
}

/// Extracts the `result` block from command output.
pub fn parse_block(output: &str) -> Option<Vec<(String, String)>> {
    let start = output.find("```result\n")? + "```result\n".len();
    let end = start + output[start..].find("```")?;
    output[start..end]
        .lines()
        .map(|l| {
            l.split_once(" = ")
                .map(|(k, v)| (k.to_string(), v.to_string()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_round_trips() {
        let mut r = Report::default();
        r.line("title");
        r.field("value", "3/4");
        r.quiet("witness", "a = b");
        let text = r.to_string();
        let parsed = parse_block(&text).unwrap();
        assert_eq!(parsed, r.fields);
    }

    #[test]
    fn missing_block() {
        assert_eq!(parse_block("no block here"), None);
    }
}
