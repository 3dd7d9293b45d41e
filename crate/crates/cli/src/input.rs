use std::fs;
use std::path::Path;

use padic_lbg::{AbstractDendrogram, Dendrogram, FieldParams, PAdicValue, Tree};

use crate::CliError;

/// What an input file holds.
pub enum Input {
    Data(Dendrogram),
    Tree(AbstractDendrogram),
}

impl Input {
    pub fn tree(&self) -> &Tree {
        match self {
            Input::Data(d) => d.tree(),
            Input::Tree(t) => t.tree(),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

/// Reads a dataset, or a tree when the first content starts with `(` or is
/// a bare `L`.
pub fn load(path: &Path, field: FieldParams) -> Result<Input, CliError> {
    let text = read(path)?;
    let body: Vec<&str> = text.lines().map(strip_comment).filter(|l| !l.is_empty()).collect();
    match body.first() {
        Some(first) if first.starts_with('(') || *first == "L" => {
            let joined = body.join(" ");
            let tree = AbstractDendrogram::parse(&joined)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            Ok(Input::Tree(tree))
        }
        _ => {
            let data = parse_data(&text, path, field)?;
            let d = Dendrogram::build(data).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            Ok(Input::Data(d))
        }
    }
}

/// One datum per line; blank lines and `#` comments are skipped.
pub fn load_data(path: &Path, field: FieldParams) -> Result<Vec<PAdicValue>, CliError> {
    parse_data(&read(path)?, path, field)
}

fn parse_data(text: &str, path: &Path, field: FieldParams) -> Result<Vec<PAdicValue>, CliError> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = strip_comment(line);
        if line.is_empty() {
            continue;
        }
        let v = PAdicValue::parse(line, field)
            .map_err(|e| CliError::Input(format!("{}:{}: {e}", path.display(), n + 1)))?;
        out.push(v);
    }
    Ok(out)
}
