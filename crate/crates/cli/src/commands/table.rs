//! `lamp query` and `lamp diag`: associative search over a table file.

use std::fmt::Write;
use std::path::Path;

use lamp_core::{AssocTable, BitVector, Rational, RowMatch, RowScore, TernaryVector};

use super::{read_text, Output};
use crate::error::{CliError, Result};
use crate::report::{inputs_digest, RunReport};
use crate::style::Style;

pub fn load_table(path: &Path) -> Result<(AssocTable, String)> {
    let text = read_text(path)?;
    let name = path.file_name().map_or_else(
        || path.display().to_string(),
        |n| n.to_string_lossy().into_owned(),
    );
    let table = AssocTable::parse(name, &text).map_err(|e| CliError::input(path, e))?;
    Ok((table, text))
}

fn score_fields(score: &RowScore<Rational>) -> Vec<(String, String)> {
    let mut f = vec![("score".to_string(), score.to_string())];
    if let Some(i) = score.index() {
        f.push(("k".into(), i.k.to_string()));
        f.push(("n".into(), i.n.to_string()));
    }
    f
}

fn row_fields(row: &RowMatch) -> Vec<(String, String)> {
    vec![
        ("row".into(), (row.index + 1).to_string()),
        ("label".into(), row.label.clone().unwrap_or_default()),
    ]
}

fn describe(row: &RowMatch) -> String {
    match &row.label {
        Some(l) => format!("row {} {l}", row.index + 1),
        None => format!("row {}", row.index + 1),
    }
}

fn shown_score(score: &RowScore<Rational>) -> String {
    match score.index() {
        Some(i) => format!("index ({},{})", i.k, i.n),
        None => format!("Q = {score}"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Search {
    Query,
    Diagnose,
}

/// Runs a query (`m` may hold `x`) or a diagnosis (binary `response`).
pub fn search(
    kind: Search,
    path: &Path,
    vector: &str,
    top: Option<usize>,
    command: &str,
    style: Style,
) -> Result<Output> {
    let (table, text) = load_table(path)?;
    let flag = match kind {
        Search::Query => "--m",
        Search::Diagnose => "--response",
    };
    let m: TernaryVector = match kind {
        Search::Query => vector.parse(),
        Search::Diagnose => vector
            .parse::<BitVector>()
            .map(|b| TernaryVector::from_binary(&b)),
    }
    .map_err(|e| CliError::Usage(format!("{flag} {vector:?}: {e}")))?;
    if m.len() != table.cols() {
        return Err(CliError::Usage(format!(
            "{flag} has {} coordinates, table {} has {}",
            m.len(),
            table.name(),
            table.cols()
        )));
    }
    let result = match kind {
        Search::Query => table.query(&m),
        Search::Diagnose => table.diagnose(&m.to_binary().expect("parsed as binary")),
    }
    .map_err(|e| CliError::Usage(e.to_string()))?;

    let mut report = RunReport::new(command, inputs_digest([text.as_bytes(), vector.as_bytes()]));
    report.push(
        "table",
        [
            ("name", table.name().to_string()),
            ("rows", table.len().to_string()),
            ("cols", table.cols().to_string()),
            ("mode", table.mode().as_str().to_string()),
        ],
    );
    let mut out = String::new();
    writeln!(
        out,
        "table {}: {} rows x {} columns, {}",
        table.name(),
        table.len(),
        table.cols(),
        table.mode().as_str()
    )
    .unwrap();
    let noun = match kind {
        Search::Query => "best",
        Search::Diagnose => "fault",
    };
    for row in &result.best_rows {
        let line = format!("{noun} {}  {}", describe(row), shown_score(&result.best));
        writeln!(out, "{}", style.good(&line)).unwrap();
        let mut fields = row_fields(row);
        fields.extend(score_fields(&result.best));
        report.push("best", fields);
    }
    if let Some(k) = top {
        let ranked = table
            .rank(&m, k)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        for (pos, (row, score)) in ranked.iter().enumerate() {
            writeln!(
                out,
                "{:>3}. {}  {}",
                pos + 1,
                describe(row),
                shown_score(score)
            )
            .unwrap();
            let mut fields = vec![("rank".to_string(), (pos + 1).to_string())];
            fields.extend(row_fields(row));
            fields.extend(score_fields(score));
            report.push("rank", fields);
        }
    }
    Ok(Output::ok(report, out))
}
