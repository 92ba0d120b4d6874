//! Associative tables and the search / recognition / decision procedures.
//!
//! A query is scored against every row of the table. Binary tables use the
//! vector criterion (smaller index is better) and pick the winner by folding
//! the compacted criterion vectors with [`choose_best`]; tables holding any
//! `x` use the normalized score (larger is better).
//!
//! # Table text format
//!
//! ```text
//! # comment to end of line
//! F1<TAB>1100        labeled row
//! 0011               bare row
//! ```
//!
//! Blank lines are ignored. A leading `label<TAB>vector` header line is
//! skipped. All rows must have the same width; symbols are `0`, `1`, `x`.

use std::collections::HashSet;
use std::io::BufRead;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quality::{
    choose_best, criterion_vector, quality_arith, QualityIndex, QualityScoreNorm,
};
use crate::scalar::Scalar;
use crate::ternary::TernaryVector;
use crate::vector::BitVector;
use crate::Rational;

/// Tables at least this tall are scored on the rayon pool.
const PARALLEL_ROWS: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Binary,
    Ternary,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Binary => "binary",
            Mode::Ternary => "ternary",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssocTable {
    name: String,
    cols: usize,
    rows: Vec<TernaryVector>,
    labels: Vec<Option<String>>,
    /// Present iff every row is binary.
    binary: Option<Vec<BitVector>>,
}

impl AssocTable {
    /// Builds a table from `(label, row)` pairs.
    pub fn from_rows<I>(name: impl Into<String>, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Option<String>, TernaryVector)>,
    {
        let mut builder = Builder::default();
        for (i, (label, row)) in rows.into_iter().enumerate() {
            builder.push(i + 1, label, row)?;
        }
        builder.finish(name.into())
    }

    /// Unlabeled binary table.
    pub fn from_binary_rows(name: impl Into<String>, rows: &[BitVector]) -> Result<Self> {
        Self::from_rows(
            name,
            rows.iter().map(|r| (None, TernaryVector::from_binary(r))),
        )
    }

    /// Parses the table text format from a reader.
    pub fn load<R: BufRead>(name: impl Into<String>, reader: R) -> Result<Self> {
        let mut builder = Builder::default();
        let mut seen_content = false;
        for (i, line) in reader.lines().enumerate() {
            let lineno = i + 1;
            let line = line.map_err(|e| Error::Io(e.to_string()))?;
            let content = match line.find('#') {
                Some(pos) => &line[..pos],
                None => &line[..],
            };
            let content = content.trim();
            if content.is_empty() {
                continue;
            }
            if !seen_content {
                seen_content = true;
                if is_header(content) {
                    continue;
                }
            }
            let (label, text) = match content.split_once('\t') {
                Some((l, v)) => {
                    let l = l.trim();
                    if l.is_empty() {
                        return Err(Error::Parse {
                            line: lineno,
                            message: "empty label before tab".into(),
                        });
                    }
                    (Some(l.to_string()), v.trim())
                }
                None => (None, content),
            };
            let row: TernaryVector = text.parse().map_err(|e| Error::Parse {
                line: lineno,
                message: format!("bad vector {text:?}: {e}"),
            })?;
            builder.push(lineno, label, row)?;
        }
        builder.finish(name.into())
    }

    pub fn parse(name: impl Into<String>, text: &str) -> Result<Self> {
        Self::load(name, text.as_bytes())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn mode(&self) -> Mode {
        if self.binary.is_some() {
            Mode::Binary
        } else {
            Mode::Ternary
        }
    }

    pub fn rows(&self) -> &[TernaryVector] {
        &self.rows
    }

    /// Rows as binary vectors, if the table is binary.
    pub fn binary_rows(&self) -> Option<&[BitVector]> {
        self.binary.as_deref()
    }

    pub fn label(&self, row: usize) -> Option<&str> {
        self.labels[row].as_deref()
    }

    /// Best rows for `m` with exact normalized scores in ternary mode.
    pub fn query(&self, m: &TernaryVector) -> Result<QueryResult<Rational>> {
        self.query_as(m)
    }

    /// As [`query`](Self::query), with ternary scores computed in `T`.
    pub fn query_as<T: Scalar>(&self, m: &TernaryVector) -> Result<QueryResult<T>> {
        if m.len() != self.cols {
            return Err(Error::LengthMismatch {
                left: m.len(),
                right: self.cols,
            });
        }
        match &self.binary {
            Some(rows) => {
                let m = m
                    .to_binary()
                    .ok_or(Error::ModeMismatch("ternary query against a binary table"))?;
                self.query_binary(&m, rows)
            }
            None => self.query_ternary(m),
        }
    }

    fn query_binary<T: Scalar>(&self, m: &BitVector, rows: &[BitVector]) -> Result<QueryResult<T>> {
        let compacted: Vec<BitVector> =
            score_rows(rows, |a| Ok(criterion_vector(m, a)?.q_compacted))?;
        let mut best = compacted[0].clone();
        for q in &compacted[1..] {
            let decision = choose_best(&best, q)?;
            if decision.flag {
                best = decision.winner;
            }
        }
        let n = self.cols;
        let best_rows = compacted
            .iter()
            .enumerate()
            .filter(|(_, q)| **q == best)
            .map(|(i, _)| self.row_match(i))
            .collect();
        let index = |q: &BitVector| QualityIndex {
            k: q.count_ones(),
            n,
        };
        Ok(QueryResult {
            mode: Mode::Binary,
            best_rows,
            best: RowScore::Binary(index(&best)),
            per_row: compacted
                .iter()
                .map(|q| RowScore::Binary(index(q)))
                .collect(),
        })
    }

    fn query_ternary<T: Scalar>(&self, m: &TernaryVector) -> Result<QueryResult<T>> {
        let scores: Vec<QualityScoreNorm<T>> = score_rows(&self.rows, |a| quality_arith(m, a))?;
        let mut best = &scores[0];
        for s in &scores[1..] {
            if s.value > best.value {
                best = s;
            }
        }
        let best_rows = scores
            .iter()
            .enumerate()
            .filter(|(_, s)| s.value == best.value)
            .map(|(i, _)| self.row_match(i))
            .collect();
        Ok(QueryResult {
            mode: Mode::Ternary,
            best_rows,
            best: RowScore::Ternary(best.clone()),
            per_row: scores.into_iter().map(RowScore::Ternary).collect(),
        })
    }

    /// First `k` rows from best to worst; ties keep ascending row order.
    pub fn rank(&self, m: &TernaryVector, k: usize) -> Result<Vec<(RowMatch, RowScore<Rational>)>> {
        if k == 0 {
            return Err(Error::ZeroRank);
        }
        let result = self.query(m)?;
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&i, &j| result.per_row[i].cmp_quality(&result.per_row[j]));
        Ok(order
            .into_iter()
            .take(k)
            .map(|i| (self.row_match(i), result.per_row[i].clone()))
            .collect())
    }

    /// Fault lookup: the dictionary rows closest to an observed response.
    pub fn diagnose(&self, response: &BitVector) -> Result<QueryResult<Rational>> {
        if self.binary.is_none() {
            return Err(Error::ModeMismatch("fault dictionary must be binary"));
        }
        self.query(&TernaryVector::from_binary(response))
    }

    fn row_match(&self, index: usize) -> RowMatch {
        RowMatch {
            index,
            label: self.labels[index].clone(),
        }
    }
}

fn is_header(line: &str) -> bool {
    let mut parts = line.split('\t').map(str::trim);
    matches!(
        (parts.next(), parts.next(), parts.next()),
        (Some(l), Some(v), None) if l.eq_ignore_ascii_case("label") && v.eq_ignore_ascii_case("vector")
    )
}

fn score_rows<R, S, F>(rows: &[R], f: F) -> Result<Vec<S>>
where
    R: Sync,
    S: Send,
    F: Fn(&R) -> Result<S> + Sync + Send,
{
    if rows.len() >= PARALLEL_ROWS {
        rows.par_iter().map(f).collect()
    } else {
        rows.iter().map(f).collect()
    }
}

#[derive(Default)]
struct Builder {
    cols: Option<usize>,
    rows: Vec<TernaryVector>,
    labels: Vec<Option<String>>,
    seen: HashSet<String>,
}

impl Builder {
    fn push(&mut self, line: usize, label: Option<String>, row: TernaryVector) -> Result<()> {
        let expected = *self.cols.get_or_insert(row.len());
        if row.len() != expected {
            return Err(Error::WidthMismatch {
                line,
                expected,
                found: row.len(),
            });
        }
        if let Some(l) = &label {
            if !self.seen.insert(l.clone()) {
                return Err(Error::DuplicateLabel {
                    line,
                    label: l.clone(),
                });
            }
        }
        self.rows.push(row);
        self.labels.push(label);
        Ok(())
    }

    fn finish(self, name: String) -> Result<AssocTable> {
        let cols = self.cols.ok_or(Error::EmptyTable)?;
        if cols == 0 {
            return Err(Error::ZeroLength);
        }
        let binary = self
            .rows
            .iter()
            .map(TernaryVector::to_binary)
            .collect::<Option<Vec<_>>>();
        Ok(AssocTable {
            name,
            cols,
            rows: self.rows,
            labels: self.labels,
            binary,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RowMatch {
    pub index: usize,
    pub label: Option<String>,
}

/// Score of one row: an index in binary mode, a normalized score in ternary mode.
#[derive(Debug, Clone, PartialEq)]
pub enum RowScore<T> {
    Binary(QualityIndex),
    Ternary(QualityScoreNorm<T>),
}

impl<T: Scalar> RowScore<T> {
    /// `Less` means `self` is the better score.
    pub fn cmp_quality(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering::Equal;
        match (self, other) {
            (RowScore::Binary(a), RowScore::Binary(b)) => a.cmp(b),
            (RowScore::Ternary(a), RowScore::Ternary(b)) => {
                b.value.partial_cmp(&a.value).unwrap_or(Equal)
            }
            _ => Equal,
        }
    }

    pub fn index(&self) -> Option<QualityIndex> {
        match self {
            RowScore::Binary(i) => Some(*i),
            RowScore::Ternary(_) => None,
        }
    }

    pub fn norm(&self) -> Option<&QualityScoreNorm<T>> {
        match self {
            RowScore::Ternary(s) => Some(s),
            RowScore::Binary(_) => None,
        }
    }
}

impl<T: Scalar> std::fmt::Display for RowScore<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RowScore::Binary(i) => write!(f, "{i}"),
            RowScore::Ternary(s) => write!(f, "{}", s.value),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryResult<T> {
    pub mode: Mode,
    /// All optimal rows, ascending index.
    pub best_rows: Vec<RowMatch>,
    pub best: RowScore<T>,
    /// One score per table row, in row order.
    pub per_row: Vec<RowScore<T>>,
}
