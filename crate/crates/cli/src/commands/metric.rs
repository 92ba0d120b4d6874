//! `lamp metric`: the quality metric of one query/associator pair.

use std::fmt::Write;

use lamp_core::{
    criterion_arith, criterion_vector, quality_arith, BitVector, Rational, TernaryVector,
};

use super::Output;
use crate::error::{CliError, Result};
use crate::report::{inputs_digest, RunReport};
use crate::style::Style;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MetricMode {
    /// Normalized score of ternary vectors, as an exact fraction.
    Arith,
    /// Integer criterion of binary vectors; 0 means equal.
    Int,
    /// Criterion vectors of binary vectors and their compacted index.
    Vector,
}

impl MetricMode {
    fn name(self) -> &'static str {
        match self {
            MetricMode::Arith => "arith",
            MetricMode::Int => "int",
            MetricMode::Vector => "vector",
        }
    }
}

fn binary(flag: &str, s: &str) -> Result<BitVector> {
    s.parse()
        .map_err(|e| CliError::Usage(format!("{flag} {s:?}: {e} (binary vector expected)")))
}

fn ternary(flag: &str, s: &str) -> Result<TernaryVector> {
    s.parse()
        .map_err(|e| CliError::Usage(format!("{flag} {s:?}: {e}")))
}

fn usage(e: lamp_core::Error) -> CliError {
    CliError::Usage(e.to_string())
}

pub fn metric(m: &str, a: &str, mode: MetricMode, command: &str, style: Style) -> Result<Output> {
    let digest = inputs_digest([m.as_bytes(), a.as_bytes(), mode.name().as_bytes()]);
    let mut report = RunReport::new(command, digest);
    let mut text = String::new();
    match mode {
        MetricMode::Vector => {
            let (mv, av) = (binary("--m", m)?, binary("--a", a)?);
            let q = criterion_vector(&mv, &av).map_err(usage)?;
            let shared = mv.and(&av).map_err(usage)?;
            let index = q.index();
            let rows: [(&str, &str, &BitVector); 9] = [
                ("m", "m", &mv),
                ("A", "a", &av),
                ("m∧A", "m_and_a", &shared),
                ("¬(m∧A)", "not_m_and_a", &shared.not()),
                ("d", "d", &q.d_vec),
                ("μ(A∈m)", "mu_a_in_m", &q.mu_a_in_m_vec),
                ("μ(m∈A)", "mu_m_in_a", &q.mu_m_in_a_vec),
                ("Q", "q", &q.q_vec),
                ("compact Q", "q_compacted", &q.q_compacted),
            ];
            for (label, _, v) in &rows {
                writeln!(text, "{label:<10} {v}").unwrap();
            }
            let line = format!("Q = {index}");
            writeln!(text, "{}", style.bold(&line)).unwrap();
            let mut fields: Vec<(String, String)> = rows
                .iter()
                .map(|(_, key, v)| (key.to_string(), v.to_string()))
                .collect();
            fields.push(("k".into(), index.k.to_string()));
            fields.push(("n".into(), index.n.to_string()));
            fields.push(("index".into(), index.to_string()));
            report.push("vector", fields);
        }
        MetricMode::Int => {
            let (mv, av) = (binary("--m", m)?, binary("--a", a)?);
            let s = criterion_arith(&mv, &av).map_err(usage)?;
            writeln!(text, "|d|        {}", s.d_card).unwrap();
            writeln!(text, "|μ(A∈m)|   {}", s.nonmembership_a_in_m).unwrap();
            writeln!(text, "|μ(m∈A)|   {}", s.nonmembership_m_in_a).unwrap();
            writeln!(text, "{}", style.bold(&format!("Q = {}", s.value))).unwrap();
            report.push(
                "int",
                [
                    ("d", s.d_card),
                    ("mu_a_in_m", s.nonmembership_a_in_m),
                    ("mu_m_in_a", s.nonmembership_m_in_a),
                    ("q", s.value),
                ],
            );
        }
        MetricMode::Arith => {
            let (mv, av) = (ternary("--m", m)?, ternary("--a", a)?);
            let s = quality_arith::<Rational>(&mv, &av).map_err(usage)?;
            writeln!(text, "d          {}", s.d).unwrap();
            writeln!(text, "μ(A∈m)     {}", s.mu_a_in_m).unwrap();
            writeln!(text, "μ(m∈A)     {}", s.mu_m_in_a).unwrap();
            writeln!(text, "{}", style.bold(&format!("Q = {}", s.value))).unwrap();
            report.push(
                "arith",
                [
                    ("d", s.d.to_string()),
                    ("mu_a_in_m", s.mu_a_in_m.to_string()),
                    ("mu_m_in_a", s.mu_m_in_a.to_string()),
                    ("q", s.value.to_string()),
                ],
            );
        }
    }
    Ok(Output::ok(report, text))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_vector_table() {
        let out = metric(
            "110011001100",
            "000011110101",
            MetricMode::Vector,
            "t",
            Style::PLAIN,
        )
        .unwrap();
        assert!(out.text.ends_with("Q = 6/12\n"), "{}", out.text);
        assert!(out.text.contains("compact Q  111111000000"));
        let r = &out.report.records[0];
        assert_eq!(r.get("m_and_a"), Some("000011000100"));
        assert_eq!(r.get("k"), Some("6"));
    }

    #[test]
    fn arith_fraction() {
        let out = metric("x0", "xx", MetricMode::Arith, "t", Style::PLAIN).unwrap();
        assert!(out.text.ends_with("Q = 5/6\n"), "{}", out.text);
    }

    #[test]
    fn width_error_is_usage() {
        for mode in [MetricMode::Arith, MetricMode::Int, MetricMode::Vector] {
            let err = metric("1", "10", mode, "t", Style::PLAIN).unwrap_err();
            assert!(matches!(err, CliError::Usage(_)), "{err}");
        }
        assert!(matches!(
            metric("1x", "10", MetricMode::Int, "t", Style::PLAIN),
            Err(CliError::Usage(_))
        ));
    }
}
