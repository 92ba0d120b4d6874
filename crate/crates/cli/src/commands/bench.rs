//! `lamp bench`: vector-logic table query against a per-coordinate scalar
//! evaluation of the integer criterion.
//!
//! Both paths run on the same rayon pool of `threads` workers and must agree
//! on the winner set. The scalar path works on rows unpacked to one byte per
//! coordinate, a chunk of rows at a time; unpacking is not timed.

use std::fmt::Write;
use std::time::Instant;

use lamp_core::{AssocTable, BitVector, TernaryVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::Output;
use crate::error::{CliError, Result};
use crate::report::{inputs_digest, RunReport};
use crate::style::Style;

/// Rows unpacked per scalar chunk; bounds the byte-per-coordinate copy.
const CHUNK_ROWS: usize = 2048;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchConfig {
    pub n: usize,
    pub rows: usize,
    pub iters: usize,
    pub seed: u64,
    pub threads: usize,
    pub baseline: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchResult {
    pub vector_seconds: f64,
    pub vector_rows_per_sec: f64,
    pub scalar_seconds: Option<f64>,
    pub scalar_rows_per_sec: Option<f64>,
    /// Vector throughput over scalar throughput.
    pub ratio: Option<f64>,
    /// Winning rows, 0-based.
    pub winners: Vec<usize>,
    pub best_k: usize,
    /// Every vector iteration chose the same winners.
    pub deterministic: bool,
    pub winners_agree: Option<bool>,
}

fn random_row(rng: &mut ChaCha8Rng, n: usize) -> BitVector {
    let words: Vec<u64> = (0..n.div_ceil(64)).map(|_| rng.gen()).collect();
    BitVector::from_bits((0..n).map(|i| words[i / 64] >> (i % 64) & 1 == 1))
}

/// Table rows and a query planted near one of them.
pub fn bench_data(n: usize, rows: usize, seed: u64) -> (Vec<BitVector>, BitVector) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let table: Vec<BitVector> = (0..rows).map(|_| random_row(&mut rng, n)).collect();
    let mut m = table[rng.gen_range(0..rows)].clone();
    for _ in 0..n.div_ceil(16) {
        let i = rng.gen_range(0..n);
        m.set(i, !m.get(i));
    }
    (table, m)
}

/// The integer criterion computed one coordinate at a time with arithmetic.
pub fn scalar_criterion(m: &[u8], a: &[u8]) -> usize {
    let (mut d, mut mu_m_in_a, mut mu_a_in_m) = (0usize, 0usize, 0usize);
    for (&x, &y) in m.iter().zip(a) {
        let (x, y) = (x as usize, y as usize);
        let shared = x * y;
        d += x + y - 2 * shared;
        mu_m_in_a += y * (1 - shared);
        mu_a_in_m += x * (1 - shared);
    }
    d + mu_m_in_a + mu_a_in_m
}

fn unpack(v: &BitVector, out: &mut [u8]) {
    for (slots, &w) in out.chunks_mut(64).zip(v.words()) {
        for (j, slot) in slots.iter_mut().enumerate() {
            *slot = (w >> j & 1) as u8;
        }
    }
}

/// One scalar pass: elapsed scoring seconds and the minimal rows.
fn scalar_pass(rows: &[BitVector], m: &BitVector) -> (f64, Vec<usize>) {
    let n = m.len();
    let mut mq = vec![0u8; n];
    unpack(m, &mut mq);
    let mut buf = vec![0u8; n * CHUNK_ROWS.min(rows.len())];
    let mut elapsed = 0.0;
    let mut best = usize::MAX;
    let mut winners = Vec::new();
    for (c, chunk) in rows.chunks(CHUNK_ROWS).enumerate() {
        let buf = &mut buf[..chunk.len() * n];
        buf.par_chunks_mut(n)
            .zip(chunk)
            .for_each(|(dst, row)| unpack(row, dst));
        let start = Instant::now();
        let scores: Vec<usize> = buf
            .par_chunks(n)
            .map(|a| scalar_criterion(&mq, a))
            .collect();
        elapsed += start.elapsed().as_secs_f64();
        for (i, s) in scores.into_iter().enumerate() {
            if s < best {
                best = s;
                winners.clear();
            }
            if s == best {
                winners.push(c * CHUNK_ROWS + i);
            }
        }
    }
    (elapsed, winners)
}

pub fn run_bench(cfg: &BenchConfig) -> Result<BenchResult> {
    if cfg.n == 0 || cfg.rows == 0 || cfg.iters == 0 || cfg.threads == 0 {
        return Err(CliError::Usage(
            "--n, --rows, --iters and --threads must be positive".into(),
        ));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| CliError::Failed(e.to_string()))?;
    pool.install(|| {
        let (rows, m) = bench_data(cfg.n, cfg.rows, cfg.seed);
        let table = AssocTable::from_binary_rows("bench", &rows)?;
        drop(rows);
        let rows = table.binary_rows().expect("binary table");
        let mq = TernaryVector::from_binary(&m);

        let mut vector_seconds = 0.0;
        let mut runs: Vec<Vec<usize>> = Vec::new();
        let mut best_k = 0;
        for _ in 0..cfg.iters {
            let start = Instant::now();
            let result = table.query(&mq)?;
            vector_seconds += start.elapsed().as_secs_f64();
            best_k = result.best.index().expect("binary").k;
            runs.push(result.best_rows.iter().map(|r| r.index).collect());
        }
        let winners = runs[0].clone();
        let deterministic = runs.iter().all(|w| *w == winners);

        let total_rows = (cfg.rows * cfg.iters) as f64;
        let vector_rows_per_sec = total_rows / vector_seconds.max(f64::MIN_POSITIVE);
        let (mut scalar_seconds, mut scalar_rows_per_sec, mut ratio, mut winners_agree) =
            (None, None, None, None);
        if cfg.baseline {
            let mut secs = 0.0;
            let mut agree = true;
            for _ in 0..cfg.iters {
                let (t, w) = scalar_pass(rows, &m);
                secs += t;
                agree &= w == winners;
            }
            let rate = total_rows / secs.max(f64::MIN_POSITIVE);
            scalar_seconds = Some(secs);
            scalar_rows_per_sec = Some(rate);
            ratio = Some(vector_rows_per_sec / rate);
            winners_agree = Some(agree);
        }
        Ok(BenchResult {
            vector_seconds,
            vector_rows_per_sec,
            scalar_seconds,
            scalar_rows_per_sec,
            ratio,
            winners,
            best_k,
            deterministic,
            winners_agree,
        })
    })
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(String::new, |v| v.to_string())
}

pub fn bench(cfg: &BenchConfig, command: &str, style: Style) -> Result<Output> {
    let r = run_bench(cfg)?;
    let key = format!("{} {} {} {}", cfg.n, cfg.rows, cfg.iters, cfg.seed);
    let mut report = RunReport::new(command, inputs_digest([key.as_bytes()]));
    let winners: Vec<String> = r.winners.iter().map(|w| (w + 1).to_string()).collect();
    report.push(
        "bench",
        [
            ("n", cfg.n.to_string()),
            ("rows", cfg.rows.to_string()),
            ("iters", cfg.iters.to_string()),
            ("seed", cfg.seed.to_string()),
            ("threads", cfg.threads.to_string()),
            ("vector_seconds", r.vector_seconds.to_string()),
            ("vector_rows_per_sec", r.vector_rows_per_sec.to_string()),
            ("scalar_seconds", opt(r.scalar_seconds)),
            ("scalar_rows_per_sec", opt(r.scalar_rows_per_sec)),
            ("ratio", opt(r.ratio)),
            ("winners", winners.join(",")),
            ("best_k", r.best_k.to_string()),
            ("deterministic", r.deterministic.to_string()),
            ("winners_agree", opt(r.winners_agree)),
        ],
    );
    let mut text = String::new();
    writeln!(
        text,
        "{}",
        style.bold(&format!(
            "bench n={} rows={} iters={} threads={} seed={}",
            cfg.n, cfg.rows, cfg.iters, cfg.threads, cfg.seed
        ))
    )
    .unwrap();
    writeln!(
        text,
        "vector  {:>10.4} s  {:>14.0} rows/s",
        r.vector_seconds, r.vector_rows_per_sec
    )
    .unwrap();
    if let (Some(s), Some(rate), Some(ratio)) = (r.scalar_seconds, r.scalar_rows_per_sec, r.ratio) {
        writeln!(text, "scalar  {s:>10.4} s  {rate:>14.0} rows/s").unwrap();
        writeln!(text, "ratio   {ratio:.2}x (measured)").unwrap();
    }
    writeln!(
        text,
        "winners row {}  index ({},{})",
        winners.join(","),
        r.best_k,
        cfg.n
    )
    .unwrap();
    let mut failure = None;
    if !r.deterministic {
        failure = Some("winner set changed between iterations".to_string());
    } else if r.winners_agree == Some(false) {
        failure = Some("scalar and vector paths chose different winners".to_string());
    }
    Ok(Output {
        report,
        text,
        failure,
    })
}
