//! `lamp run`: execute a program image on the simulated grid.

use std::fmt::Write;
use std::path::{Path, PathBuf};

use lamp_asm::assemble;
use lamp_core::BitVector;
use lamp_sim::{builtin_query_program, CellCode, CellId, Grid, Image, MReg, RunOutcome};

use super::table::load_table;
use super::{read_file, Output};
use crate::error::{CliError, Result};
use crate::report::{inputs_digest, RunReport};
use crate::style::Style;

/// Which cells a `--table` or `--load` applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    All,
    Cell(CellId),
}

impl Target {
    fn cells(self) -> Vec<CellId> {
        match self {
            Target::All => CellId::all().collect(),
            Target::Cell(c) => vec![c],
        }
    }

    fn covers(self, cell: CellId) -> bool {
        self == Target::All || self == Target::Cell(cell)
    }
}

fn parse_cell(s: &str) -> Option<CellId> {
    let (r, c) = s.split_once(',')?;
    CellId::new(r.trim().parse().ok()?, c.trim().parse().ok()?)
}

/// `[R,C=]FILE`
pub fn parse_table_spec(s: &str) -> Result<(Target, PathBuf)> {
    if let Some((head, file)) = s.split_once('=') {
        if head.contains(',') {
            let cell = parse_cell(head)
                .ok_or_else(|| CliError::Usage(format!("--table {s:?}: bad cell {head:?}")))?;
            return Ok((Target::Cell(cell), PathBuf::from(file)));
        }
    }
    Ok((Target::All, PathBuf::from(s)))
}

/// `[R,C:]REG=BITS`
pub fn parse_load_spec(s: &str) -> Result<(Target, MReg, BitVector)> {
    let bad = |why: &str| CliError::Usage(format!("--load {s:?}: {why}"));
    let (target, rest) = match s.split_once(':') {
        Some((cell, rest)) => (
            Target::Cell(parse_cell(cell).ok_or_else(|| bad("bad cell"))?),
            rest,
        ),
        None => (Target::All, s),
    };
    let (reg, bits) = rest
        .split_once('=')
        .ok_or_else(|| bad("expected REG=BITS"))?;
    let reg = MReg::ALL
        .into_iter()
        .find(|r| r.name().eq_ignore_ascii_case(reg.trim()))
        .ok_or_else(|| bad("unknown register"))?;
    let bits = bits.trim().parse().map_err(|e| bad(&format!("{e}")))?;
    Ok((target, reg, bits))
}

#[derive(Debug, Clone)]
pub struct RunArgs {
    pub program: Option<PathBuf>,
    pub builtin_query: bool,
    pub tables: Vec<String>,
    pub loads: Vec<String>,
    pub max_cycles: u64,
    pub trace: bool,
}

fn load_program(path: &Path) -> Result<(Image, Vec<u8>)> {
    let bytes = read_file(path)?;
    let image = if bytes.starts_with(lamp_sim::image::MAGIC) {
        Image::from_bytes(&bytes).map_err(|e| CliError::input(path, e))?
    } else {
        let text = std::str::from_utf8(&bytes)
            .map_err(|_| CliError::input(path, "neither a program binary nor UTF-8 source"))?;
        assemble(text).map_err(|source| CliError::Asm {
            path: path.to_path_buf(),
            source,
        })?
    };
    Ok((image, bytes))
}

pub fn run(args: &RunArgs, command: &str, style: Style) -> Result<Output> {
    let mut digest_parts: Vec<Vec<u8>> = Vec::new();

    let mut tables = Vec::new();
    for spec in &args.tables {
        let (target, path) = parse_table_spec(spec)?;
        let (table, text) = load_table(&path)?;
        let rows = table
            .binary_rows()
            .ok_or_else(|| CliError::input(&path, "the simulator needs a binary table"))?
            .to_vec();
        digest_parts.push(text.into_bytes());
        tables.push((target, rows));
    }
    let loads = args
        .loads
        .iter()
        .map(|s| parse_load_spec(s))
        .collect::<Result<Vec<_>>>()?;
    digest_parts.extend(args.loads.iter().map(|s| s.clone().into_bytes()));

    let image = match (&args.program, args.builtin_query) {
        (Some(path), false) => {
            let (image, bytes) = load_program(path)?;
            digest_parts.insert(0, bytes);
            image
        }
        (None, true) => {
            let origin = CellId::new(0, 0).expect("origin");
            let rows = tables
                .iter()
                .rev()
                .find(|(t, _)| t.covers(origin))
                .map(|(_, rows)| rows.len())
                .ok_or_else(|| {
                    CliError::Usage("--builtin-query needs a --table for cell 0,0".into())
                })?;
            Image {
                width: 0,
                cells: vec![CellCode {
                    cell: origin,
                    code: builtin_query_program(rows),
                }],
            }
        }
        _ => {
            return Err(CliError::Usage(
                "give exactly one of PROGRAM or --builtin-query".into(),
            ))
        }
    };

    let width = if image.width > 0 {
        image.width
    } else if let Some((_, rows)) = tables.iter().find(|(_, rows)| !rows.is_empty()) {
        rows[0].len()
    } else if let Some((_, _, bits)) = loads.first() {
        bits.len()
    } else {
        1
    };

    let mut grid = Grid::new(width);
    grid.load_image(&image)?;
    for (target, rows) in &tables {
        for cell in target.cells() {
            grid.load_rows(cell, rows.clone())?;
        }
    }
    for (target, reg, bits) in &loads {
        for cell in target.cells() {
            grid.cell_mut(cell).set_reg(*reg, bits.clone())?;
        }
    }
    if args.trace {
        grid.enable_trace();
    }
    let outcome = grid.run(args.max_cycles)?;

    let mut report = RunReport::new(
        command,
        inputs_digest(digest_parts.iter().map(Vec::as_slice)),
    );
    let mut text = String::new();
    for ev in grid.trace() {
        writeln!(text, "trace {ev}").unwrap();
        report.push(
            "trace",
            [
                ("cycle", ev.cycle.to_string()),
                ("cell", ev.cell.to_string()),
                ("pc", ev.pc.to_string()),
                ("mnemonic", ev.mnemonic.to_string()),
            ],
        );
    }
    let cycles = grid.global_cycle();
    let (status, failure) = match &outcome {
        RunOutcome::AllHalted => ("halted", None),
        RunOutcome::CycleBudgetExhausted => (
            "budget",
            Some(format!("cycle budget of {} exhausted", args.max_cycles)),
        ),
        RunOutcome::Deadlock(cells) => {
            let list: Vec<String> = cells.iter().map(ToString::to_string).collect();
            (
                "deadlock",
                Some(format!(
                    "deadlock: cells {} stalled on exchange",
                    list.join(" ")
                )),
            )
        }
    };
    let stalled = match &outcome {
        RunOutcome::Deadlock(cells) => cells
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" "),
        _ => String::new(),
    };
    report.push(
        "outcome",
        [
            ("status", status.to_string()),
            ("cycles", cycles.to_string()),
            ("width", width.to_string()),
            ("deadlocked", stalled),
        ],
    );
    let headline = format!("outcome {status} after {cycles} cycles");
    let headline = if failure.is_none() {
        style.good(&headline)
    } else {
        style.bad(&headline)
    };
    writeln!(text, "{headline}").unwrap();

    for (id, seq) in grid.cells() {
        if seq.program().is_empty() {
            continue;
        }
        writeln!(
            text,
            "{}  pc {}  row {}  flag {}  cycles {}{}",
            style.bold(&format!("cell {id}")),
            seq.pc(),
            seq.row_idx(),
            u8::from(seq.flag()),
            seq.cycles(),
            if seq.is_halted() { "  halted" } else { "" }
        )
        .unwrap();
        let mut fields = vec![
            ("cell", id.to_string()),
            ("pc", seq.pc().to_string()),
            ("row", seq.row_idx().to_string()),
            ("flag", u8::from(seq.flag()).to_string()),
            ("cycles", seq.cycles().to_string()),
            ("halted", seq.is_halted().to_string()),
        ];
        for reg in MReg::ALL {
            let v = seq.reg(reg).to_string();
            writeln!(text, "  {} {v}", reg.name()).unwrap();
            fields.push((reg_key(reg), v));
        }
        report.push("cell", fields);
    }
    Ok(Output {
        report,
        text,
        failure,
    })
}

fn reg_key(reg: MReg) -> &'static str {
    match reg {
        MReg::Ma => "ma",
        MReg::Mb => "mb",
        MReg::Mc => "mc",
        MReg::Md => "md",
    }
}
