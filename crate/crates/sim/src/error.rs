use thiserror::Error;

use crate::grid::CellId;

/// Fault raised by a single sequencer while executing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("row index {row} outside A-matrix of {rows} rows")]
    InvalidRowIndex { row: usize, rows: usize },

    #[error("pc {pc} outside program of {len} instructions")]
    PcOutOfRange { pc: usize, len: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("cell {cell}: {source}")]
    Cell {
        cell: CellId,
        #[source]
        source: StepError,
    },

    #[error("deadlock: cells {} stalled on exchange", format_cells(.cells))]
    Deadlock { cells: Vec<CellId> },

    #[error("width mismatch: grid is {expected} wide, got {found}")]
    WidthMismatch { expected: usize, found: usize },

    #[error("malformed program binary: {0}")]
    MalformedBinary(String),

    #[error("invalid program: {0}")]
    InvalidProgram(String),
}

fn format_cells(cells: &[CellId]) -> String {
    cells
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}
