//! Cycle-level simulator of the logic associative multiprocessor: a 4×4
//! torus of sequencers, each with four m-registers, a read-only A-matrix, a
//! row pointer, a flag and its own program.
//!
//! Every executed instruction costs one cycle, including stalls on
//! neighbor exchange. Simulation is single-threaded and deterministic.

pub mod builtin;
pub mod error;
pub mod grid;
pub mod image;
pub mod isa;
pub mod sequencer;

pub use builtin::{builtin_query_program, run_builtin_query, BuiltinResult};
pub use error::{SimError, StepError};
pub use grid::{CellId, Grid, RunOutcome, TraceEvent, CELL_COUNT, GRID_SIDE};
pub use image::{CellCode, Image};
pub use isa::{Addr, BinOp, Dir, Instruction, MReg, Src, UnOp};
pub use sequencer::{Sequencer, StepOutcome};
