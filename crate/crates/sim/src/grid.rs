//! The 4×4 sequencer grid.
//!
//! Cells sit on a torus: every cell has eight distinct neighbors (Moore
//! neighborhood with wraparound). Each global cycle visits the cells in
//! row-major order and advances every running cell by one instruction.
//! `SEND d, r` on one cell and `RECV opposite(d), r'` on the neighbor in
//! direction `d` complete together in the cycle both are pending; an exchange
//! without a ready partner stalls. A cycle in which every running cell is
//! stalled is a deadlock.

use std::fmt;

use lamp_core::BitVector;

use crate::error::SimError;
use crate::image::Image;
use crate::isa::{Dir, Instruction, MReg};
use crate::sequencer::Sequencer;

pub const GRID_SIDE: usize = 4;
pub const CELL_COUNT: usize = GRID_SIDE * GRID_SIDE;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellId {
    pub row: u8,
    pub col: u8,
}

impl CellId {
    pub fn new(row: usize, col: usize) -> Option<Self> {
        (row < GRID_SIDE && col < GRID_SIDE).then_some(CellId {
            row: row as u8,
            col: col as u8,
        })
    }

    pub fn all() -> impl Iterator<Item = CellId> {
        (0..CELL_COUNT).map(Self::from_index)
    }

    /// Row-major position.
    pub fn index(self) -> usize {
        self.row as usize * GRID_SIDE + self.col as usize
    }

    pub fn from_index(i: usize) -> Self {
        assert!(i < CELL_COUNT);
        CellId {
            row: (i / GRID_SIDE) as u8,
            col: (i % GRID_SIDE) as u8,
        }
    }

    pub fn neighbor(self, dir: Dir) -> CellId {
        let (dr, dc) = dir.offset();
        let side = GRID_SIDE as i8;
        CellId {
            row: (self.row as i8 + dr).rem_euclid(side) as u8,
            col: (self.col as i8 + dc).rem_euclid(side) as u8,
        }
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.row, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunOutcome {
    AllHalted,
    CycleBudgetExhausted,
    Deadlock(Vec<CellId>),
}

/// One line of execution trace: `cycle cell pc mnemonic`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEvent {
    pub cycle: u64,
    pub cell: CellId,
    pub pc: usize,
    pub mnemonic: &'static str,
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {}",
            self.cycle, self.cell, self.pc, self.mnemonic
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    width: usize,
    cells: Vec<Sequencer>,
    global_cycle: u64,
    trace: Option<Vec<TraceEvent>>,
}

impl Grid {
    pub fn new(width: usize) -> Self {
        Grid {
            width,
            cells: (0..CELL_COUNT).map(|_| Sequencer::new(width)).collect(),
            global_cycle: 0,
            trace: None,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn global_cycle(&self) -> u64 {
        self.global_cycle
    }

    pub fn cell(&self, id: CellId) -> &Sequencer {
        &self.cells[id.index()]
    }

    pub fn cell_mut(&mut self, id: CellId) -> &mut Sequencer {
        &mut self.cells[id.index()]
    }

    pub fn cells(&self) -> impl Iterator<Item = (CellId, &Sequencer)> {
        self.cells
            .iter()
            .enumerate()
            .map(|(i, s)| (CellId::from_index(i), s))
    }

    pub fn enable_trace(&mut self) {
        self.trace.get_or_insert_with(Vec::new);
    }

    pub fn trace(&self) -> &[TraceEvent] {
        self.trace.as_deref().unwrap_or(&[])
    }

    /// Loads every cell program of an image. An image width of 0 means
    /// "unspecified" and fits any grid.
    pub fn load_image(&mut self, image: &Image) -> Result<(), SimError> {
        if image.width != 0 && image.width != self.width {
            return Err(SimError::WidthMismatch {
                expected: self.width,
                found: image.width,
            });
        }
        for cell in &image.cells {
            self.cell_mut(cell.cell).load_program(cell.code.clone())?;
        }
        Ok(())
    }

    pub fn load_rows(&mut self, id: CellId, rows: Vec<BitVector>) -> Result<(), SimError> {
        self.cell_mut(id).load_rows(rows)
    }

    pub fn all_halted(&self) -> bool {
        self.cells.iter().all(Sequencer::is_halted)
    }

    /// The exchange partner of `id` this cycle, if its pending exchange matches.
    fn partner(&self, id: CellId) -> Option<CellId> {
        let (dir, sending) = match self.cell(id).current()? {
            Instruction::Send(d, _) => (*d, true),
            Instruction::Recv(d, _) => (*d, false),
            _ => return None,
        };
        let other = id.neighbor(dir);
        let matched = match self.cell(other).current()? {
            Instruction::Send(d, _) => !sending && *d == dir.opposite(),
            Instruction::Recv(d, _) => sending && *d == dir.opposite(),
            _ => false,
        };
        matched.then_some(other)
    }

    /// Advances every running cell by one cycle.
    pub fn step(&mut self) -> Result<(), SimError> {
        if self.all_halted() {
            return Ok(());
        }
        let partners: Vec<Option<CellId>> = CellId::all().map(|id| self.partner(id)).collect();
        let running: Vec<CellId> = CellId::all()
            .filter(|&id| !self.cell(id).is_halted())
            .collect();
        let blocked = |id: &CellId| {
            self.cell(*id)
                .current()
                .is_some_and(Instruction::is_exchange)
                && partners[id.index()].is_none()
        };
        if running.iter().all(blocked) {
            return Err(SimError::Deadlock { cells: running });
        }

        if let Some(trace) = &mut self.trace {
            for &id in &running {
                let cell = &self.cells[id.index()];
                trace.push(TraceEvent {
                    cycle: self.global_cycle,
                    cell: id,
                    pc: cell.pc(),
                    mnemonic: cell
                        .program()
                        .get(cell.pc())
                        .map_or("?", Instruction::mnemonic),
                });
            }
        }
        let mut done = [false; CELL_COUNT];
        for id in running {
            if done[id.index()] {
                continue;
            }
            match partners[id.index()] {
                Some(other) => {
                    self.exchange(id, other);
                    done[other.index()] = true;
                }
                None => {
                    if let Err(source) = self.cell_mut(id).step() {
                        return Err(SimError::Cell { cell: id, source });
                    }
                }
            }
            done[id.index()] = true;
        }
        self.global_cycle += 1;
        Ok(())
    }

    fn exchange(&mut self, a: CellId, b: CellId) {
        let (sender, receiver) = match self.cell(a).current() {
            Some(Instruction::Send(..)) => (a, b),
            _ => (b, a),
        };
        let value = match self.cell(sender).current() {
            Some(Instruction::Send(_, r)) => self.cell(sender).reg(*r).clone(),
            _ => unreachable!("partner() paired a non-sender"),
        };
        let dst: MReg = match self.cell(receiver).current() {
            Some(Instruction::Recv(_, r)) => *r,
            _ => unreachable!("partner() paired a non-receiver"),
        };
        self.cell_mut(sender).complete_exchange(None);
        self.cell_mut(receiver)
            .complete_exchange(Some((dst, value)));
    }

    /// Steps until every cell halts, the cycle budget runs out, or the grid
    /// deadlocks.
    pub fn run(&mut self, max_cycles: u64) -> Result<RunOutcome, SimError> {
        loop {
            if self.all_halted() {
                return Ok(RunOutcome::AllHalted);
            }
            if self.global_cycle >= max_cycles {
                return Ok(RunOutcome::CycleBudgetExhausted);
            }
            match self.step() {
                Ok(()) => {}
                Err(SimError::Deadlock { cells }) => return Ok(RunOutcome::Deadlock(cells)),
                Err(e) => return Err(e),
            }
        }
    }
}
