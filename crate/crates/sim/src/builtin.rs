//! The canonical associative query program.
//!
//! Register use on the sequencer:
//!
//! * `MA` holds the query `m` (loaded before the run, never written).
//! * `MB`, `MC` are scratch while a row's criterion is computed.
//! * `MD` ends up holding the best compacted criterion vector.
//! * `MC` ends up holding a copy of the winning row, and the row pointer is
//!   left on it, so `row_idx` at halt is the winner's index.
//!
//! The program makes two passes over the A-matrix. The first computes every
//! row's criterion vector (`xor`, `and`, `not`, `or`, then `SLC`) and folds it
//! into `MD` with the and/xor/orf comparison, keeping the earlier row on ties.
//! The second pass stops at the first row whose compacted criterion equals
//! `MD`, which is the first minimal row.

use lamp_core::BitVector;

use crate::error::SimError;
use crate::grid::{CellId, Grid, RunOutcome};
use crate::image::{CellCode, Image};
use crate::isa::{BinOp, Instruction, MReg, Src, UnOp};

const MA: Src = Src::Reg(MReg::Ma);
const MB: Src = Src::Reg(MReg::Mb);
const MC: Src = Src::Reg(MReg::Mc);
const MD: Src = Src::Reg(MReg::Md);

fn logic(op: BinOp, a: Src, b: Src, un: UnOp, dst: MReg) -> Instruction {
    Instruction::Logic { op, a, b, un, dst }
}

/// Emits the criterion of `MA` against the current row, compacted, into `MB`.
fn criterion_into_mb(code: &mut Vec<Instruction>) {
    use BinOp::*;
    use UnOp::*;
    code.extend([
        // ¬(m ∧ A)
        logic(And, MA, Src::Row, Not, MReg::Mb),
        // A ∧ ¬(m ∧ A)
        logic(And, Src::Row, MB, Nopu, MReg::Mc),
        // m ∧ ¬(m ∧ A)
        logic(And, MA, MB, Nopu, MReg::Mb),
        logic(Or, MB, MC, Nopu, MReg::Mb),
        // m ⊕ A
        logic(Xor, MA, Src::Row, Nopu, MReg::Mc),
        logic(Or, MB, MC, Slc, MReg::Mb),
    ]);
}

/// Program for one sequencer whose A-matrix holds at least one row. With
/// `rows == 1` the scan loop is omitted.
pub fn builtin_query_program(rows: usize) -> Vec<Instruction> {
    assert!(rows >= 1, "query program needs at least one row");
    use BinOp::*;
    use UnOp::*;
    let mut code = vec![Instruction::SetRow(0)];
    criterion_into_mb(&mut code);
    code.push(logic(Pass, MB, MB, Nopu, MReg::Md));
    if rows == 1 {
        code.push(logic(Pass, Src::Row, Src::Row, Nopu, MReg::Mc));
        code.push(Instruction::Halt);
        return code;
    }

    code.push(Instruction::IncRow);
    // next: more rows? then evaluate, else go find the winner.
    let next = code.len() as u32;
    code.push(Instruction::Jrlt(next + 2));
    let jmp_find = code.len();
    code.push(Instruction::Jmp(0));
    criterion_into_mb(&mut code);
    code.extend([
        // flag = orf((MD ∧ MB) ⊕ MD): set when the new row is strictly better.
        logic(And, MD, MB, Nopu, MReg::Mc),
        logic(Xor, MC, MD, Nopu, MReg::Mc),
        Instruction::Orf(MC),
    ]);
    let skip = code.len() as u32 + 2;
    code.push(Instruction::Jnf(skip));
    code.push(logic(Pass, MB, MB, Nopu, MReg::Md));
    code.push(Instruction::IncRow);
    code.push(Instruction::Jmp(next));

    let find = code.len() as u32;
    code[jmp_find] = Instruction::Jmp(find);
    code.push(Instruction::SetRow(0));
    let scan = code.len() as u32;
    criterion_into_mb(&mut code);
    code.extend([logic(Xor, MB, MD, Nopu, MReg::Mc), Instruction::Orf(MC)]);
    let hit = code.len() as u32 + 3;
    code.push(Instruction::Jnf(hit));
    code.push(Instruction::IncRow);
    code.push(Instruction::Jmp(scan));
    code.push(logic(Pass, Src::Row, Src::Row, Nopu, MReg::Mc));
    code.push(Instruction::Halt);
    code
}

/// Final state of a builtin query run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuiltinResult {
    pub outcome: RunOutcome,
    /// Row index the program stopped on.
    pub winner: usize,
    /// Best compacted criterion vector (`MD`).
    pub best: BitVector,
    /// Copy of the winning row (`MC`).
    pub winner_row: BitVector,
    pub cycles: u64,
    pub grid: Grid,
}

/// Runs [`builtin_query_program`] on cell (0,0) with `rows` as its A-matrix.
pub fn run_builtin_query(
    rows: &[BitVector],
    m: &BitVector,
    max_cycles: u64,
) -> Result<BuiltinResult, SimError> {
    let cell = CellId::new(0, 0).expect("origin cell");
    let mut grid = Grid::new(m.len());
    let image = Image {
        width: m.len(),
        cells: vec![CellCode {
            cell,
            code: builtin_query_program(rows.len().max(1)),
        }],
    };
    grid.load_image(&image)?;
    grid.load_rows(cell, rows.to_vec())?;
    grid.cell_mut(cell).set_reg(MReg::Ma, m.clone())?;
    let outcome = grid.run(max_cycles)?;
    let seq = grid.cell(cell);
    Ok(BuiltinResult {
        outcome,
        winner: seq.row_idx(),
        best: seq.reg(MReg::Md).clone(),
        winner_row: seq.reg(MReg::Mc).clone(),
        cycles: grid.global_cycle(),
        grid,
    })
}
