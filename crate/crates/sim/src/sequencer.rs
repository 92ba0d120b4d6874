//! One sequencer: four m-registers, a read-only A-matrix slice, a row
//! pointer, a flag and a program.

use lamp_core::BitVector;

use crate::error::{SimError, StepError};
use crate::isa::{BinOp, Instruction, MReg, Src, UnOp};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequencer {
    width: usize,
    regs: [BitVector; 4],
    a_matrix: Vec<BitVector>,
    row_idx: usize,
    flag: bool,
    pc: usize,
    program: Vec<Instruction>,
    halted: bool,
    cycles: u64,
}

/// What one call to [`Sequencer::step`] did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutcome {
    Executed,
    /// Waiting on a neighbor exchange; the cycle is still spent.
    Stalled,
    /// Nothing to do.
    Halted,
}

impl Sequencer {
    /// Idle sequencer with zeroed registers and no program (halted).
    pub fn new(width: usize) -> Self {
        Sequencer {
            width,
            regs: std::array::from_fn(|_| BitVector::zeros(width)),
            a_matrix: Vec::new(),
            row_idx: 0,
            flag: false,
            pc: 0,
            program: Vec::new(),
            halted: true,
            cycles: 0,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Installs a program and resets control state; registers and rows stay.
    pub fn load_program(&mut self, program: Vec<Instruction>) -> Result<(), SimError> {
        for instr in &program {
            if let Instruction::LoadM(_, v) = instr {
                self.check_width(v)?;
            }
            if let Some(t) = instr.jump_target() {
                if t as usize >= program.len() {
                    return Err(SimError::InvalidProgram(format!(
                        "jump target {t} outside program of {} instructions",
                        program.len()
                    )));
                }
            }
        }
        self.halted = program.is_empty();
        self.program = program;
        self.pc = 0;
        self.row_idx = 0;
        self.flag = false;
        self.cycles = 0;
        Ok(())
    }

    pub fn load_rows(&mut self, rows: Vec<BitVector>) -> Result<(), SimError> {
        for r in &rows {
            self.check_width(r)?;
        }
        self.a_matrix = rows;
        self.row_idx = 0;
        Ok(())
    }

    pub fn set_reg(&mut self, reg: MReg, value: BitVector) -> Result<(), SimError> {
        self.check_width(&value)?;
        self.regs[reg.index()] = value;
        Ok(())
    }

    fn check_width(&self, v: &BitVector) -> Result<(), SimError> {
        if v.len() == self.width {
            Ok(())
        } else {
            Err(SimError::WidthMismatch {
                expected: self.width,
                found: v.len(),
            })
        }
    }

    pub fn reg(&self, reg: MReg) -> &BitVector {
        &self.regs[reg.index()]
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.a_matrix
    }

    pub fn row_idx(&self) -> usize {
        self.row_idx
    }

    pub fn flag(&self) -> bool {
        self.flag
    }

    pub fn pc(&self) -> usize {
        self.pc
    }

    pub fn program(&self) -> &[Instruction] {
        &self.program
    }

    pub fn is_halted(&self) -> bool {
        self.halted
    }

    pub fn cycles(&self) -> u64 {
        self.cycles
    }

    /// Instruction at the pc, unless halted.
    pub fn current(&self) -> Option<&Instruction> {
        if self.halted {
            None
        } else {
            self.program.get(self.pc)
        }
    }

    fn read(&self, src: Src) -> Result<&BitVector, StepError> {
        match src {
            Src::Reg(r) => Ok(&self.regs[r.index()]),
            Src::Row => self
                .a_matrix
                .get(self.row_idx)
                .ok_or(StepError::InvalidRowIndex {
                    row: self.row_idx,
                    rows: self.a_matrix.len(),
                }),
        }
    }

    /// Executes one instruction in one cycle. Exchange instructions cannot
    /// complete without a partner, so a lone step on them is a stall.
    pub fn step(&mut self) -> Result<StepOutcome, StepError> {
        if self.halted {
            return Ok(StepOutcome::Halted);
        }
        let instr = self
            .program
            .get(self.pc)
            .ok_or(StepError::PcOutOfRange {
                pc: self.pc,
                len: self.program.len(),
            })?
            .clone();
        let mut next = self.pc + 1;
        match instr {
            Instruction::Logic { op, a, b, un, dst } => {
                let x = self.read(a)?;
                let y = match op {
                    BinOp::Pass => x.clone(),
                    // Widths are uniform, so the binary ops cannot mismatch.
                    BinOp::And => x.and(self.read(b)?).expect("uniform width"),
                    BinOp::Or => x.or(self.read(b)?).expect("uniform width"),
                    BinOp::Xor => x.xor(self.read(b)?).expect("uniform width"),
                };
                self.regs[dst.index()] = match un {
                    UnOp::Not => y.not(),
                    UnOp::Slc => y.sls(),
                    UnOp::Nopu => y,
                };
            }
            Instruction::Orf(src) => self.flag = self.read(src)?.orf(),
            Instruction::Jmp(t) => next = t as usize,
            Instruction::Jf(t) => {
                if self.flag {
                    next = t as usize
                }
            }
            Instruction::Jnf(t) => {
                if !self.flag {
                    next = t as usize
                }
            }
            Instruction::SetRow(r) => {
                let r = r as usize;
                if r > self.a_matrix.len() {
                    return Err(StepError::InvalidRowIndex {
                        row: r,
                        rows: self.a_matrix.len(),
                    });
                }
                self.row_idx = r;
            }
            Instruction::IncRow => {
                if self.row_idx >= self.a_matrix.len() {
                    return Err(StepError::InvalidRowIndex {
                        row: self.row_idx + 1,
                        rows: self.a_matrix.len(),
                    });
                }
                self.row_idx += 1;
            }
            Instruction::Jrlt(t) => {
                if self.row_idx < self.a_matrix.len() {
                    next = t as usize
                }
            }
            Instruction::LoadM(r, v) => self.regs[r.index()] = v,
            Instruction::Send(..) | Instruction::Recv(..) => {
                self.cycles += 1;
                return Ok(StepOutcome::Stalled);
            }
            Instruction::Halt => self.halted = true,
        }
        self.pc = next;
        self.cycles += 1;
        Ok(StepOutcome::Executed)
    }

    /// Completes the pending exchange instruction, optionally storing the
    /// received value.
    pub(crate) fn complete_exchange(&mut self, received: Option<(MReg, BitVector)>) {
        if let Some((reg, v)) = received {
            self.regs[reg.index()] = v;
        }
        self.pc += 1;
        self.cycles += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isa::Dir;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    fn seq_with(program: Vec<Instruction>, width: usize) -> Sequencer {
        let mut s = Sequencer::new(width);
        s.load_program(program).unwrap();
        s
    }

    #[test]
    fn xor_with_row() {
        let mut s = seq_with(
            vec![Instruction::Logic {
                op: BinOp::Xor,
                a: Src::Reg(MReg::Ma),
                b: Src::Row,
                un: UnOp::Nopu,
                dst: MReg::Mb,
            }],
            12,
        );
        s.set_reg(MReg::Ma, bv("110011001100")).unwrap();
        s.load_rows(vec![bv("000011110101")]).unwrap();
        assert_eq!(s.step(), Ok(StepOutcome::Executed));
        assert_eq!(s.reg(MReg::Mb), &bv("110000111001"));
        assert_eq!(s.reg(MReg::Mb).count_ones(), 6);
        assert_eq!(s.cycles(), 1);
    }

    #[test]
    fn pass_slc_compacts_in_one_cycle() {
        let mut s = seq_with(
            vec![Instruction::Logic {
                op: BinOp::Pass,
                a: Src::Reg(MReg::Ma),
                b: Src::Row,
                un: UnOp::Slc,
                dst: MReg::Ma,
            }],
            8,
        );
        s.set_reg(MReg::Ma, bv("01001001")).unwrap();
        // PASS never reads the second source, so the empty A-matrix is fine.
        s.step().unwrap();
        assert_eq!(s.reg(MReg::Ma), &bv("11100000"));
        assert_eq!(s.cycles(), 1);
    }

    #[test]
    fn orf_sets_flag() {
        let mut s = seq_with(
            vec![Instruction::Orf(Src::Reg(MReg::Ma)), Instruction::Halt],
            4,
        );
        s.step().unwrap();
        assert!(!s.flag());
        s.step().unwrap();
        assert!(s.is_halted());
        assert_eq!(s.step(), Ok(StepOutcome::Halted));
        assert_eq!(s.cycles(), 2);
    }

    #[test]
    fn row_errors() {
        let logic_row = Instruction::Logic {
            op: BinOp::And,
            a: Src::Row,
            b: Src::Row,
            un: UnOp::Nopu,
            dst: MReg::Ma,
        };
        let mut s = seq_with(vec![logic_row], 2);
        assert_eq!(
            s.step(),
            Err(StepError::InvalidRowIndex { row: 0, rows: 0 })
        );

        let mut s = seq_with(vec![Instruction::IncRow, Instruction::IncRow], 2);
        s.load_rows(vec![bv("01")]).unwrap();
        s.step().unwrap();
        assert_eq!(s.row_idx(), 1);
        assert!(s.step().is_err());

        let mut s = seq_with(vec![Instruction::SetRow(3)], 2);
        assert!(s.step().is_err());
    }

    #[test]
    fn falling_off_the_end() {
        let mut s = seq_with(vec![Instruction::IncRow], 2);
        s.load_rows(vec![bv("01")]).unwrap();
        s.step().unwrap();
        assert_eq!(s.step(), Err(StepError::PcOutOfRange { pc: 1, len: 1 }));
    }

    #[test]
    fn control_flow() {
        let prog = vec![
            Instruction::LoadM(MReg::Ma, bv("0010")),
            Instruction::Orf(Src::Reg(MReg::Ma)),
            Instruction::Jnf(4),
            Instruction::Jf(5),
            Instruction::Halt,
            Instruction::Jrlt(4),
        ];
        let mut s = seq_with(prog, 4);
        s.load_rows(vec![bv("0000")]).unwrap();
        while !s.is_halted() {
            s.step().unwrap();
        }
        // LOADM, ORF, JNF (not taken), JF (taken), JRLT (taken), HALT
        assert_eq!(s.cycles(), 6);
        assert!(s.flag());
    }

    #[test]
    fn lone_exchange_stalls() {
        let mut s = seq_with(vec![Instruction::Send(Dir::E, MReg::Ma)], 4);
        assert_eq!(s.step(), Ok(StepOutcome::Stalled));
        assert_eq!((s.pc(), s.cycles()), (0, 1));
    }

    #[test]
    fn load_checks() {
        let mut s = Sequencer::new(4);
        assert!(matches!(
            s.set_reg(MReg::Ma, bv("101")),
            Err(SimError::WidthMismatch {
                expected: 4,
                found: 3
            })
        ));
        assert!(s.load_rows(vec![bv("1010"), bv("10")]).is_err());
        assert!(s
            .load_program(vec![Instruction::LoadM(MReg::Mb, bv("1"))])
            .is_err());
        assert!(s.load_program(vec![Instruction::Jmp(1)]).is_err());
        s.load_program(vec![]).unwrap();
        assert!(s.is_halted());
    }
}
