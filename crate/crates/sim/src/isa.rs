//! Instruction set of a sequencer.
//!
//! The datapath is two-stage: a binary operator (`AND`, `OR`, `XOR`, or
//! `PASS` to forward the first operand) over two of the five sources
//! (`MA`..`MD`, `ROW`), followed by a unary operator (`NOT`, `SLC`, or `NOPU`
//! for none). The result lands in one of the four m-registers. Everything else
//! is control flow, the row pointer, immediates and neighbor exchange.

use std::fmt;

use lamp_core::BitVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    And,
    Or,
    Xor,
    /// Forwards the first operand; the second is ignored.
    Pass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnOp {
    Not,
    /// Shift-left crowding (compaction of ones).
    Slc,
    Nopu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MReg {
    Ma,
    Mb,
    Mc,
    Md,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Src {
    Reg(MReg),
    /// The A-matrix row under the row pointer.
    Row,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dir {
    N,
    NE,
    E,
    SE,
    S,
    SW,
    W,
    NW,
}

/// Jump target: an instruction address within the cell's program.
pub type Addr = u32;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Instruction {
    Logic {
        op: BinOp,
        a: Src,
        b: Src,
        un: UnOp,
        dst: MReg,
    },
    /// `flag = orf(src)`
    Orf(Src),
    Jmp(Addr),
    /// Jump if flag is 1.
    Jf(Addr),
    /// Jump if flag is 0.
    Jnf(Addr),
    SetRow(u32),
    IncRow,
    /// Jump if the row pointer is below the row count.
    Jrlt(Addr),
    LoadM(MReg, BitVector),
    Send(Dir, MReg),
    Recv(Dir, MReg),
    Halt,
}

impl BinOp {
    pub const ALL: [BinOp; 4] = [BinOp::And, BinOp::Or, BinOp::Xor, BinOp::Pass];

    pub fn name(self) -> &'static str {
        match self {
            BinOp::And => "AND",
            BinOp::Or => "OR",
            BinOp::Xor => "XOR",
            BinOp::Pass => "PASS",
        }
    }
}

impl UnOp {
    pub const ALL: [UnOp; 3] = [UnOp::Not, UnOp::Slc, UnOp::Nopu];

    pub fn name(self) -> &'static str {
        match self {
            UnOp::Not => "NOT",
            UnOp::Slc => "SLC",
            UnOp::Nopu => "NOPU",
        }
    }
}

impl MReg {
    pub const ALL: [MReg; 4] = [MReg::Ma, MReg::Mb, MReg::Mc, MReg::Md];

    pub fn name(self) -> &'static str {
        match self {
            MReg::Ma => "MA",
            MReg::Mb => "MB",
            MReg::Mc => "MC",
            MReg::Md => "MD",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl Src {
    pub const ALL: [Src; 5] = [
        Src::Reg(MReg::Ma),
        Src::Reg(MReg::Mb),
        Src::Reg(MReg::Mc),
        Src::Reg(MReg::Md),
        Src::Row,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Src::Reg(r) => r.name(),
            Src::Row => "ROW",
        }
    }
}

impl Dir {
    pub const ALL: [Dir; 8] = [
        Dir::N,
        Dir::NE,
        Dir::E,
        Dir::SE,
        Dir::S,
        Dir::SW,
        Dir::W,
        Dir::NW,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Dir::N => "N",
            Dir::NE => "NE",
            Dir::E => "E",
            Dir::SE => "SE",
            Dir::S => "S",
            Dir::SW => "SW",
            Dir::W => "W",
            Dir::NW => "NW",
        }
    }

    /// `(row, col)` offset; north is row - 1.
    pub fn offset(self) -> (i8, i8) {
        match self {
            Dir::N => (-1, 0),
            Dir::NE => (-1, 1),
            Dir::E => (0, 1),
            Dir::SE => (1, 1),
            Dir::S => (1, 0),
            Dir::SW => (1, -1),
            Dir::W => (0, -1),
            Dir::NW => (-1, -1),
        }
    }

    pub fn opposite(self) -> Dir {
        Dir::ALL[(self as usize + 4) % 8]
    }
}

impl Instruction {
    pub fn mnemonic(&self) -> &'static str {
        match self {
            Instruction::Logic { .. } => "LOGIC",
            Instruction::Orf(_) => "ORF",
            Instruction::Jmp(_) => "JMP",
            Instruction::Jf(_) => "JF",
            Instruction::Jnf(_) => "JNF",
            Instruction::SetRow(_) => "SETROW",
            Instruction::IncRow => "INCROW",
            Instruction::Jrlt(_) => "JRLT",
            Instruction::LoadM(..) => "LOADM",
            Instruction::Send(..) => "SEND",
            Instruction::Recv(..) => "RECV",
            Instruction::Halt => "HALT",
        }
    }

    pub fn jump_target(&self) -> Option<Addr> {
        match *self {
            Instruction::Jmp(t)
            | Instruction::Jf(t)
            | Instruction::Jnf(t)
            | Instruction::Jrlt(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_exchange(&self) -> bool {
        matches!(self, Instruction::Send(..) | Instruction::Recv(..))
    }
}

/// Assembly text, with jump targets shown as `@addr`.
impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.mnemonic();
        match self {
            Instruction::Logic { op, a, b, un, dst } => write!(
                f,
                "{m} {} {}, {}, {}, {}",
                op.name(),
                a.name(),
                b.name(),
                un.name(),
                dst.name()
            ),
            Instruction::Orf(s) => write!(f, "{m} {}", s.name()),
            Instruction::Jmp(t)
            | Instruction::Jf(t)
            | Instruction::Jnf(t)
            | Instruction::Jrlt(t) => {
                write!(f, "{m} @{t}")
            }
            Instruction::SetRow(r) => write!(f, "{m} {r}"),
            Instruction::LoadM(r, v) => write!(f, "{m} {}, {v}", r.name()),
            Instruction::Send(d, r) | Instruction::Recv(d, r) => {
                write!(f, "{m} {}, {}", d.name(), r.name())
            }
            Instruction::IncRow | Instruction::Halt => f.write_str(m),
        }
    }
}
