//! Program images and their binary encoding.
//!
//! ```text
//! header   "LAMP1"             5 bytes, magic and format version
//!          width               u32 LE (0 = not fixed by the program)
//!          cell_count          u8, at most 16
//!          cell_count times:   row u8, col u8, instruction count u32 LE
//! code     for each cell in header order, its instructions
//! ```
//!
//! Every instruction is one 8-byte word `[op, f1, f2, f3, f4, f5, f6, f7]`;
//! fields not listed are zero and must be zero when decoding.
//!
//! | op   | mnemonic | fields                                                   |
//! |------|----------|----------------------------------------------------------|
//! | 0x01 | LOGIC    | f1 binop, f2 src a, f3 src b, f4 unop, f5 dst            |
//! | 0x02 | ORF      | f1 src                                                   |
//! | 0x03 | JMP      | f4..f7 target u32 LE                                     |
//! | 0x04 | JF       | f4..f7 target                                            |
//! | 0x05 | JNF      | f4..f7 target                                            |
//! | 0x06 | SETROW   | f4..f7 row u32 LE                                        |
//! | 0x07 | INCROW   |                                                          |
//! | 0x08 | JRLT     | f4..f7 target                                            |
//! | 0x09 | LOADM    | f1 reg; then `ceil(width/8)` literal bytes               |
//! | 0x0A | SEND     | f1 dir, f2 reg                                           |
//! | 0x0B | RECV     | f1 dir, f2 reg                                           |
//! | 0x0C | HALT     |                                                          |
//!
//! Codes: binop AND=0 OR=1 XOR=2 PASS=3; unop NOT=0 SLC=1 NOPU=2; registers
//! MA=0 MB=1 MC=2 MD=3; sources are the registers plus ROW=4; directions
//! N=0 NE=1 E=2 SE=3 S=4 SW=5 W=6 NW=7. LOADM literals store coordinate 1 in
//! the most significant bit of the first byte; trailing pad bits are zero.

use std::collections::HashSet;

use lamp_core::BitVector;

use crate::error::SimError;
use crate::grid::{CellId, CELL_COUNT};
use crate::isa::{BinOp, Dir, Instruction, MReg, Src, UnOp};

pub const MAGIC: &[u8; 5] = b"LAMP1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellCode {
    pub cell: CellId,
    pub code: Vec<Instruction>,
}

/// Programs for some cells of the grid.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Image {
    /// Vector width; 0 when the program does not fix one.
    pub width: usize,
    pub cells: Vec<CellCode>,
}

fn malformed(msg: impl Into<String>) -> SimError {
    SimError::MalformedBinary(msg.into())
}

impl Image {
    /// Checks cell uniqueness, jump targets and LOADM widths.
    pub fn validate(&self) -> Result<(), SimError> {
        let mut seen = HashSet::new();
        for cell in &self.cells {
            if !seen.insert(cell.cell) {
                return Err(SimError::InvalidProgram(format!(
                    "cell {} listed twice",
                    cell.cell
                )));
            }
            for (pc, instr) in cell.code.iter().enumerate() {
                if let Some(t) = instr.jump_target() {
                    if t as usize >= cell.code.len() {
                        return Err(SimError::InvalidProgram(format!(
                            "cell {} pc {pc}: jump target {t} outside program",
                            cell.cell
                        )));
                    }
                }
                if let Instruction::LoadM(_, v) = instr {
                    if v.len() != self.width {
                        return Err(SimError::InvalidProgram(format!(
                            "cell {} pc {pc}: LOADM literal of {} bits, image width {}",
                            cell.cell,
                            v.len(),
                            self.width
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn cell(&self, id: CellId) -> Option<&[Instruction]> {
        self.cells
            .iter()
            .find(|c| c.cell == id)
            .map(|c| c.code.as_slice())
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>, SimError> {
        self.validate()?;
        let width = u32::try_from(self.width)
            .map_err(|_| SimError::InvalidProgram("width does not fit u32".into()))?;
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&width.to_le_bytes());
        out.push(self.cells.len() as u8);
        for cell in &self.cells {
            out.push(cell.cell.row);
            out.push(cell.cell.col);
            let n = u32::try_from(cell.code.len())
                .map_err(|_| SimError::InvalidProgram("program too long".into()))?;
            out.extend_from_slice(&n.to_le_bytes());
        }
        for cell in &self.cells {
            for instr in &cell.code {
                encode(instr, &mut out);
            }
        }
        Ok(out)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, SimError> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(MAGIC.len())? != MAGIC {
            return Err(malformed("bad magic"));
        }
        let width = r.u32()? as usize;
        let count = r.u8()? as usize;
        if count > CELL_COUNT {
            return Err(malformed(format!("{count} cells, grid has {CELL_COUNT}")));
        }
        let mut header = Vec::with_capacity(count);
        for _ in 0..count {
            let (row, col) = (r.u8()? as usize, r.u8()? as usize);
            let cell = CellId::new(row, col)
                .ok_or_else(|| malformed(format!("cell {row},{col} outside grid")))?;
            header.push((cell, r.u32()? as usize));
        }
        let mut cells = Vec::with_capacity(count);
        for (cell, len) in header {
            let mut code = Vec::new();
            for _ in 0..len {
                code.push(decode(&mut r, width)?);
            }
            cells.push(CellCode { cell, code });
        }
        if r.pos != bytes.len() {
            return Err(malformed(format!("{} trailing bytes", bytes.len() - r.pos)));
        }
        let image = Image { width, cells };
        image.validate().map_err(|e| malformed(e.to_string()))?;
        Ok(image)
    }
}

fn src_code(s: Src) -> u8 {
    match s {
        Src::Reg(r) => r as u8,
        Src::Row => 4,
    }
}

fn target(op: u8, t: u32, out: &mut Vec<u8>) {
    out.extend_from_slice(&[op, 0, 0, 0]);
    out.extend_from_slice(&t.to_le_bytes());
}

fn encode(instr: &Instruction, out: &mut Vec<u8>) {
    match instr {
        Instruction::Logic { op, a, b, un, dst } => out.extend_from_slice(&[
            0x01,
            *op as u8,
            src_code(*a),
            src_code(*b),
            *un as u8,
            *dst as u8,
            0,
            0,
        ]),
        Instruction::Orf(s) => out.extend_from_slice(&[0x02, src_code(*s), 0, 0, 0, 0, 0, 0]),
        Instruction::Jmp(t) => target(0x03, *t, out),
        Instruction::Jf(t) => target(0x04, *t, out),
        Instruction::Jnf(t) => target(0x05, *t, out),
        Instruction::SetRow(r) => target(0x06, *r, out),
        Instruction::IncRow => out.extend_from_slice(&[0x07, 0, 0, 0, 0, 0, 0, 0]),
        Instruction::Jrlt(t) => target(0x08, *t, out),
        Instruction::LoadM(reg, v) => {
            out.extend_from_slice(&[0x09, *reg as u8, 0, 0, 0, 0, 0, 0]);
            let mut bytes = vec![0u8; v.len().div_ceil(8)];
            for (i, bit) in v.iter().enumerate() {
                if bit {
                    bytes[i / 8] |= 0x80 >> (i % 8);
                }
            }
            out.extend_from_slice(&bytes);
        }
        Instruction::Send(d, r) => {
            out.extend_from_slice(&[0x0A, *d as u8, *r as u8, 0, 0, 0, 0, 0])
        }
        Instruction::Recv(d, r) => {
            out.extend_from_slice(&[0x0B, *d as u8, *r as u8, 0, 0, 0, 0, 0])
        }
        Instruction::Halt => out.extend_from_slice(&[0x0C, 0, 0, 0, 0, 0, 0, 0]),
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], SimError> {
        let end = self.pos + n;
        let slice = self
            .bytes
            .get(self.pos..end)
            .ok_or_else(|| malformed(format!("truncated at byte {}", self.pos)))?;
        self.pos = end;
        Ok(slice)
    }

    fn u8(&mut self) -> Result<u8, SimError> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32, SimError> {
        Ok(u32::from_le_bytes(
            self.take(4)?.try_into().expect("4 bytes"),
        ))
    }
}

fn pick<T: Copy>(table: &[T], code: u8, what: &str, at: usize) -> Result<T, SimError> {
    table
        .get(code as usize)
        .copied()
        .ok_or_else(|| malformed(format!("bad {what} code {code} at byte {at}")))
}

fn decode(r: &mut Reader<'_>, width: usize) -> Result<Instruction, SimError> {
    let at = r.pos;
    let w: [u8; 8] = r.take(8)?.try_into().expect("8 bytes");
    let imm = u32::from_le_bytes([w[4], w[5], w[6], w[7]]);
    // Bytes that must be zero for each layout.
    let require_zero = |idx: &[usize]| -> Result<(), SimError> {
        match idx.iter().find(|&&i| w[i] != 0) {
            Some(i) => Err(malformed(format!("nonzero reserved byte {} at {at}", i))),
            None => Ok(()),
        }
    };
    let instr = match w[0] {
        0x01 => {
            require_zero(&[6, 7])?;
            Instruction::Logic {
                op: pick(&BinOp::ALL, w[1], "binop", at)?,
                a: pick(&Src::ALL, w[2], "source", at)?,
                b: pick(&Src::ALL, w[3], "source", at)?,
                un: pick(&UnOp::ALL, w[4], "unop", at)?,
                dst: pick(&MReg::ALL, w[5], "register", at)?,
            }
        }
        0x02 => {
            require_zero(&[2, 3, 4, 5, 6, 7])?;
            Instruction::Orf(pick(&Src::ALL, w[1], "source", at)?)
        }
        op @ (0x03..=0x06 | 0x08) => {
            require_zero(&[1, 2, 3])?;
            match op {
                0x03 => Instruction::Jmp(imm),
                0x04 => Instruction::Jf(imm),
                0x05 => Instruction::Jnf(imm),
                0x06 => Instruction::SetRow(imm),
                _ => Instruction::Jrlt(imm),
            }
        }
        0x07 => {
            require_zero(&[1, 2, 3, 4, 5, 6, 7])?;
            Instruction::IncRow
        }
        0x09 => {
            require_zero(&[2, 3, 4, 5, 6, 7])?;
            let reg = pick(&MReg::ALL, w[1], "register", at)?;
            if width == 0 {
                return Err(malformed(format!(
                    "LOADM at byte {at} in an image without width"
                )));
            }
            let bytes = r.take(width.div_ceil(8))?;
            let bits = (0..width).map(|i| bytes[i / 8] & (0x80 >> (i % 8)) != 0);
            let v = BitVector::from_bits(bits);
            let pad = width % 8;
            if pad != 0 && bytes[bytes.len() - 1] & (0xFF >> pad) != 0 {
                return Err(malformed(format!(
                    "nonzero pad bits in LOADM literal at byte {at}"
                )));
            }
            Instruction::LoadM(reg, v)
        }
        op @ (0x0A | 0x0B) => {
            require_zero(&[3, 4, 5, 6, 7])?;
            let d = pick(&Dir::ALL, w[1], "direction", at)?;
            let reg = pick(&MReg::ALL, w[2], "register", at)?;
            if op == 0x0A {
                Instruction::Send(d, reg)
            } else {
                Instruction::Recv(d, reg)
            }
        }
        0x0C => {
            require_zero(&[1, 2, 3, 4, 5, 6, 7])?;
            Instruction::Halt
        }
        other => {
            return Err(malformed(format!(
                "unknown opcode {other:#04x} at byte {at}"
            )))
        }
    };
    Ok(instr)
}
