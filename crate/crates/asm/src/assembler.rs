//! Two-pass assembler.
//!
//! Pass one tokenizes every line, records label addresses per cell section
//! and parses instructions with symbolic jump targets. Pass two resolves the
//! targets and checks `LOADM` literals against `.width`.
//!
//! Without any `.cell` directive the whole program is copied to all sixteen
//! cells. With `.cell` directives, code must not appear before the first one;
//! a repeated `.cell r,c` reopens that cell's section. Labels are scoped to
//! their cell section.

use std::collections::HashMap;

use lamp_core::BitVector;
use lamp_sim::{BinOp, CellCode, CellId, Dir, Image, Instruction, MReg, Src, UnOp};

use crate::error::AsmError;
use crate::lexer::{tokenize, Tok, Token};

#[derive(Debug, Clone, Copy)]
enum JumpKind {
    Jmp,
    Jf,
    Jnf,
    Jrlt,
}

#[derive(Debug)]
enum Pending {
    Ready(Instruction),
    Jump {
        kind: JumpKind,
        label: String,
        column: usize,
    },
    LoadM {
        reg: MReg,
        bits: BitVector,
        column: usize,
    },
}

#[derive(Debug)]
struct Section {
    cell: Option<CellId>,
    items: Vec<(usize, Pending)>,
    labels: HashMap<String, u32>,
}

impl Section {
    fn new(cell: Option<CellId>) -> Self {
        Section {
            cell,
            items: Vec::new(),
            labels: HashMap::new(),
        }
    }
}

struct Cursor<'t, 'a> {
    toks: &'t [Token<'a>],
    pos: usize,
    line: usize,
    end_column: usize,
}

impl<'t, 'a> Cursor<'t, 'a> {
    fn syntax(&self, column: usize, message: impl Into<String>) -> AsmError {
        AsmError::Syntax {
            line: self.line,
            column,
            message: message.into(),
        }
    }

    fn column(&self) -> usize {
        self.toks
            .get(self.pos)
            .map_or(self.end_column, |t| t.column)
    }

    fn word(&mut self, what: &str) -> Result<(&'a str, usize), AsmError> {
        match self.toks.get(self.pos) {
            Some(Token {
                tok: Tok::Word(w),
                column,
            }) => {
                self.pos += 1;
                Ok((w, *column))
            }
            _ => Err(self.syntax(self.column(), format!("expected {what}"))),
        }
    }

    fn comma(&mut self) -> Result<(), AsmError> {
        match self.toks.get(self.pos) {
            Some(Token {
                tok: Tok::Comma, ..
            }) => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.syntax(self.column(), "expected ','")),
        }
    }

    fn end(&self) -> Result<(), AsmError> {
        match self.toks.get(self.pos) {
            None => Ok(()),
            Some(t) => Err(self.syntax(t.column, "unexpected trailing input")),
        }
    }

    /// A keyword from a fixed set, matched case-insensitively.
    fn keyword<T: Copy>(&mut self, what: &str, table: &[(&str, T)]) -> Result<T, AsmError> {
        let (w, column) = self.word(what)?;
        table
            .iter()
            .find(|(name, _)| name.eq_ignore_ascii_case(w))
            .map(|&(_, v)| v)
            .ok_or_else(|| self.syntax(column, format!("expected {what}, found {w:?}")))
    }

    fn int(&mut self, what: &str) -> Result<u32, AsmError> {
        let (w, column) = self.word(what)?;
        if !w.bytes().all(|b| b.is_ascii_digit()) {
            return Err(self.syntax(column, format!("expected {what}, found {w:?}")));
        }
        w.parse()
            .map_err(|_| self.syntax(column, format!("{what} {w} out of range")))
    }
}

const BINOPS: &[(&str, BinOp)] = &[
    ("AND", BinOp::And),
    ("OR", BinOp::Or),
    ("XOR", BinOp::Xor),
    ("PASS", BinOp::Pass),
];
const UNOPS: &[(&str, UnOp)] = &[("NOT", UnOp::Not), ("SLC", UnOp::Slc), ("NOPU", UnOp::Nopu)];
const MREGS: &[(&str, MReg)] = &[
    ("MA", MReg::Ma),
    ("MB", MReg::Mb),
    ("MC", MReg::Mc),
    ("MD", MReg::Md),
];
const SRCS: &[(&str, Src)] = &[
    ("MA", Src::Reg(MReg::Ma)),
    ("MB", Src::Reg(MReg::Mb)),
    ("MC", Src::Reg(MReg::Mc)),
    ("MD", Src::Reg(MReg::Md)),
    ("ROW", Src::Row),
];
const DIRS: &[(&str, Dir)] = &[
    ("N", Dir::N),
    ("NE", Dir::NE),
    ("E", Dir::E),
    ("SE", Dir::SE),
    ("S", Dir::S),
    ("SW", Dir::SW),
    ("W", Dir::W),
    ("NW", Dir::NW),
];

fn is_ident(w: &str) -> bool {
    let mut chars = w.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn label_operand(cur: &mut Cursor<'_, '_>) -> Result<(String, usize), AsmError> {
    let (w, column) = cur.word("label")?;
    if !is_ident(w) {
        return Err(cur.syntax(column, format!("bad label {w:?}")));
    }
    Ok((w.to_string(), column))
}

fn parse_instr(cur: &mut Cursor<'_, '_>) -> Result<Pending, AsmError> {
    let (mnemonic, column) = cur.word("instruction")?;
    let jump = |kind, cur: &mut Cursor<'_, '_>| -> Result<Pending, AsmError> {
        let (label, column) = label_operand(cur)?;
        Ok(Pending::Jump {
            kind,
            label,
            column,
        })
    };
    let pending = match mnemonic.to_ascii_uppercase().as_str() {
        "LOGIC" => {
            let op = cur.keyword("binary operator", BINOPS)?;
            let a = cur.keyword("source", SRCS)?;
            cur.comma()?;
            let b = cur.keyword("source", SRCS)?;
            cur.comma()?;
            let un = cur.keyword("unary operator", UNOPS)?;
            cur.comma()?;
            let dst = cur.keyword("m-register", MREGS)?;
            Pending::Ready(Instruction::Logic { op, a, b, un, dst })
        }
        "ORF" => Pending::Ready(Instruction::Orf(cur.keyword("source", SRCS)?)),
        "JMP" => jump(JumpKind::Jmp, cur)?,
        "JF" => jump(JumpKind::Jf, cur)?,
        "JNF" => jump(JumpKind::Jnf, cur)?,
        "JRLT" => jump(JumpKind::Jrlt, cur)?,
        "SETROW" => Pending::Ready(Instruction::SetRow(cur.int("row index")?)),
        "INCROW" => Pending::Ready(Instruction::IncRow),
        "HALT" => Pending::Ready(Instruction::Halt),
        m @ ("SEND" | "RECV") => {
            let d = cur.keyword("direction", DIRS)?;
            cur.comma()?;
            let r = cur.keyword("m-register", MREGS)?;
            Pending::Ready(if m == "SEND" {
                Instruction::Send(d, r)
            } else {
                Instruction::Recv(d, r)
            })
        }
        "LOADM" => {
            let reg = cur.keyword("m-register", MREGS)?;
            cur.comma()?;
            let (w, column) = cur.word("bit literal")?;
            let bits: BitVector = w
                .parse()
                .map_err(|e| cur.syntax(column, format!("bad bit literal {w:?}: {e}")))?;
            Pending::LoadM { reg, bits, column }
        }
        _ => {
            return Err(AsmError::UnknownMnemonic {
                line: cur.line,
                column,
                mnemonic: mnemonic.to_string(),
            })
        }
    };
    cur.end()?;
    Ok(pending)
}

#[derive(Default)]
struct Program {
    width: Option<(usize, usize)>,
    broadcast: Option<Section>,
    sections: Vec<Section>,
    current: Option<usize>,
}

impl Program {
    fn directive(&mut self, cur: &mut Cursor<'_, '_>) -> Result<(), AsmError> {
        let (name, column) = cur.word("directive")?;
        match name {
            ".width" => {
                let (w, wcol) = cur.word("width")?;
                let n: usize = w
                    .parse()
                    .ok()
                    .filter(|&n| n > 0)
                    .ok_or_else(|| cur.syntax(wcol, format!("bad width {w:?}")))?;
                cur.end()?;
                match self.width {
                    Some((old, _)) if old != n => {
                        return Err(
                            cur.syntax(wcol, format!("conflicting .width {n}, already {old}"))
                        )
                    }
                    _ => self.width = Some((n, cur.line)),
                }
            }
            ".cell" => {
                let row = cur.int("cell row")?;
                cur.comma()?;
                let col = cur.int("cell column")?;
                cur.end()?;
                let cell = CellId::new(row as usize, col as usize).ok_or_else(|| {
                    cur.syntax(column, format!("cell {row},{col} outside the 4x4 grid"))
                })?;
                if self.broadcast.is_some() {
                    return Err(cur.syntax(column, ".cell after code outside any cell"));
                }
                let idx = match self.sections.iter().position(|s| s.cell == Some(cell)) {
                    Some(i) => i,
                    None => {
                        self.sections.push(Section::new(Some(cell)));
                        self.sections.len() - 1
                    }
                };
                self.current = Some(idx);
            }
            other => return Err(cur.syntax(column, format!("unknown directive {other:?}"))),
        }
        Ok(())
    }

    fn section(&mut self, line: usize, column: usize) -> Result<&mut Section, AsmError> {
        match self.current {
            Some(i) => Ok(&mut self.sections[i]),
            None if self.sections.is_empty() => {
                Ok(self.broadcast.get_or_insert_with(|| Section::new(None)))
            }
            None => Err(AsmError::Syntax {
                line,
                column,
                message: "code before first .cell".into(),
            }),
        }
    }
}

/// Assembles source text into a program image.
pub fn assemble(src: &str) -> Result<Image, AsmError> {
    let mut prog = Program::default();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let toks = tokenize(raw, line)?;
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor {
            toks: &toks,
            pos: 0,
            line,
            end_column: raw.split(';').next().unwrap_or("").chars().count() + 1,
        };
        if matches!(toks[0].tok, Tok::Word(w) if w.starts_with('.')) {
            prog.directive(&mut cur)?;
            continue;
        }
        let label = match (&toks[0].tok, toks.get(1).map(|t| &t.tok)) {
            (Tok::Word(w), Some(Tok::Colon)) => {
                if !is_ident(w) {
                    return Err(cur.syntax(toks[0].column, format!("bad label {w:?}")));
                }
                cur.pos = 2;
                if toks.len() == 2 {
                    return Err(cur.syntax(cur.end_column, "expected instruction after label"));
                }
                Some((w.to_string(), toks[0].column))
            }
            _ => None,
        };
        let pending = parse_instr(&mut cur)?;
        let section = prog.section(line, toks[0].column)?;
        if let Some((name, column)) = label {
            let addr = section.items.len() as u32;
            if section.labels.insert(name.clone(), addr).is_some() {
                return Err(AsmError::DuplicateLabel {
                    line,
                    column,
                    label: name,
                });
            }
        }
        section.items.push((line, pending));
    }

    let width = prog.width.map_or(0, |(w, _)| w);
    let resolve =
        |section: &Section| -> Result<Vec<Instruction>, AsmError> {
            section
                .items
                .iter()
                .map(|(line, p)| match p {
                    Pending::Ready(i) => Ok(i.clone()),
                    Pending::Jump {
                        kind,
                        label,
                        column,
                    } => {
                        let t = *section.labels.get(label).ok_or_else(|| {
                            AsmError::UnresolvedLabel {
                                line: *line,
                                column: *column,
                                label: label.clone(),
                            }
                        })?;
                        Ok(match kind {
                            JumpKind::Jmp => Instruction::Jmp(t),
                            JumpKind::Jf => Instruction::Jf(t),
                            JumpKind::Jnf => Instruction::Jnf(t),
                            JumpKind::Jrlt => Instruction::Jrlt(t),
                        })
                    }
                    Pending::LoadM { reg, bits, column } => {
                        if width == 0 {
                            return Err(AsmError::Syntax {
                                line: *line,
                                column: *column,
                                message: "LOADM requires a .width directive".into(),
                            });
                        }
                        if bits.len() != width {
                            return Err(AsmError::WidthMismatch {
                                line: *line,
                                column: *column,
                                expected: width,
                                found: bits.len(),
                            });
                        }
                        Ok(Instruction::LoadM(*reg, bits.clone()))
                    }
                })
                .collect()
        };

    let cells = match &prog.broadcast {
        Some(section) => {
            let code = resolve(section)?;
            CellId::all()
                .map(|cell| CellCode {
                    cell,
                    code: code.clone(),
                })
                .collect()
        }
        None => prog
            .sections
            .iter()
            .map(|s| {
                Ok(CellCode {
                    cell: s.cell.expect("explicit section"),
                    code: resolve(s)?,
                })
            })
            .collect::<Result<Vec<_>, AsmError>>()?,
    };
    Ok(Image { width, cells })
}
