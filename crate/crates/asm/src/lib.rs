//! Assembler and disassembler for LAMP sequencer programs.
//!
//! Source is line oriented: `[label:] MNEMONIC operands [; comment]`, plus the
//! directives `.width N` and `.cell R,C`. Mnemonics and operand keywords are
//! case-insensitive; labels are not.
//!
//! ```
//! let img = lamp_asm::assemble(".cell 0,0\nloop: INCROW\nJRLT loop\nHALT").unwrap();
//! let text = lamp_asm::disassemble_image(&img);
//! assert_eq!(lamp_asm::assemble(&text).unwrap(), img);
//! ```

mod assembler;
mod disasm;
mod error;
mod lexer;

pub use assembler::assemble;
pub use disasm::{disassemble, disassemble_image};
pub use error::AsmError;
