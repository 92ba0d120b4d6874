//! Disassembler producing source that reassembles to the same image.

use std::collections::BTreeSet;
use std::fmt::Write;

use lamp_sim::{Image, Instruction, SimError};

fn label(addr: u32) -> String {
    format!("L{addr}")
}

/// Renders one instruction with a symbolic jump target.
fn render(instr: &Instruction) -> String {
    match instr.jump_target() {
        Some(t) => format!("{} {}", instr.mnemonic(), label(t)),
        None => instr.to_string(),
    }
}

/// Disassembles an image into assembler source.
///
/// Every cell gets its own `.cell` section, so an image assembled from
/// broadcast source comes back with sixteen identical sections. Jump targets
/// are named `L<address>`.
pub fn disassemble_image(image: &Image) -> String {
    let mut out = String::new();
    if image.width > 0 {
        writeln!(out, ".width {}", image.width).unwrap();
    }
    for cc in &image.cells {
        writeln!(out, ".cell {},{}", cc.cell.row, cc.cell.col).unwrap();
        let targets: BTreeSet<u32> = cc
            .code
            .iter()
            .filter_map(Instruction::jump_target)
            .collect();
        for (addr, instr) in cc.code.iter().enumerate() {
            let addr = addr as u32;
            let head = if targets.contains(&addr) {
                format!("{}:", label(addr))
            } else {
                String::new()
            };
            writeln!(out, "{head:<8}{}", render(instr)).unwrap();
        }
    }
    out
}

/// Decodes a binary image and disassembles it.
pub fn disassemble(bytes: &[u8]) -> Result<String, SimError> {
    Ok(disassemble_image(&Image::from_bytes(bytes)?))
}
