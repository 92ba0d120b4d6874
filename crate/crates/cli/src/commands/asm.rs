//! `lamp asm`: build, dump and emit program images.

use std::path::{Path, PathBuf};

use lamp_asm::{assemble, disassemble_image};
use lamp_sim::{builtin_query_program, CellCode, CellId, Image};

use super::{read_file, read_text, Output};
use crate::error::{CliError, Result};
use crate::report::{inputs_digest, RunReport};

fn image_fields(image: &Image, bytes: usize) -> Vec<(&'static str, String)> {
    vec![
        ("width", image.width.to_string()),
        ("cells", image.cells.len().to_string()),
        (
            "instructions",
            image
                .cells
                .iter()
                .map(|c| c.code.len())
                .sum::<usize>()
                .to_string(),
        ),
        ("bytes", bytes.to_string()),
    ]
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| CliError::input(path, e))
}

/// Assembles `src`; writes the binary to `out`, or next to the source with a
/// `.bin` extension.
pub fn build(src: &Path, out: Option<&Path>, command: &str) -> Result<Output> {
    let text = read_text(src)?;
    let image = assemble(&text).map_err(|source| CliError::Asm {
        path: src.to_path_buf(),
        source,
    })?;
    let bytes = image.to_bytes()?;
    let out: PathBuf = out.map_or_else(|| src.with_extension("bin"), Path::to_path_buf);
    write(&out, &bytes)?;
    let mut report = RunReport::new(command, inputs_digest([text.as_bytes()]));
    let mut fields = image_fields(&image, bytes.len());
    fields.push(("output", out.display().to_string()));
    report.push("image", fields);
    let summary = format!(
        "wrote {} ({} cells, {} bytes)\n",
        out.display(),
        image.cells.len(),
        bytes.len()
    );
    Ok(Output::ok(report, summary))
}

/// Disassembles a binary image.
pub fn dump(bin: &Path, command: &str) -> Result<Output> {
    let bytes = read_file(bin)?;
    let image = Image::from_bytes(&bytes).map_err(|e| CliError::input(bin, e))?;
    let source = disassemble_image(&image);
    let mut report = RunReport::new(command, inputs_digest([bytes.as_slice()]));
    report.push("image", image_fields(&image, bytes.len()));
    report.push("source", [("text", source.clone())]);
    Ok(Output::ok(report, source))
}

/// The builtin query program for `rows` rows on cell 0,0. Written as a
/// binary when `out` ends in `.bin`, as source otherwise.
pub fn builtin(rows: usize, out: Option<&Path>, command: &str) -> Result<Output> {
    if rows == 0 {
        return Err(CliError::Usage("--rows must be at least 1".into()));
    }
    let image = Image {
        width: 0,
        cells: vec![CellCode {
            cell: CellId::new(0, 0).expect("origin"),
            code: builtin_query_program(rows),
        }],
    };
    let source = disassemble_image(&image);
    let bytes = image.to_bytes()?;
    let mut report = RunReport::new(command, inputs_digest([rows.to_string().as_bytes()]));
    let mut fields = image_fields(&image, bytes.len());
    let text = match out {
        Some(path) => {
            if path.extension().is_some_and(|e| e == "bin") {
                write(path, &bytes)?;
            } else {
                write(path, source.as_bytes())?;
            }
            fields.push(("output", path.display().to_string()));
            format!("wrote {}\n", path.display())
        }
        None => source.clone(),
    };
    report.push("image", fields);
    report.push("source", [("text", source)]);
    Ok(Output::ok(report, text))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_then_dump() {
        let dir = tempfile::tempdir().unwrap();
        let src = dir.path().join("p.asm");
        std::fs::write(&src, ".cell 1,1\ntop: INCROW\nJRLT top\nHALT\n").unwrap();
        let out = build(&src, None, "t").unwrap();
        let bin = dir.path().join("p.bin");
        assert!(bin.exists());
        assert_eq!(out.report.records[0].get("instructions"), Some("3"));
        let dumped = dump(&bin, "t").unwrap();
        assert_eq!(
            dumped.text,
            ".cell 1,1\nL0:     INCROW\n        JRLT L0\n        HALT\n"
        );
    }

    #[test]
    fn build_reports_line() {
        let dir = tempfile::tempdir().unwrap();
        let src = dir.path().join("bad.asm");
        std::fs::write(&src, "HALT\n\nJF nowhere\n").unwrap();
        let err = build(&src, None, "t").unwrap_err().to_string();
        assert!(
            err.ends_with("bad.asm:3:4: unresolved label \"nowhere\""),
            "{err}"
        );
    }

    #[test]
    fn builtin_source_reassembles() {
        let out = builtin(3, None, "t").unwrap();
        let image = assemble(&out.text).unwrap();
        assert_eq!(image.cells[0].code, builtin_query_program(3));
    }
}
