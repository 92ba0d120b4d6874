use thiserror::Error;

/// Assembly failure; every variant carries the 1-based source line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AsmError {
    #[error("{line}:{column}: syntax error: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{line}:{column}: unknown mnemonic {mnemonic:?}")]
    UnknownMnemonic {
        line: usize,
        column: usize,
        mnemonic: String,
    },

    #[error("{line}:{column}: duplicate label {label:?}")]
    DuplicateLabel {
        line: usize,
        column: usize,
        label: String,
    },

    #[error("{line}:{column}: unresolved label {label:?}")]
    UnresolvedLabel {
        line: usize,
        column: usize,
        label: String,
    },

    #[error("{line}:{column}: literal has {found} bits, width is {expected}")]
    WidthMismatch {
        line: usize,
        column: usize,
        expected: usize,
        found: usize,
    },
}

impl AsmError {
    pub fn line(&self) -> usize {
        match *self {
            AsmError::Syntax { line, .. }
            | AsmError::UnknownMnemonic { line, .. }
            | AsmError::DuplicateLabel { line, .. }
            | AsmError::UnresolvedLabel { line, .. }
            | AsmError::WidthMismatch { line, .. } => line,
        }
    }

    pub fn column(&self) -> usize {
        match *self {
            AsmError::Syntax { column, .. }
            | AsmError::UnknownMnemonic { column, .. }
            | AsmError::DuplicateLabel { column, .. }
            | AsmError::UnresolvedLabel { column, .. }
            | AsmError::WidthMismatch { column, .. } => column,
        }
    }
}
