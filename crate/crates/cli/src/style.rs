//! Terminal decoration for text output.

use std::io::IsTerminal;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Style {
    pub color: bool,
}

impl Style {
    pub const PLAIN: Style = Style { color: false };

    /// `LAMP_COLOR=0` turns decoration off, any other value forces it on;
    /// unset, decoration follows whether stdout is a terminal.
    pub fn from_env() -> Self {
        let color = match std::env::var("LAMP_COLOR") {
            Ok(v) => v != "0",
            Err(_) => std::io::stdout().is_terminal(),
        };
        Style { color }
    }

    fn wrap(self, code: &str, s: &str) -> String {
        if self.color {
            format!("\x1b[{code}m{s}\x1b[0m")
        } else {
            s.to_string()
        }
    }

    pub fn bold(self, s: &str) -> String {
        self.wrap("1", s)
    }

    pub fn good(self, s: &str) -> String {
        self.wrap("32", s)
    }

    pub fn bad(self, s: &str) -> String {
        self.wrap("31", s)
    }
}
