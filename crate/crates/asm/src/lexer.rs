use crate::error::AsmError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok<'a> {
    Word(&'a str),
    Comma,
    Colon,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Token<'a> {
    pub tok: Tok<'a>,
    /// 1-based character column.
    pub column: usize,
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '.'
}

/// Splits one source line (comment already included) into tokens.
pub(crate) fn tokenize(line: &str, lineno: usize) -> Result<Vec<Token<'_>>, AsmError> {
    let code = match line.find(';') {
        Some(pos) => &line[..pos],
        None => line,
    };
    let mut tokens = Vec::new();
    let mut chars = code.char_indices().enumerate().peekable();
    while let Some((col0, (start, c))) = chars.next() {
        let column = col0 + 1;
        match c {
            c if c.is_whitespace() => {}
            ',' => tokens.push(Token {
                tok: Tok::Comma,
                column,
            }),
            ':' => tokens.push(Token {
                tok: Tok::Colon,
                column,
            }),
            c if is_word_char(c) => {
                let mut end = start + c.len_utf8();
                while let Some(&(_, (i, d))) = chars.peek() {
                    if !is_word_char(d) {
                        break;
                    }
                    end = i + d.len_utf8();
                    chars.next();
                }
                tokens.push(Token {
                    tok: Tok::Word(&code[start..end]),
                    column,
                });
            }
            other => {
                return Err(AsmError::Syntax {
                    line: lineno,
                    column,
                    message: format!("unexpected character {other:?}"),
                })
            }
        }
    }
    Ok(tokens)
}
