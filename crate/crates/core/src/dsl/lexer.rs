use std::fmt;

use super::{ParseError, SourceSpan};
use crate::model::is_token_char;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Word(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Semi,
    Comma,
    Eq,
    Plus,
    Bang,
    Arrow,
    Turnstile,
    At,
    Slash,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Word(w) => return write!(f, "`{w}`"),
            Tok::LBrace => "`{`",
            Tok::RBrace => "`}`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBracket => "`[`",
            Tok::RBracket => "`]`",
            Tok::Semi => "`;`",
            Tok::Comma => "`,`",
            Tok::Eq => "`=`",
            Tok::Plus => "`+`",
            Tok::Bang => "`!`",
            Tok::Arrow => "`->`",
            Tok::Turnstile => "`|-`",
            Tok::At => "`@`",
            Tok::Slash => "`/`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

/// Splits `text` into tokens; whitespace and `#` comments are skipped.
pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut chars = text.char_indices().peekable();

    while let Some(&(off, c)) = chars.peek() {
        let span = |len: usize| SourceSpan { line, column: col, length: len, offset: off };
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if c == '#' {
            while let Some(&(_, c)) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
                col += 1;
            }
            continue;
        }
        if is_token_char(c) {
            let mut word = String::new();
            let mut ncols = 0;
            while let Some(&(_, c)) = chars.peek() {
                if !is_token_char(c) {
                    break;
                }
                word.push(c);
                ncols += 1;
                chars.next();
            }
            out.push(Token { tok: Tok::Word(word.clone()), span: span(word.len()) });
            col += ncols;
            continue;
        }
        let single = match c {
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ';' => Some(Tok::Semi),
            ',' => Some(Tok::Comma),
            '=' => Some(Tok::Eq),
            '+' => Some(Tok::Plus),
            '!' => Some(Tok::Bang),
            '@' => Some(Tok::At),
            '/' => Some(Tok::Slash),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, span: span(1) });
            chars.next();
            col += 1;
            continue;
        }
        let two = match c {
            '-' => Some(('>', Tok::Arrow)),
            '|' => Some(('-', Tok::Turnstile)),
            _ => None,
        };
        if let Some((second, tok)) = two {
            chars.next();
            if matches!(chars.peek(), Some(&(_, n)) if n == second) {
                chars.next();
                out.push(Token { tok, span: span(2) });
                col += 2;
                continue;
            }
            return Err(ParseError::new(span(c.len_utf8()), tok.to_string(), format!("`{c}`")));
        }
        return Err(ParseError::new(span(c.len_utf8()), "a token", format!("`{c}`")));
    }
    let offset = text.len();
    out.push(Token { tok: Tok::Eof, span: SourceSpan { line, column: col, length: 0, offset } });
    Ok(out)
}
