//! Tokenizer. Whitespace-insensitive; `//` comments run to end of line.
//!
//! Two typographical accommodations for source listings: the en-dash form
//! `–>` lexes as the inheritance copula `-->`, and `{SELF}` is a single
//! atomic token rather than a set expression.

use super::ParseError;

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Tok {
    Lt,
    Gt,
    LParen,
    RParen,
    Star,
    /// `-->`
    Inherit,
    /// `==>`
    Impl,
    /// `=/>`
    PredImpl,
    /// `&/`
    SeqSep,
    /// `&&`
    Conj,
    Dot,
    Bang,
    /// `:|:`
    Tense,
    /// `$n`
    IndVar(u32),
    /// `#n`
    DepVar(u32),
    /// identifier, or the literal `{SELF}`
    Ident(String),
    /// `^name`
    OpName(String),
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Lt => "'<'".into(),
            Tok::Gt => "'>'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Star => "'*'".into(),
            Tok::Inherit => "'-->'".into(),
            Tok::Impl => "'==>'".into(),
            Tok::PredImpl => "'=/>'".into(),
            Tok::SeqSep => "'&/'".into(),
            Tok::Conj => "'&&'".into(),
            Tok::Dot => "'.'".into(),
            Tok::Bang => "'!'".into(),
            Tok::Tense => "':|:'".into(),
            Tok::IndVar(n) => format!("'${n}'"),
            Tok::DepVar(n) => format!("'#{n}'"),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::OpName(s) => format!("'^{s}'"),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub offset: usize,
}

fn err(offset: usize, expected: &str, found: impl Into<String>) -> ParseError {
    ParseError { offset, expected: expected.into(), found: found.into() }
}

pub(crate) fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < src.len() {
        let rest = &src[i..];
        let c = rest.chars().next().unwrap();
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        if rest.starts_with("//") {
            match rest.find('\n') {
                Some(n) => i += n + 1,
                None => break,
            }
            continue;
        }
        let offset = i;
        let (tok, len) = match c {
            '<' => (Tok::Lt, 1),
            '>' => (Tok::Gt, 1),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '*' => (Tok::Star, 1),
            '.' => (Tok::Dot, 1),
            '!' => (Tok::Bang, 1),
            '-' if rest.starts_with("-->") => (Tok::Inherit, 3),
            '-' => return Err(err(offset, "'-->'", preview(rest))),
            // en-dash arrow, as set by some typesetters
            '\u{2013}' if rest.starts_with("\u{2013}>") => {
                (Tok::Inherit, '\u{2013}'.len_utf8() + 1)
            }
            '\u{2013}' => return Err(err(offset, "'-->'", preview(rest))),
            '=' if rest.starts_with("==>") => (Tok::Impl, 3),
            '=' if rest.starts_with("=/>") => (Tok::PredImpl, 3),
            '=' => return Err(err(offset, "'==>' or '=/>'", preview(rest))),
            '&' if rest.starts_with("&&") => (Tok::Conj, 2),
            '&' if rest.starts_with("&/") => (Tok::SeqSep, 2),
            '&' => return Err(err(offset, "'&&' or '&/'", preview(rest))),
            ':' if rest.starts_with(":|:") => (Tok::Tense, 3),
            ':' => return Err(err(offset, "':|:'", preview(rest))),
            '{' if rest.starts_with("{SELF}") => (Tok::Ident("{SELF}".into()), 6),
            '{' => return Err(err(offset, "'{SELF}'", preview(rest))),
            '$' | '#' => {
                let mut j = i + 1;
                while j < src.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                if j == i + 1 {
                    return Err(err(offset, "a variable number", preview(rest)));
                }
                let n: u32 = src[i + 1..j]
                    .parse()
                    .map_err(|_| err(offset, "a variable number", preview(rest)))?;
                let tok = if c == '$' { Tok::IndVar(n) } else { Tok::DepVar(n) };
                (tok, j - i)
            }
            '^' => {
                let mut j = i + 1;
                while j < src.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                    j += 1;
                }
                if j == i + 1 {
                    return Err(err(offset, "an operator name after '^'", preview(rest)));
                }
                (Tok::OpName(src[i + 1..j].to_string()), j - i)
            }
            c if c.is_ascii_alphabetic() => {
                let mut j = i + 1;
                while j < src.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                    j += 1;
                }
                (Tok::Ident(src[i..j].to_string()), j - i)
            }
            _ => return Err(err(offset, "a term or punctuation", preview(rest))),
        };
        out.push(Token { tok, offset });
        i += len;
    }
    Ok(out)
}

/// A short slice of the remaining input for error messages.
fn preview(rest: &str) -> String {
    let snippet: String = rest.chars().take(8).collect();
    format!("'{snippet}'")
}
