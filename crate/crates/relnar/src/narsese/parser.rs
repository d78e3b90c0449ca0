//! Recursive-descent parser over the token stream.
//!
//! Grammar sketch (loosest binding first):
//!
//! ```text
//! sentence   := term ('.' | '!') [':|:']
//! term       := conj (('==>' | '=/>') term)?          right-associative
//! conj       := unit ('&&' unit)?                     binary, statement operands
//! unit       := statement | compound | atom | variable
//! statement  := '<' unit copula (unit | '^'name) '>'  copula: --> ==> =/>
//! compound   := '(' unit (('*' unit) | ('&/' unit)+ | ('&&' unit)) ')'
//! ```
//!
//! Source listings write top-level implications without the enclosing
//! `<...>` but keep the closing `>` of the intended statement, as in
//! `(...) =/> G>.`; a single dangling `>` after a bare top-level
//! implication is therefore accepted (and re-emitted by the printer).

use super::lexer::{lex, Tok, Token};
use super::{ImplKind, ParseError, Punctuation, SentenceNode, Tense, Term};

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.len, |t| t.offset)
    }

    fn found(&self) -> String {
        self.tokens
            .get(self.pos)
            .map_or_else(|| "end of input".into(), |t| t.tok.describe())
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError { offset: self.offset(), expected: expected.into(), found: self.found() }
    }

    fn advance(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|t| t.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, want: &Tok, expected: &str) -> Result<(), ParseError> {
        if self.peek() == Some(want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        Ok(self.term_tracked()?.0)
    }

    /// Like `term`, but also reports whether an implication copula was
    /// consumed at this nesting level (outside any brackets). Only such bare
    /// chains may be followed by a dangling `>`.
    fn term_tracked(&mut self) -> Result<(Term, bool), ParseError> {
        let lhs = self.conj()?;
        let kind = match self.peek() {
            Some(Tok::Impl) => ImplKind::Plain,
            Some(Tok::PredImpl) => ImplKind::Predictive,
            _ => return Ok((lhs, false)),
        };
        self.pos += 1;
        let rhs = self.term()?;
        Ok((Term::implication(kind, lhs, rhs), true))
    }

    fn conj(&mut self) -> Result<Term, ParseError> {
        let lhs_offset = self.offset();
        let lhs = self.unit()?;
        if self.peek() != Some(&Tok::Conj) {
            return Ok(lhs);
        }
        self.pos += 1;
        require_inheritance(&lhs, lhs_offset)?;
        let rhs_offset = self.offset();
        let rhs = self.unit()?;
        require_inheritance(&rhs, rhs_offset)?;
        Ok(Term::conjunction(lhs, rhs))
    }

    fn unit(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some(Tok::Lt) => self.statement(),
            Some(Tok::LParen) => self.compound(),
            Some(Tok::Ident(_)) => {
                let Some(Tok::Ident(name)) = self.advance() else { unreachable!() };
                Ok(Term::Atom(name))
            }
            Some(Tok::IndVar(_)) => {
                let Some(Tok::IndVar(n)) = self.advance() else { unreachable!() };
                Ok(Term::IndependentVar(n))
            }
            Some(Tok::DepVar(_)) => {
                let Some(Tok::DepVar(n)) = self.advance() else { unreachable!() };
                Ok(Term::DependentVar(n))
            }
            _ => Err(self.error("a term")),
        }
    }

    fn statement(&mut self) -> Result<Term, ParseError> {
        self.eat(&Tok::Lt, "'<'")?;
        let subject = self.unit()?;
        let copula = match self.peek() {
            Some(Tok::Inherit) => Tok::Inherit,
            Some(Tok::Impl) => Tok::Impl,
            Some(Tok::PredImpl) => Tok::PredImpl,
            _ => return Err(self.error("a copula ('-->', '==>' or '=/>')")),
        };
        self.pos += 1;
        if copula == Tok::Inherit {
            if let Some(Tok::OpName(_)) = self.peek() {
                let Some(Tok::OpName(name)) = self.advance() else { unreachable!() };
                self.eat(&Tok::Gt, "'>'")?;
                return Ok(Term::operation(subject, name));
            }
        }
        let predicate = self.unit()?;
        self.eat(&Tok::Gt, "'>'")?;
        Ok(match copula {
            Tok::Inherit => Term::inheritance(subject, predicate),
            Tok::Impl => Term::implication(ImplKind::Plain, subject, predicate),
            Tok::PredImpl => Term::implication(ImplKind::Predictive, subject, predicate),
            _ => unreachable!(),
        })
    }

    fn compound(&mut self) -> Result<Term, ParseError> {
        self.eat(&Tok::LParen, "'('")?;
        let first_offset = self.offset();
        let first = self.unit()?;
        match self.peek() {
            Some(Tok::Star) => {
                self.pos += 1;
                let second = self.unit()?;
                self.eat(&Tok::RParen, "')'")?;
                Ok(Term::product(first, second))
            }
            Some(Tok::SeqSep) => {
                require_statement(&first, first_offset)?;
                let mut events = vec![first];
                while self.peek() == Some(&Tok::SeqSep) {
                    self.pos += 1;
                    let offset = self.offset();
                    let event = self.unit()?;
                    require_statement(&event, offset)?;
                    events.push(event);
                }
                self.eat(&Tok::RParen, "')'")?;
                Ok(Term::sequence(events))
            }
            Some(Tok::Conj) => {
                self.pos += 1;
                require_inheritance(&first, first_offset)?;
                let second_offset = self.offset();
                let second = self.unit()?;
                require_inheritance(&second, second_offset)?;
                self.eat(&Tok::RParen, "')'")?;
                Ok(Term::conjunction(first, second))
            }
            _ => Err(self.error("'*', '&/' or '&&' inside '(...)'")),
        }
    }

    /// Swallow the source style's dangling `>` after a bare top-level
    /// implication chain. Bracketed statements never trigger this.
    fn maybe_dangling_gt(&mut self, bare_chain: bool) {
        if bare_chain && self.peek() == Some(&Tok::Gt) {
            self.pos += 1;
        }
    }
}

fn require_statement(t: &Term, offset: usize) -> Result<(), ParseError> {
    if t.is_statement() {
        Ok(())
    } else {
        Err(ParseError {
            offset,
            expected: "a statement event".into(),
            found: "a non-statement term".into(),
        })
    }
}

fn require_inheritance(t: &Term, offset: usize) -> Result<(), ParseError> {
    if matches!(t, Term::Inheritance(..)) {
        Ok(())
    } else {
        Err(ParseError {
            offset,
            expected: "an inheritance statement as '&&' operand".into(),
            found: "a different term".into(),
        })
    }
}

/// Parse one complete sentence: a term, `.` or `!`, and an optional `:|:`.
pub fn parse_sentence(text: &str) -> Result<SentenceNode, ParseError> {
    let tokens = lex(text)?;
    let mut p = Parser { tokens, pos: 0, len: text.len() };
    let (term, bare_chain) = p.term_tracked()?;
    p.maybe_dangling_gt(bare_chain);
    let punctuation = match p.peek() {
        Some(Tok::Dot) => Punctuation::Judgment,
        Some(Tok::Bang) => Punctuation::Goal,
        _ => return Err(p.error("'.' or '!'")),
    };
    p.pos += 1;
    let tense = if p.peek() == Some(&Tok::Tense) {
        p.pos += 1;
        Tense::Present
    } else {
        Tense::Eternal
    };
    if p.peek().is_some() {
        return Err(p.error("end of input"));
    }
    Ok(SentenceNode::new(term, punctuation, tense))
}

/// Parse a bare term with no punctuation (some source listings omit it).
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let tokens = lex(text)?;
    let mut p = Parser { tokens, pos: 0, len: text.len() };
    let (term, bare_chain) = p.term_tracked()?;
    p.maybe_dangling_gt(bare_chain);
    if p.peek().is_some() {
        return Err(p.error("end of input"));
    }
    Ok(term)
}
