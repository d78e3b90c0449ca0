//! Canonical printing.
//!
//! Most forms print one way everywhere. Implications are position-sensitive,
//! mirroring how the source listings write them:
//!
//! * predictive implication at top level: `ant =/> cons>` (no opening `<`,
//!   dangling `>` kept),
//! * plain implication whose consequent is itself an implication, at top
//!   level: `ant ==> cons` with the consequent printed in the same style,
//! * every other implication: properly bracketed `<ant cop cons>`.
//!
//! Conjunctions print bare at top level (`A && B`) and parenthesized as
//! operands. The parser accepts everything this module emits, so printing
//! then parsing is the identity.

use super::{ImplKind, Punctuation, SentenceNode, Tense, Term};
use std::fmt;

#[derive(Clone, Copy, PartialEq)]
enum Ctx {
    Top,
    Operand,
}

fn copula(kind: ImplKind) -> &'static str {
    match kind {
        ImplKind::Plain => "==>",
        ImplKind::Predictive => "=/>",
    }
}

fn write_term(t: &Term, ctx: Ctx, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        Term::Atom(name) => f.write_str(name),
        Term::IndependentVar(n) => write!(f, "${n}"),
        Term::DependentVar(n) => write!(f, "#{n}"),
        Term::Product(a, b) => {
            f.write_str("(")?;
            write_term(a, Ctx::Operand, f)?;
            f.write_str(" * ")?;
            write_term(b, Ctx::Operand, f)?;
            f.write_str(")")
        }
        Term::Inheritance(s, p) => {
            f.write_str("<")?;
            write_term(s, Ctx::Operand, f)?;
            f.write_str(" --> ")?;
            write_term(p, Ctx::Operand, f)?;
            f.write_str(">")
        }
        Term::Operation { args, name } => {
            f.write_str("<")?;
            write_term(args, Ctx::Operand, f)?;
            write!(f, " --> ^{name}>")
        }
        Term::Sequence(events) => {
            f.write_str("(")?;
            for (i, e) in events.iter().enumerate() {
                if i > 0 {
                    f.write_str(" &/ ")?;
                }
                write_term(e, Ctx::Operand, f)?;
            }
            f.write_str(")")
        }
        Term::Conjunction(a, b) => {
            if ctx == Ctx::Operand {
                f.write_str("(")?;
            }
            write_term(a, Ctx::Operand, f)?;
            f.write_str(" && ")?;
            write_term(b, Ctx::Operand, f)?;
            if ctx == Ctx::Operand {
                f.write_str(")")?;
            }
            Ok(())
        }
        Term::Implication(kind, ant, cons) => {
            let chain_style = ctx == Ctx::Top
                && (*kind == ImplKind::Predictive || matches!(**cons, Term::Implication(..)));
            if chain_style {
                write_term(ant, Ctx::Operand, f)?;
                write!(f, " {} ", copula(*kind))?;
                match *kind {
                    // `... =/> G>` - the statement's closing bracket without
                    // its opener, exactly as the listings have it
                    ImplKind::Predictive => {
                        write_term(cons, Ctx::Operand, f)?;
                        f.write_str(">")
                    }
                    ImplKind::Plain => write_term(cons, Ctx::Top, f),
                }
            } else {
                f.write_str("<")?;
                write_term(ant, Ctx::Operand, f)?;
                write!(f, " {} ", copula(*kind))?;
                write_term(cons, Ctx::Operand, f)?;
                f.write_str(">")
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(self, Ctx::Top, f)
    }
}

impl fmt::Display for SentenceNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(&self.term, Ctx::Top, f)?;
        match self.punctuation {
            Punctuation::Judgment => f.write_str(".")?,
            Punctuation::Goal => f.write_str("!")?,
        }
        if self.tense == Tense::Present {
            f.write_str(" :|:")?;
        }
        Ok(())
    }
}
