//! Term language for the reasoner: a small Narsese subset.
//!
//! Covers exactly what the trial encoding and the abstraction ladder need:
//! atoms, `$n`/`#n` variables, binary products, inheritance statements,
//! event sequences (`&/`), binary conjunction (`&&`), plain and predictive
//! implication (`==>`, `=/>`), and the `^match` operation. Parsing and
//! printing round-trip: `print(parse(s)) == s` for canonical strings, and
//! `parse(print(t)) == t` for every well-formed term.

mod lexer;
mod parser;
mod print;


use crate::truth::TruthValue;

pub use parser::{parse_sentence, parse_term};

/// Parse errors carry the byte offset of the offending token and a hint
/// about what the grammar wanted there.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at byte {offset}: expected {expected}, found {found}")]
pub struct ParseError {
    pub offset: usize,
    pub expected: String,
    pub found: String,
}

/// Implication flavors: `==>` is timeless, `=/>` is predictive (antecedent
/// events lead to the consequent).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ImplKind {
    Plain,
    Predictive,
}

/// Variable namespaces. Independent (`$n`) and dependent (`#n`) variables
/// number independently of each other.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    Independent,
    Dependent,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Atom(String),
    /// `$n`
    IndependentVar(u32),
    /// `#n`
    DependentVar(u32),
    /// `(a * b)`
    Product(Box<Term>, Box<Term>),
    /// `<subject --> predicate>`
    Inheritance(Box<Term>, Box<Term>),
    /// `(e1 &/ e2 &/ ...)`, two or more statement events in order
    Sequence(Vec<Term>),
    /// `A && B`, both operands inheritance statements
    Conjunction(Box<Term>, Box<Term>),
    /// `A ==> B` or `A =/> B`
    Implication(ImplKind, Box<Term>, Box<Term>),
    /// `<args --> ^name>`
    Operation { args: Box<Term>, name: String },
}

impl Term {
    pub fn atom(name: impl Into<String>) -> Term {
        Term::Atom(name.into())
    }

    pub fn product(a: Term, b: Term) -> Term {
        Term::Product(Box::new(a), Box::new(b))
    }

    pub fn inheritance(subject: Term, predicate: Term) -> Term {
        Term::Inheritance(Box::new(subject), Box::new(predicate))
    }

    pub fn sequence(events: Vec<Term>) -> Term {
        debug_assert!(events.len() >= 2, "a sequence needs at least two events");
        debug_assert!(
            events.iter().all(Term::is_statement),
            "sequence events must be statements"
        );
        Term::Sequence(events)
    }

    pub fn conjunction(a: Term, b: Term) -> Term {
        debug_assert!(
            matches!(a, Term::Inheritance(..)) && matches!(b, Term::Inheritance(..)),
            "conjunction operands must be inheritance statements"
        );
        Term::Conjunction(Box::new(a), Box::new(b))
    }

    pub fn implication(kind: ImplKind, antecedent: Term, consequent: Term) -> Term {
        Term::Implication(kind, Box::new(antecedent), Box::new(consequent))
    }

    pub fn operation(args: Term, name: impl Into<String>) -> Term {
        Term::Operation { args: Box::new(args), name: name.into() }
    }

    /// Statements are the `<...>`-bracketed forms: inheritance and operations.
    pub fn is_statement(&self) -> bool {
        matches!(self, Term::Inheritance(..) | Term::Operation { .. })
    }

    /// True if no variables occur anywhere in the term.
    pub fn is_ground(&self) -> bool {
        match self {
            Term::Atom(_) => true,
            Term::IndependentVar(_) | Term::DependentVar(_) => false,
            Term::Product(a, b)
            | Term::Inheritance(a, b)
            | Term::Conjunction(a, b)
            | Term::Implication(_, a, b) => a.is_ground() && b.is_ground(),
            Term::Sequence(es) => es.iter().all(Term::is_ground),
            Term::Operation { args, .. } => args.is_ground(),
        }
    }
}

impl std::str::FromStr for Term {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_term(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Punctuation {
    /// `.`
    Judgment,
    /// `!`
    Goal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tense {
    Eternal,
    /// `:|:` - the sentence describes the present moment
    Present,
}

/// One parsed input line: a term plus punctuation, tense, and (for
/// judgments formed internally) an optional truth value. The parser never
/// fills in `truth`; input sentences carry none and defaults are applied
/// downstream.
#[derive(Clone, Debug, PartialEq)]
pub struct SentenceNode {
    pub term: Term,
    pub punctuation: Punctuation,
    pub tense: Tense,
    pub truth: Option<TruthValue>,
}

impl SentenceNode {
    pub fn new(term: Term, punctuation: Punctuation, tense: Tense) -> Self {
        SentenceNode { term, punctuation, tense, truth: None }
    }
}

/// Renumber variables densely from 1 in order of first occurrence, keeping
/// the `$` and `#` namespaces separate. Two terms that differ only in
/// variable naming canonicalize to the same term; the operation is
/// idempotent and leaves ground terms untouched.
pub fn canonicalize_variables(term: &Term) -> Term {
    use std::collections::BTreeMap;

    fn number(
        t: &Term,
        ind: &mut BTreeMap<u32, u32>,
        dep: &mut BTreeMap<u32, u32>,
    ) {
        match t {
            Term::Atom(_) => {}
            Term::IndependentVar(n) => {
                let next = ind.len() as u32 + 1;
                ind.entry(*n).or_insert(next);
            }
            Term::DependentVar(n) => {
                let next = dep.len() as u32 + 1;
                dep.entry(*n).or_insert(next);
            }
            Term::Product(a, b)
            | Term::Inheritance(a, b)
            | Term::Conjunction(a, b)
            | Term::Implication(_, a, b) => {
                number(a, ind, dep);
                number(b, ind, dep);
            }
            Term::Sequence(es) => es.iter().for_each(|e| number(e, ind, dep)),
            Term::Operation { args, .. } => number(args, ind, dep),
        }
    }

    fn rename(t: &Term, ind: &BTreeMap<u32, u32>, dep: &BTreeMap<u32, u32>) -> Term {
        match t {
            Term::Atom(s) => Term::Atom(s.clone()),
            Term::IndependentVar(n) => Term::IndependentVar(ind[n]),
            Term::DependentVar(n) => Term::DependentVar(dep[n]),
            Term::Product(a, b) => Term::product(rename(a, ind, dep), rename(b, ind, dep)),
            Term::Inheritance(a, b) => {
                Term::inheritance(rename(a, ind, dep), rename(b, ind, dep))
            }
            Term::Conjunction(a, b) => {
                Term::Conjunction(Box::new(rename(a, ind, dep)), Box::new(rename(b, ind, dep)))
            }
            Term::Implication(k, a, b) => {
                Term::implication(*k, rename(a, ind, dep), rename(b, ind, dep))
            }
            Term::Sequence(es) => {
                Term::Sequence(es.iter().map(|e| rename(e, ind, dep)).collect())
            }
            Term::Operation { args, name } => {
                Term::operation(rename(args, ind, dep), name.clone())
            }
        }
    }

    let mut ind = BTreeMap::new();
    let mut dep = BTreeMap::new();
    number(term, &mut ind, &mut dep);
    rename(term, &ind, &dep)
}

/// Collapse runs of whitespace to single spaces and normalize the en-dash
/// copula variant, so multi-line source listings compare equal to canonical
/// single-line prints.
pub fn normalize_text(text: &str) -> String {
    let replaced = text.replace("\u{2013}>", "-->");
    replaced.split_whitespace().collect::<Vec<_>>().join(" ")
}
