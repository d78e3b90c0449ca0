//! One-sided pattern matching over terms.
//!
//! `unify(pattern, target)` finds the substitution that makes a
//! variable-bearing pattern equal to a target term, if one exists. Matching
//! is one-sided: only the pattern's variables bind, and any variable on the
//! target side must be matched literally. That is all schema instantiation
//! and hypothesis application need, and it keeps the contract simple:
//! whenever a substitution comes back, applying it to the pattern
//! reproduces the target exactly.

use crate::narsese::{Term, VarKind};
use std::collections::BTreeMap;

/// A binding of variables to terms, keyed by namespace and number.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: BTreeMap<(VarKind, u32), Term>,
}

impl Substitution {
    pub fn get(&self, kind: VarKind, n: u32) -> Option<&Term> {
        self.bindings.get(&(kind, n))
    }

    pub fn bind(&mut self, kind: VarKind, n: u32, value: Term) {
        self.bindings.insert((kind, n), value);
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    /// Replace every bound variable in `term` with its binding. Unbound
    /// variables stay as they are.
    pub fn apply(&self, term: &Term) -> Term {
        match term {
            Term::Atom(_) => term.clone(),
            Term::IndependentVar(n) => self
                .get(VarKind::Independent, *n)
                .cloned()
                .unwrap_or_else(|| term.clone()),
            Term::DependentVar(n) => self
                .get(VarKind::Dependent, *n)
                .cloned()
                .unwrap_or_else(|| term.clone()),
            Term::Product(a, b) => Term::product(self.apply(a), self.apply(b)),
            Term::Inheritance(s, p) => Term::inheritance(self.apply(s), self.apply(p)),
            Term::Sequence(es) => Term::Sequence(es.iter().map(|e| self.apply(e)).collect()),
            Term::Conjunction(a, b) => {
                Term::Conjunction(Box::new(self.apply(a)), Box::new(self.apply(b)))
            }
            Term::Implication(k, a, c) => Term::implication(*k, self.apply(a), self.apply(c)),
            Term::Operation { args, name } => Term::operation(self.apply(args), name.clone()),
        }
    }
}

/// Match `pattern` against `target`, binding the pattern's variables.
/// Returns `None` when the shapes differ or a variable would need two
/// different values.
pub fn unify(pattern: &Term, target: &Term) -> Option<Substitution> {
    let mut subst = Substitution::default();
    if walk(pattern, target, &mut subst) {
        Some(subst)
    } else {
        None
    }
}

fn walk(pattern: &Term, target: &Term, subst: &mut Substitution) -> bool {
    match (pattern, target) {
        (Term::IndependentVar(n), _) => bind_or_check(subst, VarKind::Independent, *n, target),
        (Term::DependentVar(n), _) => bind_or_check(subst, VarKind::Dependent, *n, target),
        (Term::Atom(a), Term::Atom(b)) => a == b,
        (Term::Product(a1, b1), Term::Product(a2, b2))
        | (Term::Inheritance(a1, b1), Term::Inheritance(a2, b2))
        | (Term::Conjunction(a1, b1), Term::Conjunction(a2, b2)) => {
            walk(a1, a2, subst) && walk(b1, b2, subst)
        }
        (Term::Implication(k1, a1, c1), Term::Implication(k2, a2, c2)) => {
            k1 == k2 && walk(a1, a2, subst) && walk(c1, c2, subst)
        }
        (Term::Sequence(xs), Term::Sequence(ys)) => {
            xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| walk(x, y, subst))
        }
        (Term::Operation { args: a1, name: n1 }, Term::Operation { args: a2, name: n2 }) => {
            n1 == n2 && walk(a1, a2, subst)
        }
        _ => false,
    }
}

fn bind_or_check(subst: &mut Substitution, kind: VarKind, n: u32, target: &Term) -> bool {
    match subst.get(kind, n) {
        Some(bound) => bound == target,
        None => {
            subst.bind(kind, n, target.clone());
            true
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::narsese::parse_term;
    use proptest::prelude::*;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn binds_variables_by_position() {
        let subst = unify(&t("<($1 * $2) --> SAME>"), &t("<(X1 * Y1) --> SAME>")).unwrap();
        assert_eq!(subst.get(VarKind::Independent, 1), Some(&Term::atom("X1")));
        assert_eq!(subst.get(VarKind::Independent, 2), Some(&Term::atom("Y1")));
    }

    #[test]
    fn repeated_variable_must_match_consistently() {
        assert!(unify(&t("<($1 * $1) --> SAME>"), &t("<(X1 * X1) --> SAME>")).is_some());
        assert!(unify(&t("<($1 * $1) --> SAME>"), &t("<(X1 * Y1) --> SAME>")).is_none());
    }

    #[test]
    fn namespaces_bind_independently() {
        let subst = unify(&t("($1 * #1)"), &t("(a * b)")).unwrap();
        assert_eq!(subst.get(VarKind::Independent, 1), Some(&Term::atom("a")));
        assert_eq!(subst.get(VarKind::Dependent, 1), Some(&Term::atom("b")));
        assert_eq!(subst.len(), 2);
    }

    #[test]
    fn variables_can_bind_whole_subterms() {
        let subst = unify(&t("<$1 --> SAME>"), &t("<(X1 * Y1) --> SAME>")).unwrap();
        assert_eq!(subst.get(VarKind::Independent, 1), Some(&t("(X1 * Y1)")));
    }

    #[test]
    fn shape_mismatches_fail() {
        assert!(unify(&t("<$1 --> SAME>"), &t("<X1 --> OPPOSITE>")).is_none());
        assert!(unify(&t("(a * b)"), &t("<a --> b>")).is_none());
        assert!(unify(&t("a ==> b"), &t("a =/> b")).is_none());
    }

    #[test]
    fn target_variables_are_literals() {
        // `$1` on the right only matches the same variable on the left.
        assert!(unify(&t("a"), &t("$1")).is_none());
        assert!(unify(&t("$1"), &t("$1")).is_some());
    }

    #[test]
    fn apply_leaves_unbound_variables_alone() {
        let mut subst = Substitution::default();
        subst.bind(VarKind::Independent, 1, Term::atom("X1"));
        assert_eq!(subst.apply(&t("<($1 * $2) --> SAME>")), t("<(X1 * $2) --> SAME>"));
    }

    #[test]
    fn schema_consequent_matching_recovers_trial_bindings() {
        let pattern = t(
            "(<($3 * $1) --> (loc * ocr)> &/ <($4 * $2) --> (loc * ocr)> &/ <({SELF} * ($3 * $4)) --> ^match>)",
        );
        let target = t(
            "(<(sample * X1) --> (loc * ocr)> &/ <(left * Y1) --> (loc * ocr)> &/ <({SELF} * (sample * left)) --> ^match>)",
        );
        let subst = unify(&pattern, &target).unwrap();
        assert_eq!(subst.get(VarKind::Independent, 1), Some(&Term::atom("X1")));
        assert_eq!(subst.get(VarKind::Independent, 2), Some(&Term::atom("Y1")));
        assert_eq!(subst.get(VarKind::Independent, 3), Some(&Term::atom("sample")));
        assert_eq!(subst.get(VarKind::Independent, 4), Some(&Term::atom("left")));
    }

    fn arb_ground_operand() -> BoxedStrategy<Term> {
        let leaf = "[a-z][a-z0-9]{0,3}".prop_map(Term::Atom).boxed();
        leaf.prop_recursive(3, 16, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::product(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| Term::inheritance(a, b)),
            ]
        })
        .boxed()
    }

    fn arb_pattern_operand() -> BoxedStrategy<Term> {
        let leaf = prop_oneof![
            3 => "[a-z][a-z0-9]{0,3}".prop_map(Term::Atom),
            2 => (1u32..4).prop_map(Term::IndependentVar),
            1 => (1u32..3).prop_map(Term::DependentVar),
        ]
        .boxed();
        leaf.prop_recursive(3, 16, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::product(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| Term::inheritance(a, b)),
            ]
        })
        .boxed()
    }

    proptest! {
        // Ground out a pattern with a random substitution; matching the
        // pattern against the result must succeed and reproduce it.
        #[test]
        fn unify_inverts_apply(
            pattern in arb_pattern_operand(),
            values in proptest::collection::vec(arb_ground_operand(), 6),
        ) {
            let mut grounding = Substitution::default();
            for (i, v) in values.iter().take(3).enumerate() {
                grounding.bind(VarKind::Independent, i as u32 + 1, v.clone());
            }
            for (i, v) in values.iter().skip(3).enumerate() {
                grounding.bind(VarKind::Dependent, i as u32 + 1, v.clone());
            }
            let target = grounding.apply(&pattern);
            prop_assert!(target.is_ground());
            let recovered = unify(&pattern, &target)
                .ok_or_else(|| TestCaseError::fail("no match"))?;
            prop_assert_eq!(recovered.apply(&pattern), target);
        }

        // Any successful match must make the pattern equal to the target.
        #[test]
        fn successful_match_is_sound(
            pattern in arb_pattern_operand(),
            target in arb_ground_operand(),
        ) {
            if let Some(subst) = unify(&pattern, &target) {
                prop_assert_eq!(subst.apply(&pattern), target);
            }
        }
    }
}
