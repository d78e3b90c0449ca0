//! The abstraction ladder. One reinforced trial becomes, in order:
//!
//! 1. a *contingency*: the literal event sequence that led to reward,
//! 2. an *acquired relation*: the stimulus pair and location pair pulled out
//!    of that sequence, with the higher-order implication tying them back to
//!    the rewarded behavior,
//! 3. a *variable schema*: the anti-unification of several such implications,
//! 4. a *named relation*: `<(a * b) --> CUE>`, the pair filed under the cue
//!    that was active,
//! 5. *entailment hypotheses*: induced rules over named relations, either
//!    mutual (`(a,b) R` entails `(b,a) R'`) or combinatorial (two relations
//!    sharing a middle stimulus entail a third).
//!
//! Everything here is pure term manipulation; the engine owns memory,
//! revision, and when each rung fires.

use crate::narsese::{ImplKind, Term};
use crate::truth::{Stamp, TruthValue};
use crate::unify::unify;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Matching responses the agent can make: pick the left or the right
/// comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Action {
    Left,
    Right,
}

impl Action {
    pub fn location(self) -> &'static str {
        match self {
            Action::Left => "left",
            Action::Right => "right",
        }
    }

    pub fn opposite(self) -> Action {
        match self {
            Action::Left => Action::Right,
            Action::Right => Action::Left,
        }
    }

    pub const ALL: [Action; 2] = [Action::Left, Action::Right];
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.location())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LadderError {
    #[error("trial events missing the {0} presentation")]
    IncompleteTrial(&'static str),
    #[error("contingency was not reinforced")]
    NotReinforced,
    #[error("implications do not share one shape")]
    ShapeMismatch,
}

// Fixed vocabulary of the trial encoding. Places name screen positions,
// `loc`/`ocr` type the subject product as place-times-object, `G` is the
// reward event.
pub const CUE_PLACE: &str = "rel";
pub const SAMPLE_PLACE: &str = "sample";
pub const GOAL: &str = "G";
pub const SELF_TOKEN: &str = "{SELF}";
pub const MATCH_OP: &str = "match";
pub const SAME_CUE: &str = "SAME";
pub const OPPOSITE_CUE: &str = "OPPOSITE";

pub fn goal_term() -> Term {
    Term::atom(GOAL)
}

pub fn same_cue() -> Term {
    Term::atom(SAME_CUE)
}

pub fn opposite_cue() -> Term {
    Term::atom(OPPOSITE_CUE)
}

/// The other member of the two-cue alphabet, if `cue` belongs to it.
pub fn other_cue(cue: &Term) -> Option<Term> {
    match cue {
        Term::Atom(name) if name == SAME_CUE => Some(opposite_cue()),
        Term::Atom(name) if name == OPPOSITE_CUE => Some(same_cue()),
        _ => None,
    }
}

/// `<(place * thing) --> (loc * ocr)>`: `thing` is shown at `place`.
pub fn location_event(place: &str, thing: &Term) -> Term {
    Term::inheritance(
        Term::product(Term::atom(place), thing.clone()),
        Term::product(Term::atom("loc"), Term::atom("ocr")),
    )
}

/// `<({SELF} * (sample * side)) --> ^match>`: match the sample to a side.
pub fn action_term(action: Action) -> Term {
    Term::operation(
        Term::product(
            Term::atom(SELF_TOKEN),
            Term::product(Term::atom(SAMPLE_PLACE), Term::atom(action.location())),
        ),
        MATCH_OP,
    )
}

/// Pull `(place, thing)` back out of a location event.
pub fn location_event_parts(t: &Term) -> Option<(&str, &Term)> {
    let Term::Inheritance(subject, predicate) = t else { return None };
    let Term::Product(place, thing) = &**subject else { return None };
    let Term::Atom(place) = &**place else { return None };
    let Term::Product(l, o) = &**predicate else { return None };
    if matches!(&**l, Term::Atom(n) if n == "loc") && matches!(&**o, Term::Atom(n) if n == "ocr") {
        Some((place, thing))
    } else {
        None
    }
}

/// One trial's worth of rewarded (or punished) behavior: the cue, the
/// sample, the comparison that was picked and where it sat, and the action
/// that picked it. Round-trips to the predictive implication
/// `(cue &/ sample &/ chosen &/ ^match) =/> G`.
#[derive(Clone, Debug, PartialEq)]
pub struct Contingency {
    pub cue: Term,
    pub sample: Term,
    pub comparison: Term,
    pub action: Action,
    pub truth: TruthValue,
    pub stamp: Stamp,
}

impl Contingency {
    pub fn term(&self) -> Term {
        Term::implication(
            ImplKind::Predictive,
            Term::sequence(vec![
                location_event(CUE_PLACE, &self.cue),
                location_event(SAMPLE_PLACE, &self.sample),
                location_event(self.action.location(), &self.comparison),
                action_term(self.action),
            ]),
            goal_term(),
        )
    }

    pub fn reinforced(&self) -> bool {
        self.truth.expectation() > 0.5
    }
}

/// Build the contingency for a finished trial from the presentation events
/// and the action taken. `events` may hold the four presentations in any
/// order; the comparison on the chosen side becomes part of the contingency.
pub fn form_contingency(
    events: &[Term],
    action: Action,
    reinforced: bool,
    stamp: Stamp,
) -> Result<Contingency, LadderError> {
    let mut cue = None;
    let mut sample = None;
    let mut left = None;
    let mut right = None;
    for event in events {
        match location_event_parts(event) {
            Some((CUE_PLACE, thing)) => cue = Some(thing.clone()),
            Some((SAMPLE_PLACE, thing)) => sample = Some(thing.clone()),
            Some(("left", thing)) => left = Some(thing.clone()),
            Some(("right", thing)) => right = Some(thing.clone()),
            _ => {}
        }
    }
    let chosen = match action {
        Action::Left => left.ok_or(LadderError::IncompleteTrial("left comparison"))?,
        Action::Right => right.ok_or(LadderError::IncompleteTrial("right comparison"))?,
    };
    Ok(Contingency {
        cue: cue.ok_or(LadderError::IncompleteTrial("cue"))?,
        sample: sample.ok_or(LadderError::IncompleteTrial("sample"))?,
        comparison: chosen,
        action,
        truth: TruthValue::induction_evidence(reinforced),
        stamp,
    })
}

/// The relational pattern inside a contingency, separated into what related
/// (the stimulus pair) and where (the location pair). Prints as
/// `<(a * b) --> (ocr * ocr)> && <(l1 * l2) --> (loc * loc)>`.
#[derive(Clone, Debug, PartialEq)]
pub struct AcquiredRelation {
    pub stimuli: (Term, Term),
    pub locations: (Term, Term),
    pub truth: TruthValue,
}

impl AcquiredRelation {
    pub fn term(&self) -> Term {
        Term::conjunction(
            Term::inheritance(
                Term::product(self.stimuli.0.clone(), self.stimuli.1.clone()),
                Term::product(Term::atom("ocr"), Term::atom("ocr")),
            ),
            Term::inheritance(
                Term::product(self.locations.0.clone(), self.locations.1.clone()),
                Term::product(Term::atom("loc"), Term::atom("loc")),
            ),
        )
    }
}

/// Abstract a reinforced contingency into its acquired relation and the
/// higher-order implication that re-derives the rewarded behavior from it.
/// The implication's consequent keeps only the behavior-relevant events; the
/// cue presentation drops out and comes back later through named relations.
pub fn abstract_acquired_relation(
    c: &Contingency,
) -> Result<(AcquiredRelation, Term), LadderError> {
    if !c.reinforced() {
        return Err(LadderError::NotReinforced);
    }
    let relation = AcquiredRelation {
        stimuli: (c.sample.clone(), c.comparison.clone()),
        locations: (Term::atom(SAMPLE_PLACE), Term::atom(c.action.location())),
        truth: c.truth,
    };
    let implication = Term::implication(
        ImplKind::Plain,
        relation.term(),
        Term::implication(
            ImplKind::Predictive,
            Term::sequence(vec![
                location_event(SAMPLE_PLACE, &c.sample),
                location_event(c.action.location(), &c.comparison),
                action_term(c.action),
            ]),
            goal_term(),
        ),
    );
    Ok((relation, implication))
}

/// Anti-unify a set of same-shaped implications into one variable schema.
///
/// An atom position turns into a variable when its atoms differ across
/// instances; positions whose atoms agree stay ground, except that the two
/// slots of a pair statement's subject in the antecedent generalize
/// together (a constant slot is promoted when its partner varies, which is
/// what lifts `sample` to a variable alongside `left`/`right`). Positions
/// with the same variation pattern share one variable, so each slot of the
/// antecedent reappears correctly in the consequent.
pub fn generalize_schema(instances: &[Term]) -> Result<Term, LadderError> {
    let first = match instances {
        [] => return Err(LadderError::ShapeMismatch),
        [single] => return Ok(single.clone()),
        [first, ..] => first,
    };

    let mut atom_rows: Vec<Vec<String>> = Vec::with_capacity(instances.len());
    let mut skeletons: Vec<Term> = Vec::with_capacity(instances.len());
    for instance in instances {
        let mut atoms = Vec::new();
        skeletons.push(skeletonize(instance, &mut atoms));
        atom_rows.push(atoms);
    }
    if skeletons.iter().any(|s| s != &skeletons[0]) {
        return Err(LadderError::ShapeMismatch);
    }

    let positions = atom_rows[0].len();
    let tuples: Vec<Vec<&str>> = (0..positions)
        .map(|i| atom_rows.iter().map(|row| row[i].as_str()).collect())
        .collect();
    let mut replaced: BTreeSet<&[&str]> = tuples
        .iter()
        .filter(|t| t.iter().any(|a| *a != t[0]))
        .map(|t| t.as_slice())
        .collect();
    for (p, q) in antecedent_pair_positions(first) {
        if replaced.contains(tuples[p].as_slice()) || replaced.contains(tuples[q].as_slice()) {
            replaced.insert(&tuples[p]);
            replaced.insert(&tuples[q]);
        }
    }

    let mut numbers: BTreeMap<&[&str], u32> = BTreeMap::new();
    for tuple in &tuples {
        if replaced.contains(tuple.as_slice()) && !numbers.contains_key(tuple.as_slice()) {
            let next = numbers.len() as u32 + 1;
            numbers.insert(tuple, next);
        }
    }

    let mut pos = 0;
    Ok(rebuild(first, &mut pos, &|i| {
        numbers.get(tuples[i].as_slice()).copied()
    }))
}

/// Copy a term with every atom replaced by a placeholder, collecting the
/// atom names in traversal order. Two terms share a shape exactly when
/// their skeletons are equal.
fn skeletonize(t: &Term, atoms: &mut Vec<String>) -> Term {
    match t {
        Term::Atom(name) => {
            atoms.push(name.clone());
            Term::atom("_")
        }
        Term::IndependentVar(_) | Term::DependentVar(_) => t.clone(),
        Term::Product(a, b) => Term::product(skeletonize(a, atoms), skeletonize(b, atoms)),
        Term::Inheritance(s, p) => {
            Term::inheritance(skeletonize(s, atoms), skeletonize(p, atoms))
        }
        Term::Sequence(es) => {
            Term::Sequence(es.iter().map(|e| skeletonize(e, atoms)).collect())
        }
        Term::Conjunction(a, b) => Term::Conjunction(
            Box::new(skeletonize(a, atoms)),
            Box::new(skeletonize(b, atoms)),
        ),
        Term::Implication(k, a, c) => {
            Term::implication(*k, skeletonize(a, atoms), skeletonize(c, atoms))
        }
        Term::Operation { args, name } => {
            Term::operation(skeletonize(args, atoms), name.clone())
        }
    }
}

/// Atom-position pairs `(i, i+1)` for every `(atom * atom)` subject of a
/// statement in the implication's antecedent. Positions count atoms in the
/// same traversal order as `skeletonize`.
fn antecedent_pair_positions(t: &Term) -> Vec<(usize, usize)> {
    fn count_atoms(t: &Term) -> usize {
        match t {
            Term::Atom(_) => 1,
            Term::IndependentVar(_) | Term::DependentVar(_) => 0,
            Term::Product(a, b)
            | Term::Inheritance(a, b)
            | Term::Conjunction(a, b)
            | Term::Implication(_, a, b) => count_atoms(a) + count_atoms(b),
            Term::Sequence(es) => es.iter().map(count_atoms).sum(),
            Term::Operation { args, .. } => count_atoms(args),
        }
    }

    fn scan_statements(t: &Term, offset: usize, pairs: &mut Vec<(usize, usize)>) {
        match t {
            Term::Conjunction(a, b) => {
                scan_statements(a, offset, pairs);
                scan_statements(b, offset + count_atoms(a), pairs);
            }
            Term::Inheritance(subject, _) => {
                if let Term::Product(a, b) = &**subject {
                    if matches!(&**a, Term::Atom(_)) && matches!(&**b, Term::Atom(_)) {
                        pairs.push((offset, offset + 1));
                    }
                }
            }
            _ => {}
        }
    }

    let mut pairs = Vec::new();
    if let Term::Implication(_, antecedent, _) = t {
        scan_statements(antecedent, 0, &mut pairs);
    }
    pairs
}

/// Rebuild a term, substituting a variable at every atom position the
/// assignment covers. Traversal order matches `skeletonize`.
fn rebuild(t: &Term, pos: &mut usize, assign: &dyn Fn(usize) -> Option<u32>) -> Term {
    match t {
        Term::Atom(name) => {
            let i = *pos;
            *pos += 1;
            match assign(i) {
                Some(n) => Term::IndependentVar(n),
                None => Term::atom(name.clone()),
            }
        }
        Term::IndependentVar(_) | Term::DependentVar(_) => t.clone(),
        Term::Product(a, b) => {
            let a = rebuild(a, pos, assign);
            Term::product(a, rebuild(b, pos, assign))
        }
        Term::Inheritance(s, p) => {
            let s = rebuild(s, pos, assign);
            Term::inheritance(s, rebuild(p, pos, assign))
        }
        Term::Sequence(es) => {
            Term::Sequence(es.iter().map(|e| rebuild(e, pos, assign)).collect())
        }
        Term::Conjunction(a, b) => {
            let a = rebuild(a, pos, assign);
            Term::Conjunction(Box::new(a), Box::new(rebuild(b, pos, assign)))
        }
        Term::Implication(k, a, c) => {
            let a = rebuild(a, pos, assign);
            Term::implication(*k, a, rebuild(c, pos, assign))
        }
        Term::Operation { args, name } => {
            Term::operation(rebuild(args, pos, assign), name.clone())
        }
    }
}

/// A stimulus pair filed under a relational cue: `<(a * b) --> CUE>`.
#[derive(Clone, Debug, PartialEq)]
pub struct NamedRelation {
    pub cue: Term,
    pub pair: (Term, Term),
    pub truth: TruthValue,
    pub stamp: Stamp,
}

impl NamedRelation {
    pub fn term(&self) -> Term {
        named_term(&self.cue, &self.pair.0, &self.pair.1)
    }

    fn believed(&self) -> bool {
        self.truth.expectation() > 0.5
    }
}

pub fn named_term(cue: &Term, a: &Term, b: &Term) -> Term {
    Term::inheritance(Term::product(a.clone(), b.clone()), cue.clone())
}

/// Pull `(cue, a, b)` back out of a named relation term.
pub fn named_parts(t: &Term) -> Option<(&Term, &Term, &Term)> {
    let Term::Inheritance(subject, cue) = t else { return None };
    let Term::Product(a, b) = &**subject else { return None };
    if matches!(&**cue, Term::Atom(_)) {
        Some((cue, a, b))
    } else {
        None
    }
}

/// Name the relation a reinforced contingency exemplifies: the sample and
/// chosen comparison, filed under the active cue.
pub fn name_relation(c: &Contingency) -> Result<NamedRelation, LadderError> {
    if !c.reinforced() {
        return Err(LadderError::NotReinforced);
    }
    Ok(NamedRelation {
        cue: c.cue.clone(),
        pair: (c.sample.clone(), c.comparison.clone()),
        truth: c.truth,
        stamp: c.stamp.clone(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum HypKind {
    Mutual,
    Combinatorial,
}

/// An induced rule over named relations. `schema` is a variable implication
/// in one of the two canonical shapes; evidence accrues trial by trial.
#[derive(Clone, Debug, PartialEq)]
pub struct EntailmentHypothesis {
    pub kind: HypKind,
    pub schema: Term,
    pub truth: TruthValue,
    pub stamp: Stamp,
}

impl EntailmentHypothesis {
    fn believed(&self) -> bool {
        self.truth.expectation() > 0.5
    }
}

/// `<<($1 * $2) --> R> ==> <($2 * $1) --> R'>>`
pub fn mutual_schema(from: &Term, to: &Term) -> Term {
    Term::implication(
        ImplKind::Plain,
        named_term(from, &Term::IndependentVar(1), &Term::IndependentVar(2)),
        named_term(to, &Term::IndependentVar(2), &Term::IndependentVar(1)),
    )
}

/// `<(<($1 * #1) --> R1> && <(#1 * $2) --> R2>) ==> <($1 * $2) --> R3>>`
pub fn combinatorial_schema(first: &Term, second: &Term, conclusion: &Term) -> Term {
    Term::implication(
        ImplKind::Plain,
        Term::conjunction(
            named_term(first, &Term::IndependentVar(1), &Term::DependentVar(1)),
            named_term(second, &Term::DependentVar(1), &Term::IndependentVar(2)),
        ),
        named_term(conclusion, &Term::IndependentVar(1), &Term::IndependentVar(2)),
    )
}

/// Recover `(R, R')` from a mutual schema term.
pub fn mutual_cues(schema: &Term) -> Option<(&Term, &Term)> {
    let Term::Implication(ImplKind::Plain, antecedent, consequent) = schema else {
        return None;
    };
    let (from, a1, b1) = named_parts(antecedent)?;
    let (to, b2, a2) = named_parts(consequent)?;
    if a1 == a2 && b1 == b2 && matches!(a1, Term::IndependentVar(_)) {
        Some((from, to))
    } else {
        None
    }
}

/// Recover `(R1, R2, R3)` from a combinatorial schema term.
pub fn combinatorial_cues(schema: &Term) -> Option<(&Term, &Term, &Term)> {
    let Term::Implication(ImplKind::Plain, antecedent, consequent) = schema else {
        return None;
    };
    let Term::Conjunction(leg1, leg2) = &**antecedent else { return None };
    let (first, a1, m1) = named_parts(leg1)?;
    let (second, m2, b1) = named_parts(leg2)?;
    let (conclusion, a2, b2) = named_parts(consequent)?;
    if a1 == a2 && b1 == b2 && m1 == m2 && matches!(m1, Term::DependentVar(_)) {
        Some((first, second, conclusion))
    } else {
        None
    }
}

/// One observation about a hypothesis: the schema it bears on and whether
/// the stored relations confirmed or contradicted its prediction this time.
/// Contradictions only ever weigh against hypotheses that already exist.
#[derive(Clone, Debug, PartialEq)]
pub struct HypothesisInstance {
    pub kind: HypKind,
    pub schema: Term,
    pub confirmed: bool,
}

/// Enumerate every hypothesis instance the just-updated relation completes,
/// as first leg, second leg, or conclusion. `all` is the whole named-relation
/// store, normally including `updated` itself.
pub fn entailment_instances(
    updated: &NamedRelation,
    all: &[NamedRelation],
) -> Vec<HypothesisInstance> {
    let mut out: Vec<HypothesisInstance> = Vec::new();
    if !updated.believed() {
        return out;
    }
    let believed: Vec<&NamedRelation> = all.iter().filter(|r| r.believed()).collect();
    let (a, b) = (&updated.pair.0, &updated.pair.1);

    let cues_on = |x: &Term, y: &Term| -> Vec<&Term> {
        believed
            .iter()
            .filter(|r| &r.pair.0 == x && &r.pair.1 == y)
            .map(|r| &r.cue)
            .collect()
    };

    // For a fully observed triple or pair, every stored conclusion cue
    // confirms its hypothesis; the opposite cue, if absent from the store,
    // contradicts its own.
    let push_conclusions = |out: &mut Vec<HypothesisInstance>,
                                kind: HypKind,
                                make: &dyn Fn(&Term) -> Term,
                                found: &[&Term]| {
        for cue in found {
            out.push(HypothesisInstance { kind, schema: make(cue), confirmed: true });
            if let Some(other) = other_cue(cue) {
                if !found.contains(&&other) {
                    out.push(HypothesisInstance { kind, schema: make(&other), confirmed: false });
                }
            }
        }
    };

    // Mutual: the updated pair alongside its reverse.
    if a != b {
        let reversed = cues_on(b, a);
        push_conclusions(
            &mut out,
            HypKind::Mutual,
            &|cue| mutual_schema(&updated.cue, cue),
            &reversed,
        );
        for cue in &reversed {
            push_conclusions(
                &mut out,
                HypKind::Mutual,
                &|conclusion| mutual_schema(cue, conclusion),
                &[&updated.cue],
            );
        }
    }

    // Combinatorial, updated as first leg: (a,b) then (b,c), concluding (a,c).
    for second in &believed {
        if &second.pair.0 != b {
            continue;
        }
        let c = &second.pair.1;
        let found = cues_on(a, c);
        push_conclusions(
            &mut out,
            HypKind::Combinatorial,
            &|cue| combinatorial_schema(&updated.cue, &second.cue, cue),
            &found,
        );
    }

    // Updated as second leg: (x,a) then (a,b), concluding (x,b).
    for first in &believed {
        if &first.pair.1 != a {
            continue;
        }
        let x = &first.pair.0;
        let found = cues_on(x, b);
        push_conclusions(
            &mut out,
            HypKind::Combinatorial,
            &|cue| combinatorial_schema(&first.cue, &updated.cue, cue),
            &found,
        );
    }

    // Updated as conclusion: (a,m) then (m,b), concluding on (a,b).
    for first in &believed {
        if &first.pair.0 != a {
            continue;
        }
        let m = &first.pair.1;
        for second in &believed {
            if &second.pair.0 != m || &second.pair.1 != b {
                continue;
            }
            let found = cues_on(a, b);
            push_conclusions(
                &mut out,
                HypKind::Combinatorial,
                &|cue| combinatorial_schema(&first.cue, &second.cue, cue),
                &found,
            );
        }
    }

    // A schema may be reachable several ways in one pass; keep the first
    // mention, and let a confirmation shadow any contradiction of the same
    // schema.
    let confirmed_schemas: BTreeSet<&Term> =
        out.iter().filter(|i| i.confirmed).map(|i| &i.schema).collect();
    let mut seen = BTreeSet::new();
    out.iter()
        .filter(|i| i.confirmed || !confirmed_schemas.contains(&i.schema))
        .filter(|i| seen.insert((i.schema.clone(), i.confirmed)))
        .cloned()
        .collect()
}

/// One way of supporting a relational claim: its truth and the evidence
/// trail behind it.
#[derive(Clone, Debug)]
struct Support {
    cue: Term,
    truth: TruthValue,
    stamp: Stamp,
}

/// Derive a cue for an untrained pair by chaining hypotheses over stored
/// relations: invert through a mutual hypothesis, or bridge through any
/// shared middle stimulus with a combinatorial one (each leg may itself be
/// inverted once). Truth follows deduction along the chain; independent
/// chains for the same cue revise together; the best expectation wins.
pub fn derive_named(
    pair: (&Term, &Term),
    named: &[NamedRelation],
    hypotheses: &[EntailmentHypothesis],
    stamp_cap: usize,
) -> Option<(Term, TruthValue)> {
    let believed: Vec<&NamedRelation> = named.iter().filter(|r| r.believed()).collect();
    let mutuals: Vec<(&Term, &Term, &EntailmentHypothesis)> = hypotheses
        .iter()
        .filter(|h| h.kind == HypKind::Mutual && h.believed())
        .filter_map(|h| mutual_cues(&h.schema).map(|(from, to)| (from, to, h)))
        .collect();
    let combs: Vec<(&Term, &Term, &Term, &EntailmentHypothesis)> = hypotheses
        .iter()
        .filter(|h| h.kind == HypKind::Combinatorial && h.believed())
        .filter_map(|h| combinatorial_cues(&h.schema).map(|(r1, r2, r3)| (r1, r2, r3, h)))
        .collect();

    let legs = |x: &Term, y: &Term, include_direct: bool| -> Vec<Support> {
        let mut out = Vec::new();
        for rel in &believed {
            if include_direct && &rel.pair.0 == x && &rel.pair.1 == y {
                out.push(Support {
                    cue: rel.cue.clone(),
                    truth: rel.truth,
                    stamp: rel.stamp.clone(),
                });
            }
            if &rel.pair.0 == y && &rel.pair.1 == x {
                for (from, to, hyp) in &mutuals {
                    if *from == &rel.cue {
                        out.push(Support {
                            cue: (*to).clone(),
                            truth: hyp.truth.deduction(&rel.truth),
                            stamp: rel.stamp.merge(&hyp.stamp, 0, stamp_cap),
                        });
                    }
                }
            }
        }
        out
    };

    let mut candidates: Vec<Support> = legs(pair.0, pair.1, false);

    let middles: BTreeSet<&Term> = believed
        .iter()
        .flat_map(|r| [&r.pair.0, &r.pair.1])
        .filter(|m| *m != pair.0 && *m != pair.1)
        .collect();
    for middle in middles {
        let first_legs = legs(pair.0, middle, true);
        if first_legs.is_empty() {
            continue;
        }
        let second_legs = legs(middle, pair.1, true);
        for leg1 in &first_legs {
            for leg2 in &second_legs {
                for (r1, r2, r3, hyp) in &combs {
                    if *r1 == &leg1.cue && *r2 == &leg2.cue {
                        let antecedent = leg1.truth.deduction(&leg2.truth);
                        let stamp = leg1
                            .stamp
                            .merge(&leg2.stamp, 0, stamp_cap)
                            .merge(&hyp.stamp, 0, stamp_cap);
                        candidates.push(Support {
                            cue: (*r3).clone(),
                            truth: hyp.truth.deduction(&antecedent),
                            stamp,
                        });
                    }
                }
            }
        }
    }

    // Fold candidates per cue, strongest first, revising whenever the
    // evidence trails do not overlap.
    let mut by_cue: BTreeMap<Term, Vec<Support>> = BTreeMap::new();
    for c in candidates {
        by_cue.entry(c.cue.clone()).or_default().push(c);
    }
    let mut best: Option<(Term, TruthValue)> = None;
    for (cue, mut supports) in by_cue {
        supports.sort_by(|a, b| {
            b.truth
                .expectation()
                .partial_cmp(&a.truth.expectation())
                .expect("expectations are finite")
        });
        let mut folded = supports[0].clone();
        for s in &supports[1..] {
            if folded.stamp.disjoint(&s.stamp) {
                folded.truth = folded.truth.revise(&s.truth);
                folded.stamp = folded.stamp.merge(&s.stamp, 0, stamp_cap);
            }
        }
        let better = match &best {
            None => true,
            Some((_, t)) => folded.truth.expectation() > t.expectation(),
        };
        if better {
            best = Some((cue, folded.truth));
        }
    }
    best
}

/// Bind a schema's behavior pattern against hypothetical trial events and
/// return the stimulus pair its antecedent would need. `events` must be the
/// sample presentation, the chosen comparison presentation, and the action,
/// in that order.
pub fn schema_required_pair(schema: &Term, events: &[Term]) -> Option<(Term, Term)> {
    let Term::Implication(ImplKind::Plain, antecedent, consequent) = schema else {
        return None;
    };
    let Term::Implication(ImplKind::Predictive, pattern, _) = &**consequent else {
        return None;
    };
    let target = Term::Sequence(events.to_vec());
    let subst = unify(pattern, &target)?;
    let needed = subst.apply(antecedent);
    if !needed.is_ground() {
        return None;
    }
    let Term::Conjunction(pair_statement, _) = &needed else { return None };
    let Term::Inheritance(subject, _) = &**pair_statement else { return None };
    let Term::Product(a, b) = &**subject else { return None };
    Some(((**a).clone(), (**b).clone()))
}
