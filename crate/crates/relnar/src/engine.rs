//! The reasoning engine: a state machine advanced by `ingest` calls.
//!
//! Present-tense judgments queue up in a bounded event buffer. A goal pulls
//! the current trial out of the buffer and picks an action: argmax goal
//! expectation over the learned routes when something clears the decision
//! threshold, uniformly random motor babbling otherwise. Feedback then runs
//! the abstraction ladder from `acquisition` and files every rung into
//! belief memory, where revision is gated by evidential stamps.
//!
//! Memory is one flat map from canonical term to belief. The named
//! relations, variable schemas, and entailment hypotheses that the decision
//! routes need are recognized by shape, not stored separately, so anything
//! ingested as an eternal judgment participates exactly like a learned
//! belief.

use crate::acquisition::{
    self, abstract_acquired_relation, action_term, combinatorial_cues, derive_named,
    entailment_instances, form_contingency, generalize_schema, goal_term, location_event,
    location_event_parts, mutual_cues, name_relation, named_parts, other_cue,
    schema_required_pair, Action, EntailmentHypothesis, HypKind, LadderError, NamedRelation,
    CUE_PLACE, SAMPLE_PLACE,
};
use crate::narsese::{ImplKind, Punctuation, SentenceNode, Tense, Term};
use crate::truth::{Stamp, TruthValue, DEFAULT_EVIDENCE_CAP};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, VecDeque};

#[derive(Clone, Debug)]
pub struct EngineConfig {
    /// Act only when the best goal expectation reaches this; babble below.
    pub decision_threshold: f64,
    /// Multiplicative priority decay applied to every belief per cycle.
    pub priority_decay: f64,
    /// Event buffer capacity; older events are evicted beyond it.
    pub buffer_capacity: usize,
    /// Largest evidence trail a stamp keeps before dropping oldest ids.
    pub stamp_cap: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            decision_threshold: 0.505,
            priority_decay: 0.99,
            buffer_capacity: 8,
            stamp_cap: DEFAULT_EVIDENCE_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("trial is missing the {0} presentation")]
    IncompleteTrial(&'static str),
    #[error("no action is awaiting feedback")]
    NoPendingAction,
}

impl From<LadderError> for EngineError {
    fn from(e: LadderError) -> Self {
        match e {
            LadderError::IncompleteTrial(what) => EngineError::IncompleteTrial(what),
            // The remaining ladder errors are guarded against before calls.
            LadderError::NotReinforced | LadderError::ShapeMismatch => {
                unreachable!("ladder preconditions enforced by the engine")
            }
        }
    }
}

/// One remembered statement with its evidence and an attention weight.
#[derive(Clone, Debug)]
pub struct Belief {
    pub term: Term,
    pub truth: TruthValue,
    pub stamp: Stamp,
    pub priority: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EngineStats {
    pub decisions: u64,
    pub babbles: u64,
    pub feedback_events: u64,
}

/// The four presentations of the current trial, pulled from the buffer.
struct Trial {
    cue: Term,
    sample: Term,
    left: Term,
    right: Term,
}

impl Trial {
    fn events(&self) -> Vec<Term> {
        vec![
            location_event(CUE_PLACE, &self.cue),
            location_event(SAMPLE_PLACE, &self.sample),
            location_event("left", &self.left),
            location_event("right", &self.right),
        ]
    }

    fn comparison(&self, action: Action) -> &Term {
        match action {
            Action::Left => &self.left,
            Action::Right => &self.right,
        }
    }
}

struct PendingTrial {
    events: Vec<Term>,
    action: Action,
}

pub struct Engine {
    config: EngineConfig,
    rng: ChaCha8Rng,
    tick: u64,
    next_evidence: u64,
    buffer: VecDeque<(SentenceNode, u64)>,
    memory: BTreeMap<Term, Belief>,
    pending: Option<PendingTrial>,
    trace: Vec<String>,
    stats: EngineStats,
}

const NEW_BELIEF_PRIORITY: f64 = 0.8;
/// Default evidence strength for eternal judgments fed in from outside.
const INPUT_TRUTH: (f64, f64) = (1.0, 0.9);

impl Engine {
    pub fn new(config: EngineConfig, seed: u64) -> Engine {
        Engine {
            config,
            rng: ChaCha8Rng::seed_from_u64(seed),
            tick: 0,
            next_evidence: 0,
            buffer: VecDeque::new(),
            memory: BTreeMap::new(),
            pending: None,
            trace: Vec::new(),
            stats: EngineStats::default(),
        }
    }

    pub fn stats(&self) -> EngineStats {
        self.stats
    }

    pub fn trace(&self) -> &[String] {
        &self.trace
    }

    pub fn belief(&self, term: &Term) -> Option<&Belief> {
        self.memory.get(term)
    }

    pub fn beliefs(&self) -> impl Iterator<Item = &Belief> {
        self.memory.values()
    }

    /// Feed one sentence into the engine. A goal returns the action it
    /// triggered; everything else returns `None`.
    pub fn ingest(&mut self, sentence: SentenceNode) -> Result<Option<Action>, EngineError> {
        self.tick += 1;
        self.decay_priorities();
        match (sentence.punctuation, sentence.tense) {
            (Punctuation::Judgment, Tense::Present) => {
                if sentence.term == goal_term() && self.pending.is_some() {
                    self.trace_line("reward", &format!("{}", sentence), None);
                    self.conclude_trial(true)?;
                } else {
                    self.buffer_event(sentence);
                }
                Ok(None)
            }
            (Punctuation::Judgment, Tense::Eternal) => {
                let truth = sentence
                    .truth
                    .unwrap_or(TruthValue::new(INPUT_TRUTH.0, INPUT_TRUTH.1));
                let stamp = Stamp::single(self.fresh_evidence(), self.tick);
                let (truth, _) = self.upsert("in", sentence.term, truth, stamp);
                let _ = truth;
                Ok(None)
            }
            (Punctuation::Goal, _) => {
                self.trace_line("goal", &format!("{}", sentence), None);
                if sentence.term == goal_term() {
                    Ok(Some(self.decide()?))
                } else {
                    Ok(None)
                }
            }
        }
    }

    /// Record the outcome of the pending action, running the abstraction
    /// ladder when it was reinforced.
    pub fn process_feedback(&mut self, reinforced: bool) -> Result<(), EngineError> {
        if self.pending.is_none() {
            return Err(EngineError::NoPendingAction);
        }
        let goal = SentenceNode::new(goal_term(), Punctuation::Judgment, Tense::Present);
        let kind = if reinforced { "reward" } else { "norew" };
        self.trace_line(kind, &format!("{goal}"), None);
        self.conclude_trial(reinforced)
    }

    /// Replace the pending action before feedback lands. Lets a script take
    /// over from whatever the engine picked.
    pub fn force_action(&mut self, action: Action) -> Result<(), EngineError> {
        let pending = self.pending.as_mut().ok_or(EngineError::NoPendingAction)?;
        pending.action = action;
        let event = SentenceNode::new(action_term(action), Punctuation::Judgment, Tense::Present);
        self.trace_line("force", &format!("{event}"), None);
        Ok(())
    }

    /// Drop the pending action without any feedback; nothing is learned.
    pub fn clear_pending(&mut self) {
        if let Some(pending) = self.pending.take() {
            let event =
                SentenceNode::new(action_term(pending.action), Punctuation::Judgment, Tense::Present);
            self.trace_line("silent", &format!("{event}"), None);
        }
    }

    pub fn has_pending(&self) -> bool {
        self.pending.is_some()
    }

    /// Every stored relation `<(a * b) --> CUE>`.
    pub fn named_relations(&self) -> Vec<NamedRelation> {
        self.memory
            .values()
            .filter_map(|b| {
                named_parts(&b.term).map(|(cue, x, y)| NamedRelation {
                    cue: cue.clone(),
                    pair: (x.clone(), y.clone()),
                    truth: b.truth,
                    stamp: b.stamp.clone(),
                })
            })
            .collect()
    }

    /// Every stored mutual or combinatorial hypothesis.
    pub fn entailment_hypotheses(&self) -> Vec<EntailmentHypothesis> {
        self.memory
            .values()
            .filter_map(|b| {
                let kind = if mutual_cues(&b.term).is_some() {
                    HypKind::Mutual
                } else if combinatorial_cues(&b.term).is_some() {
                    HypKind::Combinatorial
                } else {
                    return None;
                };
                Some(EntailmentHypothesis {
                    kind,
                    schema: b.term.clone(),
                    truth: b.truth,
                    stamp: b.stamp.clone(),
                })
            })
            .collect()
    }

    /// Mean confidence over stored hypotheses of one kind; 0 when none.
    pub fn hypothesis_confidence(&self, kind: HypKind) -> f64 {
        let confidences: Vec<f64> = self
            .entailment_hypotheses()
            .into_iter()
            .filter(|h| h.kind == kind)
            .map(|h| h.truth.confidence())
            .collect();
        if confidences.is_empty() {
            0.0
        } else {
            confidences.iter().sum::<f64>() / confidences.len() as f64
        }
    }

    /// Variable schemas usable for prediction: trial-shaped implications
    /// that still contain variables.
    pub fn schema_beliefs(&self) -> Vec<&Belief> {
        self.memory
            .values()
            .filter(|b| is_trial_implication(&b.term) && !b.term.is_ground())
            .collect()
    }

    fn decide(&mut self) -> Result<Action, EngineError> {
        self.stats.decisions += 1;
        let trial = self.extract_trial()?;
        let named = self.named_relations();
        let hypotheses = self.entailment_hypotheses();
        let schemas: Vec<(Term, TruthValue)> = self
            .schema_beliefs()
            .iter()
            .map(|b| (b.term.clone(), b.truth))
            .collect();

        let mut best: Option<(Action, TruthValue)> = None;
        for action in Action::ALL {
            let chosen = trial.comparison(action);
            let mut routes: Vec<TruthValue> = Vec::new();

            let contingency = acquisition::Contingency {
                cue: trial.cue.clone(),
                sample: trial.sample.clone(),
                comparison: chosen.clone(),
                action,
                truth: TruthValue::new(1.0, 0.5),
                stamp: Stamp::single(0, 0),
            }
            .term();
            if let Some(belief) = self.memory.get(&contingency) {
                routes.push(belief.truth);
            }

            let hypothetical = vec![
                location_event(SAMPLE_PLACE, &trial.sample),
                location_event(action.location(), chosen),
                action_term(action),
            ];
            for (schema, schema_truth) in &schemas {
                let Some((a, b)) = schema_required_pair(schema, &hypothetical) else {
                    continue;
                };
                let Some(support) = named_support(&a, &b, &trial.cue, &named, &hypotheses, self.config.stamp_cap) else {
                    continue;
                };
                routes.push(support.deduction(schema_truth));
            }

            let Some(combined) = routes
                .into_iter()
                .max_by(|a, b| a.confidence().partial_cmp(&b.confidence()).expect("finite"))
            else {
                continue;
            };
            let better = match &best {
                None => true,
                Some((_, t)) => combined.expectation() > t.expectation(),
            };
            if better {
                best = Some((action, combined));
            }
        }

        let action = match best {
            Some((action, truth)) if truth.expectation() >= self.config.decision_threshold => {
                self.boost_priority(&action_term(action));
                let event =
                    SentenceNode::new(action_term(action), Punctuation::Judgment, Tense::Present);
                self.trace_line("act", &format!("{event}"), Some(truth));
                action
            }
            _ => {
                self.stats.babbles += 1;
                let action = if self.rng.gen::<bool>() { Action::Left } else { Action::Right };
                let event =
                    SentenceNode::new(action_term(action), Punctuation::Judgment, Tense::Present);
                self.trace_line("babble", &format!("{event}"), None);
                action
            }
        };
        self.pending = Some(PendingTrial { events: trial.events(), action });
        Ok(action)
    }

    /// Run the ladder for the pending trial and clear it.
    fn conclude_trial(&mut self, reinforced: bool) -> Result<(), EngineError> {
        let pending = self.pending.take().ok_or(EngineError::NoPendingAction)?;
        self.stats.feedback_events += 1;
        let stamp = Stamp::single(self.fresh_evidence(), self.tick);
        let contingency = form_contingency(&pending.events, pending.action, reinforced, stamp)?;

        self.upsert("contingency", contingency.term(), contingency.truth, contingency.stamp.clone());
        if !reinforced {
            return Ok(());
        }

        let (relation, implication) = abstract_acquired_relation(&contingency)
            .expect("reinforced contingency abstracts");
        self.upsert("relation", relation.term(), relation.truth, contingency.stamp.clone());
        self.upsert("implication", implication, contingency.truth, contingency.stamp.clone());
        self.regenerate_schema();

        let named = name_relation(&contingency).expect("reinforced contingency names");
        let (truth, stamp) =
            self.upsert("named", named.term(), named.truth, named.stamp.clone());
        let updated = NamedRelation { truth, stamp, ..named };
        self.induce(&updated, &contingency.stamp);
        Ok(())
    }

    /// Rebuild the variable schema from every ground trial implication seen
    /// so far. The previous schema is replaced outright: it is a summary of
    /// the instances, not separate evidence.
    fn regenerate_schema(&mut self) {
        let instances: Vec<Term> = self
            .memory
            .values()
            .filter(|b| is_trial_implication(&b.term) && b.term.is_ground())
            .map(|b| b.term.clone())
            .collect();
        if instances.len() < 2 {
            return;
        }
        let schema = match generalize_schema(&instances) {
            Ok(schema) => schema,
            Err(_) => return,
        };
        if schema.is_ground() {
            return;
        }
        let mut truth: Option<TruthValue> = None;
        let mut stamp: Option<Stamp> = None;
        for term in &instances {
            let belief = &self.memory[term];
            truth = Some(match truth {
                None => belief.truth,
                Some(t) => t.revise(&belief.truth),
            });
            stamp = Some(match stamp {
                None => belief.stamp.clone(),
                Some(s) => s.merge(&belief.stamp, self.tick, self.config.stamp_cap),
            });
        }
        let (truth, stamp) = (truth.expect("nonempty"), stamp.expect("nonempty"));

        let old: Vec<Term> = self
            .memory
            .values()
            .filter(|b| is_trial_implication(&b.term) && !b.term.is_ground())
            .map(|b| b.term.clone())
            .collect();
        let changed = old != [schema.clone()];
        for term in old {
            self.memory.remove(&term);
        }
        let priority = NEW_BELIEF_PRIORITY;
        self.memory.insert(
            schema.clone(),
            Belief { term: schema.clone(), truth, stamp, priority },
        );
        if changed {
            self.trace_line("schema", &format!("{schema}."), Some(truth));
        }
    }

    /// Boost or create hypotheses completed by the updated relation.
    fn induce(&mut self, updated: &NamedRelation, trial_stamp: &Stamp) {
        let all = self.named_relations();
        for instance in entailment_instances(updated, &all) {
            let evidence = TruthValue::induction_evidence(instance.confirmed);
            // Confirmations may found a new hypothesis; counterevidence only
            // weighs against hypotheses that already exist.
            if instance.confirmed || self.memory.contains_key(&instance.schema) {
                self.upsert("hypothesis", instance.schema, evidence, trial_stamp.clone());
            }
        }
    }

    /// Insert or revise one belief; revision only on disjoint evidence.
    /// Returns the belief's truth and stamp afterward.
    fn upsert(&mut self, kind: &str, term: Term, truth: TruthValue, stamp: Stamp) -> (TruthValue, Stamp) {
        let (tick, cap) = (self.tick, self.config.stamp_cap);
        let (result, changed) = match self.memory.get_mut(&term) {
            Some(belief) => {
                if belief.stamp.disjoint(&stamp) {
                    belief.truth = belief.truth.revise(&truth);
                    belief.stamp = belief.stamp.merge(&stamp, tick, cap);
                    belief.priority = (belief.priority + 1.0) / 2.0;
                    ((belief.truth, belief.stamp.clone()), true)
                } else {
                    ((belief.truth, belief.stamp.clone()), false)
                }
            }
            None => {
                let belief = Belief {
                    term: term.clone(),
                    truth,
                    stamp: stamp.clone(),
                    priority: NEW_BELIEF_PRIORITY,
                };
                self.memory.insert(term.clone(), belief);
                ((truth, stamp), true)
            }
        };
        if changed {
            self.trace_line(kind, &format!("{term}."), Some(result.0));
        }
        result
    }

    fn buffer_event(&mut self, sentence: SentenceNode) {
        self.trace_line("event", &format!("{sentence}"), None);
        self.buffer.push_back((sentence, self.tick));
        while self.buffer.len() > self.config.buffer_capacity {
            let (evicted, _) = self.buffer.pop_front().expect("nonempty");
            self.trace_line("evict", &format!("{evicted}"), None);
        }
    }

    /// Newest value for each of the four trial places in the buffer.
    fn extract_trial(&self) -> Result<Trial, EngineError> {
        let mut cue = None;
        let mut sample = None;
        let mut left = None;
        let mut right = None;
        for (sentence, _) in self.buffer.iter().rev() {
            let Some((place, thing)) = location_event_parts(&sentence.term) else {
                continue;
            };
            let slot = match place {
                CUE_PLACE => &mut cue,
                SAMPLE_PLACE => &mut sample,
                "left" => &mut left,
                "right" => &mut right,
                _ => continue,
            };
            if slot.is_none() {
                *slot = Some(thing.clone());
            }
        }
        Ok(Trial {
            cue: cue.ok_or(EngineError::IncompleteTrial("cue"))?,
            sample: sample.ok_or(EngineError::IncompleteTrial("sample"))?,
            left: left.ok_or(EngineError::IncompleteTrial("left comparison"))?,
            right: right.ok_or(EngineError::IncompleteTrial("right comparison"))?,
        })
    }

    fn decay_priorities(&mut self) {
        for belief in self.memory.values_mut() {
            belief.priority *= self.config.priority_decay;
        }
    }

    fn boost_priority(&mut self, term: &Term) {
        if let Some(belief) = self.memory.get_mut(term) {
            belief.priority = (belief.priority + 1.0) / 2.0;
        }
    }

    fn fresh_evidence(&mut self) -> u64 {
        self.next_evidence += 1;
        self.next_evidence
    }

    fn trace_line(&mut self, kind: &str, narsese: &str, truth: Option<TruthValue>) {
        let truth = match truth {
            Some(t) => format!("{t}"),
            None => "-".into(),
        };
        self.trace
            .push(format!("{:>5} | {:<11} | {} | {}", self.tick, kind, narsese, truth));
    }
}

/// Trial-shaped implication: `(pair && locations) ==> (3 events) =/> G`.
fn is_trial_implication(t: &Term) -> bool {
    let Term::Implication(ImplKind::Plain, antecedent, consequent) = t else {
        return false;
    };
    if !matches!(&**antecedent, Term::Conjunction(..)) {
        return false;
    }
    let Term::Implication(ImplKind::Predictive, events, goal) = &**consequent else {
        return false;
    };
    matches!(&**events, Term::Sequence(es) if es.len() == 3) && **goal == goal_term()
}

/// How strongly memory supports `<(a * b) --> cue>`: the direct belief, a
/// belief in the opposite cue (negated), or a chain of entailment
/// hypotheses, whichever is most confident.
fn named_support(
    a: &Term,
    b: &Term,
    cue: &Term,
    named: &[NamedRelation],
    hypotheses: &[EntailmentHypothesis],
    stamp_cap: usize,
) -> Option<TruthValue> {
    let mut candidates: Vec<TruthValue> = Vec::new();
    let mut direct = false;
    for rel in named {
        if (&rel.pair.0, &rel.pair.1) != (a, b) {
            continue;
        }
        if &rel.cue == cue {
            candidates.push(rel.truth);
            direct = true;
        } else if other_cue(&rel.cue).as_ref() == Some(cue) {
            candidates.push(rel.truth.negation());
            direct = true;
        }
    }
    if !direct {
        if let Some((derived_cue, truth)) = derive_named((a, b), named, hypotheses, stamp_cap) {
            if &derived_cue == cue {
                candidates.push(truth);
            } else if other_cue(&derived_cue).as_ref() == Some(cue) {
                candidates.push(truth.negation());
            }
        }
    }
    candidates
        .into_iter()
        .max_by(|x, y| x.confidence().partial_cmp(&y.confidence()).expect("finite"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::narsese::parse_sentence;

    fn engine() -> Engine {
        Engine::new(EngineConfig::default(), 7)
    }

    fn feed(e: &mut Engine, line: &str) -> Option<Action> {
        e.ingest(parse_sentence(line).unwrap()).unwrap()
    }

    fn present_trial(e: &mut Engine, cue: &str, sample: &str, left: &str, right: &str) {
        feed(e, &format!("<(rel * {cue}) --> (loc * ocr)>. :|:"));
        feed(e, &format!("<(sample * {sample}) --> (loc * ocr)>. :|:"));
        feed(e, &format!("<(left * {left}) --> (loc * ocr)>. :|:"));
        feed(e, &format!("<(right * {right}) --> (loc * ocr)>. :|:"));
    }

    fn teach(e: &mut Engine, cue: &str, sample: &str, left: &str, right: &str, pick: Action, ok: bool) {
        present_trial(e, cue, sample, left, right);
        feed(e, "G! :|:").unwrap();
        e.force_action(pick).unwrap();
        e.process_feedback(ok).unwrap();
    }

    #[test]
    fn a_trial_plus_goal_yields_an_action_and_feedback_builds_the_ladder() {
        let mut e = engine();
        present_trial(&mut e, "SAME", "X1", "Y1", "Y2");
        let action = feed(&mut e, "G! :|:");
        assert!(action.is_some());
        e.force_action(Action::Left).unwrap();
        feed(&mut e, "G. :|:");

        let contingency = parse_sentence(
            "(<(rel * SAME) --> (loc * ocr)> &/ <(sample * X1) --> (loc * ocr)> &/ <(left * Y1) --> (loc * ocr)> &/ <({SELF} * (sample * left)) --> ^match>) =/> G>.",
        )
        .unwrap()
        .term;
        let belief = e.belief(&contingency).expect("contingency stored");
        assert_eq!(belief.truth, TruthValue::new(1.0, 0.5));

        let named = parse_sentence("<(X1 * Y1) --> SAME>.").unwrap().term;
        let belief = e.belief(&named).expect("named relation stored");
        assert_eq!(belief.truth, TruthValue::new(1.0, 0.5));

        let relation = parse_sentence(
            "<(X1 * Y1) --> (ocr * ocr)> && <(sample * left) --> (loc * loc)>.",
        )
        .unwrap()
        .term;
        assert!(e.belief(&relation).is_some());
    }

    #[test]
    fn repeated_reinforcement_revises_contingency_and_named_relation() {
        let mut e = engine();
        teach(&mut e, "SAME", "X1", "Y1", "Y2", Action::Left, true);
        teach(&mut e, "SAME", "X1", "Y1", "Y2", Action::Left, true);
        let named = parse_sentence("<(X1 * Y1) --> SAME>.").unwrap().term;
        let truth = e.belief(&named).unwrap().truth;
        assert!((truth.confidence() - 2.0 / 3.0).abs() < 1e-12);
        assert!((truth.frequency() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unreinforced_trials_store_counterevidence_and_nothing_else() {
        let mut e = engine();
        teach(&mut e, "SAME", "X1", "Y2", "Y1", Action::Left, false);
        let contingency = parse_sentence(
            "(<(rel * SAME) --> (loc * ocr)> &/ <(sample * X1) --> (loc * ocr)> &/ <(left * Y2) --> (loc * ocr)> &/ <({SELF} * (sample * left)) --> ^match>) =/> G>.",
        )
        .unwrap()
        .term;
        let truth = e.belief(&contingency).unwrap().truth;
        assert_eq!(truth, TruthValue::new(0.0, 0.5));
        assert!(e.named_relations().is_empty());
    }

    #[test]
    fn feedback_without_pending_action_errors() {
        let mut e = engine();
        assert_eq!(e.process_feedback(true), Err(EngineError::NoPendingAction));
        assert_eq!(e.force_action(Action::Left), Err(EngineError::NoPendingAction));
    }

    #[test]
    fn goals_on_incomplete_trials_report_whats_missing() {
        let mut e = engine();
        feed(&mut e, "<(rel * SAME) --> (loc * ocr)>. :|:");
        feed(&mut e, "<(sample * X1) --> (loc * ocr)>. :|:");
        let err = e.ingest(parse_sentence("G! :|:").unwrap());
        assert_eq!(err, Err(EngineError::IncompleteTrial("left comparison")));
    }

    #[test]
    fn trained_contingency_drives_the_same_choice_again() {
        let mut e = engine();
        teach(&mut e, "SAME", "X1", "Y1", "Y2", Action::Left, true);
        present_trial(&mut e, "SAME", "X1", "Y1", "Y2");
        let action = feed(&mut e, "G! :|:");
        assert_eq!(action, Some(Action::Left));
        e.clear_pending();
    }

    #[test]
    fn schema_and_named_relation_cover_the_mirrored_placement() {
        let mut e = engine();
        teach(&mut e, "SAME", "X1", "Y1", "Y2", Action::Left, true);
        teach(&mut e, "OPPOSITE", "X1", "Y1", "Y2", Action::Right, true);
        assert_eq!(e.schema_beliefs().len(), 1);

        // Same cue and sample, but the correct comparison now sits right.
        present_trial(&mut e, "SAME", "X1", "Y2", "Y1");
        let action = feed(&mut e, "G! :|:");
        assert_eq!(action, Some(Action::Right));
        e.clear_pending();

        present_trial(&mut e, "OPPOSITE", "X1", "Y2", "Y1");
        let action = feed(&mut e, "G! :|:");
        assert_eq!(action, Some(Action::Left));
        e.clear_pending();
        assert_eq!(e.stats().babbles, 2, "only the two training trials babbled");
    }

    #[test]
    fn seeded_schema_and_hypotheses_drive_untrained_pairs() {
        let mut e = engine();
        feed(
            &mut e,
            "(<($1 * $2) --> (ocr * ocr)> && <($3 * $4) --> (loc * loc)>) ==> (<($3 * $1) --> (loc * ocr)> &/ <($4 * $2) --> (loc * ocr)> &/ <({SELF} * ($3 * $4)) --> ^match>) =/> G>.",
        );
        feed(&mut e, "<(X1 * Y1) --> SAME>.");
        feed(&mut e, "<<($1 * $2) --> SAME> ==> <($2 * $1) --> SAME>>.");
        present_trial(&mut e, "SAME", "Y1", "X1", "K1");
        let action = feed(&mut e, "G! :|:");
        assert_eq!(action, Some(Action::Left));
        assert_eq!(e.stats().babbles, 0);
        e.clear_pending();
    }

    #[test]
    fn untrained_engine_babbles_roughly_uniformly() {
        let mut e = engine();
        let mut lefts = 0u32;
        for _ in 0..400 {
            present_trial(&mut e, "SAME", "X1", "Y1", "Y2");
            if feed(&mut e, "G! :|:") == Some(Action::Left) {
                lefts += 1;
            }
            e.clear_pending();
        }
        assert_eq!(e.stats().babbles, 400);
        assert!((150..=250).contains(&lefts), "left picked {lefts}/400 times");
    }

    #[test]
    fn buffer_eviction_is_logged_and_capacity_respected() {
        let mut e = engine();
        for i in 0..12 {
            feed(&mut e, &format!("<(left * S{i}) --> (loc * ocr)>. :|:"));
        }
        assert!(e.trace().iter().any(|l| l.contains("| evict")));
    }

    #[test]
    fn eternal_judgments_revise_on_disjoint_evidence() {
        let mut e = engine();
        feed(&mut e, "<(X1 * Y1) --> SAME>.");
        feed(&mut e, "<(X1 * Y1) --> SAME>.");
        let named = parse_sentence("<(X1 * Y1) --> SAME>.").unwrap().term;
        let truth = e.belief(&named).unwrap().truth;
        assert!(truth.confidence() > 0.9);
    }

    #[test]
    fn identical_seeds_and_scripts_give_identical_traces() {
        let run = || {
            let mut e = engine();
            for i in 0..20 {
                let (l, r) = if i % 2 == 0 { ("Y1", "Y2") } else { ("Y2", "Y1") };
                present_trial(&mut e, "SAME", "X1", l, r);
                feed(&mut e, "G! :|:");
                e.process_feedback(i % 3 != 0).unwrap();
            }
            e.trace().join("\n")
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn training_both_directions_induces_the_mutual_hypothesis() {
        let mut e = engine();
        teach(&mut e, "SAME", "X1", "Y1", "Y2", Action::Left, true);
        teach(&mut e, "SAME", "Y1", "X1", "Y2", Action::Left, true);
        let hyps = e.entailment_hypotheses();
        assert!(hyps
            .iter()
            .any(|h| h.kind == HypKind::Mutual
                && h.schema.to_string() == "<<($1 * $2) --> SAME> ==> <($2 * $1) --> SAME>>"));
        assert!(e.hypothesis_confidence(HypKind::Mutual) > 0.0);
        assert_eq!(e.hypothesis_confidence(HypKind::Combinatorial), 0.0);
    }

    #[test]
    fn completing_a_triple_induces_the_combinatorial_hypothesis() {
        let mut e = engine();
        teach(&mut e, "SAME", "X1", "Y1", "Y2", Action::Left, true);
        teach(&mut e, "OPPOSITE", "Y1", "Z1", "Z2", Action::Left, true);
        teach(&mut e, "OPPOSITE", "X1", "Z1", "Z2", Action::Left, true);
        let expected = "<(<($1 * #1) --> SAME> && <(#1 * $2) --> OPPOSITE>) ==> <($1 * $2) --> OPPOSITE>>";
        assert!(e
            .entailment_hypotheses()
            .iter()
            .any(|h| h.kind == HypKind::Combinatorial && h.schema.to_string() == expected));
    }

    #[test]
    fn hypothesis_evidence_caps_at_one_unit_per_trial() {
        let mut e = engine();
        teach(&mut e, "SAME", "X1", "Y1", "Y2", Action::Left, true);
        teach(&mut e, "SAME", "Y1", "X1", "Y2", Action::Left, true);
        let schema = parse_sentence("<<($1 * $2) --> SAME> ==> <($2 * $1) --> SAME>>.")
            .unwrap()
            .term;
        let first = e.belief(&schema).unwrap().truth;
        assert_eq!(first, TruthValue::new(1.0, 0.5));
        // A third trial over the same pair adds exactly one more unit.
        teach(&mut e, "SAME", "X1", "Y1", "Y2", Action::Left, true);
        let second = e.belief(&schema).unwrap().truth;
        assert!((second.confidence() - 2.0 / 3.0).abs() < 1e-12);
    }
}
