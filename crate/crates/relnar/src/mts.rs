//! The matching-to-sample environment: stimulus networks, balanced trial
//! blocks for the seven phases, presentation encoding, and feedback.
//!
//! The environment is the experimenter's side of the table. It knows the
//! ground truth (which stimuli relate how), generates counterbalanced
//! blocks, and judges responses; the engine never sees any of this except
//! through trial events and reinforcement.

use crate::acquisition::{
    goal_term, location_event, Action, CUE_PLACE, OPPOSITE_CUE, SAMPLE_PLACE, SAME_CUE,
};
use crate::narsese::{Punctuation, SentenceNode, Tense, Term};
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, VecDeque};
use std::fmt;

/// The two relational frames under study. Composition follows the sign
/// product: same·same = same, opposite·opposite = same, mixed = opposite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Relation {
    Same,
    Opposite,
}

impl Relation {
    pub fn name(self) -> &'static str {
        match self {
            Relation::Same => SAME_CUE,
            Relation::Opposite => OPPOSITE_CUE,
        }
    }

    pub fn cue_term(self) -> Term {
        Term::atom(self.name())
    }

    pub fn compose(self, other: Relation) -> Relation {
        if self == other {
            Relation::Same
        } else {
            Relation::Opposite
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An undirected relational edge; `trained` marks the explicitly reinforced
/// ones, everything else in the closure is derived.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub a: String,
    pub b: String,
    pub relation: Relation,
    pub trained: bool,
}

/// Stimuli plus the trained relations among them. The full relational
/// structure is the closure of the trained edges under symmetry and sign
/// composition, answered by `expected_relation`.
#[derive(Clone, Debug, Default)]
pub struct StimulusNetwork {
    adjacency: BTreeMap<String, Vec<(String, Relation)>>,
    trained: Vec<(String, String, Relation)>,
}

impl StimulusNetwork {
    pub fn new(trained: &[(&str, &str, Relation)]) -> StimulusNetwork {
        let mut net = StimulusNetwork::default();
        for (a, b, relation) in trained {
            net.trained.push((a.to_string(), b.to_string(), *relation));
            net.adjacency
                .entry(a.to_string())
                .or_default()
                .push((b.to_string(), *relation));
            net.adjacency
                .entry(b.to_string())
                .or_default()
                .push((a.to_string(), *relation));
        }
        net
    }

    pub fn stimuli(&self) -> impl Iterator<Item = &str> {
        self.adjacency.keys().map(String::as_str)
    }

    pub fn contains(&self, stimulus: &str) -> bool {
        self.adjacency.contains_key(stimulus)
    }

    /// Propagate signs outward from `start` over the whole component.
    /// `None` when `start` is unknown or some cycle multiplies out to a
    /// contradiction.
    fn signs_from(&self, start: &str) -> Option<BTreeMap<&str, Relation>> {
        let (key, _) = self.adjacency.get_key_value(start)?;
        let mut sign: BTreeMap<&str, Relation> = BTreeMap::new();
        sign.insert(key, Relation::Same);
        let mut queue = VecDeque::from([key.as_str()]);
        while let Some(node) = queue.pop_front() {
            let here = sign[node];
            for (next, relation) in &self.adjacency[node] {
                let composed = here.compose(*relation);
                match sign.get(next.as_str()) {
                    Some(existing) if *existing != composed => return None,
                    Some(_) => {}
                    None => {
                        sign.insert(next, composed);
                        queue.push_back(next);
                    }
                }
            }
        }
        Some(sign)
    }

    /// Ground-truth oracle: the relation between two stimuli under the
    /// closure, by sign propagation. `None` when either stimulus is unknown
    /// or they are disconnected. Identity pairs coordinate with themselves.
    pub fn expected_relation(&self, a: &str, b: &str) -> Option<Relation> {
        self.signs_from(a)?.get(b).copied()
    }

    /// Whether every cycle multiplies out consistently, in every component.
    pub fn is_consistent(&self) -> bool {
        self.adjacency.keys().all(|s| self.signs_from(s).is_some())
    }

    /// Every unordered pair in the closure, trained edges flagged.
    pub fn edges(&self) -> Vec<Edge> {
        let stimuli: Vec<&str> = self.stimuli().collect();
        let mut out = Vec::new();
        for (i, a) in stimuli.iter().enumerate() {
            for b in &stimuli[i + 1..] {
                let Some(relation) = self.expected_relation(a, b) else { continue };
                let trained = self.trained.iter().any(|(x, y, r)| {
                    r == &relation
                        && ((x == a && y == b) || (x == b && y == a))
                });
                out.push(Edge {
                    a: a.to_string(),
                    b: b.to_string(),
                    relation,
                    trained,
                });
            }
        }
        out
    }
}

/// The two fixed stimulus sets: the pretraining network (phases XY through
/// XZ) and the novel-set network (AB, AC, and the BC test). Every B-to-C
/// relation exists only in the closure, never as a trained edge.
pub fn build_networks() -> (StimulusNetwork, StimulusNetwork) {
    let pretrain = StimulusNetwork::new(&[
        ("X1", "Y1", Relation::Same),
        ("X1", "Y2", Relation::Opposite),
        ("Y1", "Z1", Relation::Same),
        ("Y1", "Z2", Relation::Opposite),
        ("X1", "Z1", Relation::Same),
        ("X1", "Z2", Relation::Opposite),
    ]);
    let main = StimulusNetwork::new(&[
        ("A1", "B1", Relation::Same),
        ("A1", "B2", Relation::Opposite),
        ("A1", "C1", Relation::Same),
        ("A1", "C2", Relation::Opposite),
    ]);
    (pretrain, main)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PhaseId {
    XY,
    YX,
    YZ,
    XZ,
    AB,
    AC,
    BC,
}

impl PhaseId {
    pub const ALL: [PhaseId; 7] = [
        PhaseId::XY,
        PhaseId::YX,
        PhaseId::YZ,
        PhaseId::XZ,
        PhaseId::AB,
        PhaseId::AC,
        PhaseId::BC,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PhaseId::XY => "XY",
            PhaseId::YX => "YX",
            PhaseId::YZ => "YZ",
            PhaseId::XZ => "XZ",
            PhaseId::AB => "AB",
            PhaseId::AC => "AC",
            PhaseId::BC => "BC",
        }
    }

    /// Phases drawing on the pretraining stimulus set rather than the
    /// novel one.
    pub fn uses_pretraining_set(self) -> bool {
        matches!(self, PhaseId::XY | PhaseId::YX | PhaseId::YZ | PhaseId::XZ)
    }
}

impl fmt::Display for PhaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for PhaseId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PhaseId::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown phase `{s}` (expected one of XY YX YZ XZ AB AC BC)"))
    }
}

/// One presentation type: cue, sample, and the two comparisons by role.
/// Blocks repeat each presentation equally often, half with the correct
/// comparison on each side.
#[derive(Clone, Copy, Debug)]
pub struct Presentation {
    pub cue: Relation,
    pub sample: &'static str,
    pub correct: &'static str,
    pub foil: &'static str,
}

const fn p(
    cue: Relation,
    sample: &'static str,
    correct: &'static str,
    foil: &'static str,
) -> Presentation {
    Presentation { cue, sample, correct, foil }
}

#[derive(Clone, Debug)]
pub struct PhaseConfig {
    pub id: PhaseId,
    pub blocks: usize,
    pub trials_per_block: usize,
    pub feedback: bool,
    pub presentations: Vec<Presentation>,
}

/// The presentation table for each phase.
///
/// Directed pairs are trained as sampled: XY presents only X-to-Y
/// directions, YX only the reversals, and the remaining phases mix both
/// directions. Where a reversal leaves no within-set comparison of the
/// other sign, the sample itself serves as foil (an identity foil: the
/// sample coordinates with itself, so it is never correct under OPPOSITE).
pub fn phase_config(id: PhaseId, blocks: usize, trials_per_block: usize) -> PhaseConfig {
    use Relation::{Opposite as O, Same as S};
    let presentations: Vec<Presentation> = match id {
        PhaseId::XY => vec![p(S, "X1", "Y1", "Y2"), p(O, "X1", "Y2", "Y1")],
        PhaseId::YX => vec![p(S, "Y1", "X1", "Y2"), p(O, "Y2", "X1", "Y2")],
        PhaseId::YZ => vec![
            p(S, "Y1", "Z1", "Z2"),
            p(O, "Y1", "Z2", "Z1"),
            p(S, "Z1", "Y1", "Z2"),
            p(O, "Z2", "Y1", "Z2"),
        ],
        PhaseId::XZ => vec![
            p(S, "X1", "Z1", "Z2"),
            p(O, "X1", "Z2", "Z1"),
            p(S, "Z1", "X1", "Z2"),
            p(O, "Z2", "X1", "Z2"),
        ],
        PhaseId::AB => vec![
            p(S, "A1", "B1", "B2"),
            p(O, "A1", "B2", "B1"),
            p(S, "B1", "A1", "B2"),
            p(O, "B2", "A1", "B2"),
        ],
        PhaseId::AC => vec![
            p(S, "A1", "C1", "C2"),
            p(O, "A1", "C2", "C1"),
            p(S, "C1", "A1", "C2"),
            p(O, "C2", "A1", "C2"),
        ],
        PhaseId::BC => vec![
            p(S, "B1", "C1", "C2"),
            p(O, "B1", "C2", "C1"),
            p(S, "B2", "C2", "C1"),
            p(O, "B2", "C1", "C2"),
        ],
    };
    PhaseConfig {
        id,
        blocks,
        trials_per_block,
        feedback: id != PhaseId::BC,
        presentations,
    }
}

/// One concrete trial as shown to the agent.
#[derive(Clone, Debug, PartialEq)]
pub struct Trial {
    pub cue: Relation,
    pub sample: String,
    pub left: String,
    pub right: String,
    pub correct_side: Action,
    pub feedback: bool,
    pub phase: PhaseId,
    pub block: usize,
    pub index: usize,
}

impl Trial {
    /// The five-sentence presentation: cue, sample, left, right, goal.
    pub fn present(&self) -> Vec<SentenceNode> {
        let event = |term| SentenceNode::new(term, Punctuation::Judgment, Tense::Present);
        vec![
            event(location_event(CUE_PLACE, &self.cue.cue_term())),
            event(location_event(SAMPLE_PLACE, &Term::atom(&self.sample))),
            event(location_event("left", &Term::atom(&self.left))),
            event(location_event("right", &Term::atom(&self.right))),
            SentenceNode::new(goal_term(), Punctuation::Goal, Tense::Present),
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Reinforced,
    NotReinforced,
    NoFeedback,
}

/// Score a response. Training phases reinforce the correct side and
/// explicitly withhold reward otherwise; test phases give no feedback at
/// all, in either direction.
pub fn judge(trial: &Trial, action: Action) -> Outcome {
    if !trial.feedback {
        Outcome::NoFeedback
    } else if action == trial.correct_side {
        Outcome::Reinforced
    } else {
        Outcome::NotReinforced
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnvError {
    #[error(
        "cannot balance {trials} trials over {presentations} presentations with both sides"
    )]
    InfeasibleBalance { trials: usize, presentations: usize },
}

/// Generate one counterbalanced block: every presentation equally often,
/// correct side half left and half right, order shuffled.
pub fn generate_block(
    cfg: &PhaseConfig,
    net: &StimulusNetwork,
    block: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Trial>, EnvError> {
    let n = cfg.presentations.len();
    let per = cfg.trials_per_block / n;
    if per * n != cfg.trials_per_block || !per.is_multiple_of(2) {
        return Err(EnvError::InfeasibleBalance {
            trials: cfg.trials_per_block,
            presentations: n,
        });
    }
    let mut trials = Vec::with_capacity(cfg.trials_per_block);
    for presentation in &cfg.presentations {
        debug_assert_eq!(
            net.expected_relation(presentation.sample, presentation.correct),
            Some(presentation.cue),
            "presentation disagrees with the network closure"
        );
        debug_assert_ne!(
            net.expected_relation(presentation.sample, presentation.foil),
            Some(presentation.cue),
            "foil must not satisfy the cue"
        );
        for i in 0..per {
            let correct_side = if i % 2 == 0 { Action::Left } else { Action::Right };
            let (left, right) = match correct_side {
                Action::Left => (presentation.correct, presentation.foil),
                Action::Right => (presentation.foil, presentation.correct),
            };
            trials.push(Trial {
                cue: presentation.cue,
                sample: presentation.sample.to_string(),
                left: left.to_string(),
                right: right.to_string(),
                correct_side,
                feedback: cfg.feedback,
                phase: cfg.id,
                block,
                index: 0,
            });
        }
    }
    trials.shuffle(rng);
    for (i, trial) in trials.iter_mut().enumerate() {
        trial.index = i;
    }
    Ok(trials)
}

/// Per-block scores: response accuracy and the mean confidence of each
/// hypothesis kind at block end.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockMetrics {
    pub phase: PhaseId,
    pub block: usize,
    pub accuracy: f64,
    pub conf_mutual: f64,
    pub conf_combinatorial: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::SeedableRng;
    use std::collections::BTreeSet;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn derived_closure_matches_the_sign_product() {
        let (_, main) = build_networks();
        assert_eq!(main.expected_relation("B2", "C2"), Some(Relation::Same));
        assert_eq!(main.expected_relation("B1", "C2"), Some(Relation::Opposite));
        assert_eq!(main.expected_relation("B1", "C1"), Some(Relation::Same));
        assert_eq!(main.expected_relation("B2", "C1"), Some(Relation::Opposite));
    }

    #[test]
    fn closure_is_symmetric_and_reflexive() {
        let (pre, main) = build_networks();
        for net in [&pre, &main] {
            let stimuli: Vec<&str> = net.stimuli().collect();
            for a in &stimuli {
                assert_eq!(net.expected_relation(a, a), Some(Relation::Same));
                for b in &stimuli {
                    assert_eq!(net.expected_relation(a, b), net.expected_relation(b, a));
                }
            }
        }
    }

    #[test]
    fn unknown_stimuli_are_disconnected() {
        let (_, main) = build_networks();
        assert_eq!(main.expected_relation("A1", "Q9"), None);
        assert_eq!(main.expected_relation("Q9", "Q9"), None);
    }

    #[test]
    fn both_networks_are_consistent() {
        let (pre, main) = build_networks();
        assert!(pre.is_consistent());
        assert!(main.is_consistent());
        let inconsistent = StimulusNetwork::new(&[
            ("a", "b", Relation::Same),
            ("b", "c", Relation::Same),
            ("a", "c", Relation::Opposite),
        ]);
        assert!(!inconsistent.is_consistent());
    }

    #[test]
    fn b_to_c_edges_are_derived_not_trained() {
        let (_, main) = build_networks();
        for edge in main.edges() {
            let b_to_c = edge.a.starts_with('B') && edge.b.starts_with('C')
                || edge.a.starts_with('C') && edge.b.starts_with('B');
            if b_to_c {
                assert!(!edge.trained, "{}-{} should be derived", edge.a, edge.b);
            }
        }
    }

    #[test]
    fn every_phase_agrees_with_its_network() {
        let (pre, main) = build_networks();
        for id in PhaseId::ALL {
            let cfg = phase_config(id, 4, 16);
            let net = if id.uses_pretraining_set() { &pre } else { &main };
            for pres in &cfg.presentations {
                assert_eq!(
                    net.expected_relation(pres.sample, pres.correct),
                    Some(pres.cue),
                    "{id}: {} {} {}",
                    pres.cue,
                    pres.sample,
                    pres.correct
                );
                assert_ne!(
                    net.expected_relation(pres.sample, pres.foil),
                    Some(pres.cue),
                    "{id}: foil {} satisfies {} to {}",
                    pres.foil,
                    pres.cue,
                    pres.sample
                );
            }
        }
    }

    #[test]
    fn blocks_are_balanced() {
        let (pre, main) = build_networks();
        for id in PhaseId::ALL {
            let cfg = phase_config(id, 4, 16);
            let net = if id.uses_pretraining_set() { &pre } else { &main };
            let trials = generate_block(&cfg, net, 0, &mut rng(3)).unwrap();
            assert_eq!(trials.len(), 16);

            let lefts = trials.iter().filter(|t| t.correct_side == Action::Left).count();
            assert_eq!(lefts, 8, "{id}: correct side should split 8/8");

            let same = trials.iter().filter(|t| t.cue == Relation::Same).count();
            assert_eq!(same, 8, "{id}: cues should split 8/8");

            let mut combos: BTreeMap<(Relation, &str), usize> = BTreeMap::new();
            for t in &trials {
                *combos.entry((t.cue, t.sample.as_str())).or_default() += 1;
            }
            let counts: BTreeSet<usize> = combos.values().copied().collect();
            assert_eq!(counts.len(), 1, "{id}: (cue, sample) combos should be uniform");
        }
    }

    #[test]
    fn generated_trials_agree_with_the_oracle() {
        let (pre, main) = build_networks();
        for id in PhaseId::ALL {
            let cfg = phase_config(id, 4, 16);
            let net = if id.uses_pretraining_set() { &pre } else { &main };
            for block in 0..4 {
                for t in generate_block(&cfg, net, block, &mut rng(11)).unwrap() {
                    let correct = match t.correct_side {
                        Action::Left => &t.left,
                        Action::Right => &t.right,
                    };
                    let foil = match t.correct_side {
                        Action::Left => &t.right,
                        Action::Right => &t.left,
                    };
                    assert_eq!(net.expected_relation(&t.sample, correct), Some(t.cue));
                    assert_ne!(net.expected_relation(&t.sample, foil), Some(t.cue));
                }
            }
        }
    }

    #[test]
    fn test_phase_withholds_feedback_and_avoids_the_anchor() {
        let (_, main) = build_networks();
        let cfg = phase_config(PhaseId::BC, 4, 16);
        assert!(!cfg.feedback);
        let trials = generate_block(&cfg, &main, 0, &mut rng(5)).unwrap();
        for t in &trials {
            assert!(
                t.sample != "A1" && t.left != "A1" && t.right != "A1",
                "BC trials must not involve A1"
            );
            assert_eq!(judge(t, t.correct_side), Outcome::NoFeedback);
            assert_eq!(judge(t, t.correct_side.opposite()), Outcome::NoFeedback);
        }
    }

    #[test]
    fn training_phases_reinforce_only_correct_sides() {
        let (pre, _) = build_networks();
        let cfg = phase_config(PhaseId::XY, 4, 16);
        let trials = generate_block(&cfg, &pre, 0, &mut rng(5)).unwrap();
        for t in &trials {
            assert_eq!(judge(t, t.correct_side), Outcome::Reinforced);
            assert_eq!(judge(t, t.correct_side.opposite()), Outcome::NotReinforced);
        }
    }

    #[test]
    fn infeasible_balances_are_rejected() {
        let (pre, main) = build_networks();
        let cfg = phase_config(PhaseId::YZ, 4, 10);
        assert!(matches!(
            generate_block(&cfg, &main, 0, &mut rng(0)),
            Err(EnvError::InfeasibleBalance { .. })
        ));
        let cfg = phase_config(PhaseId::XY, 4, 6);
        assert!(matches!(
            generate_block(&cfg, &pre, 0, &mut rng(0)),
            Err(EnvError::InfeasibleBalance { .. })
        ));
    }

    #[test]
    fn same_seed_reproduces_the_block() {
        let (pre, _) = build_networks();
        let cfg = phase_config(PhaseId::XY, 4, 16);
        let a = generate_block(&cfg, &pre, 0, &mut rng(42)).unwrap();
        let b = generate_block(&cfg, &pre, 0, &mut rng(42)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn presentation_emits_the_canonical_five_lines() {
        let trial = Trial {
            cue: Relation::Same,
            sample: "X1".into(),
            left: "Y1".into(),
            right: "Y2".into(),
            correct_side: Action::Left,
            feedback: true,
            phase: PhaseId::XY,
            block: 0,
            index: 0,
        };
        let lines: Vec<String> = trial.present().iter().map(|s| s.to_string()).collect();
        assert_eq!(
            lines,
            vec![
                "<(rel * SAME) --> (loc * ocr)>. :|:",
                "<(sample * X1) --> (loc * ocr)>. :|:",
                "<(left * Y1) --> (loc * ocr)>. :|:",
                "<(right * Y2) --> (loc * ocr)>. :|:",
                "G! :|:",
            ]
        );
    }
}
