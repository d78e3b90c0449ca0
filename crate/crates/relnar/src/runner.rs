//! Experiment orchestration: wires the environment to the engine, runs the
//! phase sequence block by block, collects metrics, and supports scripted
//! replay for inspecting the engine's derivations line by line.

use crate::acquisition::{Action, HypKind};
use crate::engine::{Engine, EngineConfig, EngineError, EngineStats};
use crate::mts::{
    build_networks, generate_block, judge, phase_config, BlockMetrics, EnvError, Outcome,
    PhaseId,
};
use crate::narsese::{parse_sentence, ParseError, Punctuation};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;

/// Everything a run needs. One seed drives both the trial shuffling and the
/// engine's exploration, through separate derived streams.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub seed: u64,
    pub blocks: usize,
    pub trials_per_block: usize,
    pub phases: Vec<PhaseId>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 7,
            blocks: 4,
            trials_per_block: 16,
            phases: PhaseId::ALL.to_vec(),
        }
    }
}

/// One block's metrics plus bookkeeping that never reaches the CSV: how
/// often the engine fell back to random exploration and how many feedback
/// events the environment delivered.
#[derive(Clone, Debug)]
pub struct BlockRecord {
    pub metrics: BlockMetrics,
    pub babbles: u64,
    pub feedback_events: u64,
}

/// The results of a full run. The engine comes back too, so callers can
/// inspect what it ended up believing.
pub struct RunOutcome {
    pub records: Vec<BlockRecord>,
    pub trace: Vec<String>,
    pub stats: EngineStats,
    pub engine: Engine,
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Run the configured phases in order against a fresh engine. Each trial is
/// presented as five sentences; the goal triggers a decision, the
/// environment judges it, and training phases feed the verdict back.
pub fn run_experiment(cfg: &RunConfig) -> Result<RunOutcome, RunError> {
    let mut seeder = ChaCha8Rng::seed_from_u64(cfg.seed);
    let env_seed: u64 = seeder.gen();
    let engine_seed: u64 = seeder.gen();
    let mut env_rng = ChaCha8Rng::seed_from_u64(env_seed);
    let mut engine = Engine::new(EngineConfig::default(), engine_seed);
    let (pretrain, main) = build_networks();

    let mut records = Vec::new();
    for &phase in &cfg.phases {
        let pcfg = phase_config(phase, cfg.blocks, cfg.trials_per_block);
        let net = if phase.uses_pretraining_set() { &pretrain } else { &main };
        for block in 0..pcfg.blocks {
            let trials = generate_block(&pcfg, net, block, &mut env_rng)?;
            let before = engine.stats();
            let mut hits = 0usize;
            for trial in &trials {
                let mut action = None;
                for sentence in trial.present() {
                    if let Some(a) = engine.ingest(sentence)? {
                        action = Some(a);
                    }
                }
                let action = action.expect("the goal sentence always yields a response");
                if action == trial.correct_side {
                    hits += 1;
                }
                match judge(trial, action) {
                    Outcome::Reinforced => engine.process_feedback(true)?,
                    Outcome::NotReinforced => engine.process_feedback(false)?,
                    Outcome::NoFeedback => engine.clear_pending(),
                }
            }
            let after = engine.stats();
            records.push(BlockRecord {
                metrics: BlockMetrics {
                    phase,
                    block,
                    accuracy: hits as f64 / trials.len() as f64,
                    conf_mutual: engine.hypothesis_confidence(HypKind::Mutual),
                    conf_combinatorial: engine.hypothesis_confidence(HypKind::Combinatorial),
                },
                babbles: after.babbles - before.babbles,
                feedback_events: after.feedback_events - before.feedback_events,
            });
        }
    }
    let stats = engine.stats();
    let trace = engine.trace().to_vec();
    Ok(RunOutcome { records, trace, stats, engine })
}

/// Render metrics as CSV. Fixed-precision formatting keeps the output
/// byte-identical across runs of the same seed.
pub fn metrics_csv(records: &[BlockRecord]) -> String {
    let mut out = String::from("phase,block,accuracy,conf_mutual,conf_combinatorial\n");
    for r in records {
        writeln!(
            out,
            "{},{},{:.4},{:.6},{:.6}",
            r.metrics.phase,
            r.metrics.block + 1,
            r.metrics.accuracy,
            r.metrics.conf_mutual,
            r.metrics.conf_combinatorial,
        )
        .expect("writing to a String cannot fail");
    }
    out
}

#[derive(Debug, thiserror::Error)]
pub enum ReplayError {
    #[error("line {line}: {source}")]
    Parse { line: usize, source: ParseError },
    #[error("line {line}: {source}")]
    Engine { line: usize, source: EngineError },
    #[error("line {line}: expected the trace to contain `{expected}`")]
    Expectation { line: usize, expected: String },
    #[error("line {line}: unknown directive `{text}`")]
    BadDirective { line: usize, text: String },
}

/// The result of a scripted replay: the full engine trace and how many
/// expectations were checked.
pub struct ReplayOutcome {
    pub trace: Vec<String>,
    pub checks: usize,
    pub engine: Engine,
}

/// Drive an engine from a script instead of the environment. Lines are
/// Narsese sentences fed straight in; `!action left` or `!action right`
/// overrides the pending response; `//expect <substring>` asserts that some
/// trace line so far contains the substring. Other `//` lines are comments.
pub fn replay(script: &str, seed: u64) -> Result<ReplayOutcome, ReplayError> {
    let mut engine = Engine::new(EngineConfig::default(), seed);
    let mut checks = 0usize;
    for (idx, raw) in script.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("//expect") {
            let expected = rest.trim();
            if !engine.trace().iter().any(|l| l.contains(expected)) {
                return Err(ReplayError::Expectation {
                    line: line_no,
                    expected: expected.to_string(),
                });
            }
            checks += 1;
            continue;
        }
        if line.starts_with("//") {
            continue;
        }
        if let Some(rest) = line.strip_prefix('!') {
            let action = match rest.trim() {
                "action left" => Action::Left,
                "action right" => Action::Right,
                _ => {
                    return Err(ReplayError::BadDirective {
                        line: line_no,
                        text: line.to_string(),
                    })
                }
            };
            engine
                .force_action(action)
                .map_err(|source| ReplayError::Engine { line: line_no, source })?;
            continue;
        }
        let sentence = parse_sentence(line)
            .map_err(|source| ReplayError::Parse { line: line_no, source })?;
        debug_assert!(matches!(
            sentence.punctuation,
            Punctuation::Judgment | Punctuation::Goal
        ));
        engine
            .ingest(sentence)
            .map_err(|source| ReplayError::Engine { line: line_no, source })?;
    }
    let trace = engine.trace().to_vec();
    Ok(ReplayOutcome { trace, checks, engine })
}
