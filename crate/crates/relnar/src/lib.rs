//! A non-axiomatic reasoner that acquires same/opposite relational
//! responding from matching-to-sample trials, together with the trial
//! environment and an experiment runner.
//!
//! The crate is organized bottom-up:
//!
//! * [`narsese`] - the term language (parser, printer, variable handling)
//! * [`truth`] - frequency/confidence truth values and evidential stamps
//! * [`unify`] - pattern/instance unification and substitutions
//! * [`acquisition`] - the abstraction ladder from reinforced trials to
//!   contingencies, schemas, named relations, and entailment hypotheses
//! * [`engine`] - event buffer, belief memory, decision making, feedback
//! * [`mts`] - stimulus networks, trial generation, judging
//! * [`runner`] - the phased experiment protocol, metrics CSV, trace
//!   output, and the replay-script harness

pub mod acquisition;
pub mod engine;
pub mod mts;
pub mod narsese;
pub mod runner;
pub mod truth;
pub mod unify;
