//! Inferring which values an agent holds from the emotions it expresses.
//!
//! The observer watches an expresser react to actions. Each reaction, read
//! against background knowledge about what actions usually bring about,
//! becomes a set of arguments for or against the expresser holding some
//! value. The arguments form an abstract argumentation framework whose
//! grounded labelling yields the current verdicts.
//!
//! - [`model`]: transition systems with beliefs and values, and a modal
//!   formula evaluator.
//! - [`emotions`]: joy and distress, complete and incomplete.
//! - [`observer`]: observation histories and argument construction.
//! - [`argumentation`]: frameworks, grounded semantics and brute-force oracles.
//! - [`engine`]: incremental sessions, verdicts and scenario replay.
//! - [`scenario`], [`export`], [`afformat`]: file formats.
//! - [`cli`]: the `valinfer` command.

pub mod afformat;
pub mod argumentation;
pub mod cli;
pub mod emotions;
pub mod engine;
pub mod export;
pub mod model;
pub mod observer;
pub mod scenario;

pub use argumentation::{grounded, ArgumentationFramework, Label, Labelling};
pub use engine::{simulate, Session, ValueVerdicts};
pub use model::{Formula, Literal, WorldModel};
pub use scenario::{parse_scenario, serialize_scenario, Scenario};
