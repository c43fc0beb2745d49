//! PCFG parsing and the connective-instance bank.
//!
//! A bank entry pairs a connective word (such as "then") with the vector of
//! the sentence pair it was mined from, minus the connective itself.

mod bank;
mod cky;
mod pattern;
mod pcfg;

pub use bank::{build_connective_bank, ConnectiveInstance, DEFAULT_MAX_INSTANCES};
pub use cky::{cky_parse, Node, NodeKind, ParseTree};
pub use pattern::{matches_connective_pattern, ConnectiveMatch};
pub use pcfg::{BinaryRule, LexicalRule, LoadOptions, Pcfg, Terminal};

use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GrammarError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: rule is not in Chomsky normal form")]
    NotCnf { line: usize },
    #[error("line {line}: probability {value} outside (0, 1]")]
    Probability { line: usize, value: f64 },
    #[error("line {line}: symbol `{symbol}` never appears on a left-hand side")]
    UnknownSymbol { line: usize, symbol: String },
    #[error("probabilities of `{lhs}` sum to {sum}")]
    ProbabilitySum { lhs: String, sum: f64 },
    #[error("grammar has no rules")]
    Empty,
    #[error("no sentence pair matched the connective pattern ({pairs} pairs scanned); use a larger corpus")]
    EmptyBank { pairs: usize },
}
