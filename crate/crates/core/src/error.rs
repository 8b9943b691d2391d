//! Library error types.

use thiserror::Error;

use crate::syntax::Fragment;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ProgramError {
    #[error("duplicate rule pair for head predicate {0}")]
    DuplicateRule(String),
    #[error("base rule of {0} contains a schema variable")]
    VarInBase(String),
    #[error("induction rule of {head} uses undeclared variable {var}")]
    UndeclaredVar { head: String, var: String },
    #[error("accept/reject list names unknown predicate {0}")]
    UnknownPredicate(String),
    #[error("predicate {0} is both accepting and rejecting")]
    AcceptRejectOverlap(String),
    #[error("{which} rule of {head} needs fragment {needs} but the program is declared {declared}")]
    FragmentViolation {
        head: String,
        which: &'static str,
        declared: Fragment,
        needs: Fragment,
    },
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("edge endpoint {node} out of range (model has {count} nodes)")]
    BadEdge { node: usize, count: usize },
    #[error("valuation mentions node {node} out of range (model has {count} nodes)")]
    BadValuationNode { node: usize, count: usize },
    #[error("valuation uses undeclared proposition {0}")]
    UndeclaredProp(String),
    #[error("point {point} out of range (model has {count} nodes)")]
    BadPoint { point: usize, count: usize },
    #[error("word letter {0} is a reserved marker name")]
    ReservedLetter(String),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("round cap {0} exceeded before a verdict or a configuration cycle")]
    RoundCapExceeded(u64),
    #[error("program must be synchronous for configuration-based evaluation")]
    NotSynchronous,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TmError {
    #[error("transition missing for state {state} on symbol {symbol}")]
    MissingTransition { state: String, symbol: String },
    #[error("transition from {state} on the left end marker must rewrite it and move stay/right")]
    BadLeftMarkerMove { state: String },
    #[error("transition from {state} on the right end marker must rewrite it and move stay/left")]
    BadRightMarkerMove { state: String },
    #[error("accepting and rejecting states overlap at {0}")]
    AcceptRejectOverlap(String),
    #[error("input word contains {0}, which is not in the input alphabet")]
    BadInputSymbol(String),
    #[error("unknown state {0}")]
    UnknownState(String),
    #[error("unknown tape symbol {0}")]
    UnknownSymbol(String),
    #[error("fuel exhausted after {0} steps without halting")]
    FuelExhausted(u64),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error("circuit is cyclic (gate {0} reaches itself)")]
    CyclicCircuit(String),
    #[error("circuit must have exactly one output gate, found {0}")]
    BadOutputCount(usize),
    #[error("not-gate {0} must have exactly one input")]
    BadNotArity(String),
    #[error("input gate {0} cannot have incoming wires")]
    InputWithWires(String),
    #[error("qbf matrix uses unbound variable {0}")]
    UnboundVariable(String),
    #[error("input bit vector has {got} bits, circuit has {want} inputs")]
    ArityMismatch { got: usize, want: usize },
    #[error("program is not in the {0} fragment")]
    WrongFragment(&'static str),
    #[error("proposition universe of size {got} exceeds the enumeration cap {cap}")]
    EnumerationCap { got: usize, cap: usize },
    #[error("threshold {got} exceeds the declared multiset bound {bound}")]
    ThresholdAboveBound { got: u32, bound: u32 },
    #[error("{0}")]
    Resource(String),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GameError {
    #[error("round cap {0} exceeded while locating the accepting round")]
    RoundCapExceeded(u64),
    #[error("illegal move (rule: {rule}): {reason}")]
    IllegalMove { rule: &'static str, reason: String },
    #[error("session is already terminal")]
    Terminal,
    #[error("program must be {0} for this game")]
    WrongSemantics(&'static str),
}
