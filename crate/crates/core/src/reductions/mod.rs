//! Constructive reductions: QBF → bounded-machine word, circuit →
//! asynchronous propositional program, word-bound MSC → SC, and the SC
//! satisfiability procedures.

mod circuit_sc;
mod qbf_machine;
mod sat;
mod word_sc;

pub use circuit_sc::{bits_to_model, circuit_to_sc_async, eval_circuit};
pub use qbf_machine::{eval_qbf, qbf_machine, qbf_to_lba, qbf_to_msc_pipeline};
pub use sat::{sc_async_sat, sc_sat, SAT_PROP_CAP};
pub use word_sc::msc_word_to_sc;

use std::collections::BTreeSet;

use crate::error::ReductionError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GateKind {
    /// Reads input variable `x_i` (1-based index).
    Input(usize),
    And(Vec<usize>),
    Or(Vec<usize>),
    Not(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub name: String,
    pub kind: GateKind,
}

/// An acyclic Boolean circuit with a single output gate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    pub gates: Vec<Gate>,
    pub output: usize,
}

impl Circuit {
    /// Number of input variables: the highest `x_i` index read.
    pub fn input_count(&self) -> usize {
        self.gates
            .iter()
            .filter_map(|g| match g.kind {
                GateKind::Input(i) => Some(i),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Check acyclicity, not-gate arity and the single-output shape.
    pub fn validate(&self) -> Result<(), ReductionError> {
        if self.output >= self.gates.len() {
            return Err(ReductionError::BadOutputCount(0));
        }
        for g in &self.gates {
            if let GateKind::Not(_) = g.kind {
                // arity one by construction
            }
            for &w in g.kind.wires() {
                if w >= self.gates.len() {
                    return Err(ReductionError::CyclicCircuit(g.name.clone()));
                }
            }
        }
        // Topological check by DFS.
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            White,
            Grey,
            Black,
        }
        fn dfs(c: &Circuit, v: usize, marks: &mut Vec<Mark>) -> Result<(), ReductionError> {
            marks[v] = Mark::Grey;
            for &w in c.gates[v].kind.wires() {
                match marks[w] {
                    Mark::Grey => {
                        return Err(ReductionError::CyclicCircuit(c.gates[w].name.clone()))
                    }
                    Mark::White => dfs(c, w, marks)?,
                    Mark::Black => {}
                }
            }
            marks[v] = Mark::Black;
            Ok(())
        }
        let mut marks = vec![Mark::White; self.gates.len()];
        for v in 0..self.gates.len() {
            if marks[v] == Mark::White {
                dfs(self, v, &mut marks)?;
            }
        }
        // Exactly one gate (the output) feeds nothing.
        let mut fed: BTreeSet<usize> = BTreeSet::new();
        for g in &self.gates {
            fed.extend(g.kind.wires().iter().copied());
        }
        let dangling: Vec<usize> = (0..self.gates.len())
            .filter(|v| !fed.contains(v))
            .collect();
        if dangling != [self.output] {
            return Err(ReductionError::BadOutputCount(dangling.len()));
        }
        Ok(())
    }
}

impl GateKind {
    pub fn wires(&self) -> &[usize] {
        match self {
            GateKind::Input(_) => &[],
            GateKind::And(w) | GateKind::Or(w) => w,
            GateKind::Not(w) => std::slice::from_ref(w),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantifier {
    Forall,
    Exists,
}

/// Quantifier-free Boolean formulas over variables; the QBF matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoolExpr {
    True,
    False,
    Var(String),
    Not(Box<BoolExpr>),
    And(Box<BoolExpr>, Box<BoolExpr>),
    Or(Box<BoolExpr>, Box<BoolExpr>),
}

impl BoolExpr {
    pub fn vars(&self, out: &mut BTreeSet<String>) {
        match self {
            BoolExpr::Var(x) => {
                out.insert(x.clone());
            }
            BoolExpr::Not(c) => c.vars(out),
            BoolExpr::And(a, b) | BoolExpr::Or(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            _ => {}
        }
    }

    pub fn eval(&self, assign: &impl Fn(&str) -> bool) -> bool {
        match self {
            BoolExpr::True => true,
            BoolExpr::False => false,
            BoolExpr::Var(x) => assign(x),
            BoolExpr::Not(c) => !c.eval(assign),
            BoolExpr::And(a, b) => a.eval(assign) && b.eval(assign),
            BoolExpr::Or(a, b) => a.eval(assign) || b.eval(assign),
        }
    }
}

/// A closed quantified Boolean formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Qbf {
    pub prefix: Vec<(Quantifier, String)>,
    pub matrix: BoolExpr,
}

impl Qbf {
    pub fn validate(&self) -> Result<(), ReductionError> {
        let bound: BTreeSet<&str> = self.prefix.iter().map(|(_, x)| x.as_str()).collect();
        let mut used = BTreeSet::new();
        self.matrix.vars(&mut used);
        for v in used {
            if !bound.contains(v.as_str()) {
                return Err(ReductionError::UnboundVariable(v));
            }
        }
        Ok(())
    }
}
