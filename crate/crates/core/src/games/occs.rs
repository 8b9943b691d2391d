//! Occurrence tables: every subformula occurrence of every rule body gets an
//! index, so game positions can reference occurrences rather than schema
//! values (identical subschemata at different places stay distinct).

use crate::syntax::{Program, Schema};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OccOp {
    Bottom,
    Top,
    Prop(String),
    /// Rule index of the named head predicate.
    Var(usize),
    Not(usize),
    Or(usize, usize),
    And(usize, usize),
    Dia(u32, usize),
    Box_(u32, usize),
    GDia(u32, usize),
    GBox(u32, usize),
}

#[derive(Debug)]
pub struct OccTable {
    pub ops: Vec<OccOp>,
    /// Pretty-printed subformula per occurrence, for traces and menus.
    pub text: Vec<String>,
    pub base_root: Vec<usize>,
    pub ind_root: Vec<usize>,
}

impl OccTable {
    pub fn new(p: &Program) -> OccTable {
        let mut t = OccTable {
            ops: Vec::new(),
            text: Vec::new(),
            base_root: Vec::new(),
            ind_root: Vec::new(),
        };
        for r in &p.rules {
            let b = t.add(p, &r.base);
            let i = t.add(p, &r.induction);
            t.base_root.push(b);
            t.ind_root.push(i);
        }
        t
    }

    fn add(&mut self, p: &Program, s: &Schema) -> usize {
        let op = match s {
            Schema::Bottom => OccOp::Bottom,
            Schema::Top => OccOp::Top,
            Schema::Prop(name) => OccOp::Prop(name.clone()),
            Schema::Var(name) => OccOp::Var(p.rule_index(name).expect("validated program")),
            Schema::Not(c) => OccOp::Not(self.add(p, c)),
            Schema::Or(a, b) => OccOp::Or(self.add(p, a), self.add(p, b)),
            Schema::And(a, b) => OccOp::And(self.add(p, a), self.add(p, b)),
            Schema::Dia(k, c) => OccOp::Dia(*k, self.add(p, c)),
            Schema::Box_(k, c) => OccOp::Box_(*k, self.add(p, c)),
            Schema::GDia(k, c) => OccOp::GDia(*k, self.add(p, c)),
            Schema::GBox(k, c) => OccOp::GBox(*k, self.add(p, c)),
        };
        self.ops.push(op);
        self.text
            .push(crate::textio::serialize_schema(s));
        self.ops.len() - 1
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }
}
