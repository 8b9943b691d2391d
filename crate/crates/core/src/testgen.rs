//! Seeded random generators for programs and models, used by the test
//! corpora and benchmarks. Everything is deterministic in the seed.

use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::model::{KripkeModel, PointedModel};
use crate::syntax::{Fragment, Program, Rule, Schema, Semantics};

pub struct ProgramGen {
    pub max_rules: usize,
    pub max_body_size: u32,
    pub max_threshold: u32,
    pub props: Vec<String>,
    pub fragment: Fragment,
    pub semantics: Semantics,
}

impl Default for ProgramGen {
    fn default() -> ProgramGen {
        ProgramGen {
            max_rules: 4,
            max_body_size: 5,
            max_threshold: 2,
            props: vec!["p".into(), "q".into()],
            fragment: Fragment::Ggmsc,
            semantics: Semantics::Synchronous,
        }
    }
}

impl ProgramGen {
    pub fn generate(&self, rng: &mut StdRng) -> Program {
        let n = rng.gen_range(1..=self.max_rules);
        let vars: Vec<String> = (0..n).map(|i| format!("X{i}")).collect();
        let rules: Vec<Rule> = vars
            .iter()
            .map(|head| Rule {
                head: head.clone(),
                base: self.schema(rng, &[], self.max_body_size),
                induction: self.schema(rng, &vars, self.max_body_size),
            })
            .collect();
        // At least one accepting predicate most of the time; occasionally
        // none, to exercise the automatic-loss paths.
        let mut accepting = BTreeSet::new();
        for v in &vars {
            if rng.gen_bool(0.5) {
                accepting.insert(v.clone());
            }
        }
        if accepting.is_empty() && rng.gen_bool(0.8) {
            accepting.insert(vars[rng.gen_range(0..n)].clone());
        }
        let mut rejecting = BTreeSet::new();
        for v in &vars {
            if !accepting.contains(v) && rng.gen_bool(0.15) {
                rejecting.insert(v.clone());
            }
        }
        Program::with_fragment(rules, accepting, rejecting, self.fragment, self.semantics)
            .expect("generated program is valid")
    }

    fn schema(&self, rng: &mut StdRng, vars: &[String], budget: u32) -> Schema {
        if budget == 0 {
            return if rng.gen_bool(0.5) {
                Schema::Top
            } else {
                Schema::Bottom
            };
        }
        let max_kind = match self.fragment {
            Fragment::Sc => 6,
            Fragment::Msc => 8,
            Fragment::Gmsc => 8,
            Fragment::Ggmsc => 10,
        };
        match rng.gen_range(0..max_kind) {
            0 => Schema::Top,
            1 => Schema::Bottom,
            2 | 3 => {
                if !vars.is_empty() && rng.gen_bool(0.55) {
                    Schema::var(&vars[rng.gen_range(0..vars.len())])
                } else {
                    Schema::prop(&self.props[rng.gen_range(0..self.props.len())])
                }
            }
            4 => Schema::not(self.schema(rng, vars, budget - 1)),
            5 => Schema::or(
                self.schema(rng, vars, budget / 2),
                self.schema(rng, vars, budget / 2),
            ),
            6 => Schema::and(
                self.schema(rng, vars, budget / 2),
                self.schema(rng, vars, budget / 2),
            ),
            7 | 8 => {
                let t = self.threshold(rng);
                let child = self.schema(rng, vars, budget.saturating_sub(t));
                if rng.gen_bool(0.5) {
                    Schema::dia(t, child)
                } else {
                    Schema::box_(t, child)
                }
            }
            _ => {
                let t = self.threshold(rng);
                let child = self.schema(rng, vars, budget.saturating_sub(t));
                if rng.gen_bool(0.5) {
                    Schema::gdia(t, child)
                } else {
                    Schema::gbox(t, child)
                }
            }
        }
    }

    fn threshold(&self, rng: &mut StdRng) -> u32 {
        if self.fragment == Fragment::Msc {
            1
        } else {
            rng.gen_range(1..=self.max_threshold)
        }
    }
}

/// Negation-free programs that are pointwise monotone round over round:
/// bases are ⊥, or ⊤/atom with the head itself as a top-level disjunct of
/// the induction body.
pub fn monotone_program(rng: &mut StdRng, props: &[String]) -> Program {
    let n = rng.gen_range(1..=3);
    let vars: Vec<String> = (0..n).map(|i| format!("X{i}")).collect();
    fn body(rng: &mut StdRng, vars: &[String], props: &[String], budget: u32) -> Schema {
        if budget == 0 {
            return Schema::Top;
        }
        match rng.gen_range(0..7) {
            0 => Schema::Top,
            1 => Schema::Bottom,
            2 => Schema::var(&vars[rng.gen_range(0..vars.len())]),
            3 => Schema::prop(&props[rng.gen_range(0..props.len())]),
            4 => Schema::or(
                body(rng, vars, props, budget / 2),
                body(rng, vars, props, budget / 2),
            ),
            5 => Schema::and(
                body(rng, vars, props, budget / 2),
                body(rng, vars, props, budget / 2),
            ),
            _ => {
                let child = body(rng, vars, props, budget - 1);
                if rng.gen_bool(0.5) {
                    Schema::dia(1, child)
                } else {
                    Schema::gdia(1, child)
                }
            }
        }
    }
    let rules: Vec<Rule> = vars
        .iter()
        .map(|head| {
            let plain_body = body(rng, &vars, props, 4);
            if rng.gen_bool(0.5) {
                Rule {
                    head: head.clone(),
                    base: Schema::Bottom,
                    induction: plain_body,
                }
            } else {
                let base = if rng.gen_bool(0.5) {
                    Schema::Top
                } else {
                    Schema::prop(&props[rng.gen_range(0..props.len())])
                };
                Rule {
                    head: head.clone(),
                    base,
                    induction: Schema::or(Schema::var(head), plain_body),
                }
            }
        })
        .collect();
    Program::new(
        rules,
        [vars[0].clone()].into(),
        BTreeSet::new(),
        Semantics::Synchronous,
    )
    .expect("monotone program is valid")
}

pub struct ModelGen {
    pub max_nodes: usize,
    pub props: Vec<String>,
    pub edge_prob: f64,
}

impl Default for ModelGen {
    fn default() -> ModelGen {
        ModelGen {
            max_nodes: 4,
            props: vec!["p".into(), "q".into()],
            edge_prob: 0.4,
        }
    }
}

impl ModelGen {
    pub fn generate(&self, rng: &mut StdRng) -> PointedModel {
        let n = rng.gen_range(1..=self.max_nodes);
        let mut edges = BTreeSet::new();
        for a in 0..n {
            for b in 0..n {
                if rng.gen_bool(self.edge_prob) {
                    edges.insert((a, b));
                }
            }
        }
        let universe: BTreeSet<String> = self.props.iter().cloned().collect();
        let valuation: Vec<BTreeSet<String>> = (0..n)
            .map(|_| {
                self.props
                    .iter()
                    .filter(|_| rng.gen_bool(0.5))
                    .cloned()
                    .collect()
            })
            .collect();
        let model = KripkeModel::new(n, edges, valuation, universe).expect("generated model");
        let point = rng.gen_range(0..n);
        PointedModel::new(model, point).expect("point in range")
    }

    /// The model with every node split into two bisimilar copies; the
    /// duplicate is plain-bisimilar (and counting-bisimilar to nothing in
    /// general), used for invariance tests.
    pub fn duplicate(pm: &PointedModel) -> PointedModel {
        let n = pm.model.node_count;
        let mut edges = BTreeSet::new();
        for &(a, b) in &pm.model.edges {
            for da in 0..2 {
                for db in 0..2 {
                    edges.insert((a + da * n, b + db * n));
                }
            }
        }
        let mut valuation = pm.model.valuation.clone();
        valuation.extend(pm.model.valuation.iter().cloned());
        let model = KripkeModel::new(2 * n, edges, valuation, pm.model.props.clone())
            .expect("duplicated model");
        PointedModel::new(model, pm.point).expect("point kept")
    }
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}
