//! Round-by-round evaluation of synchronous programs: global configurations,
//! acceptance/rejection verdicts, and cycle detection.

use std::collections::HashMap;

use crate::error::EvalError;
use crate::model::{extended_word_model, GlobalConfiguration, KripkeModel, PointedModel};
use crate::syntax::{Program, Schema};

/// Outcome of running a program on a pointed model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// An accepting predicate held at the point at this round, and no
    /// rejecting predicate held at the point at any earlier round.
    AcceptedAt(u64),
    /// Mirror condition for rejection.
    RejectedAt(u64),
    /// The configuration sequence closed a cycle with neither kind of
    /// predicate ever firing at the point.
    NeverAccepts { preperiod: u64, period: u64 },
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::AcceptedAt(_))
    }
    pub fn is_rejected(&self) -> bool {
        matches!(self, Verdict::RejectedAt(_))
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::AcceptedAt(n) => write!(f, "AcceptedAt {n}"),
            Verdict::RejectedAt(n) => write!(f, "RejectedAt {n}"),
            Verdict::NeverAccepts { preperiod, period } => {
                write!(f, "NeverAccepts preperiod={preperiod} period={period}")
            }
        }
    }
}

/// Truth of a schema at one node of a `(Π,T)`-model: variables read the
/// configuration, diamonds count satisfying successors, boxes count
/// falsifying successors, global variants count over all nodes.
pub fn eval_schema(
    m: &KripkeModel,
    g: &GlobalConfiguration,
    vars: &[String],
    node: usize,
    s: &Schema,
) -> bool {
    match s {
        Schema::Bottom => false,
        Schema::Top => true,
        Schema::Prop(p) => m.holds(node, p),
        Schema::Var(x) => {
            let idx = vars
                .iter()
                .position(|v| v == x)
                .expect("variable within configuration width");
            g.get(node, idx)
        }
        Schema::Not(c) => !eval_schema(m, g, vars, node, c),
        Schema::Or(a, b) => {
            eval_schema(m, g, vars, node, a) || eval_schema(m, g, vars, node, b)
        }
        Schema::And(a, b) => {
            eval_schema(m, g, vars, node, a) && eval_schema(m, g, vars, node, b)
        }
        Schema::Dia(k, c) => {
            let mut count = 0u32;
            for u in m.successors(node) {
                if eval_schema(m, g, vars, u, c) {
                    count += 1;
                    if count >= *k {
                        return true;
                    }
                }
            }
            false
        }
        Schema::Box_(k, c) => {
            let mut count = 0u32;
            for u in m.successors(node) {
                if !eval_schema(m, g, vars, u, c) {
                    count += 1;
                    if count >= *k {
                        return false;
                    }
                }
            }
            true
        }
        Schema::GDia(k, c) => {
            let mut count = 0u32;
            for u in 0..m.node_count {
                if eval_schema(m, g, vars, u, c) {
                    count += 1;
                    if count >= *k {
                        return true;
                    }
                }
            }
            false
        }
        Schema::GBox(k, c) => {
            let mut count = 0u32;
            for u in 0..m.node_count {
                if !eval_schema(m, g, vars, u, c) {
                    count += 1;
                    if count >= *k {
                        return false;
                    }
                }
            }
            true
        }
    }
}

/// `g_0`: each predicate holds where its base body evaluates true.
pub fn initial_config(p: &Program, m: &KripkeModel) -> GlobalConfiguration {
    Evaluator::new(p, m).initial().to_row_config()
}

/// One synchronous round: every predicate is re-evaluated from its induction
/// body over the previous configuration.
pub fn step(p: &Program, m: &KripkeModel, g: &GlobalConfiguration) -> GlobalConfiguration {
    let ev = Evaluator::new(p, m);
    let cols = ColumnConfig::from_row(g, m.node_count, p.rules.len());
    ev.step(&cols).to_row_config()
}

/// Run to a verdict, detecting configuration cycles by hashing. `max_rounds`
/// caps work with a distinguishable error; otherwise the doubly-exponential
/// configuration-count bound is the hard backstop.
pub fn run(p: &Program, pm: &PointedModel, max_rounds: Option<u64>) -> Result<Verdict, EvalError> {
    run_trace(p, pm, max_rounds).map(|(v, _)| v)
}

/// As [`run`], also returning the configurations `g_0..` up to and including
/// the verdict round (for `NeverAccepts`, up to the round that closed the
/// cycle).
pub fn run_trace(
    p: &Program,
    pm: &PointedModel,
    max_rounds: Option<u64>,
) -> Result<(Verdict, Vec<GlobalConfiguration>), EvalError> {
    if p.is_async() {
        return Err(EvalError::NotSynchronous);
    }
    let m = &pm.model;
    let ev = Evaluator::new(p, m);
    let accepting: Vec<usize> = p
        .rules
        .iter()
        .enumerate()
        .filter(|(_, r)| p.accepting.contains(&r.head))
        .map(|(i, _)| i)
        .collect();
    let rejecting: Vec<usize> = p
        .rules
        .iter()
        .enumerate()
        .filter(|(_, r)| p.rejecting.contains(&r.head))
        .map(|(i, _)| i)
        .collect();

    // 2^(|W|·|T|) states at most; saturate for big instances.
    let backstop: u64 = 1u64
        .checked_shl((m.node_count * p.rules.len()).min(63) as u32)
        .unwrap_or(u64::MAX);

    let mut seen: HashMap<Vec<u64>, u64> = HashMap::new();
    let mut trace = Vec::new();
    let mut cur = ev.initial();
    let mut round: u64 = 0;
    loop {
        trace.push(cur.to_row_config());
        let word_key = cur.flat_key();
        if accepting.iter().any(|&v| cur.get(pm.point, v)) {
            return Ok((Verdict::AcceptedAt(round), trace));
        }
        if rejecting.iter().any(|&v| cur.get(pm.point, v)) {
            return Ok((Verdict::RejectedAt(round), trace));
        }
        if let Some(&first) = seen.get(&word_key) {
            return Ok((
                Verdict::NeverAccepts {
                    preperiod: first,
                    period: round - first,
                },
                trace,
            ));
        }
        seen.insert(word_key, round);
        if let Some(cap) = max_rounds {
            if round >= cap {
                return Err(EvalError::RoundCapExceeded(cap));
            }
        }
        if round >= backstop {
            return Err(EvalError::RoundCapExceeded(backstop));
        }
        cur = ev.step(&cur);
        round += 1;
    }
}

/// Verdict of the program on the `k`-extended word model of `word`, pointed
/// at node 1.
pub fn k_accepts(
    p: &Program,
    word: &[String],
    k: usize,
    max_rounds: Option<u64>,
) -> Result<Verdict, EvalError> {
    let pm = extended_word_model(word, k).expect("word letters validated by caller");
    run(p, &pm, max_rounds)
}

// ---------------------------------------------------------------------------
// Compiled evaluator: per-subformula node masks over all model nodes.
// ---------------------------------------------------------------------------

type Mask = Vec<u64>;

/// Column-major configuration: one node mask per predicate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnConfig {
    pub cols: Vec<Mask>,
    nodes: usize,
}

impl ColumnConfig {
    fn from_row(g: &GlobalConfiguration, nodes: usize, width: usize) -> ColumnConfig {
        let words = nodes.div_ceil(64).max(1);
        let mut cols = vec![vec![0u64; words]; width];
        for v in 0..nodes {
            for (x, col) in cols.iter_mut().enumerate() {
                if g.get(v, x) {
                    col[v / 64] |= 1 << (v % 64);
                }
            }
        }
        ColumnConfig { cols, nodes }
    }

    pub fn get(&self, node: usize, var: usize) -> bool {
        self.cols[var][node / 64] >> (node % 64) & 1 == 1
    }

    pub fn to_row_config(&self) -> GlobalConfiguration {
        let mut g = GlobalConfiguration::empty(self.nodes, self.cols.len());
        for (x, col) in self.cols.iter().enumerate() {
            for v in 0..self.nodes {
                if col[v / 64] >> (v % 64) & 1 == 1 {
                    g.set(v, x, true);
                }
            }
        }
        g
    }

    fn flat_key(&self) -> Vec<u64> {
        let mut key = Vec::with_capacity(self.cols.len() * self.cols.first().map_or(0, Vec::len));
        for c in &self.cols {
            key.extend_from_slice(c);
        }
        key
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum DagOp {
    Bottom,
    Top,
    Prop(usize),
    Var(usize),
    Not(usize),
    Or(usize, usize),
    And(usize, usize),
    Dia(u32, usize),
    Box_(u32, usize),
    GDia(u32, usize),
    GBox(u32, usize),
}

/// Hash-consed DAG over all rule bodies plus precomputed adjacency, reused
/// across rounds. Bodies on two-way path models with threshold-1 modalities
/// evaluate by shifts.
pub struct Evaluator<'a> {
    program: &'a Program,
    nodes: usize,
    words: usize,
    full: Mask,
    dag: Vec<DagOp>,
    base_roots: Vec<usize>,
    ind_roots: Vec<usize>,
    prop_masks: Vec<Mask>,
    succ: Vec<Mask>,
    /// Successors of node i are exactly {i−1, i+1} (two-way path).
    is_line: bool,
}

impl<'a> Evaluator<'a> {
    pub fn new(p: &'a Program, m: &'a KripkeModel) -> Evaluator<'a> {
        let nodes = m.node_count;
        let words = nodes.div_ceil(64).max(1);
        let mut full = vec![u64::MAX; words];
        trim(&mut full, nodes);

        let mut props: Vec<String> = Vec::new();
        let mut prop_idx: HashMap<String, usize> = HashMap::new();
        let vars: Vec<String> = p.rules.iter().map(|r| r.head.clone()).collect();

        let mut dag: Vec<DagOp> = Vec::new();
        let mut memo: HashMap<DagOp, usize> = HashMap::new();
        let mut base_roots = Vec::new();
        let mut ind_roots = Vec::new();
        for r in &p.rules {
            base_roots.push(compile(
                &r.base, &vars, &mut props, &mut prop_idx, &mut dag, &mut memo,
            ));
            ind_roots.push(compile(
                &r.induction,
                &vars,
                &mut props,
                &mut prop_idx,
                &mut dag,
                &mut memo,
            ));
        }

        let prop_masks = props
            .iter()
            .map(|pname| {
                let mut mask = vec![0u64; words];
                for v in 0..nodes {
                    if m.holds(v, pname) {
                        mask[v / 64] |= 1 << (v % 64);
                    }
                }
                mask
            })
            .collect();

        let succ: Vec<Mask> = (0..nodes)
            .map(|v| {
                let mut mask = vec![0u64; words];
                for u in m.successors(v) {
                    mask[u / 64] |= 1 << (u % 64);
                }
                mask
            })
            .collect();

        let is_line = nodes >= 2
            && (0..nodes).all(|v| {
                let mut want: Vec<usize> = Vec::new();
                if v > 0 {
                    want.push(v - 1);
                }
                if v + 1 < nodes {
                    want.push(v + 1);
                }
                m.successors(v) == want
            });

        Evaluator {
            program: p,
            nodes,
            words,
            full,
            dag,
            base_roots,
            ind_roots,
            prop_masks,
            succ,
            is_line,
        }
    }

    pub fn initial(&self) -> ColumnConfig {
        let empty = ColumnConfig {
            cols: vec![vec![0u64; self.words]; self.program.rules.len()],
            nodes: self.nodes,
        };
        let values = self.eval_dag(&empty);
        ColumnConfig {
            cols: self.base_roots.iter().map(|&r| values[r].clone()).collect(),
            nodes: self.nodes,
        }
    }

    pub fn step(&self, g: &ColumnConfig) -> ColumnConfig {
        let values = self.eval_dag(g);
        ColumnConfig {
            cols: self.ind_roots.iter().map(|&r| values[r].clone()).collect(),
            nodes: self.nodes,
        }
    }

    fn eval_dag(&self, g: &ColumnConfig) -> Vec<Mask> {
        let mut values: Vec<Mask> = Vec::with_capacity(self.dag.len());
        for op in &self.dag {
            let mask = match op {
                DagOp::Bottom => vec![0u64; self.words],
                DagOp::Top => self.full.clone(),
                DagOp::Prop(i) => self.prop_masks[*i].clone(),
                DagOp::Var(i) => g.cols[*i].clone(),
                DagOp::Not(a) => {
                    let mut m = values[*a].clone();
                    for (w, f) in m.iter_mut().zip(&self.full) {
                        *w = !*w & f;
                    }
                    m
                }
                DagOp::Or(a, b) => {
                    let mut m = values[*a].clone();
                    for (w, o) in m.iter_mut().zip(&values[*b]) {
                        *w |= o;
                    }
                    m
                }
                DagOp::And(a, b) => {
                    let mut m = values[*a].clone();
                    for (w, o) in m.iter_mut().zip(&values[*b]) {
                        *w &= o;
                    }
                    m
                }
                DagOp::Dia(k, a) => self.dia_mask(*k, &values[*a]),
                DagOp::Box_(k, a) => {
                    // Fewer than k successors falsify the child.
                    let mut not_a = values[*a].clone();
                    for (w, f) in not_a.iter_mut().zip(&self.full) {
                        *w = !*w & f;
                    }
                    let some_bad = self.dia_mask(*k, &not_a);
                    let mut m = some_bad;
                    for (w, f) in m.iter_mut().zip(&self.full) {
                        *w = !*w & f;
                    }
                    m
                }
                DagOp::GDia(k, a) => {
                    if popcount(&values[*a]) >= u64::from(*k) {
                        self.full.clone()
                    } else {
                        vec![0u64; self.words]
                    }
                }
                DagOp::GBox(k, a) => {
                    let sat = popcount(&values[*a]);
                    if self.nodes as u64 - sat < u64::from(*k) {
                        self.full.clone()
                    } else {
                        vec![0u64; self.words]
                    }
                }
            };
            values.push(mask);
        }
        values
    }

    /// Nodes with at least `k` successors inside `a`.
    fn dia_mask(&self, k: u32, a: &Mask) -> Mask {
        if k == 1 && self.is_line {
            let mut m = shl1(a);
            let shr = shr1(a);
            for (w, o) in m.iter_mut().zip(&shr) {
                *w |= o;
            }
            trim(&mut m, self.nodes);
            return m;
        }
        let mut m = vec![0u64; self.words];
        for v in 0..self.nodes {
            let mut count = 0u64;
            for (sw, aw) in self.succ[v].iter().zip(a) {
                count += (sw & aw).count_ones() as u64;
            }
            if count >= u64::from(k) {
                m[v / 64] |= 1 << (v % 64);
            }
        }
        m
    }
}

fn compile(
    s: &Schema,
    vars: &[String],
    props: &mut Vec<String>,
    prop_idx: &mut HashMap<String, usize>,
    dag: &mut Vec<DagOp>,
    memo: &mut HashMap<DagOp, usize>,
) -> usize {
    let op = match s {
        Schema::Bottom => DagOp::Bottom,
        Schema::Top => DagOp::Top,
        Schema::Prop(p) => {
            let idx = *prop_idx.entry(p.clone()).or_insert_with(|| {
                props.push(p.clone());
                props.len() - 1
            });
            DagOp::Prop(idx)
        }
        Schema::Var(x) => DagOp::Var(
            vars.iter()
                .position(|v| v == x)
                .expect("validated program"),
        ),
        Schema::Not(c) => DagOp::Not(compile(c, vars, props, prop_idx, dag, memo)),
        Schema::Or(a, b) => DagOp::Or(
            compile(a, vars, props, prop_idx, dag, memo),
            compile(b, vars, props, prop_idx, dag, memo),
        ),
        Schema::And(a, b) => DagOp::And(
            compile(a, vars, props, prop_idx, dag, memo),
            compile(b, vars, props, prop_idx, dag, memo),
        ),
        Schema::Dia(k, c) => DagOp::Dia(*k, compile(c, vars, props, prop_idx, dag, memo)),
        Schema::Box_(k, c) => DagOp::Box_(*k, compile(c, vars, props, prop_idx, dag, memo)),
        Schema::GDia(k, c) => DagOp::GDia(*k, compile(c, vars, props, prop_idx, dag, memo)),
        Schema::GBox(k, c) => DagOp::GBox(*k, compile(c, vars, props, prop_idx, dag, memo)),
    };
    if let Some(&idx) = memo.get(&op) {
        return idx;
    }
    dag.push(op.clone());
    let idx = dag.len() - 1;
    memo.insert(op, idx);
    idx
}

fn trim(mask: &mut Mask, nodes: usize) {
    let full_words = nodes / 64;
    for (i, w) in mask.iter_mut().enumerate() {
        if i > full_words {
            *w = 0;
        } else if i == full_words {
            let rem = nodes % 64;
            if rem == 0 && nodes > 0 {
                // word exactly full when i < words
                if i * 64 >= nodes {
                    *w = 0;
                }
            } else {
                *w &= (1u64 << rem) - 1;
            }
        }
    }
}

fn shl1(a: &Mask) -> Mask {
    let mut out = vec![0u64; a.len()];
    let mut carry = 0u64;
    for (o, w) in out.iter_mut().zip(a) {
        *o = (w << 1) | carry;
        carry = w >> 63;
    }
    out
}

fn shr1(a: &Mask) -> Mask {
    let mut out = vec![0u64; a.len()];
    let mut carry = 0u64;
    for (o, w) in out.iter_mut().zip(a).rev() {
        *o = (w >> 1) | (carry << 63);
        carry = w & 1;
    }
    out
}

fn popcount(a: &Mask) -> u64 {
    a.iter().map(|w| w.count_ones() as u64).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::centre_point_program;
    use crate::model::bare_path;
    use crate::syntax::{Rule, Semantics};
    use std::collections::BTreeSet;


    #[test]
    fn dead_end_base_rule() {
        let m = bare_path(2).model;
        let g = GlobalConfiguration::empty(2, 0);
        let body = Schema::box_(1, Schema::Bottom);
        assert!(!eval_schema(&m, &g, &[], 0, &body));
        assert!(eval_schema(&m, &g, &[], 1, &body));
    }

    #[test]
    fn counting_diamond() {
        // Node 0 with successors 1,2,3; p at 1 and 2.
        let m = KripkeModel::new(
            4,
            [(0, 1), (0, 2), (0, 3)],
            vec![
                BTreeSet::new(),
                ["p".to_string()].into(),
                ["p".to_string()].into(),
                BTreeSet::new(),
            ],
            ["p".to_string()].into(),
        )
        .unwrap();
        let g = GlobalConfiguration::empty(4, 0);
        assert!(eval_schema(&m, &g, &[], 0, &Schema::dia(2, Schema::prop("p"))));
        assert!(!eval_schema(&m, &g, &[], 0, &Schema::dia(3, Schema::prop("p"))));
    }

    #[test]
    fn global_box_counts_falsifiers() {
        // Three isolated nodes, p fails at exactly one.
        let m = KripkeModel::new(
            3,
            [],
            vec![
                ["p".to_string()].into(),
                ["p".to_string()].into(),
                BTreeSet::new(),
            ],
            ["p".to_string()].into(),
        )
        .unwrap();
        let g = GlobalConfiguration::empty(3, 0);
        assert!(eval_schema(&m, &g, &[], 0, &Schema::gbox(2, Schema::prop("p"))));
        assert!(!eval_schema(&m, &g, &[], 0, &Schema::gbox(1, Schema::prop("p"))));
    }

    #[test]
    fn centre_point_accepts_path_at_distance() {
        let p = centre_point_program();
        let pm = bare_path(3);
        assert_eq!(run(&p, &pm, None).unwrap(), Verdict::AcceptedAt(2));
    }

    #[test]
    fn self_loop_never_accepts() {
        let p = centre_point_program();
        let m = KripkeModel::new(1, [(0, 0)], vec![BTreeSet::new()], BTreeSet::new()).unwrap();
        let pm = PointedModel::new(m, 0).unwrap();
        match run(&p, &pm, None).unwrap() {
            Verdict::NeverAccepts { .. } => {}
            v => panic!("expected NeverAccepts, got {v}"),
        }
    }

    #[test]
    fn empty_accepting_set_never_accepts() {
        let p = Program::new(
            vec![Rule {
                head: "X".into(),
                base: Schema::Top,
                induction: Schema::var("X"),
            }],
            BTreeSet::new(),
            BTreeSet::new(),
            Semantics::Synchronous,
        )
        .unwrap();
        let pm = bare_path(1);
        match run(&p, &pm, None).unwrap() {
            Verdict::NeverAccepts { preperiod, period } => {
                assert!(preperiod + period <= 2);
            }
            v => panic!("expected NeverAccepts, got {v}"),
        }
    }

    #[test]
    fn step_spreads_from_dead_end() {
        let p = centre_point_program();
        let pm = bare_path(3);
        let g0 = initial_config(&p, &pm.model);
        assert_eq!((0..3).map(|v| g0.get(v, 0)).collect::<Vec<_>>(), [false, false, true]);
        let g1 = step(&p, &pm.model, &g0);
        assert_eq!((0..3).map(|v| g1.get(v, 0)).collect::<Vec<_>>(), [false, true, false]);
    }

    #[test]
    fn step_is_deterministic() {
        let p = centre_point_program();
        let pm = bare_path(4);
        let g0 = initial_config(&p, &pm.model);
        assert_eq!(step(&p, &pm.model, &g0), step(&p, &pm.model, &g0));
    }

    #[test]
    fn round_cap_is_an_error_not_a_verdict() {
        let p = centre_point_program();
        let pm = bare_path(64);
        let res = run(&p, &pm, Some(3));
        assert_eq!(res, Err(EvalError::RoundCapExceeded(3)));
    }

    #[test]
    fn k_accepts_trivial_program() {
        let p = Program::new(
            vec![Rule {
                head: "X".into(),
                base: Schema::Top,
                induction: Schema::var("X"),
            }],
            ["X".to_string()].into(),
            BTreeSet::new(),
            Semantics::Synchronous,
        )
        .unwrap();
        let w = crate::model::word("ab");
        assert_eq!(k_accepts(&p, &w, 2, None).unwrap(), Verdict::AcceptedAt(0));
    }

    #[test]
    fn k_accepts_right_marker_probe() {
        // On the empty word the point is the right marker exactly when k = 0,
        // and sees the right marker as a successor exactly when k = 1.
        let on_marker = Program::new(
            vec![Rule {
                head: "X".into(),
                base: Schema::prop(crate::model::P_RIGHT),
                induction: Schema::var("X"),
            }],
            ["X".to_string()].into(),
            BTreeSet::new(),
            Semantics::Synchronous,
        )
        .unwrap();
        assert_eq!(k_accepts(&on_marker, &[], 0, None).unwrap(), Verdict::AcceptedAt(0));
        assert!(!k_accepts(&on_marker, &[], 1, None).unwrap().is_accepted());

        let sees_marker = Program::new(
            vec![Rule {
                head: "X".into(),
                base: Schema::dia(1, Schema::prop(crate::model::P_RIGHT)),
                induction: Schema::var("X"),
            }],
            ["X".to_string()].into(),
            BTreeSet::new(),
            Semantics::Synchronous,
        )
        .unwrap();
        assert!(!k_accepts(&sees_marker, &[], 0, None).unwrap().is_accepted());
        assert_eq!(k_accepts(&sees_marker, &[], 1, None).unwrap(), Verdict::AcceptedAt(0));
        assert!(!k_accepts(&sees_marker, &[], 2, None).unwrap().is_accepted());
    }
}
