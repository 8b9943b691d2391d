//! Program → machine: the tape alphabet is the power set of the head
//! predicates, one cell per interior word-model node; the end-marker nodes'
//! predicate sets ride along in the state. Each round is an optional
//! multiset scan (for global modalities) followed by a zig-zag update sweep
//! reading each cell's neighbours.

use std::collections::{BTreeSet, HashMap};

use crate::error::ReductionError;
use crate::model::{P_BLANK, P_LEFT, P_RIGHT};
use crate::syntax::{Program, Schema};
use crate::tm::{BoundedTm, Move};

/// Predicate-set bitmask; at most [`MAX_PREDICATES`] predicates.
type Conf = u8;
/// Capped counts per predicate-set symbol, empty when no global modality
/// occurs.
type Mult = Vec<u8>;

pub const MAX_PREDICATES: usize = 4;
const MAX_STATES: usize = 300_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum St {
    /// Initial marking scan, still at the first cell (the point).
    Init1,
    InitRest,
    InitBack,
    MultScan { cfg0: Conf, cfgl: Conf, mult: Mult },
    MultBack { cfg0: Conf, cfgl: Conf, mult: Mult },
    /// On cell 1, reading its old value.
    Peek1 { cfg0: Conf, cfgl: Conf, mult: Mult },
    /// On cell 2 (or the marker), reading cell 1's right neighbour.
    Peek2 { cfg0: Conf, cfgl: Conf, mult: Mult, old1: Conf },
    /// Back on cell 1, writing its new value and checking the verdict.
    Write1 { cfg0n: Conf, cfgl: Conf, mult: Mult, prev: Conf, new1: Conf },
    /// On cell i, reading its old value (prev already updated).
    ReadCur { cfg0n: Conf, cfgl: Conf, mult: Mult, prev: Conf },
    /// On cell i+1 (or the marker), reading cell i's right neighbour.
    PeekNext { cfg0n: Conf, cfgl: Conf, mult: Mult, prev: Conf, cur: Conf },
    /// Back on cell i, writing its new value.
    WriteBack { cfg0n: Conf, cfgl: Conf, mult: Mult, new: Conf, cur: Conf },
    /// Sweep done: return to the left marker and start the next round.
    RetL { cfg0: Conf, cfgl: Conf },
    Accept,
    Reject,
}

struct Compiler<'a> {
    p: &'a Program,
    letters: Vec<String>,
    nconf: usize,
    needs_mult: bool,
    m: u32,
    acc_mask: Conf,
    rej_mask: Conf,
    base_letter: Vec<Conf>,
    base_blank: Conf,
    base_left: Conf,
    base_right: Conf,
}

impl<'a> Compiler<'a> {
    /// Evaluate a modal-depth-0 schema at one predicate set.
    fn eval0(&self, s: &Schema, conf: Conf) -> bool {
        match s {
            Schema::Bottom => false,
            Schema::Top => true,
            Schema::Prop(_) => unreachable!("flat induction bodies have no propositions"),
            Schema::Var(x) => {
                let i = self.p.rule_index(x).expect("validated program");
                conf >> i & 1 == 1
            }
            Schema::Not(c) => !self.eval0(c, conf),
            Schema::Or(a, b) => self.eval0(a, conf) || self.eval0(b, conf),
            Schema::And(a, b) => self.eval0(a, conf) && self.eval0(b, conf),
            _ => unreachable!("modal depth 0"),
        }
    }

    /// Evaluate a flat induction body at a node with the given neighbours.
    fn eval1(&self, s: &Schema, cur: Conf, neighbours: &[Conf], mult: &Mult) -> bool {
        match s {
            Schema::Bottom => false,
            Schema::Top => true,
            Schema::Prop(_) => unreachable!("flat induction bodies have no propositions"),
            Schema::Var(x) => {
                let i = self.p.rule_index(x).expect("validated program");
                cur >> i & 1 == 1
            }
            Schema::Not(c) => !self.eval1(c, cur, neighbours, mult),
            Schema::Or(a, b) => {
                self.eval1(a, cur, neighbours, mult) || self.eval1(b, cur, neighbours, mult)
            }
            Schema::And(a, b) => {
                self.eval1(a, cur, neighbours, mult) && self.eval1(b, cur, neighbours, mult)
            }
            Schema::Dia(k, c) => {
                let sat = neighbours.iter().filter(|&&n| self.eval0(c, n)).count();
                sat as u32 >= *k
            }
            Schema::Box_(k, c) => {
                let bad = neighbours.iter().filter(|&&n| !self.eval0(c, n)).count();
                (bad as u32) < *k
            }
            Schema::GDia(k, c) => {
                let sat: u32 = (0..self.nconf)
                    .filter(|&cf| self.eval0(c, cf as Conf))
                    .map(|cf| u32::from(mult[cf]))
                    .sum();
                sat >= *k
            }
            Schema::GBox(k, c) => {
                let bad: u32 = (0..self.nconf)
                    .filter(|&cf| !self.eval0(c, cf as Conf))
                    .map(|cf| u32::from(mult[cf]))
                    .sum();
                bad < *k
            }
        }
    }

    fn step_node(&self, cur: Conf, neighbours: &[Conf], mult: &Mult) -> Conf {
        let mut out: Conf = 0;
        for (i, r) in self.p.rules.iter().enumerate() {
            if self.eval1(&r.induction, cur, neighbours, mult) {
                out |= 1 << i;
            }
        }
        out
    }

    /// Accept beats reject on ties; `None` continues the run.
    fn verdict(&self, conf: Conf) -> Option<bool> {
        if conf & self.acc_mask != 0 {
            Some(true)
        } else if conf & self.rej_mask != 0 {
            Some(false)
        } else {
            None
        }
    }

    fn mult_add(&self, mult: &Mult, conf: Conf) -> Mult {
        if !self.needs_mult {
            return mult.clone();
        }
        let mut m = mult.clone();
        let slot = &mut m[conf as usize];
        *slot = (*slot + 1).min(self.m as u8);
        m
    }

    fn empty_mult(&self) -> Mult {
        if self.needs_mult {
            vec![0; self.nconf]
        } else {
            Vec::new()
        }
    }
}

/// Compile a flat program into a `k`-bounded machine whose outcome on every
/// word matches the program's word-model verdict: accept for accepted words,
/// reject for rejected ones, non-halting when the program never does either.
/// `max_count`, when given, bounds the multiset counters and must dominate
/// every threshold; it defaults to the largest threshold in the program.
pub fn compile_program_to_tm(
    p: &Program,
    k: usize,
    max_count: Option<u32>,
) -> Result<BoundedTm, ReductionError> {
    if !super::is_flat(p) {
        return Err(ReductionError::Resource(
            "program must be flattened first (base depth 0, induction depth at most 1, \
             no propositions in induction bodies)"
                .into(),
        ));
    }
    if p.rules.len() > MAX_PREDICATES {
        return Err(ReductionError::Resource(format!(
            "machine compilation supports at most {MAX_PREDICATES} head predicates, got {}",
            p.rules.len()
        )));
    }
    let mut max_threshold = 1u32;
    for r in &p.rules {
        for body in [&r.base, &r.induction] {
            body.walk(&mut |s| {
                if let Schema::Dia(k, _) | Schema::Box_(k, _) | Schema::GDia(k, _)
                | Schema::GBox(k, _) = s
                {
                    max_threshold = max_threshold.max(*k);
                }
            });
        }
    }
    let m = match max_count {
        Some(m) => {
            if max_threshold > m {
                return Err(ReductionError::ThresholdAboveBound {
                    got: max_threshold,
                    bound: m,
                });
            }
            m
        }
        None => max_threshold,
    };

    let reserved: BTreeSet<&str> = [P_BLANK, P_LEFT, P_RIGHT].into();
    let letters: Vec<String> = p
        .props()
        .into_iter()
        .filter(|q| !reserved.contains(q.as_str()))
        .collect();

    let needs_mult = p.rules.iter().any(|r| {
        let mut has = false;
        for body in [&r.base, &r.induction] {
            body.walk(&mut |s| {
                has |= matches!(s, Schema::GDia(_, _) | Schema::GBox(_, _));
            });
        }
        has
    });

    // Base rules are depth 0: they only read the node's own valuation.
    let vars: Vec<String> = p.rules.iter().map(|r| r.head.clone()).collect();
    let base_at = |val: &BTreeSet<String>| -> Conf {
        let model = crate::model::KripkeModel::sc_model(val.clone(), val.clone());
        let g = crate::model::GlobalConfiguration::empty(1, vars.len());
        let mut out: Conf = 0;
        for (i, r) in p.rules.iter().enumerate() {
            if crate::eval::eval_schema(&model, &g, &vars, 0, &r.base) {
                out |= 1 << i;
            }
        }
        out
    };

    let mask_of = |set: &BTreeSet<String>| -> Conf {
        let mut mask: Conf = 0;
        for (i, r) in p.rules.iter().enumerate() {
            if set.contains(&r.head) {
                mask |= 1 << i;
            }
        }
        mask
    };

    let c = Compiler {
        p,
        letters: letters.clone(),
        nconf: 1 << p.rules.len(),
        needs_mult,
        m,
        acc_mask: mask_of(&p.accepting),
        rej_mask: mask_of(&p.rejecting),
        base_letter: letters
            .iter()
            .map(|l| base_at(&[l.clone()].into()))
            .collect(),
        base_blank: base_at(&[P_BLANK.to_string()].into()),
        base_left: base_at(&[P_LEFT.to_string()].into()),
        base_right: base_at(&[P_RIGHT.to_string()].into()),
    };

    // Symbols: config masks, then letters, then blank and markers.
    let nconf = c.nconf;
    let mut symbols: Vec<String> = (0..nconf).map(|i| format!("c{i}")).collect();
    let letter_sym: HashMap<String, usize> = letters
        .iter()
        .enumerate()
        .map(|(i, l)| (l.clone(), nconf + i))
        .collect();
    symbols.extend(letters.iter().cloned());
    let blank_sym = symbols.len();
    symbols.push("_".into());
    let left_sym = symbols.len();
    symbols.push("L".into());
    let right_sym = symbols.len();
    symbols.push("R".into());
    let nsym = symbols.len();
    let conf_of_sym = |s: usize| -> Option<Conf> {
        (s < nconf).then_some(s as Conf)
    };

    // Breadth-first construction of the reachable state graph.
    let mut index: HashMap<St, usize> = HashMap::new();
    let mut states: Vec<St> = Vec::new();
    let mut work: Vec<usize> = Vec::new();
    let mut intern = |st: St, states: &mut Vec<St>, work: &mut Vec<usize>,
                      index: &mut HashMap<St, usize>|
     -> usize {
        if let Some(&i) = index.get(&st) {
            return i;
        }
        let i = states.len();
        index.insert(st.clone(), i);
        states.push(st);
        work.push(i);
        i
    };
    let start = intern(St::Init1, &mut states, &mut work, &mut index);
    debug_assert_eq!(start, 0);

    let mut delta: Vec<Option<(St, usize, Move)>> = Vec::new();
    let halt = |accept: bool| if accept { St::Accept } else { St::Reject };

    while let Some(si) = work.pop() {
        let st = states[si].clone();
        if delta.len() < (si + 1) * nsym {
            delta.resize((si + 1) * nsym, None);
        }
        for sym in 0..nsym {
            // The successor for this state on this symbol; `None` becomes a
            // stay self-loop (never executed on well-formed tapes).
            let next: Option<(St, usize, Move)> = step_state(
                &c, &st, sym, nconf, &letter_sym, blank_sym, left_sym, right_sym, &halt,
            );
            delta[si * nsym + sym] = next;
        }
        // Intern all successors.
        for sym in 0..nsym {
            if let Some((st2, _, _)) = delta[si * nsym + sym].clone() {
                intern(st2, &mut states, &mut work, &mut index);
            }
            if states.len() > MAX_STATES {
                return Err(ReductionError::Resource(format!(
                    "state space exceeds {MAX_STATES} states; reduce predicates or thresholds"
                )));
            }
        }
    }

    // Freeze into a dense table.
    let nstates = states.len();
    let mut table = vec![(0usize, 0usize, Move::Stay); nstates * nsym];
    delta.resize(nstates * nsym, None);
    for si in 0..nstates {
        for sym in 0..nsym {
            table[si * nsym + sym] = match delta[si * nsym + sym].clone() {
                Some((st2, write, mv)) => (index[&st2], write, mv),
                None => (si, sym, Move::Stay),
            };
        }
    }

    let state_names: Vec<String> = states
        .iter()
        .enumerate()
        .map(|(i, st)| match st {
            St::Accept => "halt_accept".to_string(),
            St::Reject => "halt_reject".to_string(),
            _ => format!("q{i}"),
        })
        .collect();
    let accepting = states
        .iter()
        .enumerate()
        .filter(|(_, s)| matches!(s, St::Accept))
        .map(|(i, _)| i)
        .collect();
    let rejecting = states
        .iter()
        .enumerate()
        .filter(|(_, s)| matches!(s, St::Reject))
        .map(|(i, _)| i)
        .collect();

    let tm = BoundedTm {
        bound: k,
        states: state_names,
        symbols,
        blank: blank_sym,
        left_marker: left_sym,
        right_marker: right_sym,
        input_alphabet: letters.iter().map(|l| letter_sym[l]).collect(),
        start: 0,
        delta: table,
        accepting,
        rejecting,
    };
    tm.validate()
        .map_err(|e| ReductionError::Resource(format!("generated machine invalid: {e}")))?;
    let _ = conf_of_sym;
    Ok(tm)
}

#[allow(clippy::too_many_arguments)]
fn step_state(
    c: &Compiler,
    st: &St,
    sym: usize,
    nconf: usize,
    letter_sym: &HashMap<String, usize>,
    blank_sym: usize,
    left_sym: usize,
    right_sym: usize,
    halt: &dyn Fn(bool) -> St,
) -> Option<(St, usize, Move)> {
    let conf = (sym < nconf).then_some(sym as Conf);
    let csym = |cf: Conf| cf as usize;
    let is_letter = sym >= nconf && sym < nconf + c.letters.len();
    let letter_conf = if is_letter {
        Some(c.base_letter[sym - nconf])
    } else {
        None
    };
    let round_start = |cfg0: Conf, cfgl: Conf| -> St {
        if c.needs_mult {
            let mult = c.mult_add(&c.empty_mult(), cfg0);
            St::MultScan { cfg0, cfgl, mult }
        } else {
            St::Peek1 {
                cfg0,
                cfgl,
                mult: Vec::new(),
            }
        }
    };
    match st {
        St::Init1 => {
            // Head starts at the point (cell 1); its round-0 value may
            // already decide the verdict.
            if let Some(cf) = letter_conf {
                return Some(match c.verdict(cf) {
                    Some(a) => (halt(a), csym(cf), Move::Stay),
                    None => (St::InitRest, csym(cf), Move::Right),
                });
            }
            if sym == blank_sym {
                let cf = c.base_blank;
                return Some(match c.verdict(cf) {
                    Some(a) => (halt(a), csym(cf), Move::Stay),
                    None => (St::InitRest, csym(cf), Move::Right),
                });
            }
            if sym == right_sym {
                // Empty tape: the point is the right-marker node.
                return Some(match c.verdict(c.base_right) {
                    Some(a) => (halt(a), right_sym, Move::Stay),
                    None => (St::InitBack, right_sym, Move::Left),
                });
            }
            None
        }
        St::InitRest => {
            if let Some(cf) = letter_conf {
                return Some((St::InitRest, csym(cf), Move::Right));
            }
            if sym == blank_sym {
                return Some((St::InitRest, csym(c.base_blank), Move::Right));
            }
            if sym == right_sym {
                return Some((St::InitBack, right_sym, Move::Left));
            }
            None
        }
        St::InitBack => {
            if conf.is_some() {
                return Some((st.clone(), sym, Move::Left));
            }
            if sym == left_sym {
                return Some((round_start(c.base_left, c.base_right), left_sym, Move::Right));
            }
            None
        }
        St::MultScan { cfg0, cfgl, mult } => {
            if let Some(cf) = conf {
                return Some((
                    St::MultScan {
                        cfg0: *cfg0,
                        cfgl: *cfgl,
                        mult: c.mult_add(mult, cf),
                    },
                    sym,
                    Move::Right,
                ));
            }
            if sym == right_sym {
                return Some((
                    St::MultBack {
                        cfg0: *cfg0,
                        cfgl: *cfgl,
                        mult: c.mult_add(mult, *cfgl),
                    },
                    right_sym,
                    Move::Left,
                ));
            }
            None
        }
        St::MultBack { cfg0, cfgl, mult } => {
            if conf.is_some() {
                return Some((st.clone(), sym, Move::Left));
            }
            if sym == left_sym {
                return Some((
                    St::Peek1 {
                        cfg0: *cfg0,
                        cfgl: *cfgl,
                        mult: mult.clone(),
                    },
                    left_sym,
                    Move::Right,
                ));
            }
            None
        }
        St::Peek1 { cfg0, cfgl, mult } => {
            if let Some(old1) = conf {
                return Some((
                    St::Peek2 {
                        cfg0: *cfg0,
                        cfgl: *cfgl,
                        mult: mult.clone(),
                        old1,
                    },
                    sym,
                    Move::Right,
                ));
            }
            if sym == right_sym {
                // No interior cells: both marker nodes update against each
                // other and the point is the right-marker node.
                let cfg0n = c.step_node(*cfg0, &[*cfgl], mult);
                let cfgln = c.step_node(*cfgl, &[*cfg0], mult);
                return Some(match c.verdict(cfgln) {
                    Some(a) => (halt(a), right_sym, Move::Stay),
                    None => (St::RetL { cfg0: cfg0n, cfgl: cfgln }, right_sym, Move::Left),
                });
            }
            None
        }
        St::Peek2 {
            cfg0,
            cfgl,
            mult,
            old1,
        } => {
            let next = if let Some(cf) = conf {
                cf
            } else if sym == right_sym {
                *cfgl
            } else {
                return None;
            };
            let cfg0n = c.step_node(*cfg0, &[*old1], mult);
            let new1 = c.step_node(*old1, &[*cfg0, next], mult);
            Some((
                St::Write1 {
                    cfg0n,
                    cfgl: *cfgl,
                    mult: mult.clone(),
                    prev: *old1,
                    new1,
                },
                sym,
                Move::Left,
            ))
        }
        St::Write1 {
            cfg0n,
            cfgl,
            mult,
            prev,
            new1,
        } => {
            if conf.is_some() {
                return Some(match c.verdict(*new1) {
                    Some(a) => (halt(a), csym(*new1), Move::Stay),
                    None => (
                        St::ReadCur {
                            cfg0n: *cfg0n,
                            cfgl: *cfgl,
                            mult: mult.clone(),
                            prev: *prev,
                        },
                        csym(*new1),
                        Move::Right,
                    ),
                });
            }
            None
        }
        St::ReadCur {
            cfg0n,
            cfgl,
            mult,
            prev,
        } => {
            if let Some(cur) = conf {
                return Some((
                    St::PeekNext {
                        cfg0n: *cfg0n,
                        cfgl: *cfgl,
                        mult: mult.clone(),
                        prev: *prev,
                        cur,
                    },
                    sym,
                    Move::Right,
                ));
            }
            if sym == right_sym {
                let cfgln = c.step_node(*cfgl, &[*prev], mult);
                return Some((
                    St::RetL {
                        cfg0: *cfg0n,
                        cfgl: cfgln,
                    },
                    right_sym,
                    Move::Left,
                ));
            }
            None
        }
        St::PeekNext {
            cfg0n,
            cfgl,
            mult,
            prev,
            cur,
        } => {
            let next = if let Some(cf) = conf {
                cf
            } else if sym == right_sym {
                *cfgl
            } else {
                return None;
            };
            let new = c.step_node(*cur, &[*prev, next], mult);
            Some((
                St::WriteBack {
                    cfg0n: *cfg0n,
                    cfgl: *cfgl,
                    mult: mult.clone(),
                    new,
                    cur: *cur,
                },
                sym,
                Move::Left,
            ))
        }
        St::WriteBack {
            cfg0n,
            cfgl,
            mult,
            new,
            cur,
        } => {
            if conf.is_some() {
                return Some((
                    St::ReadCur {
                        cfg0n: *cfg0n,
                        cfgl: *cfgl,
                        mult: mult.clone(),
                        prev: *cur,
                    },
                    csym(*new),
                    Move::Right,
                ));
            }
            None
        }
        St::RetL { cfg0, cfgl } => {
            if conf.is_some() {
                return Some((st.clone(), sym, Move::Left));
            }
            if sym == left_sym {
                return Some((round_start(*cfg0, *cfgl), left_sym, Move::Right));
            }
            None
        }
        St::Accept | St::Reject => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{k_accepts, Verdict};
    use crate::model::word;
    use crate::syntax::{Rule, Semantics};
    use crate::tm::{run_tm, TmOutcome};

    fn check_words(p: &Program, k: usize, alphabet: &[&str], max_len: usize) {
        let tm = compile_program_to_tm(p, k, None).unwrap();
        let mut words: Vec<Vec<String>> = vec![vec![]];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &words {
                for a in alphabet {
                    let mut w2 = w.clone();
                    w2.push(a.to_string());
                    next.push(w2);
                }
            }
            words.extend(next.clone());
            words = {
                let mut seen = std::collections::BTreeSet::new();
                words.into_iter().filter(|w| seen.insert(w.clone())).collect()
            };
        }
        for w in &words {
            if w.len() > max_len {
                continue;
            }
            let program = k_accepts(p, w, k, None).unwrap();
            let machine = run_tm(&tm, w, None).unwrap();
            match (program, machine) {
                (Verdict::AcceptedAt(_), TmOutcome::Accept(_)) => {}
                (Verdict::RejectedAt(_), TmOutcome::Reject(_)) => {}
                (Verdict::NeverAccepts { .. }, TmOutcome::NonHalting(_)) => {}
                (p, m) => panic!("word {w:?}: program {p}, machine {m:?}"),
            }
        }
    }

    #[test]
    fn flat_msc_program_roundtrip() {
        // X(0):-p, X:-◇X: accepts words whose point eventually sees a p.
        let p = Program::new(
            vec![Rule {
                head: "X".into(),
                base: Schema::prop("p"),
                induction: Schema::dia(1, Schema::var("X")),
            }],
            ["X".to_string()].into(),
            Default::default(),
            Semantics::Synchronous,
        )
        .unwrap();
        check_words(&p, 0, &["p", "q"], 3);
    }

    #[test]
    fn global_program_roundtrip() {
        // Y marks p-letters and persists; X accepts once at least one Y
        // exists anywhere, exercising the multiset scan.
        let p = Program::new(
            vec![
                Rule {
                    head: "Y".into(),
                    base: Schema::prop("p"),
                    induction: Schema::var("Y"),
                },
                Rule {
                    head: "X".into(),
                    base: Schema::Bottom,
                    induction: Schema::gdia(1, Schema::var("Y")),
                },
            ],
            ["X".to_string()].into(),
            Default::default(),
            Semantics::Synchronous,
        )
        .unwrap();
        check_words(&p, 1, &["p", "q"], 3);
    }

    #[test]
    fn too_many_predicates_is_a_resource_error() {
        let rules: Vec<Rule> = (0..5)
            .map(|i| Rule {
                head: format!("X{i}"),
                base: Schema::Bottom,
                induction: Schema::var(&format!("X{i}")),
            })
            .collect();
        let p = Program::new(rules, Default::default(), Default::default(), Semantics::Synchronous)
            .unwrap();
        assert!(matches!(
            compile_program_to_tm(&p, 0, None),
            Err(ReductionError::Resource(_))
        ));
    }

    #[test]
    fn threshold_above_bound() {
        let p = Program::new(
            vec![Rule {
                head: "X".into(),
                base: Schema::Bottom,
                induction: Schema::gdia(3, Schema::var("X")),
            }],
            ["X".to_string()].into(),
            Default::default(),
            Semantics::Synchronous,
        )
        .unwrap();
        assert!(matches!(
            compile_program_to_tm(&p, 0, Some(2)),
            Err(ReductionError::ThresholdAboveBound { got: 3, bound: 2 })
        ));
    }
}
