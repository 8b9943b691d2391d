//! Machine → program: head predicates track tape symbols, the current state
//! with the head position, and the cells adjacent to the head; accept and
//! reject flags spread to the word model's point.

use std::collections::BTreeSet;

use crate::error::{ModelError, TmError};
use crate::model::{extended_word_model, PointedModel, P_BLANK, P_LEFT, P_RIGHT};
use crate::syntax::{Program, Rule, Schema, Semantics};
use crate::tm::{BoundedTm, Move};

fn sym_pred(tm: &BoundedTm, s: usize) -> String {
    format!("Xs_{}", tm.symbols[s])
}

fn state_pred(tm: &BoundedTm, q: usize) -> String {
    format!("Xq_{}", tm.states[q])
}

/// Proposition carried by a tape symbol in the extended word model.
fn sym_prop(tm: &BoundedTm, s: usize) -> String {
    if s == tm.blank {
        P_BLANK.to_string()
    } else if s == tm.left_marker {
        P_LEFT.to_string()
    } else if s == tm.right_marker {
        P_RIGHT.to_string()
    } else {
        tm.symbols[s].clone()
    }
}

/// Halting states frozen in place, so the halt configuration persists while
/// the accept/reject flag spreads.
fn frozen_delta(tm: &BoundedTm) -> Vec<(usize, usize, Move)> {
    let s = tm.symbols.len();
    let mut delta = tm.delta.clone();
    for q in 0..tm.states.len() {
        if tm.is_halting(q) {
            for a in 0..s {
                delta[q * s + a] = (q, a, Move::Stay);
            }
        }
    }
    delta
}

/// Compile a bounded machine into a program over the word-model vocabulary:
/// the program `k`-accepts (`k`-rejects) exactly the words the machine
/// accepts (rejects), where `k` is the machine's bound.
pub fn compile_tm_to_msc(tm: &BoundedTm) -> Program {
    build_program(tm, true)
}

/// The meta-reduction: the same construction with the machine read as
/// unbounded. The right-marker node carries no tape predicate, so a head
/// that would run off the provided padding steps onto the marker node and
/// every state mark vanishes: from then on the configuration is frozen and
/// the program never accepts nor rejects.
pub fn meta_reduce(tm: &BoundedTm) -> Program {
    build_program(tm, false)
}

fn build_program(tm: &BoundedTm, bounded: bool) -> Program {
    let delta = frozen_delta(tm);
    let nsym = tm.symbols.len();
    let any_state = Schema::any(
        (0..tm.states.len())
            .map(|q| Schema::var(&state_pred(tm, q)))
            .collect(),
    );

    // The head arrives at a cell next round when a transition fires at an
    // adjacent cell and moves toward it (or fires here and stays).
    let trigger = |q: usize, a: usize| -> Schema {
        let here = Schema::and(
            Schema::var(&state_pred(tm, q)),
            Schema::var(&sym_pred(tm, a)),
        );
        match delta[q * nsym + a].2 {
            Move::Stay => here,
            Move::Left => Schema::and(Schema::var("Xl"), Schema::dia(1, here)),
            Move::Right => Schema::and(Schema::var("Xr"), Schema::dia(1, here)),
        }
    };
    let psi = |dir: Move| -> Schema {
        let mut parts = Vec::new();
        for q in 0..tm.states.len() {
            for a in 0..nsym {
                if delta[q * nsym + a].2 == dir {
                    parts.push(trigger(q, a));
                }
            }
        }
        Schema::any(parts)
    };

    let mut rules = Vec::new();

    // Tape predicates: written under the head, persistent elsewhere.
    for s in 0..nsym {
        if !bounded && s == tm.right_marker {
            // Unbounded reading: the marker node carries no tape symbol.
            rules.push(Rule {
                head: sym_pred(tm, s),
                base: Schema::Bottom,
                induction: Schema::Bottom,
            });
            continue;
        }
        let mut writes = Vec::new();
        for q in 0..tm.states.len() {
            for a in 0..nsym {
                if delta[q * nsym + a].1 == s {
                    writes.push(Schema::and(
                        Schema::var(&state_pred(tm, q)),
                        Schema::var(&sym_pred(tm, a)),
                    ));
                }
            }
        }
        let keep = Schema::and(
            Schema::not(any_state.clone()),
            Schema::var(&sym_pred(tm, s)),
        );
        rules.push(Rule {
            head: sym_pred(tm, s),
            base: Schema::prop(&sym_prop(tm, s)),
            induction: Schema::or(keep, Schema::any(writes)),
        });
    }

    // State predicates: the start state begins at node 1, the only node that
    // sees the left marker.
    for q in 0..tm.states.len() {
        let mut arrived = Vec::new();
        for q0 in 0..tm.states.len() {
            for a in 0..nsym {
                if delta[q0 * nsym + a].0 == q && !tm.is_halting(q0) {
                    arrived.push(trigger(q0, a));
                }
            }
        }
        // Frozen halting states persist where they are.
        if tm.is_halting(q) {
            arrived.push(Schema::var(&state_pred(tm, q)));
        }
        rules.push(Rule {
            head: state_pred(tm, q),
            base: if q == tm.start {
                Schema::dia(1, Schema::prop(P_LEFT))
            } else {
                Schema::Bottom
            },
            induction: Schema::any(arrived),
        });
    }

    // Adjacency marks. The head's old cell keeps satisfying the state
    // predicate when the whole configuration is read at the previous round,
    // which is what the move disjuncts test.
    let psi_s = psi(Move::Stay);
    let psi_l = psi(Move::Left);
    let psi_r = psi(Move::Right);
    rules.push(Rule {
        head: "Xl".into(),
        base: Schema::prop(P_LEFT),
        induction: Schema::any(vec![
            Schema::and(Schema::var("Xl"), Schema::dia(1, psi_s.clone())),
            Schema::and(any_state.clone(), Schema::dia(1, psi_r.clone())),
            Schema::and(
                Schema::not(any_state.clone()),
                Schema::dia(1, psi_l.clone()),
            ),
        ]),
    });
    rules.push(Rule {
        head: "Xr".into(),
        base: Schema::and(
            Schema::not(Schema::prop(P_LEFT)),
            Schema::dia(1, Schema::dia(1, Schema::prop(P_LEFT))),
        ),
        induction: Schema::any(vec![
            Schema::and(Schema::var("Xr"), Schema::dia(1, psi_s)),
            Schema::and(any_state.clone(), Schema::dia(1, psi_l)),
            Schema::and(Schema::not(any_state.clone()), Schema::dia(1, psi_r)),
        ]),
    });

    // Accept/reject flags spread toward node 1.
    let flag = |states: &BTreeSet<usize>, name: &str| -> Rule {
        let mut parts: Vec<Schema> = states
            .iter()
            .map(|&q| Schema::var(&state_pred(tm, q)))
            .collect();
        parts.push(Schema::dia(1, Schema::var(name)));
        Rule {
            head: name.into(),
            base: Schema::Bottom,
            induction: Schema::any(parts),
        }
    };
    rules.push(flag(&tm.accepting, "Acc"));
    rules.push(flag(&tm.rejecting, "Rej"));

    Program::new(
        rules,
        ["Acc".to_string()].into(),
        ["Rej".to_string()].into(),
        Semantics::Synchronous,
    )
    .expect("compiled program is valid")
}

/// Measured input reduction: run the machine on an unbounded tape, measure
/// the space it uses, and build the word model with exactly that padding.
pub fn input_reduce(
    tm: &BoundedTm,
    word: &[String],
    fuel: u64,
) -> Result<PointedModel, TmError> {
    let (_, max_head) = crate::tm::run_tm_unbounded(tm, word, fuel)?;
    let pad = max_head.saturating_sub(word.len());
    extended_word_model(word, pad).map_err(|e| match e {
        ModelError::ReservedLetter(l) => TmError::BadInputSymbol(l),
        _ => TmError::BadInputSymbol("?".into()),
    })
}

/// Input reduction with a caller-supplied space bound: pad to `s(|word|)`.
pub fn input_reduce_s(
    word: &[String],
    s: impl Fn(usize) -> usize,
) -> Result<PointedModel, ModelError> {
    extended_word_model(word, s(word.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{initial_config, k_accepts, run, step, Verdict};
    use crate::model::word;
    use crate::tm::{contains_a_machine, run_tm, TmOutcome};

    #[test]
    fn compiled_acceptor_agrees_with_simulation() {
        let tm = contains_a_machine(0);
        let p = compile_tm_to_msc(&tm);
        for w in ["", "a", "b", "ab", "ba", "bb", "bba"] {
            let letters = word(w);
            let machine = run_tm(&tm, &letters, None).unwrap();
            let program = k_accepts(&p, &letters, 0, None).unwrap();
            match machine {
                TmOutcome::Accept(_) => assert!(program.is_accepted(), "word {w}"),
                TmOutcome::Reject(_) => assert!(program.is_rejected(), "word {w}"),
                TmOutcome::NonHalting(_) => {
                    assert!(matches!(program, Verdict::NeverAccepts { .. }), "word {w}")
                }
            }
        }
    }

    #[test]
    fn lockstep_marks() {
        // Round n encodes machine step n: one state mark at the head, one
        // tape mark per node, adjacency marks beside the head.
        let tm = contains_a_machine(1);
        let p = compile_tm_to_msc(&tm);
        let letters = word("ba");
        let pm = extended_word_model(&letters, 1).unwrap();
        let n = pm.model.node_count;

        let state_idxs: Vec<usize> = (0..tm.states.len())
            .map(|q| p.rule_index(&state_pred(&tm, q)).unwrap())
            .collect();
        let sym_idxs: Vec<usize> = (0..tm.symbols.len())
            .map(|s| p.rule_index(&sym_pred(&tm, s)).unwrap())
            .collect();
        let xl = p.rule_index("Xl").unwrap();
        let xr = p.rule_index("Xr").unwrap();

        let mut cfg = tm.initial_config(&[tm.symbol_index("b").unwrap(), tm.symbol_index("a").unwrap()]);
        let mut g = initial_config(&p, &pm.model);
        for step_no in 0..3 {
            // Exactly one node has exactly one state mark, at the head.
            for v in 0..n {
                let states_here: Vec<usize> = state_idxs
                    .iter()
                    .enumerate()
                    .filter(|(_, &i)| g.get(v, i))
                    .map(|(q, _)| q)
                    .collect();
                if v == cfg.head {
                    assert_eq!(states_here, vec![cfg.state], "step {step_no} node {v}");
                } else {
                    assert!(states_here.is_empty(), "step {step_no} node {v}");
                }
                // Exactly one tape mark, matching the machine tape.
                let syms_here: Vec<usize> = sym_idxs
                    .iter()
                    .enumerate()
                    .filter(|(_, &i)| g.get(v, i))
                    .map(|(s, _)| s)
                    .collect();
                assert_eq!(syms_here, vec![cfg.tape[v]], "step {step_no} node {v}");
                assert_eq!(g.get(v, xl), cfg.head > 0 && v == cfg.head - 1);
                assert_eq!(g.get(v, xr), v == cfg.head + 1);
            }
            cfg = crate::tm::step_config(&tm, &cfg);
            g = step(&p, &pm.model, &g);
        }
    }

    #[test]
    fn meta_reduction_freezes_on_overflow() {
        // A machine that walks right forever: with finite padding the head
        // hits the marker node and the configuration freezes.
        let mut b = crate::tm::TmBuilder::new(0, &["a"]);
        b.start = "go".into();
        b.rule("go", "a", "go", "a", Move::Right)
            .rule("go", "_", "go", "_", Move::Right)
            .rule("go", "L", "go", "L", Move::Right)
            .rule("go", "R", "go", "R", Move::Stay);
        let tm = b.build().unwrap();
        let p = meta_reduce(&tm);
        let pm = extended_word_model(&word("a"), 1).unwrap();
        let verdict = run(&p, &pm, None).unwrap();
        assert!(matches!(verdict, Verdict::NeverAccepts { .. }));

        // After the freeze the step function is the identity.
        let mut g = initial_config(&p, &pm.model);
        for _ in 0..16 {
            g = step(&p, &pm.model, &g);
        }
        assert_eq!(step(&p, &pm.model, &g), g);
    }

    #[test]
    fn measured_input_reduction() {
        // The scanning acceptor runs to the marker on a reject, so it needs
        // the padding it visits; a stay-only machine needs none.
        let tm = contains_a_machine(0);
        let m = input_reduce(&tm, &word("ba"), 1000).unwrap();
        assert_eq!(m.model.node_count, 4); // accepts at cell 2, no padding

        let pm = input_reduce_s(&word("ab"), |n| n).unwrap();
        assert_eq!(pm.model.node_count, 2 + 2 + 2);
    }
}
