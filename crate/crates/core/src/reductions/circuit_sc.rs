//! Circuit value → asynchronous propositional program: one head predicate
//! per gate, input gates latch their proposition, internal gates combine
//! their wires each round.

use std::collections::BTreeSet;

use super::{Circuit, GateKind};
use crate::error::ReductionError;
use crate::model::{KripkeModel, PointedModel};
use crate::syntax::{Program, Rule, Schema, Semantics};

/// Direct evaluation, the oracle for the reduction.
pub fn eval_circuit(c: &Circuit, bits: &[bool]) -> Result<bool, ReductionError> {
    if bits.len() != c.input_count() {
        return Err(ReductionError::ArityMismatch {
            got: bits.len(),
            want: c.input_count(),
        });
    }
    fn value(c: &Circuit, g: usize, bits: &[bool], memo: &mut Vec<Option<bool>>) -> bool {
        if let Some(v) = memo[g] {
            return v;
        }
        let v = match &c.gates[g].kind {
            GateKind::Input(i) => bits[i - 1],
            GateKind::And(ws) => ws.iter().all(|&w| value(c, w, bits, memo)),
            GateKind::Or(ws) => ws.iter().any(|&w| value(c, w, bits, memo)),
            GateKind::Not(w) => !value(c, *w, bits, memo),
        };
        memo[g] = Some(v);
        v
    }
    let mut memo = vec![None; c.gates.len()];
    Ok(value(c, c.output, bits, &mut memo))
}

fn gate_pred(c: &Circuit, g: usize) -> String {
    format!("G_{}", c.gates[g].name)
}

/// The program: `X_I(0):-p_i, X_I:-X_I` for inputs, `X_G(0):-⊥` with the
/// gate operation as induction rule otherwise; the output gate accepts.
pub fn circuit_to_sc_async(c: &Circuit) -> Result<Program, ReductionError> {
    c.validate()?;
    let mut rules = Vec::new();
    for (g, gate) in c.gates.iter().enumerate() {
        let head = gate_pred(c, g);
        let (base, induction) = match &gate.kind {
            GateKind::Input(i) => (Schema::prop(&format!("p{i}")), Schema::var(&head)),
            GateKind::And(ws) => (
                Schema::Bottom,
                Schema::all(ws.iter().map(|&w| Schema::var(&gate_pred(c, w))).collect()),
            ),
            GateKind::Or(ws) => (
                Schema::Bottom,
                Schema::any(ws.iter().map(|&w| Schema::var(&gate_pred(c, w))).collect()),
            ),
            GateKind::Not(w) => (
                Schema::Bottom,
                Schema::not(Schema::var(&gate_pred(c, *w))),
            ),
        };
        rules.push(Rule {
            head,
            base,
            induction,
        });
    }
    let accepting = [gate_pred(c, c.output)].into();
    Ok(Program::new(
        rules,
        accepting,
        BTreeSet::new(),
        Semantics::Asynchronous,
    )
    .expect("gate rules are valid"))
}

/// The single-node relation-free model whose valuation encodes the bits.
pub fn bits_to_model(bits: &[bool]) -> PointedModel {
    let props: BTreeSet<String> = (1..=bits.len()).map(|i| format!("p{i}")).collect();
    let valuation: BTreeSet<String> = bits
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| format!("p{}", i + 1))
        .collect();
    PointedModel::new(KripkeModel::sc_model(valuation, props), 0).expect("one node")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::solve_async_game;
    use crate::reductions::Gate;

    fn identity_circuit() -> Circuit {
        Circuit {
            gates: vec![
                Gate {
                    name: "a".into(),
                    kind: GateKind::Input(1),
                },
                Gate {
                    name: "o".into(),
                    kind: GateKind::Or(vec![0]),
                },
            ],
            output: 1,
        }
    }

    fn check(c: &Circuit, bits: &[bool]) {
        let p = circuit_to_sc_async(c).unwrap();
        let m = bits_to_model(bits);
        let game = solve_async_game(&p, &m).unwrap().eloise_wins();
        let direct = eval_circuit(c, bits).unwrap();
        assert_eq!(game, direct, "bits {bits:?}");
    }

    #[test]
    fn identity() {
        check(&identity_circuit(), &[true]);
        check(&identity_circuit(), &[false]);
    }

    #[test]
    fn two_input_truth_tables() {
        for op in ["and", "or"] {
            let c = Circuit {
                gates: vec![
                    Gate {
                        name: "a".into(),
                        kind: GateKind::Input(1),
                    },
                    Gate {
                        name: "b".into(),
                        kind: GateKind::Input(2),
                    },
                    Gate {
                        name: "o".into(),
                        kind: if op == "and" {
                            GateKind::And(vec![0, 1])
                        } else {
                            GateKind::Or(vec![0, 1])
                        },
                    },
                ],
                output: 2,
            };
            for x in [false, true] {
                for y in [false, true] {
                    check(&c, &[x, y]);
                }
            }
        }
    }

    #[test]
    fn arity_mismatch() {
        let c = identity_circuit();
        assert!(matches!(
            eval_circuit(&c, &[]),
            Err(ReductionError::ArityMismatch { .. })
        ));
    }
}
