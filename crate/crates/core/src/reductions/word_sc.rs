//! Word-bound specialization: an MSC program intended for one word length
//! becomes an SC program with one indexed copy of every predicate per word
//! model node; diamonds become disjunctions over a position's neighbours,
//! boxes conjunctions, and boundary propositions compile to constants.

use std::collections::BTreeSet;

use crate::error::ReductionError;
use crate::model::{extended_word_model, PointedModel};
use crate::syntax::{Fragment, Program, Rule, Schema, Semantics};

/// Specialize `p` to words of length `n` over the 0-extended word model
/// (indices cover the marker nodes too). The result is an SC program over
/// indexed letter propositions `a@i` whose verdict on the single-node model
/// with valuation `{w_i@i}` equals the word-model verdict of `p`.
pub fn msc_word_to_sc(p: &Program, n: usize) -> Result<Program, ReductionError> {
    if p.fragment > Fragment::Msc {
        return Err(ReductionError::WrongFragment("MSC"));
    }
    // The node universe of the 0-extended model for length-n words.
    let nodes = n + 2;
    let neighbours = |i: usize| -> Vec<usize> {
        let mut out = Vec::new();
        if i > 0 {
            out.push(i - 1);
        }
        if i + 1 < nodes {
            out.push(i + 1);
        }
        out
    };

    // Boundary and padding propositions are fixed by the position; letters
    // stay symbolic as indexed propositions.
    let compile_prop = |name: &str, i: usize| -> Schema {
        match name {
            crate::model::P_LEFT => {
                if i == 0 {
                    Schema::Top
                } else {
                    Schema::Bottom
                }
            }
            crate::model::P_RIGHT => {
                if i == nodes - 1 {
                    Schema::Top
                } else {
                    Schema::Bottom
                }
            }
            crate::model::P_BLANK => Schema::Bottom,
            _ => {
                if i >= 1 && i <= n {
                    Schema::Prop(format!("{name}_at_{i}"))
                } else {
                    Schema::Bottom
                }
            }
        }
    };

    fn index_schema(
        s: &Schema,
        i: usize,
        neighbours: &dyn Fn(usize) -> Vec<usize>,
        compile_prop: &dyn Fn(&str, usize) -> Schema,
    ) -> Schema {
        match s {
            Schema::Bottom => Schema::Bottom,
            Schema::Top => Schema::Top,
            Schema::Prop(name) => compile_prop(name, i),
            Schema::Var(x) => Schema::Var(format!("{x}_at_{i}")),
            Schema::Not(c) => Schema::not(index_schema(c, i, neighbours, compile_prop)),
            Schema::Or(a, b) => Schema::or(
                index_schema(a, i, neighbours, compile_prop),
                index_schema(b, i, neighbours, compile_prop),
            ),
            Schema::And(a, b) => Schema::and(
                index_schema(a, i, neighbours, compile_prop),
                index_schema(b, i, neighbours, compile_prop),
            ),
            Schema::Dia(_, c) => Schema::any(
                neighbours(i)
                    .into_iter()
                    .map(|j| index_schema(c, j, neighbours, compile_prop))
                    .collect(),
            ),
            Schema::Box_(_, c) => Schema::all(
                neighbours(i)
                    .into_iter()
                    .map(|j| index_schema(c, j, neighbours, compile_prop))
                    .collect(),
            ),
            Schema::GDia(_, _) | Schema::GBox(_, _) => {
                unreachable!("fragment checked above")
            }
        }
    }

    let mut rules = Vec::new();
    for r in &p.rules {
        for i in 0..nodes {
            rules.push(Rule {
                head: format!("{}_at_{i}", r.head),
                base: index_schema(&r.base, i, &neighbours, &compile_prop),
                induction: index_schema(&r.induction, i, &neighbours, &compile_prop),
            });
        }
    }
    // The point of a word model is position 1.
    let accepting: BTreeSet<String> = p.accepting.iter().map(|x| format!("{x}_at_1")).collect();
    let rejecting: BTreeSet<String> = p.rejecting.iter().map(|x| format!("{x}_at_1")).collect();
    Ok(
        Program::with_fragment(rules, accepting, rejecting, Fragment::Sc, Semantics::Synchronous)
            .expect("indexed rules are propositional"),
    )
}

/// The single-node model encoding a concrete word for the indexed program.
pub fn word_to_sc_model(word: &[String], n: usize) -> PointedModel {
    assert_eq!(word.len(), n);
    let mut props: BTreeSet<String> = BTreeSet::new();
    let mut valuation: BTreeSet<String> = BTreeSet::new();
    for (i, a) in word.iter().enumerate() {
        let prop = format!("{a}_at_{}", i + 1);
        props.insert(prop.clone());
        valuation.insert(prop);
    }
    PointedModel::new(
        crate::model::KripkeModel::sc_model(valuation, props),
        0,
    )
    .expect("one node")
}

/// The exhaustive agreement check used by tests: every word of length `n`
/// over `alphabet` gets the same verdict from the indexed program and from
/// the word-model run.
pub fn agrees_on_all_words(
    p: &Program,
    n: usize,
    alphabet: &[&str],
) -> Result<bool, ReductionError> {
    let sc = msc_word_to_sc(p, n)?;
    let mut words: Vec<Vec<String>> = vec![vec![]];
    for _ in 0..n {
        words = words
            .into_iter()
            .flat_map(|w| {
                alphabet.iter().map(move |a| {
                    let mut w2 = w.clone();
                    w2.push(a.to_string());
                    w2
                })
            })
            .collect();
    }
    for w in words {
        let direct = crate::eval::k_accepts(p, &w, 0, None)
            .map(|v| v.is_accepted())
            .unwrap_or(false);
        let model = word_to_sc_model(&w, n);
        let indexed = crate::eval::run(&sc, &model, None)
            .map(|v| v.is_accepted())
            .unwrap_or(false);
        if direct != indexed {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::centre_point_program;
    use crate::model::word;
    use crate::syntax::program_size;

    #[test]
    fn displayed_shape_of_indexed_rules() {
        // X :- p ∨ (Y ∧ ◇X) specializes at interior positions to a
        // two-neighbour disjunction and at the ends to a single neighbour.
        let p = crate::textio::parse_program(
            "accept X\nX(0) := F\nX := p | (Y & <> X)\nY(0) := T\nY := Y\n",
            "t.msc",
        )
        .unwrap();
        let sc = msc_word_to_sc(&p, 3).unwrap();
        let x2 = sc.rule("X_at_2").unwrap();
        assert_eq!(
            x2.induction,
            Schema::or(
                Schema::Prop("p_at_2".into()),
                Schema::and(
                    Schema::Var("Y_at_2".into()),
                    Schema::or(Schema::Var("X_at_1".into()), Schema::Var("X_at_3".into()))
                )
            )
        );
        let x0 = sc.rule("X_at_0").unwrap();
        assert_eq!(
            x0.induction,
            Schema::or(
                Schema::Bottom,
                Schema::and(Schema::Var("Y_at_0".into()), Schema::Var("X_at_1".into()))
            )
        );
        assert_eq!(sc.fragment, Fragment::Sc);
    }

    #[test]
    fn boxes_expand_to_conjunctions() {
        let p = centre_point_program();
        let sc = msc_word_to_sc(&p, 2).unwrap();
        let x1 = sc.rule("X_at_1").unwrap();
        // □⊥ at position 1 is ⊥ ∧ ⊥ over both neighbours.
        assert_eq!(x1.base, Schema::and(Schema::Bottom, Schema::Bottom));
    }

    #[test]
    fn exhaustive_agreement_small() {
        let p = centre_point_program();
        assert!(agrees_on_all_words(&p, 2, &["p", "q"]).unwrap());
    }

    #[test]
    fn size_stays_linear() {
        let p = centre_point_program();
        let n = 3;
        let sc = msc_word_to_sc(&p, n).unwrap();
        assert!(program_size(&sc) <= 3 * (n as u64) * program_size(&p));
    }

    #[test]
    fn word_roundtrip_vs_word_model() {
        // The indexed valuation and the word model agree by construction.
        let w = word("pq");
        let m = extended_word_model(&w, 0).unwrap();
        assert_eq!(m.model.node_count, 4);
        let sc_model = word_to_sc_model(&w, 2);
        assert!(sc_model.model.holds(0, "p_at_1"));
        assert!(sc_model.model.holds(0, "q_at_2"));
    }
}
