//! Strong negation normal form: negation only on proposition symbols,
//! achieved with a dual predicate per head tracking the complement.

use std::collections::BTreeSet;

use crate::syntax::{Program, Rule, Schema};

/// Push negations to the atoms. `¬X` stays (plain negation normal form).
fn nnf(s: &Schema, negated: bool) -> Schema {
    match s {
        Schema::Bottom => {
            if negated {
                Schema::Top
            } else {
                Schema::Bottom
            }
        }
        Schema::Top => {
            if negated {
                Schema::Bottom
            } else {
                Schema::Top
            }
        }
        Schema::Prop(p) => {
            let atom = Schema::Prop(p.clone());
            if negated {
                Schema::not(atom)
            } else {
                atom
            }
        }
        Schema::Var(x) => {
            let atom = Schema::Var(x.clone());
            if negated {
                Schema::not(atom)
            } else {
                atom
            }
        }
        Schema::Not(c) => nnf(c, !negated),
        Schema::Or(a, b) => {
            if negated {
                Schema::and(nnf(a, true), nnf(b, true))
            } else {
                Schema::or(nnf(a, false), nnf(b, false))
            }
        }
        Schema::And(a, b) => {
            if negated {
                Schema::or(nnf(a, true), nnf(b, true))
            } else {
                Schema::and(nnf(a, false), nnf(b, false))
            }
        }
        // ¬◇≥k φ ≡ □<k ¬φ and dually; same for the global pair.
        Schema::Dia(k, c) => {
            if negated {
                Schema::box_(*k, nnf(c, true))
            } else {
                Schema::dia(*k, nnf(c, false))
            }
        }
        Schema::Box_(k, c) => {
            if negated {
                Schema::dia(*k, nnf(c, true))
            } else {
                Schema::box_(*k, nnf(c, false))
            }
        }
        Schema::GDia(k, c) => {
            if negated {
                Schema::gbox(*k, nnf(c, true))
            } else {
                Schema::gdia(*k, nnf(c, false))
            }
        }
        Schema::GBox(k, c) => {
            if negated {
                Schema::gdia(*k, nnf(c, true))
            } else {
                Schema::gbox(*k, nnf(c, false))
            }
        }
    }
}

/// Replace each `¬X` by the dual predicate named by `dual`.
fn replace_negated_vars(s: &Schema, dual: &impl Fn(&str) -> String) -> Schema {
    match s {
        Schema::Not(c) => match &**c {
            Schema::Var(x) => Schema::Var(dual(x)),
            _ => Schema::not(replace_negated_vars(c, dual)),
        },
        Schema::Bottom | Schema::Top | Schema::Prop(_) | Schema::Var(_) => s.clone(),
        Schema::Or(a, b) => Schema::or(
            replace_negated_vars(a, dual),
            replace_negated_vars(b, dual),
        ),
        Schema::And(a, b) => Schema::and(
            replace_negated_vars(a, dual),
            replace_negated_vars(b, dual),
        ),
        Schema::Dia(k, c) => Schema::dia(*k, replace_negated_vars(c, dual)),
        Schema::Box_(k, c) => Schema::box_(*k, replace_negated_vars(c, dual)),
        Schema::GDia(k, c) => Schema::gdia(*k, replace_negated_vars(c, dual)),
        Schema::GBox(k, c) => Schema::gbox(*k, replace_negated_vars(c, dual)),
    }
}

/// True when every rule body is already in strong negation normal form.
pub fn is_strong_nnf(p: &Program) -> bool {
    p.rules
        .iter()
        .all(|r| r.base.is_strong_nnf() && r.induction.is_strong_nnf())
}

/// Translate to strong negation normal form. Programs already in strong NNF
/// are returned verbatim. Otherwise each head predicate `X` gains a dual
/// predicate tracking `¬X` round by round, and every `¬X` in an induction
/// body is replaced by the dual. Original predicate values, acceptance and
/// rejection are unchanged.
pub fn to_strong_nnf(p: &Program) -> Program {
    if is_strong_nnf(p) {
        return p.clone();
    }

    let declared: BTreeSet<String> = p.rules.iter().map(|r| r.head.clone()).collect();
    let dual_name = |x: &str| -> String {
        let mut name = format!("{x}_d");
        while declared.contains(&name) {
            name.push('_');
        }
        name
    };

    let mut rules = Vec::with_capacity(p.rules.len() * 2);
    for r in &p.rules {
        rules.push(Rule {
            head: r.head.clone(),
            base: nnf(&r.base, false),
            induction: replace_negated_vars(&nnf(&r.induction, false), &dual_name),
        });
    }
    for r in &p.rules {
        rules.push(Rule {
            head: dual_name(&r.head),
            base: nnf(&r.base, true),
            induction: replace_negated_vars(&nnf(&r.induction, true), &dual_name),
        });
    }
    Program::with_fragment(
        rules,
        p.accepting.clone(),
        p.rejecting.clone(),
        p.fragment,
        p.semantics,
    )
    .expect("dual construction preserves validity")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{initial_config, step};
    use crate::model::KripkeModel;
    use crate::syntax::{program_size, Semantics};

    fn negating_program() -> Program {
        Program::new(
            vec![Rule {
                head: "X".into(),
                base: Schema::not(Schema::prop("p")),
                induction: Schema::not(Schema::var("X")),
            }],
            ["X".to_string()].into(),
            BTreeSet::new(),
            Semantics::Synchronous,
        )
        .unwrap()
    }

    #[test]
    fn output_is_strong_nnf_and_duals_track_complements() {
        let p = negating_program();
        let q = to_strong_nnf(&p);
        assert!(is_strong_nnf(&q));
        assert_eq!(q.rule("X").unwrap().induction, Schema::var("X_d"));
        assert_eq!(q.rule("X_d").unwrap().induction, Schema::var("X"));

        // Round-by-round equivalence and dual complementation on all four
        // one-node valuations of {p}.
        for has_p in [false, true] {
            let val = if has_p {
                [("p".to_string())].into()
            } else {
                BTreeSet::new()
            };
            let m = KripkeModel::sc_model(val, ["p".to_string()].into());
            let xi = 0;
            let x_d = q.rule_index("X_d").unwrap();
            let mut gp = initial_config(&p, &m);
            let mut gq = initial_config(&q, &m);
            for _ in 0..8 {
                assert_eq!(gp.get(0, xi), gq.get(0, xi));
                assert_eq!(gq.get(0, x_d), !gq.get(0, xi));
                gp = step(&p, &m, &gp);
                gq = step(&q, &m, &gq);
            }
        }
    }

    #[test]
    fn already_strong_nnf_is_verbatim() {
        let p = Program::new(
            vec![Rule {
                head: "X".into(),
                base: Schema::not(Schema::prop("p")),
                induction: Schema::var("X"),
            }],
            ["X".to_string()].into(),
            BTreeSet::new(),
            Semantics::Synchronous,
        )
        .unwrap();
        assert_eq!(to_strong_nnf(&p), p);
    }

    #[test]
    fn size_grows_linearly() {
        let p = negating_program();
        let q = to_strong_nnf(&p);
        assert!(program_size(&q) <= 4 * program_size(&p));
    }
}
