//! Small named programs and machines used across tests, benches and docs.

use std::collections::BTreeSet;

use crate::syntax::{Program, Rule, Schema, Semantics};

/// The two-predicate counting program of size 19:
/// `X(0):-¬p, X:-Y∧◇≥2X, Y(0):-r∨q, Y:-□<3¬Y`, accepting `{X}`.
pub fn counting_example() -> Program {
    Program::new(
        vec![
            Rule {
                head: "X".into(),
                base: Schema::not(Schema::prop("p")),
                induction: Schema::and(Schema::var("Y"), Schema::dia(2, Schema::var("X"))),
            },
            Rule {
                head: "Y".into(),
                base: Schema::or(Schema::prop("r"), Schema::prop("q")),
                induction: Schema::box_(3, Schema::not(Schema::var("Y"))),
            },
        ],
        ["X".to_string()].into(),
        BTreeSet::new(),
        Semantics::Synchronous,
    )
    .expect("fixture is valid")
}

/// Dead-end propagation: `X(0):-□⊥, X:-◇X∧□X`, accepting `{X}`. Accepts a
/// pointed model iff every walk from the point reaches a dead end in the
/// same number of steps.
pub fn centre_point_program() -> Program {
    Program::new(
        vec![Rule {
            head: "X".into(),
            base: Schema::box_(1, Schema::Bottom),
            induction: Schema::and(
                Schema::dia(1, Schema::var("X")),
                Schema::box_(1, Schema::var("X")),
            ),
        }],
        ["X".to_string()].into(),
        BTreeSet::new(),
        Semantics::Synchronous,
    )
    .expect("fixture is valid")
}

/// `X(0):-p, X:-⊥`, accepting `{X}`: accepts exactly the models whose point
/// satisfies `p`, at round 0.
pub fn prop_probe(prop: &str) -> Program {
    Program::new(
        vec![Rule {
            head: "X".into(),
            base: Schema::prop(prop),
            induction: Schema::Bottom,
        }],
        ["X".to_string()].into(),
        BTreeSet::new(),
        Semantics::Synchronous,
    )
    .expect("fixture is valid")
}

/// The three-rule asynchronous program used to exercise the label
/// translation: `X:-Y∧Z, Y:-◇X, Z:-X∨Y` with base propositions
/// `px, py, pz` and accepting `{X}`.
pub fn label_translation_example() -> Program {
    Program::new(
        vec![
            Rule {
                head: "X".into(),
                base: Schema::prop("px"),
                induction: Schema::and(Schema::var("Y"), Schema::var("Z")),
            },
            Rule {
                head: "Y".into(),
                base: Schema::prop("py"),
                induction: Schema::dia(1, Schema::var("X")),
            },
            Rule {
                head: "Z".into(),
                base: Schema::prop("pz"),
                induction: Schema::or(Schema::var("X"), Schema::var("Y")),
            },
        ],
        ["X".to_string()].into(),
        BTreeSet::new(),
        Semantics::Asynchronous,
    )
    .expect("fixture is valid")
}
