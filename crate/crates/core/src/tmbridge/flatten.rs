//! Flattening: rewrite a program so base bodies have modal depth 0,
//! induction bodies modal depth at most 1, and no proposition appears in an
//! induction body. A one-hot clock gates the original predicates so they
//! refresh once per macro-round while pipeline predicates recompute the
//! modal layers; verdicts dilate in round number but keep their category.

use std::collections::BTreeSet;

use crate::syntax::{Program, Rule, Schema, Semantics};

/// The shape compile_program_to_tm needs.
pub fn is_flat(p: &Program) -> bool {
    p.rules.iter().all(|r| {
        r.base.modal_depth() == 0
            && r.induction.modal_depth() <= 1
            && {
                let mut props = BTreeSet::new();
                r.induction.props(&mut props);
                props.is_empty()
            }
    })
}

/// Conforming programs are returned verbatim; others get the gated-pipeline
/// rewrite. Accepting and rejecting predicates keep their names.
pub fn flatten(p: &Program) -> Program {
    if is_flat(p) {
        return p.clone();
    }
    let depth = p
        .rules
        .iter()
        .flat_map(|r| [r.base.modal_depth(), r.induction.modal_depth()])
        .max()
        .unwrap_or(0)
        .max(1) as usize;
    let period = depth + 1;

    let declared: BTreeSet<String> = p.rules.iter().map(|r| r.head.clone()).collect();
    let fresh = |base: String| -> String {
        let mut name = base;
        while declared.contains(&name) {
            name.push('_');
        }
        name
    };

    let mut rules: Vec<Rule> = Vec::new();

    // Persistent proposition registers.
    let props = p.props();
    let prop_reg = |name: &str| fresh(format!("Zp_{name}"));
    for prop in &props {
        let reg = prop_reg(prop);
        rules.push(Rule {
            head: reg.clone(),
            base: Schema::prop(prop),
            induction: Schema::Var(reg),
        });
    }

    // One-hot clock of length `period` and the warm-up latch.
    let clock = |i: usize| fresh(format!("Ck_{i}"));
    for i in 0..period {
        rules.push(Rule {
            head: clock(i),
            base: if i == 0 { Schema::Top } else { Schema::Bottom },
            induction: Schema::Var(clock((i + period - 1) % period)),
        });
    }
    let warm = fresh("Warm".into());
    rules.push(Rule {
        head: warm.clone(),
        base: Schema::Bottom,
        induction: Schema::or(Schema::Var(warm.clone()), Schema::Var(clock(period - 1))),
    });

    // Pipeline predicates, one per modal occurrence; children reference the
    // next layer's pipelines, proposition registers and original predicates.
    struct Ctx {
        rules: Vec<Rule>,
        counter: usize,
    }
    impl Ctx {
        fn rep(
            &mut self,
            s: &Schema,
            fresh: &dyn Fn(String) -> String,
            prop_reg: &dyn Fn(&str) -> String,
        ) -> Schema {
            match s {
                Schema::Bottom => Schema::Bottom,
                Schema::Top => Schema::Top,
                Schema::Prop(name) => Schema::Var(prop_reg(name)),
                Schema::Var(x) => Schema::Var(x.clone()),
                Schema::Not(c) => Schema::not(self.rep(c, fresh, prop_reg)),
                Schema::Or(a, b) => Schema::or(
                    self.rep(a, fresh, prop_reg),
                    self.rep(b, fresh, prop_reg),
                ),
                Schema::And(a, b) => Schema::and(
                    self.rep(a, fresh, prop_reg),
                    self.rep(b, fresh, prop_reg),
                ),
                Schema::Dia(_, _) | Schema::Box_(_, _) | Schema::GDia(_, _)
                | Schema::GBox(_, _) => {
                    let child = s.children()[0];
                    let inner = self.rep(child, fresh, prop_reg);
                    let body = match s {
                        Schema::Dia(k, _) => Schema::dia(*k, inner),
                        Schema::Box_(k, _) => Schema::box_(*k, inner),
                        Schema::GDia(k, _) => Schema::gdia(*k, inner),
                        Schema::GBox(k, _) => Schema::gbox(*k, inner),
                        _ => unreachable!(),
                    };
                    self.counter += 1;
                    let head = fresh(format!("Pm_{}", self.counter));
                    self.rules.push(Rule {
                        head: head.clone(),
                        base: Schema::Bottom,
                        induction: body,
                    });
                    Schema::Var(head)
                }
            }
        }
    }
    let mut ctx = Ctx {
        rules: Vec::new(),
        counter: 0,
    };

    // Gated originals: refresh from the base pipeline at the first gate and
    // from the induction pipeline afterwards; hold the value in between.
    let gate = Schema::Var(clock(period - 1));
    let mut gated = Vec::new();
    for r in &p.rules {
        let base_top = ctx.rep(&r.base, &fresh, &prop_reg);
        let ind_top = ctx.rep(&r.induction, &fresh, &prop_reg);
        let refresh = Schema::or(
            Schema::and(Schema::not(Schema::Var(warm.clone())), base_top),
            Schema::and(Schema::Var(warm.clone()), ind_top),
        );
        gated.push(Rule {
            head: r.head.clone(),
            base: Schema::Bottom,
            induction: Schema::or(
                Schema::and(gate.clone(), refresh),
                Schema::and(Schema::not(gate.clone()), Schema::Var(r.head.clone())),
            ),
        });
    }
    rules.extend(ctx.rules);
    rules.extend(gated);

    Program::with_fragment(
        rules,
        p.accepting.clone(),
        p.rejecting.clone(),
        p.fragment,
        Semantics::Synchronous,
    )
    .expect("flattened program is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{run, Verdict};
    use crate::fixtures::centre_point_program;
    use crate::model::bare_path;

    #[test]
    fn already_flat_is_verbatim() {
        let p = crate::fixtures::prop_probe("p");
        // prop_probe has p in the base rule only.
        assert!(is_flat(&p));
        assert_eq!(flatten(&p), p);
    }

    #[test]
    fn output_is_flat_and_idempotent() {
        let p = centre_point_program();
        assert!(!is_flat(&p));
        let f = flatten(&p);
        assert!(is_flat(&f));
        assert_eq!(flatten(&f), f);
    }

    #[test]
    fn verdict_category_preserved_on_paths() {
        let p = centre_point_program();
        let f = flatten(&p);
        for len in 1..=6 {
            let pm = bare_path(len);
            let orig = run(&p, &pm, None).unwrap();
            let flat = run(&f, &pm, None).unwrap();
            match (orig, flat) {
                (Verdict::AcceptedAt(_), Verdict::AcceptedAt(_)) => {}
                (Verdict::NeverAccepts { .. }, Verdict::NeverAccepts { .. }) => {}
                (Verdict::RejectedAt(_), Verdict::RejectedAt(_)) => {}
                (o, f) => panic!("length {len}: {o} vs {f}"),
            }
        }
    }

    #[test]
    fn depth_two_body_preserved() {
        use crate::syntax::Rule;
        // X(0):-◇◇p, X:-X: accepts iff a node two steps away satisfies p.
        let p = Program::new(
            vec![Rule {
                head: "X".into(),
                base: Schema::dia(1, Schema::dia(1, Schema::prop("p"))),
                induction: Schema::var("X"),
            }],
            ["X".to_string()].into(),
            std::collections::BTreeSet::new(),
            Semantics::Synchronous,
        )
        .unwrap();
        let f = flatten(&p);
        assert!(is_flat(&f));
        for len in 1..=5 {
            for p_at in 0..len {
                let pm = crate::model::path_model(
                    len,
                    ["p".to_string()].into(),
                    |i| {
                        if i == p_at {
                            ["p".to_string()].into()
                        } else {
                            Default::default()
                        }
                    },
                );
                let orig = run(&p, &pm, None).unwrap().is_accepted();
                let flat = run(&f, &pm, None).unwrap().is_accepted();
                assert_eq!(orig, flat, "len {len}, p at {p_at}");
            }
        }
    }
}
