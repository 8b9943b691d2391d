//! Brute-force separation: enumerate programs of bounded size in a canonical
//! order and return the first that accepts every left model and no right
//! model. Bodies are generated in a normal form (right-nested connective
//! chains with non-decreasing operands, no double or constant negations);
//! any program converts to this form without growing, so searching normal
//! forms only is complete for separability at a given size.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::ReductionError;
use crate::eval::run;
use crate::model::PointedModel;
use crate::syntax::{Fragment, Program, Rule, Schema, Semantics};

#[derive(Debug, Clone, Copy)]
pub struct OracleBounds {
    pub max_vars: usize,
    pub max_threshold: u32,
    /// Abort with a resource error after this many candidates.
    pub max_candidates: u64,
}

impl Default for OracleBounds {
    fn default() -> OracleBounds {
        OracleBounds {
            max_vars: 2,
            max_threshold: 2,
            max_candidates: 20_000_000,
        }
    }
}

/// First program of size at most `k` separating `left` from `right`, or
/// `None` when the bounded enumeration is exhaustive and fruitless.
pub fn separation_oracle(
    left: &[PointedModel],
    right: &[PointedModel],
    k: u64,
    props: &BTreeSet<String>,
    fragment: Fragment,
    bounds: OracleBounds,
) -> Result<Option<Program>, ReductionError> {
    let props: Vec<String> = props.iter().cloned().collect();

    // Work chunks: variable count and per-slot body sizes, in canonical
    // order (fewer variables first, then lexicographic size vectors).
    let mut chunks: Vec<(usize, Vec<u64>)> = Vec::new();
    for nv in 1..=bounds.max_vars {
        let heads = 2 * nv as u64;
        if heads > k {
            break;
        }
        let budget = k - heads;
        let mut sizes = vec![0u64; 2 * nv];
        loop {
            if sizes.iter().sum::<u64>() <= budget {
                chunks.push((nv, sizes.clone()));
            }
            // Next size vector bounded elementwise by the budget.
            let mut i = 0;
            loop {
                if i == sizes.len() {
                    break;
                }
                sizes[i] += 1;
                if sizes[i] > budget {
                    sizes[i] = 0;
                    i += 1;
                } else {
                    break;
                }
            }
            if i == sizes.len() {
                break;
            }
        }
    }

    let counter = std::sync::atomic::AtomicU64::new(0);
    let overflow = std::sync::atomic::AtomicBool::new(false);
    let found = chunks
        .par_iter()
        .find_map_first(|(nv, sizes)| {
            enumerate_chunk(
                *nv, sizes, &props, fragment, bounds, left, right, &counter, &overflow,
            )
        });
    if overflow.load(std::sync::atomic::Ordering::Relaxed) {
        return Err(ReductionError::Resource(format!(
            "enumeration exceeded {} candidates",
            bounds.max_candidates
        )));
    }
    Ok(found)
}

#[allow(clippy::too_many_arguments)]
fn enumerate_chunk(
    nv: usize,
    sizes: &[u64],
    props: &[String],
    fragment: Fragment,
    bounds: OracleBounds,
    left: &[PointedModel],
    right: &[PointedModel],
    counter: &std::sync::atomic::AtomicU64,
    overflow: &std::sync::atomic::AtomicBool,
) -> Option<Program> {
    let vars: Vec<String> = (1..=nv).map(|i| format!("V{i}")).collect();
    // Per-slot candidate bodies: base slots are variable-free.
    let mut slot_bodies: Vec<Vec<Schema>> = Vec::with_capacity(2 * nv);
    for (slot, &size) in sizes.iter().enumerate() {
        let base_slot = slot % 2 == 0;
        let atoms = build_atoms(props, if base_slot { &[] } else { &vars });
        slot_bodies.push(schemas_of_size(size, &atoms, fragment, bounds.max_threshold));
    }

    // Cartesian product over slots, then accepting subsets.
    let mut picks = vec![0usize; 2 * nv];
    loop {
        let rules: Vec<Rule> = (0..nv)
            .map(|i| Rule {
                head: vars[i].clone(),
                base: slot_bodies[2 * i][picks[2 * i]].clone(),
                induction: slot_bodies[2 * i + 1][picks[2 * i + 1]].clone(),
            })
            .collect();
        for accept_mask in 1u32..(1 << nv) {
            if overflow.load(std::sync::atomic::Ordering::Relaxed) {
                return None;
            }
            let n = counter.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
            if n >= bounds.max_candidates {
                overflow.store(true, std::sync::atomic::Ordering::Relaxed);
                return None;
            }
            let accepting: BTreeSet<String> = (0..nv)
                .filter(|i| accept_mask >> i & 1 == 1)
                .map(|i| vars[i].clone())
                .collect();
            let candidate = Program::with_fragment(
                rules.clone(),
                accepting,
                BTreeSet::new(),
                fragment,
                Semantics::Synchronous,
            )
            .expect("enumerated bodies fit the fragment");
            if separates(&candidate, left, right) {
                return Some(candidate);
            }
        }
        // Advance the product.
        let mut i = 0;
        loop {
            if i == picks.len() {
                return None;
            }
            picks[i] += 1;
            if picks[i] == slot_bodies[i].len() {
                picks[i] = 0;
                i += 1;
            } else {
                break;
            }
        }
    }
}

fn separates(p: &Program, left: &[PointedModel], right: &[PointedModel]) -> bool {
    left.iter().all(|m| {
        run(p, m, None)
            .map(|v| v.is_accepted())
            .unwrap_or(false)
    }) && !right.iter().any(|m| {
        run(p, m, None)
            .map(|v| v.is_accepted())
            .unwrap_or(true)
    })
}

#[derive(Clone)]
struct Atoms {
    props: Vec<String>,
    vars: Vec<String>,
}

fn build_atoms(props: &[String], vars: &[String]) -> Atoms {
    Atoms {
        props: props.to_vec(),
        vars: vars.to_vec(),
    }
}

/// All normal-form schemata of exactly the given size. Size 0 is the two
/// constants; negation skips double negations and negated constants;
/// connective chains are right-nested with non-decreasing operands.
fn schemas_of_size(size: u64, atoms: &Atoms, fragment: Fragment, max_t: u32) -> Vec<Schema> {
    let mut out = Vec::new();
    if size == 0 {
        out.push(Schema::Bottom);
        out.push(Schema::Top);
        return out;
    }
    // Atoms.
    if size == 1 {
        for p in &atoms.props {
            out.push(Schema::prop(p));
        }
        for v in &atoms.vars {
            out.push(Schema::var(v));
        }
    }
    // Negations of anything but a constant or another negation.
    for inner in schemas_of_size(size - 1, atoms, fragment, max_t) {
        if !matches!(inner, Schema::Not(_) | Schema::Top | Schema::Bottom) {
            out.push(Schema::not(inner));
        }
    }
    // Modal operators, fragment-permitting.
    let thresholds: Vec<u32> = match fragment {
        Fragment::Sc => vec![],
        Fragment::Msc => vec![1],
        _ => (1..=max_t).collect(),
    };
    for &t in &thresholds {
        if u64::from(t) > size {
            continue;
        }
        for inner in schemas_of_size(size - u64::from(t), atoms, fragment, max_t) {
            out.push(Schema::dia(t, inner.clone()));
            out.push(Schema::box_(t, inner.clone()));
            if fragment == Fragment::Ggmsc {
                out.push(Schema::gdia(t, inner.clone()));
                out.push(Schema::gbox(t, inner));
            }
        }
    }
    // Right-nested chains: op(a, rest) with a ≤ every head of rest, rest not
    // starting a longer chain of the same op unless ordered.
    for op_is_and in [false, true] {
        for asize in 0..size {
            let rest_size = size - 1 - asize;
            for a in schemas_of_size(asize, atoms, fragment, max_t) {
                // The left operand of a chain is never the same connective.
                let a_is_same = match (&a, op_is_and) {
                    (Schema::And(_, _), true) | (Schema::Or(_, _), false) => true,
                    _ => false,
                };
                if a_is_same {
                    continue;
                }
                for b in schemas_of_size(rest_size, atoms, fragment, max_t) {
                    // Non-decreasing chain heads prune permutations.
                    let b_head = match (&b, op_is_and) {
                        (Schema::And(x, _), true) | (Schema::Or(x, _), false) => (**x).clone(),
                        _ => b.clone(),
                    };
                    if a > b_head {
                        continue;
                    }
                    out.push(if op_is_and {
                        Schema::and(a.clone(), b)
                    } else {
                        Schema::or(a.clone(), b)
                    });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{bare_path, path_model};
    use crate::syntax::program_size;

    fn p_node() -> PointedModel {
        path_model(1, ["p".to_string()].into(), |_| ["p".to_string()].into())
    }

    fn plain_node() -> PointedModel {
        path_model(1, ["p".to_string()].into(), |_| BTreeSet::new())
    }

    #[test]
    fn separates_p_from_not_p_at_three_not_two() {
        let props: BTreeSet<String> = ["p".to_string()].into();
        let found = separation_oracle(
            &[p_node()],
            &[plain_node()],
            3,
            &props,
            Fragment::Msc,
            OracleBounds::default(),
        )
        .unwrap()
        .expect("a size-3 separator exists");
        assert_eq!(program_size(&found), 3);
        let none = separation_oracle(
            &[p_node()],
            &[plain_node()],
            2,
            &props,
            Fragment::Msc,
            OracleBounds::default(),
        )
        .unwrap();
        assert!(none.is_none());
    }

    #[test]
    fn equal_classes_are_inseparable() {
        let props: BTreeSet<String> = ["p".to_string()].into();
        for k in 2..=5 {
            let none = separation_oracle(
                &[p_node()],
                &[p_node()],
                k,
                &props,
                Fragment::Msc,
                OracleBounds::default(),
            )
            .unwrap();
            assert!(none.is_none(), "k = {k}");
        }
    }

    #[test]
    fn empty_left_class_gets_the_bottom_program() {
        let props: BTreeSet<String> = ["p".to_string()].into();
        let found = separation_oracle(
            &[],
            &[p_node(), plain_node(), bare_path(3)],
            4,
            &props,
            Fragment::Msc,
            OracleBounds::default(),
        )
        .unwrap()
        .expect("the bottom program accepts nothing");
        assert_eq!(program_size(&found), 2);
        assert_eq!(found.rules[0].base, Schema::Bottom);
        assert_eq!(found.rules[0].induction, Schema::Bottom);
    }

    #[test]
    fn candidate_cap_aborts() {
        let props: BTreeSet<String> = ["p".to_string()].into();
        let res = separation_oracle(
            &[p_node()],
            &[p_node()],
            8,
            &props,
            Fragment::Ggmsc,
            OracleBounds {
                max_vars: 2,
                max_threshold: 2,
                max_candidates: 100,
            },
        );
        assert!(matches!(res, Err(ReductionError::Resource(_))));
    }
}
