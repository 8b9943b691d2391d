//! The clockless formula game: positions `(verifier, node, subformula)` over
//! a fixed configuration. The winner matches schema truth; the witness is a
//! principal play.

use super::{GameOutcome, Player, Winner};
use crate::eval::eval_schema;
use crate::model::{GlobalConfiguration, KripkeModel};
use crate::syntax::Schema;

/// Solve `G(M_g, node, s)`: Eloise wins iff the schema holds. The witness
/// descends the formula, taking truth-guided branches for the winning side.
pub fn solve_formula_game(
    m: &KripkeModel,
    g: &GlobalConfiguration,
    vars: &[String],
    node: usize,
    s: &Schema,
) -> GameOutcome {
    let eloise = eval_schema(m, g, vars, node, s);
    let mut witness = Vec::new();
    if eloise {
        trace_play(m, g, vars, Player::Eloise, node, s, &mut witness);
    }
    GameOutcome {
        winner: if eloise { Winner::Eloise } else { Winner::Abelard },
        witness,
    }
}

/// One play in which the verifier's choices follow truth and the falsifier
/// plays the first legal reply.
fn trace_play(
    m: &KripkeModel,
    g: &GlobalConfiguration,
    vars: &[String],
    verifier: Player,
    node: usize,
    s: &Schema,
    out: &mut Vec<String>,
) {
    match s {
        Schema::Bottom | Schema::Top | Schema::Prop(_) | Schema::Var(_) => {
            out.push(format!("at node {node}: atomic {} checked", atom_name(s)));
        }
        Schema::Not(c) => {
            out.push(format!("negation: verifier becomes {}", verifier.other()));
            trace_play(m, g, vars, verifier.other(), node, c, out);
        }
        Schema::Or(a, b) | Schema::And(a, b) => {
            // Descend into a branch whose value matches the whole position,
            // which is where the winning side steers the play.
            let truth = eval_schema(m, g, vars, node, s);
            let pick_a = eval_schema(m, g, vars, node, a) == truth;
            let (branch, name) = if pick_a { (a, "left") } else { (b, "right") };
            out.push(format!("connective: {name} branch"));
            trace_play(m, g, vars, verifier, node, branch, out);
        }
        Schema::Dia(k, c) | Schema::GDia(k, c) | Schema::Box_(k, c) | Schema::GBox(k, c) => {
            let local = matches!(s, Schema::Dia(_, _) | Schema::Box_(_, _));
            let is_dia = matches!(s, Schema::Dia(_, _) | Schema::GDia(_, _));
            let pool: Vec<usize> = if local {
                m.successors(node)
            } else {
                (0..m.node_count).collect()
            };
            // For diamonds the chooser exhibits k satisfying nodes; for boxes
            // the chooser exhibits k falsifying ones. Either way the play
            // continues at one representative.
            let want = is_dia == eval_schema(m, g, vars, node, s);
            let targets: Vec<usize> = pool
                .iter()
                .copied()
                .filter(|&u| eval_schema(m, g, vars, u, c) == want)
                .take(*k as usize)
                .collect();
            match targets.first() {
                Some(&u) => {
                    out.push(format!("modal move: continue at node {u}"));
                    trace_play(m, g, vars, verifier, u, c, out);
                }
                None => out.push("modal move: chooser cannot supply the set".to_string()),
            }
        }
    }
}

fn atom_name(s: &Schema) -> String {
    match s {
        Schema::Bottom => "F".into(),
        Schema::Top => "T".into(),
        Schema::Prop(p) => p.clone(),
        Schema::Var(x) => x.clone(),
        _ => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::bare_path;

    #[test]
    fn truth_decides_winner() {
        let pm = bare_path(3);
        let g = GlobalConfiguration::empty(3, 0);
        assert_eq!(
            solve_formula_game(&pm.model, &g, &[], 0, &Schema::Top).winner,
            Winner::Eloise
        );
        assert_eq!(
            solve_formula_game(&pm.model, &g, &[], 0, &Schema::not(Schema::Top)).winner,
            Winner::Abelard
        );
    }

    #[test]
    fn negated_prop_at_prop_node() {
        let m = crate::model::KripkeModel::sc_model(
            ["p".to_string()].into(),
            ["p".to_string()].into(),
        );
        let g = GlobalConfiguration::empty(1, 0);
        let out = solve_formula_game(&m, &g, &[], 0, &Schema::not(Schema::prop("p")));
        assert_eq!(out.winner, Winner::Abelard);
        assert!(out.witness.is_empty());
    }
}
