//! SC satisfiability by exhaustive valuation enumeration over the program's
//! proposition universe.

use std::collections::BTreeSet;

use crate::error::ReductionError;
use crate::eval::run;
use crate::games::solve_async_game_any;
use crate::model::{KripkeModel, PointedModel};
use crate::syntax::{Fragment, Program};

/// Enumeration cap on the proposition universe.
pub const SAT_PROP_CAP: usize = 20;

fn enumerate(p: &Program) -> Result<Vec<(BTreeSet<String>, PointedModel)>, ReductionError> {
    if p.fragment != Fragment::Sc {
        return Err(ReductionError::WrongFragment("SC"));
    }
    let props: Vec<String> = p.props().into_iter().collect();
    if props.len() > SAT_PROP_CAP {
        return Err(ReductionError::EnumerationCap {
            got: props.len(),
            cap: SAT_PROP_CAP,
        });
    }
    let universe: BTreeSet<String> = props.iter().cloned().collect();
    let mut out = Vec::with_capacity(1 << props.len());
    for mask in 0u32..(1 << props.len()) {
        let valuation: BTreeSet<String> = props
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, q)| q.clone())
            .collect();
        let model = KripkeModel::sc_model(valuation.clone(), universe.clone());
        out.push((valuation, PointedModel::new(model, 0).expect("one node")));
    }
    Ok(out)
}

/// First accepted valuation under the synchronous run semantics, in mask
/// order of the sorted proposition list.
pub fn sc_sat(p: &Program) -> Result<Option<BTreeSet<String>>, ReductionError> {
    for (valuation, model) in enumerate(p)? {
        if run(p, &model, None)
            .map(|v| v.is_accepted())
            .unwrap_or(false)
        {
            return Ok(Some(valuation));
        }
    }
    Ok(None)
}

/// First valuation accepted under the asynchronous game semantics.
pub fn sc_async_sat(p: &Program) -> Result<Option<BTreeSet<String>>, ReductionError> {
    for (valuation, model) in enumerate(p)? {
        if solve_async_game_any(p, &model).eloise_wins() {
            return Ok(Some(valuation));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textio::parse_program;

    #[test]
    fn simple_satisfiable() {
        let p = parse_program("program SC\naccept X\nX(0) := p\nX := F\n", "t.msc").unwrap();
        assert_eq!(sc_sat(&p).unwrap(), Some(["p".to_string()].into()));
    }

    #[test]
    fn contradiction_unsatisfiable() {
        let p =
            parse_program("program SC\naccept X\nX(0) := p & !p\nX := X\n", "t.msc").unwrap();
        assert_eq!(sc_sat(&p).unwrap(), None);
        let mut a = p.clone();
        a.semantics = crate::syntax::Semantics::Asynchronous;
        assert_eq!(sc_async_sat(&a).unwrap(), None);
    }

    #[test]
    fn non_sc_rejected() {
        let p = parse_program("accept X\nX(0) := <> p\nX := X\n", "t.msc").unwrap();
        assert!(matches!(
            sc_sat(&p),
            Err(ReductionError::WrongFragment("SC"))
        ));
    }
}
