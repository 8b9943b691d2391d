//! Finite Kripke models, pointed and clocked variants, global configurations,
//! and the word-model constructions.

use std::collections::BTreeSet;

use crate::error::ModelError;

/// Names reserved for word-model markers.
pub const P_BLANK: &str = "p_blank";
pub const P_LEFT: &str = "p_left";
pub const P_RIGHT: &str = "p_right";

/// A finite directed graph with a propositional valuation. Nodes are
/// `0..node_count`, which fixes the iteration order used everywhere a
/// deterministic enumeration of nodes or successors is needed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KripkeModel {
    pub node_count: usize,
    pub edges: BTreeSet<(usize, usize)>,
    /// One proposition set per node.
    pub valuation: Vec<BTreeSet<String>>,
    /// Declared proposition universe.
    pub props: BTreeSet<String>,
}

impl KripkeModel {
    pub fn new(
        node_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        valuation: Vec<BTreeSet<String>>,
        props: BTreeSet<String>,
    ) -> Result<KripkeModel, ModelError> {
        let edges: BTreeSet<(usize, usize)> = edges.into_iter().collect();
        for &(a, b) in &edges {
            let node = if a >= node_count { a } else { b };
            if a >= node_count || b >= node_count {
                return Err(ModelError::BadEdge {
                    node,
                    count: node_count,
                });
            }
        }
        if valuation.len() != node_count {
            return Err(ModelError::BadValuationNode {
                node: valuation.len(),
                count: node_count,
            });
        }
        for val in &valuation {
            for p in val {
                if !props.contains(p) {
                    return Err(ModelError::UndeclaredProp(p.clone()));
                }
            }
        }
        Ok(KripkeModel {
            node_count,
            edges,
            valuation,
            props,
        })
    }

    /// Out-neighbours of `v` in increasing order.
    pub fn successors(&self, v: usize) -> Vec<usize> {
        self.edges
            .range((v, 0)..=(v, usize::MAX))
            .map(|&(_, u)| u)
            .collect()
    }

    pub fn holds(&self, v: usize, prop: &str) -> bool {
        self.valuation[v].contains(prop)
    }

    /// Single node, no edges — the model shape of SC programs.
    pub fn sc_model(valuation: BTreeSet<String>, props: BTreeSet<String>) -> KripkeModel {
        KripkeModel::new(1, [], vec![valuation], props).expect("one-node model is valid")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointedModel {
    pub model: KripkeModel,
    pub point: usize,
}

impl PointedModel {
    pub fn new(model: KripkeModel, point: usize) -> Result<PointedModel, ModelError> {
        if point >= model.node_count {
            return Err(ModelError::BadPoint {
                point,
                count: model.node_count,
            });
        }
        Ok(PointedModel { model, point })
    }
}

/// A pointed model annotated with how many iterations remain.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClockedModel {
    pub pointed: PointedModel,
    pub clock: u32,
}

impl ClockedModel {
    pub fn new(pointed: PointedModel, clock: u32) -> ClockedModel {
        ClockedModel { pointed, clock }
    }
}

/// The head predicates true at each node in one round, stored as fixed-width
/// bit rows (one bit per predicate per node).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GlobalConfiguration {
    width: usize,
    words_per_node: usize,
    bits: Vec<u64>,
    nodes: usize,
}

impl GlobalConfiguration {
    pub fn empty(nodes: usize, width: usize) -> GlobalConfiguration {
        let words_per_node = width.div_ceil(64).max(1);
        GlobalConfiguration {
            width,
            words_per_node,
            bits: vec![0; nodes * words_per_node],
            nodes,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn get(&self, node: usize, var: usize) -> bool {
        debug_assert!(node < self.nodes && var < self.width);
        let w = self.bits[node * self.words_per_node + var / 64];
        w >> (var % 64) & 1 == 1
    }

    pub fn set(&mut self, node: usize, var: usize, value: bool) {
        debug_assert!(node < self.nodes && var < self.width);
        let w = &mut self.bits[node * self.words_per_node + var / 64];
        if value {
            *w |= 1 << (var % 64);
        } else {
            *w &= !(1 << (var % 64));
        }
    }

    /// Variable indices true at `node`.
    pub fn row(&self, node: usize) -> Vec<usize> {
        (0..self.width).filter(|&v| self.get(node, v)).collect()
    }

    /// Pointwise subset order (true everywhere implies true everywhere).
    pub fn le(&self, other: &GlobalConfiguration) -> bool {
        self.bits
            .iter()
            .zip(&other.bits)
            .all(|(a, b)| a & !b == 0)
    }
}

/// Directed path `w_length → … → w_1` pointed at `w_length` (node 0 here is
/// the start of the path; the dead end is the last node). Valuations come
/// from `scheme(i)` where `i` counts from the pointed end starting at 0.
pub fn path_model(
    length: usize,
    props: BTreeSet<String>,
    scheme: impl Fn(usize) -> BTreeSet<String>,
) -> PointedModel {
    assert!(length >= 1, "path length must be at least 1");
    let edges = (0..length.saturating_sub(1)).map(|i| (i, i + 1));
    let valuation = (0..length).map(&scheme).collect();
    let model = KripkeModel::new(length, edges, valuation, props).expect("path model is valid");
    PointedModel::new(model, 0).expect("point 0 exists")
}

/// Path with empty valuations everywhere.
pub fn bare_path(length: usize) -> PointedModel {
    path_model(length, BTreeSet::new(), |_| BTreeSet::new())
}

/// The `pad`-extended word model of `word`: nodes `0..len+pad+2` linked both
/// ways along the line; node 0 carries the left marker, the last node the
/// right marker, letters sit at `1..=len`, blanks fill the padding. The point
/// is node 1.
pub fn extended_word_model(word: &[String], pad: usize) -> Result<PointedModel, ModelError> {
    for letter in word {
        if letter == P_BLANK || letter == P_LEFT || letter == P_RIGHT {
            return Err(ModelError::ReservedLetter(letter.clone()));
        }
    }
    let n = word.len() + pad + 2;
    let mut edges = BTreeSet::new();
    for i in 0..n - 1 {
        edges.insert((i, i + 1));
        edges.insert((i + 1, i));
    }
    let mut props: BTreeSet<String> = word.iter().cloned().collect();
    props.insert(P_BLANK.to_string());
    props.insert(P_LEFT.to_string());
    props.insert(P_RIGHT.to_string());
    let mut valuation = Vec::with_capacity(n);
    valuation.push([P_LEFT.to_string()].into());
    for letter in word {
        valuation.push([letter.clone()].into());
    }
    for _ in 0..pad {
        valuation.push([P_BLANK.to_string()].into());
    }
    valuation.push([P_RIGHT.to_string()].into());
    let model = KripkeModel::new(n, edges, valuation, props)?;
    // Point 1 exists even for the empty word (it is then the right marker).
    PointedModel::new(model, 1)
}

/// Convenience for single-character letters.
pub fn word(s: &str) -> Vec<String> {
    s.chars().map(|c| c.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extended_word_model_shape() {
        let m = extended_word_model(&word("ppqqpp"), 3).unwrap();
        assert_eq!(m.model.node_count, 11);
        assert_eq!(m.point, 1);
        let vals: Vec<String> = (0..11)
            .map(|i| m.model.valuation[i].iter().cloned().collect::<Vec<_>>().join(","))
            .collect();
        assert_eq!(
            vals,
            vec![
                P_LEFT, "p", "p", "q", "q", "p", "p", P_BLANK, P_BLANK, P_BLANK, P_RIGHT
            ]
        );
        assert_eq!(m.model.edges.len(), 20);
        // Interior nodes see two successors, endpoints one.
        for v in 0..11 {
            let deg = m.model.successors(v).len();
            if v == 0 || v == 10 {
                assert_eq!(deg, 1);
            } else {
                assert_eq!(deg, 2);
            }
        }
    }

    #[test]
    fn empty_word_model() {
        let m = extended_word_model(&[], 0).unwrap();
        assert_eq!(m.model.node_count, 2);
        assert_eq!(m.point, 1);
        assert!(m.model.holds(0, P_LEFT));
        assert!(m.model.holds(1, P_RIGHT));
    }

    #[test]
    fn one_letter_model() {
        let m = extended_word_model(&word("p"), 1).unwrap();
        assert_eq!(m.model.node_count, 4);
        assert!(m.model.holds(1, "p"));
        assert!(m.model.holds(2, P_BLANK));
    }

    #[test]
    fn reserved_letters_rejected() {
        let err = extended_word_model(&[P_BLANK.to_string()], 0);
        assert!(matches!(err, Err(ModelError::ReservedLetter(_))));
    }

    #[test]
    fn path_model_shape() {
        let p = bare_path(1);
        assert_eq!(p.model.node_count, 1);
        assert!(p.model.edges.is_empty());
        let p = bare_path(3);
        assert_eq!(p.model.node_count, 3);
        assert_eq!(p.model.edges.len(), 2);
        assert_eq!(p.point, 0);
    }

    #[test]
    fn configuration_bits() {
        let mut g = GlobalConfiguration::empty(3, 70);
        g.set(2, 69, true);
        g.set(0, 0, true);
        assert!(g.get(2, 69));
        assert!(g.get(0, 0));
        assert!(!g.get(1, 0));
        g.set(2, 69, false);
        assert!(!g.get(2, 69));
        assert_eq!(g.row(0), vec![0]);
    }
}
