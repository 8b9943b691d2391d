//! Syntax forests: one labeled tree per rule body, with back edges from each
//! variable occurrence to both roots of that predicate's trees. The size of a
//! program's forest equals the program's size.

use std::collections::BTreeSet;

use crate::syntax::{Program, Schema};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleKind {
    Base,
    Iter,
}

/// Node labels of a (partial) syntax forest.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeLabel {
    Bottom,
    Top,
    Prop(String),
    Var(String),
    Not,
    Or,
    And,
    Dia(u32),
    Box_(u32),
    GDia(u32),
    GBox(u32),
}

impl NodeLabel {
    /// Size contribution: thresholds for operators, 1 for the counted
    /// symbols, 0 for constants.
    pub fn cost(&self) -> u64 {
        match self {
            NodeLabel::Bottom | NodeLabel::Top => 0,
            NodeLabel::Dia(k) | NodeLabel::Box_(k) | NodeLabel::GDia(k) | NodeLabel::GBox(k) => {
                u64::from(*k)
            }
            _ => 1,
        }
    }

    pub fn is_operator(&self) -> bool {
        matches!(
            self,
            NodeLabel::Dia(_) | NodeLabel::Box_(_) | NodeLabel::GDia(_) | NodeLabel::GBox(_)
        )
    }
}

/// A node-labeled forest with back edges. `label` is partial (FSG positions
/// grow their forests move by move); `rho` is total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxForest {
    /// Children of each node in creation order (tree edges).
    pub children: Vec<Vec<usize>>,
    /// Parent of each node, if any.
    pub parent: Vec<Option<usize>>,
    /// Back edges (from variable occurrences to rule roots).
    pub back: BTreeSet<(usize, usize)>,
    /// Rule tag of every node: which predicate's tree, base or iter.
    pub rho: Vec<(String, RuleKind)>,
    /// Partial labeling.
    pub label: Vec<Option<NodeLabel>>,
    /// Roots in creation order.
    pub roots: Vec<usize>,
}

impl SyntaxForest {
    pub fn new() -> SyntaxForest {
        SyntaxForest {
            children: Vec::new(),
            parent: Vec::new(),
            back: BTreeSet::new(),
            rho: Vec::new(),
            label: Vec::new(),
            roots: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.children.len()
    }

    pub fn is_empty(&self) -> bool {
        self.children.is_empty()
    }

    pub fn add_root(&mut self, rho: (String, RuleKind)) -> usize {
        let id = self.fresh(rho);
        self.roots.push(id);
        id
    }

    pub fn add_child(&mut self, parent: usize, rho: (String, RuleKind)) -> usize {
        let id = self.fresh(rho);
        self.children[parent].push(id);
        self.parent[id] = Some(parent);
        id
    }

    fn fresh(&mut self, rho: (String, RuleKind)) -> usize {
        let id = self.children.len();
        self.children.push(Vec::new());
        self.parent.push(None);
        self.rho.push(rho);
        self.label.push(None);
        id
    }

    pub fn is_root(&self, v: usize) -> bool {
        self.parent[v].is_none()
    }

    /// True if `to` is reachable from `from` over tree edges only.
    pub fn tree_reaches(&self, from: usize, to: usize) -> bool {
        let mut cur = Some(to);
        while let Some(v) = cur {
            if v == from {
                return true;
            }
            cur = self.parent[v];
        }
        false
    }

    /// Nodes reachable from `v` over tree edges and back edges.
    pub fn reachable(&self, v: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            if !seen.insert(u) {
                continue;
            }
            stack.extend(self.children[u].iter().copied());
            stack.extend(
                self.back
                    .range((u, 0)..=(u, usize::MAX))
                    .map(|&(_, t)| t),
            );
        }
        seen
    }

    /// Back edges must never point forward along tree edges.
    pub fn validate(&self) -> bool {
        self.back.iter().all(|&(v, u)| !self.tree_reaches(v, u))
    }

    /// Reconstruct the schema rooted at `v` from labels. Returns `None` if
    /// some node below `v` is unlabeled or has the wrong arity.
    pub fn schema_at(&self, v: usize) -> Option<Schema> {
        let label = self.label[v].as_ref()?;
        let kids = &self.children[v];
        Some(match label {
            NodeLabel::Bottom => Schema::Bottom,
            NodeLabel::Top => Schema::Top,
            NodeLabel::Prop(p) => Schema::Prop(p.clone()),
            NodeLabel::Var(x) => Schema::Var(x.clone()),
            NodeLabel::Not => {
                if kids.len() != 1 {
                    return None;
                }
                Schema::not(self.schema_at(kids[0])?)
            }
            NodeLabel::Or => {
                if kids.len() != 2 {
                    return None;
                }
                Schema::or(self.schema_at(kids[0])?, self.schema_at(kids[1])?)
            }
            NodeLabel::And => {
                if kids.len() != 2 {
                    return None;
                }
                Schema::and(self.schema_at(kids[0])?, self.schema_at(kids[1])?)
            }
            NodeLabel::Dia(k) => {
                if kids.len() != 1 {
                    return None;
                }
                Schema::dia(*k, self.schema_at(kids[0])?)
            }
            NodeLabel::Box_(k) => {
                if kids.len() != 1 {
                    return None;
                }
                Schema::box_(*k, self.schema_at(kids[0])?)
            }
            NodeLabel::GDia(k) => {
                if kids.len() != 1 {
                    return None;
                }
                Schema::gdia(*k, self.schema_at(kids[0])?)
            }
            NodeLabel::GBox(k) => {
                if kids.len() != 1 {
                    return None;
                }
                Schema::gbox(*k, self.schema_at(kids[0])?)
            }
        })
    }
}

impl Default for SyntaxForest {
    fn default() -> Self {
        SyntaxForest::new()
    }
}

/// Forest size: one per root, each prop/var/¬/∨/∧-labeled node costs 1,
/// each operator-labeled node costs its threshold, and ⊤/⊥-labeled or
/// unlabeled nodes are free. On full program forests this equals
/// [`crate::syntax::program_size`].
pub fn forest_size(f: &SyntaxForest) -> u64 {
    let labels: u64 = f
        .label
        .iter()
        .map(|l| l.as_ref().map_or(0, NodeLabel::cost))
        .sum();
    labels + f.roots.len() as u64
}

/// Build the syntax forest of a program: two trees per rule, base tree then
/// iter tree in declaration order, with back edges from every variable
/// occurrence to both roots of its predicate's trees.
pub fn syntax_forest(p: &Program) -> SyntaxForest {
    let mut f = SyntaxForest::new();
    let mut rule_roots: Vec<(usize, usize)> = Vec::new();
    for r in &p.rules {
        let base_root = build_tree(&mut f, &r.base, (r.head.clone(), RuleKind::Base), None);
        let iter_root = build_tree(
            &mut f,
            &r.induction,
            (r.head.clone(), RuleKind::Iter),
            None,
        );
        rule_roots.push((base_root, iter_root));
    }
    // Back edges from every Var node to both roots of its predicate.
    for v in 0..f.len() {
        if let Some(NodeLabel::Var(name)) = &f.label[v] {
            let idx = p.rule_index(name).expect("validated program");
            let (b, i) = rule_roots[idx];
            f.back.insert((v, b));
            f.back.insert((v, i));
        }
    }
    f
}

fn build_tree(
    f: &mut SyntaxForest,
    s: &Schema,
    rho: (String, RuleKind),
    parent: Option<usize>,
) -> usize {
    let id = match parent {
        None => f.add_root(rho.clone()),
        Some(p) => f.add_child(p, rho.clone()),
    };
    let label = match s {
        Schema::Bottom => NodeLabel::Bottom,
        Schema::Top => NodeLabel::Top,
        Schema::Prop(p) => NodeLabel::Prop(p.clone()),
        Schema::Var(x) => NodeLabel::Var(x.clone()),
        Schema::Not(_) => NodeLabel::Not,
        Schema::Or(_, _) => NodeLabel::Or,
        Schema::And(_, _) => NodeLabel::And,
        Schema::Dia(k, _) => NodeLabel::Dia(*k),
        Schema::Box_(k, _) => NodeLabel::Box_(*k),
        Schema::GDia(k, _) => NodeLabel::GDia(*k),
        Schema::GBox(k, _) => NodeLabel::GBox(*k),
    };
    f.label[id] = Some(label);
    for c in s.children() {
        build_tree(f, c, rho.clone(), Some(id));
    }
    id
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{program_size, Program, Rule, Semantics};
    use std::collections::BTreeSet;

    fn counting_example() -> Program {
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
        .unwrap()
    }

    #[test]
    fn counting_example_forest() {
        let p = counting_example();
        let f = syntax_forest(&p);
        assert_eq!(f.roots.len(), 4);
        assert_eq!(f.len(), 12);
        let var_nodes: Vec<usize> = (0..f.len())
            .filter(|&v| matches!(f.label[v], Some(NodeLabel::Var(_))))
            .collect();
        assert_eq!(var_nodes.len(), 3);
        for v in var_nodes {
            let out = f.back.range((v, 0)..=(v, usize::MAX)).count();
            assert_eq!(out, 2);
        }
        assert_eq!(f.back.len(), 6);
        assert_eq!(forest_size(&f), 19);
        assert_eq!(forest_size(&f), program_size(&p));
        assert!(f.validate());
    }

    #[test]
    fn subformula_extraction() {
        let p = counting_example();
        let f = syntax_forest(&p);
        let dia = (0..f.len())
            .find(|&v| matches!(f.label[v], Some(NodeLabel::Dia(2))))
            .unwrap();
        assert_eq!(f.schema_at(dia), Some(Schema::dia(2, Schema::var("X"))));
    }

    #[test]
    fn trivial_constant_forest() {
        let p = Program::new(
            vec![Rule {
                head: "X".into(),
                base: Schema::Top,
                induction: Schema::Top,
            }],
            ["X".to_string()].into(),
            BTreeSet::new(),
            Semantics::Synchronous,
        )
        .unwrap();
        let f = syntax_forest(&p);
        assert_eq!(f.roots.len(), 2);
        assert_eq!(f.len(), 2);
        assert!(f.back.is_empty());
        assert_eq!(forest_size(&f), program_size(&p));
    }
}
