//! Schemata and programs of substitution calculus and its graded/global variants.
//!
//! A program is a list of head predicates, each with a base rule (a plain
//! modal formula) and an induction rule (a schema that may mention head
//! predicates), plus accepting and rejecting predicate sets.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::ProgramError;

/// Syntactic fragments, ordered by inclusion: `Sc ⊆ Msc ⊆ Gmsc ⊆ Ggmsc`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Fragment {
    /// No diamonds or boxes at all (propositional; single-node models).
    Sc,
    /// Only threshold-1 local diamonds and boxes.
    Msc,
    /// Arbitrary counting thresholds, no global modalities.
    Gmsc,
    /// Counting thresholds and the counting global modality.
    Ggmsc,
}

impl Fragment {
    pub fn name(self) -> &'static str {
        match self {
            Fragment::Sc => "SC",
            Fragment::Msc => "MSC",
            Fragment::Gmsc => "GMSC",
            Fragment::Ggmsc => "GGMSC",
        }
    }

    pub fn from_name(s: &str) -> Option<Fragment> {
        match s {
            "SC" => Some(Fragment::Sc),
            "MSC" => Some(Fragment::Msc),
            "GMSC" => Some(Fragment::Gmsc),
            "GGMSC" => Some(Fragment::Ggmsc),
            _ => None,
        }
    }
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Evaluation discipline of a program.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Semantics {
    /// Round-by-round global configurations.
    Synchronous,
    /// Game semantics where the verifier picks base or induction body at
    /// each variable; infinite plays have no winner.
    Asynchronous,
}

/// A schema node. Thresholds on the four modal operators are ≥ 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Schema {
    Bottom,
    Top,
    Prop(String),
    Var(String),
    Not(Box<Schema>),
    Or(Box<Schema>, Box<Schema>),
    And(Box<Schema>, Box<Schema>),
    /// ◇≥k: at least k successors satisfy the child.
    Dia(u32, Box<Schema>),
    /// □<k: fewer than k successors falsify the child.
    Box_(u32, Box<Schema>),
    /// ⟨E⟩≥k: at least k nodes anywhere satisfy the child.
    GDia(u32, Box<Schema>),
    /// [E]<k: fewer than k nodes anywhere falsify the child.
    GBox(u32, Box<Schema>),
}

impl Schema {
    pub fn not(s: Schema) -> Schema {
        Schema::Not(Box::new(s))
    }
    pub fn or(a: Schema, b: Schema) -> Schema {
        Schema::Or(Box::new(a), Box::new(b))
    }
    pub fn and(a: Schema, b: Schema) -> Schema {
        Schema::And(Box::new(a), Box::new(b))
    }
    pub fn dia(k: u32, s: Schema) -> Schema {
        Schema::Dia(k, Box::new(s))
    }
    pub fn box_(k: u32, s: Schema) -> Schema {
        Schema::Box_(k, Box::new(s))
    }
    pub fn gdia(k: u32, s: Schema) -> Schema {
        Schema::GDia(k, Box::new(s))
    }
    pub fn gbox(k: u32, s: Schema) -> Schema {
        Schema::GBox(k, Box::new(s))
    }
    pub fn prop(name: &str) -> Schema {
        Schema::Prop(name.to_string())
    }
    pub fn var(name: &str) -> Schema {
        Schema::Var(name.to_string())
    }

    /// Disjunction of a list; empty list is ⊥.
    pub fn any(mut items: Vec<Schema>) -> Schema {
        match items.len() {
            0 => Schema::Bottom,
            1 => items.pop().unwrap(),
            _ => {
                let mut it = items.into_iter().rev();
                let mut acc = it.next().unwrap();
                for s in it {
                    acc = Schema::or(s, acc);
                }
                acc
            }
        }
    }

    /// Conjunction of a list; empty list is ⊤.
    pub fn all(mut items: Vec<Schema>) -> Schema {
        match items.len() {
            0 => Schema::Top,
            1 => items.pop().unwrap(),
            _ => {
                let mut it = items.into_iter().rev();
                let mut acc = it.next().unwrap();
                for s in it {
                    acc = Schema::and(s, acc);
                }
                acc
            }
        }
    }

    pub fn children(&self) -> Vec<&Schema> {
        match self {
            Schema::Bottom | Schema::Top | Schema::Prop(_) | Schema::Var(_) => vec![],
            Schema::Not(c) | Schema::Dia(_, c) | Schema::Box_(_, c) | Schema::GDia(_, c)
            | Schema::GBox(_, c) => vec![c],
            Schema::Or(a, b) | Schema::And(a, b) => vec![a, b],
        }
    }

    pub fn has_var(&self) -> bool {
        match self {
            Schema::Var(_) => true,
            _ => self.children().iter().any(|c| c.has_var()),
        }
    }

    pub fn vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Schema::Var(x) => {
                out.insert(x.clone());
            }
            _ => {
                for c in self.children() {
                    c.vars(out);
                }
            }
        }
    }

    pub fn props(&self, out: &mut BTreeSet<String>) {
        match self {
            Schema::Prop(p) => {
                out.insert(p.clone());
            }
            _ => {
                for c in self.children() {
                    c.props(out);
                }
            }
        }
    }

    /// Number of nested modal operators on the deepest branch.
    pub fn modal_depth(&self) -> u32 {
        match self {
            Schema::Dia(_, c) | Schema::Box_(_, c) | Schema::GDia(_, c) | Schema::GBox(_, c) => {
                1 + c.modal_depth()
            }
            _ => self
                .children()
                .iter()
                .map(|c| c.modal_depth())
                .max()
                .unwrap_or(0),
        }
    }

    /// Size contribution of this schema: prop/var/¬/∨/∧ occurrences count 1,
    /// modal operators count their threshold, ⊤ and ⊥ count 0.
    pub fn size(&self) -> u64 {
        match self {
            Schema::Bottom | Schema::Top => 0,
            Schema::Prop(_) | Schema::Var(_) => 1,
            Schema::Not(c) => 1 + c.size(),
            Schema::Or(a, b) | Schema::And(a, b) => 1 + a.size() + b.size(),
            Schema::Dia(k, c) | Schema::Box_(k, c) | Schema::GDia(k, c) | Schema::GBox(k, c) => {
                u64::from(*k) + c.size()
            }
        }
    }

    /// Least fragment whose grammar generates this schema.
    pub fn min_fragment(&self) -> Fragment {
        let mut frag = Fragment::Sc;
        self.walk(&mut |s| {
            let here = match s {
                Schema::Dia(k, _) | Schema::Box_(k, _) => {
                    if *k <= 1 {
                        Fragment::Msc
                    } else {
                        Fragment::Gmsc
                    }
                }
                Schema::GDia(_, _) | Schema::GBox(_, _) => Fragment::Ggmsc,
                _ => Fragment::Sc,
            };
            if here > frag {
                frag = here;
            }
        });
        frag
    }

    pub fn walk(&self, f: &mut impl FnMut(&Schema)) {
        f(self);
        for c in self.children() {
            c.walk(f);
        }
    }

    /// Substitute every `Var(x)` by `subst(x)`.
    pub fn map_vars(&self, subst: &impl Fn(&str) -> Schema) -> Schema {
        match self {
            Schema::Var(x) => subst(x),
            Schema::Bottom => Schema::Bottom,
            Schema::Top => Schema::Top,
            Schema::Prop(p) => Schema::Prop(p.clone()),
            Schema::Not(c) => Schema::not(c.map_vars(subst)),
            Schema::Or(a, b) => Schema::or(a.map_vars(subst), b.map_vars(subst)),
            Schema::And(a, b) => Schema::and(a.map_vars(subst), b.map_vars(subst)),
            Schema::Dia(k, c) => Schema::dia(*k, c.map_vars(subst)),
            Schema::Box_(k, c) => Schema::box_(*k, c.map_vars(subst)),
            Schema::GDia(k, c) => Schema::gdia(*k, c.map_vars(subst)),
            Schema::GBox(k, c) => Schema::gbox(*k, c.map_vars(subst)),
        }
    }

    /// True when the only negated subschemata are negated propositions or
    /// variables.
    pub fn is_nnf(&self) -> bool {
        match self {
            Schema::Not(c) => matches!(**c, Schema::Prop(_) | Schema::Var(_)),
            _ => self.children().iter().all(|c| c.is_nnf()),
        }
    }

    /// True when the only negated subschemata are negated propositions.
    pub fn is_strong_nnf(&self) -> bool {
        match self {
            Schema::Not(c) => matches!(**c, Schema::Prop(_)),
            _ => self.children().iter().all(|c| c.is_strong_nnf()),
        }
    }
}

/// One head predicate's pair of rules.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: String,
    /// Round-0 body; never contains variables.
    pub base: Schema,
    /// Round-(n+1) body.
    pub induction: Schema,
}

/// A program: ordered head predicates with base and induction rules,
/// accepting and rejecting predicate sets, a fragment tag and a semantics tag.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Program {
    pub rules: Vec<Rule>,
    pub accepting: BTreeSet<String>,
    pub rejecting: BTreeSet<String>,
    pub fragment: Fragment,
    pub semantics: Semantics,
}

impl Program {
    /// Build and validate a program. The fragment is the least one covering
    /// all bodies; use [`Program::with_fragment`] to pin a declared tag.
    pub fn new(
        rules: Vec<Rule>,
        accepting: BTreeSet<String>,
        rejecting: BTreeSet<String>,
        semantics: Semantics,
    ) -> Result<Program, ProgramError> {
        let fragment = rules
            .iter()
            .flat_map(|r| [r.base.min_fragment(), r.induction.min_fragment()])
            .max()
            .unwrap_or(Fragment::Sc);
        Program::with_fragment(rules, accepting, rejecting, fragment, semantics)
    }

    pub fn with_fragment(
        rules: Vec<Rule>,
        accepting: BTreeSet<String>,
        rejecting: BTreeSet<String>,
        fragment: Fragment,
        semantics: Semantics,
    ) -> Result<Program, ProgramError> {
        let p = Program {
            rules,
            accepting,
            rejecting,
            fragment,
            semantics,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ProgramError> {
        let mut declared = BTreeSet::new();
        for r in &self.rules {
            if !declared.insert(r.head.clone()) {
                return Err(ProgramError::DuplicateRule(r.head.clone()));
            }
        }
        for r in &self.rules {
            if r.base.has_var() {
                return Err(ProgramError::VarInBase(r.head.clone()));
            }
            let mut used = BTreeSet::new();
            r.induction.vars(&mut used);
            for v in used {
                if !declared.contains(&v) {
                    return Err(ProgramError::UndeclaredVar {
                        head: r.head.clone(),
                        var: v,
                    });
                }
            }
        }
        for x in &self.accepting {
            if !declared.contains(x) {
                return Err(ProgramError::UnknownPredicate(x.clone()));
            }
        }
        for x in &self.rejecting {
            if !declared.contains(x) {
                return Err(ProgramError::UnknownPredicate(x.clone()));
            }
            if self.accepting.contains(x) {
                return Err(ProgramError::AcceptRejectOverlap(x.clone()));
            }
        }
        for r in &self.rules {
            for (body, which) in [(&r.base, "base"), (&r.induction, "induction")] {
                let need = body.min_fragment();
                if need > self.fragment {
                    return Err(ProgramError::FragmentViolation {
                        head: r.head.clone(),
                        which,
                        declared: self.fragment,
                        needs: need,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn rule(&self, head: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.head == head)
    }

    pub fn rule_index(&self, head: &str) -> Option<usize> {
        self.rules.iter().position(|r| r.head == head)
    }

    /// Head predicate names in declaration order.
    pub fn variables(&self) -> Vec<&str> {
        self.rules.iter().map(|r| r.head.as_str()).collect()
    }

    /// Proposition universe: every proposition occurring in some body.
    pub fn props(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for r in &self.rules {
            r.base.props(&mut out);
            r.induction.props(&mut out);
        }
        out
    }

    pub fn is_async(&self) -> bool {
        self.semantics == Semantics::Asynchronous
    }
}

/// Program size: one per rule head, one per prop/var/¬/∨/∧ occurrence in a
/// body, plus the threshold of every diamond and box. ⊤ and ⊥ are free.
pub fn program_size(p: &Program) -> u64 {
    let heads = 2 * p.rules.len() as u64;
    let bodies: u64 = p
        .rules
        .iter()
        .map(|r| r.base.size() + r.induction.size())
        .sum();
    heads + bodies
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The two-predicate counting program whose size is pinned at 19:
    /// X(0):-¬p, X:-Y∧◇≥2X, Y(0):-r∨q, Y:-□<3¬Y.
    pub(crate) fn counting_example() -> Program {
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
    fn counting_example_has_size_19() {
        assert_eq!(program_size(&counting_example()), 19);
    }

    #[test]
    fn constants_are_free_heads_are_not() {
        let p = Program::new(
            vec![Rule {
                head: "X".into(),
                base: Schema::Top,
                induction: Schema::var("X"),
            }],
            ["X".to_string()].into(),
            BTreeSet::new(),
            Semantics::Synchronous,
        )
        .unwrap();
        assert_eq!(program_size(&p), 3);

        let q = Program::new(
            vec![Rule {
                head: "X".into(),
                base: Schema::prop("p"),
                induction: Schema::Bottom,
            }],
            ["X".to_string()].into(),
            BTreeSet::new(),
            Semantics::Synchronous,
        )
        .unwrap();
        assert_eq!(program_size(&q), 3);
    }

    #[test]
    fn fragment_inference() {
        assert_eq!(counting_example().fragment, Fragment::Gmsc);
        assert_eq!(
            Schema::dia(1, Schema::Top).min_fragment(),
            Fragment::Msc
        );
        assert_eq!(Schema::gdia(1, Schema::Top).min_fragment(), Fragment::Ggmsc);
        assert_eq!(Schema::var("X").min_fragment(), Fragment::Sc);
    }

    #[test]
    fn validation_rejects_bad_programs() {
        let bad = Program::new(
            vec![Rule {
                head: "X".into(),
                base: Schema::var("X"),
                induction: Schema::Top,
            }],
            BTreeSet::new(),
            BTreeSet::new(),
            Semantics::Synchronous,
        );
        assert!(matches!(bad, Err(ProgramError::VarInBase(_))));

        let bad = Program::new(
            vec![Rule {
                head: "X".into(),
                base: Schema::Top,
                induction: Schema::var("Z"),
            }],
            BTreeSet::new(),
            BTreeSet::new(),
            Semantics::Synchronous,
        );
        assert!(matches!(bad, Err(ProgramError::UndeclaredVar { .. })));

        let bad = Program::new(
            vec![Rule {
                head: "X".into(),
                base: Schema::Top,
                induction: Schema::Top,
            }],
            ["X".to_string()].into(),
            ["X".to_string()].into(),
            Semantics::Synchronous,
        );
        assert!(matches!(bad, Err(ProgramError::AcceptRejectOverlap(_))));
    }
}
