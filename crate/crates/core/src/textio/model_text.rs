//! `.km` Kripke model files.

use std::collections::BTreeSet;

use super::lex::{Lexer, Tok};
use super::{ParseError, ParseResult, SourceSpan};
use crate::model::{KripkeModel, PointedModel};

/// `nodes N`, `edge a b` (directed), `prop p n1 n2 …`, `point n`.
pub fn parse_model(text: &str, file: &str) -> ParseResult<PointedModel> {
    let mut node_count: Option<(usize, SourceSpan)> = None;
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut props: BTreeSet<String> = BTreeSet::new();
    let mut prop_nodes: Vec<(String, Vec<(usize, SourceSpan)>)> = Vec::new();
    let mut point: Option<(usize, SourceSpan)> = None;

    let expect_int = |l: Option<&super::lex::Lexed>, end: &SourceSpan| -> ParseResult<(usize, SourceSpan)> {
        match l {
            Some(lx) => match lx.tok {
                Tok::Int(n) => Ok((n as usize, lx.span.clone())),
                _ => Err(ParseError::new(lx.span.clone(), "expected a node index")),
            },
            None => Err(ParseError::new(end.clone(), "expected a node index")),
        }
    };

    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let toks = Lexer::new(file, line_no, line).tokenize()?;
        if toks.is_empty() {
            continue;
        }
        let end = SourceSpan::new(file, line_no, line.len() + 1, line.len() + 2);
        let span0 = toks[0].span.clone();
        match &toks[0].tok {
            Tok::Ident(w) if w == "nodes" => {
                if node_count.is_some() {
                    return Err(ParseError::new(span0, "duplicate `nodes` line"));
                }
                node_count = Some(expect_int(toks.get(1), &end)?);
            }
            Tok::Ident(w) if w == "edge" => {
                let (a, _) = expect_int(toks.get(1), &end)?;
                let (b, _) = expect_int(toks.get(2), &end)?;
                edges.insert((a, b));
            }
            Tok::Ident(w) if w == "prop" => {
                let name = match toks.get(1).map(|l| &l.tok) {
                    Some(Tok::Ident(p)) => p.clone(),
                    _ => return Err(ParseError::new(end, "expected a proposition name")),
                };
                props.insert(name.clone());
                let mut nodes = Vec::new();
                for l in &toks[2..] {
                    match l.tok {
                        Tok::Int(n) => nodes.push((n as usize, l.span.clone())),
                        _ => {
                            return Err(ParseError::new(l.span.clone(), "expected a node index"))
                        }
                    }
                }
                prop_nodes.push((name, nodes));
            }
            Tok::Ident(w) if w == "point" => {
                if point.is_some() {
                    return Err(ParseError::new(span0, "duplicate `point` line"));
                }
                point = Some(expect_int(toks.get(1), &end)?);
            }
            _ => {
                return Err(ParseError::new(
                    span0,
                    "expected `nodes`, `edge`, `prop` or `point`",
                ))
            }
        }
    }

    let whole = SourceSpan::new(file, 1, 1, 1);
    let (n, _) = node_count.ok_or_else(|| ParseError::new(whole.clone(), "missing `nodes` line"))?;
    let mut valuation: Vec<BTreeSet<String>> = vec![BTreeSet::new(); n];
    for (name, nodes) in prop_nodes {
        for (v, span) in nodes {
            if v >= n {
                return Err(ParseError::new(
                    span,
                    format!("node {v} out of range (model has {n} nodes)"),
                ));
            }
            valuation[v].insert(name.clone());
        }
    }
    for &(a, b) in &edges {
        if a >= n || b >= n {
            return Err(ParseError::new(
                whole.clone(),
                format!("edge {a} -> {b} out of range (model has {n} nodes)"),
            ));
        }
    }
    let model = KripkeModel::new(n, edges, valuation, props)
        .map_err(|e| ParseError::new(whole.clone(), e.to_string()))?;
    let (pt, pspan) = point.ok_or_else(|| ParseError::new(whole, "missing `point` line"))?;
    PointedModel::new(model, pt).map_err(|e| ParseError::new(pspan, e.to_string()))
}

pub fn serialize_model(pm: &PointedModel) -> String {
    let m = &pm.model;
    let mut out = format!("nodes {}\n", m.node_count);
    for (a, b) in &m.edges {
        out.push_str(&format!("edge {a} {b}\n"));
    }
    for p in &m.props {
        out.push_str(&format!("prop {p}"));
        for v in 0..m.node_count {
            if m.valuation[v].contains(p) {
                out.push_str(&format!(" {v}"));
            }
        }
        out.push('\n');
    }
    out.push_str(&format!("point {}\n", pm.point));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{extended_word_model, word};

    #[test]
    fn two_node_model() {
        let src = "nodes 2\nedge 0 1\nprop p 0\npoint 0\n";
        let pm = parse_model(src, "t.km").unwrap();
        assert_eq!(pm.model.node_count, 2);
        assert!(pm.model.holds(0, "p"));
        assert_eq!(pm.point, 0);
    }

    #[test]
    fn duplicate_point_is_an_error() {
        let src = "nodes 1\npoint 0\npoint 0\n";
        let err = parse_model(src, "t.km").unwrap_err();
        assert_eq!(err.span.line, 3);
    }

    #[test]
    fn out_of_range_node() {
        let src = "nodes 2\nprop p 5\npoint 0\n";
        let err = parse_model(src, "t.km").unwrap_err();
        assert!(err.message.contains("out of range"));
    }

    #[test]
    fn word_model_roundtrip() {
        let pm = extended_word_model(&word("ppqqpp"), 3).unwrap();
        let text = serialize_model(&pm);
        let back = parse_model(&text, "t.km").unwrap();
        assert_eq!(back, pm);
    }
}
