//! `.msc` program files.

use std::collections::{BTreeMap, BTreeSet};

use super::lex::{Lexer, Tok};
use super::schema_text::{ast_to_schema, serialize_schema, Parser};
use super::{ParseError, ParseResult, SourceSpan};
use crate::syntax::{Fragment, Program, Rule, Schema, Semantics};

/// Parse a program file: optional `program <FRAGMENT> [async]` header,
/// optional `accept`/`reject` lines, and one `X(0) := …` / `X := …` rule per
/// line. Rule heads are the schema variables; all other identifiers are
/// propositions.
pub fn parse_program(text: &str, file: &str) -> ParseResult<Program> {
    let mut header: Option<(Fragment, Semantics)> = None;
    let mut accepting: BTreeSet<String> = BTreeSet::new();
    let mut rejecting: BTreeSet<String> = BTreeSet::new();
    let mut accept_span: Option<SourceSpan> = None;
    let mut reject_span: Option<SourceSpan> = None;
    // (head, base?, body tokens, line span)
    struct RawRule {
        head: String,
        is_base: bool,
        toks: Vec<super::lex::Lexed>,
        span: SourceSpan,
        end: SourceSpan,
    }
    let mut raw: Vec<RawRule> = Vec::new();

    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let toks = Lexer::new(file, line_no, line).tokenize()?;
        if toks.is_empty() {
            continue;
        }
        let end = SourceSpan::new(file, line_no, line.len() + 1, line.len() + 2);
        let first_span = toks[0].span.clone();
        match &toks[0].tok {
            Tok::Ident(w) if w == "program" => {
                if header.is_some() || !raw.is_empty() {
                    return Err(ParseError::new(first_span, "misplaced `program` header"));
                }
                let frag = match toks.get(1).map(|l| &l.tok) {
                    Some(Tok::Ident(f)) => Fragment::from_name(f).ok_or_else(|| {
                        ParseError::new(toks[1].span.clone(), format!("unknown fragment `{f}`"))
                    })?,
                    _ => {
                        return Err(ParseError::new(
                            end,
                            "expected a fragment name (SC, MSC, GMSC, GGMSC)",
                        ))
                    }
                };
                let sem = match toks.get(2).map(|l| &l.tok) {
                    None => Semantics::Synchronous,
                    Some(Tok::Ident(a)) if a == "async" => Semantics::Asynchronous,
                    Some(_) => {
                        return Err(ParseError::new(
                            toks[2].span.clone(),
                            "expected `async` or end of line",
                        ))
                    }
                };
                if toks.len() > 3 {
                    return Err(ParseError::new(toks[3].span.clone(), "trailing tokens"));
                }
                header = Some((frag, sem));
            }
            Tok::Ident(w) if w == "accept" || w == "reject" => {
                let into = if w == "accept" {
                    if accept_span.is_some() {
                        return Err(ParseError::new(first_span, "duplicate `accept` line"));
                    }
                    accept_span = Some(toks[0].span.clone());
                    &mut accepting
                } else {
                    if reject_span.is_some() {
                        return Err(ParseError::new(first_span, "duplicate `reject` line"));
                    }
                    reject_span = Some(toks[0].span.clone());
                    &mut rejecting
                };
                for l in &toks[1..] {
                    match &l.tok {
                        Tok::Ident(name) => {
                            into.insert(name.clone());
                        }
                        _ => {
                            return Err(ParseError::new(
                                l.span.clone(),
                                "expected a predicate name",
                            ))
                        }
                    }
                }
            }
            Tok::Ident(head) => {
                let head = head.clone();
                let mut pos = 1;
                let is_base = matches!(toks.get(1).map(|l| &l.tok), Some(Tok::LBase));
                if is_base {
                    pos += 1;
                }
                match toks.get(pos).map(|l| &l.tok) {
                    Some(Tok::Assign) => pos += 1,
                    _ => {
                        return Err(ParseError::new(
                            toks.get(pos).map(|l| l.span.clone()).unwrap_or(end),
                            "expected `:=`",
                        ))
                    }
                }
                raw.push(RawRule {
                    head,
                    is_base,
                    toks: toks[pos..].to_vec(),
                    span: first_span,
                    end,
                });
            }
            _ => {
                return Err(ParseError::new(
                    first_span,
                    "expected a rule, `program`, `accept` or `reject`",
                ))
            }
        }
    }

    // Heads in order of first appearance.
    let mut heads: Vec<String> = Vec::new();
    for r in &raw {
        if !heads.contains(&r.head) {
            heads.push(r.head.clone());
        }
    }
    let head_set: BTreeSet<&str> = heads.iter().map(|s| s.as_str()).collect();
    let is_var = |name: &str| head_set.contains(name);

    let mut bases: BTreeMap<String, (Schema, SourceSpan)> = BTreeMap::new();
    let mut inductions: BTreeMap<String, (Schema, SourceSpan)> = BTreeMap::new();
    for r in &raw {
        let mut p = Parser::new(&r.toks, r.end.clone());
        let ast = p.formula()?;
        if !p.at_end() {
            return Err(ParseError::new(p.here(), "unexpected trailing tokens"));
        }
        let schema = ast_to_schema(&ast, &is_var)?;
        let slot = if r.is_base { &mut bases } else { &mut inductions };
        if slot
            .insert(r.head.clone(), (schema, r.span.clone()))
            .is_some()
        {
            return Err(ParseError::new(
                r.span.clone(),
                format!(
                    "duplicate {} rule for {}",
                    if r.is_base { "base" } else { "induction" },
                    r.head
                ),
            ));
        }
    }

    let mut rules = Vec::new();
    for head in &heads {
        let (base, bspan) = bases.remove(head).ok_or_else(|| {
            let span = inductions
                .get(head)
                .map(|(_, s)| s.clone())
                .unwrap_or_else(|| SourceSpan::new(file, 1, 1, 1));
            ParseError::new(span, format!("missing base rule for {head}"))
        })?;
        let (induction, _) = inductions.remove(head).ok_or_else(|| {
            ParseError::new(bspan.clone(), format!("missing induction rule for {head}"))
        })?;
        rules.push(Rule {
            head: head.clone(),
            base,
            induction,
        });
    }

    let whole = SourceSpan::new(file, 1, 1, 1);
    let program = match header {
        Some((frag, sem)) => Program::with_fragment(rules, accepting, rejecting, frag, sem),
        None => Program::new(rules, accepting, rejecting, Semantics::Synchronous),
    };
    program.map_err(|e| {
        let span = match &e {
            crate::error::ProgramError::AcceptRejectOverlap(_) => {
                reject_span.clone().unwrap_or(whole.clone())
            }
            _ => whole.clone(),
        };
        ParseError::new(span, e.to_string())
    })
}

/// Inverse of [`parse_program`]; the result re-parses to a structurally
/// equal program.
pub fn serialize_program(p: &Program) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "program {}{}\n",
        p.fragment.name(),
        if p.is_async() { " async" } else { "" }
    ));
    if !p.accepting.is_empty() {
        out.push_str("accept");
        for a in &p.accepting {
            out.push_str(&format!(" {a}"));
        }
        out.push('\n');
    }
    if !p.rejecting.is_empty() {
        out.push_str("reject");
        for a in &p.rejecting {
            out.push_str(&format!(" {a}"));
        }
        out.push('\n');
    }
    for r in &p.rules {
        out.push_str(&format!("{}(0) := {}\n", r.head, serialize_schema(&r.base)));
        out.push_str(&format!("{} := {}\n", r.head, serialize_schema(&r.induction)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::program_size;

    #[test]
    fn figure_program_parses_to_size_19() {
        let src = "program GGMSC\naccept X\nX(0) := !p\nX := Y & <2> X\nY(0) := r | q\nY := [3] !Y\n";
        let p = parse_program(src, "fig.msc").unwrap();
        assert_eq!(program_size(&p), 19);
        assert_eq!(p.fragment, Fragment::Ggmsc);
        assert_eq!(p.accepting, ["X".to_string()].into());
    }

    #[test]
    fn sc_program() {
        let src = "program SC\naccept X\nX(0) := p\nX := X\n";
        let p = parse_program(src, "t.msc").unwrap();
        assert_eq!(p.fragment, Fragment::Sc);
        assert_eq!(program_size(&p), 4);
    }

    #[test]
    fn syntax_error_span() {
        let err = parse_program("X := <p\n", "t.msc").unwrap_err();
        assert_eq!(err.span.line, 1);
        assert_eq!(err.span.col_start, 6);
    }

    #[test]
    fn duplicate_rule_rejected() {
        let src = "X(0) := p\nX(0) := q\nX := X\n";
        let err = parse_program(src, "t.msc").unwrap_err();
        assert!(err.message.contains("duplicate base rule"));
        assert_eq!(err.span.line, 2);
    }

    #[test]
    fn declared_fragment_checked() {
        let src = "program SC\naccept X\nX(0) := <> p\nX := X\n";
        let err = parse_program(src, "t.msc").unwrap_err();
        assert!(err.message.contains("fragment"));
    }

    #[test]
    fn accept_reject_disjoint() {
        let src = "accept X\nreject X\nX(0) := p\nX := X\n";
        let err = parse_program(src, "t.msc").unwrap_err();
        assert_eq!(err.span.line, 2);
    }

    #[test]
    fn roundtrip() {
        let src = "program GGMSC async\naccept X\nreject Y\nX(0) := !p & (q | T)\nX := <2> X | [[1]] Y\nY(0) := F\nY := !Y\n";
        let p = parse_program(src, "t.msc").unwrap();
        let printed = serialize_program(&p);
        let q = parse_program(&printed, "t.msc").unwrap();
        assert_eq!(p, q);
    }
}
