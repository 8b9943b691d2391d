//! `.tm` bounded Turing machine files.

use std::collections::BTreeSet;

use super::lex::{Lexer, Tok};
use super::{ParseError, ParseResult, SourceSpan};
use crate::tm::{BoundedTm, Move};

/// `bound k`, `states …`, `tape … _ L R`, `input …`, `start q`,
/// `accept …`, `reject …`, and one `delta q a -> q' a' L|R|S` per pair.
/// The glyphs `_`, `L`, `R` in the tape line name the blank and the end
/// markers.
pub fn parse_tm(text: &str, file: &str) -> ParseResult<BoundedTm> {
    let mut bound: Option<usize> = None;
    let mut states: Vec<String> = Vec::new();
    let mut symbols: Vec<String> = Vec::new();
    let mut input: Vec<String> = Vec::new();
    let mut start: Option<String> = None;
    let mut accepting: Vec<String> = Vec::new();
    let mut rejecting: Vec<String> = Vec::new();
    let mut deltas: Vec<(String, String, String, String, Move, SourceSpan)> = Vec::new();

    // Tape symbols can be `_`, `L`, `R`, idents or numbers; read them raw.
    let word_of = |l: &super::lex::Lexed| -> Option<String> {
        match &l.tok {
            Tok::Ident(s) => Some(s.clone()),
            Tok::Int(n) => Some(n.to_string()),
            Tok::Top => Some("T".to_string()),
            Tok::Bottom => Some("F".to_string()),
            _ => None,
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
        let key = match &toks[0].tok {
            Tok::Ident(w) => w.clone(),
            _ => return Err(ParseError::new(span0, "expected a directive")),
        };
        let words = |from: usize| -> ParseResult<Vec<String>> {
            toks[from..]
                .iter()
                .map(|l| {
                    word_of(l).ok_or_else(|| ParseError::new(l.span.clone(), "expected a name"))
                })
                .collect()
        };
        match key.as_str() {
            "bound" => match toks.get(1).map(|l| &l.tok) {
                Some(Tok::Int(k)) => bound = Some(*k as usize),
                _ => return Err(ParseError::new(end, "expected the tape bound")),
            },
            "states" => states.extend(words(1)?),
            "tape" => symbols.extend(words(1)?),
            "input" => input.extend(words(1)?),
            "start" => {
                start = Some(
                    words(1)?
                        .first()
                        .cloned()
                        .ok_or_else(|| ParseError::new(end, "expected the start state"))?,
                )
            }
            "accept" => accepting.extend(words(1)?),
            "reject" => rejecting.extend(words(1)?),
            "delta" => {
                // q a -> q' a' D, with the arrow token between.
                let mut w: Vec<String> = Vec::new();
                let mut arrow_at = None;
                for (j, l) in toks[1..].iter().enumerate() {
                    if l.tok == Tok::Arrow {
                        arrow_at = Some(j);
                    } else {
                        w.push(word_of(l).ok_or_else(|| {
                            ParseError::new(l.span.clone(), "expected a name")
                        })?);
                    }
                }
                if arrow_at != Some(2) || w.len() != 5 {
                    return Err(ParseError::new(
                        end,
                        "expected `delta q a -> q' a' <L|R|S>`",
                    ));
                }
                let mv = match w[4].as_str() {
                    "L" => Move::Left,
                    "R" => Move::Right,
                    "S" => Move::Stay,
                    other => {
                        return Err(ParseError::new(
                            toks.last().unwrap().span.clone(),
                            format!("unknown direction `{other}`"),
                        ))
                    }
                };
                deltas.push((w[0].clone(), w[1].clone(), w[2].clone(), w[3].clone(), mv, span0));
            }
            other => {
                return Err(ParseError::new(
                    span0,
                    format!("unknown directive `{other}`"),
                ))
            }
        }
    }

    let whole = SourceSpan::new(file, 1, 1, 1);
    let fail = |msg: String| ParseError::new(whole.clone(), msg);
    let bound = bound.ok_or_else(|| fail("missing `bound` line".into()))?;
    if states.is_empty() {
        return Err(fail("missing `states` line".into()));
    }
    let sym_idx = |name: &str, span: &SourceSpan| -> ParseResult<usize> {
        symbols
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| ParseError::new(span.clone(), format!("unknown tape symbol `{name}`")))
    };
    let st_idx = |name: &str, span: &SourceSpan| -> ParseResult<usize> {
        states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| ParseError::new(span.clone(), format!("unknown state `{name}`")))
    };
    let blank = sym_idx("_", &whole).map_err(|_| fail("tape line must include `_`".into()))?;
    let left = sym_idx("L", &whole).map_err(|_| fail("tape line must include `L`".into()))?;
    let right = sym_idx("R", &whole).map_err(|_| fail("tape line must include `R`".into()))?;

    let mut delta = vec![None; states.len() * symbols.len()];
    for (q, a, q2, a2, mv, span) in &deltas {
        let qi = st_idx(q, span)?;
        let ai = sym_idx(a, span)?;
        let slot = &mut delta[qi * symbols.len() + ai];
        if slot.is_some() {
            return Err(ParseError::new(
                span.clone(),
                format!("duplicate transition for ({q}, {a})"),
            ));
        }
        *slot = Some((st_idx(q2, span)?, sym_idx(a2, span)?, *mv));
    }
    let mut table = Vec::with_capacity(delta.len());
    for (i, slot) in delta.into_iter().enumerate() {
        match slot {
            Some(t) => table.push(t),
            None => {
                let (qi, ai) = (i / symbols.len(), i % symbols.len());
                return Err(fail(format!(
                    "missing transition for ({}, {})",
                    states[qi], symbols[ai]
                )));
            }
        }
    }

    let start = start.ok_or_else(|| fail("missing `start` line".into()))?;
    let tm = BoundedTm {
        bound,
        start: st_idx(&start, &whole)?,
        input_alphabet: input
            .iter()
            .map(|s| sym_idx(s, &whole))
            .collect::<ParseResult<_>>()?,
        accepting: accepting
            .iter()
            .map(|s| st_idx(s, &whole))
            .collect::<ParseResult<BTreeSet<usize>>>()?,
        rejecting: rejecting
            .iter()
            .map(|s| st_idx(s, &whole))
            .collect::<ParseResult<BTreeSet<usize>>>()?,
        states,
        symbols,
        blank,
        left_marker: left,
        right_marker: right,
        delta: table,
    };
    tm.validate().map_err(|e| fail(e.to_string()))?;
    Ok(tm)
}

pub fn serialize_tm(tm: &BoundedTm) -> String {
    let mut out = format!("bound {}\n", tm.bound);
    out.push_str(&format!("states {}\n", tm.states.join(" ")));
    out.push_str(&format!("tape {}\n", tm.symbols.join(" ")));
    let input: Vec<&str> = tm
        .input_alphabet
        .iter()
        .map(|&i| tm.symbols[i].as_str())
        .collect();
    out.push_str(&format!("input {}\n", input.join(" ")));
    out.push_str(&format!("start {}\n", tm.states[tm.start]));
    if !tm.accepting.is_empty() {
        let acc: Vec<&str> = tm.accepting.iter().map(|&i| tm.states[i].as_str()).collect();
        out.push_str(&format!("accept {}\n", acc.join(" ")));
    }
    if !tm.rejecting.is_empty() {
        let rej: Vec<&str> = tm.rejecting.iter().map(|&i| tm.states[i].as_str()).collect();
        out.push_str(&format!("reject {}\n", rej.join(" ")));
    }
    for qi in 0..tm.states.len() {
        for ai in 0..tm.symbols.len() {
            let (q2, a2, mv) = tm.delta[qi * tm.symbols.len() + ai];
            out.push_str(&format!(
                "delta {} {} -> {} {} {}\n",
                tm.states[qi],
                tm.symbols[ai],
                tm.states[q2],
                tm.symbols[a2],
                mv.glyph()
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tm::{contains_a_machine, run_tm, TmOutcome};

    #[test]
    fn one_state_acceptor_parses() {
        let src = "bound 0\nstates q\ntape a _ L R\ninput a\nstart q\naccept q\n\
                   delta q a -> q a S\ndelta q _ -> q _ S\ndelta q L -> q L S\ndelta q R -> q R S\n";
        let tm = parse_tm(src, "t.tm").unwrap();
        assert_eq!(
            run_tm(&tm, &crate::model::word("a"), None).unwrap(),
            TmOutcome::Accept(0)
        );
    }

    #[test]
    fn missing_transition_is_an_error() {
        let src = "bound 0\nstates q\ntape a _ L R\ninput a\nstart q\naccept q\n\
                   delta q a -> q a S\ndelta q _ -> q _ S\ndelta q L -> q L S\n";
        let err = parse_tm(src, "t.tm").unwrap_err();
        assert!(err.message.contains("missing transition"));
    }

    #[test]
    fn roundtrip() {
        let tm = contains_a_machine(2);
        let text = serialize_tm(&tm);
        let back = parse_tm(&text, "t.tm").unwrap();
        assert_eq!(back, tm);
    }
}
