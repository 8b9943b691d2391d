//! `.bc` Boolean circuit files.

use std::collections::BTreeMap;

use super::lex::{Lexer, Tok};
use super::{ParseError, ParseResult, SourceSpan};
use crate::reductions::{Circuit, Gate, GateKind};

/// `gate g input xN` | `gate g and g1 g2 …` | `gate g or …` |
/// `gate g not g1`; exactly one `output g`.
pub fn parse_circuit(text: &str, file: &str) -> ParseResult<Circuit> {
    struct RawGate {
        name: String,
        op: String,
        args: Vec<(String, SourceSpan)>,
        span: SourceSpan,
    }
    let mut raw: Vec<RawGate> = Vec::new();
    let mut outputs: Vec<(String, SourceSpan)> = Vec::new();

    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let toks = Lexer::new(file, line_no, line).tokenize()?;
        if toks.is_empty() {
            continue;
        }
        let end = SourceSpan::new(file, line_no, line.len() + 1, line.len() + 2);
        let span0 = toks[0].span.clone();
        let ident = |j: usize| -> ParseResult<(String, SourceSpan)> {
            match toks.get(j) {
                Some(l) => match &l.tok {
                    Tok::Ident(s) => Ok((s.clone(), l.span.clone())),
                    _ => Err(ParseError::new(l.span.clone(), "expected a name")),
                },
                None => Err(ParseError::new(end.clone(), "expected a name")),
            }
        };
        match &toks[0].tok {
            Tok::Ident(w) if w == "gate" => {
                let (name, _) = ident(1)?;
                let (op, _) = ident(2)?;
                let mut args = Vec::new();
                for j in 3..toks.len() {
                    args.push(ident(j)?);
                }
                raw.push(RawGate {
                    name,
                    op,
                    args,
                    span: span0,
                });
            }
            Tok::Ident(w) if w == "output" => {
                outputs.push(ident(1)?);
            }
            _ => return Err(ParseError::new(span0, "expected `gate` or `output`")),
        }
    }

    let whole = SourceSpan::new(file, 1, 1, 1);
    let index: BTreeMap<&str, usize> = raw
        .iter()
        .enumerate()
        .map(|(i, g)| (g.name.as_str(), i))
        .collect();
    if index.len() != raw.len() {
        return Err(ParseError::new(whole.clone(), "duplicate gate name"));
    }
    let resolve = |name: &str, span: &SourceSpan| -> ParseResult<usize> {
        index
            .get(name)
            .copied()
            .ok_or_else(|| ParseError::new(span.clone(), format!("unknown gate `{name}`")))
    };
    let mut gates = Vec::with_capacity(raw.len());
    for g in &raw {
        let kind = match g.op.as_str() {
            "input" => {
                let (arg, aspan) = g
                    .args
                    .first()
                    .ok_or_else(|| ParseError::new(g.span.clone(), "input gate needs a variable"))?;
                if g.args.len() != 1 {
                    return Err(ParseError::new(
                        g.span.clone(),
                        "input gate cannot have incoming wires",
                    ));
                }
                let idx: usize = arg
                    .strip_prefix('x')
                    .and_then(|n| n.parse().ok())
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| {
                        ParseError::new(aspan.clone(), "expected a variable of the form xN")
                    })?;
                GateKind::Input(idx)
            }
            "and" | "or" => {
                let wires = g
                    .args
                    .iter()
                    .map(|(n, s)| resolve(n, s))
                    .collect::<ParseResult<Vec<usize>>>()?;
                if g.op == "and" {
                    GateKind::And(wires)
                } else {
                    GateKind::Or(wires)
                }
            }
            "not" => {
                if g.args.len() != 1 {
                    return Err(ParseError::new(
                        g.span.clone(),
                        "not gate must have exactly one input",
                    ));
                }
                GateKind::Not(resolve(&g.args[0].0, &g.args[0].1)?)
            }
            other => {
                return Err(ParseError::new(
                    g.span.clone(),
                    format!("unknown gate kind `{other}`"),
                ))
            }
        };
        gates.push(Gate {
            name: g.name.clone(),
            kind,
        });
    }
    if outputs.len() != 1 {
        return Err(ParseError::new(
            whole,
            format!("expected exactly one `output` line, found {}", outputs.len()),
        ));
    }
    let output = resolve(&outputs[0].0, &outputs[0].1)?;
    let c = Circuit { gates, output };
    c.validate()
        .map_err(|e| ParseError::new(outputs[0].1.clone(), e.to_string()))?;
    Ok(c)
}

pub fn serialize_circuit(c: &Circuit) -> String {
    let mut out = String::new();
    for g in &c.gates {
        match &g.kind {
            GateKind::Input(i) => out.push_str(&format!("gate {} input x{}\n", g.name, i)),
            GateKind::And(w) | GateKind::Or(w) => {
                let op = if matches!(g.kind, GateKind::And(_)) {
                    "and"
                } else {
                    "or"
                };
                let names: Vec<&str> = w.iter().map(|&i| c.gates[i].name.as_str()).collect();
                out.push_str(&format!("gate {} {} {}\n", g.name, op, names.join(" ")));
            }
            GateKind::Not(w) => {
                out.push_str(&format!("gate {} not {}\n", g.name, c.gates[*w].name))
            }
        }
    }
    out.push_str(&format!("output {}\n", c.gates[c.output].name));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_small_circuit() {
        let src = "gate a input x1\ngate b input x2\ngate c and a b\ngate d not c\noutput d\n";
        let c = parse_circuit(src, "t.bc").unwrap();
        assert_eq!(c.gates.len(), 4);
        assert_eq!(c.input_count(), 2);
    }

    #[test]
    fn wire_into_input_rejected() {
        let src = "gate a input x1 b\ngate b input x2\noutput a\n";
        let err = parse_circuit(src, "t.bc").unwrap_err();
        assert!(err.message.contains("input gate"));
    }

    #[test]
    fn cycle_rejected() {
        let src = "gate a and b\ngate b and a\ngate o or a\noutput o\n";
        let err = parse_circuit(src, "t.bc").unwrap_err();
        assert!(err.message.contains("cyclic"));
    }

    #[test]
    fn roundtrip_five_gates() {
        let src = "gate a input x1\ngate b input x2\ngate c or a b\ngate d not a\ngate e and c d\noutput e\n";
        let c = parse_circuit(src, "t.bc").unwrap();
        let text = serialize_circuit(&c);
        assert_eq!(parse_circuit(&text, "t.bc").unwrap(), c);
    }
}
