//! `.qbf` quantified Boolean formula files.

use super::lex::{Lexer, ModalKind, Tok};
use super::schema_text::{Ast, Parser};
use super::{ParseError, ParseResult, SourceSpan};
use crate::reductions::{BoolExpr, Qbf, Quantifier};

/// `forall x` / `exists x` prefix lines, then `matrix <formula>` over
/// `! & |`, parentheses and the constants `T`/`F`.
pub fn parse_qbf(text: &str, file: &str) -> ParseResult<Qbf> {
    let mut prefix: Vec<(Quantifier, String)> = Vec::new();
    let mut matrix: Option<BoolExpr> = None;

    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let toks = Lexer::new(file, line_no, line).tokenize()?;
        if toks.is_empty() {
            continue;
        }
        let end = SourceSpan::new(file, line_no, line.len() + 1, line.len() + 2);
        let span0 = toks[0].span.clone();
        match &toks[0].tok {
            Tok::Ident(w) if w == "forall" || w == "exists" => {
                let q = if w == "forall" {
                    Quantifier::Forall
                } else {
                    Quantifier::Exists
                };
                match toks.get(1).map(|l| &l.tok) {
                    Some(Tok::Ident(x)) if toks.len() == 2 => {
                        if prefix.iter().any(|(_, y)| y == x) {
                            return Err(ParseError::new(
                                toks[1].span.clone(),
                                format!("variable {x} quantified twice"),
                            ));
                        }
                        prefix.push((q, x.clone()));
                    }
                    _ => return Err(ParseError::new(end, "expected a single variable name")),
                }
            }
            Tok::Ident(w) if w == "matrix" => {
                if matrix.is_some() {
                    return Err(ParseError::new(span0, "duplicate `matrix` line"));
                }
                let mut p = Parser::new(&toks[1..], end);
                let ast = p.formula()?;
                if !p.at_end() {
                    return Err(ParseError::new(p.here(), "unexpected trailing tokens"));
                }
                matrix = Some(ast_to_bool(&ast)?);
            }
            _ => {
                return Err(ParseError::new(
                    span0,
                    "expected `forall`, `exists` or `matrix`",
                ))
            }
        }
    }

    let whole = SourceSpan::new(file, 1, 1, 1);
    let matrix = matrix.ok_or_else(|| ParseError::new(whole.clone(), "missing `matrix` line"))?;
    let q = Qbf { prefix, matrix };
    q.validate().map_err(|e| ParseError::new(whole, e.to_string()))?;
    Ok(q)
}

fn ast_to_bool(ast: &Ast) -> ParseResult<BoolExpr> {
    Ok(match ast {
        Ast::Top => BoolExpr::True,
        Ast::Bottom => BoolExpr::False,
        Ast::Ident(x, _) => BoolExpr::Var(x.clone()),
        Ast::Not(c) => BoolExpr::Not(Box::new(ast_to_bool(c)?)),
        Ast::Or(a, b) => BoolExpr::Or(Box::new(ast_to_bool(a)?), Box::new(ast_to_bool(b)?)),
        Ast::And(a, b) => BoolExpr::And(Box::new(ast_to_bool(a)?), Box::new(ast_to_bool(b)?)),
        Ast::Modal(_, _, _) => {
            return Err(ParseError::new(
                SourceSpan::new("<matrix>", 1, 1, 1),
                "modal operators cannot appear in a QBF matrix",
            ))
        }
        Ast::Label(_, _, span) | Ast::Claim(_, span) => {
            return Err(ParseError::new(
                span.clone(),
                "labels and claims cannot appear in a QBF matrix",
            ))
        }
    })
}

pub fn serialize_qbf(q: &Qbf) -> String {
    let mut out = String::new();
    for (quant, x) in &q.prefix {
        let w = match quant {
            Quantifier::Forall => "forall",
            Quantifier::Exists => "exists",
        };
        out.push_str(&format!("{w} {x}\n"));
    }
    out.push_str("matrix ");
    write_bool(&q.matrix, 1, &mut out);
    out.push('\n');
    out
}

fn write_bool(e: &BoolExpr, min_prec: u8, out: &mut String) {
    let prec = match e {
        BoolExpr::Or(_, _) => 1,
        BoolExpr::And(_, _) => 2,
        BoolExpr::Not(_) => 3,
        _ => u8::MAX,
    };
    let parens = prec < min_prec;
    if parens {
        out.push('(');
    }
    match e {
        BoolExpr::True => out.push('T'),
        BoolExpr::False => out.push('F'),
        BoolExpr::Var(x) => out.push_str(x),
        BoolExpr::Not(c) => {
            out.push('!');
            write_bool(c, 3, out);
        }
        BoolExpr::Or(a, b) => {
            write_bool(a, 2, out);
            out.push_str(" | ");
            write_bool(b, 1, out);
        }
        BoolExpr::And(a, b) => {
            write_bool(a, 3, out);
            out.push_str(" & ");
            write_bool(b, 2, out);
        }
    }
    if parens {
        out.push(')');
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::eval_qbf;

    #[test]
    fn parse_and_evaluate() {
        let q = parse_qbf("forall x\nmatrix x\n", "t.qbf").unwrap();
        assert!(!eval_qbf(&q));
        let q = parse_qbf("exists x\nmatrix x\n", "t.qbf").unwrap();
        assert!(eval_qbf(&q));
        let q = parse_qbf("forall x\nexists y\nmatrix (x & y) | (!x & !y)\n", "t.qbf").unwrap();
        assert!(eval_qbf(&q));
    }

    #[test]
    fn unbound_variable_rejected() {
        let err = parse_qbf("forall x\nmatrix x & y\n", "t.qbf").unwrap_err();
        assert!(err.message.contains("unbound"));
    }

    #[test]
    fn roundtrip() {
        let q = parse_qbf("exists x\nforall y\nmatrix !(x | y) & (T | F)\n", "t.qbf").unwrap();
        let text = serialize_qbf(&q);
        assert_eq!(parse_qbf(&text, "t.qbf").unwrap(), q);
    }
}
