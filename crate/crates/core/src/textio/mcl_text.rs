//! `.mcl` formula files: the schema grammar plus `L:name(...)` labels and
//! `@name` claims.

use super::lex::{Lexer, ModalKind, Tok};
use super::schema_text::{Ast, Parser};
use super::{ParseError, ParseResult, SourceSpan};
use crate::mcl::MclFormula;

pub fn parse_mcl(text: &str, file: &str) -> ParseResult<MclFormula> {
    // Formulas may span multiple lines; lex line by line.
    let mut toks = Vec::new();
    let mut last = SourceSpan::new(file, 1, 1, 1);
    for (i, line) in text.lines().enumerate() {
        let lexed = Lexer::new(file, i + 1, line).tokenize()?;
        last = SourceSpan::new(file, i + 1, line.len() + 1, line.len() + 2);
        toks.extend(lexed);
    }
    let mut p = Parser::new(&toks, last);
    let ast = p.formula()?;
    if !p.at_end() {
        return Err(ParseError::new(p.here(), "unexpected trailing tokens"));
    }
    ast_to_mcl(&ast)
}

fn ast_to_mcl(ast: &Ast) -> ParseResult<MclFormula> {
    Ok(match ast {
        Ast::Top => MclFormula::Top,
        Ast::Bottom => MclFormula::Bottom,
        Ast::Ident(p, _) => MclFormula::Prop(p.clone()),
        Ast::Claim(name, _) => MclFormula::Claim(name.clone()),
        Ast::Label(name, body, _) => MclFormula::Label(name.clone(), Box::new(ast_to_mcl(body)?)),
        Ast::Not(c) => MclFormula::Not(Box::new(ast_to_mcl(c)?)),
        Ast::Or(a, b) => MclFormula::or(ast_to_mcl(a)?, ast_to_mcl(b)?),
        Ast::And(a, b) => MclFormula::and(ast_to_mcl(a)?, ast_to_mcl(b)?),
        Ast::Modal(kind, k, c) => {
            let child = Box::new(ast_to_mcl(c)?);
            match kind {
                ModalKind::Dia => MclFormula::Dia(*k, child),
                ModalKind::Box_ => MclFormula::Box_(*k, child),
                ModalKind::GDia => MclFormula::GDia(*k, child),
                ModalKind::GBox => MclFormula::GBox(*k, child),
            }
        }
    })
}

const PREC_OR: u8 = 1;
const PREC_AND: u8 = 2;
const PREC_PREFIX: u8 = 3;

pub fn serialize_mcl(f: &MclFormula) -> String {
    let mut out = String::new();
    write_mcl(f, PREC_OR, &mut out);
    out
}

fn write_mcl(f: &MclFormula, min_prec: u8, out: &mut String) {
    let prec = match f {
        MclFormula::Or(_, _) => PREC_OR,
        MclFormula::And(_, _) => PREC_AND,
        MclFormula::Not(_)
        | MclFormula::Dia(_, _)
        | MclFormula::Box_(_, _)
        | MclFormula::GDia(_, _)
        | MclFormula::GBox(_, _) => PREC_PREFIX,
        _ => u8::MAX,
    };
    let parens = prec < min_prec;
    if parens {
        out.push('(');
    }
    match f {
        MclFormula::Bottom => out.push('F'),
        MclFormula::Top => out.push('T'),
        MclFormula::Prop(p) => out.push_str(p),
        MclFormula::Claim(name) => {
            out.push('@');
            out.push_str(name);
        }
        MclFormula::Label(name, body) => {
            out.push_str(&format!("L:{name}("));
            write_mcl(body, PREC_OR, out);
            out.push(')');
        }
        MclFormula::Not(c) => {
            out.push('!');
            write_mcl(c, PREC_PREFIX, out);
        }
        MclFormula::Or(a, b) => {
            write_mcl(a, PREC_OR + 1, out);
            out.push_str(" | ");
            write_mcl(b, PREC_OR, out);
        }
        MclFormula::And(a, b) => {
            write_mcl(a, PREC_AND + 1, out);
            out.push_str(" & ");
            write_mcl(b, PREC_AND, out);
        }
        MclFormula::Dia(k, c) => {
            out.push_str(&format!("<{k}> "));
            write_mcl(c, PREC_PREFIX, out);
        }
        MclFormula::Box_(k, c) => {
            out.push_str(&format!("[{k}] "));
            write_mcl(c, PREC_PREFIX, out);
        }
        MclFormula::GDia(k, c) => {
            out.push_str(&format!("<<{k}>> "));
            write_mcl(c, PREC_PREFIX, out);
        }
        MclFormula::GBox(k, c) => {
            out.push_str(&format!("[[{k}]] "));
            write_mcl(c, PREC_PREFIX, out);
        }
    }
    if parens {
        out.push(')');
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::label_translation_example;
    use crate::mcl::translate_async_program;

    #[test]
    fn parse_label_claim() {
        let f = parse_mcl("L:a(p | @a)", "t.mcl").unwrap();
        assert_eq!(
            f,
            MclFormula::label(
                "a",
                MclFormula::or(MclFormula::Prop("p".into()), MclFormula::Claim("a".into()))
            )
        );
    }

    #[test]
    fn roundtrip_translated_program() {
        let phi = translate_async_program(&label_translation_example());
        let text = serialize_mcl(&phi);
        assert_eq!(parse_mcl(&text, "t.mcl").unwrap(), phi);
    }
}
