//! Formula parsing shared by program, MCL and QBF files, with the
//! abbreviation layer desugared into the core grammar.

use super::lex::{Cmp, Lexed, ModalKind, Tok};
use super::{ParseError, ParseResult, SourceSpan};
use crate::syntax::Schema;

/// Parsed formula before identifier resolution. Thresholds are already in
/// native form (≥ for diamonds, < for boxes).
#[derive(Debug, Clone)]
pub enum Ast {
    Top,
    Bottom,
    Ident(String, SourceSpan),
    Not(Box<Ast>),
    Or(Box<Ast>, Box<Ast>),
    And(Box<Ast>, Box<Ast>),
    Modal(ModalKind, u32, Box<Ast>),
    Label(String, Box<Ast>, SourceSpan),
    Claim(String, SourceSpan),
}

pub struct Parser<'a> {
    toks: &'a [Lexed],
    pos: usize,
    end_span: SourceSpan,
}

impl<'a> Parser<'a> {
    pub fn new(toks: &'a [Lexed], end_span: SourceSpan) -> Parser<'a> {
        Parser {
            toks,
            pos: 0,
            end_span,
        }
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn here(&self) -> SourceSpan {
        self.toks
            .get(self.pos)
            .map(|l| l.span.clone())
            .unwrap_or_else(|| self.end_span.clone())
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|l| &l.tok)
    }

    fn bump(&mut self) -> Option<&Lexed> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok, what: &str) -> ParseResult<()> {
        match self.peek() {
            Some(t) if t == want => {
                self.bump();
                Ok(())
            }
            _ => Err(ParseError::new(self.here(), format!("expected {what}"))),
        }
    }

    /// Full formula; `<->` binds loosest, then `->`, `|`, `&`, prefixes.
    pub fn formula(&mut self) -> ParseResult<Ast> {
        let lhs = self.arrow()?;
        if matches!(self.peek(), Some(Tok::Iff)) {
            self.bump();
            let rhs = self.formula()?;
            // a <-> b desugars to (a -> b) & (b -> a).
            let l = implies(lhs.clone(), rhs.clone());
            let r = implies(rhs, lhs);
            return Ok(Ast::And(Box::new(l), Box::new(r)));
        }
        Ok(lhs)
    }

    fn arrow(&mut self) -> ParseResult<Ast> {
        let lhs = self.or()?;
        if matches!(self.peek(), Some(Tok::Arrow)) {
            self.bump();
            let rhs = self.arrow()?;
            return Ok(implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> ParseResult<Ast> {
        let lhs = self.and()?;
        if matches!(self.peek(), Some(Tok::Pipe)) {
            self.bump();
            let rhs = self.or()?;
            return Ok(Ast::Or(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> ParseResult<Ast> {
        let lhs = self.unary()?;
        if matches!(self.peek(), Some(Tok::Amp)) {
            self.bump();
            let rhs = self.and()?;
            return Ok(Ast::And(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> ParseResult<Ast> {
        match self.peek() {
            Some(Tok::Bang) => {
                self.bump();
                Ok(Ast::Not(Box::new(self.unary()?)))
            }
            Some(Tok::Modal(kind, cmp, k)) => {
                let (kind, cmp, k) = (kind.clone(), cmp.clone(), *k);
                self.bump();
                let child = self.unary()?;
                Ok(desugar_modal(kind, cmp, k, child))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> ParseResult<Ast> {
        let span = self.here();
        match self.bump().map(|l| l.tok.clone()) {
            Some(Tok::Top) => Ok(Ast::Top),
            Some(Tok::Bottom) => Ok(Ast::Bottom),
            Some(Tok::Ident(name)) => Ok(Ast::Ident(name, span)),
            Some(Tok::Claim(name)) => Ok(Ast::Claim(name, span)),
            Some(Tok::Label(name)) => {
                self.expect(&Tok::LParen, "`(` after a label")?;
                let body = self.formula()?;
                self.expect(&Tok::RParen, "`)` closing the label")?;
                Ok(Ast::Label(name, Box::new(body), span))
            }
            Some(Tok::LParen) => {
                let inner = self.formula()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(ParseError::new(span, "expected a formula")),
        }
    }
}

fn implies(a: Ast, b: Ast) -> Ast {
    Ast::Or(Box::new(Ast::Not(Box::new(a))), Box::new(b))
}

/// Abbreviated modalities unfold into the native pair: ◇<k := ¬◇≥k,
/// □≥k := ¬□<k, ◇=k := ◇≥k ∧ ◇<k+1, ◇=0 := ◇<1, and dually; the global
/// operators behave the same way.
fn desugar_modal(kind: ModalKind, cmp: Cmp, k: u32, child: Ast) -> Ast {
    let native = |k: u32, c: Ast| Ast::Modal(kind.clone(), k, Box::new(c));
    let is_dia = matches!(kind, ModalKind::Dia | ModalKind::GDia);
    match cmp {
        Cmp::Native => native(k, child),
        Cmp::Dual => Ast::Not(Box::new(native(k, child))),
        Cmp::Exact => {
            if k == 0 {
                // =0 is "none satisfy" for diamonds, "none falsify" for boxes.
                if is_dia {
                    Ast::Not(Box::new(native(1, child)))
                } else {
                    native(1, child)
                }
            } else if is_dia {
                // ◇≥k ∧ ¬◇≥(k+1)
                Ast::And(
                    Box::new(native(k, child.clone())),
                    Box::new(Ast::Not(Box::new(native(k + 1, child)))),
                )
            } else {
                // □≥k ∧ □<(k+1)
                Ast::And(
                    Box::new(Ast::Not(Box::new(native(k, child.clone())))),
                    Box::new(native(k + 1, child)),
                )
            }
        }
    }
}

/// Resolve identifiers into propositions or variables.
pub fn ast_to_schema(ast: &Ast, is_var: &impl Fn(&str) -> bool) -> ParseResult<Schema> {
    Ok(match ast {
        Ast::Top => Schema::Top,
        Ast::Bottom => Schema::Bottom,
        Ast::Ident(name, _) => {
            if is_var(name) {
                Schema::Var(name.clone())
            } else {
                Schema::Prop(name.clone())
            }
        }
        Ast::Not(c) => Schema::not(ast_to_schema(c, is_var)?),
        Ast::Or(a, b) => Schema::or(ast_to_schema(a, is_var)?, ast_to_schema(b, is_var)?),
        Ast::And(a, b) => Schema::and(ast_to_schema(a, is_var)?, ast_to_schema(b, is_var)?),
        Ast::Modal(kind, k, c) => {
            let child = ast_to_schema(c, is_var)?;
            match kind {
                ModalKind::Dia => Schema::dia(*k, child),
                ModalKind::Box_ => Schema::box_(*k, child),
                ModalKind::GDia => Schema::gdia(*k, child),
                ModalKind::GBox => Schema::gbox(*k, child),
            }
        }
        Ast::Label(_, _, span) | Ast::Claim(_, span) => {
            return Err(ParseError::new(
                span.clone(),
                "labels and claims belong to formula files, not programs",
            ))
        }
    })
}

const PREC_OR: u8 = 1;
const PREC_AND: u8 = 2;
const PREC_PREFIX: u8 = 3;

/// Precedence-aware printer; `parse ∘ serialize` is the identity.
pub fn serialize_schema(s: &Schema) -> String {
    let mut out = String::new();
    write_schema(s, PREC_OR, &mut out);
    out
}

fn write_schema(s: &Schema, min_prec: u8, out: &mut String) {
    let prec = match s {
        Schema::Or(_, _) => PREC_OR,
        Schema::And(_, _) => PREC_AND,
        Schema::Not(_)
        | Schema::Dia(_, _)
        | Schema::Box_(_, _)
        | Schema::GDia(_, _)
        | Schema::GBox(_, _) => PREC_PREFIX,
        _ => u8::MAX,
    };
    let parens = prec < min_prec;
    if parens {
        out.push('(');
    }
    match s {
        Schema::Bottom => out.push('F'),
        Schema::Top => out.push('T'),
        Schema::Prop(p) | Schema::Var(p) => out.push_str(p),
        Schema::Not(c) => {
            out.push('!');
            write_schema(c, PREC_PREFIX, out);
        }
        Schema::Or(a, b) => {
            write_schema(a, PREC_OR + 1, out);
            out.push_str(" | ");
            write_schema(b, PREC_OR, out);
        }
        Schema::And(a, b) => {
            write_schema(a, PREC_AND + 1, out);
            out.push_str(" & ");
            write_schema(b, PREC_AND, out);
        }
        Schema::Dia(k, c) => {
            out.push_str(&format!("<{k}> "));
            write_schema(c, PREC_PREFIX, out);
        }
        Schema::Box_(k, c) => {
            out.push_str(&format!("[{k}] "));
            write_schema(c, PREC_PREFIX, out);
        }
        Schema::GDia(k, c) => {
            out.push_str(&format!("<<{k}>> "));
            write_schema(c, PREC_PREFIX, out);
        }
        Schema::GBox(k, c) => {
            out.push_str(&format!("[[{k}]] "));
            write_schema(c, PREC_PREFIX, out);
        }
    }
    if parens {
        out.push(')');
    }
}

/// Parse a standalone schema from tokens, resolving identifiers via `is_var`.
pub fn parse_schema_tokens(
    toks: &[Lexed],
    end_span: SourceSpan,
    is_var: &impl Fn(&str) -> bool,
) -> ParseResult<Schema> {
    let mut p = Parser::new(toks, end_span);
    let ast = p.formula()?;
    if !p.at_end() {
        return Err(ParseError::new(p.here(), "unexpected trailing tokens"));
    }
    ast_to_schema(&ast, is_var)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textio::lex::Lexer;

    fn parse(s: &str) -> ParseResult<Schema> {
        let toks = Lexer::new("t", 1, s).tokenize()?;
        let end = SourceSpan::new("t", 1, s.len() + 1, s.len() + 1);
        parse_schema_tokens(&toks, end, &|name| name.starts_with('X'))
    }

    #[test]
    fn precedence() {
        assert_eq!(
            parse("!p & q | r").unwrap(),
            Schema::or(
                Schema::and(Schema::not(Schema::prop("p")), Schema::prop("q")),
                Schema::prop("r")
            )
        );
        assert_eq!(
            parse("<2> p & q").unwrap(),
            Schema::and(Schema::dia(2, Schema::prop("p")), Schema::prop("q"))
        );
    }

    #[test]
    fn abbreviations_desugar() {
        assert_eq!(
            parse("dia<2 p").unwrap(),
            Schema::not(Schema::dia(2, Schema::prop("p")))
        );
        assert_eq!(
            parse("box>=3 p").unwrap(),
            Schema::not(Schema::box_(3, Schema::prop("p")))
        );
        assert_eq!(
            parse("dia=1 p").unwrap(),
            Schema::and(
                Schema::dia(1, Schema::prop("p")),
                Schema::not(Schema::dia(2, Schema::prop("p")))
            )
        );
        assert_eq!(
            parse("p -> q").unwrap(),
            Schema::or(Schema::not(Schema::prop("p")), Schema::prop("q"))
        );
    }

    #[test]
    fn roundtrip_identity() {
        for src in [
            "p | q & !r",
            "(p | q) & r",
            "<2> (p & X1) | [3] !q",
            "<<1>> p & [[2]] (q | F)",
            "!!p",
            "T & F",
        ] {
            let s = parse(src).unwrap();
            let printed = serialize_schema(&s);
            assert_eq!(parse(&printed).unwrap(), s, "through {printed}");
        }
    }

    #[test]
    fn malformed_diamond_has_span() {
        let err = parse("<p").unwrap_err();
        assert_eq!(err.span.col_start, 1);
    }
}
