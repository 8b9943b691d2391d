//! Tokenizer shared by the schema-bearing formats.

use super::{ParseError, ParseResult, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModalKind {
    Dia,
    Box_,
    GDia,
    GBox,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cmp {
    /// The operator's native comparator (≥ for diamonds, < for boxes).
    Native,
    /// The dual comparator, an abbreviation.
    Dual,
    /// Exactly-k, an abbreviation.
    Exact,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(u32),
    Top,
    Bottom,
    Bang,
    Amp,
    Pipe,
    Arrow,
    Iff,
    LParen,
    RParen,
    /// A modal operator with its comparator and threshold.
    Modal(ModalKind, Cmp, u32),
    /// `@name` claim (formula files only).
    Claim(String),
    /// `L:name` label introduction (formula files only).
    Label(String),
    Assign,
    LBase,
}

#[derive(Debug, Clone)]
pub struct Lexed {
    pub tok: Tok,
    pub span: SourceSpan,
}

pub struct Lexer<'a> {
    file: &'a str,
    line_no: usize,
    chars: Vec<char>,
    pos: usize,
}

impl<'a> Lexer<'a> {
    pub fn new(file: &'a str, line_no: usize, line: &str) -> Lexer<'a> {
        Lexer {
            file,
            line_no,
            chars: line.chars().collect(),
            pos: 0,
        }
    }

    fn span(&self, start: usize) -> SourceSpan {
        SourceSpan::new(self.file, self.line_no, start + 1, self.pos + 1)
    }

    fn err<T>(&self, start: usize, msg: impl Into<String>) -> ParseResult<T> {
        Err(ParseError::new(self.span(start), msg))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, off: usize) -> Option<char> {
        self.chars.get(self.pos + off).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn eat_int(&mut self) -> Option<u32> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return None;
        }
        self.chars[start..self.pos]
            .iter()
            .collect::<String>()
            .parse()
            .ok()
    }

    /// Tokenize the whole line. `#` starts a comment.
    pub fn tokenize(mut self) -> ParseResult<Vec<Lexed>> {
        let mut out = Vec::new();
        while let Some(c) = self.peek() {
            let start = self.pos;
            match c {
                '#' => break,
                c if c.is_whitespace() => {
                    self.bump();
                }
                '(' => {
                    self.bump();
                    // `(0)` right after a head is the base-rule marker.
                    if self.peek() == Some('0') && self.peek_at(1) == Some(')') {
                        self.pos += 2;
                        out.push(Lexed {
                            tok: Tok::LBase,
                            span: self.span(start),
                        });
                    } else {
                        out.push(Lexed {
                            tok: Tok::LParen,
                            span: self.span(start),
                        });
                    }
                }
                ')' => {
                    self.bump();
                    out.push(Lexed {
                        tok: Tok::RParen,
                        span: self.span(start),
                    });
                }
                '!' => {
                    self.bump();
                    out.push(Lexed {
                        tok: Tok::Bang,
                        span: self.span(start),
                    });
                }
                '&' => {
                    self.bump();
                    out.push(Lexed {
                        tok: Tok::Amp,
                        span: self.span(start),
                    });
                }
                '|' => {
                    self.bump();
                    out.push(Lexed {
                        tok: Tok::Pipe,
                        span: self.span(start),
                    });
                }
                '@' => {
                    self.bump();
                    let name = self.eat_ident();
                    if name.is_empty() {
                        return self.err(start, "expected a label name after `@`");
                    }
                    out.push(Lexed {
                        tok: Tok::Claim(name),
                        span: self.span(start),
                    });
                }
                '-' => {
                    self.bump();
                    if self.bump() == Some('>') {
                        out.push(Lexed {
                            tok: Tok::Arrow,
                            span: self.span(start),
                        });
                    } else {
                        return self.err(start, "expected `->`");
                    }
                }
                ':' => {
                    self.bump();
                    if self.peek() == Some('=') {
                        self.bump();
                        out.push(Lexed {
                            tok: Tok::Assign,
                            span: self.span(start),
                        });
                    } else {
                        return self.err(start, "expected `:=`");
                    }
                }
                '<' => out.push(self.lex_angle(start)?),
                '[' => out.push(self.lex_square(start)?),
                c if c.is_ascii_digit() => {
                    let n = self.eat_int().unwrap();
                    out.push(Lexed {
                        tok: Tok::Int(n),
                        span: self.span(start),
                    });
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let name = self.eat_ident();
                    let tok = match name.as_str() {
                        "T" => Tok::Top,
                        "F" => Tok::Bottom,
                        "L" if self.peek() == Some(':') => {
                            self.bump();
                            let label = self.eat_ident();
                            if label.is_empty() {
                                return self.err(start, "expected a label name after `L:`");
                            }
                            Tok::Label(label)
                        }
                        "dia" | "box" | "gdia" | "gbox" if self.at_comparator() => {
                            let kind = match name.as_str() {
                                "dia" => ModalKind::Dia,
                                "box" => ModalKind::Box_,
                                "gdia" => ModalKind::GDia,
                                _ => ModalKind::GBox,
                            };
                            let (cmp, k) = self.lex_comparator(start, &kind)?;
                            Tok::Modal(kind, cmp, k)
                        }
                        _ => Tok::Ident(name),
                    };
                    out.push(Lexed {
                        tok,
                        span: self.span(start),
                    });
                }
                _ => {
                    self.bump();
                    return self.err(start, format!("unexpected character `{c}`"));
                }
            }
        }
        Ok(out)
    }

    fn eat_ident(&mut self) -> String {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
        {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn at_comparator(&self) -> bool {
        match self.peek() {
            Some('<') => self.peek_at(1) != Some('<') && self.peek_at(1) != Some('-'),
            Some('=') => true,
            Some('>') => self.peek_at(1) == Some('='),
            _ => false,
        }
    }

    /// Comparator suffix of the word-form operators: `>=k`, `<k`, `=k`.
    fn lex_comparator(&mut self, start: usize, kind: &ModalKind) -> ParseResult<(Cmp, u32)> {
        let cmp = match self.bump() {
            Some('>') => {
                if self.bump() != Some('=') {
                    return self.err(start, "expected `>=`");
                }
                match kind {
                    ModalKind::Dia | ModalKind::GDia => Cmp::Native,
                    ModalKind::Box_ | ModalKind::GBox => Cmp::Dual,
                }
            }
            Some('<') => match kind {
                ModalKind::Dia | ModalKind::GDia => Cmp::Dual,
                ModalKind::Box_ | ModalKind::GBox => Cmp::Native,
            },
            Some('=') => Cmp::Exact,
            _ => return self.err(start, "expected a comparator"),
        };
        let k = match self.eat_int() {
            Some(k) => k,
            None => return self.err(start, "expected a threshold"),
        };
        if k == 0 && cmp != Cmp::Exact {
            return self.err(start, "thresholds must be at least 1");
        }
        Ok((cmp, k))
    }

    /// `<k>`, `<>`, `<<k>>`, `<<>>`, `<->`.
    fn lex_angle(&mut self, start: usize) -> ParseResult<Lexed> {
        self.bump();
        if self.peek() == Some('-') && self.peek_at(1) == Some('>') {
            self.pos += 2;
            return Ok(Lexed {
                tok: Tok::Iff,
                span: self.span(start),
            });
        }
        let global = self.peek() == Some('<');
        if global {
            self.bump();
        }
        let k = self.eat_int().unwrap_or(1);
        if k == 0 {
            return self.err(start, "thresholds must be at least 1");
        }
        if self.bump() != Some('>') || (global && self.bump() != Some('>')) {
            return self.err(start, "malformed diamond operator");
        }
        let kind = if global { ModalKind::GDia } else { ModalKind::Dia };
        Ok(Lexed {
            tok: Tok::Modal(kind, Cmp::Native, k),
            span: self.span(start),
        })
    }

    /// `[k]`, `[]`, `[[k]]`, `[[]]`.
    fn lex_square(&mut self, start: usize) -> ParseResult<Lexed> {
        self.bump();
        let global = self.peek() == Some('[');
        if global {
            self.bump();
        }
        let k = self.eat_int().unwrap_or(1);
        if k == 0 {
            return self.err(start, "thresholds must be at least 1");
        }
        if self.bump() != Some(']') || (global && self.bump() != Some(']')) {
            return self.err(start, "malformed box operator");
        }
        let kind = if global { ModalKind::GBox } else { ModalKind::Box_ };
        Ok(Lexed {
            tok: Tok::Modal(kind, Cmp::Native, k),
            span: self.span(start),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        Lexer::new("t", 1, s)
            .tokenize()
            .unwrap()
            .into_iter()
            .map(|l| l.tok)
            .collect()
    }

    #[test]
    fn modal_tokens() {
        assert_eq!(toks("<2>"), vec![Tok::Modal(ModalKind::Dia, Cmp::Native, 2)]);
        assert_eq!(toks("<>"), vec![Tok::Modal(ModalKind::Dia, Cmp::Native, 1)]);
        assert_eq!(toks("[3]"), vec![Tok::Modal(ModalKind::Box_, Cmp::Native, 3)]);
        assert_eq!(toks("<<2>>"), vec![Tok::Modal(ModalKind::GDia, Cmp::Native, 2)]);
        assert_eq!(toks("[[]]"), vec![Tok::Modal(ModalKind::GBox, Cmp::Native, 1)]);
        assert_eq!(toks("dia<2"), vec![Tok::Modal(ModalKind::Dia, Cmp::Dual, 2)]);
        assert_eq!(toks("box>=2"), vec![Tok::Modal(ModalKind::Box_, Cmp::Dual, 2)]);
        assert_eq!(toks("gdia=0"), vec![Tok::Modal(ModalKind::GDia, Cmp::Exact, 0)]);
    }

    #[test]
    fn arrows_and_idents() {
        assert_eq!(
            toks("p -> q <-> r"),
            vec![
                Tok::Ident("p".into()),
                Tok::Arrow,
                Tok::Ident("q".into()),
                Tok::Iff,
                Tok::Ident("r".into())
            ]
        );
        // `dia` without a comparator is an ordinary identifier.
        assert_eq!(toks("dia"), vec![Tok::Ident("dia".into())]);
    }

    #[test]
    fn rule_heads() {
        assert_eq!(
            toks("X(0) := !p"),
            vec![
                Tok::Ident("X".into()),
                Tok::LBase,
                Tok::Assign,
                Tok::Bang,
                Tok::Ident("p".into())
            ]
        );
    }

    #[test]
    fn labels_and_claims() {
        assert_eq!(
            toks("L:X_(p | @X_)"),
            vec![
                Tok::Label("X_".into()),
                Tok::LParen,
                Tok::Ident("p".into()),
                Tok::Pipe,
                Tok::Claim("X_".into()),
                Tok::RParen
            ]
        );
    }

    #[test]
    fn errors_carry_spans() {
        let err = Lexer::new("f", 3, "X := <p").tokenize().unwrap_err();
        assert_eq!(err.span.line, 3);
        assert_eq!(err.span.col_start, 6);
    }
}
