//! Recursive-descent parser for the curve expression language.
//!
//! Grammar:
//!
//! ```text
//! expr    := term { ("+"|"-") term }
//! term    := factor { ("*"|"/") factor }
//! factor  := unary [ "^" factor ]
//! unary   := "-" unary | primary
//! primary := NUMBER | IDENT | IDENT "(" expr ")" | "(" expr ")"
//! ```
//!
//! `^` is right-associative. Numbers are decimal with optional fraction and
//! exponent. Whitespace is insignificant. All identifiers are resolved while
//! parsing: the declared parameter, a bound constant (`pi` and `e` are built
//! in, user bindings win), or one of the function names.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

use super::ast::{BinOp, Expression, Func, Node};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(source: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = source.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'+' => {
                out.push((Tok::Plus, i));
                i += 1;
            }
            b'-' => {
                out.push((Tok::Minus, i));
                i += 1;
            }
            b'*' => {
                out.push((Tok::Star, i));
                i += 1;
            }
            b'/' => {
                out.push((Tok::Slash, i));
                i += 1;
            }
            b'^' => {
                out.push((Tok::Caret, i));
                i += 1;
            }
            b'(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    if i + 1 >= bytes.len() || !bytes[i + 1].is_ascii_digit() {
                        return Err(Error::Syntax {
                            offset: i,
                            message: "expected digits after decimal point".into(),
                        });
                    }
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    // Only consume as an exponent when digits follow; otherwise the
                    // `e` starts an identifier (as in `2e` meaning 2*e? no: `2e` is
                    // a malformed number, but `2 e` is two tokens and still an error
                    // at parse level).
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &source[start..i];
                let value: f64 = text.parse().map_err(|_| Error::Syntax {
                    offset: start,
                    message: format!("malformed number `{text}`"),
                })?;
                out.push((Tok::Num(value), start));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((Tok::Ident(source[start..i].to_owned()), start));
            }
            _ => {
                return Err(Error::Syntax {
                    offset: i,
                    message: format!("unexpected character `{}`", &source[i..][..1]),
                });
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    parameter: &'a str,
    constants: &'a BTreeMap<String, f64>,
    shadowed: Vec<String>,
}

const BUILTINS: [(&str, f64); 2] = [("pi", std::f64::consts::PI), ("e", std::f64::consts::E)];

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map(|(_, o)| *o).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Syntax {
                offset: self.offset(),
                message: format!("expected {what}"),
            })
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut node = self.term()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Plus) => BinOp::Add,
                Some(Tok::Minus) => BinOp::Sub,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.term()?;
            node = Node::Binary { op, lhs: Box::new(node), rhs: Box::new(rhs) };
        }
        Ok(node)
    }

    fn term(&mut self) -> Result<Node> {
        let mut node = self.factor()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Star) => BinOp::Mul,
                Some(Tok::Slash) => BinOp::Div,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.factor()?;
            node = Node::Binary { op, lhs: Box::new(node), rhs: Box::new(rhs) };
        }
        Ok(node)
    }

    fn factor(&mut self) -> Result<Node> {
        let base = self.unary()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let exp = self.factor()?;
            Ok(Node::Binary { op: BinOp::Pow, lhs: Box::new(base), rhs: Box::new(exp) })
        } else {
            Ok(base)
        }
    }

    fn unary(&mut self) -> Result<Node> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            Ok(Node::Neg(Box::new(self.unary()?)))
        } else {
            self.primary()
        }
    }

    fn primary(&mut self) -> Result<Node> {
        let offset = self.offset();
        match self.bump() {
            Some(Tok::Num(v)) => Ok(Node::Number(v)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "closing `)`")?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) => {
                if self.peek() == Some(&Tok::LParen) {
                    let func = Func::from_name(&name).ok_or_else(|| Error::Binding {
                        name: name.clone(),
                        offset,
                    })?;
                    self.pos += 1;
                    let arg = self.expr()?;
                    self.expect(Tok::RParen, "closing `)`")?;
                    Ok(Node::Call { func, arg: Box::new(arg) })
                } else {
                    self.resolve(&name, offset)
                }
            }
            Some(_) => Err(Error::Syntax {
                offset,
                message: "expected a number, identifier or `(`".into(),
            }),
            None => Err(Error::Syntax {
                offset,
                message: "unexpected end of expression".into(),
            }),
        }
    }

    fn resolve(&mut self, name: &str, offset: usize) -> Result<Node> {
        if name == self.parameter {
            return Ok(Node::Parameter);
        }
        if let Some(&value) = self.constants.get(name) {
            if BUILTINS.iter().any(|(b, _)| *b == name) && !self.shadowed.contains(&name.to_owned())
            {
                self.shadowed.push(name.to_owned());
            }
            return Ok(Node::Constant { name: name.to_owned(), value });
        }
        for (builtin, value) in BUILTINS {
            if name == builtin {
                return Ok(Node::Constant { name: name.to_owned(), value });
            }
        }
        Err(Error::Binding { name: name.to_owned(), offset })
    }
}

/// Parse `source` as an expression in `parameter` with the given constant
/// bindings. Unknown identifiers are binding errors; malformed text is a
/// syntax error carrying the byte offset.
pub fn parse(
    source: &str,
    parameter: &str,
    constants: &BTreeMap<String, f64>,
) -> Result<Expression> {
    if source.trim().is_empty() {
        return Err(Error::Syntax { offset: 0, message: "empty expression".into() });
    }
    let tokens = lex(source)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: source.len(),
        parameter,
        constants,
        shadowed: Vec::new(),
    };
    if constants.contains_key(parameter) {
        parser.shadowed.push(parameter.to_owned());
    }
    let root = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(Error::Syntax {
            offset: parser.offset(),
            message: "trailing input after expression".into(),
        });
    }
    Ok(Expression::from_parts(root, parameter.to_owned(), parser.shadowed))
}
