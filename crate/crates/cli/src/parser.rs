//! Recursive-descent parser for the composition expression language.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! expr := term { "<|" term }
//! term := atom { "(+)" atom }
//! atom := NAME | "(" expr ")"
//! NAME := [A-Za-z_][A-Za-z0-9_]*
//! ```
//!
//! Concatenation binds tighter than the series product; both operators are
//! left-associative. `A <| B` evaluates with A downstream (applied second),
//! matching the operator order of the series product.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Name { name: String, offset: usize },
    Series(Box<Expr>, Box<Expr>),
    Concat(Box<Expr>, Box<Expr>),
}

#[derive(Debug)]
pub struct SyntaxError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at byte {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for SyntaxError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Name(String),
    Series,
    Concat,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>, SyntaxError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b.is_ascii_whitespace() {
            i += 1;
        } else if b == b'(' {
            if bytes[i..].starts_with(b"(+)") {
                tokens.push((Token::Concat, i));
                i += 3;
            } else {
                tokens.push((Token::LParen, i));
                i += 1;
            }
        } else if b == b')' {
            tokens.push((Token::RParen, i));
            i += 1;
        } else if b == b'<' {
            if bytes[i..].starts_with(b"<|") {
                tokens.push((Token::Series, i));
                i += 2;
            } else {
                return Err(SyntaxError {
                    offset: i,
                    message: "expected '<|'".into(),
                });
            }
        } else if b.is_ascii_alphabetic() || b == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            tokens.push((Token::Name(text[start..i].to_string()), start));
        } else {
            return Err(SyntaxError {
                offset: i,
                message: format!("unexpected character {:?}", b as char),
            });
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: &'a [(Token, usize)],
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&(Token, usize)> {
        self.tokens.get(self.pos)
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.end, |(_, off)| *off)
    }

    fn expr(&mut self) -> Result<Expr, SyntaxError> {
        let mut node = self.term()?;
        while matches!(self.peek(), Some((Token::Series, _))) {
            self.pos += 1;
            let rhs = self.term()?;
            node = Expr::Series(Box::new(node), Box::new(rhs));
        }
        Ok(node)
    }

    fn term(&mut self) -> Result<Expr, SyntaxError> {
        let mut node = self.atom()?;
        while matches!(self.peek(), Some((Token::Concat, _))) {
            self.pos += 1;
            let rhs = self.atom()?;
            node = Expr::Concat(Box::new(node), Box::new(rhs));
        }
        Ok(node)
    }

    fn atom(&mut self) -> Result<Expr, SyntaxError> {
        match self.peek().cloned() {
            Some((Token::Name(name), offset)) => {
                self.pos += 1;
                Ok(Expr::Name { name, offset })
            }
            Some((Token::LParen, _)) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some((Token::RParen, _)) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(SyntaxError {
                        offset: self.here(),
                        message: "expected ')'".into(),
                    }),
                }
            }
            Some((tok, offset)) => Err(SyntaxError {
                offset,
                message: format!("expected a system name or '(', found {tok:?}"),
            }),
            None => Err(SyntaxError {
                offset: self.end,
                message: "unexpected end of expression".into(),
            }),
        }
    }
}

pub fn parse_expression(text: &str) -> Result<Expr, SyntaxError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
        end: text.len(),
    };
    let expr = parser.expr()?;
    if let Some((tok, offset)) = parser.peek() {
        return Err(SyntaxError {
            offset: *offset,
            message: format!("unexpected trailing {tok:?}"),
        });
    }
    Ok(expr)
}

/// Canonical rendering with the minimal parentheses implied by the
/// grammar; `parse_expression(pretty_print(e))` reproduces `e` (up to the
/// recorded byte offsets).
pub fn pretty_print(expr: &Expr) -> String {
    fn atom_level(e: &Expr, out: &mut String) {
        match e {
            Expr::Name { name, .. } => out.push_str(name),
            other => {
                out.push('(');
                series_level(other, out);
                out.push(')');
            }
        }
    }
    fn concat_level(e: &Expr, out: &mut String) {
        match e {
            Expr::Concat(a, b) => {
                concat_level(a, out);
                out.push_str(" (+) ");
                atom_level(b, out);
            }
            other => atom_level(other, out),
        }
    }
    fn series_level(e: &Expr, out: &mut String) {
        match e {
            Expr::Series(a, b) => {
                series_level(a, out);
                out.push_str(" <| ");
                concat_level(b, out);
            }
            other => concat_level(other, out),
        }
    }
    let mut out = String::new();
    series_level(expr, &mut out);
    out
}

/// Referenced system names in leaf order.
pub fn leaf_names(expr: &Expr) -> Vec<(&str, usize)> {
    let mut out = Vec::new();
    fn walk<'a>(e: &'a Expr, out: &mut Vec<(&'a str, usize)>) {
        match e {
            Expr::Name { name, offset } => out.push((name, *offset)),
            Expr::Series(a, b) | Expr::Concat(a, b) => {
                walk(a, out);
                walk(b, out);
            }
        }
    }
    walk(expr, &mut out);
    out
}
