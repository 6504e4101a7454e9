//! Recursive-descent parser for the observable expression grammar.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor (('*' | '/') factor)*
//! factor   := '-' factor | power
//! power    := atom ('^' exponent)?
//! exponent := ['-'] number | '(' ['-'] number ')'
//! atom     := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! Identifiers must be chart symbols; the function set is closed
//! (`sin`, `cos`, `sqrt`, `exp`, `atan2`).

use crate::error::{CoreError, Result};
use crate::expr::{self, ExprRef};

pub(crate) const FUNCTION_NAMES: &[&str] = &["sin", "cos", "sqrt", "exp", "atan2"];

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
    Comma,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    offset: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' | '-' | '*' | '/' | '^' | '(' | ')' | ',' => {
                let tok = match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    _ => Tok::Comma,
                };
                out.push(Token { tok, offset: i });
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    if i >= bytes.len() || !bytes[i].is_ascii_digit() {
                        return Err(CoreError::Syntax {
                            offset: i.min(bytes.len()),
                            message: "expected digits after decimal point".into(),
                        });
                    }
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
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
                let lit = &text[start..i];
                let v: f64 = lit.parse().map_err(|_| CoreError::Syntax {
                    offset: start,
                    message: format!("invalid number literal `{lit}`"),
                })?;
                out.push(Token {
                    tok: Tok::Num(v),
                    offset: start,
                });
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(text[start..i].to_string()),
                    offset: start,
                });
            }
            _ => {
                return Err(CoreError::Syntax {
                    offset: i,
                    message: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    names: &'a [String],
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> usize {
        self.peek().map(|t| t.offset).unwrap_or(self.end)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        match self.bump() {
            Some(t) if t.tok == want => Ok(()),
            Some(t) => Err(CoreError::Syntax {
                offset: t.offset,
                message: format!("expected {what}"),
            }),
            None => Err(CoreError::Syntax {
                offset: self.end,
                message: format!("expected {what}, found end of input"),
            }),
        }
    }

    fn parse_expr(&mut self) -> Result<ExprRef> {
        let mut lhs = self.parse_term()?;
        loop {
            match self.peek().map(|t| t.tok.clone()) {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.parse_term()?;
                    lhs = expr::add(&lhs, &rhs);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let rhs = self.parse_term()?;
                    lhs = expr::sub(&lhs, &rhs);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_term(&mut self) -> Result<ExprRef> {
        let mut lhs = self.parse_factor()?;
        loop {
            match self.peek().map(|t| t.tok.clone()) {
                Some(Tok::Star) => {
                    self.bump();
                    let rhs = self.parse_factor()?;
                    lhs = expr::mul(&lhs, &rhs);
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let rhs = self.parse_factor()?;
                    lhs = expr::div(&lhs, &rhs);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_factor(&mut self) -> Result<ExprRef> {
        if matches!(self.peek().map(|t| &t.tok), Some(Tok::Minus)) {
            self.bump();
            let inner = self.parse_factor()?;
            return Ok(expr::neg(&inner));
        }
        self.parse_power()
    }

    fn parse_power(&mut self) -> Result<ExprRef> {
        let base = self.parse_atom()?;
        if matches!(self.peek().map(|t| &t.tok), Some(Tok::Caret)) {
            self.bump();
            let r = self.parse_exponent()?;
            return Ok(expr::pow(&base, r));
        }
        Ok(base)
    }

    fn parse_exponent(&mut self) -> Result<f64> {
        let offset = self.here();
        let mut sign = 1.0;
        let mut parens = false;
        if matches!(self.peek().map(|t| &t.tok), Some(Tok::LParen)) {
            self.bump();
            parens = true;
        }
        if matches!(self.peek().map(|t| &t.tok), Some(Tok::Minus)) {
            self.bump();
            sign = -1.0;
        }
        let v = match self.peek().map(|t| t.tok.clone()) {
            Some(Tok::Num(v)) => {
                self.bump();
                v
            }
            _ => return Err(CoreError::NonRationalExponent { offset }),
        };
        if parens {
            match self.peek().map(|t| t.tok.clone()) {
                Some(Tok::RParen) => {
                    self.bump();
                }
                _ => return Err(CoreError::NonRationalExponent { offset }),
            }
        }
        Ok(sign * v)
    }

    fn parse_atom(&mut self) -> Result<ExprRef> {
        let tok = match self.bump() {
            Some(t) => t,
            None => {
                return Err(CoreError::Syntax {
                    offset: self.end,
                    message: "unexpected end of input".into(),
                })
            }
        };
        match tok.tok {
            Tok::Num(v) => Ok(expr::constant(v)),
            Tok::LParen => {
                let inner = self.parse_expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                let is_call = matches!(self.peek().map(|t| &t.tok), Some(Tok::LParen));
                if is_call {
                    self.bump();
                    let mut args = vec![self.parse_expr()?];
                    while matches!(self.peek().map(|t| &t.tok), Some(Tok::Comma)) {
                        self.bump();
                        args.push(self.parse_expr()?);
                    }
                    self.expect(Tok::RParen, "`)`")?;
                    self.build_call(&name, args, tok.offset)
                } else {
                    match self.names.iter().position(|n| n == &name) {
                        Some(i) => Ok(expr::var(i)),
                        None => Err(CoreError::UnknownIdentifier {
                            name,
                            offset: tok.offset,
                        }),
                    }
                }
            }
            _ => Err(CoreError::Syntax {
                offset: tok.offset,
                message: "expected a number, symbol, function call or `(`".into(),
            }),
        }
    }

    fn build_call(&self, name: &str, args: Vec<ExprRef>, offset: usize) -> Result<ExprRef> {
        let arity_error = |want: usize| CoreError::Syntax {
            offset,
            message: format!("function `{name}` takes {want} argument(s)"),
        };
        match name {
            "sin" | "cos" | "sqrt" | "exp" => {
                if args.len() != 1 {
                    return Err(arity_error(1));
                }
                Ok(match name {
                    "sin" => expr::sin(&args[0]),
                    "cos" => expr::cos(&args[0]),
                    "sqrt" => expr::sqrt(&args[0]),
                    _ => expr::exp(&args[0]),
                })
            }
            "atan2" => {
                if args.len() != 2 {
                    return Err(arity_error(2));
                }
                Ok(expr::atan2(&args[0], &args[1]))
            }
            _ => Err(CoreError::UnknownIdentifier {
                name: name.to_string(),
                offset,
            }),
        }
    }
}

/// Parse `text` against the given symbol names. Deterministic; the only
/// rewriting applied is constant folding.
pub fn parse_expression(text: &str, names: &[String]) -> Result<ExprRef> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        names,
        end: text.len(),
    };
    let e = parser.parse_expr()?;
    if let Some(t) = parser.peek() {
        return Err(CoreError::Syntax {
            offset: t.offset,
            message: "unexpected trailing input".into(),
        });
    }
    Ok(e)
}
