use std::fmt;

use num_rational::BigRational;
use thiserror::Error;

use super::{Expr, Func};
use crate::scalar::parse_rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    UnknownIdentifier,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub message: String,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::UnknownIdentifier => "unknown identifier",
        };
        write!(f, "{kind} at {}:{}: {}", self.line, self.column, self.message)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let tok = if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            Tok::Num(chars[start..i].iter().collect())
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if "+-*/^(),;".contains(c) {
            i += 1;
            Tok::Sym(c)
        } else {
            return Err(ParseError {
                kind: ParseErrorKind::Syntax,
                message: format!("unexpected character `{c}`"),
                line,
                column: col,
            });
        };
        col += match &tok {
            Tok::Num(s) | Tok::Ident(s) => s.chars().count(),
            _ => 1,
        };
        out.push(Token {
            tok,
            line: start_line,
            column: start_col,
        });
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    params: Option<&'a [&'a str]>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn error(&self, kind: ParseErrorKind, message: String) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError {
            kind,
            message,
            line: t.line,
            column: t.column,
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        let found = match self.peek() {
            Tok::Num(s) | Tok::Ident(s) => format!("`{s}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::End => "end of input".to_string(),
        };
        self.error(ParseErrorKind::Syntax, format!("expected {wanted}, found {found}"))
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{c}`")))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if self.eat('^') {
            let n = match self.peek().clone() {
                Tok::Num(s) => s.parse::<u32>().map_err(|_| {
                    self.error(
                        ParseErrorKind::Syntax,
                        format!("exponent `{s}` is not a non-negative integer"),
                    )
                })?,
                _ => return Err(self.unexpected("an integer exponent")),
            };
            self.pos += 1;
            return Ok(Expr::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    fn number(&mut self) -> Result<BigRational, ParseError> {
        match self.peek().clone() {
            Tok::Num(s) => {
                let q = parse_rational(&s).map_err(|_| {
                    self.error(ParseErrorKind::Syntax, format!("malformed number `{s}`"))
                })?;
                self.pos += 1;
                Ok(q)
            }
            _ => Err(self.unexpected("a number")),
        }
    }

    fn signed_number(&mut self) -> Result<BigRational, ParseError> {
        if self.eat('-') {
            Ok(-self.number()?)
        } else {
            self.eat('+');
            self.number()
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Num(_) => Ok(Expr::Const(self.number()?)),
            Tok::Sym('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let at = self.pos;
                self.pos += 1;
                if *self.peek() != Tok::Sym('(') {
                    if let Some(params) = self.params {
                        if !params.contains(&name.as_str()) {
                            self.pos = at;
                            return Err(self.error(
                                ParseErrorKind::UnknownIdentifier,
                                format!("`{name}` is not a declared variable"),
                            ));
                        }
                    }
                    return Ok(Expr::Var(name));
                }
                self.pos += 1;
                if name == "step" {
                    let c = self.signed_number()?;
                    self.expect(',')?;
                    let a1 = self.signed_number()?;
                    self.expect(',')?;
                    let a2 = self.signed_number()?;
                    if !self.eat(';') {
                        self.expect(',')?;
                    }
                    let arg = self.expr()?;
                    self.expect(')')?;
                    return Ok(Expr::Step {
                        c,
                        a1,
                        a2,
                        arg: Box::new(arg),
                    });
                }
                let Some(func) = Func::from_name(&name) else {
                    self.pos = at;
                    return Err(self.error(
                        ParseErrorKind::UnknownIdentifier,
                        format!("unknown function `{name}`"),
                    ));
                };
                let arg = self.expr()?;
                if *self.peek() == Tok::Sym(',') {
                    return Err(self.error(
                        ParseErrorKind::Syntax,
                        format!("`{name}` takes exactly one argument"),
                    ));
                }
                self.expect(')')?;
                Ok(Expr::Call(func, Box::new(arg)))
            }
            _ => Err(self.unexpected("an expression")),
        }
    }
}

fn run(src: &str, params: Option<&[&str]>) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        params,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("an operator or end of input"));
    }
    Ok(e)
}

/// Parses an expression; every identifier not followed by `(` is a
/// variable.
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    run(src, None)
}

/// Parses an expression whose variables must all appear in `params`.
pub fn parse_in(src: &str, params: &[&str]) -> Result<Expr, ParseError> {
    run(src, Some(params))
}
