//! Expression parser for rational functions.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := ('-' | '+') unary | power
//! power := atom ('^' integer)?
//! atom  := integer | identifier | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::Error;
use crate::ratfunc::RationalFunction;

/// Intermediate results above this degree are rejected while parsing.
pub const PARSE_DEGREE_LIMIT: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
    End,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, Error> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((start, Tok::Int(s.parse().expect("digits"))));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(Error::Syntax {
                pos: i,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    out.push((chars.len(), Tok::End));
    Ok(out)
}

struct Parser<'a, S> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    vars: &'a [S],
}

impl<S: AsRef<str>> Parser<'_, S> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, Error> {
        Err(Error::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<Expr, Error> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Op('-') => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, Error> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Op('/') => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, Error> {
        match self.peek() {
            Tok::Op('-') => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Tok::Op('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, Error> {
        let base = self.atom()?;
        if self.peek() != &Tok::Op('^') {
            return Ok(base);
        }
        self.bump();
        match self.peek().clone() {
            Tok::Int(k) => match u32::try_from(&k) {
                Ok(k) => {
                    self.bump();
                    if self.peek() == &Tok::Op('^') {
                        return self.fail("chained exponents need parentheses");
                    }
                    Ok(Expr::Pow(Box::new(base), k))
                }
                Err(_) => self.fail("exponent too large"),
            },
            _ => self.fail("exponent must be a nonnegative integer literal"),
        }
    }

    fn atom(&mut self) -> Result<Expr, Error> {
        let pos = self.pos();
        match self.bump() {
            Tok::Int(n) => Ok(Expr::Int(n)),
            Tok::Ident(name) => self
                .vars
                .iter()
                .position(|v| v.as_ref() == name)
                .map(Expr::Var)
                .ok_or(Error::UnknownVariable(name)),
            Tok::Op('(') => {
                let e = self.expr()?;
                if self.bump() != Tok::Op(')') {
                    return Err(Error::Syntax {
                        pos: self.toks[self.at.saturating_sub(1)].0,
                        msg: "expected `)`".into(),
                    });
                }
                Ok(e)
            }
            Tok::End => Err(Error::Syntax {
                pos,
                msg: "unexpected end of input".into(),
            }),
            Tok::Op(c) => Err(Error::Syntax {
                pos,
                msg: format!("unexpected `{c}`"),
            }),
        }
    }
}

/// Parses `text` into an expression tree over the variables `vars`.
pub fn parse_expr<S: AsRef<str>>(text: &str, vars: &[S]) -> Result<Expr, Error> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        vars,
    };
    let e = p.expr()?;
    if p.peek() != &Tok::End {
        return p.fail("unexpected trailing input");
    }
    Ok(e)
}

impl Expr {
    /// Flattens the tree into a single reduced fraction.
    pub fn to_rational_function(&self, nvars: usize) -> Result<RationalFunction, Error> {
        let r = match self {
            Expr::Int(n) => RationalFunction::constant(nvars, BigRational::from_integer(n.clone())),
            Expr::Var(i) => RationalFunction::var(nvars, *i),
            Expr::Neg(a) => a.to_rational_function(nvars)?.neg(),
            Expr::Add(a, b) => a
                .to_rational_function(nvars)?
                .add(&b.to_rational_function(nvars)?)?,
            Expr::Sub(a, b) => a
                .to_rational_function(nvars)?
                .sub(&b.to_rational_function(nvars)?)?,
            Expr::Mul(a, b) => a
                .to_rational_function(nvars)?
                .mul(&b.to_rational_function(nvars)?)?,
            Expr::Div(a, b) => a
                .to_rational_function(nvars)?
                .div(&b.to_rational_function(nvars)?)?,
            Expr::Pow(a, k) => {
                let base = a.to_rational_function(nvars)?;
                let degree = base
                    .num()
                    .total_degree()
                    .unwrap_or(0)
                    .max(base.den().total_degree().unwrap_or(0));
                let total = degree.saturating_mul(*k as usize);
                if total > PARSE_DEGREE_LIMIT {
                    return Err(Error::DegreeLimit {
                        degree: total,
                        limit: PARSE_DEGREE_LIMIT,
                    });
                }
                base.pow(*k)
            }
        };
        Ok(r)
    }
}

/// Parses `text` into a reduced fraction in the variables `vars`.
pub fn parse<S: AsRef<str>>(text: &str, vars: &[S]) -> Result<RationalFunction, Error> {
    for (i, v) in vars.iter().enumerate() {
        if vars[..i].iter().any(|w| w.as_ref() == v.as_ref()) {
            return Err(Error::Syntax {
                pos: 0,
                msg: format!("variable `{}` declared twice", v.as_ref()),
            });
        }
    }
    parse_expr(text, vars)?.to_rational_function(vars.len())
}

/// `x, y, z` for up to three variables, `x1, ..., xn` beyond.
pub fn default_vars(n: usize) -> Vec<String> {
    if n <= 3 {
        ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}
