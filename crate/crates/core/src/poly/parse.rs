//! Text form of polynomials: `x^2*y - y^3 + 4*t*y`, `3*(x^2+t) + y^3`,
//! `1/2*x`. Supports `+ - * /` (division by constants only), `^` with a
//! non-negative integer exponent, and parentheses.

use num_bigint::BigInt;
use num_traits::Zero;

use super::multipoly::MultiPoly;
use super::rational::Rational;
use super::PolyError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>, PolyError> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
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
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Num(text.parse().expect("digits")));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(PolyError::Parse(format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<MultiPoly, PolyError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, PolyError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let d = self.unary()?;
                let c = d
                    .as_constant()
                    .ok_or_else(|| PolyError::Parse("division by a non-constant".into()))?;
                if c.is_zero() {
                    return Err(PolyError::Parse("division by zero".into()));
                }
                acc = acc.scale(&(Rational::from_integer(1.into()) / c));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<MultiPoly, PolyError> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<MultiPoly, PolyError> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| PolyError::Parse("exponent too large".into()))?;
                    Ok(base.pow(e))
                }
                _ => Err(PolyError::Parse("expected integer exponent after '^'".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MultiPoly, PolyError> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(MultiPoly::constant(self.vars, Rational::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                MultiPoly::var(self.vars, &name)
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(PolyError::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            Some(t) => Err(PolyError::Parse(format!("unexpected token {t:?}"))),
            None => Err(PolyError::Parse("unexpected end of input".into())),
        }
    }
}

/// Sort key placing `x`, `y`, then `x1, x2, ...`, other names, and `t` last.
fn var_rank(v: &str) -> (u8, u64, String) {
    match v {
        "x" => (0, 0, String::new()),
        "y" => (1, 0, String::new()),
        "t" => (4, 0, String::new()),
        _ => match v.strip_prefix('x').and_then(|r| r.parse::<u64>().ok()) {
            Some(i) => (2, i, String::new()),
            None => (3, 0, v.to_string()),
        },
    }
}

impl MultiPoly {
    /// Parses `s` as a polynomial over the given variable list.
    pub fn parse<S: AsRef<str>>(s: &str, vars: &[S]) -> Result<MultiPoly, PolyError> {
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        let toks = tokenize(s)?;
        if toks.is_empty() {
            return Err(PolyError::Parse("empty input".into()));
        }
        let mut p = Parser {
            toks,
            pos: 0,
            vars: &vars,
        };
        let out = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(PolyError::Parse(format!(
                "trailing input at token {}",
                p.pos
            )));
        }
        Ok(out)
    }

    /// Parses `s`, taking the variables that occur in it in the order
    /// `x, y, x1, x2, ..., <others alphabetically>, t`.
    pub fn parse_auto(s: &str) -> Result<MultiPoly, PolyError> {
        let mut vars: Vec<String> = tokenize(s)?
            .into_iter()
            .filter_map(|t| match t {
                Tok::Ident(v) => Some(v),
                _ => None,
            })
            .collect();
        vars.sort_by_key(|v| var_rank(v));
        vars.dedup();
        MultiPoly::parse(s, &vars)
    }
}
