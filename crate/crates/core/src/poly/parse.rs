//! Polynomial text grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | '+' factor | power
//! power  := atom ('^' integer)?
//! atom   := number ('/' number)? | 't' digit | 'u' | '(' expr ')'
//! ```
//!
//! Whitespace is ignored. Juxtaposition (`2t1`, `t1 t2`) is rejected.

use num_bigint::BigInt;
use thiserror::Error;

use super::monomial::Monomial;
use super::mpoly::MPoly;
use super::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tok {
    Num,
    Var(usize),
    U,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexed {
    tok: Tok,
    pos: usize,
    text: String,
}

fn lex(src: &str) -> Result<Vec<Lexed>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            'u' => Tok::U,
            't' => {
                let d = bytes.get(i + 1).copied().map(char::from);
                match d {
                    Some(d @ '1'..='9') => {
                        if bytes.get(i + 2).is_some_and(u8::is_ascii_digit) {
                            return Err(err(i, "only variables t1..t9 are supported"));
                        }
                        i += 1;
                        Tok::Var(d as usize - '1' as usize)
                    }
                    _ => return Err(err(i, "expected a digit 1..9 after 't'")),
                }
            }
            '0'..='9' => {
                while i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
                    i += 1;
                }
                Tok::Num
            }
            _ => return Err(err(i, &format!("unexpected character '{c}'"))),
        };
        i += 1;
        out.push(Lexed {
            tok,
            pos: start,
            text: src[start..i].to_string(),
        });
    }
    Ok(out)
}

fn err(pos: usize, msg: &str) -> ParseError {
    ParseError {
        pos,
        message: msg.to_string(),
    }
}

struct Parser<'a> {
    toks: &'a [Lexed],
    i: usize,
    nvars: usize,
    /// Index assigned to `u`, if allowed.
    u_index: Option<usize>,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.i).map(|t| t.tok)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |t| t.pos)
    }

    fn expr(&mut self) -> Result<MPoly, ParseError> {
        let mut acc = self.term()?;
        while let Some(t @ (Tok::Plus | Tok::Minus)) = self.peek() {
            self.i += 1;
            let rhs = self.term()?;
            acc = if t == Tok::Plus { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MPoly, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.i += 1;
                    let rhs = self.factor()?;
                    acc = &acc * &rhs;
                }
                Some(Tok::Num | Tok::Var(_) | Tok::U | Tok::LParen) => {
                    return Err(err(self.pos(), "implicit multiplication is not allowed; use '*'"));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<MPoly, ParseError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.i += 1;
                Ok(-&self.factor()?)
            }
            Some(Tok::Plus) => {
                self.i += 1;
                self.factor()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MPoly, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(Tok::Caret) {
            self.i += 1;
            let pos = self.pos();
            match self.toks.get(self.i) {
                Some(Lexed { tok: Tok::Num, text, .. }) => {
                    let e: u32 = text.parse().map_err(|_| err(pos, "exponent too large"))?;
                    self.i += 1;
                    Ok(base.pow(e))
                }
                _ => Err(err(pos, "expected a nonnegative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MPoly, ParseError> {
        let pos = self.pos();
        let Some(lexed) = self.toks.get(self.i) else {
            return Err(err(pos, "unexpected end of input"));
        };
        self.i += 1;
        match lexed.tok {
            Tok::Num => {
                let num: BigInt = lexed.text.parse().expect("lexer yields digits");
                let mut value = Rational::from_integer(num);
                if self.peek() == Some(Tok::Slash) {
                    self.i += 1;
                    let dpos = self.pos();
                    match self.toks.get(self.i) {
                        Some(Lexed { tok: Tok::Num, text, .. }) => {
                            let den: BigInt = text.parse().expect("lexer yields digits");
                            if den == BigInt::from(0) {
                                return Err(err(dpos, "zero denominator"));
                            }
                            self.i += 1;
                            value /= Rational::from_integer(den);
                        }
                        _ => return Err(err(dpos, "expected an integer denominator after '/'")),
                    }
                }
                Ok(MPoly::constant(self.nvars, value))
            }
            Tok::Var(k) => {
                let limit = self.u_index.unwrap_or(self.nvars);
                if k >= limit {
                    return Err(err(pos, &format!("variable t{} exceeds the {limit} declared variables", k + 1)));
                }
                Ok(MPoly::from_terms(
                    self.nvars,
                    [(Monomial::var(self.nvars, k), Rational::from_integer(1.into()))],
                ))
            }
            Tok::U => match self.u_index {
                Some(k) => Ok(MPoly::var(self.nvars, k)),
                None => Err(err(pos, "'u' is only allowed in homogeneous input")),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                if self.peek() != Some(Tok::RParen) {
                    return Err(err(self.pos(), "expected ')'"));
                }
                self.i += 1;
                Ok(inner)
            }
            Tok::Slash => Err(err(pos, "division is only allowed inside rational literals")),
            _ => Err(err(pos, "expected a number, variable or '('")),
        }
    }
}

fn run(src: &str, nvars: usize, u_index: Option<usize>) -> Result<MPoly, ParseError> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(err(0, "empty polynomial"));
    }
    let mut p = Parser {
        toks: &toks,
        i: 0,
        nvars,
        u_index,
        end: src.len(),
    };
    let out = p.expr()?;
    if p.i != toks.len() {
        return Err(err(p.pos(), "unexpected trailing input"));
    }
    Ok(out)
}

impl MPoly {
    /// Parses a polynomial in `t1..t_nvars`.
    pub fn parse(src: &str, nvars: usize) -> Result<MPoly, ParseError> {
        run(src, nvars, None)
    }

    /// Parses a polynomial in `t1..t_n, u` (`n + 1` variables, `u` last).
    pub fn parse_homogeneous(src: &str, n: usize) -> Result<MPoly, ParseError> {
        run(src, n + 1, Some(n))
    }

    /// Parses with the variable count inferred from the largest `t` index
    /// (plus one trailing variable when `u` occurs).
    pub fn parse_auto(src: &str) -> Result<MPoly, ParseError> {
        let toks = lex(src)?;
        let n = toks
            .iter()
            .filter_map(|t| match t.tok {
                Tok::Var(k) => Some(k + 1),
                _ => None,
            })
            .max()
            .unwrap_or(0);
        if toks.iter().any(|t| t.tok == Tok::U) {
            Self::parse_homogeneous(src, n)
        } else {
            Self::parse(src, n)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::{int, rat};

    #[test]
    fn parses_rationals_and_powers() {
        let p = MPoly::parse("1/2*t1^2 - (t2 - 3)*t2 + 2/4", 2).unwrap();
        let x = [int(2), int(1)];
        assert_eq!(p.eval(&x).unwrap(), int(2) + int(2) + rat(1, 2));
    }

    #[test]
    fn rejects_implicit_multiplication() {
        let e = MPoly::parse("2t1", 1).unwrap_err();
        assert_eq!(e.pos, 1);
        assert!(MPoly::parse("t1 t2", 2).is_err());
        assert!(MPoly::parse("(t1)(t2)", 2).is_err());
    }

    #[test]
    fn error_positions() {
        assert_eq!(MPoly::parse("t1 + $", 1).unwrap_err().pos, 5);
        assert_eq!(MPoly::parse("t3", 2).unwrap_err().pos, 0);
        assert!(MPoly::parse("t1 +", 1).is_err());
        assert!(MPoly::parse("u", 1).is_err());
        assert!(MPoly::parse("1/0", 1).is_err());
        assert!(MPoly::parse("", 1).is_err());
        assert!(MPoly::parse("t1^-1", 1).is_err());
    }

    #[test]
    fn auto_arity() {
        assert_eq!(MPoly::parse_auto("t1 - t3").unwrap().nvars(), 3);
        assert_eq!(MPoly::parse_auto("t1*u").unwrap().nvars(), 2);
        assert_eq!(MPoly::parse_auto("7").unwrap().nvars(), 0);
    }

    #[test]
    fn display_parses_back() {
        let p = MPoly::parse("-3/7*t1^2*t2 + t2^3 - 5*t1 + 1/9", 2).unwrap();
        assert_eq!(MPoly::parse(&p.to_string(), 2).unwrap(), p);
    }
}
