//! Signed polynomial-in-`p` expressions such as `-(p+3)/2 - p^2 - 2*p^3`.
//!
//! Evaluation happens over the rationals and the final value must be an
//! integer; intermediate fractions like `(p-1)/2` are fine.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    P,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '_' => {}
            '0'..='9' => {
                let start = i;
                while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..=i].iter().collect();
                out.push(Tok::Num(s.parse().expect("digits")));
            }
            'p' | 'P' => out.push(Tok::P),
            '+' => out.push(Tok::Plus),
            '-' | '\u{2212}' => out.push(Tok::Minus),
            '*' | '\u{b7}' => out.push(Tok::Star),
            '/' => out.push(Tok::Slash),
            '^' => out.push(Tok::Caret),
            '(' => out.push(Tok::LParen),
            ')' => out.push(Tok::RParen),
            other => return Err(Error::Parse(format!("unexpected character {other:?} in {src:?}"))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    p: &'a BigRational,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<BigRational> {
        let mut acc = self.term()?;
        while let Some(t) = self.peek() {
            match t {
                Tok::Plus => {
                    self.bump();
                    acc += self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc -= self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<BigRational> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc *= self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let d = self.unary()?;
                    if d.is_zero() {
                        return Err(Error::Parse("division by zero".into()));
                    }
                    acc /= d;
                }
                // implicit product: `2p`, `3(p+1)`, `(p-1)p^3`
                Some(Tok::P) | Some(Tok::LParen) | Some(Tok::Num(_)) => {
                    acc *= self.power()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<BigRational> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(-self.unary()?)
            }
            Some(Tok::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<BigRational> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let ex = self.unary()?;
            if !ex.is_integer() || ex.is_negative() {
                return Err(Error::Parse("exponents must be nonnegative integers".into()));
            }
            let n = ex
                .to_integer()
                .to_u32()
                .ok_or_else(|| Error::Parse("exponent too large".into()))?;
            return Ok(num_traits::pow(base, n as usize));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<BigRational> {
        match self.bump() {
            Some(Tok::Num(n)) => Ok(BigRational::from_integer(n)),
            Some(Tok::P) => Ok(self.p.clone()),
            Some(Tok::LParen) => {
                let v = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(v),
                    _ => Err(Error::Parse("missing ')'".into())),
                }
            }
            Some(t) => Err(Error::Parse(format!("unexpected token {t:?}"))),
            None => Err(Error::Parse("unexpected end of expression".into())),
        }
    }
}

/// Evaluate `src` at the given `p`. Plain decimal integers pass through.
pub fn eval(src: &str, p: &BigInt) -> Result<BigInt> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let pr = BigRational::from_integer(p.clone());
    let mut parser = Parser { toks, pos: 0, p: &pr };
    let v = parser.expr()?;
    if parser.pos != parser.toks.len() {
        return Err(Error::Parse(format!("trailing input in {src:?}")));
    }
    if !v.denom().is_one() {
        return Err(Error::Parse(format!("{src:?} is not an integer at p = {p}")));
    }
    Ok(v.to_integer())
}

/// True when the expression mentions `p` (the CLI needs `p` itself to be literal).
pub fn mentions_p(src: &str) -> bool {
    src.chars().any(|c| c == 'p' || c == 'P')
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str, p: i64) -> BigInt {
        eval(s, &BigInt::from(p)).unwrap()
    }

    #[test]
    fn integers_and_precedence() {
        assert_eq!(ev("1+2*3", 5), BigInt::from(7));
        assert_eq!(ev("-2^2", 5), BigInt::from(-4));
        assert_eq!(ev("2^3^2", 5), BigInt::from(512));
        assert_eq!(ev("(p-1)/2 + (p-1)*p^3", 5), BigInt::from(2 + 4 * 125));
    }

    #[test]
    fn implicit_products() {
        assert_eq!(ev("2p^3", 7), BigInt::from(686));
        assert_eq!(ev("(p-1)p", 7), BigInt::from(42));
    }

    #[test]
    fn negative_characters() {
        let p = 5i64;
        let want = -(p + 3) / 2 - p * p - 2 * p.pow(3) - p.pow(5);
        assert_eq!(ev("-(p+3)/2 - p^2 - 2*p^3 - p^5", p), BigInt::from(want));
    }

    #[test]
    fn rejects_fractions_and_garbage() {
        assert!(eval("p/2", &BigInt::from(5)).is_err());
        assert!(eval("p +", &BigInt::from(5)).is_err());
        assert!(eval("x", &BigInt::from(5)).is_err());
        assert!(eval("2^-1", &BigInt::from(5)).is_err());
    }
}
