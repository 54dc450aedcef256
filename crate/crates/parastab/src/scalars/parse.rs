//! Text grammar for symbolic scalars.
//!
//! A scalar is a sum of terms `c * x1^e1 * x2^e2 * s^e3 * v^e4`; the
//! coefficient and any zero-exponent factor may be omitted, `q` is accepted
//! as an alias for `v^2`, and exponents may be written `x^-2` or `x^(-2)`.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{rat, Rat, SymScalar, Var};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number(Rat),
    Name(String),
    Plus,
    Minus,
    Star,
    Caret,
}

fn tokenize(input: &str) -> Result<Vec<Tok>> {
    let mut toks = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                toks.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                toks.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                toks.push(Tok::Star);
                i += 1;
            }
            '^' => {
                toks.push(Tok::Caret);
                i += 1;
            }
            '(' | ')' => i += 1,
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let num: BigInt = chars[start..i]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|e| Error::Parse(format!("bad integer: {e}")))?;
                if i < chars.len() && chars[i] == '/' {
                    i += 1;
                    let dstart = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    if dstart == i {
                        return Err(Error::Parse("missing denominator".into()));
                    }
                    let den: BigInt = chars[dstart..i]
                        .iter()
                        .collect::<String>()
                        .parse()
                        .map_err(|e| Error::Parse(format!("bad denominator: {e}")))?;
                    if den.is_zero() {
                        return Err(Error::Parse("zero denominator".into()));
                    }
                    toks.push(Tok::Number(Rat::new(num, den)));
                } else {
                    toks.push(Tok::Number(Rat::from_integer(num)));
                }
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                toks.push(Tok::Name(chars[start..i].iter().collect()));
            }
            other => return Err(Error::Parse(format!("unexpected character `{other}`"))),
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn parse_exponent(&mut self) -> Result<i64> {
        let mut sign = 1i64;
        loop {
            match self.next() {
                Some(Tok::Minus) => sign = -sign,
                Some(Tok::Plus) => {}
                Some(Tok::Number(r)) => {
                    if !r.is_integer() {
                        return Err(Error::Parse("exponent must be an integer".into()));
                    }
                    let v: i64 = r
                        .to_integer()
                        .try_into()
                        .map_err(|_| Error::Parse("exponent out of range".into()))?;
                    return Ok(sign * v);
                }
                other => return Err(Error::Parse(format!("expected exponent, got {other:?}"))),
            }
        }
    }

    fn parse_factor(&mut self) -> Result<SymScalar> {
        match self.next() {
            Some(Tok::Number(r)) => Ok(SymScalar::constant(r)),
            Some(Tok::Name(name)) => {
                let exp = if matches!(self.peek(), Some(Tok::Caret)) {
                    self.next();
                    self.parse_exponent()?
                } else {
                    1
                };
                match name.as_str() {
                    "x1" => Ok(SymScalar::var_pow(Var::X1, exp)),
                    "x2" => Ok(SymScalar::var_pow(Var::X2, exp)),
                    "s" => Ok(SymScalar::var_pow(Var::S, exp)),
                    "v" => Ok(SymScalar::var_pow(Var::V, exp)),
                    "q" => {
                        let e = exp
                            .checked_mul(2)
                            .ok_or_else(|| Error::Parse("exponent out of range".into()))?;
                        Ok(SymScalar::var_pow(Var::V, e))
                    }
                    other => Err(Error::Parse(format!("unknown variable `{other}`"))),
                }
            }
            other => Err(Error::Parse(format!("expected factor, got {other:?}"))),
        }
    }

    fn parse_term(&mut self) -> Result<SymScalar> {
        let mut acc = self.parse_factor()?;
        while matches!(self.peek(), Some(Tok::Star)) {
            self.next();
            acc = acc * self.parse_factor()?;
        }
        Ok(acc)
    }

    fn parse_sum(&mut self) -> Result<SymScalar> {
        let mut acc = SymScalar::zero();
        let mut negate = false;
        loop {
            match self.peek() {
                Some(Tok::Minus) => {
                    self.next();
                    negate = !negate;
                }
                Some(Tok::Plus) => {
                    self.next();
                }
                _ => break,
            }
        }
        let first = self.parse_term()?;
        acc = acc + if negate { -first } else { first };
        loop {
            match self.peek() {
                Some(Tok::Plus) | Some(Tok::Minus) => {
                    let mut neg = false;
                    while let Some(t) = self.peek() {
                        match t {
                            Tok::Plus => {
                                self.next();
                            }
                            Tok::Minus => {
                                self.next();
                                neg = !neg;
                            }
                            _ => break,
                        }
                    }
                    let term = self.parse_term()?;
                    acc = acc + if neg { -term } else { term };
                }
                _ => break,
            }
        }
        Ok(acc)
    }
}

pub fn parse_sym_scalar(input: &str) -> Result<SymScalar> {
    let toks = tokenize(input)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty scalar expression".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let out = p.parse_sum()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse("trailing input after expression".into()));
    }
    Ok(out)
}

/// Parse a plain rational number.
pub fn parse_rat(input: &str) -> Result<Rat> {
    let s = input.trim();
    let (sign, rest) = match s.strip_prefix('-') {
        Some(r) => (-1, r),
        None => (1, s),
    };
    let toks = tokenize(rest)?;
    match toks.as_slice() {
        [Tok::Number(r)] => Ok(r * rat(sign)),
        _ => Err(Error::Parse(format!("`{input}` is not a rational number"))),
    }
}

#[cfg(test)]
mod tests {
    use super::super::{ratio, Bindings};
    use super::*;

    #[test]
    fn roundtrip_display_parse() {
        let cases = [
            SymScalar::zero(),
            SymScalar::one(),
            SymScalar::from_int(-7),
            SymScalar::alpha(),
            SymScalar::monomial(ratio(-3, 4), [2, -1, 0, 5]),
            SymScalar::alpha() + SymScalar::monomial(rat(2), [0, 0, 0, -2]),
        ];
        for x in cases {
            let shown = x.to_string();
            let parsed: SymScalar = shown.parse().unwrap();
            assert_eq!(parsed, x, "roundtrip failed for `{shown}`");
            let shown_q = x.display_q();
            let parsed_q: SymScalar = shown_q.parse().unwrap();
            assert_eq!(parsed_q, x, "q-form roundtrip failed for `{shown_q}`");
        }
    }

    #[test]
    fn q_alias() {
        let a: SymScalar = "q^2 * x1".parse().unwrap();
        assert_eq!(a, SymScalar::monomial(rat(1), [1, 0, 0, 4]));
        let b: SymScalar = "v^4 * x1".parse().unwrap();
        assert_eq!(a, b);
        let c: SymScalar = "q^(-1)".parse().unwrap();
        assert_eq!(c, SymScalar::monomial(rat(1), [0, 0, 0, -2]));
    }

    #[test]
    fn signs_and_rationals() {
        let a: SymScalar = "-3/2 * s + v^-1".parse().unwrap();
        let b = SymScalar::monomial(ratio(-3, 2), [0, 0, 1, 0])
            + SymScalar::monomial(rat(1), [0, 0, 0, -1]);
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_garbage() {
        assert!("x3".parse::<SymScalar>().is_err());
        assert!("".parse::<SymScalar>().is_err());
        assert!("1 +".parse::<SymScalar>().is_err());
        assert!("x1 ^ y".parse::<SymScalar>().is_err());
    }

    #[test]
    fn parsed_scalar_specializes() {
        let x: SymScalar = "x1 * x2 * s".parse().unwrap();
        let b = Bindings::new()
            .bind_rat(Var::X1, rat(2))
            .bind_rat(Var::X2, ratio(1, 2))
            .bind_rat(Var::S, rat(3));
        assert_eq!(
            x.specialize(&b).unwrap(),
            super::super::QuadExtElem::from_int(3)
        );
    }
}
