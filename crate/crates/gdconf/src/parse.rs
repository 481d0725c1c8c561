//! Parser for the element grammar used by the CLI: rational constants
//! ("3", "-1/2"), the variables T and λ (also spelled "lambda"), basis
//! names, "*", "+"/"-", and parentheses. An expression denotes an
//! H-polynomial combination of basis elements, e.g. "(T+1)*v".

use crate::conformal::ConfElem;
use crate::finite::GDAlgebra;
use crate::mpoly::{lam_var, t_var, MPoly};
use crate::rational::parse_rat;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected token {0:?}")]
    Unexpected(String),
    #[error("unknown basis name {0:?}")]
    UnknownName(String),
    #[error("cannot multiply two basis elements")]
    ElemTimesElem,
    #[error("cannot add a scalar to a basis element")]
    MixedSum,
    #[error("expression is a scalar, not an algebra element")]
    ScalarResult,
}

#[derive(Debug, Clone)]
enum Tok {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<Tok>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            '0'..='9' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_digit() || chars[j] == '/') {
                    j += 1;
                }
                out.push(Tok::Num(chars[i..j].iter().collect()));
                i = j;
            }
            c if c.is_alphanumeric() || c == '_' || c == 'λ' => {
                let mut j = i;
                while j < chars.len()
                    && (chars[j].is_alphanumeric() || chars[j] == '_' || chars[j] == 'λ')
                {
                    j += 1;
                }
                out.push(Tok::Ident(chars[i..j].iter().collect()));
                i = j;
            }
            other => return Err(ParseError::Unexpected(other.to_string())),
        }
    }
    Ok(out)
}

/// Either a coefficient polynomial or an algebra element.
#[derive(Debug, Clone)]
enum Val {
    Scalar(MPoly),
    Elem(ConfElem),
}

impl Val {
    fn neg(self) -> Val {
        match self {
            Val::Scalar(p) => Val::Scalar(-&p),
            Val::Elem(e) => Val::Elem(e.h_mul(&MPoly::int(-1))),
        }
    }

    fn add(self, other: Val) -> Result<Val, ParseError> {
        match (self, other) {
            (Val::Scalar(a), Val::Scalar(b)) => Ok(Val::Scalar(&a + &b)),
            (Val::Elem(a), Val::Elem(b)) => Ok(Val::Elem(a.add(&b))),
            _ => Err(ParseError::MixedSum),
        }
    }

    fn mul(self, other: Val) -> Result<Val, ParseError> {
        match (self, other) {
            (Val::Scalar(a), Val::Scalar(b)) => Ok(Val::Scalar(&a * &b)),
            (Val::Scalar(a), Val::Elem(b)) | (Val::Elem(b), Val::Scalar(a)) => {
                Ok(Val::Elem(b.h_mul(&a)))
            }
            _ => Err(ParseError::ElemTimesElem),
        }
    }
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    gd: &'a GDAlgebra,
}

impl<'a> Parser<'a> {
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

    // expr := term (("+" | "-") term)*
    fn expr(&mut self) -> Result<Val, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(self.term()?)?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.add(self.term()?.neg())?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    // term := factor ("*" factor)*
    fn term(&mut self) -> Result<Val, ParseError> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Tok::Star)) {
            self.pos += 1;
            acc = acc.mul(self.factor()?)?;
        }
        Ok(acc)
    }

    // factor := "-" factor | "(" expr ")" | number | T | λ | basis name
    fn factor(&mut self) -> Result<Val, ParseError> {
        match self.next() {
            None => Err(ParseError::UnexpectedEnd),
            Some(Tok::Minus) => Ok(self.factor()?.neg()),
            Some(Tok::LParen) => {
                let v = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(v),
                    _ => Err(ParseError::Unexpected(")".into())),
                }
            }
            Some(Tok::Num(s)) => {
                let r = parse_rat(&s).map_err(ParseError::Unexpected)?;
                Ok(Val::Scalar(MPoly::constant(r)))
            }
            Some(Tok::Ident(name)) => {
                if name == "T" {
                    return Ok(Val::Scalar(t_var()));
                }
                if name == "λ" || name == "lambda" {
                    return Ok(Val::Scalar(lam_var()));
                }
                match self.gd.basis_index(&name) {
                    Some(i) => Ok(Val::Elem(ConfElem::basis(self.gd.dim(), i))),
                    None => Err(ParseError::UnknownName(name)),
                }
            }
            Some(t) => Err(ParseError::Unexpected(format!("{t:?}"))),
        }
    }
}

/// Parse an algebra element such as "(T+1)*v" or "2*e + T*h".
pub fn parse_elem(gd: &GDAlgebra, s: &str) -> Result<ConfElem, ParseError> {
    let toks = lex(s)?;
    let mut p = Parser { toks, pos: 0, gd };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(ParseError::Unexpected("trailing input".into()));
    }
    match v {
        Val::Elem(e) => Ok(e),
        Val::Scalar(_) => Err(ParseError::ScalarResult),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::virasoro_gd;
    use crate::mpoly::Var;

    #[test]
    fn parses_h_coefficient() {
        let gd = virasoro_gd();
        let e = parse_elem(&gd, "(T+1)*v").unwrap();
        assert_eq!(e.coords[0], &t_var() + &MPoly::one());
    }

    #[test]
    fn parses_rational_and_minus() {
        let gd = virasoro_gd();
        let e = parse_elem(&gd, "-1/2*v + T*T*v").unwrap();
        let expect = &MPoly::term(crate::rational::ratio(-1, 2), Var::T, 0)
            + &MPoly::term(crate::rational::rat(1), Var::T, 2);
        assert_eq!(e.coords[0], expect);
    }

    #[test]
    fn rejects_unknown_name() {
        let gd = virasoro_gd();
        assert!(matches!(
            parse_elem(&gd, "w"),
            Err(ParseError::UnknownName(_))
        ));
    }

    #[test]
    fn rejects_elem_product() {
        let gd = virasoro_gd();
        assert!(matches!(
            parse_elem(&gd, "v*v"),
            Err(ParseError::ElemTimesElem)
        ));
    }
}
