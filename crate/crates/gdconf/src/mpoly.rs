//! Exact multivariate polynomials over the rationals in the fixed,
//! ordered variable set {T, x, λ, μ}.
//!
//! T is the polynomial generator of H = k[∂] (written T to keep it apart
//! from the Poisson derivation d), x is the Cend variable, λ and μ are the
//! conformal parameters. Everything else in the crate lives in the word
//! alphabet, not here, so four commuting variables suffice.
//!
//! Representation is sparse in monomials; the canonical monomial order is
//! graded lexicographic with T > x > λ > μ.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::rational::{rat, rat_str, Rat};

/// The fixed variable set, in the canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    T,
    X,
    Lambda,
    Mu,
}

pub const VARS: [Var; 4] = [Var::T, Var::X, Var::Lambda, Var::Mu];

impl Var {
    pub fn index(self) -> usize {
        match self {
            Var::T => 0,
            Var::X => 1,
            Var::Lambda => 2,
            Var::Mu => 3,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Var::T => "T",
            Var::X => "x",
            Var::Lambda => "λ",
            Var::Mu => "μ",
        }
    }
}

/// Exponent multi-index over {T, x, λ, μ}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mono(pub [u32; 4]);

impl Mono {
    pub const ONE: Mono = Mono([0; 4]);

    pub fn var(v: Var) -> Mono {
        let mut e = [0; 4];
        e[v.index()] = 1;
        Mono(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Mono) -> Mono {
        let mut e = [0; 4];
        for i in 0..4 {
            e[i] = self.0[i] + other.0[i];
        }
        Mono(e)
    }
}

// Graded lex with T > x > λ > μ.
impl Ord for Mono {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse exact polynomial. No zero coefficients are stored; equality is
/// coefficient-wise.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MPoly {
    terms: BTreeMap<Mono, Rat>,
}

impl MPoly {
    pub fn zero() -> MPoly {
        MPoly::default()
    }

    pub fn one() -> MPoly {
        MPoly::constant(rat(1))
    }

    pub fn constant(c: Rat) -> MPoly {
        let mut p = MPoly::default();
        p.add_term(Mono::ONE, c);
        p
    }

    pub fn var(v: Var) -> MPoly {
        let mut p = MPoly::default();
        p.add_term(Mono::var(v), rat(1));
        p
    }

    /// c * v^k
    pub fn term(c: Rat, v: Var, k: u32) -> MPoly {
        let mut e = [0; 4];
        e[v.index()] = k;
        let mut p = MPoly::default();
        p.add_term(Mono(e), c);
        p
    }

    pub fn int(n: i64) -> MPoly {
        MPoly::constant(rat(n))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Mono::ONE).map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The constant term, if the polynomial is constant; `None` otherwise.
    pub fn as_constant(&self) -> Option<Rat> {
        if self.is_zero() {
            return Some(Rat::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&Mono::ONE) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn add_term(&mut self, m: Mono, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.0[v.index()]).max().unwrap_or(0)
    }

    /// Coefficient of v^power, as a polynomial in the remaining variables.
    pub fn coeff_of(&self, v: Var, power: u32) -> MPoly {
        let i = v.index();
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            if m.0[i] == power {
                let mut e = m.0;
                e[i] = 0;
                out.add_term(Mono(e), c.clone());
            }
        }
        out
    }

    /// Simultaneous exact substitution of whole polynomials for variables.
    /// Variables absent from `bindings` are left alone.
    pub fn substitute(&self, bindings: &[(Var, MPoly)]) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let mut acc = MPoly::constant(c.clone());
            for v in VARS {
                let k = m.0[v.index()];
                if k == 0 {
                    continue;
                }
                match bindings.iter().find(|(bv, _)| *bv == v) {
                    Some((_, img)) => {
                        for _ in 0..k {
                            acc = &acc * img;
                        }
                    }
                    None => {
                        acc = &acc * &MPoly::term(rat(1), v, k);
                    }
                }
            }
            out = &out + &acc;
        }
        out
    }

    /// Substitute a single variable.
    pub fn subst(&self, v: Var, image: &MPoly) -> MPoly {
        self.substitute(&[(v, image.clone())])
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut acc = MPoly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    fn fmt_mono(m: &Mono) -> String {
        let mut parts = Vec::new();
        for v in VARS {
            let k = m.0[v.index()];
            if k == 1 {
                parts.push(v.symbol().to_string());
            } else if k > 1 {
                parts.push(format!("{}^{}", v.symbol(), k));
            }
        }
        parts.join("*")
    }
}

impl fmt::Display for MPoly {
    /// Canonical text rendering: monomials in descending graded-lex order,
    /// coefficients as "a/b", e.g. "T^2*x - 1/2*λ".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c < &Rat::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mono = MPoly::fmt_mono(m);
            if mono.is_empty() {
                write!(f, "{}", rat_str(&abs))?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{mono}", rat_str(&abs))?;
            }
        }
        Ok(())
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

/// Convenience constructors for the four variables.
pub fn t_var() -> MPoly {
    MPoly::var(Var::T)
}
pub fn x_var() -> MPoly {
    MPoly::var(Var::X)
}
pub fn lam_var() -> MPoly {
    MPoly::var(Var::Lambda)
}
pub fn mu_var() -> MPoly {
    MPoly::var(Var::Mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn difference_of_squares() {
        let p = &t_var() + &lam_var();
        let q = &t_var() - &lam_var();
        let expect = &(&t_var() * &t_var()) - &(&lam_var() * &lam_var());
        assert_eq!(&p * &q, expect);
    }

    #[test]
    fn additive_identity() {
        let p = &(&t_var() * &x_var()) + &MPoly::int(3);
        assert_eq!(&p + &MPoly::zero(), p);
    }

    #[test]
    fn skew_substitution() {
        // λ ↦ -T-λ
        let p = lam_var();
        let img = &(-&t_var()) - &lam_var();
        assert_eq!(p.subst(Var::Lambda, &img), img);
    }

    #[test]
    fn shift_substitution() {
        // x ↦ x+λ per the Cend product rule
        let p = x_var();
        assert_eq!(p.subst(Var::X, &(&x_var() + &lam_var())), &x_var() + &lam_var());
        // T·x with T ↦ -λ
        let q = &t_var() * &x_var();
        assert_eq!(
            q.subst(Var::T, &-&lam_var()),
            &(-&lam_var()) * &x_var()
        );
    }

    #[test]
    fn lambda_coefficients() {
        // ∂ + 2λ
        let p = &t_var() + &lam_var().scale(&rat(2));
        assert_eq!(p.coeff_of(Var::Lambda, 0), t_var());
        assert_eq!(p.coeff_of(Var::Lambda, 1), MPoly::int(2));
        assert_eq!(p.coeff_of(Var::Lambda, 2), MPoly::zero());
    }

    #[test]
    fn rendering() {
        let p = &(&(&t_var() * &t_var()) * &x_var()) - &lam_var().scale(&ratio(1, 2));
        assert_eq!(p.to_string(), "T^2*x - 1/2*λ");
        assert_eq!(MPoly::zero().to_string(), "0");
        let q = &MPoly::int(-1) - &t_var();
        assert_eq!(q.to_string(), "-T - 1");
    }
}
