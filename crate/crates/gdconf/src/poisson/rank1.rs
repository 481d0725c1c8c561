//! The rank-one polynomial algebra k[v] with zero bracket and either
//! d = d/dv or d ≡ 0.

use std::fmt;

use super::{DiffPoisson, PResult, PoissonElem};
use crate::rational::rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivationMode {
    /// d = d/dv; with this choice P^(d) is the Virasoro GD algebra.
    Ddv,
    /// d ≡ 0; P^(d) is the rank-one abelian GD algebra.
    Zero,
}

/// Basis monomial v^n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct VPow(pub u32);

impl fmt::Display for VPow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => write!(f, "1"),
            1 => write!(f, "v"),
            n => write!(f, "v^{n}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Rank1Poly {
    pub mode: DerivationMode,
}

pub fn poly_poisson_rank1(mode: DerivationMode) -> Rank1Poly {
    Rank1Poly { mode }
}

impl DiffPoisson for Rank1Poly {
    type Id = VPow;

    fn unit_id(&self) -> VPow {
        VPow(0)
    }

    fn product_ids(&self, a: &VPow, b: &VPow) -> PResult<PoissonElem<VPow>> {
        Ok(PoissonElem::basis(VPow(a.0 + b.0)))
    }

    fn bracket_ids(&self, _a: &VPow, _b: &VPow) -> PResult<PoissonElem<VPow>> {
        Ok(PoissonElem::zero())
    }

    fn derive_id(&self, a: &VPow) -> PResult<PoissonElem<VPow>> {
        match self.mode {
            DerivationMode::Zero => Ok(PoissonElem::zero()),
            DerivationMode::Ddv => {
                if a.0 == 0 {
                    Ok(PoissonElem::zero())
                } else {
                    Ok(PoissonElem::term(VPow(a.0 - 1), rat(a.0 as i64)))
                }
            }
        }
    }

    fn degree(&self, id: &VPow) -> u32 {
        id.0
    }

    fn split_factor(&self, id: &VPow) -> Option<(VPow, VPow)> {
        if id.0 >= 2 {
            Some((VPow(1), VPow(id.0 - 1)))
        } else {
            None
        }
    }

    fn enumerate_basis(&self, _order_bound: u32, degree_bound: u32) -> Vec<VPow> {
        (0..=degree_bound).map(VPow).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_derivative() {
        let p = poly_poisson_rank1(DerivationMode::Ddv);
        let d = p.derive_id(&VPow(3)).unwrap();
        assert_eq!(d, PoissonElem::term(VPow(2), rat(3)));
    }

    #[test]
    fn zero_mode() {
        let p = poly_poisson_rank1(DerivationMode::Zero);
        assert!(p.derive_id(&VPow(1)).unwrap().is_zero());
    }

    #[test]
    fn gd_recovery() {
        // v·d(v) = v under d/dv, matching v∘v = v
        let p = poly_poisson_rank1(DerivationMode::Ddv);
        let v = PoissonElem::basis(VPow(1));
        let r = p.product(&v, &p.derive(&v).unwrap()).unwrap();
        assert_eq!(r, v);
    }

    #[test]
    fn axioms() {
        let p = poly_poisson_rank1(DerivationMode::Ddv);
        assert!(super::super::check_poisson_axioms(&p, 3, 4).unwrap().is_ok());
    }
}
