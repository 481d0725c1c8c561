//! Quadratic Lie conformal algebras L(V) over H = k[T].
//!
//! L(V) is the free H-module on a Gel'fand-Dorfman algebra V with
//! [a λ b] = [a,b] + T·(b∘a) + λ·(a∘b + b∘a) on basis elements, extended
//! sesquilinearly: [f(T)a λ g(T)b] = f(-λ) g(T+λ) [a λ b].
//!
//! Bracket values carry coordinates in k[T, λ] (and μ for nested Jacobi
//! checks); the T appearing there is the external H-action on the result,
//! which coincides with multiplication in the commutative coefficient
//! ring, so the skew substitution λ ↦ -T-λ is an ordinary polynomial
//! substitution here.

use std::fmt;

use crate::finite::{CheckReport, GDAlgebra};
use crate::mpoly::{lam_var, mu_var, t_var, MPoly, Var};
use crate::rational::{factorial, rat_str, Rat};

/// Element of H⊗V: one polynomial in T per basis vector of V.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfElem {
    pub coords: Vec<MPoly>,
}

/// Value of a λ-bracket: coordinates in k[T, λ] (μ appears in nested
/// Jacobi computations).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfBracketValue {
    pub coords: Vec<MPoly>,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfError {
    #[error("element has {got} coordinates but the algebra has dimension {dim}")]
    DimMismatch { got: usize, dim: usize },
    #[error("unknown basis name {0:?}")]
    UnknownBasis(String),
}

impl ConfElem {
    pub fn zero(dim: usize) -> ConfElem {
        ConfElem {
            coords: vec![MPoly::zero(); dim],
        }
    }

    pub fn basis(dim: usize, i: usize) -> ConfElem {
        let mut e = ConfElem::zero(dim);
        e.coords[i] = MPoly::one();
        e
    }

    /// p(T) · e_i
    pub fn monomial(dim: usize, i: usize, p: MPoly) -> ConfElem {
        let mut e = ConfElem::zero(dim);
        e.coords[i] = p;
        e
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|p| p.is_zero())
    }

    pub fn add(&self, other: &ConfElem) -> ConfElem {
        ConfElem {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> ConfElem {
        ConfElem {
            coords: self.coords.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// External H-action: multiply every coordinate by p(T).
    pub fn h_mul(&self, p: &MPoly) -> ConfElem {
        ConfElem {
            coords: self.coords.iter().map(|q| q * p).collect(),
        }
    }
}

impl ConfBracketValue {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|p| p.is_zero())
    }

    pub fn lambda_degree(&self) -> u32 {
        self.coords
            .iter()
            .map(|p| if p.is_zero() { 0 } else { p.degree_in(Var::Lambda) })
            .max()
            .unwrap_or(0)
    }
}

fn render_coords(coords: &[MPoly], names: &[String]) -> String {
    let mut parts = Vec::new();
    for (p, name) in coords.iter().zip(names) {
        if p.is_zero() {
            continue;
        }
        if p.is_one() {
            parts.push(name.clone());
        } else if p.num_terms() == 1 {
            // single monomial: render without parentheses when it is ±c·mono
            let s = p.to_string();
            if let Some(c) = p.as_constant() {
                if c == -Rat::from_integer(1.into()) {
                    parts.push(format!("-{name}"));
                } else {
                    parts.push(format!("{}·{name}", rat_str(&c)));
                }
            } else {
                parts.push(format!("{s}·{name}"));
            }
        } else {
            parts.push(format!("({p})·{name}"));
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

/// CLI-facing rendering of an element against basis names, e.g. "(T + 2*λ)·v".
pub fn render_elem(coords: &[MPoly], names: &[String]) -> String {
    render_coords(coords, names)
}

impl fmt::Display for ConfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.coords.len()).map(|i| format!("e{i}")).collect();
        write!(f, "{}", render_coords(&self.coords, &names))
    }
}

/// λ-bracket at an arbitrary polynomial parameter ν.
///
/// For coordinates f_i, g_j (polynomials in T, possibly carrying λ/μ as
/// parameters from an enclosing computation) this computes
/// Σ f_i(-ν) g_j(T+ν) ( [e_i,e_j] + T·(e_j∘e_i) + ν·(e_i∘e_j + e_j∘e_i) ).
pub fn bracket_at(gd: &GDAlgebra, a: &[MPoly], b: &[MPoly], nu: &MPoly) -> Vec<MPoly> {
    let dim = gd.dim();
    let mut out = vec![MPoly::zero(); dim];
    let t_plus_nu = &t_var() + nu;
    let neg_nu = -nu;
    for (i, fa) in a.iter().enumerate() {
        if fa.is_zero() {
            continue;
        }
        let fa_sub = fa.subst(Var::T, &neg_nu);
        for (j, gb) in b.iter().enumerate() {
            if gb.is_zero() {
                continue;
            }
            let gb_sub = gb.subst(Var::T, &t_plus_nu);
            let scalar = &fa_sub * &gb_sub;
            if scalar.is_zero() {
                continue;
            }
            for k in 0..dim {
                let c0 = &gd.lie.entries[i][j][k];
                let c1 = &gd.novikov.entries[j][i][k]; // b∘a
                let c2sum = gd.novikov.entries[i][j][k].clone() + c1; // a∘b + b∘a
                let mut structure = MPoly::constant(c0.clone());
                structure = &structure + &t_var().scale(c1);
                structure = &structure + &nu.scale(&c2sum);
                if !structure.is_zero() {
                    out[k] = &out[k] + &(&scalar * &structure);
                }
            }
        }
    }
    out
}

/// [a λ b] for elements of L(V).
pub fn quadratic_bracket(
    gd: &GDAlgebra,
    a: &ConfElem,
    b: &ConfElem,
) -> Result<ConfBracketValue, ConfError> {
    let dim = gd.dim();
    if a.coords.len() != dim {
        return Err(ConfError::DimMismatch {
            got: a.coords.len(),
            dim,
        });
    }
    if b.coords.len() != dim {
        return Err(ConfError::DimMismatch {
            got: b.coords.len(),
            dim,
        });
    }
    Ok(ConfBracketValue {
        coords: bracket_at(gd, &a.coords, &b.coords, &lam_var()),
    })
}

/// n-th product: n! times the λ^n coefficient of the bracket.
pub fn n_product(
    gd: &GDAlgebra,
    a: &ConfElem,
    b: &ConfElem,
    n: u32,
) -> Result<ConfElem, ConfError> {
    let br = quadratic_bracket(gd, a, b)?;
    let fact = factorial(n);
    Ok(ConfElem {
        coords: br
            .coords
            .iter()
            .map(|p| p.coeff_of(Var::Lambda, n).scale(&fact))
            .collect(),
    })
}

/// Locality: deg_λ of the bracket plus one, or 0 for a zero bracket.
pub fn locality_n(gd: &GDAlgebra, a: &ConfElem, b: &ConfElem) -> Result<u32, ConfError> {
    let br = quadratic_bracket(gd, a, b)?;
    if br.is_zero() {
        Ok(0)
    } else {
        Ok(br.lambda_degree() + 1)
    }
}

/// Skew-symmetry and Jacobi as exact polynomial identities in (T, λ, μ) on
/// all basis pairs/triples; by sesquilinearity this suffices for all of
/// L(V). Works on unchecked tables so the equivalence with the GD
/// axioms can itself be tested.
pub fn check_conformal_axioms(gd: &GDAlgebra) -> CheckReport {
    let dim = gd.dim();
    let lam = lam_var();
    let mu = mu_var();
    // skew-symmetry: [a λ b] + ([b λ' a] with λ' := -T-λ) = 0
    for i in 0..dim {
        for j in 0..dim {
            let a = ConfElem::basis(dim, i);
            let b = ConfElem::basis(dim, j);
            let lhs = bracket_at(gd, &a.coords, &b.coords, &lam);
            let rhs = bracket_at(gd, &b.coords, &a.coords, &lam);
            let skew_sub = &(-&t_var()) - &lam;
            let mut ok = true;
            let mut defect = Vec::new();
            for k in 0..dim {
                let d = &lhs[k] + &rhs[k].subst(Var::Lambda, &skew_sub);
                if !d.is_zero() {
                    ok = false;
                }
                defect.push(d.to_string());
            }
            if !ok {
                return CheckReport::Fail {
                    axiom: "conformal-skew-symmetry".into(),
                    witness: vec![i, j],
                    defect,
                };
            }
        }
    }
    // Jacobi: [[a λ b] λ+μ c] = [a λ [b μ c]] - [b μ [a λ c]]
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                let a = ConfElem::basis(dim, i);
                let b = ConfElem::basis(dim, j);
                let c = ConfElem::basis(dim, k);
                let ab = bracket_at(gd, &a.coords, &b.coords, &lam);
                let lhs = bracket_at(gd, &ab, &c.coords, &(&lam + &mu));
                let bc = bracket_at(gd, &b.coords, &c.coords, &mu);
                let r1 = bracket_at(gd, &a.coords, &bc, &lam);
                let ac = bracket_at(gd, &a.coords, &c.coords, &lam);
                let r2 = bracket_at(gd, &b.coords, &ac, &mu);
                let mut ok = true;
                let mut defect = Vec::new();
                for m in 0..dim {
                    let d = &(&lhs[m] - &r1[m]) + &r2[m];
                    if !d.is_zero() {
                        ok = false;
                    }
                    defect.push(d.to_string());
                }
                if !ok {
                    return CheckReport::Fail {
                        axiom: "conformal-jacobi".into(),
                        witness: vec![i, j, k],
                        defect,
                    };
                }
            }
        }
    }
    CheckReport::Ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::{
        abelian_gd, current_gd, novikov2_table, minus_construction, sl2_table, virasoro_gd,
        StructureTable,
    };
    use crate::rational::rat;

    fn vir() -> GDAlgebra {
        virasoro_gd()
    }

    #[test]
    fn virasoro_bracket() {
        let g = vir();
        let v = ConfElem::basis(1, 0);
        let br = quadratic_bracket(&g, &v, &v).unwrap();
        let expect = &t_var() + &lam_var().scale(&rat(2));
        assert_eq!(br.coords[0], expect);
        assert_eq!(
            render_elem(&br.coords, &g.basis_names),
            "(T + 2*λ)·v"
        );
    }

    #[test]
    fn virasoro_n_products() {
        let g = vir();
        let v = ConfElem::basis(1, 0);
        assert_eq!(n_product(&g, &v, &v, 0).unwrap().coords[0], t_var());
        assert_eq!(n_product(&g, &v, &v, 1).unwrap().coords[0], MPoly::int(2));
        assert!(n_product(&g, &v, &v, 2).unwrap().is_zero());
        assert_eq!(locality_n(&g, &v, &v).unwrap(), 2);
    }

    #[test]
    fn virasoro_sesquilinearity() {
        let g = vir();
        let v = ConfElem::basis(1, 0);
        let tv = ConfElem::monomial(1, 0, t_var());
        let br = quadratic_bracket(&g, &tv, &v).unwrap();
        // (Tv λ v) = -λ (T + 2λ) v
        let expect = (&(&t_var() + &lam_var().scale(&rat(2))) * &lam_var()).scale(&rat(-1));
        assert_eq!(br.coords[0], expect);
    }

    #[test]
    fn current_bracket_formula() {
        // (f(T)a λ g(T)b) = f(-λ) g(T+λ) [a,b] for zero Novikov structure
        let g = current_gd(sl2_table(), vec!["e".into(), "f".into(), "h".into()]).unwrap();
        let f = &t_var() + &MPoly::int(1);
        let q = &t_var() * &t_var();
        let a = ConfElem::monomial(3, 0, f.clone());
        let b = ConfElem::monomial(3, 1, q.clone());
        let br = quadratic_bracket(&g, &a, &b).unwrap();
        let neg_lam = -&lam_var();
        let shifted = &t_var() + &lam_var();
        let expect = &f.subst(Var::T, &neg_lam) * &q.subst(Var::T, &shifted);
        // [e,f] = h
        assert_eq!(br.coords[2], expect);
        assert!(br.coords[0].is_zero());
        assert!(br.coords[1].is_zero());
    }

    #[test]
    fn current_locality_one() {
        let g = current_gd(sl2_table(), vec!["e".into(), "f".into(), "h".into()]).unwrap();
        let e = ConfElem::basis(3, 0);
        let f = ConfElem::basis(3, 1);
        assert_eq!(locality_n(&g, &e, &f).unwrap(), 1);
    }

    #[test]
    fn abelian_locality_zero() {
        let g = abelian_gd();
        let v = ConfElem::basis(1, 0);
        assert_eq!(locality_n(&g, &v, &v).unwrap(), 0);
    }

    #[test]
    fn conformal_axioms_hold_on_fixtures() {
        assert!(check_conformal_axioms(&vir()).is_ok());
        let g = current_gd(sl2_table(), vec!["e".into(), "f".into(), "h".into()]).unwrap();
        assert!(check_conformal_axioms(&g).is_ok());
        let g2 = minus_construction(&novikov2_table(), vec!["e1".into(), "e2".into()]).unwrap();
        assert!(check_conformal_axioms(&g2).is_ok());
    }

    #[test]
    fn perturbed_table_fails_jacobi() {
        // break GD compatibility: nonzero bracket with v∘v=v on dim 2
        use crate::finite::GDAlgebra;
        let nov = StructureTable::from_entries(2, &[(0, 0, 0, rat(1))]);
        let lie = StructureTable::from_entries(2, &[(0, 1, 0, rat(1)), (1, 0, 0, rat(-1))]);
        let g = GDAlgebra::new_unchecked(vec!["a".into(), "b".into()], nov, lie);
        assert!(!check_conformal_axioms(&g).is_ok());
    }
}
