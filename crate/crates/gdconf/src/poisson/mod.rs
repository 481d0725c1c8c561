//! Differential Poisson algebras behind a computable-basis interface.
//!
//! Four implementations ship: the rank-one polynomial algebra k[v]
//! (`rank1`), the Lie-Poisson symmetric algebra over a Lie table
//! (`lie_poisson`), the truncated universal Novikov envelope (`novikov`),
//! and the free differential Poisson algebra on one generator together
//! with the ideal-membership oracle (`free_pd`).

use std::collections::BTreeMap;
use std::fmt::{Debug, Display};

use num_traits::Zero;

use crate::rational::{rat, Rat};

pub mod free_pd;
pub mod lie_poisson;
pub mod lyndon;
pub mod novikov;
pub mod rank1;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum PoissonError {
    /// A result left the truncation; the bounds must be raised.
    #[error("truncation overflow: {0}")]
    Overflow(String),
    /// The rewrite orientation failed a local confluence probe.
    #[error("non-confluence detected: {0}")]
    NonConfluent(String),
}

pub type PResult<T> = Result<T, PoissonError>;

/// Finitely supported rational combination of basis monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoissonElem<Id: Ord> {
    pub coeffs: BTreeMap<Id, Rat>,
}

impl<Id: Ord + Clone> Default for PoissonElem<Id> {
    fn default() -> Self {
        PoissonElem {
            coeffs: BTreeMap::new(),
        }
    }
}

impl<Id: Ord + Clone> PoissonElem<Id> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(id: Id) -> Self {
        let mut e = Self::zero();
        e.add_term(id, rat(1));
        e
    }

    pub fn term(id: Id, c: Rat) -> Self {
        let mut e = Self::zero();
        e.add_term(id, c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, id: Id, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(id) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get().clone() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (id, c) in &other.coeffs {
            out.add_term(id.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (id, c) in &other.coeffs {
            out.add_term(id.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        PoissonElem {
            coeffs: self.coeffs.iter().map(|(id, a)| (id.clone(), a * c)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&rat(-1))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Id, &Rat)> {
        self.coeffs.iter()
    }
}

/// Render a Poisson element, e.g. "3·v^(1)·v^(2) + v·v^(3)".
pub fn render_pelem<Id: Ord + Display>(e: &PoissonElem<Id>) -> String {
    use crate::rational::rat_str;
    if e.coeffs.is_empty() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (id, c) in &e.coeffs {
        let mono = id.to_string();
        if c == &rat(1) {
            parts.push(mono);
        } else if c == &rat(-1) {
            parts.push(format!("-{mono}"));
        } else if mono == "1" {
            parts.push(rat_str(c));
        } else {
            parts.push(format!("{}·{mono}", rat_str(c)));
        }
    }
    parts.join(" + ")
}

/// A differential Poisson algebra over a computable monomial basis.
///
/// `Id` is the canonical monomial identifier; the basis ids carry a
/// product-degree (number of degree-one factors) so operators over the
/// algebra can expand adjoint letters by the Leibniz rule.
pub trait DiffPoisson {
    type Id: Clone + Ord + Debug + Display;

    /// The unit monomial of the associative product.
    fn unit_id(&self) -> Self::Id;

    fn unit(&self) -> PoissonElem<Self::Id> {
        PoissonElem::basis(self.unit_id())
    }

    fn product_ids(&self, a: &Self::Id, b: &Self::Id) -> PResult<PoissonElem<Self::Id>>;

    fn bracket_ids(&self, a: &Self::Id, b: &Self::Id) -> PResult<PoissonElem<Self::Id>>;

    fn derive_id(&self, a: &Self::Id) -> PResult<PoissonElem<Self::Id>>;

    /// Product-degree of a basis monomial (0 for the unit).
    fn degree(&self, id: &Self::Id) -> u32;

    /// Split off one degree-one factor: `m = f · rest` with deg(f) = 1.
    /// `None` for the unit and for degree-one monomials.
    fn split_factor(&self, id: &Self::Id) -> Option<(Self::Id, Self::Id)>;

    /// Raw (unreduced) product monomial `a·b` in the ambient free algebra.
    /// Only quotient envelopes whose ids name free monomials implement
    /// this; it feeds the Ad-expansion identities used to canonicalize
    /// operator words modulo the relation ideal. `None` when monomials
    /// are already canonical.
    fn merge_ids(&self, _a: &Self::Id, _b: &Self::Id) -> Option<Self::Id> {
        None
    }

    /// All basis monomials within the bounds, unit first, in the canonical
    /// (degree-then-lexicographic) order.
    fn enumerate_basis(&self, order_bound: u32, degree_bound: u32) -> Vec<Self::Id>;

    /// For algebras presented as a free object modulo an ideal: exact
    /// membership of an element in the ideal. `None` when the algebra's
    /// basis is already a quotient basis.
    fn ideal_member(&self, _e: &PoissonElem<Self::Id>) -> Option<PResult<bool>> {
        None
    }

    // --- bilinear extensions -------------------------------------------

    fn product(
        &self,
        a: &PoissonElem<Self::Id>,
        b: &PoissonElem<Self::Id>,
    ) -> PResult<PoissonElem<Self::Id>> {
        let mut out = PoissonElem::zero();
        for (ia, ca) in a.iter() {
            for (ib, cb) in b.iter() {
                let p = self.product_ids(ia, ib)?;
                out = out.add(&p.scale(&(ca * cb)));
            }
        }
        Ok(out)
    }

    fn bracket(
        &self,
        a: &PoissonElem<Self::Id>,
        b: &PoissonElem<Self::Id>,
    ) -> PResult<PoissonElem<Self::Id>> {
        let mut out = PoissonElem::zero();
        for (ia, ca) in a.iter() {
            for (ib, cb) in b.iter() {
                let p = self.bracket_ids(ia, ib)?;
                out = out.add(&p.scale(&(ca * cb)));
            }
        }
        Ok(out)
    }

    fn derive(&self, a: &PoissonElem<Self::Id>) -> PResult<PoissonElem<Self::Id>> {
        let mut out = PoissonElem::zero();
        for (ia, ca) in a.iter() {
            let p = self.derive_id(ia)?;
            out = out.add(&p.scale(ca));
        }
        Ok(out)
    }
}

/// Exhaustive verification of the Poisson axioms on basis tuples within
/// bounds: commutativity/associativity/unit of the product, antisymmetry,
/// Jacobi and Leibniz for the bracket, and the derivation property of d
/// for both operations.
///
/// A tuple whose evaluation overflows the truncation is skipped — the
/// identity is only verifiable inside the window. Non-confluence errors
/// propagate.
pub fn check_poisson_axioms<P: DiffPoisson>(
    p: &P,
    order_bound: u32,
    degree_bound: u32,
) -> PResult<crate::finite::CheckReport> {
    use crate::finite::CheckReport;
    let basis = p.enumerate_basis(order_bound, degree_bound);
    let elems: Vec<PoissonElem<P::Id>> =
        basis.iter().map(|id| PoissonElem::basis(id.clone())).collect();
    let mut failure: Option<CheckReport> = None;
    let mut check = |axiom: &str,
                     witness: &[usize],
                     defect: PResult<PoissonElem<P::Id>>|
     -> PResult<bool> {
        match defect {
            Ok(d) => {
                if d.is_zero() {
                    Ok(true)
                } else {
                    failure = Some(CheckReport::Fail {
                        axiom: axiom.to_string(),
                        witness: witness.to_vec(),
                        defect: vec![render_pelem(&d)],
                    });
                    Ok(false)
                }
            }
            Err(PoissonError::Overflow(_)) => Ok(true), // outside the window
            Err(e) => Err(e),
        }
    };
    let unit = p.unit();
    for (i, a) in elems.iter().enumerate() {
        if !check("unit", &[i], p.product(a, &unit).map(|r| r.sub(a)))? {
            return Ok(failure.unwrap());
        }
        for (j, b) in elems.iter().enumerate() {
            let comm = (|| Ok(p.product(a, b)?.sub(&p.product(b, a)?)))();
            if !check("commutativity", &[i, j], comm)? {
                return Ok(failure.unwrap());
            }
            let anti = (|| Ok(p.bracket(a, b)?.add(&p.bracket(b, a)?)))();
            if !check("bracket-antisymmetry", &[i, j], anti)? {
                return Ok(failure.unwrap());
            }
            // d({a,b}) = {da,b} + {a,db}
            let dbr = (|| {
                let lhs = p.derive(&p.bracket(a, b)?)?;
                let rhs = p
                    .bracket(&p.derive(a)?, b)?
                    .add(&p.bracket(a, &p.derive(b)?)?);
                Ok(lhs.sub(&rhs))
            })();
            if !check("d-derivation-of-bracket", &[i, j], dbr)? {
                return Ok(failure.unwrap());
            }
            // d(a·b) = da·b + a·db
            let dpr = (|| {
                let lhs = p.derive(&p.product(a, b)?)?;
                let rhs = p
                    .product(&p.derive(a)?, b)?
                    .add(&p.product(a, &p.derive(b)?)?);
                Ok(lhs.sub(&rhs))
            })();
            if !check("d-derivation-of-product", &[i, j], dpr)? {
                return Ok(failure.unwrap());
            }
            for (k, c) in elems.iter().enumerate() {
                let assoc = (|| {
                    Ok(p.product(&p.product(a, b)?, c)?
                        .sub(&p.product(a, &p.product(b, c)?)?))
                })();
                if !check("associativity", &[i, j, k], assoc)? {
                    return Ok(failure.unwrap());
                }
                // Leibniz {a, b·c} = b·{a,c} + {a,b}·c
                let leib = (|| {
                    let lhs = p.bracket(a, &p.product(b, c)?)?;
                    let rhs = p
                        .product(b, &p.bracket(a, c)?)?
                        .add(&p.product(&p.bracket(a, b)?, c)?);
                    Ok(lhs.sub(&rhs))
                })();
                if !check("leibniz", &[i, j, k], leib)? {
                    return Ok(failure.unwrap());
                }
                // Jacobi {a,{b,c}} = {{a,b},c} + {b,{a,c}}
                let jac = (|| {
                    let lhs = p.bracket(a, &p.bracket(b, c)?)?;
                    let rhs = p
                        .bracket(&p.bracket(a, b)?, c)?
                        .add(&p.bracket(b, &p.bracket(a, c)?)?);
                    Ok(lhs.sub(&rhs))
                })();
                if !check("bracket-jacobi", &[i, j, k], jac)? {
                    return Ok(failure.unwrap());
                }
            }
        }
    }
    Ok(crate::finite::CheckReport::Ok)
}

/// P^(d) consistency against a source GD algebra: a·d(b) must equal the
/// Novikov product and {a,b} the GD bracket on all V-basis pairs.
/// `embed[i]` is the image of the i-th GD basis vector in P.
/// For quotient presentations the defect is accepted when it lies in the
/// ideal.
pub fn check_pd_consistency<P: DiffPoisson>(
    p: &P,
    gd: &crate::finite::GDAlgebra,
    embed: &[PoissonElem<P::Id>],
) -> PResult<crate::finite::CheckReport> {
    use crate::finite::CheckReport;
    let dim = gd.dim();
    let embed_vect = |v: &[Rat]| -> PoissonElem<P::Id> {
        let mut out = PoissonElem::zero();
        for (i, c) in v.iter().enumerate() {
            out = out.add(&embed[i].scale(c));
        }
        out
    };
    let vanishes = |d: &PoissonElem<P::Id>| -> PResult<bool> {
        if d.is_zero() {
            return Ok(true);
        }
        match p.ideal_member(d) {
            Some(r) => r,
            None => Ok(false),
        }
    };
    for i in 0..dim {
        for j in 0..dim {
            let prod = p.product(&embed[i], &p.derive(&embed[j])?)?;
            let d = prod.sub(&embed_vect(gd.novikov.basis_product(i, j)));
            if !vanishes(&d)? {
                return Ok(CheckReport::Fail {
                    axiom: "pd-novikov-consistency".into(),
                    witness: vec![i, j],
                    defect: vec![render_pelem(&d)],
                });
            }
            let br = p.bracket(&embed[i], &embed[j])?;
            let d = br.sub(&embed_vect(gd.lie.basis_product(i, j)));
            if !vanishes(&d)? {
                return Ok(CheckReport::Fail {
                    axiom: "pd-bracket-consistency".into(),
                    witness: vec![i, j],
                    defect: vec![render_pelem(&d)],
                });
            }
        }
    }
    Ok(CheckReport::Ok)
}
