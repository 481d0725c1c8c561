//! Lie-Poisson structure on the symmetric algebra of a finite-dimensional
//! Lie algebra: the bracket extends the Lie table by the Leibniz rule and
//! d ≡ 0. This is the Poisson envelope used for current GD algebras
//! (trivial Novikov structure).

use std::fmt;

use super::{DiffPoisson, PResult, PoissonElem};
use crate::finite::{check_lie, GdError, StructureTable};

/// Commutative monomial in the Lie basis: sorted generator indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymMono(pub Vec<usize>);

impl PartialOrd for SymMono {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SymMono {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // degree then lexicographic
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for SymMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|i| format!("g{i}")).collect();
        write!(f, "{}", parts.join("·"))
    }
}

#[derive(Debug, Clone)]
pub struct LiePoisson {
    pub table: StructureTable,
}

pub fn lie_poisson(table: StructureTable) -> Result<LiePoisson, GdError> {
    let r = check_lie(&table);
    if !r.is_ok() {
        return Err(GdError::NotLie(r));
    }
    Ok(LiePoisson { table })
}

impl LiePoisson {
    fn merged(a: &[usize], b: &[usize]) -> SymMono {
        let mut v: Vec<usize> = a.iter().chain(b).copied().collect();
        v.sort_unstable();
        SymMono(v)
    }

    fn gen_bracket(&self, i: usize, j: usize) -> PoissonElem<SymMono> {
        let mut out = PoissonElem::zero();
        for (k, c) in self.table.entries[i][j].iter().enumerate() {
            out.add_term(SymMono(vec![k]), c.clone());
        }
        out
    }
}

impl DiffPoisson for LiePoisson {
    type Id = SymMono;

    fn unit_id(&self) -> SymMono {
        SymMono(Vec::new())
    }

    fn product_ids(&self, a: &SymMono, b: &SymMono) -> PResult<PoissonElem<SymMono>> {
        Ok(PoissonElem::basis(Self::merged(&a.0, &b.0)))
    }

    fn bracket_ids(&self, a: &SymMono, b: &SymMono) -> PResult<PoissonElem<SymMono>> {
        // Leibniz in both slots: sum over factor pairs, the bracketed pair
        // replaced by the Lie table value.
        let mut out = PoissonElem::zero();
        for (pa, &ga) in a.0.iter().enumerate() {
            let mut rest_a = a.0.clone();
            rest_a.remove(pa);
            for (pb, &gb) in b.0.iter().enumerate() {
                let mut rest_b = b.0.clone();
                rest_b.remove(pb);
                let rest = Self::merged(&rest_a, &rest_b);
                for (id, c) in self.gen_bracket(ga, gb).iter() {
                    out.add_term(Self::merged(&id.0, &rest.0), c.clone());
                }
            }
        }
        Ok(out)
    }

    fn derive_id(&self, _a: &SymMono) -> PResult<PoissonElem<SymMono>> {
        Ok(PoissonElem::zero())
    }

    fn degree(&self, id: &SymMono) -> u32 {
        id.0.len() as u32
    }

    fn split_factor(&self, id: &SymMono) -> Option<(SymMono, SymMono)> {
        if id.0.len() >= 2 {
            let f = SymMono(vec![id.0[0]]);
            let rest = SymMono(id.0[1..].to_vec());
            Some((f, rest))
        } else {
            None
        }
    }

    fn enumerate_basis(&self, _order_bound: u32, degree_bound: u32) -> Vec<SymMono> {
        let n = self.table.dim;
        let mut out = vec![SymMono(Vec::new())];
        let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..degree_bound {
            let mut next = Vec::new();
            for m in &layer {
                let lo = m.last().copied().unwrap_or(0);
                for g in lo..n {
                    let mut v = m.clone();
                    v.push(g);
                    next.push(v);
                }
            }
            out.extend(next.iter().map(|v| SymMono(v.clone())));
            layer = next;
        }
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::sl2_table;
    use crate::poisson::check_poisson_axioms;
    use crate::rational::rat;

    fn sl2() -> LiePoisson {
        lie_poisson(sl2_table()).unwrap()
    }

    #[test]
    fn embeds_lie_table() {
        // {e, f} = h  (basis order e=0, f=1, h=2)
        let p = sl2();
        let r = p.bracket_ids(&SymMono(vec![0]), &SymMono(vec![1])).unwrap();
        assert_eq!(r, PoissonElem::basis(SymMono(vec![2])));
    }

    #[test]
    fn leibniz_expansion() {
        // {e·f, h} = e·{f,h} + {e,h}·f = 2e·f - 2e·f = 0
        let p = sl2();
        let r = p
            .bracket_ids(&SymMono(vec![0, 1]), &SymMono(vec![2]))
            .unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn derive_is_zero() {
        let p = sl2();
        assert!(p.derive_id(&SymMono(vec![0, 2])).unwrap().is_zero());
    }

    #[test]
    fn rejects_non_lie() {
        let t = StructureTable::from_entries(1, &[(0, 0, 0, rat(1))]);
        assert!(lie_poisson(t).is_err());
    }

    #[test]
    fn axioms_up_to_degree_3() {
        let p = sl2();
        assert!(check_poisson_axioms(&p, 0, 3).unwrap().is_ok());
    }
}
