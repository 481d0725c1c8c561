//! Truncated universal differential envelope U_d(V) of a Novikov algebra.
//!
//! Generators are the formal derivatives a^(n) of the Novikov basis; the
//! defining relations are all formal derivatives of a·d(b) = a∘b,
//!
//!   d^k(a·b^(1) − a∘b) = Σ_i C(k,i) a^(i)·b^(k+1−i) − (a∘b)^(k).
//!
//! These relations alone are not confluent when oriented as rewrite
//! rules: already for v∘v = v the overlap on v·v′·v″ produces the hidden
//! consequence v′(1 − v′)² of the relation ideal. Construction therefore
//! runs Buchberger completion of the relation ideal in the truncated
//! variable set (derivative order ≤ K) under the degree-graded monomial
//! order, capped at degree D + 2, and all normal forms are computed by
//! exact division against the completed basis. A probe compares two
//! division strategies on low-degree monomials; with a completed basis
//! they must agree, and a disagreement is reported as an error rather
//! than silently producing unstable normal forms.
//!
//! The model is truncated by (derivative order K, degree D); operations
//! whose result leaves the bounds report a truncation overflow. The
//! bracket is {a^(n), b^(m)} = (m−1) a^(n+1) b^(m) − (n−1) a^(n) b^(m+1)
//! on generators, extended by the Leibniz rule and reduced afterwards.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use super::{DiffPoisson, PResult, PoissonElem, PoissonError};
use crate::finite::{check_novikov, GdError, StructureTable};
use crate::rational::{binomial, rat, Rat};

/// Commutative monomial in the generators a^(n): sorted multiset of
/// (basis index, derivative order). The order is graded first by total
/// derivative weight Σn, then by length, then revlex on the sorted
/// letter vector — a valid monomial order. Grading by weight first
/// guarantees that reduction never increases the weight of any term,
/// which is what makes the truncation-soundness analysis of d and {,}
/// below work.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NovMono(pub Vec<(usize, u32)>);

impl PartialOrd for NovMono {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for NovMono {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.0.len().cmp(&other.0.len()))
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl NovMono {
    fn merged(a: &[(usize, u32)], b: &[(usize, u32)]) -> NovMono {
        let mut v: Vec<(usize, u32)> = a.iter().chain(b).copied().collect();
        v.sort_unstable();
        NovMono(v)
    }

    fn max_order(&self) -> u32 {
        self.0.iter().map(|&(_, n)| n).max().unwrap_or(0)
    }

    /// Total derivative weight Σn.
    pub fn weight(&self) -> u32 {
        self.0.iter().map(|&(_, n)| n).sum()
    }

    /// Multiset quotient self / d, if d divides self.
    fn divided_by(&self, d: &NovMono) -> Option<NovMono> {
        let mut rest = self.0.clone();
        for letter in &d.0 {
            match rest.iter().position(|x| x == letter) {
                Some(i) => {
                    rest.remove(i);
                }
                None => return None,
            }
        }
        Some(NovMono(rest))
    }

    /// Multiset least common multiple.
    fn lcm(&self, other: &NovMono) -> NovMono {
        let mut counts: BTreeMap<(usize, u32), (u32, u32)> = BTreeMap::new();
        for &l in &self.0 {
            counts.entry(l).or_default().0 += 1;
        }
        for &l in &other.0 {
            counts.entry(l).or_default().1 += 1;
        }
        let mut v = Vec::new();
        for (l, (a, b)) in counts {
            for _ in 0..a.max(b) {
                v.push(l);
            }
        }
        NovMono(v)
    }
}

impl fmt::Display for NovMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&(g, n)| {
                if n == 0 {
                    format!("a{g}")
                } else {
                    format!("a{g}^({n})")
                }
            })
            .collect();
        write!(f, "{}", parts.join("·"))
    }
}

/// Division strategy: with a completed basis, both must produce the same
/// normal form. The probe compares them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Division {
    FirstDivisor,
    LastDivisor,
}

pub struct NovikovUniversal {
    pub table: StructureTable,
    pub order_bound: u32,
    pub degree_bound: u32,
    /// Completed (Gröbner) basis; every element is monic with the leading
    /// monomial as its largest key.
    basis: Vec<PoissonElem<NovMono>>,
    /// S-pairs skipped because their lcm exceeded the completion cap.
    pub truncated_pairs: usize,
    /// Flags basis elements whose derivative leaves the window. Equalities
    /// that factor through such an element cannot be differentiated inside
    /// the truncation, so reductions that use one are reported as overflow
    /// by the derivation-sensitive operations.
    unstable: Vec<bool>,
    cache: RefCell<BTreeMap<NovMono, (PoissonElem<NovMono>, bool)>>,
}

impl fmt::Debug for NovikovUniversal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NovikovUniversal")
            .field("dim", &self.table.dim)
            .field("order_bound", &self.order_bound)
            .field("degree_bound", &self.degree_bound)
            .field("basis_size", &self.basis.len())
            .field("truncated_pairs", &self.truncated_pairs)
            .finish()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum NovikovEnvError {
    #[error(transparent)]
    Gd(#[from] GdError),
    #[error(transparent)]
    Poisson(#[from] PoissonError),
    #[error("bounds must be at least 1 (got K={0}, D={1})")]
    Bounds(u32, u32),
}

/// Truncated universal envelope of a Novikov structure table.
pub fn novikov_universal(
    table: StructureTable,
    order_bound: u32,
    degree_bound: u32,
) -> Result<NovikovUniversal, NovikovEnvError> {
    if order_bound < 1 || degree_bound < 1 {
        return Err(NovikovEnvError::Bounds(order_bound, degree_bound));
    }
    let r = check_novikov(&table);
    if !r.is_ok() {
        return Err(NovikovEnvError::Gd(GdError::NotNovikov(r)));
    }
    let mut env = NovikovUniversal {
        table,
        order_bound,
        degree_bound,
        basis: Vec::new(),
        truncated_pairs: 0,
        unstable: Vec::new(),
        cache: RefCell::new(BTreeMap::new()),
    };
    env.complete();
    env.confluence_probe()?;
    Ok(env)
}

fn leading(e: &PoissonElem<NovMono>) -> Option<(&NovMono, &Rat)> {
    e.coeffs.iter().next_back()
}

fn make_monic(e: &PoissonElem<NovMono>) -> PoissonElem<NovMono> {
    match leading(e) {
        None => PoissonElem::zero(),
        Some((_, c)) => e.scale(&(Rat::one() / c)),
    }
}

/// Multiply an element by a monomial.
fn mono_mul(e: &PoissonElem<NovMono>, m: &NovMono) -> PoissonElem<NovMono> {
    let mut out = PoissonElem::zero();
    for (id, c) in e.iter() {
        out.add_term(NovMono::merged(&id.0, &m.0), c.clone());
    }
    out
}

impl NovikovUniversal {
    fn check_bounds(&self, m: &NovMono) -> PResult<()> {
        if m.0.len() as u32 > self.degree_bound {
            return Err(PoissonError::Overflow(format!(
                "monomial {m} exceeds degree bound {}",
                self.degree_bound
            )));
        }
        if m.max_order() > self.order_bound {
            return Err(PoissonError::Overflow(format!(
                "monomial {m} exceeds order bound {}",
                self.order_bound
            )));
        }
        Ok(())
    }

    /// d^k of the linear element a∘b, as an element.
    fn dk_product(&self, a: usize, b: usize, k: u32) -> PoissonElem<NovMono> {
        let mut out = PoissonElem::zero();
        for (c, coeff) in self.table.entries[a][b].iter().enumerate() {
            out.add_term(NovMono(vec![(c, k)]), coeff.clone());
        }
        out
    }

    /// The defining relation d^k(a·b^(1) − a∘b).
    fn relation(&self, a: usize, b: usize, k: u32) -> PoissonElem<NovMono> {
        let mut r = PoissonElem::zero();
        for i in 0..=k {
            r.add_term(NovMono::merged(&[(a, i)], &[(b, k + 1 - i)]), binomial(k, i));
        }
        r.sub(&self.dk_product(a, b, k))
    }

    /// Full reduction of an element against the current basis. The second
    /// component records whether any basis element flagged in `flags` was
    /// used (construction passes an empty slice and ignores it).
    fn reduce_traced(
        basis: &[PoissonElem<NovMono>],
        flags: &[bool],
        f: PoissonElem<NovMono>,
        division: Division,
    ) -> (PoissonElem<NovMono>, bool) {
        let mut work = f;
        let mut rem = PoissonElem::zero();
        let mut flagged = false;
        while let Some((m, c)) = leading(&work).map(|(m, c)| (m.clone(), c.clone())) {
            let find = |(i, g): (usize, &PoissonElem<NovMono>)| {
                leading(g).and_then(|(lt, _)| m.divided_by(lt)).map(move |u| (i, u))
            };
            let hit = match division {
                Division::FirstDivisor => basis.iter().enumerate().find_map(find),
                Division::LastDivisor => basis.iter().enumerate().rev().find_map(find),
            };
            match hit {
                Some((i, u)) => {
                    flagged |= flags.get(i).copied().unwrap_or(false);
                    // basis[i] is monic: this cancels the leading term
                    work = work.sub(&mono_mul(&basis[i], &u).scale(&c));
                }
                None => {
                    rem.add_term(m.clone(), c);
                    work.coeffs.remove(&m);
                }
            }
        }
        (rem, flagged)
    }

    fn reduce_against(
        basis: &[PoissonElem<NovMono>],
        f: PoissonElem<NovMono>,
        division: Division,
    ) -> PoissonElem<NovMono> {
        Self::reduce_traced(basis, &[], f, division).0
    }

    /// Drain the S-pair queue, completing the basis within the truncated
    /// variable set, capped at degree `degree_bound + 2`. New elements
    /// push their pairs onto the same queue.
    fn buchberger(
        &self,
        basis: &mut Vec<PoissonElem<NovMono>>,
        pairs: &mut Vec<(usize, usize)>,
        truncated: &mut usize,
    ) {
        let degree_cap = (self.degree_bound + 2) as usize;
        while let Some((i, j)) = pairs.pop() {
            let (lt_i, lt_j) = (
                leading(&basis[i]).expect("basis elements are nonzero").0.clone(),
                leading(&basis[j]).expect("basis elements are nonzero").0.clone(),
            );
            let l = lt_i.lcm(&lt_j);
            if l.0.len() > degree_cap {
                *truncated += 1;
                continue;
            }
            // product criterion: coprime leading monomials reduce to zero
            if l.0.len() == lt_i.0.len() + lt_j.0.len() {
                continue;
            }
            let ui = l.divided_by(&lt_i).expect("lcm divisible");
            let uj = l.divided_by(&lt_j).expect("lcm divisible");
            let s = mono_mul(&basis[i], &ui).sub(&mono_mul(&basis[j], &uj));
            let r = Self::reduce_against(basis, s, Division::FirstDivisor);
            if !r.is_zero() {
                let r = make_monic(&r);
                for t in 0..basis.len() {
                    pairs.push((t, basis.len()));
                }
                basis.push(r);
            }
        }
    }

    /// Naive derivative of an ideal element, if every term stays within
    /// the window (letters ≤ order bound; the degree is unchanged).
    fn derive_within(&self, e: &PoissonElem<NovMono>) -> Option<PoissonElem<NovMono>> {
        let mut out = PoissonElem::zero();
        for (m, c) in e.iter() {
            for (p, &(g, n)) in m.0.iter().enumerate() {
                if n + 1 > self.order_bound {
                    return None;
                }
                let mut v = m.0.clone();
                v[p] = (g, n + 1);
                v.sort_unstable();
                out.add_term(NovMono(v), c.clone());
            }
        }
        Some(out)
    }

    /// Raw bracket of a single generator letter with an ideal element, if
    /// every term stays within the window.
    fn letter_bracket_within(
        &self,
        letter: (usize, u32),
        e: &PoissonElem<NovMono>,
    ) -> Option<PoissonElem<NovMono>> {
        let degree_cap = (self.degree_bound + 2) as usize;
        let mut out = PoissonElem::zero();
        let l = NovMono(vec![letter]);
        for (m, c) in e.iter() {
            let b = self.bracket_raw(&l, m);
            for (bm, _) in b.iter() {
                if bm.max_order() > self.order_bound || bm.0.len() > degree_cap {
                    return None;
                }
            }
            out = out.add(&b.scale(c));
        }
        Some(out)
    }

    /// Completion and saturation of the relation ideal. The defining
    /// relations alone generate an ideal that is neither confluent as a
    /// rewrite system nor stable under d and {,} near the truncation
    /// boundary, so after Buchberger completion the basis is closed under
    /// the derivation and under brackets with single generator letters
    /// (whenever the results stay inside the window), and re-completed,
    /// to a fixpoint. Every added element lies in the untruncated
    /// relation ideal, so reductions only identify elements that really
    /// are congruent.
    fn complete(&mut self) {
        let dim = self.table.dim;
        let mut basis: Vec<PoissonElem<NovMono>> = Vec::new();
        for a in 0..dim {
            for b in 0..dim {
                for k in 0..self.order_bound {
                    let r = Self::reduce_against(
                        &basis,
                        self.relation(a, b, k),
                        Division::FirstDivisor,
                    );
                    if !r.is_zero() {
                        basis.push(make_monic(&r));
                    }
                }
            }
        }
        let mut truncated = 0usize;
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for i in 0..basis.len() {
            for j in 0..i {
                pairs.push((j, i));
            }
        }
        self.buchberger(&mut basis, &mut pairs, &mut truncated);
        let mut letters = Vec::new();
        for g in 0..dim {
            for n in 0..=self.order_bound {
                letters.push((g, n));
            }
        }
        // Saturation: each element is processed once; completion may append
        // further elements, which are then processed in turn.
        let mut next = 0usize;
        while next < basis.len() {
            let upto = basis.len();
            let mut fresh = Vec::new();
            for g in &basis[next..upto] {
                if let Some(dg) = self.derive_within(g) {
                    let r = Self::reduce_against(&basis, dg, Division::FirstDivisor);
                    if !r.is_zero() {
                        fresh.push(make_monic(&r));
                    }
                }
                for &l in &letters {
                    if let Some(bg) = self.letter_bracket_within(l, g) {
                        let r = Self::reduce_against(&basis, bg, Division::FirstDivisor);
                        if !r.is_zero() {
                            fresh.push(make_monic(&r));
                        }
                    }
                }
            }
            next = upto;
            for f in fresh {
                let r = Self::reduce_against(&basis, f, Division::FirstDivisor);
                if r.is_zero() {
                    continue;
                }
                for t in 0..basis.len() {
                    pairs.push((t, basis.len()));
                }
                basis.push(make_monic(&r));
            }
            self.buchberger(&mut basis, &mut pairs, &mut truncated);
        }
        self.unstable = basis.iter().map(|g| self.derive_within(g).is_none()).collect();
        self.basis = basis;
        self.truncated_pairs = truncated;
    }

    fn reduce_with(&self, m: &NovMono, division: Division) -> PResult<(PoissonElem<NovMono>, bool)> {
        self.check_bounds(m)?;
        if division == Division::FirstDivisor {
            if let Some(hit) = self.cache.borrow().get(m) {
                return Ok(hit.clone());
            }
        }
        let result = Self::reduce_traced(
            &self.basis,
            &self.unstable,
            PoissonElem::basis(m.clone()),
            division,
        );
        if division == Division::FirstDivisor {
            self.cache.borrow_mut().insert(m.clone(), result.clone());
        }
        Ok(result)
    }

    pub fn reduce(&self, m: &NovMono) -> PResult<PoissonElem<NovMono>> {
        Ok(self.reduce_with(m, Division::FirstDivisor)?.0)
    }

    /// Reduction that refuses (as overflow) equalities passing through a
    /// basis element whose derivative leaves the window: the result would
    /// be a correct representative, but the derivation-sensitive callers
    /// could no longer trust identities about it.
    fn reduce_guarded(&self, m: &NovMono) -> PResult<PoissonElem<NovMono>> {
        let (r, flagged) = self.reduce_with(m, Division::FirstDivisor)?;
        if flagged {
            return Err(PoissonError::Overflow(format!(
                "reduction of {m} uses a relation whose derivative leaves the window \
                 (order bound {})",
                self.order_bound
            )));
        }
        Ok(r)
    }

    fn reduce_elem_guarded(&self, e: &PoissonElem<NovMono>) -> PResult<PoissonElem<NovMono>> {
        let mut out = PoissonElem::zero();
        for (id, c) in e.iter() {
            out = out.add(&self.reduce_guarded(id)?.scale(c));
        }
        Ok(out)
    }

    /// Term-by-term reduction without the stability guard; the result is a
    /// correct representative regardless of which relations were used.
    pub fn reduce_elem(&self, e: &PoissonElem<NovMono>) -> PResult<PoissonElem<NovMono>> {
        let mut out = PoissonElem::zero();
        for (id, c) in e.iter() {
            out = out.add(&self.reduce(id)?.scale(c));
        }
        Ok(out)
    }

    /// True when no leading monomial of the completed basis divides m.
    fn is_normal(&self, m: &NovMono) -> bool {
        !self
            .basis
            .iter()
            .any(|g| leading(g).map(|(lt, _)| m.divided_by(lt).is_some()).unwrap_or(false))
    }

    /// The completed basis, rendered (diagnostics and reporting).
    pub fn basis_rendered(&self) -> Vec<String> {
        self.basis.iter().map(super::render_pelem).collect()
    }

    /// Bracket on raw monomials by generator formula + Leibniz, without
    /// reduction. Used by the public bracket (which reduces afterwards)
    /// and by the well-definedness check.
    pub fn bracket_raw(&self, a: &NovMono, b: &NovMono) -> PoissonElem<NovMono> {
        let mut out = PoissonElem::zero();
        for (pa, &(ga, na)) in a.0.iter().enumerate() {
            let mut rest_a = a.0.clone();
            rest_a.remove(pa);
            for (pb, &(gb, nb)) in b.0.iter().enumerate() {
                let mut rest_b = b.0.clone();
                rest_b.remove(pb);
                let rest: Vec<(usize, u32)> = {
                    let mut v = rest_a.clone();
                    v.extend_from_slice(&rest_b);
                    v.sort_unstable();
                    v
                };
                // {a^(n), b^(m)} = (m-1) a^(n+1) b^(m) - (n-1) a^(n) b^(m+1)
                let m_coeff = rat(nb as i64 - 1);
                let n_coeff = rat(na as i64 - 1);
                let t1 = NovMono::merged(&[(ga, na + 1), (gb, nb)], &rest);
                let t2 = NovMono::merged(&[(ga, na), (gb, nb + 1)], &rest);
                out.add_term(t1, m_coeff);
                out.add_term(t2, -n_coeff);
            }
        }
        out
    }

    /// Two-division agreement on all low-degree monomials. With a completed
    /// basis the division strategy cannot matter; a mismatch reveals an
    /// incomplete basis (possible when the completion cap truncated pairs).
    fn confluence_probe(&self) -> PResult<()> {
        let k = self.order_bound.min(3);
        let d = self.degree_bound.min(3);
        for m in self.monomials_within(k, d) {
            let canon = self.reduce_with(&m, Division::FirstDivisor)?.0;
            let alt = self.reduce_with(&m, Division::LastDivisor)?.0;
            if canon != alt {
                return Err(PoissonError::NonConfluent(format!(
                    "monomial {m}: first-divisor {} vs last-divisor {}",
                    super::render_pelem(&canon),
                    super::render_pelem(&alt)
                )));
            }
        }
        Ok(())
    }

    /// All monomials (normal or not) within the given bounds.
    fn monomials_within(&self, order_bound: u32, degree_bound: u32) -> Vec<NovMono> {
        let gens = self.table.dim;
        let mut letters = Vec::new();
        for g in 0..gens {
            for n in 0..=order_bound {
                letters.push((g, n));
            }
        }
        let mut out = vec![Vec::new()];
        let mut layer: Vec<Vec<(usize, u32)>> = vec![Vec::new()];
        for _ in 0..degree_bound {
            let mut next = Vec::new();
            for m in &layer {
                for &l in &letters {
                    if m.last().map(|&x| x <= l).unwrap_or(true) {
                        let mut v = m.clone();
                        v.push(l);
                        next.push(v);
                    }
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out.into_iter().map(NovMono).collect()
    }
}

impl DiffPoisson for NovikovUniversal {
    type Id = NovMono;

    fn unit_id(&self) -> NovMono {
        NovMono(Vec::new())
    }

    fn product_ids(&self, a: &NovMono, b: &NovMono) -> PResult<PoissonElem<NovMono>> {
        self.reduce_guarded(&NovMono::merged(&a.0, &b.0))
    }

    fn merge_ids(&self, a: &NovMono, b: &NovMono) -> Option<NovMono> {
        Some(NovMono::merged(&a.0, &b.0))
    }

    fn bracket_ids(&self, a: &NovMono, b: &NovMono) -> PResult<PoissonElem<NovMono>> {
        // The bracket raises total derivative weight by one; it is only
        // well-defined modulo the truncated ideal when the derivatives of
        // all the relation certificates involved are still inside the
        // truncation, i.e. when the result's weight budget stays within
        // the order bound.
        let w = a.weight() + b.weight() + 1;
        if w > self.order_bound {
            return Err(PoissonError::Overflow(format!(
                "bracket {{{a}, {b}}} has derivative weight {w}, beyond order bound {}",
                self.order_bound
            )));
        }
        self.reduce_elem_guarded(&self.bracket_raw(a, b))
    }

    fn derive_id(&self, a: &NovMono) -> PResult<PoissonElem<NovMono>> {
        // Same soundness condition as the bracket: d of a weight-w class
        // requires the order-(w+1) relations to stay a derivation.
        let w = a.weight() + 1;
        if w > self.order_bound {
            return Err(PoissonError::Overflow(format!(
                "derivative of {a} has weight {w}, beyond order bound {}",
                self.order_bound
            )));
        }
        let mut out = PoissonElem::zero();
        for (p, &(g, n)) in a.0.iter().enumerate() {
            let mut v = a.0.clone();
            v[p] = (g, n + 1);
            v.sort_unstable();
            out = out.add(&self.reduce_guarded(&NovMono(v))?);
        }
        Ok(out)
    }

    fn degree(&self, id: &NovMono) -> u32 {
        id.0.len() as u32
    }

    fn split_factor(&self, id: &NovMono) -> Option<(NovMono, NovMono)> {
        if id.0.len() >= 2 {
            Some((NovMono(vec![id.0[0]]), NovMono(id.0[1..].to_vec())))
        } else {
            None
        }
    }

    fn enumerate_basis(&self, order_bound: u32, degree_bound: u32) -> Vec<NovMono> {
        let order_bound = order_bound.min(self.order_bound);
        let degree_bound = degree_bound.min(self.degree_bound);
        let mut out: Vec<NovMono> = self
            .monomials_within(order_bound, degree_bound)
            .into_iter()
            .filter(|m| self.is_normal(m))
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::novikov2_table;
    use crate::poisson::check_poisson_axioms;

    fn rank1_env(k: u32, d: u32) -> NovikovUniversal {
        let t = StructureTable::from_entries(1, &[(0, 0, 0, rat(1))]);
        novikov_universal(t, k, d).unwrap()
    }

    #[test]
    fn defining_relation() {
        // v · d(v) = v (the relation a∘b = a·d(b))
        let env = rank1_env(3, 3);
        let v = PoissonElem::basis(NovMono(vec![(0, 0)]));
        let dv = env.derive(&v).unwrap();
        let r = env.product(&v, &dv).unwrap();
        assert_eq!(r, v);
    }

    #[test]
    fn hidden_consequence_is_found() {
        // v′(1 − v′)² lies in the relation ideal for v∘v = v; the naive
        // oriented rules miss it, the completed basis must reduce it to 0
        let env = rank1_env(3, 3);
        let v1 = NovMono(vec![(0, 1)]);
        let v11 = NovMono(vec![(0, 1), (0, 1)]);
        let v111 = NovMono(vec![(0, 1), (0, 1), (0, 1)]);
        let mut f = PoissonElem::zero();
        f.add_term(v1, rat(1));
        f.add_term(v11, rat(-2));
        f.add_term(v111, rat(1));
        assert!(env.reduce_elem(&f).unwrap().is_zero());
    }

    #[test]
    fn bracket_antisymmetry_on_equal_orders() {
        let env = rank1_env(3, 3);
        let r = env
            .bracket_ids(&NovMono(vec![(0, 1)]), &NovMono(vec![(0, 1)]))
            .unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn bracket_formula_raw() {
        // {v, v^(2)} = (2-1) v^(1) v^(2) - (0-1) v v^(3) = v^(1)v^(2) + v·v^(3)
        let env = rank1_env(4, 3);
        let raw = env.bracket_raw(&NovMono(vec![(0, 0)]), &NovMono(vec![(0, 2)]));
        let mut expect = PoissonElem::zero();
        expect.add_term(NovMono(vec![(0, 1), (0, 2)]), rat(1));
        expect.add_term(NovMono(vec![(0, 0), (0, 3)]), rat(1));
        assert_eq!(raw, expect);
    }

    #[test]
    fn bracket_well_defined_on_normal_forms() {
        // reducing before or after the bracket formula agrees
        let env = rank1_env(4, 5);
        let raw_monos = [
            NovMono(vec![(0, 0), (0, 1)]),
            NovMono(vec![(0, 0), (0, 2)]),
            NovMono(vec![(0, 0), (0, 1), (0, 1)]),
        ];
        for a in &raw_monos {
            for b in &raw_monos {
                let after = env.reduce_elem(&env.bracket_raw(a, b)).unwrap();
                let ra = env.reduce(a).unwrap();
                let rb = env.reduce(b).unwrap();
                let mut before = PoissonElem::zero();
                for (ia, ca) in ra.iter() {
                    for (ib, cb) in rb.iter() {
                        before = before
                            .add(&env.reduce_elem(&env.bracket_raw(ia, ib)).unwrap().scale(&(ca * cb)));
                    }
                }
                assert_eq!(after, before, "bracket not well-defined on {a} , {b}");
            }
        }
    }

    #[test]
    fn axioms_within_bounds() {
        let env = rank1_env(3, 3);
        assert_eq!(
            check_poisson_axioms(&env, 2, 2).unwrap(),
            crate::finite::CheckReport::Ok
        );
    }

    #[test]
    fn two_dim_novikov_envelope() {
        let env = novikov_universal(novikov2_table(), 3, 3).unwrap();
        assert_eq!(
            check_poisson_axioms(&env, 1, 2).unwrap(),
            crate::finite::CheckReport::Ok
        );
    }

    #[test]
    fn overflow_is_loud() {
        let env = rank1_env(2, 2);
        // derive v^(2) -> v^(3): order bound exceeded
        let r = env.derive_id(&NovMono(vec![(0, 2)]));
        assert!(matches!(r, Err(PoissonError::Overflow(_))));
    }
}
