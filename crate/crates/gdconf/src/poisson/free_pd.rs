//! Free differential Poisson algebra on one generator v, as the symmetric
//! algebra over the free Lie algebra on the letters v, v', v'', ..., plus
//! an exact membership oracle for the differential Poisson ideal I
//! generated by v·v'.
//!
//! The ideal is bigraded by (weight, total derivative order): both the
//! product and the bracket add weights and orders, and d raises the order
//! by one. Each homogeneous component I ∩ (w, o) is therefore spanned by
//!
//!   d^(o−1)(v·v')                                  (w = 2),
//!   v⁽ⁿ⁾ · (I ∩ (w − 1, o − n))     for n ≤ o,
//!   {v⁽ⁿ⁾, I ∩ (w − 1, o − n)}      for n ≤ o,
//!
//! a recursion strictly decreasing in weight. The letter closure suffices:
//! brackets with heavier Lie monomials reduce to letter brackets by the
//! Jacobi identity, products with a bracket factor by the Leibniz rule
//! ([a,b]·f = {a, b·f} − b·{a,f}), and d-closure by d(v⁽ⁿ⁾·r) =
//! v⁽ⁿ⁺¹⁾·r + v⁽ⁿ⁾·dr. Each component is echelonized once and memoized;
//! membership of an element is decided component by component by exact
//! elimination over ℚ.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;

use super::lyndon::{enumerate_lyndon, FreeLie, LieElem, LyndonWord};
use super::{DiffPoisson, PResult, PoissonElem, PoissonError};
use crate::rational::Rat;

/// Commutative monomial: sorted multiset of Lyndon-word Lie factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PdMono(pub Vec<LyndonWord>);

impl PdMono {
    pub fn unit() -> PdMono {
        PdMono(Vec::new())
    }

    pub fn letter(n: u32) -> PdMono {
        PdMono(vec![LyndonWord::letter(n)])
    }

    /// Total number of letters across the factors.
    pub fn weight(&self) -> u32 {
        self.0.iter().map(|f| f.weight()).sum()
    }

    /// Total derivative order across the factors.
    pub fn order(&self) -> u32 {
        self.0.iter().map(|f| f.order()).sum()
    }

    fn merged(a: &[LyndonWord], b: &[LyndonWord]) -> PdMono {
        let mut v: Vec<LyndonWord> = a.iter().chain(b).cloned().collect();
        v.sort();
        PdMono(v)
    }
}

impl PartialOrd for PdMono {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PdMono {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.0.len().cmp(&other.0.len()))
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for PdMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|w| w.to_string()).collect();
        write!(f, "{}", parts.join("·"))
    }
}

/// How far beyond the stated bounds a single operation may reach before it
/// errors out. The kernel certificate applies a three-letter operator word
/// (at most three brackets/derivatives and three multiplications by v), so
/// each action stays inside a margin of three.
const ORDER_HEADROOM: u32 = 3;
const DEGREE_HEADROOM: u32 = 3;

/// Stack-allocated exact rational for the elimination arithmetic. The
/// coefficients arising in the ideal slices stay far below 128 bits (the
/// observed maximum is under 20), so `i128` with *checked* operations is
/// exact: any overflow surfaces as a loud [`PoissonError::Overflow`]
/// instead of a wrong answer. Invariants: `d > 0`, `gcd(|n|, d) = 1`.
#[derive(Clone, Copy, PartialEq, Eq)]
struct Q {
    n: i128,
    d: i128,
}

fn igcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn coeff_overflow() -> PoissonError {
    PoissonError::Overflow(
        "exact coefficient exceeded the 128-bit window during ideal elimination".into(),
    )
}

impl Q {
    const ZERO: Q = Q { n: 0, d: 1 };

    fn norm(n: i128, d: i128) -> Q {
        if n == 0 {
            return Q::ZERO;
        }
        let g = igcd(n, d) * d.signum();
        Q { n: n / g, d: d / g }
    }

    fn is_zero(self) -> bool {
        self.n == 0
    }

    fn from_rat(r: &Rat) -> PResult<Q> {
        let n = i128::try_from(r.numer()).map_err(|_| coeff_overflow())?;
        let d = i128::try_from(r.denom()).map_err(|_| coeff_overflow())?;
        Ok(Q::norm(n, d))
    }

    fn to_rat(self) -> Rat {
        Rat::new(self.n.into(), self.d.into())
    }

    fn neg(self) -> Q {
        Q { n: -self.n, d: self.d }
    }

    /// Reciprocal of a nonzero value.
    fn inv(self) -> Q {
        Q {
            n: self.d * self.n.signum(),
            d: self.n.abs(),
        }
    }

    fn mul(self, o: Q) -> PResult<Q> {
        // cross-reduce first so the intermediates stay as small as possible
        let g1 = igcd(self.n, o.d).max(1);
        let g2 = igcd(o.n, self.d).max(1);
        let n = (self.n / g1).checked_mul(o.n / g2).ok_or_else(coeff_overflow)?;
        let d = (self.d / g2).checked_mul(o.d / g1).ok_or_else(coeff_overflow)?;
        Ok(Q { n, d })
    }

    fn add(self, o: Q) -> PResult<Q> {
        if self.n == 0 {
            return Ok(o);
        }
        if o.n == 0 {
            return Ok(self);
        }
        let g = igcd(self.d, o.d);
        let n = self
            .n
            .checked_mul(o.d / g)
            .and_then(|x| o.n.checked_mul(self.d / g).and_then(|y| x.checked_add(y)))
            .ok_or_else(coeff_overflow)?;
        let d = (self.d / g).checked_mul(o.d).ok_or_else(coeff_overflow)?;
        Ok(Q::norm(n, d))
    }

    fn sub(self, o: Q) -> PResult<Q> {
        self.add(o.neg())
    }
}

/// Sparse row over interned monomial indices, ascending; the last entry is
/// the leading term. Interning keeps the elimination arithmetic on `u32`
/// keys instead of deep Lyndon-word comparisons.
type Row = Vec<(u32, Q)>;

/// One echelonized ideal slice I ∩ (w, o): the interned monomial universe
/// (every monomial that occurs in a spanning candidate) and the reduced
/// echelon rows keyed by pivot index. Rows are kept fully inter-reduced —
/// every tail lives on the (small) set of non-pivot columns — which keeps
/// rows, reductions, and the candidates derived from them short.
struct Component {
    universe: Vec<PdMono>,
    index: BTreeMap<PdMono, u32>,
    rows: BTreeMap<u32, Row>,
    /// For each non-pivot column, the pivots of the rows whose tail uses it.
    col_users: BTreeMap<u32, std::collections::BTreeSet<u32>>,
}

pub struct FreePd {
    pub order_bound: u32,
    pub degree_bound: u32,
    lie: FreeLie,
    ideal_cache: RefCell<BTreeMap<(u32, u32), Rc<Component>>>,
}

/// The free differential Poisson algebra on v, presented so that its
/// quotient by the ideal (v·v') models the rank-one abelian construction.
pub fn free_pd_quotient_rank1(order_bound: u32, degree_bound: u32) -> PResult<FreePd> {
    if order_bound < 2 || degree_bound < 2 {
        return Err(PoissonError::Overflow(format!(
            "bounds ({order_bound}, {degree_bound}) below the minimum (2, 2)"
        )));
    }
    Ok(FreePd {
        order_bound,
        degree_bound,
        lie: FreeLie::new(),
        ideal_cache: RefCell::new(BTreeMap::new()),
    })
}

impl FreePd {
    fn order_cap(&self) -> u32 {
        self.order_bound + ORDER_HEADROOM
    }

    fn degree_cap(&self) -> u32 {
        self.degree_bound + DEGREE_HEADROOM
    }

    fn check_window(&self, weight: u32, order: u32, what: &str) -> PResult<()> {
        if order > self.order_cap() || weight > self.degree_cap() {
            return Err(PoissonError::Overflow(format!(
                "{what} reaches (weight {weight}, order {order}) beyond caps (weight {}, order {})",
                self.degree_cap(),
                self.order_cap()
            )));
        }
        Ok(())
    }

    /// The generator derivative v⁽ⁿ⁾ as an element.
    pub fn v_gen(n: u32) -> PoissonElem<PdMono> {
        PoissonElem::basis(PdMono::letter(n))
    }

    fn from_lie(e: &LieElem, rest: &PdMono) -> PoissonElem<PdMono> {
        let mut out = PoissonElem::zero();
        for (w, c) in e {
            out.add_term(PdMono::merged(std::slice::from_ref(w), &rest.0), c.clone());
        }
        out
    }

    /// The echelonized spanning rows of I ∩ (weight w, order o), keyed by
    /// leading monomial.
    fn ideal_component(&self, w: u32, o: u32) -> PResult<Rc<Component>> {
        if w < 2 || (w == 2 && o == 0) {
            return Ok(Rc::new(Component::empty()));
        }
        self.check_window(w, o, "ideal component")?;
        if let Some(hit) = self.ideal_cache.borrow().get(&(w, o)) {
            return Ok(hit.clone());
        }
        let mut candidates: Vec<PoissonElem<PdMono>> = Vec::new();
        if w == 2 {
            // d^(o−1)(v·v')
            let mut e = self.product(&Self::v_gen(0), &Self::v_gen(1))?;
            for _ in 1..o {
                e = self.derive(&e)?;
            }
            candidates.push(e);
        } else {
            for n in 0..=o {
                let sub = self.ideal_component(w - 1, o - n)?;
                let letter = Self::v_gen(n);
                for r in sub.elems() {
                    candidates.push(self.product(&letter, &r)?);
                    candidates.push(self.bracket(&letter, &r)?);
                }
            }
        }
        let comp = Rc::new(Component::echelonize(candidates)?);
        self.ideal_cache.borrow_mut().insert((w, o), comp.clone());
        Ok(comp)
    }

    /// Number of echelon rows in I ∩ (w, o); forces the component to be
    /// computed and cached.
    pub fn ideal_component_probe(&self, w: u32, o: u32) -> PResult<usize> {
        Ok(self.ideal_component(w, o)?.rows.len())
    }

    /// Exact membership of `e` in the differential Poisson ideal (v·v').
    pub fn in_ideal(&self, e: &PoissonElem<PdMono>) -> PResult<bool> {
        // split into bihomogeneous components
        let mut comps: BTreeMap<(u32, u32), PoissonElem<PdMono>> = BTreeMap::new();
        for (m, c) in e.iter() {
            comps
                .entry((m.weight(), m.order()))
                .or_insert_with(PoissonElem::zero)
                .add_term(m.clone(), c.clone());
        }
        for ((w, o), part) in comps {
            let comp = self.ideal_component(w, o)?;
            if !comp.contains(&part)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl Component {
    fn empty() -> Component {
        Component {
            universe: Vec::new(),
            index: BTreeMap::new(),
            rows: BTreeMap::new(),
            col_users: BTreeMap::new(),
        }
    }

    /// Intern the candidate supports and bring them to reduced echelon form
    /// by exact elimination over ℚ on the interned indices.
    fn echelonize(candidates: Vec<PoissonElem<PdMono>>) -> PResult<Component> {
        let mut index: BTreeMap<PdMono, u32> = BTreeMap::new();
        for c in &candidates {
            for (m, _) in c.iter() {
                index.entry(m.clone()).or_default();
            }
        }
        // index in the monomial order used for leading terms
        let mut universe: Vec<PdMono> = index.keys().cloned().collect();
        universe.sort();
        for (i, m) in universe.iter().enumerate() {
            *index.get_mut(m).expect("interned") = i as u32;
        }
        let mut comp = Component {
            universe,
            index,
            rows: BTreeMap::new(),
            col_users: BTreeMap::new(),
        };
        for c in candidates {
            let row: Row = c
                .iter()
                .map(|(m, v)| Ok((comp.index[m], Q::from_rat(v)?)))
                .collect::<PResult<_>>()?;
            comp.insert(row)?;
        }
        Ok(comp)
    }

    /// Fully reduce: eliminate every pivot term; what remains is supported
    /// on non-pivot columns only. The working element is a dense scratch
    /// vector with a lazy max-heap of touched columns — the hot loop of the
    /// whole oracle.
    fn reduce_full(&self, start: Row) -> PResult<BTreeMap<u32, Q>> {
        let mut scratch: Vec<Q> = vec![Q::ZERO; self.universe.len()];
        let mut heap: std::collections::BinaryHeap<u32> = std::collections::BinaryHeap::new();
        for (i, c) in start {
            if scratch[i as usize].is_zero() {
                heap.push(i);
            }
            scratch[i as usize] = scratch[i as usize].add(c)?;
        }
        let mut out: BTreeMap<u32, Q> = BTreeMap::new();
        while let Some(i) = heap.pop() {
            let c = std::mem::replace(&mut scratch[i as usize], Q::ZERO);
            if c.is_zero() {
                continue; // duplicate heap entry or cancelled column
            }
            match self.rows.get(&i) {
                None => {
                    // non-pivot columns can be re-added by later pivot
                    // eliminations, so accumulate
                    let s = match out.get(&i) {
                        Some(old) => old.add(c)?,
                        None => c,
                    };
                    if s.is_zero() {
                        out.remove(&i);
                    } else {
                        out.insert(i, s);
                    }
                }
                Some(row) => {
                    for &(j, v) in row {
                        if j == i {
                            continue;
                        }
                        let cell = &mut scratch[j as usize];
                        if cell.is_zero() {
                            heap.push(j);
                        }
                        *cell = cell.sub(c.mul(v)?)?;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Reduce a candidate and, if independent, adopt its leading column as
    /// a new pivot, eliminating that column from every existing tail.
    fn insert(&mut self, row: Row) -> PResult<()> {
        let red = self.reduce_full(row)?;
        let Some((&lead, &lc)) = red.last_key_value() else {
            return Ok(());
        };
        let inv = lc.inv();
        let newrow: Row = red
            .iter()
            .map(|(&j, &v)| Ok((j, v.mul(inv)?)))
            .collect::<PResult<_>>()?;
        for &h in &self.col_users.remove(&lead).unwrap_or_default() {
            // user entries are not pruned when a tail column cancels, so a
            // listed row may no longer hold the column
            let Some(old) = self.rows.get(&h) else { continue };
            let Some(c) = old.iter().find(|(j, _)| *j == lead).map(|&(_, v)| v) else {
                continue;
            };
            let old = self.rows.remove(&h).expect("user row present");
            let mut merged: BTreeMap<u32, Q> = old.into_iter().collect();
            for &(j, v) in &newrow {
                let s = match merged.get(&j) {
                    Some(&oldv) => oldv.sub(c.mul(v)?)?,
                    None => c.mul(v)?.neg(),
                };
                if s.is_zero() {
                    merged.remove(&j);
                } else {
                    merged.insert(j, s);
                }
            }
            let updated: Row = merged.into_iter().collect();
            for (j, _) in &updated {
                if *j != h {
                    self.col_users.entry(*j).or_default().insert(h);
                }
            }
            // columns that cancelled: drop stale user entries lazily
            self.rows.insert(h, updated);
        }
        for (j, _) in &newrow {
            if *j != lead {
                self.col_users.entry(*j).or_default().insert(lead);
            }
        }
        self.rows.insert(lead, newrow);
        Ok(())
    }

    /// Echelon rows converted back to Poisson elements (used when building
    /// the next-weight component from this one).
    fn elems(&self) -> impl Iterator<Item = PoissonElem<PdMono>> + '_ {
        self.rows.values().map(|row| {
            let mut e = PoissonElem::zero();
            for &(i, c) in row {
                e.add_term(self.universe[i as usize].clone(), c.to_rat());
            }
            e
        })
    }

    /// Whether the bihomogeneous element reduces to zero against the rows.
    fn contains(&self, part: &PoissonElem<PdMono>) -> PResult<bool> {
        let mut row: Row = Vec::with_capacity(part.coeffs.len());
        for (m, c) in part.iter() {
            match self.index.get(m) {
                // a monomial no ideal row touches can never cancel
                None => return Ok(false),
                Some(&i) => row.push((i, Q::from_rat(c)?)),
            }
        }
        Ok(self.reduce_full(row)?.is_empty())
    }
}

impl DiffPoisson for FreePd {
    type Id = PdMono;

    fn unit_id(&self) -> PdMono {
        PdMono::unit()
    }

    fn product_ids(&self, a: &PdMono, b: &PdMono) -> PResult<PoissonElem<PdMono>> {
        self.check_window(a.weight() + b.weight(), a.order() + b.order(), "product")?;
        Ok(PoissonElem::basis(PdMono::merged(&a.0, &b.0)))
    }

    fn bracket_ids(&self, a: &PdMono, b: &PdMono) -> PResult<PoissonElem<PdMono>> {
        if a.0.is_empty() || b.0.is_empty() {
            return Ok(PoissonElem::zero());
        }
        self.check_window(a.weight() + b.weight(), a.order() + b.order(), "bracket")?;
        let mut out = PoissonElem::zero();
        for (pa, fa) in a.0.iter().enumerate() {
            let mut rest_a = a.0.clone();
            rest_a.remove(pa);
            for (pb, fb) in b.0.iter().enumerate() {
                let mut rest_b = b.0.clone();
                rest_b.remove(pb);
                let rest = PdMono::merged(&rest_a, &rest_b);
                let br = self.lie.bracket(fa, fb);
                out = out.add(&Self::from_lie(&br, &rest));
            }
        }
        Ok(out)
    }

    fn derive_id(&self, a: &PdMono) -> PResult<PoissonElem<PdMono>> {
        if a.0.is_empty() {
            return Ok(PoissonElem::zero());
        }
        self.check_window(a.weight(), a.order() + 1, "derivative")?;
        let mut out = PoissonElem::zero();
        for (p, f) in a.0.iter().enumerate() {
            let mut rest = a.0.clone();
            rest.remove(p);
            let df = self.lie.derive(f);
            out = out.add(&Self::from_lie(&df, &PdMono(rest)));
        }
        Ok(out)
    }

    fn degree(&self, id: &PdMono) -> u32 {
        id.0.len() as u32
    }

    fn split_factor(&self, id: &PdMono) -> Option<(PdMono, PdMono)> {
        if id.0.len() >= 2 {
            Some((
                PdMono(vec![id.0[0].clone()]),
                PdMono(id.0[1..].to_vec()),
            ))
        } else {
            None
        }
    }

    fn enumerate_basis(&self, order_bound: u32, degree_bound: u32) -> Vec<PdMono> {
        let letters = enumerate_lyndon(degree_bound, order_bound);
        let mut out = Vec::new();
        let mut stack: Vec<(Vec<LyndonWord>, usize, u32, u32)> = vec![(Vec::new(), 0, 0, 0)];
        while let Some((mono, from, w, o)) = stack.pop() {
            out.push(PdMono(mono.clone()));
            for (i, l) in letters.iter().enumerate().skip(from) {
                let (nw, no) = (w + l.weight(), o + l.order());
                if nw <= degree_bound && no <= order_bound {
                    let mut next = mono.clone();
                    next.push(l.clone());
                    stack.push((next, i, nw, no));
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    fn ideal_member(&self, e: &PoissonElem<PdMono>) -> Option<PResult<bool>> {
        Some(self.in_ideal(e))
    }
}

/// Certificate report for the nested-bracket relations and their
/// degree-one corollary ({v, f}·v in the ideal for every basis f).
#[derive(Debug, Clone, serde::Serialize)]
pub struct Lemma2Report {
    pub nested_checked: usize,
    pub corollary_checked: usize,
    pub failures: Vec<String>,
}

impl Lemma2Report {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

fn tuples(choices: &[u32], m: u32) -> Vec<Vec<u32>> {
    if m == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for t in tuples(choices, m - 1) {
        for &k in choices {
            let mut next = t.clone();
            next.push(k);
            out.push(next);
        }
    }
    out
}

/// Check {v, {v⁽ᵏ¹⁾, … {v⁽ᵏᵐ⁻¹⁾, v⁽ᵏᵐ⁾}…}}·v ∈ (v·v') for every nesting
/// with indices from `k_list` and depth ≤ `m_bound`, and {v, f}·v ∈ (v·v')
/// for every basis monomial f within the algebra's bounds.
pub fn lemma2_certificate(p: &FreePd, k_list: &[u32], m_bound: u32) -> PResult<Lemma2Report> {
    let mut report = Lemma2Report {
        nested_checked: 0,
        corollary_checked: 0,
        failures: Vec::new(),
    };
    let v = FreePd::v_gen(0);
    for m in 1..=m_bound {
        for t in tuples(k_list, m) {
            let mut inner = FreePd::v_gen(t[t.len() - 1]);
            for &k in t[..t.len() - 1].iter().rev() {
                inner = p.bracket(&FreePd::v_gen(k), &inner)?;
            }
            let elem = p.product(&p.bracket(&v, &inner)?, &v)?;
            if p.in_ideal(&elem)? {
                report.nested_checked += 1;
            } else {
                report
                    .failures
                    .push(format!("nesting {t:?}: {}", super::render_pelem(&elem)));
            }
        }
    }
    for f in p.enumerate_basis(p.order_bound, p.degree_bound) {
        let elem = p.product(&p.bracket(&v, &PoissonElem::basis(f.clone()))?, &v)?;
        if p.in_ideal(&elem)? {
            report.corollary_checked += 1;
        } else {
            report
                .failures
                .push(format!("basis {f}: {}", super::render_pelem(&elem)));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poisson::check_poisson_axioms;

    fn small() -> FreePd {
        free_pd_quotient_rank1(4, 4).unwrap()
    }

    #[test]
    fn generator_relation_in_ideal() {
        let p = small();
        let vv1 = p.product(&FreePd::v_gen(0), &FreePd::v_gen(1)).unwrap();
        assert!(p.in_ideal(&vv1).unwrap());
    }

    #[test]
    fn generator_not_in_ideal() {
        let p = small();
        assert!(!p.in_ideal(&FreePd::v_gen(0)).unwrap());
        // nor is v·v'' (not a derivative consequence of v·v')
        let vv2 = p.product(&FreePd::v_gen(0), &FreePd::v_gen(2)).unwrap();
        assert!(!p.in_ideal(&vv2).unwrap());
    }

    #[test]
    fn derivative_consequences_in_ideal() {
        // d(v·v') = v'·v' + v·v''  must be in the differential ideal
        let p = small();
        let vv1 = p.product(&FreePd::v_gen(0), &FreePd::v_gen(1)).unwrap();
        let d = p.derive(&vv1).unwrap();
        assert!(p.in_ideal(&d).unwrap());
    }

    #[test]
    fn bracket_closure_in_ideal() {
        // {v'', v·v'} lies in the Poisson ideal
        let p = small();
        let vv1 = p.product(&FreePd::v_gen(0), &FreePd::v_gen(1)).unwrap();
        let b = p.bracket(&FreePd::v_gen(2), &vv1).unwrap();
        assert!(p.in_ideal(&b).unwrap());
    }

    #[test]
    fn nested_bracket_relation() {
        // {v, v'''}·v ∈ (v·v') — the depth-one nested relation
        let p = free_pd_quotient_rank1(5, 4).unwrap();
        let b = p.bracket(&FreePd::v_gen(0), &FreePd::v_gen(3)).unwrap();
        let e = p.product(&b, &FreePd::v_gen(0)).unwrap();
        assert!(p.in_ideal(&e).unwrap());
    }

    #[test]
    fn axioms_small_window() {
        let p = small();
        assert!(check_poisson_axioms(&p, 2, 3).unwrap().is_ok());
    }

    #[test]
    fn lemma2_small() {
        let p = free_pd_quotient_rank1(4, 3).unwrap();
        let rep = lemma2_certificate(&p, &[0, 1, 2], 2).unwrap();
        assert!(rep.is_ok(), "failures: {:?}", rep.failures);
        assert!(rep.nested_checked > 0);
        assert!(rep.corollary_checked > 0);
    }

    #[test]
    fn overflow_is_loud() {
        let p = small();
        let high = PdMono::letter(20);
        assert!(matches!(
            p.derive_id(&high),
            Err(PoissonError::Overflow(_))
        ));
        assert!(free_pd_quotient_rank1(1, 1).is_err());
    }

    #[test]
    fn basis_enumeration_counts() {
        // weight ≤ 2, order ≤ 1: 1, v, v', v·v, v·v', [v,v'] — six monomials
        let p = small();
        let b = p.enumerate_basis(1, 2);
        assert_eq!(b.len(), 6);
        assert_eq!(b[0], PdMono::unit());
    }
}
