//! Finitary conformal endomorphisms of H ⊗ P as normal-form words in the
//! letters Ad(a), L(b), D with polynomial coefficients in T and x.
//!
//! Normal form: all Ad letters first (subscripts are degree-one basis
//! monomials, sorted non-decreasing), then at most one L letter (products
//! merged), then a block of D letters. The rewrite rules are
//!
//!   Ad(unit)       → 0
//!   Ad(a·b)        → Ad(a)·L(b) + Ad(b)·L(a)
//!   Ad(a)·Ad(b)    → Ad(b)·Ad(a) + Ad({a,b})      (when out of order)
//!   L(a)·L(b)      → L(a·b),  L(unit) → id
//!   L(b)·Ad(a)     → Ad(a)·L(b) − L({a,b})
//!   D·Ad(a)        → Ad(a′) + Ad(a)·D
//!   D·L(b)         → L(b′) + L(b)·D
//!
//! Coefficients commute with letters (the model is k[T,x] ⊗ words).
//! Normalization is implemented twice — composing letters onto a normal
//! operator from the right end of the word and from the left end — and the
//! two strategies are compared by the confluence probe.

use std::collections::BTreeMap;
use std::fmt::Display;



use crate::mpoly::{mu_var, t_var, MPoly, Var};
use crate::poisson::{DiffPoisson, PResult, PoissonElem};

/// Normal-form operator word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OpWord<Id: Ord> {
    /// Adjoint letters; subscripts are degree-one basis monomials, sorted.
    pub ads: Vec<Id>,
    /// The (single, merged) multiplication letter, if any.
    pub mul: Option<Id>,
    /// Number of trailing D letters.
    pub ders: u32,
}

impl<Id: Ord> OpWord<Id> {
    pub fn id() -> Self {
        OpWord {
            ads: Vec::new(),
            mul: None,
            ders: 0,
        }
    }

    pub fn is_id(&self) -> bool {
        self.ads.is_empty() && self.mul.is_none() && self.ders == 0
    }
}

impl<Id: Ord + Display> Display for OpWord<Id> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_id() {
            return write!(f, "id");
        }
        let mut parts: Vec<String> = self.ads.iter().map(|a| format!("Ad({a})")).collect();
        if let Some(b) = &self.mul {
            parts.push(format!("L({b})"));
        }
        for _ in 0..self.ders {
            parts.push("D".to_string());
        }
        write!(f, "{}", parts.join("·"))
    }
}

/// Finite k[T,x]-combination of normal-form words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Operator<Id: Ord> {
    pub terms: BTreeMap<OpWord<Id>, MPoly>,
}

impl<Id: Ord + Clone> Default for Operator<Id> {
    fn default() -> Self {
        Operator {
            terms: BTreeMap::new(),
        }
    }
}

impl<Id: Ord + Clone> Operator<Id> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::term(OpWord::id(), MPoly::one())
    }

    pub fn word(w: OpWord<Id>) -> Self {
        Self::term(w, MPoly::one())
    }

    pub fn term(w: OpWord<Id>, c: MPoly) -> Self {
        let mut op = Self::zero();
        op.add_term(w, c);
        op
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: OpWord<Id>, c: MPoly) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + &c;
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
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }

    /// Multiply every coefficient by a polynomial.
    pub fn scale(&self, c: &MPoly) -> Self {
        let mut out = Self::zero();
        for (w, f) in &self.terms {
            out.add_term(w.clone(), f * c);
        }
        out
    }

    /// Apply a substitution to every coefficient.
    pub fn subst_coeffs(&self, bindings: &[(Var, MPoly)]) -> Self {
        let mut out = Self::zero();
        for (w, f) in &self.terms {
            out.add_term(w.clone(), f.substitute(bindings));
        }
        out
    }

    /// Highest power of a variable appearing in any coefficient.
    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.values().map(|f| f.degree_in(v)).max().unwrap_or(0)
    }

    /// The operator-valued coefficient of v^k.
    pub fn coeff_of(&self, v: Var, k: u32) -> Self {
        let mut out = Self::zero();
        for (w, f) in &self.terms {
            out.add_term(w.clone(), f.coeff_of(v, k));
        }
        out
    }
}

/// Render an operator, e.g. "Ad(v) + (x - T)·L(v^(1)) - T·L(v)·D".
pub fn render_operator<Id: Ord + Clone + Display>(op: &Operator<Id>) -> String {
    if op.is_zero() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (w, c) in op.terms.iter().rev() {
        let word = w.to_string();
        if c.is_one() {
            parts.push(word);
            continue;
        }
        let cs = c.to_string();
        if w.is_id() {
            parts.push(if c.num_terms() == 1 {
                cs
            } else {
                format!("({cs})·id")
            });
        } else if c.num_terms() == 1 {
            if cs == "-1" {
                parts.push(format!("-{word}"));
            } else {
                parts.push(format!("{cs}·{word}"));
            }
        } else {
            parts.push(format!("({cs})·{word}"));
        }
    }
    let mut out = parts[0].clone();
    for part in &parts[1..] {
        if let Some(rest) = part.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(part);
        }
    }
    out
}

/// A raw (unnormalized) operator letter with an algebra-element subscript.
#[derive(Debug, Clone)]
pub enum RawLetter<Id: Ord> {
    Ad(PoissonElem<Id>),
    L(PoissonElem<Id>),
    D,
}

// --- left-composition primitives (letter ∘ normal word) -----------------

/// Ad(e) ∘ op for an arbitrary algebra element e.
pub fn lmul_ad<P: DiffPoisson>(
    p: &P,
    e: &PoissonElem<P::Id>,
    op: &Operator<P::Id>,
) -> PResult<Operator<P::Id>> {
    let mut out = Operator::zero();
    for (m, c) in e.iter() {
        let deg = p.degree(m);
        if deg == 0 {
            continue; // Ad(unit) = 0
        }
        if deg == 1 {
            for (w, f) in &op.terms {
                let t = lmul_ad_letter(p, m, w)?;
                out = out.add(&t.scale(&f.scale(c)));
            }
        } else {
            // Ad(f·rest) = Ad(f)·L(rest) + Ad(rest)·L(f)
            let (fac, rest) = p.split_factor(m).expect("degree ≥ 2 splits");
            let lf = lmul_l(p, &PoissonElem::basis(rest.clone()), op)?;
            let t1 = lmul_ad(p, &PoissonElem::basis(fac.clone()), &lf)?;
            let lr = lmul_l(p, &PoissonElem::basis(fac), op)?;
            let t2 = lmul_ad(p, &PoissonElem::basis(rest), &lr)?;
            out = out.add(&t1.add(&t2).scale(&MPoly::constant(c.clone())));
        }
    }
    Ok(out)
}

/// Ad(a) ∘ w for a degree-one basis monomial a.
fn lmul_ad_letter<P: DiffPoisson>(
    p: &P,
    a: &P::Id,
    w: &OpWord<P::Id>,
) -> PResult<Operator<P::Id>> {
    match w.ads.first() {
        None => {
            let mut nw = w.clone();
            nw.ads.insert(0, a.clone());
            Ok(Operator::word(nw))
        }
        Some(first) if a <= first => {
            let mut nw = w.clone();
            nw.ads.insert(0, a.clone());
            Ok(Operator::word(nw))
        }
        Some(first) => {
            // Ad(a)·Ad(b) = Ad(b)·Ad(a) + Ad({a,b}) with b = first letter
            let b = first.clone();
            let mut tail = w.clone();
            tail.ads.remove(0);
            let swapped = lmul_ad_letter(p, a, &tail)?;
            let mut out = Operator::zero();
            for (sw, f) in &swapped.terms {
                out = out.add(&lmul_ad_letter(p, &b, sw)?.scale(f));
            }
            let corr = p.bracket_ids(a, &b)?;
            out = out.add(&lmul_ad(p, &corr, &Operator::word(tail))?);
            Ok(out)
        }
    }
}

/// L(e) ∘ op for an arbitrary algebra element e.
pub fn lmul_l<P: DiffPoisson>(
    p: &P,
    e: &PoissonElem<P::Id>,
    op: &Operator<P::Id>,
) -> PResult<Operator<P::Id>> {
    let mut out = Operator::zero();
    for (m, c) in e.iter() {
        if p.degree(m) == 0 {
            // L(unit) = id
            out = out.add(&op.scale(&MPoly::constant(c.clone())));
            continue;
        }
        for (w, f) in &op.terms {
            let t = lmul_l_mono(p, m, w)?;
            out = out.add(&t.scale(&f.scale(c)));
        }
    }
    Ok(out)
}

/// L(m) ∘ w for a basis monomial m of degree ≥ 1.
fn lmul_l_mono<P: DiffPoisson>(p: &P, m: &P::Id, w: &OpWord<P::Id>) -> PResult<Operator<P::Id>> {
    match w.ads.first() {
        Some(a) => {
            // L(m)·Ad(a) = Ad(a)·L(m) − L({a,m})
            let a = a.clone();
            let mut tail = w.clone();
            tail.ads.remove(0);
            let moved = lmul_l_mono(p, m, &tail)?;
            let mut out = Operator::zero();
            for (sw, f) in &moved.terms {
                out = out.add(&lmul_ad_letter(p, &a, sw)?.scale(f));
            }
            let corr = p.bracket_ids(&a, m)?;
            out = out.sub(&lmul_l(p, &corr, &Operator::word(tail))?);
            Ok(out)
        }
        None => match &w.mul {
            Some(b) => {
                // L(m)·L(b) = L(m·b)
                let prod = p.product_ids(m, b)?;
                let mut out = Operator::zero();
                for (id, c) in prod.iter() {
                    let mut nw = w.clone();
                    nw.mul = if p.degree(id) == 0 {
                        None
                    } else {
                        Some(id.clone())
                    };
                    out.add_term(nw, MPoly::constant(c.clone()));
                }
                Ok(out)
            }
            None => {
                let mut nw = w.clone();
                nw.mul = Some(m.clone());
                Ok(Operator::word(nw))
            }
        },
    }
}

/// D ∘ op.
pub fn lmul_d<P: DiffPoisson>(p: &P, op: &Operator<P::Id>) -> PResult<Operator<P::Id>> {
    let mut out = Operator::zero();
    for (w, f) in &op.terms {
        out = out.add(&lmul_d_word(p, w)?.scale(f));
    }
    Ok(out)
}

fn lmul_d_word<P: DiffPoisson>(p: &P, w: &OpWord<P::Id>) -> PResult<Operator<P::Id>> {
    if let Some(a) = w.ads.first() {
        // D·Ad(a) = Ad(a′) + Ad(a)·D
        let a = a.clone();
        let mut tail = w.clone();
        tail.ads.remove(0);
        let da = p.derive_id(&a)?;
        let mut out = lmul_ad(p, &da, &Operator::word(tail.clone()))?;
        let moved = lmul_d_word(p, &tail)?;
        for (sw, f) in &moved.terms {
            out = out.add(&lmul_ad_letter(p, &a, sw)?.scale(f));
        }
        return Ok(out);
    }
    if let Some(b) = &w.mul {
        // D·L(b) = L(b′) + L(b)·D
        let db = p.derive_id(b)?;
        let mut shifted = w.clone();
        shifted.ders += 1;
        let mut rest = OpWord::id();
        rest.ders = w.ders;
        let mut out = lmul_l(p, &db, &Operator::word(rest))?;
        out.add_term(shifted, MPoly::one());
        return Ok(out);
    }
    let mut nw = w.clone();
    nw.ders += 1;
    Ok(Operator::word(nw))
}

// --- right-composition primitives (normal word ∘ letter) ----------------
// The same rules read in the opposite direction; used as the second
// normalization strategy for the confluence probe.

fn rmul_ad<P: DiffPoisson>(
    p: &P,
    op: &Operator<P::Id>,
    e: &PoissonElem<P::Id>,
) -> PResult<Operator<P::Id>> {
    let mut out = Operator::zero();
    for (m, c) in e.iter() {
        let deg = p.degree(m);
        if deg == 0 {
            continue;
        }
        if deg == 1 {
            for (w, f) in &op.terms {
                let t = rmul_ad_letter(p, w, m)?;
                out = out.add(&t.scale(&f.scale(c)));
            }
        } else {
            let (fac, rest) = p.split_factor(m).expect("degree ≥ 2 splits");
            let t1 = rmul_ad(p, op, &PoissonElem::basis(fac.clone()))?;
            let t1 = rmul_l(p, &t1, &PoissonElem::basis(rest.clone()))?;
            let t2 = rmul_ad(p, op, &PoissonElem::basis(rest))?;
            let t2 = rmul_l(p, &t2, &PoissonElem::basis(fac))?;
            out = out.add(&t1.add(&t2).scale(&MPoly::constant(c.clone())));
        }
    }
    Ok(out)
}

fn rmul_ad_letter<P: DiffPoisson>(
    p: &P,
    w: &OpWord<P::Id>,
    a: &P::Id,
) -> PResult<Operator<P::Id>> {
    if w.ders > 0 {
        // D·Ad(a) = Ad(a′) + Ad(a)·D, applied to the last D
        let mut u = w.clone();
        u.ders -= 1;
        let da = p.derive_id(a)?;
        let mut out = rmul_ad(p, &Operator::word(u.clone()), &da)?;
        let with_a = rmul_ad_letter(p, &u, a)?;
        for (sw, f) in &with_a.terms {
            let mut sw = sw.clone();
            sw.ders += 1;
            out.add_term(sw, f.clone());
        }
        return Ok(out);
    }
    if let Some(b) = &w.mul {
        // L(b)·Ad(a) = Ad(a)·L(b) − L({a,b})
        let b = b.clone();
        let mut u = w.clone();
        u.mul = None;
        let with_a = rmul_ad_letter(p, &u, a)?;
        let mut out = rmul_l(p, &with_a, &PoissonElem::basis(b.clone()))?;
        let corr = p.bracket_ids(a, &b)?;
        out = out.sub(&rmul_l(p, &Operator::word(u), &corr)?);
        return Ok(out);
    }
    match w.ads.last() {
        None => {
            let mut nw = w.clone();
            nw.ads.push(a.clone());
            Ok(Operator::word(nw))
        }
        Some(last) if last <= a => {
            let mut nw = w.clone();
            nw.ads.push(a.clone());
            Ok(Operator::word(nw))
        }
        Some(last) => {
            // Ad(b)·Ad(a) = Ad(a)·Ad(b) + Ad({b,a}) with b = last letter
            let b = last.clone();
            let mut u = w.clone();
            u.ads.pop();
            let with_a = rmul_ad_letter(p, &u, a)?;
            let mut out = Operator::zero();
            for (sw, f) in &with_a.terms {
                out = out.add(&rmul_ad_letter(p, sw, &b)?.scale(f));
            }
            let corr = p.bracket_ids(&b, a)?;
            out = out.add(&rmul_ad(p, &Operator::word(u), &corr)?);
            Ok(out)
        }
    }
}

fn rmul_l<P: DiffPoisson>(
    p: &P,
    op: &Operator<P::Id>,
    e: &PoissonElem<P::Id>,
) -> PResult<Operator<P::Id>> {
    let mut out = Operator::zero();
    for (m, c) in e.iter() {
        if p.degree(m) == 0 {
            out = out.add(&op.scale(&MPoly::constant(c.clone())));
            continue;
        }
        for (w, f) in &op.terms {
            let t = rmul_l_mono(p, w, m)?;
            out = out.add(&t.scale(&f.scale(c)));
        }
    }
    Ok(out)
}

fn rmul_l_mono<P: DiffPoisson>(p: &P, w: &OpWord<P::Id>, m: &P::Id) -> PResult<Operator<P::Id>> {
    if w.ders > 0 {
        // D·L(m) = L(m′) + L(m)·D
        let mut u = w.clone();
        u.ders -= 1;
        let dm = p.derive_id(m)?;
        let mut out = rmul_l(p, &Operator::word(u.clone()), &dm)?;
        let with_m = rmul_l_mono(p, &u, m)?;
        for (sw, f) in &with_m.terms {
            let mut sw = sw.clone();
            sw.ders += 1;
            out.add_term(sw, f.clone());
        }
        return Ok(out);
    }
    if let Some(b) = &w.mul {
        let prod = p.product_ids(b, m)?;
        let mut out = Operator::zero();
        for (id, c) in prod.iter() {
            let mut nw = w.clone();
            nw.mul = if p.degree(id) == 0 {
                None
            } else {
                Some(id.clone())
            };
            out.add_term(nw, MPoly::constant(c.clone()));
        }
        return Ok(out);
    }
    let mut nw = w.clone();
    nw.mul = Some(m.clone());
    Ok(Operator::word(nw))
}

fn rmul_d<Id: Ord + Clone>(op: &Operator<Id>) -> Operator<Id> {
    let mut out = Operator::zero();
    for (w, f) in &op.terms {
        let mut nw = w.clone();
        nw.ders += 1;
        out.add_term(nw, f.clone());
    }
    out
}

// --- normalization -------------------------------------------------------

/// Normalize a raw letter word by composing letters right-to-left onto the
/// identity. Subscripts are expanded linearly over the basis.
pub fn word_normalize<P: DiffPoisson>(
    p: &P,
    letters: &[RawLetter<P::Id>],
) -> PResult<Operator<P::Id>> {
    let mut op = Operator::identity();
    for l in letters.iter().rev() {
        op = match l {
            RawLetter::D => lmul_d(p, &op)?,
            RawLetter::Ad(e) => lmul_ad(p, e, &op)?,
            RawLetter::L(e) => lmul_l(p, e, &op)?,
        };
    }
    Ok(op)
}

/// Second normalization strategy: compose letters left-to-right. Agrees
/// with `word_normalize` exactly when the rewrite system is confluent on
/// the input; the property suite probes this on random words.
pub fn word_normalize_alt<P: DiffPoisson>(
    p: &P,
    letters: &[RawLetter<P::Id>],
) -> PResult<Operator<P::Id>> {
    let mut op = Operator::identity();
    for l in letters {
        op = match l {
            RawLetter::D => rmul_d(&op),
            RawLetter::Ad(e) => rmul_ad(p, &op, e)?,
            RawLetter::L(e) => rmul_l(p, &op, e)?,
        };
    }
    Ok(op)
}

/// Compose two normal-form operators (word concatenation + normalization),
/// without any coefficient substitution.
pub fn op_compose<P: DiffPoisson>(
    p: &P,
    a: &Operator<P::Id>,
    b: &Operator<P::Id>,
) -> PResult<Operator<P::Id>> {
    let mut out = Operator::zero();
    for (wa, fa) in &a.terms {
        for (wb, fb) in &b.terms {
            let mut t = Operator::word(wb.clone());
            for _ in 0..wa.ders {
                t = lmul_d(p, &t)?;
            }
            if let Some(m) = &wa.mul {
                t = lmul_l(p, &PoissonElem::basis(m.clone()), &t)?;
            }
            for ad in wa.ads.iter().rev() {
                t = lmul_ad(p, &PoissonElem::basis(ad.clone()), &t)?;
            }
            out = out.add(&t.scale(&(fa * fb)));
        }
    }
    Ok(out)
}

/// λ-product at an arbitrary polynomial value ν:
/// (A ν B) = f(−ν, x) · g(T+ν, x+ν) ⊗ (word concatenation, normalized).
pub fn op_product_at<P: DiffPoisson>(
    p: &P,
    a: &Operator<P::Id>,
    b: &Operator<P::Id>,
    nu: &MPoly,
) -> PResult<Operator<P::Id>> {
    let x = MPoly::var(Var::X);
    let t = MPoly::var(Var::T);
    let a_s = a.subst_coeffs(&[(Var::T, -nu)]);
    let b_s = b.subst_coeffs(&[(Var::T, &t + nu), (Var::X, &x + nu)]);
    op_compose(p, &a_s, &b_s)
}

/// λ-product with ν = λ.
pub fn op_lambda_product<P: DiffPoisson>(
    p: &P,
    a: &Operator<P::Id>,
    b: &Operator<P::Id>,
) -> PResult<Operator<P::Id>> {
    op_product_at(p, a, b, &MPoly::var(Var::Lambda))
}

/// The n-th conformal product: n! times the λⁿ coefficient of A λ B.
pub fn op_n_product<P: DiffPoisson>(
    p: &P,
    a: &Operator<P::Id>,
    b: &Operator<P::Id>,
    n: u32,
) -> PResult<Operator<P::Id>> {
    let prod = op_lambda_product(p, a, b)?;
    Ok(prod
        .coeff_of(Var::Lambda, n)
        .scale(&MPoly::constant(crate::rational::factorial(n))))
}

/// Locality: deg_λ(A λ B) + 1, or 0 when the product vanishes.
pub fn op_locality<P: DiffPoisson>(
    p: &P,
    a: &Operator<P::Id>,
    b: &Operator<P::Id>,
) -> PResult<u32> {
    let prod = op_lambda_product(p, a, b)?;
    if prod.is_zero() {
        return Ok(0);
    }
    Ok(prod.degree_in(Var::Lambda) + 1)
}

/// Element of the module H ⊗ P: finite map from P-basis monomials to
/// polynomials in T (and μ after an action).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleElem<Id: Ord> {
    pub terms: BTreeMap<Id, MPoly>,
}

impl<Id: Ord + Clone> Default for ModuleElem<Id> {
    fn default() -> Self {
        ModuleElem {
            terms: BTreeMap::new(),
        }
    }
}

impl<Id: Ord + Clone> ModuleElem<Id> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(id: Id) -> Self {
        Self::term(id, MPoly::one())
    }

    pub fn term(id: Id, h: MPoly) -> Self {
        let mut m = Self::zero();
        m.add_term(id, h);
        m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, id: Id, h: MPoly) {
        if h.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(id) {
            Entry::Vacant(e) => {
                e.insert(h);
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + &h;
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
        for (id, h) in &other.terms {
            out.add_term(id.clone(), h.clone());
        }
        out
    }

    /// The μ^k coefficient, as a (Poisson-element ↦ T-polynomial) map.
    pub fn coeff_of_mu(&self, k: u32) -> Self {
        let mut out = Self::zero();
        for (id, h) in &self.terms {
            out.add_term(id.clone(), h.coeff_of(Var::Mu, k));
        }
        out
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.values().map(|h| h.degree_in(v)).max().unwrap_or(0)
    }
}

/// Render a module element, e.g. "T + (1 + μ)·v".
pub fn render_module_elem<Id: Ord + Clone + Display>(m: &ModuleElem<Id>) -> String {
    if m.is_zero() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (id, h) in &m.terms {
        let mono = id.to_string();
        if mono == "1" {
            parts.push(if h.num_terms() == 1 {
                h.to_string()
            } else {
                format!("({h})")
            });
        } else if h.is_one() {
            parts.push(mono);
        } else if h.num_terms() == 1 {
            parts.push(format!("{h}·{mono}"));
        } else {
            parts.push(format!("({h})·{mono}"));
        }
    }
    parts.join(" + ")
}

/// Apply a normal-form word to an algebra element (letters right-to-left:
/// D = derive, L = multiply, Ad = bracket).
pub fn apply_word<P: DiffPoisson>(
    p: &P,
    w: &OpWord<P::Id>,
    e: &PoissonElem<P::Id>,
) -> PResult<PoissonElem<P::Id>> {
    let mut out = e.clone();
    for _ in 0..w.ders {
        out = p.derive(&out)?;
    }
    if let Some(b) = &w.mul {
        out = p.product(&PoissonElem::basis(b.clone()), &out)?;
    }
    for a in w.ads.iter().rev() {
        out = p.bracket(&PoissonElem::basis(a.clone()), &out)?;
    }
    Ok(out)
}

/// Apply a raw letter word to an algebra element, letter by letter.
pub fn apply_raw<P: DiffPoisson>(
    p: &P,
    letters: &[RawLetter<P::Id>],
    e: &PoissonElem<P::Id>,
) -> PResult<PoissonElem<P::Id>> {
    let mut out = e.clone();
    for l in letters.iter().rev() {
        out = match l {
            RawLetter::D => p.derive(&out)?,
            RawLetter::L(b) => p.product(b, &out)?,
            RawLetter::Ad(a) => p.bracket(a, &out)?,
        };
    }
    Ok(out)
}

/// Apply a normal-form operator to an algebra element, ignoring the
/// coefficient conventions (coefficients kept verbatim). Used for
/// normalization-soundness checks.
pub fn apply_operator_plain<P: DiffPoisson>(
    p: &P,
    op: &Operator<P::Id>,
    e: &PoissonElem<P::Id>,
) -> PResult<ModuleElem<P::Id>> {
    let mut out = ModuleElem::zero();
    for (w, f) in &op.terms {
        let img = apply_word(p, w, e)?;
        for (id, c) in img.iter() {
            out.add_term(id.clone(), f.scale(c));
        }
    }
    Ok(out)
}

/// The conformal action of an operator on a module element:
/// coefficients f(T, x) ↦ f(−μ, T), module polynomials h(T) ↦ h(T+μ),
/// then the letters act on the P part.
pub fn op_act<P: DiffPoisson>(
    p: &P,
    op: &Operator<P::Id>,
    m: &ModuleElem<P::Id>,
) -> PResult<ModuleElem<P::Id>> {
    let mu = mu_var();
    let t = t_var();
    let mut out = ModuleElem::zero();
    for (w, f) in &op.terms {
        let f_s = f.substitute(&[(Var::T, -&mu), (Var::X, t.clone())]);
        if f_s.is_zero() {
            continue;
        }
        for (id, h) in &m.terms {
            let h_s = h.subst(Var::T, &(&t + &mu));
            let img = apply_word(p, w, &PoissonElem::basis(id.clone()))?;
            for (pid, c) in img.iter() {
                out.add_term(pid.clone(), (&f_s * &h_s).scale(c));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::{lam_var, x_var};
    use crate::poisson::rank1::{poly_poisson_rank1, DerivationMode, Rank1Poly, VPow};

    fn kv() -> Rank1Poly {
        poly_poisson_rank1(DerivationMode::Ddv)
    }

    fn v(n: u32) -> PoissonElem<VPow> {
        PoissonElem::basis(VPow(n))
    }

    #[test]
    fn d_past_l() {
        // D·L(v) = L(v′) + L(v)·D = id + L(v)·D  over k[v], d = d/dv
        let p = kv();
        let op = word_normalize(&p, &[RawLetter::D, RawLetter::L(v(1))]).unwrap();
        let mut expect = Operator::identity();
        expect.add_term(
            OpWord {
                ads: vec![],
                mul: Some(VPow(1)),
                ders: 1,
            },
            MPoly::one(),
        );
        assert_eq!(op, expect);
    }

    #[test]
    fn l_past_ad() {
        // with zero bracket: L(b)·Ad(a) = Ad(a)·L(b)
        let p = kv();
        let op = word_normalize(&p, &[RawLetter::L(v(1)), RawLetter::Ad(v(1))]).unwrap();
        let expect = Operator::word(OpWord {
            ads: vec![VPow(1)],
            mul: Some(VPow(1)),
            ders: 0,
        });
        assert_eq!(op, expect);
    }

    #[test]
    fn ad_of_product_expands() {
        // Ad(v·v) = 2·Ad(v)·L(v)
        let p = kv();
        let op = word_normalize(&p, &[RawLetter::Ad(v(2))]).unwrap();
        let expect = Operator::term(
            OpWord {
                ads: vec![VPow(1)],
                mul: Some(VPow(1)),
                ders: 0,
            },
            MPoly::int(2),
        );
        assert_eq!(op, expect);
    }

    #[test]
    fn l_merge() {
        // L(v)·L(v) = L(v²)
        let p = kv();
        let op = word_normalize(&p, &[RawLetter::L(v(1)), RawLetter::L(v(1))]).unwrap();
        let expect = Operator::word(OpWord {
            ads: vec![],
            mul: Some(VPow(2)),
            ders: 0,
        });
        assert_eq!(op, expect);
    }

    #[test]
    fn strategies_agree() {
        let p = kv();
        let word = vec![
            RawLetter::D,
            RawLetter::L(v(2)),
            RawLetter::Ad(v(1)),
            RawLetter::D,
            RawLetter::L(v(1)),
        ];
        let a = word_normalize(&p, &word).unwrap();
        let b = word_normalize_alt(&p, &word).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn normalization_soundness() {
        let p = kv();
        let word = vec![
            RawLetter::D,
            RawLetter::L(v(2)),
            RawLetter::D,
            RawLetter::L(v(1)),
        ];
        let op = word_normalize(&p, &word).unwrap();
        for n in 0..=4 {
            let direct = apply_raw(&p, &word, &v(n)).unwrap();
            let via_op = apply_operator_plain(&p, &op, &v(n)).unwrap();
            let mut expect = ModuleElem::zero();
            for (id, c) in direct.iter() {
                expect.add_term(*id, MPoly::constant(c.clone()));
            }
            assert_eq!(via_op, expect, "mismatch on v^{n}");
        }
    }

    #[test]
    fn product_of_x_coefficients() {
        // (x·id) λ (x·id) = x(x+λ)·id
        let p = kv();
        let a = Operator::term(OpWord::<VPow>::id(), x_var());
        let prod = op_lambda_product(&p, &a, &a).unwrap();
        let expect = Operator::term(OpWord::id(), &x_var() * &(&x_var() + &lam_var()));
        assert_eq!(prod, expect);
    }

    #[test]
    fn sesquilinearity_in_first_slot() {
        // (T·A) λ B = −λ·(A λ B)
        let p = kv();
        let a = Operator::word(OpWord {
            ads: vec![],
            mul: Some(VPow(1)),
            ders: 1,
        });
        let b = Operator::term(OpWord::<VPow>::id(), x_var());
        let lhs = op_lambda_product(&p, &a.scale(&t_var()), &b).unwrap();
        let rhs = op_lambda_product(&p, &a, &b).unwrap().scale(&-&lam_var());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn identity_acts_by_shift() {
        // id acting on h(T)·u = h(T+μ)·u
        let p = kv();
        let m = ModuleElem::term(VPow(1), t_var());
        let acted = op_act(&p, &Operator::identity(), &m).unwrap();
        let expect = ModuleElem::term(VPow(1), &t_var() + &mu_var());
        assert_eq!(acted, expect);
    }

    #[test]
    fn x_acts_as_module_t() {
        // (x·id) acting on 1 → T
        let p = kv();
        let m = ModuleElem::basis(VPow(0));
        let a = Operator::term(OpWord::<VPow>::id(), x_var());
        let acted = op_act(&p, &a, &m).unwrap();
        assert_eq!(acted, ModuleElem::term(VPow(0), t_var()));
    }

    #[test]
    fn locality_of_identity() {
        let p = kv();
        let id = Operator::<VPow>::identity();
        assert_eq!(op_locality(&p, &id, &id).unwrap(), 1);
    }

    #[test]
    fn rendering() {
        let p = kv();
        let mut op = word_normalize(&p, &[RawLetter::Ad(v(1))]).unwrap();
        op.add_term(
            OpWord {
                ads: vec![],
                mul: Some(VPow(1)),
                ders: 1,
            },
            -&t_var(),
        );
        assert_eq!(render_operator(&op), "Ad(v) - T·L(v)·D");
    }
}
