//! The embedding τ of a quadratic conformal algebra into the conformal
//! endomorphisms of H ⊗ P, with the residual-zero homomorphism check, the
//! locality-3 certificate, an injectivity probe, the generated envelope,
//! and the abelian kernel witness.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::Serialize;

use crate::cend::{
    apply_operator_plain, lmul_ad, lmul_l, op_act, op_lambda_product, op_n_product,
    op_product_at, render_module_elem, render_operator, ModuleElem, OpWord, Operator,
};
use crate::conformal::{quadratic_bracket, ConfElem, ConfError};
use crate::finite::{
    abelian_gd, current_gd, minus_construction, virasoro_gd, CheckReport, GDAlgebra, GdError,
    StructureTable,
};
use crate::linalg::{solve_exact, SparseVec};
use crate::mpoly::{lam_var, t_var, x_var, MPoly, Mono, Var};
use crate::poisson::free_pd::{free_pd_quotient_rank1, FreePd, PdMono};
use crate::poisson::lie_poisson::{lie_poisson, LiePoisson, SymMono};
use crate::poisson::novikov::{novikov_universal, NovMono, NovikovEnvError, NovikovUniversal};
use crate::poisson::rank1::{poly_poisson_rank1, DerivationMode, Rank1Poly, VPow};
use crate::poisson::{check_pd_consistency, DiffPoisson, PResult, PoissonElem, PoissonError};
use crate::rational::{rat, Rat};

/// Leibniz expansion of Ad over a product monomial: Ad(z)·D^j expands to
/// Σ_y Ad(y)·L(z/y)·D^j over the degree-one letter positions y of z, with
/// every L-subscript reduced to normal form. Returned as a rational word
/// vector scaled by `c`; `None` when a subscript reduction leaves the
/// truncation window.
fn ad_expansion<P: DiffPoisson>(
    p: &P,
    z: &P::Id,
    c: &Rat,
    ders: u32,
) -> Option<SparseVec<OpWord<P::Id>>> {
    let mut letters = Vec::new();
    let mut cur = z.clone();
    while let Some((f, rest)) = p.split_factor(&cur) {
        letters.push(f);
        cur = rest;
    }
    match p.degree(&cur) {
        0 => {}
        1 => letters.push(cur),
        _ => return None,
    }
    let mut out: SparseVec<OpWord<P::Id>> = SparseVec::new();
    for i in 0..letters.len() {
        let mut rest = p.unit();
        for (k, y) in letters.iter().enumerate() {
            if k == i {
                continue;
            }
            let mut next = PoissonElem::zero();
            for (n, a) in rest.iter() {
                let prod = p.product_ids(n, y).ok()?;
                for (q, b) in prod.iter() {
                    next.add_term(q.clone(), a * b);
                }
            }
            rest = next;
        }
        for (n, a) in rest.iter() {
            let word = OpWord {
                ads: vec![letters[i].clone()],
                mul: (p.degree(n) > 0).then(|| n.clone()),
                ders,
            };
            let v = out.entry(word).or_insert_with(|| rat(0));
            *v += c * a;
        }
    }
    out.retain(|_, v| !v.is_zero());
    Some(out)
}

/// Operator words are not canonical modulo the relation ideal of a
/// quotient envelope: the Leibniz expansion of Ad over a reducible product
/// monomial and over its normal form are distinct word combinations
/// naming the same conformal endomorphism. This subtracts the exact span
/// of those expansion identities — a residual inside the span is the zero
/// endomorphism and canonicalizes to the empty operator. Residuals outside
/// the span (or over envelopes without raw monomials) pass through
/// unchanged.
fn canonicalize_residual<P: DiffPoisson>(p: &P, r: &Operator<P::Id>) -> Operator<P::Id> {
    let mut seen: BTreeSet<(P::Id, u32)> = BTreeSet::new();
    let mut cols: Vec<SparseVec<OpWord<P::Id>>> = Vec::new();
    for w in r.terms.keys() {
        let [x] = w.ads.as_slice() else { continue };
        let Some(m) = &w.mul else { continue };
        let Some(z) = p.merge_ids(x, m) else { continue };
        if !seen.insert((z.clone(), w.ders)) {
            continue;
        }
        let Ok(red) = p.product_ids(x, m) else { continue };
        if red == PoissonElem::basis(z.clone()) {
            continue;
        }
        let Some(mut gen) = ad_expansion(p, &z, &rat(1), w.ders) else {
            continue;
        };
        let mut complete = true;
        for (n, c) in red.iter() {
            match ad_expansion(p, n, &-c.clone(), w.ders) {
                Some(f) => {
                    for (word, v) in f {
                        let e = gen.entry(word).or_insert_with(|| rat(0));
                        *e += v;
                    }
                }
                None => {
                    complete = false;
                    break;
                }
            }
        }
        gen.retain(|_, v| !v.is_zero());
        if complete && !gen.is_empty() {
            cols.push(gen);
        }
    }
    if cols.is_empty() {
        return r.clone();
    }
    // slice the residual by coefficient monomial in (T, x, λ) and test each
    // slice for membership in the rational span of the identities
    let mut slices: BTreeMap<Mono, SparseVec<OpWord<P::Id>>> = BTreeMap::new();
    for (w, poly) in &r.terms {
        for (mono, c) in poly.terms() {
            let e = slices
                .entry(mono.clone())
                .or_default()
                .entry(w.clone())
                .or_insert_with(|| rat(0));
            *e += c.clone();
        }
    }
    for target in slices.values() {
        if solve_exact(&cols, target).is_none() {
            return r.clone();
        }
    }
    Operator::zero()
}

/// The D + id operator word combination.
fn d_plus_id<Id: Ord + Clone>() -> Operator<Id> {
    let mut d = OpWord::id();
    d.ders = 1;
    Operator::word(d).add(&Operator::identity())
}

/// (D + id)² = D² + 2D + id.
fn d_plus_id_sq<Id: Ord + Clone>() -> Operator<Id> {
    let mut out = Operator::identity();
    let mut d = OpWord::id();
    d.ders = 1;
    out.add_term(d, MPoly::int(2));
    let mut d2 = OpWord::id();
    d2.ders = 2;
    out.add_term(d2, MPoly::one());
    out
}

/// τ(a) = Ad(a) + (x − T)·L(a′) − T·L(a)·(D + id), for an element a of the
/// Poisson envelope.
pub fn tau<P: DiffPoisson>(p: &P, a: &PoissonElem<P::Id>) -> PResult<Operator<P::Id>> {
    let da = p.derive(a)?;
    let ad = lmul_ad(p, a, &Operator::identity())?;
    let l_da = lmul_l(p, &da, &Operator::identity())?;
    let l_a_dpid = lmul_l(p, a, &d_plus_id())?;
    Ok(ad
        .add(&l_da.scale(&(&x_var() - &t_var())))
        .add(&l_a_dpid.scale(&-&t_var())))
}

/// A conformal algebra L(V), its differential Poisson envelope, and the
/// operator images of the V-basis under τ.
pub struct EmbeddingContext<P: DiffPoisson> {
    pub name: String,
    pub gd: GDAlgebra,
    pub poisson: P,
    pub embed: Vec<PoissonElem<P::Id>>,
    pub tau_images: Vec<Operator<P::Id>>,
}

#[derive(Debug, thiserror::Error)]
pub enum EnvelopeError {
    #[error(transparent)]
    Poisson(#[from] PoissonError),
    #[error(transparent)]
    Gd(#[from] GdError),
    #[error(transparent)]
    Conf(#[from] ConfError),
    #[error("envelope inconsistency ({0}): {1:?}")]
    Inconsistent(String, CheckReport),
}

pub type EnvResult<T> = Result<T, EnvelopeError>;

impl<P: DiffPoisson> EmbeddingContext<P> {
    /// Build the context and verify that the envelope's P^(d) structure
    /// reproduces the GD operations on the embedded basis.
    pub fn new(
        name: &str,
        gd: GDAlgebra,
        poisson: P,
        embed: Vec<PoissonElem<P::Id>>,
    ) -> EnvResult<Self> {
        let consistency = check_pd_consistency(&poisson, &gd, &embed)?;
        if !consistency.is_ok() {
            return Err(EnvelopeError::Inconsistent(name.to_string(), consistency));
        }
        let mut tau_images = Vec::with_capacity(embed.len());
        for e in &embed {
            tau_images.push(tau(&poisson, e)?);
        }
        Ok(EmbeddingContext {
            name: name.to_string(),
            gd,
            poisson,
            embed,
            tau_images,
        })
    }

    pub fn dim(&self) -> usize {
        self.gd.dim()
    }

    /// H-linear extension of τ to a conformal element with polynomial
    /// coordinates (the H-action on operators is multiplication by T).
    pub fn tau_of(&self, w: &ConfElem) -> Operator<P::Id> {
        let mut out = Operator::zero();
        for (i, c) in w.coords.iter().enumerate() {
            out = out.add(&self.tau_images[i].scale(c));
        }
        out
    }

    /// τ(a) λ τ(b) − τ(b) at (−T−λ) of τ(a) − τ([a λ b]); must normalize
    /// to the zero operator for every basis pair.
    pub fn lemma1_residual(&self, i: usize, j: usize) -> EnvResult<Operator<P::Id>> {
        let a = &self.tau_images[i];
        let b = &self.tau_images[j];
        let p1 = op_lambda_product(&self.poisson, a, b)?;
        let minus_t_lam = -&(&t_var() + &lam_var());
        let p2 = op_product_at(&self.poisson, b, a, &minus_t_lam)?;
        let dim = self.dim();
        let br = quadratic_bracket(
            &self.gd,
            &ConfElem::basis(dim, i),
            &ConfElem::basis(dim, j),
        )?;
        let mut tb = Operator::zero();
        for (k, c) in br.coords.iter().enumerate() {
            tb = tb.add(&self.tau_images[k].scale(c));
        }
        let r = p1.sub(&p2).sub(&tb);
        if r.is_zero() {
            return Ok(r);
        }
        Ok(canonicalize_residual(&self.poisson, &r))
    }

    /// Residuals on all basis pairs. An empty operator passes outright.
    /// Formal words are not canonical modulo the relation ideal of a
    /// quotient envelope — the same class can enter once inside an Ad
    /// subscript and once already reduced — so a formally nonzero residual
    /// is certified instead by its action: it must annihilate every basis
    /// element of the truncated module on which the action stays inside
    /// the window (and at least one element must be checkable).
    pub fn residual_report(&self) -> EnvResult<CheckReport> {
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let r = self.lemma1_residual(i, j)?;
                if r.is_zero() {
                    continue;
                }
                let mut checked = 0usize;
                let mut defects = Vec::new();
                for e in self.poisson.enumerate_basis(3, 3) {
                    match apply_operator_plain(&self.poisson, &r, &PoissonElem::basis(e.clone()))
                    {
                        Err(PoissonError::Overflow(_)) => continue,
                        Err(err) => return Err(err.into()),
                        Ok(acted) => {
                            if acted.is_zero() {
                                checked += 1;
                            } else {
                                defects.push(format!(
                                    "acts on {e} as {}",
                                    render_module_elem(&acted)
                                ));
                            }
                        }
                    }
                }
                if !defects.is_empty() || checked == 0 {
                    if defects.is_empty() {
                        defects.push(format!(
                            "formally nonzero ({}) and no module basis element is \
                             checkable within the window",
                            render_operator(&r)
                        ));
                    }
                    return Ok(CheckReport::Fail {
                        axiom: "lemma1-residual".into(),
                        witness: vec![i, j],
                        defect: defects,
                    });
                }
            }
        }
        Ok(CheckReport::Ok)
    }

    /// Locality ≤ 3 with the λ² coefficient in the predicted normal form
    /// −L((a·b)′)(D+id) − L(a·b)(D+id)².
    pub fn locality_certificate(&self) -> EnvResult<LocalityReport> {
        let p = &self.poisson;
        let mut max_locality = 0;
        let mut failures = Vec::new();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let prod = op_lambda_product(p, &self.tau_images[i], &self.tau_images[j])?;
                let n = if prod.is_zero() {
                    0
                } else {
                    prod.degree_in(Var::Lambda) + 1
                };
                max_locality = max_locality.max(n);
                if n > 3 {
                    failures.push(format!("pair ({i},{j}): locality {n} > 3"));
                    continue;
                }
                let lam2 = prod.coeff_of(Var::Lambda, 2);
                let ab = p.product(&self.embed[i], &self.embed[j])?;
                let dab = p.derive(&ab)?;
                let expected = lmul_l(p, &dab, &d_plus_id())?
                    .add(&lmul_l(p, &ab, &d_plus_id_sq())?)
                    .scale(&MPoly::int(-1));
                if lam2 != expected {
                    failures.push(format!(
                        "pair ({i},{j}): λ² coefficient {} ≠ expected {}",
                        render_operator(&lam2),
                        render_operator(&expected)
                    ));
                }
            }
        }
        Ok(LocalityReport {
            max_locality,
            pairs: self.dim() * self.dim(),
            failures,
        })
    }

    /// Act with τ(w) on the unit of H ⊗ P; a nonzero result witnesses
    /// τ(w) ≠ 0.
    pub fn injectivity_probe(&self, w: &ConfElem) -> EnvResult<Option<ModuleElem<P::Id>>> {
        let op = self.tau_of(w);
        let acted = op_act(
            &self.poisson,
            &op,
            &ModuleElem::basis(self.poisson.unit_id()),
        )?;
        Ok(if acted.is_zero() { None } else { Some(acted) })
    }

    /// Closure of the τ-images under conformal n-products up to the word
    /// length bound, deduplicated by normal form.
    pub fn envelope_span(&self, word_length_bound: u32) -> EnvResult<Vec<Operator<P::Id>>> {
        let p = &self.poisson;
        let mut levels: Vec<Vec<Operator<P::Id>>> = vec![Vec::new()];
        let mut all: Vec<Operator<P::Id>> = Vec::new();
        let mut level1 = Vec::new();
        for t in &self.tau_images {
            if !t.is_zero() && !all.contains(t) {
                all.push(t.clone());
                level1.push(t.clone());
            }
        }
        levels.push(level1);
        for len in 2..=word_length_bound {
            let mut level = Vec::new();
            for li in 1..len {
                let lj = len - li;
                for a in &levels[li as usize] {
                    for b in &levels[lj as usize] {
                        let prod = op_lambda_product(p, a, b)?;
                        if prod.is_zero() {
                            continue;
                        }
                        let deg = prod.degree_in(Var::Lambda);
                        for n in 0..=deg {
                            let op = op_n_product(p, a, b, n)?;
                            if !op.is_zero() && !all.contains(&op) {
                                all.push(op.clone());
                                level.push(op);
                            }
                        }
                    }
                }
            }
            levels.push(level);
        }
        Ok(all)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalityReport {
    pub max_locality: u32,
    pub pairs: usize,
    pub failures: Vec<String>,
}

impl LocalityReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty() && self.max_locality <= 3
    }
}

// --- shipped contexts ----------------------------------------------------

/// Virasoro: v∘v = v over k[v] with d = d/dv.
pub fn virasoro_ctx() -> EnvResult<EmbeddingContext<Rank1Poly>> {
    EmbeddingContext::new(
        "virasoro",
        virasoro_gd(),
        poly_poisson_rank1(DerivationMode::Ddv),
        vec![PoissonElem::basis(VPow(1))],
    )
}

/// Rank-one abelian GD over k[v] with d ≡ 0.
pub fn abelian_poly_ctx() -> EnvResult<EmbeddingContext<Rank1Poly>> {
    EmbeddingContext::new(
        "abelian-poly",
        abelian_gd(),
        poly_poisson_rank1(DerivationMode::Zero),
        vec![PoissonElem::basis(VPow(1))],
    )
}

/// Current conformal algebra over a Lie algebra, with the Lie–Poisson
/// envelope (d ≡ 0).
pub fn current_ctx(
    lie: StructureTable,
    names: Vec<String>,
) -> EnvResult<EmbeddingContext<LiePoisson>> {
    let dim = lie.dim;
    let gd = current_gd(lie.clone(), names)?;
    let p = lie_poisson(lie)?;
    let embed = (0..dim)
        .map(|i| PoissonElem::basis(SymMono(vec![i])))
        .collect();
    EmbeddingContext::new("current", gd, p, embed)
}

/// Minus-construction GD of a Novikov algebra, with the truncated
/// universal Novikov envelope.
pub fn novikov_ctx(
    table: StructureTable,
    names: Vec<String>,
    order_bound: u32,
    degree_bound: u32,
) -> Result<EmbeddingContext<NovikovUniversal>, EnvelopeError> {
    let dim = table.dim;
    let gd = minus_construction(&table, names)?;
    let p = novikov_universal(table, order_bound, degree_bound).map_err(|e| match e {
        NovikovEnvError::Gd(g) => EnvelopeError::Gd(g),
        NovikovEnvError::Poisson(p) => EnvelopeError::Poisson(p),
        b @ NovikovEnvError::Bounds(_, _) => {
            EnvelopeError::Poisson(PoissonError::Overflow(b.to_string()))
        }
    })?;
    let embed = (0..dim)
        .map(|i| PoissonElem::basis(NovMono(vec![(i, 0)])))
        .collect();
    EmbeddingContext::new("novikov-universal", gd, p, embed)
}

/// Rank-one abelian GD with the free differential Poisson envelope
/// modulo (v·v′).
pub fn abelian_free_ctx(
    order_bound: u32,
    degree_bound: u32,
) -> EnvResult<EmbeddingContext<FreePd>> {
    let p = free_pd_quotient_rank1(order_bound, degree_bound)?;
    EmbeddingContext::new(
        "abelian-free",
        abelian_gd(),
        p,
        vec![FreePd::v_gen(0)],
    )
}

// --- abelian kernel witness ------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct AbelianReport {
    /// φ(u) is not the zero operator as a formal word combination.
    pub phi_nonzero: bool,
    pub phi_rendered: String,
    /// Number of basis elements whose φ(u)-image landed in the ideal.
    pub basis_checked: usize,
    pub failures: Vec<String>,
    /// The enveloping-algebra fact that makes the witness a kernel proof.
    pub note: String,
}

impl AbelianReport {
    pub fn is_ok(&self) -> bool {
        self.phi_nonzero && self.failures.is_empty()
    }
}

/// Group a module element by coefficient monomial and test every
/// Poisson-element slice for ideal membership.
fn module_elem_in_ideal(p: &FreePd, m: &ModuleElem<PdMono>) -> PResult<bool> {
    use std::collections::BTreeMap;
    let mut slices: BTreeMap<crate::mpoly::Mono, PoissonElem<PdMono>> = BTreeMap::new();
    for (id, poly) in &m.terms {
        for (mono, c) in poly.terms() {
            slices
                .entry(mono.clone())
                .or_insert_with(PoissonElem::zero)
                .add_term(id.clone(), c.clone());
        }
    }
    for slice in slices.values() {
        if !p.in_ideal(slice)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// φ(u) for u = v ₍₀₎ (v ₍₂₎ v): nonzero in normal form, yet it acts as
/// zero on the quotient P_d(V) — every basis image lies in the ideal.
pub fn abelian_kernel_witness(ctx: &EmbeddingContext<FreePd>) -> PResult<AbelianReport> {
    let p = &ctx.poisson;
    if p.order_bound < 6 || p.degree_bound < 4 {
        return Err(PoissonError::Overflow(format!(
            "kernel witness needs bounds ≥ (6, 4), got ({}, {})",
            p.order_bound, p.degree_bound
        )));
    }
    let tau_v = &ctx.tau_images[0];
    let inner = op_n_product(p, tau_v, tau_v, 2)?;
    let phi = op_n_product(p, tau_v, &inner, 0)?;
    let mut report = AbelianReport {
        phi_nonzero: !phi.is_zero(),
        phi_rendered: render_operator(&phi),
        basis_checked: 0,
        failures: Vec::new(),
        note: "v (0) (v (2) v) is a nonzero basis word of the universal envelope \
               at locality 3 (free commutative envelope of an abelian algebra), \
               so a nonzero φ-preimage acting as zero certifies ker φ ≠ 0"
            .to_string(),
    };
    for f in p.enumerate_basis(p.order_bound, p.degree_bound) {
        let acted = op_act(p, &phi, &ModuleElem::basis(f.clone()))?;
        if module_elem_in_ideal(p, &acted)? {
            report.basis_checked += 1;
        } else {
            report.failures.push(format!("basis element {f}"));
        }
    }
    Ok(report)
}

/// Scalar-coordinate helper for building conformal elements in tests and
/// the CLI.
pub fn conf_from_coords(coords: Vec<MPoly>) -> ConfElem {
    ConfElem { coords }
}

/// Convenience: the ConfElem c·T^k·e_i.
pub fn conf_monomial(dim: usize, i: usize, c: Rat, k: u32) -> ConfElem {
    ConfElem::monomial(dim, i, MPoly::term(c, Var::T, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::sl2_table;
    use crate::weyl::{operator_to_weyl, tau_weyl};

    #[test]
    fn tau_virasoro_matches_weyl_form() {
        // τ(v) over k[v], d = d/dv: a′ = 1 so the L(a′) letters collapse
        // to coefficients; the Weyl dictionary must give x − T(d+1)p.
        let ctx = virasoro_ctx().unwrap();
        let w = operator_to_weyl(&ctx.tau_images[0]).unwrap();
        assert_eq!(w, tau_weyl());
    }

    #[test]
    fn tau_abelian_form() {
        // d ≡ 0: τ(v) = Ad(v) − T·L(v)(D + id)
        let ctx = abelian_poly_ctx().unwrap();
        let mut expect = Operator::zero();
        expect.add_term(
            OpWord {
                ads: vec![VPow(1)],
                mul: None,
                ders: 0,
            },
            MPoly::one(),
        );
        expect.add_term(
            OpWord {
                ads: vec![],
                mul: Some(VPow(1)),
                ders: 1,
            },
            -&t_var(),
        );
        expect.add_term(
            OpWord {
                ads: vec![],
                mul: Some(VPow(1)),
                ders: 0,
            },
            -&t_var(),
        );
        assert_eq!(ctx.tau_images[0], expect);
    }

    #[test]
    fn virasoro_residual_zero() {
        let ctx = virasoro_ctx().unwrap();
        assert!(ctx.residual_report().unwrap().is_ok());
    }

    #[test]
    fn current_sl2_residuals_zero() {
        let ctx = current_ctx(sl2_table(), vec!["e".into(), "f".into(), "h".into()]).unwrap();
        assert!(ctx.residual_report().unwrap().is_ok());
    }

    #[test]
    fn virasoro_locality() {
        let ctx = virasoro_ctx().unwrap();
        let rep = ctx.locality_certificate().unwrap();
        assert!(rep.is_ok(), "failures: {:?}", rep.failures);
        assert_eq!(rep.max_locality, 3);
    }

    #[test]
    fn injectivity_witness_on_generator() {
        let ctx = virasoro_ctx().unwrap();
        let w = ConfElem::basis(1, 0);
        let witness = ctx.injectivity_probe(&w).unwrap();
        assert!(witness.is_some());
        assert!(ctx
            .injectivity_probe(&ConfElem::zero(1))
            .unwrap()
            .is_none());
    }

    #[test]
    fn envelope_span_contains_products() {
        let ctx = virasoro_ctx().unwrap();
        let span = ctx.envelope_span(2).unwrap();
        let p = &ctx.poisson;
        let zeroth = op_n_product(p, &ctx.tau_images[0], &ctx.tau_images[0], 0).unwrap();
        let second = op_n_product(p, &ctx.tau_images[0], &ctx.tau_images[0], 2).unwrap();
        assert!(span.contains(&zeroth));
        assert!(span.contains(&second));
    }

    #[test]
    fn abelian_witness_small_bounds_overflow() {
        assert!(matches!(
            abelian_free_ctx(2, 2).and_then(|ctx| {
                abelian_kernel_witness(&ctx).map_err(EnvelopeError::Poisson)
            }),
            Err(EnvelopeError::Poisson(PoissonError::Overflow(_)))
        ));
    }
}
