//! Weyl-algebra backend for the rank-one polynomial module: operators are
//! normal-ordered combinations Σ c_{ij}(T,x) p^i d^j with d·p − p·d = 1,
//! where p is multiplication by v and d is d/dv. This is an independent
//! fast path for rank-1 computations; the dictionary p ↔ L(v), d ↔ D
//! translates to and from the generic word rewriter.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::cend::{ModuleElem, OpWord, Operator};
use crate::mpoly::{mu_var, t_var, x_var, MPoly, Var};
use crate::poisson::rank1::VPow;
use crate::rational::{binomial, factorial, rat, Rat};

/// Normal-ordered Weyl-algebra element: (i, j) ↦ coefficient of p^i d^j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylOp {
    pub terms: BTreeMap<(u32, u32), MPoly>,
}

impl Default for WeylOp {
    fn default() -> Self {
        WeylOp {
            terms: BTreeMap::new(),
        }
    }
}

impl WeylOp {
    pub fn zero() -> WeylOp {
        WeylOp::default()
    }

    pub fn identity() -> WeylOp {
        WeylOp::term(0, 0, MPoly::one())
    }

    /// Multiplication by v.
    pub fn p() -> WeylOp {
        WeylOp::term(1, 0, MPoly::one())
    }

    /// d/dv.
    pub fn d() -> WeylOp {
        WeylOp::term(0, 1, MPoly::one())
    }

    pub fn term(i: u32, j: u32, c: MPoly) -> WeylOp {
        let mut w = WeylOp::zero();
        w.add_term(i, j, c);
        w
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: MPoly) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((i, j)) {
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

    pub fn add(&self, other: &WeylOp) -> WeylOp {
        let mut out = self.clone();
        for (&(i, j), c) in &other.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &WeylOp) -> WeylOp {
        let mut out = self.clone();
        for (&(i, j), c) in &other.terms {
            out.add_term(i, j, -c);
        }
        out
    }

    pub fn scale(&self, c: &MPoly) -> WeylOp {
        let mut out = WeylOp::zero();
        for (&(i, j), f) in &self.terms {
            out.add_term(i, j, f * c);
        }
        out
    }

    /// Associative product with normal ordering:
    /// d^j p^k = Σ_s s!·C(j,s)·C(k,s)·p^{k−s} d^{j−s}.
    pub fn mul(&self, other: &WeylOp) -> WeylOp {
        let mut out = WeylOp::zero();
        for (&(i, j), f) in &self.terms {
            for (&(k, l), g) in &other.terms {
                for s in 0..=j.min(k) {
                    let c = factorial(s) * binomial(j, s) * binomial(k, s);
                    out.add_term(i + k - s, j + l - s, (f * g).scale(&c));
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> WeylOp {
        let mut out = WeylOp::identity();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn subst_coeffs(&self, bindings: &[(Var, MPoly)]) -> WeylOp {
        let mut out = WeylOp::zero();
        for (&(i, j), f) in &self.terms {
            out.add_term(i, j, f.substitute(bindings));
        }
        out
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.values().map(|f| f.degree_in(v)).max().unwrap_or(0)
    }

    pub fn coeff_of(&self, v: Var, k: u32) -> WeylOp {
        let mut out = WeylOp::zero();
        for (&(i, j), f) in &self.terms {
            out.add_term(i, j, f.coeff_of(v, k));
        }
        out
    }
}

/// Render, e.g. "x - T·p·d - T·p".
pub fn render_weyl(w: &WeylOp) -> String {
    if w.is_zero() {
        return "0".to_string();
    }
    let word_str = |i: u32, j: u32| -> String {
        let mut parts = Vec::new();
        match i {
            0 => {}
            1 => parts.push("p".to_string()),
            _ => parts.push(format!("p^{i}")),
        }
        match j {
            0 => {}
            1 => parts.push("d".to_string()),
            _ => parts.push(format!("d^{j}")),
        }
        if parts.is_empty() {
            "id".to_string()
        } else {
            parts.join("·")
        }
    };
    let mut parts = Vec::new();
    for (&(i, j), c) in w.terms.iter().rev() {
        let word = word_str(i, j);
        if c.is_one() {
            parts.push(word);
        } else if word == "id" {
            parts.push(if c.num_terms() == 1 {
                c.to_string()
            } else {
                format!("({c})·id")
            });
        } else if c.num_terms() == 1 {
            let cs = c.to_string();
            if cs == "-1" {
                parts.push(format!("-{word}"));
            } else {
                parts.push(format!("{cs}·{word}"));
            }
        } else {
            parts.push(format!("({c})·{word}"));
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

/// λ-product at an arbitrary polynomial ν:
/// f(−ν, x)·g(T+ν, x+ν) with Weyl multiplication of the words.
pub fn weyl_product_at(a: &WeylOp, b: &WeylOp, nu: &MPoly) -> WeylOp {
    let x = x_var();
    let t = t_var();
    let a_s = a.subst_coeffs(&[(Var::T, -nu)]);
    let b_s = b.subst_coeffs(&[(Var::T, &t + nu), (Var::X, &x + nu)]);
    a_s.mul(&b_s)
}

pub fn weyl_lambda_product(a: &WeylOp, b: &WeylOp) -> WeylOp {
    weyl_product_at(a, b, &MPoly::var(Var::Lambda))
}

/// The n-th conformal product: n! times the λⁿ coefficient of A λ B.
pub fn weyl_n_product(a: &WeylOp, b: &WeylOp, n: u32) -> WeylOp {
    weyl_lambda_product(a, b)
        .coeff_of(Var::Lambda, n)
        .scale(&MPoly::constant(factorial(n)))
}

/// Apply a word p^i d^j to v^n (no coefficient conventions): returns the
/// image monomial with its rational factor, or None when d^j kills v^n.
fn word_on_power(i: u32, j: u32, n: u32) -> Option<(u32, Rat)> {
    if j > n {
        return None;
    }
    let mut c = rat(1);
    for s in 0..j {
        c *= rat((n - s) as i64);
    }
    Some((n - j + i, c))
}

/// Conformal action on a module element of k[v]: coefficients f(T,x) ↦
/// f(−μ, T), module polynomials h(T) ↦ h(T+μ), words act on the v-powers.
pub fn weyl_act(a: &WeylOp, m: &ModuleElem<VPow>) -> ModuleElem<VPow> {
    let mu = mu_var();
    let t = t_var();
    let mut out = ModuleElem::zero();
    for (&(i, j), f) in &a.terms {
        let f_s = f.substitute(&[(Var::T, -&mu), (Var::X, t.clone())]);
        if f_s.is_zero() {
            continue;
        }
        for (vp, h) in &m.terms {
            let h_s = h.subst(Var::T, &(&t + &mu));
            if let Some((k, c)) = word_on_power(i, j, vp.0) {
                out.add_term(VPow(k), (&f_s * &h_s).scale(&c));
            }
        }
    }
    out
}

/// Plain application to a polynomial in v (constant coefficients only):
/// used as the independent oracle for coefficient extraction.
pub fn weyl_apply_poly(a: &WeylOp, poly: &BTreeMap<u32, Rat>) -> BTreeMap<u32, Rat> {
    let mut out: BTreeMap<u32, Rat> = BTreeMap::new();
    for (&(i, j), f) in &a.terms {
        let c0 = f
            .as_constant()
            .expect("weyl_apply_poly requires constant coefficients");
        for (&n, cn) in poly {
            if let Some((k, c)) = word_on_power(i, j, n) {
                let add = &c0 * cn * c;
                let e = out.entry(k).or_insert_with(|| rat(0));
                *e += add;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Dictionary into the generic rewriter: p^i d^j ↦ L(v^i)·D^j.
pub fn weyl_to_operator(a: &WeylOp) -> Operator<VPow> {
    let mut out = Operator::zero();
    for (&(i, j), c) in &a.terms {
        let w = OpWord {
            ads: Vec::new(),
            mul: if i > 0 { Some(VPow(i)) } else { None },
            ders: j,
        };
        out.add_term(w, c.clone());
    }
    out
}

/// Dictionary from the generic rewriter. The rank-one polynomial models
/// carry the zero Poisson bracket, so formal Ad letters act as zero and
/// their terms are dropped.
pub fn operator_to_weyl(op: &Operator<VPow>) -> Option<WeylOp> {
    let mut out = WeylOp::zero();
    for (w, c) in &op.terms {
        if !w.ads.is_empty() {
            continue;
        }
        let i = w.mul.map(|m| m.0).unwrap_or(0);
        out.add_term(i, w.ders, c.clone());
    }
    Some(out)
}

/// The Virasoro generator image x − T(d+1)p.
pub fn tau_weyl() -> WeylOp {
    let dp1 = WeylOp::d().add(&WeylOp::identity()); // d + 1
    let a = dp1.mul(&WeylOp::p()); // (d+1)p
    WeylOp::term(0, 0, x_var()).sub(&a.scale(&t_var()))
}

/// The adjoint-presentation generator x − T·dp.
pub fn tau_weyl_adjoint() -> WeylOp {
    let dp = WeylOp::d().mul(&WeylOp::p());
    WeylOp::term(0, 0, x_var()).sub(&dp.scale(&t_var()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dp_minus_pd_is_one() {
        let c = WeylOp::d().mul(&WeylOp::p()).sub(&WeylOp::p().mul(&WeylOp::d()));
        assert_eq!(c, WeylOp::identity());
    }

    #[test]
    fn normal_order_higher() {
        // d² p² = p²d² + 4pd + 2
        let lhs = WeylOp::d().pow(2).mul(&WeylOp::p().pow(2));
        let mut expect = WeylOp::term(2, 2, MPoly::one());
        expect.add_term(1, 1, MPoly::int(4));
        expect.add_term(0, 0, MPoly::int(2));
        assert_eq!(lhs, expect);
    }

    #[test]
    fn a_operator_on_powers() {
        // A = (d+1)p sends v^n to (n+1)v^n + v^{n+1}
        let a = WeylOp::d().add(&WeylOp::identity()).mul(&WeylOp::p());
        for n in 0..5u32 {
            let mut poly = BTreeMap::new();
            poly.insert(n, rat(1));
            let img = weyl_apply_poly(&a, &poly);
            assert_eq!(img.get(&n), Some(&rat(n as i64 + 1)));
            assert_eq!(img.get(&(n + 1)), Some(&rat(1)));
            assert_eq!(img.len(), 2);
        }
    }

    #[test]
    fn lambda_square_piece() {
        // (d+1)p(1 − (d+1)p) applied to 1 → −2v − v²
        let a = WeylOp::d().add(&WeylOp::identity()).mul(&WeylOp::p());
        let expr = a.mul(&WeylOp::identity().sub(&a));
        let mut one = BTreeMap::new();
        one.insert(0u32, rat(1));
        let img = weyl_apply_poly(&expr, &one);
        let mut expect = BTreeMap::new();
        expect.insert(1u32, rat(-2));
        expect.insert(2u32, rat(-1));
        assert_eq!(img, expect);
    }

    #[test]
    fn tau_render() {
        // x − T(d+1)p normal-orders to −Tpd − Tp + (x − T)·id
        assert_eq!(render_weyl(&tau_weyl()), "-T·p·d - T·p + (-T + x)·id");
    }

    #[test]
    fn virasoro_self_product() {
        // τ(v) λ τ(v) = x(x − T(d+1)p) + λ(x − T((d+1)p)²)
        //               + λ²((d+1)p)(1 − (d+1)p)
        let tau = tau_weyl();
        let prod = weyl_lambda_product(&tau, &tau);
        assert_eq!(prod.degree_in(Var::Lambda), 2);
        let a = WeylOp::d().add(&WeylOp::identity()).mul(&WeylOp::p());
        let c0 = WeylOp::term(0, 0, x_var()).sub(&a.scale(&t_var())).scale(&x_var());
        let c1 = WeylOp::term(0, 0, x_var()).sub(&a.pow(2).scale(&t_var()));
        let c2 = a.mul(&WeylOp::identity().sub(&a));
        assert_eq!(prod.coeff_of(Var::Lambda, 0), c0);
        assert_eq!(prod.coeff_of(Var::Lambda, 1), c1);
        assert_eq!(prod.coeff_of(Var::Lambda, 2), c2);
    }

    #[test]
    fn dictionary_roundtrip() {
        let tau = tau_weyl();
        let op = weyl_to_operator(&tau);
        assert_eq!(operator_to_weyl(&op), Some(tau));
    }

    #[test]
    fn action_on_unit() {
        // τ(v)·1 → T + μ(1 + v)
        let tau = tau_weyl();
        let acted = weyl_act(&tau, &ModuleElem::basis(VPow(0)));
        let mut expect = ModuleElem::zero();
        expect.add_term(VPow(0), &t_var() + &mu_var());
        expect.add_term(VPow(1), mu_var());
        assert_eq!(acted, expect);
    }
}
