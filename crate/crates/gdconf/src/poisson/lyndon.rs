//! Free Lie algebra on the derivative alphabet {v, v', v'', ...}, in the
//! Lyndon-word basis.
//!
//! A letter is the derivative order n (so letter 0 is v, letter 1 is v',
//! ...). A basis element is a Lyndon word; its bracketing is the standard
//! factorization (right factor = lexicographically least proper suffix).
//! Brackets of basis elements are computed by expanding into the free
//! associative algebra and decomposing back: the expansion of the
//! bracketing of a Lyndon word w is w plus lexicographically larger words,
//! so elimination from the smallest word terminates.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::rational::{rat, Rat};

/// Lyndon word over derivative orders; the free-Lie basis identifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LyndonWord(pub Vec<u32>);

impl LyndonWord {
    pub fn letter(n: u32) -> LyndonWord {
        LyndonWord(vec![n])
    }

    /// Weight = number of letters.
    pub fn weight(&self) -> u32 {
        self.0.len() as u32
    }

    /// Total derivative order = sum of letters.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl PartialOrd for LyndonWord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LyndonWord {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // weight then lexicographic
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

fn letter_str(n: u32) -> String {
    if n == 0 {
        "v".to_string()
    } else {
        format!("v^({n})")
    }
}

impl fmt::Display for LyndonWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", letter_str(self.0[0]));
        }
        let (u, v) = standard_factorization(&self.0);
        write!(
            f,
            "{{{},{}}}",
            LyndonWord(u.to_vec()),
            LyndonWord(v.to_vec())
        )
    }
}

/// Is w strictly smaller than all of its proper suffixes?
pub fn is_lyndon(w: &[u32]) -> bool {
    if w.is_empty() {
        return false;
    }
    for i in 1..w.len() {
        if w[i..] <= *w {
            return false;
        }
    }
    true
}

/// Standard factorization w = u·v with v the lexicographically least
/// proper suffix; both factors are Lyndon.
pub fn standard_factorization(w: &[u32]) -> (&[u32], &[u32]) {
    debug_assert!(w.len() >= 2);
    let mut best = 1;
    for i in 2..w.len() {
        if w[i..] < w[best..] {
            best = i;
        }
    }
    (&w[..best], &w[best..])
}

/// All Lyndon words with weight ≤ `weight_bound` and total order ≤
/// `order_bound`, sorted.
pub fn enumerate_lyndon(weight_bound: u32, order_bound: u32) -> Vec<LyndonWord> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<u32>> = vec![Vec::new()];
    while let Some(w) = stack.pop() {
        if !w.is_empty() && is_lyndon(&w) {
            out.push(LyndonWord(w.clone()));
        }
        if (w.len() as u32) < weight_bound {
            let used: u32 = w.iter().sum();
            for l in 0..=(order_bound - used) {
                let mut next = w.clone();
                next.push(l);
                stack.push(next);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Element of the free Lie algebra in the Lyndon basis.
pub type LieElem = BTreeMap<LyndonWord, Rat>;

/// Element of the free associative algebra (tensor algebra).
type AssocPoly = BTreeMap<Vec<u32>, Rat>;

fn assoc_add(a: &mut AssocPoly, w: Vec<u32>, c: Rat) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match a.entry(w) {
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

fn assoc_commutator(a: &AssocPoly, b: &AssocPoly) -> AssocPoly {
    let mut out = AssocPoly::new();
    for (wa, ca) in a {
        for (wb, cb) in b {
            let mut ab = wa.clone();
            ab.extend_from_slice(wb);
            assoc_add(&mut out, ab, ca * cb);
            let mut ba = wb.clone();
            ba.extend_from_slice(wa);
            assoc_add(&mut out, ba, -(ca * cb));
        }
    }
    out
}

/// Shared free-Lie computation context with memoized expansions.
#[derive(Default)]
pub struct FreeLie {
    expand_cache: RefCell<BTreeMap<Vec<u32>, AssocPoly>>,
}

impl FreeLie {
    pub fn new() -> FreeLie {
        FreeLie::default()
    }

    /// Associative expansion of the standard bracketing of a Lyndon word.
    fn expand(&self, w: &[u32]) -> AssocPoly {
        if let Some(hit) = self.expand_cache.borrow().get(w) {
            return hit.clone();
        }
        let result = if w.len() == 1 {
            let mut p = AssocPoly::new();
            p.insert(w.to_vec(), rat(1));
            p
        } else {
            let (u, v) = standard_factorization(w);
            assoc_commutator(&self.expand(u), &self.expand(v))
        };
        self.expand_cache
            .borrow_mut()
            .insert(w.to_vec(), result.clone());
        result
    }

    /// Decompose a Lie polynomial (given in associative form) into the
    /// Lyndon basis by triangular elimination from the smallest word.
    fn decompose(&self, mut p: AssocPoly) -> LieElem {
        let mut out = LieElem::new();
        while let Some((w, c)) = p.iter().next().map(|(w, c)| (w.clone(), c.clone())) {
            debug_assert!(is_lyndon(&w), "non-Lyndon minimal word {w:?} in Lie element");
            for (u, cu) in self.expand(&w) {
                assoc_add(&mut p, u, -(&c * &cu));
            }
            out.insert(LyndonWord(w), c);
        }
        out
    }

    /// Bracket of two basis elements, expanded in the Lyndon basis.
    pub fn bracket(&self, a: &LyndonWord, b: &LyndonWord) -> LieElem {
        if a == b {
            return LieElem::new();
        }
        let p = assoc_commutator(&self.expand(&a.0), &self.expand(&b.0));
        self.decompose(p)
    }

    /// Bracket of two Lie elements.
    pub fn bracket_elems(&self, a: &LieElem, b: &LieElem) -> LieElem {
        let mut out = LieElem::new();
        for (wa, ca) in a {
            for (wb, cb) in b {
                for (w, c) in self.bracket(wa, wb) {
                    lie_add(&mut out, w, &c * ca * cb);
                }
            }
        }
        out
    }

    /// Formal derivative: d acts on letters by n ↦ n+1 and as a derivation
    /// of the bracket.
    pub fn derive(&self, w: &LyndonWord) -> LieElem {
        if w.0.len() == 1 {
            let mut out = LieElem::new();
            out.insert(LyndonWord::letter(w.0[0] + 1), rat(1));
            return out;
        }
        let (u, v) = standard_factorization(&w.0);
        let (u, v) = (LyndonWord(u.to_vec()), LyndonWord(v.to_vec()));
        let mut du = LieElem::new();
        for (x, c) in self.derive(&u) {
            du.insert(x, c);
        }
        let mut dv = LieElem::new();
        for (x, c) in self.derive(&v) {
            dv.insert(x, c);
        }
        let mut vb = LieElem::new();
        vb.insert(v.clone(), rat(1));
        let mut ub = LieElem::new();
        ub.insert(u.clone(), rat(1));
        let mut out = self.bracket_elems(&du, &vb);
        for (w, c) in self.bracket_elems(&ub, &dv) {
            lie_add(&mut out, w, c);
        }
        out
    }
}

pub fn lie_add(e: &mut LieElem, w: LyndonWord, c: Rat) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match e.entry(w) {
        Entry::Vacant(en) => {
            en.insert(c);
        }
        Entry::Occupied(mut en) => {
            let s = en.get().clone() + c;
            if s.is_zero() {
                en.remove();
            } else {
                *en.get_mut() = s;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lyndon_recognition() {
        assert!(is_lyndon(&[0, 1]));
        assert!(!is_lyndon(&[1, 0]));
        assert!(!is_lyndon(&[0, 0]));
        assert!(is_lyndon(&[0, 0, 1]));
        assert!(is_lyndon(&[0, 1, 1]));
        assert!(is_lyndon(&[2]));
    }

    #[test]
    fn letter_bracket() {
        // [v, v'] is the Lyndon word (0,1)
        let fl = FreeLie::new();
        let b = fl.bracket(&LyndonWord::letter(0), &LyndonWord::letter(1));
        assert_eq!(b.len(), 1);
        assert_eq!(b.get(&LyndonWord(vec![0, 1])), Some(&rat(1)));
        // antisymmetry
        let b2 = fl.bracket(&LyndonWord::letter(1), &LyndonWord::letter(0));
        assert_eq!(b2.get(&LyndonWord(vec![0, 1])), Some(&rat(-1)));
    }

    #[test]
    fn jacobi_on_letters() {
        let fl = FreeLie::new();
        let lift = |n: u32| {
            let mut e = LieElem::new();
            e.insert(LyndonWord::letter(n), rat(1));
            e
        };
        let (a, b, c) = (lift(0), lift(1), lift(2));
        // [a,[b,c]] - [[a,b],c] - [b,[a,c]] = 0
        let mut lhs = fl.bracket_elems(&a, &fl.bracket_elems(&b, &c));
        for (w, coeff) in fl.bracket_elems(&fl.bracket_elems(&a, &b), &c) {
            lie_add(&mut lhs, w, -coeff);
        }
        for (w, coeff) in fl.bracket_elems(&b, &fl.bracket_elems(&a, &c)) {
            lie_add(&mut lhs, w, -coeff);
        }
        assert!(lhs.is_empty());
    }

    #[test]
    fn derivation_of_bracket() {
        // d[v, v'] = [v', v'] + [v, v''] = [v, v'']
        let fl = FreeLie::new();
        let d = fl.derive(&LyndonWord(vec![0, 1]));
        assert_eq!(d.len(), 1);
        assert_eq!(d.get(&LyndonWord(vec![0, 2])), Some(&rat(1)));
    }

    #[test]
    fn enumeration_counts() {
        // weight ≤ 2, order ≤ 2: letters 0,1,2 and pairs (0,1), (0,2), (1,... no: 1+2>2)
        let ws = enumerate_lyndon(2, 2);
        let expect: Vec<LyndonWord> = vec![
            LyndonWord(vec![0]),
            LyndonWord(vec![1]),
            LyndonWord(vec![2]),
            LyndonWord(vec![0, 1]),
            LyndonWord(vec![0, 2]),
        ];
        assert_eq!(ws, expect);
    }
}
