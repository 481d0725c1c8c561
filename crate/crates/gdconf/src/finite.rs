//! Finite-dimensional algebras presented by structure constants, with
//! Novikov / Lie / Gel'fand-Dorfman axiom checking and the V^(-)
//! construction.
//!
//! All checks are exhaustive over basis tuples; by multilinearity that is
//! equivalent to the identity on the whole space. Failures are data, not
//! errors: each check returns the first failing tuple with its defect
//! vector so broken user tables can be diagnosed.

use serde::{Deserialize, Serialize};

use num_traits::Zero;

use crate::rational::{parse_rat, rat_str, Rat};

/// Coefficient vector over the algebra basis.
pub type Vect = Vec<Rat>;

fn zero_vect(dim: usize) -> Vect {
    vec![Rat::zero(); dim]
}

fn add_assign(a: &mut Vect, b: &Vect) {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
}

fn scaled(a: &Vect, c: &Rat) -> Vect {
    a.iter().map(|x| x * c).collect()
}

pub fn is_zero_vect(a: &Vect) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// entries[i][j][k] is the coefficient of basis element k in (b_i · b_j).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureTable {
    pub dim: usize,
    pub entries: Vec<Vec<Vect>>,
}

impl StructureTable {
    pub fn zero(dim: usize) -> StructureTable {
        StructureTable {
            dim,
            entries: vec![vec![zero_vect(dim); dim]; dim],
        }
    }

    /// Build from (i, j, k, coeff) quadruples.
    pub fn from_entries(dim: usize, entries: &[(usize, usize, usize, Rat)]) -> StructureTable {
        let mut t = StructureTable::zero(dim);
        for (i, j, k, c) in entries {
            t.entries[*i][*j][*k] = c.clone();
        }
        t
    }

    /// Product of two coefficient vectors through the table.
    pub fn apply(&self, a: &Vect, b: &Vect) -> Vect {
        let mut out = zero_vect(self.dim);
        for (i, ca) in a.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (j, cb) in b.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let c = ca * cb;
                add_assign(&mut out, &scaled(&self.entries[i][j], &c));
            }
        }
        out
    }

    /// Product of two basis elements.
    pub fn basis_product(&self, i: usize, j: usize) -> &Vect {
        &self.entries[i][j]
    }
}

/// Outcome of an axiom check: `Ok`, or the first failing basis tuple along
/// with the full defect vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum CheckReport {
    Ok,
    Fail {
        axiom: String,
        witness: Vec<usize>,
        defect: Vec<String>,
    },
}

impl CheckReport {
    pub fn is_ok(&self) -> bool {
        matches!(self, CheckReport::Ok)
    }

    fn fail(axiom: &str, witness: &[usize], defect: &Vect) -> CheckReport {
        CheckReport::Fail {
            axiom: axiom.to_string(),
            witness: witness.to_vec(),
            defect: defect.iter().map(rat_str).collect(),
        }
    }
}

fn basis_vect(dim: usize, i: usize) -> Vect {
    let mut v = zero_vect(dim);
    v[i] = Rat::from_integer(1.into());
    v
}

/// Left-symmetry and right-commutativity of a Novikov product, on all
/// basis triples.
pub fn check_novikov(t: &StructureTable) -> CheckReport {
    let n = t.dim;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let ea = basis_vect(n, a);
                let eb = basis_vect(n, b);
                let ec = basis_vect(n, c);
                // (a∘b)∘c - a∘(b∘c) - (b∘a)∘c + b∘(a∘c)
                let mut d = t.apply(&t.apply(&ea, &eb), &ec);
                let s1 = t.apply(&ea, &t.apply(&eb, &ec));
                let s2 = t.apply(&t.apply(&eb, &ea), &ec);
                let s3 = t.apply(&eb, &t.apply(&ea, &ec));
                for k in 0..n {
                    d[k] = d[k].clone() - &s1[k] - &s2[k] + &s3[k];
                }
                if !is_zero_vect(&d) {
                    return CheckReport::fail("left-symmetry", &[a, b, c], &d);
                }
                // (a∘b)∘c - (a∘c)∘b
                let mut d = t.apply(&t.apply(&ea, &eb), &ec);
                let s = t.apply(&t.apply(&ea, &ec), &eb);
                for k in 0..n {
                    d[k] = d[k].clone() - &s[k];
                }
                if !is_zero_vect(&d) {
                    return CheckReport::fail("right-commutativity", &[a, b, c], &d);
                }
            }
        }
    }
    CheckReport::Ok
}

/// Antisymmetry and Jacobi for a Lie bracket table.
pub fn check_lie(t: &StructureTable) -> CheckReport {
    let n = t.dim;
    for a in 0..n {
        for b in 0..n {
            let ea = basis_vect(n, a);
            let eb = basis_vect(n, b);
            let mut d = t.apply(&ea, &eb);
            let s = t.apply(&eb, &ea);
            for k in 0..n {
                d[k] = d[k].clone() + &s[k];
            }
            if !is_zero_vect(&d) {
                return CheckReport::fail("antisymmetry", &[a, b], &d);
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let ea = basis_vect(n, a);
                let eb = basis_vect(n, b);
                let ec = basis_vect(n, c);
                // [[a,b],c] + [[b,c],a] + [[c,a],b]
                let mut d = t.apply(&t.apply(&ea, &eb), &ec);
                let s1 = t.apply(&t.apply(&eb, &ec), &ea);
                let s2 = t.apply(&t.apply(&ec, &ea), &eb);
                for k in 0..n {
                    d[k] = d[k].clone() + &s1[k] + &s2[k];
                }
                if !is_zero_vect(&d) {
                    return CheckReport::fail("jacobi", &[a, b, c], &d);
                }
            }
        }
    }
    CheckReport::Ok
}

/// Finite-dimensional Gel'fand-Dorfman algebra: a Novikov product and a
/// Lie bracket on the same basis, tied by the compatibility identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GDAlgebra {
    pub basis_names: Vec<String>,
    pub novikov: StructureTable,
    pub lie: StructureTable,
    /// True when the constructor skipped validation (negative fixtures).
    pub unchecked: bool,
}

/// The GD compatibility identity
/// [a, b∘c] - [c, b∘a] - b∘[a,c] + [b,a]∘c - [b,c]∘a = 0
/// on all basis triples.
pub fn check_gd_compat(g: &GDAlgebra) -> CheckReport {
    let n = g.novikov.dim;
    let nov = &g.novikov;
    let lie = &g.lie;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let ea = basis_vect(n, a);
                let eb = basis_vect(n, b);
                let ec = basis_vect(n, c);
                let mut d = lie.apply(&ea, &nov.apply(&eb, &ec));
                let s1 = lie.apply(&ec, &nov.apply(&eb, &ea));
                let s2 = nov.apply(&eb, &lie.apply(&ea, &ec));
                let s3 = nov.apply(&lie.apply(&eb, &ea), &ec);
                let s4 = nov.apply(&lie.apply(&eb, &ec), &ea);
                for k in 0..n {
                    d[k] = d[k].clone() - &s1[k] - &s2[k] + &s3[k] - &s4[k];
                }
                if !is_zero_vect(&d) {
                    return CheckReport::fail("gd-compatibility", &[a, b, c], &d);
                }
            }
        }
    }
    CheckReport::Ok
}

#[derive(Debug, thiserror::Error)]
pub enum GdError {
    #[error("novikov table is not Novikov: {0:?}")]
    NotNovikov(CheckReport),
    #[error("lie table is not Lie: {0:?}")]
    NotLie(CheckReport),
    #[error("tables are not GD-compatible: {0:?}")]
    NotCompatible(CheckReport),
    #[error("dimension mismatch: {0}")]
    Dim(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl GDAlgebra {
    /// Validating constructor.
    pub fn new(
        basis_names: Vec<String>,
        novikov: StructureTable,
        lie: StructureTable,
    ) -> Result<GDAlgebra, GdError> {
        if basis_names.len() != novikov.dim || novikov.dim != lie.dim {
            return Err(GdError::Dim(format!(
                "basis {} vs novikov {} vs lie {}",
                basis_names.len(),
                novikov.dim,
                lie.dim
            )));
        }
        let g = GDAlgebra {
            basis_names,
            novikov,
            lie,
            unchecked: false,
        };
        let r = check_novikov(&g.novikov);
        if !r.is_ok() {
            return Err(GdError::NotNovikov(r));
        }
        let r = check_lie(&g.lie);
        if !r.is_ok() {
            return Err(GdError::NotLie(r));
        }
        let r = check_gd_compat(&g);
        if !r.is_ok() {
            return Err(GdError::NotCompatible(r));
        }
        Ok(g)
    }

    /// Bypass for deliberately broken fixtures.
    pub fn new_unchecked(
        basis_names: Vec<String>,
        novikov: StructureTable,
        lie: StructureTable,
    ) -> GDAlgebra {
        GDAlgebra {
            basis_names,
            novikov,
            lie,
            unchecked: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.novikov.dim
    }

    pub fn basis_index(&self, name: &str) -> Option<usize> {
        self.basis_names.iter().position(|n| n == name)
    }
}

/// V^(-): enrich a Novikov algebra with the commutator bracket
/// [a,b] = a∘b - b∘a. The result is a GD algebra; the constructor re-runs
/// all three checks anyway.
pub fn minus_construction(t: &StructureTable, basis_names: Vec<String>) -> Result<GDAlgebra, GdError> {
    let r = check_novikov(t);
    if !r.is_ok() {
        return Err(GdError::NotNovikov(r));
    }
    let n = t.dim;
    let mut lie = StructureTable::zero(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                lie.entries[i][j][k] = t.entries[i][j][k].clone() - &t.entries[j][i][k];
            }
        }
    }
    GDAlgebra::new(basis_names, t.clone(), lie)
}

// --- JSON structure-constant format ---------------------------------------
//
// {"dim": n, "basis": [names], "novikov": [[[q-strings]]], "lie": [[[...]]]}

#[derive(Serialize, Deserialize)]
struct GdJson {
    dim: usize,
    basis: Vec<String>,
    novikov: Vec<Vec<Vec<String>>>,
    lie: Vec<Vec<Vec<String>>>,
}

fn table_from_json(dim: usize, raw: &[Vec<Vec<String>>]) -> Result<StructureTable, GdError> {
    if raw.len() != dim {
        return Err(GdError::Dim(format!("table has {} rows, dim {}", raw.len(), dim)));
    }
    let mut t = StructureTable::zero(dim);
    for (i, row) in raw.iter().enumerate() {
        if row.len() != dim {
            return Err(GdError::Dim(format!("row {i} has {} cols", row.len())));
        }
        for (j, cell) in row.iter().enumerate() {
            if cell.len() != dim {
                return Err(GdError::Dim(format!("cell {i},{j} has {} coords", cell.len())));
            }
            for (k, s) in cell.iter().enumerate() {
                t.entries[i][j][k] = parse_rat(s).map_err(GdError::Parse)?;
            }
        }
    }
    Ok(t)
}

fn table_to_json(t: &StructureTable) -> Vec<Vec<Vec<String>>> {
    t.entries
        .iter()
        .map(|row| row.iter().map(|cell| cell.iter().map(rat_str).collect()).collect())
        .collect()
}

/// Parse the JSON structure-constant format. Does not validate axioms;
/// callers decide whether to run the checks.
pub fn gd_from_json(s: &str) -> Result<GDAlgebra, GdError> {
    let raw: GdJson = serde_json::from_str(s).map_err(|e| GdError::Parse(e.to_string()))?;
    if raw.basis.len() != raw.dim {
        return Err(GdError::Dim(format!(
            "{} basis names for dim {}",
            raw.basis.len(),
            raw.dim
        )));
    }
    let novikov = table_from_json(raw.dim, &raw.novikov)?;
    let lie = table_from_json(raw.dim, &raw.lie)?;
    Ok(GDAlgebra::new_unchecked(raw.basis, novikov, lie))
}

pub fn gd_to_json(g: &GDAlgebra) -> String {
    let raw = GdJson {
        dim: g.dim(),
        basis: g.basis_names.clone(),
        novikov: table_to_json(&g.novikov),
        lie: table_to_json(&g.lie),
    };
    serde_json::to_string_pretty(&raw).expect("serialize")
}

// --- Shipped constructions -------------------------------------------------

/// The 1-dimensional Novikov algebra v∘v = v (GD bracket zero); the
/// quadratic conformal algebra over it is Virasoro.
pub fn virasoro_gd() -> GDAlgebra {
    let nov = StructureTable::from_entries(1, &[(0, 0, 0, crate::rational::rat(1))]);
    minus_construction(&nov, vec!["v".into()]).expect("virasoro GD")
}

/// Rank-one abelian GD algebra (zero product, zero bracket).
pub fn abelian_gd() -> GDAlgebra {
    GDAlgebra::new(
        vec!["v".into()],
        StructureTable::zero(1),
        StructureTable::zero(1),
    )
    .expect("abelian GD")
}

/// Current GD algebra: zero Novikov product over a given Lie table.
pub fn current_gd(lie: StructureTable, basis_names: Vec<String>) -> Result<GDAlgebra, GdError> {
    let n = lie.dim;
    GDAlgebra::new(basis_names, StructureTable::zero(n), lie)
}

/// sl2 with [e,f]=h, [h,e]=2e, [h,f]=-2f; basis order (e, f, h).
pub fn sl2_table() -> StructureTable {
    use crate::rational::rat;
    StructureTable::from_entries(
        3,
        &[
            (0, 1, 2, rat(1)),
            (1, 0, 2, rat(-1)),
            (2, 0, 0, rat(2)),
            (0, 2, 0, rat(-2)),
            (2, 1, 1, rat(-2)),
            (1, 2, 1, rat(2)),
        ],
    )
}

/// 2-dim solvable Lie algebra [a,b] = b.
pub fn solv2_table() -> StructureTable {
    use crate::rational::rat;
    StructureTable::from_entries(2, &[(0, 1, 1, rat(1)), (1, 0, 1, rat(-1))])
}

/// 2-dim Novikov algebra e1∘e1 = e1, e2∘e1 = e2, the rest zero (right
/// multiplication by e1 is the identity); the commutator bracket is
/// [e2, e1] = e2.
pub fn novikov2_table() -> StructureTable {
    use crate::rational::rat;
    StructureTable::from_entries(2, &[(0, 0, 0, rat(1)), (1, 0, 1, rat(1))])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn virasoro_table_ok() {
        let nov = StructureTable::from_entries(1, &[(0, 0, 0, rat(1))]);
        assert!(check_novikov(&nov).is_ok());
        let g = minus_construction(&nov, vec!["v".into()]).unwrap();
        // [v,v] = v∘v - v∘v = 0
        assert!(is_zero_vect(g.lie.basis_product(0, 0)));
        assert!(check_gd_compat(&g).is_ok());
    }

    #[test]
    fn zero_tables_ok() {
        let z = StructureTable::zero(2);
        assert!(check_novikov(&z).is_ok());
        assert!(check_lie(&z).is_ok());
    }

    #[test]
    fn broken_novikov_fails_with_witness() {
        // a∘a=b, b∘a=a: brute-force expansion finds a failing triple.
        let t = StructureTable::from_entries(2, &[(0, 0, 1, rat(1)), (1, 0, 0, rat(1))]);
        match check_novikov(&t) {
            CheckReport::Fail { witness, .. } => assert_eq!(witness.len(), 3),
            CheckReport::Ok => panic!("expected failure"),
        }
    }

    #[test]
    fn sl2_is_lie() {
        assert!(check_lie(&sl2_table()).is_ok());
        assert!(check_lie(&solv2_table()).is_ok());
    }

    #[test]
    fn symmetric_table_fails_antisymmetry() {
        let t = StructureTable::from_entries(1, &[(0, 0, 0, rat(1))]);
        match check_lie(&t) {
            CheckReport::Fail { axiom, .. } => assert_eq!(axiom, "antisymmetry"),
            CheckReport::Ok => panic!("expected failure"),
        }
    }

    #[test]
    fn current_gd_compat_trivial() {
        // zero Novikov: compatibility reduces to 0
        let g = current_gd(sl2_table(), vec!["e".into(), "f".into(), "h".into()]).unwrap();
        assert!(check_gd_compat(&g).is_ok());
    }

    #[test]
    fn novikov2_minus_construction() {
        let t = novikov2_table();
        assert!(check_novikov(&t).is_ok());
        let g = minus_construction(&t, vec!["e1".into(), "e2".into()]).unwrap();
        // [e2,e1] = e2∘e1 - e1∘e2 = e2
        assert_eq!(g.lie.entries[1][0][1], rat(1));
        assert!(check_gd_compat(&g).is_ok());
    }

    #[test]
    fn json_roundtrip() {
        let g = virasoro_gd();
        let s = gd_to_json(&g);
        let g2 = gd_from_json(&s).unwrap();
        assert_eq!(g.novikov, g2.novikov);
        assert_eq!(g.lie, g2.lie);
        assert_eq!(g.basis_names, g2.basis_names);
    }

    #[test]
    fn random_vector_defect_vanishes_when_basis_check_passes() {
        // multilinearity: basis-level pass implies vanishing on random vectors
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let g = current_gd(sl2_table(), vec!["e".into(), "f".into(), "h".into()]).unwrap();
        for _ in 0..50 {
            let rv = |rng: &mut rand_chacha::ChaCha8Rng| -> Vect {
                (0..3).map(|_| rat(rng.gen_range(-4..5))).collect()
            };
            let (a, b, c) = (rv(&mut rng), rv(&mut rng), rv(&mut rng));
            let mut d = g.lie.apply(&g.lie.apply(&a, &b), &c);
            let s1 = g.lie.apply(&g.lie.apply(&b, &c), &a);
            let s2 = g.lie.apply(&g.lie.apply(&c, &a), &b);
            for k in 0..3 {
                d[k] = d[k].clone() + &s1[k] + &s2[k];
            }
            assert!(is_zero_vect(&d));
        }
    }
}
