//! Sparse exact linear algebra over ℚ, keyed by arbitrary ordered
//! monomial identifiers: incremental rank and small exact solves.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::rational::{rat, Rat};

pub type SparseVec<K> = BTreeMap<K, Rat>;

/// Incrementally echelonized row space (pivot = largest key, coefficient
/// normalized to 1).
pub struct RowSpace<K: Ord + Clone> {
    rows: BTreeMap<K, SparseVec<K>>,
}

impl<K: Ord + Clone> Default for RowSpace<K> {
    fn default() -> Self {
        RowSpace {
            rows: BTreeMap::new(),
        }
    }
}

fn sub_scaled<K: Ord + Clone>(a: &mut SparseVec<K>, b: &SparseVec<K>, c: &Rat) {
    for (k, v) in b {
        let delta = v * c;
        let e = a.entry(k.clone()).or_insert_with(|| rat(0));
        *e -= delta;
        if e.is_zero() {
            a.remove(k);
        }
    }
}

impl<K: Ord + Clone> RowSpace<K> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Reduce a vector against the rows by repeated leading-term
    /// elimination.
    pub fn reduce(&self, mut v: SparseVec<K>) -> SparseVec<K> {
        loop {
            let Some((lead, c)) = v.iter().next_back().map(|(k, c)| (k.clone(), c.clone()))
            else {
                break;
            };
            match self.rows.get(&lead) {
                Some(row) => sub_scaled(&mut v, row, &c),
                None => break,
            }
        }
        v
    }

    /// Insert a vector; returns true when it enlarged the space.
    pub fn insert(&mut self, v: SparseVec<K>) -> bool {
        let v = self.reduce(v);
        let Some((lead, c)) = v.iter().next_back().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = rat(1) / c;
        let normalized: SparseVec<K> = v.iter().map(|(k, x)| (k.clone(), x * &inv)).collect();
        self.rows.insert(lead, normalized);
        true
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v.clone()).is_empty()
    }
}

/// Rank of a set of sparse vectors.
pub fn rank_of<K: Ord + Clone>(vecs: &[SparseVec<K>]) -> usize {
    let mut space = RowSpace::new();
    for v in vecs {
        space.insert(v.clone());
    }
    space.rank()
}

/// Solve Σ αᵢ·colᵢ = target exactly; returns the coefficients if the
/// system is consistent (any solution when underdetermined).
pub fn solve_exact<K: Ord + Clone>(
    cols: &[SparseVec<K>],
    target: &SparseVec<K>,
) -> Option<Vec<Rat>> {
    // collect the key universe
    let mut keys: Vec<K> = Vec::new();
    for c in cols.iter().chain(std::iter::once(target)) {
        for k in c.keys() {
            keys.push(k.clone());
        }
    }
    keys.sort();
    keys.dedup();
    let n = cols.len();
    // dense augmented matrix, one row per key
    let mut m: Vec<Vec<Rat>> = keys
        .iter()
        .map(|k| {
            let mut row: Vec<Rat> = cols
                .iter()
                .map(|c| c.get(k).cloned().unwrap_or_else(|| rat(0)))
                .collect();
            row.push(target.get(k).cloned().unwrap_or_else(|| rat(0)));
            row
        })
        .collect();
    let rows = m.len();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
    let mut r = 0usize;
    for c in 0..n {
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = rat(1) / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..=n {
                    let delta = &m[r][j] * &f;
                    m[i][j] -= delta;
                }
            }
        }
        pivot_of_col[c] = Some(r);
        r += 1;
        if r == rows {
            break;
        }
    }
    // consistency: no row 0 = nonzero
    for row in &m {
        if row[..n].iter().all(|x| x.is_zero()) && !row[n].is_zero() {
            return None;
        }
    }
    let mut sol = vec![rat(0); n];
    for c in 0..n {
        if let Some(pr) = pivot_of_col[c] {
            sol[c] = m[pr][n].clone();
        }
    }
    Some(sol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vec_of(pairs: &[(u32, i64)]) -> SparseVec<u32> {
        pairs.iter().map(|&(k, v)| (k, rat(v))).collect()
    }

    #[test]
    fn rank_simple() {
        let cols = vec![
            vec_of(&[(0, 1), (1, 2)]),
            vec_of(&[(0, 2), (1, 4)]),
            vec_of(&[(1, 1)]),
        ];
        assert_eq!(rank_of(&cols), 2);
    }

    #[test]
    fn solve_simple() {
        let cols = vec![vec_of(&[(0, 1), (1, 1)]), vec_of(&[(1, 1)])];
        let target = vec_of(&[(0, 2), (1, 5)]);
        let sol = solve_exact(&cols, &target).unwrap();
        assert_eq!(sol, vec![rat(2), rat(3)]);
    }

    #[test]
    fn solve_inconsistent() {
        let cols = vec![vec_of(&[(0, 1)])];
        let target = vec_of(&[(1, 1)]);
        assert!(solve_exact(&cols, &target).is_none());
    }
}
