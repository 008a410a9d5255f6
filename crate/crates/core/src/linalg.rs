//! Sparse row echelon forms over a finite field.
//!
//! Rows are sorted sparse vectors; the pivot of a row is its smallest key.
//! With monomial keys this is the local (lowest-degree-first) pivoting used
//! for truncated ideals.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Arc;

use crate::field::{Elem, FieldSpec};

pub type SparseVec<K> = Vec<(K, Elem)>;

/// `a + c * b` for sorted sparse vectors.
pub fn axpy<K: Ord + Copy>(k: &FieldSpec, a: &[(K, Elem)], c: Elem, b: &[(K, Elem)]) -> SparseVec<K> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            let v = k.mul(c, b[j].1);
            if v != 0 {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = k.add(a[i].1, k.mul(c, b[j].1));
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Echelon basis of a span, optionally tracking each row as a combination of
/// the inserted input vectors.
#[derive(Clone)]
pub struct Echelon<K: Ord + Copy + Hash> {
    field: Arc<FieldSpec>,
    rows: Vec<SparseVec<K>>,
    tags: Vec<SparseVec<usize>>,
    pivots: HashMap<K, usize>,
    track: bool,
    inserted: usize,
}

impl<K: Ord + Copy + Hash> Echelon<K> {
    pub fn new(field: &Arc<FieldSpec>) -> Self {
        Echelon { field: field.clone(), rows: Vec::new(), tags: Vec::new(), pivots: HashMap::new(), track: false, inserted: 0 }
    }

    pub fn tracking(field: &Arc<FieldSpec>) -> Self {
        Echelon { track: true, ..Echelon::new(field) }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Echelon rows, each normalized to pivot coefficient 1.
    pub fn rows(&self) -> &[SparseVec<K>] {
        &self.rows
    }

    pub fn pivot_keys(&self) -> impl Iterator<Item = &K> {
        self.pivots.keys()
    }

    pub fn has_pivot(&self, key: &K) -> bool {
        self.pivots.contains_key(key)
    }

    /// Number of vectors passed to [`Echelon::insert`] so far.
    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Leading-term reduction. Returns the remainder (empty iff `v` lies in
    /// the span) and, when tracking, the combination of inserted vectors
    /// that was subtracted.
    pub fn reduce(&self, v: SparseVec<K>) -> (SparseVec<K>, SparseVec<usize>) {
        let k = &*self.field;
        let mut v = v;
        let mut combo: SparseVec<usize> = Vec::new();
        // rows are normalized so their pivot coefficient is 1
        loop {
            let Some(&(lead, c)) = v.first() else { break };
            let Some(&ri) = self.pivots.get(&lead) else { break };
            let neg = k.neg(c);
            v = axpy(k, &v, neg, &self.rows[ri]);
            if self.track {
                combo = axpy(k, &combo, c, &self.tags[ri]);
            }
        }
        (v, combo)
    }

    /// Reduces `v` completely (every key with a pivot is eliminated), so the
    /// result is a canonical representative modulo the span.
    pub fn reduce_full(&self, v: SparseVec<K>) -> SparseVec<K> {
        let k = &*self.field;
        let mut rest = v;
        let mut out: SparseVec<K> = Vec::new();
        while let Some(&(lead, c)) = rest.first() {
            match self.pivots.get(&lead) {
                Some(&ri) => rest = axpy(k, &rest, k.neg(c), &self.rows[ri]),
                None => {
                    out.push((lead, c));
                    rest.remove(0);
                }
            }
        }
        out
    }

    /// Inserts a vector. Returns `Some(combination)` expressing a linear
    /// dependency (with the new vector's coefficient 1) when `v` was already
    /// in the span, `None` when the rank grew.
    pub fn insert(&mut self, v: SparseVec<K>) -> Option<SparseVec<usize>> {
        let idx = self.inserted;
        self.inserted += 1;
        let (r, combo) = self.reduce(v);
        let k = self.field.clone();
        let mut tag = if self.track { axpy(&k, &[(idx, 1)], k.neg(1), &combo) } else { Vec::new() };
        match r.first() {
            None => Some(tag),
            Some(&(lead, c)) => {
                let inv = k.inv(c).expect("nonzero pivot");
                let row: SparseVec<K> = r.iter().map(|&(key, x)| (key, k.mul(x, inv))).collect();
                if self.track {
                    tag = tag.iter().map(|&(key, x)| (key, k.mul(x, inv))).collect();
                }
                self.pivots.insert(lead, self.rows.len());
                self.rows.push(row);
                self.tags.push(tag);
                None
            }
        }
    }

    /// Solves `sum c_j v_j = b` over the inserted vectors `v_j`.
    pub fn solve(&self, b: SparseVec<K>) -> Option<SparseVec<usize>> {
        assert!(self.track, "solve requires a tracking echelon");
        let (r, combo) = self.reduce(b);
        r.is_empty().then_some(combo)
    }
}

/// Basis of the right kernel of a dense matrix.
pub fn dense_kernel(k: &FieldSpec, rows: &[Vec<Elem>], ncols: usize) -> Vec<Vec<Elem>> {
    let mut m: Vec<Vec<Elem>> = rows.to_vec();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, pr);
        let inv = k.inv(m[r][c]).expect("nonzero");
        for x in m[r].iter_mut() {
            *x = k.mul(*x, inv);
        }
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..ncols {
                    let v = k.sub(m[i][j], k.mul(f, m[r][j]));
                    m[i][j] = v;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivot_cols.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0; ncols];
            v[fc] = 1;
            for (i, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = k.neg(m[i][fc]);
            }
            v
        })
        .collect()
}

/// Extends independent vectors to a basis of `k^n` with standard vectors.
pub fn complete_basis(k: &FieldSpec, vecs: &[Vec<Elem>], n: usize) -> Vec<Vec<Elem>> {
    let mut out: Vec<Vec<Elem>> = vecs.to_vec();
    for i in 0..n {
        if out.len() == n {
            break;
        }
        let mut e = vec![0; n];
        e[i] = 1;
        let mut trial = out.clone();
        trial.push(e.clone());
        if dense_rank(k, &trial, n) == trial.len() {
            out.push(e);
        }
    }
    out
}

pub fn dense_rank(k: &FieldSpec, rows: &[Vec<Elem>], ncols: usize) -> usize {
    // rank = ncols - dim ker(rows)
    ncols - dense_kernel(k, rows, ncols).len()
}

/// Inverse of a square matrix, if invertible.
pub fn dense_inverse(k: &FieldSpec, m: &[Vec<Elem>]) -> Option<Vec<Vec<Elem>>> {
    let n = m.len();
    let mut a: Vec<Vec<Elem>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1 } else { 0 }));
            r
        })
        .collect();
    for c in 0..n {
        let pr = (c..n).find(|&i| a[i][c] != 0)?;
        a.swap(c, pr);
        let inv = k.inv(a[c][c])?;
        for x in a[c].iter_mut() {
            *x = k.mul(*x, inv);
        }
        for i in 0..n {
            if i != c && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..2 * n {
                    a[i][j] = k.sub(a[i][j], k.mul(f, a[c][j]));
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_dependencies() {
        let k = FieldSpec::prime(5).unwrap();
        let mut e: Echelon<u32> = Echelon::tracking(&k);
        assert!(e.insert(vec![(0, 1), (2, 3)]).is_none());
        assert!(e.insert(vec![(1, 2), (2, 1)]).is_none());
        // 2*v0 + v1 = (2, 2, 7=2)
        let dep = e.insert(vec![(0, 2), (1, 2), (2, 2)]).unwrap();
        assert_eq!(e.rank(), 2);
        // dependency v2 - 2 v0 - v1 = 0
        assert_eq!(dep, vec![(0, k.from_int(-2)), (1, k.from_int(-1)), (2, 1)]);
        let sol = e.solve(vec![(0, 1), (1, 1), (2, 1)]).unwrap();
        let mut acc: SparseVec<u32> = Vec::new();
        let vs = [vec![(0u32, 1u64), (2, 3)], vec![(1, 2), (2, 1)]];
        for &(j, c) in &sol {
            acc = axpy(&k, &acc, c, &vs[j]);
        }
        assert_eq!(acc, vec![(0, 1), (1, 1), (2, 1)]);
        assert!(e.solve(vec![(3, 1)]).is_none());
    }

    #[test]
    fn full_reduction_is_canonical() {
        let k = FieldSpec::prime(3).unwrap();
        let mut e: Echelon<u32> = Echelon::new(&k);
        e.insert(vec![(0, 1), (1, 1)]);
        e.insert(vec![(1, 1), (2, 2)]);
        let a = e.reduce_full(vec![(0, 1)]);
        let b = e.reduce_full(vec![(0, 1), (1, 2), (2, 1)]);
        assert_eq!(a, vec![(2, 2)]);
        assert_eq!(a, b);
    }

    #[test]
    fn dense_helpers() {
        let k = FieldSpec::prime(5).unwrap();
        let rows = vec![vec![1, 2, 3], vec![2, 4, 1]];
        let ker = dense_kernel(&k, &rows, 3);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert_eq!(k.add(k.add(v[0], k.mul(2, v[1])), k.mul(3, v[2])), 0);
        }
        let basis = complete_basis(&k, &[vec![0, 0, 1]], 3);
        assert_eq!(dense_rank(&k, &basis, 3), 3);
        let m = vec![vec![1, 2], vec![3, 4]];
        let inv = dense_inverse(&k, &m).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let e = (0..2).fold(0, |acc, t| k.add(acc, k.mul(m[i][t], inv[t][j])));
                assert_eq!(e, (i == j) as u64);
            }
        }
        assert!(dense_inverse(&k, &rows[..2].iter().map(|r| r[..2].to_vec()).collect::<Vec<_>>()).is_none());
    }
}
