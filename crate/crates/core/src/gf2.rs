//! Linear algebra over the two-element field.
//!
//! Vectors are sorted index lists. Matrices up to [`DENSE_LIMIT`] rows are
//! eliminated on packed bit rows, larger ones on the sparse lists directly.

use std::collections::HashMap;

pub type SparseVec = Vec<u32>;

pub const DENSE_LIMIT: usize = 5000;

/// `a += b` over GF(2); both sorted.
pub fn xor_into(a: &mut SparseVec, b: &[u32]) {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    *a = out;
}

/// Sorted support of the odd-multiplicity entries.
pub fn from_indices(ix: impl IntoIterator<Item = usize>) -> SparseVec {
    let mut v: Vec<u32> = ix.into_iter().map(|i| i as u32).collect();
    v.sort_unstable();
    let mut out = Vec::with_capacity(v.len());
    for x in v {
        if out.last() == Some(&x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

/// Incremental echelon basis keyed by the largest index of each vector.
#[derive(Debug, Clone, Default)]
pub struct Reducer {
    basis: HashMap<u32, SparseVec>,
}

impl Reducer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_vectors<'a>(vs: impl IntoIterator<Item = &'a SparseVec>) -> Self {
        let mut r = Self::new();
        for v in vs {
            r.add(v.clone());
        }
        r
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = u32> + '_ {
        self.basis.keys().copied()
    }

    pub fn is_pivot(&self, i: u32) -> bool {
        self.basis.contains_key(&i)
    }

    /// Reduce until the leading index is not a pivot.
    pub fn reduce(&self, mut x: SparseVec) -> SparseVec {
        while let Some(&h) = x.last() {
            match self.basis.get(&h) {
                Some(b) => xor_into(&mut x, b),
                None => break,
            }
        }
        x
    }

    /// Representative with no pivot coordinates.
    pub fn full_reduce(&self, mut x: SparseVec) -> SparseVec {
        let mut kept = Vec::new();
        while let Some(&h) = x.last() {
            match self.basis.get(&h) {
                Some(b) => xor_into(&mut x, b),
                None => {
                    kept.push(h);
                    x.pop();
                }
            }
        }
        kept.reverse();
        kept
    }

    pub fn contains(&self, x: &SparseVec) -> bool {
        self.reduce(x.clone()).is_empty()
    }

    /// Returns whether the rank grew.
    pub fn add(&mut self, x: SparseVec) -> bool {
        let x = self.reduce(x);
        match x.last() {
            Some(&h) => {
                self.basis.insert(h, x);
                true
            }
            None => false,
        }
    }
}

fn rank_sparse(cols: &[SparseVec]) -> usize {
    let mut r = Reducer::new();
    cols.iter().filter(|c| r.add((*c).clone())).count()
}

fn rank_dense(cols: &[SparseVec], nrows: usize) -> usize {
    let words = nrows.div_ceil(64).max(1);
    let mut pivots: HashMap<usize, Vec<u64>> = HashMap::new();
    let mut rank = 0;
    for c in cols {
        let mut row = vec![0u64; words];
        for &i in c {
            row[i as usize / 64] ^= 1 << (i % 64);
        }
        loop {
            let Some(w) = (0..words).rev().find(|&w| row[w] != 0) else { break };
            let lead = w * 64 + 63 - row[w].leading_zeros() as usize;
            match pivots.get(&lead) {
                Some(p) => {
                    for k in 0..=w {
                        row[k] ^= p[k];
                    }
                }
                None => {
                    pivots.insert(lead, row);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

/// Rank of the matrix with the given columns.
pub fn rank(cols: &[SparseVec], nrows: usize) -> usize {
    if nrows <= DENSE_LIMIT {
        rank_dense(cols, nrows)
    } else {
        rank_sparse(cols)
    }
}

/// Rank by the sparse path regardless of size.
pub fn rank_sparse_path(cols: &[SparseVec]) -> usize {
    rank_sparse(cols)
}

/// Columns of the product `a * b`, where `a` has the given columns.
pub fn compose(a: &[SparseVec], b: &[SparseVec]) -> Vec<SparseVec> {
    b.iter()
        .map(|col| {
            let mut acc = Vec::new();
            for &j in col {
                xor_into(&mut acc, &a[j as usize]);
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xor_and_rank() {
        let mut a = vec![1, 3, 5];
        xor_into(&mut a, &[3, 4]);
        assert_eq!(a, vec![1, 4, 5]);
        let cols = vec![vec![0, 1], vec![1, 2], vec![0, 2]];
        assert_eq!(rank(&cols, 3), 2);
        assert_eq!(rank_sparse_path(&cols), 2);
        assert_eq!(from_indices([2, 1, 2, 0]), vec![0, 1]);
    }

    #[test]
    fn reducer_quotient_coordinates() {
        let r = Reducer::from_vectors(&[vec![0, 2], vec![1, 2]]);
        assert_eq!(r.rank(), 2);
        assert_eq!(r.full_reduce(vec![2]), vec![0]);
        assert!(r.contains(&vec![0, 1]));
    }
}
