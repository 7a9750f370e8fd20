//! Smith normal form over the integers with transformation certificates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snf {
    /// Nonzero diagonal entries, each dividing the next.
    pub factors: Vec<BigInt>,
    /// `u * m * v` is diagonal with `factors` leading the diagonal.
    pub u: IntMatrix,
    pub v: IntMatrix,
}

pub fn to_big(m: &[Vec<i64>]) -> IntMatrix {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn identity(k: usize) -> IntMatrix {
    (0..k)
        .map(|i| (0..k).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut s = BigInt::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            s += &row[k] * &b[k][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

struct State {
    a: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
    cols: usize,
}

impl State {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for r in self.a.iter_mut().chain(self.v.iter_mut()) {
            r.swap(i, j);
        }
    }

    /// row_i -= q * row_j
    fn row_sub(&mut self, i: usize, j: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.u] {
            let (ri, rj) = pick(m, i, j);
            for (x, y) in ri.iter_mut().zip(rj.iter()) {
                if !y.is_zero() {
                    *x -= q * y;
                }
            }
        }
    }

    /// Rows `(t, i)` become `(x r_t + y r_i, c r_t + d r_i)`.
    fn row_mix(&mut self, t: usize, i: usize, [x, y, c, d]: &[BigInt; 4]) {
        for m in [&mut self.a, &mut self.u] {
            let (rt, ri) = (m[t].clone(), m[i].clone());
            for k in 0..rt.len() {
                m[t][k] = x * &rt[k] + y * &ri[k];
                m[i][k] = c * &rt[k] + d * &ri[k];
            }
        }
    }

    fn col_mix(&mut self, t: usize, j: usize, [x, y, c, d]: &[BigInt; 4]) {
        for r in self.a.iter_mut().chain(self.v.iter_mut()) {
            let (a, b) = (r[t].clone(), r[j].clone());
            r[t] = x * &a + y * &b;
            r[j] = c * &a + d * &b;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut().chain(self.u[i].iter_mut()) {
            *x = -&*x;
        }
    }

    fn smallest(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.len() {
            for j in t..self.cols {
                let x = &self.a[i][j];
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < self.a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }
}

/// Unimodular `[x, y, c, d]` taking `(a, b)` to `(gcd, 0)`.
fn bezout(a: &BigInt, b: &BigInt) -> [BigInt; 4] {
    if b.is_multiple_of(a) {
        return [BigInt::one(), BigInt::zero(), -(b / a), BigInt::one()];
    }
    let e = a.extended_gcd(b);
    [e.x, e.y, -(b / &e.gcd), a / &e.gcd]
}

fn pick(m: &mut IntMatrix, i: usize, j: usize) -> (&mut Vec<BigInt>, &Vec<BigInt>) {
    if i < j {
        let (lo, hi) = m.split_at_mut(j);
        (&mut lo[i], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(i);
        (&mut hi[0], &lo[j])
    }
}

/// Smallest-pivot elimination; the matrix is given row-major.
pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut s = State { a: m.clone(), u: identity(rows), v: identity(cols), cols };
    let mut factors = Vec::new();
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = s.smallest(t) else { break };
        s.swap_rows(t, pi);
        s.swap_cols(t, pj);
        loop {
            for i in t + 1..rows {
                if !s.a[i][t].is_zero() {
                    s.row_mix(t, i, &bezout(&s.a[t][t], &s.a[i][t]));
                }
            }
            for j in t + 1..cols {
                if !s.a[t][j].is_zero() {
                    s.col_mix(t, j, &bezout(&s.a[t][t], &s.a[t][j]));
                }
            }
            if (t + 1..rows).any(|i| !s.a[i][t].is_zero()) {
                continue;
            }
            let p = s.a[t][t].clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !s.a[i][j].is_multiple_of(&p)));
            match bad {
                Some(i) => s.row_sub(t, i, &-BigInt::one()),
                None => break,
            }
        }
        if s.a[t][t].is_negative() {
            s.negate_row(t);
        }
        factors.push(s.a[t][t].clone());
    }
    Snf { factors, u: s.u, v: s.v }
}

/// Fraction-free determinant.
pub fn determinant(m: &IntMatrix) -> BigInt {
    let k = m.len();
    if k == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for t in 0..k - 1 {
        if a[t][t].is_zero() {
            match (t + 1..k).find(|&i| !a[i][t].is_zero()) {
                Some(i) => {
                    a.swap(t, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in t + 1..k {
            for j in t + 1..k {
                a[i][j] = (&a[i][j] * &a[t][t] - &a[i][t] * &a[t][j]) / &prev;
            }
        }
        prev = a[t][t].clone();
    }
    sign * &a[k - 1][k - 1]
}

/// Square with `|det| = 1`.
pub fn is_unimodular(m: &IntMatrix) -> bool {
    m.iter().all(|r| r.len() == m.len()) && determinant(m).abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &[Vec<i64>], want: &[i64]) {
        let b = to_big(m);
        let s = smith_normal_form(&b);
        assert_eq!(s.factors, want.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
        let d = mul(&mul(&s.u, &b), &s.v);
        for (i, r) in d.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                let expect = if i == j && i < want.len() { BigInt::from(want[i]) } else { BigInt::zero() };
                assert_eq!(*x, expect);
            }
        }
        assert!(is_unimodular(&s.u) && is_unimodular(&s.v));
    }

    #[test]
    fn small_forms() {
        check(&[vec![2, 4], vec![6, 8]], &[2, 4]);
        check(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], &[1, 1, 1]);
        check(&[vec![0, 0], vec![0, 0], vec![0, 0]], &[]);
        check(&[vec![2, 0], vec![0, 3]], &[1, 6]);
        check(&[vec![4, 6, 10]], &[2]);
        assert!(smith_normal_form(&Vec::new()).factors.is_empty());
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&to_big(&[vec![0, 1], vec![1, 0]])), BigInt::from(-1));
        assert_eq!(determinant(&to_big(&[vec![2, 1, 0], vec![1, 2, 1], vec![0, 1, 2]])), BigInt::from(4));
        assert!(!is_unimodular(&to_big(&[vec![2, 0], vec![0, 1]])));
    }
}
