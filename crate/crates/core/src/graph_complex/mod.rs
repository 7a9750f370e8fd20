//! Graded chain groups spanned by strata, the relation ideal and the boundary.

mod relations;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::decorated_trees::Sign;
use crate::enumeration::{ClassId, StrataPoset};
use crate::gf2::{self, Reducer, SparseVec};

pub use relations::{relation_chains, RelationChain};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Coeff {
    Z2,
    ZExperimental,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("degree {0} out of range")]
    DegreeOutOfRange(usize),
    #[error("boundary squares to nonzero into degree {0}")]
    ComplexAxiomViolated(usize),
    #[error("boundary of relation {index} in degree {degree} leaves the ideal")]
    RelationsNotClosedUnderBoundary { degree: usize, index: usize },
    #[error("integer quotient by a nonzero ideal is not supported")]
    IntegerQuotientUnsupported,
}

/// Sparse integer matrix; entries `(row, col, value)` sorted by column then row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, i64)>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, entries: Vec::new() }
    }

    pub fn from_columns(rows: usize, cols: &[BTreeMap<usize, i64>]) -> Matrix {
        let mut entries = Vec::new();
        for (j, c) in cols.iter().enumerate() {
            for (&i, &v) in c {
                if v != 0 {
                    entries.push((i, j, v));
                }
            }
        }
        Matrix { rows, cols: cols.len(), entries }
    }

    pub fn from_gf2(rows: usize, cols: &[SparseVec]) -> Matrix {
        let mut entries = Vec::new();
        for (j, c) in cols.iter().enumerate() {
            entries.extend(c.iter().map(|&i| (i as usize, j, 1)));
        }
        Matrix { rows, cols: cols.len(), entries }
    }

    /// Columns reduced mod 2.
    pub fn gf2_columns(&self) -> Vec<SparseVec> {
        let mut cols = vec![Vec::new(); self.cols];
        for &(i, j, v) in &self.entries {
            if v.rem_euclid(2) == 1 {
                cols[j].push(i as u32);
            }
        }
        cols
    }

    pub fn dense(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0; self.cols]; self.rows];
        for &(i, j, v) in &self.entries {
            m[i][j] += v;
        }
        m
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("matrix json")
    }

    /// SMS text: header `rows cols M`, one `row col value` line per entry (1-based), `0 0 0` terminator.
    pub fn to_sms(&self) -> String {
        let mut s = format!("{} {} M\n", self.rows, self.cols);
        for &(i, j, v) in &self.entries {
            let _ = writeln!(s, "{} {} {}", i + 1, j + 1, v);
        }
        s.push_str("0 0 0\n");
        s
    }
}

#[derive(Debug, Clone)]
pub struct GradedComplex {
    pub coeff: Coeff,
    /// Per degree, the generating classes (after a quotient, the surviving coordinates).
    pub generators: Vec<Vec<ClassId>>,
    /// Per degree, relation chains over the generators of that degree.
    pub relations: Vec<Vec<RelationChain>>,
    /// `boundary[d]`: rows are degree `d-1`, columns degree `d`; `boundary[0]` is empty.
    pub boundary: Vec<Matrix>,
}

/// Sign of a contraction relative to canonical representatives, times per-class orientation bits.
fn orientation_bit(key: &[u8]) -> i64 {
    if key.iter().map(|b| b.count_ones()).sum::<u32>() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Boundary from degree `d` to `d-1`.
pub fn boundary_matrix(p: &StrataPoset, d: usize, coeff: Coeff) -> Result<Matrix, ComplexError> {
    if d == 0 || d > p.top_dim() {
        return Err(ComplexError::DegreeOutOfRange(d));
    }
    let rows = p.classes[d - 1].len();
    let mut cols: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); p.classes[d].len()];
    match coeff {
        Coeff::Z2 => {
            for c in p.coverings.iter().filter(|c| c.upper.dim == d) {
                *cols[c.upper.idx].entry(c.lower.idx).or_insert(0) += c.mult as i64;
            }
            for c in cols.iter_mut() {
                c.retain(|_, v| {
                    *v %= 2;
                    *v != 0
                });
            }
        }
        Coeff::ZExperimental => {
            let sig = &p.sigma;
            let contribs: Vec<Vec<(usize, usize, i64)>> = (0..rows)
                .into_par_iter()
                .map(|i| {
                    let lower = p.classes[d - 1][i].clone();
                    let t = &lower.rep;
                    let mut out = Vec::new();
                    for (vi, m) in t.invariant_edges(sig) {
                        for s in Sign::BOTH {
                            let up = t.contract_invariant(sig, vi, m, s).encoding(sig);
                            let id = p.lookup(&up).expect("contraction is a class");
                            let e = s.value() * orientation_bit(&lower.key) * orientation_bit(&up);
                            out.push((i, id.idx, e));
                        }
                    }
                    out
                })
                .collect();
            for (i, j, e) in contribs.into_iter().flatten() {
                *cols[j].entry(i).or_insert(0) += e;
            }
        }
    }
    Ok(Matrix::from_columns(rows, &cols))
}

/// Relation vectors mod 2 over the generators of degree `d`.
pub fn relation_generators(p: &StrataPoset, d: usize) -> Vec<SparseVec> {
    let mut out: Vec<SparseVec> = relation_chains(p, d)
        .iter()
        .map(|r| gf2::from_indices(r.g1.iter().chain(&r.g2).copied()))
        .filter(|v| !v.is_empty())
        .collect();
    out.sort();
    out.dedup();
    out
}

impl GradedComplex {
    pub fn build(p: &StrataPoset, coeff: Coeff) -> GradedComplex {
        let top = p.top_dim();
        let generators = (0..=top)
            .map(|d| (0..p.classes[d].len()).map(|idx| ClassId { dim: d, idx }).collect())
            .collect();
        let mut boundary = vec![Matrix::zero(0, p.classes[0].len())];
        for d in 1..=top {
            boundary.push(boundary_matrix(p, d, coeff).expect("degree in range"));
        }
        let relations = (0..=top).map(|d| relation_chains(p, d)).collect();
        GradedComplex { coeff, generators, relations, boundary }
    }

    pub fn top(&self) -> usize {
        self.generators.len() - 1
    }

    pub fn dims(&self) -> Vec<usize> {
        self.generators.iter().map(|g| g.len()).collect()
    }

    pub fn relation_vectors(&self, d: usize) -> Vec<SparseVec> {
        let mut out: Vec<SparseVec> = self.relations[d]
            .iter()
            .map(|r| gf2::from_indices(r.g1.iter().chain(&r.g2).copied()))
            .filter(|v| !v.is_empty())
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn relation_rank(&self, d: usize) -> usize {
        Reducer::from_vectors(&self.relation_vectors(d)).rank()
    }

    /// `boundary[d-1] * boundary[d] == 0` for every `d`, over the active ring.
    pub fn check_d_squared(&self) -> Result<(), ComplexError> {
        for d in 2..=self.top() {
            let ok = match self.coeff {
                Coeff::Z2 => {
                    let a = self.boundary[d - 1].gf2_columns();
                    let b = self.boundary[d].gf2_columns();
                    gf2::compose(&a, &b).iter().all(|c| c.is_empty())
                }
                Coeff::ZExperimental => integer_product_is_zero(&self.boundary[d - 1], &self.boundary[d]),
            };
            if !ok {
                return Err(ComplexError::ComplexAxiomViolated(d - 2));
            }
        }
        Ok(())
    }

    /// Boundary of each relation lies in the span of the relations one degree down (mod 2).
    pub fn check_relations_closed(&self) -> Result<(), ComplexError> {
        for d in 1..=self.top() {
            let below = Reducer::from_vectors(&self.relation_vectors(d - 1));
            let cols = self.boundary[d].gf2_columns();
            for (index, r) in self.relation_vectors(d).iter().enumerate() {
                let img = gf2::compose(&cols, std::slice::from_ref(r)).pop().unwrap();
                if !below.contains(&img) {
                    return Err(ComplexError::RelationsNotClosedUnderBoundary { degree: d, index });
                }
            }
        }
        Ok(())
    }

    /// Quotient by the relation ideal in coordinates complementary to the relation pivots.
    pub fn quotient(&self) -> Result<GradedComplex, ComplexError> {
        if self.relations.iter().all(|r| r.is_empty()) {
            return Ok(self.clone());
        }
        if self.coeff == Coeff::ZExperimental {
            return Err(ComplexError::IntegerQuotientUnsupported);
        }
        self.check_relations_closed()?;
        let reducers: Vec<Reducer> = (0..=self.top()).map(|d| Reducer::from_vectors(&self.relation_vectors(d))).collect();
        let keep: Vec<Vec<usize>> = (0..=self.top())
            .map(|d| (0..self.generators[d].len()).filter(|&i| !reducers[d].is_pivot(i as u32)).collect())
            .collect();
        let generators = keep
            .iter()
            .enumerate()
            .map(|(d, k)| k.iter().map(|&i| self.generators[d][i]).collect())
            .collect();
        let mut boundary = vec![Matrix::zero(0, keep[0].len())];
        for d in 1..=self.top() {
            let cols = self.boundary[d].gf2_columns();
            let pos: BTreeMap<usize, usize> = keep[d - 1].iter().enumerate().map(|(a, &b)| (b, a)).collect();
            let new_cols: Vec<SparseVec> = keep[d]
                .iter()
                .map(|&j| {
                    let red = reducers[d - 1].full_reduce(cols[j].clone());
                    let mut v: SparseVec = red.iter().map(|i| pos[&(*i as usize)] as u32).collect();
                    v.sort_unstable();
                    v
                })
                .collect();
            boundary.push(Matrix::from_gf2(keep[d - 1].len(), &new_cols));
        }
        Ok(GradedComplex {
            coeff: self.coeff,
            generators,
            relations: vec![Vec::new(); self.top() + 1],
            boundary,
        })
    }
}

fn integer_product_is_zero(a: &Matrix, b: &Matrix) -> bool {
    let mut acols: Vec<Vec<(usize, i64)>> = vec![Vec::new(); a.cols];
    for &(i, j, v) in &a.entries {
        acols[j].push((i, v));
    }
    let mut bcols: Vec<Vec<(usize, i64)>> = vec![Vec::new(); b.cols];
    for &(i, j, v) in &b.entries {
        bcols[j].push((i, v));
    }
    bcols.iter().all(|col| {
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for &(k, v) in col {
            for &(i, w) in &acols[k] {
                *acc.entry(i).or_insert(0) += v * w;
            }
        }
        acc.values().all(|&x| x == 0)
    })
}
