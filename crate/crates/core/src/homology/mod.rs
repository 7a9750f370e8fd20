//! Homology of a graded complex: mod-2 Betti numbers, and integer homology
//! through Smith normal form when the complex carries integer signs.

mod snf;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::gf2;
use crate::graph_complex::{ComplexError, GradedComplex, Matrix};

pub use snf::{determinant, identity, is_unimodular, mul, smith_normal_form, to_big, IntMatrix, Snf};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntegerGroup {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl IntegerGroup {
    pub fn rank_mod2(&self) -> usize {
        self.free_rank + self.torsion.iter().filter(|&&t| t % 2 == 0).count()
    }

    /// `Z^4 + (Z/2)^2 + Z/4`, or `0`.
    pub fn notation(&self) -> String {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for (t, k) in self.torsion.iter().dedup_with_count().map(|(k, t)| (t, k)) {
            parts.push(if k == 1 { format!("Z/{t}") } else { format!("(Z/{t})^{k}") });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologySummary {
    pub betti2: Vec<usize>,
    pub euler: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariant_factors: Option<BTreeMap<usize, IntegerGroup>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("euler characteristic mismatch: chains {chains}, betti {betti}")]
    EulerMismatch { chains: i64, betti: i64 },
}

fn alternating(xs: &[usize]) -> i64 {
    xs.iter().enumerate().map(|(d, &x)| if d % 2 == 0 { x as i64 } else { -(x as i64) }).sum()
}

/// Ranks of the boundary maps mod 2, degree by degree (`ranks[0] = 0`).
pub fn boundary_ranks(c: &GradedComplex) -> Vec<usize> {
    let dims = c.dims();
    (0..=c.top())
        .into_par_iter()
        .map(|d| if d == 0 { 0 } else { gf2::rank(&c.boundary[d].gf2_columns(), dims[d - 1]) })
        .collect()
}

pub fn betti_mod2(c: &GradedComplex) -> Result<HomologySummary, HomologyError> {
    c.check_d_squared()?;
    let dims = c.dims();
    let ranks = boundary_ranks(c);
    let betti2: Vec<usize> =
        (0..dims.len()).map(|d| dims[d] - ranks[d] - ranks.get(d + 1).copied().unwrap_or(0)).collect();
    let (chains, betti) = (alternating(&dims), alternating(&betti2));
    if chains != betti {
        return Err(HomologyError::EulerMismatch { chains, betti });
    }
    Ok(HomologySummary { betti2, euler: betti, invariant_factors: None })
}

pub fn cokernel(m: &Matrix) -> IntegerGroup {
    let f = smith_normal_form(&to_big(&m.dense())).factors;
    IntegerGroup { free_rank: m.rows - f.len(), torsion: torsion_of(&f) }
}

fn torsion_of(f: &[BigInt]) -> Vec<u64> {
    f.iter().filter(|x| !x.is_one()).map(|x| x.to_u64().expect("invariant factor fits u64")).collect()
}

/// Integer homology of a complex with signed boundaries, plus the mod-2 summary.
pub fn integer_homology(c: &GradedComplex) -> Result<HomologySummary, HomologyError> {
    let mut s = betti_mod2(c)?;
    let dims = c.dims();
    let forms: Vec<Vec<BigInt>> = (0..=c.top())
        .into_par_iter()
        .map(|d| if d == 0 { Vec::new() } else { smith_normal_form(&to_big(&c.boundary[d].dense())).factors })
        .collect();
    let mut out = BTreeMap::new();
    for d in 0..dims.len() {
        let r_in = forms[d].len();
        let above = forms.get(d + 1).map(|f| f.as_slice()).unwrap_or(&[]);
        out.insert(d, IntegerGroup { free_rank: dims[d] - r_in - above.len(), torsion: torsion_of(above) });
    }
    s.invariant_factors = Some(out);
    Ok(s)
}

impl HomologySummary {
    pub fn to_text(&self) -> String {
        let mut s = String::from("degree  betti2");
        if self.invariant_factors.is_some() {
            s.push_str("  integral");
        }
        s.push('\n');
        for (d, b) in self.betti2.iter().enumerate() {
            let _ = write!(s, "{d:>6}  {b:>6}");
            if let Some(g) = self.invariant_factors.as_ref().and_then(|m| m.get(&d)) {
                let _ = write!(s, "  {}", g.notation());
            }
            s.push('\n');
        }
        let _ = writeln!(s, "euler {}", self.euler);
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("summary json")
    }
}
