#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use rmoduli_core::decorated_trees::{canonicalize, InvolutionSpec, OPlanarTree, Sign, TypeMarker};
use rmoduli_core::enumeration::{enumerate_classes, ClassId, StrataPoset};
use rmoduli_core::gf2::{self, Reducer};
use rmoduli_core::graph_complex::{Coeff, GradedComplex};
use rmoduli_core::homology::{is_unimodular, mul, smith_normal_form, IntMatrix};

pub struct Fixture {
    pub poset: StrataPoset,
    pub complex: GradedComplex,
    pub quotient: Option<GradedComplex>,
}

pub fn fixture(sigma: &InvolutionSpec) -> Arc<Fixture> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, String), Arc<Fixture>>>> = OnceLock::new();
    let key = (sigma.n(), sigma.tag());
    if let Some(f) = CACHE.get_or_init(Default::default).lock().unwrap().get(&key) {
        return f.clone();
    }
    let poset = enumerate_classes(sigma);
    let complex = GradedComplex::build(&poset, Coeff::Z2);
    let quotient = complex.quotient().ok();
    let f = Arc::new(Fixture { poset, complex, quotient });
    CACHE.get().unwrap().lock().unwrap().insert(key, f.clone());
    f
}

/// One representative per conjugacy class of involutions on `n` labels.
pub fn conjugacy_types(n: usize) -> Vec<InvolutionSpec> {
    (0..=n / 2)
        .map(|k| InvolutionSpec::new(n, (0..k as u8).map(|i| (2 * i + 1, 2 * i + 2)).collect()).unwrap())
        .collect()
}

/// Random involution on `n` labels for `n` in the range.
pub fn sigma_strategy(lo: usize, hi: usize) -> impl Strategy<Value = InvolutionSpec> {
    (lo..=hi)
        .prop_flat_map(|n| (Just(n), 0..=n / 2, Just((1..=n as u8).collect::<Vec<u8>>()).prop_shuffle()))
        .prop_map(|(n, k, labels)| {
            let pairs = (0..k).map(|i| (labels[2 * i], labels[2 * i + 1])).collect();
            InvolutionSpec::new(n, pairs).unwrap()
        })
}

/// Involutions moving at least four labels, where the relation ideal is nonzero.
pub fn moving_sigma_strategy(lo: usize, hi: usize) -> impl Strategy<Value = InvolutionSpec> {
    sigma_strategy(lo, hi).prop_filter("needs four moved labels", |s| s.num_perm() >= 4)
}

fn pick<T>(xs: &[T], seed: u64) -> Option<&T> {
    if xs.is_empty() {
        None
    } else {
        Some(&xs[(seed % xs.len() as u64) as usize])
    }
}

fn random_class(p: &StrataPoset, seed: u64) -> ClassId {
    let ids: Vec<ClassId> = p.ids().collect();
    *pick(&ids, seed).unwrap()
}

/// Reverse the fixed vertices selected by the bits of `bits` (and swap the half for type 3).
fn other_representative(
    p: &StrataPoset,
    id: ClassId,
    bits: u64,
) -> rmoduli_core::decorated_trees::MaskTree {
    let t = &p.class(id).rep;
    let which: Vec<usize> = (0..t.verts.len()).filter(|i| bits >> (i % 64) & 1 == 1).collect();
    let r = t.reverse_at(&p.sigma, &which);
    if t.marker == TypeMarker::Type3 && bits >> 63 == 1 {
        r.swap_half()
    } else {
        r
    }
}

pub fn check_d_squared(sigma: &InvolutionSpec, seed: u64) -> Result<(), String> {
    let f = fixture(sigma);
    let mut complexes = vec![&f.complex];
    complexes.extend(f.quotient.as_ref());
    for c in complexes {
        if c.top() < 2 {
            continue;
        }
        let d = 2 + (seed % (c.top() as u64 - 1)) as usize;
        let prod = gf2::compose(&c.boundary[d - 1].gf2_columns(), &c.boundary[d].gf2_columns());
        if prod.iter().any(|x| !x.is_empty()) {
            return Err(format!("boundary squared nonzero for {} in degree {d}", sigma.notation()));
        }
    }
    Ok(())
}

pub fn check_relation_closed(sigma: &InvolutionSpec, seed: u64) -> Result<(), String> {
    let f = fixture(sigma);
    let c = &f.complex;
    let degrees: Vec<usize> = (1..=c.top()).filter(|&d| !c.relation_vectors(d).is_empty()).collect();
    let Some(&d) = pick(&degrees, seed) else { return Ok(()) };
    let rels = c.relation_vectors(d);
    let r = pick(&rels, seed / 7).unwrap();
    let img = gf2::compose(&c.boundary[d].gf2_columns(), std::slice::from_ref(r)).pop().unwrap();
    let below = c.relation_vectors(d - 1);
    let before = gf2::rank(&below, c.dims()[d - 1]);
    let mut with = below.clone();
    with.push(img);
    if gf2::rank(&with, c.dims()[d - 1]) != before {
        return Err(format!("relation in degree {d} for {} not closed", sigma.notation()));
    }
    Ok(())
}

pub fn check_canonical(sigma: &InvolutionSpec, seed: u64, bits: u64) -> Result<(), String> {
    let f = fixture(sigma);
    let p = &f.poset;
    let id = random_class(p, seed);
    let key = &p.class(id).key;
    let other = other_representative(p, id, bits);
    let c = other.canonical(sigma);
    if &c.key != key {
        return Err(format!("reversal changed the class of {id:?}"));
    }
    if &c.rep.canonical(sigma).key != key {
        return Err("canonical form not idempotent".into());
    }
    let ot = OPlanarTree::from_masks(sigma, &other);
    let u = canonicalize(&ot).map_err(|e| e.to_string())?;
    let again = canonicalize(&OPlanarTree::from_masks(sigma, &u.representative.to_masks().unwrap().0)).unwrap();
    if &u.canonical_encoding != key || again.canonical_encoding != u.canonical_encoding {
        return Err("tree-level canonicalization disagrees".into());
    }
    Ok(())
}

pub fn check_contraction(sigma: &InvolutionSpec, seed: u64, bits: u64) -> Result<(), String> {
    let f = fixture(sigma);
    let p = &f.poset;
    let id = random_class(p, seed);
    let t = &p.class(id).rep;
    let edges = t.invariant_edges(sigma);
    let Some(&(_, m)) = pick(&edges, seed / 13) else { return Ok(()) };
    let other = other_representative(p, id, bits);
    let sides = |x: &rmoduli_core::decorated_trees::MaskTree| -> Vec<Vec<u8>> {
        let vi = x.find_vertex(m).unwrap();
        let mut v: Vec<Vec<u8>> = Sign::BOTH.iter().map(|&s| x.contract_invariant(sigma, vi, m, s).encoding(sigma)).collect();
        v.sort();
        v
    };
    if sides(t) != sides(&other) {
        return Err(format!("sign pair depends on the representative of {id:?}"));
    }
    for (vi, m) in t.pair_edges(sigma) {
        let wi = other.find_vertex(m).unwrap();
        if t.contract_pair(sigma, vi, m).encoding(sigma) != other.contract_pair(sigma, wi, m).encoding(sigma) {
            return Err("pair contraction depends on the representative".into());
        }
    }
    Ok(())
}

pub fn check_multiplicity(sigma: &InvolutionSpec, seed: u64) -> Result<(), String> {
    let f = fixture(sigma);
    let p = &f.poset;
    let Some(c) = pick(&p.coverings, seed) else { return Ok(()) };
    if !(1..=2).contains(&c.mult) {
        return Err(format!("multiplicity {}", c.mult));
    }
    let t = &p.class(c.lower).rep;
    let upper = &p.class(c.upper).key;
    let hits: usize = t
        .invariant_edges(sigma)
        .iter()
        .map(|&(vi, m)| Sign::BOTH.iter().filter(|&&s| &t.contract_invariant(sigma, vi, m, s).encoding(sigma) == upper).count())
        .sum();
    let listed: usize = p.coverings.iter().filter(|x| x.lower == c.lower && x.upper == c.upper).map(|x| x.mult as usize).sum();
    if hits != listed {
        return Err(format!("covering multiplicity {listed} but {hits} contractions"));
    }
    Ok(())
}

pub fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-9i64..=9, c), r))
}

pub fn check_snf(m: &[Vec<i64>]) -> Result<(), String> {
    let b: IntMatrix = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let s = smith_normal_form(&b);
    if !is_unimodular(&s.u) || !is_unimodular(&s.v) {
        return Err("certificate not unimodular".into());
    }
    let d = mul(&mul(&s.u, &b), &s.v);
    for (i, row) in d.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let want = if i == j && i < s.factors.len() { s.factors[i].clone() } else { BigInt::zero() };
            if *x != want {
                return Err(format!("U m V differs at ({i},{j})"));
            }
        }
    }
    if s.factors.iter().any(|x| !x.is_positive()) || s.factors.windows(2).any(|w| !(&w[1] % &w[0]).is_zero()) {
        return Err("invariant factors out of order".into());
    }
    let cols: Vec<gf2::SparseVec> = (0..m[0].len())
        .map(|j| (0..m.len()).filter(|&i| m[i][j].rem_euclid(2) == 1).map(|i| i as u32).collect())
        .collect();
    if gf2::rank(&cols, m.len()) > s.factors.len() {
        return Err("mod-2 rank exceeds integer rank".into());
    }
    let even = s.factors.iter().any(|x| (x % 2u32).is_zero());
    if !even && gf2::rank(&cols, m.len()) != s.factors.len() {
        return Err("mod-2 rank differs without even factors".into());
    }
    Ok(())
}

/// Euler characteristic from the open strata: a product of local factors per vertex.
pub fn euler_oracle(p: &StrataPoset) -> i64 {
    use rmoduli_core::decorated_trees::masks::{is_fixed_vertex, real_flags, vertex_image};
    let sig = &p.sigma;
    let fact = |k: i64| -> i64 { (1..=k).product() };
    let mut chi = 0;
    for id in p.ids() {
        let t = &p.class(id).rep;
        let mut f = 1i64;
        let mut seen = Vec::new();
        for v in &t.verts {
            if is_fixed_vertex(sig, v) {
                let l = real_flags(sig, v).len() as i64;
                let k = (v.len() as i64 - l) / 2;
                f *= if l > 2 {
                    i64::from(k <= 1)
                } else if l >= 1 {
                    i64::from(k == 1)
                } else if t.marker == TypeMarker::Type1 {
                    (-1i64).pow((k - 2) as u32) * fact(k - 2)
                } else {
                    (-2i64).pow((k - 2) as u32) * fact(k - 2)
                };
            } else if !seen.contains(v) {
                seen.push(vertex_image(sig, v));
                let m = v.len() as i64;
                f *= (-1i64).pow((m - 3) as u32) * fact(m - 3);
            }
        }
        chi += if id.dim % 2 == 0 { f } else { -f };
    }
    chi
}

/// Expected rank of the relations in each degree, summed over base classes and vertices.
pub fn relation_count_oracle(p: &StrataPoset) -> Vec<usize> {
    use rmoduli_core::decorated_trees::masks::{is_fixed_vertex, real_flags, vertex_image};
    let sig = &p.sigma;
    if sig.num_perm() < 4 {
        return vec![0; p.top_dim() + 1];
    }
    (0..=p.top_dim())
        .map(|d| {
            if d + 2 > p.top_dim() {
                return 0;
            }
            let mut tot = 0i64;
            for c in &p.classes[d + 2] {
                let t = &c.rep;
                let mut seen = Vec::new();
                for v in &t.verts {
                    if is_fixed_vertex(sig, v) {
                        let l = real_flags(sig, v).len() as i64;
                        let k = (v.len() as i64 - l) / 2;
                        let c2 = k * (k - 1) / 2;
                        tot += match (t.marker, l) {
                            (TypeMarker::Type1, 0) => c2 - 1,
                            (TypeMarker::Type1, _) => c2,
                            _ => (3..=k).map(|j| 2 * j - 3).sum(),
                        };
                    } else if !seen.contains(v) {
                        seen.push(vertex_image(sig, v));
                        let m = v.len() as i64;
                        tot += m * (m - 3) / 2;
                    }
                }
            }
            tot as usize
        })
        .collect()
}

pub fn relation_ranks(c: &GradedComplex) -> Vec<usize> {
    (0..=c.top()).map(|d| Reducer::from_vectors(&c.relation_vectors(d)).rank()).collect()
}
