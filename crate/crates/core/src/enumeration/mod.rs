//! All strata for a given involution, graded by dimension, with their
//! codimension-one adjacencies.

mod cache;

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use rayon::prelude::*;

use crate::decorated_trees::masks::{self, full_mask, Deco, MaskTree, Sign, Vertex};
use crate::decorated_trees::{InvolutionSpec, Mask, OPlanarTree, TypeMarker, UPlanarClass};

pub use cache::{cache_path, load_cache, read_jsonl, save_cache, write_jsonl, CacheError, CACHE_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct ClassId {
    pub dim: usize,
    pub idx: usize,
}

#[derive(Debug, Clone)]
pub struct StratumClass {
    pub key: Vec<u8>,
    /// Canonical representative.
    pub rep: MaskTree,
}

impl StratumClass {
    pub fn hex(&self) -> String {
        hex::encode(&self.key)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Covering {
    pub upper: ClassId,
    pub lower: ClassId,
    pub mult: u8,
}

#[derive(Debug, Clone)]
pub struct StrataPoset {
    pub sigma: InvolutionSpec,
    /// Indexed by dimension, each sorted by encoding.
    pub classes: Vec<Vec<StratumClass>>,
    pub coverings: Vec<Covering>,
    /// `(upper, lower)`: upper is obtained from lower by contracting a conjugate pair of edges.
    pub pair_contractions: Vec<(ClassId, ClassId)>,
    index: HashMap<Vec<u8>, ClassId>,
}

impl StrataPoset {
    pub fn n(&self) -> usize {
        self.sigma.n()
    }

    pub fn top_dim(&self) -> usize {
        self.n() - 3
    }

    pub fn class(&self, id: ClassId) -> &StratumClass {
        &self.classes[id.dim][id.idx]
    }

    pub fn lookup(&self, key: &[u8]) -> Option<ClassId> {
        self.index.get(key).copied()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.len()).collect()
    }

    pub fn total(&self) -> usize {
        self.classes.iter().map(|c| c.len()).sum()
    }

    pub fn uplanar(&self, id: ClassId) -> UPlanarClass {
        let c = self.class(id);
        UPlanarClass { canonical_encoding: c.key.clone(), representative: OPlanarTree::from_masks(&self.sigma, &c.rep) }
    }

    pub fn ids(&self) -> impl Iterator<Item = ClassId> + '_ {
        self.classes
            .iter()
            .enumerate()
            .flat_map(|(dim, cs)| (0..cs.len()).map(move |idx| ClassId { dim, idx }))
    }

    pub(crate) fn assemble(
        sigma: InvolutionSpec,
        classes: Vec<Vec<StratumClass>>,
        coverings: Vec<Covering>,
        pair_contractions: Vec<(ClassId, ClassId)>,
    ) -> StrataPoset {
        let mut index = HashMap::new();
        for (dim, cs) in classes.iter().enumerate() {
            for (idx, c) in cs.iter().enumerate() {
                index.insert(c.key.clone(), ClassId { dim, idx });
            }
        }
        StrataPoset { sigma, classes, coverings, pair_contractions, index }
    }
}

/// Normalized splits: label sets not containing label 1, with 2..=n-2 elements.
fn all_splits(n: usize) -> Vec<Mask> {
    (1..full_mask(n)).filter(|&m| m & 1 == 0 && (2..=n as u32 - 2).contains(&m.count_ones())).collect()
}

fn compatible(a: Mask, b: Mask) -> bool {
    let c = a & b;
    c == 0 || c == a || c == b
}

fn norm_split(n: usize, m: Mask) -> Mask {
    if m & 1 == 1 {
        full_mask(n) ^ m
    } else {
        m
    }
}

/// Sets of pairwise compatible splits closed under `sigma`.
fn invariant_split_sets(sig: &InvolutionSpec) -> Vec<Vec<Mask>> {
    let n = sig.n();
    let mut orbits: Vec<Vec<Mask>> = Vec::new();
    for s in all_splits(n) {
        let t = norm_split(n, sig.mask(s));
        if t < s {
            continue;
        }
        let orbit = if t == s { vec![s] } else { vec![s, t] };
        if orbit.iter().tuple_combinations().all(|(&a, &b)| compatible(a, b)) {
            orbits.push(orbit);
        }
    }
    let mut out = Vec::new();
    fn rec(orbits: &[Vec<Mask>], start: usize, cur: &mut Vec<Mask>, out: &mut Vec<Vec<Mask>>) {
        out.push(cur.clone());
        for i in start..orbits.len() {
            if orbits[i].iter().all(|&s| cur.iter().all(|&c| compatible(s, c))) {
                let k = cur.len();
                cur.extend(&orbits[i]);
                rec(orbits, i + 1, cur, out);
                cur.truncate(k);
            }
        }
    }
    rec(&orbits, 0, &mut Vec::new(), &mut out);
    out
}

/// Vertices of the tree with the given splits.
pub fn vertices_of(n: usize, splits: &[Mask]) -> Vec<Vertex> {
    let full = full_mask(n);
    let children = |container: Mask| {
        let inner: Vec<Mask> = splits.iter().copied().filter(|&s| s & container == s && s != container).collect();
        let maximal: Vec<Mask> = inner
            .iter()
            .copied()
            .filter(|&s| !inner.iter().any(|&t| t != s && s & t == s))
            .collect();
        let cov = masks::union(&maximal);
        let mut out = maximal;
        out.extend((0..n).map(|i| 1 << i).filter(|&b| container & b != 0 && cov & b == 0));
        out
    };
    let mut verts = vec![masks::sorted(children(full))];
    for &s in splits {
        let mut v = children(s);
        v.push(full ^ s);
        verts.push(masks::sorted(v));
    }
    verts
}

/// Every decorated tree over one underlying tree, deduplicated by class.
fn classes_over(sig: &InvolutionSpec, splits: &[Mask]) -> Vec<(Vec<u8>, MaskTree)> {
    let n = sig.n();
    let full = full_mask(n);
    let verts = vertices_of(n, splits);
    let fixed: Vec<usize> = (0..verts.len()).filter(|&i| masks::is_fixed_vertex(sig, &verts[i])).collect();
    let mut found: BTreeMap<Vec<u8>, MaskTree> = BTreeMap::new();
    let mut push = |t: MaskTree| {
        let c = t.canonical(sig);
        found.entry(c.key).or_insert(c.rep);
    };
    let bare: Vec<(Vertex, Option<Deco>)> = verts.iter().map(|v| (v.clone(), None)).collect();
    if fixed.is_empty() {
        let special: Vec<Mask> = splits.iter().copied().filter(|&s| sig.mask(s) == full ^ s).collect();
        assert_eq!(special.len(), 1, "tree without fixed vertex has one flipped edge");
        push(MaskTree::new(n, bare, TypeMarker::Type3, Some(special[0])));
        return found.into_iter().collect();
    }
    if fixed.len() == 1 && masks::real_flags(sig, &verts[fixed[0]]).is_empty() {
        push(MaskTree::new(n, bare.clone(), TypeMarker::Type2, None));
    }
    let options: Vec<Vec<Deco>> = fixed.iter().map(|&i| masks::fixed_decos(sig, &verts[i])).collect();
    for combo in options.iter().map(|o| o.iter()).multi_cartesian_product() {
        let mut parts = bare.clone();
        for (k, &i) in fixed.iter().enumerate() {
            parts[i].1 = Some(combo[k].clone());
        }
        push(MaskTree::new(n, parts, TypeMarker::Type1, None));
    }
    found.into_iter().collect()
}

/// Exhaustive enumeration of strata with coverings and pair contractions.
pub fn enumerate_classes(sigma: &InvolutionSpec) -> StrataPoset {
    let sig = sigma;
    let n = sig.n();
    let sets = invariant_split_sets(sig);
    let found: Vec<(Vec<u8>, MaskTree)> = sets.par_iter().flat_map_iter(|s| classes_over(sig, s)).collect();
    let mut by_dim: Vec<Vec<StratumClass>> = vec![Vec::new(); n - 2];
    let mut all: BTreeMap<Vec<u8>, MaskTree> = BTreeMap::new();
    for (k, t) in found {
        all.entry(k).or_insert(t);
    }
    for (key, rep) in all {
        by_dim[rep.dim()].push(StratumClass { key, rep });
    }
    let mut p = StrataPoset::assemble(sig.clone(), by_dim, Vec::new(), Vec::new());
    let ids: Vec<ClassId> = p.ids().collect();
    let adj: Vec<(Vec<Covering>, Vec<(ClassId, ClassId)>)> = ids
        .par_iter()
        .map(|&lower| {
            let t = &p.class(lower).rep;
            let mut cov = Vec::new();
            for (vi, m) in t.invariant_edges(sig) {
                let ups: Vec<ClassId> = Sign::BOTH
                    .iter()
                    .map(|&s| p.lookup(&t.contract_invariant(sig, vi, m, s).encoding(sig)).expect("contraction is a class"))
                    .collect();
                if ups[0] == ups[1] {
                    cov.push(Covering { upper: ups[0], lower, mult: 2 });
                } else {
                    cov.push(Covering { upper: ups[0], lower, mult: 1 });
                    cov.push(Covering { upper: ups[1], lower, mult: 1 });
                }
            }
            let pairs = t
                .pair_edges(sig)
                .into_iter()
                .map(|(vi, m)| (p.lookup(&t.contract_pair(sig, vi, m).encoding(sig)).expect("contraction is a class"), lower))
                .collect();
            (cov, pairs)
        })
        .collect();
    for (c, q) in adj {
        p.coverings.extend(c);
        p.pair_contractions.extend(q);
    }
    p.coverings.sort_by_key(|c| (c.lower, c.upper));
    p.pair_contractions.sort_by_key(|&(u, l)| (l, u));
    p
}

pub fn euler_characteristic(p: &StrataPoset) -> i64 {
    p.counts().iter().enumerate().map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
}

/// Graphviz rendering; edges point from lower to upper stratum.
pub fn to_dot(p: &StrataPoset) -> String {
    let mut s = String::from("digraph strata {\n  rankdir=BT;\n");
    for id in p.ids() {
        let h = p.class(id).hex();
        let short = &h[..h.len().min(12)];
        s.push_str(&format!("  c{}_{} [label=\"{}/{}\"];\n", id.dim, id.idx, id.dim, short));
    }
    for c in &p.coverings {
        let attr = if c.mult == 2 { " [label=\"2\"]" } else { "" };
        s.push_str(&format!("  c{}_{} -> c{}_{}{};\n", c.lower.dim, c.lower.idx, c.upper.dim, c.upper.idx, attr));
    }
    for (u, l) in &p.pair_contractions {
        s.push_str(&format!("  c{}_{} -> c{}_{} [style=dashed];\n", l.dim, l.idx, u.dim, u.idx));
    }
    s.push_str("}\n");
    s
}
