//! Label-mask form of decorated trees.
//!
//! A flag is named by the set of labels on the far side of it, so a tail is a
//! single bit and the two flags of an edge are `m` and `full ^ m`. A vertex is
//! the sorted list of its flag masks. These names survive contraction of
//! other edges, which keeps the enumeration and relation code short.

use super::sigma::{popcount, InvolutionSpec, Mask};
use super::TypeMarker;
use serde::{Deserialize, Serialize};

pub type Vertex = Vec<Mask>;

/// Planar data at a fixed vertex of a type-1 tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Deco {
    pub cycle: Vec<Mask>,
    /// Sorted; one flag out of every conjugate pair at the vertex.
    pub plus: Vec<Mask>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MaskTree {
    pub n: usize,
    /// Sorted.
    pub verts: Vec<Vertex>,
    pub marker: TypeMarker,
    /// Aligned with `verts`; set exactly on fixed vertices of type-1 trees.
    pub deco: Vec<Option<Deco>>,
    /// Type 3: labels on the `+` half.
    pub half: Option<Mask>,
}

#[derive(Debug, Clone)]
pub struct Canon {
    pub key: Vec<u8>,
    pub rep: MaskTree,
    /// Per vertex of the input (same order): the representative reverses it.
    pub flips: Vec<bool>,
}

pub fn full_mask(n: usize) -> Mask {
    ((1u64 << n) - 1) as Mask
}

pub fn sorted(mut v: Vec<Mask>) -> Vec<Mask> {
    v.sort_unstable();
    v.dedup();
    v
}

pub fn union(ms: &[Mask]) -> Mask {
    ms.iter().fold(0, |a, &b| a | b)
}

pub fn vertex_image(sig: &InvolutionSpec, v: &[Mask]) -> Vertex {
    sorted(v.iter().map(|&m| sig.mask(m)).collect())
}

pub fn is_fixed_vertex(sig: &InvolutionSpec, v: &[Mask]) -> bool {
    vertex_image(sig, v) == v
}

pub fn rot_min(seq: &[Mask]) -> Vec<Mask> {
    if seq.is_empty() {
        return Vec::new();
    }
    let k = seq.len();
    let mut best: Option<Vec<Mask>> = None;
    for i in 0..k {
        let r: Vec<Mask> = seq[i..].iter().chain(&seq[..i]).copied().collect();
        if best.as_ref().is_none_or(|b| r < *b) {
            best = Some(r);
        }
    }
    best.unwrap()
}

/// Flags of `v` moved by `sig`, one from each conjugate pair (the smaller).
pub fn pairs_at(sig: &InvolutionSpec, v: &[Mask]) -> Vec<(Mask, Mask)> {
    v.iter()
        .filter_map(|&m| {
            let c = sig.mask(m);
            (c != m && m < c && v.contains(&c)).then_some((m, c))
        })
        .collect()
}

pub fn real_flags(sig: &InvolutionSpec, v: &[Mask]) -> Vec<Mask> {
    v.iter().copied().filter(|&m| sig.is_invariant(m)).collect()
}

/// Reversal-normal form of a vertex decoration; `true` when the input is the reversed one.
pub fn normalize_deco(sig: &InvolutionSpec, v: &[Mask], d: &Deco) -> (Deco, bool) {
    let a = Deco { cycle: rot_min(&d.cycle), plus: sorted(d.plus.clone()) };
    let b = reversed_deco(sig, v, d);
    let b = Deco { cycle: rot_min(&b.cycle), plus: b.plus };
    if b < a {
        (b, true)
    } else {
        (a, false)
    }
}

pub fn reversed_deco(sig: &InvolutionSpec, v: &[Mask], d: &Deco) -> Deco {
    let mut cycle = d.cycle.clone();
    cycle.reverse();
    let plus = v
        .iter()
        .copied()
        .filter(|&m| !sig.is_invariant(m) && !d.plus.contains(&m))
        .collect();
    Deco { cycle, plus }
}

/// All decorations of a fixed vertex (cycles with the smallest real flag first).
pub fn fixed_decos(sig: &InvolutionSpec, v: &[Mask]) -> Vec<Deco> {
    let reals = real_flags(sig, v);
    let prs = pairs_at(sig, v);
    let cycles: Vec<Vec<Mask>> = if reals.len() <= 1 {
        vec![reals.clone()]
    } else {
        use itertools::Itertools;
        reals[1..]
            .iter()
            .copied()
            .permutations(reals.len() - 1)
            .map(|p| std::iter::once(reals[0]).chain(p).collect())
            .collect()
    };
    let mut out = Vec::new();
    for c in &cycles {
        for bits in 0u64..(1u64 << prs.len()) {
            let plus = sorted(
                prs.iter()
                    .enumerate()
                    .map(|(i, &(a, b))| if bits >> i & 1 == 0 { a } else { b })
                    .collect(),
            );
            out.push(Deco { cycle: c.clone(), plus });
        }
    }
    out
}

impl MaskTree {
    pub fn new(
        n: usize,
        parts: Vec<(Vertex, Option<Deco>)>,
        marker: TypeMarker,
        half: Option<Mask>,
    ) -> MaskTree {
        let mut parts: Vec<(Vertex, Option<Deco>)> =
            parts.into_iter().map(|(v, d)| (sorted(v), d)).collect();
        parts.sort_by(|a, b| a.0.cmp(&b.0));
        let (verts, deco) = parts.into_iter().unzip();
        MaskTree { n, verts, marker, deco, half }
    }

    pub fn full(&self) -> Mask {
        full_mask(self.n)
    }

    pub fn num_edges(&self) -> usize {
        self.verts.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.n - 3 - self.num_edges()
    }

    pub fn find_vertex(&self, m: Mask) -> Option<usize> {
        self.verts.iter().position(|v| v.binary_search(&m).is_ok())
    }

    pub fn is_edge_flag(&self, m: Mask) -> bool {
        let p = popcount(m) as usize;
        p >= 2 && p + 2 <= self.n
    }

    fn parts(&self) -> Vec<(Vertex, Option<Deco>)> {
        self.verts.iter().cloned().zip(self.deco.iter().cloned()).collect()
    }

    fn rebuild(
        &self,
        drop: &[usize],
        add: Vec<(Vertex, Option<Deco>)>,
        marker: TypeMarker,
        half: Option<Mask>,
    ) -> MaskTree {
        let mut parts: Vec<(Vertex, Option<Deco>)> = self
            .parts()
            .into_iter()
            .enumerate()
            .filter(|(i, _)| !drop.contains(i))
            .map(|(_, p)| p)
            .collect();
        parts.extend(add);
        MaskTree::new(self.n, parts, marker, half)
    }

    /// Whether the edge through flag `m` is invariant (real or the type-3 special edge).
    pub fn is_invariant_flag(&self, sig: &InvolutionSpec, m: Mask) -> bool {
        let c = sig.mask(m);
        c == m || c == self.full() ^ m
    }

    fn edges_where(&self, sig: &InvolutionSpec, invariant: bool) -> Vec<(usize, Mask)> {
        let mut seen: Vec<Mask> = Vec::new();
        let mut out = Vec::new();
        let full = self.full();
        let norm = |m: Mask| if m & 1 == 1 { full ^ m } else { m };
        for (i, v) in self.verts.iter().enumerate() {
            for &m in v {
                if !self.is_edge_flag(m) || seen.contains(&norm(m)) {
                    continue;
                }
                if self.is_invariant_flag(sig, m) == invariant {
                    seen.push(norm(m));
                    if !invariant {
                        seen.push(norm(sig.mask(m)));
                    }
                    out.push((i, m));
                }
            }
        }
        out
    }

    /// One `(vertex, flag)` per invariant edge.
    pub fn invariant_edges(&self, sig: &InvolutionSpec) -> Vec<(usize, Mask)> {
        self.edges_where(sig, true)
    }

    /// One `(vertex, flag)` per conjugate pair of edges.
    pub fn pair_edges(&self, sig: &InvolutionSpec) -> Vec<(usize, Mask)> {
        self.edges_where(sig, false)
    }

    pub fn fixed_vertices(&self, sig: &InvolutionSpec) -> Vec<usize> {
        (0..self.verts.len()).filter(|&i| is_fixed_vertex(sig, &self.verts[i])).collect()
    }

    pub fn has_real_flags(&self, sig: &InvolutionSpec) -> bool {
        self.verts.iter().any(|v| v.iter().any(|&m| sig.is_invariant(m)))
    }

    /// Contract the invariant edge through flag `m` at vertex `vi`.
    pub fn contract_invariant(&self, sig: &InvolutionSpec, vi: usize, m: Mask, s: Sign) -> MaskTree {
        let full = self.full();
        let mm = full ^ m;
        let wi = self.find_vertex(mm).expect("edge mate");
        let v = &self.verts[vi];
        let w = &self.verts[wi];
        let mut u: Vertex = v.iter().copied().filter(|&x| x != m).collect();
        u.extend(w.iter().copied().filter(|&x| x != mm));
        if self.marker == TypeMarker::Type3 {
            debug_assert_eq!(sig.mask(m), mm);
            return match s {
                Sign::Plus => {
                    let half = self.half.expect("type 3 half");
                    let (pv, pm) = if mm == half { (v, m) } else { (w, mm) };
                    let plus = sorted(pv.iter().copied().filter(|&x| x != pm).collect());
                    let d = Deco { cycle: Vec::new(), plus };
                    self.rebuild(&[vi, wi], vec![(u, Some(d))], TypeMarker::Type1, None)
                }
                Sign::Minus => self.rebuild(&[vi, wi], vec![(u, None)], TypeMarker::Type2, None),
            };
        }
        debug_assert_eq!(sig.mask(m), m);
        let dv = self.deco[vi].as_ref().expect("fixed vertex");
        let dw = self.deco[wi].as_ref().expect("fixed vertex");
        let i = dv.cycle.iter().position(|&x| x == m).expect("real flag in cycle");
        let j = dw.cycle.iter().position(|&x| x == mm).expect("real flag in cycle");
        let mut after: Vec<Mask> = dw.cycle[j + 1..].iter().chain(&dw.cycle[..j]).copied().collect();
        let mut pw = dw.plus.clone();
        if s == Sign::Minus {
            after.reverse();
            pw = reversed_deco(sig, w, dw).plus;
        }
        let mut cycle: Vec<Mask> = dv.cycle[..i].to_vec();
        cycle.extend(after);
        cycle.extend(&dv.cycle[i + 1..]);
        let mut plus = dv.plus.clone();
        plus.extend(pw);
        let d = Deco { cycle, plus: sorted(plus) };
        self.rebuild(&[vi, wi], vec![(u, Some(d))], TypeMarker::Type1, None)
    }

    /// Contract the non-invariant edge through `m` at `vi` together with its conjugate.
    pub fn contract_pair(&self, sig: &InvolutionSpec, vi: usize, m: Mask) -> MaskTree {
        let full = self.full();
        let mm = full ^ m;
        let wi = self.find_vertex(mm).expect("edge mate");
        let v = self.verts[vi].clone();
        let w = self.verts[wi].clone();
        let sv = vertex_image(sig, &v);
        let sw = vertex_image(sig, &w);
        if sv == v {
            let m2 = sig.mask(m);
            let swi = self.find_vertex(full ^ m2).expect("conjugate vertex");
            let mut u: Vertex = v.iter().copied().filter(|&x| x != m && x != m2).collect();
            u.extend(w.iter().copied().filter(|&x| x != mm));
            u.extend(sw.iter().copied().filter(|&x| x != full ^ m2));
            let d = self.deco[vi].as_ref().map(|d| {
                let mut plus: Vec<Mask>;
                if d.plus.contains(&m) {
                    plus = d.plus.iter().copied().filter(|&x| x != m).collect();
                    plus.extend(w.iter().copied().filter(|&x| x != mm));
                } else {
                    plus = d.plus.iter().copied().filter(|&x| x != m2).collect();
                    plus.extend(sw.iter().copied().filter(|&x| x != full ^ m2));
                }
                Deco { cycle: d.cycle.clone(), plus: sorted(plus) }
            });
            return self.rebuild(&[vi, wi, swi], vec![(u, d)], self.marker, self.half);
        }
        if sw == w {
            return self.contract_pair(sig, wi, mm);
        }
        let svi = self.find_vertex(sig.mask(v[0])).expect("conjugate vertex");
        let swi = self.find_vertex(sig.mask(w[0])).expect("conjugate vertex");
        let mut u1: Vertex = v.iter().copied().filter(|&x| x != m).collect();
        u1.extend(w.iter().copied().filter(|&x| x != mm));
        let u2 = vertex_image(sig, &u1);
        self.rebuild(&[vi, wi, svi, swi], vec![(u1, None), (u2, None)], self.marker, self.half)
    }

    /// Replace the vertices at `drop` by `add`, keeping marker and half.
    pub fn replace(&self, drop: &[usize], add: Vec<(Vertex, Option<Deco>)>) -> MaskTree {
        self.rebuild(drop, add, self.marker, self.half)
    }

    pub fn with_marker(&self, marker: TypeMarker) -> MaskTree {
        MaskTree { marker, ..self.clone() }
    }

    /// Reverse the planar data at every fixed vertex listed.
    pub fn reverse_at(&self, sig: &InvolutionSpec, which: &[usize]) -> MaskTree {
        let mut t = self.clone();
        for &i in which {
            if let Some(d) = &self.deco[i] {
                t.deco[i] = Some(reversed_deco(sig, &self.verts[i], d));
            }
        }
        t
    }

    pub fn swap_half(&self) -> MaskTree {
        let mut t = self.clone();
        t.half = self.half.map(|h| self.full() ^ h);
        t
    }

    /// Relabel by a permutation of `0..n` (bit `i` goes to bit `p[i]`).
    pub fn relabel(&self, p: &[u8]) -> MaskTree {
        let map = |m: Mask| {
            let mut r = 0;
            for i in 0..self.n {
                if m >> i & 1 == 1 {
                    r |= 1 << p[i];
                }
            }
            r
        };
        let parts = self
            .parts()
            .into_iter()
            .map(|(v, d)| {
                let v2 = v.iter().map(|&m| map(m)).collect();
                let d2 = d.map(|d| Deco {
                    cycle: d.cycle.iter().map(|&m| map(m)).collect(),
                    plus: sorted(d.plus.iter().map(|&m| map(m)).collect()),
                });
                (v2, d2)
            })
            .collect();
        MaskTree::new(self.n, parts, self.marker, self.half.map(map))
    }

    /// Vertices in depth-first order from the vertex carrying label 1, children by smallest label.
    pub fn dfs_order(&self) -> Vec<usize> {
        let full = self.full();
        let root = self.find_vertex(1).expect("label 1");
        let mut order = Vec::with_capacity(self.verts.len());
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            order.push(i);
            let v = &self.verts[i];
            let mut kids: Vec<Mask> = v.iter().copied().filter(|&m| m & 1 == 0 && self.is_edge_flag(m)).collect();
            kids.sort_by_key(|m| std::cmp::Reverse(m.trailing_zeros()));
            for m in kids {
                stack.push(self.find_vertex(full ^ m).expect("edge mate"));
            }
        }
        order
    }

    /// Canonical representative, encoding and per-vertex flip bits.
    pub fn canonical(&self, sig: &InvolutionSpec) -> Canon {
        let mut rep = self.clone();
        let mut flips = vec![false; self.verts.len()];
        if self.marker == TypeMarker::Type1 {
            for i in 0..self.verts.len() {
                if let Some(d) = &self.deco[i] {
                    let (nd, f) = normalize_deco(sig, &self.verts[i], d);
                    rep.deco[i] = Some(nd);
                    flips[i] = f;
                }
            }
        }
        if let Some(h) = self.half {
            rep.half = Some(h.min(self.full() ^ h));
        }
        let key = rep.encode_normalized();
        Canon { key, rep, flips }
    }

    pub fn encoding(&self, sig: &InvolutionSpec) -> Vec<u8> {
        self.canonical(sig).key
    }

    fn encode_normalized(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 + 6 * self.n);
        out.push(self.n as u8);
        out.push(self.marker.as_u8());
        for i in self.dfs_order() {
            let mut flags = self.verts[i].clone();
            flags.sort_by_key(|m| m.trailing_zeros());
            out.push(flags.len() as u8);
            for m in &flags {
                out.extend_from_slice(&m.to_be_bytes());
            }
            if let Some(d) = &self.deco[i] {
                let pos = |m: &Mask| flags.iter().position(|x| x == m).unwrap() as u8;
                out.push(d.cycle.len() as u8);
                out.extend(d.cycle.iter().map(pos));
                let bits: u32 = d.plus.iter().map(|m| 1u32 << pos(m)).fold(0, |a, b| a | b);
                out.extend_from_slice(&bits.to_be_bytes());
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decorated_trees::sigma::parse_sigma;

    fn two_vertex_id() -> (InvolutionSpec, MaskTree) {
        // (1, 2, e) -- (e', 3, 4)
        let sig = InvolutionSpec::identity(4).unwrap();
        let e = 0b1100;
        let t = MaskTree::new(
            4,
            vec![
                (vec![1, 2, e], Some(Deco { cycle: vec![1, 2, e], plus: vec![] })),
                (vec![0b0011, 4, 8], Some(Deco { cycle: vec![0b0011, 4, 8], plus: vec![] })),
            ],
            TypeMarker::Type1,
            None,
        );
        (sig, t)
    }

    #[test]
    fn splice_signs() {
        let (sig, t) = two_vertex_id();
        let vi = t.find_vertex(0b1100).unwrap();
        let p = t.contract_invariant(&sig, vi, 0b1100, Sign::Plus);
        assert_eq!(p.deco[0].as_ref().unwrap().cycle, vec![1, 2, 4, 8]);
        let m = t.contract_invariant(&sig, vi, 0b1100, Sign::Minus);
        assert_eq!(m.deco[0].as_ref().unwrap().cycle, vec![1, 2, 8, 4]);
        assert_ne!(p.encoding(&sig), m.encoding(&sig));
    }

    #[test]
    fn rotation_and_reversal() {
        assert_eq!(rot_min(&[4, 1, 8, 2]), vec![1, 8, 2, 4]);
        let sig = InvolutionSpec::identity(4).unwrap();
        let a = MaskTree::new(4, vec![(vec![1, 2, 4, 8], Some(Deco { cycle: vec![1, 2, 4, 8], plus: vec![] }))], TypeMarker::Type1, None);
        let b = MaskTree::new(4, vec![(vec![1, 2, 4, 8], Some(Deco { cycle: vec![1, 8, 4, 2], plus: vec![] }))], TypeMarker::Type1, None);
        let c = MaskTree::new(4, vec![(vec![1, 2, 4, 8], Some(Deco { cycle: vec![1, 4, 2, 8], plus: vec![] }))], TypeMarker::Type1, None);
        assert_eq!(a.encoding(&sig), b.encoding(&sig));
        assert_ne!(a.encoding(&sig), c.encoding(&sig));
    }

    #[test]
    fn special_edge() {
        let sig = parse_sigma("(1 3)(2 4)", 4).unwrap();
        // {1,2} | {3,4}: sigma maps the split to its complement
        let t = MaskTree::new(4, vec![(vec![1, 2, 0b1100], None), (vec![4, 8, 0b0011], None)], TypeMarker::Type3, Some(0b0011));
        let vi = t.find_vertex(0b1100).unwrap();
        let p = t.contract_invariant(&sig, vi, 0b1100, Sign::Plus);
        assert_eq!(p.marker, TypeMarker::Type1);
        assert_eq!(p.deco[0].as_ref().unwrap().plus, vec![1, 2]);
        let m = t.contract_invariant(&sig, vi, 0b1100, Sign::Minus);
        assert_eq!(m.marker, TypeMarker::Type2);
        assert_eq!(t.encoding(&sig), t.swap_half().encoding(&sig));
    }
}
