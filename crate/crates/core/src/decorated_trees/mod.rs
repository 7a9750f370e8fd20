//! Stable labeled trees with an involution and planar decorations.

mod forget;
mod json;
pub mod masks;
pub mod sigma;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use forget::forget_tails;
pub use masks::{Canon, Deco, MaskTree, Sign};
pub use sigma::{parse_sigma, InvolutionSpec, Mask, SigmaError};

use masks::{full_mask, is_fixed_vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum TypeMarker {
    Type1,
    Type2,
    Type3,
}

impl TypeMarker {
    pub fn as_u8(self) -> u8 {
        match self {
            TypeMarker::Type1 => 1,
            TypeMarker::Type2 => 2,
            TypeMarker::Type3 => 3,
        }
    }
}

impl TryFrom<u8> for TypeMarker {
    type Error = String;
    fn try_from(x: u8) -> Result<Self, String> {
        match x {
            1 => Ok(TypeMarker::Type1),
            2 => Ok(TypeMarker::Type2),
            3 => Ok(TypeMarker::Type3),
            _ => Err(format!("bad marker {x}")),
        }
    }
}

impl From<TypeMarker> for u8 {
    fn from(m: TypeMarker) -> u8 {
        m.as_u8()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flag {
    pub id: usize,
    pub vertex: usize,
    /// Equal to `id` for tails.
    pub mate: usize,
    pub tail: Option<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Tree {
    pub vertices: Vec<usize>,
    pub flags: Vec<Flag>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeInvolution {
    pub vertex_map: BTreeMap<usize, usize>,
    pub flag_map: BTreeMap<usize, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OPlanarTree {
    pub sigma: InvolutionSpec,
    pub tree: Tree,
    pub marker: TypeMarker,
    pub real_cyclic: BTreeMap<usize, Vec<usize>>,
    pub plus_part: BTreeMap<usize, BTreeSet<usize>>,
    pub half_plus: Option<BTreeSet<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UPlanarClass {
    pub canonical_encoding: Vec<u8>,
    pub representative: OPlanarTree,
}

impl UPlanarClass {
    pub fn hex(&self) -> String {
        hex::encode(&self.canonical_encoding)
    }
}

/// How the representative differs from the tree that was canonicalized.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CanonMap {
    /// Fixed vertex ids of the input whose planar data was reversed.
    pub flips: BTreeMap<usize, bool>,
    pub half_swapped: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub invariant: &'static str,
    pub detail: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.invariant, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("invalid tree: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("no automorphism of the tree extends sigma")]
    NoEquivariantStructure,
    #[error("flag {0} is not on an invariant edge")]
    NotInvariantEdge(usize),
    #[error("flag {0} is on an invariant edge")]
    InvariantEdge(usize),
    #[error("flag {0} is not an edge flag")]
    NotAnEdge(usize),
    #[error("forgetting leaves {0} labels, need at least 3")]
    TooFewLabels(usize),
    #[error("dropped labels are not sigma-invariant")]
    DropNotInvariant,
    #[error(transparent)]
    Sigma(#[from] SigmaError),
}

fn violation(invariant: &'static str, detail: impl Into<String>) -> Violation {
    Violation { invariant, detail: detail.into() }
}

/// Labels beyond each flag, or the violations that prevent computing them.
fn flag_masks(tree: &Tree, n: usize) -> Result<BTreeMap<usize, Mask>, Vec<Violation>> {
    let mut errs = Vec::new();
    let vset: BTreeSet<usize> = tree.vertices.iter().copied().collect();
    if vset.len() != tree.vertices.len() {
        errs.push(violation("vertex_ids", "duplicate vertex id"));
    }
    let by_id: BTreeMap<usize, &Flag> = tree.flags.iter().map(|f| (f.id, f)).collect();
    if by_id.len() != tree.flags.len() {
        errs.push(violation("flag_ids", "duplicate flag id"));
    }
    for f in &tree.flags {
        if !vset.contains(&f.vertex) {
            errs.push(violation("flag_ids", format!("flag {} on unknown vertex {}", f.id, f.vertex)));
        }
        match by_id.get(&f.mate) {
            None => errs.push(violation("mate_involution", format!("flag {} has unknown mate", f.id))),
            Some(g) if g.mate != f.id => {
                errs.push(violation("mate_involution", format!("mate of flag {} is not involutive", f.id)))
            }
            _ => {}
        }
        let is_tail = f.mate == f.id;
        if is_tail != f.tail.is_some() {
            errs.push(violation("tail_labels", format!("flag {}: tail label must be set exactly on tails", f.id)));
        }
    }
    let mut labels: Vec<u8> = tree.flags.iter().filter_map(|f| f.tail).collect();
    labels.sort_unstable();
    if labels != (1..=n as u8).collect::<Vec<_>>() {
        errs.push(violation("tail_labels", "tail labels are not a bijection onto 1..n"));
    }
    if !errs.is_empty() {
        return Err(errs);
    }
    let mut at: BTreeMap<usize, Vec<usize>> = vset.iter().map(|&v| (v, Vec::new())).collect();
    for f in &tree.flags {
        at.get_mut(&f.vertex).unwrap().push(f.id);
    }
    for (v, fl) in &at {
        if fl.len() < 3 {
            errs.push(violation("stability", format!("vertex {v} has valence {}", fl.len())));
        }
    }
    let edges = tree.flags.iter().filter(|f| f.mate != f.id).count() / 2;
    if edges + 1 != vset.len() {
        errs.push(violation("acyclic", format!("{} edges for {} vertices", edges, vset.len())));
    }
    // root at the vertex of label 1
    let root = tree.flags.iter().find(|f| f.tail == Some(1)).map(|f| f.vertex).unwrap();
    let mut parent_flag: BTreeMap<usize, Option<usize>> = BTreeMap::new();
    parent_flag.insert(root, None);
    let mut order = vec![root];
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &fid in &at[&v] {
            let f = by_id[&fid];
            if f.mate == fid {
                continue;
            }
            let w = by_id[&f.mate].vertex;
            if Some(Some(f.mate)) == parent_flag.get(&v).copied() {
                continue;
            }
            if parent_flag.contains_key(&w) {
                errs.push(violation("acyclic", format!("cycle through vertex {w}")));
                continue;
            }
            parent_flag.insert(w, Some(fid));
            order.push(w);
            queue.push_back(w);
        }
    }
    if order.len() != vset.len() {
        errs.push(violation("connected", "geometric realization is disconnected"));
    }
    if !errs.is_empty() {
        return Err(errs);
    }
    let mut sub: BTreeMap<usize, Mask> = BTreeMap::new();
    for &v in order.iter().rev() {
        let mut m = 0;
        for &fid in &at[&v] {
            let f = by_id[&fid];
            if let Some(l) = f.tail {
                m |= 1 << (l - 1);
            } else if parent_flag[&v] != Some(f.mate) {
                m |= sub[&by_id[&f.mate].vertex];
            }
        }
        sub.insert(v, m);
    }
    let full = full_mask(n);
    let mut out = BTreeMap::new();
    for f in &tree.flags {
        let m = if let Some(l) = f.tail {
            1 << (l - 1)
        } else {
            let w = by_id[&f.mate].vertex;
            if parent_flag[&w] == Some(f.id) {
                sub[&w]
            } else {
                full ^ sub[&f.vertex]
            }
        };
        out.insert(f.id, m);
    }
    Ok(out)
}

fn vertex_flags(tree: &Tree) -> BTreeMap<usize, Vec<usize>> {
    let mut at: BTreeMap<usize, Vec<usize>> = tree.vertices.iter().map(|&v| (v, Vec::new())).collect();
    for f in &tree.flags {
        at.entry(f.vertex).or_default().push(f.id);
    }
    at
}

/// The unique automorphism extending `sigma`, if any.
pub fn tree_involution(tree: &Tree, sigma: &InvolutionSpec) -> Result<TreeInvolution, TreeError> {
    let masks = flag_masks(tree, sigma.n()).map_err(TreeError::Invalid)?;
    involution_from_masks(tree, sigma, &masks)
}

fn involution_from_masks(
    tree: &Tree,
    sigma: &InvolutionSpec,
    masks: &BTreeMap<usize, Mask>,
) -> Result<TreeInvolution, TreeError> {
    let by_mask: BTreeMap<Mask, usize> = masks.iter().map(|(&f, &m)| (m, f)).collect();
    let vertex_of: BTreeMap<usize, usize> = tree.flags.iter().map(|f| (f.id, f.vertex)).collect();
    let mut flag_map = BTreeMap::new();
    for (&f, &m) in masks {
        let g = *by_mask.get(&sigma.mask(m)).ok_or(TreeError::NoEquivariantStructure)?;
        flag_map.insert(f, g);
    }
    let mut vertex_map = BTreeMap::new();
    for (v, fl) in vertex_flags(tree) {
        let images: BTreeSet<usize> = fl.iter().map(|f| vertex_of[&flag_map[f]]).collect();
        if images.len() != 1 {
            return Err(TreeError::NoEquivariantStructure);
        }
        vertex_map.insert(v, *images.iter().next().unwrap());
    }
    Ok(TreeInvolution { vertex_map, flag_map })
}

/// Markers whose invariants the tree with its involution can satisfy.
pub fn classify_type(tree: &Tree, sigma: &InvolutionSpec) -> Result<BTreeSet<TypeMarker>, TreeError> {
    let inv = tree_involution(tree, sigma)?;
    let fixed: Vec<usize> = inv.vertex_map.iter().filter(|(a, b)| a == b).map(|(a, _)| *a).collect();
    let fixed_flags = |v: usize| tree.flags.iter().any(|f| f.vertex == v && inv.flag_map[&f.id] == f.id);
    Ok(match fixed.len() {
        0 => [TypeMarker::Type3].into(),
        1 if !fixed_flags(fixed[0]) => [TypeMarker::Type1, TypeMarker::Type2].into(),
        _ => [TypeMarker::Type1].into(),
    })
}

/// All violated invariants; empty means valid.
pub fn validate(t: &OPlanarTree, sigma: &InvolutionSpec) -> Vec<Violation> {
    let mut errs = Vec::new();
    if t.sigma != *sigma {
        errs.push(violation("sigma", "tree carries a different involution"));
    }
    let masks = match flag_masks(&t.tree, sigma.n()) {
        Ok(m) => m,
        Err(e) => return e,
    };
    let inv = match involution_from_masks(&t.tree, sigma, &masks) {
        Ok(i) => i,
        Err(_) => {
            errs.push(violation("equivariance", "sigma does not extend to the tree"));
            return errs;
        }
    };
    let at = vertex_flags(&t.tree);
    let fixed: Vec<usize> = inv.vertex_map.iter().filter(|(a, b)| a == b).map(|(a, _)| *a).collect();
    let is_real = |f: usize| inv.flag_map[&f] == f;
    let has_real = |v: usize| at[&v].iter().any(|&f| is_real(f));
    match t.marker {
        TypeMarker::Type1 => {
            if fixed.is_empty() {
                errs.push(violation("marker", "type 1 needs a fixed vertex"));
            }
        }
        TypeMarker::Type2 => {
            if fixed.len() != 1 || has_real(fixed[0]) || sigma.has_fixed() {
                errs.push(violation("marker", "type 2 needs one fixed vertex without fixed flags and no fixed labels"));
            }
        }
        TypeMarker::Type3 => {
            if !fixed.is_empty() || sigma.has_fixed() {
                errs.push(violation("marker", "type 3 needs no fixed vertex and no fixed labels"));
            }
        }
    }
    if t.marker == TypeMarker::Type1 {
        let keys: BTreeSet<usize> = t.real_cyclic.keys().chain(t.plus_part.keys()).copied().collect();
        if keys != fixed.iter().copied().collect() {
            errs.push(violation("real_cycle", "planar data must be given exactly on fixed vertices"));
        }
        for &v in &fixed {
            let reals: BTreeSet<usize> = at[&v].iter().copied().filter(|&f| is_real(f)).collect();
            let cyc = t.real_cyclic.get(&v).cloned().unwrap_or_default();
            let cset: BTreeSet<usize> = cyc.iter().copied().collect();
            if cset.len() != cyc.len() || cset != reals {
                errs.push(violation("real_cycle", format!("vertex {v}: cycle must list its fixed flags once")));
            }
            let plus = t.plus_part.get(&v).cloned().unwrap_or_default();
            for &f in &at[&v] {
                if is_real(f) {
                    continue;
                }
                let g = inv.flag_map[&f];
                if plus.contains(&f) == plus.contains(&g) {
                    errs.push(violation("plus_part", format!("vertex {v}: exactly one of flags {f},{g} must be plus")));
                }
            }
            if plus.iter().any(|f| !at[&v].contains(f) || is_real(*f)) {
                errs.push(violation("plus_part", format!("vertex {v}: plus part outside its conjugate flags")));
            }
        }
    } else if !t.real_cyclic.is_empty() || !t.plus_part.is_empty() {
        errs.push(violation("real_cycle", "planar data only on type 1 trees"));
    }
    match (t.marker, &t.half_plus) {
        (TypeMarker::Type3, Some(h)) => {
            if !half_is_side(t, &inv, h) {
                errs.push(violation("half_plus", "half must be one side of the special edge"));
            }
        }
        (TypeMarker::Type3, None) => errs.push(violation("half_plus", "type 3 needs a half")),
        (_, Some(_)) => errs.push(violation("half_plus", "half only on type 3 trees")),
        _ => {}
    }
    errs
}

fn half_is_side(t: &OPlanarTree, inv: &TreeInvolution, h: &BTreeSet<usize>) -> bool {
    let special = t
        .tree
        .flags
        .iter()
        .find(|f| f.mate != f.id && inv.flag_map[&f.id] == f.mate);
    let Some(e) = special else { return false };
    let mate_vertex = t.tree.flags.iter().find(|f| f.id == e.mate).unwrap().vertex;
    let side = side_of(&t.tree, e.vertex, e.id);
    let other = side_of(&t.tree, mate_vertex, e.mate);
    *h == side || *h == other
}

/// Vertices reachable from `start` without crossing the edge of flag `cut`.
fn side_of(tree: &Tree, start: usize, cut: usize) -> BTreeSet<usize> {
    let by_id: BTreeMap<usize, &Flag> = tree.flags.iter().map(|f| (f.id, f)).collect();
    let cut_mate = by_id[&cut].mate;
    let mut seen: BTreeSet<usize> = [start].into();
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for f in tree.flags.iter().filter(|f| f.vertex == v && f.mate != f.id) {
            if f.id == cut || f.id == cut_mate {
                continue;
            }
            let w = by_id[&f.mate].vertex;
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen
}

impl OPlanarTree {
    pub fn n(&self) -> usize {
        self.sigma.n()
    }

    pub fn check(&self) -> Result<(), TreeError> {
        let v = validate(self, &self.sigma);
        if v.is_empty() {
            Ok(())
        } else {
            Err(TreeError::Invalid(v))
        }
    }

    pub fn involution(&self) -> Result<TreeInvolution, TreeError> {
        tree_involution(&self.tree, &self.sigma)
    }

    /// Mask form plus the flag-id to mask and vertex-id to index maps.
    pub fn to_masks(&self) -> Result<(MaskTree, BTreeMap<usize, Mask>, BTreeMap<usize, usize>), TreeError> {
        self.check()?;
        let masks = flag_masks(&self.tree, self.n()).map_err(TreeError::Invalid)?;
        let at = vertex_flags(&self.tree);
        let mut parts = Vec::new();
        let mut ids = Vec::new();
        for (&v, fl) in &at {
            let vert: Vec<Mask> = fl.iter().map(|f| masks[f]).collect();
            let deco = if self.marker == TypeMarker::Type1 && is_fixed_vertex(&self.sigma, &masks::sorted(vert.clone())) {
                Some(Deco {
                    cycle: self.real_cyclic.get(&v).map(|c| c.iter().map(|f| masks[f]).collect()).unwrap_or_default(),
                    plus: masks::sorted(
                        self.plus_part.get(&v).map(|p| p.iter().map(|f| masks[f]).collect()).unwrap_or_default(),
                    ),
                })
            } else {
                None
            };
            parts.push((vert, deco));
            ids.push(v);
        }
        let half = self.half_plus.as_ref().map(|h| {
            h.iter()
                .flat_map(|v| at[v].iter())
                .filter_map(|f| self.tree.flags.iter().find(|x| x.id == *f).unwrap().tail)
                .fold(0, |a, l| a | (1 << (l - 1)))
        });
        let mt = MaskTree::new(self.n(), parts, self.marker, half);
        let mut index = BTreeMap::new();
        for v in ids {
            let first = masks[&at[&v][0]];
            index.insert(v, mt.find_vertex(first).unwrap());
        }
        Ok((mt, masks, index))
    }

    /// Rebuild with vertex ids in depth-first order from label 1 and flags numbered vertex by vertex.
    pub fn from_masks(sigma: &InvolutionSpec, mt: &MaskTree) -> OPlanarTree {
        let full = mt.full();
        let order = mt.dfs_order();
        let mut flag_id: BTreeMap<Mask, usize> = BTreeMap::new();
        let mut flags = Vec::new();
        let mut vertex_id = vec![0; mt.verts.len()];
        for (vid, &i) in order.iter().enumerate() {
            vertex_id[i] = vid;
            let mut fl = mt.verts[i].clone();
            fl.sort_by_key(|m| m.trailing_zeros());
            for m in fl {
                let id = flags.len();
                flag_id.insert(m, id);
                flags.push((m, vid));
            }
        }
        let flags: Vec<Flag> = flags
            .into_iter()
            .enumerate()
            .map(|(id, (m, vid))| {
                if m.count_ones() == 1 {
                    Flag { id, vertex: vid, mate: id, tail: Some(m.trailing_zeros() as u8 + 1) }
                } else {
                    Flag { id, vertex: vid, mate: flag_id[&(full ^ m)], tail: None }
                }
            })
            .collect();
        let mut real_cyclic = BTreeMap::new();
        let mut plus_part = BTreeMap::new();
        for (i, d) in mt.deco.iter().enumerate() {
            if let Some(d) = d {
                real_cyclic.insert(vertex_id[i], d.cycle.iter().map(|m| flag_id[m]).collect());
                plus_part.insert(vertex_id[i], d.plus.iter().map(|m| flag_id[m]).collect());
            }
        }
        let half_plus = mt.half.map(|h| {
            // the + vertex of the special edge sees exactly the other half beyond it
            let (vi, m) = mt.invariant_edges(sigma)[0];
            let start = if full ^ m == h { vi } else { mt.find_vertex(full ^ m).unwrap() };
            let mut seen: BTreeSet<usize> = [start].into();
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                for &f in &mt.verts[i] {
                    if !mt.is_edge_flag(f) || f == m || f == full ^ m {
                        continue;
                    }
                    let j = mt.find_vertex(full ^ f).unwrap();
                    if seen.insert(j) {
                        stack.push(j);
                    }
                }
            }
            seen.into_iter().map(|i| vertex_id[i]).collect()
        });
        OPlanarTree {
            sigma: sigma.clone(),
            tree: Tree { vertices: (0..mt.verts.len()).collect(), flags },
            marker: mt.marker,
            real_cyclic,
            plus_part,
            half_plus,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json::to_json(self)
    }

    pub fn from_json(v: &serde_json::Value) -> Result<OPlanarTree, String> {
        json::from_json(v)
    }
}

fn edge_at(t: &OPlanarTree, flag: usize) -> Result<(MaskTree, usize, Mask), TreeError> {
    let (mt, masks, index) = t.to_masks()?;
    let f = t.tree.flags.iter().find(|f| f.id == flag).ok_or(TreeError::NotAnEdge(flag))?;
    if f.mate == f.id {
        return Err(TreeError::NotAnEdge(flag));
    }
    Ok((mt, index[&f.vertex], masks[&flag]))
}

/// Contract the invariant edge containing `flag`; the flag's vertex receives the other endpoint's cycle.
pub fn contract_invariant_edge(t: &OPlanarTree, flag: usize, s: Sign) -> Result<OPlanarTree, TreeError> {
    let (mt, vi, m) = edge_at(t, flag)?;
    if !mt.is_invariant_flag(&t.sigma, m) {
        return Err(TreeError::NotInvariantEdge(flag));
    }
    Ok(OPlanarTree::from_masks(&t.sigma, &mt.contract_invariant(&t.sigma, vi, m, s)))
}

/// Contract the edge containing `flag` together with its conjugate edge.
pub fn contract_conjugate_pair(t: &OPlanarTree, flag: usize) -> Result<OPlanarTree, TreeError> {
    let (mt, vi, m) = edge_at(t, flag)?;
    if mt.is_invariant_flag(&t.sigma, m) {
        return Err(TreeError::InvariantEdge(flag));
    }
    Ok(OPlanarTree::from_masks(&t.sigma, &mt.contract_pair(&t.sigma, vi, m)))
}

pub fn canonicalize(t: &OPlanarTree) -> Result<UPlanarClass, TreeError> {
    canonicalize_with_map(t).map(|(c, _)| c)
}

pub fn canonicalize_with_map(t: &OPlanarTree) -> Result<(UPlanarClass, CanonMap), TreeError> {
    let (mt, _, index) = t.to_masks()?;
    let c = mt.canonical(&t.sigma);
    let mut map = CanonMap::default();
    for (&vid, &i) in &index {
        if mt.deco[i].is_some() {
            map.flips.insert(vid, c.flips[i]);
        }
    }
    map.half_swapped = mt.half != c.rep.half;
    let class = UPlanarClass {
        canonical_encoding: c.key,
        representative: OPlanarTree::from_masks(&t.sigma, &c.rep),
    };
    Ok((class, map))
}

/// `|S| - 3 - |E|`.
pub fn dimension(c: &UPlanarClass) -> usize {
    let t = &c.representative;
    t.n() - 3 - (t.tree.vertices.len() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_vertex(sigma: &InvolutionSpec, marker: TypeMarker, cycle: &[u8], plus: &[u8]) -> OPlanarTree {
        let mt = MaskTree::new(
            sigma.n(),
            vec![(
                (0..sigma.n()).map(|i| 1 << i).collect(),
                (marker == TypeMarker::Type1).then(|| Deco {
                    cycle: cycle.iter().map(|l| 1 << (l - 1)).collect(),
                    plus: plus.iter().map(|l| 1 << (l - 1)).collect(),
                }),
            )],
            marker,
            None,
        );
        OPlanarTree::from_masks(sigma, &mt)
    }

    #[test]
    fn validate_examples() {
        let id = InvolutionSpec::identity(4).unwrap();
        let t = one_vertex(&id, TypeMarker::Type1, &[1, 2, 3, 4], &[]);
        assert!(validate(&t, &id).is_empty());
        let s = parse_sigma("(1 2)(3 4)", 4).unwrap();
        let t = one_vertex(&s, TypeMarker::Type2, &[], &[]);
        assert!(validate(&t, &s).is_empty());
        let mut bad = t.clone();
        bad.tree.vertices.push(7);
        bad.tree.flags.push(Flag { id: 90, vertex: 7, mate: 91, tail: None });
        bad.tree.flags.push(Flag { id: 91, vertex: 0, mate: 90, tail: None });
        let v = validate(&bad, &s);
        assert!(v.iter().any(|x| x.invariant == "stability"));
    }

    #[test]
    fn classify_examples() {
        let id = InvolutionSpec::identity(4).unwrap();
        let t = one_vertex(&id, TypeMarker::Type1, &[1, 2, 3, 4], &[]);
        assert_eq!(classify_type(&t.tree, &id).unwrap(), [TypeMarker::Type1].into());
        let s = parse_sigma("(1 3)(2 4)", 4).unwrap();
        assert_eq!(
            classify_type(&t.tree, &s).unwrap(),
            [TypeMarker::Type1, TypeMarker::Type2].into()
        );
        let mt = MaskTree::new(4, vec![(vec![1, 2, 0b1100], None), (vec![4, 8, 0b0011], None)], TypeMarker::Type3, Some(3));
        let t3 = OPlanarTree::from_masks(&s, &mt);
        assert!(t3.check().is_ok());
        assert_eq!(classify_type(&t3.tree, &s).unwrap(), [TypeMarker::Type3].into());
        let u = parse_sigma("(1 3)", 4).unwrap();
        assert_eq!(classify_type(&t3.tree, &u), Err(TreeError::NoEquivariantStructure));
    }

    #[test]
    fn contraction_by_id() {
        let s = parse_sigma("(1 3)(2 4)", 4).unwrap();
        let mt = MaskTree::new(4, vec![(vec![1, 2, 0b1100], None), (vec![4, 8, 0b0011], None)], TypeMarker::Type3, Some(3));
        let t = OPlanarTree::from_masks(&s, &mt);
        let e = t.tree.flags.iter().find(|f| f.tail.is_none()).unwrap().id;
        let p = contract_invariant_edge(&t, e, Sign::Plus).unwrap();
        assert_eq!(p.marker, TypeMarker::Type1);
        assert!(p.real_cyclic[&0].is_empty());
        let m = contract_invariant_edge(&t, e, Sign::Minus).unwrap();
        assert_eq!(m.marker, TypeMarker::Type2);
        assert_eq!(contract_conjugate_pair(&t, e), Err(TreeError::InvariantEdge(e)));
        assert_eq!(contract_invariant_edge(&t, 0, Sign::Plus), Err(TreeError::NotAnEdge(0)));
    }

    #[test]
    fn canonical_examples() {
        let id = InvolutionSpec::identity(4).unwrap();
        let a = canonicalize(&one_vertex(&id, TypeMarker::Type1, &[1, 2, 3, 4], &[])).unwrap();
        let b = canonicalize(&one_vertex(&id, TypeMarker::Type1, &[1, 4, 3, 2], &[])).unwrap();
        let c = canonicalize(&one_vertex(&id, TypeMarker::Type1, &[1, 3, 2, 4], &[])).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.canonical_encoding, c.canonical_encoding);
        assert_eq!(canonicalize(&a.representative).unwrap(), a);
        assert_eq!(dimension(&a), 1);
        let (_, map) = canonicalize_with_map(&one_vertex(&id, TypeMarker::Type1, &[1, 4, 3, 2], &[])).unwrap();
        assert!(map.flips[&0]);
    }

    #[test]
    fn json_round_trip() {
        let s = parse_sigma("(1 3)(2 4)", 5).unwrap();
        let t = one_vertex(&s, TypeMarker::Type1, &[5], &[1, 4]);
        let j = t.to_json();
        assert_eq!(j["marker"], 1);
        assert_eq!(j["sigma"], serde_json::json!([[1, 3], [2, 4]]));
        assert_eq!(OPlanarTree::from_json(&j).unwrap(), t);
    }
}
