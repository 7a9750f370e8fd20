//! Wall-crossing presentation of the fundamental group.
//!
//! Objects are the top strata. Each wall (one invariant edge) gives two
//! crossings, one per direction, and codimension-two strata with two real
//! edges give the four-sector relators.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::decorated_trees::{Mask, MaskTree};
use crate::decorated_trees::{Sign, TypeMarker};
use crate::enumeration::{ClassId, StrataPoset};
use crate::homology::{smith_normal_form, IntegerGroup};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

/// Letter `g+1` is generator `g`, `-(g+1)` its inverse.
pub type Word = Vec<i32>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Crossing {
    pub wall: usize,
    pub from: usize,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Pi1Error {
    #[error("space has {components} connected components")]
    DisconnectedSpace { components: usize },
    #[error("corner walk of codimension-two class {0} does not close")]
    CornerMismatch(usize),
}

/// Path-groupoid presentation; crossing `2k` runs from the `+` side of wall `k` to its `-` side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WallCrossingPresentation {
    pub objects: Vec<ClassId>,
    pub walls: Vec<ClassId>,
    pub crossings: Vec<Crossing>,
    pub relators: Vec<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

fn edge_ends(t: &MaskTree, m: Mask) -> (usize, usize) {
    (t.find_vertex(m).expect("flag"), t.find_vertex(t.full() ^ m).expect("mate"))
}

/// Crossing generator for passing through the stratum `x` (not normalized)
/// from local side `s` of its edge `m`.
fn crossing_of(p: &StrataPoset, x: &MaskTree, m: Mask, s: Sign) -> (usize, Sign) {
    let sig = &p.sigma;
    let c = x.canonical(sig);
    let wall = p.lookup(&c.key).expect("wall class");
    let (v, w) = edge_ends(x, m);
    let side = if c.flips[v] != c.flips[w] { s.flip() } else { s };
    let g = 2 * wall.idx + usize::from(side == Sign::Minus);
    (g, side)
}

fn top_of(p: &StrataPoset, t: &MaskTree) -> usize {
    let id = p.lookup(&t.encoding(&p.sigma)).expect("top class");
    debug_assert_eq!(id.dim, p.top_dim());
    id.idx
}

pub fn wall_crossing_presentation(p: &StrataPoset) -> Result<WallCrossingPresentation, Pi1Error> {
    let sig = &p.sigma;
    let top = p.top_dim();
    let objects: Vec<ClassId> = (0..p.classes[top].len()).map(|idx| ClassId { dim: top, idx }).collect();
    if top == 0 {
        return Ok(WallCrossingPresentation { objects, walls: Vec::new(), crossings: Vec::new(), relators: Vec::new() });
    }
    let walls: Vec<ClassId> = (0..p.classes[top - 1].len()).map(|idx| ClassId { dim: top - 1, idx }).collect();
    let mut crossings = Vec::new();
    let mut relators = Vec::new();
    for w in &walls {
        let t = &p.class(*w).rep;
        let (vi, m) = t.invariant_edges(sig)[0];
        let a = top_of(p, &t.contract_invariant(sig, vi, m, Sign::Plus));
        let b = top_of(p, &t.contract_invariant(sig, vi, m, Sign::Minus));
        crossings.push(Crossing { wall: w.idx, from: a, to: b });
        crossings.push(Crossing { wall: w.idx, from: b, to: a });
        let g = 2 * w.idx as i32;
        relators.push(vec![g + 1, g + 2]);
    }
    if top >= 2 {
        for (ci, c) in p.classes[top - 2].iter().enumerate() {
            let t = &c.rep;
            if t.marker != TypeMarker::Type1 {
                continue;
            }
            let edges = t.invariant_edges(sig);
            if edges.len() != 2 {
                continue;
            }
            let (e1, e2) = (edges[0].1, edges[1].1);
            let ends = |m: Mask| edge_ends(t, m);
            let shared = {
                let (a, b) = ends(e1);
                let (c, d) = ends(e2);
                if a == c || a == d {
                    a
                } else {
                    debug_assert!(b == c || b == d);
                    b
                }
            };
            // a minus contraction reverses the far end of the edge
            let reverses_shared = |m: Mask| ends(m).1 == shared;
            let walk = [
                (e1, Sign::Plus, e2, Sign::Plus),
                (e2, Sign::Minus, e1, Sign::Plus),
                (e1, Sign::Minus, e2, Sign::Minus),
                (e2, Sign::Plus, e1, Sign::Minus),
            ];
            let mut word = Vec::new();
            let mut at: Option<usize> = None;
            for (fixed, fs, moving, from) in walk {
                let from = if fs == Sign::Minus && reverses_shared(fixed) { from.flip() } else { from };
                let x = t.contract_invariant(sig, t.find_vertex(fixed).unwrap(), fixed, fs);
                let (g, side) = crossing_of(p, &x, moving, from);
                let src = top_of(p, &x.contract_invariant(sig, x.find_vertex(moving).unwrap(), moving, from));
                let dst = top_of(p, &x.contract_invariant(sig, x.find_vertex(moving).unwrap(), moving, from.flip()));
                let cr = &crossings[g];
                let rep = &p.class(walls[cr.wall]).rep;
                let (rv, rm) = rep.invariant_edges(sig)[0];
                let canon_src = top_of(p, &rep.contract_invariant(sig, rv, rm, side));
                if cr.from != src || cr.to != dst || canon_src != src || at.is_some_and(|a| a != src) {
                    return Err(Pi1Error::CornerMismatch(ci));
                }
                at = Some(dst);
                word.push(g as i32 + 1);
            }
            if at != Some(crossings[(word[0] - 1) as usize].from) {
                return Err(Pi1Error::CornerMismatch(ci));
            }
            relators.push(word);
        }
    }
    Ok(WallCrossingPresentation { objects, walls, crossings, relators })
}

fn free_reduce(w: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &x in w {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    while out.len() >= 2 && out[0] == -out[out.len() - 1] {
        out.pop();
        out.remove(0);
    }
    out
}

/// Least rotation of the word or its inverse, used to drop duplicate relators.
fn cyclic_key(w: &[i32]) -> Word {
    let inv: Word = w.iter().rev().map(|&x| -x).collect();
    let mut best = w.to_vec();
    for cand in [w.to_vec(), inv] {
        for r in 0..cand.len() {
            let mut c = cand[r..].to_vec();
            c.extend_from_slice(&cand[..r]);
            if c < best {
                best = c;
            }
        }
    }
    best
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Collapse with the default spanning tree (walls taken in index order).
pub fn collapse_to_group(g: &WallCrossingPresentation) -> Result<GroupPresentation, Pi1Error> {
    let order: Vec<usize> = (0..g.walls.len()).collect();
    collapse_with_tree(g, &order)
}

/// Spanning tree chosen greedily in the given wall order.
pub fn collapse_with_tree(g: &WallCrossingPresentation, wall_order: &[usize]) -> Result<GroupPresentation, Pi1Error> {
    let k = g.objects.len();
    let mut parent: Vec<usize> = (0..k).collect();
    let mut in_tree = vec![false; g.walls.len()];
    for &w in wall_order {
        let c = &g.crossings[2 * w];
        let (a, b) = (find(&mut parent, c.from), find(&mut parent, c.to));
        if a != b {
            parent[a] = b;
            in_tree[w] = true;
        }
    }
    let roots: BTreeSet<usize> = (0..k).map(|x| find(&mut parent, x)).collect();
    if roots.len() > 1 {
        return Err(Pi1Error::DisconnectedSpace { components: roots.len() });
    }
    // letter for crossing c in terms of wall generators (0 = trivial)
    let letter = |c: i32| -> i32 {
        let idx = (c.unsigned_abs() - 1) as usize;
        let w = idx / 2;
        if in_tree[w] {
            return 0;
        }
        let base = w as i32 + 1;
        let dir = if idx.is_multiple_of(2) { base } else { -base };
        if c > 0 {
            dir
        } else {
            -dir
        }
    };
    let mut alive: Vec<bool> = (0..g.walls.len()).map(|w| !in_tree[w]).collect();
    let mut rels: Vec<Word> = g
        .relators
        .iter()
        .map(|r| free_reduce(&r.iter().map(|&c| letter(c)).filter(|&x| x != 0).collect::<Vec<_>>()))
        .collect();
    // eliminate generators killed by length-one relators
    loop {
        let dead: BTreeSet<i32> = rels.iter().filter(|r| r.len() == 1).map(|r| r[0].abs()).collect();
        if dead.is_empty() {
            break;
        }
        for &d in &dead {
            alive[(d - 1) as usize] = false;
        }
        rels = rels
            .iter()
            .map(|r| free_reduce(&r.iter().copied().filter(|x| !dead.contains(&x.abs())).collect::<Vec<_>>()))
            .collect();
    }
    let mut seen = BTreeSet::new();
    let mut kept = Vec::new();
    for r in rels {
        if !r.is_empty() && seen.insert(cyclic_key(&r)) {
            kept.push(r);
        }
    }
    let mut renumber = vec![0i32; g.walls.len()];
    let mut generators = Vec::new();
    for w in 0..g.walls.len() {
        if alive[w] {
            generators.push(format!("w{}", g.walls[w].idx));
            renumber[w] = generators.len() as i32;
        }
    }
    let relators = kept
        .into_iter()
        .map(|r| r.iter().map(|&x| renumber[(x.abs() - 1) as usize] * x.signum()).collect())
        .collect();
    Ok(GroupPresentation { generators, relators })
}

/// Exponent-sum matrix, one row per relator.
pub fn exponent_matrix(g: &GroupPresentation) -> Vec<Vec<BigInt>> {
    g.relators
        .iter()
        .map(|r| {
            let mut row = vec![0i64; g.generators.len()];
            for &x in r {
                row[(x.abs() - 1) as usize] += x.signum() as i64;
            }
            row.into_iter().map(BigInt::from).collect()
        })
        .collect()
}

pub fn abelianization(g: &GroupPresentation) -> IntegerGroup {
    let f = smith_normal_form(&exponent_matrix(g)).factors;
    IntegerGroup {
        free_rank: g.generators.len() - f.len(),
        torsion: f.iter().filter(|x| !x.is_one()).map(|x| x.to_u64().expect("factor fits u64")).collect(),
    }
}

/// Components of the wall-adjacency graph on top classes.
pub fn components(g: &WallCrossingPresentation) -> Vec<Vec<usize>> {
    let k = g.objects.len();
    let mut adj = vec![Vec::new(); k];
    for c in &g.crossings {
        adj[c.from].push(c.to);
    }
    let mut comp = vec![usize::MAX; k];
    let mut out = Vec::new();
    for s in 0..k {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut q = VecDeque::from([s]);
        comp[s] = out.len();
        let mut members = Vec::new();
        while let Some(x) = q.pop_front() {
            members.push(x);
            for &y in &adj[x] {
                if comp[y] == usize::MAX {
                    comp[y] = out.len();
                    q.push_back(y);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

impl GroupPresentation {
    pub fn to_json(&self) -> serde_json::Value {
        json!({"generators": self.generators, "relators": self.relators})
    }

    pub fn to_gap(&self) -> String {
        let mut s = format!("F := FreeGroup({});\n", self.generators.len());
        let words: Vec<String> = self
            .relators
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&x| if x > 0 { format!("F.{x}") } else { format!("F.{}^-1", -x) })
                    .collect::<Vec<_>>()
                    .join("*")
            })
            .collect();
        let _ = writeln!(s, "rels := [{}];", words.join(", "));
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decorated_trees::parse_sigma;
    use crate::enumeration::enumerate_classes;

    fn ab(s: &str, n: usize) -> IntegerGroup {
        let p = enumerate_classes(&parse_sigma(s, n).unwrap());
        abelianization(&collapse_to_group(&wall_crossing_presentation(&p).unwrap()).unwrap())
    }

    #[test]
    fn circles_and_surfaces() {
        let p = enumerate_classes(&parse_sigma("id", 4).unwrap());
        let w = wall_crossing_presentation(&p).unwrap();
        assert_eq!((w.objects.len(), w.crossings.len(), w.relators.len()), (3, 6, 3));
        assert_eq!(ab("id", 4), IntegerGroup { free_rank: 1, torsion: vec![] });
        assert_eq!(ab("(1 2)", 4), IntegerGroup { free_rank: 1, torsion: vec![] });
        assert_eq!(ab("id", 5), IntegerGroup { free_rank: 4, torsion: vec![2] });
        assert_eq!(ab("(1 3)(2 4)", 5), IntegerGroup { free_rank: 0, torsion: vec![2] });
        assert_eq!(ab("id", 3), IntegerGroup { free_rank: 0, torsion: vec![] });
    }

    #[test]
    fn words() {
        assert_eq!(free_reduce(&[1, 2, -2, 3, -1]), vec![3]);
        assert_eq!(cyclic_key(&[2, 1]), cyclic_key(&[-1, -2]));
        let g = GroupPresentation { generators: vec!["a".into(), "b".into()], relators: vec![vec![1, -2]] };
        assert_eq!(g.to_gap(), "F := FreeGroup(2);\nrels := [F.1*F.2^-1];\n");
    }
}
