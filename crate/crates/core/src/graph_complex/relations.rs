//! Relation chains of the graph complex.
//!
//! Each family inserts new vertices at one vertex of a base class two degrees
//! up and collects the resulting classes into two sums `g1` and `g2`; the
//! relation is `sum(g1) - sum(g2)`.

use std::collections::BTreeSet;

use itertools::Itertools;
use rayon::prelude::*;

use crate::decorated_trees::masks::{self, fixed_decos, pairs_at, real_flags, union, vertex_image, Deco, MaskTree, Sign, Vertex};
use crate::decorated_trees::{InvolutionSpec, Mask, TypeMarker};
use crate::enumeration::StrataPoset;

type Keys = BTreeSet<Vec<u8>>;

/// One relation as the two class sums, by index into the degree's generators.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RelationChain {
    pub g1: Vec<usize>,
    pub g2: Vec<usize>,
}

fn subsets(items: &[Mask]) -> impl Iterator<Item = Vec<Mask>> + '_ {
    (0..=items.len()).flat_map(move |r| items.iter().copied().combinations(r))
}

fn without(v: &[Mask], drop: &[Mask]) -> Vec<Mask> {
    v.iter().copied().filter(|m| !drop.contains(m)).collect()
}

fn images(sig: &InvolutionSpec, ms: &[Mask]) -> Vec<Mask> {
    ms.iter().map(|&m| sig.mask(m)).collect()
}

/// Split the group `grp` off `v` (and its conjugate off `v`'s other flags) as a
/// conjugate pair of new vertices; returns the new central vertex and the pair.
fn bubble(sig: &InvolutionSpec, v: &[Mask], grp: &[Mask]) -> (Vertex, Mask, Vertex, Vertex) {
    let full = sig.full();
    let e = union(grp);
    let mut drop = grp.to_vec();
    drop.extend(images(sig, grp));
    let mut vt = without(v, &drop);
    vt.push(e);
    vt.push(sig.mask(e));
    let mut ve = grp.to_vec();
    ve.push(full ^ e);
    let veb = vertex_image(sig, &ve);
    (masks::sorted(vt), e, masks::sorted(ve), veb)
}

fn key(sig: &InvolutionSpec, t: &MaskTree) -> Vec<u8> {
    t.encoding(sig)
}

/// Classes reachable by contracting the listed real edges with all signs.
fn contract_back_keys(sig: &InvolutionSpec, t: &MaskTree, edges: &[Mask]) -> Keys {
    let mut out = Keys::new();
    for signs in (0..edges.len()).map(|_| Sign::BOTH.iter()).multi_cartesian_product() {
        let mut cur = t.clone();
        for (&m, &s) in edges.iter().zip(signs) {
            let vi = cur.find_vertex(m).expect("edge flag");
            cur = cur.contract_invariant(sig, vi, m, s);
        }
        out.insert(key(sig, &cur));
    }
    out
}

/// A real vertex degenerates, two conjugate flags in the plus part leaving together.
fn real_vertex_family(sig: &InvolutionSpec, t: &MaskTree, base: &[u8]) -> Vec<(Keys, Keys)> {
    let full = sig.full();
    let mut out = Vec::new();
    for vi in 0..t.verts.len() {
        let Some(d) = &t.deco[vi] else { continue };
        let v = &t.verts[vi];
        let reals = real_flags(sig, v);
        if v.len() < 5 || reals.is_empty() || d.plus.len() < 2 {
            continue;
        }
        // the real flags all stay at the central vertex, so the choice of f3 among them is immaterial
        let f3 = reals[0];
        for (&f1, &f2) in d.plus.iter().tuple_combinations() {
            let taken = [f1, f2, sig.mask(f1), sig.mask(f2), f3];
            let f_pairs: Vec<Mask> =
                v.iter().copied().filter(|m| !taken.contains(m) && !sig.is_invariant(*m) && d.plus.contains(m)).collect();

            let mut g1 = Keys::new();
            for f2set in subsets(&f_pairs) {
                let mut grp = f2set.clone();
                grp.push(f1);
                grp.push(f2);
                let (vt, e, ve, veb) = bubble(sig, v, &grp);
                let mut plus: Vec<Mask> = d.plus.iter().copied().filter(|m| vt.contains(m)).collect();
                plus.push(e);
                let nd = Deco { cycle: d.cycle.clone(), plus: masks::sorted(plus) };
                let nt = t.replace(&[vi], vec![(vt, Some(nd)), (ve, None), (veb, None)]);
                g1.insert(key(sig, &nt));
            }

            let mut g2 = Keys::new();
            for assign in (0..f_pairs.len()).map(|_| 0..3u8).multi_cartesian_product() {
                let mut parts: [Vec<Mask>; 3] = Default::default();
                for (&m, &a) in f_pairs.iter().zip(&assign) {
                    parts[a as usize].push(m);
                    parts[a as usize].push(sig.mask(m));
                }
                let mut s1 = parts[1].clone();
                s1.extend([f1, sig.mask(f1)]);
                let mut s2 = parts[2].clone();
                s2.extend([f2, sig.mask(f2)]);
                let (e1, e2) = (union(&s1), union(&s2));
                let mut vt = parts[0].clone();
                vt.extend(&reals);
                vt.extend([e1, e2]);
                let vt = masks::sorted(vt);
                s1.push(full ^ e1);
                s2.push(full ^ e2);
                let (v1, v2) = (masks::sorted(s1), masks::sorted(s2));
                for d0 in fixed_decos(sig, &vt) {
                    for d1 in fixed_decos(sig, &v1) {
                        for d2 in fixed_decos(sig, &v2) {
                            let nt = t.replace(
                                &[vi],
                                vec![(vt.clone(), Some(d0.clone())), (v1.clone(), Some(d1.clone())), (v2.clone(), Some(d2))],
                            );
                            if contract_back_keys(sig, &nt, &[e1, e2]).contains(base) {
                                g2.insert(key(sig, &nt));
                            }
                        }
                    }
                }
            }
            out.push((g1, g2));
        }
    }
    out
}

/// A conjugate pair of vertices degenerates; the three pairings of four flags agree.
fn conjugate_pair_family(sig: &InvolutionSpec, t: &MaskTree) -> Vec<(Keys, Keys)> {
    let full = sig.full();
    let mut out = Vec::new();
    let mut done: Vec<Vertex> = Vec::new();
    for vi in 0..t.verts.len() {
        let v = &t.verts[vi];
        let sv = vertex_image(sig, v);
        if sv == *v || v.len() < 4 || done.contains(&sv) {
            continue;
        }
        done.push(v.clone());
        let svi = t.verts.iter().position(|x| *x == sv).expect("conjugate vertex");
        for quad in v.iter().copied().combinations(4) {
            let rest = without(v, &quad);
            let pairings = [
                ((quad[0], quad[1]), (quad[2], quad[3])),
                ((quad[0], quad[2]), (quad[1], quad[3])),
                ((quad[0], quad[3]), (quad[1], quad[2])),
            ];
            let sums: Vec<Keys> = pairings
                .iter()
                .map(|&((a, b), (c, dd))| {
                    let mut s = Keys::new();
                    for f1 in subsets(&rest) {
                        let mut grp = without(&rest, &f1);
                        grp.extend([c, dd]);
                        let e = union(&grp);
                        let mut va = f1.clone();
                        va.extend([a, b, e]);
                        let mut vb = grp.clone();
                        vb.push(full ^ e);
                        let vab = vertex_image(sig, &va);
                        let vbb = vertex_image(sig, &vb);
                        let nt = t.replace(&[vi, svi], vec![(va, None), (vb, None), (vab, None), (vbb, None)]);
                        s.insert(key(sig, &nt));
                    }
                    s
                })
                .collect();
            out.push((sums[0].clone(), sums[1].clone()));
            out.push((sums[0].clone(), sums[2].clone()));
        }
    }
    out
}

/// Type 1 with no real flags at all: bubbles of `{f2,f3}` and of `{f1,f2}` agree.
fn empty_circle_family(sig: &InvolutionSpec, t: &MaskTree) -> Vec<(Keys, Keys)> {
    let mut out = Vec::new();
    let vi = t.deco.iter().position(|d| d.is_some()).expect("fixed vertex");
    let d = t.deco[vi].as_ref().unwrap();
    let v = &t.verts[vi];
    if v.len() < 6 {
        return out;
    }
    let build = |f: &[Mask], grp0: [Mask; 2]| {
        let mut s = Keys::new();
        let fp: Vec<Mask> = f.iter().copied().filter(|m| d.plus.contains(m)).collect();
        for f2set in subsets(&fp) {
            let mut grp = f2set;
            grp.extend(grp0);
            let (vt, e, ve, veb) = bubble(sig, v, &grp);
            let mut plus: Vec<Mask> = d.plus.iter().copied().filter(|m| vt.contains(m)).collect();
            plus.push(e);
            let nd = Deco { cycle: Vec::new(), plus: masks::sorted(plus) };
            s.insert(key(sig, &t.replace(&[vi], vec![(vt, Some(nd)), (ve, None), (veb, None)])));
        }
        s
    };
    for &f1 in &d.plus {
        let others: Vec<Mask> = d.plus.iter().copied().filter(|&x| x != f1).collect();
        for (&f2, &f3) in others.iter().tuple_combinations() {
            let taken = [f1, f2, f3, sig.mask(f1), sig.mask(f2), sig.mask(f3)];
            let f = without(v, &taken);
            out.push((build(&f, [f2, f3]), build(&f, [f1, f2])));
        }
    }
    out
}

/// Type 2, in the closed triangle form `{f1,f2} + {f1,f3} = {f2',f3}` over all half selections.
fn type2_family(sig: &InvolutionSpec, t: &MaskTree) -> Vec<(Keys, Keys)> {
    let mut out = Vec::new();
    let vi = t.fixed_vertices(sig)[0];
    let v = &t.verts[vi];
    if v.len() < 6 {
        return out;
    }
    let build = |prs: &[(Mask, Mask)], grp0: [Mask; 2]| {
        let mut s = Keys::new();
        for choice in (0..prs.len()).map(|_| 0..3u8).multi_cartesian_product() {
            let mut grp = grp0.to_vec();
            for (&(a, b), &c) in prs.iter().zip(&choice) {
                match c {
                    1 => grp.push(a),
                    2 => grp.push(b),
                    _ => {}
                }
            }
            let (vt, _, ve, veb) = bubble(sig, v, &grp);
            let nt = t.replace(&[vi], vec![(vt, None), (ve, None), (veb, None)]);
            s.insert(key(sig, &nt));
        }
        s
    };
    for &f1 in v {
        if f1 > sig.mask(f1) {
            continue;
        }
        for &f2 in v {
            for &f3 in v {
                let mut ps: Vec<Mask> = [f1, f2, f3].iter().flat_map(|&m| [m, sig.mask(m)]).collect();
                ps = masks::sorted(ps);
                if ps.len() < 6 {
                    continue;
                }
                let rest = without(v, &ps);
                let prs = pairs_at(sig, &rest);
                let a = build(&prs, [f1, f2]);
                let b = build(&prs, [f1, f3]);
                let lhs: Keys = a.symmetric_difference(&b).cloned().collect();
                out.push((lhs, build(&prs, [sig.mask(f2), f3])));
            }
        }
    }
    out
}

/// Families at one base class.
fn families_at(sig: &InvolutionSpec, t: &MaskTree, base: &[u8]) -> Vec<(Keys, Keys)> {
    let fixed_labels = sig.has_fixed();
    let mut fams = Vec::new();
    match t.marker {
        TypeMarker::Type1 => {
            fams.extend(real_vertex_family(sig, t, base));
            if !fixed_labels && !t.has_real_flags(sig) {
                fams.extend(empty_circle_family(sig, t));
            }
        }
        TypeMarker::Type2 => fams.extend(type2_family(sig, t)),
        TypeMarker::Type3 => {}
    }
    fams.extend(conjugate_pair_family(sig, t));
    fams
}

/// Relation chains in degree `d`; empty when fewer than four labels are moved.
pub fn relation_chains(p: &StrataPoset, d: usize) -> Vec<RelationChain> {
    let sig = &p.sigma;
    if sig.num_perm() < 4 || d + 2 > p.top_dim() {
        return Vec::new();
    }
    let resolve = |ks: &Keys| -> Vec<usize> {
        ks.iter()
            .map(|k| {
                let id = p.lookup(k).expect("relation term is a class");
                assert_eq!(id.dim, d, "relation term in the wrong degree");
                id.idx
            })
            .collect()
    };
    let mut chains: Vec<RelationChain> = p.classes[d + 2]
        .par_iter()
        .flat_map_iter(|c| {
            families_at(sig, &c.rep, &c.key)
                .into_iter()
                .map(|(a, b)| RelationChain { g1: resolve(&a), g2: resolve(&b) })
                .collect::<Vec<_>>()
        })
        .collect();
    chains.sort();
    chains.dedup();
    chains
}
