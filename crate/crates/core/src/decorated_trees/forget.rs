use std::collections::{BTreeMap, BTreeSet};

use super::{side_of, Flag, InvolutionSpec, OPlanarTree, Tree, TreeError, TypeMarker};

/// Drop the tails with the given labels and stabilize. Remaining labels are
/// renumbered `1..=n'` in increasing order.
pub fn forget_tails(t: &OPlanarTree, drop: &[u8]) -> Result<OPlanarTree, TreeError> {
    t.check()?;
    let sigma = &t.sigma;
    let drop: BTreeSet<u8> = drop.iter().copied().collect();
    if drop.iter().any(|&l| l == 0 || l as usize > t.n() || !drop.contains(&sigma.apply(l))) {
        return Err(TreeError::DropNotInvariant);
    }
    let left = t.n() - drop.len();
    if left < 3 {
        return Err(TreeError::TooFewLabels(left));
    }
    let inv = t.involution()?;
    let mut fixed: BTreeSet<usize> = inv.vertex_map.iter().filter(|(a, b)| a == b).map(|(a, _)| *a).collect();
    let mut flags: BTreeMap<usize, Flag> = t.tree.flags.iter().map(|f| (f.id, f.clone())).collect();
    let mut vertices: BTreeSet<usize> = t.tree.vertices.iter().copied().collect();
    let mut cyc = t.real_cyclic.clone();
    let mut plus = t.plus_part.clone();
    let mut half = t.half_plus.clone();
    let mut marker = t.marker;

    fn remove_flag(
        id: usize,
        flags: &mut BTreeMap<usize, Flag>,
        cyc: &mut BTreeMap<usize, Vec<usize>>,
        plus: &mut BTreeMap<usize, BTreeSet<usize>>,
    ) {
        if let Some(f) = flags.remove(&id) {
            if let Some(c) = cyc.get_mut(&f.vertex) {
                c.retain(|&x| x != id);
            }
            if let Some(p) = plus.get_mut(&f.vertex) {
                p.remove(&id);
            }
        }
    }

    let tails: Vec<usize> = flags.values().filter(|f| f.tail.is_some_and(|l| drop.contains(&l))).map(|f| f.id).collect();
    for id in tails {
        remove_flag(id, &mut flags, &mut cyc, &mut plus);
    }

    loop {
        let unstable = vertices
            .iter()
            .copied()
            .find(|&v| flags.values().filter(|f| f.vertex == v).count() < 3);
        let Some(v) = unstable else { break };
        let at: Vec<Flag> = flags.values().filter(|f| f.vertex == v).cloned().collect();
        let v_plus = plus.get(&v).cloned();
        let v_fixed = fixed.contains(&v);
        vertices.remove(&v);
        fixed.remove(&v);
        cyc.remove(&v);
        plus.remove(&v);
        if let Some(h) = half.as_mut() {
            h.remove(&v);
        }
        match at.as_slice() {
            [f] => {
                flags.remove(&f.id);
                remove_flag(f.mate, &mut flags, &mut cyc, &mut plus);
            }
            [a, b] => {
                flags.remove(&a.id);
                flags.remove(&b.id);
                match (a.tail, b.tail) {
                    (None, None) => {
                        flags.get_mut(&a.mate).unwrap().mate = b.mate;
                        flags.get_mut(&b.mate).unwrap().mate = a.mate;
                        let conjugate = inv.flag_map[&a.id] == b.id;
                        if v_fixed && conjugate {
                            // the real component collapses to a solitary node
                            let toward = match &v_plus {
                                Some(p) if p.contains(&b.id) => b.mate,
                                _ => a.mate,
                            };
                            marker = TypeMarker::Type3;
                            cyc.clear();
                            plus.clear();
                            let tree = Tree { vertices: vertices.iter().copied().collect(), flags: flags.values().cloned().collect() };
                            let start = flags[&toward].vertex;
                            half = Some(side_of(&tree, start, toward));
                        }
                    }
                    (Some(l), None) | (None, Some(l)) => {
                        let e = if a.tail.is_none() { a } else { b };
                        let g = flags.get_mut(&e.mate).unwrap();
                        g.mate = g.id;
                        g.tail = Some(l);
                    }
                    (Some(_), Some(_)) => return Err(TreeError::TooFewLabels(2)),
                }
            }
            _ => return Err(TreeError::TooFewLabels(left)),
        }
    }

    let keep: Vec<u8> = (1..=t.n() as u8).filter(|l| !drop.contains(l)).collect();
    let new_label = |l: u8| keep.iter().position(|&x| x == l).unwrap() as u8 + 1;
    let pairs = sigma
        .pairs()
        .iter()
        .filter(|(a, _)| !drop.contains(a))
        .map(|&(a, b)| (new_label(a), new_label(b)))
        .collect();
    let sigma2 = InvolutionSpec::new(left, pairs)?;
    for f in flags.values_mut() {
        f.tail = f.tail.map(new_label);
    }
    let out = OPlanarTree {
        sigma: sigma2.clone(),
        tree: Tree { vertices: vertices.into_iter().collect(), flags: flags.into_values().collect() },
        marker,
        real_cyclic: cyc,
        plus_part: plus,
        half_plus: if marker == TypeMarker::Type3 { half } else { None },
    };
    let (mt, _, _) = out.to_masks()?;
    Ok(OPlanarTree::from_masks(&sigma2, &mt))
}
