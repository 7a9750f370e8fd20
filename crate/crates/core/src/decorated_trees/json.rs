use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Flag, InvolutionSpec, OPlanarTree, Tree, TypeMarker};

#[derive(Serialize, Deserialize)]
struct VertexJson {
    id: usize,
    #[serde(default)]
    fixed: bool,
    #[serde(default)]
    cycle: Vec<usize>,
    #[serde(default)]
    plus: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct FlagJson {
    id: usize,
    vertex: usize,
    mate: Option<usize>,
    tail: Option<u8>,
}

#[derive(Serialize, Deserialize)]
struct TreeJson {
    n: usize,
    sigma: Vec<[u8; 2]>,
    marker: TypeMarker,
    vertices: Vec<VertexJson>,
    flags: Vec<FlagJson>,
    half_plus: Option<Vec<usize>>,
}

pub(super) fn to_json(t: &OPlanarTree) -> Value {
    let inv = t.involution().ok();
    let vertices = t
        .tree
        .vertices
        .iter()
        .map(|&v| VertexJson {
            id: v,
            fixed: inv.as_ref().is_some_and(|i| i.vertex_map.get(&v) == Some(&v)),
            cycle: t.real_cyclic.get(&v).cloned().unwrap_or_default(),
            plus: t.plus_part.get(&v).map(|p| p.iter().copied().collect()).unwrap_or_default(),
        })
        .collect();
    let flags = t
        .tree
        .flags
        .iter()
        .map(|f| FlagJson {
            id: f.id,
            vertex: f.vertex,
            mate: (f.mate != f.id).then_some(f.mate),
            tail: f.tail,
        })
        .collect();
    let j = TreeJson {
        n: t.n(),
        sigma: t.sigma.pairs().iter().map(|&(a, b)| [a, b]).collect(),
        marker: t.marker,
        vertices,
        flags,
        half_plus: t.half_plus.as_ref().map(|h| h.iter().copied().collect()),
    };
    serde_json::to_value(j).expect("tree json")
}

pub(super) fn from_json(v: &Value) -> Result<OPlanarTree, String> {
    let j: TreeJson = serde_json::from_value(v.clone()).map_err(|e| e.to_string())?;
    let sigma = InvolutionSpec::new(j.n, j.sigma.iter().map(|p| (p[0], p[1])).collect())
        .map_err(|e| e.to_string())?;
    let flags = j
        .flags
        .iter()
        .map(|f| Flag { id: f.id, vertex: f.vertex, mate: f.mate.unwrap_or(f.id), tail: f.tail })
        .collect();
    let mut real_cyclic = BTreeMap::new();
    let mut plus_part = BTreeMap::new();
    if j.marker == TypeMarker::Type1 {
        for v in j.vertices.iter().filter(|v| v.fixed || !v.cycle.is_empty() || !v.plus.is_empty()) {
            real_cyclic.insert(v.id, v.cycle.clone());
            plus_part.insert(v.id, v.plus.iter().copied().collect::<BTreeSet<_>>());
        }
    }
    Ok(OPlanarTree {
        sigma,
        tree: Tree { vertices: j.vertices.iter().map(|v| v.id).collect(), flags },
        marker: j.marker,
        real_cyclic,
        plus_part,
        half_plus: j.half_plus.map(|h| h.into_iter().collect()),
    })
}
