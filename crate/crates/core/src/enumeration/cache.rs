use std::collections::HashMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use thiserror::Error;

use super::{ClassId, Covering, StrataPoset, StratumClass};
use crate::decorated_trees::{InvolutionSpec, OPlanarTree};

/// Bump whenever the encoding or the line layout changes.
pub const CACHE_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache io: {0}")]
    Io(#[from] io::Error),
    #[error("cache line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("cache header does not match (n, sigma, version)")]
    Stale,
}

pub fn cache_path(dir: &Path, sigma: &InvolutionSpec) -> PathBuf {
    dir.join(format!("n{}_{}_v{}.jsonl", sigma.n(), sigma.tag(), CACHE_VERSION))
}

fn header(sigma: &InvolutionSpec) -> Value {
    let pairs: Vec<[u8; 2]> = sigma.pairs().iter().map(|&(a, b)| [a, b]).collect();
    json!({"n": sigma.n(), "sigma": pairs, "version": CACHE_VERSION})
}

pub fn write_jsonl(p: &StrataPoset) -> String {
    let mut out = String::new();
    out.push_str(&header(&p.sigma).to_string());
    out.push('\n');
    for id in p.ids() {
        let c = p.class(id);
        let tree = OPlanarTree::from_masks(&p.sigma, &c.rep).to_json();
        out.push_str(&json!({"dim": id.dim, "encoding": c.hex(), "tree": tree}).to_string());
        out.push('\n');
    }
    for cv in &p.coverings {
        let line = json!({"upper": p.class(cv.upper).hex(), "lower": p.class(cv.lower).hex(), "mult": cv.mult});
        out.push_str(&line.to_string());
        out.push('\n');
    }
    for &(u, l) in &p.pair_contractions {
        let line = json!({"pair_upper": p.class(u).hex(), "lower": p.class(l).hex()});
        out.push_str(&line.to_string());
        out.push('\n');
    }
    out
}

pub fn read_jsonl(text: &str, sigma: &InvolutionSpec) -> Result<StrataPoset, CacheError> {
    let bad = |line: usize, msg: &str| CacheError::Format { line, msg: msg.into() };
    let mut lines = text.lines().enumerate();
    let (_, first) = lines.next().ok_or_else(|| bad(1, "empty"))?;
    let h: Value = serde_json::from_str(first).map_err(|e| bad(1, &e.to_string()))?;
    if h != header(sigma) {
        return Err(CacheError::Stale);
    }
    let n = sigma.n();
    let mut classes: Vec<Vec<StratumClass>> = vec![Vec::new(); n - 2];
    let mut index: HashMap<String, ClassId> = HashMap::new();
    let mut coverings = Vec::new();
    let mut pairs = Vec::new();
    for (i, line) in lines {
        let ln = i + 1;
        let v: Value = serde_json::from_str(line).map_err(|e| bad(ln, &e.to_string()))?;
        let lookup = |k: &str, index: &HashMap<String, ClassId>| -> Result<ClassId, CacheError> {
            let h = v[k].as_str().ok_or_else(|| bad(ln, "missing encoding"))?;
            index.get(h).copied().ok_or_else(|| bad(ln, "unknown class"))
        };
        if let Some(enc) = v.get("encoding").and_then(|e| e.as_str()) {
            let dim = v["dim"].as_u64().ok_or_else(|| bad(ln, "missing dim"))? as usize;
            let t = OPlanarTree::from_json(&v["tree"]).map_err(|e| bad(ln, &e))?;
            let (mt, _, _) = t.to_masks().map_err(|e| bad(ln, &e.to_string()))?;
            let c = mt.canonical(sigma);
            if hex::encode(&c.key) != enc || c.rep.dim() != dim || dim >= classes.len() {
                return Err(bad(ln, "encoding does not match tree"));
            }
            index.insert(enc.to_string(), ClassId { dim, idx: classes[dim].len() });
            classes[dim].push(StratumClass { key: c.key, rep: c.rep });
        } else if v.get("pair_upper").is_some() {
            pairs.push((lookup("pair_upper", &index)?, lookup("lower", &index)?));
        } else {
            let mult = v["mult"].as_u64().ok_or_else(|| bad(ln, "missing mult"))? as u8;
            coverings.push(Covering { upper: lookup("upper", &index)?, lower: lookup("lower", &index)?, mult });
        }
    }
    for cs in &classes {
        if cs.windows(2).any(|w| w[0].key >= w[1].key) {
            return Err(bad(0, "classes out of order"));
        }
    }
    Ok(StrataPoset::assemble(sigma.clone(), classes, coverings, pairs))
}

pub fn save_cache(p: &StrataPoset, dir: &Path) -> Result<PathBuf, CacheError> {
    fs::create_dir_all(dir)?;
    let path = cache_path(dir, &p.sigma);
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, write_jsonl(p))?;
    fs::rename(&tmp, &path)?;
    Ok(path)
}

/// `Ok(None)` when no cache file exists for this `(n, sigma, version)`.
pub fn load_cache(dir: &Path, sigma: &InvolutionSpec) -> Result<Option<StrataPoset>, CacheError> {
    let path = cache_path(dir, sigma);
    match fs::read_to_string(&path) {
        Ok(text) => read_jsonl(&text, sigma).map(Some),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(e.into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decorated_trees::parse_sigma;
    use crate::enumeration::enumerate_classes;

    #[test]
    fn round_trip() {
        let s = parse_sigma("(1 3)(2 4)", 5).unwrap();
        let p = enumerate_classes(&s);
        let text = write_jsonl(&p);
        let q = read_jsonl(&text, &s).unwrap();
        assert_eq!(q.counts(), p.counts());
        assert_eq!(q.coverings, p.coverings);
        assert_eq!(q.pair_contractions, p.pair_contractions);
        assert_eq!(write_jsonl(&q), text);
        let other = parse_sigma("(1 2)", 5).unwrap();
        assert!(matches!(read_jsonl(&text, &other), Err(CacheError::Stale)));
    }
}
