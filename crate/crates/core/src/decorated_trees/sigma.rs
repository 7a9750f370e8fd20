use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Bitmask over labels; bit `i` is label `i + 1`.
pub type Mask = u32;

pub const MAX_LABELS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SigmaError {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("label {0} appears in more than one transposition")]
    OverlappingPairs(u8),
    #[error("label {label} out of range 1..={n}")]
    LabelOutOfRange { label: usize, n: usize },
    #[error("need at least 3 labels, got {0}")]
    TooFewLabels(usize),
    #[error("at most {MAX_LABELS} labels supported, got {0}")]
    TooManyLabels(usize),
}

/// An involution on the labels `1..=n`, stored as its transpositions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SigmaJson", into = "SigmaJson")]
pub struct InvolutionSpec {
    n: usize,
    pairs: Vec<(u8, u8)>,
    #[serde(skip)]
    perm: Vec<u8>,
}

#[derive(Serialize, Deserialize)]
struct SigmaJson {
    n: usize,
    pairs: Vec<[u8; 2]>,
}

impl TryFrom<SigmaJson> for InvolutionSpec {
    type Error = SigmaError;
    fn try_from(j: SigmaJson) -> Result<Self, SigmaError> {
        InvolutionSpec::new(j.n, j.pairs.iter().map(|p| (p[0], p[1])).collect())
    }
}

impl From<InvolutionSpec> for SigmaJson {
    fn from(s: InvolutionSpec) -> Self {
        SigmaJson { n: s.n, pairs: s.pairs.iter().map(|&(a, b)| [a, b]).collect() }
    }
}

impl InvolutionSpec {
    pub fn new(n: usize, pairs: Vec<(u8, u8)>) -> Result<Self, SigmaError> {
        if n < 3 {
            return Err(SigmaError::TooFewLabels(n));
        }
        if n > MAX_LABELS {
            return Err(SigmaError::TooManyLabels(n));
        }
        let mut perm: Vec<u8> = (0..n as u8).collect();
        let mut seen = vec![false; n];
        let mut norm = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            for x in [a, b] {
                if x == 0 || x as usize > n {
                    return Err(SigmaError::LabelOutOfRange { label: x as usize, n });
                }
            }
            if a == b {
                return Err(SigmaError::OverlappingPairs(a));
            }
            for x in [a, b] {
                if seen[x as usize - 1] {
                    return Err(SigmaError::OverlappingPairs(x));
                }
                seen[x as usize - 1] = true;
            }
            perm[a as usize - 1] = b - 1;
            perm[b as usize - 1] = a - 1;
            norm.push((a.min(b), a.max(b)));
        }
        norm.sort_unstable();
        Ok(InvolutionSpec { n, pairs: norm, perm })
    }

    pub fn identity(n: usize) -> Result<Self, SigmaError> {
        Self::new(n, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[(u8, u8)] {
        &self.pairs
    }

    pub fn full(&self) -> Mask {
        ((1u64 << self.n) - 1) as Mask
    }

    /// Image of a 1-based label.
    pub fn apply(&self, label: u8) -> u8 {
        self.perm[label as usize - 1] + 1
    }

    pub fn fixed_labels(&self) -> Vec<u8> {
        (1..=self.n as u8).filter(|&l| self.apply(l) == l).collect()
    }

    pub fn perm_labels(&self) -> Vec<u8> {
        (1..=self.n as u8).filter(|&l| self.apply(l) != l).collect()
    }

    pub fn num_perm(&self) -> usize {
        2 * self.pairs.len()
    }

    pub fn has_fixed(&self) -> bool {
        self.num_perm() < self.n
    }

    pub fn mask(&self, m: Mask) -> Mask {
        let mut r = 0;
        let mut x = m;
        while x != 0 {
            let i = x.trailing_zeros();
            x &= x - 1;
            r |= 1 << self.perm[i as usize];
        }
        r
    }

    pub fn is_invariant(&self, m: Mask) -> bool {
        self.mask(m) == m
    }

    /// Cycle notation, `id` for the identity.
    pub fn notation(&self) -> String {
        if self.pairs.is_empty() {
            return "id".into();
        }
        self.pairs.iter().map(|(a, b)| format!("({a} {b})")).collect()
    }

    /// File-name friendly tag, e.g. `12-34`.
    pub fn tag(&self) -> String {
        if self.pairs.is_empty() {
            return "id".into();
        }
        self.pairs.iter().map(|(a, b)| format!("{a}.{b}")).collect::<Vec<_>>().join("-")
    }
}

/// Parses `id` or products of transpositions like `(1 2)(3 4)`.
pub fn parse_sigma(text: &str, n: usize) -> Result<InvolutionSpec, SigmaError> {
    let t = text.trim();
    if t == "id" || t.is_empty() {
        return InvolutionSpec::new(n, Vec::new());
    }
    let offset = text.len() - text.trim_start().len();
    let bytes = t.as_bytes();
    let mut i = 0;
    let mut pairs = Vec::new();
    let err = |pos: usize, msg: &str| SigmaError::Parse { pos: pos + offset, msg: msg.into() };
    let skip_ws = |i: &mut usize| {
        while *i < bytes.len() && bytes[*i].is_ascii_whitespace() {
            *i += 1;
        }
    };
    let number = |i: &mut usize| -> Result<usize, SigmaError> {
        let start = *i;
        while *i < bytes.len() && bytes[*i].is_ascii_digit() {
            *i += 1;
        }
        if start == *i {
            return Err(err(start, "expected a label"));
        }
        t[start..*i].parse::<usize>().map_err(|_| err(start, "label too large"))
    };
    loop {
        skip_ws(&mut i);
        if i == bytes.len() {
            break;
        }
        if bytes[i] != b'(' {
            return Err(err(i, "expected '('"));
        }
        i += 1;
        skip_ws(&mut i);
        let a = number(&mut i)?;
        let sep = i;
        if i < bytes.len() && bytes[i] == b',' {
            i += 1;
        }
        skip_ws(&mut i);
        if i == sep {
            return Err(err(i, "expected a separator"));
        }
        let b = number(&mut i)?;
        skip_ws(&mut i);
        if i >= bytes.len() || bytes[i] != b')' {
            return Err(err(i, "expected ')'"));
        }
        i += 1;
        for x in [a, b] {
            if x == 0 || x > n {
                return Err(SigmaError::LabelOutOfRange { label: x, n });
            }
        }
        pairs.push((a as u8, b as u8));
    }
    if pairs.is_empty() {
        return Err(err(0, "empty permutation"));
    }
    InvolutionSpec::new(n, pairs)
}

#[inline]
pub fn popcount(m: Mask) -> u32 {
    m.count_ones()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let s = parse_sigma("id", 5).unwrap();
        assert!(s.pairs().is_empty());
        let s = parse_sigma("(1 2)(3 4)", 5).unwrap();
        assert_eq!(s.pairs(), &[(1, 2), (3, 4)]);
        assert_eq!(s.fixed_labels(), vec![5]);
        assert_eq!(parse_sigma("(1 2)(2 3)", 5), Err(SigmaError::OverlappingPairs(2)));
    }

    #[test]
    fn parse_positions() {
        match parse_sigma("(1 2)x", 4) {
            Err(SigmaError::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{other:?}"),
        }
        match parse_sigma("(1 )", 4) {
            Err(SigmaError::Parse { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_sigma("(1 9)", 4), Err(SigmaError::LabelOutOfRange { .. })));
        assert!(matches!(parse_sigma("id", 2), Err(SigmaError::TooFewLabels(2))));
    }

    #[test]
    fn mask_action() {
        let s = parse_sigma("(1 3)", 4).unwrap();
        assert_eq!(s.mask(0b0001), 0b0100);
        assert_eq!(s.mask(0b1010), 0b1010);
        assert_eq!(s.notation(), "(1 3)");
    }
}
