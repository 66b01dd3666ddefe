//! The ordered-AND transform: a tag string becomes the set of its adjacent
//! pairs and/or triples, encoded as a sparse binary vector over the fixed
//! universe of all `m² + m³` tuples.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::tagset::{TagId, TagSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TupleMode {
    Pairs,
    Triples,
    Both,
}

impl TupleMode {
    pub fn uses_pairs(self) -> bool {
        matches!(self, TupleMode::Pairs | TupleMode::Both)
    }

    pub fn uses_triples(self) -> bool {
        matches!(self, TupleMode::Triples | TupleMode::Both)
    }

    fn min_len(self) -> usize {
        if self.uses_triples() {
            3
        } else {
            2
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TupleMode::Pairs => "pairs",
            TupleMode::Triples => "triples",
            TupleMode::Both => "both",
        }
    }
}

impl fmt::Display for TupleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TupleMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pairs" => Ok(TupleMode::Pairs),
            "triples" => Ok(TupleMode::Triples),
            "both" => Ok(TupleMode::Both),
            _ => Err(Error::InvalidParam(format!("unknown tuple mode `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tuple {
    Pair(TagId, TagId),
    Triple(TagId, TagId, TagId),
}

impl Tuple {
    pub fn tags(&self) -> Vec<TagId> {
        match *self {
            Tuple::Pair(a, b) => vec![a, b],
            Tuple::Triple(a, b, c) => vec![a, b, c],
        }
    }

    /// `(a, b)` / `(a, b, c)` using display names.
    pub fn render(&self, tagset: &TagSet) -> String {
        let names: Vec<&str> = self.tags().into_iter().map(|t| tagset.display(t)).collect();
        format!("({})", names.join(", "))
    }

    /// A prohibition-table rule line for this tuple.
    pub fn rule_line(&self, tagset: &TagSet) -> String {
        match *self {
            Tuple::Pair(a, b) => format!("P {} {}", tagset.name(a), tagset.name(b)),
            Tuple::Triple(a, b, c) => format!("T {} {} {}", tagset.name(a), tagset.name(b), tagset.name(c)),
        }
    }
}

/// Arithmetic bijection between tuples and vector positions.
///
/// Pair `(a, b)` maps to `a·m + b`; triple `(a, b, c)` maps to
/// `offset + a·m² + b·m + c` where `offset` is `m²` in `Both` mode and 0 otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TupleIndex {
    mode: TupleMode,
    m: usize,
}

impl TupleIndex {
    pub fn new(mode: TupleMode, m: usize) -> Self {
        TupleIndex { mode, m }
    }

    pub fn mode(&self) -> TupleMode {
        self.mode
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        let m = self.m;
        match self.mode {
            TupleMode::Pairs => m * m,
            TupleMode::Triples => m * m * m,
            TupleMode::Both => m * m + m * m * m,
        }
    }

    fn triple_offset(&self) -> usize {
        match self.mode {
            TupleMode::Both => self.m * self.m,
            _ => 0,
        }
    }

    #[inline]
    fn pair(&self, a: TagId, b: TagId) -> usize {
        a.index() * self.m + b.index()
    }

    #[inline]
    fn triple(&self, a: TagId, b: TagId, c: TagId) -> usize {
        self.triple_offset() + (a.index() * self.m + b.index()) * self.m + c.index()
    }

    /// Vector position of a tuple; `None` if the mode does not include its arity.
    pub fn encode(&self, t: Tuple) -> Option<usize> {
        match t {
            Tuple::Pair(a, b) if self.mode.uses_pairs() => Some(self.pair(a, b)),
            Tuple::Triple(a, b, c) if self.mode.uses_triples() => Some(self.triple(a, b, c)),
            _ => None,
        }
    }

    pub fn decode(&self, i: usize) -> Result<Tuple> {
        let dim = self.dim();
        if i >= dim {
            return Err(Error::IndexOutOfRange { index: i, dim });
        }
        let m = self.m;
        let id = |x: usize| TagId(x as u16);
        if self.mode == TupleMode::Pairs || (self.mode == TupleMode::Both && i < m * m) {
            return Ok(Tuple::Pair(id(i / m), id(i % m)));
        }
        let j = i - self.triple_offset();
        Ok(Tuple::Triple(id(j / (m * m)), id(j / m % m), id(j % m)))
    }

    /// Encodes a tag sequence; repeated tuples set a single bit.
    pub fn phi(&self, seq: &[TagId]) -> Result<SparseBinaryVector> {
        if seq.len() < self.mode.min_len() {
            return Err(Error::SequenceTooShort {
                len: seq.len(),
                mode: self.mode.as_str(),
            });
        }
        if let Some(bad) = seq.iter().find(|t| t.index() >= self.m) {
            return Err(Error::TagOutOfRange {
                id: bad.index(),
                m: self.m,
            });
        }
        let mut active = Vec::with_capacity(2 * seq.len());
        if self.mode.uses_pairs() {
            active.extend(seq.windows(2).map(|w| self.pair(w[0], w[1])));
        }
        if self.mode.uses_triples() {
            active.extend(seq.windows(3).map(|w| self.triple(w[0], w[1], w[2])));
        }
        Ok(SparseBinaryVector::from_indices(self.dim(), active))
    }

    /// The tuples of a sequence in order of occurrence (with repeats).
    pub fn tuples_of(&self, seq: &[TagId]) -> Vec<Tuple> {
        let mut out = Vec::new();
        if self.mode.uses_pairs() {
            out.extend(seq.windows(2).map(|w| Tuple::Pair(w[0], w[1])));
        }
        if self.mode.uses_triples() {
            out.extend(seq.windows(3).map(|w| Tuple::Triple(w[0], w[1], w[2])));
        }
        out
    }
}

/// Binary vector stored as its strictly increasing list of set positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparseBinaryVector {
    dim: usize,
    active: Vec<usize>,
}

impl SparseBinaryVector {
    /// Sorts and deduplicates `indices`. Panics if any index is `>= dim`.
    pub fn from_indices(dim: usize, mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        assert!(indices.last().is_none_or(|&i| i < dim), "index out of range");
        SparseBinaryVector { dim, active: indices }
    }

    pub fn try_from_indices(dim: usize, indices: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= dim) {
            return Err(Error::IndexOutOfRange { index: bad, dim });
        }
        Ok(SparseBinaryVector::from_indices(dim, indices))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn active(&self) -> &[usize] {
        &self.active
    }

    pub fn count(&self) -> usize {
        self.active.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.active.binary_search(&i).is_ok()
    }

    pub fn union(&self, other: &SparseBinaryVector) -> SparseBinaryVector {
        let mut all = self.active.clone();
        all.extend_from_slice(&other.active);
        SparseBinaryVector::from_indices(self.dim, all)
    }

    /// Dot product with a dense weight vector.
    pub fn dot(&self, w: &[f64]) -> f64 {
        self.active.iter().map(|&i| w[i]).sum()
    }
}
