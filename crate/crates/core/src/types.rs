//! Group parameters, residue vectors and sequences over `C_n^r`.

use std::fmt;

use crate::error::{Error, Result};

/// The triple `(n, r, k)`: group `C_n^r`, target subsequence length `k·n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct GroupParams {
    n: u32,
    r: usize,
    k: u32,
}

impl GroupParams {
    pub fn new(n: u32, r: usize, k: u32) -> Result<Self> {
        if n == 0 || r == 0 || k == 0 {
            return Err(Error::InvalidParams(format!(
                "n, r, k must all be >= 1 (got n={n} r={r} k={k})"
            )));
        }
        if n.checked_mul(k).is_none() {
            return Err(Error::InvalidParams(format!("k*n overflows (n={n} k={k})")));
        }
        Ok(GroupParams { n, r, k })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// `L = k·n`.
    pub fn subsequence_len(&self) -> usize {
        (self.k * self.n) as usize
    }

    /// `n^r`, if it fits in a `u64`.
    pub fn group_order(&self) -> Option<u64> {
        let r = u32::try_from(self.r).ok()?;
        u64::from(self.n).checked_pow(r)
    }

    pub fn with_k(&self, k: u32) -> Result<Self> {
        GroupParams::new(self.n, self.r, k)
    }

    pub fn zero(&self) -> ZVector {
        ZVector(vec![0; self.r])
    }
}

impl fmt::Display for GroupParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} r={} k={}", self.n, self.r, self.k)
    }
}

/// A vector of residues, each in `[0, n)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ZVector(Vec<u32>);

impl ZVector {
    /// Wraps `coords`, checking length against `r` and every entry against `n`.
    pub fn new(params: &GroupParams, coords: Vec<u32>) -> Result<Self> {
        if coords.len() != params.r {
            return Err(Error::InvalidParams(format!(
                "vector has {} coordinates, expected r={}",
                coords.len(),
                params.r
            )));
        }
        if let Some(c) = coords.iter().find(|&&c| c >= params.n) {
            return Err(Error::InvalidParams(format!(
                "residue {c} not reduced mod n={}",
                params.n
            )));
        }
        Ok(ZVector(coords))
    }

    /// Reduces arbitrary integers mod `n`.
    pub fn reduced(params: &GroupParams, coords: &[i64]) -> Result<Self> {
        let n = i64::from(params.n);
        ZVector::new(
            params,
            coords.iter().map(|c| c.rem_euclid(n) as u32).collect(),
        )
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub(crate) fn add_assign_mod(&mut self, other: &ZVector, n: u32) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a = ((u64::from(*a) + u64::from(*b)) % u64::from(n)) as u32;
        }
    }

    pub(crate) fn from_raw(coords: Vec<u32>) -> Self {
        ZVector(coords)
    }
}

impl fmt::Display for ZVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

pub fn is_zero(v: &ZVector) -> bool {
    v.0.iter().all(|&c| c == 0)
}

/// An ordered list of vectors in `C_n^r`.
///
/// Order is kept for reproducible output, but equality is multiset equality.
#[derive(Clone, Debug)]
pub struct GSequence {
    params: GroupParams,
    items: Vec<ZVector>,
}

impl GSequence {
    pub fn new(params: GroupParams, items: Vec<ZVector>) -> Result<Self> {
        for v in &items {
            if v.len() != params.r || v.0.iter().any(|&c| c >= params.n) {
                return Err(Error::InvalidParams(format!(
                    "item {v} does not belong to C_{}^{}",
                    params.n, params.r
                )));
            }
        }
        Ok(GSequence { params, items })
    }

    /// Builds a sequence from raw rows, validating each.
    pub fn from_rows<R: AsRef<[u32]>>(params: GroupParams, rows: &[R]) -> Result<Self> {
        let items = rows
            .iter()
            .map(|r| ZVector::new(&params, r.as_ref().to_vec()))
            .collect::<Result<_>>()?;
        Ok(GSequence { params, items })
    }

    pub(crate) fn from_trusted(params: GroupParams, items: Vec<ZVector>) -> Self {
        GSequence { params, items }
    }

    pub fn params(&self) -> &GroupParams {
        &self.params
    }

    pub fn items(&self) -> &[ZVector] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn with_params(mut self, params: GroupParams) -> Result<Self> {
        if params.n != self.params.n || params.r != self.params.r {
            return Err(Error::InvalidParams(format!(
                "cannot move a sequence over {} to {}",
                self.params, params
            )));
        }
        self.params = params;
        Ok(self)
    }

    pub fn sorted_items(&self) -> Vec<ZVector> {
        let mut v = self.items.clone();
        v.sort();
        v
    }
}

impl PartialEq for GSequence {
    fn eq(&self, other: &Self) -> bool {
        self.params.n == other.params.n
            && self.params.r == other.params.r
            && self.sorted_items() == other.sorted_items()
    }
}

impl Eq for GSequence {}

/// Coordinatewise sum mod `n` of the items at `indices`.
pub fn sum_of(seq: &GSequence, indices: &[usize]) -> Result<ZVector> {
    let len = seq.len();
    let mut seen = vec![false; len];
    let mut acc = seq.params.zero();
    for &i in indices {
        if i >= len {
            return Err(Error::IndexOutOfRange { index: i, len });
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::DuplicateIndex(i));
        }
        acc.add_assign_mod(&seq.items[i], seq.params.n);
    }
    Ok(acc)
}

/// Mixed-radix encoding of group elements as integers in `[0, n^r)`.
///
/// Coordinate 0 is the most significant digit, so integer order matches the
/// lexicographic order on coordinate vectors.
#[derive(Clone, Debug)]
pub(crate) struct ElementCodec {
    n: u64,
    r: usize,
    order: u64,
}

impl ElementCodec {
    pub(crate) fn new(params: &GroupParams) -> Option<Self> {
        Some(ElementCodec {
            n: u64::from(params.n),
            r: params.r,
            order: params.group_order()?,
        })
    }

    pub(crate) fn order(&self) -> u64 {
        self.order
    }

    pub(crate) fn encode(&self, v: &ZVector) -> u64 {
        v.0.iter().fold(0u64, |acc, &c| acc * self.n + u64::from(c))
    }

    pub(crate) fn decode(&self, mut x: u64) -> ZVector {
        let mut coords = vec![0u32; self.r];
        for c in coords.iter_mut().rev() {
            *c = (x % self.n) as u32;
            x /= self.n;
        }
        ZVector(coords)
    }

    /// Digitwise sum mod `n` of two encoded elements.
    pub(crate) fn add(&self, mut a: u64, mut b: u64) -> u64 {
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.r {
            let d = (a % self.n + b % self.n) % self.n;
            out += d * place;
            a /= self.n;
            b /= self.n;
            place = place.wrapping_mul(self.n);
        }
        out
    }

    pub(crate) fn neg(&self, mut a: u64) -> u64 {
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.r {
            let d = (self.n - a % self.n) % self.n;
            out += d * place;
            a /= self.n;
            place = place.wrapping_mul(self.n);
        }
        out
    }
}
