//! Multi-indices and multi-degrees.

use std::fmt;
use std::ops::Index;

use crate::error::{Error, Result};

/// An ordered tuple of non-negative integers.
///
/// The derived `Ord` is the lexicographic total order; [`MultiIndex::le`] is the
/// componentwise partial order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zeros(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    /// Componentwise `self <= other`. Indices of different length are incomparable.
    pub fn le(&self, other: &MultiIndex) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Componentwise maximum.
    pub fn join(&self, other: &MultiIndex) -> MultiIndex {
        assert_eq!(self.len(), other.len());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }
}

impl Index<usize> for MultiIndex {
    type Output = u32;

    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

impl From<&[u32]> for MultiIndex {
    fn from(v: &[u32]) -> Self {
        MultiIndex(v.to_vec())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

/// A multi-degree `d` together with the size `s = prod(d_i + 1)` of its
/// tensor Bernstein basis.
///
/// Tensors over a multi-degree are flattened lexicographically: axis 0 is the
/// most significant, so position 0 is the all-zero multi-index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiDegree {
    degree: MultiIndex,
    basis_size: usize,
}

impl MultiDegree {
    pub fn new(degree: impl Into<MultiIndex>) -> Self {
        let degree = degree.into();
        let basis_size =
            degree.as_slice().iter().try_fold(1usize, |acc, &d| acc.checked_mul(d as usize + 1)).expect("basis size overflows usize");
        MultiDegree { degree, basis_size }
    }

    pub fn nvars(&self) -> usize {
        self.degree.len()
    }

    pub fn degree(&self) -> &MultiIndex {
        &self.degree
    }

    pub fn as_slice(&self) -> &[u32] {
        self.degree.as_slice()
    }

    pub fn basis_size(&self) -> usize {
        self.basis_size
    }

    /// Number of coefficients along `axis`, i.e. `d_axis + 1`.
    pub fn dim(&self, axis: usize) -> usize {
        self.degree[axis] as usize + 1
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..self.nvars()).map(|i| self.dim(i)).collect()
    }

    /// Distance between consecutive entries along `axis` in the flat layout.
    pub fn stride(&self, axis: usize) -> usize {
        (axis + 1..self.nvars()).map(|i| self.dim(i)).product()
    }

    pub fn flat_index(&self, k: &[u32]) -> usize {
        debug_assert_eq!(k.len(), self.nvars());
        k.iter().enumerate().fold(0, |acc, (i, &ki)| acc * self.dim(i) + ki as usize)
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<u32> {
        let mut out = vec![0u32; self.nvars()];
        for axis in (0..self.nvars()).rev() {
            let dim = self.dim(axis);
            out[axis] = (flat % dim) as u32;
            flat /= dim;
        }
        out
    }

    /// All multi-indices `0 <= k <= d` in lexicographic order.
    pub fn indices(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        (0..self.basis_size).map(move |p| self.multi_index(p))
    }

    pub fn check_nvars(&self, n: usize) -> Result<()> {
        if self.nvars() != n {
            return Err(Error::DimensionMismatch { expected: self.nvars(), got: n });
        }
        Ok(())
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.degree.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_size_is_product() {
        let d = MultiDegree::new(vec![2, 1, 3]);
        assert_eq!(d.basis_size(), 3 * 2 * 4);
        assert_eq!(MultiDegree::new(vec![]).basis_size(), 1);
    }

    #[test]
    fn lexicographic_flattening() {
        let d = MultiDegree::new(vec![1, 1]);
        let all: Vec<_> = d.indices().collect();
        assert_eq!(all, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        let d = MultiDegree::new(vec![2, 3]);
        for p in 0..d.basis_size() {
            assert_eq!(d.flat_index(&d.multi_index(p)), p);
        }
        assert_eq!(d.stride(0), 4);
        assert_eq!(d.stride(1), 1);
    }

    #[test]
    fn partial_and_total_orders() {
        let a = MultiIndex::new(vec![1, 2]);
        let b = MultiIndex::new(vec![2, 1]);
        assert!(!a.le(&b) && !b.le(&a));
        assert!(a < b);
        assert!(a.le(&a.join(&b)));
        assert_eq!(a.join(&b), MultiIndex::new(vec![2, 2]));
    }
}
