//! Dyadic sub-boxes `D_{l,k'}` of a root box `prod [a_i, a_i + 2^k_i]`.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::rational::{from_integer, pow2, Integer, Rational};

/// Default ceiling on the root exponents `k_i`.
pub const DEFAULT_MAX_EXPONENT: u32 = 62;

/// The box `prod [a_i + l_i 2^k'_i, a_i + (l_i + 1) 2^k'_i]` inside the root box
/// with anchor `a` and exponents `k`, or the empty box when `(l, k')` is out of
/// range.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LatticeBox {
    Empty,
    Dyadic { anchor: Vec<Integer>, scale: MultiIndex, offset: Vec<u64>, sub_scale: MultiIndex },
}

impl LatticeBox {
    /// The root box `D_{0,k}`.
    pub fn root(anchor: Vec<Integer>, scale: MultiIndex) -> Result<Self> {
        Self::root_with_limit(anchor, scale, DEFAULT_MAX_EXPONENT)
    }

    pub fn root_with_limit(anchor: Vec<Integer>, scale: MultiIndex, limit: u32) -> Result<Self> {
        check_exponents(&scale, limit)?;
        if anchor.len() != scale.len() {
            return Err(Error::DimensionMismatch { expected: scale.len(), got: anchor.len() });
        }
        let n = scale.len();
        Ok(LatticeBox::Dyadic { anchor, sub_scale: scale.clone(), scale, offset: vec![0; n] })
    }

    /// Builds `D_{l,k'}`; parameters outside the valid range give [`LatticeBox::Empty`].
    pub fn new(anchor: Vec<Integer>, scale: MultiIndex, offset: Vec<u64>, sub_scale: MultiIndex) -> Self {
        let n = scale.len();
        let shapes_ok = anchor.len() == n && offset.len() == n && sub_scale.len() == n;
        let in_range = shapes_ok
            && check_exponents(&scale, 63).is_ok()
            && sub_scale.le(&scale)
            && (0..n).all(|i| {
                let span = scale[i] - sub_scale[i];
                offset[i] < (1u64 << span)
            });
        if !in_range {
            return LatticeBox::Empty;
        }
        LatticeBox::Dyadic { anchor, scale, offset, sub_scale }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, LatticeBox::Empty)
    }

    pub fn offset(&self) -> Option<&[u64]> {
        match self {
            LatticeBox::Empty => None,
            LatticeBox::Dyadic { offset, .. } => Some(offset),
        }
    }

    pub fn sub_scale(&self) -> Option<&MultiIndex> {
        match self {
            LatticeBox::Empty => None,
            LatticeBox::Dyadic { sub_scale, .. } => Some(sub_scale),
        }
    }

    /// Integer lower corner `a + l 2^k'`.
    pub fn lower_corner(&self) -> Option<Vec<Integer>> {
        match self {
            LatticeBox::Empty => None,
            LatticeBox::Dyadic { anchor, offset, sub_scale, .. } => {
                Some(anchor.iter().zip(offset).zip(sub_scale.as_slice()).map(|((a, &l), &ks)| a + BigInt::from(l) * pow2(ks)).collect())
            }
        }
    }

    /// Geometric realization as `(lower, upper)` corners; `None` for the empty box.
    pub fn realize(&self) -> Option<(Vec<Rational>, Vec<Rational>)> {
        let lower = self.lower_corner()?;
        let sub_scale = self.sub_scale()?;
        let upper = lower.iter().zip(sub_scale.as_slice()).map(|(lo, &ks)| from_integer(&(lo + pow2(ks)))).collect();
        Some((lower.iter().map(from_integer).collect(), upper))
    }

    /// `2^(sum k'_i)`, or zero for the empty box.
    pub fn volume(&self) -> Integer {
        match self.sub_scale() {
            None => BigInt::from(0),
            Some(ks) => pow2(ks.sum() as u32),
        }
    }

    /// Halves the box along `axis`: offset `l_axis` becomes `2 l_axis` (left)
    /// or `2 l_axis + 1` (right) and `k'_axis` drops by one.
    pub fn children(&self, axis: usize) -> Result<(LatticeBox, LatticeBox)> {
        let LatticeBox::Dyadic { anchor, scale, offset, sub_scale } = self else {
            return Err(Error::IndivisibleAxis { axis });
        };
        if axis >= scale.len() {
            return Err(Error::AxisOutOfRange { axis, nvars: scale.len() });
        }
        if sub_scale[axis] == 0 {
            return Err(Error::IndivisibleAxis { axis });
        }
        let mut ks = sub_scale.clone().into_vec();
        ks[axis] -= 1;
        let mut left = offset.clone();
        left[axis] *= 2;
        let mut right = left.clone();
        right[axis] += 1;
        let make = |off: Vec<u64>| LatticeBox::Dyadic {
            anchor: anchor.clone(),
            scale: scale.clone(),
            offset: off,
            sub_scale: MultiIndex::new(ks.clone()),
        };
        Ok((make(left), make(right)))
    }
}

pub(crate) fn check_exponents(scale: &MultiIndex, limit: u32) -> Result<()> {
    for (axis, &k) in scale.as_slice().iter().enumerate() {
        if k > limit.min(63) {
            return Err(Error::ExponentTooLarge { axis, exponent: k, limit });
        }
    }
    Ok(())
}
