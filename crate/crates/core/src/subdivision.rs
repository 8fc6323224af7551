//! Halving matrices of the Bernstein basis and box matrices.
//!
//! For a multi-degree `d` and axis `i`, `M_i^L` (resp. `M_i^R`) maps the
//! Bernstein coefficients of a polynomial over `[0,1]^n` to those of its
//! restriction to the left (resp. right) half along axis `i`. Both act on a
//! single axis of the coefficient tensor, so only the `2n` univariate factors
//! are stored; the dense `s x s` matrices are materialized on request.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::bernstein::{to_bernstein, BernsteinForm};
use crate::error::{Error, Result};
use crate::index::{MultiDegree, MultiIndex};
use crate::matrix::{apply_along_axis, RatMatrix};
use crate::poly::MonomialPoly;
use crate::rational::{binomial, pow2, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "L",
            Side::Right => "R",
        })
    }
}

/// The univariate halving matrices `L^(d_i)` and `R^(d_i)` for every axis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubdivisionBasis {
    degree: MultiDegree,
    left: Vec<RatMatrix>,
    right: Vec<RatMatrix>,
}

impl SubdivisionBasis {
    /// Builds the halving matrices from the de Casteljau weights:
    /// `L[j][i] = C(j, i) / 2^j` and `R[j][i] = C(d - j, i - j) / 2^(d - j)`.
    pub fn new(degree: &MultiDegree) -> Self {
        let left: Vec<RatMatrix> = degree.as_slice().iter().map(|&d| left_matrix(d)).collect();
        let right: Vec<RatMatrix> = degree.as_slice().iter().map(|&d| right_matrix(d)).collect();
        debug_assert!(left.iter().all(RatMatrix::is_lower_triangular));
        debug_assert!(right.iter().all(RatMatrix::is_upper_triangular));
        SubdivisionBasis { degree: degree.clone(), left, right }
    }

    /// Reassembles a basis from stored factors, checking shape and triangularity.
    pub fn from_parts(degree: MultiDegree, left: Vec<RatMatrix>, right: Vec<RatMatrix>) -> Result<Self> {
        let n = degree.nvars();
        if left.len() != n || right.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: left.len().min(right.len()) });
        }
        for axis in 0..n {
            let dim = degree.dim(axis);
            for m in [&left[axis], &right[axis]] {
                if m.rows() != dim || m.cols() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, got: m.rows() });
                }
            }
            if !left[axis].is_lower_triangular() || !right[axis].is_upper_triangular() {
                return Err(Error::Cache(format!("axis {axis}: halving matrices are not triangular")));
            }
        }
        Ok(SubdivisionBasis { degree, left, right })
    }

    pub fn degree(&self) -> &MultiDegree {
        &self.degree
    }

    pub fn factor(&self, axis: usize, side: Side) -> &RatMatrix {
        match side {
            Side::Left => &self.left[axis],
            Side::Right => &self.right[axis],
        }
    }

    /// Restriction of `f` to one half of the unit box along `axis`,
    /// reparameterized to `[0,1]^n`.
    pub fn apply_half(&self, f: &BernsteinForm, axis: usize, side: Side) -> Result<BernsteinForm> {
        if f.degree() != &self.degree {
            return Err(Error::DegreeMismatch { left: self.degree.as_slice().to_vec(), right: f.degree().as_slice().to_vec() });
        }
        self.check_axis(axis)?;
        let coeffs = self.apply_half_coeffs(f.coeffs(), axis, side);
        BernsteinForm::new(self.degree.clone(), coeffs)
    }

    /// [`apply_half`](Self::apply_half) on a raw flattened tensor of this basis' degree.
    pub fn apply_half_coeffs(&self, coeffs: &[Rational], axis: usize, side: Side) -> Vec<Rational> {
        apply_along_axis(coeffs, &self.degree.dims(), axis, self.factor(axis, side))
    }

    /// Applies a word of halvings, first letter first.
    pub fn apply_word(&self, f: &BernsteinForm, word: &[(usize, Side)]) -> Result<BernsteinForm> {
        word.iter().try_fold(f.clone(), |acc, &(axis, side)| self.apply_half(&acc, axis, side))
    }

    /// The dense `s x s` matrix `M_axis^side`.
    pub fn dense(&self, axis: usize, side: Side) -> RatMatrix {
        let mut out = RatMatrix::identity(1);
        for i in 0..self.degree.nvars() {
            let factor = if i == axis { self.factor(axis, side).clone() } else { RatMatrix::identity(self.degree.dim(i)) };
            out = out.kron(&factor);
        }
        out
    }

    fn check_axis(&self, axis: usize) -> Result<()> {
        if axis >= self.degree.nvars() {
            return Err(Error::AxisOutOfRange { axis, nvars: self.degree.nvars() });
        }
        Ok(())
    }
}

fn left_matrix(d: u32) -> RatMatrix {
    let n = d as usize + 1;
    let mut m = RatMatrix::zeros(n, n);
    for j in 0..=d {
        let denom = pow2(j);
        for i in 0..=j {
            m[(j as usize, i as usize)] = Rational::new(binomial(j, i), denom.clone());
        }
    }
    m
}

fn right_matrix(d: u32) -> RatMatrix {
    let n = d as usize + 1;
    let mut m = RatMatrix::zeros(n, n);
    for j in 0..=d {
        let denom = pow2(d - j);
        for i in j..=d {
            m[(j as usize, i as usize)] = Rational::new(binomial(d - j, i - j), denom.clone());
        }
    }
    m
}

/// Matrix of the pull-back `q -> q((b - a) x + a)` in the `d`-Bernstein basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxMatrix {
    degree: MultiDegree,
    entries: RatMatrix,
}

impl BoxMatrix {
    pub fn degree(&self) -> &MultiDegree {
        &self.degree
    }

    pub fn entries(&self) -> &RatMatrix {
        &self.entries
    }

    pub fn apply(&self, f: &BernsteinForm) -> Result<BernsteinForm> {
        if f.degree() != &self.degree {
            return Err(Error::DegreeMismatch { left: self.degree.as_slice().to_vec(), right: f.degree().as_slice().to_vec() });
        }
        BernsteinForm::new(self.degree.clone(), self.entries.mul_vec(f.coeffs()))
    }
}

/// Builds the box matrix column by column: column `k` holds the Bernstein
/// coefficients of the pulled-back basis polynomial `B_{d,k}`.
pub fn box_matrix(d: &MultiDegree, lower: &[Rational], upper: &[Rational]) -> Result<BoxMatrix> {
    d.check_nvars(lower.len())?;
    d.check_nvars(upper.len())?;
    let mut entries = RatMatrix::identity(1);
    for axis in 0..d.nvars() {
        if lower[axis] >= upper[axis] {
            return Err(Error::DegenerateBox { axis });
        }
        let uni = univariate_box_matrix(d.as_slice()[axis], &lower[axis], &upper[axis])?;
        entries = entries.kron(&uni);
    }
    Ok(BoxMatrix { degree: d.clone(), entries })
}

fn univariate_box_matrix(d: u32, a: &Rational, b: &Rational) -> Result<RatMatrix> {
    let deg = MultiDegree::new(vec![d]);
    let x = MonomialPoly::var(1, 0);
    let one_minus = &MonomialPoly::constant(1, Rational::one()) - &x;
    let n = d as usize + 1;
    let mut m = RatMatrix::zeros(n, n);
    for k in 0..=d {
        let basis_poly = (&x.pow(k) * &one_minus.pow(d - k)).scale(&Rational::from_integer(binomial(d, k)));
        let pulled = basis_poly.affine_pullback(&[b - a], std::slice::from_ref(a))?;
        let column = to_bernstein(&pulled, &deg)?;
        for (j, v) in column.coeffs().iter().enumerate() {
            m[(j, k as usize)] = v.clone();
        }
    }
    Ok(m)
}

/// Expresses the dyadic box `prod [l_i / 2^k_i, (l_i + 1) / 2^k_i]` as a word
/// of halvings, in the order the solver would descend to it: at each step the
/// axis with the largest remaining exponent (smallest index on ties) is halved,
/// taking the bits of `l_i` most-significant first.
pub fn factor_box(offset: &[u64], scale: &MultiIndex) -> Result<Vec<(usize, Side)>> {
    if offset.len() != scale.len() {
        return Err(Error::DimensionMismatch { expected: scale.len(), got: offset.len() });
    }
    for (axis, (&l, &k)) in offset.iter().zip(scale.as_slice()).enumerate() {
        if k > 63 || BigInt::from(l) >= pow2(k) {
            return Err(Error::OffsetOutOfRange { axis, offset: l, exponent: k });
        }
    }
    let mut remaining = scale.clone().into_vec();
    let mut word = Vec::with_capacity(scale.sum() as usize);
    while let Some(axis) = widest_axis(&remaining) {
        let bit = (offset[axis] >> (remaining[axis] - 1)) & 1;
        word.push((axis, if bit.is_zero() { Side::Left } else { Side::Right }));
        remaining[axis] -= 1;
    }
    Ok(word)
}

/// Index of the largest positive entry, smallest index on ties.
pub(crate) fn widest_axis(sub_scale: &[u32]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &k) in sub_scale.iter().enumerate() {
        if k > 0 && best.is_none_or(|b| k > sub_scale[b]) {
            best = Some(i);
        }
    }
    best
}
