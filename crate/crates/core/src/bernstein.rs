//! Tensor Bernstein forms over the unit box.
//!
//! A polynomial of multi-degree at most `d` is written as
//! `sum_k beta_k B_{d,k}(x)` with
//! `B_{d,k}(x) = prod_i C(d_i, k_i) x_i^k_i (1 - x_i)^(d_i - k_i)`.
//! The coefficients `beta_k` bound the polynomial on `[0,1]^n` from below and
//! above, and `beta_0` is its value at the origin.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::index::{MultiDegree, MultiIndex};
use crate::matrix::{apply_along_axis, RatMatrix};
use crate::poly::MonomialPoly;
use crate::rational::{binomial, from_integer, Integer, Rational};

/// Coefficients `beta_k` flattened in lexicographic order of `k`.
/// Scalar type of every Bernstein coefficient.
pub type Coefficient = Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BernsteinForm {
    degree: MultiDegree,
    coeffs: Vec<Rational>,
}

impl BernsteinForm {
    pub fn new(degree: MultiDegree, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != degree.basis_size() {
            return Err(Error::DimensionMismatch { expected: degree.basis_size(), got: coeffs.len() });
        }
        Ok(BernsteinForm { degree, coeffs })
    }

    pub fn constant(degree: MultiDegree, c: Rational) -> Self {
        let coeffs = vec![c; degree.basis_size()];
        BernsteinForm { degree, coeffs }
    }

    pub fn degree(&self) -> &MultiDegree {
        &self.degree
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn coeff(&self, k: &[u32]) -> &Rational {
        &self.coeffs[self.degree.flat_index(k)]
    }

    /// `beta_0`, the value at the lower corner.
    pub fn first(&self) -> &Rational {
        &self.coeffs[0]
    }

    pub fn max_coeff(&self) -> &Rational {
        self.coeffs.iter().max().expect("basis is never empty")
    }

    pub fn min_coeff(&self) -> &Rational {
        self.coeffs.iter().min().expect("basis is never empty")
    }

    /// Certified enclosure `(min beta, max beta)` of the polynomial on `[0,1]^n`.
    pub fn range_bounds(&self) -> (Rational, Rational) {
        (self.min_coeff().clone(), self.max_coeff().clone())
    }

    /// Exact value `sum beta_k B_{d,k}(x)` for `x` in the unit box.
    pub fn evaluate(&self, x: &[Rational]) -> Result<Rational> {
        self.degree.check_nvars(x.len())?;
        for (axis, xi) in x.iter().enumerate() {
            if xi < &Rational::zero() || xi > &Rational::one() {
                return Err(Error::OutsideUnitBox { axis });
            }
        }
        let mut dims = self.degree.dims();
        let mut t = self.coeffs.clone();
        for (axis, xi) in x.iter().enumerate() {
            let d = self.degree.as_slice()[axis];
            let row = RatMatrix::from_rows(vec![basis_values(d, xi)]);
            t = apply_along_axis(&t, &dims, axis, &row);
            dims[axis] = 1;
        }
        Ok(t.pop().expect("fully contracted tensor has one entry"))
    }

    /// Rewrites the form in the `target` basis, one degree at a time per axis.
    pub fn elevate(&self, target: &MultiDegree) -> Result<BernsteinForm> {
        self.degree.check_nvars(target.nvars())?;
        if !self.degree.degree().le(target.degree()) {
            return Err(Error::DegreeDecrease { from: self.degree.as_slice().to_vec(), to: target.as_slice().to_vec() });
        }
        let mut dims = self.degree.dims();
        let mut t = self.coeffs.clone();
        for axis in 0..target.nvars() {
            for d in self.degree.as_slice()[axis]..target.as_slice()[axis] {
                t = apply_along_axis(&t, &dims, axis, &elevation_step(d));
                dims[axis] += 1;
            }
        }
        Ok(BernsteinForm { degree: target.clone(), coeffs: t })
    }

    pub fn add(&self, other: &BernsteinForm) -> Result<BernsteinForm> {
        self.check_same_degree(other)?;
        Ok(BernsteinForm { degree: self.degree.clone(), coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() })
    }

    pub fn scale(&self, factor: &Rational) -> BernsteinForm {
        BernsteinForm { degree: self.degree.clone(), coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    fn check_same_degree(&self, other: &BernsteinForm) -> Result<()> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch { left: self.degree.as_slice().to_vec(), right: other.degree.as_slice().to_vec() });
        }
        Ok(())
    }
}

/// Converts a monomial-form polynomial into the `d`-Bernstein basis:
/// `beta_k = sum_{i <= k} c_i prod_j C(k_j, i_j) / C(d_j, i_j)`.
pub fn to_bernstein(p: &MonomialPoly, d: &MultiDegree) -> Result<BernsteinForm> {
    d.check_nvars(p.nvars())?;
    let pd = p.multidegree();
    if !pd.le(d.degree()) {
        return Err(Error::DegreeOverflow { poly: pd.into_vec(), degree: d.as_slice().to_vec() });
    }
    let mut t = vec![Rational::zero(); d.basis_size()];
    for (e, c) in p.terms() {
        t[d.flat_index(e)] = c.clone();
    }
    let table = BinomialTable::for_degree(d);
    let dims = d.dims();
    for axis in 0..d.nvars() {
        t = apply_along_axis(&t, &dims, axis, &table.conversion(axis));
    }
    Ok(BernsteinForm { degree: d.clone(), coeffs: t })
}

/// Exact binomial coefficients `C(m, i)` for `0 <= i <= m <= d_j`, per axis.
#[derive(Debug)]
pub struct BinomialTable {
    degree: MultiIndex,
    // rows[axis][m][i] = C(m, i)
    rows: Vec<Vec<Vec<Integer>>>,
}

impl BinomialTable {
    fn build(d: &MultiDegree) -> Self {
        let rows = d.as_slice().iter().map(|&dj| (0..=dj).map(|m| (0..=m).map(|i| binomial(m, i)).collect()).collect()).collect();
        BinomialTable { degree: d.degree().clone(), rows }
    }

    /// Shared table for `d`, built once per process.
    pub fn for_degree(d: &MultiDegree) -> Arc<BinomialTable> {
        static CACHE: OnceLock<Mutex<HashMap<MultiIndex, Arc<BinomialTable>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        guard.entry(d.degree().clone()).or_insert_with(|| Arc::new(Self::build(d))).clone()
    }

    pub fn get(&self, axis: usize, m: u32, i: u32) -> &Integer {
        &self.rows[axis][m as usize][i as usize]
    }

    /// Lower-triangular monomial-to-Bernstein matrix for one axis:
    /// entry `(k, i)` is `C(k, i) / C(d, i)`.
    pub fn conversion(&self, axis: usize) -> RatMatrix {
        let d = self.degree[axis];
        let mut m = RatMatrix::zeros(d as usize + 1, d as usize + 1);
        for k in 0..=d {
            for i in 0..=k {
                m[(k as usize, i as usize)] = Rational::new(self.get(axis, k, i).clone(), self.get(axis, d, i).clone());
            }
        }
        m
    }
}

/// `B_{d,k}(x)` for `k = 0..=d`.
pub fn basis_values(d: u32, x: &Rational) -> Vec<Rational> {
    let one_minus = Rational::one() - x;
    (0..=d)
        .map(|k| {
            let mut v = from_integer(&binomial(d, k));
            for _ in 0..k {
                v *= x;
            }
            for _ in 0..d - k {
                v *= &one_minus;
            }
            v
        })
        .collect()
}

/// Univariate elevation from degree `d` to `d + 1`:
/// `beta'_k = k/(d+1) beta_{k-1} + (1 - k/(d+1)) beta_k`.
pub fn elevation_step(d: u32) -> RatMatrix {
    let n = d as usize + 1;
    let mut m = RatMatrix::zeros(n + 1, n);
    let denom = Integer::from(d + 1);
    for k in 0..=n {
        let w = Rational::new(Integer::from(k), denom.clone());
        if k > 0 {
            m[(k, k - 1)] = w.clone();
        }
        if k < n {
            m[(k, k)] = Rational::one() - w;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn x1() -> MonomialPoly {
        MonomialPoly::var(1, 0)
    }

    fn worked_example() -> MonomialPoly {
        // -x^2 + x - 7/20, i.e. -(x - 1/2)^2 - 1/10
        &(&-&x1().pow(2) + &x1()) + &MonomialPoly::constant(1, rat(-7, 20))
    }

    #[test]
    fn conversion_examples() {
        let f = to_bernstein(&worked_example(), &MultiDegree::new(vec![2])).unwrap();
        assert_eq!(f.coeffs(), &[rat(-7, 20), rat(3, 20), rat(-7, 20)]);

        let c = to_bernstein(&MonomialPoly::constant(2, rat(5, 3)), &MultiDegree::new(vec![2, 3])).unwrap();
        assert!(c.coeffs().iter().all(|v| v == &rat(5, 3)));

        let xy = &MonomialPoly::var(2, 0) * &MonomialPoly::var(2, 1);
        let f = to_bernstein(&xy, &MultiDegree::new(vec![1, 1])).unwrap();
        assert_eq!(f.coeffs(), &[int(0), int(0), int(0), int(1)]);
    }

    #[test]
    fn conversion_rejects_overflow() {
        let err = to_bernstein(&x1().pow(3), &MultiDegree::new(vec![2])).unwrap_err();
        assert!(matches!(err, Error::DegreeOverflow { .. }));
    }

    #[test]
    fn evaluation_examples() {
        let f = to_bernstein(&worked_example(), &MultiDegree::new(vec![2])).unwrap();
        assert_eq!(f.evaluate(&[rat(1, 2)]).unwrap(), rat(-1, 10));
        assert_eq!(&f.evaluate(&[int(0)]).unwrap(), f.first());
        let c = BernsteinForm::constant(MultiDegree::new(vec![3, 1]), rat(-2, 7));
        assert_eq!(c.evaluate(&[rat(1, 3), rat(5, 9)]).unwrap(), rat(-2, 7));
        assert_eq!(f.evaluate(&[rat(3, 2)]), Err(Error::OutsideUnitBox { axis: 0 }));
        assert_eq!(f.evaluate(&[rat(-1, 2)]), Err(Error::OutsideUnitBox { axis: 0 }));
    }

    #[test]
    fn elevation_examples() {
        let f = to_bernstein(&worked_example(), &MultiDegree::new(vec![2])).unwrap();
        let g = f.elevate(&MultiDegree::new(vec![3])).unwrap();
        assert_eq!(g.coeffs(), &[rat(-7, 20), rat(-1, 60), rat(-1, 60), rat(-7, 20)]);
        assert_eq!(f.elevate(f.degree()).unwrap(), f);

        let lin = to_bernstein(&x1(), &MultiDegree::new(vec![1])).unwrap();
        assert_eq!(lin.coeffs(), &[int(0), int(1)]);
        let up = lin.elevate(&MultiDegree::new(vec![2])).unwrap();
        assert_eq!(up.coeffs(), &[int(0), rat(1, 2), int(1)]);
        for x in [int(0), rat(1, 2), int(1)] {
            assert_eq!(up.evaluate(std::slice::from_ref(&x)).unwrap(), x);
        }

        assert!(matches!(g.elevate(&MultiDegree::new(vec![2])), Err(Error::DegreeDecrease { .. })));
    }

    #[test]
    fn range_bound_examples() {
        let f = to_bernstein(&worked_example(), &MultiDegree::new(vec![2])).unwrap();
        assert_eq!(f.range_bounds(), (rat(-7, 20), rat(3, 20)));
        let c = BernsteinForm::constant(MultiDegree::new(vec![1]), int(4));
        assert_eq!(c.range_bounds(), (int(4), int(4)));
        let g = f.elevate(&MultiDegree::new(vec![3])).unwrap();
        let (lo, hi) = g.range_bounds();
        assert_eq!((lo.clone(), hi.clone()), (rat(-7, 20), rat(-1, 60)));
        // the true maximum -1/10 sits inside the enclosure and the upper bound is already negative
        assert!(lo <= rat(-1, 10) && rat(-1, 10) <= hi && hi < int(0));
    }

    #[test]
    fn binomial_table_is_shared() {
        let d = MultiDegree::new(vec![4, 2]);
        let a = BinomialTable::for_degree(&d);
        let b = BinomialTable::for_degree(&d);
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(a.get(0, 4, 2), &Integer::from(6));
    }
}
