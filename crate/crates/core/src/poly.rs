//! Sparse multivariate polynomials in monomial form.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::rational::{binomial, denominator_lcm, from_integer, Integer, Rational};

/// `sum c_i x^i` over multi-indices `i` of length `nvars`. Zero coefficients
/// are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialPoly {
    nvars: usize,
    coeffs: BTreeMap<Vec<u32>, Rational>,
}

impl MonomialPoly {
    pub fn zero(nvars: usize) -> Self {
        MonomialPoly { nvars, coeffs: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The coordinate function `x_axis`.
    pub fn var(nvars: usize, axis: usize) -> Self {
        assert!(axis < nvars);
        let mut e = vec![0; nvars];
        e[axis] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn monomial(exponents: Vec<u32>, c: Rational) -> Self {
        let mut p = Self::zero(exponents.len());
        p.add_term(exponents, c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exponents: Vec<u32>, c: Rational) {
        assert_eq!(exponents.len(), self.nvars, "exponent length mismatch");
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(exponents) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.coeffs.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coeff(&self, exponents: &[u32]) -> Rational {
        self.coeffs.get(exponents).cloned().unwrap_or_else(Rational::zero)
    }

    /// Componentwise maximum exponent over all terms (zeros for the zero polynomial).
    pub fn multidegree(&self) -> MultiIndex {
        let mut d = vec![0u32; self.nvars];
        for e in self.coeffs.keys() {
            for (di, &ei) in d.iter_mut().zip(e) {
                *di = (*di).max(ei);
            }
        }
        MultiIndex::new(d)
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer())
    }

    /// Positive LCM of the coefficient denominators.
    pub fn denominator_lcm(&self) -> Integer {
        denominator_lcm(self.coeffs.values())
    }

    pub fn scale(&self, factor: &Rational) -> MonomialPoly {
        if factor.is_zero() {
            return Self::zero(self.nvars);
        }
        MonomialPoly { nvars: self.nvars, coeffs: self.coeffs.iter().map(|(e, c)| (e.clone(), c * factor)).collect() }
    }

    pub fn pow(&self, exp: u32) -> MonomialPoly {
        let mut acc = Self::constant(self.nvars, Rational::one());
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Rational> {
        if x.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: x.len() });
        }
        let mut acc = Rational::zero();
        for (e, c) in &self.coeffs {
            let mut term = c.clone();
            for (xi, &ei) in x.iter().zip(e) {
                for _ in 0..ei {
                    term *= xi;
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    pub fn eval_integer(&self, z: &[Integer]) -> Result<Rational> {
        let x: Vec<Rational> = z.iter().map(from_integer).collect();
        self.eval(&x)
    }

    /// Substitutes `x_i -> scale_i * x_i + shift_i`, expanding exactly.
    pub fn affine_pullback(&self, scale: &[Rational], shift: &[Rational]) -> Result<MonomialPoly> {
        for v in [scale.len(), shift.len()] {
            if v != self.nvars {
                return Err(Error::DimensionMismatch { expected: self.nvars, got: v });
            }
        }
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.coeffs {
            // prod_i (scale_i x_i + shift_i)^{e_i} expanded per axis
            let mut partial: Vec<(Vec<u32>, Rational)> = vec![(Vec::with_capacity(self.nvars), c.clone())];
            for (axis, &ei) in e.iter().enumerate() {
                let mut next = Vec::with_capacity(partial.len() * (ei as usize + 1));
                for (exps, coef) in &partial {
                    for j in 0..=ei {
                        // C(e, j) scale^j shift^(e-j) x^j
                        let mut t = coef * from_integer(&binomial(ei, j));
                        for _ in 0..j {
                            t *= &scale[axis];
                        }
                        for _ in 0..ei - j {
                            t *= &shift[axis];
                        }
                        if t.is_zero() {
                            continue;
                        }
                        let mut ex = exps.clone();
                        ex.push(j);
                        next.push((ex, t));
                    }
                }
                partial = next;
            }
            for (ex, t) in partial {
                out.add_term(ex, t);
            }
        }
        Ok(out)
    }

    fn combine(&self, rhs: &MonomialPoly, sign: bool) -> MonomialPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.add_term(e.clone(), if sign { c.clone() } else { -c });
        }
        out
    }
}

impl Add for &MonomialPoly {
    type Output = MonomialPoly;
    fn add(self, rhs: &MonomialPoly) -> MonomialPoly {
        self.combine(rhs, true)
    }
}

impl Sub for &MonomialPoly {
    type Output = MonomialPoly;
    fn sub(self, rhs: &MonomialPoly) -> MonomialPoly {
        self.combine(rhs, false)
    }
}

impl Neg for &MonomialPoly {
    type Output = MonomialPoly;
    fn neg(self) -> MonomialPoly {
        self.scale(&-Rational::one())
    }
}

impl Mul for &MonomialPoly {
    type Output = MonomialPoly;
    fn mul(self, rhs: &MonomialPoly) -> MonomialPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = MonomialPoly::zero(self.nvars);
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &rhs.coeffs {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for MonomialPoly {
            type Output = MonomialPoly;
            fn $m(self, rhs: MonomialPoly) -> MonomialPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for MonomialPoly {
    type Output = MonomialPoly;
    fn neg(self) -> MonomialPoly {
        -&self
    }
}

impl fmt::Display for MonomialPoly {
    /// Terms in descending lexicographic exponent order with variables named
    /// `x1, x2, ...`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (n, (e, c)) in self.coeffs.iter().rev().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if n == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mag = c.abs();
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| if p == 1 { format!("x{}", i + 1) } else { format!("x{}^{p}", i + 1) })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}
