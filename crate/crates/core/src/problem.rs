//! Rewriting user problems into the normal form
//! `maximize q_1 subject to q_i >= 0 (i >= 2)` over the lattice points of a
//! box `prod [a_i, a_i + 2^k_i]`, with integer-coefficient polynomials.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::bernstein::{to_bernstein, BernsteinForm};
use crate::error::{Error, Result};
use crate::index::{MultiDegree, MultiIndex};
use crate::lattice::{check_exponents, DEFAULT_MAX_EXPONENT};
use crate::poly::MonomialPoly;
use crate::rational::{from_integer, pow2, Integer, Rational, Theta};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Maximize,
    Minimize,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Ge,
    Lt,
    Gt,
    Eq,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Lt => "<",
            Relation::Gt => ">",
            Relation::Eq => "==",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Objective {
    pub direction: Direction,
    pub poly: MonomialPoly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub lhs: MonomialPoly,
    pub relation: Relation,
    pub rhs: MonomialPoly,
}

/// Closed integer interval; a missing end means the variable is unbounded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarBounds {
    pub lo: Option<Integer>,
    pub hi: Option<Integer>,
}

impl VarBounds {
    pub fn closed(lo: impl Into<Integer>, hi: impl Into<Integer>) -> Self {
        VarBounds { lo: Some(lo.into()), hi: Some(hi.into()) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UserProblem {
    pub var_names: Vec<String>,
    pub objective: Objective,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<VarBounds>,
}

impl UserProblem {
    pub fn nvars(&self) -> usize {
        self.var_names.len()
    }

    /// A feasibility problem (objective `0`) with the given bounds.
    pub fn feasibility(var_names: Vec<String>, bounds: Vec<VarBounds>) -> Self {
        let n = var_names.len();
        UserProblem {
            var_names,
            objective: Objective { direction: Direction::None, poly: MonomialPoly::zero(n) },
            constraints: Vec::new(),
            bounds,
        }
    }

    pub fn with_objective(mut self, direction: Direction, poly: MonomialPoly) -> Self {
        self.objective = Objective { direction, poly };
        self
    }

    pub fn with_constraint(mut self, lhs: MonomialPoly, relation: Relation, rhs: MonomialPoly) -> Self {
        self.constraints.push(Constraint { lhs, relation, rhs });
        self
    }

    /// Whether the integer point `z` satisfies every original relation.
    pub fn is_feasible(&self, z: &[Integer]) -> Result<bool> {
        for c in &self.constraints {
            let l = c.lhs.eval_integer(z)?;
            let r = c.rhs.eval_integer(z)?;
            let ok = match c.relation {
                Relation::Le => l <= r,
                Relation::Ge => l >= r,
                Relation::Lt => l < r,
                Relation::Gt => l > r,
                Relation::Eq => l == r,
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Map from the internal objective `q_1` back to the user's objective:
/// `user = internal / (sign * scale) + shift`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaTransform {
    pub negate: bool,
    pub scale: Integer,
    pub shift: Rational,
}

impl ThetaTransform {
    pub fn identity() -> Self {
        ThetaTransform { negate: false, scale: BigInt::one(), shift: Rational::zero() }
    }

    fn signed_scale(&self) -> Rational {
        let s = from_integer(&self.scale);
        if self.negate {
            -s
        } else {
            s
        }
    }

    pub fn to_user(&self, internal: &Rational) -> Rational {
        internal / self.signed_scale() + &self.shift
    }

    pub fn to_internal(&self, user: &Rational) -> Rational {
        (user - &self.shift) * self.signed_scale()
    }

    pub fn theta_to_internal(&self, user: &Theta) -> Theta {
        match user {
            Theta::NegInfinity => Theta::NegInfinity,
            Theta::Finite(v) => Theta::Finite(self.to_internal(v)),
        }
    }
}

/// Normal-form problem over the padded box `prod [a_i, a_i + 2^k_i]`.
///
/// `user_upper` clips the leaves back to the user's box: a unit leaf with lower
/// corner `z` is a candidate only when `z <= user_upper`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalProblem {
    pub var_names: Vec<String>,
    pub q: Vec<MonomialPoly>,
    pub anchor: Vec<Integer>,
    pub exponents: MultiIndex,
    pub user_upper: Vec<Integer>,
    pub theta_transform: ThetaTransform,
}

impl CanonicalProblem {
    /// A problem posed directly on a dyadic box: every leaf lower corner
    /// `a + l` with `0 <= l_i < 2^k_i` is a candidate and the objective is
    /// reported unchanged.
    pub fn on_dyadic_box(var_names: Vec<String>, q: Vec<MonomialPoly>, anchor: Vec<Integer>, exponents: MultiIndex) -> Result<Self> {
        let n = var_names.len();
        if n == 0 {
            return Err(Error::NoVariables);
        }
        check_exponents(&exponents, DEFAULT_MAX_EXPONENT)?;
        for len in [anchor.len(), exponents.len()] {
            if len != n {
                return Err(Error::DimensionMismatch { expected: n, got: len });
            }
        }
        check_polys(&q, n)?;
        let user_upper = anchor.iter().zip(exponents.as_slice()).map(|(a, &k)| a + pow2(k) - 1).collect();
        Ok(CanonicalProblem { var_names, q, anchor, exponents, user_upper, theta_transform: ThetaTransform::identity() })
    }

    pub fn nvars(&self) -> usize {
        self.anchor.len()
    }

    pub fn objective(&self) -> &MonomialPoly {
        &self.q[0]
    }

    pub fn constraints(&self) -> &[MonomialPoly] {
        &self.q[1..]
    }

    /// `K = sum k_i`.
    pub fn total_exponent(&self) -> u64 {
        self.exponents.sum()
    }

    /// Componentwise maximum multi-degree over all `q_i`.
    pub fn default_degree(&self) -> MultiDegree {
        let d = self.q.iter().fold(MultiIndex::zeros(self.nvars()), |acc, p| acc.join(&p.multidegree()));
        MultiDegree::new(d)
    }

    /// Whether `z` is a candidate lattice point: inside the user box and every
    /// `q_i(z) >= 0` for `i >= 2`.
    pub fn is_feasible(&self, z: &[Integer]) -> Result<bool> {
        if !self.in_user_box(z) {
            return Ok(false);
        }
        for q in self.constraints() {
            if q.eval_integer(z)?.is_negative() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn in_user_box(&self, z: &[Integer]) -> bool {
        z.len() == self.nvars() && z.iter().zip(&self.anchor).zip(&self.user_upper).all(|((zi, lo), hi)| lo <= zi && zi <= hi)
    }

    /// Number of lattice points of the user box.
    pub fn user_box_size(&self) -> Integer {
        self.anchor.iter().zip(&self.user_upper).map(|(lo, hi)| hi - lo + 1).product()
    }
}

/// Rewrites every relation as one or two `q >= 0` constraints with integer
/// coefficients, turns minimization into maximization, and pads the box to
/// power-of-two sides.
pub fn canonicalize(up: &UserProblem) -> Result<CanonicalProblem> {
    let n = up.nvars();
    if n == 0 {
        return Err(Error::NoVariables);
    }
    if up.bounds.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: up.bounds.len() });
    }

    let mut anchor = Vec::with_capacity(n);
    let mut upper = Vec::with_capacity(n);
    let mut exponents = Vec::with_capacity(n);
    for (name, b) in up.var_names.iter().zip(&up.bounds) {
        let (Some(lo), Some(hi)) = (&b.lo, &b.hi) else {
            return Err(Error::UnboundedVariable { name: name.clone() });
        };
        if lo > hi {
            return Err(Error::EmptyBounds { name: name.clone(), lo: lo.to_string(), hi: hi.to_string() });
        }
        exponents.push(ceil_log2(&(hi - lo + 1)));
        anchor.push(lo.clone());
        upper.push(hi.clone());
    }
    let exponents = MultiIndex::new(exponents);
    check_exponents(&exponents, DEFAULT_MAX_EXPONENT)?;

    let mut polys = Vec::new();
    polys.push(MonomialPoly::zero(n));
    for c in &up.constraints {
        check_polys(&[c.lhs.clone(), c.rhs.clone()], n)?;
        let diff = &c.lhs - &c.rhs;
        match c.relation {
            Relation::Ge => polys.push(clear_denominators(&diff)),
            Relation::Le => polys.push(clear_denominators(&-&diff)),
            Relation::Eq => {
                polys.push(clear_denominators(&diff));
                polys.push(clear_denominators(&-&diff));
            }
            Relation::Gt => polys.push(minus_one(&clear_denominators(&diff))),
            Relation::Lt => polys.push(minus_one(&clear_denominators(&-&diff))),
        }
    }

    let (objective, theta_transform) = normalize_objective(&up.objective, n)?;
    polys[0] = objective;

    Ok(CanonicalProblem { var_names: up.var_names.clone(), q: polys, anchor, exponents, user_upper: upper, theta_transform })
}

fn normalize_objective(obj: &Objective, n: usize) -> Result<(MonomialPoly, ThetaTransform)> {
    check_polys(std::slice::from_ref(&obj.poly), n)?;
    if obj.direction == Direction::None {
        return Ok((MonomialPoly::zero(n), ThetaTransform::identity()));
    }
    let shift = obj.poly.coeff(&vec![0; n]);
    let centered = &obj.poly - &MonomialPoly::constant(n, shift.clone());
    let scale = centered.denominator_lcm();
    let negate = obj.direction == Direction::Minimize;
    let mut internal = centered.scale(&from_integer(&scale));
    if negate {
        internal = -internal;
    }
    Ok((internal, ThetaTransform { negate, scale, shift }))
}

fn clear_denominators(p: &MonomialPoly) -> MonomialPoly {
    p.scale(&from_integer(&p.denominator_lcm()))
}

fn minus_one(p: &MonomialPoly) -> MonomialPoly {
    p - &MonomialPoly::constant(p.nvars(), Rational::one())
}

fn check_polys(ps: &[MonomialPoly], n: usize) -> Result<()> {
    for p in ps {
        if p.nvars() != n {
            return Err(Error::DimensionMismatch { expected: n, got: p.nvars() });
        }
    }
    Ok(())
}

/// Smallest `k` with `2^k >= m`, for `m >= 1`.
fn ceil_log2(m: &Integer) -> u32 {
    debug_assert!(m.is_positive());
    let bits = (m - 1u32).bits() as u32;
    if m.is_one() {
        0
    } else {
        bits
    }
}

/// The system matrix `v`: column `i` is `q_i` pulled back to the unit box and
/// written in the `d`-Bernstein basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemMatrix {
    degree: MultiDegree,
    columns: Vec<BernsteinForm>,
}

impl SystemMatrix {
    pub fn new(degree: MultiDegree, columns: Vec<BernsteinForm>) -> Result<Self> {
        for c in &columns {
            if c.degree() != &degree {
                return Err(Error::DegreeMismatch { left: degree.as_slice().to_vec(), right: c.degree().as_slice().to_vec() });
            }
        }
        Ok(SystemMatrix { degree, columns })
    }

    pub fn degree(&self) -> &MultiDegree {
        &self.degree
    }

    pub fn columns(&self) -> &[BernsteinForm] {
        &self.columns
    }

    pub fn into_columns(self) -> Vec<BernsteinForm> {
        self.columns
    }
}

/// Pulls every `q_i` back along `x -> a + 2^k x` and converts it to the
/// `d`-Bernstein basis.
pub fn initial_system(cp: &CanonicalProblem, d: &MultiDegree) -> Result<SystemMatrix> {
    system_for_box(&cp.q, &cp.anchor, &cp.exponents, d)
}

pub fn system_for_box(q: &[MonomialPoly], anchor: &[Integer], exponents: &MultiIndex, d: &MultiDegree) -> Result<SystemMatrix> {
    d.check_nvars(anchor.len())?;
    d.check_nvars(exponents.len())?;
    let scale: Vec<Rational> = exponents.as_slice().iter().map(|&k| from_integer(&pow2(k))).collect();
    let shift: Vec<Rational> = anchor.iter().map(from_integer).collect();
    let mut columns = Vec::with_capacity(q.len());
    for (i, qi) in q.iter().enumerate() {
        let pd = qi.multidegree();
        if !pd.le(d.degree()) {
            let what = if i == 0 { "objective".to_string() } else { format!("constraint q_{}", i + 1) };
            return Err(Error::ConstraintDegreeOverflow { what, poly: pd.into_vec(), degree: d.as_slice().to_vec() });
        }
        let pulled = qi.affine_pullback(&scale, &shift)?;
        columns.push(to_bernstein(&pulled, d)?);
    }
    SystemMatrix::new(d.clone(), columns)
}
