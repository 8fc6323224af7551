//! Exhaustive enumeration of the user's box.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::problem::CanonicalProblem;
use crate::rational::{Integer, Rational, Theta};

pub const DEFAULT_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    /// Optimum in the user's objective scale; `None` when infeasible.
    pub theta: Option<Rational>,
    pub internal_theta: Theta,
    pub solutions: BTreeSet<Vec<Integer>>,
    pub points_scanned: u64,
}

pub fn brute_force(cp: &CanonicalProblem) -> Result<OracleResult> {
    brute_force_with_cap(cp, DEFAULT_CAP)
}

/// Scans every lattice point of `prod [lo_i, hi_i]` in row-major order (last
/// axis fastest). Refuses boxes with more than `cap` points.
pub fn brute_force_with_cap(cp: &CanonicalProblem, cap: u64) -> Result<OracleResult> {
    let size = cp.user_box_size();
    if size > BigInt::from(cap) {
        return Err(Error::OracleCapExceeded { count: size.to_string(), cap });
    }
    let lo = &cp.anchor;
    let hi = &cp.user_upper;
    let mut theta = Theta::NegInfinity;
    let mut solutions = BTreeSet::new();
    let mut scanned = 0u64;
    let total = size.to_u64().unwrap_or(0);
    let mut z = lo.clone();
    while scanned < total {
        scanned += 1;
        if feasible(cp, &z)? {
            let value = cp.objective().eval_integer(&z)?;
            match theta.compare(&value) {
                std::cmp::Ordering::Less => {
                    theta = Theta::Finite(value);
                    solutions.clear();
                    solutions.insert(z.clone());
                }
                std::cmp::Ordering::Equal => {
                    solutions.insert(z.clone());
                }
                std::cmp::Ordering::Greater => {}
            }
        }
        advance(&mut z, lo, hi);
    }
    Ok(OracleResult {
        theta: theta.finite().map(|t| cp.theta_transform.to_user(t)),
        internal_theta: theta,
        solutions,
        points_scanned: scanned,
    })
}

fn feasible(cp: &CanonicalProblem, z: &[Integer]) -> Result<bool> {
    for q in cp.constraints() {
        if q.eval_integer(z)?.is_negative() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn advance(z: &mut [Integer], lo: &[Integer], hi: &[Integer]) {
    for i in (0..z.len()).rev() {
        if z[i] < hi[i] {
            z[i] += BigInt::one();
            return;
        }
        z[i] = lo[i].clone();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::MonomialPoly;
    use crate::problem::{canonicalize, Direction, Relation, UserProblem, VarBounds};
    use crate::rational::int;

    fn pts(v: &[[i64; 2]]) -> BTreeSet<Vec<Integer>> {
        v.iter().map(|p| p.iter().map(|&x| Integer::from(x)).collect()).collect()
    }

    fn parabola() -> UserProblem {
        let x = MonomialPoly::var(2, 0);
        let y = MonomialPoly::var(2, 1);
        UserProblem::feasibility(vec!["x".into(), "y".into()], vec![VarBounds::closed(0, 8), VarBounds::closed(0, 8)]).with_constraint(
            y,
            Relation::Eq,
            x.pow(2),
        )
    }

    #[test]
    fn parabola_points() {
        let cp = canonicalize(&parabola()).unwrap();
        let r = brute_force(&cp).unwrap();
        assert_eq!(r.solutions, pts(&[[0, 0], [1, 1], [2, 4]]));
        assert_eq!(r.theta, Some(int(0)));
        assert_eq!(r.points_scanned, 81);
    }

    #[test]
    fn maximize_on_parabola() {
        let x = MonomialPoly::var(2, 0);
        let y = MonomialPoly::var(2, 1);
        let cp = canonicalize(&parabola().with_objective(Direction::Maximize, &x + &y)).unwrap();
        let r = brute_force(&cp).unwrap();
        assert_eq!(r.theta, Some(int(6)));
        assert_eq!(r.solutions, pts(&[[2, 4]]));
    }

    #[test]
    fn unconstrained_zero_objective() {
        let up = UserProblem::feasibility(vec!["x".into(), "y".into()], vec![VarBounds::closed(0, 1), VarBounds::closed(0, 1)]);
        let r = brute_force(&canonicalize(&up).unwrap()).unwrap();
        assert_eq!(r.solutions, pts(&[[0, 0], [0, 1], [1, 0], [1, 1]]));
    }

    #[test]
    fn infeasible_and_cap() {
        let x = MonomialPoly::var(1, 0);
        let up = UserProblem::feasibility(vec!["x".into()], vec![VarBounds::closed(-3, 3)]).with_constraint(
            x.pow(2),
            Relation::Lt,
            MonomialPoly::zero(1),
        );
        let cp = canonicalize(&up).unwrap();
        let r = brute_force(&cp).unwrap();
        assert_eq!((r.theta, r.solutions.len(), r.points_scanned), (None, 0, 7));
        assert_eq!(brute_force_with_cap(&cp, 6), Err(Error::OracleCapExceeded { count: "7".into(), cap: 6 }));
    }
}
