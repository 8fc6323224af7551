#![allow(dead_code)]

use bernstein_ipp::problem::{canonicalize, Direction, Relation, VarBounds};
use bernstein_ipp::rational::{int, rat};
use bernstein_ipp::{CanonicalProblem, MonomialPoly, Rational, UserProblem};
use rand::Rng;

pub fn random_poly<R: Rng>(rng: &mut R, n: usize, max_degree: &[u32], max_terms: usize, coeff: i64) -> MonomialPoly {
    let terms = rng.random_range(1..=max_terms);
    let mut p = MonomialPoly::zero(n);
    for _ in 0..terms {
        let e: Vec<u32> = max_degree.iter().map(|&d| rng.random_range(0..=d)).collect();
        let c = rng.random_range(-coeff..=coeff);
        p.add_term(e, int(c));
    }
    p
}

pub fn random_rational<R: Rng>(rng: &mut R, num: i64, den: i64) -> Rational {
    rat(rng.random_range(-num..=num), rng.random_range(1..=den))
}

/// Rational in `[0, 1]`.
pub fn random_unit<R: Rng>(rng: &mut R, den: i64) -> Rational {
    let q = rng.random_range(1..=den);
    rat(rng.random_range(0..=q), q)
}

pub fn random_relation<R: Rng>(rng: &mut R) -> Relation {
    [Relation::Le, Relation::Ge, Relation::Lt, Relation::Gt, Relation::Eq][rng.random_range(0..5)]
}

/// Random user problem: `n in {1,2,3}`, per-axis degree <= 3, integer
/// coefficients in `[-9, 9]`, at most 16 lattice points per side and at most
/// four constraints.
pub fn random_instance<R: Rng>(rng: &mut R) -> UserProblem {
    let n = rng.random_range(1..=3usize);
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let bounds: Vec<VarBounds> = (0..n)
        .map(|_| {
            let lo = rng.random_range(-8..=8i64);
            VarBounds::closed(lo, lo + rng.random_range(0..16i64))
        })
        .collect();
    let degree: Vec<u32> = (0..n).map(|_| rng.random_range(0..=3)).collect();
    let mut up = UserProblem::feasibility(names, bounds);
    let direction = [Direction::Maximize, Direction::Minimize, Direction::None][rng.random_range(0..3)];
    if direction != Direction::None {
        up = up.with_objective(direction, random_poly(rng, n, &degree, 4, 9));
    }
    for _ in 0..rng.random_range(0..=4) {
        let lhs = random_poly(rng, n, &degree, 3, 9);
        let rhs = if rng.random_bool(0.5) { MonomialPoly::zero(n) } else { random_poly(rng, n, &degree, 2, 9) };
        up = up.with_constraint(lhs, random_relation(rng), rhs);
    }
    up
}

pub fn random_canonical<R: Rng>(rng: &mut R) -> CanonicalProblem {
    canonicalize(&random_instance(rng)).expect("random instances are well formed")
}
