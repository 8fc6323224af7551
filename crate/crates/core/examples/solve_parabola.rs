//! Parse a problem file and solve it exactly.

use bernstein_ipp::parse::parse_user_problem;
use bernstein_ipp::problem::canonicalize;
use bernstein_ipp::rational::int;
use bernstein_ipp::solver::Status;
use bernstein_ipp::{solve, Integer, Result, SolverConfig};

const PROBLEM: &str = include_str!("problems/parabola_max.txt");

pub fn run() -> Result<()> {
    let up = parse_user_problem(PROBLEM)?;
    let cp = canonicalize(&up)?;
    let out = solve(&cp, &cp.default_degree(), &SolverConfig::default())?;
    assert_eq!(out.status, Status::Optimal);
    let theta = out.theta.clone().expect("feasible");
    println!("optimum {theta} at {:?}", out.solutions);
    println!("counters {:?}", out.counters);
    assert_eq!(theta, int(6));
    assert!(out.solutions.contains(&vec![Integer::from(2), Integer::from(4)]));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
