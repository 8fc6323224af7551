//! Multi-threaded subdivision sharing one incumbent bound.

use bernstein_ipp::parse::parse_user_problem;
use bernstein_ipp::problem::canonicalize;
use bernstein_ipp::solver::solve_parallel;
use bernstein_ipp::{solve, Rational, Result, SolverConfig};

const PROBLEM: &str = "\
vars: x y z
bound: x in [-20,20]
bound: y in [-20,20]
bound: z in [0,30]
maximize: x*y - z
subject to:
  x^2 + y^2 <= z^2
  z <= 3*x + 5
";

fn show(theta: &Option<Rational>) -> String {
    theta.as_ref().map_or("none".to_string(), |t| t.to_string())
}

pub fn run() -> Result<()> {
    let cp = canonicalize(&parse_user_problem(PROBLEM)?)?;
    let d = cp.default_degree();
    let serial = solve(&cp, &d, &SolverConfig::default())?;
    for threads in [1, 2, 4] {
        let out = solve_parallel(&cp, &d, &SolverConfig::default(), threads)?;
        println!("{threads} threads: optimum {}, {} boxes", show(&out.theta), out.counters.boxes_created);
        // the answer is deterministic; counters depend on scheduling
        assert_eq!(out.theta, serial.theta);
        assert_eq!(out.solutions, serial.solutions);
    }
    println!("serial: optimum {} at {:?}", show(&serial.theta), serial.solutions);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
