//! Compare the subdivision solver with exhaustive enumeration.

use bernstein_ipp::oracle::brute_force;
use bernstein_ipp::parse::parse_user_problem;
use bernstein_ipp::problem::canonicalize;
use bernstein_ipp::rational::int;
use bernstein_ipp::{solve, Result, SolverConfig};

const PROBLEMS: [&str; 2] = [include_str!("problems/parabola_max.txt"), include_str!("problems/circle.txt")];

pub fn run() -> Result<()> {
    for text in PROBLEMS {
        let cp = canonicalize(&parse_user_problem(text)?)?;
        let solved = solve(&cp, &cp.default_degree(), &SolverConfig::default())?;
        let oracle = brute_force(&cp)?;
        println!(
            "solver {} on {} points, oracle scanned {} points: {}",
            solved.theta.as_ref().map_or("none".to_string(), |t| t.to_string()),
            solved.solutions.len(),
            oracle.points_scanned,
            if solved.solutions == oracle.solutions { "MATCH" } else { "MISMATCH" }
        );
        assert_eq!(solved.theta, oracle.theta);
        assert_eq!(solved.solutions, oracle.solutions);
    }
    // (3,4) and (4,3) are the circle points nearest the diagonal
    let circle = canonicalize(&parse_user_problem(PROBLEMS[1])?)?;
    assert_eq!(brute_force(&circle)?.theta, Some(int(1)));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
