//! Persist halving matrices and reuse them across solves.

use std::sync::Arc;

use bernstein_ipp::cache::BasisCache;
use bernstein_ipp::parse::parse_user_problem;
use bernstein_ipp::problem::canonicalize;
use bernstein_ipp::{solve, Result, SolverConfig};

pub fn run() -> Result<()> {
    let dir = std::env::temp_dir().join(format!("bipp-basis-example-{}", std::process::id()));
    let cache = BasisCache::new(&dir);
    let cp = canonicalize(&parse_user_problem(include_str!("problems/circle.txt"))?)?;
    let d = cp.default_degree();
    let built = cache.load_or_build(&d)?;
    println!("wrote {}", cache.path_for(&d).display());
    let loaded = cache.load_or_build(&d)?;
    assert_eq!(built, loaded);
    let config = SolverConfig { basis: Some(Arc::new(loaded)), ..Default::default() };
    let out = solve(&cp, &d, &config)?;
    println!("optimum {} at {:?}", out.theta.as_ref().map_or("none".to_string(), |t| t.to_string()), out.solutions);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
