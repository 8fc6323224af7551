//! Exact expected subdivision-tree sizes and a seeded Monte Carlo check.

use bernstein_ipp::complexity::{expected_bounds, expected_boxes, simulate_branching, ComplexityInput, GenerationProfile};
use bernstein_ipp::rational::rat;
use bernstein_ipp::Result;

pub fn run() -> Result<()> {
    let ci = ComplexityInput::new(rat(1, 2), 2)?;
    let e = expected_boxes(&ci);
    println!("lambda 1/2, K 2: E = {e}");
    assert_eq!(e, rat(91, 16));

    for (p, q, k) in [(1, 2, 6), (1, 8, 6), (1, 4, 10)] {
        let ci = ComplexityInput::new(rat(p, q), k)?;
        let profile = GenerationProfile::new(&ci);
        let (lo, hi) = expected_bounds(&ci);
        let stats = simulate_branching(&ci, 20_000, 7)?;
        let e = profile.total();
        println!("lambda {p}/{q}, K {k}: E = {e} in [{lo}, {hi}], simulated mean {}", stats.mean);
        assert!(lo <= e && e <= hi);
        assert!(stats.within_standard_errors(&e, 3));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
