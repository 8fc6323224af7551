//! Certified range bounds of a polynomial on the unit square from its
//! Bernstein coefficients, and how degree elevation tightens them.

use bernstein_ipp::bernstein::to_bernstein;
use bernstein_ipp::rational::{int, rat};
use bernstein_ipp::{MonomialPoly, MultiDegree, Result};

pub fn run() -> Result<()> {
    let x = MonomialPoly::var(2, 0);
    let y = MonomialPoly::var(2, 1);
    // p(x, y) = x^2 - x*y + y/2 on [0,1]^2
    let p = &(&x.pow(2) - &(&x * &y)) + &y.scale(&rat(1, 2));
    let mut previous_width = None;
    for d in [[2, 1], [4, 2], [8, 4]] {
        let f = to_bernstein(&p, &MultiDegree::new(d.to_vec()))?;
        let (lo, hi) = f.range_bounds();
        let width = &hi - &lo;
        println!("degree {d:?}: p in [{lo}, {hi}]");
        assert!(previous_width.as_ref().is_none_or(|w| &width <= w));
        previous_width = Some(width);
        // the corner coefficient interpolates p at the origin
        assert_eq!(f.first(), &int(0));
        let probe = [rat(1, 3), rat(3, 4)];
        assert_eq!(f.evaluate(&probe)?, p.eval(&probe)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
