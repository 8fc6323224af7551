//! Halving matrices for a degree and the box matrix of a dyadic sub-box
//! obtained as a product of halvings.

use bernstein_ipp::bernstein::to_bernstein;
use bernstein_ipp::rational::rat;
use bernstein_ipp::subdivision::{box_matrix, factor_box};
use bernstein_ipp::{MonomialPoly, MultiDegree, MultiIndex, Result, Side, SubdivisionBasis};

pub fn run() -> Result<()> {
    let d = MultiDegree::new(vec![3]);
    let basis = SubdivisionBasis::new(&d);
    for side in [Side::Left, Side::Right] {
        println!("{side:?} halving matrix, degree 3:");
        for row in basis.factor(0, side).to_rows() {
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            println!("  [{}]", cells.join(", "));
        }
    }

    // the sub-box [5/8, 6/8] of [0,1] in two dimensions paired with [1/4, 2/4]
    let d2 = MultiDegree::new(vec![3, 2]);
    let basis2 = SubdivisionBasis::new(&d2);
    let word = factor_box(&[5, 1], &MultiIndex::new(vec![3, 2]))?;
    println!("halving word for offset (5,1) at scale (3,2): {word:?}");
    let x = MonomialPoly::var(2, 0);
    let y = MonomialPoly::var(2, 1);
    let p = &(&x.pow(3) * &y) - &y.pow(2);
    let f = to_bernstein(&p, &d2)?;
    let by_word = basis2.apply_word(&f, &word)?;
    let direct = box_matrix(&d2, &[rat(5, 8), rat(1, 4)], &[rat(6, 8), rat(2, 4)])?.apply(&f)?;
    assert_eq!(by_word, direct);
    let (lo, hi) = by_word.range_bounds();
    println!("p on the sub-box lies in [{lo}, {hi}]");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
