//! Properties of lattice boxes, Bernstein forms, halving matrices and the
//! basis cache on randomized inputs.

mod common;

use std::collections::BTreeSet;

use bernstein_ipp::bernstein::to_bernstein;
use bernstein_ipp::cache::{read_basis, write_basis};
use bernstein_ipp::rational::{int, rat};
use bernstein_ipp::subdivision::{box_matrix, factor_box};
use bernstein_ipp::{BernsteinForm, Integer, LatticeBox, MonomialPoly, MultiDegree, MultiIndex, Rational, Side, SubdivisionBasis};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_degree<R: Rng>(rng: &mut R, max_n: usize, max_d: u32) -> MultiDegree {
    let n = rng.random_range(1..=max_n);
    MultiDegree::new((0..n).map(|_| rng.random_range(0..=max_d)).collect::<Vec<_>>())
}

/// Polynomial with rational coefficients and multi-degree at most `d`.
fn random_poly_within<R: Rng>(rng: &mut R, d: &MultiDegree) -> MonomialPoly {
    let p = common::random_poly(rng, d.nvars(), d.as_slice(), 6, 30);
    p.scale(&rat(1, rng.random_range(1..=7)))
}

fn random_form<R: Rng>(rng: &mut R, d: &MultiDegree) -> BernsteinForm {
    let coeffs = (0..d.basis_size()).map(|_| common::random_rational(rng, 50, 9)).collect();
    BernsteinForm::new(d.clone(), coeffs).unwrap()
}

fn random_point<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    (0..n).map(|_| common::random_unit(rng, 16)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn halving_partitions_the_box(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(1..=3usize);
        let anchor: Vec<Integer> = (0..n).map(|_| Integer::from(r.random_range(-50..=50))).collect();
        let scale: Vec<u32> = (0..n).map(|_| r.random_range(1..=5)).collect();
        let sub: Vec<u32> = scale.iter().map(|&k| r.random_range(1..=k)).collect();
        let offset: Vec<u64> = scale.iter().zip(&sub).map(|(&k, &ks)| r.random_range(0..1u64 << (k - ks))).collect();
        let b = LatticeBox::new(anchor, MultiIndex::new(scale), offset, MultiIndex::new(sub));
        prop_assert!(!b.is_empty());
        let axis = r.random_range(0..n);
        let (lo, hi) = b.realize().unwrap();
        let (left, right) = b.children(axis).unwrap();
        let (llo, lhi) = left.realize().unwrap();
        let (rlo, rhi) = right.realize().unwrap();
        prop_assert_eq!(&llo, &lo);
        prop_assert_eq!(&rhi, &hi);
        for i in 0..n {
            if i == axis {
                prop_assert_eq!(&lhi[i], &rlo[i]);
                prop_assert!(lo[i] < lhi[i] && rlo[i] < hi[i]);
            } else {
                prop_assert_eq!(&lhi[i], &hi[i]);
                prop_assert_eq!(&rlo[i], &lo[i]);
            }
        }
        prop_assert_eq!(left.volume() + right.volume(), b.volume());
    }

    #[test]
    fn full_halving_reaches_every_lattice_point(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(1..=3usize);
        let anchor: Vec<Integer> = (0..n).map(|_| Integer::from(r.random_range(-9..=9))).collect();
        let k: Vec<u32> = (0..n).map(|_| r.random_range(0..=3)).collect();
        let mut pending = vec![LatticeBox::root(anchor.clone(), MultiIndex::new(k.clone())).unwrap()];
        let mut leaves = BTreeSet::new();
        let mut count = 0u64;
        while let Some(b) = pending.pop() {
            let ks = b.sub_scale().unwrap().clone();
            match ks.as_slice().iter().position(|&x| x > 0) {
                Some(axis) => {
                    let (l, rr) = b.children(axis).unwrap();
                    pending.push(l);
                    pending.push(rr);
                }
                None => {
                    count += 1;
                    leaves.insert(b.lower_corner().unwrap());
                }
            }
        }
        let total: u32 = k.iter().sum();
        prop_assert_eq!(count, 1u64 << total);
        prop_assert_eq!(leaves.len() as u64, count);
        for z in &leaves {
            for i in 0..n {
                let off = &z[i] - &anchor[i];
                prop_assert!(off >= Integer::from(0) && off < Integer::from(1u64 << k[i]));
            }
        }
    }

    #[test]
    fn bernstein_form_matches_monomial_form(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p_deg = random_degree(&mut r, 3, 4);
        let p = random_poly_within(&mut r, &p_deg);
        let d = MultiDegree::new(p_deg.as_slice().iter().map(|&x| x + r.random_range(0..=2)).collect::<Vec<_>>());
        let f = to_bernstein(&p, &d).unwrap();
        let (lo, hi) = f.range_bounds();
        let n = d.nvars();
        // endpoint interpolation
        let origin = vec![int(0); n];
        prop_assert_eq!(f.first(), &p.eval(&origin).unwrap());
        prop_assert_eq!(f.evaluate(&origin).unwrap(), p.eval(&origin).unwrap());
        for _ in 0..100 {
            let x = random_point(&mut r, n);
            let v = f.evaluate(&x).unwrap();
            prop_assert_eq!(&v, &p.eval(&x).unwrap());
            prop_assert!(lo <= v && v <= hi);
        }
    }

    #[test]
    fn elevation_preserves_values_and_tightens(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = random_degree(&mut r, 3, 4);
        let f = random_form(&mut r, &d);
        let raised = MultiDegree::new(d.as_slice().iter().map(|&x| x + r.random_range(0..=3)).collect::<Vec<_>>());
        let g = f.elevate(&raised).unwrap();
        let (flo, fhi) = f.range_bounds();
        let (glo, ghi) = g.range_bounds();
        prop_assert!(glo >= flo && ghi <= fhi);
        for _ in 0..20 {
            let x = random_point(&mut r, d.nvars());
            prop_assert_eq!(g.evaluate(&x).unwrap(), f.evaluate(&x).unwrap());
        }
        // raising along a path equals raising in one step
        let mid = MultiDegree::new(d.as_slice().iter().zip(raised.as_slice()).map(|(&a, &b)| (a + b) / 2).collect::<Vec<_>>());
        prop_assert_eq!(f.elevate(&mid).unwrap().elevate(&raised).unwrap(), g);
    }

    #[test]
    fn conversion_is_linear(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = random_degree(&mut r, 3, 3);
        let p = random_poly_within(&mut r, &d);
        let q = random_poly_within(&mut r, &d);
        let c = common::random_rational(&mut r, 9, 9);
        let sum = to_bernstein(&(&p + &q.scale(&c)), &d).unwrap();
        let parts = to_bernstein(&p, &d).unwrap().add(&to_bernstein(&q, &d).unwrap().scale(&c)).unwrap();
        prop_assert_eq!(sum, parts);
    }

    #[test]
    fn halving_matrices_are_triangular_and_commute(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = random_degree(&mut r, 3, 3);
        let b = SubdivisionBasis::new(&d);
        let n = d.nvars();
        let dense: Vec<_> = (0..n).map(|i| (b.dense(i, Side::Left), b.dense(i, Side::Right))).collect();
        for i in 0..n {
            let (l, rr) = &dense[i];
            prop_assert!(l.is_lower_triangular());
            prop_assert!(rr.is_upper_triangular());
            prop_assert_eq!(l.mul(rr) == rr.mul(l), d.as_slice()[i] == 0);
            for j in (0..n).filter(|&j| j != i) {
                let (lj, rj) = &dense[j];
                prop_assert_eq!(l.mul(lj), lj.mul(l));
                prop_assert_eq!(l.mul(rj), rj.mul(l));
            }
        }
    }

    #[test]
    fn axiswise_halving_equals_dense_product(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = random_degree(&mut r, 3, 3);
        let b = SubdivisionBasis::new(&d);
        let f = random_form(&mut r, &d);
        let axis = r.random_range(0..d.nvars());
        for side in [Side::Left, Side::Right] {
            let fast = b.apply_half(&f, axis, side).unwrap();
            let slow = b.dense(axis, side).mul_vec(f.coeffs());
            prop_assert_eq!(fast.coeffs(), slow.as_slice());
        }
    }

    #[test]
    fn halving_restricts_geometrically(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = random_degree(&mut r, 3, 4);
        let b = SubdivisionBasis::new(&d);
        let f = random_form(&mut r, &d);
        let axis = r.random_range(0..d.nvars());
        let left = b.apply_half(&f, axis, Side::Left).unwrap();
        let right = b.apply_half(&f, axis, Side::Right).unwrap();
        for _ in 0..10 {
            let x = random_point(&mut r, d.nvars());
            let mut xl = x.clone();
            xl[axis] = &x[axis] / int(2);
            let mut xr = x.clone();
            xr[axis] = (&x[axis] + int(1)) / int(2);
            prop_assert_eq!(left.evaluate(&x).unwrap(), f.evaluate(&xl).unwrap());
            prop_assert_eq!(right.evaluate(&x).unwrap(), f.evaluate(&xr).unwrap());
        }
    }

    #[test]
    fn halving_words_reproduce_box_matrices(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = random_degree(&mut r, 3, 3);
        let b = SubdivisionBasis::new(&d);
        let n = d.nvars();
        let scale: Vec<u32> = (0..n).map(|_| r.random_range(0..=4)).collect();
        let offset: Vec<u64> = scale.iter().map(|&k| r.random_range(0..1u64 << k)).collect();
        let word = factor_box(&offset, &MultiIndex::new(scale.clone())).unwrap();
        prop_assert_eq!(word.len() as u32, scale.iter().sum::<u32>());
        let lower: Vec<Rational> = offset.iter().zip(&scale).map(|(&l, &k)| rat(l as i64, 1 << k)).collect();
        let upper: Vec<Rational> = offset.iter().zip(&scale).map(|(&l, &k)| rat(l as i64 + 1, 1 << k)).collect();
        let f = random_form(&mut r, &d);
        let bm = box_matrix(&d, &lower, &upper).unwrap();
        prop_assert_eq!(b.apply_word(&f, &word).unwrap(), bm.apply(&f).unwrap());
    }

    #[test]
    fn basis_cache_round_trips(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = random_degree(&mut r, 4, 6);
        let b = SubdivisionBasis::new(&d);
        let mut buf = Vec::new();
        write_basis(&b, &mut buf).unwrap();
        prop_assert_eq!(read_basis(buf.as_slice()).unwrap(), b);
    }
}
