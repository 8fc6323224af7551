//! Expected size of the subdivision tree.
//!
//! The tree is modelled as a branching process: a box of generation `i`
//! splits into two with probability `lambda_i = 1 - (1 - lambda)^(2^(K-i))`,
//! where `lambda` is the fraction of unit leaves meeting the solution set and
//! `K = k_1 + ... + k_n`. Everything here is exact, including the sampler.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::index::MultiDegree;
use crate::problem::{initial_system, CanonicalProblem};
use crate::rational::{from_integer, pow2, Integer, Rational, Theta};
use crate::solver::{surviving_unit_boxes, TraceRecord};

/// Largest `K` accepted by the exact analytics. The denominators of
/// `lambda_i` have `2^K * log2(q)` bits.
pub const MAX_EXACT_K: u32 = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexityInput {
    lambda: Rational,
    k: u32,
}

impl ComplexityInput {
    pub fn new(lambda: Rational, k: u32) -> Result<Self> {
        if lambda.is_negative() || lambda > Rational::one() {
            return Err(Error::LambdaOutOfRange(lambda.to_string()));
        }
        if k > MAX_EXACT_K {
            return Err(Error::GenerationLimit { k, limit: MAX_EXACT_K });
        }
        Ok(ComplexityInput { lambda, k })
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// `lambda_i` for `i = 0..=K`.
    pub fn generation_lambdas(&self) -> Vec<Rational> {
        let complement = Rational::one() - &self.lambda;
        (0..=self.k)
            .map(|i| {
                let exponent = pow2(self.k - i);
                Rational::one() - pow_rational(&complement, &exponent)
            })
            .collect()
    }
}

fn pow_rational(base: &Rational, exponent: &Integer) -> Rational {
    let e = exponent.to_u64().expect("exponent bounded by 2^MAX_EXACT_K");
    Rational::new_raw(base.numer().pow(e as u32), base.denom().pow(e as u32))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationProfile {
    /// `lambda_0 ..= lambda_K`.
    pub lambdas: Vec<Rational>,
    /// `E(Z_0) ..= E(Z_K)`, with `E(Z_0) = 1` and `E(Z_{i+1}) = 2 lambda_i E(Z_i)`.
    pub expected: Vec<Rational>,
}

impl GenerationProfile {
    pub fn new(ci: &ComplexityInput) -> Self {
        let lambdas = ci.generation_lambdas();
        let mut expected = Vec::with_capacity(lambdas.len());
        let mut z = Rational::one();
        for l in lambdas.iter().take(ci.k as usize) {
            expected.push(z.clone());
            z = z * l * Rational::from_integer(BigInt::from(2));
        }
        expected.push(z);
        GenerationProfile { lambdas, expected }
    }

    pub fn total(&self) -> Rational {
        self.expected.iter().sum()
    }
}

/// `sum_{i=0}^{K} 2^i prod_{j<i} lambda_j`, exactly.
///
/// With `lambda = p/q` and `u = q - p`, every term has the form
/// `2^i N_i / q^{E_i}`, so the sum is accumulated over the common denominator
/// `q^{E_K}` and normalized once.
pub fn expected_boxes(ci: &ComplexityInput) -> Rational {
    let q = ci.lambda.denom().clone();
    let u = &q - ci.lambda.numer();
    let k = ci.k;
    // exponent of q in the denominator of prod_{j<i} lambda_j
    let mut e = vec![0u64; k as usize + 1];
    for i in 1..=k as usize {
        e[i] = e[i - 1] + (1u64 << (k as usize - (i - 1)));
    }
    let e_max = e[k as usize];
    let mut numerator = Integer::zero();
    let mut partial = Integer::one();
    for (i, &e_i) in e.iter().enumerate() {
        if i > 0 {
            let m = 1u32 << (k as usize - (i - 1));
            partial *= q.pow(m) - u.pow(m);
            if partial.is_zero() {
                break;
            }
        }
        let lift = q.pow((e_max - e_i) as u32);
        numerator += (&partial << i) * lift;
    }
    Rational::new(numerator, q.pow(e_max as u32))
}

/// Closed-form bounds `lo <= expected_boxes <= hi`.
pub fn expected_bounds(ci: &ComplexityInput) -> (Rational, Rational) {
    let k = ci.k;
    let hi = from_integer(&(pow2(k + 1) - 1));
    let two_lambda = &ci.lambda * Rational::from_integer(BigInt::from(2));
    let lo = if two_lambda.is_one() {
        Rational::from_integer(BigInt::from(k + 1))
    } else {
        let p = pow_rational(&two_lambda, &BigInt::from(k + 1));
        (p - Rational::one()) / (two_lambda - Rational::one())
    };
    (lo, hi)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationStats {
    pub trials: u64,
    pub seed: u64,
    pub mean: Rational,
    /// Unbiased sample variance; zero for a single trial.
    pub variance: Rational,
    pub min: u64,
    pub max: u64,
}

impl SimulationStats {
    /// Whether `|mean - target| <= m * sqrt(variance / trials)`, decided exactly
    /// by squaring both sides.
    pub fn within_standard_errors(&self, target: &Rational, m: u32) -> bool {
        let diff = &self.mean - target;
        let lhs = &diff * &diff;
        let rhs = &self.variance * Rational::from_integer(BigInt::from(m * m)) / Rational::from_integer(BigInt::from(self.trials));
        lhs <= rhs
    }
}

/// Samples `trials` independent trees. Trial `t` draws from the ChaCha8 stream
/// `t` of `seed`, so results do not depend on how trials are scheduled.
pub fn simulate_branching(ci: &ComplexityInput, trials: u64, seed: u64) -> Result<SimulationStats> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trial count must be positive".into()));
    }
    let coins: Vec<ExactBernoulli> = ci.generation_lambdas().iter().map(ExactBernoulli::new).collect();
    let mut sum = 0u128;
    let mut sum_sq = 0u128;
    let (mut min, mut max) = (u64::MAX, 0u64);
    for t in 0..trials {
        let total = simulate_one(&coins, seed, t);
        sum += total as u128;
        sum_sq += (total as u128) * (total as u128);
        min = min.min(total);
        max = max.max(total);
    }
    let n = Rational::from_integer(BigInt::from(trials));
    let s = Rational::from_integer(BigInt::from(sum));
    let mean = &s / &n;
    let variance =
        if trials > 1 { (Rational::from_integer(BigInt::from(sum_sq)) - &s * &s / &n) / (n - Rational::one()) } else { Rational::zero() };
    Ok(SimulationStats { trials, seed, mean, variance, min, max })
}

/// Total number of boxes in one sampled tree.
pub fn simulate_one_trial(ci: &ComplexityInput, seed: u64, trial: u64) -> u64 {
    let coins: Vec<ExactBernoulli> = ci.generation_lambdas().iter().map(ExactBernoulli::new).collect();
    simulate_one(&coins, seed, trial)
}

fn simulate_one(coins: &[ExactBernoulli], seed: u64, trial: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let mut z = 1u64;
    let mut total = 1u64;
    // generation K boxes are unit leaves and never split
    for coin in &coins[..coins.len() - 1] {
        let splits = (0..z).filter(|_| coin.sample(&mut rng)).count() as u64;
        z = 2 * splits;
        total += z;
        if z == 0 {
            break;
        }
    }
    total
}

/// Bernoulli trial with exact rational success probability: a uniform
/// `U in [0,1)` is compared with `p` one 64-bit block at a time.
#[derive(Debug, Clone)]
struct ExactBernoulli {
    certain: Option<bool>,
    first_block: u64,
    remainder: Integer,
    denom: Integer,
}

impl ExactBernoulli {
    fn new(p: &Rational) -> Self {
        if p.is_zero() || p.is_one() {
            return ExactBernoulli { certain: Some(p.is_one()), first_block: 0, remainder: Integer::zero(), denom: Integer::one() };
        }
        let denom = p.denom().clone();
        let (block, remainder) = next_block(p.numer(), &denom);
        ExactBernoulli { certain: None, first_block: block, remainder, denom }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> bool {
        if let Some(c) = self.certain {
            return c;
        }
        let x: u64 = rng.random();
        if x != self.first_block {
            return x < self.first_block;
        }
        let mut remainder = self.remainder.clone();
        loop {
            if remainder.is_zero() {
                return false;
            }
            let (block, r) = next_block(&remainder, &self.denom);
            remainder = r;
            let x: u64 = rng.random();
            if x != block {
                return x < block;
            }
        }
    }
}

/// Next 64 binary digits of `r / den` for `0 <= r < den`.
fn next_block(r: &Integer, den: &Integer) -> (u64, Integer) {
    let (q, rem) = (r << 64u32).div_rem(den);
    (q.to_u64().expect("quotient below 2^64"), rem)
}

/// Certified over-estimate of the complexity number: the share of unit boxes
/// of the problem's box not rejected by the bound test at degree `d` against
/// the incumbent `theta` (user scale).
pub fn lambda_upper_bound(cp: &CanonicalProblem, theta: &Theta, d: &MultiDegree) -> Result<Rational> {
    let system = initial_system(cp, d)?;
    let internal = cp.theta_transform.theta_to_internal(theta);
    let count = surviving_unit_boxes(&system, &cp.exponents, &internal, None)?;
    Ok(Rational::new(BigInt::from(count), pow2(cp.total_exponent() as u32)))
}

/// Number of visited boxes per generation `0..=K` in a solver trace.
pub fn observed_generations(trace: &[TraceRecord], total_exponent: u64) -> Vec<u64> {
    let mut counts = vec![0u64; total_exponent as usize + 1];
    for record in trace {
        counts[record.generation(total_exponent) as usize] += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::MultiIndex;
    use crate::poly::MonomialPoly;
    use crate::rational::{int, rat};

    fn ci(p: i64, q: i64, k: u32) -> ComplexityInput {
        ComplexityInput::new(rat(p, q), k).unwrap()
    }

    #[test]
    fn first_example() {
        let c = ci(1, 2, 2);
        assert_eq!(expected_boxes(&c), rat(91, 16));
        assert_eq!(expected_bounds(&c), (int(3), int(7)));
        assert_eq!(c.generation_lambdas(), vec![rat(15, 16), rat(3, 4), rat(1, 2)]);
    }

    #[test]
    fn degenerate_lambdas() {
        for k in 0..6 {
            let full = from_integer(&(pow2(k + 1) - 1));
            assert_eq!(expected_boxes(&ci(1, 1, k)), full);
            assert_eq!(expected_bounds(&ci(1, 1, k)), (full.clone(), full));
            assert_eq!(expected_boxes(&ci(0, 1, k)), int(1));
        }
    }

    #[test]
    fn second_example_bounds() {
        let c = ci(1, 8, 6);
        let (lo, hi) = expected_bounds(&c);
        let quarter = rat(1, 4);
        let expect_lo = (pow_rational(&quarter, &BigInt::from(7)) - int(1)) / (quarter - int(1));
        assert_eq!(lo, expect_lo);
        assert_eq!(hi, int(127));
        let e = expected_boxes(&c);
        assert!(lo <= e && e <= hi);
        assert_eq!(e.round(), int(34));
    }

    #[test]
    fn profile_matches_closed_form() {
        for (p, q, k) in [(1, 2, 2), (1, 8, 6), (3, 7, 5), (0, 1, 3), (1, 1, 4)] {
            let c = ci(p, q, k);
            let profile = GenerationProfile::new(&c);
            assert_eq!(profile.expected[0], int(1));
            assert_eq!(profile.total(), expected_boxes(&c));
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ComplexityInput::new(rat(-1, 2), 2).is_err());
        assert!(ComplexityInput::new(rat(3, 2), 2).is_err());
        assert!(ComplexityInput::new(rat(1, 2), MAX_EXACT_K + 1).is_err());
    }

    #[test]
    fn deterministic_simulations() {
        let full = simulate_branching(&ci(1, 1, 3), 50, 7).unwrap();
        assert_eq!((full.min, full.max, full.mean.clone()), (15, 15, int(15)));
        assert_eq!(full.variance, int(0));
        let none = simulate_branching(&ci(0, 1, 5), 50, 7).unwrap();
        assert_eq!((none.min, none.max), (1, 1));
    }

    #[test]
    fn simulation_is_reproducible() {
        let a = simulate_branching(&ci(1, 2, 2), 1000, 42).unwrap();
        let b = simulate_branching(&ci(1, 2, 2), 1000, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.within_standard_errors(&rat(91, 16), 4));
        assert_eq!(simulate_one_trial(&ci(1, 2, 2), 42, 17), simulate_one_trial(&ci(1, 2, 2), 42, 17));
    }

    #[test]
    fn exact_bernoulli_blocks() {
        let (b, r) = next_block(&BigInt::from(1), &BigInt::from(2));
        assert_eq!((b, r), (1u64 << 63, BigInt::from(0)));
        let (b, r) = next_block(&BigInt::from(1), &BigInt::from(3));
        assert_eq!(b, 0x5555_5555_5555_5555);
        assert_eq!(r, BigInt::from(1));
    }

    #[test]
    fn lambda_estimator_on_small_systems() {
        let x = MonomialPoly::var(2, 0);
        let y = MonomialPoly::var(2, 1);
        let names = vec!["x".to_string(), "y".to_string()];
        let anchor = vec![int(0).to_integer(), int(0).to_integer()];
        let q = &y - &x.pow(2);
        let cp = CanonicalProblem::on_dyadic_box(
            names.clone(),
            vec![MonomialPoly::zero(2), q.clone(), -&q],
            anchor.clone(),
            MultiIndex::new(vec![3, 3]),
        )
        .unwrap();
        let coarse = lambda_upper_bound(&cp, &Theta::Finite(int(0)), &MultiDegree::new(vec![2, 1])).unwrap();
        let fine = lambda_upper_bound(&cp, &Theta::Finite(int(0)), &MultiDegree::new(vec![6, 5])).unwrap();
        assert!(fine <= coarse);
        assert!(fine >= rat(8, 64));

        let infeasible = CanonicalProblem::on_dyadic_box(
            names,
            vec![MonomialPoly::zero(2), MonomialPoly::constant(2, int(-1))],
            anchor,
            MultiIndex::new(vec![1, 1]),
        )
        .unwrap();
        assert_eq!(lambda_upper_bound(&infeasible, &Theta::NegInfinity, &MultiDegree::new(vec![1, 1])).unwrap(), int(0));
    }
}
