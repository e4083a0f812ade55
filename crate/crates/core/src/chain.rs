//! The failure chain on permutations.
//!
//! Each step one node fails, drawn from the failure model, and moves to the
//! last position. Uniform failures make this the top-to-random shuffle run
//! backwards in time; its law mixes to uniform in about `n ln n` steps.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::{factorial, permutation_rank, permutation_unrank};
use crate::error::{Error, Result};
use crate::model::{FailureModel, NetworkConfig, Permutation};
use crate::rational::{self, int, Rational};

/// Largest `n` for which the full `n!`-state law is materialized.
pub const MAX_FULL_STATES_N: usize = 8;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `stream` of the generator seeded with `seed`.
pub fn rng_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Per-replica seeds derived from one root seed.
pub fn replica_seeds(root: u64, count: usize) -> Vec<u64> {
    let mut r = rng_stream(root, u64::MAX);
    (0..count).map(|_| r.next_u64()).collect()
}

/// Law of the chain over all `n!` permutations, indexed by lexicographic rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainDistribution {
    n: usize,
    probs: Vec<Rational>,
}

fn check_full(n: usize) -> Result<()> {
    if n == 0 || n > MAX_FULL_STATES_N {
        return Err(Error::TooLarge(alloc::format!(
            "full permutation law needs 1 ≤ n ≤ {MAX_FULL_STATES_N}, got {n}"
        )));
    }
    Ok(())
}

impl ChainDistribution {
    pub fn point_mass(pi: &Permutation) -> Result<Self> {
        let n = pi.n();
        check_full(n)?;
        let mut probs = alloc::vec![rational::zero(); factorial(n) as usize];
        probs[permutation_rank(pi.order())] = rational::one();
        Ok(Self { n, probs })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        check_full(n)?;
        let size = factorial(n) as usize;
        let p = rational::ratio(1, size as i64);
        Ok(Self {
            n,
            probs: alloc::vec![p; size],
        })
    }

    /// Law from explicit masses in rank order; they must be nonnegative and sum to one.
    pub fn from_probs(n: usize, probs: Vec<Rational>) -> Result<Self> {
        check_full(n)?;
        if probs.len() != factorial(n) as usize {
            return Err(Error::Precondition(String::from("need one mass per permutation")));
        }
        if probs.iter().any(|p| p.is_negative()) || probs.iter().sum::<Rational>() != rational::one() {
            return Err(Error::Precondition(String::from("masses must be a probability vector")));
        }
        Ok(Self { n, probs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn prob(&self, pi: &Permutation) -> &Rational {
        &self.probs[permutation_rank(pi.order())]
    }

    pub fn total(&self) -> Rational {
        self.probs.iter().sum()
    }
}

/// Successor table: `next[rank * n + (v - 1)]` is the rank after `v` fails.
fn successor_table(n: usize) -> Vec<usize> {
    let size = factorial(n) as usize;
    let mut next = Vec::with_capacity(size * n);
    for r in 0..size {
        let pi = Permutation::from_order(permutation_unrank(n, r)).expect("unrank");
        for v in 1..=n {
            next.push(permutation_rank(pi.apply_failure(v).expect("node in range").order()));
        }
    }
    next
}

/// One exact step of the chain under the configuration's failure model.
pub fn transition_step(dist: &ChainDistribution, cfg: &NetworkConfig) -> Result<ChainDistribution> {
    let n = dist.n;
    if n != cfg.n() {
        return Err(Error::Precondition(String::from("distribution size differs from network size")));
    }
    check_full(n)?;
    let fail = cfg.failure_probabilities();
    let next = successor_table(n);
    Ok(step_with(dist, &next, &fail))
}

fn step_with(dist: &ChainDistribution, next: &[usize], fail: &[Rational]) -> ChainDistribution {
    let n = dist.n;
    let mut out = alloc::vec![rational::zero(); dist.probs.len()];
    for (r, p) in dist.probs.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        for v in 0..n {
            out[next[r * n + v]] += p * &fail[v];
        }
    }
    ChainDistribution { n, probs: out }
}

/// `t` exact steps.
pub fn evolve(dist: &ChainDistribution, cfg: &NetworkConfig, t: usize) -> Result<ChainDistribution> {
    check_full(dist.n)?;
    let fail = cfg.failure_probabilities();
    let next = successor_table(dist.n);
    let mut cur = dist.clone();
    for _ in 0..t {
        cur = step_with(&cur, &next, &fail);
    }
    Ok(cur)
}

pub fn tv_to_uniform_exact(dist: &ChainDistribution) -> Rational {
    let u = rational::ratio(1, dist.probs.len() as i64);
    let total: Rational = dist.probs.iter().map(|p| (p - &u).abs()).sum();
    total / int(2)
}

pub fn tv_to_uniform(dist: &ChainDistribution) -> f64 {
    rational::to_f64(&tv_to_uniform_exact(dist))
}

/// Exact TV distance to uniform after each of `0..=t_max` uniform steps from
/// the identity.
pub fn tv_curve(n: usize, t_max: usize) -> Result<Vec<Rational>> {
    check_full(n)?;
    let size = factorial(n) as usize;
    let next = successor_table(n);
    let n_fact = BigUint::from(size as u64);
    // Integer path counts over the common denominator n^t.
    let mut counts = alloc::vec![BigUint::zero(); size];
    counts[0] = BigUint::one();
    let mut denom = BigUint::one();
    let mut out = Vec::with_capacity(t_max + 1);
    for t in 0..=t_max {
        if t > 0 {
            let mut fresh = alloc::vec![BigUint::zero(); size];
            for (r, c) in counts.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for v in 0..n {
                    fresh[next[r * n + v]] += c;
                }
            }
            counts = fresh;
            denom *= n as u64;
        }
        let mut gap = BigUint::zero();
        for c in &counts {
            let scaled = c * &n_fact;
            gap += if scaled >= denom { &scaled - &denom } else { &denom - &scaled };
        }
        let den = BigInt::from(&denom * &n_fact) * 2;
        out.push(Rational::new(BigInt::from(gap), den));
    }
    Ok(out)
}

/// `⌈n ln n + c·n⌉`.
pub fn mixing_time(n: usize, c: f64) -> usize {
    let nf = n as f64;
    libm::ceil(nf * libm::log(nf) + c * nf).max(0.0) as usize
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixingCertificate {
    pub n: usize,
    pub c: f64,
    pub t: usize,
    pub tv: Rational,
    pub bound: f64,
    pub holds: bool,
}

/// Exact TV from the identity at `⌈n ln n + c·n⌉` against `e^{−c}`.
pub fn mixing_certificate(n: usize, c: f64) -> Result<MixingCertificate> {
    if !(2..=MAX_FULL_STATES_N).contains(&n) {
        return Err(Error::Precondition(alloc::format!("mixing certificate needs 2 ≤ n ≤ 8, got {n}")));
    }
    let t = mixing_time(n, c);
    let tv = tv_curve(n, t)?.pop().expect("nonempty curve");
    let bound = libm::exp(-c);
    let holds = rational::to_f64(&tv) <= bound;
    Ok(MixingCertificate {
        n,
        c,
        t,
        tv,
        bound,
        holds,
    })
}

/// `r(r−1)…(r−k+1)/k!`.
pub fn gen_binom(r: &Rational, k: usize) -> Rational {
    let mut acc = rational::one();
    for i in 0..k {
        acc *= r - int(i as i64);
        acc /= int(i as i64 + 1);
    }
    acc
}

/// Stationary mass of each block `P_i` (the unique `U` node at position `i`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDistribution {
    pub block_probs: Vec<Rational>,
    /// The stationarity argument assumes `q ≤ p`; the identity holds regardless.
    pub q_exceeds_p: bool,
}

fn single_u_two_class(cfg: &NetworkConfig) -> Result<(Rational, Rational)> {
    cfg.check()?;
    if cfg.n1 != 1 {
        return Err(Error::Precondition(String::from("block law needs exactly one U node")));
    }
    match &cfg.failure_model {
        FailureModel::TwoClass { p, q } => Ok((p.clone(), q.clone())),
        _ => Err(Error::Precondition(String::from("block law needs a two-class failure model"))),
    }
}

pub fn stationary_nu(cfg: &NetworkConfig) -> Result<BlockDistribution> {
    let (p, q) = single_u_two_class(cfg)?;
    let n = cfg.n();
    let r = p.recip();
    let norm = (rational::one() - &q) / gen_binom(&(&r - rational::one()), n - 2);
    let block_probs = (1..=n)
        .map(|i| &norm * gen_binom(&(&r - int(n as i64 + 1) + int(i as i64)), i - 1))
        .collect();
    Ok(BlockDistribution {
        block_probs,
        q_exceeds_p: q > p,
    })
}

/// Exact transition matrix between blocks, `kernel[i-1][j-1]`.
pub fn block_kernel(cfg: &NetworkConfig) -> Result<Vec<Vec<Rational>>> {
    let (p, q) = single_u_two_class(cfg)?;
    let n = cfg.n();
    let mut k = alloc::vec![alloc::vec![rational::zero(); n]; n];
    for i in 1..=n {
        if i > 1 {
            k[i - 1][i - 2] += int(i as i64 - 1) * &p;
        }
        k[i - 1][i - 1] += int((n - i) as i64) * &p;
        k[i - 1][n - 1] += &q;
    }
    Ok(k)
}

/// `max_i |(νK)_i − ν_i|`; zero exactly when `ν` is stationary.
pub fn verify_stationary(nu: &BlockDistribution, cfg: &NetworkConfig) -> Result<Rational> {
    let k = block_kernel(cfg)?;
    let n = k.len();
    if nu.block_probs.len() != n {
        return Err(Error::Precondition(String::from("block vector has the wrong length")));
    }
    let mut worst = rational::zero();
    for j in 0..n {
        let mut flow = rational::zero();
        for i in 0..n {
            flow += &nu.block_probs[i] * &k[i][j];
        }
        worst = rational::max(worst, (flow - &nu.block_probs[j]).abs());
    }
    Ok(worst)
}

/// Draws failed nodes i.i.d. from the failure model.
#[derive(Debug, Clone)]
pub struct FailureSampler {
    n: usize,
    weighted: Option<WeightedIndex<u64>>,
}

impl FailureSampler {
    /// Uniform failures over `1..=n`.
    pub fn uniform(n: usize) -> Self {
        Self { n, weighted: None }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn new(cfg: &NetworkConfig) -> Result<Self> {
        cfg.check()?;
        let n = cfg.n();
        if matches!(cfg.failure_model, FailureModel::Uniform) {
            return Ok(Self { n, weighted: None });
        }
        let probs = cfg.failure_probabilities();
        let lcm = probs.iter().fold(BigInt::one(), |acc, p| acc.lcm(p.denom()));
        let weights: Vec<u64> = probs
            .iter()
            .map(|p| (p * Rational::from_integer(lcm.clone())).to_integer().to_u64())
            .collect::<Option<_>>()
            .ok_or_else(|| Error::TooLarge(String::from("failure probabilities need a common denominator below 2^64")))?;
        let weighted = WeightedIndex::new(weights)
            .map_err(|e| Error::InvalidConfig(alloc::format!("failure weights: {e}")))?;
        Ok(Self {
            n,
            weighted: Some(weighted),
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        match &self.weighted {
            None => rng.gen_range(1..=self.n),
            Some(w) => w.sample(rng) + 1,
        }
    }
}

pub fn sample_failures(cfg: &NetworkConfig, count: usize, seed: u64) -> Result<Vec<usize>> {
    let sampler = FailureSampler::new(cfg)?;
    let mut r = rng(seed);
    Ok((0..count).map(|_| sampler.sample(&mut r)).collect())
}

/// Steps until every node has failed at least once.
pub fn sample_t0_with<R: Rng + ?Sized>(sampler: &FailureSampler, rng: &mut R) -> u64 {
    let mut seen = alloc::vec![false; sampler.n + 1];
    let mut remaining = sampler.n;
    let mut t = 0u64;
    while remaining > 0 {
        t += 1;
        let v = sampler.sample(rng);
        if !seen[v] {
            seen[v] = true;
            remaining -= 1;
        }
    }
    t
}

pub fn sample_t0(cfg: &NetworkConfig, seed: u64) -> Result<u64> {
    let sampler = FailureSampler::new(cfg)?;
    Ok(sample_t0_with(&sampler, &mut rng(seed)))
}

/// Coupon-collector mean `n·H_n` of the covering time under uniform failures.
pub fn coupon_collector_mean(n: usize) -> Rational {
    let h: Rational = (1..=n as i64).map(|i| rational::ratio(1, i)).sum();
    int(n as i64) * h
}

/// Visits of the unique `U` node to each position, sampled every `thin` steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockOccupancy {
    pub counts: Vec<u64>,
    pub samples: u64,
}

pub fn simulate_block_occupancy(
    cfg: &NetworkConfig,
    steps: u64,
    burn_in: u64,
    thin: u64,
    seed: u64,
) -> Result<BlockOccupancy> {
    single_u_two_class(cfg)?;
    if thin == 0 {
        return Err(Error::Precondition(String::from("thinning interval must be positive")));
    }
    let sampler = FailureSampler::new(cfg)?;
    let mut r = rng(seed);
    let mut pi = Permutation::identity(cfg.n());
    let mut counts = alloc::vec![0u64; cfg.n()];
    let mut samples = 0;
    for t in 1..=steps {
        pi.fail(sampler.sample(&mut r))?;
        if t > burn_in && (t - burn_in).is_multiple_of(thin) {
            counts[pi.pos(1) - 1] += 1;
            samples += 1;
        }
    }
    Ok(BlockOccupancy { counts, samples })
}
