//! The Linial-Meshulam random complex `Y_d(n, p)`: every `(d+1)`-subset of
//! `[n]` is included as a facet independently with probability `p`, and the
//! full `(d-1)`-skeleton is implicit. The returned complex stores only the
//! sampled `d`-facets.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::complex::{Complex, Face, Vertex};
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Parameters of one `Y_d(n, p)` draw.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LMParams {
    pub n: u32,
    pub d: usize,
    pub p: f64,
    pub seed: u64,
}

impl LMParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::param(format!("p = {} outside [0, 1]", self.p)));
        }
        if (self.n as u64) < self.d as u64 + 1 {
            return Err(Error::param(format!("n = {} < d + 1 = {}", self.n, self.d + 1)));
        }
        Ok(())
    }
}

/// `C(n, k)` as u128; saturates far above every desk-scale input.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i + 1) as u128;
    }
    acc
}

/// Subset-count threshold separating the per-subset stream from reservoir
/// sampling.
const DENSE_LIMIT: u128 = 1 << 27;

/// Draws `Y_d(n, p)`. Same parameters always give the same complex.
///
/// Up to `2^27` candidate subsets, one uniform is drawn per
/// `(d+1)`-subset in lexicographic order and the subset is kept iff the
/// uniform is below `p`; under a shared seed this couples draws monotonely
/// in `p`. Larger spaces switch to the sparse path of
/// [`sample_lm_sparse`], which agrees in distribution.
pub fn sample_lm(params: &LMParams) -> Result<Complex> {
    params.validate()?;
    if binomial(params.n as u64, params.d as u64 + 1) <= DENSE_LIMIT {
        sample_lm_dense(params)
    } else {
        sample_lm_sparse(params)
    }
}

/// One uniform per subset, lexicographic order.
pub fn sample_lm_dense(params: &LMParams) -> Result<Complex> {
    params.validate()?;
    let mut rng = SplitMix64::new(params.seed);
    let mut facets = BTreeSet::new();
    for subset in (0..params.n).combinations(params.d + 1) {
        if rng.next_f64() < params.p {
            facets.insert(Face::from_sorted(subset));
        }
    }
    Ok(Complex::from_facet_set(params.d, facets))
}

/// Binomial facet count via geometric gap skipping, then that many distinct
/// subsets drawn uniformly by lexicographic rank.
pub fn sample_lm_sparse(params: &LMParams) -> Result<Complex> {
    params.validate()?;
    let total = binomial(params.n as u64, params.d as u64 + 1);
    let mut rng = SplitMix64::new(params.seed);
    let count = binomial_draw(&mut rng, total, params.p);
    let mut ranks: BTreeSet<u128> = BTreeSet::new();
    while (ranks.len() as u128) < count {
        let r = uniform_u128(&mut rng, total);
        ranks.insert(r);
    }
    let facets = ranks
        .into_iter()
        .map(|r| Face::from_sorted(unrank_subset(r, params.n, params.d + 1)))
        .collect();
    Ok(Complex::from_facet_set(params.d, facets))
}

/// Number of successes among `trials` Bernoulli(p) draws, sampled in
/// expected `O(trials * p)` time by jumping over failures: gaps between
/// successes are geometric.
fn binomial_draw(rng: &mut SplitMix64, trials: u128, p: f64) -> u128 {
    if p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return trials;
    }
    let log_q = (1.0 - p).ln();
    let mut successes: u128 = 0;
    let mut position: u128 = 0;
    loop {
        let u = rng.next_f64().max(f64::MIN_POSITIVE);
        let gap = (u.ln() / log_q).floor() as u128;
        position = position.saturating_add(gap).saturating_add(1);
        if position > trials {
            return successes;
        }
        successes += 1;
    }
}

fn uniform_u128(rng: &mut SplitMix64, n: u128) -> u128 {
    // n fits comfortably below 2^96 at desk scale; rejection keeps it exact.
    let threshold = n.wrapping_neg() % n;
    loop {
        let x = ((rng.next_u64() as u128) << 64) | rng.next_u64() as u128;
        if x >= threshold {
            return x % n;
        }
    }
}

/// The subset of `{0..n}` with the given lexicographic rank among
/// `k`-subsets.
fn unrank_subset(mut rank: u128, n: u32, k: usize) -> Vec<Vertex> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0u32;
    let mut remaining = k as u64;
    while remaining > 0 {
        // Subsets starting with `next` number C(n - next - 1, remaining - 1).
        let with_next = binomial((n - next - 1) as u64, remaining - 1);
        if rank < with_next {
            out.push(next);
            remaining -= 1;
        } else {
            rank -= with_next;
        }
        next += 1;
    }
    out
}

/// The sampling probability `epsilon * n^{-(d+1)/(2^{d+1}-2)}`, clamped to
/// `[0, 1]`.
pub fn turan_probability(n: u32, d: usize, epsilon: f64) -> f64 {
    let exponent = (d as f64 + 1.0) / ((1u64 << (d + 1)) as f64 - 2.0);
    (epsilon * (n as f64).powf(-exponent)).clamp(0.0, 1.0)
}

/// Mean facet count `C(n, d+1) * p`.
pub fn expected_facets(params: &LMParams) -> f64 {
    binomial(params.n as u64, params.d as u64 + 1) as f64 * params.p
}
