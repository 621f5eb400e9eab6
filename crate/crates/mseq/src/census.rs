//! Exhaustive census of the joint linear complexity distribution.
//!
//! `enumerate_distribution` walks all q^(n*m) multisequences in
//! lexicographic order of their flattened symbol vector (row-major,
//! leftmost symbol most significant) and tallies N(L). The index
//! decoder lets any sub-range [a, b) of [0, q^(n*m)) be enumerated
//! independently; partial count vectors merge by elementwise addition,
//! which makes parallel runs deterministic regardless of worker count.
//!
//! Counts are exact integers, expectations exact rationals; floats only
//! appear in rendered reports.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::lfsr::joint_complexity_raw;

/// Default cap on the exhaustive state space q^(n*m).
pub const DEFAULT_BUDGET: u64 = 1 << 26;

/// Exact counts N(L) for L = 0..=n at fixed (q, m, n).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistributionTable {
    pub q: usize,
    pub m: usize,
    pub n: usize,
    pub counts: Vec<BigUint>,
}

/// The distribution re-indexed by the deviation delta = L - ceil(nm/(m+1)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeviationTable {
    pub q: usize,
    pub m: usize,
    pub n: usize,
    pub center: i64,
    pub zcounts: BTreeMap<i64, BigUint>,
}

/// Exact expected complexity and its residual against the ceiling term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpectationRecord {
    pub q: usize,
    pub m: usize,
    pub n: usize,
    pub e_exact: BigRational,
    pub ceil_term: u64,
    pub residual: BigRational,
}

/// Minimal constants realizing the distribution bounds at one (q, m, n).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundFitReport {
    pub q: usize,
    pub m: usize,
    pub n: usize,
    pub c_lemma2_ok: bool,
    /// minimal C with N(L) <= C * q^(nm - |(m+1)L - mn|) for all L
    pub c_combined: BigRational,
    /// minimal C with Z(delta) <= C * q^(nm - (m+1)|delta|) for all delta
    pub c_zdelta: BigRational,
}

/// Seeded Monte Carlo estimate of the expected complexity.
#[derive(Clone, Debug, PartialEq)]
pub struct MCEstimate {
    pub q: usize,
    pub m: usize,
    pub n: usize,
    pub samples: u64,
    pub seed: u64,
    pub mean: f64,
    pub stderr: f64,
}

/// ceil(m*n / (m+1))
pub fn center_term(m: usize, n: usize) -> u64 {
    let a = (m as u64) * (n as u64);
    let b = m as u64 + 1;
    (a + b - 1) / b
}

/// q^(n*m) as a big integer.
pub fn state_space(q: usize, m: usize, n: usize) -> BigUint {
    BigUint::from(q).pow((n * m) as u32)
}

/// Tallies complexities over the index sub-range [start, end).
///
/// Index decoding: the nm base-q digits of the index fill the row-major
/// symbol array, most significant digit first.
pub fn enumerate_range(field: &Field, m: usize, n: usize, start: u64, end: u64) -> Vec<u64> {
    let q = field.q() as u64;
    let nm = n * m;
    let mut counts = vec![0u64; n + 1];
    if start >= end {
        return counts;
    }
    let mut buf = vec![0u8; nm];
    let mut idx = start;
    for slot in (0..nm).rev() {
        buf[slot] = (idx % q) as u8;
        idx /= q;
    }
    let mut cur = start;
    loop {
        counts[joint_complexity_raw(field, n, &buf)] += 1;
        cur += 1;
        if cur == end {
            break;
        }
        // increment base-q with carry
        for slot in (0..nm).rev() {
            buf[slot] += 1;
            if buf[slot] as u64 == q {
                buf[slot] = 0;
            } else {
                break;
            }
        }
    }
    counts
}

/// Exact exhaustive distribution of N(L) over all q^(n*m) multisequences.
pub fn enumerate_distribution(
    field: &Field,
    m: usize,
    n: usize,
    budget: u64,
) -> Result<DistributionTable> {
    let q = field.q();
    let states = state_space(q, m, n);
    if states > BigUint::from(budget) {
        return Err(Error::BudgetExceeded {
            q,
            m,
            n,
            states: states.to_string(),
            budget,
        });
    }
    let total = states.to_u64().expect("within budget, fits u64");
    let nchunks = total.min(512).max(1);
    let chunk = total / nchunks + 1;
    let merged = (0..nchunks)
        .into_par_iter()
        .map(|c| {
            let a = c * chunk;
            let b = ((c + 1) * chunk).min(total);
            enumerate_range(field, m, n, a.min(total), b)
        })
        .reduce(
            || vec![0u64; n + 1],
            |mut acc, part| {
                for (a, p) in acc.iter_mut().zip(&part) {
                    *a += p;
                }
                acc
            },
        );
    Ok(DistributionTable {
        q,
        m,
        n,
        counts: merged.into_iter().map(BigUint::from).collect(),
    })
}

impl DistributionTable {
    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }
}

/// E = q^(-nm) * sum_L L * N(L), exactly.
pub fn expectation(t: &DistributionTable) -> ExpectationRecord {
    let mut num = BigUint::zero();
    for (l, c) in t.counts.iter().enumerate() {
        num += c * BigUint::from(l);
    }
    let e_exact = BigRational::new(
        BigInt::from(num),
        BigInt::from(state_space(t.q, t.m, t.n)),
    );
    let ceil_term = center_term(t.m, t.n);
    let residual = &e_exact - BigRational::from(BigInt::from(ceil_term));
    ExpectationRecord {
        q: t.q,
        m: t.m,
        n: t.n,
        e_exact,
        ceil_term,
        residual,
    }
}

/// Re-indexes counts by deviation delta = L - center.
pub fn deviation_table(t: &DistributionTable) -> DeviationTable {
    let center = center_term(t.m, t.n) as i64;
    let zcounts = t
        .counts
        .iter()
        .enumerate()
        .map(|(l, c)| (l as i64 - center, c.clone()))
        .collect();
    DeviationTable {
        q: t.q,
        m: t.m,
        n: t.n,
        center,
        zcounts,
    }
}

/// Verifies E = ceil(mn/(m+1)) + q^(-nm) * sum_delta delta * Z(delta),
/// in exact rational arithmetic.
pub fn expectation_identity_check(t: &DistributionTable) -> bool {
    let e = expectation(t);
    let dev = deviation_table(t);
    let mut corr = BigInt::zero();
    for (delta, z) in &dev.zcounts {
        corr += BigInt::from(*delta) * BigInt::from(z.clone());
    }
    let rhs = BigRational::from(BigInt::from(e.ceil_term))
        + BigRational::new(corr, BigInt::from(state_space(t.q, t.m, t.n)));
    rhs == e.e_exact
}

/// N(L) <= q^((m+1)L) for every L, exact comparison.
pub fn lemma2_check(t: &DistributionTable) -> bool {
    let q = BigUint::from(t.q);
    t.counts
        .iter()
        .enumerate()
        .all(|(l, c)| *c <= q.pow(((t.m + 1) * l) as u32))
}

/// Fits the minimal constants realizing the combined bound on N(L) and
/// the deviation bound on Z(delta).
pub fn fit_bounds(t: &DistributionTable) -> BoundFitReport {
    let qn = BigInt::from(state_space(t.q, t.m, t.n));
    let qbig = BigInt::from(t.q);
    let mn = (t.m * t.n) as i64;

    // C = max_L N(L) * q^(|(m+1)L - mn|) / q^(nm)
    let mut c_combined = BigRational::zero();
    for (l, c) in t.counts.iter().enumerate() {
        let expo = ((t.m as i64 + 1) * l as i64 - mn).unsigned_abs() as u32;
        let cand = BigRational::new(BigInt::from(c.clone()) * qbig.pow(expo), qn.clone());
        if cand > c_combined {
            c_combined = cand;
        }
    }

    // C = max_delta Z(delta) * q^((m+1)|delta|) / q^(nm)
    let dev = deviation_table(t);
    let mut c_zdelta = BigRational::zero();
    for (delta, z) in &dev.zcounts {
        let expo = ((t.m as i64 + 1) * delta.abs()) as u32;
        let cand = BigRational::new(BigInt::from(z.clone()) * qbig.pow(expo), qn.clone());
        if cand > c_zdelta {
            c_zdelta = cand;
        }
    }

    BoundFitReport {
        q: t.q,
        m: t.m,
        n: t.n,
        c_lemma2_ok: lemma2_check(t),
        c_combined,
        c_zdelta,
    }
}

/// SplitMix64 finalizer; decorrelates the per-sample stream keys.
fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Draws the multisequence for sample index `i`; keyed by (seed, i) only,
/// so the stream is independent of worker scheduling.
fn sample_complexity(field: &Field, m: usize, n: usize, seed: u64, i: u64) -> usize {
    let key = splitmix64(seed ^ splitmix64(i.wrapping_add(1)));
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    let q = field.q() as u32;
    let data: Vec<u8> = (0..m * n).map(|_| rng.gen_range(0..q) as u8).collect();
    joint_complexity_raw(field, n, &data)
}

/// Monte Carlo estimate of E over `samples` uniform draws.
///
/// Mean and stderr are computed from exact integer sums of L and L^2, so
/// the result is bitwise reproducible for a given (parameters, seed,
/// samples) triple regardless of parallelism.
pub fn mc_estimate(field: &Field, m: usize, n: usize, samples: u64, seed: u64) -> MCEstimate {
    assert!(samples >= 2, "mc_estimate requires samples >= 2");
    let (sum, sumsq) = (0..samples)
        .into_par_iter()
        .map(|i| {
            let l = sample_complexity(field, m, n, seed, i) as u128;
            (l, l * l)
        })
        .reduce(|| (0u128, 0u128), |a, b| (a.0 + b.0, a.1 + b.1));
    let ns = samples as f64;
    let mean = sum as f64 / ns;
    // sample variance: (sum(L^2) - sum(L)^2 / n) / (n - 1)
    let var = ((sumsq as f64) - (sum as f64) * (sum as f64) / ns) / (ns - 1.0);
    let stderr = if var > 0.0 { (var / ns).sqrt() } else { 0.0 };
    MCEstimate {
        q: field.q(),
        m,
        n,
        samples,
        seed,
        mean,
        stderr,
    }
}
