//! Verification suites over the exhaustive desk-scale grid.
//!
//! Each check returns Ok(()) or a message carrying the first
//! counterexample with full parameters. The thresholds here were
//! computed once from exhaustive oracle runs and are frozen as
//! regression values.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::sync::Arc;

use crate::census::{self, BoundFitReport, DistributionTable, ExpectationRecord};
use crate::error::Result;
use crate::field::Field;
use crate::lfsr::{generates, jlc_fast, jlc_oracle, Multisequence};
use crate::polytope;

/// The exhaustive census grid: (q, m, n_max), n running 1..=n_max.
pub const EXHAUSTIVE_GRID: &[(usize, usize, usize)] = &[
    (2, 1, 14),
    (2, 2, 9),
    (2, 3, 6),
    (3, 1, 8),
    (3, 2, 5),
];

/// |E - n/2| cap for the q=2, m=1 regression.
pub fn rueppel_cap() -> BigRational {
    BigRational::one()
}

/// Cap on |E - ceil(mn/(m+1))| across the grid, and the window half-width
/// for the conjecture check.
pub fn residual_cap() -> BigRational {
    BigRational::new(3.into(), 2.into())
}

/// Second-half max may exceed first-half max by at most this factor.
pub fn ratio_cap() -> BigRational {
    BigRational::new(5.into(), 4.into())
}

pub struct GridCell {
    pub q: usize,
    pub m: usize,
    pub n: usize,
    pub dist: DistributionTable,
    pub exp: ExpectationRecord,
    pub bounds: BoundFitReport,
}

/// Runs the full exhaustive grid.
pub fn run_grid(budget: u64) -> Result<Vec<GridCell>> {
    let mut cells = Vec::new();
    for &(q, m, nmax) in EXHAUSTIVE_GRID {
        let f = Field::new(q)?;
        for n in 1..=nmax {
            let dist = census::enumerate_distribution(&f, m, n, budget)?;
            let exp = census::expectation(&dist);
            let bounds = census::fit_bounds(&dist);
            cells.push(GridCell {
                q,
                m,
                n,
                dist,
                exp,
                bounds,
            });
        }
    }
    Ok(cells)
}

/// Criterion 1: sum_L N(L) = q^(nm) exactly on every cell.
pub fn check_mass(cells: &[GridCell]) -> std::result::Result<(), String> {
    for c in cells {
        let want = census::state_space(c.q, c.m, c.n);
        let got = c.dist.total();
        if got != want {
            return Err(format!(
                "mass violation at q={} m={} n={}: sum N = {got}, q^(nm) = {want}",
                c.q, c.m, c.n
            ));
        }
    }
    Ok(())
}

/// Criterion 2: |E - n/2| <= 1 for q=2, m=1, n=1..14.
pub fn check_rueppel(cells: &[GridCell]) -> std::result::Result<(), String> {
    let cap = rueppel_cap();
    for c in cells.iter().filter(|c| c.q == 2 && c.m == 1) {
        let half_n = BigRational::new(BigInt::from(c.n), 2.into());
        let dev = (&c.exp.e_exact - half_n).abs();
        if dev > cap {
            return Err(format!(
                "Rueppel violation at n={}: |E - n/2| = {dev} > {cap}",
                c.n
            ));
        }
    }
    Ok(())
}

fn per_qm_half_maxima<F>(cells: &[GridCell], value: F) -> Vec<(usize, usize, BigRational, BigRational)>
where
    F: Fn(&GridCell) -> BigRational,
{
    let mut out = Vec::new();
    for &(q, m, nmax) in EXHAUSTIVE_GRID {
        let split = (nmax + 1) / 2;
        let mut first = BigRational::zero();
        let mut second = BigRational::zero();
        for c in cells.iter().filter(|c| c.q == q && c.m == m) {
            let v = value(c);
            let slot = if c.n <= split { &mut first } else { &mut second };
            if v > *slot {
                *slot = v;
            }
        }
        out.push((q, m, first, second));
    }
    out
}

/// Criterion 3: |E - ceil(mn/(m+1))| <= 3/2 everywhere, and the per-(q,m)
/// second-half maximum of the residual does not exceed the first-half
/// maximum by more than 25%.
pub fn check_residual_bounded(cells: &[GridCell]) -> std::result::Result<(), String> {
    let cap = residual_cap();
    for c in cells {
        let dev = c.exp.residual.abs();
        if dev > cap {
            return Err(format!(
                "residual violation at q={} m={} n={}: |E - ceil| = {dev} > {cap}",
                c.q, c.m, c.n
            ));
        }
    }
    for (q, m, first, second) in per_qm_half_maxima(cells, |c| c.exp.residual.abs()) {
        if second > &first * ratio_cap() {
            return Err(format!(
                "residual growth at q={q} m={m}: second-half max {second} > 1.25 * first-half max {first}"
            ));
        }
    }
    Ok(())
}

/// Criterion 4: ceil - 3/2 <= E <= ceil + 3/2 on every cell.
pub fn check_conjecture_window(cells: &[GridCell]) -> std::result::Result<(), String> {
    let w = residual_cap();
    for c in cells {
        if c.exp.residual.abs() > w {
            return Err(format!(
                "window violation at q={} m={} n={}: E = {} vs ceil = {} (residual {})",
                c.q,
                c.m,
                c.n,
                c.exp.e_exact,
                c.exp.ceil_term,
                c.exp.residual
            ));
        }
    }
    Ok(())
}

/// Criterion 5: N(L) <= q^((m+1)L) on every cell.
pub fn check_lemma2(cells: &[GridCell]) -> std::result::Result<(), String> {
    for c in cells {
        if !census::lemma2_check(&c.dist) {
            let qb = num_bigint::BigUint::from(c.q);
            let bad = c
                .dist
                .counts
                .iter()
                .enumerate()
                .find(|(l, cnt)| **cnt > qb.pow(((c.m + 1) * l) as u32))
                .unwrap();
            return Err(format!(
                "Lemma 2 violation at q={} m={} n={} L={}: N = {}",
                c.q, c.m, c.n, bad.0, bad.1
            ));
        }
    }
    Ok(())
}

/// Criterion 6: the fitted deviation constant is finite on every cell and
/// per-(q,m) second-half max <= 1.25 * first-half max.
pub fn check_zdelta_constants(cells: &[GridCell]) -> std::result::Result<(), String> {
    for (q, m, first, second) in per_qm_half_maxima(cells, |c| c.bounds.c_zdelta.clone()) {
        if second > &first * ratio_cap() {
            return Err(format!(
                "c_zdelta growth at q={q} m={m}: second-half max {second} > 1.25 * first-half max {first}"
            ));
        }
    }
    Ok(())
}

/// Grid half of criterion 9's companion: the expectation identity holds
/// exactly on every cell.
pub fn check_expectation_identity(cells: &[GridCell]) -> std::result::Result<(), String> {
    for c in cells {
        if !census::expectation_identity_check(&c.dist) {
            return Err(format!(
                "expectation identity fails at q={} m={} n={}",
                c.q, c.m, c.n
            ));
        }
    }
    Ok(())
}

/// Criterion 7: jlc_fast == jlc_oracle exhaustively for q=2, m <= 2,
/// n <= 6, and on 10^4 seeded random cases over q in {2,3,4,5}, m <= 4,
/// n <= 32.
pub fn check_oracle_equivalence(seed: u64, random_cases: u64) -> std::result::Result<(), String> {
    let f2 = Arc::new(Field::new(2).map_err(|e| e.to_string())?);
    for m in 1..=2usize {
        for n in 1..=6usize {
            let total = 1u64 << (m * n);
            let bad = (0..total).into_par_iter().find_map_first(|idx| {
                let data: Vec<u8> = (0..m * n).map(|b| ((idx >> b) & 1) as u8).collect();
                let t = Multisequence::new(f2.clone(), m, n, data).unwrap();
                let oracle = jlc_oracle(&t);
                let (fast, w) = jlc_fast(&t);
                if fast != oracle || !generates(&w, &t) {
                    Some(format!(
                        "oracle mismatch at q=2 m={m} n={n} index={idx}: fast={fast} oracle={oracle}"
                    ))
                } else {
                    None
                }
            });
            if let Some(msg) = bad {
                return Err(msg);
            }
        }
    }

    let fields: Vec<Arc<Field>> = [2usize, 3, 4, 5]
        .iter()
        .map(|&q| Arc::new(Field::new(q).unwrap()))
        .collect();
    let bad = (0..random_cases).into_par_iter().find_map_first(|i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i));
        let f = fields[rng.gen_range(0..fields.len())].clone();
        let q = f.q();
        let m = rng.gen_range(1..=4usize);
        let n = rng.gen_range(1..=32usize);
        let data: Vec<u8> = (0..m * n).map(|_| rng.gen_range(0..q) as u8).collect();
        let t = Multisequence::new(f, m, n, data).unwrap();
        let oracle = jlc_oracle(&t);
        let (fast, w) = jlc_fast(&t);
        if fast != oracle || !generates(&w, &t) {
            Some(format!(
                "oracle mismatch at random case {i} (q={q} m={m} n={n}): fast={fast} oracle={oracle}"
            ))
        } else {
            None
        }
    });
    match bad {
        Some(msg) => Err(msg),
        None => Ok(()),
    }
}

/// Criterion 8 without the box containment: for m <= 5, L <= 25, all H:
/// rho_H <= M_H <= (H+1)^m, sum_H rho_H = |P(m,L)|, rho off-parity is
/// zero, and the functional maximum is ((m-1)L, x^m), unique among
/// vertices for L >= 1.
pub fn check_polytope_suite(m_max: usize, l_max: u64) -> std::result::Result<(), String> {
    for m in 1..=m_max {
        for l in 0..=l_max {
            let hmax = (m as u64 - 1) * l;
            let psize = polytope::enumerate_partitions(m, l).len() as u64;
            let mut rho_sum = 0u64;
            for h in 0..=hmax {
                let r = polytope::rho(m, l, h);
                rho_sum += r;
                if !polytope::lemma4_check(m, l, h) {
                    return Err(format!(
                        "Lemma 4 violation at m={m} L={l} H={h}: rho={r} M={} bound={}",
                        polytope::count_lattice_points(m, l, h),
                        (h + 1).pow(m as u32)
                    ));
                }
                if (h % 2) != (hmax % 2) && r != 0 {
                    return Err(format!("off-parity rho nonzero at m={m} L={l} H={h}: {r}"));
                }
            }
            if rho_sum != psize {
                return Err(format!(
                    "rho mass violation at m={m} L={l}: sum rho = {rho_sum}, |P| = {psize}"
                ));
            }
            let (v, argmax) = polytope::functional_max(m, l);
            if v != hmax || polytope::functional_rational(&argmax) != BigRational::from(BigInt::from(v)) {
                return Err(format!("functional_max wrong at m={m} L={l}"));
            }
            if l >= 1 {
                for nu in 1..m {
                    let fv = polytope::functional_rational(&polytope::simplex_vertex(m, l, nu));
                    if fv >= BigRational::from(BigInt::from(v)) {
                        return Err(format!(
                            "functional max not unique at m={m} L={l}: vertex nu={nu}"
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

/// The box-containment clause of criterion 8, as stated: every integer
/// point of Omega_H lies in [L/m - H, L/m]^m.
pub fn check_polytope_box(m_max: usize, l_max: u64) -> std::result::Result<(), String> {
    for m in 1..=m_max {
        for l in 0..=l_max {
            let hmax = (m as u64 - 1) * l;
            for h in 0..=hmax {
                let floor_f = (m as u64 - 1) * l - h;
                let lo = BigRational::new(BigInt::from(l), BigInt::from(m))
                    - BigRational::from(BigInt::from(h));
                let hi = BigRational::new(BigInt::from(l), BigInt::from(m));
                for p in polytope::enumerate_partitions(m, l) {
                    if polytope::functional(&p) < floor_f {
                        continue;
                    }
                    for &coord in p.parts() {
                        let c = BigRational::from(BigInt::from(coord));
                        if c < lo || c > hi {
                            return Err(format!(
                                "box violation at m={m} L={l} H={h}: point {:?} has coordinate {coord} outside [{lo}, {hi}]",
                                p.parts()
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Criterion 9: formula-(a) sum identity on seeded random tuples with
/// q in {2,3}, m <= 5, L <= n <= 40.
pub fn check_sum_identity_random(seed: u64, tuples: u64) -> std::result::Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..tuples {
        let q = if rng.gen_bool(0.5) { 2u64 } else { 3 };
        let m = rng.gen_range(1..=5usize);
        let n = rng.gen_range(1..=40u64);
        let l = rng.gen_range(0..=n);
        if !polytope::sum_identity_check(q, m, n, l) {
            return Err(format!(
                "sum identity violation at tuple {i}: q={q} m={m} n={n} L={l}"
            ));
        }
    }
    Ok(())
}

/// Criterion 10: series brackets with rigorous tails.
pub fn check_series() -> std::result::Result<(), String> {
    let eps = BigRational::new(BigInt::one(), BigInt::from(10u64).pow(9));
    let known = [
        (2u64, 1usize, BigRational::from(BigInt::from(4))),
        (4, 1, BigRational::new(16.into(), 9.into())),
    ];
    for (q, m, exact) in known {
        let (lo, hi) = polytope::series_c1(q, m, &eps);
        if !(lo <= exact && exact <= hi) {
            return Err(format!("series bracket misses S({q},{m}) = {exact}: [{lo}, {hi}]"));
        }
        if &hi - &lo > eps {
            return Err(format!("series bracket too wide for S({q},{m})"));
        }
    }
    for q in [2u64, 3] {
        for m in 1..=4usize {
            let (lo, hi) = polytope::series_c1(q, m, &eps);
            if &hi - &lo > eps {
                return Err(format!("series bracket wider than eps for S({q},{m})"));
            }
            if lo > hi {
                return Err(format!("inverted bracket for S({q},{m})"));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polytope_suite_small() {
        check_polytope_suite(4, 10).unwrap();
    }

    #[test]
    fn series_suite() {
        check_series().unwrap();
    }

    #[test]
    fn sum_identity_small() {
        check_sum_identity_random(5, 10).unwrap();
    }

    #[test]
    fn box_containment_has_known_counterexample() {
        // (m=2, L=3, H=3): the point (3, 0) is in Omega_H but its first
        // coordinate 3 exceeds L/m = 3/2
        let err = check_polytope_box(2, 3).unwrap_err();
        assert!(err.contains("box violation"), "{err}");
    }
}
