//! Multisequences and their joint linear complexity.
//!
//! The joint linear complexity of an m x n multisequence T is the minimal
//! length L of a single linear recurrence
//!
//! ```text
//! s_j + c_1 s_{j-1} + ... + c_L s_{j-L} = 0   for all rows, L <= j <= n-1
//! ```
//!
//! valid simultaneously for all m component sequences. The all-zero
//! multisequence has complexity 0, and a row whose first nonzero symbol
//! sits at position j forces L >= j+1 (a shorter register initialized
//! from the leading zeros could only keep emitting zeros).
//!
//! `jlc_oracle` searches L upward from 0 and returns the first L whose
//! linear system in (c_1..c_L) is solvable; `jlc_fast` exploits that
//! feasibility is monotone in L (pad a valid recurrence with a zero
//! coefficient) and binary-searches, returning a witness polynomial.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;

/// An m x n array of F_q symbols, row i = component sequence i.
#[derive(Clone, Debug)]
pub struct Multisequence {
    field: Arc<Field>,
    m: usize,
    n: usize,
    data: Vec<u8>, // row-major
}

impl Multisequence {
    pub fn new(field: Arc<Field>, m: usize, n: usize, data: Vec<u8>) -> Result<Multisequence> {
        if m == 0 || data.len() != m * n {
            return Err(Error::ShapeMismatch { m, n });
        }
        let q = field.q() as u64;
        for (idx, &v) in data.iter().enumerate() {
            if v as u64 >= q {
                return Err(Error::SymbolOutOfRange {
                    row: idx / n,
                    pos: idx % n,
                    value: v as u64,
                    q: field.q(),
                });
            }
        }
        Ok(Multisequence { field, m, n, data })
    }

    pub fn from_rows(field: Arc<Field>, rows: &[Vec<u8>]) -> Result<Multisequence> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch { m, n });
        }
        Self::new(field, m, n, rows.concat())
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }
}

/// Normalized connection polynomial C(x) = 1 + c_1 x + ... + c_L x^L.
/// `coeffs` holds (c_1, .., c_L); the constant term is implicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionPoly {
    coeffs: Vec<u8>,
}

impl ConnectionPoly {
    pub fn new(coeffs: Vec<u8>) -> ConnectionPoly {
        ConnectionPoly { coeffs }
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[u8] {
        &self.coeffs
    }
}

impl std::fmt::Display for ConnectionPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "1")?;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                write!(f, " + {}*x^{}", c, k + 1)?;
            }
        }
        Ok(())
    }
}

/// Joint linear complexity of every prefix length 1..=n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexityProfile(pub Vec<usize>);

/// Checks the recurrence of length `coeffs.len()` on rows of length n,
/// for all positions j in [L, n).
fn recurrence_holds(f: &Field, n: usize, data: &[u8], coeffs: &[u8]) -> bool {
    let l = coeffs.len();
    let m = if n == 0 { 0 } else { data.len() / n };
    for i in 0..m {
        let row = &data[i * n..(i + 1) * n];
        for j in l..n {
            if !recurrence_holds_at(f, row, coeffs, j) {
                return false;
            }
        }
    }
    true
}

#[inline]
fn recurrence_holds_at(f: &Field, row: &[u8], coeffs: &[u8], j: usize) -> bool {
    let mut acc = row[j];
    for (k, &c) in coeffs.iter().enumerate() {
        if c != 0 {
            acc = f.add(acc, f.mul(c, row[j - 1 - k]));
        }
    }
    acc == 0
}

/// Reduced row echelon solve of an augmented system (l unknowns + rhs).
/// Returns the particular solution with free variables set to zero, or
/// None when inconsistent.
fn solve_augmented(f: &Field, rows: &mut [Vec<u8>], l: usize) -> Option<Vec<u8>> {
    let nrows = rows.len();
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut r = 0;
    for c in 0..l {
        let Some(pr) = (r..nrows).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let pinv = f.inv_unchecked(rows[r][c]);
        for v in rows[r][c..].iter_mut() {
            *v = f.mul(*v, pinv);
        }
        for i in 0..nrows {
            if i != r && rows[i][c] != 0 {
                let factor = rows[i][c];
                for k in c..=l {
                    let t = f.mul(factor, rows[r][k]);
                    rows[i][k] = f.sub(rows[i][k], t);
                }
            }
        }
        pivots.push((r, c));
        r += 1;
        if r == nrows {
            break;
        }
    }
    // rows below the last pivot have an all-zero coefficient part
    if rows[r..].iter().any(|row| row[l] != 0) {
        return None;
    }
    let mut sol = vec![0u8; l];
    for (pr, pc) in pivots {
        sol[pc] = rows[pr][l];
    }
    Some(sol)
}

/// Tests whether some length-`l` recurrence generates the m x n array,
/// returning connection coefficients when it does.
///
/// The system has one equation per (row, position j in [l, n)):
/// sum_k c_k s_{j-k} = -s_j.
pub(crate) fn feasible(f: &Field, n: usize, data: &[u8], l: usize) -> Option<Vec<u8>> {
    if l >= n {
        return Some(vec![0u8; l]);
    }
    let m = if n == 0 { 0 } else { data.len() / n };
    let mut rows: Vec<Vec<u8>> = Vec::with_capacity(m * (n - l));
    for i in 0..m {
        let row = &data[i * n..(i + 1) * n];
        for j in l..n {
            let mut eq = Vec::with_capacity(l + 1);
            for k in 1..=l {
                eq.push(row[j - k]);
            }
            eq.push(f.neg(row[j]));
            rows.push(eq);
        }
    }
    if l == 0 {
        // no unknowns: consistent iff every rhs is zero
        return if rows.iter().all(|r| r[0] == 0) {
            Some(Vec::new())
        } else {
            None
        };
    }
    solve_augmented(f, &mut rows, l)
}

/// Joint linear complexity on raw storage, by binary search over the
/// monotone feasibility predicate. Used by the census inner loop.
pub(crate) fn joint_complexity_raw(f: &Field, n: usize, data: &[u8]) -> usize {
    if n == 0 || feasible(f, n, data, 0).is_some() {
        return 0;
    }
    let mut lo = 0; // infeasible
    let mut hi = n; // feasible
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if feasible(f, n, data, mid).is_some() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Reference implementation: search L upward from 0, return the first L
/// whose system is solvable.
pub fn jlc_oracle(t: &Multisequence) -> usize {
    let f = t.field.as_ref();
    (0..=t.n)
        .find(|&l| feasible(f, t.n, &t.data, l).is_some())
        .expect("L = n is always feasible")
}

/// Fast path: identical value to `jlc_oracle`, plus a generating witness.
pub fn jlc_fast(t: &Multisequence) -> (usize, ConnectionPoly) {
    let f = t.field.as_ref();
    let l = joint_complexity_raw(f, t.n, &t.data);
    let coeffs = feasible(f, t.n, &t.data, l).expect("complexity is feasible by construction");
    (l, ConnectionPoly::new(coeffs))
}

/// Per-prefix complexity. Incremental: the complexity of a prefix never
/// decreases as the prefix grows, so each step re-checks the current
/// witness against the one new position and only searches upward on a
/// mismatch.
pub fn jlc_profile(t: &Multisequence) -> ComplexityProfile {
    let f = t.field.as_ref();
    let mut values = Vec::with_capacity(t.n);
    let mut l = 0usize;
    let mut witness: Vec<u8> = Vec::new();
    for k in 1..=t.n {
        let prefix = prefix_data(t, k);
        let new_j = k - 1;
        let still_ok = new_j < l
            || (0..t.m).all(|i| {
                recurrence_holds_at(f, &prefix[i * k..(i + 1) * k], &witness, new_j)
            });
        if !still_ok {
            // minimal L for the longer prefix is >= current l; the same l can
            // still work with a different witness, so restart the search at l
            for cand in l..=k {
                if let Some(w) = feasible(f, k, &prefix, cand) {
                    l = cand;
                    witness = w;
                    break;
                }
            }
        }
        values.push(l);
    }
    ComplexityProfile(values)
}

fn prefix_data(t: &Multisequence, k: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(t.m * k);
    for i in 0..t.m {
        out.extend_from_slice(&t.row(i)[..k]);
    }
    out
}

/// True iff the recurrence encoded by `c` holds on all rows of `t` for
/// every position j in [degree_bound, n).
pub fn generates(c: &ConnectionPoly, t: &Multisequence) -> bool {
    recurrence_holds(t.field.as_ref(), t.n, &t.data, c.coeffs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ms(q: usize, rows: &[&[u8]]) -> Multisequence {
        let f = Arc::new(Field::new(q).unwrap());
        let rows: Vec<Vec<u8>> = rows.iter().map(|r| r.to_vec()).collect();
        Multisequence::from_rows(f, &rows).unwrap()
    }

    #[test]
    fn oracle_all_zero() {
        for (m, n) in [(1, 4), (3, 5), (2, 1)] {
            let t = ms(2, &vec![&vec![0u8; n][..]; m]);
            assert_eq!(jlc_oracle(&t), 0);
        }
    }

    #[test]
    fn oracle_trailing_one_needs_full_length() {
        for n in 1..=8 {
            let mut s = vec![0u8; n];
            s[n - 1] = 1;
            let t = ms(2, &[&s]);
            assert_eq!(jlc_oracle(&t), n);
        }
    }

    #[test]
    fn oracle_two_row_example() {
        let t = ms(2, &[&[0, 1], &[1, 0]]);
        assert_eq!(jlc_oracle(&t), 2);
    }

    #[test]
    fn fast_matches_oracle_on_spec_cases() {
        for rows in [vec![vec![0u8, 0, 0, 0]], vec![vec![0, 0, 0, 1]]] {
            let f = Arc::new(Field::new(2).unwrap());
            let t = Multisequence::from_rows(f, &rows).unwrap();
            let (l, w) = jlc_fast(&t);
            assert_eq!(l, jlc_oracle(&t));
            assert!(generates(&w, &t));
        }
        let t = ms(2, &[&[1, 1, 0]]);
        let (l, _) = jlc_fast(&t);
        assert_eq!(l, 2);
    }

    #[test]
    fn profile_spec_cases() {
        let t = ms(2, &[&[1, 1, 0]]);
        assert_eq!(jlc_profile(&t).0, vec![1, 1, 2]);
        let t = ms(2, &[&[0, 0, 0, 0, 0]]);
        assert_eq!(jlc_profile(&t).0, vec![0; 5]);
        let t = ms(2, &[&[0, 1], &[1, 0]]);
        assert_eq!(jlc_profile(&t).0, vec![1, 2]);
    }

    #[test]
    fn generates_spec_cases() {
        let zero = ms(2, &[&[0, 0, 0]]);
        assert!(generates(&ConnectionPoly::new(vec![]), &zero));
        let one = ms(2, &[&[0, 1, 0]]);
        assert!(!generates(&ConnectionPoly::new(vec![]), &one));
        let ones = ms(2, &[&[1, 1, 1, 1]]);
        assert!(generates(&ConnectionPoly::new(vec![1]), &ones));
    }

    #[test]
    fn n_zero_is_degenerate() {
        let f = Arc::new(Field::new(3).unwrap());
        let t = Multisequence::new(f, 2, 0, vec![]).unwrap();
        assert_eq!(jlc_oracle(&t), 0);
        let (l, w) = jlc_fast(&t);
        assert_eq!(l, 0);
        assert_eq!(w.degree_bound(), 0);
        assert!(jlc_profile(&t).0.is_empty());
    }

    #[test]
    fn rejects_bad_symbols() {
        let f = Arc::new(Field::new(2).unwrap());
        let err = Multisequence::from_rows(f, &[vec![0, 2, 0]]).unwrap_err();
        assert!(matches!(
            err,
            Error::SymbolOutOfRange { row: 0, pos: 1, value: 2, q: 2 }
        ));
    }

    /// Every multisequence over a small exhaustive grid: fast == oracle,
    /// witness generates, and the profile ends at the complexity.
    #[test]
    fn exhaustive_agreement_small_grid() {
        let f = Arc::new(Field::new(2).unwrap());
        for m in 1..=2usize {
            for n in 1..=6usize {
                let total = 1u64 << (m * n);
                for idx in 0..total {
                    let data: Vec<u8> =
                        (0..m * n).map(|b| ((idx >> b) & 1) as u8).collect();
                    let t = Multisequence::new(f.clone(), m, n, data).unwrap();
                    let oracle = jlc_oracle(&t);
                    let (fast, w) = jlc_fast(&t);
                    assert_eq!(fast, oracle);
                    assert!(generates(&w, &t));
                    let prof = jlc_profile(&t);
                    assert_eq!(*prof.0.last().unwrap(), oracle);
                    assert!(prof.0.windows(2).all(|ab| ab[0] <= ab[1]));
                    assert!(prof.0.iter().enumerate().all(|(i, &v)| v <= i + 1));
                }
            }
        }
    }

    #[test]
    fn row_monotonicity_and_invariance() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let f3 = Arc::new(Field::new(3).unwrap());
        for _ in 0..200 {
            let m = rng.gen_range(1..=3);
            let n = rng.gen_range(1..=10);
            let rows: Vec<Vec<u8>> = (0..m)
                .map(|_| (0..n).map(|_| rng.gen_range(0..3) as u8).collect())
                .collect();
            let t = Multisequence::from_rows(f3.clone(), &rows).unwrap();
            let base = jlc_oracle(&t);

            // appending a row never decreases complexity
            let extra: Vec<u8> = (0..n).map(|_| rng.gen_range(0..3) as u8).collect();
            let mut bigger = rows.clone();
            bigger.push(extra);
            let t2 = Multisequence::from_rows(f3.clone(), &bigger).unwrap();
            assert!(jlc_oracle(&t2) >= base);

            // permuting rows leaves it unchanged
            let mut perm = rows.clone();
            perm.reverse();
            let tp = Multisequence::from_rows(f3.clone(), &perm).unwrap();
            assert_eq!(jlc_oracle(&tp), base);

            // scaling one row by a nonzero scalar leaves it unchanged
            let which = rng.gen_range(0..m);
            let scalar = rng.gen_range(1..3) as u8;
            let mut scaled = rows.clone();
            for v in scaled[which].iter_mut() {
                *v = f3.mul(*v, scalar);
            }
            let ts = Multisequence::from_rows(f3.clone(), &scaled).unwrap();
            assert_eq!(jlc_oracle(&ts), base);
        }
    }

    /// Witness minimality: no shorter connection polynomial generates T.
    #[test]
    fn witness_minimality_exhaustive() {
        let f = Arc::new(Field::new(3).unwrap());
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let n = rng.gen_range(1..=8);
            let rows: Vec<Vec<u8>> =
                vec![(0..n).map(|_| rng.gen_range(0..3) as u8).collect()];
            let t = Multisequence::from_rows(f.clone(), &rows).unwrap();
            let (l, w) = jlc_fast(&t);
            assert!(generates(&w, &t));
            if l == 0 {
                continue;
            }
            let short = l - 1;
            // all 3^short candidate coefficient vectors
            let total = 3u64.pow(short as u32);
            for enc in 0..total {
                let mut coeffs = vec![0u8; short];
                let mut v = enc;
                for c in coeffs.iter_mut() {
                    *c = (v % 3) as u8;
                    v /= 3;
                }
                assert!(!generates(&ConnectionPoly::new(coeffs), &t));
            }
        }
    }
}
