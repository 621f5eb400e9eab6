//! Partition and lattice-point machinery for the complexity bounds.
//!
//! P(m, L) is the set of nonincreasing m-tuples of nonnegative integers
//! summing to L. On the simplex Omega = {x_1 >= ... >= x_m >= 0,
//! sum x = L} the linear functional 2 * sum (k-1) x_k has maximum
//! (m-1)L, attained only at the barycentric vertex x^m. rho_H counts
//! partitions on the slice functional = (m-1)L - H; M_H counts integer
//! points of the sub-polytope Omega_H where functional >= (m-1)L - H.
//! Vertices of the relaxed simplex Omega_H^* (x_m >= 0 dropped) are
//! exact rational convex combinations x(H, nu) of x^m and x^nu.
//!
//! Membership tests and vertex coordinates are exact rationals
//! throughout; no floating point.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A nonincreasing m-tuple (i_1, ..., i_m) of nonnegative integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    pub fn new(parts: Vec<u64>) -> Option<Partition> {
        if parts.windows(2).all(|ab| ab[0] >= ab[1]) {
            Some(Partition { parts })
        } else {
            None
        }
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn sum(&self) -> u64 {
        self.parts.iter().sum()
    }
}

/// All of P(m, L), lexicographically descending.
pub fn enumerate_partitions(m: usize, l: u64) -> Vec<Partition> {
    assert!(m >= 1);
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m);
    fn rec(out: &mut Vec<Partition>, cur: &mut Vec<u64>, slots: usize, rest: u64, max: u64) {
        if slots == 0 {
            if rest == 0 {
                out.push(Partition { parts: cur.clone() });
            }
            return;
        }
        // smallest admissible first part: the remaining slots must absorb rest
        let hi = rest.min(max);
        let lo = (rest + slots as u64 - 1) / slots as u64;
        if lo > hi {
            return;
        }
        for v in (lo..=hi).rev() {
            cur.push(v);
            rec(out, cur, slots - 1, rest - v, v);
            cur.pop();
        }
    }
    rec(&mut out, &mut cur, m, l, l);
    out
}

/// 2 * sum_{k=1..m} (k-1) * i_k
pub fn functional(p: &Partition) -> u64 {
    2 * p
        .parts
        .iter()
        .enumerate()
        .map(|(k, &v)| k as u64 * v)
        .sum::<u64>()
}

/// Number of partitions in P(m, L) on the slice functional = (m-1)L - H.
pub fn rho(m: usize, l: u64, h: u64) -> u64 {
    let target = (m as u64 - 1) * l;
    if h > target {
        return 0;
    }
    let slice = target - h;
    enumerate_partitions(m, l)
        .iter()
        .filter(|p| functional(p) == slice)
        .count() as u64
}

/// M_H: integer points of Omega_H, i.e. partitions with
/// functional >= (m-1)L - H. Enumerates P(m, L) and filters; the box is
/// never scanned.
pub fn count_lattice_points(m: usize, l: u64, h: u64) -> u64 {
    let target = (m as u64 - 1) * l;
    let floor = target.saturating_sub(h);
    enumerate_partitions(m, l)
        .iter()
        .filter(|p| functional(p) >= floor)
        .count() as u64
}

/// rho_H <= M_H <= (H+1)^m, exactly.
pub fn lemma4_check(m: usize, l: u64, h: u64) -> bool {
    let r = BigUint::from(rho(m, l, h));
    let mh = BigUint::from(count_lattice_points(m, l, h));
    let cap = BigUint::from(h + 1).pow(m as u32);
    r <= mh && mh <= cap
}

/// Exact rational vertices x(H, nu), nu = 1..=m, of Omega_H^*.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSet {
    pub m: usize,
    pub l: u64,
    pub h: u64,
    /// vertices[nu - 1] = x(H, nu)
    pub vertices: Vec<Vec<BigRational>>,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// The simplex vertex x^nu: first nu coordinates L/nu, rest zero.
pub fn simplex_vertex(m: usize, l: u64, nu: usize) -> Vec<BigRational> {
    (0..m)
        .map(|j| {
            if j < nu {
                rat(l as i64, nu as i64)
            } else {
                BigRational::zero()
            }
        })
        .collect()
}

/// Vertices of Omega_H^* via x(H, nu) = x^m (1 - t_nu) + x^nu t_nu with
/// t_nu = H / ((m - nu) L); x(H, m) = x^m.
pub fn vertices(m: usize, l: u64, h: u64) -> Result<VertexSet> {
    if l == 0 {
        return Err(Error::DegenerateSimplex);
    }
    let xm = simplex_vertex(m, l, m);
    let mut verts = Vec::with_capacity(m);
    for nu in 1..=m {
        if nu == m {
            verts.push(xm.clone());
            continue;
        }
        let t = rat(h as i64, ((m - nu) as u64 * l) as i64);
        let one_minus = BigRational::one() - &t;
        let xnu = simplex_vertex(m, l, nu);
        let v: Vec<BigRational> = xm
            .iter()
            .zip(&xnu)
            .map(|(a, b)| a * &one_minus + b * &t)
            .collect();
        verts.push(v);
    }
    Ok(VertexSet {
        m,
        l,
        h,
        vertices: verts,
    })
}

/// Evaluates 2 * sum (k-1) x_k on a rational point.
pub fn functional_rational(x: &[BigRational]) -> BigRational {
    let mut acc = BigRational::zero();
    for (k, v) in x.iter().enumerate() {
        acc += v * BigRational::from(BigInt::from(2 * k as u64));
    }
    acc
}

/// Maximum of the functional over Omega: ((m-1)L, x^m).
pub fn functional_max(m: usize, l: u64) -> (u64, Vec<BigRational>) {
    ((m as u64 - 1) * l, simplex_vertex(m, l, m))
}

/// Checks formula (a) against Lemma 3's partition sum:
/// sum over P(m,L) of q^(2 sum (k-1) i_k + 2m(n-L)) equals
/// sum over H of rho_H * q^(2mn - (m+1)L - H), as big integers.
pub fn sum_identity_check(q: u64, m: usize, n: u64, l: u64) -> bool {
    assert!(n >= l && m >= 1 && q >= 2);
    let qb = BigUint::from(q);
    let mut lhs = BigUint::zero();
    for p in enumerate_partitions(m, l) {
        let expo = functional(&p) + 2 * m as u64 * (n - l);
        lhs += qb.pow(expo as u32);
    }
    let mut rhs = BigUint::zero();
    let hmax = (m as u64 - 1) * l;
    for h in 0..=hmax {
        let r = rho(m, l, h);
        if r == 0 {
            continue;
        }
        // exponent 2mn - (m+1)L - H is >= 0 for n >= L since
        // (m+1)L + H <= (m+1)L + (m-1)L = 2mL <= 2mn
        let expo = 2 * m as u64 * n - (m as u64 + 1) * l - h;
        rhs += BigUint::from(r) * qb.pow(expo as u32);
    }
    lhs == rhs
}

/// Brackets S(q, m) = sum_{H>=0} (H+1)^m / q^H within eps.
///
/// Terms a_H have ratio a_{H+1}/a_H = ((H+2)/(H+1))^m / q, which is
/// decreasing in H; once the ratio r at the truncation point is < 1 the
/// tail is majorized by the geometric series a_{H0+1} / (1 - r).
/// Returns (lower, upper) with lower <= S <= upper and
/// upper - lower <= eps.
pub fn series_c1(q: u64, m: usize, eps: &BigRational) -> (BigRational, BigRational) {
    assert!(q >= 2 && m >= 1 && eps.is_positive());
    let term = |h: u64| -> BigRational {
        BigRational::new(
            BigInt::from(h + 1).pow(m as u32),
            BigInt::from(q).pow(h as u32),
        )
    };
    let ratio = |h: u64| -> BigRational {
        // a_{h+1} / a_h
        BigRational::new(
            BigInt::from(h + 2).pow(m as u32),
            BigInt::from(h + 1).pow(m as u32) * BigInt::from(q),
        )
    };
    let mut partial = BigRational::zero();
    let mut h = 0u64;
    loop {
        partial += term(h);
        let r = ratio(h);
        if r < BigRational::one() {
            let tail = term(h + 1) / (BigRational::one() - &r);
            if &tail <= eps {
                return (partial.clone(), partial + tail);
            }
        }
        h += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn parts(ps: &[Vec<u64>]) -> Vec<Partition> {
        ps.iter()
            .map(|p| Partition::new(p.clone()).unwrap())
            .collect()
    }

    #[test]
    fn spec_partition_examples() {
        assert_eq!(
            enumerate_partitions(2, 3),
            parts(&[vec![3, 0], vec![2, 1]])
        );
        assert_eq!(enumerate_partitions(1, 5), parts(&[vec![5]]));
        assert_eq!(enumerate_partitions(3, 0), parts(&[vec![0, 0, 0]]));
    }

    #[test]
    fn spec_functional_examples() {
        assert_eq!(functional(&Partition::new(vec![3, 0]).unwrap()), 0);
        assert_eq!(functional(&Partition::new(vec![2, 1]).unwrap()), 2);
        assert_eq!(functional(&Partition::new(vec![2, 2, 2]).unwrap()), 12);
    }

    #[test]
    fn spec_rho_examples() {
        assert_eq!(rho(2, 3, 1), 1);
        assert_eq!(rho(2, 3, 2), 0); // off parity
        assert_eq!(rho(2, 3, 3), 1);
    }

    #[test]
    fn spec_lattice_count_examples() {
        assert_eq!(count_lattice_points(2, 3, 1), 1);
        assert_eq!(count_lattice_points(2, 3, 0), 0); // x^m non-integer
        assert_eq!(count_lattice_points(2, 4, 0), 1); // x^m = (2, 2)
    }

    #[test]
    fn spec_lemma4_examples() {
        assert!(lemma4_check(2, 3, 1));
        assert!(lemma4_check(2, 4, 0));
        assert_eq!(count_lattice_points(2, 4, 0), 1);
        assert!(lemma4_check(3, 9, 2));
    }

    #[test]
    fn rho_sums_to_partition_count() {
        for m in 1..=4usize {
            for l in 0..=12u64 {
                let total: u64 = (0..=(m as u64 - 1) * l).map(|h| rho(m, l, h)).sum();
                assert_eq!(total, enumerate_partitions(m, l).len() as u64);
                // parity remark
                for h in 0..=(m as u64 - 1) * l {
                    if (h % 2) != ((m as u64 - 1) * l % 2) {
                        assert_eq!(rho(m, l, h), 0);
                    }
                }
            }
        }
    }

    #[test]
    fn m_h_monotone_and_saturates() {
        for m in 1..=4usize {
            for l in 0..=10u64 {
                let hmax = (m as u64 - 1) * l;
                let mut prev = 0;
                for h in 0..=hmax {
                    let cur = count_lattice_points(m, l, h);
                    assert!(cur >= prev);
                    prev = cur;
                }
                assert_eq!(prev.max(count_lattice_points(m, l, hmax)),
                    enumerate_partitions(m, l).len() as u64);
            }
        }
    }

    #[test]
    fn spec_vertex_examples() {
        // m=2, L=4, H=2: x(2,1) = (3, 1)
        let vs = vertices(2, 4, 2).unwrap();
        assert_eq!(vs.vertices[0], vec![rat(3, 1), rat(1, 1)]);
        assert_eq!(
            functional_rational(&vs.vertices[0]),
            rat(2, 1) // (m-1)L - H = 2
        );

        // H = 0: all vertices collapse to x^m
        let vs = vertices(3, 6, 0).unwrap();
        for v in &vs.vertices {
            assert_eq!(*v, simplex_vertex(3, 6, 3));
        }

        // m=3, L=6, H=3: convex-combination formula gives
        // x(3,2) = 1/2 (2,2,2) + 1/2 (3,3,0) = (5/2, 5/2, 1),
        // which does lie on the hyperplane functional = (m-1)L - H = 9
        let vs = vertices(3, 6, 3).unwrap();
        assert_eq!(
            vs.vertices[1],
            vec![rat(5, 2), rat(5, 2), rat(1, 1)]
        );
        assert_eq!(functional_rational(&vs.vertices[1]), rat(9, 1));
    }

    #[test]
    fn vertex_invariants() {
        for m in 1..=5usize {
            for l in [1u64, 2, 5, 9] {
                for h in 0..=(m as u64 - 1) * l {
                    let vs = vertices(m, l, h).unwrap();
                    for (i, v) in vs.vertices.iter().enumerate() {
                        let nu = i + 1;
                        // sum of coordinates is exactly L
                        let s: BigRational = v.iter().sum();
                        assert_eq!(s, rat(l as i64, 1));
                        // ordering x_1 >= ... >= x_m
                        assert!(v.windows(2).all(|ab| ab[0] >= ab[1]));
                        // hyperplane membership for nu < m, max for nu = m
                        let fv = functional_rational(v);
                        if nu < m {
                            assert_eq!(fv, rat(((m as u64 - 1) * l - h) as i64, 1));
                        } else {
                            assert_eq!(fv, rat(((m as u64 - 1) * l) as i64, 1));
                        }
                        // coordinates within [L/m - H, L/m + H]
                        let center = rat(l as i64, m as i64);
                        let hh = rat(h as i64, 1);
                        for c in v {
                            assert!((c - &center).abs() <= hh);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn degenerate_simplex_rejected() {
        assert!(matches!(vertices(3, 0, 0), Err(Error::DegenerateSimplex)));
        // counts still answer trivially at L = 0
        assert_eq!(count_lattice_points(3, 0, 0), 1);
        assert_eq!(rho(3, 0, 0), 1);
    }

    #[test]
    fn spec_functional_max_examples() {
        let (v, argmax) = functional_max(3, 6);
        assert_eq!(v, 12);
        assert_eq!(argmax, vec![rat(2, 1), rat(2, 1), rat(2, 1)]);
        // uniqueness among vertices for L >= 1
        for nu in 1..3 {
            let fv = functional_rational(&simplex_vertex(3, 6, nu));
            assert!(fv < rat(12, 1));
        }
        assert_eq!(functional_max(1, 7), (0, vec![rat(7, 1)]));
        assert_eq!(functional_max(4, 0).0, 0);
    }

    #[test]
    fn spec_sum_identity_examples() {
        // m = 1: both sides are the single term q^(2(n-L))
        assert!(sum_identity_check(5, 1, 7, 3));
        assert!(sum_identity_check(2, 2, 5, 3));
        assert!(sum_identity_check(3, 3, 4, 4));
    }

    #[test]
    fn spec_series_examples() {
        let eps = BigRational::new(1.into(), BigInt::from(10u64.pow(9)));
        let (lo, hi) = series_c1(2, 1, &eps);
        let four = BigRational::from(BigInt::from(4));
        assert!(lo <= four && four <= hi);
        assert!(&hi - &lo <= eps);

        let (lo, hi) = series_c1(4, 1, &eps);
        let exact = rat(16, 9);
        assert!(lo <= exact && exact <= hi);

        // cross-check S(2,2) against a long direct partial sum
        let (lo, hi) = series_c1(2, 2, &eps);
        let mut direct = 0f64;
        for h in 0..200u64 {
            direct += ((h + 1) as f64).powi(2) / 2f64.powi(h as i32);
        }
        let lof = lo.to_f64().unwrap();
        let hif = hi.to_f64().unwrap();
        assert!(lof <= direct + 1e-6 && direct - 1e-6 <= hif);
        // closed form: sum (H+1)^2 x^H = (1+x)/(1-x)^3 at x = 1/2 -> 12
        assert!((lof - 12.0).abs() < 1e-6 && (hif - 12.0).abs() < 1e-6);
    }
}
