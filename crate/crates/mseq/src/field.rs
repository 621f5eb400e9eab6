//! Table-driven arithmetic in F_q for prime powers q with 2 <= q <= 256.
//!
//! An element is an integer in `0..q`. For extension fields (q = p^e with
//! e > 1) the integer is read as a base-p digit vector: value `v` encodes
//! the polynomial `d_0 + d_1 x + ... + d_{e-1} x^{e-1}` where the `d_i`
//! are the base-p digits of `v`, low digit = constant term. This encoding
//! is part of the on-disk format contract of the CLI.
//!
//! All four operation tables (add, mul, neg, inv) are precomputed at
//! construction, so the enumeration inner loops pay one lookup per field
//! operation regardless of p and e.

use crate::error::{Error, Result};

/// Largest supported field cardinality (one element per byte).
pub const MAX_Q: usize = 256;

/// Cardinalities for which a built-in default modulus is shipped.
/// For each of these, `Field::new` selects the monic irreducible of
/// degree e over F_p with the smallest integer encoding (base-p digits,
/// constant term in the low digit).
pub const EXTENSION_Q: [usize; 14] = [4, 8, 9, 16, 25, 27, 32, 49, 64, 81, 125, 128, 243, 256];

#[derive(Clone)]
pub struct Field {
    q: usize,
    p: usize,
    e: usize,
    /// Monic irreducible of degree e, coefficients low-to-high (length e+1).
    /// Empty for prime fields.
    modulus: Vec<u8>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl std::fmt::Debug for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Field")
            .field("q", &self.q)
            .field("p", &self.p)
            .field("e", &self.e)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl Field {
    /// Builds F_q with the default modulus (smallest-encoding monic irreducible).
    pub fn new(q: usize) -> Result<Field> {
        Self::build(q, None)
    }

    /// Builds F_q with an explicit modulus, given as base-p coefficient
    /// digits low-to-high, length e+1, monic.
    pub fn with_modulus(q: usize, modulus: &[u8]) -> Result<Field> {
        Self::build(q, Some(modulus))
    }

    fn build(q: usize, modulus_override: Option<&[u8]>) -> Result<Field> {
        if !(2..=MAX_Q).contains(&q) {
            return Err(Error::NotPrimePower(q as u64));
        }
        let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q as u64))?;

        let modulus = if e == 1 {
            Vec::new()
        } else {
            match modulus_override {
                Some(m) => {
                    let ok = m.len() == e + 1
                        && m[e] == 1
                        && m.iter().all(|&d| (d as usize) < p)
                        && is_irreducible(m, p);
                    if !ok {
                        return Err(Error::ReducibleModulus { p, degree: e });
                    }
                    m.to_vec()
                }
                None => default_modulus(p, e),
            }
        };

        let mut f = Field {
            q,
            p,
            e,
            modulus,
            add: vec![0; q * q],
            mul: vec![0; q * q],
            neg: vec![0; q],
            inv: vec![0; q],
        };
        f.fill_tables();
        Ok(f)
    }

    fn fill_tables(&mut self) {
        let q = self.q;
        let p = self.p;
        for a in 0..q {
            for b in 0..q {
                let (s, m) = if self.e == 1 {
                    (((a + b) % p) as u8, ((a * b) % p) as u8)
                } else {
                    let da = digits(a, p, self.e);
                    let db = digits(b, p, self.e);
                    let sum: Vec<u8> = da
                        .iter()
                        .zip(&db)
                        .map(|(&x, &y)| ((x as usize + y as usize) % p) as u8)
                        .collect();
                    let mut prod = poly_mul(&da, &db, p);
                    poly_reduce(&mut prod, &self.modulus, p);
                    (undigits(&sum, p), undigits(&prod, p))
                };
                self.add[a * q + b] = s;
                self.mul[a * q + b] = m;
            }
        }
        for a in 0..q {
            // neg: the unique b with a + b = 0
            for b in 0..q {
                if self.add[a * q + b] == 0 {
                    self.neg[a] = b as u8;
                    break;
                }
            }
            if a != 0 {
                for b in 1..q {
                    if self.mul[a * q + b] == 1 {
                        self.inv[a] = b as u8;
                        break;
                    }
                }
            }
        }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn e(&self) -> usize {
        self.e
    }

    /// Modulus digits low-to-high (empty for prime fields).
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: u8) -> Result<u8> {
        if a == 0 {
            return Err(Error::DivisionByZero { q: self.q });
        }
        Ok(self.inv[a as usize])
    }

    /// Inverse without the zero check; panics in debug builds on zero.
    #[inline]
    pub(crate) fn inv_unchecked(&self, a: u8) -> u8 {
        debug_assert_ne!(a, 0);
        self.inv[a as usize]
    }
}

/// Decomposes q = p^e with p prime, or returns None.
pub fn prime_power(q: usize) -> Option<(usize, usize)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut rest = q;
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            return if rest == 1 { Some((p, e)) } else { None };
        }
        p += 1;
    }
    Some((q, 1))
}

fn digits(mut v: usize, p: usize, e: usize) -> Vec<u8> {
    let mut d = vec![0u8; e];
    for di in d.iter_mut() {
        *di = (v % p) as u8;
        v /= p;
    }
    d
}

fn undigits(d: &[u8], p: usize) -> u8 {
    let mut v = 0usize;
    for &di in d.iter().rev() {
        v = v * p + di as usize;
    }
    v as u8
}

fn poly_mul(a: &[u8], b: &[u8], p: usize) -> Vec<u8> {
    let mut out = vec![0u8; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as usize + ai as usize * bj as usize) % p) as u8;
        }
    }
    out
}

fn poly_deg(a: &[u8]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

/// Reduces `a` modulo the monic polynomial `m`, in place, then truncates
/// to deg(m) coefficients.
fn poly_reduce(a: &mut Vec<u8>, m: &[u8], p: usize) {
    let dm = m.len() - 1;
    while let Some(da) = poly_deg(a) {
        if da < dm {
            break;
        }
        let lead = a[da] as usize;
        let shift = da - dm;
        for (k, &mk) in m.iter().enumerate() {
            let t = (lead * mk as usize) % p;
            let idx = shift + k;
            a[idx] = ((a[idx] as usize + p - t) % p) as u8;
        }
    }
    a.resize(dm, 0);
}

/// Remainder of `a` divided by monic `b` over F_p.
fn poly_rem(a: &[u8], b: &[u8], p: usize) -> Vec<u8> {
    let mut r = a.to_vec();
    let db = poly_deg(b).expect("divisor must be nonzero");
    while let Some(dr) = poly_deg(&r) {
        if dr < db {
            break;
        }
        // make b monic at its lead: lead(b)^-1 mod p
        let lb = b[db] as usize;
        let lb_inv = mod_inv(lb, p);
        let factor = (r[dr] as usize * lb_inv) % p;
        let shift = dr - db;
        for (k, &bk) in b.iter().take(db + 1).enumerate() {
            let t = (factor * bk as usize) % p;
            let idx = shift + k;
            r[idx] = ((r[idx] as usize + p - t) % p) as u8;
        }
    }
    r
}

fn mod_inv(a: usize, p: usize) -> usize {
    // p is a small prime; Fermat
    let mut r = 1usize;
    let mut base = a % p;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            r = r * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    r
}

/// Irreducibility by trial division against every monic polynomial of
/// degree 1..=deg/2 over F_p.
pub fn is_irreducible(m: &[u8], p: usize) -> bool {
    let deg = match poly_deg(m) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        // enumerate monic polynomials of degree d: p^d choices of lower coeffs
        let count = p.pow(d as u32);
        for c in 0..count {
            let mut div = digits(c, p, d);
            div.push(1);
            let r = poly_rem(m, &div, p);
            if poly_deg(&r).is_none() {
                return false;
            }
        }
    }
    true
}

/// The monic irreducible of degree e over F_p with the smallest integer
/// encoding (lower coefficients read as a base-p number).
fn default_modulus(p: usize, e: usize) -> Vec<u8> {
    let count = p.pow(e as u32);
    for c in 0..count {
        let mut m = digits(c, p, e);
        m.push(1);
        if is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("an irreducible of every degree exists over every prime field")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prime_powers_up_to(max: usize) -> Vec<usize> {
        (2..=max).filter(|&q| prime_power(q).is_some()).collect()
    }

    #[test]
    fn rejects_non_prime_powers() {
        for q in [6, 10, 12, 100] {
            assert!(matches!(Field::new(q), Err(Error::NotPrimePower(_))));
        }
        assert!(Field::new(1).is_err());
        assert!(Field::new(257).is_err());
    }

    #[test]
    fn spec_decompositions() {
        let f2 = Field::new(2).unwrap();
        assert_eq!((f2.p(), f2.e()), (2, 1));
        let f4 = Field::new(4).unwrap();
        assert_eq!((f4.p(), f4.e()), (2, 2));
        // x^2 + x + 1
        assert_eq!(f4.modulus(), &[1, 1, 1]);
    }

    #[test]
    fn default_moduli_are_the_expected_ones() {
        // spot checks against the documented table
        assert_eq!(Field::new(8).unwrap().modulus(), &[1, 1, 0, 1]); // x^3+x+1
        assert_eq!(Field::new(9).unwrap().modulus(), &[1, 0, 1]); // x^2+1
        assert_eq!(Field::new(16).unwrap().modulus(), &[1, 1, 0, 0, 1]); // x^4+x+1
        assert_eq!(Field::new(25).unwrap().modulus(), &[2, 0, 1]); // x^2+2
        assert_eq!(Field::new(49).unwrap().modulus(), &[1, 0, 1]); // x^2+1
        for &q in EXTENSION_Q.iter() {
            let f = Field::new(q).unwrap();
            assert!(is_irreducible(f.modulus(), f.p()));
        }
    }

    #[test]
    fn rejects_reducible_override() {
        // x^2 + 1 = (x+1)^2 over F_2
        assert!(matches!(
            Field::with_modulus(4, &[1, 0, 1]),
            Err(Error::ReducibleModulus { .. })
        ));
        // wrong length
        assert!(Field::with_modulus(4, &[1, 1]).is_err());
        // not monic
        assert!(Field::with_modulus(9, &[1, 0, 2]).is_err());
    }

    #[test]
    fn accepts_alternative_irreducible() {
        // x^2 + x + 2 over F_3
        let f = Field::with_modulus(9, &[2, 1, 1]).unwrap();
        assert_eq!(f.modulus(), &[2, 1, 1]);
    }

    #[test]
    fn spec_arithmetic_examples() {
        let f2 = Field::new(2).unwrap();
        assert_eq!(f2.add(1, 1), 0);
        let f5 = Field::new(5).unwrap();
        assert_eq!(f5.inv(2).unwrap(), 3);
        // F_4: x * x = x + 1 under x^2 + x + 1; x encodes as 2, x+1 as 3
        let f4 = Field::new(4).unwrap();
        assert_eq!(f4.mul(2, 2), 3);
        assert!(matches!(
            f4.inv(0),
            Err(Error::DivisionByZero { q: 4 })
        ));
    }

    #[test]
    fn field_axioms_exhaustive_small_q() {
        for q in prime_powers_up_to(64) {
            let f = Field::new(q).unwrap();
            let els: Vec<u8> = (0..q as u16).map(|v| v as u8).collect();
            for &a in &els {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    let ai = f.inv(a).unwrap();
                    assert_eq!(f.mul(a, ai), 1);
                    assert_eq!(f.inv(ai).unwrap(), a);
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &els {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(
                            f.mul(a, f.add(b, c)),
                            f.add(f.mul(a, b), f.mul(a, c))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn fermat_little_exhaustive_small_q() {
        for q in prime_powers_up_to(64) {
            let f = Field::new(q).unwrap();
            for a in 1..q {
                let mut acc = 1u8;
                for _ in 0..q - 1 {
                    acc = f.mul(acc, a as u8);
                }
                assert_eq!(acc, 1, "a^(q-1) != 1 for a={a} in F_{q}");
            }
        }
    }

    #[test]
    fn large_fields_construct() {
        for q in [81, 125, 128, 243, 256] {
            let f = Field::new(q).unwrap();
            // sanity on a few inverses
            for a in [1usize, 2, q - 1] {
                let ai = f.inv(a as u8).unwrap();
                assert_eq!(f.mul(a as u8, ai), 1);
            }
        }
    }
}
