//! Arithmetic in a prime field `Z/pZ` with `p < 2^63`.
//!
//! Used as a fast filter: a resultant that is nonzero modulo `p` is nonzero
//! over the rationals. Reductions fail (return `None`) when a denominator is
//! divisible by `p`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{poly::UniPoly, Rational};

/// 2^61 - 1.
pub const MERSENNE_61: u64 = (1 << 61) - 1;
/// 2^31 - 1.
pub const MERSENNE_31: u64 = (1 << 31) - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub const fn new(p: u64) -> Self {
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        match self.p {
            MERSENNE_31 => self.reduce(a * b),
            MERSENNE_61 => {
                let x = a as u128 * b as u128;
                let r = (x & MERSENNE_61 as u128) as u64 + (x >> 61) as u64;
                if r >= MERSENNE_61 {
                    r - MERSENNE_61
                } else {
                    r
                }
            }
            p => ((a as u128 * b as u128) % p as u128) as u64,
        }
    }

    /// Reduces any `u64` (fast path for `2^31 - 1`).
    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        if self.p == MERSENNE_31 {
            let r = (x & MERSENNE_31) + (x >> 31);
            let r = (r & MERSENNE_31) + (r >> 31);
            if r >= MERSENNE_31 {
                r - MERSENNE_31
            } else {
                r
            }
        } else {
            x % self.p
        }
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Inverse of a nonzero element (Fermat).
    pub fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }

    pub fn from_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    pub fn from_bigint(&self, x: &BigInt) -> u64 {
        let m = x.mod_floor(&BigInt::from(self.p));
        m.to_u64().expect("reduced value fits in u64")
    }

    pub fn from_rational(&self, r: &Rational) -> Option<u64> {
        let d = self.from_bigint(r.denom());
        if d == 0 {
            return None;
        }
        Some(self.mul(self.from_bigint(r.numer()), self.inv(d)))
    }

    /// Coefficients of `p` reduced, lowest degree first (untrimmed).
    pub fn reduce_poly(&self, p: &UniPoly) -> Option<Vec<u64>> {
        p.coeffs().iter().map(|c| self.from_rational(c)).collect()
    }

    /// Determinant by Gaussian elimination; consumes the matrix.
    pub fn det(&self, mut a: Vec<Vec<u64>>) -> u64 {
        let n = a.len();
        let mut det = 1u64;
        for k in 0..n {
            let Some(piv) = (k..n).find(|&r| a[r][k] != 0) else {
                return 0;
            };
            if piv != k {
                a.swap(piv, k);
                det = self.sub(0, det);
            }
            det = self.mul(det, a[k][k]);
            let inv = self.inv(a[k][k]);
            for i in k + 1..n {
                if a[i][k] == 0 {
                    continue;
                }
                let f = self.mul(a[i][k], inv);
                for j in k..n {
                    let t = self.mul(f, a[k][j]);
                    a[i][j] = self.sub(a[i][j], t);
                }
            }
        }
        det
    }

    /// Sylvester resultant over formal degrees `m = p.len()-1`, `n = q.len()-1`.
    pub fn resultant(&self, p: &[u64], q: &[u64]) -> u64 {
        let (m, n) = (p.len() - 1, q.len() - 1);
        let size = m + n;
        if size == 0 {
            return 1;
        }
        let mut mat = vec![vec![0u64; size]; size];
        for r in 0..n {
            for (j, &c) in p.iter().rev().enumerate() {
                mat[r][r + j] = c;
            }
        }
        for r in 0..m {
            for (j, &c) in q.iter().rev().enumerate() {
                mat[n + r][r + j] = c;
            }
        }
        self.det(mat)
    }

    pub fn eval(&self, p: &[u64], x: u64) -> u64 {
        p.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }

    pub fn trim(&self, mut p: Vec<u64>) -> Vec<u64> {
        while p.last() == Some(&0) {
            p.pop();
        }
        p
    }

    /// Remainder of `a` modulo nonzero trimmed `b`.
    pub fn rem(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut r = a.to_vec();
        let db = b.len() - 1;
        let inv = self.inv(b[db]);
        while r.len() > db {
            let lead = *r.last().unwrap();
            if lead != 0 {
                let f = self.mul(lead, inv);
                let off = r.len() - 1 - db;
                for (j, &bc) in b.iter().enumerate() {
                    let t = self.mul(f, bc);
                    r[off + j] = self.sub(r[off + j], t);
                }
            }
            r.pop();
        }
        self.trim(r)
    }

    /// Monic gcd of trimmed polynomials (empty vector = zero polynomial).
    pub fn gcd(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let (mut a, mut b) = (self.trim(a.to_vec()), self.trim(b.to_vec()));
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        if let Some(&lc) = a.last() {
            let inv = self.inv(lc);
            a.iter_mut().for_each(|c| *c = self.mul(*c, inv));
        }
        a
    }

    pub fn derivative(&self, p: &[u64]) -> Vec<u64> {
        let d = p
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| self.mul(c, i as u64 % self.p))
            .collect();
        self.trim(d)
    }

    /// `p / lc(p)` for trimmed nonzero `p`.
    pub fn monic(&self, p: &[u64]) -> Option<Vec<u64>> {
        let lc = *p.last()?;
        if lc == 0 {
            return None;
        }
        let inv = self.inv(lc);
        Some(p.iter().map(|&c| self.mul(c, inv)).collect())
    }

    /// `prod q(alpha)` over the roots `alpha` of the monic polynomial `monic`,
    /// i.e. `Res(monic, q)` up to sign conventions that do not affect zeroness.
    ///
    /// Computed as the determinant of multiplication by `q` in `F_p[x]/(monic)`.
    pub fn norm(&self, monic: &[u64], q: &[u64]) -> u64 {
        let m = monic.len() - 1;
        if m == 0 {
            return 1;
        }
        let mut v = vec![0u64; m];
        // v = q mod monic
        let mut r = q.to_vec();
        while r.len() > m {
            let lead = r.pop().unwrap();
            if lead != 0 {
                let off = r.len() - m;
                for j in 0..m {
                    let t = self.mul(lead, monic[j]);
                    r[off + j] = self.sub(r[off + j], t);
                }
            }
        }
        v[..r.len()].copy_from_slice(&r);
        let mut mat = [[0u64; 4]; 4];
        if m > 4 {
            let mut full = vec![vec![0u64; m]; m];
            for k in 0..m {
                for i in 0..m {
                    full[i][k] = v[i];
                }
                self.shift_mod(&mut v, monic);
            }
            return self.det(full);
        }
        for k in 0..m {
            for i in 0..m {
                mat[i][k] = v[i];
            }
            self.shift_mod(&mut v, monic);
        }
        self.det_small(&mat, m)
    }

    /// `v <- x * v mod monic`, in place.
    fn shift_mod(&self, v: &mut [u64], monic: &[u64]) {
        let m = v.len();
        let top = v[m - 1];
        for i in (1..m).rev() {
            v[i] = self.sub(v[i - 1], self.mul(top, monic[i]));
        }
        v[0] = self.sub(0, self.mul(top, monic[0]));
    }

    fn det_small(&self, a: &[[u64; 4]; 4], m: usize) -> u64 {
        let d2 = |a0: u64, a1: u64, b0: u64, b1: u64| self.sub(self.mul(a0, b1), self.mul(a1, b0));
        match m {
            1 => a[0][0],
            2 => d2(a[0][0], a[0][1], a[1][0], a[1][1]),
            3 => {
                let t0 = self.mul(a[0][0], d2(a[1][1], a[1][2], a[2][1], a[2][2]));
                let t1 = self.mul(a[0][1], d2(a[1][0], a[1][2], a[2][0], a[2][2]));
                let t2 = self.mul(a[0][2], d2(a[1][0], a[1][1], a[2][0], a[2][1]));
                self.add(self.sub(t0, t1), t2)
            }
            _ => {
                let s = |i: usize, j: usize| d2(a[0][i], a[0][j], a[1][i], a[1][j]);
                let c = |i: usize, j: usize| d2(a[2][i], a[2][j], a[3][i], a[3][j]);
                let plus = [
                    self.mul(s(0, 1), c(2, 3)),
                    self.mul(s(0, 3), c(1, 2)),
                    self.mul(s(1, 2), c(0, 3)),
                    self.mul(s(2, 3), c(0, 1)),
                ];
                let minus = [self.mul(s(0, 2), c(1, 3)), self.mul(s(1, 3), c(0, 2))];
                let p = plus.iter().fold(0, |acc, &x| self.add(acc, x));
                minus.iter().fold(p, |acc, &x| self.sub(acc, x))
            }
        }
    }

    /// Newton interpolation through `(xs[i], ys[i])`; abscissae must be distinct.
    pub fn interpolate(&self, xs: &[u64], ys: &[u64]) -> Vec<u64> {
        let n = xs.len();
        let mut coef = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                let num = self.sub(coef[i], coef[i - 1]);
                let den = self.sub(xs[i], xs[i - j]);
                coef[i] = self.mul(num, self.inv(den));
            }
        }
        // Expand the Newton form into monomial coefficients.
        let mut out = vec![0u64; n];
        for k in (0..n).rev() {
            // out = out * (x - xs[k]) + coef[k]
            let mut next = vec![0u64; n];
            for i in 0..n {
                if out[i] == 0 {
                    continue;
                }
                if i + 1 < n {
                    next[i + 1] = self.add(next[i + 1], out[i]);
                }
                let t = self.mul(out[i], xs[k]);
                next[i] = self.sub(next[i], t);
            }
            next[0] = self.add(next[0], coef[k]);
            out = next;
        }
        self.trim(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, sylvester_resultant, UniPoly};

    const F: PrimeField = PrimeField::new(MERSENNE_61);

    #[test]
    fn rational_reduction_is_a_homomorphism() {
        let a = rat(3, 7);
        let b = rat(-5, 11);
        let (ra, rb) = (F.from_rational(&a).unwrap(), F.from_rational(&b).unwrap());
        assert_eq!(F.from_rational(&(&a * &b)).unwrap(), F.mul(ra, rb));
        assert_eq!(F.from_rational(&(&a + &b)).unwrap(), F.add(ra, rb));
        let small = PrimeField::new(7);
        assert_eq!(small.from_rational(&a), None);
    }

    #[test]
    fn modular_resultant_agrees_with_exact() {
        let p = UniPoly::new(vec![rat(1, 2), rat(-3, 5), rat(2, 1), rat(7, 3)]);
        let q = UniPoly::new(vec![rat(-4, 9), rat(1, 1), rat(5, 2)]);
        let exact = sylvester_resultant(&p, &q).unwrap();
        let m = F.resultant(&F.reduce_poly(&p).unwrap(), &F.reduce_poly(&q).unwrap());
        assert_eq!(F.from_rational(&exact).unwrap(), m);
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = vec![5u64, 0, 3, 1];
        let xs: Vec<u64> = (1..=4).collect();
        let ys: Vec<u64> = xs.iter().map(|&x| F.eval(&p, x)).collect();
        assert_eq!(F.interpolate(&xs, &ys), p);
    }

    #[test]
    fn norm_matches_sylvester_resultant() {
        let f = PrimeField::new(MERSENNE_31);
        let mut x: u64 = 12345;
        let mut next = || {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (x >> 33) % 19
        };
        for m in 1..=6usize {
            for n in 0..=5usize {
                let mut p: Vec<u64> = (0..m).map(|_| next()).collect();
                p.push(1);
                let q: Vec<u64> = (0..=n).map(|_| next()).collect();
                // Res(p, q) with p monic and formal degree n for q.
                assert_eq!(f.norm(&p, &q), f.resultant(&p, &q), "m={m} n={n}");
            }
        }
        // shared root x = 2
        let p = vec![f.from_i64(-2), 1];
        let q = vec![f.from_i64(-4), 0, 1];
        assert_eq!(f.norm(&p, &q), 0);
    }

    #[test]
    fn mersenne_fast_paths_match_generic() {
        let mut x: u64 = 0x9e37_79b9_7f4a_7c15;
        for p in [MERSENNE_31, MERSENNE_61] {
            let f = PrimeField::new(p);
            for _ in 0..1000 {
                x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let (a, b) = (x % p, (x >> 7) % p);
                assert_eq!(f.mul(a, b), ((a as u128 * b as u128) % p as u128) as u64);
            }
        }
        let f = PrimeField::new(MERSENNE_31);
        assert_eq!(f.reduce(u64::MAX), u64::MAX % MERSENNE_31);
    }

    #[test]
    fn gcd_finds_common_factor() {
        // (x-1)(x-2) and (x-1)(x+3)
        let a = vec![2, F.from_i64(-3), 1];
        let b = vec![F.from_i64(-3), 2, 1];
        assert_eq!(F.gcd(&a, &b), vec![F.from_i64(-1), 1]);
    }
}
