//! Sylvester resultants by fraction-free (Bareiss) elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{poly::UniPoly, Rational};
use crate::error::{Error, Result};

/// Resultant of `p` and `q` with respect to their (trimmed) degrees.
///
/// Both constant and nonzero gives 1 (empty Sylvester matrix).
pub fn sylvester_resultant(p: &UniPoly, q: &UniPoly) -> Result<Rational> {
    let (Some(m), Some(n)) = (p.degree(), q.degree()) else {
        return Err(Error::DegenerateInput("resultant with a zero polynomial"));
    };
    sylvester_resultant_formal(p, m, q, n)
}

/// Resultant over formal degrees `m >= deg p`, `n >= deg q`.
///
/// Leading zero coefficients are kept in the matrix, so the value is a
/// polynomial in the coefficients even when the true degree drops.
pub fn sylvester_resultant_formal(p: &UniPoly, m: usize, q: &UniPoly, n: usize) -> Result<Rational> {
    if p.degree().is_some_and(|d| d > m) || q.degree().is_some_and(|d| d > n) {
        return Err(Error::InvalidInput("formal degree below actual degree".into()));
    }
    if m + n == 0 {
        return Ok(Rational::one());
    }
    let (pi, dp) = integer_coeffs(p, m);
    let (qi, dq) = integer_coeffs(q, n);
    let size = m + n;
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    // Coefficients highest degree first, shifted one column per row.
    for r in 0..n {
        for (j, c) in pi.iter().rev().enumerate() {
            mat[r][r + j] = c.clone();
        }
    }
    for r in 0..m {
        for (j, c) in qi.iter().rev().enumerate() {
            mat[n + r][r + j] = c.clone();
        }
    }
    let det = bareiss_det(mat);
    let scale = dp.pow(n as u32) * dq.pow(m as u32);
    Ok(Rational::new(det, scale))
}

/// Integer coefficients `c_0..c_deg` of `den * p`, padded to `deg + 1` entries.
fn integer_coeffs(p: &UniPoly, deg: usize) -> (Vec<BigInt>, BigInt) {
    let den = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut out: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| c.numer() * (&den / c.denom()))
        .collect();
    out.resize(deg + 1, BigInt::zero());
    (out, den)
}

/// Determinant of a square integer matrix; every division is exact.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}
