//! Real-root counting and isolation by Sturm sequences.

use num_traits::{One, Signed, Zero};

use super::{poly::UniPoly, Rational};
use crate::error::{Error, Result};

/// Distinct real roots of a polynomial inside a half-open window `(lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootIsolation {
    pub count: usize,
    /// Pairwise disjoint half-open intervals `(l, r]`, one root each, ascending.
    pub intervals: Vec<(Rational, Rational)>,
}

/// Sturm chain of the square-free part of a polynomial.
#[derive(Debug, Clone)]
pub struct SturmChain {
    chain: Vec<UniPoly>,
}

impl SturmChain {
    pub fn new(p: &UniPoly) -> Result<Self> {
        let sf = p.square_free()?;
        let mut chain = vec![sf.clone(), sf.derivative()];
        while let Some(last) = chain.last() {
            if last.is_zero() || last.degree() == Some(0) {
                break;
            }
            let prev = &chain[chain.len() - 2];
            let r = prev.div_rem(last)?.1;
            chain.push(-&r);
        }
        chain.retain(|q| !q.is_zero());
        Ok(SturmChain { chain })
    }

    pub fn base(&self) -> &UniPoly {
        &self.chain[0]
    }

    /// Sign variations at `x`, zeros skipped.
    pub fn variations(&self, x: &Rational) -> usize {
        let mut last = 0i8;
        let mut v = 0;
        for q in &self.chain {
            let s = sign(&q.eval(x));
            if s != 0 {
                if last != 0 && s != last {
                    v += 1;
                }
                last = s;
            }
        }
        v
    }

    /// Number of distinct roots in `(lo, hi]`.
    pub fn count(&self, lo: &Rational, hi: &Rational) -> usize {
        if lo >= hi {
            return 0;
        }
        self.variations(lo).saturating_sub(self.variations(hi))
    }

    /// Bound `B` with every real root strictly inside `(-B, B)`.
    pub fn root_bound(&self) -> Rational {
        cauchy_bound(self.base())
    }
}

fn sign(x: &Rational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// `1 + max |a_i / a_n|`, plus one for strictness.
pub fn cauchy_bound(p: &UniPoly) -> Rational {
    let Some(lc) = p.leading() else {
        return Rational::one();
    };
    let n = p.coeffs().len() - 1;
    let m = p.coeffs()[..n]
        .iter()
        .map(|c| (c / lc).abs())
        .max()
        .unwrap_or_else(Rational::zero);
    m + Rational::from_integer(2.into())
}

/// Counts and isolates the distinct real roots of `p` in `(lo, hi]`;
/// `None` stands for an infinite bound.
pub fn sturm_real_roots(
    p: &UniPoly,
    lo: Option<&Rational>,
    hi: Option<&Rational>,
) -> Result<RootIsolation> {
    sturm_real_roots_refined(p, lo, hi, None)
}

/// As [`sturm_real_roots`], additionally bisecting each isolating interval until
/// its width is below `width`.
pub fn sturm_real_roots_refined(
    p: &UniPoly,
    lo: Option<&Rational>,
    hi: Option<&Rational>,
    width: Option<&Rational>,
) -> Result<RootIsolation> {
    if p.is_zero() {
        return Err(Error::DegenerateInput("root count of the zero polynomial"));
    }
    let chain = SturmChain::new(p)?;
    let bound = chain.root_bound();
    let lo = lo.cloned().unwrap_or_else(|| -bound.clone());
    let hi = hi.cloned().unwrap_or(bound);
    let count = chain.count(&lo, &hi);
    let mut intervals = Vec::with_capacity(count);
    isolate(&chain, lo, hi, count, &mut intervals);
    if let Some(w) = width {
        for iv in &mut intervals {
            refine(&chain, iv, w);
        }
    }
    Ok(RootIsolation { count, intervals })
}

fn isolate(
    chain: &SturmChain,
    lo: Rational,
    hi: Rational,
    count: usize,
    out: &mut Vec<(Rational, Rational)>,
) {
    match count {
        0 => {}
        1 => out.push((lo, hi)),
        _ => {
            let mid = (&lo + &hi) / Rational::from_integer(2.into());
            let left = chain.count(&lo, &mid);
            isolate(chain, lo, mid.clone(), left, out);
            isolate(chain, mid, hi, count - left, out);
        }
    }
}

/// Shrinks `(l, r]` around its single root until narrower than `width`.
pub fn refine(chain: &SturmChain, iv: &mut (Rational, Rational), width: &Rational) {
    let two = Rational::from_integer(2.into());
    while &(&iv.1 - &iv.0) >= width {
        let mid = (&iv.0 + &iv.1) / &two;
        if chain.count(&iv.0, &mid) == 1 {
            iv.1 = mid;
        } else {
            iv.0 = mid;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    #[test]
    fn two_real_roots_of_t2_minus_2() {
        let r = sturm_real_roots(&UniPoly::from_ints(&[-2, 0, 1]), None, None).unwrap();
        assert_eq!(r.count, 2);
        assert_eq!(r.intervals.len(), 2);
    }

    #[test]
    fn no_real_roots_of_t2_plus_1() {
        let r = sturm_real_roots(&UniPoly::from_ints(&[1, 0, 1]), None, None).unwrap();
        assert_eq!(r.count, 0);
        assert!(r.intervals.is_empty());
    }

    #[test]
    fn multiplicity_collapsed() {
        let p = &UniPoly::from_ints(&[-1, 1]).pow(2) * &UniPoly::from_ints(&[3, 1]);
        assert_eq!(sturm_real_roots(&p, None, None).unwrap().count, 2);
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert!(sturm_real_roots(&UniPoly::zero(), None, None).is_err());
    }

    #[test]
    fn half_open_window_includes_right_endpoint() {
        let p = UniPoly::from_ints(&[-1, 0, 1]);
        let r = sturm_real_roots(&p, Some(&int(-1)), Some(&int(1))).unwrap();
        assert_eq!(r.count, 1, "(-1, 1] holds only the root 1");
        let r = sturm_real_roots(&p, Some(&int(-2)), Some(&int(1))).unwrap();
        assert_eq!(r.count, 2);
    }

    #[test]
    fn refined_intervals_bracket_sqrt2() {
        let p = UniPoly::from_ints(&[-2, 0, 1]);
        let w = rat(1, 1 << 20);
        let r = sturm_real_roots_refined(&p, None, None, Some(&w)).unwrap();
        for (l, h) in &r.intervals {
            assert!(&(h - l) < &w);
            assert!(p.eval(l) * p.eval(h) <= int(0));
        }
        assert!(r.intervals[0].1 < r.intervals[1].0);
    }

    #[test]
    fn constant_polynomial_has_no_roots() {
        let r = sturm_real_roots(&UniPoly::from_ints(&[5]), None, None).unwrap();
        assert_eq!(r.count, 0);
    }
}
