use num_traits::Zero;

use super::{poly::UniPoly, Rational};
use crate::error::{Error, Result};

/// Unique polynomial of degree `< points.len()` through all points (Newton form).
pub fn interpolate(points: &[(Rational, Rational)]) -> Result<UniPoly> {
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            if points[i].0 == points[j].0 {
                return Err(Error::InvalidInput(format!(
                    "repeated abscissa {}",
                    super::format_rational(&points[i].0)
                )));
            }
        }
    }
    let xs: Vec<&Rational> = points.iter().map(|p| &p.0).collect();
    let mut coef: Vec<Rational> = points.iter().map(|p| p.1.clone()).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (xs[i] - xs[i - j]);
        }
    }
    let mut out = UniPoly::zero();
    for k in (0..n).rev() {
        let linear = UniPoly::new(vec![-xs[k].clone(), Rational::from_integer(1.into())]);
        out = &(&out * &linear) + &UniPoly::constant(coef[k].clone());
    }
    if out.coeffs().iter().all(Zero::is_zero) {
        return Ok(UniPoly::zero());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn constant_through_two_points() {
        let p = interpolate(&[(int(0), int(1)), (int(1), int(1))]).unwrap();
        assert_eq!(p, UniPoly::from_ints(&[1]));
    }

    #[test]
    fn parabola() {
        let p = interpolate(&[(int(0), int(0)), (int(1), int(1)), (int(2), int(4))]).unwrap();
        assert_eq!(p, UniPoly::from_ints(&[0, 0, 1]));
    }

    #[test]
    fn repeated_abscissa_rejected() {
        let e = interpolate(&[(int(1), int(0)), (int(1), int(2))]);
        assert!(matches!(e, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn empty_input_is_zero() {
        assert!(interpolate(&[]).unwrap().is_zero());
    }

    proptest! {
        #[test]
        fn round_trip(c in prop::collection::vec((-9i64..=9, 1i64..=5), 1..=7)) {
            let p = UniPoly::new(c.iter().map(|&(n, d)| rat(n, d)).collect());
            let k = p.degree().map_or(1, |d| d + 1);
            let pts: Vec<_> = (0..k as i64).map(|i| {
                let x = rat(2 * i - 3, 3);
                let y = p.eval(&x);
                (x, y)
            }).collect();
            prop_assert_eq!(interpolate(&pts).unwrap(), p);
        }
    }
}
