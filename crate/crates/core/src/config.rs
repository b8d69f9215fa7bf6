//! Three unit circles with a finite set of orientation parameters on each.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::exact::{format_rational, int, rat, Rational};
use crate::geometry::{param_point, OrientationParam, Point};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    centers: [Point; 3],
    thetas: [Vec<OrientationParam>; 3],
}

impl Configuration {
    /// Rejects repeated parameters within a list.
    pub fn new(centers: [Point; 3], thetas: [Vec<OrientationParam>; 3]) -> Result<Self> {
        for (i, list) in thetas.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for t in list {
                if !seen.insert(&t.0) {
                    return Err(Error::Validation(format!(
                        "duplicate parameter {} in theta{}",
                        format_rational(&t.0),
                        i + 1
                    )));
                }
            }
        }
        Ok(Configuration { centers, thetas })
    }

    pub fn from_rationals(centers: [Point; 3], thetas: [Vec<Rational>; 3]) -> Result<Self> {
        let [a, b, c] = thetas;
        let wrap = |v: Vec<Rational>| v.into_iter().map(OrientationParam).collect();
        Self::new(centers, [wrap(a), wrap(b), wrap(c)])
    }

    /// Centers (1,1), (-1,1), (0,2); parameters {-1, 1/2}, {-1, 1/2}, {-1}.
    pub fn golden() -> Self {
        Self::from_rationals(
            [Point::from_ints(1, 1), Point::from_ints(-1, 1), Point::from_ints(0, 2)],
            [
                vec![int(-1), rat(1, 2)],
                vec![int(-1), rat(1, 2)],
                vec![int(-1)],
            ],
        )
        .expect("golden configuration is valid")
    }

    /// `i` in `0..3`.
    pub fn center(&self, i: usize) -> &Point {
        &self.centers[i]
    }

    pub fn centers(&self) -> &[Point; 3] {
        &self.centers
    }

    pub fn theta(&self, i: usize) -> &[OrientationParam] {
        &self.thetas[i]
    }

    pub fn thetas(&self) -> &[Vec<OrientationParam>; 3] {
        &self.thetas
    }

    pub fn sizes(&self) -> [usize; 3] {
        [self.thetas[0].len(), self.thetas[1].len(), self.thetas[2].len()]
    }

    pub fn max_size(&self) -> usize {
        self.sizes().into_iter().max().unwrap_or(0)
    }

    /// The point set `S_{i+1}`.
    pub fn points(&self, i: usize) -> Vec<Point> {
        self.thetas[i]
            .iter()
            .map(|t| param_point(&self.centers[i], t))
            .collect()
    }

    pub fn point(&self, i: usize, k: usize) -> Point {
        param_point(&self.centers[i], &self.thetas[i][k])
    }

    /// Re-indexes circles: new circle `k` is old circle `order[k]`.
    pub fn permuted(&self, order: [usize; 3]) -> Self {
        Configuration {
            centers: order.map(|i| self.centers[i].clone()),
            thetas: order.map(|i| self.thetas[i].clone()),
        }
    }

    /// Keeps only the parameters of circle `i` whose index satisfies `keep`.
    pub fn filtered(&self, i: usize, keep: impl Fn(usize) -> bool) -> Self {
        let mut out = self.clone();
        out.thetas[i] = self.thetas[i]
            .iter()
            .enumerate()
            .filter(|(k, _)| keep(*k))
            .map(|(_, t)| t.clone())
            .collect();
        out
    }
}
