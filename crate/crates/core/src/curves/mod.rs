//! The curves `gamma_{a,b}` in the `(t_x, t_y)` parameter plane of `C2 x C2`.
//!
//! For parameters `t1` on `C1` and `t2` on `C2`, the unit-circle condition on a
//! third point of `C3` becomes a quartic in its parameter `t3`
//! ([`specialize_f`]). The curve `gamma_{a,b}` is the zero set of
//! `R(t_x, t_y) = Res_{t3}(f(t_a, t_x, .), f(t_b, t_y, .))`, only ever
//! evaluated pointwise or along vertical fibers.

pub mod audit;
pub mod trace;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::exact::modp::PrimeField;
use crate::exact::{
    format_rational, int, interpolate, poly_gcd, sturm_real_roots, sylvester_resultant,
    sylvester_resultant_formal, Rational, UniPoly,
};
use crate::geometry::{param_point, OrientationParam, Point};

/// Upper bound on the degree of `R(t_x, .)`: the specialized quartic in `t3`
/// has coefficients of degree at most 4 in the other parameter once the
/// chart denominator is cleared, so the 8x8 Sylvester determinant has degree
/// at most `4 * 4` in `t_y`.
pub const FIBER_DEGREE_BOUND: usize = 16;

/// `(1+t3^2)^2 F(P1(t1), P2(t2), P3(t3))` as a polynomial in `t3`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecializedF {
    pub t1: Rational,
    pub t2: Rational,
    pub poly: UniPoly,
}

/// The specialized quartic for two fixed points `p` (on `C1`) and `q` (on
/// `C2`), with the free point on the unit circle around `c3`.
pub fn specialize_points(p: &Point, q: &Point, c3: &Point) -> UniPoly {
    let x = p.dist2(q);
    // D = 1 + t^2
    let d = UniPoly::new(vec![Rational::one(), Rational::zero(), Rational::one()]);
    // (1+t^2) |r - P3(t)|^2 for a fixed point r.
    let cleared = |r: &Point| {
        let off = r - c3;
        let k = off.norm2() + Rational::one();
        let two = int(2);
        // k (1+t^2) - 2 (dx (1 - t^2) + dy 2t)
        UniPoly::new(vec![
            &k - &two * &off.x,
            -(&two * &two * &off.y),
            &k + &two * &off.x,
        ])
    };
    let y = cleared(p);
    let z = cleared(q);
    let xd = d.scale(&x);
    let two = int(2);
    let mut f = &xd * &xd;
    f = &f + &(&y * &y);
    f = &f + &(&z * &z);
    f = &f - &(&xd * &y).scale(&two);
    f = &f - &(&xd * &z).scale(&two);
    f = &f - &(&y * &z).scale(&two);
    f = &f + &(&y * &z).scale(&x);
    f
}

/// Specializes the first two parameters of the configuration's trivariate `f`.
pub fn specialize_f(cfg: &Configuration, t1: &Rational, t2: &Rational) -> SpecializedF {
    let p = param_point(cfg.center(0), &OrientationParam(t1.clone()));
    let q = param_point(cfg.center(1), &OrientationParam(t2.clone()));
    SpecializedF {
        t1: t1.clone(),
        t2: t2.clone(),
        poly: specialize_points(&p, &q, cfg.center(2)),
    }
}

/// `gamma_{a,b}` (parameters of `a, b` on `C1`, coordinates on `C2 x C2`), or
/// with `role_swap` the dual curve: `t_a, t_b` on `C2`, coordinates on `C1 x C1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveRef {
    pub t_a: Rational,
    pub t_b: Rational,
    pub role_swap: bool,
}

impl CurveRef {
    pub fn new(t_a: Rational, t_b: Rational) -> Self {
        CurveRef {
            t_a,
            t_b,
            role_swap: false,
        }
    }

    pub fn dual(t_a: Rational, t_b: Rational) -> Self {
        CurveRef {
            t_a,
            t_b,
            role_swap: true,
        }
    }

    /// `gamma_{b,a}`, whose points are the mirrored points of `gamma_{a,b}`.
    pub fn transpose(&self) -> Self {
        CurveRef {
            t_a: self.t_b.clone(),
            t_b: self.t_a.clone(),
            role_swap: self.role_swap,
        }
    }

    /// The specialized quartic through the fixed point `fixed` and the free
    /// coordinate `t`.
    pub fn specialize(&self, cfg: &Configuration, fixed: &Rational, t: &Rational) -> SpecializedF {
        if self.role_swap {
            specialize_f(cfg, t, fixed)
        } else {
            specialize_f(cfg, fixed, t)
        }
    }

    fn label(&self) -> String {
        format!(
            "({}, {}){}",
            format_rational(&self.t_a),
            format_rational(&self.t_b),
            if self.role_swap { "*" } else { "" }
        )
    }
}

impl std::fmt::Display for CurveRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.label())
    }
}

fn nonzero(s: SpecializedF) -> Result<UniPoly> {
    if s.poly.is_zero() {
        return Err(Error::DegenerateSpecialization {
            t1: format_rational(&s.t1),
            t2: format_rational(&s.t2),
        });
    }
    Ok(s.poly)
}

fn pair_polys(
    cfg: &Configuration,
    c: &CurveRef,
    t_x: &Rational,
    t_y: &Rational,
) -> Result<(UniPoly, UniPoly)> {
    let p = nonzero(c.specialize(cfg, &c.t_a, t_x))?;
    let q = nonzero(c.specialize(cfg, &c.t_b, t_y))?;
    Ok((p, q))
}

/// `R(t_x, t_y)`; zero exactly on the curve.
pub fn curve_eval(cfg: &Configuration, c: &CurveRef, t_x: &Rational, t_y: &Rational) -> Result<Rational> {
    let (p, q) = pair_polys(cfg, c, t_x, t_y)?;
    sylvester_resultant(&p, &q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PointClass {
    NotOnCurve,
    RealArc,
    NonRealArc,
}

/// Whether the common root in `t3` (if any) is real.
pub fn classify_point(
    cfg: &Configuration,
    c: &CurveRef,
    t_x: &Rational,
    t_y: &Rational,
) -> Result<PointClass> {
    let (p, q) = pair_polys(cfg, c, t_x, t_y)?;
    if !sylvester_resultant(&p, &q)?.is_zero() {
        return Ok(PointClass::NotOnCurve);
    }
    let g = poly_gcd(&p, &q)?;
    if g.degree().unwrap_or(0) == 0 {
        // Cannot happen for a vanishing resultant of trimmed polynomials.
        return Err(Error::Internal("vanishing resultant with trivial gcd".into()));
    }
    if sturm_real_roots(&g, None, None)?.count > 0 {
        Ok(PointClass::RealArc)
    } else {
        Ok(PointClass::NonRealArc)
    }
}

/// Sample abscissae used to interpolate fibers.
pub fn fiber_nodes(degree_bound: usize) -> Vec<Rational> {
    (0..=degree_bound as i64).map(int).collect()
}

/// `(1 + t^2)^2 f(fixed, t, .)`, polynomial in both variables.
fn cleared_specialization(cfg: &Configuration, c: &CurveRef, t: &Rational) -> UniPoly {
    let d = Rational::one() + t * t;
    c.specialize(cfg, &c.t_b, t).poly.scale(&(&d * &d))
}

/// `G(t_y) = Res_{t3}(f(t_a, t_x, .), (1+t_y^2)^2 f(t_b, t_y, .))` with the
/// second argument at formal degree 4. Away from `t_y^2 = -1` its zeros are
/// exactly the fiber `{t_y : R(t_x, t_y) = 0}`.
pub fn curve_fiber(
    cfg: &Configuration,
    c: &CurveRef,
    t_x: &Rational,
    degree_bound: usize,
) -> Result<UniPoly> {
    let p = nonzero(c.specialize(cfg, &c.t_a, t_x))?;
    let m = p.degree().unwrap_or(0);
    let pts = fiber_nodes(degree_bound)
        .into_iter()
        .map(|ty| {
            let q = cleared_specialization(cfg, c, &ty);
            let v = sylvester_resultant_formal(&p, m, &q, 4)?;
            Ok((ty, v))
        })
        .collect::<Result<Vec<_>>>()?;
    let g = interpolate(&pts)?;
    if g.is_zero() {
        return Err(Error::VerticalComponent {
            t_x: format_rational(t_x),
        });
    }
    Ok(g)
}

/// Fiber computations for one curve modulo a prime: the `t_y`-side
/// specializations are shared by every abscissa.
#[derive(Debug, Clone)]
pub struct ModularFibers {
    field: PrimeField,
    nodes: Vec<u64>,
    /// Reduced `(1+t^2)^2 f(t_b, t, .)` at each node, length 5.
    cleared: Vec<Vec<u64>>,
}

impl ModularFibers {
    /// `None` when some coefficient does not reduce.
    pub fn new(cfg: &Configuration, c: &CurveRef, field: PrimeField, degree_bound: usize) -> Option<Self> {
        let nodes_q = fiber_nodes(degree_bound);
        let mut nodes = Vec::with_capacity(nodes_q.len());
        let mut cleared = Vec::with_capacity(nodes_q.len());
        for t in &nodes_q {
            nodes.push(field.from_rational(t)?);
            let mut q = field.reduce_poly(&cleared_specialization(cfg, c, t))?;
            q.resize(5, 0);
            cleared.push(q);
        }
        Some(ModularFibers { field, nodes, cleared })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// The fiber over the abscissa whose `t_x`-side specialization is `p`,
    /// up to a nonzero constant. `None` when `p` does not reduce to a
    /// polynomial of the same degree.
    pub fn fiber(&self, p: &UniPoly) -> Option<Vec<u64>> {
        let deg = p.degree()?;
        let red = self.field.reduce_poly(p)?;
        if red[deg] == 0 {
            return None;
        }
        let monic = self.field.monic(&red)?;
        let ys: Vec<u64> = self.cleared.iter().map(|q| self.field.norm(&monic, q)).collect();
        Some(self.field.interpolate(&self.nodes, &ys))
    }
}
