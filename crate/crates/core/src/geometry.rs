//! Points, unit circles, the tan-half-angle chart and the unit-circumcircle
//! polynomial `F`.
//!
//! Everything here is exact over rationals. `FPoint` is the floating-point
//! twin used where square roots are intrinsic (the center constructions).

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{format_rational, int, rational_sqrt, to_f64, Rational};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(int(x), int(y))
    }

    pub fn origin() -> Self {
        Point::new(Rational::zero(), Rational::zero())
    }

    pub fn dist2(&self, other: &Point) -> Rational {
        let dx = &self.x - &other.x;
        let dy = &self.y - &other.y;
        &dx * &dx + &dy * &dy
    }

    pub fn dot(&self, other: &Point) -> Rational {
        &self.x * &other.x + &self.y * &other.y
    }

    pub fn norm2(&self) -> Rational {
        self.dot(self)
    }

    pub fn to_f(&self) -> FPoint {
        FPoint::new(to_f64(&self.x), to_f64(&self.y))
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_rational(&self.x), format_rational(&self.y))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Add for &Point {
    type Output = Point;
    fn add(self, o: &Point) -> Point {
        Point::new(&self.x + &o.x, &self.y + &o.y)
    }
}

impl Sub for &Point {
    type Output = Point;
    fn sub(self, o: &Point) -> Point {
        Point::new(&self.x - &o.x, &self.y - &o.y)
    }
}

impl Mul<&Rational> for &Point {
    type Output = Point;
    fn mul(self, k: &Rational) -> Point {
        Point::new(&self.x * k, &self.y * k)
    }
}

/// Floating-point point for the square-root constructions.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FPoint {
    pub x: f64,
    pub y: f64,
}

impl FPoint {
    pub const fn new(x: f64, y: f64) -> Self {
        FPoint { x, y }
    }

    pub fn dot(self, o: FPoint) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    pub fn dist2(self, o: FPoint) -> f64 {
        (self - o).norm2()
    }

    /// Counter-clockwise quarter turn.
    pub fn perp(self) -> FPoint {
        FPoint::new(-self.y, self.x)
    }
}

impl Add for FPoint {
    type Output = FPoint;
    fn add(self, o: FPoint) -> FPoint {
        FPoint::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for FPoint {
    type Output = FPoint;
    fn sub(self, o: FPoint) -> FPoint {
        FPoint::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for FPoint {
    type Output = FPoint;
    fn mul(self, k: f64) -> FPoint {
        FPoint::new(self.x * k, self.y * k)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circle {
    pub center: Point,
    radius: Rational,
}

impl Circle {
    pub fn new(center: Point, radius: Rational) -> Result<Self> {
        if !radius.is_positive() {
            return Err(Error::InvalidInput("circle radius must be positive".into()));
        }
        Ok(Circle { center, radius })
    }

    pub fn unit(center: Point) -> Self {
        Circle {
            center,
            radius: Rational::one(),
        }
    }

    pub fn radius(&self) -> &Rational {
        &self.radius
    }
}

/// Tan-half-angle parameter of a point on a unit circle. The angle `pi`
/// (where the parameter is infinite) is outside the chart.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrientationParam(pub Rational);

impl OrientationParam {
    pub fn new(t: Rational) -> Self {
        OrientationParam(t)
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }
}

impl fmt::Debug for OrientationParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t={}", format_rational(&self.0))
    }
}

impl From<Rational> for OrientationParam {
    fn from(t: Rational) -> Self {
        OrientationParam(t)
    }
}

/// `c + ((1 - t^2) / (1 + t^2), 2t / (1 + t^2))`.
pub fn param_point(c: &Point, t: &OrientationParam) -> Point {
    let t = &t.0;
    let t2 = t * t;
    let den = &t2 + Rational::one();
    let dx = (Rational::one() - &t2) / &den;
    let dy = (t * int(2)) / &den;
    Point::new(&c.x + dx, &c.y + dy)
}

/// Float version of [`param_point`].
pub fn param_point_f(c: FPoint, t: f64) -> FPoint {
    let den = 1.0 + t * t;
    FPoint::new(c.x + (1.0 - t * t) / den, c.y + 2.0 * t / den)
}

/// Inverse chart: the parameter of a point `p` on the unit circle around `c`.
pub fn param_of(c: &Point, p: &Point) -> Result<OrientationParam> {
    let d = p - c;
    let den = &d.x + Rational::one();
    if den.is_zero() {
        return Err(Error::ChartGap);
    }
    Ok(OrientationParam(&d.y / den))
}

/// Float inverse chart.
pub fn param_of_f(c: FPoint, p: FPoint) -> Result<f64> {
    let d = p - c;
    let den = 1.0 + d.x;
    if den.abs() < 1e-12 {
        return Err(Error::ChartGap);
    }
    Ok(d.y / den)
}

/// `X^2 + Y^2 + Z^2 - 2XY - 2XZ - 2YZ + XYZ` over the squared side lengths.
pub fn eval_f(p: &Point, q: &Point, r: &Point) -> Rational {
    let x = p.dist2(q);
    let y = p.dist2(r);
    let z = q.dist2(r);
    f_from_squares(&x, &y, &z)
}

pub fn f_from_squares(x: &Rational, y: &Rational, z: &Rational) -> Rational {
    let two = int(2);
    x * x + y * y + z * z - &two * x * y - &two * x * z - &two * y * z + x * y * z
}

/// Twice the signed area of `pqr`.
pub fn orient(p: &Point, q: &Point, r: &Point) -> Rational {
    (&q.x - &p.x) * (&r.y - &p.y) - (&q.y - &p.y) * (&r.x - &p.x)
}

pub fn collinear(p: &Point, q: &Point, r: &Point) -> bool {
    orient(p, q, r).is_zero()
}

/// Exact circumcenter of a non-degenerate triangle.
pub fn circumcenter(p: &Point, q: &Point, r: &Point) -> Result<Point> {
    let d = orient(p, q, r) * int(2);
    if d.is_zero() {
        return Err(Error::NoCircumcircle);
    }
    let (bx, by) = (&q.x - &p.x, &q.y - &p.y);
    let (cx, cy) = (&r.x - &p.x, &r.y - &p.y);
    let b2 = &bx * &bx + &by * &by;
    let c2 = &cx * &cx + &cy * &cy;
    let ux = (&cy * &b2 - &by * &c2) / &d;
    let uy = (&bx * &c2 - &cx * &b2) / &d;
    Ok(Point::new(&p.x + ux, &p.y + uy))
}

/// True iff `p, q, r` are non-collinear and their circumradius is exactly 1.
pub fn spans_unit_circle(p: &Point, q: &Point, r: &Point) -> bool {
    !collinear(p, q, r) && eval_f(p, q, r).is_zero()
}

/// Centers of the unit circles through `a` and `x`.
///
/// `w = m +/- s * (-(x2 - a2)/2, (x1 - a1)/2)` with `s^2 = 4/|x-a|^2 - 1`.
#[derive(Debug, Clone, PartialEq)]
pub enum UnitCenters {
    /// All centers rational (0, 1 or 2 of them; "+" branch first).
    Rational(Vec<Point>),
    /// Two real centers `midpoint +/- sqrt(s_squared) * half_perp`, `s` irrational.
    Irrational {
        midpoint: Point,
        half_perp: Point,
        s_squared: Rational,
    },
}

impl UnitCenters {
    pub fn count(&self) -> usize {
        match self {
            UnitCenters::Rational(v) => v.len(),
            UnitCenters::Irrational { .. } => 2,
        }
    }

    /// Float approximations, "+" branch first.
    pub fn to_f(&self) -> Vec<FPoint> {
        match self {
            UnitCenters::Rational(v) => v.iter().map(Point::to_f).collect(),
            UnitCenters::Irrational {
                midpoint,
                half_perp,
                s_squared,
            } => {
                let s = to_f64(s_squared).sqrt();
                let (m, h) = (midpoint.to_f(), half_perp.to_f());
                vec![m + h * s, m - h * s]
            }
        }
    }
}

pub fn unit_centers_through(a: &Point, x: &Point) -> Result<UnitCenters> {
    let d2 = a.dist2(x);
    if d2.is_zero() {
        return Err(Error::InvalidInput("unit centers through coincident points".into()));
    }
    let s2 = int(4) / &d2 - Rational::one();
    if s2.is_negative() {
        return Ok(UnitCenters::Rational(Vec::new()));
    }
    let half = int(1) / int(2);
    let midpoint = &(a + x) * &half;
    let half_perp = Point::new(-(&x.y - &a.y) * &half, (&x.x - &a.x) * &half);
    if s2.is_zero() {
        return Ok(UnitCenters::Rational(vec![midpoint]));
    }
    match rational_sqrt(&s2) {
        Some(s) => {
            let off = &half_perp * &s;
            Ok(UnitCenters::Rational(vec![&midpoint + &off, &midpoint - &off]))
        }
        None => Ok(UnitCenters::Irrational {
            midpoint,
            half_perp,
            s_squared: s2,
        }),
    }
}

/// Closed-disk membership, decided exactly.
pub fn in_disk(p: &Point, disk: &Circle) -> bool {
    p.dist2(&disk.center) <= disk.radius() * disk.radius()
}

/// Squared area `S^2` of triangle `pqr` (shoelace).
pub fn area_squared(p: &Point, q: &Point, r: &Point) -> Rational {
    let o = orient(p, q, r);
    &o * &o / int(4)
}
