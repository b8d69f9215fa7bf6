//! The two-valued center map `phi_{a,C0}` and its four-fold composite.
//!
//! `phi_{a,C0}(x)` sends a point `x` on the unit circle `C0` to a center `w`
//! of a unit circle through the fixed anchor `a` and `x`:
//!
//! ```text
//! w = (a + x)/2 + sign * s * (-(x2 - a2)/2, (x1 - a1)/2),   s = sqrt(4/|x - a|^2 - 1)
//! ```
//!
//! `Branch::Plus` is the `+` sign. Orientations are angles about the circle
//! center (`v_x` about the center of `C0`, `v_w` about `a`), and derivatives
//! are `dv_w / dv_x`:
//!
//! ```text
//! phi' = ((w - x) . tau_x) / ((w - x) . tau_w)
//! ```
//!
//! with `tau_x`, `tau_w` the counter-clockwise unit tangents of `C0` at `x`
//! and of the unit circle about `a` at `w`.
//!
//! The composite chain, for `a, b` on `C1`, is
//! `x -> w = phi_{a,C2}(x) -> z = phi_{c3,C_a}(w) -> w' = phi_{b,C3}(z) -> y = phi_{c2,C_b}(w')`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{param_of_f, param_point_f, FPoint, Point};

/// Tolerance on `|x - c|^2 - 1` for "x lies on the source circle".
pub const ON_CIRCLE_TOL: f64 = 1e-9;
/// Default tolerance on squared distances for degeneracy predicates.
pub const DEGENERACY_TOL: f64 = 1e-9;
/// Negative `s^2` down to this value is treated as the boundary `s = 0`.
const BOUNDARY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn all4() -> impl Iterator<Item = [Branch; 4]> {
        (0..16u8).map(|m| {
            let b = |i: u8| if m >> i & 1 == 0 { Branch::Plus } else { Branch::Minus };
            [b(0), b(1), b(2), b(3)]
        })
    }

    /// Parses strings like `"+-+-"`.
    pub fn parse4(s: &str) -> Result<[Branch; 4]> {
        let v: Vec<Branch> = s
            .chars()
            .map(|c| match c {
                '+' => Ok(Branch::Plus),
                '-' => Ok(Branch::Minus),
                _ => Err(Error::InvalidInput(format!("bad branch character `{c}`"))),
            })
            .collect::<Result<_>>()?;
        v.try_into()
            .map_err(|_| Error::InvalidInput("expected exactly four branch signs".into()))
    }

    pub fn format4(b: &[Branch; 4]) -> String {
        b.iter().map(|b| if *b == Branch::Plus { '+' } else { '-' }).collect()
    }
}

/// One application of the center map: fixed anchor, input varying on the unit
/// circle around `source_center`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiStep {
    pub anchor: FPoint,
    pub source_center: FPoint,
    pub branch: Branch,
}

impl PhiStep {
    /// Rejects an anchor lying on the source circle.
    pub fn new(anchor: FPoint, source_center: FPoint, branch: Branch) -> Result<Self> {
        if (anchor.dist2(source_center) - 1.0).abs() <= ON_CIRCLE_TOL {
            return Err(Error::InvalidInput("anchor lies on the source circle".into()));
        }
        Ok(PhiStep {
            anchor,
            source_center,
            branch,
        })
    }

    pub fn with_branch(self, branch: Branch) -> Self {
        PhiStep { branch, ..self }
    }
}

/// Center of the unit circle through `step.anchor` and `x`, on the chosen branch.
pub fn phi_apply(step: &PhiStep, x: FPoint) -> Result<FPoint> {
    if (x.dist2(step.source_center) - 1.0).abs() > ON_CIRCLE_TOL {
        return Err(Error::InvalidInput("input point is not on the source circle".into()));
    }
    center_through(step.anchor, x, step.branch)
}

/// The raw center formula, without the on-circle check.
pub fn center_through(a: FPoint, x: FPoint, branch: Branch) -> Result<FPoint> {
    let d2 = a.dist2(x);
    if d2 == 0.0 {
        return Err(Error::InvalidInput("input coincides with the anchor".into()));
    }
    let mut s2 = 4.0 / d2 - 1.0;
    if s2 < 0.0 {
        if s2 < -BOUNDARY_SLACK {
            return Err(Error::NoRealBranch { dist2: d2 });
        }
        s2 = 0.0;
    }
    let mid = (a + x) * 0.5;
    let half_perp = (x - a).perp() * 0.5;
    Ok(mid + half_perp * (branch.sign() * s2.sqrt()))
}

/// Numerator and denominator of `dv_w / dv_x` at `x`.
pub fn phi_derivative_parts(step: &PhiStep, x: FPoint) -> Result<(f64, f64, FPoint)> {
    let w = phi_apply(step, x)?;
    let tau_x = (x - step.source_center).perp();
    let tau_w = (w - step.anchor).perp();
    let d = w - x;
    Ok((d.dot(tau_x), d.dot(tau_w), w))
}

/// `dv_w / dv_x`; errors at the boundary (denominator) or tangency (numerator).
pub fn phi_derivative(step: &PhiStep, x: FPoint, tol: f64) -> Result<f64> {
    let (num, den, _) = phi_derivative_parts(step, x)?;
    if den.abs() < tol {
        return Err(Error::AtBoundary);
    }
    if num.abs() < tol {
        return Err(Error::ZeroDerivative);
    }
    Ok(num / den)
}

/// Geometry of `Phi_{a,b}`: two points of `S1` and the centers of `C2`, `C3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiChain {
    pub a: FPoint,
    pub b: FPoint,
    pub c2: FPoint,
    pub c3: FPoint,
}

/// All intermediate points of one successful chain evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainTrace {
    pub t_x: f64,
    pub t_y: f64,
    pub x: FPoint,
    pub w: FPoint,
    pub z: FPoint,
    pub w2: FPoint,
    pub y: FPoint,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainDerivative {
    pub factors: [f64; 4],
    pub product: f64,
}

impl PhiChain {
    /// `a` and `b` must lie strictly outside the closed unit disk about `c2`.
    pub fn new(a: FPoint, b: FPoint, c2: FPoint, c3: FPoint) -> Result<Self> {
        for (name, p) in [("a", a), ("b", b)] {
            if p.dist2(c2) <= 1.0 {
                return Err(Error::InvalidInput(format!("{name} is not outside D2")));
            }
        }
        Ok(PhiChain { a, b, c2, c3 })
    }

    pub fn from_exact(a: &Point, b: &Point, c2: &Point, c3: &Point) -> Result<Self> {
        Self::new(a.to_f(), b.to_f(), c2.to_f(), c3.to_f())
    }

    /// The four steps `phi_{a,C2}`, `phi_{c3,C_a}`, `phi_{b,C3}`, `phi_{c2,C_b}`.
    pub fn steps(&self, branches: [Branch; 4]) -> Result<[PhiStep; 4]> {
        Ok([
            PhiStep::new(self.a, self.c2, branches[0])?,
            PhiStep::new(self.c3, self.a, branches[1])?,
            PhiStep::new(self.b, self.c3, branches[2])?,
            PhiStep::new(self.c2, self.b, branches[3])?,
        ])
    }

    pub fn apply(&self, t_x: f64, branches: [Branch; 4]) -> Result<ChainTrace> {
        let steps = self.steps(branches)?;
        let x = param_point_f(self.c2, t_x);
        let mut pts = [x; 5];
        for (k, step) in steps.iter().enumerate() {
            pts[k + 1] = center_through(step.anchor, pts[k], step.branch).map_err(|e| {
                Error::ConstructionFailed {
                    step: k + 1,
                    reason: e.to_string(),
                }
            })?;
        }
        let y = pts[4];
        let t_y = param_of_f(self.c2, y)?;
        Ok(ChainTrace {
            t_x,
            t_y,
            x,
            w: pts[1],
            z: pts[2],
            w2: pts[3],
            y,
        })
    }

    /// `dv_y / dv_x` as the product of the four step derivatives.
    pub fn derivative(&self, t_x: f64, branches: [Branch; 4], tol: f64) -> Result<ChainDerivative> {
        let steps = self.steps(branches)?;
        let tr = self.apply(t_x, branches)?;
        let inputs = [tr.x, tr.w, tr.z, tr.w2];
        let mut factors = [0.0; 4];
        for k in 0..4 {
            factors[k] = phi_derivative(&steps[k], inputs[k], tol)?;
        }
        Ok(ChainDerivative {
            factors,
            product: factors.iter().product(),
        })
    }

    pub fn state(&self, tr: &ChainTrace) -> ChainState<FPoint> {
        ChainState {
            a: self.a,
            b: self.b,
            xi: tr.x,
            w: tr.w,
            z: tr.z,
            w2: tr.w2,
            eta: tr.y,
            c2: self.c2,
            c3: self.c3,
        }
    }
}

/// The seven chain points plus the centers of `C2`, `C3`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainState<P> {
    pub a: P,
    pub b: P,
    pub xi: P,
    pub w: P,
    pub z: P,
    pub w2: P,
    pub eta: P,
    pub c2: P,
    pub c3: P,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Part {
    Numerator,
    Denominator,
}

/// The eight distance-2 conditions, one per numerator/denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Condition {
    /// N1: `|w - c2| = 2`.
    WC2,
    /// N2: `|a - z| = 2`.
    AZ,
    /// N3: `|w' - c3| = 2`.
    W2C3,
    /// N4: `|eta - b| = 2`.
    EtaB,
    /// D1 (Case i): `|a - xi| = 2`.
    AXi,
    /// D2 (Case ii): `|w - c3| = 2`.
    WC3,
    /// D3 (Case iii): `|z - b| = 2`.
    ZB,
    /// D4 (Case iv): `|w' - c2| = 2`.
    W2C2,
}

impl Condition {
    pub const ALL: [Condition; 8] = [
        Condition::WC2,
        Condition::AZ,
        Condition::W2C3,
        Condition::EtaB,
        Condition::AXi,
        Condition::WC3,
        Condition::ZB,
        Condition::W2C2,
    ];

    pub fn fraction(self) -> u8 {
        match self {
            Condition::WC2 | Condition::AXi => 1,
            Condition::AZ | Condition::WC3 => 2,
            Condition::W2C3 | Condition::ZB => 3,
            Condition::EtaB | Condition::W2C2 => 4,
        }
    }

    pub fn part(self) -> Part {
        match self {
            Condition::WC2 | Condition::AZ | Condition::W2C3 | Condition::EtaB => Part::Numerator,
            _ => Part::Denominator,
        }
    }

    fn points<'s, P>(self, s: &'s ChainState<P>) -> (&'s P, &'s P) {
        match self {
            Condition::WC2 => (&s.w, &s.c2),
            Condition::AZ => (&s.a, &s.z),
            Condition::W2C3 => (&s.w2, &s.c3),
            Condition::EtaB => (&s.eta, &s.b),
            Condition::AXi => (&s.a, &s.xi),
            Condition::WC3 => (&s.w, &s.c3),
            Condition::ZB => (&s.z, &s.b),
            Condition::W2C2 => (&s.w2, &s.c2),
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::WC2 => "|w-c2|=2",
            Condition::AZ => "|a-z|=2",
            Condition::W2C3 => "|w'-c3|=2",
            Condition::EtaB => "|eta-b|=2",
            Condition::AXi => "|a-xi|=2",
            Condition::WC3 => "|w-c3|=2",
            Condition::ZB => "|z-b|=2",
            Condition::W2C2 => "|w'-c2|=2",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DegeneracyFlag {
    pub fraction: u8,
    pub part: Part,
    pub condition: Condition,
}

/// A numerator and a denominator vanishing together.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum UltraTag {
    /// Numerator and denominator of the same fraction; forces the anchor to
    /// sit at distance 3 from the source-circle center.
    SameFraction { fraction: u8, distance_three: bool },
    /// `N{numerator}D{denominator}` with distinct fractions.
    Cross { numerator: u8, denominator: u8 },
}

impl UltraTag {
    pub fn name(&self) -> String {
        match self {
            UltraTag::SameFraction { fraction, .. } => format!("N{fraction}D{fraction}"),
            UltraTag::Cross {
                numerator,
                denominator,
            } => format!("N{numerator}D{denominator}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct DegeneracyReport {
    pub flags: Vec<DegeneracyFlag>,
    pub ultra: Vec<UltraTag>,
}

impl DegeneracyReport {
    pub fn is_empty(&self) -> bool {
        self.flags.is_empty()
    }

    pub fn has(&self, c: Condition) -> bool {
        self.flags.iter().any(|f| f.condition == c)
    }

    pub fn is_ultra(&self) -> bool {
        !self.ultra.is_empty()
    }

    /// Compact rendering such as `"|a-xi|=2;N4D1"`.
    pub fn summary(&self) -> String {
        let mut parts: Vec<String> = self.flags.iter().map(|f| f.condition.to_string()).collect();
        parts.extend(self.ultra.iter().map(UltraTag::name));
        parts.join(";")
    }
}

fn classify_with<P>(
    s: &ChainState<P>,
    at_distance: impl Fn(&P, &P, u32) -> bool,
) -> DegeneracyReport {
    let flags: Vec<DegeneracyFlag> = Condition::ALL
        .iter()
        .filter(|c| {
            let (p, q) = c.points(s);
            at_distance(p, q, 2)
        })
        .map(|&c| DegeneracyFlag {
            fraction: c.fraction(),
            part: c.part(),
            condition: c,
        })
        .collect();
    let mut ultra = Vec::new();
    for n in flags.iter().filter(|f| f.part == Part::Numerator) {
        for d in flags.iter().filter(|f| f.part == Part::Denominator) {
            if n.fraction == d.fraction {
                // anchor vs. source-circle center of that fraction
                let (p, q) = match n.fraction {
                    1 => (&s.a, &s.c2),
                    2 => (&s.a, &s.c3),
                    3 => (&s.b, &s.c3),
                    _ => (&s.b, &s.c2),
                };
                ultra.push(UltraTag::SameFraction {
                    fraction: n.fraction,
                    distance_three: at_distance(p, q, 3),
                });
            } else {
                ultra.push(UltraTag::Cross {
                    numerator: n.fraction,
                    denominator: d.fraction,
                });
            }
        }
    }
    DegeneracyReport { flags, ultra }
}

/// Float-mode classification: `| |p-q|^2 - k^2 | <= tol`.
pub fn classify_degeneracy(s: &ChainState<FPoint>, tol: f64) -> DegeneracyReport {
    classify_with(s, |p, q, k| (p.dist2(*q) - (k * k) as f64).abs() <= tol)
}

/// Exact classification for rational chain states.
pub fn classify_degeneracy_exact(s: &ChainState<Point>) -> DegeneracyReport {
    classify_with(s, |p, q, k| p.dist2(q) == crate::exact::int((k * k) as i64))
}
