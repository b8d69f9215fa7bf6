//! Exact counts of unit triples, spanned circles, the double-counting
//! quantities and point/curve incidences, with the inequalities tying them.
//!
//! A prime-field evaluation screens candidates: a value that is nonzero
//! modulo the prime is nonzero over the rationals, and every modular zero is
//! decided again with exact arithmetic, so all reported counts are exact.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

pub use crate::config::Configuration;
use crate::configgen::{generate, GeneratorKind, GeneratorSpec};
use crate::curves::specialize_points;
use crate::error::{Error, Result};
use crate::exact::modp::{PrimeField, MERSENNE_31};
use crate::exact::{format_rational, sylvester_resultant, Rational, UniPoly};
use crate::geometry::{circumcenter, collinear, eval_f, Point};

const FILTER: PrimeField = PrimeField::new(MERSENNE_31);

/// Indices `[i1, i2, i3]` into the three parameter lists.
pub type TripleIdx = [usize; 3];

fn reduce_point(p: &Point) -> Option<(u64, u64)> {
    Some((FILTER.from_rational(&p.x)?, FILTER.from_rational(&p.y)?))
}

fn dist2_mod(p: (u64, u64), q: (u64, u64)) -> u64 {
    let dx = FILTER.sub(p.0, q.0);
    let dy = FILTER.sub(p.1, q.1);
    FILTER.add(FILTER.mul(dx, dx), FILTER.mul(dy, dy))
}

fn f_mod(x: u64, y: u64, z: u64) -> u64 {
    let f = &FILTER;
    let sq = f.add(f.add(f.mul(x, x), f.mul(y, y)), f.mul(z, z));
    let cross = f.add(f.add(f.mul(x, y), f.mul(x, z)), f.mul(y, z));
    let xyz = f.mul(f.mul(x, y), z);
    f.add(f.sub(sq, f.add(cross, cross)), xyz)
}

/// The circle spanned by a unit triple is one of `C1, C2, C3` itself; such
/// triples meet that circle in infinitely many configurations of points and
/// are not counted.
fn is_family_circle(cfg: &Configuration, center: &Point) -> bool {
    cfg.centers().iter().any(|c| c == center)
}

/// Every non-collinear triple with `F = 0` whose circle is not one of the
/// three family circles, in lexicographic index order.
pub fn count_unit_triples(cfg: &Configuration) -> Vec<TripleIdx> {
    let pts: [Vec<Point>; 3] = [cfg.points(0), cfg.points(1), cfg.points(2)];
    let red: [Vec<Option<(u64, u64)>>; 3] = [0, 1, 2].map(|i| pts[i].iter().map(reduce_point).collect());
    (0..pts[0].len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut out = Vec::new();
            for j in 0..pts[1].len() {
                for k in 0..pts[2].len() {
                    if let (Some(a), Some(b), Some(c)) = (red[0][i], red[1][j], red[2][k]) {
                        if f_mod(dist2_mod(a, b), dist2_mod(a, c), dist2_mod(b, c)) != 0 {
                            continue;
                        }
                    }
                    let (p, q, r) = (&pts[0][i], &pts[1][j], &pts[2][k]);
                    if !eval_f(p, q, r).is_zero() || collinear(p, q, r) {
                        continue;
                    }
                    match circumcenter(p, q, r) {
                        Ok(o) if !is_family_circle(cfg, &o) => out.push([i, j, k]),
                        _ => {}
                    }
                }
            }
            out
        })
        .collect()
}

/// Spanned circles keyed by their exact center, each with its triples.
pub fn circle_inventory(cfg: &Configuration, triples: &[TripleIdx]) -> BTreeMap<Point, Vec<TripleIdx>> {
    let mut inv: BTreeMap<Point, Vec<TripleIdx>> = BTreeMap::new();
    for t in triples {
        let o = circumcenter(&cfg.point(0, t[0]), &cfg.point(1, t[1]), &cfg.point(2, t[2]))
            .expect("unit triples are not collinear");
        inv.entry(o).or_default().push(*t);
    }
    inv
}

/// Number of distinct spanned unit circles.
pub fn count_m(cfg: &Configuration, triples: &[TripleIdx]) -> usize {
    circle_inventory(cfg, triples).len()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DoubleCount {
    /// `|P_{v3}|` for each index of the third list.
    pub p_sizes: Vec<usize>,
    pub q: u64,
    pub sum_p: u64,
}

pub fn double_count(cfg: &Configuration, triples: &[TripleIdx]) -> DoubleCount {
    let mut p_sizes = vec![0usize; cfg.sizes()[2]];
    for t in triples {
        p_sizes[t[2]] += 1;
    }
    DoubleCount {
        q: p_sizes.iter().map(|&s| (s * s) as u64).sum(),
        sum_p: p_sizes.iter().map(|&s| s as u64).sum(),
        p_sizes,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IncidenceCount {
    /// All ordered pairs `(a, b)`, including `a = b`.
    pub i_prime: u64,
    /// Ordered pairs with `a != b`.
    pub i: u64,
    /// `(i1, i2)` index pairs whose specialization vanishes identically; every
    /// incidence involving them is excluded.
    pub degenerate: Vec<[usize; 2]>,
    /// Candidates decided by exact resultants after a modular zero.
    pub exact_checks: u64,
}

struct Specialized {
    exact: UniPoly,
    monic: Option<Vec<u64>>,
    reduced: Option<Vec<u64>>,
}

/// Counts `(a, b, t_x, t_y)` with `R_{a,b}(t_x, t_y) = 0` over `S1^2 x Theta2^2`.
pub fn count_incidences(cfg: &Configuration) -> IncidenceCount {
    let [n1, n2, _] = cfg.sizes();
    let s1 = cfg.points(0);
    let s2 = cfg.points(1);
    let c3 = cfg.center(2);
    let specs: Vec<Specialized> = (0..n1 * n2)
        .into_par_iter()
        .map(|ix| {
            let exact = specialize_points(&s1[ix / n2], &s2[ix % n2], c3);
            let reduced = FILTER.reduce_poly(&exact);
            let monic = match (&reduced, exact.degree()) {
                (Some(r), Some(d)) if r[d] != 0 => FILTER.monic(&r[..=d]),
                _ => None,
            };
            Specialized { exact, monic, reduced }
        })
        .collect();
    let degenerate: Vec<[usize; 2]> = specs
        .iter()
        .enumerate()
        .filter(|(_, s)| s.exact.is_zero())
        .map(|(ix, _)| [ix / n2, ix % n2])
        .collect();
    let (i_prime, i, exact_checks) = (0..n1 * n2)
        .into_par_iter()
        .map(|ax| {
            let p = &specs[ax];
            let mut counts = (0u64, 0u64, 0u64);
            if p.exact.is_zero() {
                return counts;
            }
            for (by, q) in specs.iter().enumerate() {
                if q.exact.is_zero() {
                    continue;
                }
                if let (Some(m), Some(r)) = (&p.monic, &q.reduced) {
                    if FILTER.norm(m, r) != 0 {
                        continue;
                    }
                }
                counts.2 += 1;
                let res = sylvester_resultant(&p.exact, &q.exact).expect("nonzero inputs");
                if res.is_zero() {
                    counts.0 += 1;
                    if ax / n2 != by / n2 {
                        counts.1 += 1;
                    }
                }
            }
            counts
        })
        .reduce(|| (0, 0, 0), |x, y| (x.0 + y.0, x.1 + y.1, x.2 + y.2));
    IncidenceCount {
        i_prime,
        i,
        degenerate,
        exact_checks,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub holds: bool,
    pub lhs: String,
    pub rhs: String,
}

fn verdict(name: &str, lhs: BigUint, rhs: BigUint) -> Verdict {
    Verdict {
        name: name.to_string(),
        holds: lhs <= rhs,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    }
}

/// `M <= sum_P <= 8M`, `M^2 <= Q n3`, `sum_P^2 <= Q n3`, and `Q <= 4 I'`
/// when incidences are available.
pub fn verdicts(m: usize, dc: &DoubleCount, n3: usize, i_prime: Option<u64>) -> Vec<Verdict> {
    let b = |x: u64| BigUint::from(x);
    let (m, s, q, n3) = (b(m as u64), b(dc.sum_p), b(dc.q), b(n3 as u64));
    let mut out = vec![
        verdict("M <= sum_P", m.clone(), s.clone()),
        verdict("sum_P <= 8M", s.clone(), &m * 8u32),
        verdict("M^2 <= Q*n3", &m * &m, &q * &n3),
        verdict("sum_P^2 <= Q*n3", &s * &s, &q * &n3),
    ];
    if let Some(ip) = i_prime {
        out.push(verdict("Q <= 4I'", q, b(ip) * 4u32));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircleEntry {
    pub center: [String; 2],
    pub triples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountReport {
    pub sizes: [usize; 3],
    /// Unit triples as parameter strings.
    pub triples: Vec<[String; 3]>,
    pub triple_count: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub circles: Vec<CircleEntry>,
    /// `|P_{v3}|` keyed by the parameter `v3`.
    pub p_sizes: BTreeMap<String, usize>,
    #[serde(rename = "Q")]
    pub q: u64,
    pub sum_p: u64,
    pub i_prime: Option<u64>,
    pub i: Option<u64>,
    /// `I / (|G|^(2/3) |P|^(2/3) + |G| + |P|)` with `|G| = n1 (n1 - 1)` curves
    /// and `|P| = n2^2` points; observational only.
    pub incidence_ratio: Option<f64>,
    pub degenerate_specializations: Vec<[String; 2]>,
    pub verdicts: Vec<Verdict>,
}

impl CountReport {
    pub fn all_hold(&self) -> bool {
        self.verdicts.iter().all(|v| v.holds)
    }
}

pub fn count_report(cfg: &Configuration, with_incidences: bool) -> CountReport {
    let triples = count_unit_triples(cfg);
    let inv = circle_inventory(cfg, &triples);
    let dc = double_count(cfg, &triples);
    let inc = with_incidences.then(|| count_incidences(cfg));
    let [n1, n2, n3] = cfg.sizes();
    let t = |i: usize, k: usize| format_rational(&cfg.theta(i)[k].0);
    let ratio = inc.as_ref().map(|c| {
        let g = (n1 * n1.saturating_sub(1)) as f64;
        let p = (n2 * n2) as f64;
        let den = (g * p).powf(2.0 / 3.0) + g + p;
        if den == 0.0 {
            0.0
        } else {
            c.i as f64 / den
        }
    });
    CountReport {
        sizes: cfg.sizes(),
        triples: triples.iter().map(|x| [t(0, x[0]), t(1, x[1]), t(2, x[2])]).collect(),
        triple_count: triples.len(),
        m: inv.len(),
        circles: inv
            .iter()
            .map(|(o, ts)| CircleEntry {
                center: [format_rational(&o.x), format_rational(&o.y)],
                triples: ts.len(),
            })
            .collect(),
        p_sizes: (0..n3).map(|k| (t(2, k), dc.p_sizes[k])).collect(),
        q: dc.q,
        sum_p: dc.sum_p,
        i_prime: inc.as_ref().map(|c| c.i_prime),
        i: inc.as_ref().map(|c| c.i),
        incidence_ratio: ratio,
        degenerate_specializations: inc
            .as_ref()
            .map(|c| c.degenerate.iter().map(|d| [t(0, d[0]), t(1, d[1])]).collect())
            .unwrap_or_default(),
        verdicts: verdicts(inv.len(), &dc, n3, inc.map(|c| c.i_prime)),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    pub config: Configuration,
    /// Old circle indices now playing the roles of `C1, C2, C3`.
    pub roles: [usize; 3],
    pub original_triples: usize,
    pub retained_triples: usize,
    pub kept_points: usize,
}

/// Role choices `(i, j)`: keep the points of `S_i` strictly outside `D_j`.
const ROLE_CHOICES: [(usize, usize); 6] = [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)];

/// Discards points so that the new first set lies strictly outside the
/// closed disk of the new second circle, keeping the most unit triples.
///
/// Every unit triple has a point `p_i` outside some disk `D_j`, `j != i`, so
/// the best of the six choices keeps at least a sixth of the triples.
pub fn reduce_s1_outside_d2(cfg: &Configuration) -> Result<Reduction> {
    let triples = count_unit_triples(cfg);
    let pts = [cfg.points(0), cfg.points(1), cfg.points(2)];
    let one = Rational::from_integer(1.into());
    let mut best: Option<(usize, usize, usize, Vec<bool>)> = None;
    for (i, j) in ROLE_CHOICES {
        let keep: Vec<bool> = pts[i].iter().map(|p| p.dist2(cfg.center(j)) > one).collect();
        let retained = triples.iter().filter(|t| keep[t[i]]).count();
        if best.as_ref().map_or(true, |b| retained > b.2) {
            best = Some((i, j, retained, keep));
        }
    }
    let (i, j, retained, keep) = best.expect("six choices");
    if retained == 0 && !triples.is_empty() {
        return Err(Error::Internal("reduction lost every unit triple".into()));
    }
    let k = 3 - i - j;
    let config = cfg.filtered(i, |idx| keep[idx]).permuted([i, j, k]);
    Ok(Reduction {
        kept_points: keep.iter().filter(|&&b| b).count(),
        config,
        roles: [i, j, k],
        original_triples: triples.len(),
        retained_triples: retained,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingRow {
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub triples: usize,
    pub sum_p: u64,
    #[serde(rename = "Q")]
    pub q: u64,
    pub i_prime: u64,
    pub i: u64,
    pub seconds: f64,
    pub verdicts: Vec<Verdict>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    pub kind: String,
    pub seed: u64,
    pub rows: Vec<ScalingRow>,
    /// Least-squares slope of `ln max(M, 1)` against `ln n`.
    pub slope: f64,
}

impl ScalingReport {
    pub fn all_hold(&self) -> bool {
        self.rows.iter().all(|r| r.verdicts.iter().all(|v| v.holds))
    }
}

/// Seed for the run at size `n`.
pub fn seed_for(seed: u64, n: usize) -> u64 {
    seed.wrapping_add((n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

pub fn fit_slope(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// One configuration per `n`, with full counts and verdicts.
pub fn scaling_experiment(kind: GeneratorKind, ns: &[usize], seed: u64) -> Result<ScalingReport> {
    if ns.len() < 3 {
        return Err(Error::InvalidInput("scaling needs at least three sizes".into()));
    }
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("sizes must be strictly ascending".into()));
    }
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let cfg = generate(&GeneratorSpec::new(kind, n, seed_for(seed, n)))?;
        let start = Instant::now();
        let r = count_report(&cfg, true);
        rows.push(ScalingRow {
            n,
            m: r.m,
            triples: r.triple_count,
            sum_p: r.sum_p,
            q: r.q,
            i_prime: r.i_prime.unwrap_or(0),
            i: r.i.unwrap_or(0),
            seconds: start.elapsed().as_secs_f64(),
            verdicts: r.verdicts,
        });
    }
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| ((r.n as f64).ln(), (r.m.max(1) as f64).ln()))
        .collect();
    Ok(ScalingReport {
        kind: kind.to_string(),
        seed,
        slope: fit_slope(&pts),
        rows,
    })
}

pub const SCALING_HEADER: &str = "n,M,triples,sumP,Q,Iprime,I,seconds";

/// Writes the scaling CSV; `timestamps = false` writes `0` seconds so that
/// identical runs give identical bytes.
pub fn write_scaling_csv<W: Write>(out: &mut W, report: &ScalingReport, timestamps: bool) -> Result<()> {
    writeln!(out, "{SCALING_HEADER}")?;
    for r in &report.rows {
        let secs = if timestamps { format!("{:.6}", r.seconds) } else { "0".into() };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.n, r.m, r.triples, r.sum_p, r.q, r.i_prime, r.i, secs
        )?;
    }
    Ok(())
}
