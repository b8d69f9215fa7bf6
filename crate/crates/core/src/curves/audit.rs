//! Detecting curves that share a component by counting common zeros on
//! vertical probe lines.
//!
//! Two curves of bidegree `(d, d)` without a common component meet in at most
//! `2 d^2` points, so probing `2 d^2 + 1` vertical lines and counting more than
//! `2 d^2` common fiber roots certifies a shared (non-vertical) component.
//! Counts are taken over two prime fields; reduction can only merge roots, so
//! the smaller of the two counts is used.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::config::Configuration;
use crate::error::Result;
use crate::exact::modp::{PrimeField, MERSENNE_31, MERSENNE_61};
use crate::exact::{int, rat, Rational, UniPoly};
use crate::geometry::{param_point, OrientationParam};
use crate::phi::{Branch, UltraTag};

use super::trace::{chain_for, find_transitions, trace_arcs, TraceOptions};
use super::{CurveRef, ModularFibers, FIBER_DEGREE_BOUND};

#[derive(Debug, Clone, PartialEq)]
pub struct AuditOptions {
    pub degree_bound: usize,
    /// Pairs with strictly more common probe zeros are flagged.
    pub threshold: usize,
    pub probes: usize,
    /// When set, each primal curve is traced with this angular step and the
    /// ultra-degenerate tags met at transitions join the exclusion list.
    pub trace_step: Option<f64>,
}

impl Default for AuditOptions {
    fn default() -> Self {
        let d = FIBER_DEGREE_BOUND;
        AuditOptions {
            degree_bound: d,
            threshold: 2 * d * d,
            probes: 2 * d * d + 1,
            trace_step: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairCount {
    pub i: usize,
    pub j: usize,
    pub shared: usize,
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Exclusion {
    pub curve: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub curves: Vec<String>,
    pub threshold: usize,
    pub probe_count: usize,
    pub pairs: Vec<PairCount>,
    /// Shared-zero count -> number of pairs.
    pub shared_histogram: BTreeMap<usize, usize>,
    /// Groups of curves linked by flagged pairs (singletons omitted).
    pub components: Vec<Vec<usize>>,
    /// Group size -> number of groups.
    pub component_histogram: BTreeMap<usize, usize>,
    pub max_unflagged: usize,
    pub exclusions: Vec<Exclusion>,
    /// Probe abscissae where a curve's fiber had to be taken as identically zero.
    pub degenerate_probes: usize,
}

/// `count` abscissae `k - 256 + 1/3`, skipping any value in `avoid`.
pub fn probe_abscissae(count: usize, avoid: &[Rational]) -> Vec<Rational> {
    let avoid: BTreeSet<&Rational> = avoid.iter().collect();
    let mut out = Vec::with_capacity(count);
    let mut k: i64 = 0;
    while out.len() < count {
        let t = int(k - 256) + rat(1, 3);
        if !avoid.contains(&t) {
            out.push(t);
        }
        k += 1;
    }
    out
}

const PRIMES: [u64; 2] = [MERSENNE_31, MERSENNE_61];

/// Square-free fibers of one curve at every probe, per prime. An empty vector
/// means "identically zero"; `None` means the reduction failed.
struct CurveFibers {
    per_probe: Vec<[Option<Vec<u64>>; 2]>,
    degenerate: usize,
}

fn square_free(f: PrimeField, g: Vec<u64>) -> Vec<u64> {
    if g.len() <= 1 {
        return g;
    }
    let d = f.derivative(&g);
    let h = f.gcd(&g, &d);
    if h.len() <= 1 {
        return g;
    }
    div_exact(f, &g, &h)
}

fn div_exact(f: PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv = f.inv(b[db]);
    let mut q = vec![0u64; a.len() - db];
    while r.len() > db {
        let lead = *r.last().unwrap();
        let off = r.len() - 1 - db;
        let c = f.mul(lead, inv);
        q[off] = c;
        for (j, &bc) in b.iter().enumerate() {
            let t = f.mul(c, bc);
            r[off + j] = f.sub(r[off + j], t);
        }
        r.pop();
    }
    f.trim(q)
}

fn curve_fibers(cfg: &Configuration, c: &CurveRef, probes: &[Rational], d: usize) -> CurveFibers {
    let fibers: Vec<Option<ModularFibers>> = PRIMES
        .iter()
        .map(|&p| ModularFibers::new(cfg, c, PrimeField::new(p), d))
        .collect();
    let mut degenerate = 0;
    let per_probe = probes
        .iter()
        .map(|tx| {
            let p: UniPoly = c.specialize(cfg, &c.t_a, tx).poly;
            if p.is_zero() {
                degenerate += 1;
                return [Some(Vec::new()), Some(Vec::new())];
            }
            let mut out: [Option<Vec<u64>>; 2] = [None, None];
            for (k, mf) in fibers.iter().enumerate() {
                if let Some(mf) = mf {
                    out[k] = mf.fiber(&p).map(|g| square_free(mf.field(), g));
                }
            }
            out
        })
        .collect();
    CurveFibers { per_probe, degenerate }
}

fn common_roots(f: PrimeField, a: &[u64], b: &[u64]) -> usize {
    if a.is_empty() && b.is_empty() {
        // both fibers vanish: every point of the line is shared
        return usize::MAX / 4;
    }
    f.gcd(a, b).len().saturating_sub(1)
}

fn pair_shared(x: &CurveFibers, y: &CurveFibers) -> usize {
    let mut total = 0usize;
    for (fx, fy) in x.per_probe.iter().zip(&y.per_probe) {
        let mut best: Option<usize> = None;
        for k in 0..2 {
            if let (Some(a), Some(b)) = (&fx[k], &fy[k]) {
                let c = common_roots(PrimeField::new(PRIMES[k]), a, b);
                best = Some(best.map_or(c, |v| v.min(c)));
                if c == 0 {
                    break;
                }
            }
        }
        total = total.saturating_add(best.unwrap_or(0));
    }
    total
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    parent[i] = r;
    r
}

/// Pairwise shared-component audit over `curves`.
pub fn overlap_audit(cfg: &Configuration, curves: &[CurveRef], opts: &AuditOptions) -> Result<AuditReport> {
    let avoid: Vec<Rational> = cfg
        .theta(1)
        .iter()
        .chain(cfg.theta(0))
        .map(|t| t.0.clone())
        .collect();
    let probes = probe_abscissae(opts.probes, &avoid);
    let fibers: Vec<CurveFibers> = curves
        .par_iter()
        .map(|c| curve_fibers(cfg, c, &probes, opts.degree_bound))
        .collect();
    let idx: Vec<(usize, usize)> = (0..curves.len())
        .flat_map(|i| (i + 1..curves.len()).map(move |j| (i, j)))
        .collect();
    let pairs: Vec<PairCount> = idx
        .par_iter()
        .map(|&(i, j)| {
            let shared = pair_shared(&fibers[i], &fibers[j]);
            PairCount {
                i,
                j,
                shared,
                flagged: shared > opts.threshold,
            }
        })
        .collect();

    let mut shared_histogram = BTreeMap::new();
    let mut parent: Vec<usize> = (0..curves.len()).collect();
    let mut max_unflagged = 0;
    for p in &pairs {
        *shared_histogram.entry(p.shared).or_insert(0) += 1;
        if p.flagged {
            let (a, b) = (find(&mut parent, p.i), find(&mut parent, p.j));
            parent[a.max(b)] = a.min(b);
        } else {
            max_unflagged = max_unflagged.max(p.shared);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..curves.len() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let components: Vec<Vec<usize>> = groups.into_values().filter(|g| g.len() > 1).collect();
    let mut component_histogram = BTreeMap::new();
    for g in &components {
        *component_histogram.entry(g.len()).or_insert(0) += 1;
    }

    let exclusions = exclusions(cfg, curves, opts)?;
    Ok(AuditReport {
        curves: curves.iter().map(|c| c.to_string()).collect(),
        threshold: opts.threshold,
        probe_count: probes.len(),
        pairs,
        shared_histogram,
        components,
        component_histogram,
        max_unflagged,
        exclusions,
        degenerate_probes: fibers.iter().map(|f| f.degenerate).sum(),
    })
}

/// Pairs whose anchors sit at distance exactly 3 from a source-circle center
/// (forced by a same-fraction coincidence), plus optional traced tags.
fn exclusions(cfg: &Configuration, curves: &[CurveRef], opts: &AuditOptions) -> Result<Vec<Exclusion>> {
    let nine = int(9);
    let mut out = BTreeSet::new();
    for (k, c) in curves.iter().enumerate() {
        if c.role_swap {
            continue;
        }
        let a = param_point(cfg.center(0), &OrientationParam(c.t_a.clone()));
        let b = param_point(cfg.center(0), &OrientationParam(c.t_b.clone()));
        let checks = [
            (1, a.dist2(cfg.center(1)), "|a-c2|=3"),
            (2, a.dist2(cfg.center(2)), "|a-c3|=3"),
            (3, b.dist2(cfg.center(2)), "|b-c3|=3"),
            (4, b.dist2(cfg.center(1)), "|b-c2|=3"),
        ];
        for (frac, d2, what) in checks {
            if d2 == nine {
                out.insert(Exclusion {
                    curve: k,
                    reason: format!("N{frac}D{frac} possible: {what}"),
                });
            }
        }
        if let Some(step) = opts.trace_step {
            let Ok(chain) = chain_for(cfg, c) else {
                continue;
            };
            let t_opts = TraceOptions {
                step,
                ..TraceOptions::default()
            };
            for br in Branch::all4() {
                for arc in trace_arcs(&chain, br, &t_opts) {
                    for t in find_transitions(&chain, &arc, &t_opts) {
                        for tag in &t.report.ultra {
                            out.insert(Exclusion {
                                curve: k,
                                reason: format!("{} on a traced arc", UltraTag::name(tag)),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(out.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    #[test]
    fn probes_avoid_given_values() {
        let avoid = vec![rat(-767, 3)];
        let p = probe_abscissae(4, &avoid);
        assert_eq!(p.len(), 4);
        assert!(!p.contains(&avoid[0]));
        assert_eq!(p[0], rat(-764, 3));
    }

    #[test]
    fn curve_against_itself_is_flagged() {
        let cfg = Configuration::golden();
        let c = CurveRef::new(int(-1), rat(1, 2));
        let r = overlap_audit(&cfg, &[c.clone(), c], &AuditOptions::default()).unwrap();
        assert_eq!(r.pairs.len(), 1);
        assert!(r.pairs[0].flagged);
        assert_eq!(r.components, vec![vec![0, 1]]);
    }

    #[test]
    fn golden_pair_reported() {
        let cfg = Configuration::golden();
        let c = CurveRef::new(int(-1), rat(1, 2));
        let r = overlap_audit(&cfg, &[c.clone(), c.transpose()], &AuditOptions::default()).unwrap();
        assert_eq!(r.pairs.len(), 1);
        assert_eq!(r.probe_count, 513);
        assert_eq!(r.shared_histogram.values().sum::<usize>(), 1);
    }

    #[test]
    fn distance_three_exclusion() {
        // a = (1,0) on C1 around the origin, c2 = (4,0): |a - c2| = 3.
        let cfg = Configuration::from_rationals(
            [Point::from_ints(0, 0), Point::from_ints(4, 0), Point::from_ints(1, 2)],
            [vec![], vec![], vec![]],
        )
        .unwrap();
        let c = CurveRef::new(int(0), int(1));
        let ex = exclusions(&cfg, &[c], &AuditOptions::default()).unwrap();
        assert!(ex.iter().any(|e| e.reason.contains("|a-c2|=3")));
    }
}
