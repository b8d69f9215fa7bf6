//! Marching along real arcs of `gamma_{a,b}` with the explicit construction,
//! and locating the transition points where the real branch ends.

use std::f64::consts::PI;
use std::io::Write;

use serde::Serialize;

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::exact::{sturm_real_roots, to_f64, Rational};
use crate::phi::{classify_degeneracy, Branch, ChainTrace, DegeneracyReport, PhiChain};

use super::{curve_fiber, CurveRef, FIBER_DEGREE_BOUND};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceOptions {
    /// Angular step for `v_x`.
    pub step: f64,
    /// Marching range of `v_x`; must stay inside `(-pi, pi)`.
    pub v_min: f64,
    pub v_max: f64,
    /// Width in `t_x` to which transitions are refined.
    pub width: f64,
    /// Tolerance on squared distances for transition annotations.
    pub annotate_tol: f64,
    /// Below this distance to a degeneracy the step is halved.
    pub slow_down: f64,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            step: 1e-3,
            v_min: -PI + 1e-3,
            v_max: PI - 1e-3,
            width: 1e-6,
            annotate_tol: 1e-4,
            slow_down: 5e-2,
        }
    }
}

/// A bracket `[good, bad]` in `v_x`: the chain succeeds at `good` and fails at
/// step `failed_step` at `bad`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Exit {
    pub good: f64,
    pub bad: f64,
    pub failed_step: usize,
}

/// A maximal run of successful samples on one branch tuple.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TracedArc {
    pub branches: [Branch; 4],
    pub samples: Vec<ChainTrace>,
    pub start_exit: Option<Exit>,
    pub end_exit: Option<Exit>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Transition {
    pub t_x: f64,
    pub failed_step: usize,
    pub trace: ChainTrace,
    pub report: DegeneracyReport,
}

fn t_of(v: f64) -> f64 {
    (v / 2.0).tan()
}

/// The chain for curve `c` (primal curves only).
pub fn chain_for(cfg: &Configuration, c: &CurveRef) -> Result<PhiChain> {
    if c.role_swap {
        return Err(Error::InvalidInput("tracing is defined for primal curves".into()));
    }
    let a = crate::geometry::param_point(cfg.center(0), &crate::geometry::OrientationParam(c.t_a.clone()));
    let b = crate::geometry::param_point(cfg.center(0), &crate::geometry::OrientationParam(c.t_b.clone()));
    PhiChain::from_exact(&a, &b, cfg.center(1), cfg.center(2))
}

enum Sample {
    Ok(ChainTrace),
    Failed(usize),
    Break,
}

fn sample(chain: &PhiChain, v: f64, branches: [Branch; 4]) -> Sample {
    match chain.apply(t_of(v), branches) {
        Ok(tr) if tr.t_y.is_finite() => Sample::Ok(tr),
        Ok(_) => Sample::Break,
        Err(Error::ConstructionFailed { step, .. }) => Sample::Failed(step),
        Err(_) => Sample::Break,
    }
}

fn closeness(chain: &PhiChain, tr: &ChainTrace) -> f64 {
    let s = chain.state(tr);
    [
        (s.w, s.c2),
        (s.a, s.z),
        (s.w2, s.c3),
        (s.eta, s.b),
        (s.a, s.xi),
        (s.w, s.c3),
        (s.z, s.b),
        (s.w2, s.c2),
    ]
    .iter()
    .map(|(p, q)| (p.dist2(*q) - 4.0).abs())
    .fold(f64::INFINITY, f64::min)
}

/// Marches `v_x` across the options' range with fixed branch signs.
///
/// Branch signs are held fixed along the march, which keeps each sample on
/// the same continuous branch of the construction.
pub fn trace_arcs(chain: &PhiChain, branches: [Branch; 4], opts: &TraceOptions) -> Vec<TracedArc> {
    let mut arcs = Vec::new();
    let mut current: Option<TracedArc> = None;
    let mut prev: Option<(f64, Sample)> = None;
    let mut v = opts.v_min;
    while v <= opts.v_max {
        let s = sample(chain, v, branches);
        let mut h = opts.step;
        match &s {
            Sample::Ok(tr) => {
                if closeness(chain, tr) < opts.slow_down {
                    h /= 2.0;
                }
                let arc = current.get_or_insert_with(|| TracedArc {
                    branches,
                    samples: Vec::new(),
                    start_exit: match &prev {
                        Some((pv, Sample::Failed(step))) => Some(Exit {
                            good: v,
                            bad: *pv,
                            failed_step: *step,
                        }),
                        _ => None,
                    },
                    end_exit: None,
                });
                arc.samples.push(*tr);
            }
            Sample::Failed(step) => {
                if let Some(mut arc) = current.take() {
                    arc.end_exit = Some(Exit {
                        good: prev.as_ref().map_or(v, |p| p.0),
                        bad: v,
                        failed_step: *step,
                    });
                    arcs.push(arc);
                }
            }
            Sample::Break => {
                if let Some(arc) = current.take() {
                    arcs.push(arc);
                }
            }
        }
        prev = Some((v, s));
        v += h;
    }
    if let Some(arc) = current.take() {
        arcs.push(arc);
    }
    arcs
}

/// Refines the exits of an arc by bisection and annotates each with the
/// degeneracy conditions holding at the last successful point.
pub fn find_transitions(
    chain: &PhiChain,
    arc: &TracedArc,
    opts: &TraceOptions,
) -> Vec<Transition> {
    [arc.start_exit, arc.end_exit]
        .into_iter()
        .flatten()
        .filter_map(|e| refine_exit(chain, arc.branches, e, opts))
        .collect()
}

fn refine_exit(chain: &PhiChain, branches: [Branch; 4], e: Exit, opts: &TraceOptions) -> Option<Transition> {
    let (mut good, mut bad, mut step) = (e.good, e.bad, e.failed_step);
    let mut good_trace = match sample(chain, good, branches) {
        Sample::Ok(tr) => tr,
        _ => return None,
    };
    while (t_of(good) - t_of(bad)).abs() >= opts.width {
        let mid = 0.5 * (good + bad);
        if mid == good || mid == bad {
            break;
        }
        match sample(chain, mid, branches) {
            Sample::Ok(tr) => {
                good = mid;
                good_trace = tr;
            }
            Sample::Failed(s) => {
                bad = mid;
                step = s;
            }
            Sample::Break => return None,
        }
    }
    let report = classify_degeneracy(&chain.state(&good_trace), opts.annotate_tol);
    Some(Transition {
        t_x: good_trace.t_x,
        failed_step: step,
        trace: good_trace,
        report,
    })
}

/// Writes samples as CSV with the degeneracy conditions active within `tol`.
pub fn write_trace_csv<W: Write>(out: &mut W, chain: &PhiChain, arcs: &[TracedArc], tol: f64) -> Result<()> {
    writeln!(out, "branches,t_x,t_y,w_x,w_y,z_x,z_y,w2_x,w2_y,flags")?;
    for arc in arcs {
        let b = Branch::format4(&arc.branches);
        for s in &arc.samples {
            let flags = classify_degeneracy(&chain.state(s), tol).summary();
            writeln!(
                out,
                "{b},{},{},{},{},{},{},{},{},{}",
                s.t_x, s.t_y, s.w.x, s.w.y, s.z.x, s.z.y, s.w2.x, s.w2.y, flags
            )?;
        }
    }
    Ok(())
}

/// True when the exact fiber over `t_x` has a real root within `radius` of
/// `t_y` (counted by Sturm sequences).
pub fn fiber_root_near(
    cfg: &Configuration,
    c: &CurveRef,
    t_x: &Rational,
    t_y: f64,
    radius: f64,
) -> Result<bool> {
    let g = curve_fiber(cfg, c, t_x, FIBER_DEGREE_BOUND)?;
    let lo = crate::exact::from_f64(t_y - radius)?;
    let hi = crate::exact::from_f64(t_y + radius)?;
    Ok(sturm_real_roots(&g, Some(&lo), Some(&hi))?.count > 0)
}

/// Rounds a float parameter to a dyadic rational with denominator `2^bits`.
pub fn dyadic(t: f64, bits: i32) -> Rational {
    let scale = 2f64.powi(bits);
    let n = (t * scale).round() as i64;
    crate::exact::rat(n, 1i64 << bits)
}

pub fn approx(t: &Rational) -> f64 {
    to_f64(t)
}
