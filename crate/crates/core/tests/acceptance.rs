//! Acceptance suite. Runs as a plain binary so each criterion prints one
//! PASS/FAIL line in the normal test output; exits nonzero if any fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tricircle::configgen::{generate, GeneratorKind, GeneratorSpec};
use tricircle::counting::{
    count_incidences, count_report, count_unit_triples, reduce_s1_outside_d2, scaling_experiment,
    write_scaling_csv, Configuration, SCALING_HEADER,
};
use tricircle::curves::trace::{chain_for, find_transitions, trace_arcs, TraceOptions};
use tricircle::curves::{classify_point, curve_eval, curve_fiber, CurveRef, PointClass, FIBER_DEGREE_BOUND};
use tricircle::exact::{format_rational, int, rat, Rational};
use tricircle::geometry::{eval_f, FPoint, Point};
use tricircle::phi::{phi_apply, phi_derivative, Branch, PhiChain, PhiStep};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let el = start.elapsed();
    check(el < limit, || format!("{what} took {el:?}, limit {limit:?}"))
}

fn rand_rat(rng: &mut ChaCha8Rng, span: i64, den: i64) -> Rational {
    rat(rng.gen_range(-span * den..=span * den), den)
}

fn rand_point(rng: &mut ChaCha8Rng, span: i64, den: i64) -> Point {
    Point::new(rand_rat(rng, span, den), rand_rat(rng, span, den))
}

/// `c + ((1-t^2)/(1+t^2), 2t/(1+t^2))`, written out independently.
fn on_unit_circle(c: &Point, t: &Rational) -> Point {
    let d = Rational::one() + t * t;
    Point::new(&c.x + (Rational::one() - t * t) / &d, &c.y + int(2) * t / &d)
}

fn d2(p: &Point, q: &Point) -> Rational {
    let dx = &p.x - &q.x;
    let dy = &p.y - &q.y;
    &dx * &dx + &dy * &dy
}

/// Circumcenter by Cramer's rule on the two perpendicular-bisector equations.
fn oracle_circumcenter(p: &Point, q: &Point, r: &Point) -> Option<Point> {
    let (a1, b1) = (int(2) * (&q.x - &p.x), int(2) * (&q.y - &p.y));
    let (a2, b2) = (int(2) * (&r.x - &p.x), int(2) * (&r.y - &p.y));
    let n = |s: &Point| &s.x * &s.x + &s.y * &s.y;
    let (e1, e2) = (n(q) - n(p), n(r) - n(p));
    let det = &a1 * &b2 - &a2 * &b1;
    if det.is_zero() {
        return None;
    }
    Some(Point::new((&e1 * &b2 - &e2 * &b1) / &det, (&a1 * &e2 - &a2 * &e1) / &det))
}

fn shoelace_sq(p: &Point, q: &Point, r: &Point) -> Rational {
    let twice = &p.x * (&q.y - &r.y) + &q.x * (&r.y - &p.y) + &r.x * (&p.y - &q.y);
    &twice * &twice / int(4)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let g = Configuration::from_rationals(
        [Point::from_ints(1, 1), Point::from_ints(-1, 1), Point::from_ints(0, 2)],
        [vec![int(-1), rat(1, 2)], vec![int(-1), rat(1, 2)], vec![int(-1)]],
    )
    .map_err(|e| e.to_string())?;
    let r = count_report(&g, false);
    let got: BTreeSet<[String; 3]> = r.triples.iter().cloned().collect();
    let want: BTreeSet<[String; 3]> = [["-1", "-1", "-1"], ["1/2", "1/2", "-1"]]
        .iter()
        .map(|t| t.map(String::from))
        .collect();
    check(got == want, || format!("triples {got:?}"))?;
    check(r.m == 2 && r.sum_p == 2 && r.q == 4, || format!("M={} sum_P={} Q={}", r.m, r.sum_p, r.q))?;
    check((r.m * r.m) as u64 == r.q * g.sizes()[2] as u64, || "M^2 != Q*n3".into())?;
    let ab = CurveRef::new(int(-1), rat(1, 2));
    let ba = CurveRef::new(rat(1, 2), int(-1));
    let v1 = curve_eval(&g, &ab, &int(-1), &rat(1, 2)).map_err(|e| e.to_string())?;
    let v2 = curve_eval(&g, &ba, &rat(1, 2), &int(-1)).map_err(|e| e.to_string())?;
    check(v1.is_zero() && v2.is_zero(), || format!("curve values {v1}, {v2}"))?;
    within(start, Duration::from_secs(1), "golden fixture")?;
    Ok(format!("M=2 sum_P=2 Q=4, M = (Q n3)^(1/2), both curve values 0, {:?}", start.elapsed()))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut done = 0;
    while done < 1000 {
        let (p, q, r) = (rand_point(&mut rng, 5, 7), rand_point(&mut rng, 5, 7), rand_point(&mut rng, 5, 7));
        let Some(o) = oracle_circumcenter(&p, &q, &r) else { continue };
        let s2 = shoelace_sq(&p, &q, &r);
        let rr = d2(&o, &p);
        let f = eval_f(&p, &q, &r);
        check(f == int(16) * &s2 * (&rr - Rational::one()), || {
            format!("identity fails at {p:?} {q:?} {r:?}")
        })?;
        done += 1;
    }
    let mut on = 0;
    while on < 1000 {
        let c = rand_point(&mut rng, 4, 5);
        let ts: Vec<Rational> = (0..3).map(|_| rand_rat(&mut rng, 6, 11)).collect();
        if ts[0] == ts[1] || ts[0] == ts[2] || ts[1] == ts[2] {
            continue;
        }
        let pts: Vec<Point> = ts.iter().map(|t| on_unit_circle(&c, t)).collect();
        let f = eval_f(&pts[0], &pts[1], &pts[2]);
        check(f.is_zero(), || format!("F = {f} on the unit circle at {c:?}"))?;
        on += 1;
    }
    within(start, Duration::from_secs(10), "F identities")?;
    Ok(format!("1000 identity checks, 1000 on-circle zeros, {:?}", start.elapsed()))
}

fn suite_configs() -> Vec<Configuration> {
    let kinds = [
        GeneratorKind::RandomUniform,
        GeneratorKind::GridOrientations,
        GeneratorKind::GoldenReplicated,
        GeneratorKind::TangentCircles,
        GeneratorKind::GridOrientations,
    ];
    (0..50u64)
        .map(|s| {
            let kind = kinds[s as usize % kinds.len()];
            let n = [4, 8, 12][s as usize % 3];
            generate(&GeneratorSpec::new(kind, n, 1000 + s)).expect("generator")
        })
        .collect()
}

/// Unit triples recomputed from scratch with the test's own circumcenter.
fn oracle_triples(cfg: &Configuration) -> usize {
    let pts = [cfg.points(0), cfg.points(1), cfg.points(2)];
    let mut count = 0;
    for p in &pts[0] {
        for q in &pts[1] {
            for r in &pts[2] {
                if let Some(o) = oracle_circumcenter(p, q, r) {
                    if d2(&o, p).is_one() && !cfg.centers().contains(&o) {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

fn criterion_3(cfgs: &[Configuration]) -> Outcome {
    let start = Instant::now();
    let mut total_triples = 0;
    let mut max_m = 0;
    for (k, cfg) in cfgs.iter().enumerate() {
        let r = count_report(cfg, true);
        let n3 = cfg.sizes()[2] as u64;
        let m = r.m as u64;
        let ip = r.i_prime.ok_or("missing incidences")?;
        check(m <= r.sum_p && r.sum_p <= 8 * m, || format!("config {k}: M={m} sum_P={}", r.sum_p))?;
        check(m * m <= r.q * n3, || format!("config {k}: M^2 > Q n3"))?;
        check(r.sum_p * r.sum_p <= r.q * n3, || format!("config {k}: sum_P^2 > Q n3"))?;
        check(r.q <= 4 * ip, || format!("config {k}: Q={} > 4I'={}", r.q, 4 * ip))?;
        check(r.all_hold(), || format!("config {k}: library verdict false"))?;
        let oracle = oracle_triples(cfg);
        check(oracle == r.triple_count, || format!("config {k}: oracle {oracle} vs {}", r.triple_count))?;
        total_triples += r.triple_count;
        max_m = max_m.max(r.m);
    }
    within(start, Duration::from_secs(300), "inequality suite")?;
    Ok(format!(
        "50 configs, {total_triples} unit triples, max M={max_m}, zero violations, {:?}",
        start.elapsed()
    ))
}

fn criterion_4(cfgs: &[Configuration]) -> Outcome {
    let mut retained = 0;
    let mut original = 0;
    for (k, cfg) in cfgs.iter().enumerate() {
        let red = reduce_s1_outside_d2(cfg).map_err(|e| format!("config {k}: {e}"))?;
        let c2 = red.config.center(1);
        for p in red.config.points(0) {
            check(d2(&p, c2) > Rational::one(), || format!("config {k}: {p:?} inside D2"))?;
        }
        let need = red.original_triples.div_ceil(6);
        check(red.retained_triples >= need, || {
            format!("config {k}: kept {} of {}", red.retained_triples, red.original_triples)
        })?;
        let recount = count_unit_triples(&red.config).len();
        check(recount == red.retained_triples, || {
            format!("config {k}: reduced config has {recount} triples, reported {}", red.retained_triples)
        })?;
        retained += red.retained_triples;
        original += red.original_triples;
    }
    Ok(format!("50 configs, retained {retained} of {original} triples, zero violations"))
}

fn angle_between(u: FPoint, v: FPoint) -> f64 {
    (u.x * v.y - u.y * v.x).atan2(u.dot(v))
}

fn rand_fpoint(rng: &mut ChaCha8Rng, span: f64) -> FPoint {
    FPoint::new(rng.gen_range(-span..span), rng.gen_range(-span..span))
}

fn f_float(p: FPoint, q: FPoint, r: FPoint) -> f64 {
    let (x, y, z) = (p.dist2(q), p.dist2(r), q.dist2(r));
    x * x + y * y + z * z - 2.0 * (x * y + x * z + y * z) + x * y * z
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < 200 {
        let anchor = rand_fpoint(&mut rng, 2.0);
        let c0 = rand_fpoint(&mut rng, 2.0);
        let br = if rng.gen_bool(0.5) { Branch::Plus } else { Branch::Minus };
        let Ok(step) = PhiStep::new(anchor, c0, br) else { continue };
        let v: f64 = rng.gen_range(-3.0..3.0);
        let at = |v: f64| c0 + FPoint::new(v.cos(), v.sin());
        let Ok(d) = phi_derivative(&step, at(v), 1e-3) else { continue };
        if at(v).dist2(anchor) > 4.0 - 1e-2 {
            continue;
        }
        let (Ok(w1), Ok(w0)) = (phi_apply(&step, at(v + h)), phi_apply(&step, at(v - h))) else { continue };
        let fd = angle_between(w0 - anchor, w1 - anchor) / (2.0 * h);
        let rel = (fd - d).abs() / d.abs();
        check(rel <= 1e-5, || format!("phi derivative {d} vs finite difference {fd}"))?;
        worst = worst.max(rel);
        done += 1;
    }
    let mut chains = 0;
    let mut worst_chain: f64 = 0.0;
    let mut worst_f: f64 = 0.0;
    while chains < 200 {
        let c2 = rand_fpoint(&mut rng, 1.0);
        let c3 = rand_fpoint(&mut rng, 1.5);
        let a = rand_fpoint(&mut rng, 2.0);
        let b = rand_fpoint(&mut rng, 2.0);
        let Ok(chain) = PhiChain::new(a, b, c2, c3) else { continue };
        let br: [Branch; 4] = std::array::from_fn(|_| if rng.gen_bool(0.5) { Branch::Plus } else { Branch::Minus });
        let v: f64 = rng.gen_range(-3.0..3.0);
        let t = (v / 2.0).tan();
        let Ok(der) = chain.derivative(t, br, 1e-3) else { continue };
        let (Ok(tr), Ok(tp), Ok(tm)) = (
            chain.apply(t, br),
            chain.apply(((v + h) / 2.0).tan(), br),
            chain.apply(((v - h) / 2.0).tan(), br),
        ) else {
            continue;
        };
        let pts = [tr.x, tr.w, tr.z, tr.w2];
        let anchors = [a, c3, b, c2];
        if pts.iter().zip(&anchors).any(|(p, q)| p.dist2(*q) > 4.0 - 1e-2) {
            continue;
        }
        let fd = angle_between(tm.y - c2, tp.y - c2) / (2.0 * h);
        let rel = (fd - der.product).abs() / der.product.abs();
        check(rel <= 1e-5, || format!("chain derivative {} vs finite difference {fd}", der.product))?;
        let fa = f_float(a, tr.x, tr.z).abs();
        let fb = f_float(b, tr.y, tr.z).abs();
        check(fa <= 1e-9 && fb <= 1e-9, || format!("endpoint F values {fa}, {fb}"))?;
        worst_chain = worst_chain.max(rel);
        worst_f = worst_f.max(fa).max(fb);
        chains += 1;
    }
    Ok(format!(
        "200 steps (max rel err {worst:.1e}), 200 chains (max rel err {worst_chain:.1e}, max |F| {worst_f:.1e})"
    ))
}

/// Real common zero `z` of the two specializations, found geometrically:
/// `z` is on `C3` and at unit distance from a unit circle center through
/// `(p, x)` and through `(q, y)`.
fn geometric_real_witness(cfg: &Configuration, p: FPoint, x: FPoint, q: FPoint, y: FPoint) -> bool {
    let c3 = cfg.center(2).to_f();
    let zs = |u: FPoint, v: FPoint| -> Vec<FPoint> {
        let mut out = Vec::new();
        for w in unit_centers_f(u, v) {
            out.extend(unit_centers_f(c3, w));
        }
        out
    };
    let za = zs(p, x);
    let zb = zs(q, y);
    za.iter().any(|s| zb.iter().any(|t| s.dist2(*t) < 1e-10))
}

/// Centers of unit circles through `u` and `v` (the two meeting points of
/// unit circles about `u` and `v`), tolerating tangency.
fn unit_centers_f(u: FPoint, v: FPoint) -> Vec<FPoint> {
    let d2 = u.dist2(v);
    if d2 == 0.0 || d2 > 4.0 + 1e-9 {
        return Vec::new();
    }
    let h = (1.0 / d2 - 0.25).max(0.0).sqrt();
    let m = (u + v) * 0.5;
    let n = (v - u).perp();
    vec![m + n * h, m + n * (-h)]
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut on_real = 0;
    let mut on_nonreal = 0;
    let mut off = 0;
    let mut pairs = 0;
    let mut seed = 0u64;
    while pairs < 100 {
        seed += 1;
        let kind = if seed % 3 == 0 { GeneratorKind::RandomUniform } else { GeneratorKind::GridOrientations };
        let cfg = generate(&GeneratorSpec::new(kind, 4, 600 + seed)).map_err(|e| e.to_string())?;
        let t1 = cfg.theta(0);
        let t2 = cfg.theta(1);
        let (ia, ib) = (rng.gen_range(0..t1.len()), rng.gen_range(0..t1.len()));
        if ia == ib {
            continue;
        }
        let c = CurveRef::new(t1[ia].0.clone(), t1[ib].0.clone());
        // Grid probes hit the curve often; random probes mostly miss it.
        let (tx, ty) = if rng.gen_bool(0.6) {
            (t2[rng.gen_range(0..t2.len())].0.clone(), t2[rng.gen_range(0..t2.len())].0.clone())
        } else {
            (rand_rat(&mut rng, 3, 13), rand_rat(&mut rng, 3, 13))
        };
        let value = match curve_eval(&cfg, &c, &tx, &ty) {
            Ok(v) => v,
            Err(_) => continue,
        };
        let fiber = match curve_fiber(&cfg, &c, &tx, FIBER_DEGREE_BOUND) {
            Ok(f) => f,
            Err(_) => continue,
        };
        let on_fiber = fiber.eval(&ty).is_zero();
        check(on_fiber == value.is_zero(), || {
            format!("curve {c} at ({}, {}): fiber {on_fiber}, value {value}", format_rational(&tx), format_rational(&ty))
        })?;
        let class = classify_point(&cfg, &c, &tx, &ty).map_err(|e| e.to_string())?;
        let p = tricircle::geometry::param_point_f(cfg.center(0).to_f(), tricircle::curves::trace::approx(&c.t_a));
        let q = tricircle::geometry::param_point_f(cfg.center(0).to_f(), tricircle::curves::trace::approx(&c.t_b));
        let x = tricircle::geometry::param_point_f(cfg.center(1).to_f(), tricircle::curves::trace::approx(&tx));
        let y = tricircle::geometry::param_point_f(cfg.center(1).to_f(), tricircle::curves::trace::approx(&ty));
        let witness = geometric_real_witness(&cfg, p, x, q, y);
        match class {
            PointClass::NotOnCurve => {
                check(!on_fiber, || "not-on-curve point is a fiber root".into())?;
                check(!witness, || format!("curve {c}: geometric witness off the curve"))?;
                off += 1;
            }
            PointClass::RealArc => {
                check(on_fiber && witness, || format!("curve {c}: real arc without witness"))?;
                on_real += 1;
            }
            PointClass::NonRealArc => {
                check(on_fiber && !witness, || format!("curve {c}: non-real arc with real witness"))?;
                on_nonreal += 1;
            }
        }
        pairs += 1;
    }

    let opts = TraceOptions::default();
    let mut arcs_checked = 0;
    let mut transitions = 0;
    let mut seed = 0u64;
    while arcs_checked < 20 {
        seed += 1;
        let cfg = generate(&GeneratorSpec::new(GeneratorKind::RandomUniform, 3, 6000 + seed)).map_err(|e| e.to_string())?;
        let t1 = cfg.theta(0);
        let c = CurveRef::new(t1[0].0.clone(), t1[1].0.clone());
        let Ok(chain) = chain_for(&cfg, &c) else { continue };
        let br: [Branch; 4] = std::array::from_fn(|_| if rng.gen_bool(0.5) { Branch::Plus } else { Branch::Minus });
        for arc in trace_arcs(&chain, br, &opts) {
            if arcs_checked == 20 {
                break;
            }
            if arc.samples.is_empty() {
                continue;
            }
            for tr in find_transitions(&chain, &arc, &opts) {
                check(!tr.report.is_empty(), || {
                    format!("unannotated transition at t_x={} (step {})", tr.t_x, tr.failed_step)
                })?;
                transitions += 1;
            }
            arcs_checked += 1;
        }
    }
    Ok(format!(
        "100 probes ({on_real} real, {on_nonreal} non-real, {off} off), 20 arcs with {transitions} annotated transitions"
    ))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let r = scaling_experiment(GeneratorKind::RandomUniform, &[8, 16, 32, 64], 7).map_err(|e| e.to_string())?;
    let mut buf = Vec::new();
    write_scaling_csv(&mut buf, &r, true).map_err(|e| e.to_string())?;
    let text = String::from_utf8(buf).map_err(|e| e.to_string())?;
    let mut lines = text.lines();
    check(lines.next() == Some(SCALING_HEADER), || "bad CSV header".into())?;
    let rows: Vec<&str> = lines.collect();
    check(rows.len() == 4, || format!("{} CSV rows", rows.len()))?;
    for (row, n) in rows.iter().zip([8, 16, 32, 64]) {
        let f: Vec<&str> = row.split(',').collect();
        check(f.len() == 8, || format!("row `{row}`"))?;
        check(f[0].parse::<usize>().ok() == Some(n), || format!("row `{row}`"))?;
        check(f[1..7].iter().all(|v| v.parse::<u64>().is_ok()), || format!("row `{row}`"))?;
        check(f[7].parse::<f64>().map_or(false, |s| s >= 0.0), || format!("row `{row}`"))?;
    }
    for row in &r.rows {
        check(row.verdicts.iter().all(|v| v.holds), || format!("verdict false at n={}", row.n))?;
        check(row.verdicts.iter().any(|v| v.name.starts_with('Q')), || "Q <= 4I' not checked".into())?;
    }
    within(start, Duration::from_secs(600), "scaling")?;
    Ok(format!("n=8..64, all verdicts hold, slope={:.4}, {:?}", r.slope, start.elapsed()))
}

fn main() {
    let cfgs = suite_configs();
    let results: Vec<(&str, Outcome)> = vec![
        ("1 golden fixture", criterion_1()),
        ("2 F identities", criterion_2()),
        ("3 inequalities", criterion_3(&cfgs)),
        ("4 reduction", criterion_4(&cfgs)),
        ("5 derivatives", criterion_5()),
        ("6 curve consistency", criterion_6()),
        ("7 scaling", criterion_7()),
    ];
    let mut failed = 0;
    for (name, r) in &results {
        match r {
            Ok(msg) => println!("criterion {name}: PASS ({msg})"),
            Err(msg) => {
                failed += 1;
                println!("criterion {name}: FAIL ({msg})");
            }
        }
    }
    // Incidence counting on its own must agree with the report used above.
    let g = Configuration::golden();
    assert_eq!(count_incidences(&g).i_prime, count_report(&g, true).i_prime.unwrap());
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
