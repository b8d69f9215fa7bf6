//! Command-line front end. `run_with_io` is the testable entry point; the
//! binary only forwards the process arguments and standard streams.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::Configuration;
use crate::configgen::{generate, load, to_json, GeneratorKind, GeneratorSpec};
use crate::counting::{
    count_report, scaling_experiment, write_scaling_csv, CountReport, ScalingReport, Verdict,
};
use crate::curves::audit::{overlap_audit, AuditOptions};
use crate::curves::trace::{chain_for, find_transitions, trace_arcs, write_trace_csv, TraceOptions};
use crate::curves::{classify_point, CurveRef, PointClass};
use crate::error::Error;
use crate::exact::format_rational;
use crate::phi::Branch;

/// Largest `n` accepted by `incidence` (and incidence counting in `verify`)
/// without `--force`.
pub const INCIDENCE_CAP: usize = 24;
/// Largest `n` accepted by `count` without `--force`.
pub const COUNT_CAP: usize = 64;

#[derive(Debug, Parser)]
#[command(name = "tricircle", version, about = "Unit circles spanned by points on three unit circles")]
struct Cli {
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Leave out wall-clock fields so identical runs give identical output.
    #[arg(long, global = true)]
    no_timestamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Input {
    /// Configuration file (JSON).
    #[arg(short = 'i', long = "in")]
    input: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(short = 'o', long = "out")]
    out: Option<PathBuf>,
    /// Ignore the size cap.
    #[arg(long)]
    force: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a configuration.
    Gen {
        #[arg(long)]
        kind: GeneratorKind,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Source file for `--kind from-file`.
        #[arg(short = 'i', long = "in")]
        input: Option<PathBuf>,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Unit triples, spanned circles and the double-counting quantities.
    Count(Input),
    /// Points of the parameter grid lying on each curve, with arc type.
    Curves(Input),
    /// Incidences between the curves and the parameter grid.
    Incidence(Input),
    /// Pairwise shared-component audit of all curves.
    AuditOverlap {
        #[command(flatten)]
        io: Input,
        /// Common-root count above which a pair is flagged.
        #[arg(long)]
        threshold: Option<usize>,
    },
    /// Trace the real arcs of one curve through the explicit construction.
    Trace {
        #[command(flatten)]
        io: Input,
        /// Index of `a` in the first parameter list.
        #[arg(long, default_value_t = 0)]
        a: usize,
        /// Index of `b` in the first parameter list.
        #[arg(long, default_value_t = 1)]
        b: usize,
        /// Branch signs such as `--+-`; all sixteen when omitted.
        #[arg(long)]
        branches: Option<String>,
        /// Tolerance for degeneracy annotations.
        #[arg(long)]
        tol: Option<f64>,
        /// Sampling step in the angle of `x`.
        #[arg(long)]
        step: Option<f64>,
    },
    /// Counts over generated configurations of increasing size.
    Scaling {
        #[arg(long, default_value = "random-uniform")]
        kind: GeneratorKind,
        /// Ascending sizes, comma separated.
        #[arg(long = "n", value_delimiter = ',', default_value = "8,16,32,64")]
        ns: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV destination; the JSON summary then goes to stdout.
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Every count and inequality; exit 2 if any inequality fails.
    Verify(Input),
}

impl std::str::FromStr for Branches {
    type Err = Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        Branch::parse4(s).map(Branches)
    }
}

struct Branches([Branch; 4]);

enum Failure {
    Usage(String),
    Verdicts(Value),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Lib(e.into())
    }
}

type CliResult = std::result::Result<(), Failure>;

/// Runs the command line `argv` (program name first) and returns the exit
/// code: 0 on success, 1 on usage or input errors, 2 when an inequality
/// verdict fails or an internal invariant breaks.
pub fn run_with_io<W: Write, E: Write>(argv: &[String], out: &mut W, err: &mut E) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    1
                }
            };
        }
    };
    let result = match cli.jobs {
        Some(0) => Err(Failure::Usage("--jobs must be positive".into())),
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j).build() {
            Ok(pool) => {
                let (mut o, mut e) = (Vec::new(), Vec::new());
                let r = pool.install(|| dispatch(&cli, &mut o, &mut e));
                let _ = out.write_all(&o);
                let _ = err.write_all(&e);
                r
            }
            Err(e) => Err(Failure::Lib(Error::Internal(e.to_string()))),
        },
        None => dispatch(&cli, out, err),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
        Err(Failure::Verdicts(v)) => {
            let _ = writeln!(err, "{}", serde_json::to_string_pretty(&v).unwrap_or_default());
            2
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Internal(_) => 2,
                _ => 1,
            }
        }
    }
}

/// Runs with the process arguments and standard streams.
pub fn run() -> i32 {
    let argv: Vec<String> = std::env::args().collect();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with_io(&argv, &mut stdout.lock(), &mut stderr.lock())
}

fn emit<W: Write>(out: &mut W, path: Option<&Path>, text: &str) -> CliResult {
    match path {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit_json<W: Write, T: Serialize>(out: &mut W, path: Option<&Path>, v: &T, seconds: Option<f64>) -> CliResult {
    let mut value = serde_json::to_value(v).map_err(|e| Error::Internal(e.to_string()))?;
    if let (Some(s), Value::Object(m)) = (seconds, &mut value) {
        m.insert("seconds".into(), json!(s));
    }
    let mut text = serde_json::to_string_pretty(&value).map_err(|e| Error::Internal(e.to_string()))?;
    text.push('\n');
    emit(out, path, &text)
}

fn load_capped(io: &Input, cap: usize, what: &str) -> std::result::Result<Configuration, Failure> {
    let cfg = load(&io.input)?;
    if cfg.max_size() > cap && !io.force {
        return Err(Failure::Usage(format!(
            "{what} is capped at n <= {cap} (got {}); pass --force to run anyway",
            cfg.max_size()
        )));
    }
    Ok(cfg)
}

fn check_verdicts(verdicts: &[Verdict], context: Value) -> CliResult {
    let failed: Vec<&Verdict> = verdicts.iter().filter(|v| !v.holds).collect();
    if failed.is_empty() {
        return Ok(());
    }
    Err(Failure::Verdicts(json!({
        "error": "inequality verdict failed",
        "failed": failed,
        "context": context,
    })))
}

fn curves_of(cfg: &Configuration) -> Vec<CurveRef> {
    let t1 = cfg.theta(0);
    let mut v = Vec::new();
    for a in t1 {
        for b in t1 {
            if a != b {
                v.push(CurveRef::new(a.0.clone(), b.0.clone()));
            }
        }
    }
    v
}

fn dispatch<W: Write, E: Write>(cli: &Cli, out: &mut W, err: &mut E) -> CliResult {
    let start = Instant::now();
    let seconds = || (!cli.no_timestamp).then(|| start.elapsed().as_secs_f64());
    match &cli.command {
        Command::Gen { kind, n, seed, input, out: path } => {
            let mut spec = GeneratorSpec::new(*kind, *n, *seed);
            spec.path = input.clone();
            let cfg = generate(&spec)?;
            emit(out, path.as_deref(), &(to_json(&cfg) + "\n"))
        }
        Command::Count(io) => {
            let cfg = load_capped(io, COUNT_CAP, "count")?;
            let r = count_report(&cfg, false);
            emit_json(out, io.out.as_deref(), &r, seconds())?;
            check_verdicts(&r.verdicts, json!({ "M": r.m, "Q": r.q, "sum_p": r.sum_p }))
        }
        Command::Incidence(io) => {
            let cfg = load_capped(io, INCIDENCE_CAP, "incidence")?;
            let r = count_report(&cfg, true);
            let summary = json!({
                "sizes": r.sizes,
                "i_prime": r.i_prime,
                "i": r.i,
                "Q": r.q,
                "incidence_ratio": r.incidence_ratio,
                "degenerate_specializations": r.degenerate_specializations,
                "verdicts": r.verdicts.iter().filter(|v| v.name.starts_with("Q")).collect::<Vec<_>>(),
            });
            emit_json(out, io.out.as_deref(), &summary, seconds())?;
            check_verdicts(&r.verdicts, summary)
        }
        Command::Verify(io) => {
            let cfg = load(&io.input)?;
            let with_inc = cfg.max_size() <= INCIDENCE_CAP || io.force;
            if !with_inc {
                writeln!(err, "note: n > {INCIDENCE_CAP}, skipping Q <= 4I' (use --force)")?;
            }
            let r: CountReport = count_report(&cfg, with_inc);
            let summary = json!({
                "all_hold": r.all_hold(),
                "M": r.m,
                "triple_count": r.triple_count,
                "Q": r.q,
                "sum_p": r.sum_p,
                "i_prime": r.i_prime,
                "verdicts": r.verdicts,
            });
            emit_json(out, io.out.as_deref(), &summary, seconds())?;
            check_verdicts(&r.verdicts, summary)
        }
        Command::Curves(io) => {
            let cfg = load_capped(io, INCIDENCE_CAP, "curves")?;
            let mut text = String::from("t_a,t_b,t_x,t_y,class\n");
            let t2 = cfg.theta(1);
            for c in curves_of(&cfg) {
                for x in t2 {
                    for y in t2 {
                        let class = match classify_point(&cfg, &c, &x.0, &y.0) {
                            Ok(PointClass::NotOnCurve) => continue,
                            Ok(PointClass::RealArc) => "real",
                            Ok(PointClass::NonRealArc) => "non-real",
                            Err(Error::DegenerateSpecialization { .. }) => "degenerate",
                            Err(e) => return Err(e.into()),
                        };
                        text += &format!(
                            "{},{},{},{},{class}\n",
                            format_rational(&c.t_a),
                            format_rational(&c.t_b),
                            format_rational(&x.0),
                            format_rational(&y.0)
                        );
                    }
                }
            }
            emit(out, io.out.as_deref(), &text)
        }
        Command::AuditOverlap { io, threshold } => {
            let cfg = load_capped(io, 8, "audit-overlap")?;
            let mut opts = AuditOptions::default();
            if let Some(t) = threshold {
                opts.threshold = *t;
            }
            let r = overlap_audit(&cfg, &curves_of(&cfg), &opts)?;
            emit_json(out, io.out.as_deref(), &r, seconds())
        }
        Command::Trace { io, a, b, branches, tol, step } => {
            let cfg = load(&io.input)?;
            let t1 = cfg.theta(0);
            if *a >= t1.len() || *b >= t1.len() || a == b {
                return Err(Failure::Usage("--a and --b must be distinct indices into theta1".into()));
            }
            let mut opts = TraceOptions::default();
            if let Some(t) = tol {
                opts.annotate_tol = *t;
            }
            if let Some(s) = step {
                if !(*s > 0.0) {
                    return Err(Failure::Usage("--step must be positive".into()));
                }
                opts.step = *s;
            }
            let c = CurveRef::new(t1[*a].0.clone(), t1[*b].0.clone());
            let chain = chain_for(&cfg, &c)?;
            let sets: Vec<[Branch; 4]> = match branches {
                Some(s) => vec![s.parse::<Branches>()?.0],
                None => Branch::all4().collect(),
            };
            let arcs: Vec<_> = sets.into_iter().flat_map(|br| trace_arcs(&chain, br, &opts)).collect();
            let mut buf = Vec::new();
            write_trace_csv(&mut buf, &chain, &arcs, opts.annotate_tol)?;
            emit(out, io.out.as_deref(), &String::from_utf8_lossy(&buf))?;
            let transitions: usize = arcs.iter().map(|arc| find_transitions(&chain, arc, &opts).len()).sum();
            writeln!(err, "arcs={} transitions={transitions}", arcs.len())?;
            Ok(())
        }
        Command::Scaling { kind, ns, seed, out: path } => {
            let r: ScalingReport = scaling_experiment(*kind, ns, *seed)?;
            let mut csv = Vec::new();
            write_scaling_csv(&mut csv, &r, !cli.no_timestamp)?;
            let csv = String::from_utf8_lossy(&csv).into_owned();
            match path {
                Some(p) => {
                    fs::write(p, &csv)?;
                    emit_json(out, None, &r, None)?;
                }
                None => {
                    out.write_all(csv.as_bytes())?;
                    writeln!(err, "slope={}", r.slope)?;
                }
            }
            let verdicts: Vec<Verdict> = r.rows.iter().flat_map(|row| row.verdicts.clone()).collect();
            check_verdicts(&verdicts, json!({ "kind": r.kind, "seed": r.seed }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let argv: Vec<String> = std::iter::once("tricircle").chain(args.iter().copied()).map(String::from).collect();
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with_io(&argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(&["count"]).0, 1);
        assert_eq!(run(&["count", "--bogus"]).0, 1);
        assert_eq!(run(&[]).0, 1);
        assert_eq!(run(&["--help"]).0, 0);
    }

    #[test]
    fn failed_verdicts_exit_two() {
        let v = vec![Verdict { name: "x".into(), holds: false, lhs: "2".into(), rhs: "1".into() }];
        assert!(matches!(check_verdicts(&v, json!({})), Err(Failure::Verdicts(_))));
    }
}
