//! Deterministic configuration generators and the JSON file format.
//!
//! Files store every rational as a `"num/den"` string:
//!
//! ```json
//! {"version": 1, "c1": ["1", "1"], "c2": ["-1", "1"], "c3": ["0", "2"],
//!  "theta1": ["-1", "1/2"], "theta2": ["-1", "1/2"], "theta3": ["-1"]}
//! ```

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_integer::Integer;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::exact::{format_rational, int, parse_rational, rat, Rational};
use crate::geometry::{param_point, OrientationParam, Point};

pub const FORMAT_VERSION: u32 = 1;
/// Denominator of random parameters `k / d`, `k` uniform in `[-d, d]`.
pub const PARAM_DENOMINATOR: i64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    RandomUniform,
    Golden,
    GoldenReplicated,
    TangentCircles,
    GridOrientations,
    FromFile,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 6] = [
        GeneratorKind::RandomUniform,
        GeneratorKind::Golden,
        GeneratorKind::GoldenReplicated,
        GeneratorKind::TangentCircles,
        GeneratorKind::GridOrientations,
        GeneratorKind::FromFile,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::RandomUniform => "random-uniform",
            GeneratorKind::Golden => "golden",
            GeneratorKind::GoldenReplicated => "golden-replicated",
            GeneratorKind::TangentCircles => "tangent-circles",
            GeneratorKind::GridOrientations => "grid-orientations",
            GeneratorKind::FromFile => "from-file",
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GeneratorKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown generator kind `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    pub seed: u64,
    /// Every pairwise squared center distance must stay strictly below this.
    pub max_center_dist2: Rational,
    /// Input file for `from-file`.
    pub path: Option<PathBuf>,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, n: usize, seed: u64) -> Self {
        GeneratorSpec {
            kind,
            n,
            seed,
            max_center_dist2: int(16),
            path: None,
        }
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<Configuration> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match spec.kind {
        GeneratorKind::Golden => Ok(Configuration::golden()),
        GeneratorKind::FromFile => {
            let path = spec
                .path
                .as_ref()
                .ok_or_else(|| Error::InvalidSpec("from-file needs a path".into()))?;
            load(path)
        }
        GeneratorKind::RandomUniform => {
            let centers = random_centers(&mut rng, None, &spec.max_center_dist2)?;
            let thetas = [0, 1, 2].map(|_| random_params(&mut rng, spec.n, &BTreeSet::new()));
            Configuration::from_rationals(centers, transpose3(thetas)?)
        }
        GeneratorKind::GoldenReplicated => {
            let g = Configuration::golden();
            let mut thetas: Vec<Vec<Rational>> = Vec::new();
            for i in 0..3 {
                let mut t: Vec<Rational> = g.theta(i).iter().map(|p| p.0.clone()).collect();
                let have: BTreeSet<Rational> = t.iter().cloned().collect();
                let extra = random_params(&mut rng, spec.n.saturating_sub(t.len()), &have)?;
                t.extend(extra);
                thetas.push(t);
            }
            let [a, b, c]: [Vec<Rational>; 3] = thetas.try_into().unwrap();
            Configuration::from_rationals(g.centers().clone(), [a, b, c])
        }
        GeneratorKind::TangentCircles => {
            let fixed = (Point::from_ints(0, 0), Point::from_ints(2, 0));
            let centers = random_centers(&mut rng, Some(fixed), &spec.max_center_dist2)?;
            let thetas = [0, 1, 2].map(|_| random_params(&mut rng, spec.n, &BTreeSet::new()));
            Configuration::from_rationals(centers, transpose3(thetas)?)
        }
        GeneratorKind::GridOrientations => grid(&mut rng, spec),
    }
}

fn transpose3(v: [Result<Vec<Rational>>; 3]) -> Result<[Vec<Rational>; 3]> {
    let [a, b, c] = v;
    Ok([a?, b?, c?])
}

/// `n` distinct parameters `k / 1024` not in `avoid`.
fn random_params(rng: &mut ChaCha8Rng, n: usize, avoid: &BTreeSet<Rational>) -> Result<Vec<Rational>> {
    let d = PARAM_DENOMINATOR;
    let pool: Vec<Rational> = (-d..=d).map(|k| rat(k, d)).filter(|t| !avoid.contains(t)).collect();
    if n > pool.len() {
        return Err(Error::InvalidSpec(format!(
            "n = {n} exceeds the {} available parameters",
            pool.len()
        )));
    }
    Ok(sample(rng, pool.len(), n).into_iter().map(|i| pool[i].clone()).collect())
}

/// Three distinct centers with coordinates in `(1/8) Z`, `|x|, |y| <= 3/2`.
/// With `fixed`, `c1` and `c3` are given and only `c2` is drawn.
fn random_centers(
    rng: &mut ChaCha8Rng,
    fixed: Option<(Point, Point)>,
    max_dist2: &Rational,
) -> Result<[Point; 3]> {
    let draw = |rng: &mut ChaCha8Rng| Point::new(rat(rng.gen_range(-12..=12), 8), rat(rng.gen_range(-12..=12), 8));
    for _ in 0..1000 {
        let c = match &fixed {
            Some((c1, c3)) => [c1.clone(), draw(rng), c3.clone()],
            None => [draw(rng), draw(rng), draw(rng)],
        };
        let ok = (0..3).all(|i| {
            (i + 1..3).all(|j| c[i] != c[j] && &c[i].dist2(&c[j]) < max_dist2)
        });
        if ok {
            return Ok(c);
        }
    }
    Err(Error::InvalidSpec(
        "no center placement satisfies the distance constraint".into(),
    ))
}

/// Reduced fractions `p/q` ordered by height `max(|p|, q)`, `|p/q| <= 3`.
fn small_params(count: usize) -> Vec<Rational> {
    let mut out = Vec::new();
    let mut h: i64 = 1;
    while out.len() < count {
        let mut layer = BTreeSet::new();
        for q in 1..=h {
            for p in -h..=h {
                if (p.abs() == h || q == h) && p.gcd(&q) == 1 && p.abs() <= 3 * q {
                    layer.insert(rat(p, q));
                }
            }
        }
        out.extend(layer);
        h += 1;
    }
    out
}

/// Centers on a common unit circle, so that for every parameter shared by
/// all three lists the three points are translates of the centers and span
/// a unit circle. Parameters are small-height fractions.
fn grid(rng: &mut ChaCha8Rng, spec: &GeneratorSpec) -> Result<Configuration> {
    let offsets = small_params(16);
    let picks = sample(rng, offsets.len(), 3);
    let o = Point::new(rat(rng.gen_range(-4..=4), 4), rat(rng.gen_range(-4..=4), 4));
    let centers: Vec<Point> = picks
        .iter()
        .map(|i| param_point(&o, &OrientationParam(offsets[i].clone())))
        .collect();
    let centers: [Point; 3] = centers.try_into().unwrap();
    if (0..3).any(|i| (i + 1..3).any(|j| &centers[i].dist2(&centers[j]) >= &spec.max_center_dist2)) {
        return Err(Error::InvalidSpec("grid centers violate the distance constraint".into()));
    }
    let pool = small_params((2 * spec.n).max(16));
    let chosen: Vec<Rational> = sample(rng, pool.len(), spec.n)
        .into_iter()
        .map(|i| pool[i].clone())
        .collect();
    let shuffled = |rng: &mut ChaCha8Rng| -> Vec<Rational> {
        sample(rng, chosen.len(), chosen.len())
            .into_iter()
            .map(|i| chosen[i].clone())
            .collect()
    };
    let t1 = shuffled(rng);
    let t2 = shuffled(rng);
    let t3 = shuffled(rng);
    Configuration::from_rationals(centers, [t1, t2, t3])
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    version: u32,
    c1: [String; 2],
    c2: [String; 2],
    c3: [String; 2],
    theta1: Vec<String>,
    theta2: Vec<String>,
    theta3: Vec<String>,
}

pub fn to_json(cfg: &Configuration) -> String {
    let pt = |p: &Point| [format_rational(&p.x), format_rational(&p.y)];
    let th = |i: usize| cfg.theta(i).iter().map(|t| format_rational(&t.0)).collect();
    let raw = RawConfig {
        version: FORMAT_VERSION,
        c1: pt(cfg.center(0)),
        c2: pt(cfg.center(1)),
        c3: pt(cfg.center(2)),
        theta1: th(0),
        theta2: th(1),
        theta3: th(2),
    };
    serde_json::to_string_pretty(&raw).expect("plain strings serialize") + "\n"
}

pub fn save(cfg: &Configuration, path: &Path) -> Result<()> {
    std::fs::write(path, to_json(cfg))?;
    Ok(())
}

pub fn load(path: &Path) -> Result<Configuration> {
    let text = std::fs::read_to_string(path)?;
    from_json(&text)
}

/// Line (1-based) of the `k`-th occurrence of the quoted `value` after `key`.
fn locate(text: &str, key: &str, value: &str) -> usize {
    let start = text.find(&format!("\"{key}\"")).unwrap_or(0);
    let needle = format!("\"{value}\"");
    let pos = text[start..].find(&needle).map_or(start, |p| start + p);
    text[..pos].matches('\n').count() + 1
}

pub fn from_json(text: &str) -> Result<Configuration> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        field: "<document>".into(),
        message: e.to_string(),
    })?;
    if raw.version != FORMAT_VERSION {
        return Err(Error::Parse {
            line: locate(text, "version", ""),
            field: "version".into(),
            message: format!("unsupported version {}", raw.version),
        });
    }
    let field = |key: &str, idx: usize, s: &str| -> Result<Rational> {
        parse_rational(s).map_err(|e| Error::Parse {
            line: locate(text, key, s),
            field: format!("{key}[{idx}]"),
            message: e.to_string(),
        })
    };
    let point = |key: &str, v: &[String; 2]| -> Result<Point> {
        Ok(Point::new(field(key, 0, &v[0])?, field(key, 1, &v[1])?))
    };
    let list = |key: &str, v: &[String]| -> Result<Vec<Rational>> {
        v.iter().enumerate().map(|(i, s)| field(key, i, s)).collect()
    };
    Configuration::from_rationals(
        [point("c1", &raw.c1)?, point("c2", &raw.c2)?, point("c3", &raw.c3)?],
        [
            list("theta1", &raw.theta1)?,
            list("theta2", &raw.theta2)?,
            list("theta3", &raw.theta3)?,
        ],
    )
}
