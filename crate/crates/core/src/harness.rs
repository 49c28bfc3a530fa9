//! Experiment configuration, seeded sampling, sweeps and report emission.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::{
    isotropic_line_set, pointwise_sets, progression_null_set, sphere_counterexample_d5,
    sphere_product_counterexample, subgroup_circle_set, ConstructionOutput,
};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::geometry::{sphere_points, Coord, PointSet, Space};
use crate::incidence::{
    coverage_report, pair_similarity_check, sphere_uniformity_check, verify_l2_bound, verify_pointwise_bound,
};
use crate::report::{BoundReport, Measurement};
use crate::spectral::{fourier_transform, gauss_constant, gauss_sum, indicator, kloosterman_sum, SphereTransform};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Default bound on the number of subsets an exhaustive source may enumerate.
pub const DEFAULT_CAP: u64 = 10_000_000;

/// Absolute tolerance for character-sum identities.
pub const SPECTRAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstructionKind {
    ProgressionNullSet,
    SubgroupCircleSet,
    SphereProduct,
    SphereD5,
    IsotropicLineSet,
}

impl ConstructionKind {
    pub const ALL: [ConstructionKind; 5] = [
        ConstructionKind::ProgressionNullSet,
        ConstructionKind::SubgroupCircleSet,
        ConstructionKind::SphereProduct,
        ConstructionKind::SphereD5,
        ConstructionKind::IsotropicLineSet,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConstructionKind::ProgressionNullSet => "progression-null-set",
            ConstructionKind::SubgroupCircleSet => "subgroup-circle-set",
            ConstructionKind::SphereProduct => "sphere-product",
            ConstructionKind::SphereD5 => "sphere-d5",
            ConstructionKind::IsotropicLineSet => "isotropic-line-set",
        }
    }
}

impl FromStr for ConstructionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<ConstructionKind> {
        ConstructionKind::ALL
            .into_iter()
            .find(|k| k.name() == s || k.name().strip_suffix("-set") == Some(s))
            .ok_or_else(|| Error::ConfigInvalid(format!("unknown construction {s:?}")))
    }
}

/// What an experiment runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Kind {
    VerifyIncidence,
    VerifySphereFt,
    VerifyGauss,
    VerifyKloosterman,
    Coverage,
    Uniformity,
    SumProduct,
    Construct(ConstructionKind),
    Sweep,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::VerifyIncidence => f.write_str("verify-incidence"),
            Kind::VerifySphereFt => f.write_str("verify-sphere-ft"),
            Kind::VerifyGauss => f.write_str("verify-gauss"),
            Kind::VerifyKloosterman => f.write_str("verify-kloosterman"),
            Kind::Coverage => f.write_str("coverage"),
            Kind::Uniformity => f.write_str("uniformity"),
            Kind::SumProduct => f.write_str("sum-product"),
            Kind::Construct(c) => write!(f, "construct:{}", c.name()),
            Kind::Sweep => f.write_str("sweep"),
        }
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Kind> {
        if let Some(name) = s.strip_prefix("construct:") {
            return Ok(Kind::Construct(name.parse()?));
        }
        let bare = s.strip_prefix("verify-").unwrap_or(s);
        Ok(match bare {
            "incidence" => Kind::VerifyIncidence,
            "sphere-ft" => Kind::VerifySphereFt,
            "gauss" => Kind::VerifyGauss,
            "kloosterman" => Kind::VerifyKloosterman,
            "coverage" => Kind::Coverage,
            "uniformity" => Kind::Uniformity,
            "sum-product" => Kind::SumProduct,
            "sweep" => Kind::Sweep,
            _ => return Err(Error::ConfigInvalid(format!("unknown experiment kind {s:?}"))),
        })
    }
}

impl TryFrom<String> for Kind {
    type Error = Error;

    fn try_from(s: String) -> Result<Kind> {
        s.parse()
    }
}

impl From<Kind> for String {
    fn from(k: Kind) -> String {
        k.to_string()
    }
}

/// Where the point sets (or subsets of F_q) come from.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum SetSource {
    /// `size` points sampled from the seed.
    #[default]
    Random,
    /// The set emitted by a construction.
    Construction { name: ConstructionKind },
    /// A JSON file holding a list of points (or, for sum-product, of field elements).
    File { path: PathBuf },
    /// Every subset with cardinality in `min..=max`.
    Exhaustive { min: usize, max: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(Error::UnknownFormat(s.to_string())),
        }
    }
}

/// Fields given as (p, s) and dimensions; expands to one config per pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub fields: Vec<(u64, u32)>,
    pub dims: Vec<usize>,
    pub kind: Kind,
}

impl SweepGrid {
    /// q in {3, 5, 7, 9, 11, 13}, d in {2, 3}.
    pub fn desk(kind: Kind) -> SweepGrid {
        SweepGrid { fields: vec![(3, 1), (5, 1), (7, 1), (3, 2), (11, 1), (13, 1)], dims: vec![2, 3], kind }
    }
}

fn default_s() -> u32 {
    1
}

fn default_d() -> usize {
    2
}

fn default_trials() -> usize {
    1
}

fn default_cap() -> u64 {
    DEFAULT_CAP
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub p: u64,
    #[serde(default = "default_s")]
    pub s: u32,
    #[serde(default)]
    pub modulus: Option<Vec<u64>>,
    #[serde(default = "default_d")]
    pub d: usize,
    pub kind: Kind,
    #[serde(default)]
    pub source: SetSource,
    #[serde(default)]
    pub size: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// Sphere radius, as an integer mapped into F_q.
    #[serde(default)]
    pub r: Option<i64>,
    /// Progression length for progression-null-set.
    #[serde(default)]
    pub n: Option<usize>,
    /// Subgroup index for subgroup-circle-set.
    #[serde(default)]
    pub divisor: Option<u64>,
    #[serde(default = "default_cap")]
    pub cap: u64,
    #[serde(default)]
    pub grid: Option<SweepGrid>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

impl ExperimentConfig {
    pub fn new(p: u64, s: u32, d: usize, kind: Kind) -> ExperimentConfig {
        ExperimentConfig {
            p,
            s,
            modulus: None,
            d,
            kind,
            source: SetSource::Random,
            size: None,
            seed: 0,
            trials: 1,
            r: None,
            n: None,
            divisor: None,
            cap: DEFAULT_CAP,
            grid: None,
            out: None,
            format: Format::Json,
        }
    }

    pub fn field(&self) -> Result<Field> {
        Field::new(self.p, self.s, self.modulus.as_deref()).map_err(|e| Error::ConfigInvalid(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<ExperimentConfig> {
        serde_json::from_str(text).map_err(|e| Error::ConfigInvalid(e.to_string()))
    }

    fn radius(&self, field: &Field) -> Elem {
        field.from_int(self.r.unwrap_or(1))
    }

    /// One config per (field, dimension) of the grid, in grid order.
    pub fn expand_grid(&self) -> Result<Vec<ExperimentConfig>> {
        let grid = self.grid.clone().ok_or_else(|| Error::ConfigInvalid("sweep needs a grid".into()))?;
        if grid.kind == Kind::Sweep {
            return Err(Error::ConfigInvalid("nested sweeps are not supported".into()));
        }
        let mut out = Vec::new();
        for &(p, s) in &grid.fields {
            for &d in &grid.dims {
                let mut c = self.clone();
                c.p = p;
                c.s = s;
                c.modulus = None;
                c.d = d;
                c.kind = grid.kind;
                c.grid = None;
                out.push(c);
            }
        }
        Ok(out)
    }
}

/// Exactly `size` distinct points of F_q^d, uniform without replacement.
///
/// ChaCha8 seeded with `seed_from_u64(seed)` drives a partial Fisher-Yates
/// shuffle of the point indices 0..q^d; the first `size` positions are kept.
pub fn random_point_set(space: &Space, size: usize, seed: u64) -> Result<PointSet> {
    let n = space.size();
    if size == 0 || size > n {
        return Err(Error::SizeOutOfRange { size, available: n });
    }
    PointSet::from_indices(space, sample_indices(n, size, seed))
}

fn sample_indices(n: usize, size: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut moved: HashMap<usize, usize> = HashMap::new();
    let mut out = Vec::with_capacity(size);
    for i in 0..size {
        let j = rng.gen_range(i..n);
        let at_j = *moved.get(&j).unwrap_or(&j);
        let at_i = *moved.get(&i).unwrap_or(&i);
        moved.insert(j, at_i);
        out.push(at_j);
    }
    out
}

/// Exactly `size` distinct elements of F_q, sampled like [`random_point_set`].
pub fn random_subset(field: &Field, size: usize, seed: u64) -> Result<Vec<Elem>> {
    let q = field.q();
    if size == 0 || size > q {
        return Err(Error::SizeOutOfRange { size, available: q });
    }
    let mut v: Vec<Elem> = sample_indices(q, size, seed).into_iter().map(|i| field.element(i).expect("in range")).collect();
    v.sort();
    Ok(v)
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// All `k`-subsets of 0..n for k in min..=max, refusing when there are more than `cap`.
pub fn exhaustive_subsets(n: usize, min: usize, max: usize, cap: u64) -> Result<Vec<Vec<usize>>> {
    if min > max || max > n {
        return Err(Error::ConfigInvalid(format!("subset sizes {min}..={max} outside 0..={n}")));
    }
    let census: u128 = (min..=max).map(|k| binomial(n as u128, k as u128)).fold(0u128, |a, b| a.saturating_add(b));
    if census > cap as u128 {
        return Err(Error::CapExceeded { census, cap: cap as u128 });
    }
    let mut out = Vec::with_capacity(census as usize);
    for k in min..=max {
        let mut combo: Vec<usize> = (0..k).collect();
        loop {
            out.push(combo.clone());
            let Some(i) = (0..k).rev().find(|&i| combo[i] < n - k + i) else {
                break;
            };
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    pub bounds: usize,
    pub passed: usize,
    pub failed: usize,
    pub max_abs_slack: f64,
    pub constructions: usize,
    pub verified_constructions: usize,
    pub measurements: usize,
    pub errors: usize,
    /// Largest value seen per measurement name.
    pub measured: BTreeMap<String, f64>,
}

impl Aggregates {
    fn absorb(&mut self, other: &Aggregates) {
        self.bounds += other.bounds;
        self.passed += other.passed;
        self.failed += other.failed;
        self.max_abs_slack = self.max_abs_slack.max(other.max_abs_slack);
        self.constructions += other.constructions;
        self.verified_constructions += other.verified_constructions;
        self.measurements += other.measurements;
        self.errors += other.errors;
        for (k, &v) in &other.measured {
            let e = self.measured.entry(k.clone()).or_insert(v);
            *e = e.max(v);
        }
    }
}

/// Everything one run produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub config: ExperimentConfig,
    /// Theorem-backed checks; any failure is a violation.
    pub results: Vec<BoundReport>,
    pub constructions: Vec<ConstructionOutput>,
    pub measurements: Vec<Measurement>,
    /// Non-fatal outcomes such as an exhausted construction search.
    pub diagnostics: Vec<String>,
    pub subreports: Vec<Report>,
    pub error: Option<String>,
    pub aggregates: Aggregates,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_clock_ms: Option<f64>,
}

impl Report {
    fn new(config: &ExperimentConfig) -> Report {
        Report {
            version: VERSION.to_string(),
            config: config.clone(),
            results: Vec::new(),
            constructions: Vec::new(),
            measurements: Vec::new(),
            diagnostics: Vec::new(),
            subreports: Vec::new(),
            error: None,
            aggregates: Aggregates::default(),
            wall_clock_ms: None,
        }
    }

    fn finish(&mut self) {
        let mut a = Aggregates {
            bounds: self.results.len(),
            passed: self.results.iter().filter(|r| r.pass).count(),
            failed: self.results.iter().filter(|r| !r.pass).count(),
            max_abs_slack: self.results.iter().map(|r| r.slack.as_f64().abs()).fold(0.0, f64::max),
            constructions: self.constructions.len(),
            verified_constructions: self.constructions.iter().filter(|c| c.verified()).count(),
            measurements: self.measurements.len(),
            errors: usize::from(self.error.is_some()),
            measured: BTreeMap::new(),
        };
        for m in &self.measurements {
            let e = a.measured.entry(m.name.clone()).or_insert(m.value);
            *e = e.max(m.value);
        }
        for sub in &self.subreports {
            a.absorb(&sub.aggregates);
        }
        self.aggregates = a;
    }

    /// A theorem-backed bound failed or an emitted construction did not verify.
    pub fn has_violation(&self) -> bool {
        self.results.iter().any(|r| !r.pass)
            || self.constructions.iter().any(|c| !c.verified())
            || self.subreports.iter().any(Report::has_violation)
    }

    pub fn has_error(&self) -> bool {
        self.error.is_some() || self.subreports.iter().any(Report::has_error)
    }

    /// Process exit code: 1 for a violation, 2 for a recorded error, else 0.
    pub fn exit_code(&self) -> i32 {
        if self.has_violation() {
            1
        } else if self.has_error() {
            2
        } else {
            0
        }
    }

    /// The report with wall-clock fields removed, recursively.
    pub fn canonical(&self) -> Report {
        let mut r = self.clone();
        r.wall_clock_ms = None;
        r.subreports = r.subreports.iter().map(Report::canonical).collect();
        r
    }

    /// Every bound report, own results first, then subreports in order.
    pub fn all_results(&self) -> Vec<&BoundReport> {
        let mut out: Vec<&BoundReport> = self.results.iter().collect();
        for s in &self.subreports {
            out.extend(s.all_results());
        }
        out
    }
}

fn default_size(field: &Field, d: usize) -> usize {
    let q = field.q() as f64;
    let total = field.q().pow(d as u32);
    ((q.powf((d as f64 + 1.0) / 2.0)).ceil() as usize + 1).min(total)
}

fn trial_seed(cfg: &ExperimentConfig, trial: usize) -> u64 {
    cfg.seed.wrapping_add(trial as u64)
}

fn load_points(space: &Space, path: &PathBuf) -> Result<PointSet> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::ConfigInvalid(format!("{}: {e}", path.display())))?;
    let coords: Vec<Vec<Coord>> = serde_json::from_str(&text).map_err(|e| Error::ConfigInvalid(e.to_string()))?;
    PointSet::from_coords(space, &coords)
}

fn build_construction(cfg: &ExperimentConfig, kind: ConstructionKind, field: &Field) -> Result<ConstructionOutput> {
    match kind {
        ConstructionKind::ProgressionNullSet => progression_null_set(field, cfg.d, cfg.n.unwrap_or(1)),
        ConstructionKind::SubgroupCircleSet => {
            if field.s() != 1 {
                return Err(Error::ConfigInvalid("subgroup-circle-set takes the prime p; it builds F_{p^2}".into()));
            }
            subgroup_circle_set(field.p(), cfg.divisor.unwrap_or(2))
        }
        ConstructionKind::SphereProduct => sphere_product_counterexample(field, cfg.d, cfg.radius(field)),
        ConstructionKind::SphereD5 => sphere_counterexample_d5(field, cfg.cap as u128),
        ConstructionKind::IsotropicLineSet => isotropic_line_set(field),
    }
}

/// The point sets an experiment iterates over, each with the seed that made it.
fn point_sets(cfg: &ExperimentConfig, space: &Space) -> Result<Vec<(PointSet, Option<u64>)>> {
    match &cfg.source {
        SetSource::Random => {
            let size = cfg.size.unwrap_or_else(|| default_size(space.field(), space.d()));
            (0..cfg.trials)
                .map(|t| {
                    let seed = trial_seed(cfg, t);
                    Ok((random_point_set(space, size, seed)?, Some(seed)))
                })
                .collect()
        }
        SetSource::Construction { name } => {
            let c = build_construction(cfg, *name, space.field())?;
            if c.set.d() != space.d() {
                return Err(Error::ConfigInvalid(format!(
                    "construction {} lives in dimension {}, config has d = {}",
                    name.name(),
                    c.set.d(),
                    space.d()
                )));
            }
            let set = PointSet::from_indices(space, c.set.indices())?;
            Ok(vec![(set, None)])
        }
        SetSource::File { path } => Ok(vec![(load_points(space, path)?, None)]),
        SetSource::Exhaustive { min, max } => Ok(exhaustive_subsets(space.size(), *min, *max, cfg.cap)?
            .into_iter()
            .map(|idx| (PointSet::from_indices(space, idx).expect("indices in range"), None))
            .collect()),
    }
}

fn field_subsets(cfg: &ExperimentConfig, field: &Field) -> Result<Vec<(Vec<Elem>, Option<u64>)>> {
    match &cfg.source {
        SetSource::Random => {
            let size = cfg.size.unwrap_or_else(|| field.q().div_ceil(2));
            (0..cfg.trials)
                .map(|t| {
                    let seed = trial_seed(cfg, t);
                    Ok((random_subset(field, size, seed)?, Some(seed)))
                })
                .collect()
        }
        SetSource::File { path } => {
            let text =
                std::fs::read_to_string(path).map_err(|e| Error::ConfigInvalid(format!("{}: {e}", path.display())))?;
            let coords: Vec<Coord> = serde_json::from_str(&text).map_err(|e| Error::ConfigInvalid(e.to_string()))?;
            let elems = coords.iter().map(|c| crate::geometry::elem_of(field, c)).collect::<Result<Vec<_>>>()?;
            Ok(vec![(elems, None)])
        }
        SetSource::Exhaustive { min, max } => Ok(exhaustive_subsets(field.q(), *min, *max, cfg.cap)?
            .into_iter()
            .map(|idx| (idx.into_iter().map(|i| field.element(i).expect("in range")).collect(), None))
            .collect()),
        SetSource::Construction { .. } => {
            Err(Error::ConfigInvalid("sum-product takes subsets of F_q, not constructions".into()))
        }
    }
}

fn run_incidence(cfg: &ExperimentConfig, space: &Space, report: &mut Report) -> Result<()> {
    let sets = point_sets(cfg, space)?;
    let checked: Vec<Result<(BoundReport, BoundReport, f64)>> = sets
        .par_iter()
        .map(|(set, seed)| {
            let pw = verify_pointwise_bound(set)?;
            let l2 = verify_l2_bound(set)?;
            Ok((pw.report.with_seed(*seed), l2.report.with_seed(*seed), l2.identity_relative_error))
        })
        .collect();
    let mut worst = 0.0f64;
    for c in checked {
        let (pw, l2, err) = c?;
        report.results.push(pw);
        report.results.push(l2);
        worst = worst.max(err);
    }
    report.measurements.push(Measurement::new("l2_identity_relative_error", space.field(), space.d(), sets.len(), worst));
    Ok(())
}

fn run_coverage(cfg: &ExperimentConfig, space: &Space, report: &mut Report) -> Result<()> {
    let field = space.field();
    for (set, seed) in point_sets(cfg, space)? {
        let cov = coverage_report(&set)?;
        report.results.extend(cov.reports.into_iter().map(|r| r.with_seed(seed)));
        let q = field.q() as f64;
        for (name, v) in [
            ("dot_product_ratio", cov.dot_products.len() as f64 / q),
            ("distance_ratio", cov.distances.len() as f64 / q),
        ] {
            let mut m = Measurement::new(name, field, space.d(), set.len(), v);
            m.seed = seed;
            report.measurements.push(m);
        }
    }
    Ok(())
}

fn run_uniformity(cfg: &ExperimentConfig, space: &Space, report: &mut Report) -> Result<()> {
    let sets = match cfg.source {
        SetSource::Random if cfg.size.is_none() => vec![(sphere_points(space, cfg.radius(space.field())).points, None)],
        _ => point_sets(cfg, space)?,
    };
    for (set, seed) in sets {
        let u = sphere_uniformity_check(&set)?;
        report.measurements.extend(u.measurements.into_iter().map(|mut m| {
            m.seed = seed;
            m
        }));
    }
    Ok(())
}

fn run_sum_product(cfg: &ExperimentConfig, field: &Field, report: &mut Report) -> Result<()> {
    for (a, seed) in field_subsets(cfg, field)? {
        let sets = pointwise_sets(field, &a, cfg.d)?;
        if let Some(c) = sets.coverage {
            report.results.push(c.with_seed(seed));
        }
        report.results.push(sets.size_bound.with_seed(seed));
        let nonzero: Vec<Elem> = a.iter().copied().filter(|x| !x.is_zero()).collect();
        if nonzero.is_empty() {
            continue;
        }
        let ps = pair_similarity_check(field, &nonzero)?;
        if ps.theorem_applies {
            report.results.push(ps.report.with_seed(seed));
        }
        let mut m = Measurement::new("pair_similarity_c_uni", field, 2, nonzero.len(), ps.c_uni);
        m.seed = seed;
        report.measurements.push(m);
    }
    Ok(())
}

fn run_sphere_ft(cfg: &ExperimentConfig, space: &Space, report: &mut Report) -> Result<()> {
    let field = space.field();
    let radii: Vec<Elem> = match cfg.r {
        Some(r) => vec![field.from_int(r)],
        None => field.elements().collect(),
    };
    for r in radii {
        let sphere = sphere_points(space, r);
        let direct = fourier_transform(space, &indicator(&sphere.points))?;
        let closed = SphereTransform::new(space, r)?.eval_all();
        let err = direct.values().iter().zip(&closed).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        report
            .results
            .push(BoundReport::float(&format!("sphere_ft_r{}", field.format(r)), field, space.d(), sphere.cardinality(), err, SPECTRAL_TOL, 0.0));
    }
    Ok(())
}

fn run_gauss(cfg: &ExperimentConfig, field: &Field, report: &mut Report) -> Result<()> {
    let k = gauss_constant(field)?.value();
    let sq = (field.q() as f64).sqrt();
    let mut modulus_err = 0.0f64;
    let mut law_err = 0.0f64;
    for j in field.nonzero_elements() {
        let g = gauss_sum(field, j)?;
        modulus_err = modulus_err.max((g.norm() - sq).abs());
        law_err = law_err.max((g - k * sq * field.eta(j) as f64).norm());
    }
    let n = field.q() - 1;
    report.results.push(BoundReport::float("gauss_modulus", field, cfg.d, n, modulus_err, SPECTRAL_TOL, 0.0));
    report.results.push(BoundReport::float("gauss_law", field, cfg.d, n, law_err, SPECTRAL_TOL, 0.0));
    Ok(())
}

fn run_kloosterman(cfg: &ExperimentConfig, field: &Field, report: &mut Report) -> Result<()> {
    let worst = field.nonzero_elements().map(|a| kloosterman_sum(field, a).norm()).fold(0.0, f64::max);
    let bound = 2.0 * (field.q() as f64).sqrt();
    report.results.push(BoundReport::float("weil_kloosterman", field, cfg.d, field.q() - 1, worst, bound, SPECTRAL_TOL));
    report.measurements.push(Measurement::new("kloosterman_ratio", field, cfg.d, field.q() - 1, worst / bound));
    Ok(())
}

fn run_construct(cfg: &ExperimentConfig, kind: ConstructionKind, field: &Field, report: &mut Report) -> Result<()> {
    match build_construction(cfg, kind, field) {
        Ok(c) => report.constructions.push(c),
        Err(Error::SearchExhausted(census)) => report.diagnostics.push(format!("search exhausted: {census}")),
        Err(e) => return Err(e),
    }
    Ok(())
}

fn run_single(cfg: &ExperimentConfig) -> Result<Report> {
    let field = cfg.field()?;
    let mut report = Report::new(cfg);
    let space = || Space::new(&field, cfg.d).map_err(|e| Error::ConfigInvalid(e.to_string()));
    match cfg.kind {
        Kind::VerifyIncidence => run_incidence(cfg, &space()?, &mut report)?,
        Kind::Coverage => run_coverage(cfg, &space()?, &mut report)?,
        Kind::Uniformity => run_uniformity(cfg, &space()?, &mut report)?,
        Kind::VerifySphereFt => run_sphere_ft(cfg, &space()?, &mut report)?,
        Kind::SumProduct => run_sum_product(cfg, &field, &mut report)?,
        Kind::VerifyGauss => run_gauss(cfg, &field, &mut report)?,
        Kind::VerifyKloosterman => run_kloosterman(cfg, &field, &mut report)?,
        Kind::Construct(kind) => run_construct(cfg, kind, &field, &mut report)?,
        Kind::Sweep => return sweep(&cfg.expand_grid()?).map(|mut r| {
            r.config = cfg.clone();
            r
        }),
    }
    report.finish();
    Ok(report)
}

/// Runs one experiment. Invalid configurations and cap overruns are errors;
/// a failed bound is recorded in the report, not returned as an error.
pub fn run_suite(cfg: &ExperimentConfig) -> Result<Report> {
    if cfg.trials == 0 {
        return Err(Error::ConfigInvalid("trials must be at least 1".into()));
    }
    let start = Instant::now();
    let mut report = run_single(cfg)?;
    report.wall_clock_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    Ok(report)
}

/// Runs every config (in parallel) and merges the reports in grid order. A
/// config that errors yields a sub-report carrying the error.
pub fn sweep(grid: &[ExperimentConfig]) -> Result<Report> {
    let first = grid.first().ok_or_else(|| Error::ConfigInvalid("empty sweep grid".into()))?;
    let start = Instant::now();
    let subreports: Vec<Report> = grid
        .par_iter()
        .map(|cfg| {
            run_suite(cfg).unwrap_or_else(|e| {
                let mut r = Report::new(cfg);
                r.error = Some(e.to_string());
                r.finish();
                r
            })
        })
        .collect();
    let mut report = Report::new(first);
    report.config.kind = Kind::Sweep;
    report.subreports = subreports;
    report.finish();
    report.wall_clock_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    Ok(report)
}

fn csv_err(e: impl fmt::Display) -> Error {
    Error::Malformed(e.to_string())
}

/// JSON (canonical, wall-clock included when present), CSV with one row per
/// bound report, or a text summary.
pub fn emit_report(report: &Report, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => {
            let mut v = serde_json::to_vec_pretty(report).map_err(csv_err)?;
            v.push(b'\n');
            Ok(v)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["bound", "q", "s", "d", "setsize", "lhs", "rhs", "slack", "pass", "mode", "seed"])
                .map_err(csv_err)?;
            for r in report.all_results() {
                w.write_record([
                    r.bound.clone(),
                    r.q.to_string(),
                    r.s.to_string(),
                    r.d.to_string(),
                    r.setsize.to_string(),
                    r.lhs.to_string(),
                    r.rhs.to_string(),
                    r.slack.to_string(),
                    r.pass.to_string(),
                    serde_json::to_value(r.mode).map_err(csv_err)?.as_str().unwrap_or_default().to_string(),
                    r.seed.map(|s| s.to_string()).unwrap_or_default(),
                ])
                .map_err(csv_err)?;
            }
            w.into_inner().map_err(csv_err)
        }
        Format::Text => Ok(text_summary(report).into_bytes()),
    }
}

/// Parses a format name and emits; unknown names fail with `UnknownFormat`.
pub fn emit_report_named(report: &Report, format: &str) -> Result<Vec<u8>> {
    emit_report(report, format.parse()?)
}

fn text_summary(report: &Report) -> String {
    use std::fmt::Write;
    let mut s = String::new();
    let cfg = &report.config;
    let _ = writeln!(s, "ffgeom {} {} p={} s={} d={}", report.version, cfg.kind, cfg.p, cfg.s, cfg.d);
    write_body(&mut s, report, "");
    let a = &report.aggregates;
    let _ = writeln!(
        s,
        "bounds: {} passed, {} failed of {}; constructions: {}/{} verified; measurements: {}; errors: {}",
        a.passed, a.failed, a.bounds, a.verified_constructions, a.constructions, a.measurements, a.errors
    );
    s
}

fn write_body(s: &mut String, report: &Report, indent: &str) {
    use std::fmt::Write;
    for r in &report.results {
        let _ = writeln!(s, "{indent}{r}");
    }
    for c in &report.constructions {
        let _ = writeln!(
            s,
            "{indent}{} {} |E|={} {}",
            if c.verified() { "VERIFIED" } else { "UNVERIFIED" },
            c.name,
            c.set.len(),
            c.claim
        );
        for k in &c.checks {
            let _ = writeln!(s, "{indent}  {} {}: {}", if k.pass { "ok" } else { "FAIL" }, k.name, k.detail);
        }
    }
    for m in &report.measurements {
        let _ = writeln!(s, "{indent}MEASURE {} q={} d={} |E|={} value={:.6}", m.name, m.q, m.d, m.setsize, m.value);
    }
    for d in &report.diagnostics {
        let _ = writeln!(s, "{indent}NOTE {d}");
    }
    if let Some(e) = &report.error {
        let _ = writeln!(s, "{indent}ERROR {e}");
    }
    for sub in &report.subreports {
        let _ = writeln!(s, "{indent}[{} p={} s={} d={}]", sub.config.kind, sub.config.p, sub.config.s, sub.config.d);
        write_body(s, sub, &format!("{indent}  "));
    }
}

/// Basic facts about a field, for the `field-info` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldInfo {
    pub spec: crate::field::FieldSpec,
    pub q: u64,
    pub primitive_element: String,
    pub minus_one_is_square: bool,
    pub sqrt_minus_one: Option<String>,
    pub gauss_constant: crate::spectral::GaussConstant,
    pub null_triple: Option<[String; 3]>,
    pub unit_circle_size: usize,
}

pub fn field_info(field: &Field) -> Result<FieldInfo> {
    let minus_one = field.neg(field.one());
    let circle = Space::new(field, 2).map(|sp| sphere_points(&sp, field.one()).cardinality())?;
    Ok(FieldInfo {
        spec: field.spec().clone(),
        q: field.q() as u64,
        primitive_element: field.format(field.primitive_element()),
        minus_one_is_square: field.minus_one_is_square(),
        sqrt_minus_one: field.sqrt(minus_one).map(|i| field.format(i)),
        gauss_constant: gauss_constant(field)?,
        null_triple: crate::constructions::null_triple(field).ok().map(|t| t.map(|e| field.format(e))),
        unit_circle_size: circle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn field_info_f9() {
        let info = field_info(&make_field(3, 2, None).unwrap()).unwrap();
        assert_eq!(info.spec.modulus, vec![1, 0, 1]);
        assert!(info.minus_one_is_square);
        assert_eq!(info.unit_circle_size, 8);
    }

    #[test]
    fn random_sets() {
        let f3 = make_field(3, 1, None).unwrap();
        let sp = Space::new(&f3, 2).unwrap();
        assert_eq!(random_point_set(&sp, 9, 5).unwrap(), PointSet::full(&sp));
        let f5 = make_field(5, 1, None).unwrap();
        let sp5 = Space::new(&f5, 2).unwrap();
        assert_eq!(random_point_set(&sp5, 11, 7).unwrap(), random_point_set(&sp5, 11, 7).unwrap());
        assert_eq!(random_point_set(&sp5, 11, 7).unwrap().len(), 11);
        assert_eq!(random_point_set(&sp5, 26, 7).unwrap_err(), Error::SizeOutOfRange { size: 26, available: 25 });
    }

    #[test]
    fn sampling_is_roughly_uniform() {
        let mut hits = [0u32; 10];
        for seed in 0..2000 {
            for i in sample_indices(10, 3, seed) {
                hits[i] += 1;
            }
        }
        assert!(hits.iter().all(|&h| (500..700).contains(&h)), "{hits:?}");
    }

    #[test]
    fn kinds_parse_and_print() {
        for s in ["verify-incidence", "verify-sphere-ft", "coverage", "construct:sphere-d5", "sweep"] {
            assert_eq!(s.parse::<Kind>().unwrap().to_string(), s);
        }
        assert_eq!("incidence".parse::<Kind>().unwrap(), Kind::VerifyIncidence);
        assert_eq!(
            "construct:subgroup-circle".parse::<Kind>().unwrap(),
            Kind::Construct(ConstructionKind::SubgroupCircleSet)
        );
        assert!("construct:nothing".parse::<Kind>().is_err());
    }

    #[test]
    fn exhaustive_subsets_counts_and_cap() {
        assert_eq!(exhaustive_subsets(9, 6, 9, DEFAULT_CAP).unwrap().len(), 130);
        assert_eq!(exhaustive_subsets(25, 10, 12, 10).unwrap_err(), Error::CapExceeded { census: 12_926_460, cap: 10 });
    }

    #[test]
    fn incidence_suite_and_formats() {
        let mut cfg = ExperimentConfig::new(7, 1, 2, Kind::VerifyIncidence);
        cfg.trials = 20;
        cfg.seed = 3;
        let r = run_suite(&cfg).unwrap();
        assert_eq!(r.results.len(), 40);
        assert_eq!(r.exit_code(), 0);
        let csv = emit_report(&r, Format::Csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap().lines().count(), 41);
        let json = emit_report(&r, Format::Json).unwrap();
        let back: Report = serde_json::from_slice(&json).unwrap();
        assert_eq!(back, r);
        let text = String::from_utf8(emit_report(&r, Format::Text).unwrap()).unwrap();
        assert!(text.contains("40 passed, 0 failed"));
        assert_eq!(emit_report_named(&r, "xml").unwrap_err(), Error::UnknownFormat("xml".into()));
    }

    #[test]
    fn sweep_grid_and_empty_grid() {
        let mut cfg = ExperimentConfig::new(3, 1, 2, Kind::Sweep);
        cfg.grid = Some(SweepGrid::desk(Kind::VerifyIncidence));
        cfg.trials = 2;
        let r = run_suite(&cfg).unwrap();
        assert_eq!(r.subreports.len(), 12);
        assert_eq!(r.aggregates.bounds, 48);
        assert_eq!(sweep(&[]).unwrap_err(), Error::ConfigInvalid("empty sweep grid".into()));
    }

    #[test]
    fn sweep_isolates_failures() {
        let good = ExperimentConfig::new(5, 1, 2, Kind::VerifyGauss);
        let bad = ExperimentConfig::new(4, 1, 2, Kind::VerifyGauss);
        let r = sweep(&[good.clone(), bad, good]).unwrap();
        assert_eq!(r.subreports.len(), 3);
        assert!(r.subreports[1].error.is_some());
        assert_eq!(r.exit_code(), 2);
        assert_eq!(r.subreports[0].canonical(), r.subreports[2].canonical());
    }

    #[test]
    fn construction_and_d5_diagnostics() {
        let mut cfg = ExperimentConfig::new(3, 1, 2, Kind::Construct(ConstructionKind::SubgroupCircleSet));
        cfg.divisor = Some(2);
        let r = run_suite(&cfg).unwrap();
        assert_eq!(r.constructions.len(), 1);
        assert!(r.constructions[0].verified());
        let cfg = ExperimentConfig::new(3, 1, 5, Kind::Construct(ConstructionKind::SphereD5));
        let r = run_suite(&cfg).unwrap();
        assert!(r.constructions.is_empty() && r.diagnostics.len() == 1);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn config_json_roundtrip_and_defaults() {
        let cfg = ExperimentConfig::from_json(r#"{"p": 5, "kind": "coverage", "source": {"type": "exhaustive", "min": 24, "max": 25}}"#).unwrap();
        assert_eq!((cfg.s, cfg.d, cfg.trials, cfg.cap), (1, 2, 1, DEFAULT_CAP));
        let back = ExperimentConfig::from_json(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
        let r = run_suite(&cfg).unwrap();
        assert_eq!(r.exit_code(), 0);
        assert!(ExperimentConfig::from_json(r#"{"p": 5, "kind": "bogus"}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"p": 5, "kind": "coverage", "extra": 1}"#).is_err());
    }
}
