//! Config-driven experiment execution: parse a flat key = value config,
//! dispatch to the library, write reports and CSV curves, and emit a run
//! manifest.
//!
//! Reports are deterministic: a fixed config and seed produce byte-identical
//! report files. Wall-clock timings live only in the manifest, never in the
//! report, and every report embeds the hash of the config that produced it.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cartan::{
    cartan_verify, gorin_cover, local_cover_check, verify_cartan, BallCover, GorinParams, Majorant,
};
use crate::functions::{normalize_m1m2, DiscreteMeasure, EvaluableFunction};
use crate::geometry::{
    arc_polyline_set, ball_restrict, cantor_maps, cantor_maps_on, four_corner_maps,
    generate_ifs_set, regularity_constants, segment_maps, sequence_set, DSet, Point, Similarity,
};
use crate::grid::GridSpec;
use crate::multidim::{
    ellipticity_probe, envelope_check, gallery, mcol1_gap, multidim_cartan, HolomorphicMapSample,
};
use crate::trace::{
    bernstein_walsh_check, bmo_norm, distribution_check, dyadic_ball_family, remez_gap,
    reverse_holder, sharpness_experiment, DistParams, PExponent,
};

#[derive(Debug, Error)]
pub enum RunError {
    /// Malformed or semantically invalid configuration; exit code 2.
    #[error("config error: {0}")]
    Schema(String),
    /// A verified invariant failed; exit code 1.
    #[error("invariant failure: {0:?}")]
    Invariant(Vec<String>),
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Invariant(_) => 1,
            _ => 2,
        }
    }

    fn schema(err: impl std::fmt::Display) -> Self {
        RunError::Schema(err.to_string())
    }
}

/// One experiment: a kind, a seed, an output path, and flat options.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub out: Option<PathBuf>,
    pub options: BTreeMap<String, String>,
}

impl ExperimentConfig {
    pub fn new(kind: &str, seed: u64, out: Option<PathBuf>) -> Self {
        ExperimentConfig {
            kind: kind.to_string(),
            seed,
            out,
            options: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        self.options.insert(key.to_string(), value.to_string());
        self
    }

    /// Parse the sectioned key = value format. Sections group keys for
    /// readability; all keys land in one flat namespace. `kind`, `seed`,
    /// and `out` live in the `[experiment]` section.
    pub fn parse_str(text: &str) -> Result<Self, RunError> {
        let mut kind = None;
        let mut seed = 0u64;
        let mut out = None;
        let mut options = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            if line.starts_with('[') && line.ends_with(']') {
                continue; // section headers are organizational only
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                RunError::Schema(format!("line {}: expected key = value", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            match key {
                "kind" => kind = Some(value.to_string()),
                "seed" => {
                    seed = value
                        .parse()
                        .map_err(|_| RunError::Schema(format!("bad seed `{value}`")))?
                }
                "out" => out = Some(PathBuf::from(value)),
                _ => {
                    options.insert(key.to_string(), value.to_string());
                }
            }
        }
        Ok(ExperimentConfig {
            kind: kind.ok_or_else(|| RunError::Schema("missing `kind`".into()))?,
            seed,
            out,
            options,
        })
    }

    pub fn parse_file(path: &Path) -> Result<Self, RunError> {
        let text = std::fs::read_to_string(path).map_err(|source| RunError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse_str(&text)
    }

    fn get(&self, key: &str) -> Result<&str, RunError> {
        self.options
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| RunError::Schema(format!("missing option `{key}`")))
    }

    fn get_f64(&self, key: &str) -> Result<f64, RunError> {
        self.get(key)?
            .parse()
            .map_err(|_| RunError::Schema(format!("option `{key}` is not a number")))
    }

    fn get_f64_or(&self, key: &str, default: f64) -> Result<f64, RunError> {
        match self.options.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| RunError::Schema(format!("option `{key}` is not a number"))),
        }
    }

    fn get_usize_or(&self, key: &str, default: usize) -> Result<usize, RunError> {
        match self.options.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| RunError::Schema(format!("option `{key}` is not an integer"))),
        }
    }

    fn get_point(&self, key: &str) -> Result<Point, RunError> {
        let coords: Result<Vec<f64>, _> = self
            .get(key)?
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect();
        let coords =
            coords.map_err(|_| RunError::Schema(format!("option `{key}` is not a point")))?;
        if coords.is_empty() || coords.len() % 2 != 0 {
            return Err(RunError::Schema(format!(
                "option `{key}` needs an even number of coordinates"
            )));
        }
        Ok(Point::new(coords))
    }

    fn get_list(&self, key: &str) -> Result<Vec<f64>, RunError> {
        self.get(key)?
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<f64>()
                    .map_err(|_| RunError::Schema(format!("option `{key}` has a bad number")))
            })
            .collect()
    }

    /// Stable hash over the canonical rendering; ties reports to configs.
    pub fn hash(&self) -> String {
        let mut canon = String::new();
        let _ = writeln!(canon, "kind={}", self.kind);
        let _ = writeln!(canon, "seed={}", self.seed);
        for (k, v) in &self.options {
            let _ = writeln!(canon, "{k}={v}");
        }
        let _ = writeln!(canon, "version={}", env!("CARGO_PKG_VERSION"));
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in canon.as_bytes() {
            h ^= *b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        format!("{h:016x}")
    }
}

/// Execution record: config echo, timings, and the pass/fail summary.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub config_hash: String,
    pub version: String,
    pub kind: String,
    pub seed: u64,
    pub config: BTreeMap<String, String>,
    pub wall_clock_ms: f64,
    pub timings: Vec<(String, f64)>,
    pub passed: bool,
    pub failures: Vec<String>,
    pub outputs: Vec<PathBuf>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BatchManifest {
    pub runs: Vec<RunManifest>,
    pub passed: bool,
}

#[derive(Serialize)]
struct ReportEnvelope<'a, T: Serialize> {
    manifest: ManifestRef<'a>,
    report: &'a T,
}

#[derive(Serialize)]
struct ManifestRef<'a> {
    config_hash: &'a str,
    version: &'a str,
}

fn atomic_write(path: &Path, bytes: &[u8]) -> Result<(), RunError> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, bytes).map_err(|source| RunError::Io {
        path: tmp.clone(),
        source,
    })?;
    std::fs::rename(&tmp, path).map_err(|source| RunError::Io {
        path: path.to_path_buf(),
        source,
    })
}

struct RunContext<'a> {
    config: &'a ExperimentConfig,
    hash: String,
    timings: Vec<(String, f64)>,
    failures: Vec<String>,
    outputs: Vec<PathBuf>,
}

impl<'a> RunContext<'a> {
    fn new(config: &'a ExperimentConfig) -> Self {
        RunContext {
            hash: config.hash(),
            config,
            timings: Vec::new(),
            failures: Vec::new(),
            outputs: Vec::new(),
        }
    }

    fn time<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let t0 = Instant::now();
        let out = f();
        self.timings
            .push((name.to_string(), t0.elapsed().as_secs_f64() * 1e3));
        out
    }

    fn fail(&mut self, msg: impl Into<String>) {
        self.failures.push(msg.into());
    }

    /// Bare data artifact (set, cover): the file is the schema itself so
    /// it can feed other commands; the manifest still lands alongside.
    fn write_data<T: Serialize>(&mut self, data: &T) -> Result<(), RunError> {
        let Some(out) = &self.config.out else {
            return Ok(());
        };
        let mut body = serde_json::to_string_pretty(data).map_err(RunError::schema)?;
        body.push('\n');
        atomic_write(out, body.as_bytes())?;
        self.outputs.push(out.clone());
        Ok(())
    }

    fn write_report<T: Serialize>(&mut self, report: &T) -> Result<(), RunError> {
        let Some(out) = &self.config.out else {
            return Ok(());
        };
        let envelope = ReportEnvelope {
            manifest: ManifestRef {
                config_hash: &self.hash,
                version: env!("CARGO_PKG_VERSION"),
            },
            report,
        };
        let mut body = serde_json::to_string_pretty(&envelope).map_err(RunError::schema)?;
        body.push('\n');
        atomic_write(out, body.as_bytes())?;
        self.outputs.push(out.clone());
        Ok(())
    }

    fn write_csv(&mut self, header: &str, rows: &[Vec<f64>]) -> Result<(), RunError> {
        let Some(out) = &self.config.out else {
            return Ok(());
        };
        let path = out.with_extension("csv");
        let mut body = String::new();
        body.push_str(header);
        body.push_str("\r\n");
        for row in rows {
            let line: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
            body.push_str(&line.join(","));
            body.push_str("\r\n");
        }
        atomic_write(&path, body.as_bytes())?;
        self.outputs.push(path);
        Ok(())
    }
}

fn load_json<T: for<'de> Deserialize<'de>>(path: &str) -> Result<T, RunError> {
    let text = std::fs::read_to_string(path).map_err(|source| RunError::Io {
        path: PathBuf::from(path),
        source,
    })?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| RunError::Schema(format!("failed to parse {path}: {e}")))?;
    // accept both bare schemas and enveloped reports
    let value = match value {
        serde_json::Value::Object(ref m) if m.contains_key("report") => m["report"].clone(),
        v => v,
    };
    serde_json::from_value(value)
        .map_err(|e| RunError::Schema(format!("failed to parse {path}: {e}")))
}

fn load_set(config: &ExperimentConfig, key: &str) -> Result<DSet, RunError> {
    let set: DSet = load_json(config.get(key)?)?;
    set.validate().map_err(RunError::schema)?;
    Ok(set)
}

fn load_function(config: &ExperimentConfig) -> Result<EvaluableFunction, RunError> {
    let f: EvaluableFunction = load_json(config.get("function")?)?;
    f.validate().map_err(RunError::schema)?;
    Ok(f)
}

fn load_map(config: &ExperimentConfig) -> Result<HolomorphicMapSample, RunError> {
    let spec = config.get("map")?;
    if let Some((_, m)) = gallery().into_iter().find(|(name, _)| *name == spec) {
        return Ok(m);
    }
    // deserialization re-validates zeros, arity, and the boundary bound
    load_json(spec)
}

fn parse_grid(config: &ExperimentConfig) -> Result<GridSpec, RunError> {
    if let Ok(spec) = config.get("grid") {
        return GridSpec::parse_rect(spec).map_err(RunError::schema);
    }
    // ball grid: center dimension from `ambient_n`, default 2
    let n = config.get_usize_or("ambient_n", 2)?;
    let count = config.get_usize_or("grid_count", 100_000)?;
    let radius = config.get_f64_or("grid_radius", 0.5)?;
    Ok(GridSpec::ball(vec![0.0; 2 * n], radius, count))
}

fn ifs_maps_from_spec(spec: &str) -> Result<Option<Vec<Similarity>>, RunError> {
    let maps = match spec {
        "cantor" => Some(cantor_maps()),
        "segment" => Some(segment_maps()),
        "four-corner" => Some(four_corner_maps(0.25)),
        _ => {
            if let Some(rest) = spec.strip_prefix("cantor:") {
                let parts: Vec<&str> = rest.split(',').collect();
                if parts.len() != 2 {
                    return Err(RunError::Schema(format!("bad cantor spec `{spec}`")));
                }
                let a: f64 = parts[0]
                    .parse()
                    .map_err(|_| RunError::Schema(format!("bad cantor spec `{spec}`")))?;
                let b: f64 = parts[1]
                    .parse()
                    .map_err(|_| RunError::Schema(format!("bad cantor spec `{spec}`")))?;
                Some(cantor_maps_on(a, b))
            } else {
                None
            }
        }
    };
    Ok(maps)
}

/// Run one experiment, writing its report files and returning the manifest.
pub fn run(config: &ExperimentConfig) -> Result<RunManifest, RunError> {
    let t0 = Instant::now();
    let mut ctx = RunContext::new(config);
    dispatch(config, &mut ctx)?;
    let manifest = RunManifest {
        config_hash: ctx.hash.clone(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        kind: config.kind.clone(),
        seed: config.seed,
        config: config.options.clone(),
        wall_clock_ms: t0.elapsed().as_secs_f64() * 1e3,
        timings: ctx.timings,
        passed: ctx.failures.is_empty(),
        failures: ctx.failures.clone(),
        outputs: ctx.outputs,
    };
    if let Some(out) = &config.out {
        let path = manifest_path(out);
        let mut body = serde_json::to_string_pretty(&manifest).map_err(RunError::schema)?;
        body.push('\n');
        atomic_write(&path, body.as_bytes())?;
    }
    if manifest.passed {
        Ok(manifest)
    } else {
        Err(RunError::Invariant(manifest.failures))
    }
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}

/// Run a batch sequentially; the aggregate fails when any child fails.
pub fn batch(configs: &[ExperimentConfig]) -> Result<BatchManifest, RunError> {
    if configs.is_empty() {
        return Err(RunError::Schema("empty batch".into()));
    }
    let mut runs = Vec::with_capacity(configs.len());
    let mut all_passed = true;
    for c in configs {
        match run(c) {
            Ok(m) => {
                all_passed &= m.passed;
                runs.push(m);
            }
            Err(RunError::Invariant(failures)) => {
                all_passed = false;
                runs.push(RunManifest {
                    config_hash: c.hash(),
                    version: env!("CARGO_PKG_VERSION").to_string(),
                    kind: c.kind.clone(),
                    seed: c.seed,
                    config: c.options.clone(),
                    wall_clock_ms: 0.0,
                    timings: Vec::new(),
                    passed: false,
                    failures,
                    outputs: Vec::new(),
                });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(BatchManifest {
        runs,
        passed: all_passed,
    })
}

fn dispatch(config: &ExperimentConfig, ctx: &mut RunContext) -> Result<(), RunError> {
    match config.kind.as_str() {
        "gen-set" => run_gen_set(config, ctx),
        "regularity" => run_regularity(config, ctx),
        "cover" => run_cover(config, ctx),
        "verify" => run_verify(config, ctx),
        "local-check" => run_local_check(config, ctx),
        "remez" => run_remez(config, ctx),
        "bmo" => run_bmo(config, ctx),
        "revholder" => run_revholder(config, ctx),
        "distcheck" => run_distcheck(config, ctx),
        "bernstein-walsh" => run_bernstein_walsh(config, ctx),
        "sharpness" => run_sharpness(config, ctx),
        "mdim-cartan" => run_mdim_cartan(config, ctx),
        "envelope" => run_envelope(config, ctx),
        "ellipticity" => run_ellipticity(config, ctx),
        "mcol1" => run_mcol1(config, ctx),
        other => Err(RunError::Schema(format!(
            "unknown experiment kind `{other}`"
        ))),
    }
}

fn run_gen_set(config: &ExperimentConfig, ctx: &mut RunContext) -> Result<(), RunError> {
    let spec = config.get("ifs")?;
    let depth = config.get_usize_or("depth", 6)? as u32;
    let ambient_n = config.get_usize_or("ambient_n", 1)?;
    let set = if let Some(maps) = ifs_maps_from_spec(spec)? {
        ctx.time("generate_ifs_set", || {
            generate_ifs_set(&maps, depth, ambient_n)
        })
        .map_err(RunError::schema)?
    } else if spec == "sequence" {
        sequence_set(depth).map_err(RunError::schema)?
    } else if spec == "arc" {
        arc_polyline_set(
            (0.0, 0.0),
            config.get_f64_or("radius", 1.0)?,
            0.0,
            config.get_f64_or("angle", std::f64::consts::FRAC_PI_2)?,
            config.get_usize_or("n_points", 256)?,
        )
        .map_err(RunError::schema)?
    } else {
        let maps: Vec<Similarity> = load_json(spec)?;
        ctx.time("generate_ifs_set", || {
            generate_ifs_set(&maps, depth, ambient_n)
        })
        .map_err(RunError::schema)?
    };
    if spec != "sequence" && (set.total_mass() - 1.0).abs() > 1e-12 {
        ctx.fail(format!("total mass {} deviates from 1", set.total_mass()));
    }
    ctx.write_data(&set)
}

fn run_regularity(config: &ExperimentConfig, ctx: &mut RunContext) -> Result<(), RunError> {
    let mut set = load_set(config, "set")?;
    let scales = config.get_list("scales")?;
    let report = ctx
        .time("regularity_constants", || {
            regularity_constants(&set, &scales)
        })
        .map_err(RunError::schema)?;
    if !(report.certified_a >= report.certified_b && report.certified_b > 0.0) {
        ctx.fail(format!(
            "certified constants disordered: a={}, b={}",
            report.certified_a, report.certified_b
        ));
    }
    // write the certified constants back so downstream runs can use them
    if config.options.get("update_set").map(String::as_str) != Some("false") {
        set.certify(&report);
        let path = PathBuf::from(config.get("set")?);
        let mut body = serde_json::to_string_pretty(&set).map_err(RunError::schema)?;
        body.push('\n');
        atomic_write(&path, body.as_bytes())?;
        ctx.outputs.push(path);
    }
    ctx.write_report(&report)
}

fn run_cover(config: &ExperimentConfig, ctx: &mut RunContext) -> Result<(), RunError> {
    let mu: DiscreteMeasure = load_json(config.get("measure")?)?;
    let cover: BallCover = if let Ok(h) = config.get_f64("h") {
        let d = config.get_f64("d")?;
        ctx.time("cartan_cover", || crate::cartan::cartan_cover(&mu, h, d))
            .map_err(RunError::schema)?
    } else {
        let phi = Majorant::parse(config.get("majorant")?).map_err(RunError::schema)?;
        let params = GorinParams {
            alpha: config.get_f64_or("alpha", GorinParams::default().alpha)?,
            beta: config.get_f64_or("beta", GorinParams::default().beta)?,
            gamma: config.get_f64_or("gamma", GorinParams::default().gamma)?,
        };
        ctx.time("gorin_cover", || gorin_cover(&mu, &phi, params))
            .map_err(RunError::schema)?
    };
    if cover.budget_used > cover.budget_limit * (1.0 + 1e-12) {
        ctx.fail(format!(
            "budget {} exceeds limit {}",
            cover.budget_used, cover.budget_limit
        ));
    }
    ctx.write_data(&cover)
}

fn run_verify(config: &ExperimentConfig, ctx: &mut RunContext) -> Result<(), RunError> {
    let f = load_function(config)?;
    let grid = parse_grid(config)?;
    let report = if let Ok(measure_path) = config.get("measure") {
        let mu: DiscreteMeasure = load_json(measure_path)?;
        let h = config.get_f64("h")?;
        let d = config.get_f64("d")?;
        ctx.time("cartan_verify", || cartan_verify(&mu, &f, h, d, &grid))
            .map_err(RunError::schema)?
    } else {
        let cover: BallCover = load_json(config.get("cover")?)?;
        let bound = config.get_f64("bound")?;
        ctx.time("verify_cartan", || verify_cartan(&f, &cover, bound, &grid))
            .map_err(RunError::schema)?
    };
    if !report.success() {
        ctx.fail(format!(
            "{} off-cover points below the bound {}",
            report.violations.len(),
            report.bound
        ));
    }
    ctx.write_report(&report)
}

fn run_local_check(config: &ExperimentConfig, ctx: &mut RunContext) -> Result<(), RunError> {
    let f = load_function(config)?;
    let grid = parse_grid(config)?;
    let x = config.get_point("x")?;
    let report = ctx.time("local_cover_check", || {
        local_cover_check(
            &f,
            &x,
            config.get_f64("t")?,
            config.get_f64("r")?,
            config.get_f64("h")?,
            config.get_f64("d")?,
            config.get_f64("c_hat")?,
            config.get_f64("m1")?,
            config.get_f64("m2")?,
            &grid,
        )
        .map_err(RunError::schema)
    })?;
    if !report.success() {
        ctx.fail(format!(
            "{} sublevel points uncovered within budget",
            report.violations.len()
        ));
    }
    ctx.write_report(&report)
}

fn run_remez(config: &ExperimentConfig, ctx: &mut RunContext) -> Result<(), RunError> {
    let set = load_set(config, "set")?;
    let f = load_function(config)?;
    let x = config.get_point("x")?;
    let t = config.get_f64("t")?;
    let r = config.get_f64("r")?;
    let omega_radius = config.get_f64_or("omega_radius", t)?;
    let (omega, _) = ball_restrict(&set, &x, omega_radius);
    let exp = ctx
        .time("remez_gap", || {
            remez_gap(&f, &set, &x, t, r, &omega, Some(omega_radius))
        })
        .map_err(RunError::schema)?;
    if exp.lhs < -1e-6 {
        ctx.fail(format!("negative gap {} beyond sampling error", exp.lhs));
    }
    ctx.write_report(&exp)
}

fn run_bmo(config: &ExperimentConfig, ctx: &mut RunContext) -> Result<(), RunError> {
    let set = load_set(config, "set")?;
    let f = load_function(config)?;
    let (centers, radii) = if let Ok(radii) = config.get_list("radii") {
        let centers = if let Ok(c) = config.get_point("center") {
            vec![c]
        } else {
            set.points.clone()
        };
        (centers, radii)
    } else {
        dyadic_ball_family(&set)
    };
    let report = ctx
        .time("bmo_norm", || bmo_norm(&f, &set, &centers, &radii))
        .map_err(RunError::schema)?;
    if report.bmo_norm < 0.0 {
        ctx.fail("negative oscillation".to_string());
    }
    ctx.write_report(&report)
}

fn run_revholder(config: &ExperimentConfig, ctx: &mut RunContext) -> Result<(), RunError> {
    let set = load_set(config, "set")?;
    let f = load_function(config)?;
    let x = config.get_point("x")?;
    let t = config.get_f64("t")?;
    let p_list: Vec<PExponent> = config
        .get("p_list")?
        .split(',')
        .map(|s| PExponent::parse(s).ok_or_else(|| RunError::Schema(format!("bad exponent `{s}`"))))
        .collect::<Result<_, _>>()?;
    let report = ctx
        .time("reverse_holder", || {
            reverse_holder(&f, &set, &x, t, &p_list)
        })
        .map_err(RunError::schema)?;
    let mut prev = 0.0;
    for rec in &report.records {
        if rec.p.as_f64() >= 1.0 && rec.ratio < 1.0 - 1e-9 {
            ctx.fail(format!("ratio {} below 1 at p {:?}", rec.ratio, rec.p));
        }
        if rec.lhs < prev - 1e-9 {
            ctx.fail("power mean decreased in p".to_string());
        }
        prev = rec.lhs;
    }
    let rows: Vec<Vec<f64>> = report
        .records
        .iter()
        .map(|rec| vec![rec.p.as_f64(), rec.ratio])
        .collect();
    ctx.write_csv("p,ratio", &rows)?;
    ctx.write_report(&report)
}

fn run_distcheck(config: &ExperimentConfig, ctx: &mut RunContext) -> Result<(), RunError> {
    let set = load_set(config, "set")?;
    let f = load_function(config)?;
    let x = config.get_point("x")?;
    let t = config.get_f64("t")?;
    let r = config.get_f64("r")?;
    let lambda_grid: Vec<f64> = if let Ok(grid) = config.get_list("lambda_grid") {
        grid
    } else {
        let lmax = config.get_f64_or("lambda_max", 8.0)?;
        let n = config.get_usize_or("lambda_steps", 64)?;
        (0..=n).map(|i| lmax * i as f64 / n as f64).collect()
    };
    let (m1, m2) = if let (Ok(m1), Ok(m2)) = (config.get_f64("m1"), config.get_f64("m2")) {
        (m1, m2)
    } else {
        normalize_m1m2(&f, r).map_err(RunError::schema)?
    };
    let a = match config.get_f64("a") {
        Ok(a) => a,
        Err(_) => set
            .reg_a
            .ok_or_else(|| RunError::Schema("set is uncertified; pass `a` explicitly".into()))?,
    };
    let params = DistParams {
        r,
        a,
        d: config.get_f64_or("d", set.dimension_d)?,
        m1,
        m2,
        c_hat: config.get_f64_or("c_hat", 1.0)?,
    };
    let report = ctx
        .time("distribution_check", || {
            distribution_check(&f, &set, &x, t, &lambda_grid, params)
        })
        .map_err(RunError::schema)?;
    for w in report.d_values.windows(2) {
        if w[1] > w[0] + 1e-12 {
            ctx.fail("distribution function increased".to_string());
            break;
        }
    }
    let rows: Vec<Vec<f64>> = report
        .lambda_grid
        .iter()
        .zip(report.d_values.iter().zip(&report.bound_curve))
        .map(|(l, (dv, b))| vec![*l, *dv, *b])
        .collect();
    ctx.write_csv("lambda,D,bound", &rows)?;
    ctx.write_report(&report)
}

fn run_bernstein_walsh(config: &ExperimentConfig, ctx: &mut RunContext) -> Result<(), RunError> {
    let f = load_function(config)?;
    let roots = match &f {
        EvaluableFunction::LogAbsPolynomial { roots, .. } => roots.clone(),
        EvaluableFunction::Potential(mu) => mu.atoms.clone(),
        _ => {
            return Err(RunError::Schema(
                "bernstein-walsh needs a polynomial-type function".into(),
            ))
        }
    };
    let x = config.get_point("x")?;
    let t = config.get_f64("t")?;
    let q = config.get_f64("q")?;
    let ok = ctx
        .time("bernstein_walsh_check", || {
            bernstein_walsh_check(&roots, true, &x, t, q)
        })
        .map_err(RunError::schema)?;
    if !ok {
        ctx.fail(format!("growth bound failed at q={q}, t={t}"));
    }
    ctx.write_report(&serde_json::json!({ "holds": ok, "q": q, "t": t }))
}

fn run_sharpness(config: &ExperimentConfig, ctx: &mut RunContext) -> Result<(), RunError> {
    let set = load_set(config, "set")?;
    let d = config.get_f64_or("d", set.dimension_d)?;
    let scales = config.get_list("scales")?;
    let c_log = config.get_f64_or("c", 1.0)?;
    let report = ctx
        .time("sharpness_experiment", || {
            sharpness_experiment(&set, d, &scales, c_log)
        })
        .map_err(RunError::schema)?;
    ctx.write_report(&report)
}

fn run_mdim_cartan(config: &ExperimentConfig, ctx: &mut RunContext) -> Result<(), RunError> {
    let map = load_map(config)?;
    let h = config.get_f64("h")?;
    let d = config.get_f64("d")?;
    let grid = GridSpec::ball(
        vec![0.0; 2 * map.n],
        0.5,
        config.get_usize_or("grid_count", 100_000)?,
    );
    let mass = config.get_f64("mass_override").ok();
    let report = ctx
        .time("multidim_cartan", || {
            multidim_cartan(&map, h, d, &grid, mass)
        })
        .map_err(RunError::schema)?;
    if !report.success() {
        ctx.fail(format!(
            "{} points below the bound off the cover",
            report.violations.len()
        ));
    }
    ctx.write_report(&report)
}

fn run_envelope(config: &ExperimentConfig, ctx: &mut RunContext) -> Result<(), RunError> {
    let map = load_map(config)?;
    let grid = GridSpec::ball(
        vec![0.0; 2 * map.n],
        0.5,
        config.get_usize_or("grid_count", 100_000)?,
    );
    let report = ctx
        .time("envelope_check", || envelope_check(&map, &grid))
        .map_err(RunError::schema)?;
    if !report.success() {
        ctx.fail(format!("{} envelope violations", report.violations.len()));
    }
    ctx.write_report(&report)
}

fn run_ellipticity(config: &ExperimentConfig, ctx: &mut RunContext) -> Result<(), RunError> {
    let map = load_map(config)?;
    let zero_index = config.get_usize_or("zero_index", 0)?;
    let zero = map
        .known_zeros
        .get(zero_index)
        .ok_or_else(|| RunError::Schema(format!("map has no zero #{zero_index}")))?
        .0
        .clone();
    let n_directions = config.get_usize_or("directions", 32)?;
    let t_grid: Vec<f64> = if let Ok(g) = config.get_list("t_grid") {
        g
    } else {
        let t0 = config.get_f64_or("t0", 0.02)?;
        (0..6).map(|i| t0 * (0.5_f64).powi(i)).collect()
    };
    let report = ctx
        .time("ellipticity_probe", || {
            ellipticity_probe(&map, &zero, n_directions, &t_grid)
        })
        .map_err(RunError::schema)?;
    ctx.write_report(&report)
}

fn run_mcol1(config: &ExperimentConfig, ctx: &mut RunContext) -> Result<(), RunError> {
    let map = load_map(config)?;
    let set = load_set(config, "set")?;
    let x = config.get_point("x")?;
    let t = config.get_f64("t")?;
    let r = config.get_f64("r")?;
    let omega_radius = config.get_f64_or("omega_radius", t)?;
    let (omega, _) = ball_restrict(&set, &x, omega_radius);
    let exp = ctx
        .time("mcol1_gap", || mcol1_gap(&map, &set, &x, t, r, &omega))
        .map_err(RunError::schema)?;
    if exp.lhs < -1e-6 {
        ctx.fail(format!("negative gap {} beyond sampling error", exp.lhs));
    }
    ctx.write_report(&exp)
}
