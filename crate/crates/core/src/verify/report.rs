//! Configuration, orchestration and the machine-readable report.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use log::info;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::curve::RatioCurve;
use crate::domain::{make_domain, GridDomain, Shape};
use crate::error::{Error, Result};
use crate::io::{write_csv, write_json};
use crate::majorize::audit;
use crate::space::RISpaceSpec;

use super::battery::{battery, Battery, BatteryKind};
use super::harness::*;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub drift: f64,
    pub modulus_drift: f64,
    pub theorem_b_drift: f64,
    pub har_drift: f64,
    pub identity: f64,
    pub exponent: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { drift: 0.10, modulus_drift: 0.15, theorem_b_drift: 0.15, har_drift: 0.15, identity: 1e-8, exponent: 0.05 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TheoremBConfig {
    pub shape: String,
    pub resolution: usize,
    pub x: String,
    pub y: String,
}

impl Default for TheoremBConfig {
    fn default() -> Self {
        Self { shape: "disk".into(), resolution: 128, x: "lebesgue:1".into(), y: "lorentz:2,inf".into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HarConfig {
    pub n: usize,
    pub s: f64,
    pub t: f64,
    pub resolutions: [usize; 2],
}

impl Default for HarConfig {
    fn default() -> Self {
        Self { n: 2, s: 1.5, t: 1.2, resolutions: [64, 128] }
    }
}

/// Every harness the full report can run.
pub const ALL_CHECKS: [&str; 8] = ["gn", "har", "majorize", "modulus", "poincare", "polya", "theorem_a", "theorem_b"];

/// Verification settings, read from TOML. Missing keys take the defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub seed: u64,
    pub battery: BatteryKind,
    pub shapes: Vec<String>,
    /// Coarse and fine resolution of the refinement study.
    pub resolutions: [usize; 2],
    pub p: f64,
    /// Space for the norm forms and the Pólya–Szegő norm ratio.
    pub space: String,
    /// Space for the modulus-of-continuity comparison.
    pub modulus_space: String,
    pub checks: Vec<String>,
    pub majorize_pairs: usize,
    pub tolerances: Tolerances,
    pub theorem_b: TheoremBConfig,
    pub har: HarConfig,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 7,
            battery: BatteryKind::Full,
            shapes: vec!["square".into(), "disk".into()],
            resolutions: [64, 128],
            p: 2.0,
            space: "lebesgue:2".into(),
            modulus_space: "lebesgue:1".into(),
            checks: ALL_CHECKS.iter().map(|s| s.to_string()).collect(),
            majorize_pairs: 200,
            tolerances: Tolerances::default(),
            theorem_b: TheoremBConfig::default(),
            har: HarConfig::default(),
        }
    }
}

impl VerifyConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// `default` selects the built-in configuration; anything else is a path.
    pub fn load(spec: &str) -> Result<Self> {
        if spec == "default" {
            return Ok(Self::default());
        }
        Self::from_toml(&std::fs::read_to_string(spec)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    fn validate(&self) -> Result<Vec<Shape<f64>>> {
        for c in &self.checks {
            if !ALL_CHECKS.contains(&c.as_str()) {
                return Err(Error::Config(format!("unknown check '{c}'")));
            }
        }
        if self.resolutions[0] >= self.resolutions[1] {
            return Err(Error::Config("resolutions must be [coarse, fine] with coarse < fine".into()));
        }
        self.space.parse::<RISpaceSpec<f64>>()?;
        self.modulus_space.parse::<RISpaceSpec<f64>>()?;
        self.theorem_b.shape.parse::<Shape<f64>>()?;
        self.shapes.iter().map(|s| s.parse()).collect()
    }

    fn enabled(&self, check: &str) -> bool {
        self.checks.iter().any(|c| c == check)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Skipped,
    Error,
}

/// One measured inequality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub name: String,
    pub shape: String,
    pub resolution: usize,
    pub coarse_resolution: Option<usize>,
    pub params: BTreeMap<String, f64>,
    pub measured_constant: Option<f64>,
    pub coarse_constant: Option<f64>,
    pub refinement_drift: Option<f64>,
    pub tolerance: f64,
    /// CSV file holding the ratio curve of the maximizing battery member.
    pub ratio_curve: Option<String>,
    pub status: Status,
    pub details: BTreeMap<String, Value>,
    pub error: Option<String>,
    pub pass: bool,
}

impl Record {
    fn new(name: String, shape: String, resolution: usize) -> Self {
        Self {
            name,
            shape,
            resolution,
            coarse_resolution: None,
            params: BTreeMap::new(),
            measured_constant: None,
            coarse_constant: None,
            refinement_drift: None,
            tolerance: 0.0,
            ratio_curve: None,
            status: Status::Ok,
            details: BTreeMap::new(),
            error: None,
            pass: false,
        }
    }

    fn error(name: String, shape: String, resolution: usize, e: &Error) -> Self {
        let mut r = Self::new(name, shape, resolution);
        r.status = Status::Error;
        r.error = Some(e.to_string());
        r
    }

    /// Fills the refinement fields; `extra_ok` carries check-specific
    /// conditions.
    fn refine(mut self, coarse_res: usize, coarse: f64, fine: f64, tol: f64, extra_ok: bool) -> Self {
        let drift = relative_drift(fine, coarse);
        self.coarse_resolution = Some(coarse_res);
        self.coarse_constant = Some(coarse);
        self.measured_constant = Some(fine);
        self.refinement_drift = Some(drift);
        self.tolerance = tol;
        self.pass = fine.is_finite() && drift <= tol && extra_ok;
        self
    }

    fn param(mut self, key: &str, v: f64) -> Self {
        self.params.insert(key.into(), v);
        self
    }

    fn detail(mut self, key: &str, v: Value) -> Self {
        self.details.insert(key.into(), v);
        self
    }

    fn skipped_if(mut self, nothing_evaluated: bool) -> Self {
        if nothing_evaluated {
            self.status = Status::Skipped;
            self.pass = true;
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub seed: u64,
    pub records: Vec<Record>,
    pub passed: usize,
    pub failed: usize,
    pub all_pass: bool,
}

impl VerificationReport {
    fn assemble(seed: u64, mut records: Vec<Record>) -> Self {
        records.sort_by(|a, b| a.name.cmp(&b.name));
        let passed = records.iter().filter(|r| r.pass).count();
        let failed = records.len() - passed;
        Self { seed, records, passed, failed, all_pass: failed == 0 && passed > 0 }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Output of one job: records and the curves they reference.
type JobOutput = (Vec<Record>, Vec<(String, RatioCurve<f64>)>);

fn tag(shape: &Shape<f64>) -> String {
    shape.to_string().replace(':', "_")
}

fn curve_file(check: &str, shape: &Shape<f64>, res: usize) -> String {
    format!("{check}_{}_{res}.csv", tag(shape))
}

struct Level {
    res: usize,
    domain: Arc<GridDomain<f64>>,
    battery: Battery,
}

fn levels(cfg: &VerifyConfig, shape: Shape<f64>) -> Result<[Level; 2]> {
    let make = |res: usize| -> Result<Level> {
        let domain = Arc::new(make_domain(shape, res)?);
        let battery = battery(&domain, cfg.battery, cfg.seed)?;
        Ok(Level { res, domain, battery })
    };
    Ok([make(cfg.resolutions[0])?, make(cfg.resolutions[1])?])
}

#[derive(Debug, Clone)]
enum Job {
    PerShape(&'static str, Shape<f64>),
    TheoremB,
    Har,
    Majorize,
}

fn job_name(job: &Job) -> String {
    match job {
        Job::PerShape(c, s) => format!("{c}_{}", tag(s)),
        Job::TheoremB => "theorem_b".into(),
        Job::Har => "har".into(),
        Job::Majorize => "majorize_audit".into(),
    }
}

fn run_job(cfg: &VerifyConfig, job: &Job) -> JobOutput {
    let result = match job {
        Job::PerShape(check, shape) => per_shape(cfg, check, *shape),
        Job::TheoremB => theorem_b_job(cfg),
        Job::Har => har_job(cfg),
        Job::Majorize => Ok(majorize_job(cfg)),
    };
    result.unwrap_or_else(|e| {
        let (shape, res) = match job {
            Job::PerShape(_, s) => (s.to_string(), cfg.resolutions[1]),
            _ => (String::new(), 0),
        };
        (vec![Record::error(job_name(job), shape, res, &e)], Vec::new())
    })
}

fn per_shape(cfg: &VerifyConfig, check: &str, shape: Shape<f64>) -> Result<JobOutput> {
    let [coarse, fine] = levels(cfg, shape)?;
    let tol = &cfg.tolerances;
    let sname = shape.to_string();
    let base = |name: String| Record::new(name, sname.clone(), fine.res);
    let mut curves = Vec::new();
    let records = match check {
        "poincare" => {
            let c = poincare_constant(&coarse.domain, &coarse.battery, cfg.p)?;
            let f = poincare_constant(&fine.domain, &fine.battery, cfg.p)?;
            vec![base(job_name(&Job::PerShape("poincare", shape)))
                .param("p", cfg.p)
                .detail("argmax", json!(f.argmax))
                .refine(coarse.res, c.constant, f.constant, tol.drift, true)
                .skipped_if(f.evaluated == 0)]
        }
        "theorem_a" => {
            let x: RISpaceSpec<f64> = cfg.space.parse()?;
            let c = theorem_a_battery(&coarse.battery, cfg.p, &x)?;
            let f = theorem_a_battery(&fine.battery, cfg.p, &x)?;
            let skipped = f.ratio_b.evaluated == 0;
            let fb = curve_file("theorem_a_b", &shape, fine.res);
            let fc = curve_file("theorem_a_c", &shape, fine.res);
            let mut b = base(format!("theorem_a_b_{}", tag(&shape)))
                .param("p", cfg.p)
                .detail("argmax", json!(f.ratio_b.argmax))
                .refine(coarse.res, c.ratio_b.constant, f.ratio_b.constant, tol.drift, true)
                .skipped_if(skipped);
            let mut cc = base(format!("theorem_a_c_{}", tag(&shape)))
                .param("p", cfg.p)
                .detail("argmax", json!(f.ratio_c.argmax))
                .refine(coarse.res, c.ratio_c.constant, f.ratio_c.constant, tol.drift, true)
                .skipped_if(skipped);
            if !skipped {
                b.ratio_curve = Some(fb.clone());
                cc.ratio_curve = Some(fc.clone());
                curves.push((fb, f.curve_b.clone()));
                curves.push((fc, f.curve_c.clone()));
            }
            let residual = f.identity_residual.max(c.identity_residual);
            let n = base(format!("theorem_a_norm_{}", tag(&shape)))
                .param("p", cfg.p)
                .detail("space", json!(cfg.space))
                .detail("identity_residual", json!(residual))
                .detail("identity_tolerance", json!(tol.identity))
                .refine(coarse.res, c.norm_ratio.constant, f.norm_ratio.constant, tol.drift, residual <= tol.identity)
                .skipped_if(skipped);
            vec![b, cc, n]
        }
        "gn" => {
            let c = gn_sharp_constant(&coarse.domain, &coarse.battery, cfg.p)?;
            let f = gn_sharp_constant(&fine.domain, &fine.battery, cfg.p)?;
            let ok = c.weak_le_strong && f.weak_le_strong;
            vec![base(job_name(&Job::PerShape("gn", shape)))
                .param("p", cfg.p)
                .detail("argmax", json!(f.strong.argmax))
                .detail("weak_constant", json!(f.weak.constant))
                .detail("weak_le_strong", json!(ok))
                .refine(coarse.res, c.strong.constant, f.strong.constant, tol.drift, ok)
                .skipped_if(f.strong.evaluated == 0)]
        }
        "polya" => {
            let x: RISpaceSpec<f64> = cfg.space.parse()?;
            let c = polya_battery(&coarse.battery, &x, &ball_grid(&coarse.domain)?)?;
            let f = polya_battery(&fine.battery, &x, &ball_grid(&fine.domain)?)?;
            vec![base(job_name(&Job::PerShape("polya", shape)))
                .detail("argmax", json!(f.argmax))
                .refine(coarse.res, c.constant, f.constant, tol.drift, true)
                .skipped_if(f.evaluated == 0)]
        }
        "modulus" => {
            let x: RISpaceSpec<f64> = cfg.modulus_space.parse()?;
            let (c, _) = corollary_battery(&coarse.battery, &x)?;
            let (f, curve) = corollary_battery(&fine.battery, &x)?;
            let mut r = base(job_name(&Job::PerShape("modulus", shape)))
                .detail("space", json!(cfg.modulus_space))
                .detail("argmax", json!(f.argmax))
                .refine(coarse.res, c.constant, f.constant, tol.modulus_drift, true)
                .skipped_if(f.evaluated == 0);
            if f.evaluated > 0 {
                let file = curve_file("modulus", &shape, fine.res);
                r.ratio_curve = Some(file.clone());
                curves.push((file, curve));
            }
            vec![r]
        }
        other => return Err(Error::Config(format!("unknown check '{other}'"))),
    };
    Ok((records, curves))
}

fn theorem_b_job(cfg: &VerifyConfig) -> Result<JobOutput> {
    let tb = &cfg.theorem_b;
    let shape: Shape<f64> = tb.shape.parse()?;
    let x: RISpaceSpec<f64> = tb.x.parse()?;
    let y: RISpaceSpec<f64> = tb.y.parse()?;
    let domain = Arc::new(make_domain(shape, tb.resolution)?);
    let rep = theorem_b_roundtrip(&x, &y, &domain, cfg.seed)?;
    let tol = cfg.tolerances.theorem_b_drift;
    let (f, c) = (rep.fine.as_array(), rep.coarse.as_array());
    let records = ["i", "ii", "iii"]
        .iter()
        .enumerate()
        .map(|(k, label)| {
            Record::new(format!("theorem_b_{label}_{}", tag(&shape)), shape.to_string(), rep.resolution)
                .detail("x", json!(rep.x))
                .detail("y", json!(rep.y))
                .detail("diverging", json!(rep.diverging))
                .detail("agree", json!(rep.agree))
                .refine(rep.coarse_resolution, c[k], f[k], tol, rep.agree)
        })
        .collect();
    Ok((records, Vec::new()))
}

fn har_job(cfg: &VerifyConfig) -> Result<JobOutput> {
    let h = &cfg.har;
    let tol = &cfg.tolerances;
    let rep = proposition_har_demo(h.n, h.s, h.t, h.resolutions, cfg.seed, tol.har_drift)?;
    let exponent_error = rep.fitted_exponent.map(|e| relative_drift(e, rep.predicted_exponent));
    let exponent_ok = exponent_error.is_some_and(|e| e <= tol.exponent);
    let shape = Shape::SJohn(h.s);
    let r = Record::new(format!("har_{}", tag(&shape)), shape.to_string(), h.resolutions[1])
        .param("n", h.n as f64)
        .param("s", h.s)
        .param("t", h.t)
        .param("r", rep.r)
        .detail("criterion_diverging", json!(rep.diverging))
        .detail("criterion_growth", json!(rep.criterion_growth))
        .detail("fitted_exponent", json!(rep.fitted_exponent))
        .detail("predicted_exponent", json!(rep.predicted_exponent))
        .detail("exponent_relative_error", json!(exponent_error))
        .detail("inequality_holds", json!(rep.inequality_holds))
        .refine(h.resolutions[0], rep.poincare[0], rep.poincare[1], tol.har_drift, rep.diverging && exponent_ok);
    Ok((vec![r], Vec::new()))
}

fn majorize_job(cfg: &VerifyConfig) -> JobOutput {
    let s = audit(cfg.majorize_pairs, cfg.seed);
    let mut r = Record::new("majorize_audit".into(), "(0,1]".into(), 0)
        .detail("pairs", json!(s.pairs))
        .detail("certificates", json!(s.certificates))
        .detail("split_certificates", json!(s.split_certificates))
        .detail("certificate_failures", json!(s.certificate_failures))
        .detail("bound", json!(s.bound));
    r.measured_constant = Some(s.max_ratio);
    r.tolerance = s.bound;
    r.pass = s.pass;
    (vec![r], Vec::new())
}

/// Runs every enabled harness, concurrently, and writes `report.json` plus
/// the curve CSVs into `out` when given. Per-check failures become error
/// records; an invalid configuration yields a single error record.
pub fn run_full_report(cfg: &VerifyConfig, out: Option<&Path>) -> Result<VerificationReport> {
    let report = match cfg.validate() {
        Err(e) => {
            let rec = Record::error("config".into(), String::new(), 0, &e);
            VerificationReport::assemble(cfg.seed, vec![rec])
        }
        Ok(shapes) => {
            let mut jobs = Vec::new();
            for check in ["poincare", "theorem_a", "gn", "polya", "modulus"] {
                if cfg.enabled(check) {
                    jobs.extend(shapes.iter().map(|&s| Job::PerShape(check, s)));
                }
            }
            if cfg.enabled("theorem_b") && cfg.battery == BatteryKind::Full {
                jobs.push(Job::TheoremB);
            }
            if cfg.enabled("har") && cfg.battery == BatteryKind::Full {
                jobs.push(Job::Har);
            }
            if cfg.enabled("majorize") && cfg.battery == BatteryKind::Full {
                jobs.push(Job::Majorize);
            }
            let outputs: Vec<JobOutput> = jobs
                .par_iter()
                .map(|j| {
                    info!("running {}", job_name(j));
                    run_job(cfg, j)
                })
                .collect();
            let mut records = Vec::new();
            let mut curves = Vec::new();
            for (r, c) in outputs {
                records.extend(r);
                curves.extend(c);
            }
            if let Some(dir) = out {
                for (file, curve) in &curves {
                    write_csv(&dir.join(file), &["t", "lhs", "rhs", "ratio"], curve.rows().into_iter().map(|r| r.to_vec()))?;
                }
            }
            VerificationReport::assemble(cfg.seed, records)
        }
    };
    if let Some(dir) = out {
        write_json(&dir.join("report.json"), &report)?;
    }
    Ok(report)
}
