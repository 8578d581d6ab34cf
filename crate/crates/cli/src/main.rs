use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use rearr_core::curve::{log_grid, RatioCurve};
use rearr_core::domain::{make_domain, Shape};
use rearr_core::hardy::{blowup_exponent, default_a_grid, hardy_apply, mazya_criterion_sup, HardyParams};
use rearr_core::io::{
    csv_string, read_json, read_sampled, read_step, rearrangement_csv, sampled_csv, write_atomic, write_csv,
    write_json, write_sampled, StepFunctionJson,
};
use rearr_core::majorize::{
    audit, check_hypotheses, interval_bound_certificate, majorization_constant, verify_certificate, IntervalFamily,
};
use rearr_core::space::RISpaceSpec;
use rearr_core::symmetrize::{
    ball_for, default_directions, modulus_sweep, polya_szego_check, spherical_rearrangement,
};
use rearr_core::verify::{
    gn_sharp_constant, poincare_constant, proposition_har_demo, run_full_report, standard_battery,
    theorem_a_battery, theorem_b_roundtrip, VerifyConfig,
};
use rearr_core::Error;

#[derive(Parser)]
#[command(name = "rearr", version, about = "Rearrangements, Hardy operators and Sobolev-Poincaré checks")]
struct Cli {
    /// Directory for machine-readable artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for every randomized battery.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Suppress the summary on standard output.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Decreasing rearrangement of a step or sampled function.
    Rearrange {
        #[arg(long = "in")]
        input: PathBuf,
        /// Grid size for the CSV table of f*, f**, f** − f*.
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
    /// Truncation of a nonnegative sampled function to the layer (t1, t2].
    Truncate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        t1: f64,
        #[arg(long)]
        t2: f64,
    },
    #[command(subcommand)]
    Hardy(HardyCmd),
    #[command(subcommand)]
    Symmetrize(SymCmd),
    #[command(subcommand)]
    Majorize(MajCmd),
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand)]
enum HardyCmd {
    /// Tabulates ∫_t^1 s^{α−1} g(s) ds.
    Eval {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
    /// Scans the power-weight criterion and fits its blow-up exponent.
    Criterion {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        t: f64,
        /// Target exponent when nt/((n−1)s + 1 − t) is undefined.
        #[arg(long)]
        r: Option<f64>,
    },
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, default_value = "disk")]
    shape: String,
    #[arg(long, default_value_t = 64)]
    resolution: usize,
}

#[derive(Subcommand)]
enum SymCmd {
    /// Spherical decreasing rearrangement onto the unit-measure ball.
    Spherical {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Median-shifted Pólya–Szegő comparison over a battery.
    Polya {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value = "lebesgue:2")]
        space: String,
    },
    /// Modulus of continuity in an r.i. norm.
    Modulus {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "lebesgue:1")]
        space: String,
        #[arg(long, default_value_t = 0.5)]
        t_max: f64,
    },
}

#[derive(Subcommand)]
enum MajCmd {
    /// Hypothesis constants and the majorization constant.
    Check {
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        h: PathBuf,
    },
    /// Certificate for an interval family.
    Certify {
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        h: PathBuf,
        #[arg(long)]
        family: PathBuf,
    },
    /// Randomized audit of the bound with constant 4.
    Audit {
        #[arg(long, default_value_t = 200)]
        seeds: usize,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    Poincare {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
    },
    TheoremA {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value = "lebesgue:2")]
        space: String,
    },
    TheoremB {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value = "lebesgue:1")]
        x: String,
        #[arg(long, default_value = "lorentz:2,inf")]
        y: String,
    },
    Gn {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
    },
    Har {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 1.5)]
        s: f64,
        #[arg(long, default_value_t = 1.2)]
        t: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [64, 128])]
        resolutions: Vec<usize>,
    },
    /// Every harness, driven by a TOML config (`default` for the built-in one).
    Full {
        #[arg(long, default_value = "default")]
        config: String,
    },
}

/// Failure modes mapped onto exit codes.
enum Failure {
    /// A check ran and did not pass.
    Check(String),
    /// Bad input, bad flags or file errors.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

struct Ctx {
    out: Option<PathBuf>,
    format: Format,
    seed: u64,
    seed_flag: Option<u64>,
    quiet: bool,
}

impl Ctx {
    fn dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("."))
    }

    fn say(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            println!("{}", msg.as_ref());
        }
    }

    /// Writes `value` as `<name>.json` and reports the path.
    fn emit(&self, name: &str, value: &impl Serialize) -> Result<PathBuf, Failure> {
        let path = self.dir().join(format!("{name}.json"));
        write_json(&path, value)?;
        self.say(format!("wrote {}", path.display()));
        Ok(path)
    }

    fn emit_curve(&self, name: &str, curve: &RatioCurve<f64>) -> Result<(), Failure> {
        let path = self.dir().join(format!("{name}.csv"));
        write_csv(&path, &["t", "lhs", "rhs", "ratio"], curve.rows().into_iter().map(|r| r.to_vec()))?;
        self.say(format!("wrote {}", path.display()));
        Ok(())
    }
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> Result<T, Failure> {
    s.parse().map_err(Failure::from)
}

/// Output next to the input (or in `--out`), with `suffix` replacing `.json`.
fn sibling(ctx: &Ctx, input: &Path, suffix: &str) -> PathBuf {
    let stem = input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into());
    let dir = match &ctx.out {
        Some(d) => d.clone(),
        None => input.parent().map(Path::to_path_buf).unwrap_or_default(),
    };
    dir.join(format!("{stem}.{suffix}"))
}

fn is_step_file(path: &Path) -> Result<bool, Failure> {
    let v: Value = read_json(path)?;
    Ok(v.get("breakpoints").is_some())
}

fn grid_domain(g: &GridArgs) -> Result<Arc<rearr_core::GridDomain>, Failure> {
    Ok(Arc::new(make_domain(parse::<Shape<f64>>(&g.shape)?, g.resolution)?))
}

fn rearrange(ctx: &Ctx, input: &Path, points: usize) -> Outcome {
    let fstar = if is_step_file(input)? {
        read_step(input)?.rearrange()
    } else {
        read_sampled(input)?.rearrange(None)?
    };
    let path = match ctx.format {
        Format::Json => {
            let p = sibling(ctx, input, "rearranged.json");
            write_json(&p, &StepFunctionJson::from(&fstar))?;
            p
        }
        Format::Csv => {
            let p = sibling(ctx, input, "rearranged.csv");
            let grid: Vec<f64> = (1..=points).map(|k| k as f64 / points as f64).collect();
            write_atomic(&p, rearrangement_csv(&fstar, &grid).as_bytes())?;
            p
        }
    };
    ctx.say(format!("f* has {} pieces, ∫f* = {}; wrote {}", fstar.len(), fstar.total(), path.display()));
    Ok(())
}

fn truncate(ctx: &Ctx, input: &Path, t1: f64, t2: f64) -> Outcome {
    let f = read_sampled(input)?.truncate(t1, t2)?;
    let path = match ctx.format {
        Format::Json => {
            let p = sibling(ctx, input, "truncated.json");
            write_sampled(&p, &f)?;
            p
        }
        Format::Csv => {
            let p = sibling(ctx, input, "truncated.csv");
            write_atomic(&p, sampled_csv(&f).as_bytes())?;
            p
        }
    };
    ctx.say(format!("wrote {}", path.display()));
    Ok(())
}

fn hardy(ctx: &Ctx, cmd: &HardyCmd) -> Outcome {
    match cmd {
        HardyCmd::Eval { input, alpha, points } => {
            let g = read_step(input)?;
            let h = hardy_apply(&g, *alpha)?;
            let grid = log_grid(1e-6, 1.0, (*points).max(2));
            let path = ctx.dir().join("hardy_eval.csv");
            write_atomic(&path, csv_string(&["t", "Hg"], grid.iter().map(|&t| vec![t, h.eval(t)])).as_bytes())?;
            ctx.say(format!("Hg(1e-6) = {}; wrote {}", h.eval(1e-6), path.display()));
            Ok(())
        }
        HardyCmd::Criterion { n, s, t, r } => {
            let params = match r {
                Some(r) => HardyParams::with_target_exponent(*n, *s, *t, *r)?,
                None => HardyParams::new(*n, *s, *t)?,
            };
            let grid = default_a_grid();
            let crit = mazya_criterion_sup(&params, &grid)?;
            let fitted = if crit.diverging { blowup_exponent(&params, &grid).ok() } else { None };
            let out = json!({
                "n": n, "s": s, "t": t, "r": params.r_exp,
                "sup": crit.sup,
                "argmax_a": crit.argmax_a,
                "diverging": crit.diverging,
                "growth": crit.growth,
                "fitted_exponent": fitted,
                "predicted_exponent": params.predicted_exponent(),
            });
            ctx.emit("hardy_criterion", &out)?;
            ctx.say(format!(
                "diverging = {}, fitted exponent = {:?}, predicted = {}",
                crit.diverging,
                fitted,
                params.predicted_exponent()
            ));
            Ok(())
        }
    }
}

fn symmetrize(ctx: &Ctx, cmd: &SymCmd) -> Outcome {
    match cmd {
        SymCmd::Spherical { input } => {
            let f = read_sampled(input)?;
            let ball = ball_for(f.domain())?;
            let sym = spherical_rearrangement(&f, &ball)?;
            let p = sibling(ctx, input, "spherical.json");
            write_sampled(&p, &sym)?;
            ctx.say(format!("wrote {}", p.display()));
            Ok(())
        }
        SymCmd::Polya { grid, space } => {
            let x: RISpaceSpec<f64> = parse(space)?;
            let d = grid_domain(grid)?;
            let ball = ball_for(&d)?;
            let battery = standard_battery(&d, ctx.seed)?;
            let mut members = Vec::new();
            let mut best: Option<(f64, RatioCurve<f64>)> = None;
            for m in battery.iter() {
                let r = polya_szego_check(&m.f, &x, &ball)?;
                members.push(json!({
                    "name": m.name,
                    "median": r.median,
                    "measured_constant": r.measured_constant,
                    "norm_constant": r.norm_constant,
                    "degenerate": r.degenerate,
                }));
                if !r.degenerate && best.as_ref().is_none_or(|b| r.measured_constant > b.0) {
                    best = Some((r.measured_constant, r.curve));
                }
            }
            let constant = best.as_ref().map_or(0.0, |b| b.0);
            let tag = d.shape().to_string().replace(':', "_");
            ctx.emit(
                "polya",
                &json!({"shape": grid.shape, "resolution": grid.resolution, "space": space,
                        "measured_constant": constant, "members": members}),
            )?;
            if let Some((_, curve)) = &best {
                ctx.emit_curve(&format!("polya_{tag}_{}", grid.resolution), curve)?;
            }
            ctx.say(format!("Pólya–Szegő constant over {} functions: {constant}", battery.len()));
            Ok(())
        }
        SymCmd::Modulus { input, space, t_max } => {
            let f = read_sampled(input)?;
            let x: RISpaceSpec<f64> = parse(space)?;
            let w = modulus_sweep(&f, &x, *t_max, &default_directions(f.domain().dim()))?;
            let path = ctx.dir().join("modulus.csv");
            write_atomic(&path, csv_string(&["h", "omega"], w.samples.iter().map(|s| vec![s.0, s.1])).as_bytes())?;
            ctx.say(format!("ω({t_max}) = {}; wrote {}", w.at(*t_max), path.display()));
            Ok(())
        }
    }
}

#[derive(Deserialize)]
struct FamilyFile {
    intervals: Vec<[f64; 2]>,
}

fn majorize(ctx: &Ctx, cmd: &MajCmd) -> Outcome {
    match cmd {
        MajCmd::Check { g, h } => {
            let (g, h) = (read_step(g)?, read_step(h)?);
            let hyp = check_hypotheses(&g, &h)?;
            let m = majorization_constant(&g, &h);
            let bound = 4.0 * hyp.constant();
            let holds = m <= bound * (1.0 + 1e-12);
            ctx.emit(
                "majorize_check",
                &json!({"c1": hyp.c1, "c2": hyp.c2, "majorization_constant": m, "bound": bound, "holds": holds}),
            )?;
            ctx.say(format!("C1 = {}, C2 = {}, sup ∫g*/∫h* = {m} (bound {bound})", hyp.c1, hyp.c2));
            if holds {
                Ok(())
            } else {
                Err(Failure::Check("majorization bound violated".into()))
            }
        }
        MajCmd::Certify { g, h, family } => {
            let (g, h) = (read_step(g)?, read_step(h)?);
            let fam: FamilyFile = read_json(family)?;
            let fam = IntervalFamily::new(fam.intervals.iter().map(|i| (i[0], i[1])).collect())?;
            let cert = interval_bound_certificate(&g, &h, &fam)?;
            let check = verify_certificate(&cert, &g, &h, &fam);
            ctx.emit("certificate", &json!({"certificate": cert, "check": check}))?;
            ctx.say(format!("branch {:?}, log_sum = {}, valid = {}", cert.branch, cert.log_sum, check.valid));
            match check.first_violation {
                None => Ok(()),
                Some(v) => Err(Failure::Check(format!("certificate fails at {v}"))),
            }
        }
        MajCmd::Audit { seeds } => {
            let s = audit(*seeds, ctx.seed);
            ctx.emit("majorize_audit", &s)?;
            ctx.say(format!("max ratio {} against bound {} over {} pairs", s.max_ratio, s.bound, s.pairs));
            if s.pass {
                Ok(())
            } else {
                Err(Failure::Check("audit failed".into()))
            }
        }
    }
}

fn verify(ctx: &Ctx, cmd: &VerifyCmd) -> Outcome {
    match cmd {
        VerifyCmd::Poincare { grid, p } => {
            let d = grid_domain(grid)?;
            let r = poincare_constant(&d, &standard_battery(&d, ctx.seed)?, *p)?;
            ctx.emit("poincare", &r)?;
            ctx.say(format!("Poincaré constant {} ({:?})", r.constant, r.argmax));
            Ok(())
        }
        VerifyCmd::TheoremA { grid, p, space } => {
            let d = grid_domain(grid)?;
            let x: RISpaceSpec<f64> = parse(space)?;
            let r = theorem_a_battery(&standard_battery(&d, ctx.seed)?, *p, &x)?;
            ctx.emit("theorem_a", &r)?;
            let tag = format!("{}_{}", d.shape().to_string().replace(':', "_"), grid.resolution);
            ctx.emit_curve(&format!("theorem_a_b_{tag}"), &r.curve_b)?;
            ctx.emit_curve(&format!("theorem_a_c_{tag}"), &r.curve_c)?;
            ctx.say(format!(
                "ratio_b {}, ratio_c {}, norm ratio {}, identity residual {:e}",
                r.ratio_b.constant, r.ratio_c.constant, r.norm_ratio.constant, r.identity_residual
            ));
            if r.identity_residual <= 1e-8 {
                Ok(())
            } else {
                Err(Failure::Check("L¹ form and L^{p,1} form disagree".into()))
            }
        }
        VerifyCmd::TheoremB { grid, x, y } => {
            let d = grid_domain(grid)?;
            let r = theorem_b_roundtrip(&parse(x)?, &parse(y)?, &d, ctx.seed)?;
            ctx.emit("theorem_b", &r)?;
            ctx.say(format!("constants {:?}, growth {:?}, diverging {:?}", r.fine.as_array(), r.growth, r.diverging));
            if r.agree {
                Ok(())
            } else {
                Err(Failure::Check("finiteness flags disagree".into()))
            }
        }
        VerifyCmd::Gn { grid, p } => {
            let d = grid_domain(grid)?;
            let r = gn_sharp_constant(&d, &standard_battery(&d, ctx.seed)?, *p)?;
            ctx.emit("gn", &r)?;
            ctx.say(format!("strong {}, weak {}", r.strong.constant, r.weak.constant));
            if r.weak_le_strong {
                Ok(())
            } else {
                Err(Failure::Check("weak constant exceeds strong constant".into()))
            }
        }
        VerifyCmd::Har { n, s, t, resolutions } => {
            let res: [usize; 2] = resolutions
                .as_slice()
                .try_into()
                .map_err(|_| Failure::Usage("--resolutions takes two values".into()))?;
            let r = proposition_har_demo(*n, *s, *t, res, ctx.seed, 0.15)?;
            ctx.emit("har", &r)?;
            ctx.say(format!(
                "Poincaré constants {:?} (drift {}), criterion diverging = {}, exponent {:?} vs {}",
                r.poincare, r.drift, r.diverging, r.fitted_exponent, r.predicted_exponent
            ));
            if r.inequality_holds && r.criterion_fails {
                Ok(())
            } else {
                Err(Failure::Check("demo did not reproduce the expected contrast".into()))
            }
        }
        VerifyCmd::Full { config } => {
            let mut cfg = VerifyConfig::load(config)?;
            if let Some(seed) = ctx.seed_flag {
                cfg.seed = seed;
            }
            let dir = ctx.dir();
            let report = run_full_report(&cfg, Some(&dir))?;
            for r in &report.records {
                ctx.say(format!(
                    "{:<28} {:<5} constant {:<24} drift {}",
                    r.name,
                    if r.pass { "pass" } else { "FAIL" },
                    r.measured_constant.map_or("-".into(), |v| v.to_string()),
                    r.refinement_drift.map_or("-".into(), |v| format!("{v:.4}")),
                ));
            }
            ctx.say(format!("{} passed, {} failed; wrote {}", report.passed, report.failed, dir.join("report.json").display()));
            if report.records.iter().any(|r| r.name == "config") {
                return Err(Failure::Usage("invalid configuration".into()));
            }
            if report.all_pass {
                Ok(())
            } else {
                Err(Failure::Check(format!("{} checks failed", report.failed)))
            }
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let ctx = Ctx { out: cli.out, format: cli.format, seed: cli.seed.unwrap_or(7), seed_flag: cli.seed, quiet: cli.quiet };
    match &cli.command {
        Command::Rearrange { input, points } => rearrange(&ctx, input, *points),
        Command::Truncate { input, t1, t2 } => truncate(&ctx, input, *t1, *t2),
        Command::Hardy(c) => hardy(&ctx, c),
        Command::Symmetrize(c) => symmetrize(&ctx, c),
        Command::Majorize(c) => majorize(&ctx, c),
        Command::Verify(c) => verify(&ctx, c),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let level = if cli.quiet { log::LevelFilter::Error } else { log::LevelFilter::Warn };
    env_logger::Builder::new().filter_level(level).parse_env("RUST_LOG").init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
