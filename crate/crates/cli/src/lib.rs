//! Command-line front end: argument and config parsing, and the five commands
//! `construct`, `verify`, `scan`, `hypersurface` and `export`.

// `!(x > y)` is used on purpose so that NaN takes the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::BTreeMap;
use std::f64::consts::LN_2;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use s3tori::export::{build_mesh, mesh_to_csv, mesh_to_json, mesh_to_obj, patch_to_csv, write_atomic};
use s3tori::hypersurface::{helicoid1_patch, helicoid2_patch, second_type_hypersurface, shape_check};
use s3tori::surfaces::{
    clifford_chart, lawson_chart, lawson_isothermal_chart, lawson_principal_chart, second_type_torus,
    sphere_chart,
};
use s3tori::verify::{default_scan_angles, scan_circle_families, verify_chart, ISOTHERMAL_CHECKS, ORTHOGONAL_CHECKS};
use s3tori::{format_float, Grid, HypersurfacePatch, SurfaceChart, Tolerances, Vec4};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const DEFAULT_GRID: (usize, usize) = (16, 16);
pub const MIN_GRID: usize = 8;

/// Tolerance names accepted by `hypersurface`.
pub const SHAPE_CHECKS: [&str; 2] = ["max_mean_curvature", "third_eigenvalue_max"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Sphere,
    Clifford,
    Lawson,
    LawsonIso,
    SecondType,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Sphere => "sphere",
            Family::Clifford => "clifford",
            Family::Lawson => "lawson",
            Family::LawsonIso => "lawson-iso",
            Family::SecondType => "second-type",
        }
    }

    /// Tolerance applied to every verify check unless overridden.
    pub fn default_tolerance(self) -> f64 {
        match self {
            Family::Sphere | Family::Clifford => 1e-8,
            Family::Lawson | Family::LawsonIso => 1e-6,
            Family::SecondType => 1e-5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Obj,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandName {
    Construct,
    Verify,
    Scan,
    Hypersurface,
    Export,
}

#[derive(Debug, Parser)]
#[command(name = "s3tori", version, about = "Minimal surfaces in S³ and the hypersurfaces of R⁴ they generate")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Print chart data; with --out, write the sampled chart.
    Construct(CommonArgs),
    /// Check the identities of the chart on a grid.
    Verify(CommonArgs),
    /// Test rotated parameter lines for circles.
    Scan(CommonArgs),
    /// Build the envelope hypersurface and check its shape operator.
    Hypersurface(CommonArgs),
    /// Write the stereographically projected mesh.
    Export(CommonArgs),
}

impl CommandArgs {
    pub fn split(self) -> (CommandName, CommonArgs) {
        match self {
            CommandArgs::Construct(a) => (CommandName::Construct, a),
            CommandArgs::Verify(a) => (CommandName::Verify, a),
            CommandArgs::Scan(a) => (CommandName::Scan, a),
            CommandArgs::Hypersurface(a) => (CommandName::Hypersurface, a),
            CommandArgs::Export(a) => (CommandName::Export, a),
        }
    }
}

#[derive(Debug, Default, Args)]
pub struct CommonArgs {
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    /// Lawson parameter.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Initial value z(0) for the second-type torus.
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
    /// Half the initial slope z'(0)/2 for the second-type torus.
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    /// Grid size as NUxNV.
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<(usize, usize)>,
    /// Tolerance override NAME=VAL; repeatable. NAME `default` sets the fallback.
    #[arg(long = "tol", value_parser = parse_tol)]
    pub tol: Vec<(String, f64)>,
    /// Projection pole as four comma-separated components.
    #[arg(long, value_parser = parse_pole, allow_hyphen_values = true)]
    pub pole: Option<Vec4>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file with the same settings; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

pub fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("grid must look like NUxNV, got `{s}`"))?;
    let nu = a.trim().parse().map_err(|_| format!("bad grid count `{a}`"))?;
    let nv = b.trim().parse().map_err(|_| format!("bad grid count `{b}`"))?;
    Ok((nu, nv))
}

pub fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (name, val) = s
        .split_once('=')
        .ok_or_else(|| format!("tolerance must look like NAME=VAL, got `{s}`"))?;
    let v: f64 = val.trim().parse().map_err(|_| format!("bad tolerance value `{val}`"))?;
    Ok((name.trim().to_string(), v))
}

pub fn parse_pole(s: &str) -> Result<Vec4, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| format!("pole must be four comma-separated numbers, got `{s}`"))?;
    if parts.len() != 4 {
        return Err(format!("pole needs 4 components, got {}", parts.len()));
    }
    Ok(Vec4([parts[0], parts[1], parts[2], parts[3]]))
}

/// Contents of a `--config` JSON file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub command: Option<CommandName>,
    pub family: Option<Family>,
    pub alpha: Option<f64>,
    pub s: Option<f64>,
    pub t: Option<f64>,
    pub grid: Option<String>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    pub pole: Option<[f64; 4]>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

/// A fully resolved, validated invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: CommandName,
    pub family: Family,
    pub alpha: Option<f64>,
    pub s: Option<f64>,
    pub t: Option<f64>,
    pub grid: (usize, usize),
    pub tolerances: BTreeMap<String, f64>,
    pub pole: Vec4,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    /// Defaults for `family`, with nothing overridden.
    pub fn new(command: CommandName, family: Family) -> Self {
        RunConfig {
            command,
            family,
            alpha: None,
            s: None,
            t: None,
            grid: DEFAULT_GRID,
            tolerances: BTreeMap::new(),
            pole: Vec4::e4(),
            format: None,
            out: None,
        }
    }

    /// Merges flags over the optional config file and validates the result.
    pub fn resolve(command: CommandName, args: CommonArgs) -> Result<Self, String> {
        let file = match &args.config {
            Some(path) => read_config(path)?,
            None => ConfigFile::default(),
        };
        if let Some(c) = file.command {
            if c != command {
                return Err(format!("config file is for `{c:?}`, not `{command:?}`").to_lowercase());
            }
        }
        let family = args
            .family
            .or(file.family)
            .ok_or_else(|| "--family is required".to_string())?;
        let grid = match (args.grid, file.grid) {
            (Some(g), _) => g,
            (None, Some(g)) => parse_grid(&g)?,
            (None, None) => DEFAULT_GRID,
        };
        let mut tolerances = file.tolerances;
        tolerances.extend(args.tol);
        let pole = args.pole.or(file.pole.map(Vec4)).unwrap_or_else(Vec4::e4);
        let cfg = RunConfig {
            command,
            family,
            alpha: args.alpha.or(file.alpha),
            s: args.s.or(file.s),
            t: args.t.or(file.t),
            grid,
            tolerances,
            pole,
            format: args.format.or(file.format),
            out: args.out.or(file.out),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        let (nu, nv) = self.grid;
        if nu < MIN_GRID || nv < MIN_GRID {
            return Err(format!("grid counts must be at least {MIN_GRID}, got {nu}x{nv}"));
        }
        match self.family {
            Family::Lawson | Family::LawsonIso => {
                if self.s.is_some() || self.t.is_some() {
                    return Err(format!("--s/--t do not apply to family {}", self.family.name()));
                }
                let a = self.alpha();
                if !(a > 0.0 && a.is_finite()) {
                    return Err(format!("--alpha must be positive, got {a}"));
                }
                if self.family == Family::LawsonIso && a == 1.0 {
                    return Err("--alpha 1 is the Clifford torus; use --family clifford".into());
                }
            }
            Family::SecondType => {
                if self.alpha.is_some() {
                    return Err("--alpha does not apply to family second-type".into());
                }
                let (s, t) = self.st();
                if !(s.is_finite() && t.is_finite()) {
                    return Err("--s and --t must be finite".into());
                }
                if s == 0.0 && t == 0.0 {
                    return Err("(s, t) = (0, 0) does not define a torus".into());
                }
            }
            Family::Sphere | Family::Clifford => {
                if self.alpha.is_some() || self.s.is_some() || self.t.is_some() {
                    return Err(format!("family {} takes no parameters", self.family.name()));
                }
            }
        }
        let known = |n: &str| {
            n == "default" || ISOTHERMAL_CHECKS.contains(&n) || ORTHOGONAL_CHECKS.contains(&n) || SHAPE_CHECKS.contains(&n)
        };
        for (name, v) in &self.tolerances {
            if !known(name) {
                return Err(format!("unknown tolerance name `{name}`"));
            }
            if !(*v >= 0.0) {
                return Err(format!("tolerance {name} must be non-negative"));
            }
        }
        let pn = self.pole.norm();
        if !(pn.is_finite() && (pn - 1.0).abs() < 1e-9) {
            return Err(format!("--pole must be a unit vector, |pole| = {pn}"));
        }
        if self.command == CommandName::Export && self.out.is_none() {
            return Err("export needs --out".into());
        }
        if self.command == CommandName::Hypersurface {
            match self.family {
                Family::Sphere | Family::Clifford => {}
                Family::SecondType if self.st().1 == 0.0 => {}
                Family::SecondType => return Err("hypersurface for second-type needs --t 0".into()),
                _ => return Err(format!("no hypersurface is defined for family {}", self.family.name())),
            }
        }
        Ok(())
    }

    pub fn alpha(&self) -> f64 {
        self.alpha.unwrap_or(2.0)
    }

    pub fn st(&self) -> (f64, f64) {
        (self.s.unwrap_or(LN_2), self.t.unwrap_or(0.0))
    }

    fn tolerances_with_default(&self, default: f64) -> Tolerances {
        let mut t = Tolerances::uniform(self.tolerances.get("default").copied().unwrap_or(default));
        for (k, v) in &self.tolerances {
            if k != "default" {
                t = t.with(k, *v);
            }
        }
        t
    }
}

fn read_config(path: &Path) -> Result<ConfigFile, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
}

/// Exit code and captured output of one command.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: impl Into<String>) -> Self {
        Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {}\n", msg.into()),
        }
    }

    fn failure(msg: impl std::fmt::Display) -> Self {
        Outcome {
            code: EXIT_FAILURE,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let (command, args) = cli.command.split();
    match RunConfig::resolve(command, args) {
        Ok(cfg) => run(&cfg),
        Err(msg) => Outcome::usage(msg),
    }
}

/// The chart a family denotes, with its default parameters filled in.
pub fn family_chart(cfg: &RunConfig) -> s3tori::Result<SurfaceChart> {
    match cfg.family {
        Family::Sphere => Ok(sphere_chart()),
        Family::Clifford => Ok(clifford_chart()),
        Family::Lawson => lawson_chart(cfg.alpha()),
        Family::LawsonIso => lawson_isothermal_chart(cfg.alpha()),
        Family::SecondType => {
            let (s, t) = cfg.st();
            Ok(second_type_torus(s, t)?.chart())
        }
    }
}

/// The chart the θ-scan rotates: Lawson tori are scanned in principal coordinates.
pub fn scan_chart(cfg: &RunConfig) -> s3tori::Result<SurfaceChart> {
    match cfg.family {
        Family::Lawson | Family::LawsonIso => lawson_principal_chart(cfg.alpha()),
        _ => family_chart(cfg),
    }
}

pub fn family_patch(cfg: &RunConfig) -> s3tori::Result<HypersurfacePatch> {
    match cfg.family {
        Family::Sphere => helicoid1_patch(),
        Family::Clifford => helicoid2_patch(),
        Family::SecondType => second_type_hypersurface(cfg.st().0),
        _ => Err(s3tori::Error::MethodInapplicable("no hypersurface for this family")),
    }
}

pub fn run(cfg: &RunConfig) -> Outcome {
    if let Err(msg) = cfg.validate() {
        return Outcome::usage(msg);
    }
    let result = match cfg.command {
        CommandName::Construct => run_construct(cfg),
        CommandName::Verify => run_verify(cfg),
        CommandName::Scan => run_scan(cfg),
        CommandName::Hypersurface => run_hypersurface(cfg),
        CommandName::Export => run_export(cfg),
    };
    result.unwrap_or_else(Outcome::failure)
}

fn ok(stdout: String) -> s3tori::Result<Outcome> {
    Ok(Outcome {
        code: EXIT_OK,
        stdout,
        stderr: String::new(),
    })
}

fn grid_label(g: (usize, usize)) -> String {
    format!("{}x{}", g.0, g.1)
}

fn run_verify(cfg: &RunConfig) -> s3tori::Result<Outcome> {
    let chart = family_chart(cfg)?;
    let tols = cfg.tolerances_with_default(cfg.family.default_tolerance());
    let report = verify_chart(&chart, Grid::new(cfg.grid.0, cfg.grid.1), &tols);
    let text = match cfg.format {
        Some(Format::Json) => {
            let mut j = report.to_json();
            j.push('\n');
            j
        }
        _ => {
            let mut t = format!("verify {} grid={}\n", chart.name(), grid_label(cfg.grid));
            t.push_str(&report.to_text());
            t.push_str(if report.all_pass() { "result: PASS\n" } else { "result: FAIL\n" });
            t
        }
    };
    if let Some(out) = &cfg.out {
        write_atomic(out, &text)?;
    }
    Ok(Outcome {
        code: if report.all_pass() { EXIT_OK } else { EXIT_FAILURE },
        stdout: text,
        stderr: String::new(),
    })
}

fn run_scan(cfg: &RunConfig) -> s3tori::Result<Outcome> {
    let chart = scan_chart(cfg)?;
    let rows = scan_circle_families(&chart, &default_scan_angles())?;
    let mut t = format!("scan {}\ntheta circles kappa\n", chart.name());
    for row in &rows {
        let kappas: Vec<String> = row.verdicts.iter().map(|v| format_float(v.kappa)).collect();
        let _ = writeln!(
            t,
            "{} {} {}",
            format_float(row.theta),
            if row.all_circles() { "yes" } else { "no" },
            kappas.join(",")
        );
    }
    if let Some(out) = &cfg.out {
        write_atomic(out, &t)?;
    }
    ok(t)
}

fn run_hypersurface(cfg: &RunConfig) -> s3tori::Result<Outcome> {
    let patch = family_patch(cfg)?;
    let tols = cfg.tolerances_with_default(1e-4).with(
        "third_eigenvalue_max",
        cfg.tolerances.get("third_eigenvalue_max").copied().unwrap_or(1e-5),
    );
    let ws = patch.w_probe(5);
    let rep = shape_check(&patch, Grid::new(cfg.grid.0, cfg.grid.1), &ws)?;
    let (tm, t3) = (tols.get("max_mean_curvature"), tols.get("third_eigenvalue_max"));
    let pass = rep.max_mean_curvature <= tm && rep.third_eigenvalue_max <= t3;
    let (w0, w1) = patch.w_range();
    let mut t = format!(
        "hypersurface {} grid={} w=[{},{}]\n",
        patch.name(),
        grid_label(cfg.grid),
        format_float(w0),
        format_float(w1)
    );
    let _ = writeln!(t, "max_mean_curvature {} tol={}", format_float(rep.max_mean_curvature), format_float(tm));
    let _ = writeln!(t, "third_eigenvalue_max {} tol={}", format_float(rep.third_eigenvalue_max), format_float(t3));
    let _ = writeln!(t, "min_rank2_gap {}", format_float(rep.min_rank2_gap));
    t.push_str(if pass { "result: PASS\n" } else { "result: FAIL\n" });
    if let Some(out) = &cfg.out {
        write_atomic(out, &patch_to_csv(&patch, cfg.grid.0, cfg.grid.1, &ws))?;
    }
    Ok(Outcome {
        code: if pass { EXIT_OK } else { EXIT_FAILURE },
        stdout: t,
        stderr: String::new(),
    })
}

fn run_construct(cfg: &RunConfig) -> s3tori::Result<Outcome> {
    let chart = family_chart(cfg)?;
    let d = chart.domain();
    let mut t = format!("chart {}\n", chart.name());
    let _ = writeln!(
        t,
        "domain u=[{},{}] v=[{},{}]",
        format_float(d.u_min),
        format_float(d.u_max),
        format_float(d.v_min),
        format_float(d.v_max)
    );
    let _ = writeln!(t, "isothermal {}\nprincipal {}", chart.is_isothermal(), chart.is_principal());
    match cfg.family {
        Family::Lawson | Family::LawsonIso => {
            let _ = writeln!(t, "alpha {}", format_float(cfg.alpha()));
        }
        Family::SecondType => {
            let (s, tt) = cfg.st();
            let torus = second_type_torus(s, tt)?;
            let sol = torus.solution();
            for (k, v) in [
                ("s", s),
                ("t", tt),
                ("alpha", sol.alpha()),
                ("x0", sol.x0()),
                ("u0", sol.u0()),
                ("omega", sol.period()),
                ("beta", torus.beta()),
            ] {
                let _ = writeln!(t, "{k} {}", format_float(v));
            }
        }
        _ => {}
    }
    if let Some(out) = &cfg.out {
        let mesh = build_mesh(&chart, cfg.grid.0, cfg.grid.1, cfg.pole)?;
        write_mesh(out, &mesh, cfg.format.unwrap_or(Format::Csv))?;
        let _ = writeln!(t, "wrote {} vertices to {}", mesh.vertices.len(), out.display());
    }
    ok(t)
}

fn write_mesh(out: &Path, mesh: &s3tori::MeshR3, format: Format) -> s3tori::Result<()> {
    let text = match format {
        Format::Obj => mesh_to_obj(mesh),
        Format::Csv => mesh_to_csv(mesh),
        Format::Json => mesh_to_json(mesh),
    };
    write_atomic(out, &text)
}

fn run_export(cfg: &RunConfig) -> s3tori::Result<Outcome> {
    let chart = family_chart(cfg)?;
    let out = cfg.out.as_ref().expect("validated");
    let mesh = build_mesh(&chart, cfg.grid.0, cfg.grid.1, cfg.pole)?;
    write_mesh(out, &mesh, cfg.format.unwrap_or(Format::Obj))?;
    ok(format!(
        "wrote {} vertices and {} faces to {}\n",
        mesh.vertices.len(),
        mesh.faces.len(),
        out.display()
    ))
}
