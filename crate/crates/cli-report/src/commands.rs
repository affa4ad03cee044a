use crate::angles::{parse_radians, sector};
use crate::config::RunConfig;
use crate::error::{internal, CliError, Result};
use crate::output::write_atomic;
use crate::pipeline::{full_audit, solve_and_audit, solve_on, solve_sector, AuditPlan};
use crate::svg;
use angle_relations::{sweep as angle_sweep, Regime};
use clap::{Args, Parser, Subcommand};
use moving_plane_audit::{audit_tolerance, AuditReport, ThetaPolicy, KAPPA};
use rayon::prelude::*;
use sector_fem::{principal_eigenvalue, FemSpace, FieldRecord, NonlinearitySpec, DEFAULT_TOL};
use sector_geometry::{critical_angles, derive_constants, lambda_check, lambda_hat, SectorSpec};
use sector_mesh::{generate, MeshOptions};
use serde::Serialize;
use sobolev_mp::{bessel_j0_first_zero, check_barrier_narrow, check_barrier_sector, sobolev_table, DEFAULT_RESOLUTION};
use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

/// Margin below which a triangle-angle relation counts as violated.
pub const ANGLE_THRESHOLD: f64 = 1e-10;
/// Relative slack of the doubling monotonicity `L_{2β} ≤ L_β`.
pub const DOUBLING_SLACK: f64 = 1e-3;

#[derive(Debug, Parser)]
#[command(name = "sector-symmetry", version, about = "Solve, audit and report on sub-spherical sectors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the derived constants of a sector, and the critical angles at one translation.
    Constants(ConstantsArgs),
    /// Random sweep of the triangle-angle relations in each regime.
    CheckAngles(CheckAnglesArgs),
    /// Solve the semilinear problem and write the field as JSON.
    Solve(SolveArgs),
    /// Audit a solved field and write the report as CSV.
    Audit(AuditArgs),
    /// Solve and audit every sector of an (alpha, beta) grid.
    Sweep(SweepArgs),
    /// Sobolev lower-bound table and barrier checks.
    Sobolev(SobolevArgs),
    /// Principal eigenvalue of the mixed Laplacian.
    Eigen(EigenArgs),
    /// Render a field heatmap, the sign map of u_x1 and margin curves as SVG.
    Plot(PlotArgs),
}

#[derive(Debug, Args)]
pub struct SectorArgs {
    /// Arc opening in radians.
    #[arg(long, value_parser = parse_radians)]
    pub alpha: f64,
    /// Sector amplitude in radians.
    #[arg(long, value_parser = parse_radians)]
    pub beta: f64,
}

impl SectorArgs {
    fn spec(&self) -> Result<SectorSpec> {
        sector(self.alpha, self.beta).map_err(CliError::Usage)
    }
}

#[derive(Debug, Args)]
pub struct MeshArgs {
    /// Target mesh size.
    #[arg(long, default_value_t = 0.04)]
    pub h: f64,
    /// Mirror-symmetric mesh about the bisector.
    #[arg(long)]
    pub symmetric: bool,
}

impl MeshArgs {
    fn options(&self) -> Result<MeshOptions> {
        if !(self.h > 0.0 && self.h <= 0.2) {
            return Err(CliError::usage(format!("--h {} outside (0, 0.2]", self.h)));
        }
        Ok(MeshOptions::new(self.h).symmetric(self.symmetric))
    }
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    #[command(flatten)]
    pub sector: SectorArgs,
    #[arg(long)]
    pub lambda: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CheckAnglesArgs {
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// JSON summary output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub sector: SectorArgs,
    #[command(flatten)]
    pub mesh: MeshArgs,
    /// Nonlinearity: const:c | linear:mu | power:c,p.
    #[arg(long, default_value = "const:1")]
    pub f: String,
    /// Newton residual tolerance.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Field JSON output.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    /// Field JSON written by `solve`.
    #[arg(long)]
    pub field: PathBuf,
    /// Translation parameters; defaults to a grid derived from the sector.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    pub lambda: Vec<f64>,
    /// Rotation parameters in radians; defaults to samples of the admissible set.
    #[arg(long, num_args = 1.., value_delimiter = ',', value_parser = parse_radians)]
    pub theta: Vec<f64>,
    /// Audit tolerance constant of 1e-8 + kappa h^2.
    #[arg(long, default_value_t = KAPPA)]
    pub kappa: f64,
    /// Newton tolerance of the refined solve behind the symmetry check.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Skip the refined solve; unsymmetric meshes then get no symmetry row.
    #[arg(long)]
    pub no_refine: bool,
    /// Report CSV output; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// TOML run configuration; flags given alongside override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, num_args = 1.., value_delimiter = ',', value_parser = parse_radians)]
    pub alpha: Vec<f64>,
    #[arg(long, num_args = 1.., value_delimiter = ',', value_parser = parse_radians)]
    pub beta: Vec<f64>,
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    pub lambda: Vec<f64>,
    #[arg(long, num_args = 1.., value_delimiter = ',', value_parser = parse_radians)]
    pub theta: Vec<f64>,
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long)]
    pub symmetric: bool,
    #[arg(long)]
    pub f: Option<String>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Report CSV output; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the effective configuration as TOML.
    #[arg(long)]
    pub emit_config: Option<PathBuf>,
}

impl SweepArgs {
    /// The configuration file, if any, with the explicit flags applied on top.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        let set = |dst: &mut Vec<f64>, src: &Vec<f64>| {
            if !src.is_empty() {
                *dst = src.clone();
            }
        };
        set(&mut cfg.alpha, &self.alpha);
        set(&mut cfg.beta, &self.beta);
        set(&mut cfg.lambda, &self.lambda);
        set(&mut cfg.theta, &self.theta);
        if let Some(h) = self.h {
            cfg.mesh.h = h;
        }
        if self.symmetric {
            cfg.mesh.symmetric = true;
        }
        if let Some(f) = &self.f {
            cfg.f = f.clone();
        }
        if let Some(t) = self.tol {
            cfg.tol = t;
        }
        if let Some(k) = self.kappa {
            cfg.kappa = k;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if self.out.is_some() {
            cfg.out = self.out.clone();
        }
        cfg.validate()?;
        if cfg.alpha.is_empty() || cfg.beta.is_empty() {
            return Err(CliError::usage("sweep needs at least one alpha and one beta"));
        }
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct SobolevArgs {
    /// Amplitudes in radians; each is tabulated together with its double.
    #[arg(long, num_args = 1.., value_delimiter = ',', value_parser = parse_radians)]
    pub beta: Vec<f64>,
    /// Potential bound of the barrier checks.
    #[arg(long, default_value_t = 1.0)]
    pub c0: f64,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    pub resolution: usize,
    /// Table CSV output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EigenArgs {
    #[command(flatten)]
    pub sector: SectorArgs,
    #[command(flatten)]
    pub mesh: MeshArgs,
    /// JSON output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Field JSON; renders `u.svg` and `ux1_sign.svg`.
    #[arg(long)]
    pub field: Option<PathBuf>,
    /// Report CSV; renders `margins.svg`.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Sign threshold of the u_x1 map; defaults to the audit tolerance of the field's mesh.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

/// Runs a command, writing human-readable output to `out`. Returns whether every asserted
/// check passed.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<bool> {
    match cli.command {
        Command::Constants(a) => cmd_constants(&a, out),
        Command::CheckAngles(a) => cmd_check_angles(&a, out),
        Command::Solve(a) => cmd_solve(&a, out),
        Command::Audit(a) => cmd_audit(&a, out),
        Command::Sweep(a) => cmd_sweep(&a, out),
        Command::Sobolev(a) => cmd_sobolev(&a, out),
        Command::Eigen(a) => cmd_eigen(&a, out),
        Command::Plot(a) => cmd_plot(&a, out),
    }
}

fn io(e: std::io::Error) -> CliError {
    internal(e)
}

fn to_json<T: Serialize>(v: &T) -> Result<Vec<u8>> {
    let mut s = serde_json::to_vec_pretty(v).map_err(internal)?;
    s.push(b'\n');
    Ok(s)
}

fn report_csv(report: &AuditReport) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    report.write_csv(&mut buf).map_err(internal)?;
    Ok(buf)
}

fn read_field(path: &Path) -> Result<FieldRecord> {
    let text = std::fs::read(path).map_err(|e| CliError::usage(format!("reading {}: {e}", path.display())))?;
    serde_json::from_slice(&text).map_err(|e| CliError::usage(format!("{} is not a field record: {e}", path.display())))
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "none".into(), |x| format!("{x:.12}"))
}

pub fn cmd_constants(a: &ConstantsArgs, out: &mut dyn Write) -> Result<bool> {
    let spec = a.sector.spec()?;
    let k = derive_constants(&spec);
    let mut rows: Vec<(&str, String)> = vec![
        ("alpha", format!("{:.12}", spec.alpha())),
        ("beta", format!("{:.12}", spec.beta())),
        ("a", format!("{:.12}", k.a)),
        ("l_n", format!("{:.12}", k.l_n)),
        ("lambda_c", format!("{:.12}", k.lambda_c)),
        ("lambda_sharp", format!("{:.12}", k.lambda_sharp)),
        ("l_perp", format!("{:.12}", k.l_perp)),
        ("lambda_max", format!("{:.12}", k.lambda_max)),
        ("beta_flat", format!("{:.12}", k.beta_flat)),
        ("zeta_flat", format!("{:.12}", k.zeta_flat)),
        ("lambda_flat", format!("{:.12}", k.lambda_flat)),
        ("l_star", fmt_opt(k.l_star)),
    ];
    if let Some(l) = a.lambda {
        if !(l.is_finite() && l >= 0.0) {
            return Err(CliError::usage(format!("--lambda {l} must be finite and nonnegative")));
        }
        let j = critical_angles(&spec, l).map_err(|e| CliError::usage(e.to_string()))?;
        let intervals: Vec<String> = j.intervals.iter().map(|i| format!("[{:.12}, {:.12}]", i.lo, i.hi)).collect();
        rows.push(("lambda", format!("{l:.12}")));
        rows.push(("theta_a", format!("{:.12}", j.theta_a)));
        rows.push(("theta_b", format!("{:.12}", j.theta_b)));
        rows.push(("j_lambda", if intervals.is_empty() { "empty".into() } else { intervals.join(" u ") }));
        rows.push(("lambda_hat", fmt_opt(lambda_hat(&spec, l, FRAC_PI_2).ok())));
        rows.push(("lambda_check", fmt_opt(lambda_check(&spec, l, FRAC_PI_2).ok())));
    }
    for (name, value) in rows {
        writeln!(out, "{name:<14} {value}").map_err(io)?;
    }
    Ok(true)
}

pub fn cmd_check_angles(a: &CheckAnglesArgs, out: &mut dyn Write) -> Result<bool> {
    if a.samples == 0 {
        return Err(CliError::usage("--samples must be positive"));
    }
    let summaries: Vec<_> = Regime::ALL
        .par_iter()
        .enumerate()
        .map(|(i, &r)| angle_sweep(r, a.samples, a.seed.wrapping_add(i as u64), ANGLE_THRESHOLD))
        .collect();
    let mut pass = true;
    for s in &summaries {
        let ok = s.passed(ANGLE_THRESHOLD);
        pass &= ok;
        writeln!(
            out,
            "regime {:<3} samples {:>7} min margin {:.6e} violations {} {}",
            s.regime.label(),
            s.samples,
            s.min_margin,
            s.violations,
            if ok { "PASS" } else { "FAIL" }
        )
        .map_err(io)?;
    }
    if let Some(p) = &a.out {
        write_atomic(p, &to_json(&summaries)?)?;
    }
    Ok(pass)
}

pub fn cmd_solve(a: &SolveArgs, out: &mut dyn Write) -> Result<bool> {
    let spec = a.sector.spec()?;
    let fspec: NonlinearitySpec = a.f.parse().map_err(|e| CliError::usage(format!("--f: {e}")))?;
    if !(a.tol > 0.0) {
        return Err(CliError::usage("--tol must be positive"));
    }
    let (field, report) = solve_sector(&spec, a.mesh.options()?, &fspec, a.tol)?;
    writeln!(
        out,
        "solved {} on {} vertices: {} Newton steps, residual {:.3e}, max u {:.6e}, positive {}",
        fspec,
        field.mesh().n_vertices(),
        report.newton_iterations,
        report.residual,
        field.max_value(),
        report.positive
    )
    .map_err(io)?;
    write_atomic(&a.out, &to_json(&field.to_record(Some(fspec), Some(report)))?)?;
    Ok(true)
}

fn summarize(report: &AuditReport, out: &mut dyn Write) -> Result<bool> {
    let regressions: Vec<_> = report.regressions().collect();
    for r in &regressions {
        writeln!(
            out,
            "FAIL {} alpha {:.6} beta {:.6} lambda {} theta {} violation {} tol {:.3e}",
            r.check_id,
            r.alpha,
            r.beta,
            fmt_opt(r.lambda),
            fmt_opt(r.theta),
            fmt_opt(r.max_violation),
            r.tolerance
        )
        .map_err(io)?;
    }
    let expected = report.rows.iter().filter(|r| r.is_expected_fail()).count();
    let exploratory = report.rows.iter().filter(|r| r.is_exploratory()).count();
    writeln!(
        out,
        "{} rows, {} regressions, {} expected-fail, {} exploratory",
        report.rows.len(),
        regressions.len(),
        expected,
        exploratory
    )
    .map_err(io)?;
    Ok(regressions.is_empty())
}

fn emit_report(report: &AuditReport, dest: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    let csv = report_csv(report)?;
    match dest {
        Some(p) => write_atomic(p, &csv).map_err(internal),
        None => out.write_all(&csv).map_err(io),
    }
}

pub fn cmd_audit(a: &AuditArgs, out: &mut dyn Write) -> Result<bool> {
    let record = read_field(&a.field)?;
    let fspec = record.fspec.clone();
    let field = record.into_field().map_err(|e| CliError::usage(format!("invalid field: {e}")))?;
    if !(a.kappa >= 0.0) {
        return Err(CliError::usage("--kappa must be nonnegative"));
    }
    let fine = match fspec {
        Some(f) if !a.no_refine && !field.mesh().symmetric => Some(solve_on(field.mesh().refine(), &f, a.tol)?.0),
        _ => None,
    };
    let plan = AuditPlan {
        lambdas: a.lambda.clone(),
        thetas: a.theta.clone(),
        policy: ThetaPolicy::default(),
        kappa: a.kappa,
    };
    let report = full_audit(field, fine.as_ref(), &plan);
    emit_report(&report, a.out.as_deref(), out)?;
    if a.out.is_some() {
        summarize(&report, out)
    } else {
        Ok(report.passed())
    }
}

/// Runs every entry of the configuration and concatenates the reports in entry order.
pub fn run_sweep(cfg: &RunConfig) -> Result<AuditReport> {
    let fspec = cfg.nonlinearity()?;
    let mesh: MeshOptions = cfg.mesh.clone().into();
    let plan = AuditPlan {
        lambdas: cfg.lambda.clone(),
        thetas: cfg.theta.clone(),
        policy: ThetaPolicy { fill: cfg.theta_fill },
        kappa: cfg.kappa,
    };
    let reports: Vec<AuditReport> = cfg
        .entries()?
        .par_iter()
        .map(|spec| solve_and_audit(spec, mesh, &fspec, cfg.tol, cfg.refine_symmetry, &plan))
        .collect::<Result<_>>()?;
    let mut all = AuditReport::new(cfg.kappa);
    all.rows = reports.into_iter().flat_map(|r| r.rows).collect();
    Ok(all)
}

/// Summary line of a sweep without regressions.
pub const SWEEP_PASS_LINE: &str = "all asserted symmetry, monotonicity and moving-plane checks pass";

pub fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write) -> Result<bool> {
    let cfg = a.resolve()?;
    if let Some(p) = &a.emit_config {
        write_atomic(p, cfg.to_toml().as_bytes())?;
    }
    let report = run_sweep(&cfg)?;
    emit_report(&report, cfg.out.as_deref(), out)?;
    if cfg.out.is_none() {
        return Ok(report.passed());
    }
    let pass = summarize(&report, out)?;
    if pass {
        writeln!(out, "{SWEEP_PASS_LINE}").map_err(io)?;
    }
    Ok(pass)
}

pub fn cmd_sobolev(a: &SobolevArgs, out: &mut dyn Write) -> Result<bool> {
    let betas = if a.beta.is_empty() { vec![PI / 8.0, PI / 4.0, PI / 2.0] } else { a.beta.clone() };
    if let Some(b) = betas.iter().find(|&&b| !(b > 0.0 && b <= PI)) {
        return Err(CliError::usage(format!("beta = {b} outside (0, pi]")));
    }
    if !(a.c0 > 0.0) || a.samples == 0 || a.resolution < 8 {
        return Err(CliError::usage("need c0 > 0, samples > 0 and resolution >= 8"));
    }
    let mut all: Vec<f64> = betas.iter().flat_map(|&b| [b, 2.0 * b]).collect();
    all.sort_by(f64::total_cmp);
    all.dedup();
    let rows = sobolev_table(&all, 1.0, a.resolution).map_err(internal)?;
    let l_of = |b: f64| rows.iter().find(|r| r.beta == b).map(|r| r.l_beta).unwrap_or(f64::NAN);
    let mut pass = true;
    for r in &rows {
        writeln!(out, "beta {:.6} L_beta {:.6e} scaled {:.6e}", r.beta, r.l_beta, r.scaled).map_err(io)?;
    }
    for &b in &betas {
        let ok = l_of(2.0 * b) <= l_of(b) * (1.0 + DOUBLING_SLACK);
        pass &= ok;
        writeln!(
            out,
            "doubling beta {b:.6}: L(2beta)/L(beta) = {:.6} {}",
            l_of(2.0 * b) / l_of(b),
            if ok { "PASS" } else { "FAIL" }
        )
        .map_err(io)?;
    }
    let narrow = check_barrier_narrow(a.c0, a.samples, a.seed).map_err(internal)?;
    let sectors: Vec<_> = betas
        .iter()
        .map(|&b| check_barrier_sector(a.c0, b, a.samples, a.seed))
        .collect::<sobolev_mp::Result<_>>()
        .map_err(internal)?;
    for c in std::iter::once(&narrow).chain(&sectors) {
        pass &= c.passed();
        writeln!(out, "barrier eta {:.6} max {:.6e} {}", c.eta, c.max_value, if c.passed() { "PASS" } else { "FAIL" })
            .map_err(io)?;
    }
    if let Some(p) = &a.out {
        let mut buf = Vec::new();
        sobolev_mp::write_csv(&rows, &mut buf).map_err(internal)?;
        write_atomic(p, &buf)?;
    }
    Ok(pass)
}

#[derive(Serialize)]
struct EigenRecord {
    alpha: f64,
    beta: f64,
    h: f64,
    n_vertices: usize,
    value: f64,
    iterations: usize,
    /// `j₀²`, the limit on the spherical sector.
    spherical_limit: Option<f64>,
}

pub fn cmd_eigen(a: &EigenArgs, out: &mut dyn Write) -> Result<bool> {
    let spec = a.sector.spec()?;
    let mesh = generate(&spec, a.mesh.options()?).map_err(internal)?;
    let n_vertices = mesh.n_vertices();
    let pair = principal_eigenvalue(&FemSpace::new(Arc::new(mesh))).map_err(internal)?;
    let limit = spec.is_spherical().then(|| bessel_j0_first_zero().powi(2));
    writeln!(out, "principal eigenvalue {:.10} after {} iterations", pair.value, pair.iterations).map_err(io)?;
    if let Some(j) = limit {
        writeln!(out, "spherical limit j0^2 = {j:.10}, relative gap {:.3e}", (pair.value - j).abs() / j).map_err(io)?;
    }
    if let Some(p) = &a.out {
        let rec = EigenRecord {
            alpha: spec.alpha(),
            beta: spec.beta(),
            h: a.mesh.h,
            n_vertices,
            value: pair.value,
            iterations: pair.iterations,
            spherical_limit: limit,
        };
        write_atomic(p, &to_json(&rec)?)?;
    }
    Ok(true)
}

pub fn cmd_plot(a: &PlotArgs, out: &mut dyn Write) -> Result<bool> {
    if a.field.is_none() && a.report.is_none() {
        return Err(CliError::usage("plot needs --field, --report or both"));
    }
    if let Some(path) = &a.field {
        let field = read_field(path)?.into_field().map_err(|e| CliError::usage(format!("invalid field: {e}")))?;
        let tol = a.tol.unwrap_or_else(|| audit_tolerance(KAPPA, field.mesh().h));
        let spec = field.mesh().spec;
        let title = format!("u on alpha = {:.4}, beta = {:.4}", spec.alpha(), spec.beta());
        write_atomic(&a.out.join("u.svg"), svg::heatmap(&field, &title).as_bytes())?;
        write_atomic(&a.out.join("ux1_sign.svg"), svg::sign_map(&field, tol, "sign of u_x1").as_bytes())?;
        writeln!(out, "wrote u.svg and ux1_sign.svg").map_err(io)?;
    }
    if let Some(path) = &a.report {
        let file =
            std::fs::File::open(path).map_err(|e| CliError::usage(format!("reading {}: {e}", path.display())))?;
        let report = AuditReport::read_csv(std::io::BufReader::new(file))
            .map_err(|e| CliError::usage(format!("{} is not an audit report: {e}", path.display())))?;
        write_atomic(&a.out.join("margins.svg"), svg::margin_plot(&report, "margin versus lambda").as_bytes())?;
        writeln!(out, "wrote margins.svg").map_err(io)?;
    }
    Ok(true)
}
