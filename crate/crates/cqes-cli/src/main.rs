//! `cqes` — command-line front end for the conditional quasi-exact
//! solvability toolkit.
//!
//! Every subcommand is a thin, deterministic shell around one library entry
//! point: parameters in (either as `--beta/--kappa` or as `--eta/--zeta`,
//! optionally from a JSON config file), one CSV or JSON product out, on
//! stdout unless `--output` names a file. Repeated runs with the same inputs
//! produce byte-identical output.
//!
//! Exit codes: 0 success, 1 invalid usage or parameters, 2 numerical failure
//! (non-convergence under `--strict`, box verification failure, eigensolver
//! breakdown, failed `reproduce --strict` comparisons).
//!
//! Parallelism is demand-driven (the κ-scan fans out over rayon); set
//! `CQES_THREADS` to pin the worker count.

mod config;
mod output;
mod reproduce;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use cqes_core::{
    analytic_spectrum, build_operator, default_truncation_dim, eta_scan, fgh_spectrum,
    truncated_spectrum_merged, verify_ais, AisConfig, FghConfig, Irrep, LevelInfo, ScanConfig,
    SystemKind, Wavefunction,
};

use config::{resolve_beta_only, resolve_params, FileConfig, ParamArgs};
use output::{csv_header, emit, sig17};

/// A failure with the process exit code it must map to.
pub(crate) struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { code: 1, message: message.into() }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }
}

impl From<cqes_core::Error> for CliError {
    fn from(e: cqes_core::Error) -> Self {
        use cqes_core::Error as E;
        let code = match e {
            // The computation itself broke down.
            E::ComplexEnergy { .. }
            | E::DegenerateBlock { .. }
            | E::HyperbolicDivergence
            | E::BoxTooSmall { .. }
            | E::Indeterminate
            | E::EigenFailure { .. } => 2,
            // The request was malformed or outside the method's domain.
            _ => 1,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<String> for CliError {
    fn from(message: String) -> Self {
        CliError::usage(message)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError { code: 2, message: format!("i/o error: {e}") }
    }
}

#[derive(Parser)]
#[command(
    name = "cqes",
    version,
    about = "Conditionally quasi-exactly solvable pendulum and hyperbolic double well",
    after_help = "Coupling parameters are given either as --beta/--kappa or as --eta/--zeta \
                  (eta = kappa*beta, zeta = beta^2). A JSON config file passed with --config \
                  may supply any long flag; command-line values win."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit one symmetry-adapted tridiagonal operator as JSON
    BuildMatrix(BuildMatrixArgs),
    /// Exact energies and coefficients of the detached analytic blocks (CSV)
    Analytic(AnalyticArgs),
    /// Pendulum spectrum via basis truncation and/or the grid method (CSV)
    Spectrum(SpectrumArgs),
    /// Fourier-grid spectrum of either system (CSV)
    Fgh(FghArgs),
    /// Sample one exact wavefunction on a uniform grid (CSV)
    Wavefunction(WavefunctionArgs),
    /// Sweep kappa at fixed beta; write level curves and crossing events (CSV)
    Scan(ScanArgs),
    /// Check the anti-isospectral pairing between the two systems (JSON)
    Verify(VerifyArgs),
    /// Recompute a bundled reference table or figure dataset and compare
    Reproduce(ReproduceArgs),
}

#[derive(Args)]
struct BuildMatrixArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// C2v irrep of the basis (A1, B1, B2, A2)
    #[arg(long)]
    irrep: Option<String>,
    /// Matrix dimension (defaults to a converged truncation size)
    #[arg(long)]
    dim: Option<usize>,
    /// JSON file with default flag values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyticArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Restrict to one irrep (default: every irrep that detaches at this kappa)
    #[arg(long)]
    irrep: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Solver route: truncated, fgh, or both
    #[arg(long)]
    method: Option<String>,
    /// Truncation dimension for the matrix route
    #[arg(long)]
    dim: Option<usize>,
    /// Grid points for the fgh route (power of two >= 64)
    #[arg(long)]
    grid: Option<usize>,
    /// Number of levels to report
    #[arg(long)]
    levels: Option<usize>,
    /// Escalate unconverged levels (and box checks) to exit code 2
    #[arg(long)]
    strict: bool,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct FghArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Which system to solve: trig or hyp
    #[arg(long)]
    system: Option<String>,
    /// Grid points (power of two >= 64)
    #[arg(long)]
    grid: Option<usize>,
    /// Number of levels to report
    #[arg(long)]
    levels: Option<usize>,
    /// Override the hyperbolic box half-width (rejected for trig)
    #[arg(long = "box")]
    box_half_width: Option<f64>,
    /// Escalate unconverged levels and box checks to exit code 2
    #[arg(long)]
    strict: bool,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct WavefunctionArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Which system's coordinate and energy convention to use: trig or hyp
    #[arg(long)]
    system: Option<String>,
    /// C2v irrep of the analytic block
    #[arg(long)]
    irrep: Option<String>,
    /// Index of the exact level inside the block (0 = lowest pendulum state)
    #[arg(long)]
    level: Option<usize>,
    /// Number of sample points (inclusive uniform grid)
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    /// Fixed barrier parameter beta (< 0 keeps the hyperbolic side bound)
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    /// First kappa of the sweep
    #[arg(long = "kappa-start", allow_hyphen_values = true)]
    kappa_start: Option<f64>,
    /// Last kappa of the sweep
    #[arg(long = "kappa-end", allow_hyphen_values = true)]
    kappa_end: Option<f64>,
    /// Number of sweep steps (>= 2)
    #[arg(long)]
    steps: Option<usize>,
    /// Levels tracked per system
    #[arg(long)]
    levels: Option<usize>,
    /// Grid points per step
    #[arg(long)]
    grid: Option<usize>,
    /// Same-sector gap below which an encounter counts as avoided
    #[arg(long = "avoided-gap-max")]
    avoided_gap_max: Option<f64>,
    /// Basename for the two output files ({base}_curves.csv, {base}_events.csv)
    #[arg(long)]
    output: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Grid points for the hyperbolic reference solve
    #[arg(long)]
    grid: Option<usize>,
    /// Pairing tolerance on |E_h + E_t|
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Reference target: table5, table6, table4-check, fig4-data .. fig9-data
    target: String,
    /// Directory the CSV/JSON products are written into
    #[arg(long = "out-dir", default_value = ".")]
    out_dir: PathBuf,
    /// Exit 2 if any recomputed cell misses its tolerance
    #[arg(long)]
    strict: bool,
}

fn main() {
    if let Err(msg) = init_thread_pool() {
        eprintln!("cqes: {msg}");
        std::process::exit(1);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("cqes: {}", e.message);
        std::process::exit(e.code);
    }
}

/// Honor `CQES_THREADS` before any rayon work spins up the default pool.
fn init_thread_pool() -> Result<(), String> {
    match std::env::var("CQES_THREADS") {
        Err(std::env::VarError::NotPresent) => Ok(()),
        Err(e) => Err(format!("CQES_THREADS is not valid unicode: {e}")),
        Ok(raw) => {
            let n: usize = raw
                .parse()
                .map_err(|_| format!("CQES_THREADS must be a positive integer, got '{raw}'"))?;
            if n == 0 {
                return Err("CQES_THREADS must be >= 1".into());
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| format!("cannot configure the thread pool: {e}"))
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::BuildMatrix(a) => cmd_build_matrix(a),
        Command::Analytic(a) => cmd_analytic(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Fgh(a) => cmd_fgh(a),
        Command::Wavefunction(a) => cmd_wavefunction(a),
        Command::Scan(a) => cmd_scan(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Reproduce(a) => reproduce::run(&a.target, &a.out_dir, a.strict),
    }
}

fn load_cfg(path: &Option<PathBuf>) -> Result<FileConfig, CliError> {
    match path {
        Some(p) => FileConfig::load(p).map_err(CliError::usage),
        None => Ok(FileConfig::default()),
    }
}

fn parse_irrep(s: &str) -> Result<Irrep, CliError> {
    s.parse::<Irrep>().map_err(CliError::usage)
}

fn resolve_irrep(cli: Option<String>, cfg: &FileConfig) -> Result<Irrep, CliError> {
    match cli.or_else(|| cfg.irrep.clone()) {
        Some(s) => parse_irrep(&s),
        None => Err(CliError::usage("missing --irrep (A1, B1, B2 or A2)")),
    }
}

fn resolve_system(cli: Option<String>, cfg: &FileConfig) -> Result<SystemKind, CliError> {
    let s = cli
        .or_else(|| cfg.system.clone())
        .ok_or_else(|| CliError::usage("missing --system (trig or hyp)"))?;
    match s.to_ascii_lowercase().as_str() {
        "trig" | "trigonometric" | "pendulum" => Ok(SystemKind::Trigonometric),
        "hyp" | "hyperbolic" | "razavy" => Ok(SystemKind::Hyperbolic),
        other => Err(CliError::usage(format!(
            "unknown system '{other}' (expected trig or hyp)"
        ))),
    }
}

/// Which solver routes `spectrum` should run.
#[derive(Clone, Copy, PartialEq)]
enum MethodChoice {
    Truncated,
    Fgh,
    Both,
}

fn resolve_method(cli: Option<String>, cfg: &FileConfig) -> Result<MethodChoice, CliError> {
    let s = match cli.or_else(|| cfg.method.clone()) {
        None => return Ok(MethodChoice::Both),
        Some(s) => s,
    };
    match s.to_ascii_lowercase().as_str() {
        "truncated" => Ok(MethodChoice::Truncated),
        "fgh" => Ok(MethodChoice::Fgh),
        "both" => Ok(MethodChoice::Both),
        other => Err(CliError::usage(format!(
            "unknown method '{other}' (expected truncated, fgh or both)"
        ))),
    }
}

// ---------------------------------------------------------------------------
// build-matrix
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct MatrixOut<'a> {
    generator: String,
    irrep: String,
    beta: f64,
    kappa: f64,
    eta: f64,
    zeta: f64,
    dim: usize,
    /// Index i such that sub[i] == 0 splits off rows 0..=i (None: no split).
    split_index: Option<usize>,
    diag: &'a [f64],
    sub: &'a [f64],
    sup: &'a [f64],
}

fn cmd_build_matrix(a: BuildMatrixArgs) -> Result<(), CliError> {
    let cfg = load_cfg(&a.config)?;
    let p = resolve_params(&a.params, &cfg)?;
    let irrep = resolve_irrep(a.irrep, &cfg)?;
    let dim = a
        .dim
        .or(cfg.dim)
        .unwrap_or_else(|| default_truncation_dim(irrep, &p));
    let op = build_operator(irrep, &p, dim)?;
    let out = MatrixOut {
        generator: format!("cqes v{}", env!("CARGO_PKG_VERSION")),
        irrep: irrep.to_string(),
        beta: p.beta(),
        kappa: p.kappa(),
        eta: p.eta(),
        zeta: p.zeta(),
        dim: op.dim(),
        split_index: op.split_index,
        diag: &op.diag,
        sub: &op.sub,
        sup: &op.sup,
    };
    let mut text = serde_json::to_string_pretty(&out).expect("matrix serialization cannot fail");
    text.push('\n');
    emit(a.output.as_deref(), &text)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// analytic
// ---------------------------------------------------------------------------

fn cmd_analytic(a: AnalyticArgs) -> Result<(), CliError> {
    let cfg = load_cfg(&a.config)?;
    let p = resolve_params(&a.params, &cfg)?;

    let irreps: Vec<Irrep> = match a.irrep.or_else(|| cfg.irrep.clone()) {
        Some(s) => vec![parse_irrep(&s)?],
        None => {
            let k = p.integer_kappa().ok_or_else(|| {
                CliError::usage(format!(
                    "kappa = {} is not an integer; no analytic blocks exist",
                    p.kappa()
                ))
            })?;
            let detaching: Vec<Irrep> = Irrep::ALL
                .into_iter()
                .filter(|ir| cqes_core::analytic_block_dim(*ir, k).is_some())
                .collect();
            if detaching.is_empty() {
                return Err(CliError::usage(format!(
                    "no irrep detaches an analytic block at kappa = {k}"
                )));
            }
            detaching
        }
    };

    let mut levels = Vec::new();
    for irrep in irreps {
        levels.extend(analytic_spectrum(irrep, &p)?);
    }
    let max_coeffs = levels.iter().map(|l| l.coefficients.len()).max().unwrap_or(0);

    let mut text = csv_header("analytic", Some(&p), &[]);
    text.push_str("kappa,irrep,n,E_t,E_h");
    for i in 0..max_coeffs {
        text.push_str(&format!(",coeff_{i}"));
    }
    text.push('\n');
    for l in &levels {
        text.push_str(&format!(
            "{},{},{},{},{}",
            l.kappa,
            l.irrep,
            l.n,
            sig17(l.energy_t),
            sig17(l.energy_h)
        ));
        for i in 0..max_coeffs {
            text.push(',');
            if let Some(c) = l.coefficients.get(i) {
                text.push_str(&sig17(*c));
            }
        }
        text.push('\n');
    }
    emit(a.output.as_deref(), &text)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// spectrum / fgh (shared CSV shape)
// ---------------------------------------------------------------------------

fn spectrum_rows(text: &mut String, levels: &[LevelInfo], method: &str) {
    for l in levels {
        let label = l.label.map(|lb| lb.to_string()).unwrap_or_default();
        text.push_str(&format!(
            "{},{},{},{},{}\n",
            l.n,
            label,
            sig17(l.energy),
            method,
            sig17(l.error_estimate)
        ));
    }
}

/// Under `--strict`, any level whose companion-resolution shift exceeded the
/// convergence threshold turns the run into a numerical failure (exit 2) —
/// after the CSV has been written, so the evidence is on disk.
fn strict_convergence_gate(unconverged: &[(String, usize)]) -> Result<(), CliError> {
    if unconverged.is_empty() {
        return Ok(());
    }
    let list: Vec<String> = unconverged
        .iter()
        .map(|(m, n)| format!("{m} level {n}"))
        .collect();
    Err(CliError::numerical(format!(
        "unconverged under --strict: {}",
        list.join(", ")
    )))
}

fn cmd_spectrum(a: SpectrumArgs) -> Result<(), CliError> {
    let cfg = load_cfg(&a.config)?;
    let p = resolve_params(&a.params, &cfg)?;
    let method = resolve_method(a.method, &cfg)?;
    let n_levels = a.levels.or(cfg.levels).unwrap_or(10);
    let dim = a.dim.or(cfg.dim).unwrap_or_else(|| {
        Irrep::ALL
            .into_iter()
            .map(|ir| default_truncation_dim(ir, &p))
            .max()
            .expect("Irrep::ALL is non-empty")
    });
    let grid = a.grid.or(cfg.grid).unwrap_or(1024);
    let strict = a.strict || cfg.strict.unwrap_or(false);

    let mut extras = vec![("levels", n_levels.to_string())];
    if method != MethodChoice::Fgh {
        extras.push(("dim", dim.to_string()));
    }
    if method != MethodChoice::Truncated {
        extras.push(("grid", grid.to_string()));
    }
    let mut text = csv_header("spectrum", Some(&p), &extras);
    text.push_str("n,irrep,energy,method,error_estimate\n");

    let mut unconverged: Vec<(String, usize)> = Vec::new();
    if method != MethodChoice::Fgh {
        let r = truncated_spectrum_merged(&p, dim, n_levels)?;
        spectrum_rows(&mut text, &r.levels, "truncated");
        unconverged.extend(
            r.levels.iter().filter(|l| !l.converged).map(|l| ("truncated".to_string(), l.n)),
        );
    }
    if method != MethodChoice::Truncated {
        let fgh_cfg = FghConfig {
            grid_points: grid,
            box_half_width: None,
            n_levels,
            verify_box: strict,
        };
        let r = fgh_spectrum(SystemKind::Trigonometric, &p, &fgh_cfg)?;
        spectrum_rows(&mut text, &r.levels, "fgh");
        unconverged.extend(
            r.levels.iter().filter(|l| !l.converged).map(|l| ("fgh".to_string(), l.n)),
        );
    }

    emit(a.output.as_deref(), &text)?;
    if strict {
        strict_convergence_gate(&unconverged)?;
    }
    Ok(())
}

fn cmd_fgh(a: FghArgs) -> Result<(), CliError> {
    let cfg = load_cfg(&a.config)?;
    let p = resolve_params(&a.params, &cfg)?;
    let system = resolve_system(a.system, &cfg)?;
    let grid = a.grid.or(cfg.grid).unwrap_or(1024);
    let n_levels = a.levels.or(cfg.levels).unwrap_or(10);
    let box_half_width = a.box_half_width.or(cfg.box_half_width);
    let strict = a.strict || cfg.strict.unwrap_or(false);

    let fgh_cfg = FghConfig {
        grid_points: grid,
        box_half_width,
        n_levels,
        verify_box: strict,
    };
    let r = fgh_spectrum(system, &p, &fgh_cfg)?;

    let mut extras = vec![
        ("system", system.to_string()),
        ("grid", grid.to_string()),
        ("levels", n_levels.to_string()),
    ];
    if let Some(l) = box_half_width {
        extras.push(("box", sig17(l)));
    }
    let mut text = csv_header("fgh", Some(&p), &extras);
    text.push_str("n,irrep,energy,method,error_estimate\n");
    spectrum_rows(&mut text, &r.levels, "fgh");

    emit(a.output.as_deref(), &text)?;
    if strict {
        let unconverged: Vec<(String, usize)> = r
            .levels
            .iter()
            .filter(|l| !l.converged)
            .map(|l| ("fgh".to_string(), l.n))
            .collect();
        strict_convergence_gate(&unconverged)?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// wavefunction
// ---------------------------------------------------------------------------

fn cmd_wavefunction(a: WavefunctionArgs) -> Result<(), CliError> {
    let cfg = load_cfg(&a.config)?;
    let p = resolve_params(&a.params, &cfg)?;
    let system = resolve_system(a.system, &cfg)?;
    let irrep = resolve_irrep(a.irrep, &cfg)?;
    let level_idx = a.level.or(cfg.level).unwrap_or(0);
    let points = a.points.or(cfg.points).unwrap_or(1024);
    if points < 2 {
        return Err(CliError::usage("--points must be at least 2"));
    }

    let levels = analytic_spectrum(irrep, &p)?;
    let level = levels.get(level_idx).ok_or_else(|| {
        CliError::usage(format!(
            "level {level_idx} out of range: irrep {irrep} at kappa = {} has {} exact levels",
            p.kappa(),
            levels.len()
        ))
    })?;
    let wf = Wavefunction::from_level(system, level, &p)?;

    let half_width = match system {
        SystemKind::Trigonometric => 2.0 * std::f64::consts::PI,
        SystemKind::Hyperbolic => wf.box_half_width(),
    };
    let xs: Vec<f64> = (0..points)
        .map(|i| -half_width + 2.0 * half_width * i as f64 / (points - 1) as f64)
        .collect();
    let values = wf.evaluate_many(&xs);

    let energy = match system {
        SystemKind::Trigonometric => level.energy_t,
        SystemKind::Hyperbolic => level.energy_h,
    };
    let extras = [
        ("system", system.to_string()),
        ("irrep", irrep.to_string()),
        ("level", level_idx.to_string()),
        ("energy", sig17(energy)),
        ("points", points.to_string()),
        ("residual_max", sig17(wf.residual_max())),
    ];
    let mut text = csv_header("wavefunction", Some(&p), &extras);
    text.push_str("coord,value\n");
    for (x, v) in xs.iter().zip(&values) {
        text.push_str(&format!("{},{}\n", sig17(*x), sig17(*v)));
    }
    emit(a.output.as_deref(), &text)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// scan
// ---------------------------------------------------------------------------

fn cmd_scan(a: ScanArgs) -> Result<(), CliError> {
    let cfg = load_cfg(&a.config)?;
    let beta = resolve_beta_only(a.beta, &cfg)?;
    let defaults = ScanConfig::default();
    let scan_cfg = ScanConfig {
        kappa_start: a.kappa_start.or(cfg.kappa_start).unwrap_or(defaults.kappa_start),
        kappa_end: a.kappa_end.or(cfg.kappa_end).unwrap_or(defaults.kappa_end),
        steps: a.steps.or(cfg.steps).unwrap_or(defaults.steps),
        n_levels: a.levels.or(cfg.levels).unwrap_or(defaults.n_levels),
        grid_points: a.grid.or(cfg.grid).unwrap_or(defaults.grid_points),
        avoided_gap_max: a
            .avoided_gap_max
            .or(cfg.avoided_gap_max)
            .unwrap_or(defaults.avoided_gap_max),
    };
    let base = a.output.or_else(|| cfg.output.clone()).unwrap_or_else(|| "scan".into());

    let result = eta_scan(beta, &scan_cfg)?;

    let extras = [
        ("kappa-start", sig17(scan_cfg.kappa_start)),
        ("kappa-end", sig17(scan_cfg.kappa_end)),
        ("steps", scan_cfg.steps.to_string()),
        ("levels", scan_cfg.n_levels.to_string()),
        ("grid", scan_cfg.grid_points.to_string()),
        ("beta", sig17(beta)),
    ];

    let curves = output::scan_curves_csv(&result, &extras);
    let events = output::scan_events_csv(&result, &extras);
    emit(Some(&PathBuf::from(format!("{base}_curves.csv"))), &curves)?;
    emit(Some(&PathBuf::from(format!("{base}_events.csv"))), &events)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn cmd_verify(a: VerifyArgs) -> Result<(), CliError> {
    let cfg = load_cfg(&a.config)?;
    let p = resolve_params(&a.params, &cfg)?;
    let defaults = AisConfig::default();
    let ais_cfg = AisConfig {
        grid_points: a.grid.or(cfg.grid).unwrap_or(defaults.grid_points),
        tolerance: a.tol.or(cfg.tol).unwrap_or(defaults.tolerance),
    };
    let report = verify_ais(&p, &ais_cfg)?;
    // A pairing that fails to hold is a *finding*, not a tool failure: the
    // report documents it and the exit code stays 0.
    let mut text =
        serde_json::to_string_pretty(&report).expect("report serialization cannot fail");
    text.push('\n');
    emit(a.output.as_deref(), &text)?;
    Ok(())
}
