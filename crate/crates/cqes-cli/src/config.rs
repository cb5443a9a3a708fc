//! Optional JSON configuration file.
//!
//! `--config path.json` loads defaults for any long flag; values given on the
//! command line always win. Keys use the exact long-flag spelling (`"beta"`,
//! `"kappa-start"`, `"grid"`, ...). Unknown keys are rejected rather than
//! ignored so a typo cannot silently fall back to a built-in default.
//!
//! The coupling parameters get one extra merge rule: `--beta/--kappa` and
//! `--eta/--zeta` are alternative spellings of the same physical input, so
//! after merging, exactly one of the two pairs must be complete. A flag pair
//! coming partly from the file and partly from the command line is fine; two
//! rival complete pairs are not.

use std::fs;
use std::path::Path;

use serde::Deserialize;

use cqes_core::CouplingParams;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    // Coupling parameters (either pair).
    pub beta: Option<f64>,
    pub kappa: Option<f64>,
    pub eta: Option<f64>,
    pub zeta: Option<f64>,

    // Discretisation / truncation knobs.
    pub dim: Option<usize>,
    pub grid: Option<usize>,
    pub levels: Option<usize>,
    pub points: Option<usize>,
    #[serde(rename = "box")]
    pub box_half_width: Option<f64>,

    // Scan knobs.
    #[serde(rename = "kappa-start")]
    pub kappa_start: Option<f64>,
    #[serde(rename = "kappa-end")]
    pub kappa_end: Option<f64>,
    pub steps: Option<usize>,
    #[serde(rename = "avoided-gap-max")]
    pub avoided_gap_max: Option<f64>,

    // Selection knobs.
    pub system: Option<String>,
    pub irrep: Option<String>,
    pub method: Option<String>,
    pub level: Option<usize>,

    // Verification knobs.
    pub tol: Option<f64>,
    pub strict: Option<bool>,

    // Output destination (a path, or the basename for multi-file commands).
    pub output: Option<String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path)
            .map_err(|e| format!("cannot read config file {}: {e}", path.display()))?;
        serde_json::from_str(&text)
            .map_err(|e| format!("invalid config file {}: {e}", path.display()))
    }
}

/// The four coupling flags as they appeared on the command line.
#[derive(Debug, Clone, Copy, clap::Args)]
pub struct ParamArgs {
    /// Reduced barrier parameter (sign selects the eta branch; eta = kappa * beta)
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Reduced coupling ratio |eta| / sqrt(zeta) (>= 0)
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: Option<f64>,
    /// Orientation (cos theta) coupling strength
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<f64>,
    /// Alignment (cos^2 theta) coupling strength (> 0)
    #[arg(long, allow_hyphen_values = true)]
    pub zeta: Option<f64>,
}

/// Merge command line and config file into a validated parameter set.
pub fn resolve_params(cli: &ParamArgs, cfg: &FileConfig) -> Result<CouplingParams, String> {
    let cli_bk = cli.beta.is_some() || cli.kappa.is_some();
    let cli_ez = cli.eta.is_some() || cli.zeta.is_some();
    if cli_bk && cli_ez {
        return Err("give either --beta/--kappa or --eta/--zeta, not a mixture".into());
    }

    let beta = cli.beta.or(cfg.beta);
    let kappa = cli.kappa.or(cfg.kappa);
    let eta = cli.eta.or(cfg.eta);
    let zeta = cli.zeta.or(cfg.zeta);

    let bk = beta.zip(kappa);
    let ez = eta.zip(zeta);
    let chosen = match (bk, ez) {
        (Some(_), Some(_)) => {
            // Both pairs are complete after the merge; the command line
            // decides which one was meant. Two complete pairs from the
            // config file alone are ambiguous.
            if cli_bk {
                Pair::BetaKappa(bk.unwrap())
            } else if cli_ez {
                Pair::EtaZeta(ez.unwrap())
            } else {
                return Err(
                    "config file supplies both beta/kappa and eta/zeta; remove one pair".into(),
                );
            }
        }
        (Some(p), None) => Pair::BetaKappa(p),
        (None, Some(p)) => Pair::EtaZeta(p),
        (None, None) => {
            let given: Vec<&str> = [
                beta.map(|_| "beta"),
                kappa.map(|_| "kappa"),
                eta.map(|_| "eta"),
                zeta.map(|_| "zeta"),
            ]
            .into_iter()
            .flatten()
            .collect();
            return Err(if given.is_empty() {
                "missing coupling parameters: give --beta and --kappa (or --eta and --zeta)"
                    .into()
            } else {
                format!(
                    "incomplete coupling parameters (got only {}): give --beta and --kappa \
                     (or --eta and --zeta)",
                    given.join(", ")
                )
            });
        }
    };

    match chosen {
        Pair::BetaKappa((b, k)) => {
            CouplingParams::from_beta_kappa(b, k).map_err(|e| e.to_string())
        }
        Pair::EtaZeta((e, z)) => CouplingParams::from_eta_zeta(e, z).map_err(|e| e.to_string()),
    }
}

enum Pair {
    BetaKappa((f64, f64)),
    EtaZeta((f64, f64)),
}

/// Like [`resolve_params`] but for commands that only need `beta`
/// (the kappa axis is swept, so a fixed kappa would be meaningless).
pub fn resolve_beta_only(cli_beta: Option<f64>, cfg: &FileConfig) -> Result<f64, String> {
    match cli_beta.or(cfg.beta) {
        Some(b) => Ok(b),
        None => Err("missing --beta (the scan sweeps kappa at fixed beta)".into()),
    }
}
