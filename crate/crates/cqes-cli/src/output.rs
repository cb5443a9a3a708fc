//! Output plumbing shared by all subcommands.
//!
//! Every textual product of the CLI flows through this module so that the
//! formatting rules live in exactly one place:
//!
//! * floating-point values are printed with [`sig17`] (17 significant digits,
//!   enough for a lossless `f64` round trip);
//! * every CSV starts with a single `#` comment line naming the tool version,
//!   the subcommand, and the full parameter set that produced the file, so a
//!   stray CSV on disk can always be traced back to an exact invocation;
//! * nothing time- or machine-dependent is ever written, which keeps repeated
//!   runs byte-identical.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use cqes_core::{CouplingParams, CrossingKind, LevelLabel, ScanResult, SystemKind};

/// Format a float with 17 significant digits (`f64` round-trips exactly).
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

/// The `name=value` parameter echo used in CSV header comments.
///
/// Both coupling conventions are spelled out even though they are redundant;
/// readers of the file should not need to do the conversion themselves.
pub fn params_echo(p: &CouplingParams) -> String {
    format!(
        "beta={} kappa={} eta={} zeta={}",
        sig17(p.beta()),
        sig17(p.kappa()),
        sig17(p.eta()),
        sig17(p.zeta()),
    )
}

/// Build the `#`-comment header line for a CSV product.
///
/// `extras` are appended after the parameter echo as `key=value` pairs and
/// should carry the command-specific knobs (grid size, level count, ...).
pub fn csv_header(command: &str, params: Option<&CouplingParams>, extras: &[(&str, String)]) -> String {
    let mut line = format!("# cqes v{} | {command}", env!("CARGO_PKG_VERSION"));
    if let Some(p) = params {
        line.push_str(" | ");
        line.push_str(&params_echo(p));
    }
    if !extras.is_empty() {
        line.push_str(" |");
        for (k, v) in extras {
            line.push(' ');
            line.push_str(k);
            line.push('=');
            line.push_str(v);
        }
    }
    line.push('\n');
    line
}

/// Write `content` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, content: &str) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, content),
        None => io::stdout().write_all(content.as_bytes()),
    }
}

/// Level-curve CSV for a κ-scan. Pendulum rows fill `E_t`, hyperbolic rows
/// fill `minus_E_h` (= −E_h), so both families plot on one axis where the
/// anti-isospectral pairing makes them coincide. NaN padding (steps where a
/// sector had fewer tracked states) is skipped.
pub fn scan_curves_csv(result: &ScanResult, extras: &[(&str, String)]) -> String {
    let mut text = csv_header("scan", None, extras);
    text.push_str("kappa,system,label,level,E_t,minus_E_h\n");
    for (system, curve_set, negate) in [
        (SystemKind::Trigonometric, &result.trig_curves, false),
        (SystemKind::Hyperbolic, &result.hyp_curves, true),
    ] {
        for curve in curve_set {
            let label = curve.label.map(|l| l.to_string()).unwrap_or_default();
            for (k, e) in result.kappas.iter().zip(&curve.energies) {
                if !e.is_finite() {
                    continue;
                }
                let (et, mh) = if negate {
                    (String::new(), sig17(-e))
                } else {
                    (sig17(*e), String::new())
                };
                text.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    sig17(*k),
                    system,
                    label,
                    curve.sector_index,
                    et,
                    mh
                ));
            }
        }
    }
    text
}

/// Crossing-event CSV for a κ-scan.
pub fn scan_events_csv(result: &ScanResult, extras: &[(&str, String)]) -> String {
    let mut text = csv_header("scan", None, extras);
    text.push_str("kind,system,kappa,labels,gap\n");
    let lab = |l: Option<LevelLabel>| l.map(|x| x.to_string()).unwrap_or_else(|| "?".into());
    for ev in &result.events {
        let kind = match ev.kind {
            CrossingKind::Genuine => "genuine",
            CrossingKind::Avoided => "avoided",
            CrossingKind::Unclassified => "unclassified",
        };
        text.push_str(&format!(
            "{},{},{},{}/{},{}\n",
            kind,
            ev.system,
            sig17(ev.kappa_location),
            lab(ev.labels.0),
            lab(ev.labels.1),
            sig17(ev.gap)
        ));
    }
    text
}
