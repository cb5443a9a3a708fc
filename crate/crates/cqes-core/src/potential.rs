//! The two potentials, their stationary structure, and the C-QES window.
//!
//! All closed-form feature values below follow from the stationary-point
//! equations sin θ (η + 2ζ cos θ) = 0 and sinh x (η + 2ζ cosh x) = 0:
//! interior extrema exist exactly when |η| ≤ 2ζ (trigonometric) or
//! −η ≥ 2ζ (hyperbolic), and the boundary case |η| = 2ζ produces a
//! stationary point whose first three derivatives vanish.

use crate::error::{Error, Result};
use crate::params::{CouplingParams, SystemKind};
use serde::Serialize;

/// Qualitative shape of a potential over one period (trig) or the line (hyp).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WellShape {
    SingleWell,
    /// Trigonometric, 0 < |η| < 2ζ: inequivalent minima at θ = 0 and θ = π.
    AsymmetricDoubleWell,
    /// Hyperbolic with −η > 2ζ, or the pure-cos²θ pendulum (η = 0).
    SymmetricDoubleWell,
    /// |η| = 2ζ, hyperbolic side: the two minima have just merged at x = 0
    /// into a quartic-bottom well (V′ = V″ = V‴ = 0 there).
    FlatBottom,
    /// |η| = 2ζ, trigonometric side: the maxima merge with the shallow
    /// minimum into a quartic-top stationary point.
    FlatTop,
}

/// A stationary point and the potential value there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extremum {
    pub location: f64,
    pub value: f64,
}

/// Stationary structure of one potential plus the shared C-QES energy window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PotentialFeatures {
    pub system: SystemKind,
    pub shape: WellShape,
    /// Minima sorted by value (global first). Trig locations are in [0, 2π).
    pub minima: Vec<Extremum>,
    /// Maxima (trig) or the local barrier top between hyperbolic wells.
    pub maxima: Vec<Extremum>,
    /// [global min of V_t, −(global min of V_h)]: the window that analytic
    /// (QES) states of both systems live in.
    pub qes_window: (f64, f64),
}

impl PotentialFeatures {
    /// Height of the barrier above the global minimum, when one exists.
    /// For the trigonometric double well this equals (κ/2 + |β|)².
    pub fn barrier_height(&self) -> Option<f64> {
        let top = self.maxima.first()?.value;
        Some(top - self.minima.first()?.value)
    }
}

/// Separation and dissociation energy of the back-to-back Morse pair that
/// the hyperbolic double well asymptotically consists of.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DoubleMorse {
    /// Distance 2·ln(κ/|β|) between the two Morse minima.
    pub separation: f64,
    /// Depth κ²/4 of each Morse component.
    pub dissociation: f64,
}

/// Evaluate V_t(θ) = −η cos θ − ζ cos²θ or V_h(x) = η cosh x + ζ cosh²x.
///
/// The hyperbolic branch overflows for |x| ≳ 355 with ζ ~ 1; use
/// [`potential_value_flagged`] where saturation must be detected.
pub fn potential_value(system: SystemKind, p: &CouplingParams, coord: f64) -> f64 {
    let (eta, zeta) = (p.eta(), p.zeta());
    match system {
        SystemKind::Trigonometric => {
            let c = coord.cos();
            -eta * c - zeta * c * c
        }
        SystemKind::Hyperbolic => {
            let c = coord.cosh();
            // zeta c² dominates eta c for large |x|; group to avoid inf − inf.
            c * zeta.mul_add(c, eta)
        }
    }
}

/// Like [`potential_value`], but clamps an overflowing hyperbolic value to
/// `f64::MAX` and reports the saturation.
pub fn potential_value_flagged(
    system: SystemKind,
    p: &CouplingParams,
    coord: f64,
) -> (f64, bool) {
    let v = potential_value(system, p, coord);
    if v.is_finite() {
        (v, false)
    } else {
        (f64::MAX, true)
    }
}

/// Stationary points, shape class and the C-QES window for one system.
pub fn potential_features(system: SystemKind, p: &CouplingParams) -> PotentialFeatures {
    let (eta, zeta) = (p.eta(), p.zeta());
    let qes_window = qes_window(p);
    match system {
        SystemKind::Trigonometric => trig_features(eta, zeta, qes_window),
        SystemKind::Hyperbolic => hyp_features(eta, zeta, qes_window),
    }
}

/// The energy window [min V_t, −min V_h] shared by both systems.
pub fn qes_window(p: &CouplingParams) -> (f64, f64) {
    let (eta, zeta) = (p.eta(), p.zeta());
    let lower = -eta.abs() - zeta;
    let upper = if eta < 0.0 && -eta >= 2.0 * zeta {
        eta * eta / (4.0 * zeta)
    } else {
        -(eta + zeta)
    };
    (lower, upper)
}

fn trig_features(eta: f64, zeta: f64, qes_window: (f64, f64)) -> PotentialFeatures {
    use std::f64::consts::PI;
    let at_zero = -eta - zeta;
    let at_pi = eta - zeta;
    let interior = eta * eta / (4.0 * zeta); // value at cos θ = −η/2ζ when it exists

    let (shape, minima, maxima) = if eta == 0.0 {
        // Pure cos²θ: equal minima at 0 and π, maxima at ±π/2.
        (
            WellShape::SymmetricDoubleWell,
            vec![ex(0.0, -zeta), ex(PI, -zeta)],
            vec![ex(PI / 2.0, 0.0), ex(3.0 * PI / 2.0, 0.0)],
        )
    } else {
        // Deep minimum at π for η < 0, at 0 for η > 0.
        let (deep, shallow) = if eta < 0.0 {
            (ex(PI, at_pi), ex(0.0, at_zero))
        } else {
            (ex(0.0, at_zero), ex(PI, at_pi))
        };
        let ratio = -eta / (2.0 * zeta); // cos θ at interior stationary points
        if ratio.abs() < 1.0 {
            let t = ratio.acos();
            (
                WellShape::AsymmetricDoubleWell,
                vec![deep, shallow],
                vec![ex(t, interior), ex(2.0 * PI - t, interior)],
            )
        } else if ratio.abs() == 1.0 {
            // Maxima have merged with the shallow minimum: quartic top there.
            (WellShape::FlatTop, vec![deep], vec![shallow])
        } else {
            (WellShape::SingleWell, vec![deep], vec![shallow])
        }
    };
    PotentialFeatures {
        system: SystemKind::Trigonometric,
        shape,
        minima,
        maxima,
        qes_window,
    }
}

fn hyp_features(eta: f64, zeta: f64, qes_window: (f64, f64)) -> PotentialFeatures {
    let at_zero = eta + zeta;
    let ratio = -eta / (2.0 * zeta); // cosh x at interior stationary points
    let (shape, minima, maxima) = if ratio > 1.0 {
        let x = ratio.acosh();
        let depth = -eta * eta / (4.0 * zeta);
        (
            WellShape::SymmetricDoubleWell,
            vec![ex(-x, depth), ex(x, depth)],
            vec![ex(0.0, at_zero)],
        )
    } else if ratio == 1.0 {
        (WellShape::FlatBottom, vec![ex(0.0, at_zero)], vec![])
    } else {
        (WellShape::SingleWell, vec![ex(0.0, at_zero)], vec![])
    };
    PotentialFeatures {
        system: SystemKind::Hyperbolic,
        shape,
        minima,
        maxima,
        qes_window,
    }
}

fn ex(location: f64, value: f64) -> Extremum {
    Extremum { location, value }
}

/// Morse-pair geometry of the hyperbolic double well.
///
/// Requires κ > 2|β| (equivalently −η > 2ζ for η < 0); otherwise the two
/// Morse components have no separated minima to measure.
pub fn double_morse_separation(p: &CouplingParams) -> Result<DoubleMorse> {
    let (kappa, beta) = (p.kappa(), p.beta());
    if kappa <= 2.0 * beta.abs() {
        return Err(Error::NotDoubleWell {
            kappa,
            two_abs_beta: 2.0 * beta.abs(),
        });
    }
    Ok(DoubleMorse {
        separation: 2.0 * (kappa / beta.abs()).ln(),
        dissociation: kappa * kappa / 4.0,
    })
}
