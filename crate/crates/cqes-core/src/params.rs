//! Coupling parameters of the two anti-isospectral Hamiltonians.
//!
//! Both potentials are controlled by the pair (η, ζ):
//!
//! ```text
//! V_t(θ) = −η cos θ − ζ cos²θ          (planar pendulum, θ ∈ [−2π, 2π))
//! V_h(x) =  η cosh x + ζ cosh²x        (Razavy form on the line)
//! ```
//!
//! The solvability analysis runs on the derived pair (β, κ) with
//! β = ±√ζ carrying the sign of η and κ = |η|/√ζ ≥ 0 the topological
//! index; integer κ of the right parity is what makes an irrep block
//! close. Energies throughout are in units of the rotational constant B.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Default tolerance for deciding that κ sits on an integer.
pub const KAPPA_INT_TOL: f64 = 1e-9;

/// Which of the two anti-isospectral systems an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemKind {
    /// Planar pendulum, −η cos θ − ζ cos²θ, treated as 4π-periodic.
    Trigonometric,
    /// Razavy double well / double Morse, η cosh x + ζ cosh²x.
    Hyperbolic,
}

impl std::fmt::Display for SystemKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SystemKind::Trigonometric => write!(f, "trig"),
            SystemKind::Hyperbolic => write!(f, "hyp"),
        }
    }
}

/// The (β, κ) parameter pair, with (η, ζ) derivable on demand.
///
/// Stored in the analysis-native form: η = κβ and ζ = β² are exact
/// reconstructions, whereas β = ±√ζ from user input involves a rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingParams {
    beta: f64,
    kappa: f64,
}

impl CouplingParams {
    /// Build directly from (β, κ). κ must be ≥ 0 and β nonzero and finite.
    pub fn from_beta_kappa(beta: f64, kappa: f64) -> Result<Self> {
        if !beta.is_finite() || !kappa.is_finite() {
            return Err(Error::InvalidParams {
                reason: format!("beta = {beta}, kappa = {kappa} must be finite"),
            });
        }
        if beta == 0.0 {
            return Err(Error::InvalidParams {
                reason: "beta = 0 implies zeta = 0; the anharmonic term is required".into(),
            });
        }
        if kappa < 0.0 {
            return Err(Error::InvalidParams {
                reason: format!("kappa = {kappa} must be >= 0 (kappa = |eta|/sqrt(zeta))"),
            });
        }
        Ok(Self { beta, kappa })
    }

    /// Build from the potential couplings (η, ζ).
    ///
    /// β carries the sign of η; for η = 0 the β < 0 branch is chosen so that
    /// the gauge factor exp(β cos θ) stays a damping envelope.
    pub fn from_eta_zeta(eta: f64, zeta: f64) -> Result<Self> {
        if !eta.is_finite() || !zeta.is_finite() {
            return Err(Error::InvalidParams {
                reason: format!("eta = {eta}, zeta = {zeta} must be finite"),
            });
        }
        if zeta <= 0.0 {
            return Err(Error::NonPositiveZeta { zeta });
        }
        let root = zeta.sqrt();
        let beta = if eta > 0.0 { root } else { -root };
        Ok(Self {
            beta,
            kappa: eta.abs() / root,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// η = κ·β (exact in this representation).
    pub fn eta(&self) -> f64 {
        self.kappa * self.beta
    }

    /// ζ = β² (exact in this representation).
    pub fn zeta(&self) -> f64 {
        self.beta * self.beta
    }

    /// The integer κ sits on, if within `KAPPA_INT_TOL` of one.
    pub fn integer_kappa(&self) -> Option<u64> {
        self.integer_kappa_with_tol(KAPPA_INT_TOL)
    }

    /// Integer-κ test with caller-chosen tolerance. Never use exact float
    /// equality for this: κ frequently arrives through |η|/√ζ.
    pub fn integer_kappa_with_tol(&self, tol: f64) -> Option<u64> {
        let nearest = self.kappa.round();
        if nearest >= 0.0 && (self.kappa - nearest).abs() <= tol {
            Some(nearest as u64)
        } else {
            None
        }
    }
}

// (β, κ) is the source of truth, but the JSON form carries all four values
// so downstream tooling never recomputes the conversion.
impl Serialize for CouplingParams {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("CouplingParams", 4)?;
        st.serialize_field("beta", &self.beta)?;
        st.serialize_field("kappa", &self.kappa)?;
        st.serialize_field("eta", &self.eta())?;
        st.serialize_field("zeta", &self.zeta())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for CouplingParams {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            beta: Option<f64>,
            kappa: Option<f64>,
            eta: Option<f64>,
            zeta: Option<f64>,
        }
        let raw = Raw::deserialize(d)?;
        match (raw.beta, raw.kappa, raw.eta, raw.zeta) {
            (Some(b), Some(k), _, _) => {
                CouplingParams::from_beta_kappa(b, k).map_err(serde::de::Error::custom)
            }
            (_, _, Some(e), Some(z)) => {
                CouplingParams::from_eta_zeta(e, z).map_err(serde::de::Error::custom)
            }
            _ => Err(serde::de::Error::custom(
                "need either {beta, kappa} or {eta, zeta}",
            )),
        }
    }
}
