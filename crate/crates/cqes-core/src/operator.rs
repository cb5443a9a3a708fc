//! Symmetry-adapted tridiagonal representation of the gauge-rotated
//! Hamiltonian in the even-monomial basis u^{2ℓ} · seed, u = cos(θ/2)
//! (or cosh(x/2); the matrices are shared by both systems).
//!
//! Acting on the polynomial part, −d²/dθ² + V_t − gauge terms couples
//! u^{2ℓ} only to u^{2ℓ±2}, with coefficients (ℓ ≥ 1 for the off-diagonals):
//!
//! ```text
//!            sup(ℓ)              diag(ℓ)                                sub(ℓ)
//! A1      ℓ² − ℓ/2     β² − ℓ² + 4βℓ − (κ−1)β              4β(−ℓ + (κ+1)/2)
//! B1      ℓ² + ℓ/2     β² − ℓ² − ℓ − ¼ + 4βℓ − (κ−3)β      4β(−ℓ + κ/2)
//! B2      ℓ² − ℓ/2     β² − ℓ² − ℓ − ¼ + 4βℓ − (κ−1)β      4β(−ℓ + κ/2)
//! A2      ℓ² + ℓ/2     β² − ℓ² − 2ℓ − 1 + 4βℓ − (κ−3)β     4β(−ℓ + (κ−1)/2)
//! ```
//!
//! sub(ℓ) vanishes at one positive integer ℓ exactly when κ is an integer
//! of the irrep's parity, detaching a finite upper-left block whose
//! eigenvalues are exact: T φ = −E_t φ = E_h φ.

use crate::error::{Error, Result};
use crate::irrep::{CiLabel, Irrep};
use crate::params::{CouplingParams, SystemKind};
use serde::Serialize;

/// One row's worth of matrix elements at monomial index ℓ: `sub` couples
/// u^{2ℓ} ← u^{2ℓ−2} and `sup` couples u^{2ℓ−2} ← u^{2ℓ} when read at the
/// same ℓ (both are meaningful for ℓ ≥ 1; `diag` for ℓ ≥ 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixElements {
    pub diag: f64,
    pub sub: f64,
    pub sup: f64,
}

/// Evaluate the three ℓ-sequences for one irrep. Total on ℓ ≥ 0; the
/// off-diagonal values at ℓ = 0 are outside the matrix and only returned
/// for completeness of the formulas.
pub fn matrix_elements(irrep: Irrep, p: &CouplingParams, ell: u64) -> MatrixElements {
    let (b, k) = (p.beta(), p.kappa());
    let l = ell as f64;
    let diag = match irrep {
        Irrep::A1 => b * b - l * l + 4.0 * b * l - (k - 1.0) * b,
        Irrep::B1 => b * b - l * l - l - 0.25 + 4.0 * b * l - (k - 3.0) * b,
        Irrep::B2 => b * b - l * l - l - 0.25 + 4.0 * b * l - (k - 1.0) * b,
        Irrep::A2 => b * b - l * l - 2.0 * l - 1.0 + 4.0 * b * l - (k - 3.0) * b,
    };
    let sup = match irrep {
        Irrep::A1 | Irrep::B2 => l * l - l / 2.0,
        Irrep::B1 | Irrep::A2 => l * l + l / 2.0,
    };
    let sub = 4.0 * b * (sub_zero_ell(irrep, k) - l);
    MatrixElements { diag, sub, sup }
}

/// The ℓ at which sub(ℓ) crosses zero, as a real number: (κ+1)/2 for A1,
/// κ/2 for B1/B2, (κ−1)/2 for A2.
fn sub_zero_ell(irrep: Irrep, kappa: f64) -> f64 {
    match irrep {
        Irrep::A1 => (kappa + 1.0) / 2.0,
        Irrep::B1 | Irrep::B2 => kappa / 2.0,
        Irrep::A2 => (kappa - 1.0) / 2.0,
    }
}

/// Size of the detached analytic block for integer κ, if this irrep has one:
/// (κ+1)/2 for A1 (κ odd), κ/2 for B1/B2 (κ even), (κ−1)/2 for A2 (κ odd,
/// κ ≥ 3). The A1 and A2 blocks together hold κ states, as do B1 and B2.
pub fn analytic_block_dim(irrep: Irrep, kappa: u64) -> Option<usize> {
    if !irrep.kappa_parity_matches(kappa) || kappa < irrep.min_kappa() {
        return None;
    }
    let n = match irrep {
        Irrep::A1 => kappa.div_ceil(2),
        Irrep::B1 | Irrep::B2 => kappa / 2,
        Irrep::A2 => (kappa - 1) / 2,
    };
    Some(n as usize)
}

/// Truncation dimension that comfortably converges the low spectrum:
/// max(200, 4·block) — the block-size coupling matters for large κ scans.
pub fn default_truncation_dim(irrep: Irrep, p: &CouplingParams) -> usize {
    let block = p
        .integer_kappa()
        .and_then(|k| analytic_block_dim(irrep, k))
        .unwrap_or(0);
    (4 * block).max(200)
}

/// Finite truncation of one irrep's tridiagonal operator.
///
/// Storage convention: `diag[i]` is row i (ℓ = i), `sub[i]` couples row i+1
/// to column i (the formula value at ℓ = i+1), `sup[i]` couples row i to
/// column i+1 (formula value at ℓ = i+1). `split_index = Some(N)` records
/// the exact zero sub(N) = 0, i.e. `sub[N−1] = 0` whenever that entry is
/// inside the truncation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TridiagOperator {
    pub irrep: Irrep,
    pub params: CouplingParams,
    pub diag: Vec<f64>,
    pub sub: Vec<f64>,
    pub sup: Vec<f64>,
    pub split_index: Option<usize>,
}

impl TridiagOperator {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// The detached upper-left block, as its own operator (no further split:
    /// inside the block every off-diagonal product is nonzero).
    pub fn extract_block(&self) -> Result<TridiagOperator> {
        let n = self.split_index.ok_or(Error::NoSplit)?;
        Ok(TridiagOperator {
            irrep: self.irrep,
            params: self.params,
            diag: self.diag[..n].to_vec(),
            sub: self.sub[..n - 1].to_vec(),
            sup: self.sup[..n - 1].to_vec(),
            split_index: None,
        })
    }

    /// Dense copy, for handing to general eigensolvers.
    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let n = self.dim();
        let mut m = nalgebra::DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.diag[i];
            if i + 1 < n {
                m[(i + 1, i)] = self.sub[i];
                m[(i, i + 1)] = self.sup[i];
            }
        }
        m
    }
}

/// Build the dim×dim truncation for one irrep.
///
/// The split index is derived from the analytic ℓ-formula, gated on κ being
/// integer to within [`crate::params::KAPPA_INT_TOL`] — never by testing a
/// floating-point matrix entry against zero. When a split exists, that entry
/// is then written as an exact 0.0. Errors with `DimensionTooSmall` if the
/// truncation cannot hold the analytic block.
pub fn build_operator(irrep: Irrep, p: &CouplingParams, dim: usize) -> Result<TridiagOperator> {
    if dim == 0 {
        return Err(Error::DimensionTooSmall { dim, required: 1 });
    }
    let block = p.integer_kappa().and_then(|k| analytic_block_dim(irrep, k));
    if let Some(n) = block {
        if dim < n {
            return Err(Error::DimensionTooSmall { dim, required: n });
        }
    }
    let mut diag = Vec::with_capacity(dim);
    let mut sub = Vec::with_capacity(dim.saturating_sub(1));
    let mut sup = Vec::with_capacity(dim.saturating_sub(1));
    for ell in 0..dim as u64 {
        let me = matrix_elements(irrep, p, ell);
        diag.push(me.diag);
        if ell >= 1 {
            sub.push(me.sub);
            sup.push(me.sup);
        }
    }
    if let Some(n) = block {
        // sub(ℓ = N) sits at sub[N−1]; for exactly integer κ the formula
        // already gives 0 up to rounding of κ itself. Pin it.
        if n >= 1 && n - 1 < sub.len() {
            sub[n - 1] = 0.0;
        }
    }
    Ok(TridiagOperator {
        irrep,
        params: *p,
        diag,
        sub,
        sup,
        split_index: block,
    })
}

/// Which trigonometric irrep's matrix a hyperbolic block reuses, given the
/// C_i label and the parity of the monomial ladder it is built on:
/// (A′, even) → A1, (A′, odd) → B1, (A″, even) → B2, (A″, odd) → A2.
pub fn hyperbolic_block_map(ci: CiLabel, exponent_parity: ExponentParity) -> Irrep {
    match (ci, exponent_parity) {
        (CiLabel::APrime, ExponentParity::Even) => Irrep::A1,
        (CiLabel::APrime, ExponentParity::Odd) => Irrep::B1,
        (CiLabel::ADoublePrime, ExponentParity::Even) => Irrep::B2,
        (CiLabel::ADoublePrime, ExponentParity::Odd) => Irrep::A2,
    }
}

/// Parity of the half-angle power ladder a hyperbolic block lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentParity {
    Even,
    Odd,
}

/// For integer κ, the exponent parity whose block detaches in the given C_i
/// sector. Odd κ detaches A1 and A2: the even ladder in A′ but the odd one
/// in A″ (A2's seed sinh x = 2 sinh(x/2)·cosh(x/2) carries one extra power).
/// Even κ detaches B1 and B2, swapping the roles.
pub fn detaching_parity(ci: CiLabel, kappa: u64) -> ExponentParity {
    let kappa_odd = kappa % 2 == 1;
    if kappa_odd == (ci == CiLabel::APrime) {
        ExponentParity::Even
    } else {
        ExponentParity::Odd
    }
}

/// The expansion variable: u = cos(θ/2) or cosh(x/2). States are built on
/// even powers u^{2ℓ} times an irrep seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonomialBasis {
    pub system: SystemKind,
}

impl MonomialBasis {
    pub fn new(system: SystemKind) -> Self {
        Self { system }
    }

    pub fn u(&self, coord: f64) -> f64 {
        match self.system {
            SystemKind::Trigonometric => (coord / 2.0).cos(),
            SystemKind::Hyperbolic => (coord / 2.0).cosh(),
        }
    }

    /// u², the actual expansion variable of the even ladder. Trig: in [0, 1];
    /// hyp: in [1, ∞).
    pub fn u_squared(&self, coord: f64) -> f64 {
        let u = self.u(coord);
        u * u
    }
}
