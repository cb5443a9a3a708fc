//! The printed closed-form pendular energies for κ ≤ 7 (block sizes ≤ 3),
//! kept as an independent computation route: these expressions were derived
//! once and for all from the block characteristic polynomials, and
//! [`super::analytic_spectrum`] cross-checks its root extraction against
//! them on every call they cover.
//!
//! The cubic cases run through complex radicals (principal branch): the
//! intermediate a, b±, d are genuinely complex for real β, and the
//! imaginary parts cancel only in the final sum. Returned values keep the
//! residual imaginary part so the caller can assert it is numerical noise.

use num_complex::Complex64;

use crate::irrep::Irrep;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Principal complex cube root.
fn ccbrt(z: Complex64) -> Complex64 {
    z.powf(1.0 / 3.0)
}

/// The closed-form pendular energies E_t for one (irrep, κ) pair, in the
/// paper-given n-order (ascending in E_t), or None when no printed form
/// exists (A1 κ ≥ 7 and B κ ≥ 8 need the quartic-and-up machinery).
pub fn table_energies(irrep: Irrep, kappa: u64, beta: f64) -> Option<Vec<Complex64>> {
    let b = beta;
    let b2 = b * b;
    let s3 = 3.0_f64.sqrt();
    match (irrep, kappa) {
        (Irrep::A1, 1) => Some(vec![c(-b2)]),
        (Irrep::B1, 2) => Some(vec![c(-b2 - b + 0.25)]),
        (Irrep::B2, 2) => Some(vec![c(-b2 + b + 0.25)]),
        (Irrep::A1, 3) => {
            let r = (16.0 * b2 + 1.0).sqrt() / 2.0;
            Some(vec![c(-b2 - r + 0.5), c(-b2 + r + 0.5)])
        }
        (Irrep::A2, 3) => Some(vec![c(-b2 + 1.0)]),
        (Irrep::B1, 4) => {
            let r = (4.0 * b2 + 2.0 * b + 1.0).sqrt();
            Some(vec![c(-b2 - b - r + 1.25), c(-b2 - b + r + 1.25)])
        }
        (Irrep::B2, 4) => {
            let r = (4.0 * b2 - 2.0 * b + 1.0).sqrt();
            Some(vec![c(-b2 + b - r + 1.25), c(-b2 + b + r + 1.25)])
        }
        (Irrep::A1, 5) => {
            let b4 = b2 * b2;
            let inner = Complex64::new(3.0 * (-1024.0 * b4 * b2 - 64.0 * b4 - 412.0 * b2 - 9.0), 0.0);
            let a = ccbrt(c(6.0) * inner.sqrt() + c(288.0 * b2 - 35.0));
            let plus = a * a + c(48.0 * b2 + 13.0);
            let minus = -a * a + c(48.0 * b2 + 13.0);
            let base = c(-b2 + 5.0 / 3.0);
            Some(vec![
                base - plus / (c(3.0) * a),
                base + plus / (c(6.0) * a) - I * s3 / (c(6.0) * a) * minus,
                base + plus / (c(6.0) * a) + I * s3 / (c(6.0) * a) * minus,
            ])
        }
        (Irrep::A2, 5) => {
            let r = (16.0 * b2 + 9.0).sqrt() / 2.0;
            Some(vec![c(-b2 - r + 2.5), c(-b2 + r + 2.5)])
        }
        (Irrep::B1, 6) | (Irrep::B2, 6) => {
            // b± = ∛(288β² ± 36β − 80 + 12c∓), the upper signs for B1;
            // c± = √(3(−256β⁶ ± 384β⁵ − 448β⁴ ± 432β³ − 477β² ± 144β − 36)).
            let s: f64 = if irrep == Irrep::B1 { 1.0 } else { -1.0 };
            let b3 = b2 * b;
            let b4 = b2 * b2;
            let b5 = b4 * b;
            let b6 = b4 * b2;
            // c with the sign opposite to this irrep's b±:
            let c_opp = Complex64::new(
                3.0 * (-256.0 * b6 - s * 384.0 * b5 - 448.0 * b4 - s * 432.0 * b3
                    - 477.0 * b2
                    - s * 144.0 * b
                    - 36.0),
                0.0,
            )
            .sqrt();
            let bb = ccbrt(c(288.0 * b2 + s * 36.0 * b - 80.0) + c(12.0) * c_opp);
            let plus = bb * bb + c(48.0 * b2 + s * 24.0 * b + 28.0);
            let minus = -bb * bb + c(48.0 * b2 + s * 24.0 * b + 28.0);
            let base = c(-b2 - s * b + 35.0 / 12.0);
            Some(vec![
                base - plus / (c(3.0) * bb),
                base + plus / (c(6.0) * bb) - I * s3 / (c(6.0) * bb) * minus,
                base + plus / (c(6.0) * bb) + I * s3 / (c(6.0) * bb) * minus,
            ])
        }
        (Irrep::A2, 7) => {
            let b4 = b2 * b2;
            let inner =
                Complex64::new(3.0 * (-256.0 * b4 * b2 - 592.0 * b4 - 991.0 * b2 - 225.0), 0.0);
            let d = ccbrt(c(12.0) * inner.sqrt() + c(288.0 * b2 - 143.0));
            let plus = d * d + c(48.0 * b2 + 49.0);
            let minus = -d * d + c(48.0 * b2 + 49.0);
            let base = c(-b2 + 14.0 / 3.0);
            Some(vec![
                base - plus / (c(3.0) * d),
                base + plus / (c(6.0) * d) - I * s3 / (c(6.0) * d) * minus,
                base + plus / (c(6.0) * d) + I * s3 / (c(6.0) * d) * minus,
            ])
        }
        _ => None,
    }
}
