//! Closed-form roots of real monic polynomials up to degree 4.
//!
//! Everything returns `Complex64` so the callers can decide how much
//! imaginary residue to tolerate: the physical blocks always have real
//! spectra, but the algebra passes through complex intermediates (the
//! cubic's casus irreducibilis lives here). Each root is finished with two
//! guarded Newton steps on the original polynomial, which costs nothing
//! and removes the worst cancellation noise from the radical formulas.

use num_complex::Complex64;

/// Roots of λ² + b λ + c, exact up to rounding.
pub fn quadratic_roots(b: f64, c: f64) -> [Complex64; 2] {
    let disc = b * b - 4.0 * c;
    if disc >= 0.0 {
        // q-formula: avoid subtracting nearly equal quantities.
        let s = disc.sqrt();
        let q = -0.5 * (b + b.signum() * s);
        if q == 0.0 {
            // b = 0 and c = 0 (or disc = 0 with b = 0): both roots are −b/2.
            return [Complex64::new(-b / 2.0, 0.0); 2];
        }
        [Complex64::new(q, 0.0), Complex64::new(c / q, 0.0)]
    } else {
        let re = -b / 2.0;
        let im = (-disc).sqrt() / 2.0;
        [Complex64::new(re, im), Complex64::new(re, -im)]
    }
}

/// Roots of λ³ + a λ² + b λ + c.
pub fn cubic_roots(a: f64, b: f64, c: f64) -> [Complex64; 3] {
    // Depress: λ = t − a/3 ⇒ t³ + p t + q.
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let mut roots = depressed_cubic_roots(p, q).map(|t| t - shift);
    for r in roots.iter_mut() {
        *r = newton_polish(*r, &[c, b, a, 1.0]);
    }
    roots
}

fn depressed_cubic_roots(p: f64, q: f64) -> [Complex64; 3] {
    if p == 0.0 && q == 0.0 {
        return [Complex64::new(0.0, 0.0); 3];
    }
    let disc = -4.0 * p * p * p - 27.0 * q * q;
    if disc >= 0.0 {
        // Three real roots: trigonometric method (p < 0 is guaranteed here
        // unless p = q = 0, handled above).
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        let two_thirds = 2.0 * std::f64::consts::PI / 3.0;
        [
            Complex64::new(m * phi.cos(), 0.0),
            Complex64::new(m * (phi - two_thirds).cos(), 0.0),
            Complex64::new(m * (phi + two_thirds).cos(), 0.0),
        ]
    } else {
        // One real root + conjugate pair: Cardano with real radicals.
        let half_q = q / 2.0;
        let s = (half_q * half_q + p * p * p / 27.0).sqrt(); // > 0 here
        let u = (-half_q + s).cbrt();
        let v = if u != 0.0 { -p / (3.0 * u) } else { (-half_q - s).cbrt() };
        let real = u + v;
        let re = -real / 2.0;
        let im = (u - v) * 3.0_f64.sqrt() / 2.0;
        [
            Complex64::new(real, 0.0),
            Complex64::new(re, im),
            Complex64::new(re, -im),
        ]
    }
}

/// Roots of λ⁴ + a λ³ + b λ² + c λ + d via the resolvent cubic
/// (Ferrari/Descartes factorization into two quadratics). No companion
/// matrix, no iteration beyond the final Newton polish.
pub fn quartic_roots(a: f64, b: f64, c: f64, d: f64) -> [Complex64; 4] {
    // Depress: λ = t − a/4 ⇒ t⁴ + p t² + q t + r.
    let shift = a / 4.0;
    let a2 = a * a;
    let p = b - 3.0 * a2 / 8.0;
    let q = c - a * b / 2.0 + a2 * a / 8.0;
    let r = d - a * c / 4.0 + a2 * b / 16.0 - 3.0 * a2 * a2 / 256.0;
    let poly = [d, c, b, a, 1.0];

    let ts: [Complex64; 4] = if q.abs() < 1e-14 * (1.0 + p.abs() + r.abs()) {
        // Biquadratic: y² + p y + r with t = ±√y.
        let ys = quadratic_roots(p, r);
        let s0 = ys[0].sqrt();
        let s1 = ys[1].sqrt();
        [s0, -s0, s1, -s1]
    } else {
        // t⁴ + pt² + qt + r = (t² + αt + β)(t² − αt + γ) with z = α²
        // solving z³ + 2p z² + (p² − 4r) z − q² = 0. The resolvent always
        // has a real root z > 0 when q ≠ 0; the largest is the stable pick.
        let zs = cubic_roots(2.0 * p, p * p - 4.0 * r, -q * q);
        let z = zs
            .iter()
            .filter(|z| z.im.abs() < 1e-9 * (1.0 + z.re.abs()) && z.re > 0.0)
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max);
        if !z.is_finite() {
            // q ≈ 0 degeneracy not caught above; fall back to biquadratic.
            let ys = quadratic_roots(p, r);
            let s0 = ys[0].sqrt();
            let s1 = ys[1].sqrt();
            [s0, -s0, s1, -s1]
        } else {
            let alpha = z.sqrt();
            let beta = (p + z - q / alpha) / 2.0;
            let gamma = (p + z + q / alpha) / 2.0;
            let r1 = quadratic_complex(alpha, beta);
            let r2 = quadratic_complex(-alpha, gamma);
            [r1[0], r1[1], r2[0], r2[1]]
        }
    };

    let mut roots = ts.map(|t| t - shift);
    for root in roots.iter_mut() {
        *root = newton_polish(*root, &poly);
    }
    roots
}

fn quadratic_complex(b: f64, c: f64) -> [Complex64; 2] {
    quadratic_roots(b, c)
}

/// Evaluate a polynomial given ascending coefficients (Horner, complex).
fn poly_eval(z: Complex64, coeffs: &[f64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

fn poly_deriv_eval(z: Complex64, coeffs: &[f64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, &c) in coeffs.iter().enumerate().skip(1).rev() {
        acc = acc * z + c * k as f64;
    }
    acc
}

/// Up to two Newton steps, each accepted only if it shrinks the residual.
fn newton_polish(mut z: Complex64, coeffs: &[f64]) -> Complex64 {
    let mut res = poly_eval(z, coeffs).norm();
    for _ in 0..2 {
        let dp = poly_deriv_eval(z, coeffs);
        if dp.norm() == 0.0 {
            break;
        }
        let cand = z - poly_eval(z, coeffs) / dp;
        let cand_res = poly_eval(cand, coeffs).norm();
        if cand_res < res {
            z = cand;
            res = cand_res;
        } else {
            break;
        }
    }
    z
}
