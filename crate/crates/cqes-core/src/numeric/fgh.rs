//! Fourier grid Hamiltonian reference solver.
//!
//! A deliberately independent route to the spectra: no gauge rotation, no
//! monomial basis, no knowledge of the detachment condition. The kinetic
//! operator is represented exactly on a uniform periodic grid through its
//! circulant matrix elements and the potential is diagonal, so the only
//! approximation is the grid itself. On the 4π-periodic angular domain the
//! representation is exact for the free rotor; on the (artificially
//! periodized) hyperbolic line the box must be wide enough that the
//! wavefunction tails die before they can feel the copies, which is what
//! [`FghConfig::verify_box`] checks.

use nalgebra::DMatrix;
use serde::Serialize;

use super::{level_converged, ConvergenceInfo, LevelInfo, LevelLabel, Method, SpectrumResult};
use crate::error::{Error, Result};
use crate::irrep::{CiLabel, Irrep};
use crate::params::{CouplingParams, SystemKind};
use crate::potential;

/// Grid controls. `grid_points` must be a power of two (≥ 64); the
/// half-width applies to the hyperbolic box only — the angular domain is
/// always [−2π, 2π).
#[derive(Debug, Clone, Serialize)]
pub struct FghConfig {
    pub grid_points: usize,
    pub box_half_width: Option<f64>,
    pub n_levels: usize,
    /// Check that the reported eigenvectors actually decay inside the box
    /// and that the potential wall clears the top reported level.
    pub verify_box: bool,
}

impl Default for FghConfig {
    fn default() -> Self {
        FghConfig {
            grid_points: 1024,
            box_half_width: None,
            n_levels: 20,
            verify_box: true,
        }
    }
}

/// Automatic hyperbolic box half-width: reaches past the Morse wells with
/// a generous tunneling margin.
pub fn default_hyperbolic_half_width(p: &CouplingParams) -> f64 {
    let ratio = (p.kappa() / (2.0 * p.beta().abs())).max(1.0);
    (2.0 * ratio.acosh() + 8.0).clamp(10.0, 300.0)
}

/// Solve one system on the grid. Levels come back ascending with measured
/// symmetry labels; error estimates stem from a half-resolution re-solve
/// on the identical domain.
pub fn fgh_spectrum(
    system: SystemKind,
    p: &CouplingParams,
    config: &FghConfig,
) -> Result<SpectrumResult> {
    let n = config.grid_points;
    if !n.is_power_of_two() || n < 64 {
        return Err(Error::InvalidParams {
            reason: format!("grid_points must be a power of two ≥ 64, got {n}"),
        });
    }
    if config.n_levels == 0 || config.n_levels > n / 4 {
        return Err(Error::InvalidParams {
            reason: format!(
                "n_levels must lie in 1..={} for a {n}-point grid, got {}",
                n / 4,
                config.n_levels
            ),
        });
    }
    let half = match system {
        SystemKind::Trigonometric => {
            if config.box_half_width.is_some() {
                return Err(Error::InvalidParams {
                    reason: "the angular domain is fixed at [−2π, 2π); box_half_width only \
                             applies to the hyperbolic system"
                        .into(),
                });
            }
            2.0 * std::f64::consts::PI
        }
        SystemKind::Hyperbolic => {
            let half = config
                .box_half_width
                .unwrap_or_else(|| default_hyperbolic_half_width(p));
            if !(half.is_finite() && half > 0.0) {
                return Err(Error::InvalidParams {
                    reason: format!("box half-width must be positive and finite, got {half}"),
                });
            }
            half
        }
    };

    let primary = solve_grid(system, p, n, half, config.n_levels);
    let reference = solve_grid(system, p, n / 2, half, config.n_levels.min(n / 8));

    if config.verify_box && system == SystemKind::Hyperbolic {
        // Eigenvector tails: the outer 5% of the box on each side must be
        // dead. If the state still has amplitude there, the periodic image
        // interaction is contaminating the spectrum.
        let edge = n / 20;
        for (i, vec) in primary.vectors.iter().enumerate() {
            let peak = vec.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            let tail = vec[..edge]
                .iter()
                .chain(&vec[n - edge..])
                .fold(0.0_f64, |m, v| m.max(v.abs()));
            if tail > 1e-6 * peak {
                return Err(Error::BoxTooSmall {
                    reason: format!(
                        "level {i} keeps relative amplitude {:.2e} in the outer 5% of the \
                         [−{half}, {half}) box",
                        tail / peak
                    ),
                });
            }
        }
        // Potential wall margin above the highest reported level.
        let e_top = primary.energies[config.n_levels - 1];
        let wall = potential::potential_value(system, p, half);
        if wall < e_top + 25.0 {
            return Err(Error::BoxTooSmall {
                reason: format!(
                    "potential at the box edge ({wall:.3}) clears the top reported level \
                     ({e_top:.3}) by less than 25"
                ),
            });
        }
    }

    let mut levels = Vec::with_capacity(config.n_levels);
    let mut max_shift = 0.0_f64;
    for i in 0..config.n_levels {
        let energy = primary.energies[i];
        let shift = reference
            .energies
            .get(i)
            .map_or(f64::INFINITY, |r| (energy - r).abs());
        max_shift = max_shift.max(shift);
        levels.push(LevelInfo {
            n: i,
            label: primary.labels[i],
            energy,
            error_estimate: shift,
            converged: level_converged(energy, shift),
        });
    }
    Ok(SpectrumResult {
        system,
        method: Method::Fgh,
        levels,
        convergence: ConvergenceInfo {
            primary_size: n,
            reference_size: n / 2,
            max_shift,
            discarded_complex: 0,
        },
    })
}

struct GridSolution {
    energies: Vec<f64>,
    labels: Vec<Option<LevelLabel>>,
    vectors: Vec<Vec<f64>>,
}

/// Dense symmetric eigensolve of the grid Hamiltonian, plus symmetry
/// labeling of the lowest `n_levels` states.
fn solve_grid(
    system: SystemKind,
    p: &CouplingParams,
    n: usize,
    half: f64,
    n_levels: usize,
) -> GridSolution {
    let l_dom = 2.0 * half;
    let h = l_dom / n as f64;
    let t = kinetic_profile(n, l_dom);

    let mut ham = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            ham[(i, j)] = t[(n + i - j) % n];
        }
        let x = -half + i as f64 * h;
        ham[(i, i)] += potential::potential_value(system, p, x);
    }

    let eig = ham.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    // Work on two extra levels so a degenerate pair straddling the cutoff
    // still has its partner available for recombination; trim afterwards.
    let n_work = (n_levels + 2).min(n);
    let mut energies: Vec<f64> = order
        .iter()
        .take(n_work)
        .map(|&k| eig.eigenvalues[k])
        .collect();
    let mut vectors: Vec<Vec<f64>> = order
        .iter()
        .take(n_work)
        .map(|&k| eig.eigenvectors.column(k).iter().copied().collect())
        .collect();

    recombine_degenerate(system, &energies, &mut vectors, n);
    let mut labels: Vec<Option<LevelLabel>> = vectors
        .iter()
        .map(|v| measure_label(system, v, n))
        .collect();
    energies.truncate(n_levels);
    vectors.truncate(n_levels);
    labels.truncate(n_levels);
    GridSolution {
        energies,
        labels,
        vectors,
    }
}

/// Circulant kinetic-energy profile t[d] for an n-point grid of total
/// length `l_dom`: the exact second-derivative matrix elements in the
/// discrete plane-wave basis.
fn kinetic_profile(n: usize, l_dom: f64) -> Vec<f64> {
    let two_pi = 2.0 * std::f64::consts::PI;
    let k_nyquist = two_pi * (n / 2) as f64 / l_dom;
    (0..n)
        .map(|d| {
            let mut s = 0.0;
            for m in 1..n / 2 {
                let k = two_pi * m as f64 / l_dom;
                s += 2.0 * k * k * (two_pi * (m * d) as f64 / n as f64).cos();
            }
            s += k_nyquist * k_nyquist * if d % 2 == 0 { 1.0 } else { -1.0 };
            s / n as f64
        })
        .collect()
}

/// Grid index of −x for x at index j (the grid starts at −half).
fn reflect_index(j: usize, n: usize) -> usize {
    (n - j) % n
}

/// Grid index of x + 2π on the 4π angular domain.
fn shift_index(j: usize, n: usize) -> usize {
    (j + n / 2) % n
}

/// Within clusters of near-degenerate levels the eigensolver returns
/// arbitrary mixtures; rotate each cluster into eigenvectors of the
/// symmetry operations so the labels become definite. A single combined
/// operation P + 3R suffices in the angular system because its eigenvalue
/// separates all four irreps; the hyperbolic system only has P.
fn recombine_degenerate(system: SystemKind, energies: &[f64], vectors: &mut [Vec<f64>], n: usize) {
    let mut start = 0;
    while start < energies.len() {
        let mut end = start + 1;
        while end < energies.len()
            && (energies[end] - energies[end - 1]).abs()
                <= 1e-6 * 1.0_f64.max(energies[end].abs())
        {
            end += 1;
        }
        let k = end - start;
        if k > 1 {
            let originals: Vec<Vec<f64>> = vectors[start..end].to_vec();
            let mapped: Vec<Vec<f64>> = originals
                .iter()
                .map(|v| apply_combined_op(system, v, n))
                .collect();
            let mut s = DMatrix::zeros(k, k);
            for a in 0..k {
                for b in 0..k {
                    s[(a, b)] = dot(&originals[a], &mapped[b]);
                }
            }
            // Symmetrize away the O(degeneracy-tolerance) asymmetry.
            let s = (s.clone() + s.transpose()) * 0.5;
            let rot = s.symmetric_eigen().eigenvectors;
            let combos: Vec<Vec<f64>> = (0..k)
                .map(|col| {
                    let mut combo = vec![0.0; n];
                    for (row, orig) in originals.iter().enumerate() {
                        let w = rot[(row, col)];
                        for (c, o) in combo.iter_mut().zip(orig) {
                            *c += w * o;
                        }
                    }
                    let norm = dot(&combo, &combo).sqrt();
                    combo.iter_mut().for_each(|c| *c /= norm);
                    combo
                })
                .collect();
            // Hand each rotated state back to the energy slot whose original
            // vector it overlaps most. When the eigensolver did resolve the
            // tiny splitting, this preserves its energy ↔ symmetry pairing;
            // when it did not, the slots are equivalent anyway.
            let overlaps: Vec<Vec<f64>> = combos
                .iter()
                .map(|c| originals.iter().map(|o| dot(c, o).abs()).collect())
                .collect();
            let mut combo_done = vec![false; k];
            let mut slot_taken = vec![false; k];
            for _ in 0..k {
                let (mut bc, mut bs, mut best) = (0, 0, -1.0);
                for c in 0..k {
                    if combo_done[c] {
                        continue;
                    }
                    for s in 0..k {
                        if !slot_taken[s] && overlaps[c][s] > best {
                            best = overlaps[c][s];
                            bc = c;
                            bs = s;
                        }
                    }
                }
                combo_done[bc] = true;
                slot_taken[bs] = true;
                vectors[start + bs] = combos[bc].clone();
            }
        }
        start = end;
    }
}

fn apply_combined_op(system: SystemKind, v: &[f64], n: usize) -> Vec<f64> {
    match system {
        SystemKind::Trigonometric => (0..n)
            .map(|j| v[reflect_index(j, n)] + 3.0 * v[shift_index(j, n)])
            .collect(),
        SystemKind::Hyperbolic => (0..n).map(|j| v[reflect_index(j, n)]).collect(),
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Measure the characters of one (normalized) grid eigenvector. Returns
/// None when a character refuses to commit to ±1 — an unresolved mixture.
fn measure_label(system: SystemKind, v: &[f64], n: usize) -> Option<LevelLabel> {
    let character = |mapped: &dyn Fn(usize) -> usize| -> Option<i8> {
        let s: f64 = (0..n).map(|j| v[mapped(j)] * v[j]).sum::<f64>() / dot(v, v);
        if !(0.99..=1.01).contains(&s.abs()) {
            return None;
        }
        Some(if s > 0.0 { 1 } else { -1 })
    };
    match system {
        SystemKind::Trigonometric => {
            let p0 = character(&|j| reflect_index(j, n))?;
            let r2pi = character(&|j| shift_index(j, n))?;
            Irrep::from_characters(r2pi, p0).map(LevelLabel::C2v)
        }
        SystemKind::Hyperbolic => {
            let parity = character(&|j| reflect_index(j, n))?;
            Some(LevelLabel::Ci(if parity > 0 {
                CiLabel::APrime
            } else {
                CiLabel::ADoublePrime
            }))
        }
    }
}
