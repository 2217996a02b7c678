//! Preparation of target input states and the ancilla cubic phase state.
//!
//! The ancilla regularizes the unnormalizable momentum eigenstate |0⟩_p by a
//! Gaussian of momentum spread `squeeze` (broad in position), multiplied by a
//! smooth logistic taper pinned to the outer grid margin so the realized
//! state honors the grid adequacy rule even when the Gaussian alone would not
//! decay inside the box. The taper is flat over the central 92% of the grid.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{edge_norm_fraction, Grid1D, Wavefunction};
use crate::tol;

/// Target input state specification.
#[derive(Debug, Clone, PartialEq)]
pub enum InputStateSpec {
    /// Gaussian at phase-space point (x₀, p₀) with the vacuum-like width
    /// convention |ψ(x)|² ∝ exp(-(x-x₀)²/(2 width²)).
    CoherentGaussian {
        center_x: f64,
        center_p: f64,
        width: f64,
    },
    /// Same Gaussian form with an explicitly squeezed width.
    SqueezedGaussian {
        center_x: f64,
        center_p: f64,
        width: f64,
    },
    /// Tabulated amplitudes (x, value), linearly interpolated onto the grid
    /// and zero outside the table range.
    Custom(Vec<(f64, Complex64)>),
}

/// Ancilla cubic phase state specification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AncillaSpec {
    gamma: f64,
    squeeze: f64,
}

impl AncillaSpec {
    pub fn new(gamma: f64, squeeze: f64) -> Result<Self> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidGamma(gamma));
        }
        if !(squeeze > 0.0) || !squeeze.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "squeeze must be positive, got {squeeze}"
            )));
        }
        Ok(AncillaSpec { gamma, squeeze })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn squeeze(&self) -> f64 {
        self.squeeze
    }
}

// Taper geometry relative to the grid half-extent.
const TAPER_ONSET: f64 = 0.92;
const TAPER_SHARPNESS: f64 = 160.0;

/// C^∞ logistic window: 1 over the grid interior, ~3e-6 at the edge.
fn edge_taper(grid: &Grid1D, x: f64) -> f64 {
    let half = 0.5 * (grid.x_max() - grid.x_min());
    let u = (x - grid.center()).abs();
    let s = half / TAPER_SHARPNESS;
    1.0 / (1.0 + ((u - TAPER_ONSET * half) / s).clamp(-500.0, 500.0).exp())
}

/// Normalized coordinate-representation input state.
///
/// Escalates the grid-adequacy warning to an error when more than
/// [`tol::TRUNCATION_ESCALATE`] of the norm lies in the outer grid region.
pub fn prepare_input(spec: &InputStateSpec, grid: &Grid1D) -> Result<Wavefunction> {
    let amps: Vec<Complex64> = match spec {
        InputStateSpec::CoherentGaussian {
            center_x,
            center_p,
            width,
        }
        | InputStateSpec::SqueezedGaussian {
            center_x,
            center_p,
            width,
        } => {
            if !(*width > 0.0) || !width.is_finite() {
                return Err(Error::InvalidSpec(format!(
                    "width must be positive, got {width}"
                )));
            }
            grid.points()
                .map(|x| {
                    let d = x - center_x;
                    Complex64::from_polar(
                        (-d * d / (4.0 * width * width)).exp(),
                        center_p * x,
                    )
                })
                .collect()
        }
        InputStateSpec::Custom(table) => {
            if table.len() < 2 {
                return Err(Error::InvalidSpec(
                    "custom table needs at least two rows".into(),
                ));
            }
            if table.windows(2).any(|w| w[1].0 <= w[0].0) {
                return Err(Error::InvalidSpec(
                    "custom table x-column must be strictly increasing".into(),
                ));
            }
            grid.points().map(|x| interp_table(table, x)).collect()
        }
    };

    let psi = Wavefunction::from_coordinate_amps(*grid, amps)?.normalized()?;
    let fraction = edge_norm_fraction(&psi);
    if fraction > tol::TRUNCATION_ESCALATE {
        return Err(Error::Truncation {
            fraction,
            edge: tol::EDGE_FRACTION * 100.0,
        });
    }
    Ok(psi)
}

fn interp_table(table: &[(f64, Complex64)], x: f64) -> Complex64 {
    if x < table[0].0 || x > table[table.len() - 1].0 {
        return Complex64::default();
    }
    let j = match table.binary_search_by(|row| row.0.partial_cmp(&x).unwrap()) {
        Ok(j) => return table[j].1,
        Err(j) => j,
    };
    let (x0, a0) = table[j - 1];
    let (x1, a1) = table[j];
    let t = (x - x0) / (x1 - x0);
    a0 * (1.0 - t) + a1 * t
}

/// Normalized cubic phase state ψ₂(x) ∝ e^{iγx³} G(x) on `grid`.
///
/// G is the coordinate-representation Gaussian of momentum spread
/// `spec.squeeze` times the edge taper; squeeze → 0 approaches the ideal
/// uniform-envelope state e^{iγq³}|0⟩_p on the box.
pub fn prepare_cubic_ancilla(spec: &AncillaSpec, grid: &Grid1D) -> Result<Wavefunction> {
    let sigma_x = 1.0 / (2.0 * spec.squeeze);
    let amps: Vec<Complex64> = grid
        .points()
        .map(|x| {
            let env = (-x * x / (4.0 * sigma_x * sigma_x)).exp() * edge_taper(grid, x);
            Complex64::from_polar(env, spec.gamma * x * x * x)
        })
        .collect();
    Wavefunction::from_coordinate_amps(*grid, amps)?.normalized()
}

/// Ratio of the cubic state's maximal local momentum 3γx² (plus the initial
/// spread) to the conjugate Nyquist momentum. Values ≥ 1 mean the conjugate
/// grid cannot represent the state: aliasing warning territory.
pub fn cubic_aliasing_margin(spec: &AncillaSpec, grid: &Grid1D) -> f64 {
    let x_edge = grid.x_min().abs().max(grid.x_max().abs());
    let p_needed = 3.0 * spec.gamma * x_edge * x_edge + 5.0 * spec.squeeze;
    let nyquist = std::f64::consts::PI / grid.dx();
    p_needed / nyquist
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::to_momentum;
    use approx::assert_relative_eq;

    #[test]
    fn coherent_gaussian_is_normalized_vacuum() {
        let g = Grid1D::new(-8.0, 8.0, 512).unwrap();
        let spec = InputStateSpec::CoherentGaussian {
            center_x: 0.0,
            center_p: 0.0,
            width: 0.5f64.sqrt(),
        };
        let psi = prepare_input(&spec, &g).unwrap();
        assert!((psi.norm_sqr() - 1.0).abs() < tol::NORM_TOL);
        // vacuum: |ψ(0)|² = 1/√π
        let i0 = 256;
        assert_relative_eq!(
            psi.amps()[i0].norm_sqr(),
            std::f64::consts::PI.powf(-0.5),
            max_relative = 1e-9
        );
    }

    #[test]
    fn momentum_center_lands_at_center_p() {
        let g = Grid1D::new(-8.0, 8.0, 512).unwrap();
        let spec = InputStateSpec::CoherentGaussian {
            center_x: 0.0,
            center_p: 2.0,
            width: 0.5f64.sqrt(),
        };
        let psi = prepare_input(&spec, &g).unwrap();
        let psit = to_momentum(&psi).unwrap();
        assert_relative_eq!(psit.mean(), 2.0, epsilon = 1e-9);
    }

    #[test]
    fn off_grid_support_is_a_truncation_error() {
        let g = Grid1D::new(-8.0, 8.0, 512).unwrap();
        let spec = InputStateSpec::CoherentGaussian {
            center_x: 7.9,
            center_p: 0.0,
            width: 2.0,
        };
        assert_eq!(prepare_input(&spec, &g).unwrap_err().kind(), "truncation");
    }

    #[test]
    fn custom_table_interpolates_and_normalizes() {
        let g = Grid1D::new(-4.0, 4.0, 256).unwrap();
        let table: Vec<(f64, Complex64)> = (0..81)
            .map(|i| {
                let x = -2.0 + 0.05 * i as f64;
                (x, Complex64::new((-x * x).exp(), 0.0))
            })
            .collect();
        let psi = prepare_input(&InputStateSpec::Custom(table), &g).unwrap();
        assert!((psi.norm_sqr() - 1.0).abs() < tol::NORM_TOL);
        assert!(psi.amps()[0].norm() == 0.0); // outside the table
    }

    #[test]
    fn custom_table_must_be_sorted() {
        let g = Grid1D::new(-4.0, 4.0, 256).unwrap();
        let t = vec![
            (0.0, Complex64::new(1.0, 0.0)),
            (-1.0, Complex64::new(1.0, 0.0)),
        ];
        assert_eq!(
            prepare_input(&InputStateSpec::Custom(t), &g).unwrap_err().kind(),
            "invalid-spec"
        );
    }

    #[test]
    fn ancilla_spec_validation() {
        assert_eq!(
            AncillaSpec::new(0.0, 0.05).unwrap_err().kind(),
            "invalid-gamma"
        );
        assert_eq!(
            AncillaSpec::new(1.0, 0.0).unwrap_err().kind(),
            "invalid-spec"
        );
    }

    #[test]
    fn ancilla_density_flat_over_central_half() {
        // γ=1, squeeze=0.05 on an adequate grid
        let g = Grid1D::new(-8.0, 8.0, 2048).unwrap();
        let spec = AncillaSpec::new(1.0, 0.05).unwrap();
        let psi = prepare_cubic_ancilla(&spec, &g).unwrap();
        let mut min = f64::INFINITY;
        let mut max = 0.0f64;
        for (i, a) in psi.amps().iter().enumerate() {
            let x = g.point(i);
            if x.abs() < 4.0 {
                min = min.min(a.norm_sqr());
                max = max.max(a.norm_sqr());
            }
        }
        assert!(min / max >= 0.9, "flatness {}", min / max);
    }

    #[test]
    fn gamma_to_zero_recovers_plain_gaussian() {
        // narrow enough that the taper region carries no mass
        let g = Grid1D::new(-12.0, 12.0, 1024).unwrap();
        let spec = AncillaSpec::new(1e-12, 0.4).unwrap();
        let psi = prepare_cubic_ancilla(&spec, &g).unwrap();
        let sigma_x = 1.0 / (2.0 * 0.4);
        let gauss: Vec<Complex64> = g
            .points()
            .map(|x| Complex64::new((-x * x / (4.0 * sigma_x * sigma_x)).exp(), 0.0))
            .collect();
        let gauss = Wavefunction::from_coordinate_amps(g, gauss)
            .unwrap()
            .normalized()
            .unwrap();
        let sup = psi
            .amps()
            .iter()
            .zip(gauss.amps())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(sup < 1e-9, "sup deviation {sup}");
    }

    #[test]
    fn cubic_phase_carries_local_momentum() {
        // phase derivative of ψ₂ equals 3γx² where the envelope is flat
        let g = Grid1D::new(-12.0, 12.0, 8192).unwrap();
        let spec = AncillaSpec::new(0.2, 0.05).unwrap();
        let psi = prepare_cubic_ancilla(&spec, &g).unwrap();
        for &x in &[-3.0f64, 0.5, 4.0] {
            let i = ((x - g.x_min()) / g.dx()).round() as usize;
            let dphase =
                (psi.amps()[i + 1] * psi.amps()[i - 1].conj()).arg() / (2.0 * g.dx());
            assert_relative_eq!(dphase, 3.0 * 0.2 * x * x, epsilon = 2e-3);
        }
    }

    #[test]
    fn momentum_support_is_one_sided_in_semiclassical_regime() {
        // 5·squeeze well above the Airy momentum scale (3γ)^{1/3}
        let g = Grid1D::new(-24.0, 24.0, 4096).unwrap();
        let spec = AncillaSpec::new(1e-3, 0.12).unwrap();
        let psi = prepare_cubic_ancilla(&spec, &g).unwrap();
        let psit = to_momentum(&psi).unwrap();
        let cut = -5.0 * spec.squeeze();
        let mass: f64 = psit
            .amps()
            .iter()
            .enumerate()
            .filter(|(i, _)| g.momentum(*i) < cut)
            .map(|(_, a)| a.norm_sqr())
            .sum::<f64>()
            * g.dp();
        assert!(mass < 1e-3, "P(p < -5 squeeze) = {mass:e}");
    }

    #[test]
    fn aliasing_margin_flags_undersampled_cubic() {
        let g = Grid1D::new(-12.0, 12.0, 1024).unwrap();
        assert!(cubic_aliasing_margin(&AncillaSpec::new(1.0, 0.05).unwrap(), &g) > 1.0);
        assert!(cubic_aliasing_margin(&AncillaSpec::new(0.2, 0.05).unwrap(), &g) < 1.0);
    }
}
