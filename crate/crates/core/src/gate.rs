//! The entangling C_Z operation, homodyne projection of the ancilla, and the
//! analytic conditioning shortcut.
//!
//! Two independently implemented pipelines produce the conditioned target
//! state: the brute-force route keeps the full two-mode amplitude matrix
//! through C_Z and projects one momentum row of the ancilla, while the
//! analytic route multiplies the input by the closed-form gate factor. Their
//! agreement in the small-squeeze limit validates the reduction of the
//! two-mode integral to the Airy factor.

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::grid::{Grid1D, Rep, Wavefunction};
use crate::special::{gate_factor_exact, GateFactorParams};
use crate::tol;

const TAU: f64 = std::f64::consts::TAU;

/// Complex amplitudes on the tensor product of two grids (target ⊗ ancilla).
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    grid1: Grid1D,
    grid2: Grid1D,
    /// Row i ↔ mode-1 lattice, column j ↔ mode-2 lattice.
    amps: Array2<Complex64>,
    rep1: Rep,
    rep2: Rep,
}

impl TwoModeState {
    pub fn grid1(&self) -> &Grid1D {
        &self.grid1
    }

    pub fn grid2(&self) -> &Grid1D {
        &self.grid2
    }

    pub fn amps(&self) -> &Array2<Complex64> {
        &self.amps
    }

    pub fn reps(&self) -> (Rep, Rep) {
        (self.rep1, self.rep2)
    }

    fn step1(&self) -> f64 {
        match self.rep1 {
            Rep::Coordinate => self.grid1.dx(),
            Rep::Momentum => self.grid1.dp(),
        }
    }

    fn step2(&self) -> f64 {
        match self.rep2 {
            Rep::Coordinate => self.grid2.dx(),
            Rep::Momentum => self.grid2.dp(),
        }
    }

    /// Σ |amps|² · dstep1 · dstep2.
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.step1() * self.step2()
    }

    /// Reduced probability density of mode 1, Σ_j |amps[i,j]|² · dstep2.
    pub fn mode1_density(&self) -> Vec<f64> {
        let s2 = self.step2();
        self.amps
            .rows()
            .into_iter()
            .map(|row| row.iter().map(|a| a.norm_sqr()).sum::<f64>() * s2)
            .collect()
    }
}

/// Product state amps[i][j] = ψ₁(x_i)·ψ₂(x_j).
///
/// Both factors must be normalized coordinate-representation states.
pub fn tensor(psi1: &Wavefunction, psi2: &Wavefunction) -> Result<TwoModeState> {
    if psi1.rep() != Rep::Coordinate || psi2.rep() != Rep::Coordinate {
        return Err(Error::RepresentationMismatch);
    }
    for psi in [psi1, psi2] {
        let n2 = psi.norm_sqr();
        if n2 < tol::ZERO_OVERLAP_NORM {
            return Err(Error::ZeroState);
        }
        if (n2 - 1.0).abs() > 1e-6 {
            return Err(Error::NotNormalized { norm_sqr: n2 });
        }
    }
    let n1 = psi1.grid().len();
    let n2 = psi2.grid().len();
    let mut amps = Array2::default((n1, n2));
    for (i, a) in psi1.amps().iter().enumerate() {
        for (j, b) in psi2.amps().iter().enumerate() {
            amps[(i, j)] = a * b;
        }
    }
    Ok(TwoModeState {
        grid1: *psi1.grid(),
        grid2: *psi2.grid(),
        amps,
        rep1: Rep::Coordinate,
        rep2: Rep::Coordinate,
    })
}

/// C_Z = exp(i q₁ q₂): pointwise phase e^{i x_i x_j}; norm unchanged.
pub fn apply_cz(state: &TwoModeState) -> Result<TwoModeState> {
    if state.rep1 != Rep::Coordinate || state.rep2 != Rep::Coordinate {
        return Err(Error::RepresentationMismatch);
    }
    let mut out = state.clone();
    let g1 = state.grid1;
    let g2 = state.grid2;
    out.amps
        .outer_iter_mut()
        .into_par_iter()
        .enumerate()
        .for_each(|(i, mut row)| {
            let x1 = g1.point(i);
            for (j, a) in row.iter_mut().enumerate() {
                *a *= Complex64::from_polar(1.0, x1 * g2.point(j));
            }
        });
    Ok(out)
}

/// Transform mode 2 to its momentum representation (paper kernel e^{-iyx}).
pub fn mode2_to_momentum(state: &TwoModeState) -> Result<TwoModeState> {
    if state.rep2 == Rep::Momentum {
        return Err(Error::WrongRepresentation {
            expected: "coordinate",
            got: "momentum",
        });
    }
    let n2 = state.grid2.len();
    let dp = state.grid2.dp();
    let x_min = state.grid2.x_min();
    let scale = state.grid2.dx() / TAU.sqrt();
    let fft = FftPlanner::new().plan_fft_forward(n2);

    let mut out = state.clone();
    out.amps
        .outer_iter_mut()
        .into_par_iter()
        .for_each(|mut row| {
            let mut buf: Vec<Complex64> = row.iter().copied().collect();
            fft.process(&mut buf);
            for (idx, a) in row.iter_mut().enumerate() {
                let p = (idx as f64 - (n2 / 2) as f64) * dp;
                let k = (idx + n2 / 2) % n2;
                *a = scale * Complex64::from_polar(1.0, -p * x_min) * buf[k];
            }
        });
    out.rep2 = Rep::Momentum;
    Ok(out)
}

/// A homodyne outcome value with its probability density.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct MeasurementOutcome {
    pub y_m: f64,
    pub density: f64,
}

/// Outcome density P(y) = ∫ dx₁ |amps(x₁, y)|² over the mode-2 momentum grid.
pub fn outcome_density(state: &TwoModeState) -> Result<Vec<MeasurementOutcome>> {
    let transformed = if state.rep2 == Rep::Momentum {
        state.clone()
    } else {
        mode2_to_momentum(state)?
    };
    let dx1 = transformed.step1();
    let g2 = transformed.grid2;
    let n2 = g2.len();
    let mut out = Vec::with_capacity(n2);
    for j in 0..n2 {
        let density: f64 = transformed
            .amps
            .column(j)
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            * dx1;
        out.push(MeasurementOutcome {
            y_m: g2.momentum(j),
            density,
        });
    }
    Ok(out)
}

/// Result of projecting the ancilla onto a momentum outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    /// Normalized conditional state of the target mode.
    pub state: Wavefunction,
    /// Snapped outcome together with its probability density P(y_m),
    /// the unnormalized norm² of the projected row.
    pub outcome: MeasurementOutcome,
    /// |y_m requested - y_m snapped|; bounds the snap-induced error.
    pub snap_distance: f64,
}

/// Project the post-C_Z state onto the ancilla momentum outcome nearest
/// to `y_m` (brute-force pipeline output).
pub fn project_outcome(state: &TwoModeState, y_m: f64) -> Result<Projection> {
    let transformed = if state.rep2 == Rep::Momentum {
        state.clone()
    } else {
        mode2_to_momentum(state)?
    };
    let g2 = transformed.grid2;
    let n2 = g2.len();
    let dp = g2.dp();
    let p_lo = g2.momentum(0);
    let p_hi = g2.momentum(n2 - 1);
    if y_m < p_lo || y_m > p_hi {
        return Err(Error::OutcomeOffGrid {
            y_m,
            extent: p_hi.max(-p_lo),
        });
    }
    let j = ((y_m - p_lo) / dp).round() as usize;
    let snapped = g2.momentum(j);

    let row: Vec<Complex64> = transformed.amps.column(j).iter().copied().collect();
    let raw = Wavefunction::from_coordinate_amps(transformed.grid1, row)?;
    let density = raw.norm_sqr();
    let state = raw.normalized()?;
    Ok(Projection {
        state,
        outcome: MeasurementOutcome {
            y_m: snapped,
            density,
        },
        snap_distance: (y_m - snapped).abs(),
    })
}

/// Result of the analytic (ideal-ancilla) conditioning.
#[derive(Debug, Clone, PartialEq)]
pub struct Conditioned {
    /// Normalized ψ̃(x) = N ψ(x) φ_γ(x - y_m).
    pub state: Wavefunction,
    /// ∫ |ψ(x) φ_γ(x - y_m)|² dx: the outcome density relative to the
    /// (improper) uniform outcome measure of the ideal ancilla.
    pub relative_density: f64,
}

/// Multiply the input by the exact gate factor and normalize.
pub fn analytic_condition(psi: &Wavefunction, p: &GateFactorParams) -> Result<Conditioned> {
    if psi.rep() != Rep::Coordinate {
        return Err(Error::WrongRepresentation {
            expected: "coordinate",
            got: "momentum",
        });
    }
    let grid = *psi.grid();
    let amps: Vec<Complex64> = psi
        .amps()
        .iter()
        .enumerate()
        .map(|(i, a)| a * gate_factor_exact(grid.point(i), p))
        .collect();
    let raw = Wavefunction::from_coordinate_amps(grid, amps)?;
    let norm = raw.norm_sqr().sqrt();
    if norm < tol::ZERO_OVERLAP_NORM {
        return Err(Error::ZeroOverlap { norm });
    }
    Ok(Conditioned {
        state: raw.normalized()?,
        relative_density: norm * norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{inner, to_momentum};
    use crate::states::{prepare_cubic_ancilla, prepare_input, AncillaSpec, InputStateSpec};
    use approx::assert_relative_eq;

    fn vacuum(grid: &Grid1D) -> Wavefunction {
        prepare_input(
            &InputStateSpec::CoherentGaussian {
                center_x: 0.0,
                center_p: 0.0,
                width: 0.5f64.sqrt(),
            },
            grid,
        )
        .unwrap()
    }

    #[test]
    fn tensor_norm_and_separability() {
        let g = Grid1D::new(-8.0, 8.0, 128).unwrap();
        let psi1 = vacuum(&g);
        let psi2 = prepare_input(
            &InputStateSpec::CoherentGaussian {
                center_x: 1.0,
                center_p: 0.0,
                width: 0.8,
            },
            &g,
        )
        .unwrap();
        let two = tensor(&psi1, &psi2).unwrap();
        assert!((two.norm_sqr() - 1.0).abs() < tol::NORM_TOL);
        // reduced density of mode 1 equals |ψ₁|²
        let red = two.mode1_density();
        for (i, d) in red.iter().enumerate() {
            assert_relative_eq!(*d, psi1.amps()[i].norm_sqr(), epsilon = 1e-12);
        }
    }

    #[test]
    fn tensor_rejects_zero_factor() {
        let g = Grid1D::new(-8.0, 8.0, 128).unwrap();
        let psi1 = vacuum(&g);
        let zero =
            Wavefunction::from_coordinate_amps(g, vec![Complex64::default(); 128]).unwrap();
        assert_eq!(tensor(&psi1, &zero).unwrap_err().kind(), "zero-state");
    }

    #[test]
    fn cz_is_pure_phase() {
        let g = Grid1D::new(-8.0, 8.0, 128).unwrap();
        let two = tensor(&vacuum(&g), &vacuum(&g)).unwrap();
        let after = apply_cz(&two).unwrap();
        assert!((after.norm_sqr() - two.norm_sqr()).abs() < 1e-12);
        // row through x₁ = 0 is untouched
        let i0 = 64;
        assert_eq!(g.point(i0), 0.0);
        for j in 0..128 {
            assert!((after.amps()[(i0, j)] - two.amps()[(i0, j)]).norm() < 1e-15);
        }
    }

    #[test]
    fn cz_shifts_mode1_momentum_by_mean_ancilla_position() {
        // Eq. p'₁ = p₁ + q₂ at the level of means
        let g = Grid1D::new(-10.0, 10.0, 256).unwrap();
        let psi1 = vacuum(&g);
        let psi2 = prepare_input(
            &InputStateSpec::CoherentGaussian {
                center_x: 1.5,
                center_p: 0.0,
                width: 0.9,
            },
            &g,
        )
        .unwrap();
        let after = apply_cz(&tensor(&psi1, &psi2).unwrap()).unwrap();
        // trace out mode 2 by averaging the mode-1 momentum over columns of
        // the mode-1-transformed matrix: equivalently project each column
        let n = g.len();
        let mut mean_p = 0.0;
        for j in 0..n {
            let col: Vec<Complex64> = after.amps().column(j).iter().copied().collect();
            let w = Wavefunction::from_coordinate_amps(g, col).unwrap();
            let w2 = w.norm_sqr();
            if w2 > 1e-14 {
                let wt = to_momentum(&w).unwrap();
                mean_p += wt.mean() * w2 * g.dx();
            }
        }
        assert_relative_eq!(mean_p, 1.5, epsilon = 1e-6);
    }

    #[test]
    fn outcome_density_normalizes_and_reduces_to_ancilla() {
        let g = Grid1D::new(-12.0, 12.0, 256).unwrap();
        let psi1 = vacuum(&g);
        let anc = prepare_cubic_ancilla(&AncillaSpec::new(0.2, 0.3).unwrap(), &g).unwrap();
        // no C_Z: P(y) is the ancilla's own momentum density
        let two = tensor(&psi1, &anc).unwrap();
        let dens = outcome_density(&two).unwrap();
        let total: f64 = dens.iter().map(|o| o.density).sum::<f64>() * g.dp();
        assert!((total - 1.0).abs() < tol::DENSITY_SUM_TOL);
        let anct = to_momentum(&anc).unwrap();
        for (j, o) in dens.iter().enumerate().step_by(17) {
            assert_relative_eq!(
                o.density,
                anct.amps()[j].norm_sqr(),
                epsilon = 1e-10,
                max_relative = 1e-8
            );
        }
    }

    #[test]
    fn post_cz_density_skews_positive() {
        let g = Grid1D::new(-12.0, 12.0, 512).unwrap();
        let psi1 = vacuum(&g);
        let anc = prepare_cubic_ancilla(&AncillaSpec::new(0.2, 0.05).unwrap(), &g).unwrap();
        let after = apply_cz(&tensor(&psi1, &anc).unwrap()).unwrap();
        let dens = outcome_density(&after).unwrap();
        let positive: f64 = dens
            .iter()
            .filter(|o| o.y_m > 0.0)
            .map(|o| o.density)
            .sum::<f64>()
            * g.dp();
        assert!(positive > 0.9, "positive-outcome mass {positive}");
    }

    #[test]
    fn projection_is_normalized_and_snaps() {
        let g = Grid1D::new(-12.0, 12.0, 512).unwrap();
        let psi1 = vacuum(&g);
        let anc = prepare_cubic_ancilla(&AncillaSpec::new(0.2, 0.05).unwrap(), &g).unwrap();
        let after = apply_cz(&tensor(&psi1, &anc).unwrap()).unwrap();
        let proj = project_outcome(&after, 6.0).unwrap();
        assert!((proj.state.norm_sqr() - 1.0).abs() < tol::NORM_TOL);
        assert!(proj.snap_distance <= 0.5 * g.dp());
        assert!((proj.outcome.y_m - 6.0).abs() <= 0.5 * g.dp());
        assert!(proj.outcome.density > 0.0);
        // density agrees with the outcome-density table at the snapped bin
        let dens = outcome_density(&after).unwrap();
        let j = dens
            .iter()
            .position(|o| (o.y_m - proj.outcome.y_m).abs() < 1e-12)
            .unwrap();
        assert_relative_eq!(dens[j].density, proj.outcome.density, max_relative = 1e-12);
    }

    #[test]
    fn off_grid_outcome_is_rejected() {
        let g = Grid1D::new(-12.0, 12.0, 128).unwrap();
        let psi1 = vacuum(&g);
        let anc = prepare_cubic_ancilla(&AncillaSpec::new(0.2, 0.3).unwrap(), &g).unwrap();
        let after = apply_cz(&tensor(&psi1, &anc).unwrap()).unwrap();
        let extent = g.conjugate().x_min().abs();
        let err = project_outcome(&after, 10.0 * extent).unwrap_err();
        assert_eq!(err.kind(), "outcome-off-grid");
    }

    #[test]
    fn analytic_conditioning_is_position_diagonal() {
        // |ψ̃(x)|² ∝ |ψ(x)|² |φ_γ(x - y_m)|² pointwise
        let g = Grid1D::new(-8.0, 8.0, 512).unwrap();
        let psi = vacuum(&g);
        let p = GateFactorParams::new(1.0, 5.0).unwrap();
        let cond = analytic_condition(&psi, &p).unwrap();
        let norm2 = cond.relative_density;
        for (i, a) in cond.state.amps().iter().enumerate().step_by(41) {
            let x = g.point(i);
            let want = psi.amps()[i].norm_sqr()
                * gate_factor_exact(x, &p).norm_sqr()
                / norm2;
            let got = a.norm_sqr();
            assert!(
                (got - want).abs() <= 1e-10 * want.abs().max(1e-30),
                "x={x}"
            );
        }
    }

    #[test]
    fn analytic_conditioning_covariance_in_outcome() {
        // displacing input and outcome by whole lattice steps displaces output
        let g = Grid1D::new(-8.0, 8.0, 512).unwrap();
        let shift = 32; // = 1.0 in x
        let d = shift as f64 * g.dx();
        let psi0 = vacuum(&g);
        let psi_shifted = prepare_input(
            &InputStateSpec::CoherentGaussian {
                center_x: d,
                center_p: 0.0,
                width: 0.5f64.sqrt(),
            },
            &g,
        )
        .unwrap();
        let p0 = GateFactorParams::new(0.7, 4.0).unwrap();
        let p1 = GateFactorParams::new(0.7, 4.0 + d).unwrap();
        let a = analytic_condition(&psi0, &p0).unwrap().state;
        let b = analytic_condition(&psi_shifted, &p1).unwrap().state;
        for i in 0..(512 - shift) {
            assert!((a.amps()[i] - b.amps()[i + shift]).norm() < 1e-9);
        }
    }

    #[test]
    fn support_beyond_outcome_gives_zero_overlap() {
        let g = Grid1D::new(-24.0, 24.0, 2048).unwrap();
        let psi = prepare_input(
            &InputStateSpec::CoherentGaussian {
                center_x: 8.0,
                center_p: 0.0,
                width: 0.5f64.sqrt(),
            },
            &g,
        )
        .unwrap();
        let p = GateFactorParams::new(1.0, -12.0).unwrap();
        assert_eq!(
            analytic_condition(&psi, &p).unwrap_err().kind(),
            "zero-overlap"
        );
    }

    #[test]
    fn small_gamma_conditioning_approaches_identity() {
        // φ_γ ~ const over a support much narrower than the Airy scale
        let g = Grid1D::new(-1.0, 1.0, 4096).unwrap();
        let psi = prepare_input(
            &InputStateSpec::SqueezedGaussian {
                center_x: 0.0,
                center_p: 0.0,
                width: 0.007,
            },
            &g,
        )
        .unwrap();
        let p = GateFactorParams::new(1e-4, 0.0).unwrap();
        let out = analytic_condition(&psi, &p).unwrap().state;
        let f = inner(&out, &psi).unwrap().norm_sqr();
        assert!(f > 0.99, "fidelity {f}");
    }
}
