//! Heisenberg-picture diagnostic: the two-branch output-momentum formula and
//! its comparison against the true momentum distribution.
//!
//! Substituting the measurement outcome for the operator-valued ancilla
//! momentum gives p₁^(out) = p₁ ± (3γ)^{-1/2} √(y_m - q₁): nonunique, and
//! undefined for y_m < q₁ even though such outcomes occur. The nonuniqueness
//! is exactly the two-component cat; the invalid regime is reported as data,
//! not an error, because the simulator must exhibit it.

use crate::analysis::momentum_peaks;
use crate::error::{Error, Result};
use crate::grid::{to_momentum, Rep, Wavefunction};
use crate::special::GateFactorParams;

/// Output quadratures of the two-branch formula at a phase-space point.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct HeisenbergBranches {
    /// q₁ passes through unchanged.
    pub q_out: f64,
    /// p₁ + (3γ)^{-1/2}√(y_m - q₁); `None` in the invalid regime.
    pub p_plus: Option<f64>,
    /// p₁ - (3γ)^{-1/2}√(y_m - q₁); `None` in the invalid regime.
    pub p_minus: Option<f64>,
}

impl HeisenbergBranches {
    /// True exactly when y_m - q₁ ≥ 0.
    pub fn valid(&self) -> bool {
        self.p_plus.is_some()
    }
}

/// Evaluate the two-branch output momenta at (q₁, p₁).
pub fn branch_momenta(q1: f64, p1: f64, p: &GateFactorParams) -> HeisenbergBranches {
    let rad = p.y_m() - q1;
    if rad < 0.0 {
        return HeisenbergBranches {
            q_out: q1,
            p_plus: None,
            p_minus: None,
        };
    }
    let shift = (rad / (3.0 * p.gamma())).sqrt();
    HeisenbergBranches {
        q_out: q1,
        p_plus: Some(p1 + shift),
        p_minus: Some(p1 - shift),
    }
}

/// Side-by-side comparison of the branch prediction and the conditioned
/// state's momentum-density peaks.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct BranchComparison {
    pub mean_x: f64,
    pub mean_p: f64,
    pub predicted: HeisenbergBranches,
    /// Momentum-density peak positions, sorted.
    pub measured_peaks: Vec<f64>,
    /// |peak - prediction| for (minus, plus) branches.
    pub deviations: (f64, f64),
}

/// Condition `psi_in` analytically, locate the momentum-density peaks, and
/// compare them against [`branch_momenta`] at the input's mean phase-space
/// point.
pub fn compare_branches_to_distribution(
    psi_in: &Wavefunction,
    p: &GateFactorParams,
) -> Result<BranchComparison> {
    let mean_x = match psi_in.rep() {
        Rep::Coordinate => psi_in.mean(),
        Rep::Momentum => return Err(Error::RepresentationMismatch),
    };
    let mean_p = to_momentum(psi_in)?.mean();

    let cond = crate::gate::analytic_condition(psi_in, p)?;
    let peaks = momentum_peaks(&cond.state)?;
    if peaks.len() < 2 {
        return Err(Error::NoBimodality { found: peaks.len() });
    }
    let predicted = branch_momenta(mean_x, mean_p, p);
    let (lo, hi) = (peaks[0], *peaks.last().unwrap());
    let deviations = match (predicted.p_minus, predicted.p_plus) {
        (Some(pm), Some(pp)) => ((lo - pm).abs(), (hi - pp).abs()),
        _ => (f64::NAN, f64::NAN),
    };
    Ok(BranchComparison {
        mean_x,
        mean_p,
        predicted,
        measured_peaks: peaks,
        deviations,
    })
}
