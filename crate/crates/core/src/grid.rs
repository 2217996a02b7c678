//! Uniform coordinate/momentum grids and the unitary Fourier kernel.
//!
//! The grid is periodic: `dx = (x_max - x_min) / n` with the point `x_max`
//! excluded, so the discrete transform below is exactly unitary and Parseval
//! holds to machine precision. The conjugate momentum lattice satisfies
//! `dx * dp * n = 2π` identically.
//!
//! Sign convention (coordinate → momentum) is `e^{-ipx}`:
//! ψ̃(p) = (2π)^{-1/2} ∫ dx e^{-ipx} ψ(x).

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::tol;

const TAU: f64 = std::f64::consts::TAU;

/// Uniform one-dimensional lattice in dimensionless quadrature units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    x_min: f64,
    n: usize,
    dx: f64,
}

impl Grid1D {
    /// Build a periodic grid on `[x_min, x_max)` with `n` points.
    ///
    /// `n` must be a power of two ≥ 8 (fast transform path).
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::InvalidExtent { x_min, x_max });
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidSize { n });
        }
        Ok(Grid1D {
            x_min,
            n,
            dx: (x_max - x_min) / n as f64,
        })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    /// Excluded right endpoint `x_min + n·dx`.
    pub fn x_max(&self) -> f64 {
        self.x_min + self.n as f64 * self.dx
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Conjugate momentum spacing, `2π / (n·dx)`.
    pub fn dp(&self) -> f64 {
        TAU / (self.n as f64 * self.dx)
    }

    pub fn point(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|i| self.point(i))
    }

    /// The `i`-th point of the conjugate momentum lattice,
    /// `p_i = (i - n/2)·dp`.
    pub fn momentum(&self, i: usize) -> f64 {
        (i as f64 - (self.n / 2) as f64) * self.dp()
    }

    pub fn momenta(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|i| self.momentum(i))
    }

    /// The conjugate momentum lattice as a grid of its own.
    pub fn conjugate(&self) -> Grid1D {
        Grid1D {
            x_min: -((self.n / 2) as f64) * self.dp(),
            n: self.n,
            dx: self.dp(),
        }
    }

    pub fn center(&self) -> f64 {
        self.x_min + 0.5 * self.n as f64 * self.dx
    }
}

/// Which lattice the amplitudes live on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rep {
    Coordinate,
    Momentum,
}

impl Rep {
    fn name(self) -> &'static str {
        match self {
            Rep::Coordinate => "coordinate",
            Rep::Momentum => "momentum",
        }
    }
}

/// Complex amplitudes of a single mode on a [`Grid1D`].
///
/// `grid` is always the coordinate frame; momentum-representation amplitudes
/// live on its conjugate lattice, so transform round trips preserve the frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Wavefunction {
    grid: Grid1D,
    amps: Vec<Complex64>,
    rep: Rep,
}

impl Wavefunction {
    pub fn from_coordinate_amps(grid: Grid1D, amps: Vec<Complex64>) -> Result<Self> {
        Self::from_amps(grid, amps, Rep::Coordinate)
    }

    /// Amplitudes on the conjugate momentum lattice of `grid`.
    pub fn from_momentum_amps(grid: Grid1D, amps: Vec<Complex64>) -> Result<Self> {
        Self::from_amps(grid, amps, Rep::Momentum)
    }

    fn from_amps(grid: Grid1D, amps: Vec<Complex64>, rep: Rep) -> Result<Self> {
        if amps.len() != grid.len() {
            return Err(Error::InvalidSize { n: amps.len() });
        }
        Ok(Wavefunction { grid, amps, rep })
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn rep(&self) -> Rep {
        self.rep
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    /// Lattice step of the current representation.
    pub fn step(&self) -> f64 {
        match self.rep {
            Rep::Coordinate => self.grid.dx(),
            Rep::Momentum => self.grid.dp(),
        }
    }

    /// Lattice value at index `i` in the current representation.
    pub fn axis_point(&self, i: usize) -> f64 {
        match self.rep {
            Rep::Coordinate => self.grid.point(i),
            Rep::Momentum => self.grid.momentum(i),
        }
    }

    pub fn axis(&self) -> Vec<f64> {
        (0..self.amps.len()).map(|i| self.axis_point(i)).collect()
    }

    /// Σ |a_i|² · step.
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.step()
    }

    /// Rescale to unit norm. Errors on (near-)zero input.
    pub fn normalized(mut self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 < tol::ZERO_OVERLAP_NORM * tol::ZERO_OVERLAP_NORM {
            return Err(Error::ZeroState);
        }
        let s = 1.0 / n2.sqrt();
        for a in &mut self.amps {
            *a *= s;
        }
        Ok(self)
    }

    /// ⟨axis⟩ under the probability density of the current representation.
    pub fn mean(&self) -> f64 {
        let w: f64 = self
            .amps
            .iter()
            .enumerate()
            .map(|(i, a)| self.axis_point(i) * a.norm_sqr())
            .sum();
        w * self.step() / self.norm_sqr()
    }

    /// Variance of the axis variable in the current representation.
    pub fn variance(&self) -> f64 {
        let m = self.mean();
        let w: f64 = self
            .amps
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let d = self.axis_point(i) - m;
                d * d * a.norm_sqr()
            })
            .sum();
        w * self.step() / self.norm_sqr()
    }
}

fn expect_rep(psi: &Wavefunction, expected: Rep) -> Result<()> {
    if psi.rep != expected {
        return Err(Error::WrongRepresentation {
            expected: expected.name(),
            got: psi.rep.name(),
        });
    }
    Ok(())
}

/// Discrete inner product ⟨a|b⟩ = Σ conj(a_i)·b_i · step.
pub fn inner(a: &Wavefunction, b: &Wavefunction) -> Result<Complex64> {
    if a.grid != b.grid || a.rep != b.rep {
        return Err(Error::GridMismatch);
    }
    let s: Complex64 = a
        .amps
        .iter()
        .zip(&b.amps)
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok(s * a.step())
}

/// ψ̃(p_m) = (dx/√(2π)) e^{-i p_m x_min} Σ_j ψ_j e^{-2πi m j / n}.
pub fn to_momentum(psi: &Wavefunction) -> Result<Wavefunction> {
    expect_rep(psi, Rep::Coordinate)?;
    let n = psi.grid.len();
    let mut buf = psi.amps.clone();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);

    let dp = psi.grid.dp();
    let scale = psi.grid.dx() / TAU.sqrt();
    let x_min = psi.grid.x_min();
    let amps = (0..n)
        .map(|idx| {
            let p = (idx as f64 - (n / 2) as f64) * dp;
            let k = (idx + n / 2) % n;
            scale * Complex64::from_polar(1.0, -p * x_min) * buf[k]
        })
        .collect();
    Ok(Wavefunction {
        grid: psi.grid,
        amps,
        rep: Rep::Momentum,
    })
}

/// Inverse of [`to_momentum`]; round trips are exact to machine precision.
pub fn to_coordinate(psi: &Wavefunction) -> Result<Wavefunction> {
    expect_rep(psi, Rep::Momentum)?;
    let n = psi.grid.len();
    let dp = psi.grid.dp();
    let x_min = psi.grid.x_min();
    let mut buf = vec![Complex64::default(); n];
    for (idx, a) in psi.amps.iter().enumerate() {
        let p = (idx as f64 - (n / 2) as f64) * dp;
        let k = (idx + n / 2) % n;
        buf[k] = a * Complex64::from_polar(1.0, p * x_min);
    }
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    let scale = dp / TAU.sqrt();
    let amps = buf.into_iter().map(|a| a * scale).collect();
    Ok(Wavefunction {
        grid: psi.grid,
        amps,
        rep: Rep::Coordinate,
    })
}

/// Fraction of the norm² lying within the outer [`tol::EDGE_FRACTION`] of the
/// lattice on each side.
pub fn edge_norm_fraction(psi: &Wavefunction) -> f64 {
    let n = psi.amps.len();
    let edge = ((n as f64 * tol::EDGE_FRACTION).ceil() as usize).max(1);
    let w: f64 = psi.amps[..edge]
        .iter()
        .chain(&psi.amps[n - edge..])
        .map(|a| a.norm_sqr())
        .sum();
    w * psi.step() / psi.norm_sqr()
}

/// Largest |amplitude| within the outer edge region, for the adequacy rule.
pub fn max_edge_amplitude(psi: &Wavefunction) -> f64 {
    let n = psi.amps.len();
    let edge = ((n as f64 * tol::EDGE_FRACTION).ceil() as usize).max(1);
    psi.amps[..edge]
        .iter()
        .chain(&psi.amps[n - edge..])
        .map(|a| a.norm())
        .fold(0.0, f64::max)
}

/// Non-fatal diagnostic from the grid adequacy rule.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationWarning {
    pub max_edge_amplitude: f64,
    pub edge_norm_fraction: f64,
}

/// `Some(warning)` when a state violates the adequacy rule
/// (|ψ| ≥ 1e-8 somewhere on the outer 5% of the grid).
pub fn check_adequacy(psi: &Wavefunction) -> Option<TruncationWarning> {
    let amp = max_edge_amplitude(psi);
    if amp < tol::EDGE_AMPLITUDE {
        None
    } else {
        Some(TruncationWarning {
            max_edge_amplitude: amp,
            edge_norm_fraction: edge_norm_fraction(psi),
        })
    }
}
