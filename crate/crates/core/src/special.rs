//! Exact and approximate evaluation of the gate factor φ_γ.
//!
//! The factor imprinted on the target coordinate wavefunction by the ancilla
//! momentum measurement is
//!
//! φ_γ(u) = (2π)^{-1/2} ∫ dx' e^{i x'(u + γ x'²)}
//!        = √(2π) (3γ)^{-1/3} Ai(u (3γ)^{-1/3}),
//!
//! with u = x - y_m. Three independent evaluation routes are provided:
//! the Airy closed form, direct oscillatory quadrature on a rotated contour,
//! and the two-branch stationary-phase approximation valid for y_m > x.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad;
use crate::tol;

const SQRT_TAU: f64 = 2.506_628_274_631_000_5;
const FRAC_PI_4: f64 = std::f64::consts::FRAC_PI_4;
const FRAC_PI_6: f64 = std::f64::consts::FRAC_PI_6;

// ---------------------------------------------------------------------------
// double-double helpers for the Maclaurin series
//
// The series Ai(t) = c1·f(t) - c2·g(t) cancels catastrophically for t near
// the switchover (partial sums reach ~e^{2ζ} times the result), so the sums
// are accumulated in double-double precision.
// ---------------------------------------------------------------------------

#[derive(Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    const fn new(hi: f64, lo: f64) -> Self {
        Dd { hi, lo }
    }

    fn from_f64(v: f64) -> Self {
        Dd { hi: v, lo: 0.0 }
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }

    fn add(self, other: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, other.hi);
        let (t1, t2) = two_sum(self.lo, other.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }

    fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    fn div_f64(self, d: f64) -> Dd {
        let q1 = self.hi / d;
        let (p1, p2) = two_prod(q1, d);
        let (s, e) = two_sum(self.hi, -p1);
        let q2 = (s + (e + self.lo - p2)) / d;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }
    }
}

// Ai(0) and -Ai'(0) to double-double precision.
const AIRY_C1: Dd = Dd::new(0.355_028_053_887_817_2, 2.052_336_324_362_12e-17);
const AIRY_C2: Dd = Dd::new(0.258_819_403_792_806_8, -2.522_243_111_610_832e-17);

/// Maclaurin evaluation, intended for |t| ≤ 6 (usable somewhat beyond).
pub(crate) fn airy_series(t: f64) -> f64 {
    let (t2h, t2l) = two_prod(t, t);
    let t3 = Dd::new(t2h, t2l).mul(Dd::from_f64(t));

    // f = Σ t^{3k} / ∏(3j)(3j-1),  g = Σ t^{3k+1} / ∏(3j)(3j+1)
    let mut f_term = Dd::from_f64(1.0);
    let mut f_sum = f_term;
    let mut g_term = Dd::from_f64(t);
    let mut g_sum = g_term;
    for k in 1..120u32 {
        let k3 = 3.0 * k as f64;
        f_term = f_term.mul(t3).div_f64(k3 * (k3 - 1.0));
        g_term = g_term.mul(t3).div_f64(k3 * (k3 + 1.0));
        f_sum = f_sum.add(f_term);
        g_sum = g_sum.add(g_term);
        if f_term.hi.abs() < 1e-25 * f_sum.hi.abs().max(1.0)
            && g_term.hi.abs() < 1e-25 * g_sum.hi.abs().max(1.0)
        {
            break;
        }
    }
    AIRY_C1
        .mul(f_sum)
        .add(AIRY_C2.mul(g_sum).mul(Dd::from_f64(-1.0)))
        .value()
}

// u_k of the standard asymptotic expansions, by recurrence.
fn asymptotic_coeff(k: u32, prev: f64) -> f64 {
    let k = k as f64;
    prev * (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / (216.0 * k * (2.0 * k - 1.0))
}

/// Asymptotic evaluation, intended for |t| > 6.
///
/// Positive side: Ai(t) ~ e^{-ζ}/(2√π t^{1/4}) Σ (-1)^k u_k ζ^{-k}.
/// Negative side: oscillatory form with the π/4 phase.
/// Series are truncated at their smallest term.
pub(crate) fn airy_asymptotic(t: f64) -> f64 {
    let z = t.abs();
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    let inv = 1.0 / zeta;
    if t > 0.0 {
        let mut u = 1.0;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut sign = 1.0;
        let mut prev = f64::INFINITY;
        for k in 1..40u32 {
            u = asymptotic_coeff(k, u);
            sign = -sign;
            term = u * inv.powi(k as i32);
            if term.abs() >= prev {
                break;
            }
            sum += sign * term;
            prev = term.abs();
        }
        (-zeta).exp() / (2.0 * std::f64::consts::PI.sqrt() * z.powf(0.25)) * sum
    } else {
        // Σ_even and Σ_odd of the cosine/sine pair
        let mut u = 1.0;
        let mut even = 1.0;
        let mut odd = 0.0;
        let mut prev = f64::INFINITY;
        for k in 1..40u32 {
            u = asymptotic_coeff(k, u);
            let term = u * inv.powi(k as i32);
            if term.abs() >= prev {
                break;
            }
            let s = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            if k % 2 == 0 {
                even += s * term;
            } else {
                odd += s * term;
            }
            prev = term.abs();
        }
        let phase = zeta - FRAC_PI_4;
        (phase.cos() * even + phase.sin() * odd)
            / (std::f64::consts::PI.sqrt() * z.powf(0.25))
    }
}

/// Airy function of the first kind on the real line.
///
/// Maclaurin series (double-double accumulated) for |t| ≤ 6, standard
/// asymptotic expansions beyond; the two methods are required by tests to
/// agree within [`tol::AIRY_HANDOFF_ABS`] across the handoff band.
pub fn airy_ai(t: f64) -> f64 {
    if t.abs() <= tol::AIRY_SWITCHOVER {
        airy_series(t)
    } else {
        airy_asymptotic(t)
    }
}

// ---------------------------------------------------------------------------
// gate factor
// ---------------------------------------------------------------------------

/// Cubic strength γ and ancilla momentum measurement outcome y_m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateFactorParams {
    gamma: f64,
    y_m: f64,
}

impl GateFactorParams {
    pub fn new(gamma: f64, y_m: f64) -> Result<Self> {
        if !(gamma > 0.0) || !gamma.is_finite() || !y_m.is_finite() {
            return Err(Error::InvalidGamma(gamma));
        }
        Ok(GateFactorParams { gamma, y_m })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn y_m(&self) -> f64 {
        self.y_m
    }

    /// The Airy length (3γ)^{1/3} that scales the factor's argument.
    pub fn airy_scale(&self) -> f64 {
        (3.0 * self.gamma).cbrt()
    }
}

/// φ_γ(x - y_m) through the Airy closed form; real by construction.
pub fn gate_factor_exact(x: f64, p: &GateFactorParams) -> Complex64 {
    let c = p.airy_scale();
    Complex64::new(SQRT_TAU / c * airy_ai((x - p.y_m) / c), 0.0)
}

/// φ_γ(x - y_m) by direct quadrature of the defining oscillatory integral.
///
/// Each half-line is rotated into the complex plane (x' = z e^{iπ/6} for
/// z > 0 and the mirror phase for z < 0) so the cubic term decays like
/// e^{-γz³}; the two half-line integrals are evaluated independently and
/// their sum is returned.
pub fn gate_factor_quadrature(x: f64, p: &GateFactorParams) -> Result<Complex64> {
    let u = x - p.y_m;
    let gamma = p.gamma;

    // magnitude on the ray is e^{|u| z/2 - γ z³} for u < 0; pick the cutoff
    // where it has fallen ~46 e-folds below its peak
    let neg = (-u).max(0.0);
    let z_peak = (neg / (6.0 * gamma)).sqrt();
    let e_peak = neg * z_peak / 2.0 - gamma * z_peak.powi(3);
    let mut z_cut = z_peak + 1.0;
    while gamma * z_cut.powi(3) - neg * z_cut / 2.0 < 46.0 + e_peak {
        z_cut *= 1.25;
    }

    let rot = Complex64::from_polar(1.0, FRAC_PI_6);
    let plus = move |z: f64| (Complex64::i() * u * z * rot - gamma * z.powi(3)).exp() * rot;
    let mrot = rot.conj();
    let minus = move |z: f64| (-Complex64::i() * u * z * mrot - gamma * z.powi(3)).exp() * mrot;

    let half_tol = 0.4 * tol::QUAD_ABS_TOL;
    let ip = quad::integrate(&plus, 0.0, z_cut, half_tol, tol::QUAD_MAX_DEPTH)?;
    let im = quad::integrate(&minus, 0.0, z_cut, half_tol, tol::QUAD_MAX_DEPTH)?;
    Ok((ip + im) / SQRT_TAU)
}

/// Stationary-phase decay exponent ζ = 2/(3√(3γ)) (y_m - x)^{3/2}.
fn stationary_zeta(d: f64, gamma: f64) -> f64 {
    2.0 / (3.0 * (3.0 * gamma).sqrt()) * d.powf(1.5)
}

/// Two-branch stationary-phase approximation φ_γ^{(+)} + c.c.; real.
///
/// Defined only on the classically reachable side y_m > x.
pub fn gate_factor_stationary(x: f64, p: &GateFactorParams) -> Result<Complex64> {
    let d = p.y_m - x;
    if d <= 0.0 {
        return Err(Error::OutOfRegime { x, y_m: p.y_m });
    }
    let zeta = stationary_zeta(d, p.gamma);
    let amp = (12.0 * p.gamma * d).powf(-0.25);
    Ok(Complex64::new(2.0 * amp * (FRAC_PI_4 - zeta).cos(), 0.0))
}

/// Which stationary point a branch factor belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

/// One branch of the stationary-phase decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchFactor {
    pub value: Complex64,
    pub branch: Branch,
    /// Stationary point x'_s = ±√((y_m - x)/(3γ)).
    pub stationary_point: f64,
}

/// Both stationary-phase branches; their sum equals [`gate_factor_stationary`]
/// and the minus branch is the conjugate of the plus branch.
pub fn branch_factors(x: f64, p: &GateFactorParams) -> Result<(BranchFactor, BranchFactor)> {
    let d = p.y_m - x;
    if d <= 0.0 {
        return Err(Error::OutOfRegime { x, y_m: p.y_m });
    }
    let zeta = stationary_zeta(d, p.gamma);
    let amp = (12.0 * p.gamma * d).powf(-0.25);
    let xs = (d / (3.0 * p.gamma)).sqrt();
    let plus = BranchFactor {
        value: Complex64::from_polar(amp, FRAC_PI_4 - zeta),
        branch: Branch::Plus,
        stationary_point: xs,
    };
    let minus = BranchFactor {
        value: plus.value.conj(),
        branch: Branch::Minus,
        stationary_point: -xs,
    };
    Ok((plus, minus))
}

/// Momentum displacement ±√(y_m/(3γ)) of each cat branch in the y_m ≫ |x| limit.
pub fn linearized_kick(p: &GateFactorParams) -> Result<f64> {
    if p.y_m <= 0.0 {
        return Err(Error::InvalidOutcome(p.y_m));
    }
    Ok((p.y_m / (3.0 * p.gamma)).sqrt())
}
