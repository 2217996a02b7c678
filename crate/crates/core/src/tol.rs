//! Build-time numerical tolerances, collected in one place so tests can
//! reference them by name.

/// Norm-squared tolerance for single-mode states after a normalizing operation.
pub const NORM_TOL: f64 = 1e-10;

/// Norm-squared tolerance for the two-mode tensor state.
pub const TWO_MODE_NORM_TOL: f64 = 1e-9;

/// Parseval / round-trip tolerance for the unitary transform pair.
pub const TRANSFORM_TOL: f64 = 1e-10;

/// Relative tolerance for transform linearity.
pub const LINEARITY_REL_TOL: f64 = 1e-12;

/// Series/asymptotic switchover point for the Airy evaluation.
pub const AIRY_SWITCHOVER: f64 = 6.0;

/// Handoff band in which series and asymptotic evaluations must agree.
pub const AIRY_HANDOFF_BAND: (f64, f64) = (5.5, 6.5);

/// Absolute agreement required of the two Airy methods inside the band.
pub const AIRY_HANDOFF_ABS: f64 = 1e-9;

/// Absolute tolerance of the rotated-contour quadrature.
pub const QUAD_ABS_TOL: f64 = 1e-9;

/// Maximum interval bisection depth of the adaptive quadrature.
pub const QUAD_MAX_DEPTH: u32 = 32;

/// Required absolute agreement between the closed-form and quadrature
/// evaluations of the gate factor, for scaled arguments in [-12, 6].
pub const EVALUATOR_AGREEMENT_ABS: f64 = 1e-8;

/// Bound on spurious imaginary parts of nominally real factors.
pub const REALNESS_ABS: f64 = 1e-9;

/// Envelope-relative error of the stationary-phase form at scaled argument -2.
pub const STATIONARY_REL_AT_2: f64 = 0.10;

/// Envelope-relative error of the stationary-phase form at scaled argument -8.
pub const STATIONARY_REL_AT_8: f64 = 0.005;

/// Outer fraction of the grid monitored by the adequacy rule.
pub const EDGE_FRACTION: f64 = 0.05;

/// Amplitude bound on the grid edge under the adequacy rule.
pub const EDGE_AMPLITUDE: f64 = 1e-8;

/// Norm fraction in the outer grid region that escalates a truncation
/// warning to an error in `prepare_input`.
pub const TRUNCATION_ESCALATE: f64 = 1e-4;

/// Conditioned-state norm below which the outcome is deemed impossible.
pub const ZERO_OVERLAP_NORM: f64 = 1e-12;

/// Minimum brute-force/analytic pipeline fidelity at desk scale.
pub const PIPELINE_FIDELITY_MIN: f64 = 0.999;

/// Momentum-density peaks must exceed this fraction of the global maximum.
pub const PEAK_THRESHOLD: f64 = 0.10;

/// Tolerance on integrated probability bookkeeping.
pub const DENSITY_SUM_TOL: f64 = 1e-6;

/// Tolerance on Wigner-map normalization and marginals.
pub const WIGNER_MARGINAL_TOL: f64 = 1e-6;

/// Relative agreement between measured peak separation and the two-branch
/// output-momentum formula, far from the parabola bottom.
pub const BRANCH_AGREEMENT_REL: f64 = 0.05;
