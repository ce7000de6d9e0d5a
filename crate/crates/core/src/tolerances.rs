//! Fixed numerical constants shared by the whole crate.

/// Largest tolerated `|a_ij - a_ji|` (scaled by `max(1, max|a|)`) for a
/// matrix to be accepted as symmetric.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Relative pivot threshold of the Cholesky factorization, multiplied by
/// `n * max|Q_ij|`.
pub const CHOLESKY_PIVOT_TOL: f64 = 1e-14;

/// Relative pivot threshold of the LU factorization, multiplied by
/// `n * max|A_ij|`.
pub const LU_PIVOT_TOL: f64 = 1e-14;

/// Smallest `|det A|` of a linear system accepted as nonsingular.
pub const MIN_ABS_DET: f64 = 1e-300;

/// Distance to a non-positive integer below which `Γ(s)` reports a pole.
pub const GAMMA_POLE_TOL: f64 = 1e-12;

/// Iteration cap of the incomplete gamma series and continued fraction.
pub const INCGAMMA_MAX_ITER: usize = 10_000;

/// Exclusion radius around the pole of a zeta function.
pub const POLE_EXCLUSION: f64 = 1e-6;

/// Target absolute size of the truncated tail of each lattice sum in the
/// continued (incomplete gamma) representation.
pub const CONTINUED_TAIL_TARGET: f64 = 1e-17;

/// Relative error assumed for each `x^{-a} Γ(a, x)` term when bounding the
/// rounding error of the continued representation.
pub const TERM_REL_ERR: f64 = 4e-14;

/// Default cap on the number of enumerated lattice points.
pub const DEFAULT_POINT_CAP: usize = 100_000_000;

/// Default radius of the contour used by the numeric residue.
pub const RESIDUE_RHO: f64 = 0.25;

/// Default number of trapezoid nodes on the residue contour.
pub const RESIDUE_NODES: usize = 16;

/// Condition number above which a solve report carries a warning.
pub const CONDITION_WARNING: f64 = 1e6;
