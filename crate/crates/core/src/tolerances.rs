//! Pass/fail thresholds shared by the verification suites and the CLI.

/// Analytic residual of a single base solution, normalized.
pub const BASE_RESIDUAL: f64 = 1e-10;

/// Analytic residual of a combination, normalized.
pub const COMBO_RESIDUAL: f64 = 1e-9;

/// Finite-difference residual of a transformed solution, normalized.
pub const TRANSFORMED_FD_RESIDUAL: f64 = 1e-6;

/// Pullback against the hand-derived closed forms.
pub const CLOSED_FORM_AGREEMENT: f64 = 1e-11;

/// One-parameter group law `G(a) G(b) = G(a + b)`.
pub const GROUP_ADDITIVITY: f64 = 1e-12;

/// Central difference of `G_i(eps)` at `eps = 0` against the generator.
pub const TANGENCY: f64 = 1e-6;
pub const TANGENCY_STEP: f64 = 1e-5;

/// Contiguous relation `F'(-m, b; u) = (-m / b) F(-m+1, b+1; u)`.
pub const KUMMER_CONTIGUOUS: f64 = 1e-12;

/// Closed-form partials against Richardson finite differences.
pub const PARTIALS_VS_FD: f64 = 1e-7;

/// `(m+1)`-th forward difference of a degree-`m` polynomial, relative to the
/// sum of magnitudes entering the difference.
pub const DEGREE_ANNIHILATION: f64 = 1e-10;

/// `m`-th forward difference against `m! h^m` times the leading coefficient.
pub const DEGREE_LEADING: f64 = 1e-8;
