//! Numerical tolerances shared by the library and its tests.

/// Maximum |M - M†| entry accepted as Hermitian (scaled by max(1, max|M|)).
pub const HERMITIAN: f64 = 1e-12;

/// Jacobi stops once the off-diagonal Frobenius norm falls below this
/// (scaled by max(1, ‖M‖_F)).
pub const JACOBI_OFF_DIAGONAL: f64 = 1e-14;

/// Sweep cap for the Jacobi eigensolver.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalues closer than this are treated as one degenerate cluster.
pub const EIGEN_CLUSTER: f64 = 1e-10;

/// Accepted |Σ|a|² - 1| for state literals and parametrizations.
pub const NORMALIZATION_INPUT: f64 = 1e-10;

/// Accepted |Tr ρ - 1|.
pub const TRACE: f64 = 1e-10;

/// Smallest eigenvalue accepted for a density matrix.
pub const POSITIVITY: f64 = -1e-10;

/// Negative eigenvalues above `-SQRT_CLAMP` are clamped to zero before a
/// square root.
pub const SQRT_CLAMP: f64 = 1e-10;

/// Eigenvalues with magnitude below this are rounding noise and are zeroed
/// before a square root (sqrt would lift 1e-17 to 3e-9).
pub const ROUNDOFF_FLOOR: f64 = 1e-14;

/// |Det Q| at or below this flags Q as singular.
pub const SINGULAR_DET: f64 = 1e-12;

/// Eigenvalue support threshold on y_l + y_m in the mixed-state QFIM.
pub const SUPPORT: f64 = 1e-10;

/// Central finite-difference step used for derivative validation.
pub const FINITE_DIFFERENCE_STEP: f64 = 1e-6;
