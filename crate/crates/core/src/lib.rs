//! Joint delay-Doppler estimation for OFDM passive radar.
//!
//! The pipeline models the demodulated returns of an OFDM illuminator as a
//! sparse mixture of 2D complex exponentials plus a sparse demodulation-error
//! vector, recovers the mixture by solving a block-Toeplitz semidefinite
//! program with a symmetric Gauss-Seidel ADMM (a directly-extended ADMM
//! baseline is included for comparison), and extracts per-path normalized
//! Doppler/delay parameters with a 2D MUSIC search on the recovered
//! block-Toeplitz matrix.
//!
//! Modules:
//! - [`scene`]: synthetic scene and received-data generation (QPSK symbols,
//!   bit errors, complex Gaussian noise).
//! - [`toeplitz`]: the 2-level block-Toeplitz constructor `T(U)` and its
//!   diagonal-averaging pseudo-adjoint `T*`.
//! - [`proxops`]: complex soft-thresholding and projection onto the Hermitian
//!   PSD cone.
//! - [`solver`]: the sGS-ADMM and directly-extended ADMM solvers with all
//!   closed-form subproblem updates.
//! - [`equivalence`]: numerical checks that each sGS sweep equals a joint
//!   proximal step (used by the validation suite).
//! - [`diagnostics`]: relative KKT residuals and estimate scoring.
//! - [`music`]: 2D MUSIC spectrum, peak picking, amplitude fitting, and
//!   target/clutter/direct classification.

pub mod diagnostics;
pub mod equivalence;
pub mod error;
pub mod music;
pub mod proxops;
pub mod scene;
pub mod solver;
pub mod toeplitz;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
/// Dense complex vector.
pub type CVector = nalgebra::DVector<C64>;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;

/// Speed of light in m/s, used by the physical delay/Doppler mappings.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
