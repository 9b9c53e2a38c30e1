//! Two-qubit polarization states, analyzer projectors, Bell-CHSH statistics,
//! Uhlmann fidelity and Pauli tomography.
//!
//! Qubit order is always (Stokes, anti-Stokes); basis index `2 * s + t` with
//! `H = 0`, `V = 1`. The same layout is used for memory-memory states coming
//! out of entanglement swapping, with `|+> = 0`, `|-> = 1`.

mod fidelity;
mod measure;
mod state;
mod tomography;

pub use fidelity::{matrix_sqrt_psd, uhlmann_fidelity, uhlmann_fidelity_matrices};
pub use measure::{
    chsh, coincidence_prob, coincidence_probs, correlation, Analyzer, AnalyzerSetting, ChshAngles,
    Detector, PolarizationBasis,
};
pub use state::{swpe_state, C, DensityMatrix, Matrix4C, PureState};
pub use tomography::{linear_inversion, pauli_expectations, tomography_reconstruct, PAULI_LABELS};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("Clebsch-Gordan angle {degrees} deg outside [0, 90]")]
    AngleOutOfRange { degrees: f64 },
    #[error("state norm {norm} differs from 1")]
    NotNormalized { norm: f64 },
    #[error("matrix is not Hermitian (max deviation {deviation})")]
    NotHermitian { deviation: f64 },
    #[error("trace {trace} differs from 1")]
    BadTrace { trace: f64 },
    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue})")]
    NotPositive { eigenvalue: f64 },
    #[error("Werner visibility {0} outside [0, 1]")]
    VisibilityOutOfRange(f64),
}
