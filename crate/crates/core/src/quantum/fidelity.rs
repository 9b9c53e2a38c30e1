use nalgebra::{Complex, SymmetricEigen, Vector4};

use super::state::{hermitian_deviation, re, DensityMatrix, Matrix4C, PureState};
use super::QuantumError;
use crate::scalar::{lit, to_f64, tolerance, Real};

/// Principal square root of a Hermitian positive-semidefinite matrix.
///
/// Eigenvalues in `[-1e-9, 0)` are treated as round-off and clipped to zero;
/// anything more negative is an error.
pub fn matrix_sqrt_psd<T: Real>(m: &Matrix4C<T>) -> Result<Matrix4C<T>, QuantumError> {
    let herm = (m + m.adjoint()) * re(lit::<T>(0.5));
    let dev = hermitian_deviation(m);
    if dev > tolerance::<T>(1e-9) {
        return Err(QuantumError::NotHermitian { deviation: to_f64(dev) });
    }
    let eig = SymmetricEigen::new(herm);
    let floor = -tolerance::<T>(1e-9);
    let mut roots = eig.eigenvalues;
    for l in roots.iter_mut() {
        if *l < floor {
            return Err(QuantumError::NotPositive { eigenvalue: to_f64(*l) });
        }
        *l = if *l > T::zero() { l.sqrt() } else { T::zero() };
    }
    let v = &eig.eigenvectors;
    let d = Matrix4C::from_diagonal(&roots.map(|x| Complex::new(x, T::zero())));
    Ok(v * d * v.adjoint())
}

/// `(Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2` for raw matrices.
pub fn uhlmann_fidelity_matrices<T: Real>(
    rho: &Matrix4C<T>,
    sigma: &Matrix4C<T>,
) -> Result<T, QuantumError> {
    let r = matrix_sqrt_psd(rho)?;
    let inner = r * sigma * r;
    let s = matrix_sqrt_psd(&inner)?;
    let tr = s.trace().re;
    Ok(tr * tr)
}

/// Dominant eigenvector of `m` if `m` is a pure state.
fn pure_vector<T: Real>(m: &Matrix4C<T>) -> Option<Vector4<Complex<T>>> {
    let purity = (m * m).trace().re;
    if (purity - T::one()).abs() > tolerance::<T>(1e-12) {
        return None;
    }
    let eig = SymmetricEigen::new(*m);
    let k = eig.eigenvalues.imax();
    Some(eig.eigenvectors.column(k).into_owned())
}

/// Uhlmann fidelity between two validated density matrices.
///
/// When either side is pure this is the overlap `<psi| rho |psi>`, which
/// avoids the square root of a rank-deficient matrix.
pub fn uhlmann_fidelity<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> T {
    let pure = pure_vector(sigma.matrix()).map(|v| (v, rho)).or_else(|| pure_vector(rho.matrix()).map(|v| (v, sigma)));
    let f = match pure {
        Some((v, other)) => (v.adjoint() * other.matrix() * v)[(0, 0)].re,
        // Inputs were validated on construction, so the PSD checks can only
        // trip on round-off.
        None => uhlmann_fidelity_matrices(rho.matrix(), sigma.matrix()).unwrap_or_else(|_| T::zero()),
    };
    crate::scalar::clamp(f, T::zero(), T::one())
}

impl<T: Real> PureState<T> {
    /// `<psi| rho |psi>`, which equals the Uhlmann fidelity for a pure target.
    pub fn fidelity_with(&self, rho: &DensityMatrix<T>) -> T {
        let a = self.amplitudes();
        (a.adjoint() * rho.matrix() * a)[(0, 0)].re
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::swpe_state;
    use approx::assert_abs_diff_eq;

    #[test]
    fn sqrt_squares_back() {
        let w = DensityMatrix::werner(0.6f64).unwrap();
        let r = matrix_sqrt_psd(w.matrix()).unwrap();
        assert!((r * r - w.matrix()).iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn sqrt_rejects_negative() {
        let mut m = Matrix4C::<f64>::identity() * re(0.25);
        m[(0, 0)] = re(-0.01);
        assert!(matches!(matrix_sqrt_psd(&m), Err(QuantumError::NotPositive { .. })));
    }

    #[test]
    fn werner_fidelity_matches_closed_form() {
        for v in [0.0, 0.3, 0.827, 1.0] {
            let w = DensityMatrix::werner(v).unwrap();
            let phi = PureState::phi_plus().projector();
            let f = uhlmann_fidelity(&w, &phi);
            assert_abs_diff_eq!(f, (3.0 * v + 1.0) / 4.0, epsilon = 1e-9);
            assert_abs_diff_eq!(PureState::phi_plus().fidelity_with(&w), (3.0 * v + 1.0) / 4.0, epsilon = 1e-14);
        }
        let w = DensityMatrix::werner(0.827).unwrap();
        assert_abs_diff_eq!(PureState::phi_plus().fidelity_with(&w), 0.87025, epsilon = 1e-12);
    }

    #[test]
    fn fidelity_is_symmetric_and_bounded() {
        let a = swpe_state(0.6f64).unwrap().projector().mix(&DensityMatrix::maximally_mixed(), 0.2);
        let b = DensityMatrix::werner(0.7).unwrap();
        let fab = uhlmann_fidelity(&a, &b);
        let fba = uhlmann_fidelity(&b, &a);
        assert_abs_diff_eq!(fab, fba, epsilon = 1e-9);
        assert!((0.0..=1.0).contains(&fab));
        assert_abs_diff_eq!(uhlmann_fidelity(&a, &a), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn orthogonal_pure_states_have_zero_fidelity() {
        let f = uhlmann_fidelity(&PureState::<f64>::phi_plus().projector(), &PureState::psi_plus().projector());
        assert_abs_diff_eq!(f, 0.0, epsilon = 1e-9);
    }
}
