use nalgebra::{Complex, ComplexField, Matrix2, Matrix4, SymmetricEigen, Vector4};

use super::QuantumError;
use crate::scalar::{lit, to_f64, tolerance, Real};

pub type C<T> = Complex<T>;
pub type Matrix4C<T> = Matrix4<Complex<T>>;

#[inline]
pub(crate) fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// Normalized two-qubit pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T: Real> {
    amps: Vector4<Complex<T>>,
}

impl<T: Real> PureState<T> {
    pub fn new(amps: Vector4<Complex<T>>) -> Result<Self, QuantumError> {
        let norm = amps.iter().map(|a| a.norm_sqr()).fold(T::zero(), |s, x| s + x);
        if (norm - T::one()).abs() > tolerance::<T>(1e-12) {
            return Err(QuantumError::NotNormalized { norm: to_f64(norm) });
        }
        Ok(Self { amps })
    }

    /// Normalizes `amps` instead of rejecting them. Panics on the zero vector.
    pub fn normalized(amps: Vector4<Complex<T>>) -> Self {
        let n = amps.iter().map(|a| a.norm_sqr()).fold(T::zero(), |s, x| s + x).sqrt();
        assert!(n > T::zero(), "cannot normalize the zero vector");
        Self { amps: amps.map(|a| a / re(n)) }
    }

    pub fn from_real(amps: [T; 4]) -> Result<Self, QuantumError> {
        Self::new(Vector4::from_iterator(amps.into_iter().map(re)))
    }

    /// `(|00> + |11>) / sqrt 2`.
    pub fn phi_plus() -> Self {
        let h = T::FRAC_1_SQRT_2();
        Self { amps: Vector4::new(re(h), re(T::zero()), re(T::zero()), re(h)) }
    }

    /// `(|01> + |10>) / sqrt 2`, the memory-memory state heralded by a swap.
    pub fn psi_plus() -> Self {
        let h = T::FRAC_1_SQRT_2();
        Self { amps: Vector4::new(re(T::zero()), re(h), re(h), re(T::zero())) }
    }

    pub fn amplitudes(&self) -> &Vector4<Complex<T>> {
        &self.amps
    }

    pub fn projector(&self) -> DensityMatrix<T> {
        DensityMatrix { m: self.amps * self.amps.adjoint() }
    }

    /// Wootters concurrence `2 |a00 a11 - a01 a10|`.
    pub fn concurrence(&self) -> T {
        let a = &self.amps;
        (a[0] * a[3] - a[1] * a[2]).modulus() * lit(2.0)
    }

    /// `|<self|other>|^2`.
    pub fn overlap(&self, other: &Self) -> T {
        self.amps.dotc(&other.amps).norm_sqr()
    }
}

/// Spin-wave/photon entangled state `cos t |HH> + sin t |VV>` after the
/// memory excitation is mapped onto the retrieved photon's polarization.
/// `theta` is the Clebsch-Gordan angle in radians.
pub fn swpe_state<T: Real>(theta: T) -> Result<PureState<T>, QuantumError> {
    let slack = tolerance::<T>(1e-12);
    if !(theta >= -slack && theta <= T::FRAC_PI_2() + slack) {
        return Err(QuantumError::AngleOutOfRange { degrees: to_f64(theta).to_degrees() });
    }
    let (s, c) = (theta.sin(), theta.cos());
    Ok(PureState { amps: Vector4::new(re(c), re(T::zero()), re(T::zero()), re(s)) })
}

/// 4x4 Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real> {
    m: Matrix4C<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates hermiticity and trace to 1e-12 and eigenvalues to -1e-9.
    pub fn new(m: Matrix4C<T>) -> Result<Self, QuantumError> {
        let dev = hermitian_deviation(&m);
        if dev > tolerance::<T>(1e-12) {
            return Err(QuantumError::NotHermitian { deviation: to_f64(dev) });
        }
        let tr = m.trace();
        if (tr.re - T::one()).abs() > tolerance::<T>(1e-12) || tr.im.abs() > tolerance::<T>(1e-12) {
            return Err(QuantumError::BadTrace { trace: to_f64(tr.re) });
        }
        let min = min_eigenvalue(&m);
        if min < -tolerance::<T>(1e-9) {
            return Err(QuantumError::NotPositive { eigenvalue: to_f64(min) });
        }
        Ok(Self { m })
    }

    pub(crate) fn from_raw(m: Matrix4C<T>) -> Self {
        Self { m }
    }

    pub fn maximally_mixed() -> Self {
        Self { m: Matrix4C::<T>::identity() * re(lit::<T>(0.25)) }
    }

    /// `v |Phi+><Phi+| + (1 - v) I/4`.
    pub fn werner(v: T) -> Result<Self, QuantumError> {
        if v < T::zero() || v > T::one() {
            return Err(QuantumError::VisibilityOutOfRange(to_f64(v)));
        }
        Ok(Self::mix_with_white_noise(&PureState::phi_plus(), v))
    }

    /// `v |psi><psi| + (1 - v) I/4` for an arbitrary target.
    pub fn mix_with_white_noise(psi: &PureState<T>, v: T) -> Self {
        let p = psi.projector().m * re(v);
        let noise = Matrix4C::<T>::identity() * re((T::one() - v) * lit(0.25));
        Self { m: p + noise }
    }

    /// `rho_a (x) rho_b` from two single-qubit density matrices.
    pub fn product(a: &Matrix2<Complex<T>>, b: &Matrix2<Complex<T>>) -> Result<Self, QuantumError> {
        Self::new(a.kronecker(b))
    }

    /// Convex combination `w * self + (1 - w) * other`.
    pub fn mix(&self, other: &Self, w: T) -> Self {
        Self { m: self.m * re(w) + other.m * re(T::one() - w) }
    }

    pub fn matrix(&self) -> &Matrix4C<T> {
        &self.m
    }

    pub fn into_matrix(self) -> Matrix4C<T> {
        self.m
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [T; 4] {
        let mut ev: Vec<T> = SymmetricEigen::new(self.m).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        [ev[0], ev[1], ev[2], ev[3]]
    }

    pub fn purity(&self) -> T {
        (self.m * self.m).trace().re
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        (self.m - other.m).iter().map(|z| z.modulus()).fold(T::zero(), |a, b| if b > a { b } else { a })
    }
}

pub(crate) fn hermitian_deviation<T: Real>(m: &Matrix4C<T>) -> T {
    (m - m.adjoint()).iter().map(|z| z.modulus()).fold(T::zero(), |a, b| if b > a { b } else { a })
}

pub(crate) fn min_eigenvalue<T: Real>(m: &Matrix4C<T>) -> T {
    let herm = (m + m.adjoint()) * re(lit::<T>(0.5));
    SymmetricEigen::new(herm)
        .eigenvalues
        .iter()
        .copied()
        .fold(T::max_value().unwrap_or_else(T::one), |a, b| if b < a { b } else { a })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn swpe_symmetric_angle_is_phi_plus() {
        let s = swpe_state(std::f64::consts::FRAC_PI_4).unwrap();
        assert_abs_diff_eq!(s.overlap(&PureState::phi_plus()), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.concurrence(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn swpe_rubidium_angle_amplitudes() {
        let theta = 0.81 * std::f64::consts::FRAC_PI_4;
        let s = swpe_state(theta).unwrap();
        let a = s.amplitudes();
        assert_abs_diff_eq!(a[0].re, 36.45f64.to_radians().cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(a[3].re, 36.45f64.to_radians().sin(), epsilon = 1e-15);
        assert_eq!(a[1].norm(), 0.0);
        assert_eq!(a[2].norm(), 0.0);
    }

    #[test]
    fn swpe_zero_angle_is_separable() {
        let s = swpe_state(0.0f64).unwrap();
        assert_eq!(s.concurrence(), 0.0);
        assert_eq!(s.amplitudes()[0].re, 1.0);
    }

    #[test]
    fn swpe_rejects_out_of_range() {
        assert!(matches!(swpe_state(-0.1f64), Err(QuantumError::AngleOutOfRange { .. })));
        assert!(matches!(swpe_state(1.7f64), Err(QuantumError::AngleOutOfRange { .. })));
    }

    #[test]
    fn density_validation_errors() {
        let mut m = DensityMatrix::<f64>::maximally_mixed().into_matrix();
        m[(0, 1)] = re(0.1);
        assert!(matches!(DensityMatrix::new(m), Err(QuantumError::NotHermitian { .. })));

        let m = Matrix4C::<f64>::identity() * re(0.3);
        assert!(matches!(DensityMatrix::new(m), Err(QuantumError::BadTrace { .. })));

        let m = Matrix4C::<f64>::from_diagonal(&Vector4::new(re(0.6), re(0.6), re(0.1), re(-0.3)));
        assert!(matches!(DensityMatrix::new(m), Err(QuantumError::NotPositive { .. })));
    }

    #[test]
    fn werner_endpoints() {
        let w0 = DensityMatrix::<f64>::werner(0.0).unwrap();
        assert!(w0.max_abs_diff(&DensityMatrix::maximally_mixed()) < 1e-16);
        let w1 = DensityMatrix::<f64>::werner(1.0).unwrap();
        assert_abs_diff_eq!(w1.purity(), 1.0, epsilon = 1e-15);
        assert!(DensityMatrix::<f64>::werner(1.2).is_err());
    }

    #[test]
    fn f32_states_validate() {
        let s = swpe_state(0.6f32).unwrap();
        assert!(DensityMatrix::new(s.projector().into_matrix()).is_ok());
    }
}
