use nalgebra::{Complex, Matrix2, SymmetricEigen};

use super::state::{re, DensityMatrix, Matrix4C};
use crate::scalar::{lit, Real};

/// Labels of the 15 two-qubit Pauli correlators, row-major over `I, X, Y, Z`
/// with the identity-identity term left out.
pub const PAULI_LABELS: [&str; 15] =
    ["IX", "IY", "IZ", "XI", "XX", "XY", "XZ", "YI", "YX", "YY", "YZ", "ZI", "ZX", "ZY", "ZZ"];

fn pauli<T: Real>(i: usize) -> Matrix2<Complex<T>> {
    let (o, l) = (T::zero(), T::one());
    let c = |r: T, im: T| Complex::new(r, im);
    match i {
        0 => Matrix2::new(c(l, o), c(o, o), c(o, o), c(l, o)),
        1 => Matrix2::new(c(o, o), c(l, o), c(l, o), c(o, o)),
        2 => Matrix2::new(c(o, o), c(o, -l), c(o, l), c(o, o)),
        _ => Matrix2::new(c(l, o), c(o, o), c(o, o), c(-l, o)),
    }
}

fn pauli_pairs() -> impl Iterator<Item = (usize, usize)> {
    (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).skip(1)
}

/// `<sigma_i (x) sigma_j>` for the 15 non-trivial pairs, in [`PAULI_LABELS`] order.
pub fn pauli_expectations<T: Real>(rho: &DensityMatrix<T>) -> [T; 15] {
    let mut out = [T::zero(); 15];
    for (k, (i, j)) in pauli_pairs().enumerate() {
        let op = pauli::<T>(i).kronecker(&pauli::<T>(j));
        out[k] = (rho.matrix() * op).trace().re;
    }
    out
}

/// `(I + sum r_ij sigma_i (x) sigma_j) / 4`. The result is Hermitian with unit
/// trace but need not be positive.
pub fn linear_inversion<T: Real>(expectations: &[T; 15]) -> Matrix4C<T> {
    let mut m = Matrix4C::<T>::identity();
    for (k, (i, j)) in pauli_pairs().enumerate() {
        m += pauli::<T>(i).kronecker(&pauli::<T>(j)) * re(expectations[k]);
    }
    m * re(lit::<T>(0.25))
}

/// Linear inversion followed by projection onto the physical states: negative
/// eigenvalues are set to zero and the spectrum renormalized.
pub fn tomography_reconstruct<T: Real>(expectations: &[T; 15]) -> DensityMatrix<T> {
    let m = linear_inversion(expectations);
    let eig = SymmetricEigen::new(m);
    let mut l = eig.eigenvalues.map(|x| if x > T::zero() { x } else { T::zero() });
    let total = l.sum();
    if total > T::zero() {
        l /= total;
    } else {
        return DensityMatrix::maximally_mixed();
    }
    let v = &eig.eigenvectors;
    let d = Matrix4C::from_diagonal(&l.map(re));
    let out = v * d * v.adjoint();
    DensityMatrix::from_raw((out + out.adjoint()) * re(lit::<T>(0.5)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{swpe_state, uhlmann_fidelity, PureState};
    use approx::assert_abs_diff_eq;

    #[test]
    fn phi_plus_expectations() {
        let e = pauli_expectations(&PureState::<f64>::phi_plus().projector());
        let get = |l: &str| e[PAULI_LABELS.iter().position(|x| *x == l).unwrap()];
        assert_abs_diff_eq!(get("XX"), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(get("YY"), -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(get("ZZ"), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(get("IZ"), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn round_trip_physical_state() {
        let rho = swpe_state(0.7f64).unwrap().projector().mix(&DensityMatrix::werner(0.4).unwrap(), 0.6);
        let back = tomography_reconstruct(&pauli_expectations(&rho));
        assert!(back.max_abs_diff(&rho) < 1e-12);
        assert_abs_diff_eq!(uhlmann_fidelity(&rho, &back), 1.0, epsilon = 1e-8);
    }

    #[test]
    fn unphysical_input_is_projected() {
        let mut e = [0.0f64; 15];
        for k in [4, 14] {
            e[k] = 1.0;
        }
        e[9] = 1.0; // XX = YY = ZZ = +1 is not a state
        let rho = tomography_reconstruct(&e);
        assert!(rho.eigenvalues()[0] >= 0.0);
        assert_abs_diff_eq!(rho.matrix().trace().re, 1.0, epsilon = 1e-12);
        assert!(DensityMatrix::new(rho.into_matrix()).is_ok());
    }
}
