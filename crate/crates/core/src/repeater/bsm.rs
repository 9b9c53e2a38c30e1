use nalgebra::{Complex, Vector4};
use rand::Rng;

use crate::quantum::{swpe_state, PureState, QuantumError};
use crate::scalar::{to_f64, Real};

/// Outcome of the two analyzer detectors behind the beam splitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BsmOutcome {
    DD,
    DA,
    AD,
    AA,
}

impl BsmOutcome {
    const ALL: [BsmOutcome; 4] = [BsmOutcome::DD, BsmOutcome::DA, BsmOutcome::AD, BsmOutcome::AA];

    fn bits(self) -> (usize, usize) {
        match self {
            BsmOutcome::DD => (0, 0),
            BsmOutcome::DA => (0, 1),
            BsmOutcome::AD => (1, 0),
            BsmOutcome::AA => (1, 1),
        }
    }

    /// Odd outcomes herald the minus-phase memory state.
    pub fn odd(self) -> bool {
        matches!(self, BsmOutcome::DA | BsmOutcome::AD)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BsmBranch<T: Real> {
    pub outcome: BsmOutcome,
    pub probability: T,
    /// Memory-memory state after the phase correction, order (A, B) with
    /// `|+> = 0`, `|-> = 1`.
    pub state: PureState<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BsmResult<T: Real> {
    /// Probability that both photons leave the splitter with the same
    /// polarization, which is what the measurement needs.
    pub success_probability: T,
    pub branches: Vec<BsmBranch<T>>,
}

fn diag<T: Real>(bit: usize) -> [Complex<T>; 2] {
    let h = T::FRAC_1_SQRT_2();
    let sign = if bit == 0 { h } else { -h };
    [Complex::new(h, T::zero()), Complex::new(sign, T::zero())]
}

/// Bell measurement on the two Stokes photons of `a` and `b`, each a
/// (memory, photon) state. The photon of `b` passes a half-wave plate that
/// swaps H and V before the splitter.
pub fn bsm_branches<T: Real>(a: &PureState<T>, b: &PureState<T>) -> BsmResult<T> {
    let (va, vb) = (a.amplitudes(), b.amplitudes());
    let mut branches = Vec::with_capacity(4);
    let mut total = T::zero();
    for outcome in BsmOutcome::ALL {
        let (da, db) = outcome.bits();
        let (pa, pb) = (diag::<T>(da), diag::<T>(db));
        let mut mem = Vector4::<Complex<T>>::zeros();
        for ma in 0..2 {
            for mb in 0..2 {
                let mut amp = Complex::new(T::zero(), T::zero());
                for pol in 0..2 {
                    // Same polarization after the flip on b: b's original photon is 1 - pol.
                    let amp_a = va[2 * ma + pol];
                    let amp_b = vb[2 * mb + (1 - pol)];
                    amp += amp_a * amp_b * pa[pol].conj() * pb[pol].conj();
                }
                mem[2 * ma + mb] = amp;
            }
        }
        if outcome.odd() {
            // Phase flip on memory A's |-> component.
            mem[2] = -mem[2];
            mem[3] = -mem[3];
        }
        let p = mem.iter().fold(T::zero(), |s, z| s + z.norm_sqr());
        total += p;
        if p > T::zero() {
            branches.push(BsmBranch { outcome, probability: p, state: PureState::normalized(mem) });
        }
    }
    BsmResult { success_probability: total, branches }
}

/// Samples one swap attempt; `None` on failure.
pub fn bsm_project<T: Real, R: Rng + ?Sized>(rng: &mut R, a: &PureState<T>, b: &PureState<T>) -> Option<PureState<T>> {
    let res = bsm_branches(a, b);
    let mut u = rng.random::<f64>();
    for br in res.branches {
        let p = to_f64(br.probability);
        if u < p {
            return Some(br.state);
        }
        u -= p;
    }
    None
}

/// Norm of the same-polarization part of two excited sources, each emitting
/// with probability `chi`: `chi sin(2 theta) / sqrt 2`.
pub fn same_polarization_amplitude<T: Real>(theta: T, chi: T) -> Result<T, QuantumError> {
    let s = swpe_state(theta)?;
    Ok(chi * bsm_branches(&s, &s).success_probability.sqrt())
}

/// Target memory-memory state `(|+-> + |-+>) / sqrt 2`.
pub fn swapped_target<T: Real>() -> PureState<T> {
    PureState::psi_plus()
}
