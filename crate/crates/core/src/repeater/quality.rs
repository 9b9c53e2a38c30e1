use serde::Serialize;

use crate::detection::werner_fidelity;
use crate::scalar::{lit, Real};

/// Visibility, fidelity and Bell parameter of a memory-memory link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinkQuality<T> {
    pub v_ab: T,
    pub f_ab: T,
    pub s_ab: T,
}

impl<T: Real> LinkQuality<T> {
    pub fn from_visibility(v: T) -> Self {
        Self { v_ab: v, f_ab: werner_fidelity(v), s_ab: lit::<T>(2.0) * T::SQRT_2() * v }
    }
}

/// Per-channel inputs: Stokes detection probabilities and source
/// visibilities at both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelQuality<T> {
    pub p_s_a: T,
    pub p_s_b: T,
    pub v_a: T,
    pub v_b: T,
}

/// Both evaluations of the link quality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompositeLinkQuality<T> {
    /// Channel-weighted product `sum p_A p_B zeta V_A V_B / sum p_A p_B`.
    pub exact: LinkQuality<T>,
    /// Product of the two interface visibilities.
    pub product: LinkQuality<T>,
}

/// `zeta` is the swap reliability, 1 for an ideal swap.
pub fn composite_link_quality<T: Real>(channels: &[ChannelQuality<T>], zeta: T) -> CompositeLinkQuality<T> {
    let sum = |f: &dyn Fn(&ChannelQuality<T>) -> T| channels.iter().fold(T::zero(), |a, c| a + f(c));
    let w = sum(&|c| c.p_s_a * c.p_s_b);
    let exact = if w > T::zero() { zeta * sum(&|c| c.p_s_a * c.p_s_b * c.v_a * c.v_b) / w } else { T::zero() };
    let wa = sum(&|c| c.p_s_a);
    let wb = sum(&|c| c.p_s_b);
    let va = if wa > T::zero() { sum(&|c| c.p_s_a * c.v_a) / wa } else { T::zero() };
    let vb = if wb > T::zero() { sum(&|c| c.p_s_b * c.v_b) / wb } else { T::zero() };
    CompositeLinkQuality { exact: LinkQuality::from_visibility(exact), product: LinkQuality::from_visibility(zeta * va * vb) }
}

/// Link fidelity from the two interface fidelities,
/// `(1 + (4 F_A - 1)(4 F_B - 1) / 3) / 4`.
pub fn link_fidelity_from_fidelities<T: Real>(f_a: T, f_b: T) -> T {
    let four: T = lit(4.0);
    (T::one() + (four * f_a - T::one()) * (four * f_b - T::one()) / lit(3.0)) / four
}

/// Link Bell parameter from the two interface Bell parameters, `S_A S_B / 2 sqrt 2`.
pub fn link_chsh_from_chsh<T: Real>(s_a: T, s_b: T) -> T {
    s_a * s_b / (lit::<T>(2.0) * T::SQRT_2())
}
