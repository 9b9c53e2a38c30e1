
use super::multiplex::multiplexed_prob_table;
use super::table::ProbRow;
use super::{DetectionError, InterfaceParams};
use crate::quantum::{chsh, swpe_state, tomography_reconstruct, uhlmann_fidelity, ChshAngles, DensityMatrix, PolarizationBasis};
use crate::scalar::Real;

/// Joint click weights `[stokes][anti_stokes]` for the HV, DA and RL bases.
pub type BasisJoints<T> = [[[T; 2]; 2]; 3];

/// Pauli correlators implied by coincidence data in the three bases.
///
/// Diagonal correlators come from the matching basis; singles from the
/// marginals of the coincidences. Mixed correlators such as `XZ` are not
/// measured and are set to zero.
pub fn pauli_from_joints<T: Real>(joints: &BasisJoints<T>) -> Result<[T; 15], DetectionError> {
    let mut stats = [(T::zero(), T::zero(), T::zero()); 3];
    for (k, j) in joints.iter().enumerate() {
        let total = j[0][0] + j[0][1] + j[1][0] + j[1][1];
        if !(total > T::zero()) {
            return Err(DetectionError::UndefinedVisibility);
        }
        let corr = (j[0][0] + j[1][1] - j[0][1] - j[1][0]) / total;
        let s = (j[0][0] + j[0][1] - j[1][0] - j[1][1]) / total;
        let t = (j[0][0] + j[1][0] - j[0][1] - j[1][1]) / total;
        stats[k] = (corr, s, t);
    }
    let [(zz, zi, iz), (xx, xi, ix), (yy, yi, iy)] = stats;
    let o = T::zero();
    // Order: IX IY IZ XI XX XY XZ YI YX YY YZ ZI ZX ZY ZZ
    Ok([ix, iy, iz, xi, xx, o, o, yi, o, yy, o, zi, o, o, zz])
}

pub(crate) fn joints_of_rows<T: Real>(rows: &[ProbRow<T>]) -> [[T; 2]; 2] {
    let mut j = [[T::zero(); 2]; 2];
    for r in rows {
        let rj = r.joints();
        for a in 0..2 {
            for b in 0..2 {
                j[a][b] += rj[a][b];
            }
        }
    }
    j
}

/// State reconstructed from three-basis coincidence statistics, with its
/// Bell parameter and its overlap with the ideal source state.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveState<T: Real> {
    pub rho: DensityMatrix<T>,
    pub chsh: T,
    pub fidelity: T,
}

impl<T: Real> EffectiveState<T> {
    /// `theta` names the ideal state the fidelity is measured against.
    pub fn from_joints(joints: &BasisJoints<T>, theta: T) -> Result<Self, DetectionError> {
        let rho = tomography_reconstruct(&pauli_from_joints(joints)?);
        let target = swpe_state(theta).map_err(|_| DetectionError::InvalidParam { field: "theta", value: crate::scalar::to_f64(theta) })?;
        let fidelity = uhlmann_fidelity(&rho, &target.projector());
        let s = chsh(&rho, &ChshAngles::canonical());
        Ok(Self { rho, chsh: s, fidelity })
    }
}

/// Effective state of the pooled interface output.
pub fn interface_effective_state<T: Real>(ip: &InterfaceParams<T>) -> Result<EffectiveState<T>, DetectionError> {
    let mut joints = [[[T::zero(); 2]; 2]; 3];
    for (k, b) in PolarizationBasis::ALL.into_iter().enumerate() {
        joints[k] = joints_of_rows(&multiplexed_prob_table(ip, b)?);
    }
    EffectiveState::from_joints(&joints, ip.sources[0].theta)
}

/// Effective state of each source separately.
pub fn per_source_effective_states<T: Real>(ip: &InterfaceParams<T>) -> Result<Vec<EffectiveState<T>>, DetectionError> {
    let tables = PolarizationBasis::ALL.map(|b| multiplexed_prob_table(ip, b));
    let tables = [tables[0].clone()?, tables[1].clone()?, tables[2].clone()?];
    (0..ip.m())
        .map(|i| {
            let joints = [tables[0][i].joints(), tables[1][i].joints(), tables[2][i].joints()];
            EffectiveState::from_joints(&joints, ip.sources[i].theta)
        })
        .collect()
}
