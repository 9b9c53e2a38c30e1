use super::config::ScenarioConfig;
use super::output::{num, Table};
use super::sweep::Prepared;
use super::ScenarioError;
use crate::detection::{interface_effective_state, per_source_effective_states, EffectiveState};
use crate::quantum::{pauli_expectations, PAULI_LABELS};
use crate::sim::decayed_interface;

/// Reconstructed state of one source, or of the pooled interface output.
#[derive(Debug, Clone, PartialEq)]
pub struct TomographyRow {
    /// Source index from 1, or `composite`.
    pub source: String,
    pub state: EffectiveState<f64>,
}

/// Per-source states followed by the composite state, at the configured
/// excitation probabilities and storage time.
pub fn run_tomography(cfg: &ScenarioConfig, prep: &Prepared) -> Result<Vec<TomographyRow>, ScenarioError> {
    let dip = decayed_interface(&prep.interface, &cfg.timing());
    let mut rows: Vec<TomographyRow> = per_source_effective_states(&dip)?
        .into_iter()
        .enumerate()
        .map(|(i, state)| TomographyRow { source: (i + 1).to_string(), state })
        .collect();
    rows.push(TomographyRow { source: "composite".into(), state: interface_effective_state(&dip)? });
    Ok(rows)
}

pub fn tomography_table(rows: &[TomographyRow]) -> Table {
    let mut header: Vec<String> = ["source", "fidelity", "S", "purity"].map(String::from).to_vec();
    header.extend(PAULI_LABELS.iter().map(|l| l.to_string()));
    for part in ["re", "im"] {
        for i in 0..4 {
            for j in 0..4 {
                header.push(format!("rho_{part}_{i}{j}"));
            }
        }
    }
    let mut t = Table { header, rows: Vec::new() };
    for r in rows {
        let s = &r.state;
        let mut rec = vec![r.source.clone(), num(s.fidelity), num(s.chsh), num(s.rho.purity())];
        rec.extend(pauli_expectations(&s.rho).iter().map(|&x| num(x)));
        let m = s.rho.matrix();
        rec.extend((0..16).map(|k| num(m[(k / 4, k % 4)].re)));
        rec.extend((0..16).map(|k| num(m[(k / 4, k % 4)].im)));
        t.push(rec);
    }
    t
}
