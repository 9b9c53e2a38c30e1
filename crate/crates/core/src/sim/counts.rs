use serde::Serialize;

use crate::quantum::PolarizationBasis;

/// Tallies of one source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct SourceCounts {
    /// Coincidences `[stokes][anti_stokes]`, detector 1 first.
    pub joints: [[u64; 2]; 2],
    /// All Stokes clicks per detector, with or without a partner.
    pub stokes: [u64; 2],
    /// Stokes clicks with no anti-Stokes click.
    pub stokes_only: u64,
}

impl SourceCounts {
    pub fn fired(&self) -> u64 {
        self.stokes[0] + self.stokes[1]
    }

    pub fn coincidences(&self) -> u64 {
        self.joints.iter().flatten().sum()
    }

    /// Correlated and anti-correlated coincidences for `basis`.
    pub fn contrast(&self, basis: PolarizationBasis) -> (u64, u64) {
        let par = self.joints[0][0] + self.joints[1][1];
        let anti = self.joints[0][1] + self.joints[1][0];
        if basis.parallel_is_correlated() {
            (par, anti)
        } else {
            (anti, par)
        }
    }

    fn add(&mut self, o: &Self) {
        for a in 0..2 {
            self.stokes[a] += o.stokes[a];
            for b in 0..2 {
                self.joints[a][b] += o.joints[a][b];
            }
        }
        self.stokes_only += o.stokes_only;
    }
}

/// Per-source tallies of a simulated run in one basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountsTable {
    pub basis: PolarizationBasis,
    pub sources: Vec<SourceCounts>,
    pub cycles: u64,
    pub trials: u64,
}

impl CountsTable {
    pub fn new(basis: PolarizationBasis, m: usize) -> Self {
        Self { basis, sources: vec![SourceCounts::default(); m], cycles: 0, trials: 0 }
    }

    pub fn merge(&mut self, other: &Self) {
        debug_assert_eq!(self.sources.len(), other.sources.len());
        for (a, b) in self.sources.iter_mut().zip(&other.sources) {
            a.add(b);
        }
        self.cycles += other.cycles;
        self.trials += other.trials;
    }

    pub fn pooled(&self) -> SourceCounts {
        let mut p = SourceCounts::default();
        for s in &self.sources {
            p.add(s);
        }
        p
    }

    pub fn fired(&self) -> u64 {
        self.sources.iter().map(SourceCounts::fired).sum()
    }
}
