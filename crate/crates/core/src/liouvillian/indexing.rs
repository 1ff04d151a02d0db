use crate::configuration::SolventConfig;

/// Flat indexing of the config-diagonal excited sector and the ground sector.
///
/// Element ⟨e_m|ρ|e_n⟩ of configuration P (0-based m, n) lives at
/// `P·(N+1)² + m·(N+1) + n`; the ground population of P lives at `P`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SectorIndexing {
    n: usize,
}

impl SectorIndexing {
    pub fn new(n: usize) -> Self {
        SectorIndexing { n }
    }

    pub fn n_molecules(&self) -> usize {
        self.n
    }

    /// N + 1 (sites plus photon).
    pub fn sites(&self) -> usize {
        self.n + 1
    }

    pub fn photon(&self) -> usize {
        self.n
    }

    pub fn block_len(&self) -> usize {
        self.sites() * self.sites()
    }

    pub fn configs(&self) -> usize {
        1 << self.n
    }

    pub fn excited_dim(&self) -> usize {
        self.block_len() * self.configs()
    }

    pub fn ground_dim(&self) -> usize {
        self.configs()
    }

    #[inline]
    pub fn excited(&self, m: usize, n: usize, config: usize) -> usize {
        debug_assert!(m < self.sites() && n < self.sites() && config < self.configs());
        config * self.block_len() + m * self.sites() + n
    }

    /// Inverse of [`Self::excited`]: (m, n, config).
    pub fn decompose(&self, u: usize) -> (usize, usize, usize) {
        let config = u / self.block_len();
        let rem = u % self.block_len();
        (rem / self.sites(), rem % self.sites(), config)
    }

    pub fn config(&self, index: usize) -> SolventConfig {
        SolventConfig::from_index(index, self.n).expect("index within range")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        let ix = SectorIndexing::new(3);
        assert_eq!(ix.excited_dim(), 128);
        assert_eq!(ix.ground_dim(), 8);
        assert_eq!(SectorIndexing::new(1).excited_dim(), 8);
    }

    #[test]
    fn bijective() {
        let ix = SectorIndexing::new(3);
        let mut seen = vec![false; ix.excited_dim()];
        for p in 0..ix.configs() {
            for m in 0..ix.sites() {
                for n in 0..ix.sites() {
                    let u = ix.excited(m, n, p);
                    assert!(!seen[u]);
                    seen[u] = true;
                    assert_eq!(ix.decompose(u), (m, n, p));
                }
            }
        }
        assert!(seen.iter().all(|&s| s));
    }
}
