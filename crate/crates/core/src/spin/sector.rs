use std::collections::HashMap;

/// Basis states of fixed total `S^z`, i.e. fixed number of up spins.
#[derive(Clone, Debug)]
pub struct SectorBasis {
    n_sites: usize,
    up_count: usize,
    states: Vec<usize>,
    index: HashMap<usize, usize>,
}

impl SectorBasis {
    pub fn new(n_sites: usize, up_count: usize) -> Self {
        let states: Vec<usize> = (0..1usize << n_sites)
            .filter(|s| s.count_ones() as usize == up_count)
            .collect();
        let index = states.iter().enumerate().map(|(k, &s)| (s, k)).collect();
        Self { n_sites, up_count, states, index }
    }

    /// All sectors from `S^z = -N/2` upwards.
    pub fn all(n_sites: usize) -> Vec<Self> {
        (0..=n_sites).map(|k| Self::new(n_sites, k)).collect()
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn up_count(&self) -> usize {
        self.up_count
    }

    pub fn sz(&self) -> f64 {
        self.up_count as f64 - self.n_sites as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[usize] {
        &self.states
    }

    pub fn position(&self, state: usize) -> Option<usize> {
        self.index.get(&state).copied()
    }
}
