//! The infinite-range Heisenberg model `J Σ_{i<j} S_i·S_j`.
//!
//! Its spectrum depends on the total spin only, so every singlet covering
//! is a ground state and any superposition of them can be used to build
//! homogeneous, maximally entangled states.

mod homogenize;
mod named;

pub use homogenize::{homogenize, HomogenizeConfig, HomogenizedState};
pub use named::{build_named_state, named_state_superposition, named_state_with_root, NamedState};

use crate::error::{Error, Result};
use crate::linalg::{symmetric_eigen, C64};
use crate::spin::{total_spin_operator, OperatorMatrix, PureState, SectorBasis, SpinOp, XxzModel};
use crate::valence_bond::{dimer_state, singlet_count, DimerCovering};
use serde::Serialize;

/// Largest chain accepted by the dense spectrum check.
pub const MAX_SPECTRUM_SITES: usize = 12;

/// Default exchange `J = J*/(N − 1)` with `J* = 1`.
pub fn default_coupling(n_sites: usize) -> f64 {
    1.0 / (n_sites as f64 - 1.0).max(1.0)
}

pub fn irhm_model(n_sites: usize, j: f64) -> XxzModel {
    XxzModel::all_to_all(n_sites, j, j)
}

pub fn irhm_hamiltonian(n_sites: usize, j: f64) -> OperatorMatrix {
    irhm_model(n_sites, j).operator(format!("IRHM N={n_sites} J={j}"))
}

/// `(J/2)[S(S + 1) − 3N/4]`.
pub fn level_energy(n_sites: usize, j: f64, total_spin: f64) -> f64 {
    0.5 * j * (total_spin * (total_spin + 1.0) - 0.75 * n_sites as f64)
}

/// `S²_total = (Σ Sˣ)² + (Σ Sʸ)² + (Σ Sᶻ)²` built from dense products.
pub fn total_spin_squared(n_sites: usize) -> OperatorMatrix {
    let m = [SpinOp::X, SpinOp::Y, SpinOp::Z]
        .iter()
        .map(|&op| {
            let s = total_spin_operator(op, n_sites).matrix;
            &s * &s
        })
        .reduce(|a, b| a + b)
        .expect("three components");
    OperatorMatrix::new(m, "S²_total")
}

#[derive(Clone, Debug, Serialize)]
pub struct SpinLevel {
    pub total_spin: f64,
    pub energy: f64,
    pub degeneracy: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct IrhmSpectrum {
    pub n_sites: usize,
    pub coupling: f64,
    pub levels: Vec<SpinLevel>,
    /// Largest distance of a numerical eigenvalue from its assigned level.
    pub max_deviation: f64,
}

impl IrhmSpectrum {
    pub fn degeneracy(&self, total_spin: f64) -> usize {
        self.levels
            .iter()
            .find(|l| (l.total_spin - total_spin).abs() < 1e-9)
            .map_or(0, |l| l.degeneracy)
    }

    pub fn total_dimension(&self) -> usize {
        self.levels.iter().map(|l| l.degeneracy).sum()
    }
}

/// Diagonalizes every `Σ Sᶻ` block and assigns each eigenvalue to a total spin.
pub fn spectrum_check(n_sites: usize, j: f64) -> Result<IrhmSpectrum> {
    if n_sites < 2 || n_sites > MAX_SPECTRUM_SITES {
        return Err(Error::InvalidSiteCount { n_sites, reason: "spectrum check needs 2 ≤ N ≤ 12" });
    }
    if j == 0.0 {
        return Err(Error::InvalidArgument("coupling must be nonzero".into()));
    }
    let model = irhm_model(n_sites, j);
    let half_odd = n_sites % 2 == 1;
    let max_spin = n_sites / 2;
    let spins: Vec<f64> = (0..=max_spin)
        .map(|k| if half_odd { k as f64 + 0.5 } else { k as f64 })
        .filter(|&s| s <= n_sites as f64 / 2.0)
        .collect();
    let mut counts = vec![0usize; spins.len()];
    let mut max_deviation = 0.0f64;
    for sector in SectorBasis::all(n_sites) {
        let (values, _) = symmetric_eigen(&model.sector_block(&sector));
        for &e in values.iter() {
            let (k, dev) = spins
                .iter()
                .enumerate()
                .map(|(k, &s)| (k, (e - level_energy(n_sites, j, s)).abs()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("nonempty spin list");
            if dev > 1e-9 {
                return Err(Error::InvalidArgument(format!(
                    "eigenvalue {e} matches no total-spin level (closest off by {dev:e})"
                )));
            }
            max_deviation = max_deviation.max(dev);
            counts[k] += 1;
        }
    }
    let levels = spins
        .iter()
        .zip(counts)
        .filter(|(_, c)| *c > 0)
        .map(|(&s, c)| SpinLevel { total_spin: s, energy: level_energy(n_sites, j, s), degeneracy: c })
        .collect();
    Ok(IrhmSpectrum { n_sites, coupling: j, levels, max_deviation })
}

/// Number of linearly independent singlets, i.e. the ground degeneracy.
pub fn expected_ground_degeneracy(n_sites: usize) -> usize {
    singlet_count(n_sites) as usize
}

/// `‖H|cov⟩ − E₀|cov⟩‖` with `E₀` the singlet energy.
pub fn dimer_eigencheck(cov: &DimerCovering, n_sites: usize, j: f64) -> Result<f64> {
    let state = dimer_state(cov, n_sites)?;
    let image = irhm_model(n_sites, j).apply(&state)?;
    let e0 = level_energy(n_sites, j, 0.0);
    Ok((image.amplitudes() - state.amplitudes() * C64::new(e0, 0.0)).norm())
}

/// `‖[S₀·S₂ + S₁·S₃ + S₀·S₃ + S₁·S₂] |Φ₀₁⟩|Φ₂₃⟩‖` for four sites.
pub fn four_site_annihilation_residual() -> Result<f64> {
    let model = XxzModel::new(4).bond(0, 2, 1.0, 1.0).bond(1, 3, 1.0, 1.0).bond(0, 3, 1.0, 1.0).bond(1, 2, 1.0, 1.0);
    let state = dimer_state(&DimerCovering::new(vec![(0, 1), (2, 3)], 4)?, 4)?;
    Ok(model.apply(&state)?.norm())
}

/// Nearest-neighbour Heisenberg ring.
pub fn heisenberg_ring(n_sites: usize, j: f64) -> XxzModel {
    let mut m = XxzModel::new(n_sites);
    for i in 0..n_sites {
        m = m.bond(i, (i + 1) % n_sites, j, j);
    }
    m
}

/// Lowest eigenvalue and one eigenvector of an `Sᶻ`-conserving model.
pub fn ground_state(model: &XxzModel) -> Result<(f64, PureState)> {
    let mut best: Option<(f64, PureState)> = None;
    for sector in SectorBasis::all(model.n_sites) {
        let (values, vectors) = symmetric_eigen(&model.sector_block(&sector));
        let e = values[0];
        if best.as_ref().is_none_or(|(b, _)| e < *b - 1e-12) {
            let mut amps = vec![C64::new(0.0, 0.0); 1 << model.n_sites];
            for (k, &s) in sector.states().iter().enumerate() {
                amps[s] = C64::new(vectors[(k, 0)], 0.0);
            }
            best = Some((e, PureState::from_amplitudes(model.n_sites, amps)?));
        }
    }
    best.ok_or_else(|| Error::InvalidArgument("empty model".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{commutator_norm, hermitian_eigenvalues};
    use crate::spin::correlations;
    use crate::valence_bond::all_coverings;

    #[test]
    fn two_site_levels() {
        let h = irhm_hamiltonian(2, 1.0);
        let eig = hermitian_eigenvalues(&h.matrix);
        let expected = [-0.75, 0.25, 0.25, 0.25];
        for (a, b) in eig.iter().zip(expected) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn four_site_spectrum() {
        let s = spectrum_check(4, 1.0).unwrap();
        assert_eq!(s.degeneracy(0.0), 2);
        assert_eq!(s.degeneracy(1.0), 9);
        assert_eq!(s.degeneracy(2.0), 5);
        assert_eq!(s.total_dimension(), 16);
        assert!((s.levels[0].energy + 1.5).abs() < 1e-15);
    }

    #[test]
    fn odd_chain_spectrum() {
        let s = spectrum_check(5, 0.7).unwrap();
        assert_eq!(s.total_dimension(), 32);
        // 5 spins: S=1/2 ×5 multiplets, S=3/2 ×4, S=5/2 ×1
        assert_eq!(s.degeneracy(0.5), 10);
        assert_eq!(s.degeneracy(1.5), 16);
        assert_eq!(s.degeneracy(2.5), 6);
    }

    #[test]
    fn spectrum_guards() {
        assert!(spectrum_check(13, 1.0).is_err());
        assert!(spectrum_check(4, 0.0).is_err());
    }

    #[test]
    fn casimir_rewriting() {
        for n in [2, 3, 4, 5] {
            let j = 0.6;
            let h = irhm_hamiltonian(n, j).matrix;
            let s2 = total_spin_squared(n).matrix;
            let shift = nalgebra::DMatrix::<C64>::identity(1 << n, 1 << n) * C64::new(0.75 * n as f64, 0.0);
            let rhs = (s2.clone() - shift) * C64::new(0.5 * j, 0.0);
            assert!((&h - rhs).norm() < 1e-12);
            assert!(commutator_norm(&h, &s2) < 1e-12);
            assert!(commutator_norm(&h, &total_spin_operator(SpinOp::Z, n).matrix) < 1e-12);
        }
    }

    #[test]
    fn every_covering_is_a_ground_state() {
        for n in [2, 4, 6] {
            for cov in all_coverings(n).unwrap() {
                assert!(dimer_eigencheck(&cov, n, 1.0).unwrap() < 1e-12);
            }
        }
        assert!(four_site_annihilation_residual().unwrap() < 1e-14);
    }

    #[test]
    fn ring_ground_state_correlation() {
        let (e, gs) = ground_state(&heisenberg_ring(4, 1.0)).unwrap();
        assert!((e + 2.0).abs() < 1e-12);
        let c = correlations(&gs);
        assert!((c.czz[(0, 1)] + 1.0 / 6.0).abs() < 1e-10);
    }
}
