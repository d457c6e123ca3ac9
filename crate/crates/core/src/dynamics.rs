//! Exact dephasing of the infinite-range Heisenberg model under a collective
//! bosonic bath coupled through `L = Σ Sᶻ`.
//!
//! In a basis `|n⟩` diagonalizing both `H` and `L` the non-Markovian master
//! equation is solved elementwise:
//!
//! `ρ_nm(t) = exp(−i[(E_n − E_m)t + (l_n² − l_m²)Y(t)] − (l_n − l_m)² X(t)) ρ_nm(0)`
//!
//! with `ρ_nm = ⟨n|ρ|m⟩`, `X = ∫₀ᵗ F_R`, `Y = ∫₀ᵗ F_I` and `F(t) = ∫₀ᵗ α(u) du`.

use crate::entanglement::entropy_vn;
use crate::error::{Error, Result};
use crate::irhm::irhm_model;
use crate::linalg::{degenerate_groups, symmetric_eigen, C64};
use crate::spin::{sz_of, PureState, SectorBasis};
use crate::valence_bond::singlet_count;
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Largest site count for dense density-matrix evolution.
pub const MAX_DYNAMICS_SITES: usize = 10;

/// Energies closer than this are treated as degenerate.
pub const ENERGY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BathMode {
    pub g: f64,
    pub omega: f64,
}

/// Discrete bosonic bath at temperature `T` (`k_B = 1`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BathSpec {
    pub temperature: f64,
    pub modes: Vec<BathMode>,
}

impl BathSpec {
    pub fn new(temperature: f64, modes: Vec<BathMode>) -> Result<Self> {
        let spec = Self { temperature, modes };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.temperature >= 0.0) || !self.temperature.is_finite() {
            return Err(Error::Domain(format!("temperature must be finite and ≥ 0 (got {})", self.temperature)));
        }
        for m in &self.modes {
            if !(m.omega > 0.0) || !m.omega.is_finite() || !m.g.is_finite() {
                return Err(Error::Domain(format!("mode needs finite g and ω > 0 (got g={}, ω={})", m.g, m.omega)));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    /// `coth(ω/2T)`, equal to 1 at `T = 0`.
    pub fn thermal_factor(&self, omega: f64) -> f64 {
        if self.temperature == 0.0 {
            1.0
        } else {
            1.0 / (omega / (2.0 * self.temperature)).tanh()
        }
    }

    fn max_omega(&self) -> f64 {
        self.modes.iter().map(|m| m.omega).fold(0.0, f64::max)
    }

    /// `X(t) = Σ g² coth(ω/2T)(1 − cos ωt)/ω²`.
    pub fn x_closed_form(&self, t: f64) -> f64 {
        self.modes.iter().map(|m| m.g * m.g * self.thermal_factor(m.omega) * (1.0 - (m.omega * t).cos()) / (m.omega * m.omega)).sum()
    }

    /// `Y(t) = −Σ g² (ωt − sin ωt)/ω²`.
    pub fn y_closed_form(&self, t: f64) -> f64 {
        -self.modes.iter().map(|m| m.g * m.g * (m.omega * t - (m.omega * t).sin()) / (m.omega * m.omega)).sum::<f64>()
    }

    /// `F(t) = ∫₀ᵗ α(u) du` in closed form.
    pub fn f_closed_form(&self, t: f64) -> C64 {
        self.modes
            .iter()
            .map(|m| {
                let w = m.omega;
                m.g * m.g * C64::new(self.thermal_factor(w) * (w * t).sin() / w, ((w * t).cos() - 1.0) / w)
            })
            .sum()
    }
}

/// `α(τ) = η(τ) + iν(τ)` with `η = Σ g² coth(ω/2T) cos ωτ` and
/// `ν = −Σ g² sin ωτ`.
pub fn bath_correlation(spec: &BathSpec, tau: f64) -> Result<C64> {
    spec.validate()?;
    if !(tau >= 0.0) {
        return Err(Error::Domain(format!("τ must be ≥ 0 (got {tau})")));
    }
    Ok(correlation(spec, tau))
}

fn correlation(spec: &BathSpec, tau: f64) -> C64 {
    spec.modes
        .iter()
        .map(|m| {
            let (s, c) = (m.omega * tau).sin_cos();
            m.g * m.g * C64::new(spec.thermal_factor(m.omega) * c, -s)
        })
        .sum()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DephasingFunctions {
    pub time_grid: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl DephasingFunctions {
    /// `(X, Y)` at `t`, linearly interpolated between grid points.
    pub fn at(&self, t: f64) -> Result<(f64, f64)> {
        let grid = &self.time_grid;
        let last = *grid.last().ok_or_else(|| Error::InvalidArgument("empty time grid".into()))?;
        if t < grid[0] || t > last {
            return Err(Error::Domain(format!("t = {t} outside [{}, {last}]", grid[0])));
        }
        let k = grid.partition_point(|&s| s < t);
        if k < grid.len() && grid[k] == t {
            return Ok((self.x[k], self.y[k]));
        }
        let w = (t - grid[k - 1]) / (grid[k] - grid[k - 1]);
        Ok((self.x[k - 1] + w * (self.x[k] - self.x[k - 1]), self.y[k - 1] + w * (self.y[k] - self.y[k - 1])))
    }
}

/// Internal quadrature step: fine enough to resolve the fastest mode.
fn quadrature_step(spec: &BathSpec) -> f64 {
    let w = spec.max_omega();
    if w == 0.0 {
        0.01
    } else {
        0.01f64.min(2.0 * std::f64::consts::PI / (400.0 * w))
    }
}

/// Integrates `α` twice on `time_grid` (which must start at 0 and increase).
///
/// Each grid interval is split into equal sub-steps no longer than
/// `min(0.01, 2π/(400 ω_max))`. On a sub-step `F` advances by Simpson's rule
/// on `α`, and `X + iY` by Simpson's rule on `F`, whose midpoint value comes
/// from a second Simpson rule on the first half of the sub-step.
pub fn xy_functions(spec: &BathSpec, time_grid: &[f64]) -> Result<DephasingFunctions> {
    spec.validate()?;
    if time_grid.first() != Some(&0.0) {
        return Err(Error::InvalidArgument("time grid must start at 0".into()));
    }
    if time_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("time grid must be strictly increasing".into()));
    }
    let h_max = quadrature_step(spec);
    let alpha = |t: f64| correlation(spec, t);
    let mut f = C64::new(0.0, 0.0);
    let mut xy = C64::new(0.0, 0.0);
    let (mut x, mut y) = (vec![0.0], vec![0.0]);
    for w in time_grid.windows(2) {
        let steps = ((w[1] - w[0]) / h_max).ceil().max(1.0) as usize;
        let h = (w[1] - w[0]) / steps as f64;
        for k in 0..steps {
            let t0 = w[0] + k as f64 * h;
            let a = [0.0, 0.25, 0.5, 0.75, 1.0].map(|s| alpha(t0 + s * h));
            let f_mid = f + (a[0] + a[1] * 4.0 + a[2]) * (h / 12.0);
            let f_end = f + (a[0] + a[2] * 4.0 + a[4]) * (h / 6.0);
            xy += (f + f_mid * 4.0 + f_end) * (h / 6.0);
            f = f_end;
        }
        x.push(xy.re);
        y.push(xy.im);
    }
    Ok(DephasingFunctions { time_grid: time_grid.to_vec(), x, y })
}

/// A density matrix in a simultaneous eigenbasis of `H_IRHM` and `Σ Sᶻ`.
#[derive(Clone, Debug)]
pub struct EigenLabeledState {
    pub n_sites: usize,
    /// Columns are the eigenvectors in the z basis.
    pub vectors: DMatrix<C64>,
    pub energies: Vec<f64>,
    /// `Σ Sᶻ` eigenvalues.
    pub labels: Vec<f64>,
    /// `ρ_nm = ⟨n|ρ|m⟩`.
    pub rho: DMatrix<C64>,
    /// `‖[Σ Sᶻ, H]‖_F`, checked to vanish before any evolution.
    pub coupling_commutator: f64,
}

fn check_dynamics_sites(n_sites: usize) -> Result<()> {
    if n_sites == 0 || n_sites > MAX_DYNAMICS_SITES {
        return Err(Error::InvalidSiteCount { n_sites, reason: "dynamics supports 1..=10 sites" });
    }
    Ok(())
}

/// Eigenvectors, energies and `Σ Sᶻ` labels, diagonalizing `H` sector by
/// sector so every label is exact. Ordered by sector, then energy.
fn labeled_eigenbasis(n_sites: usize, j: f64) -> (DMatrix<C64>, Vec<f64>, Vec<f64>) {
    let dim = 1 << n_sites;
    let model = irhm_model(n_sites, j);
    let mut vectors = DMatrix::<C64>::zeros(dim, dim);
    let (mut energies, mut labels) = (Vec::with_capacity(dim), Vec::with_capacity(dim));
    let mut col = 0;
    for sector in SectorBasis::all(n_sites) {
        let (mut values, vecs) = symmetric_eigen(&model.sector_block(&sector));
        // Degenerate levels share one energy so coherences inside them are
        // left exactly unchanged.
        let vals: Vec<f64> = values.iter().copied().collect();
        for g in degenerate_groups(&vals, ENERGY_TOL) {
            let mean = vals[g.clone()].iter().sum::<f64>() / g.len() as f64;
            values.rows_mut(g.start, g.len()).fill(mean);
        }
        for k in 0..sector.dim() {
            for (r, &s) in sector.states().iter().enumerate() {
                vectors[(s, col)] = C64::new(vecs[(r, k)], 0.0);
            }
            energies.push(values[k]);
            labels.push(sector.sz());
            col += 1;
        }
    }
    (vectors, energies, labels)
}

impl EigenLabeledState {
    /// Wraps a z-basis density matrix.
    pub fn from_density(n_sites: usize, j: f64, rho_z: &DMatrix<C64>) -> Result<Self> {
        check_dynamics_sites(n_sites)?;
        let dim = 1 << n_sites;
        if rho_z.nrows() != dim || rho_z.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: rho_z.nrows() });
        }
        let h = irhm_model(n_sites, j).dense();
        // Σ Sᶻ is diagonal, so [L, H]_ab = (l_a − l_b) H_ab.
        let total_sz = |s: usize| (0..n_sites).map(|k| sz_of(s, k)).sum::<f64>();
        let coupling_commutator = h
            .iter()
            .enumerate()
            .map(|(idx, &v)| ((total_sz(idx % dim) - total_sz(idx / dim)) * v).powi(2))
            .sum::<f64>()
            .sqrt();
        if coupling_commutator > 1e-12 {
            return Err(Error::InvalidArgument(format!("[L, H] = {coupling_commutator:e} does not vanish")));
        }
        let (vectors, energies, labels) = labeled_eigenbasis(n_sites, j);
        let rho = vectors.adjoint() * rho_z * &vectors;
        Ok(Self { n_sites, vectors, energies, labels, rho, coupling_commutator })
    }

    pub fn from_pure(state: &PureState, j: f64) -> Result<Self> {
        Self::from_density(state.n_sites(), j, &state.density_matrix())
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// Largest off-diagonal entry of `V†HV` and `V†LV`, and `‖V†V − 1‖`.
    pub fn basis_defect(&self, j: f64) -> f64 {
        let h = crate::linalg::to_complex(&irhm_model(self.n_sites, j).dense());
        let dim = self.dim();
        let hv = self.vectors.adjoint() * h * &self.vectors;
        let gram = self.vectors.adjoint() * &self.vectors;
        let mut worst = (gram - DMatrix::<C64>::identity(dim, dim)).camax();
        for a in 0..dim {
            for b in 0..dim {
                if a != b {
                    worst = worst.max(hv[(a, b)].norm());
                }
            }
        }
        // L is diagonal in z, and each column lives in one sector.
        for (c, &l) in self.labels.iter().enumerate() {
            for s in 0..dim {
                let amp = self.vectors[(s, c)].norm();
                if amp > 0.0 {
                    let sz: f64 = (0..self.n_sites).map(|k| sz_of(s, k)).sum();
                    worst = worst.max(if sz == l { 0.0 } else { amp });
                }
            }
        }
        worst
    }

    /// `ρ` back in the z basis.
    pub fn to_z_basis(&self, rho: &DMatrix<C64>) -> DMatrix<C64> {
        &self.vectors * rho * self.vectors.adjoint()
    }
}

/// Applies the elementwise solution with given `X(t)`, `Y(t)`.
pub fn evolve_with(state: &EigenLabeledState, t: f64, x: f64, y: f64) -> DMatrix<C64> {
    let (e, l) = (&state.energies, &state.labels);
    DMatrix::from_fn(state.dim(), state.dim(), |n, m| {
        let phase = (e[n] - e[m]) * t + (l[n] * l[n] - l[m] * l[m]) * y;
        let decay = (l[n] - l[m]).powi(2) * x;
        state.rho[(n, m)] * C64::new(-decay, -phase).exp()
    })
}

/// `ρ(t)` in the eigenbasis; `X`, `Y` are interpolated linearly when `t` is
/// between grid points.
pub fn evolve(state: &EigenLabeledState, funcs: &DephasingFunctions, t: f64) -> Result<DMatrix<C64>> {
    let (x, y) = funcs.at(t)?;
    Ok(evolve_with(state, t, x, y))
}

/// A set of eigenvectors sharing `(E, l)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DfsBlock {
    pub energy: f64,
    pub sz: f64,
    /// Columns of the labelled eigenbasis.
    pub indices: Vec<usize>,
}

/// Groups the labelled eigenbasis into `(E, l)` blocks; coherences inside a
/// block never evolve.
pub fn dfs_blocks(n_sites: usize, j: f64) -> Result<Vec<DfsBlock>> {
    check_dynamics_sites(n_sites)?;
    let (_, energies, labels) = labeled_eigenbasis(n_sites, j);
    let mut blocks = Vec::new();
    let mut start = 0;
    while start < labels.len() {
        let end = start + labels[start..].iter().take_while(|&&l| l == labels[start]).count();
        for g in degenerate_groups(&energies[start..end], ENERGY_TOL) {
            let indices: Vec<usize> = (start + g.start..start + g.end).collect();
            blocks.push(DfsBlock { energy: energies[indices[0]], sz: labels[start], indices });
        }
        start = end;
    }
    Ok(blocks)
}

/// The decoherence-free block containing the ground manifold (`S = 0`,
/// `Σ Sᶻ = 0`) for `J = 1/(N − 1)`.
pub fn dfs_subspace(n_sites: usize) -> Result<DfsBlock> {
    if n_sites % 2 == 1 || n_sites < 2 || n_sites > MAX_DYNAMICS_SITES {
        return Err(Error::InvalidSiteCount { n_sites, reason: "DFS search needs an even count up to 10" });
    }
    let j = crate::irhm::default_coupling(n_sites);
    let block = dfs_blocks(n_sites, j)?
        .into_iter()
        .filter(|b| b.sz == 0.0)
        .min_by(|a, b| a.energy.total_cmp(&b.energy))
        .expect("zero-magnetization sector exists");
    debug_assert_eq!(block.indices.len() as u128, singlet_count(n_sites));
    Ok(block)
}

/// Two-site reduced density matrix of a z-basis density matrix (local bit 0
/// is site `i`, bit 1 is site `j`).
pub fn pair_rdm(rho: &DMatrix<C64>, n_sites: usize, i: usize, j: usize) -> DMatrix<C64> {
    let mask = (1usize << i) | (1 << j);
    let local = |s: usize| (s >> i & 1) | (s >> j & 1) << 1;
    let embed = |rest: usize, loc: usize| rest | (loc & 1) << i | (loc >> 1) << j;
    let mut out = DMatrix::<C64>::zeros(4, 4);
    for a in 0..1usize << n_sites {
        let rest = a & !mask;
        for lb in 0..4 {
            out[(local(a), lb)] += rho[(a, embed(rest, lb))];
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub t: f64,
    #[serde(rename = "X")]
    pub x: f64,
    #[serde(rename = "Y")]
    pub y: f64,
    #[serde(rename = "E2v")]
    pub e2v: f64,
    /// `max_{i<j} max |ρ_ij(t) − ρ_ij(0)|`.
    pub max_rdm_deviation: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RobustnessReport {
    pub n_sites: usize,
    pub max_deviation: f64,
    pub e2v_initial: f64,
    pub max_e2v_drift: f64,
    pub trajectory: Vec<TrajectoryPoint>,
}

fn pair_rdms(rho: &DMatrix<C64>, n: usize) -> Vec<DMatrix<C64>> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| pair_rdm(rho, n, i, j)).collect()
}

/// Evolves a pure state under the bath and tracks every pair density matrix
/// and the average pair entropy on `times` (which must start at 0).
///
/// States outside a single `(E, l)` block are evolved the same way; their
/// deviation is reported rather than rejected.
pub fn rdm_robustness(state: &PureState, spec: &BathSpec, times: &[f64], j: f64) -> Result<RobustnessReport> {
    let n = state.n_sites();
    if n < 2 {
        return Err(Error::InvalidSiteCount { n_sites: n, reason: "pair quantities need two sites" });
    }
    let labeled = EigenLabeledState::from_pure(&state.clone().normalized()?, j)?;
    let funcs = xy_functions(spec, times)?;
    let initial = pair_rdms(&labeled.to_z_basis(&labeled.rho), n);
    let e2v_of = |rdms: &[DMatrix<C64>]| -> Result<f64> {
        Ok(rdms.iter().map(entropy_vn).sum::<Result<f64>>()? / rdms.len() as f64)
    };
    let e2v_initial = e2v_of(&initial)?;
    let trajectory: Vec<TrajectoryPoint> = times
        .par_iter()
        .enumerate()
        .map(|(k, &t)| {
            let rho = labeled.to_z_basis(&evolve_with(&labeled, t, funcs.x[k], funcs.y[k]));
            let rdms = pair_rdms(&rho, n);
            let dev = rdms.iter().zip(&initial).map(|(a, b)| (a - b).camax()).fold(0.0, f64::max);
            Ok(TrajectoryPoint { t, x: funcs.x[k], y: funcs.y[k], e2v: e2v_of(&rdms)?, max_rdm_deviation: dev })
        })
        .collect::<Result<_>>()?;
    let max_deviation = trajectory.iter().map(|p| p.max_rdm_deviation).fold(0.0, f64::max);
    let max_e2v_drift = trajectory.iter().map(|p| (p.e2v - e2v_initial).abs()).fold(0.0, f64::max);
    Ok(RobustnessReport { n_sites: n, max_deviation, e2v_initial, max_e2v_drift, trajectory })
}

/// Uniform grid `0, dt, 2dt, …` up to and including `t_max`.
pub fn uniform_grid(t_max: f64, dt: f64) -> Result<Vec<f64>> {
    if !(dt > 0.0) || !(t_max >= 0.0) || !t_max.is_finite() {
        return Err(Error::InvalidArgument(format!("need dt > 0 and finite t_max ≥ 0 (got {dt}, {t_max})")));
    }
    let steps = (t_max / dt - 1e-9).ceil().max(0.0) as usize;
    Ok((0..=steps).map(|k| (k as f64 * dt).min(t_max)).collect())
}
