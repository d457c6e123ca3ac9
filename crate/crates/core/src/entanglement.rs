//! Two-site entanglement measures and the homogeneous maximum.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, C64};
use crate::spin::{partial_trace, PureState, SpinCorrelations};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Eigenvalues in `[-PSD_TOL, 0]` are treated as numerical zeros.
pub const PSD_TOL: f64 = 1e-12;

/// Normalizer of the pair i-concurrence: `sqrt(2(1 − 1/4))`.
pub fn iconcurrence_max() -> f64 {
    1.5f64.sqrt()
}

fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Von Neumann entropy in bits of a density matrix.
pub fn entropy_vn(rho: &DMatrix<C64>) -> Result<f64> {
    let eig = hermitian_eigenvalues(rho);
    if let Some(&min) = eig.first() {
        if min < -PSD_TOL {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue: min });
        }
    }
    Ok(-eig.iter().map(|&x| xlog2x(x.max(0.0))).sum::<f64>())
}

/// Entropy of the isotropic two-site density matrix with `⟨SᶻSᶻ⟩ = czz`:
/// `2 − ¼[3(1+4c)log₂(1+4c) + (1−12c)log₂(1−12c)]`.
pub fn entropy_isotropic_closed_form(czz: f64) -> Result<f64> {
    let a = 1.0 + 4.0 * czz;
    let b = 1.0 - 12.0 * czz;
    if a < -PSD_TOL || b < -PSD_TOL {
        return Err(Error::Domain(format!("czz = {czz} outside [-1/4, 1/12]")));
    }
    Ok(2.0 - 0.25 * (3.0 * xlog2x(a.max(0.0)) + xlog2x(b.max(0.0))))
}

/// Derivative of the isotropic pair entropy, `3 log₂[(1 − 12c)/(1 + 4c)]`.
pub fn entropy_isotropic_slope(czz: f64) -> f64 {
    3.0 * ((1.0 - 12.0 * czz) / (1.0 + 4.0 * czz)).log2()
}

/// Second derivative of the isotropic pair entropy (always negative).
pub fn entropy_isotropic_curvature(czz: f64) -> f64 {
    -3.0 / std::f64::consts::LN_2 * (12.0 / (1.0 - 12.0 * czz) + 4.0 / (1.0 + 4.0 * czz))
}

/// Two-site density matrix of an `S^z`-conserving state assembled from its
/// correlations (local bit 0 is site `i`, bit 1 is site `j`).
pub fn rdm_from_correlations(corr: &SpinCorrelations, i: usize, j: usize) -> DMatrix<C64> {
    let zz = corr.czz[(i, j)];
    let (zi, zj) = (corr.sz[i], corr.sz[j]);
    let mut rho = DMatrix::<C64>::zeros(4, 4);
    // local index = b_i + 2 b_j with b = 1 for up
    rho[(0, 0)] = C64::new(0.25 + zz - 0.5 * (zi + zj), 0.0);
    rho[(1, 1)] = C64::new(0.25 - zz + 0.5 * (zi - zj), 0.0);
    rho[(2, 2)] = C64::new(0.25 - zz - 0.5 * (zi - zj), 0.0);
    rho[(3, 3)] = C64::new(0.25 + zz + 0.5 * (zi + zj), 0.0);
    // ρ[↓↑, ↑↓] = ⟨S⁺_i S⁻_j⟩
    rho[(2, 1)] = corr.cpm[(i, j)];
    rho[(1, 2)] = corr.cpm[(i, j)].conj();
    rho
}

/// Isotropic form with `⟨S⁺S⁻⟩ = 2 czz` and vanishing magnetization.
pub fn isotropic_rdm(czz: f64) -> DMatrix<C64> {
    let mut rho = DMatrix::<C64>::zeros(4, 4);
    for k in [0, 3] {
        rho[(k, k)] = C64::new(0.25 + czz, 0.0);
    }
    for k in [1, 2] {
        rho[(k, k)] = C64::new(0.25 - czz, 0.0);
    }
    rho[(1, 2)] = C64::new(2.0 * czz, 0.0);
    rho[(2, 1)] = C64::new(2.0 * czz, 0.0);
    rho
}

/// Reduced state of one site pair.
#[derive(Clone, Debug)]
pub struct TwoQubitRdm {
    pub matrix: DMatrix<C64>,
    pub pair: (usize, usize),
    pub czz: f64,
    pub cpm: C64,
}

impl TwoQubitRdm {
    pub fn from_state(state: &PureState, i: usize, j: usize) -> Result<Self> {
        if i == j {
            return Err(Error::InvalidPartition("pair sites must differ".into()));
        }
        let matrix = partial_trace(state, &[i, j])?;
        // ⟨SᶻSᶻ⟩ and ⟨S⁺_i S⁻_j⟩ read back off the matrix
        let czz = 0.25 * (matrix[(0, 0)].re + matrix[(3, 3)].re - matrix[(1, 1)].re - matrix[(2, 2)].re);
        let cpm = matrix[(2, 1)];
        Ok(Self { matrix, pair: (i, j), czz, cpm })
    }

    pub fn from_matrix(matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() != 4 || matrix.ncols() != 4 {
            return Err(Error::DimensionMismatch { expected: 4, found: matrix.nrows() });
        }
        let czz = 0.25 * (matrix[(0, 0)].re + matrix[(3, 3)].re - matrix[(1, 1)].re - matrix[(2, 2)].re);
        let cpm = matrix[(2, 1)];
        Ok(Self { matrix, pair: (0, 1), czz, cpm })
    }

    pub fn entropy(&self) -> Result<f64> {
        entropy_vn(&self.matrix)
    }

    /// `⟨S_i · S_j⟩ = Tr(ρ S_i·S_j)`.
    pub fn heisenberg(&self) -> f64 {
        self.czz + self.cpm.re
    }

    /// Largest magnitude among entries forbidden by `S^z` conservation.
    pub fn corner_defect(&self) -> f64 {
        let m = &self.matrix;
        let mut worst = 0.0f64;
        for r in 0..4 {
            for c in 0..4 {
                let allowed = r == c || (r, c) == (1, 2) || (r, c) == (2, 1);
                if !allowed {
                    worst = worst.max(m[(r, c)].norm());
                }
            }
        }
        worst
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PairEntropy {
    pub i: usize,
    pub j: usize,
    pub entropy: f64,
    pub czz: f64,
}

/// Entropy of every unordered pair `i < j`.
pub fn pair_entropies(state: &PureState) -> Result<Vec<PairEntropy>> {
    let n = state.n_sites();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    pairs
        .par_iter()
        .map(|&(i, j)| {
            let rdm = TwoQubitRdm::from_state(state, i, j)?;
            Ok(PairEntropy { i, j, entropy: rdm.entropy()?, czz: rdm.czz })
        })
        .collect()
}

/// Average pair entropy `E²_v` over all pairs of a pure state.
pub fn e2v_average(state: &PureState) -> Result<f64> {
    let pairs = pair_entropies(state)?;
    Ok(pairs.iter().map(|p| p.entropy).sum::<f64>() / pairs.len() as f64)
}

/// `⟨SᶻSᶻ⟩` of a homogeneous singlet state, `−1/(4(N − 1))`.
pub fn homogeneous_czz(n_sites: usize) -> f64 {
    -0.25 / (n_sites as f64 - 1.0)
}

fn check_max_domain(n_sites: usize) -> Result<()> {
    if n_sites < 4 || n_sites % 2 == 1 {
        Err(Error::InvalidSiteCount { n_sites, reason: "needs an even count of at least 4" })
    } else {
        Ok(())
    }
}

/// Maximal average pair entropy over valence-bond states of `N` spins.
pub fn e2v_max(n_sites: usize) -> Result<f64> {
    check_max_domain(n_sites)?;
    let inv = 1.0 / (4.0 * (n_sites as f64 - 1.0));
    let a = 0.25 - inv;
    let b = 0.25 + 3.0 * inv;
    Ok(-3.0 * a * a.log2() - b * b.log2())
}

#[derive(Clone, Copy, Debug)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub seed: u64,
    pub gradient_tol: f64,
    pub max_iterations: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self { restarts: 10, seed: 0, gradient_tol: 1e-8, max_iterations: 200_000 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct E2vOptimum {
    pub n_sites: usize,
    /// Optimal correlations with `¼` on the diagonal.
    #[serde(skip)]
    pub czz: DMatrix<f64>,
    pub e2v: f64,
    /// Max minus min of the off-diagonal correlations.
    pub spread: f64,
    /// Lagrange multiplier per site at the optimum (the entropy slope).
    pub multipliers: Vec<f64>,
    pub gradient_norm: f64,
    pub restarts_converged: usize,
}

/// Maximizes `Σ_{i≠j} E_v(ρ_ij)` over the pair correlations subject to the
/// zero-magnetization sum rule `Σ_{j≠i} ⟨Sᶻ_i Sᶻ_j⟩ = −¼`.
///
/// Projected gradient ascent with Armijo backtracking from `restarts` random
/// feasible points; restarts run in parallel and are seeded individually.
pub fn maximize_e2v_numeric(n_sites: usize, cfg: &OptimizerConfig) -> Result<E2vOptimum> {
    check_max_domain(n_sites)?;
    let n = n_sites;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let p = pairs.len();
    let mut a = DMatrix::<f64>::zeros(n, p);
    for (k, &(i, j)) in pairs.iter().enumerate() {
        a[(i, k)] = 1.0;
        a[(j, k)] = 1.0;
    }
    let aat_inv = (&a * a.transpose())
        .try_inverse()
        .ok_or_else(|| Error::InvalidArgument("singular constraint system".into()))?;
    let proj = DMatrix::<f64>::identity(p, p) - a.transpose() * aat_inv * &a;
    let center = homogeneous_czz(n);
    let lower = -0.25;
    let upper = 1.0 / 12.0;
    let room = (center - lower).min(upper - center);

    let objective = |x: &DVector<f64>| -> f64 {
        2.0 * x.iter().map(|&c| entropy_isotropic_closed_form(c).unwrap_or(f64::NEG_INFINITY)).sum::<f64>()
    };
    let feasible = |x: &DVector<f64>| x.iter().all(|&c| c > lower && c < upper);

    let runs: Vec<(f64, DVector<f64>, f64)> = (0..cfg.restarts.max(1))
        .into_par_iter()
        .map(|restart| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(restart as u64));
            let noise = DVector::from_fn(p, |_, _| rng.gen_range(-1.0..1.0));
            let dir = &proj * noise;
            let scale = 0.9 * room * rng.gen_range(0.1..1.0) / dir.amax().max(f64::MIN_POSITIVE);
            let mut x = DVector::from_element(p, center) + dir * scale;
            let mut f = objective(&x);
            let mut gnorm = f64::INFINITY;
            for _ in 0..cfg.max_iterations {
                let grad = DVector::from_fn(p, |k, _| 2.0 * entropy_isotropic_slope(x[k]));
                gnorm = (&proj * &grad).norm();
                if gnorm < cfg.gradient_tol {
                    break;
                }
                // Newton step restricted to the constraint plane; the objective
                // is concave with a diagonal Hessian.
                let inv_h = DVector::from_fn(p, |k, _| 1.0 / (2.0 * entropy_isotropic_curvature(x[k])));
                let ahg = &a * inv_h.component_mul(&grad);
                let ahat = DMatrix::from_fn(n, n, |r, c| (0..p).map(|k| a[(r, k)] * inv_h[k] * a[(c, k)]).sum::<f64>());
                let Some(lambda) = ahat.lu().solve(&ahg) else { break };
                let dir = -inv_h.component_mul(&(&grad - a.transpose() * lambda));
                let mut t = 1.0;
                loop {
                    let trial = &x + &dir * t;
                    if feasible(&trial) {
                        let ft = objective(&trial);
                        if ft >= f - 1e-13 * (1.0 + f.abs()) {
                            x = trial;
                            f = ft;
                            break;
                        }
                    }
                    t *= 0.5;
                    if t < 1e-18 {
                        break;
                    }
                }
            }
            (f, x, gnorm)
        })
        .collect();

    let restarts_converged = runs.iter().filter(|r| r.2 < cfg.gradient_tol).count();
    let (f, x, gnorm) = runs
        .into_iter()
        .reduce(|best, r| if r.0 > best.0 { r } else { best })
        .expect("at least one restart");
    if !(gnorm < cfg.gradient_tol) {
        return Err(Error::NonConvergence { what: "pair-entropy maximization", residual: gnorm });
    }
    let mut czz = DMatrix::<f64>::from_element(n, n, 0.25);
    for (k, &(i, j)) in pairs.iter().enumerate() {
        czz[(i, j)] = x[k];
        czz[(j, i)] = x[k];
    }
    let (lo, hi) = x.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &c| (l.min(c), h.max(c)));
    let multipliers = (0..n)
        .map(|i| {
            let row: Vec<f64> = (0..n).filter(|&j| j != i).map(|j| entropy_isotropic_slope(czz[(i, j)])).collect();
            row.iter().sum::<f64>() / row.len() as f64
        })
        .collect();
    Ok(E2vOptimum {
        n_sites,
        czz,
        e2v: f / (n * (n - 1)) as f64,
        spread: hi - lo,
        multipliers,
        gradient_norm: gnorm,
        restarts_converged,
    })
}

/// `sqrt(2[1 − Tr ρ²])`.
pub fn pair_iconcurrence(rho: &DMatrix<C64>) -> f64 {
    let purity = (rho * rho).trace().re;
    (2.0 * (1.0 - purity)).max(0.0).sqrt()
}

/// Average i-concurrence over unordered pairs.
pub fn iconcurrence(state: &PureState) -> Result<f64> {
    let n = state.n_sites();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let total: f64 = pairs
        .par_iter()
        .map(|&(i, j)| partial_trace(state, &[i, j]).map(|r| pair_iconcurrence(&r)))
        .collect::<Result<Vec<f64>>>()?
        .iter()
        .sum();
    Ok(total / pairs.len() as f64)
}

/// i-concurrence of the isotropic pair state with correlation `czz`.
pub fn iconcurrence_isotropic(czz: f64) -> f64 {
    let purity = 3.0 * (0.25 + czz).powi(2) + (0.25 - 3.0 * czz).powi(2);
    (2.0 * (1.0 - purity)).max(0.0).sqrt()
}

/// Werner state `p |s⟩⟨s| + (1 − p)/4 · 1` with the pair singlet `|s⟩`.
pub fn werner_state(p: f64) -> DMatrix<C64> {
    let mut rho = DMatrix::<C64>::identity(4, 4) * C64::new((1.0 - p) / 4.0, 0.0);
    // singlet (|↑↓⟩ − |↓↑⟩)/√2 occupies local indices 1 and 2
    rho[(1, 1)] += C64::new(0.5 * p, 0.0);
    rho[(2, 2)] += C64::new(0.5 * p, 0.0);
    rho[(1, 2)] += C64::new(-0.5 * p, 0.0);
    rho[(2, 1)] += C64::new(-0.5 * p, 0.0);
    rho
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct WernerDecomposition {
    pub p: f64,
    /// Frobenius distance from the reconstructed Werner state.
    pub residual: f64,
}

impl WernerDecomposition {
    pub fn is_entangled(&self) -> bool {
        self.p > 1.0 / 3.0
    }
}

/// Fits `p = −(4/3)⟨S_i·S_j⟩` and reports how far the input is from Werner form.
pub fn werner_fit(rho: &TwoQubitRdm) -> WernerDecomposition {
    let p = -4.0 / 3.0 * rho.heisenberg();
    let residual = (&rho.matrix - werner_state(p)).norm();
    WernerDecomposition { p, residual }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct PptResult {
    pub min_eigenvalue: f64,
    /// Sum of magnitudes of the negative partial-transpose eigenvalues.
    pub negativity: f64,
    pub separable: bool,
}

/// Partial transpose on the second qubit of a 4×4 density matrix.
pub fn partial_transpose(rho: &DMatrix<C64>) -> DMatrix<C64> {
    DMatrix::from_fn(4, 4, |r, c| {
        let (ri, rj) = (r & 1, r >> 1);
        let (ci, cj) = (c & 1, c >> 1);
        rho[(ri | (cj << 1), ci | (rj << 1))]
    })
}

/// Peres-Horodecki test, exact for two qubits.
pub fn ppt_separability(rho: &DMatrix<C64>) -> PptResult {
    let eig = hermitian_eigenvalues(&partial_transpose(rho));
    let min_eigenvalue = eig[0];
    let negativity = eig.iter().filter(|&&x| x < 0.0).map(|x| -x).sum::<f64>();
    PptResult { min_eigenvalue, negativity, separable: min_eigenvalue >= -PSD_TOL }
}

/// Werner parameter of a homogeneous singlet state, `1/(N − 1)`.
pub fn homogeneous_werner_p(n_sites: usize) -> f64 {
    1.0 / (n_sites as f64 - 1.0)
}

/// Telecloning bound `1/3 + 2/(3(N − 1))` on the Werner parameter.
pub fn telecloning_bound(n_sites: usize) -> f64 {
    1.0 / 3.0 + 2.0 / (3.0 * (n_sites as f64 - 1.0))
}

/// Monogamy bound `1/3 + 2/(3√(N − 1))` on the Werner parameter.
pub fn monogamy_bound(n_sites: usize) -> f64 {
    1.0 / 3.0 + 2.0 / (3.0 * (n_sites as f64 - 1.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn entropy_of_simple_states() {
        let mixed = DMatrix::<C64>::identity(2, 2) * C64::new(0.5, 0.0);
        assert_abs_diff_eq!(entropy_vn(&mixed).unwrap(), 1.0, epsilon = 1e-14);
        let mut pure = DMatrix::<C64>::zeros(2, 2);
        pure[(0, 0)] = C64::new(1.0, 0.0);
        assert_abs_diff_eq!(entropy_vn(&pure).unwrap(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn negative_matrix_is_rejected() {
        let mut m = DMatrix::<C64>::identity(2, 2);
        m[(1, 1)] = C64::new(-0.1, 0.0);
        assert!(matches!(entropy_vn(&m), Err(Error::NotPositiveSemidefinite { .. })));
    }

    #[test]
    fn closed_form_values() {
        let expected_hs = 1.0 + 0.5 * 3f64.log2();
        assert_abs_diff_eq!(entropy_isotropic_closed_form(-1.0 / 12.0).unwrap(), expected_hs, epsilon = 1e-14);
        assert_abs_diff_eq!(entropy_isotropic_closed_form(0.0).unwrap(), 2.0, epsilon = 1e-15);
        // 2 − ½ log₂3
        assert_abs_diff_eq!(entropy_isotropic_closed_form(-0.5 / 3.0).unwrap(), 1.207518749639422, epsilon = 1e-12);
        assert_abs_diff_eq!(entropy_isotropic_closed_form(-0.25).unwrap(), 0.0, epsilon = 1e-15);
        assert!(entropy_isotropic_closed_form(0.1).is_err());
        assert!(entropy_isotropic_closed_form(-0.3).is_err());
    }

    #[test]
    fn closed_form_matches_matrix_entropy() {
        for k in 0..=40 {
            let c = -0.25 + k as f64 * (1.0 / 3.0) / 40.0;
            let direct = entropy_vn(&isotropic_rdm(c)).unwrap();
            assert_abs_diff_eq!(entropy_isotropic_closed_form(c).unwrap(), direct, epsilon = 1e-12);
        }
    }

    #[test]
    fn slope_matches_finite_difference() {
        for c in [-0.2, -0.1, -1.0 / 12.0, -0.01, 0.05] {
            let h = 1e-6;
            let fd = (entropy_isotropic_closed_form(c + h).unwrap() - entropy_isotropic_closed_form(c - h).unwrap())
                / (2.0 * h);
            assert_abs_diff_eq!(entropy_isotropic_slope(c), fd, epsilon = 1e-6);
        }
    }

    #[test]
    fn e2v_max_values() {
        assert_abs_diff_eq!(e2v_max(4).unwrap(), 1.0 + 0.5 * 3f64.log2(), epsilon = 1e-14);
        // 0.6 log₂5 + 0.4 log₂2.5
        assert_abs_diff_eq!(e2v_max(6).unwrap(), 0.6 * 5f64.log2() + 0.4 * 2.5f64.log2(), epsilon = 1e-14);
        assert_abs_diff_eq!(e2v_max(8).unwrap(), entropy_isotropic_closed_form(-1.0 / 28.0).unwrap(), epsilon = 1e-14);
        assert!(e2v_max(2).is_err());
        assert!(e2v_max(7).is_err());
    }

    #[test]
    fn e2v_max_is_increasing_and_below_two() {
        let vals: Vec<f64> = (4..=40).step_by(2).map(|n| e2v_max(n).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[1] > w[0]));
        assert!(vals.iter().all(|&v| v < 2.0));
        assert!(2.0 - e2v_max(300).unwrap() < 0.01);
    }

    #[test]
    fn optimizer_finds_homogeneous_point() {
        for n in [4, 6, 10] {
            let opt = maximize_e2v_numeric(n, &OptimizerConfig::default()).unwrap();
            assert!(opt.spread < 1e-6, "n={n} spread {}", opt.spread);
            assert_abs_diff_eq!(opt.czz[(0, 1)], homogeneous_czz(n), epsilon = 1e-6);
            assert_abs_diff_eq!(opt.e2v, e2v_max(n).unwrap(), epsilon = 1e-6);
            let lambda = entropy_isotropic_slope(homogeneous_czz(n));
            assert!(opt.multipliers.iter().all(|m| (m - lambda).abs() < 1e-5));
        }
    }

    #[test]
    fn optimizer_is_seed_deterministic() {
        let cfg = OptimizerConfig { seed: 42, ..Default::default() };
        let a = maximize_e2v_numeric(6, &cfg).unwrap();
        let b = maximize_e2v_numeric(6, &cfg).unwrap();
        assert_eq!(a.czz, b.czz);
    }

    #[test]
    fn werner_examples() {
        let singlet = TwoQubitRdm::from_matrix(werner_state(1.0)).unwrap();
        let fit = werner_fit(&singlet);
        assert_abs_diff_eq!(fit.p, 1.0, epsilon = 1e-14);
        assert!(fit.residual < 1e-14);
        assert!(fit.is_entangled());
        let mixed = TwoQubitRdm::from_matrix(DMatrix::identity(4, 4) * C64::new(0.25, 0.0)).unwrap();
        assert_abs_diff_eq!(werner_fit(&mixed).p, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn werner_matches_isotropic_form() {
        // czz = −p/4 for a Werner state
        for p in [0.0, 0.2, 1.0 / 3.0, 0.7] {
            assert!((werner_state(p) - isotropic_rdm(-p / 4.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn ppt_examples() {
        let boundary = ppt_separability(&werner_state(1.0 / 3.0));
        assert_abs_diff_eq!(boundary.min_eigenvalue, 0.0, epsilon = 1e-14);
        assert!(boundary.separable);
        let singlet = ppt_separability(&werner_state(1.0));
        assert_abs_diff_eq!(singlet.negativity, 0.5, epsilon = 1e-14);
        assert!(!singlet.separable);
        for n in (4..=20).step_by(2) {
            assert!(ppt_separability(&werner_state(homogeneous_werner_p(n))).separable);
        }
    }

    #[test]
    fn bounds_are_ordered() {
        for n in 4..=100 {
            let p = homogeneous_werner_p(n);
            assert!(p <= telecloning_bound(n));
            assert!(telecloning_bound(n) <= monogamy_bound(n));
        }
    }

    #[test]
    fn isotropic_iconcurrence() {
        assert_abs_diff_eq!(iconcurrence_isotropic(0.0), iconcurrence_max(), epsilon = 1e-15);
        assert_abs_diff_eq!(iconcurrence_isotropic(-1.0 / 12.0), (4.0f64 / 3.0).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(pair_iconcurrence(&isotropic_rdm(-0.1)), iconcurrence_isotropic(-0.1), epsilon = 1e-14);
    }
}
