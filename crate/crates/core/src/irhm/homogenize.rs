//! Numerical construction of homogeneous singlet superpositions.
//!
//! Unknowns are the real and imaginary parts of the coefficients on a
//! linearly independent singlet basis; residuals are the deviations of every
//! pair correlation `⟨Sᶻ_i Sᶻ_j⟩` from `−1/(4(N − 1))`. The system is solved
//! by damped Gauss-Newton (Levenberg-Marquardt) from random starting points,
//! renormalizing the coefficients after every step.

use crate::entanglement::homogeneous_czz;
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::spin::{correlations, PureState, SectorBasis};
use crate::valence_bond::{singlet_count, VbBasis};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

#[derive(Clone, Copy, Debug)]
pub struct HomogenizeConfig {
    /// Success threshold on `max |czz_ij + 1/(4(N−1))|`.
    pub tolerance: f64,
    pub restarts: usize,
    pub seed: u64,
    pub max_iterations: usize,
}

impl Default for HomogenizeConfig {
    fn default() -> Self {
        Self { tolerance: 1e-6, restarts: 20, seed: 0, max_iterations: 2000 }
    }
}

#[derive(Clone, Debug)]
pub struct HomogenizedState {
    pub basis: VbBasis,
    /// Coefficients on `basis`, scaled so the state has unit norm.
    pub coeffs: Vec<C64>,
    pub state: PureState,
    /// `max_{i<j} |⟨Sᶻ_i Sᶻ_j⟩ + 1/(4(N − 1))|` recomputed from `state`.
    pub residual: f64,
    pub restart: usize,
    pub iterations: usize,
}

struct Problem {
    /// `V† diag(z_ij) V` per pair.
    pair_forms: Vec<DMatrix<C64>>,
    gram: DMatrix<C64>,
    target: f64,
}

impl Problem {
    fn new(basis: &VbBasis) -> Self {
        let n = basis.n_sites;
        let sector = SectorBasis::new(n, n / 2);
        let rows = DMatrix::from_fn(sector.dim(), basis.len(), |r, c| basis.vectors[(sector.states()[r], c)]);
        let mut pair_forms = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let z = DVector::from_iterator(
                    sector.dim(),
                    sector.states().iter().map(|&s| {
                        let same = (s >> i & 1) == (s >> j & 1);
                        C64::new(if same { 0.25 } else { -0.25 }, 0.0)
                    }),
                );
                let weighted = DMatrix::from_fn(rows.nrows(), rows.ncols(), |r, c| rows[(r, c)] * z[r]);
                pair_forms.push(rows.adjoint() * weighted);
            }
        }
        let gram = rows.adjoint() * &rows;
        Self { pair_forms, gram, target: homogeneous_czz(n) }
    }

    fn normalize(&self, c: &mut DVector<C64>) {
        let norm2 = c.dotc(&(&self.gram * &*c)).re;
        c.unscale_mut(norm2.sqrt());
    }

    fn residuals(&self, c: &DVector<C64>) -> DVector<f64> {
        DVector::from_iterator(
            self.pair_forms.len(),
            self.pair_forms.iter().map(|m| c.dotc(&(m * c)).re - self.target),
        )
    }

    /// Jacobian with respect to `(Re c, Im c)` at a normalized point.
    fn jacobian(&self, c: &DVector<C64>, r: &DVector<f64>) -> DMatrix<f64> {
        let k = c.len();
        let gc = &self.gram * c;
        let mut jac = DMatrix::<f64>::zeros(self.pair_forms.len(), 2 * k);
        for (p, m) in self.pair_forms.iter().enumerate() {
            let mc = m * c;
            let f = r[p] + self.target;
            for q in 0..k {
                jac[(p, q)] = 2.0 * (mc[q].re - f * gc[q].re);
                jac[(p, k + q)] = 2.0 * (mc[q].im - f * gc[q].im);
            }
        }
        jac
    }

    fn solve(&self, mut c: DVector<C64>, max_iterations: usize) -> (DVector<C64>, f64, usize) {
        let k = c.len();
        self.normalize(&mut c);
        let mut r = self.residuals(&c);
        let mut cost = r.norm_squared();
        let mut mu = 1e-3;
        let mut iterations = 0;
        while iterations < max_iterations {
            iterations += 1;
            if r.amax() < 1e-13 {
                break;
            }
            let jac = self.jacobian(&c, &r);
            let jtj = jac.transpose() * &jac;
            let grad = jac.transpose() * &r;
            let mut damped = jtj.clone();
            for d in 0..2 * k {
                damped[(d, d)] += mu;
            }
            let Some(chol) = damped.cholesky() else {
                mu *= 4.0;
                continue;
            };
            let step = chol.solve(&(-grad));
            let mut trial = DVector::from_fn(k, |q, _| c[q] + C64::new(step[q], step[k + q]));
            self.normalize(&mut trial);
            let r_trial = self.residuals(&trial);
            let cost_trial = r_trial.norm_squared();
            if cost_trial < cost {
                c = trial;
                r = r_trial;
                cost = cost_trial;
                mu = (mu / 3.0).max(1e-15);
            } else {
                mu *= 4.0;
                if mu > 1e12 {
                    break;
                }
            }
        }
        (c, r.amax(), iterations)
    }
}

/// Finds a superposition of `basis` states whose pair correlations are all
/// `−1/(4(N − 1))`.
///
/// Restarts are independent and seeded from `cfg.seed`; the lowest-numbered
/// successful restart is returned so the output does not depend on thread
/// scheduling. Fails with the best residual seen when no restart succeeds.
pub fn homogenize(n_sites: usize, basis: &VbBasis, cfg: &HomogenizeConfig) -> Result<HomogenizedState> {
    if n_sites < 4 || n_sites % 2 == 1 {
        return Err(Error::InvalidSiteCount { n_sites, reason: "needs an even count of at least 4" });
    }
    if basis.n_sites != n_sites {
        return Err(Error::DimensionMismatch { expected: n_sites, found: basis.n_sites });
    }
    let expected = singlet_count(n_sites) as usize;
    if basis.len() != expected || basis.rank() != expected {
        return Err(Error::InvalidArgument(format!(
            "basis must hold {expected} linearly independent singlets (got {} of rank {})",
            basis.len(),
            basis.rank()
        )));
    }
    let problem = Problem::new(basis);
    let k = basis.len();
    let attempts: Vec<(usize, DVector<C64>, f64, usize)> = (0..cfg.restarts.max(1))
        .into_par_iter()
        .map(|restart| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(restart as u64));
            let start = DVector::from_fn(k, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let (c, res, it) = problem.solve(start, cfg.max_iterations);
            (restart, c, res, it)
        })
        .collect();

    let best = attempts.iter().map(|a| a.2).fold(f64::INFINITY, f64::min);
    for (restart, c, _, iterations) in attempts {
        let coeffs: Vec<C64> = c.iter().copied().collect();
        let state = basis.combine(&coeffs)?;
        let norm = state.norm();
        let state = state.normalized()?;
        let corr = correlations(&state);
        let mut residual = 0.0f64;
        for i in 0..n_sites {
            for j in i + 1..n_sites {
                residual = residual.max((corr.czz[(i, j)] - problem.target).abs());
            }
        }
        if residual < cfg.tolerance {
            let coeffs = coeffs.iter().map(|z| z / norm).collect();
            return Ok(HomogenizedState { basis: basis.clone(), coeffs, state, residual, restart, iterations });
        }
    }
    Err(Error::NonConvergence { what: "homogenizer", residual: best })
}
