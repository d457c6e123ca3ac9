//! Numerical check of the Lang-Firsov transform on a truncated phonon space.
//!
//! Basis index = `hcb + 2^N · Σ_s m_s (M + 1)^s`, with `hcb` the occupation
//! bitmask and `m_s ≤ M` the phonon number on site `s`.

use crate::error::{Error, Result};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// Largest total dimension accepted by [`lang_firsov_verify`].
pub const MAX_LF_DIM: usize = 2048;

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct LangFirsovReport {
    pub n_sites: usize,
    pub cutoff: usize,
    pub dim: usize,
    /// Largest entry of `e^S H e^{−S} − (H₀ + H₁)` between states with at
    /// most one phonon per site.
    pub residual: f64,
    /// Diagonal of the transformed Hamiltonian on one boson at site 0 with
    /// the phonon vacuum; `−g²ω₀` in the untruncated limit.
    pub polaron_shift: f64,
}

struct Space {
    n_sites: usize,
    levels: usize,
    dim: usize,
}

impl Space {
    fn phonon(&self, index: usize, site: usize) -> usize {
        (index >> self.n_sites) / self.levels.pow(site as u32) % self.levels
    }

    fn stride(&self, site: usize) -> usize {
        (1 << self.n_sites) * self.levels.pow(site as u32)
    }

    /// `local` acting on the phonons of `site`.
    fn phonon_op(&self, site: usize, local: &DMatrix<f64>) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for col in 0..self.dim {
            let m_col = self.phonon(col, site);
            let base = col - m_col * self.stride(site);
            for m_row in 0..self.levels {
                let v = local[(m_row, m_col)];
                if v != 0.0 {
                    m[(base + m_row * self.stride(site), col)] += v;
                }
            }
        }
        m
    }

    /// Diagonal or permutation action on the hard-core-boson bits.
    fn hcb_op(&self, f: impl Fn(usize) -> Option<(usize, f64)>) -> DMatrix<f64> {
        let mask = (1 << self.n_sites) - 1;
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for col in 0..self.dim {
            if let Some((bits, v)) = f(col & mask) {
                m[((col & !mask) | bits, col)] += v;
            }
        }
        m
    }

    fn number(&self, site: usize) -> DMatrix<f64> {
        self.hcb_op(|b| Some((b, (b >> site & 1) as f64)))
    }

    /// `b†_i b_j`.
    fn hop(&self, i: usize, j: usize) -> DMatrix<f64> {
        self.hcb_op(|b| (b >> j & 1 == 1 && b >> i & 1 == 0).then(|| (b ^ (1 << i) ^ (1 << j), 1.0)))
    }
}

fn lowering(levels: usize) -> DMatrix<f64> {
    DMatrix::from_fn(levels, levels, |r, c| if c == r + 1 { (c as f64).sqrt() } else { 0.0 })
}

/// Compares `e^S H e^{−S}` with the polaron Hamiltonian `H₀ + H₁` for
///
/// `H = J Σ_{i<j} [½(b†_i b_j + h.c.) + n_i n_j] + ω₀ Σ a†a + gω₀ Σ n_j (a_j + a†_j)`
///
/// and `S = g Σ n_i (a†_i − a_i)`. Phonons are truncated at `cutoff` quanta
/// per site; the transform is exact only without truncation, so the residual
/// is measured on the low-phonon block where it shrinks as `cutoff` grows.
pub fn lang_firsov_verify(n_sites: usize, g: f64, omega0: f64, j: f64, cutoff: usize) -> Result<LangFirsovReport> {
    if n_sites == 0 || n_sites > 3 {
        return Err(Error::InvalidSiteCount { n_sites, reason: "Lang-Firsov check supports 1..=3 sites" });
    }
    if !(g >= 0.0) || !omega0.is_finite() || !j.is_finite() {
        return Err(Error::Domain(format!("need g ≥ 0 and finite ω₀, J (got g={g}, ω₀={omega0}, J={j})")));
    }
    if cutoff == 0 {
        return Err(Error::InvalidArgument("phonon cutoff must be at least 1".into()));
    }
    let levels = cutoff + 1;
    let dim = levels
        .checked_pow(n_sites as u32)
        .and_then(|p| p.checked_mul(1 << n_sites))
        .filter(|&d| d <= MAX_LF_DIM)
        .ok_or_else(|| Error::InvalidArgument(format!("Hilbert space exceeds {MAX_LF_DIM} states")))?;
    let space = Space { n_sites, levels, dim };

    let a_local = lowering(levels);
    let ad_local = a_local.transpose();
    let a: Vec<DMatrix<f64>> = (0..n_sites).map(|s| space.phonon_op(s, &a_local)).collect();
    let ad: Vec<DMatrix<f64>> = (0..n_sites).map(|s| space.phonon_op(s, &ad_local)).collect();
    let n: Vec<DMatrix<f64>> = (0..n_sites).map(|s| space.number(s)).collect();
    let phonon_energy: DMatrix<f64> = (0..n_sites).map(|s| &ad[s] * &a[s]).fold(DMatrix::zeros(dim, dim), |acc, m| acc + m) * omega0;

    let mut interaction = DMatrix::<f64>::zeros(dim, dim);
    for i in 0..n_sites {
        for k in i + 1..n_sites {
            interaction += &n[i] * &n[k] * j;
        }
    }

    let mut h = &interaction + &phonon_energy;
    for i in 0..n_sites {
        for k in i + 1..n_sites {
            h += (space.hop(i, k) + space.hop(k, i)) * (0.5 * j);
        }
        h += &n[i] * (&a[i] + &ad[i]) * (g * omega0);
    }

    let s: DMatrix<f64> = (0..n_sites).map(|i| &n[i] * (&ad[i] - &a[i]) * g).fold(DMatrix::zeros(dim, dim), |acc, m| acc + m);
    let transformed = s.clone().exp() * &h * (-s).exp();

    // H₀ + H₁: each ordered hop b†_i b_k picks up
    // e^{−g²} exp[g(a†_i − a†_k)] exp[−g(a_i − a_k)].
    let mut polaron = interaction + phonon_energy;
    for i in 0..n_sites {
        polaron -= &n[i] * (g * g * omega0);
        for k in (0..n_sites).filter(|&k| k != i) {
            let creation = ((&ad[i] - &ad[k]) * g).exp();
            let annihilation = ((&a[k] - &a[i]) * g).exp();
            polaron += space.hop(i, k) * creation * annihilation * (0.5 * j * (-g * g).exp());
        }
    }

    let low: Vec<usize> = (0..dim).filter(|&x| (0..n_sites).all(|site| space.phonon(x, site) <= 1)).collect();
    let mut residual = 0.0f64;
    for &r in &low {
        for &c in &low {
            residual = residual.max((transformed[(r, c)] - polaron[(r, c)]).abs());
        }
    }
    Ok(LangFirsovReport { n_sites, cutoff, dim, residual, polaron_shift: transformed[(1, 1)] })
}
