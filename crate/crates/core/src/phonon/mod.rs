//! Spin chains coupled to local optical phonons: second-order effective
//! couplings, the Lang-Firsov check and the third-order operator identities.

mod hcb;
mod lang_firsov;

pub use hcb::{
    apply_string, commutation_residual, h3_structure_check, identity_difference, third_order_hamiltonian,
    verify_all_identities, verify_identity, H3Check, HcbOperator, Identity, IdentityReport, Ladder,
    ThirdOrderCoefficients, MAX_HCB_SITES,
};
pub use lang_firsov::{lang_firsov_verify, LangFirsovReport, MAX_LF_DIM};

use crate::error::{Error, Result};
use crate::irhm::{irhm_model, total_spin_squared};
use crate::linalg::{eigenspace_invariance_residual, to_complex};
use crate::spin::{total_spin_operator, OperatorMatrix, SpinOp, XxzModel};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// Hard cap on series terms in [`f_series`].
pub const MAX_SERIES_TERMS: usize = 500;

/// Largest site count for the dense commutator checks.
pub const MAX_COMMUTATOR_SITES: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FSeries {
    /// `Σ_{n≥1} g^{2n}/(n! n)`.
    pub f1: f64,
    /// `Σ_{n,m≥1} g^{2(n+m)}/[n! m! (n+m)]`.
    pub f2: f64,
    pub terms_used: usize,
}

/// Sums the two phonon series, stopping once the next term falls below
/// `tolerance` times the running sum.
///
/// The double series is grouped by `s = n + m`; the inner sum over `n` is
/// `(2^s − 2)/s!`, so its terms are `[(2g²)^s/s! − 2 g^{2s}/s!]/s`.
pub fn f_series(g: f64, tolerance: f64) -> Result<FSeries> {
    if !(g >= 0.0) || !g.is_finite() {
        return Err(Error::Domain(format!("g must be finite and non-negative (got {g})")));
    }
    if !(tolerance > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive (got {tolerance})")));
    }
    if g == 0.0 {
        return Ok(FSeries { f1: 0.0, f2: 0.0, terms_used: 0 });
    }
    let x = g * g;
    let (mut f1, mut f2) = (0.0, 0.0);
    // g^{2s}/s! and (2g²)^s/s!
    let (mut p, mut q) = (1.0f64, 1.0f64);
    let (mut done1, mut done2) = (false, false);
    for s in 1..=MAX_SERIES_TERMS {
        p *= x / s as f64;
        q *= 2.0 * x / s as f64;
        let t1 = p / s as f64;
        let t2 = (q - 2.0 * p) / s as f64;
        if !done1 {
            done1 = t1 < tolerance * f1;
            f1 += t1;
        }
        if !done2 {
            done2 = f2 > 0.0 && t2 < tolerance * f2;
            f2 += t2;
        }
        if done1 && done2 {
            return Ok(FSeries { f1, f2, terms_used: s });
        }
    }
    Err(Error::NonConvergence { what: "phonon series", residual: p / MAX_SERIES_TERMS as f64 })
}

/// Exchange couplings dressed by second-order phonon processes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffectiveCouplings {
    pub n_sites: usize,
    pub g: f64,
    pub omega0: f64,
    #[serde(rename = "J")]
    pub j: f64,
    pub f1: f64,
    pub f2: f64,
    /// Second-order correction to the transverse coupling.
    pub j_perp2: f64,
    /// Second-order correction to the longitudinal coupling.
    pub j_par2: f64,
    /// `J e^{−g²} + j_perp2`.
    pub j_perp: f64,
    /// `J + j_par2`.
    pub j_par: f64,
    /// `g > 1` and `J/ω₀ ≤ 1`, where the expansion is controlled.
    pub in_regime: bool,
}

impl EffectiveCouplings {
    pub fn new(n_sites: usize, g: f64, omega0: f64, j: f64) -> Result<Self> {
        if n_sites < 2 {
            return Err(Error::InvalidSiteCount { n_sites, reason: "need at least two sites" });
        }
        if !(omega0 > 0.0) || !j.is_finite() {
            return Err(Error::Domain(format!("need ω₀ > 0 and finite J (got ω₀={omega0}, J={j})")));
        }
        let FSeries { f1, f2, .. } = f_series(g, 1e-17)?;
        let scale = j * j * (-2.0 * g * g).exp() / (2.0 * omega0);
        let j_perp2 = -(n_sites as f64 - 2.0) * f1 * scale;
        let j_par2 = (2.0 * f1 + f2) * scale;
        Ok(Self {
            n_sites,
            g,
            omega0,
            j,
            f1,
            f2,
            j_perp2,
            j_par2,
            j_perp: j * (-g * g).exp() + j_perp2,
            j_par: j + j_par2,
            in_regime: g > 1.0 && j.abs() <= omega0,
        })
    }

    /// `g² ω₀`.
    pub fn polaron_energy(&self) -> f64 {
        self.g * self.g * self.omega0
    }

    /// Order-of-magnitude estimates of the third-order coefficients.
    pub fn third_order_scales(&self) -> ThirdOrderScales {
        let (g2, w) = (self.g * self.g, self.omega0);
        let j3 = self.j.powi(3);
        ThirdOrderScales {
            t_n: j3 * (-g2).exp() / (g2 * w).powi(2),
            v_n: j3 / (g2 * w).powi(2),
            t_cn: j3 * (-g2).exp() / (self.g * w).powi(2),
        }
    }
}

/// Typical sizes of the third-order hopping, interaction and closed-loop
/// hopping coefficients. Reported only; they are not exact values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThirdOrderScales {
    pub t_n: f64,
    pub v_n: f64,
    pub t_cn: f64,
}

/// `Σ_{i<j}[J⊥(SˣSˣ + SʸSʸ) + J∥ SᶻSᶻ] + (field − g²ω₀) Σ Sᶻ`.
///
/// `field` is an optional uniform magnetic field; setting it to `g²ω₀`
/// cancels the polaron term. Eigenvectors do not depend on it.
pub fn effective_model(c: &EffectiveCouplings, field: f64) -> XxzModel {
    XxzModel::all_to_all(c.n_sites, c.j_perp, c.j_par).with_field(field - c.polaron_energy())
}

pub fn effective_hamiltonian_2nd(n_sites: usize, g: f64, omega0: f64, j: f64, field: f64) -> Result<OperatorMatrix> {
    let c = EffectiveCouplings::new(n_sites, g, omega0, j)?;
    if n_sites > MAX_COMMUTATOR_SITES {
        return Err(Error::InvalidSiteCount { n_sites, reason: "dense effective Hamiltonian limited to 10 sites" });
    }
    Ok(effective_model(&c, field).operator(format!("H_e N={n_sites} g={g} ω₀={omega0} J={j}")))
}

/// `H₀ + H⁽²⁾` without phonons, written with hard-core bosons:
/// `Σ_{i<j}[½ J⊥ (b†_i b_j + h.c.) + J∥ n_i n_j] − g²ω₀ Σ n_j`.
pub fn second_order_hcb(c: &EffectiveCouplings) -> Result<HcbOperator> {
    let n = c.n_sites;
    let mut h = HcbOperator::zero(n)?;
    for i in 0..n {
        h.matrix -= HcbOperator::number(i, n)?.matrix * c.polaron_energy();
        for k in i + 1..n {
            let hops = HcbOperator::hop(i, k, n)?.matrix + HcbOperator::hop(k, i, n)?.matrix;
            h.matrix += hops * (0.5 * c.j_perp);
            h.matrix += HcbOperator::number(i, n)?.matrix * HcbOperator::number(k, n)?.matrix * c.j_par;
        }
    }
    h.label = "H0+H2 (hcb)".into();
    Ok(h)
}

/// Largest entry of `H_hcb − [H_e + J∥(N − 1)/2 Σ Sᶻ + C]`, the difference
/// coming from `n_i n_j = SᶻSᶻ + ½(Sᶻ_i + Sᶻ_j) + ¼` and `n = Sᶻ + ½` with
/// `C = J∥ N(N − 1)/8 − g²ω₀ N/2`.
pub fn hcb_spin_agreement(c: &EffectiveCouplings) -> Result<f64> {
    let n = c.n_sites as f64;
    let hcb = second_order_hcb(c)?.matrix;
    let spin = effective_model(c, 0.0).dense();
    let sz = total_spin_operator(SpinOp::Z, c.n_sites).matrix.map(|z| z.re);
    let dim = hcb.nrows();
    let constant = c.j_par * n * (n - 1.0) / 8.0 - c.polaron_energy() * n / 2.0;
    let shifted = spin + sz * (c.j_par * (n - 1.0) / 2.0) + DMatrix::<f64>::identity(dim, dim) * constant;
    Ok((hcb - shifted).amax())
}

/// Eigenspace mismatch between `H_e` and the infinite-range Heisenberg
/// model, checked in both directions.
pub fn eigenvector_coincidence(c: &EffectiveCouplings, field: f64) -> Result<f64> {
    if c.n_sites > MAX_COMMUTATOR_SITES {
        return Err(Error::InvalidSiteCount { n_sites: c.n_sites, reason: "dense comparison limited to 10 sites" });
    }
    let he = to_complex(&effective_model(c, field).dense());
    let irhm = to_complex(&irhm_model(c.n_sites, c.j).dense());
    Ok(eigenspace_invariance_residual(&he, &irhm, 1e-9).max(eigenspace_invariance_residual(&irhm, &he, 1e-9)))
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CommutatorNorms {
    pub n_sites: usize,
    /// `‖[Σ_{i<j} Sᶻ_i Sᶻ_j, H_IRHM]‖_F`.
    pub zz_irhm: f64,
    /// `‖[Σ Sᶻ, H_IRHM]‖_F`.
    pub sz_irhm: f64,
    /// `‖[S²_total, H_chain]‖_F` for an anisotropic open nearest-neighbour
    /// chain; nonzero, as a negative control.
    pub anisotropic_control: f64,
}

pub fn commutator_checks(n_sites: usize) -> Result<CommutatorNorms> {
    if !(2..=MAX_COMMUTATOR_SITES).contains(&n_sites) {
        return Err(Error::InvalidSiteCount { n_sites, reason: "commutator checks need 2..=10 sites" });
    }
    let comm = |a: &DMatrix<f64>, b: &DMatrix<f64>| (a * b - b * a).norm();
    let h = irhm_model(n_sites, 1.0).dense();
    let zz = XxzModel::all_to_all(n_sites, 0.0, 1.0).dense();
    let sz = total_spin_operator(SpinOp::Z, n_sites).matrix.map(|z| z.re);
    let mut chain = XxzModel::new(n_sites);
    for i in 0..n_sites - 1 {
        chain = chain.bond(i, i + 1, 1.0, 0.5);
    }
    let s2 = total_spin_squared(n_sites).matrix.map(|z| z.re);
    Ok(CommutatorNorms {
        n_sites,
        zz_irhm: comm(&zz, &h),
        sz_irhm: comm(&sz, &h),
        anisotropic_control: comm(&s2, &chain.dense()),
    })
}
