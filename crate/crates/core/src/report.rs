//! Reproduction tables and the aggregated verification suite.

use crate::dynamics::{dfs_subspace, MAX_DYNAMICS_SITES};
use crate::entanglement::{
    e2v_average, e2v_max, entropy_isotropic_closed_form, homogeneous_czz, iconcurrence_isotropic, iconcurrence_max,
    isotropic_rdm, werner_fit, TwoQubitRdm,
};
use crate::error::{Error, Result};
use crate::irhm::{
    build_named_state, default_coupling, ground_state, heisenberg_ring, homogenize, spectrum_check, HomogenizeConfig,
    NamedState,
};
use crate::phonon::verify_all_identities;
use crate::valence_bond::{dependence_check, rumer_basis, singlet_count};
use serde::{Deserialize, Serialize};

/// Largest `N` accepted by [`fig1_rows`]; every entry is closed-form.
pub const MAX_FIG1_SITES: usize = 1000;

/// Largest `N` accepted by [`verify_all`].
pub const MAX_VERIFY_SITES: usize = 10;

/// One row of the normalized-entanglement curves.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fig1Row {
    #[serde(rename = "N")]
    pub n_sites: usize,
    /// `E²_v,max(N)/2`.
    pub e2v_ratio: f64,
    /// `I_c/I_c,max` of the homogeneous pair state.
    pub ic_ratio: f64,
}

/// Rows for `N = 4, 6, …, n_max`.
pub fn fig1_rows(n_max: usize) -> Result<Vec<Fig1Row>> {
    if n_max < 4 || n_max % 2 == 1 || n_max > MAX_FIG1_SITES {
        return Err(Error::InvalidSiteCount { n_sites: n_max, reason: "n_max must be even, 4..=1000" });
    }
    (4..=n_max)
        .step_by(2)
        .map(|n| {
            Ok(Fig1Row {
                n_sites: n,
                e2v_ratio: e2v_max(n)? / 2.0,
                ic_ratio: iconcurrence_isotropic(homogeneous_czz(n)) / iconcurrence_max(),
            })
        })
        .collect()
}

/// A quoted figure next to the value computed here.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuoteRow {
    pub label: String,
    pub quoted: f64,
    pub computed: f64,
    pub abs_error: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// How the computed value was obtained.
    pub method: String,
}

impl QuoteRow {
    fn new(label: impl Into<String>, quoted: f64, computed: f64, tolerance: f64, method: impl Into<String>) -> Self {
        let abs_error = (computed - quoted).abs();
        Self { label: label.into(), quoted, computed, abs_error, tolerance, pass: abs_error < tolerance, method: method.into() }
    }
}

/// Nearest-neighbour pair entropy of the four-site Heisenberg ring ground state.
pub fn ring_pair_entropy(n_sites: usize) -> Result<(f64, f64)> {
    let (_, gs) = ground_state(&heisenberg_ring(n_sites, 1.0))?;
    let rdm = TwoQubitRdm::from_state(&gs, 0, 1)?;
    Ok((rdm.czz, rdm.entropy()?))
}

/// Correlation used for the infinite-chain comparison, `−0.443/3`.
pub const CHAIN_CZZ: f64 = -0.443 / 3.0;

pub fn quote_table() -> Result<Vec<QuoteRow>> {
    let mut rows = vec![
        QuoteRow::new("E2v,max(4)", 1.792481, e2v_max(4)?, 1e-6, "closed-form maximum"),
        QuoteRow::new("E2v,max(6)", 1.921964, e2v_max(6)?, 1e-6, "closed-form maximum"),
        QuoteRow::new("E2v(HS)", 1.792481, e2v_average(&build_named_state(NamedState::Hs)?)?, 1e-6, "pair entropies of the HS state"),
    ];
    for name in [NamedState::Psi6a, NamedState::Psi6b] {
        let s = build_named_state(name)?;
        rows.push(QuoteRow::new(format!("E2v({name:?})"), 1.921964, e2v_average(&s)?, 1e-6, "pair entropies of the explicit state"));
    }
    let (_, ring) = ring_pair_entropy(4)?;
    rows.push(QuoteRow::new("chain N=4 nn pair", 1.21, ring, 5e-3, "ground state of the four-site ring"));
    rows.push(QuoteRow::new(
        "infinite chain nn pair",
        1.37,
        entropy_isotropic_closed_form(CHAIN_CZZ)?,
        5e-3,
        "isotropic pair entropy at czz = -0.443/3",
    ));
    for n in (4..=10).step_by(2) {
        let fit = werner_fit(&TwoQubitRdm::from_matrix(isotropic_rdm(homogeneous_czz(n)))?);
        rows.push(QuoteRow::new(format!("Werner p N={n}"), 1.0 / (n as f64 - 1.0), fit.p, 1e-12, "Werner fit of the homogeneous pair state"));
    }
    for n in [4, 6, 8] {
        let rep = dependence_check(n)?;
        rows.push(QuoteRow::new(format!("Catalan N={n}"), singlet_count(n) as f64, rep.rank as f64, 0.5, "rank of all dimer coverings"));
    }
    Ok(rows)
}

/// Settings shared by the verification commands.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Seeds every optimizer restart sequence.
    pub seed: u64,
    /// Residual threshold for the homogenizer.
    pub tolerance: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { seed: 0, tolerance: 1e-6 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: String,
    #[serde(rename = "N")]
    pub n_sites: usize,
    pub passed: bool,
    pub residual: f64,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub config: RunConfig,
    pub suites: Vec<SuiteResult>,
    pub all_passed: bool,
}

fn suite(name: &str, n: usize, outcome: Result<(bool, f64, String)>) -> SuiteResult {
    match outcome {
        Ok((passed, residual, detail)) => SuiteResult { suite: name.into(), n_sites: n, passed, residual, detail },
        Err(e) => SuiteResult { suite: name.into(), n_sites: n, passed: false, residual: f64::NAN, detail: e.to_string() },
    }
}

fn spectrum_suite(n: usize) -> Result<(bool, f64, String)> {
    let s = spectrum_check(n, default_coupling(n))?;
    let ground = s.degeneracy(0.0);
    let expected = singlet_count(n) as usize;
    Ok((
        s.max_deviation < 1e-9 && ground == expected,
        s.max_deviation,
        format!("S=0 degeneracy {ground} (expected {expected})"),
    ))
}

fn identity_suite(n: usize) -> Result<(bool, f64, String)> {
    let reports = verify_all_identities(n)?;
    let worst = reports.iter().map(|r| r.residual).fold(0.0, f64::max);
    Ok((worst < 1e-12, worst, format!("{} identities", reports.len())))
}

fn homogenizer_suite(n: usize, cfg: &RunConfig) -> Result<(bool, f64, String)> {
    let hc = HomogenizeConfig { tolerance: cfg.tolerance, seed: cfg.seed, ..HomogenizeConfig::default() };
    let h = homogenize(n, &rumer_basis(n)?, &hc)?;
    let gap = (e2v_average(&h.state)? - e2v_max(n)?).abs();
    Ok((h.residual < cfg.tolerance && gap < 1e-5, h.residual, format!("restart {}, E2v gap {gap:.3e}", h.restart)))
}

fn dfs_suite(n: usize) -> Result<(bool, f64, String)> {
    let block = dfs_subspace(n)?;
    let expected = singlet_count(n) as usize;
    let dim = block.indices.len();
    Ok((dim == expected, (dim as f64 - expected as f64).abs(), format!("ground DFS dimension {dim}")))
}

/// Runs every invariant suite for each `N`. Odd `N` runs only the operator
/// identities; identities are skipped above eight sites.
pub fn verify_all(n_list: &[usize], cfg: &RunConfig) -> Result<VerifyReport> {
    if n_list.is_empty() {
        return Err(Error::InvalidArgument("no site counts given".into()));
    }
    for &n in n_list {
        if !(4..=MAX_VERIFY_SITES).contains(&n) {
            return Err(Error::InvalidSiteCount { n_sites: n, reason: "verify supports 4 ≤ N ≤ 10" });
        }
    }
    let mut suites = Vec::new();
    for &n in n_list {
        if n <= 8 {
            suites.push(suite("identities", n, identity_suite(n)));
        }
        if n % 2 == 0 {
            suites.push(suite("spectrum", n, spectrum_suite(n)));
            suites.push(suite("homogenizer", n, homogenizer_suite(n, cfg)));
            if n <= MAX_DYNAMICS_SITES {
                suites.push(suite("dfs", n, dfs_suite(n)));
            }
        }
    }
    let all_passed = suites.iter().all(|s| s.passed);
    Ok(VerifyReport { config: *cfg, suites, all_passed })
}
