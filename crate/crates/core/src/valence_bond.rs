//! Singlet dimer coverings, their product states, and the non-crossing basis.
//!
//! A singlet on an oriented pair `(a, b)` is `(|↑_a↓_b⟩ − |↓_a↑_b⟩)/√2`, so
//! reversing a pair flips the sign of the state. With pairs oriented `a < b`
//! the four-site dependence identity reads
//! `|Φ₀₂⟩|Φ₁₃⟩ = |Φ₀₁⟩|Φ₂₃⟩ + |Φ₀₃⟩|Φ₁₂⟩` with no extra signs.

use crate::error::{Error, Result};
use crate::linalg::{numeric_rank, singular_values, C64};
use crate::spin::PureState;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Relative singular-value threshold used for rank decisions.
pub const RANK_TOL: f64 = 1e-9;

/// Perfect matching of sites into oriented singlet pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DimerCovering {
    pairs: Vec<(usize, usize)>,
}

impl DimerCovering {
    pub fn new(pairs: Vec<(usize, usize)>, n_sites: usize) -> Result<Self> {
        if n_sites == 0 || n_sites % 2 == 1 {
            return Err(Error::InvalidSiteCount { n_sites, reason: "coverings need an even site count" });
        }
        if pairs.len() * 2 != n_sites {
            return Err(Error::InvalidCovering(format!(
                "{} pairs cannot cover {n_sites} sites",
                pairs.len()
            )));
        }
        let mut seen = vec![false; n_sites];
        for &(a, b) in &pairs {
            for s in [a, b] {
                if s >= n_sites {
                    return Err(Error::InvalidCovering(format!("site {s} out of range")));
                }
                if seen[s] {
                    return Err(Error::InvalidCovering(format!("site {s} used twice")));
                }
                seen[s] = true;
            }
        }
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn n_sites(&self) -> usize {
        self.pairs.len() * 2
    }

    /// Canonical form (`a < b`, sorted by `a`) and the sign relating the two states.
    pub fn canonical(&self) -> (DimerCovering, f64) {
        let mut sign = 1.0;
        let mut pairs: Vec<(usize, usize)> = self
            .pairs
            .iter()
            .map(|&(a, b)| {
                if a < b {
                    (a, b)
                } else {
                    sign = -sign;
                    (b, a)
                }
            })
            .collect();
        pairs.sort_unstable();
        (DimerCovering { pairs }, sign)
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical().0 == *self
    }

    /// True when no two bonds cross with the sites placed on a circle in index order.
    pub fn is_non_crossing(&self) -> bool {
        let (canon, _) = self.canonical();
        let p = canon.pairs();
        p.iter().enumerate().all(|(k, &(a, b))| {
            p[k + 1..].iter().all(|&(c, d)| !((a < c && c < b && b < d) || (c < a && a < d && d < b)))
        })
    }
}

/// Normalized product of singlets in the listed orientation.
pub fn dimer_state(cov: &DimerCovering, n_sites: usize) -> Result<PureState> {
    if cov.n_sites() != n_sites {
        return Err(Error::InvalidCovering(format!(
            "covering spans {} sites, expected {n_sites}",
            cov.n_sites()
        )));
    }
    let scale = std::f64::consts::FRAC_1_SQRT_2.powi(cov.pairs.len() as i32);
    Ok(singlet_product(cov, n_sites)?.scaled(C64::new(scale, 0.0)))
}

/// Product of unnormalized singlets `|↑_a↓_b⟩ − |↓_a↑_b⟩`.
pub fn singlet_product(cov: &DimerCovering, n_sites: usize) -> Result<PureState> {
    let mut amps = DVector::<C64>::zeros(PureState::zero(n_sites)?.dim());
    let m = cov.pairs.len();
    for choice in 0..1usize << m {
        let mut index = 0;
        let mut sign = 1.0;
        for (k, &(a, b)) in cov.pairs.iter().enumerate() {
            if choice >> k & 1 == 0 {
                index |= 1 << a;
            } else {
                index |= 1 << b;
                sign = -sign;
            }
        }
        amps[index] += C64::new(sign, 0.0);
    }
    PureState::from_vector(n_sites, amps)
}

fn check_even(n_sites: usize) -> Result<()> {
    if n_sites == 0 || n_sites % 2 == 1 {
        Err(Error::InvalidSiteCount { n_sites, reason: "must be a positive even number" })
    } else {
        Ok(())
    }
}

/// Every perfect matching of `n_sites` sites, in canonical form.
pub fn all_coverings(n_sites: usize) -> Result<Vec<DimerCovering>> {
    check_even(n_sites)?;
    let mut out = Vec::new();
    let mut used = vec![false; n_sites];
    let mut pairs = Vec::with_capacity(n_sites / 2);
    fn recurse(
        used: &mut Vec<bool>,
        pairs: &mut Vec<(usize, usize)>,
        out: &mut Vec<DimerCovering>,
    ) {
        let Some(first) = used.iter().position(|u| !u) else {
            out.push(DimerCovering { pairs: pairs.clone() });
            return;
        };
        used[first] = true;
        for partner in first + 1..used.len() {
            if used[partner] {
                continue;
            }
            used[partner] = true;
            pairs.push((first, partner));
            recurse(used, pairs, out);
            pairs.pop();
            used[partner] = false;
        }
        used[first] = false;
    }
    recurse(&mut used, &mut pairs, &mut out);
    Ok(out)
}

/// Non-crossing matchings of sites `0..n_sites` on a circle.
pub fn non_crossing_coverings(n_sites: usize) -> Result<Vec<DimerCovering>> {
    check_even(n_sites)?;
    fn matchings(lo: usize, hi: usize) -> Vec<Vec<(usize, usize)>> {
        if lo >= hi {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        // lo pairs with k; the arc (lo, k) must enclose an even number of sites
        for k in (lo + 1..hi).step_by(2) {
            for inner in matchings(lo + 1, k) {
                for outer in matchings(k + 1, hi) {
                    let mut p = vec![(lo, k)];
                    p.extend(inner.iter().copied());
                    p.extend(outer.iter().copied());
                    p.sort_unstable();
                    out.push(p);
                }
            }
        }
        out
    }
    Ok(matchings(0, n_sites).into_iter().map(|pairs| DimerCovering { pairs }).collect())
}

/// A set of dimer states with their overlaps.
#[derive(Clone, Debug)]
pub struct VbBasis {
    pub n_sites: usize,
    pub coverings: Vec<DimerCovering>,
    /// Normalized dimer states as columns.
    pub vectors: DMatrix<C64>,
    /// `gram[(a, b)] = ⟨a|b⟩`.
    pub gram: DMatrix<C64>,
}

impl VbBasis {
    pub fn from_coverings(n_sites: usize, coverings: Vec<DimerCovering>) -> Result<Self> {
        let dim = 1usize << n_sites;
        let mut vectors = DMatrix::<C64>::zeros(dim, coverings.len());
        for (k, cov) in coverings.iter().enumerate() {
            let s = dimer_state(cov, n_sites)?;
            vectors.set_column(k, s.amplitudes());
        }
        let gram = vectors.adjoint() * &vectors;
        Ok(Self { n_sites, coverings, vectors, gram })
    }

    pub fn len(&self) -> usize {
        self.coverings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coverings.is_empty()
    }

    pub fn state(&self, k: usize) -> PureState {
        PureState::from_vector(self.n_sites, self.vectors.column(k).into_owned())
            .expect("basis columns have the full dimension")
    }

    pub fn rank(&self) -> usize {
        numeric_rank(&self.vectors, RANK_TOL)
    }

    pub fn smallest_singular_value(&self) -> f64 {
        singular_values(&self.vectors).last().copied().unwrap_or(0.0)
    }

    /// `Σ_k coeffs[k] |k⟩`, not normalized.
    pub fn combine(&self, coeffs: &[C64]) -> Result<PureState> {
        if coeffs.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), found: coeffs.len() });
        }
        let v = &self.vectors * DVector::from_column_slice(coeffs);
        PureState::from_vector(self.n_sites, v)
    }
}

/// The Catalan-many non-crossing dimer states.
pub fn rumer_basis(n_sites: usize) -> Result<VbBasis> {
    VbBasis::from_coverings(n_sites, non_crossing_coverings(n_sites)?)
}

/// `N! / [(N/2)! (N/2 + 1)!]`, the number of linearly independent singlets.
pub fn singlet_count(n_sites: usize) -> u128 {
    let half = (n_sites / 2) as u128;
    binomial(2 * half, half) / (half + 1)
}

/// `(N − 1)!!`, the number of dimer coverings.
pub fn covering_count(n_sites: usize) -> u128 {
    (1..n_sites as u128).step_by(2).product()
}

pub fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Clone, Debug, Serialize)]
pub struct DependenceReport {
    pub n_sites: usize,
    /// Residual of the four-site identity embedded on sites 0..4, when `N ≥ 4`.
    pub identity_residual: Option<f64>,
    pub covering_count: usize,
    pub rank: usize,
    pub expected_rank: u128,
}

/// Checks the linear dependence among singlet products.
///
/// The residual is `‖Φ₀₂Φ₁₃ − Φ₀₁Φ₂₃ − Φ₀₃Φ₁₂‖` with unnormalized singlets,
/// tensored with the pairing `(4,5), (6,7), …` of any remaining sites.
pub fn dependence_check(n_sites: usize) -> Result<DependenceReport> {
    check_even(n_sites)?;
    let identity_residual = if n_sites >= 4 {
        let rest: Vec<(usize, usize)> = (4..n_sites).step_by(2).map(|a| (a, a + 1)).collect();
        let with = |p: [(usize, usize); 2]| {
            let mut v = p.to_vec();
            v.extend(rest.iter().copied());
            DimerCovering::new(v, n_sites).and_then(|c| singlet_product(&c, n_sites))
        };
        let crossed = with([(0, 2), (1, 3)])?;
        let a = with([(0, 1), (2, 3)])?;
        let b = with([(0, 3), (1, 2)])?;
        let diff = crossed.amplitudes() - a.amplitudes() - b.amplitudes();
        Some(diff.norm())
    } else {
        None
    };
    let basis = VbBasis::from_coverings(n_sites, all_coverings(n_sites)?)?;
    Ok(DependenceReport {
        n_sites,
        identity_residual,
        covering_count: basis.len(),
        rank: basis.rank(),
        expected_rank: singlet_count(n_sites),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::{sz_total_eigencheck, PureState};

    #[test]
    fn two_site_singlet() {
        let cov = DimerCovering::new(vec![(0, 1)], 2).unwrap();
        let s = dimer_state(&cov, 2).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let ud = PureState::from_spins("ud").unwrap();
        let du = PureState::from_spins("du").unwrap();
        assert!((s.inner(&ud).re - r).abs() < 1e-15);
        assert!((s.inner(&du).re + r).abs() < 1e-15);
    }

    #[test]
    fn reversed_pair_flips_sign() {
        let fwd = dimer_state(&DimerCovering::new(vec![(0, 1)], 2).unwrap(), 2).unwrap();
        let rev = dimer_state(&DimerCovering::new(vec![(1, 0)], 2).unwrap(), 2).unwrap();
        assert!((fwd.amplitudes() + rev.amplitudes()).norm() < 1e-15);
        let (canon, sign) = DimerCovering::new(vec![(3, 2), (1, 0)], 4).unwrap().canonical();
        assert_eq!(canon.pairs(), &[(0, 1), (2, 3)]);
        assert_eq!(sign, 1.0);
    }

    #[test]
    fn dimer_product_has_zero_sz() {
        let cov = DimerCovering::new(vec![(0, 1), (2, 3)], 4).unwrap();
        let check = sz_total_eigencheck(&dimer_state(&cov, 4).unwrap());
        assert_eq!(check.eigenvalue, Some(0.0));
    }

    #[test]
    fn invalid_coverings() {
        assert!(DimerCovering::new(vec![(0, 1), (1, 2)], 4).is_err());
        assert!(DimerCovering::new(vec![(0, 1)], 4).is_err());
        assert!(DimerCovering::new(vec![(0, 4), (1, 2)], 4).is_err());
        assert!(DimerCovering::new(vec![(0, 1)], 3).is_err());
        let cov = DimerCovering::new(vec![(0, 1)], 2).unwrap();
        assert!(dimer_state(&cov, 4).is_err());
    }

    #[test]
    fn covering_counts() {
        assert_eq!(all_coverings(2).unwrap().len(), 1);
        assert_eq!(all_coverings(4).unwrap().len(), 3);
        assert_eq!(all_coverings(6).unwrap().len(), 15);
        assert!(all_coverings(5).is_err());
        assert_eq!(covering_count(8), 105);
        assert_eq!(all_coverings(8).unwrap().len(), 105);
    }

    #[test]
    fn non_crossing_matches_filter() {
        for n in [2, 4, 6, 8, 10] {
            let direct = non_crossing_coverings(n).unwrap();
            let filtered: Vec<_> = all_coverings(n).unwrap().into_iter().filter(|c| c.is_non_crossing()).collect();
            assert_eq!(direct.len(), filtered.len());
            assert_eq!(direct.len() as u128, singlet_count(n));
            for c in &direct {
                assert!(filtered.contains(c));
            }
        }
    }

    #[test]
    fn rumer_sizes() {
        assert_eq!(rumer_basis(4).unwrap().len(), 2);
        assert_eq!(rumer_basis(6).unwrap().len(), 5);
        let b8 = rumer_basis(8).unwrap();
        assert_eq!(b8.len(), 14);
        assert_eq!(b8.rank(), 14);
        assert!(b8.smallest_singular_value() > 1e-9);
    }

    #[test]
    fn crossing_detection() {
        assert!(!DimerCovering::new(vec![(0, 2), (1, 3)], 4).unwrap().is_non_crossing());
        assert!(DimerCovering::new(vec![(0, 3), (1, 2)], 4).unwrap().is_non_crossing());
    }

    #[test]
    fn json_is_a_list_of_pairs() {
        let cov = DimerCovering::new(vec![(0, 1), (2, 3)], 4).unwrap();
        assert_eq!(serde_json::to_string(&cov).unwrap(), "[[0,1],[2,3]]");
    }
}
