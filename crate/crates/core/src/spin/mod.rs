//! Computational z-basis machinery for chains of spin-1/2 sites.
//!
//! Basis convention: bit `i` of a basis index is site `i`, and a set bit
//! means the spin points up. Site 0 is the least significant bit.

mod operator;
mod sector;

pub use operator::{site_operator, total_spin_operator, Bond, OperatorMatrix, XxzModel};
pub use sector::SectorBasis;

use crate::error::{Error, Result};
use crate::linalg::C64;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Largest chain held as a dense amplitude vector (16 MiB of amplitudes).
pub const MAX_DENSE_SITES: usize = 20;

/// Tolerance on the weight outside a single `S^z_total` sector.
pub const SECTOR_WEIGHT_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpinOp {
    X,
    Y,
    Z,
    Plus,
    Minus,
}

/// Complex amplitudes over the `2^N` computational basis states.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    n_sites: usize,
    amplitudes: DVector<C64>,
}

#[derive(Serialize, Deserialize)]
struct StateRecord {
    n_sites: usize,
    amplitudes: Vec<[f64; 2]>,
}

impl Serialize for PureState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StateRecord {
            n_sites: self.n_sites,
            amplitudes: self.amplitudes.iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PureState {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rec = StateRecord::deserialize(d)?;
        let amps = rec.amplitudes.iter().map(|[re, im]| C64::new(*re, *im)).collect();
        PureState::from_amplitudes(rec.n_sites, amps).map_err(serde::de::Error::custom)
    }
}

impl PureState {
    pub fn from_amplitudes(n_sites: usize, amplitudes: Vec<C64>) -> Result<Self> {
        check_site_count(n_sites)?;
        if amplitudes.len() != 1 << n_sites {
            return Err(Error::DimensionMismatch { expected: 1 << n_sites, found: amplitudes.len() });
        }
        Ok(Self { n_sites, amplitudes: DVector::from_vec(amplitudes) })
    }

    pub fn from_vector(n_sites: usize, amplitudes: DVector<C64>) -> Result<Self> {
        check_site_count(n_sites)?;
        if amplitudes.len() != 1 << n_sites {
            return Err(Error::DimensionMismatch { expected: 1 << n_sites, found: amplitudes.len() });
        }
        Ok(Self { n_sites, amplitudes })
    }

    pub fn zero(n_sites: usize) -> Result<Self> {
        check_site_count(n_sites)?;
        Ok(Self { n_sites, amplitudes: DVector::zeros(1 << n_sites) })
    }

    /// A single computational basis state.
    pub fn basis(n_sites: usize, index: usize) -> Result<Self> {
        let mut s = Self::zero(n_sites)?;
        if index >= s.dim() {
            return Err(Error::InvalidArgument(format!("basis index {index} out of range")));
        }
        s.amplitudes[index] = C64::new(1.0, 0.0);
        Ok(s)
    }

    /// Basis state from a spin string such as `"udud"`; character `k` is site `k`.
    pub fn from_spins(spins: &str) -> Result<Self> {
        let index = spin_string_index(spins)?;
        Self::basis(spins.len(), index)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amplitudes[index]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidArgument("cannot normalize a zero vector".into()));
        }
        self.amplitudes.unscale_mut(n);
        Ok(())
    }

    pub fn normalized(mut self) -> Result<Self> {
        self.normalize()?;
        Ok(self)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn conj(&self) -> PureState {
        Self { n_sites: self.n_sites, amplitudes: self.amplitudes.map(|z| z.conj()) }
    }

    pub fn scaled(&self, factor: C64) -> PureState {
        Self { n_sites: self.n_sites, amplitudes: &self.amplitudes * factor }
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, factor: C64, other: &PureState) -> Result<PureState> {
        if other.n_sites != self.n_sites {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(Self { n_sites: self.n_sites, amplitudes: &self.amplitudes + &other.amplitudes * factor })
    }

    /// Smallest distance to `other` over a global phase, both taken as given.
    pub fn distance_up_to_phase(&self, other: &PureState) -> f64 {
        let ov = self.inner(other);
        let phase = if ov.norm() > 0.0 { ov / ov.norm() } else { C64::new(1.0, 0.0) };
        (&self.amplitudes * phase - &other.amplitudes).norm()
    }

    /// Density matrix `|ψ⟩⟨ψ|`.
    pub fn density_matrix(&self) -> DMatrix<C64> {
        &self.amplitudes * self.amplitudes.adjoint()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn check_site_count(n_sites: usize) -> Result<()> {
    if n_sites == 0 {
        return Err(Error::InvalidSiteCount { n_sites, reason: "need at least one site" });
    }
    if n_sites > MAX_DENSE_SITES {
        return Err(Error::InvalidSiteCount { n_sites, reason: "too many sites for dense vectors" });
    }
    Ok(())
}

pub(crate) fn check_site(site: usize, n_sites: usize) -> Result<()> {
    if site >= n_sites {
        Err(Error::SiteOutOfRange { site, n_sites })
    } else {
        Ok(())
    }
}

/// Basis index of a spin string made of `u`/`d` (or `↑`/`↓`) characters.
pub fn spin_string_index(spins: &str) -> Result<usize> {
    let mut index = 0;
    for (site, ch) in spins.chars().enumerate() {
        match ch {
            'u' | 'U' | '↑' | '1' => index |= 1 << site,
            'd' | 'D' | '↓' | '0' => {}
            other => return Err(Error::InvalidArgument(format!("bad spin character {other:?}"))),
        }
    }
    Ok(index)
}

#[inline]
pub(crate) fn sz_of(index: usize, site: usize) -> f64 {
    if index >> site & 1 == 1 {
        0.5
    } else {
        -0.5
    }
}

/// Action of a single-site operator on one basis state: `(image index, coefficient)`.
pub(crate) fn single_site_action(op: SpinOp, site: usize, index: usize) -> [(usize, C64); 2] {
    let up = index >> site & 1 == 1;
    let flipped = index ^ (1 << site);
    let zero = (index, C64::new(0.0, 0.0));
    match op {
        SpinOp::Z => [(index, C64::new(sz_of(index, site), 0.0)), zero],
        SpinOp::Plus if up => [zero, zero],
        SpinOp::Plus => [(flipped, C64::new(1.0, 0.0)), zero],
        SpinOp::Minus if up => [(flipped, C64::new(1.0, 0.0)), zero],
        SpinOp::Minus => [zero, zero],
        SpinOp::X => [(flipped, C64::new(0.5, 0.0)), zero],
        // S^y = σ^y/2: |↑⟩ → (i/2)|↓⟩, |↓⟩ → (−i/2)|↑⟩
        SpinOp::Y if up => [(flipped, C64::new(0.0, 0.5)), zero],
        SpinOp::Y => [(flipped, C64::new(0.0, -0.5)), zero],
    }
}

/// Applies `op` on `site`; the result is not renormalized.
pub fn apply_spin(op: SpinOp, site: usize, state: &PureState) -> Result<PureState> {
    check_site(site, state.n_sites)?;
    let mut out = DVector::<C64>::zeros(state.dim());
    for (index, amp) in state.amplitudes.iter().enumerate() {
        if amp.norm_sqr() == 0.0 {
            continue;
        }
        for (target, coeff) in single_site_action(op, site, index) {
            out[target] += coeff * amp;
        }
    }
    Ok(PureState { n_sites: state.n_sites, amplitudes: out })
}

/// `⟨ψ| A_i B_j |ψ⟩` for single-site operators `A`, `B`.
pub fn two_point(state: &PureState, a: SpinOp, i: usize, b: SpinOp, j: usize) -> Result<C64> {
    let image = apply_spin(a, i, &apply_spin(b, j, state)?)?;
    Ok(state.inner(&image))
}

/// Pairwise spin correlations of a state.
#[derive(Clone, Debug)]
pub struct SpinCorrelations {
    /// `⟨S^z_i S^z_j⟩`
    pub czz: DMatrix<f64>,
    /// `⟨S^+_i S^-_j⟩`
    pub cpm: DMatrix<C64>,
    /// `⟨S^z_i⟩`
    pub sz: DVector<f64>,
}

impl SpinCorrelations {
    pub fn n_sites(&self) -> usize {
        self.sz.len()
    }

    /// `⟨S_i · S_j⟩ = ⟨S^z S^z⟩ + Re⟨S^+_i S^-_j⟩` for `i ≠ j`.
    pub fn heisenberg(&self, i: usize, j: usize) -> f64 {
        self.czz[(i, j)] + self.cpm[(i, j)].re
    }
}

pub fn correlations(state: &PureState) -> SpinCorrelations {
    let n = state.n_sites;
    let mut czz = DMatrix::<f64>::zeros(n, n);
    let mut cpm = DMatrix::<C64>::zeros(n, n);
    let mut sz = DVector::<f64>::zeros(n);
    for (index, amp) in state.amplitudes.iter().enumerate() {
        let w = amp.norm_sqr();
        if w == 0.0 {
            continue;
        }
        for i in 0..n {
            let zi = sz_of(index, i);
            sz[i] += w * zi;
            for j in 0..n {
                czz[(i, j)] += w * zi * sz_of(index, j);
            }
            // S^+_i S^-_j |index⟩ with j up and i down
            for j in 0..n {
                if i != j && (index >> j & 1 == 1) && (index >> i & 1 == 0) {
                    let target = index ^ (1 << i) ^ (1 << j);
                    cpm[(i, j)] += state.amplitudes[target].conj() * amp;
                }
            }
        }
    }
    for i in 0..n {
        cpm[(i, i)] = C64::new(0.5 + sz[i], 0.0);
    }
    SpinCorrelations { czz, cpm, sz }
}

/// Reduced density matrix of the sites in `keep`.
///
/// The local basis index carries `keep[k]` in bit `k`, so the order of `keep`
/// fixes the ordering of the tensor factors.
pub fn partial_trace(state: &PureState, keep: &[usize]) -> Result<DMatrix<C64>> {
    let n = state.n_sites;
    if keep.is_empty() {
        return Err(Error::InvalidPartition("keep set is empty".into()));
    }
    if keep.len() >= n {
        return Err(Error::InvalidPartition("keep set must be a strict subset".into()));
    }
    let mut mask = 0usize;
    for &s in keep {
        check_site(s, n)?;
        if mask >> s & 1 == 1 {
            return Err(Error::InvalidPartition(format!("site {s} listed twice")));
        }
        mask |= 1 << s;
    }
    let env: Vec<usize> = (0..n).filter(|s| mask >> s & 1 == 0).collect();
    let dim_keep = 1 << keep.len();
    let dim_env = 1 << env.len();
    let mut psi = DMatrix::<C64>::zeros(dim_keep, dim_env);
    for (index, amp) in state.amplitudes.iter().enumerate() {
        let local = gather_bits(index, keep);
        let rest = gather_bits(index, &env);
        psi[(local, rest)] = *amp;
    }
    Ok(&psi * psi.adjoint())
}

#[inline]
fn gather_bits(index: usize, sites: &[usize]) -> usize {
    sites.iter().enumerate().fold(0, |acc, (k, &s)| acc | ((index >> s & 1) << k))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SzCheck {
    pub is_eigenstate: bool,
    /// Total `S^z` of the dominant sector, present when the state is an eigenstate.
    pub eigenvalue: Option<f64>,
    /// Weight outside the dominant sector.
    pub leakage: f64,
}

pub fn sz_total_eigencheck(state: &PureState) -> SzCheck {
    let n = state.n_sites;
    let mut weights = vec![0.0; n + 1];
    for (index, amp) in state.amplitudes.iter().enumerate() {
        weights[index.count_ones() as usize] += amp.norm_sqr();
    }
    let total: f64 = weights.iter().sum();
    let (best, &w) = weights
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("at least one sector");
    let leakage = if total > 0.0 { (total - w) / total } else { 1.0 };
    let is_eigenstate = leakage < SECTOR_WEIGHT_TOL;
    SzCheck {
        is_eigenstate,
        eigenvalue: is_eigenstate.then(|| best as f64 - n as f64 / 2.0),
        leakage,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn singlet() -> PureState {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        // site 0 up, site 1 down is index 0b01
        let mut s = PureState::zero(2).unwrap();
        s.amplitudes[0b01] = C64::new(r, 0.0);
        s.amplitudes[0b10] = C64::new(-r, 0.0);
        s
    }

    #[test]
    fn sz_on_up_is_half() {
        let up = PureState::from_spins("u").unwrap();
        let img = apply_spin(SpinOp::Z, 0, &up).unwrap();
        assert_eq!(img.amplitude(1), C64::new(0.5, 0.0));
        assert_eq!(img.amplitude(0), C64::new(0.0, 0.0));
    }

    #[test]
    fn raising_annihilates_up() {
        let up = PureState::from_spins("u").unwrap();
        assert_eq!(apply_spin(SpinOp::Plus, 0, &up).unwrap().norm(), 0.0);
    }

    #[test]
    fn plus_minus_anticommutator_is_identity() {
        let s = PureState::from_amplitudes(1, vec![C64::new(0.3, 0.1), C64::new(-0.2, 0.7)]).unwrap();
        let a = apply_spin(SpinOp::Minus, 0, &apply_spin(SpinOp::Plus, 0, &s).unwrap()).unwrap();
        let b = apply_spin(SpinOp::Plus, 0, &apply_spin(SpinOp::Minus, 0, &s).unwrap()).unwrap();
        let sum = a.add_scaled(C64::new(1.0, 0.0), &b).unwrap();
        assert!((sum.amplitudes() - s.amplitudes()).norm() < 1e-15);
    }

    #[test]
    fn pauli_y_matches_ladder_form() {
        // S^y = (S^+ - S^-)/(2i)
        let s = PureState::from_amplitudes(1, vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)]).unwrap();
        let y = apply_spin(SpinOp::Y, 0, &s).unwrap();
        let p = apply_spin(SpinOp::Plus, 0, &s).unwrap();
        let m = apply_spin(SpinOp::Minus, 0, &s).unwrap();
        let ladder = p.add_scaled(C64::new(-1.0, 0.0), &m).unwrap().scaled(C64::new(0.0, -0.5));
        assert!((y.amplitudes() - ladder.amplitudes()).norm() < 1e-15);
    }

    #[test]
    fn out_of_range_site_is_rejected() {
        let s = PureState::basis(2, 0).unwrap();
        assert!(matches!(apply_spin(SpinOp::Z, 2, &s), Err(Error::SiteOutOfRange { .. })));
    }

    #[test]
    fn singlet_correlations() {
        let c = correlations(&singlet());
        assert_abs_diff_eq!(c.czz[(0, 1)], -0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(c.cpm[(0, 1)].re, -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(c.czz[(0, 0)], 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(c.heisenberg(0, 1), -0.75, epsilon = 1e-15);
    }

    #[test]
    fn all_up_correlations() {
        let c = correlations(&PureState::from_spins("uu").unwrap());
        assert_eq!(c.czz[(0, 1)], 0.25);
        assert_eq!(c.sz.as_slice(), &[0.5, 0.5]);
    }

    #[test]
    fn singlet_marginal_is_maximally_mixed() {
        let rho = partial_trace(&singlet(), &[0]).unwrap();
        let half = DMatrix::<C64>::identity(2, 2) * C64::new(0.5, 0.0);
        assert!((rho - half).norm() < 1e-15);
    }

    #[test]
    fn product_marginal_is_pure() {
        let rho = partial_trace(&PureState::from_spins("ud").unwrap(), &[0]).unwrap();
        assert_eq!(rho[(1, 1)], C64::new(1.0, 0.0));
        assert_eq!(rho[(0, 0)], C64::new(0.0, 0.0));
    }

    #[test]
    fn bad_partitions() {
        let s = singlet();
        assert!(partial_trace(&s, &[]).is_err());
        assert!(partial_trace(&s, &[0, 1]).is_err());
        assert!(partial_trace(&s, &[3]).is_err());
    }

    #[test]
    fn sector_check() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let ghz_like = PureState::from_amplitudes(
            2,
            vec![C64::new(r, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(r, 0.0)],
        )
        .unwrap();
        let c = sz_total_eigencheck(&ghz_like);
        assert!(!c.is_eigenstate);
        assert_eq!(c.eigenvalue, None);
        let c = sz_total_eigencheck(&singlet());
        assert_eq!(c.eigenvalue, Some(0.0));
    }

    #[test]
    fn json_layout() {
        let s = PureState::from_spins("u").unwrap();
        assert_eq!(s.to_json().unwrap(), r#"{"n_sites":1,"amplitudes":[[0.0,0.0],[1.0,0.0]]}"#);
        let back = PureState::from_json(&s.to_json().unwrap()).unwrap();
        assert_eq!(back, s);
        assert!(PureState::from_json(r#"{"n_sites":2,"amplitudes":[[1.0,0.0]]}"#).is_err());
    }
}
