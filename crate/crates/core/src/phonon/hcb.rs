//! Hard-core bosons on `N` sites and the operator identities that reduce
//! third-order hopping processes to functions of the total number.
//!
//! Occupations use the same bit layout as spin states (bit `k` set means
//! site `k` is occupied), so `b† = S⁺`, `b = S⁻` and `n = Sᶻ + ½`.

use crate::error::{Error, Result};
use crate::linalg::{eigenspace_invariance_residual, to_complex};
use crate::irhm::irhm_model;
use crate::spin::SectorBasis;
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Largest site count for dense hard-core-boson matrices.
pub const MAX_HCB_SITES: usize = 10;

/// One ladder factor of an operator string.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ladder {
    Create(usize),
    Annihilate(usize),
}

/// Applies a product of ladder operators to an occupation bitmask, rightmost
/// factor first. Returns `None` when the product annihilates the state.
pub fn apply_string(ops: &[Ladder], state: usize) -> Option<usize> {
    ops.iter().rev().try_fold(state, |s, op| match *op {
        Ladder::Create(k) if s >> k & 1 == 0 => Some(s | 1 << k),
        Ladder::Annihilate(k) if s >> k & 1 == 1 => Some(s & !(1 << k)),
        _ => None,
    })
}

/// Dense operator on the `2^N` hard-core-boson Fock space.
#[derive(Clone, Debug)]
pub struct HcbOperator {
    pub n_sites: usize,
    pub matrix: DMatrix<f64>,
    pub label: String,
}

fn check_sites(n_sites: usize) -> Result<()> {
    if n_sites == 0 || n_sites > MAX_HCB_SITES {
        return Err(Error::InvalidSiteCount { n_sites, reason: "hard-core-boson matrices need 1..=10 sites" });
    }
    Ok(())
}

fn check_site(site: usize, n_sites: usize) -> Result<()> {
    if site >= n_sites {
        return Err(Error::SiteOutOfRange { site, n_sites });
    }
    Ok(())
}

impl HcbOperator {
    pub fn zero(n_sites: usize) -> Result<Self> {
        check_sites(n_sites)?;
        let dim = 1 << n_sites;
        Ok(Self { n_sites, matrix: DMatrix::zeros(dim, dim), label: "0".into() })
    }

    pub fn identity(n_sites: usize) -> Result<Self> {
        check_sites(n_sites)?;
        let dim = 1 << n_sites;
        Ok(Self { n_sites, matrix: DMatrix::identity(dim, dim), label: "1".into() })
    }

    /// Sum of a family of ladder strings, each applied to every basis state.
    pub fn from_strings<'a>(
        n_sites: usize,
        strings: impl IntoIterator<Item = &'a [Ladder]>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let mut op = Self::zero(n_sites)?;
        op.label = label.into();
        let dim = 1 << n_sites;
        for ops in strings {
            for ladder in ops {
                let (Ladder::Create(k) | Ladder::Annihilate(k)) = *ladder;
                check_site(k, n_sites)?;
            }
            for s in 0..dim {
                if let Some(t) = apply_string(ops, s) {
                    op.matrix[(t, s)] += 1.0;
                }
            }
        }
        Ok(op)
    }

    pub fn create(site: usize, n_sites: usize) -> Result<Self> {
        Self::from_strings(n_sites, [&[Ladder::Create(site)][..]], format!("b†[{site}]"))
    }

    pub fn annihilate(site: usize, n_sites: usize) -> Result<Self> {
        Self::from_strings(n_sites, [&[Ladder::Annihilate(site)][..]], format!("b[{site}]"))
    }

    pub fn number(site: usize, n_sites: usize) -> Result<Self> {
        Self::from_strings(n_sites, [&[Ladder::Create(site), Ladder::Annihilate(site)][..]], format!("n[{site}]"))
    }

    /// `b†_l b_i`.
    pub fn hop(l: usize, i: usize, n_sites: usize) -> Result<Self> {
        Self::from_strings(n_sites, [&[Ladder::Create(l), Ladder::Annihilate(i)][..]], format!("b†[{l}]b[{i}]"))
    }

    /// `Σ_k n_k`.
    pub fn total_number(n_sites: usize) -> Result<Self> {
        let mut op = Self::zero(n_sites)?;
        for s in 0..1usize << n_sites {
            op.matrix[(s, s)] = s.count_ones() as f64;
        }
        op.label = "N̂".into();
        Ok(op)
    }

    /// `f(N̂)` for a function of the total number.
    pub fn number_function(n_sites: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let mut op = Self::zero(n_sites)?;
        for s in 0..1usize << n_sites {
            op.matrix[(s, s)] = f(s.count_ones() as f64);
        }
        op.label = "f(N̂)".into();
        Ok(op)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Largest deviation from the hard-core-boson algebra: `[b_i, b_j]`,
/// `[b_i, b†_j]` for `i ≠ j`, `{b_i, b†_i} − 1` and `(b†_i)²`.
pub fn commutation_residual(n_sites: usize) -> Result<f64> {
    let b: Vec<DMatrix<f64>> = (0..n_sites).map(|i| HcbOperator::annihilate(i, n_sites).map(|o| o.matrix)).collect::<Result<_>>()?;
    let bd: Vec<DMatrix<f64>> = b.iter().map(|m| m.transpose()).collect();
    let one = DMatrix::<f64>::identity(1 << n_sites, 1 << n_sites);
    let mut worst = 0.0f64;
    for i in 0..n_sites {
        worst = worst.max((&b[i] * &bd[i] + &bd[i] * &b[i] - &one).amax());
        worst = worst.max((&bd[i] * &bd[i]).amax());
        for j in 0..n_sites {
            if i != j {
                worst = worst.max((&b[i] * &b[j] - &b[j] * &b[i]).amax());
                worst = worst.max((&b[i] * &bd[j] - &bd[j] * &b[i]).amax());
            }
        }
    }
    Ok(worst)
}

/// The third-order hopping and interaction processes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Identity {
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    V1,
    V2,
    V3,
    TC1,
    TC2,
    TC3,
}

impl Identity {
    pub const ALL: [Identity; 12] = [
        Identity::T1,
        Identity::T2,
        Identity::T3,
        Identity::T4,
        Identity::T5,
        Identity::T6,
        Identity::V1,
        Identity::V2,
        Identity::V3,
        Identity::TC1,
        Identity::TC2,
        Identity::TC3,
    ];

    /// Interaction terms carry a single site index.
    pub fn is_interaction(self) -> bool {
        matches!(self, Identity::V1 | Identity::V2 | Identity::V3)
    }

    /// Explicit ladder strings summed on the left-hand side. For interaction
    /// terms `l` is ignored.
    pub fn strings(self, n_sites: usize, l: usize, i: usize) -> Vec<Vec<Ladder>> {
        use Ladder::{Annihilate as A, Create as C};
        let others = |excluded: &[usize]| (0..n_sites).filter(|s| !excluded.contains(s)).collect::<Vec<_>>();
        let mut out = Vec::new();
        match self {
            Identity::T1 | Identity::T2 | Identity::T3 | Identity::T4 | Identity::T5 | Identity::T6 => {
                for j in others(&[i, l]) {
                    for k in others(&[i, l, j]) {
                        out.push(match self {
                            Identity::T1 => vec![C(l), A(k), C(k), A(j), C(j), A(i)],
                            Identity::T2 => vec![C(j), A(i), C(l), A(k), C(k), A(j)],
                            Identity::T3 => vec![C(l), A(k), C(j), A(i), C(k), A(j)],
                            Identity::T4 => vec![C(k), A(j), C(j), A(i), C(l), A(k)],
                            Identity::T5 => vec![C(k), A(j), C(l), A(k), C(j), A(i)],
                            _ => vec![C(j), A(i), C(k), A(j), C(l), A(k)],
                        });
                    }
                }
            }
            Identity::V1 | Identity::V2 | Identity::V3 => {
                for j in others(&[i]) {
                    for k in others(&[i, j]) {
                        out.push(match self {
                            Identity::V1 => vec![C(i), A(k), C(k), A(j), C(j), A(i)],
                            Identity::V2 => vec![C(i), A(k), C(j), A(i), C(k), A(j)],
                            _ => vec![C(k), A(j), C(i), A(k), C(j), A(i)],
                        });
                    }
                }
            }
            Identity::TC1 => {
                for j in others(&[i, l]) {
                    out.push(vec![C(l), A(i), C(i), A(j), C(j), A(i)]);
                }
            }
            Identity::TC2 => {
                for k in others(&[i, l]) {
                    out.push(vec![C(l), A(k), C(k), A(l), C(l), A(i)]);
                }
            }
            Identity::TC3 => out.push(vec![C(l), A(i), C(i), A(l), C(l), A(i)]),
        }
        out
    }

    /// Coefficient function `f(N̂)` of the closed form `f(N̂) b†_l b_i` or
    /// `f(N̂) n_i`.
    pub fn number_factor(self, n_sites: usize) -> impl Fn(f64) -> f64 {
        let n = n_sites as f64;
        move |x: f64| match self {
            Identity::T1 => (n - 1.0 - x) * (n - 2.0 - x),
            Identity::T2 | Identity::T3 | Identity::T4 | Identity::T5 => (x - 1.0) * (n - 1.0 - x),
            Identity::T6 => (x - 1.0) * (x - 2.0),
            Identity::V1 => (n - x) * (n - 1.0 - x),
            Identity::V2 | Identity::V3 => (x - 1.0) * (n - x),
            Identity::TC1 | Identity::TC2 => n - 1.0 - x,
            Identity::TC3 => 1.0,
        }
    }

    pub fn lhs(self, n_sites: usize, l: usize, i: usize) -> Result<HcbOperator> {
        let strings = self.strings(n_sites, l, i);
        HcbOperator::from_strings(n_sites, strings.iter().map(Vec::as_slice), format!("{self} lhs"))
    }

    pub fn rhs(self, n_sites: usize, l: usize, i: usize) -> Result<HcbOperator> {
        let f = HcbOperator::number_function(n_sites, self.number_factor(n_sites))?;
        let tail = if self.is_interaction() { HcbOperator::number(i, n_sites)? } else { HcbOperator::hop(l, i, n_sites)? };
        Ok(HcbOperator { n_sites, matrix: f.matrix * tail.matrix, label: format!("{self} rhs") })
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Identity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Identity::ALL
            .into_iter()
            .find(|id| id.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown identity `{s}`")))
    }
}

/// Valid `(l, i)` index pairs for an identity.
fn index_pairs(id: Identity, n_sites: usize) -> Vec<(usize, usize)> {
    if id.is_interaction() {
        (0..n_sites).map(|i| (i, i)).collect()
    } else {
        (0..n_sites).flat_map(|l| (0..n_sites).filter(move |&i| i != l).map(move |i| (l, i))).collect()
    }
}

fn check_identity_sites(n_sites: usize) -> Result<()> {
    if !(4..=8).contains(&n_sites) {
        return Err(Error::InvalidSiteCount { n_sites, reason: "identity checks need 4..=8 sites" });
    }
    Ok(())
}

/// Maximum entry of `LHS − RHS` over every valid `(l, i)` pair.
pub fn verify_identity(id: Identity, n_sites: usize) -> Result<f64> {
    check_identity_sites(n_sites)?;
    index_pairs(id, n_sites)
        .into_par_iter()
        .map(|(l, i)| Ok((id.lhs(n_sites, l, i)?.matrix - id.rhs(n_sites, l, i)?.matrix).amax()))
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
}

/// Maximum entry of `A^{li} − B^{li}` over pairs, for operators that should
/// coincide (for example `T2` and `T5`).
pub fn identity_difference(a: Identity, b: Identity, n_sites: usize) -> Result<f64> {
    check_identity_sites(n_sites)?;
    if a.is_interaction() != b.is_interaction() {
        return Err(Error::InvalidArgument(format!("{a} and {b} act on different index sets")));
    }
    index_pairs(a, n_sites)
        .into_par_iter()
        .map(|(l, i)| Ok((a.lhs(n_sites, l, i)?.matrix - b.lhs(n_sites, l, i)?.matrix).amax()))
        .try_reduce(|| 0.0, |x, y| Ok(x.max(y)))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: Identity,
    #[serde(rename = "N")]
    pub n_sites: usize,
    pub residual: f64,
}

pub fn verify_all_identities(n_sites: usize) -> Result<Vec<IdentityReport>> {
    check_identity_sites(n_sites)?;
    Identity::ALL
        .par_iter()
        .map(|&identity| Ok(IdentityReport { identity, n_sites, residual: verify_identity(identity, n_sites)? }))
        .collect()
}

/// Coefficients of the third-order effective Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThirdOrderCoefficients {
    pub t: [f64; 6],
    pub v: [f64; 3],
    pub tc: [f64; 3],
}

impl ThirdOrderCoefficients {
    /// Distinct positive values, useful as a generic test point.
    pub fn generic() -> Self {
        Self { t: [0.7, 1.1, 0.3, 0.9, 1.3, 0.5], v: [0.4, 0.8, 0.6], tc: [0.2, 1.7, 0.35] }
    }

    pub fn zero() -> Self {
        Self { t: [0.0; 6], v: [0.0; 3], tc: [0.0; 3] }
    }

    fn of(&self, id: Identity) -> f64 {
        match id {
            Identity::T1 => self.t[0],
            Identity::T2 => self.t[1],
            Identity::T3 => self.t[2],
            Identity::T4 => self.t[3],
            Identity::T5 => self.t[4],
            Identity::T6 => self.t[5],
            Identity::V1 => self.v[0],
            Identity::V2 => self.v[1],
            Identity::V3 => self.v[2],
            Identity::TC1 => self.tc[0],
            Identity::TC2 => self.tc[1],
            Identity::TC3 => self.tc[2],
        }
    }

    /// Hopping prefactor `T(N̂)` after substituting the identities.
    pub fn hopping_factor(&self, n_sites: usize, x: f64) -> f64 {
        Identity::ALL.iter().filter(|id| !id.is_interaction()).map(|&id| self.of(id) * id.number_factor(n_sites)(x)).sum()
    }

    /// Interaction prefactor `V(N̂)` after substituting the identities.
    pub fn interaction_factor(&self, n_sites: usize, x: f64) -> f64 {
        Identity::ALL.iter().filter(|id| id.is_interaction()).map(|&id| self.of(id) * id.number_factor(n_sites)(x)).sum()
    }
}

/// `Σ_{i, l≠i} [Σ t_n T_n + Σ t_cn T_Cn] + Σ_i Σ v_n V_n` from the explicit
/// operator strings.
pub fn third_order_hamiltonian(n_sites: usize, coeffs: &ThirdOrderCoefficients) -> Result<HcbOperator> {
    let mut h = HcbOperator::zero(n_sites)?;
    for id in Identity::ALL {
        let c = coeffs.of(id);
        if c == 0.0 {
            continue;
        }
        for (l, i) in index_pairs(id, n_sites) {
            h.matrix += id.lhs(n_sites, l, i)?.matrix * c;
        }
    }
    h.label = "H3".into();
    Ok(h)
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct H3Check {
    pub n_sites: usize,
    /// `‖[H⁽³⁾, N̂]‖_F`.
    pub number_commutator: f64,
    /// Largest entry of `H⁽³⁾ − [Σ_{l≠i} T(N̂) b†_l b_i + Σ_i V(N̂) n_i]`.
    pub closed_form_residual: f64,
    /// Eigenspace mismatch with the infinite-range Heisenberg model in the
    /// half-filled sector (both directions).
    pub half_filling_residual: f64,
    pub hermiticity_defect: f64,
}

/// Assembles `H⁽³⁾` from explicit strings and checks it against the
/// number-operator closed form and the infinite-range Heisenberg model.
pub fn h3_structure_check(n_sites: usize, coeffs: &ThirdOrderCoefficients) -> Result<H3Check> {
    if !(4..=6).contains(&n_sites) {
        return Err(Error::InvalidSiteCount { n_sites, reason: "third-order structure check needs 4..=6 sites" });
    }
    let h = third_order_hamiltonian(n_sites, coeffs)?.matrix;
    let total = HcbOperator::total_number(n_sites)?.matrix;
    let number_commutator = (&h * &total - &total * &h).norm();

    let mut closed = DMatrix::<f64>::zeros(h.nrows(), h.ncols());
    let t_of = HcbOperator::number_function(n_sites, |x| coeffs.hopping_factor(n_sites, x))?.matrix;
    let v_of = HcbOperator::number_function(n_sites, |x| coeffs.interaction_factor(n_sites, x))?.matrix;
    for i in 0..n_sites {
        closed += &v_of * HcbOperator::number(i, n_sites)?.matrix;
        for l in (0..n_sites).filter(|&l| l != i) {
            closed += &t_of * HcbOperator::hop(l, i, n_sites)?.matrix;
        }
    }
    let closed_form_residual = (&h - closed).amax();

    let sector = SectorBasis::new(n_sites, n_sites / 2);
    let states = sector.states();
    let block = DMatrix::from_fn(states.len(), states.len(), |r, c| h[(states[r], states[c])]);
    let irhm = irhm_model(n_sites, 1.0).sector_block(&sector);
    let (a, b) = (to_complex(&block), to_complex(&irhm));
    let half_filling_residual =
        eigenspace_invariance_residual(&a, &b, 1e-9).max(eigenspace_invariance_residual(&b, &a, 1e-9));
    let hermiticity_defect = (&h - h.transpose()).amax();
    Ok(H3Check { n_sites, number_commutator, closed_form_residual, half_filling_residual, hermiticity_defect })
}
