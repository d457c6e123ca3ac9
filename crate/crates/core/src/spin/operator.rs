use super::{check_site, single_site_action, sz_of, PureState, SectorBasis, SpinOp};
use crate::error::{Error, Result};
use crate::linalg::{hermiticity_defect, C64};
use nalgebra::{DMatrix, DVector};

/// Dense operator on the `2^N` spin Hilbert space.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    pub matrix: DMatrix<C64>,
    pub label: String,
}

impl OperatorMatrix {
    pub fn new(matrix: DMatrix<C64>, label: impl Into<String>) -> Self {
        Self { matrix, label: label.into() }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_hermitian(&self) -> bool {
        hermiticity_defect(&self.matrix) < 1e-12
    }
}

/// `op` acting on `site` of an `n_sites` chain.
pub fn site_operator(op: SpinOp, site: usize, n_sites: usize) -> Result<OperatorMatrix> {
    check_site(site, n_sites)?;
    let dim = 1 << n_sites;
    let mut m = DMatrix::<C64>::zeros(dim, dim);
    for index in 0..dim {
        for (target, coeff) in single_site_action(op, site, index) {
            m[(target, index)] += coeff;
        }
    }
    Ok(OperatorMatrix::new(m, format!("{op:?}[{site}]")))
}

/// `Σ_i op_i`.
pub fn total_spin_operator(op: SpinOp, n_sites: usize) -> OperatorMatrix {
    let dim = 1 << n_sites;
    let mut m = DMatrix::<C64>::zeros(dim, dim);
    for site in 0..n_sites {
        for index in 0..dim {
            for (target, coeff) in single_site_action(op, site, index) {
                m[(target, index)] += coeff;
            }
        }
    }
    OperatorMatrix::new(m, format!("Σ{op:?}"))
}

/// One exchange bond `J⊥ (SˣSˣ + SʸSʸ) + J∥ SᶻSᶻ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bond {
    pub i: usize,
    pub j: usize,
    pub j_perp: f64,
    pub j_par: f64,
}

/// Real XXZ-type spin model with an optional uniform field `h Σ Sᶻ`.
///
/// Every Hamiltonian in this crate (infinite-range, ring, phonon-dressed)
/// is of this form, and all of them conserve `Σ Sᶻ`.
#[derive(Clone, Debug)]
pub struct XxzModel {
    pub n_sites: usize,
    pub bonds: Vec<Bond>,
    pub field: f64,
}

impl XxzModel {
    pub fn new(n_sites: usize) -> Self {
        Self { n_sites, bonds: Vec::new(), field: 0.0 }
    }

    pub fn bond(mut self, i: usize, j: usize, j_perp: f64, j_par: f64) -> Self {
        self.bonds.push(Bond { i, j, j_perp, j_par });
        self
    }

    pub fn with_field(mut self, field: f64) -> Self {
        self.field = field;
        self
    }

    /// Equal couplings on all pairs `i < j`.
    pub fn all_to_all(n_sites: usize, j_perp: f64, j_par: f64) -> Self {
        let mut m = Self::new(n_sites);
        for i in 0..n_sites {
            for j in i + 1..n_sites {
                m.bonds.push(Bond { i, j, j_perp, j_par });
            }
        }
        m
    }

    fn diagonal(&self, index: usize) -> f64 {
        let zz: f64 = self.bonds.iter().map(|b| b.j_par * sz_of(index, b.i) * sz_of(index, b.j)).sum();
        let z: f64 = (0..self.n_sites).map(|s| sz_of(index, s)).sum();
        zz + self.field * z
    }

    /// Off-diagonal images `(target, amplitude)` of one basis state.
    fn hops(&self, index: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.bonds.iter().filter_map(move |b| {
            let differ = (index >> b.i & 1) != (index >> b.j & 1);
            (differ && b.j_perp != 0.0).then(|| (index ^ (1 << b.i) ^ (1 << b.j), 0.5 * b.j_perp))
        })
    }

    pub fn dense(&self) -> DMatrix<f64> {
        let dim = 1 << self.n_sites;
        let mut m = DMatrix::<f64>::zeros(dim, dim);
        for index in 0..dim {
            m[(index, index)] += self.diagonal(index);
            for (target, amp) in self.hops(index) {
                m[(target, index)] += amp;
            }
        }
        m
    }

    pub fn operator(&self, label: impl Into<String>) -> OperatorMatrix {
        OperatorMatrix::new(self.dense().map(|x| C64::new(x, 0.0)), label)
    }

    /// `H|ψ⟩` without forming the matrix.
    pub fn apply(&self, state: &PureState) -> Result<PureState> {
        if state.n_sites() != self.n_sites {
            return Err(Error::DimensionMismatch { expected: 1 << self.n_sites, found: state.dim() });
        }
        let amps = state.amplitudes();
        let mut out = DVector::<C64>::zeros(amps.len());
        for (index, amp) in amps.iter().enumerate() {
            if amp.norm_sqr() == 0.0 {
                continue;
            }
            out[index] += amp * self.diagonal(index);
            for (target, h) in self.hops(index) {
                out[target] += amp * h;
            }
        }
        PureState::from_vector(self.n_sites, out)
    }

    /// Block of the Hamiltonian inside one `Σ Sᶻ` sector.
    pub fn sector_block(&self, sector: &SectorBasis) -> DMatrix<f64> {
        let dim = sector.dim();
        let mut m = DMatrix::<f64>::zeros(dim, dim);
        for (col, &index) in sector.states().iter().enumerate() {
            m[(col, col)] += self.diagonal(index);
            for (target, amp) in self.hops(index) {
                let row = sector.position(target).expect("XXZ hops conserve Sz");
                m[(row, col)] += amp;
            }
        }
        m
    }
}
