//! Explicit homogeneous singlet states for four and six spins.
//!
//! Each state is stored as its amplitude expansion: groups of basis kets
//! sharing a power of a root of unity. The singlet-superposition form is kept
//! alongside so the two can be cross-checked.

use crate::error::Result;
use crate::linalg::C64;
use crate::spin::{spin_string_index, PureState};
use crate::valence_bond::{singlet_product, DimerCovering};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NamedState {
    /// Four-qubit Higuchi-Sudbery state.
    Hs,
    Psi6a,
    Psi6b,
}

impl FromStr for NamedState {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "HS" => Ok(Self::Hs),
            "PSI6A" => Ok(Self::Psi6a),
            "PSI6B" => Ok(Self::Psi6b),
            other => Err(crate::Error::InvalidArgument(format!("unknown state {other}"))),
        }
    }
}

/// `(power of the root, kets with +1, kets with −1)`
type Group = (u32, &'static [&'static str], &'static [&'static str]);

const HS_TERMS: &[Group] = &[
    (0, &["udud", "dudu"], &[]),
    (1, &["uddu", "duud"], &[]),
    (2, &["uudd", "dduu"], &[]),
];

const PSI6A_TERMS: &[Group] = &[
    (0, &["ududud"], &["dududu"]),
    (1, &["ududdu", "udduud", "duudud"], &["uddudu", "duuddu", "duduud"]),
    (2, &["uuddud", "uduudd", "dduduu"], &["uududd", "dudduu", "dduudu"]),
    (3, &["uuuddd", "uddduu", "dduuud"], &["uudddu", "duuudd", "ddduuu"]),
];

const PSI6B_TERMS: &[Group] = &[
    (0, &["ududud"], &["dududu"]),
    (1, &["uduudd", "uddduu", "duudud"], &["uddudu", "duuudd", "dudduu"]),
    (2, &["uuddud", "ududdu", "dduuud"], &["uudddu", "duduud", "dduudu"]),
    (3, &["uuuddd", "dduduu", "udduud"], &["uududd", "duuddu", "ddduuu"]),
];

impl NamedState {
    pub fn n_sites(self) -> usize {
        match self {
            Self::Hs => 4,
            Self::Psi6a | Self::Psi6b => 6,
        }
    }

    /// `e^{2πi/3}` for the four-site state, `i` for the six-site ones.
    pub fn default_root(self) -> C64 {
        match self {
            Self::Hs => C64::from_polar(1.0, 2.0 * PI / 3.0),
            Self::Psi6a | Self::Psi6b => C64::new(0.0, 1.0),
        }
    }

    fn terms(self) -> &'static [Group] {
        match self {
            Self::Hs => HS_TERMS,
            Self::Psi6a => PSI6A_TERMS,
            Self::Psi6b => PSI6B_TERMS,
        }
    }
}

/// Amplitude expansion evaluated with the given root of unity, normalized.
pub fn named_state_with_root(name: NamedState, root: C64) -> Result<PureState> {
    let n = name.n_sites();
    let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
    for &(power, plus, minus) in name.terms() {
        let phase = root.powu(power);
        for ket in plus {
            amps[spin_string_index(ket)?] += phase;
        }
        for ket in minus {
            amps[spin_string_index(ket)?] -= phase;
        }
    }
    PureState::from_amplitudes(n, amps)?.normalized()
}

pub fn build_named_state(name: NamedState) -> Result<PureState> {
    named_state_with_root(name, name.default_root())
}

/// The same state written as a superposition of singlet products, normalized.
///
/// Pairs keep the orientation in which the singlets are usually written
/// (e.g. `(5, 4)` rather than `(4, 5)`). For the four-site state the
/// coefficients `(−ω, ω²)` on `Φ₀₁Φ₂₃` and `Φ₀₃Φ₁₂` reproduce the expansion
/// exactly.
pub fn named_state_superposition(name: NamedState) -> Result<PureState> {
    let w = name.default_root();
    let terms: Vec<(C64, Vec<(usize, usize)>)> = match name {
        NamedState::Hs => vec![(-w, vec![(0, 1), (2, 3)]), (w * w, vec![(0, 3), (1, 2)])],
        NamedState::Psi6a => vec![
            (w, vec![(0, 1), (2, 3), (5, 4)]),
            (w.powu(2), vec![(5, 0), (1, 2), (3, 4)]),
            (w.powu(3), vec![(0, 3), (1, 4), (2, 5)]),
        ],
        NamedState::Psi6b => vec![
            (w, vec![(0, 1), (2, 5), (3, 4)]),
            (w.powu(2), vec![(1, 2), (0, 3), (4, 5)]),
            (w.powu(3), vec![(0, 5), (1, 4), (2, 3)]),
        ],
    };
    let n = name.n_sites();
    let mut state = PureState::zero(n)?;
    for (coeff, pairs) in terms {
        let product = singlet_product(&DimerCovering::new(pairs, n)?, n)?;
        state = state.add_scaled(coeff, &product)?;
    }
    state.normalized()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::sz_total_eigencheck;

    #[test]
    fn expansion_equals_singlet_form() {
        for name in [NamedState::Hs, NamedState::Psi6a, NamedState::Psi6b] {
            let a = build_named_state(name).unwrap();
            let b = named_state_superposition(name).unwrap();
            assert!(a.distance_up_to_phase(&b) < 1e-14, "{name:?}");
        }
    }

    #[test]
    fn four_site_expansion_needs_no_global_phase() {
        let a = build_named_state(NamedState::Hs).unwrap();
        let b = named_state_superposition(NamedState::Hs).unwrap();
        assert!((a.amplitudes() - b.amplitudes()).norm() < 1e-14);
    }

    #[test]
    fn amplitude_counts() {
        let hs = build_named_state(NamedState::Hs).unwrap();
        let nonzero: Vec<_> = hs.amplitudes().iter().filter(|z| z.norm() > 1e-12).collect();
        assert_eq!(nonzero.len(), 6);
        assert!(nonzero.iter().all(|z| (z.norm() - 6f64.sqrt().recip()).abs() < 1e-14));
        for name in [NamedState::Psi6a, NamedState::Psi6b] {
            let s = build_named_state(name).unwrap();
            let nonzero: Vec<_> = s.amplitudes().iter().filter(|z| z.norm() > 1e-12).collect();
            assert_eq!(nonzero.len(), 20);
            assert!(nonzero.iter().all(|z| (z.norm() - 20f64.sqrt().recip()).abs() < 1e-14));
            assert_eq!(sz_total_eigencheck(&s).eigenvalue, Some(0.0));
        }
    }

    #[test]
    fn parse_names() {
        assert_eq!("hs".parse::<NamedState>().unwrap(), NamedState::Hs);
        assert_eq!("PSI6B".parse::<NamedState>().unwrap(), NamedState::Psi6b);
        assert!("psi8".parse::<NamedState>().is_err());
    }
}
