//! Single-polariton band structure of the four-component light-matter
//! Hamiltonian: plane-wave Bloch eigenproblem, eigenvector-overlap band
//! tracking, dark/bright labelling, Wannier functions and hopping
//! amplitudes.

mod bloch;
mod coupling;
mod solve;
mod wannier;

pub use bloch::bloch_hamiltonian;
pub use coupling::{coupling_fourier, CouplingFourier};
pub use solve::{band_gap, solve_bands, BandStructure};
pub use wannier::{wannier_transform, WannierBand};

use serde::{Deserialize, Serialize};

/// Field components of the polariton spinor, in basis order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Component {
    /// Forward-propagating photon field.
    PhotonForward = 0,
    /// Backward-propagating photon field.
    PhotonBackward = 1,
    /// Intermediate (lossy) atomic state.
    Intermediate = 2,
    /// Rydberg state.
    Rydberg = 3,
}

pub const N_COMPONENTS: usize = 4;

/// Band classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BandLabel {
    DarkUpper,
    DarkLower,
    Bright,
    Other,
}

impl std::fmt::Display for BandLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            BandLabel::DarkUpper => "dark_upper",
            BandLabel::DarkLower => "dark_lower",
            BandLabel::Bright => "bright",
            BandLabel::Other => "other",
        };
        f.write_str(s)
    }
}
