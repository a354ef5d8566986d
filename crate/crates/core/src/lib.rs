//! Two-level PT-symmetric non-Hermitian quantum mechanics.
//!
//! [`pt`] builds the Hamiltonian and its spectral data (metric `η₊`, `C`,
//! the similarity map `G` and the Hermitian partner `H′`). [`inner`] evaluates
//! the named inner products, [`transitions`] evolves flavour states and turns
//! them into probabilities, and [`scheme`] exposes those probability rules by
//! name. [`neutrino`] maps the two-level model onto νμ/ντ vacuum
//! oscillations; [`oracle`] holds independent brute-force cross-checks.

pub mod inner;
pub mod linalg;
pub mod neutrino;
pub mod oracle;
pub mod pt;
pub mod scheme;
pub mod transitions;

pub use inner::{InnerProductSpec, NamedProduct};
pub use linalg::{Complex, Mat2, Vec2};
pub use pt::{decompose, PTParams, PhaseClass, SpectralData};
pub use scheme::{SchemeRegistry, TransitionScheme};
pub use transitions::Flavor;
