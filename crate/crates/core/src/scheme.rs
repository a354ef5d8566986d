//! Named transition-probability schemes.
//!
//! Each way of turning an evolved flavour state into a probability sits
//! behind [`TransitionScheme`] and is looked up by name in a
//! [`SchemeRegistry`], so callers (the CLI in particular) can pick one at
//! runtime.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::inner::NamedProduct;
use crate::pt::SpectralData;
use crate::transitions::{
    amplitude_raw, hermitian_picture_probability, probability_cpt, Flavor, TransitionError,
    TransitionResult,
};

pub trait TransitionScheme: Send + Sync {
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    /// Whether rows of the probability matrix sum to one for every `t`.
    fn conserves_probability(&self) -> bool;

    fn probability(
        &self,
        sd: &SpectralData,
        from: Flavor,
        to: Flavor,
        t: f64,
    ) -> Result<TransitionResult, TransitionError>;
}

/// Final states are the CPT eigenstates `|ũ_β⟩`.
#[derive(Debug, Default, Clone, Copy)]
pub struct CptEigenstate;

impl TransitionScheme for CptEigenstate {
    fn name(&self) -> &'static str {
        "cpt-eigenstate"
    }

    fn description(&self) -> &'static str {
        "CPT product, CPT-eigenstate final states (conserving)"
    }

    fn conserves_probability(&self) -> bool {
        true
    }

    fn probability(
        &self,
        sd: &SpectralData,
        from: Flavor,
        to: Flavor,
        t: f64,
    ) -> Result<TransitionResult, TransitionError> {
        Ok(probability_cpt(sd, from, to, t))
    }
}

/// Raw flavour final states under a positive-definite metric product.
#[derive(Debug, Clone, Copy)]
pub struct RawFlavor {
    product: NamedProduct,
}

impl RawFlavor {
    pub fn new(product: NamedProduct) -> Self {
        Self { product }
    }
}

impl TransitionScheme for RawFlavor {
    fn name(&self) -> &'static str {
        match self.product {
            NamedProduct::CPT => "raw-cpt",
            NamedProduct::EtaPlus => "raw-eta-plus",
            NamedProduct::T => "raw-t",
            NamedProduct::Orthogonal => "raw-orthogonal",
            NamedProduct::P => "raw-p",
            NamedProduct::PT => "raw-pt",
        }
    }

    fn description(&self) -> &'static str {
        match self.product {
            NamedProduct::CPT => "CPT product, raw flavour final states (non-conserving)",
            NamedProduct::EtaPlus => "eta+ product, raw flavour final states (non-conserving)",
            NamedProduct::T => "Euclidean product, raw flavour final states",
            _ => "indefinite product (rejected at evaluation)",
        }
    }

    fn conserves_probability(&self) -> bool {
        false
    }

    fn probability(
        &self,
        sd: &SpectralData,
        from: Flavor,
        to: Flavor,
        t: f64,
    ) -> Result<TransitionResult, TransitionError> {
        amplitude_raw(sd, self.product, from, to, t)
    }
}

/// `G`-transformed states evolved under the Hermitian `H′`, Euclidean product.
#[derive(Debug, Default, Clone, Copy)]
pub struct HermitianPicture;

impl TransitionScheme for HermitianPicture {
    fn name(&self) -> &'static str {
        "hermitian-picture"
    }

    fn description(&self) -> &'static str {
        "G|u> evolved under the Hermitian H', Euclidean product (equals raw-eta-plus)"
    }

    fn conserves_probability(&self) -> bool {
        false
    }

    fn probability(
        &self,
        sd: &SpectralData,
        from: Flavor,
        to: Flavor,
        t: f64,
    ) -> Result<TransitionResult, TransitionError> {
        Ok(hermitian_picture_probability(sd, from, to, t))
    }
}

#[derive(Clone, Default)]
pub struct SchemeRegistry {
    schemes: BTreeMap<&'static str, Arc<dyn TransitionScheme>>,
}

impl SchemeRegistry {
    pub const DEFAULT_SCHEME: &'static str = "cpt-eigenstate";

    pub fn new() -> Self {
        Self::default()
    }

    /// Registry holding every built-in scheme.
    pub fn with_builtins() -> Self {
        let mut r = Self::new();
        r.register(Arc::new(CptEigenstate));
        r.register(Arc::new(RawFlavor::new(NamedProduct::CPT)));
        r.register(Arc::new(RawFlavor::new(NamedProduct::EtaPlus)));
        r.register(Arc::new(RawFlavor::new(NamedProduct::T)));
        r.register(Arc::new(HermitianPicture));
        r
    }

    /// Adds a scheme, replacing any existing one with the same name.
    pub fn register(&mut self, scheme: Arc<dyn TransitionScheme>) {
        self.schemes.insert(scheme.name(), scheme);
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn TransitionScheme>> {
        self.schemes.get(name).cloned()
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.schemes.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Arc<dyn TransitionScheme>> {
        self.schemes.values()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pt::{decompose, PTParams};

    #[test]
    fn builtins_are_registered_by_name() {
        let r = SchemeRegistry::with_builtins();
        let names: Vec<_> = r.names().collect();
        assert_eq!(
            names,
            [
                "cpt-eigenstate",
                "hermitian-picture",
                "raw-cpt",
                "raw-eta-plus",
                "raw-t"
            ]
        );
        for s in r.iter() {
            assert_eq!(r.get(s.name()).unwrap().name(), s.name());
        }
        assert!(r.get("nope").is_none());
        assert!(r.get(SchemeRegistry::DEFAULT_SCHEME).is_some());
    }

    #[test]
    fn only_conserving_schemes_sum_to_one() {
        let sd = decompose(&PTParams::new(1.0, 2.0, 0.5).unwrap()).unwrap();
        let r = SchemeRegistry::with_builtins();
        for s in r.iter() {
            let sum: f64 = Flavor::BOTH
                .into_iter()
                .map(|to| s.probability(&sd, Flavor::A, to, 0.8).unwrap().probability)
                .sum();
            if s.conserves_probability() {
                assert!((sum - 1.0).abs() <= 1e-12, "{}", s.name());
            } else if s.name() != "raw-t" {
                assert!((sum - 1.0).abs() > 1e-6, "{}", s.name());
            }
        }
    }

    #[test]
    fn hermitian_picture_matches_raw_eta_plus() {
        let sd = decompose(&PTParams::new(0.9, 1.3, -0.6).unwrap()).unwrap();
        let r = SchemeRegistry::with_builtins();
        let (hp, raw) = (
            r.get("hermitian-picture").unwrap(),
            r.get("raw-eta-plus").unwrap(),
        );
        for t in [0.1, 2.0] {
            let a = hp.probability(&sd, Flavor::B, Flavor::A, t).unwrap();
            let b = raw.probability(&sd, Flavor::B, Flavor::A, t).unwrap();
            assert!((a.probability - b.probability).abs() <= 1e-12);
        }
    }

    #[test]
    fn custom_scheme_can_replace_builtin() {
        struct Always;
        impl TransitionScheme for Always {
            fn name(&self) -> &'static str {
                "cpt-eigenstate"
            }
            fn description(&self) -> &'static str {
                "stub"
            }
            fn conserves_probability(&self) -> bool {
                true
            }
            fn probability(
                &self,
                _: &SpectralData,
                _: Flavor,
                _: Flavor,
                _: f64,
            ) -> Result<TransitionResult, TransitionError> {
                Ok(TransitionResult {
                    amplitude: crate::linalg::re(1.0),
                    probability: 0.5,
                    normalization: 2.0,
                })
            }
        }
        let mut r = SchemeRegistry::with_builtins();
        r.register(Arc::new(Always));
        assert_eq!(r.get("cpt-eigenstate").unwrap().description(), "stub");
    }
}
