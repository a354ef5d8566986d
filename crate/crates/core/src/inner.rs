//! Generic inner-product engine `⟨ψ|φ⟩_η = (η|ψ⟩)^T · |φ⟩`.
//!
//! An `η` is a linear matrix optionally preceded by complex conjugation (the
//! time-reversal T). The six named products differ only in those two
//! ingredients, so they are all represented by [`InnerProductSpec`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{Complex, Mat2, Vec2};
use crate::pt::SpectralData;

/// Largest imaginary part tolerated in a norm before it is reported as a bug.
pub const NORM_IMAG_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InnerError {
    #[error("norm {value} has a non-negligible imaginary part")]
    NonRealNorm { value: Complex },
    #[error("unknown inner product `{0}`")]
    UnknownProduct(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InnerProductSpec {
    pub linear_part: Mat2,
    /// Conjugate `|ψ⟩` before applying `linear_part`.
    pub antilinear: bool,
}

impl InnerProductSpec {
    pub fn new(linear_part: Mat2, antilinear: bool) -> Self {
        Self {
            linear_part,
            antilinear,
        }
    }

    /// The Euclidean product, `η = T`.
    pub fn euclidean() -> Self {
        Self::new(Mat2::identity(), true)
    }

    /// Equivalent sesquilinear matrix `M` with `⟨ψ|φ⟩ = ψ^† M φ`, or the
    /// bilinear one `ψ^T M φ` when the product is linear.
    pub fn form_matrix(&self) -> Mat2 {
        self.linear_part.transpose()
    }
}

pub fn inner(ip: &InnerProductSpec, psi: &Vec2, phi: &Vec2) -> Complex {
    let bra = if ip.antilinear {
        ip.linear_part.apply(&psi.conj())
    } else {
        ip.linear_part.apply(psi)
    };
    bra.dot(phi)
}

/// `⟨ψ|ψ⟩_η`, checked to be real.
pub fn norm(ip: &InnerProductSpec, psi: &Vec2) -> Result<f64, InnerError> {
    let value = inner(ip, psi, psi);
    if value.im.abs() > NORM_IMAG_TOL * value.re.abs().max(1.0) {
        return Err(InnerError::NonRealNorm { value });
    }
    Ok(value.re)
}

/// Pairwise products: `gram[i][j] = ⟨b_i|b_j⟩_η`.
pub fn gram(ip: &InnerProductSpec, basis: &[Vec2; 2]) -> Mat2 {
    let e = |i: usize, j: usize| inner(ip, &basis[i], &basis[j]);
    Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NamedProduct {
    Orthogonal,
    T,
    P,
    PT,
    CPT,
    EtaPlus,
}

impl NamedProduct {
    pub const ALL: [NamedProduct; 6] = [
        NamedProduct::Orthogonal,
        NamedProduct::T,
        NamedProduct::P,
        NamedProduct::PT,
        NamedProduct::CPT,
        NamedProduct::EtaPlus,
    ];

    /// Only T, CPT and η₊ give a positive norm for every nonzero vector.
    pub fn is_positive_definite(&self) -> bool {
        matches!(
            self,
            NamedProduct::T | NamedProduct::CPT | NamedProduct::EtaPlus
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            NamedProduct::Orthogonal => "orthogonal",
            NamedProduct::T => "t",
            NamedProduct::P => "p",
            NamedProduct::PT => "pt",
            NamedProduct::CPT => "cpt",
            NamedProduct::EtaPlus => "eta-plus",
        }
    }
}

impl fmt::Display for NamedProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedProduct {
    type Err = InnerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        NamedProduct::ALL
            .into_iter()
            .find(|p| p.name() == key)
            .or(match key.as_str() {
                "eta" | "eta+" | "etaplus" => Some(NamedProduct::EtaPlus),
                "euclidean" => Some(NamedProduct::T),
                _ => None,
            })
            .ok_or_else(|| InnerError::UnknownProduct(s.to_string()))
    }
}

pub fn resolve(name: NamedProduct, sd: &SpectralData) -> InnerProductSpec {
    match name {
        NamedProduct::Orthogonal => InnerProductSpec::new(Mat2::identity(), false),
        NamedProduct::T => InnerProductSpec::new(Mat2::identity(), true),
        NamedProduct::P => InnerProductSpec::new(Mat2::parity(), false),
        NamedProduct::PT => InnerProductSpec::new(Mat2::parity(), true),
        NamedProduct::CPT => InnerProductSpec::new(sd.cp(), true),
        NamedProduct::EtaPlus => InnerProductSpec::new(sd.eta_plus_inv(), true),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::re;
    use crate::pt::{decompose, PTParams};
    use std::f64::consts::FRAC_PI_6;

    fn flavor() -> [Vec2; 2] {
        [Vec2::basis(0), Vec2::basis(1)]
    }

    fn reference() -> SpectralData {
        decompose(&PTParams::new(1.0, 2.0, FRAC_PI_6).unwrap()).unwrap()
    }

    #[test]
    fn t_product_on_flavor_basis() {
        let ip = resolve(NamedProduct::T, &reference());
        let [a, b] = flavor();
        assert_eq!(inner(&ip, &a, &b), re(0.0));
        assert_eq!(inner(&ip, &a, &a), re(1.0));
    }

    #[test]
    fn pt_product_on_mass_basis() {
        let sd = reference();
        let ip = resolve(NamedProduct::PT, &sd);
        assert!((inner(&ip, sd.u_plus(), sd.u_plus()) - re(1.0)).norm() <= 1e-12);
        assert!((inner(&ip, sd.u_minus(), sd.u_minus()) - re(-1.0)).norm() <= 1e-12);
    }

    #[test]
    fn p_product_flavor_gram() {
        let ip = resolve(NamedProduct::P, &reference());
        assert_eq!(gram(&ip, &flavor()), Mat2::parity());
        // nonzero vector with zero norm
        assert_eq!(inner(&ip, &Vec2::basis(0), &Vec2::basis(0)), re(0.0));
    }

    #[test]
    fn cpt_and_eta_gram_tables() {
        let sd = reference();
        for name in [NamedProduct::CPT, NamedProduct::EtaPlus] {
            let ip = resolve(name, &sd);
            assert!(gram(&ip, &sd.mass_basis()).max_abs_diff(&Mat2::identity()) <= 1e-12);
            assert!(gram(&ip, &flavor()).max_abs_diff(sd.eta_plus()) <= 1e-12);
        }
    }

    #[test]
    fn cpt_reduces_to_t_in_hermitian_limit() {
        let sd = decompose(&PTParams::new(0.7, 1.2, 0.0).unwrap()).unwrap();
        let cpt = resolve(NamedProduct::CPT, &sd);
        let t = resolve(NamedProduct::T, &sd);
        assert!(cpt.linear_part.max_abs_diff(&t.linear_part) <= 1e-15);
        assert_eq!(cpt.antilinear, t.antilinear);
    }

    #[test]
    fn norm_checks_reality() {
        let sd = reference();
        let v = Vec2::try_new(Complex::new(0.3, -1.0), Complex::new(2.0, 0.5)).unwrap();
        assert!(norm(&resolve(NamedProduct::CPT, &sd), &v).unwrap() > 0.0);
        // bilinear product of a complex vector with itself is not real
        let err = norm(&resolve(NamedProduct::Orthogonal, &sd), &v).unwrap_err();
        assert!(matches!(err, InnerError::NonRealNorm { .. }));
    }

    #[test]
    fn names_round_trip() {
        for p in NamedProduct::ALL {
            assert_eq!(p.name().parse::<NamedProduct>().unwrap(), p);
        }
        assert_eq!(
            "eta+".parse::<NamedProduct>().unwrap(),
            NamedProduct::EtaPlus
        );
        assert!("bogus".parse::<NamedProduct>().is_err());
    }
}
