//! PT-symmetric two-level Hamiltonians and their operator suite.
//!
//! The Hamiltonian is parameterised as
//!
//! ```text
//! H = [[ρ e^{iϕ},  σ e^{iφ}],
//!      [σ e^{-iφ}, ρ e^{-iϕ}]]
//! ```
//!
//! with `ϕ` the diagonal phase (`varphi`) and `φ` the off-diagonal phase
//! (`phi_offdiag`). Only the symmetric form (`φ = nπ`) is diagonalised here.
//! In the unbroken phase the eigenvectors are fixed to the convention
//!
//! ```text
//! |u±⟩ = (e^{±iα/2}, ±e^{∓iα/2})^T / sqrt(2 cos α),   sin α = ρ sin ϕ / σ
//! ```
//!
//! under which `A⁻¹ = A`, `A = V·G`, and the CPT and η₊ inner products coincide.
//! All other operators are tied to that choice.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{inverse, re, Complex, LinalgError, Mat2, Vec2, I};

/// `|disc| <= PHASE_RTOL · max(σ², ρ²)` classifies as exceptional.
pub const PHASE_RTOL: f64 = 1e-10;

/// Tolerance on `φ mod π` for the symmetric form.
pub const SYMMETRIC_PHASE_TOL: f64 = 1e-12;

/// Largest entry-wise deviation allowed between the `H` passed to
/// [`spectral_decompose`] and the one rebuilt from its parameters.
pub const PARAM_MATCH_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PtError {
    #[error("parameter `{name}` is not finite")]
    NonFinite { name: &'static str },
    #[error("off-diagonal phase {phi_offdiag} is not a multiple of π; H is not symmetric")]
    NotSymmetric { phi_offdiag: f64 },
    #[error(
        "PT symmetry is broken (σ² − ρ² sin² ϕ = {discriminant:e}); eigenvalues {} and {}",
        eigenvalues[0],
        eigenvalues[1]
    )]
    BrokenPhase {
        discriminant: f64,
        eigenvalues: [Complex; 2],
    },
    #[error(
        "exceptional point (σ² − ρ² sin² ϕ = {discriminant:e}): degenerate eigenvalue {eigenvalue}, eigensystem incomplete"
    )]
    ExceptionalPoint { discriminant: f64, eigenvalue: f64 },
    #[error("Hamiltonian does not match its parameters (max deviation {deviation:e})")]
    ParameterMismatch { deviation: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The four real parameters of a PT-symmetric two-level Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PTParams {
    pub rho: f64,
    pub sigma: f64,
    /// Diagonal phase, radians.
    pub varphi: f64,
    /// Off-diagonal phase, radians.
    pub phi_offdiag: f64,
}

impl PTParams {
    /// Symmetric-form parameters (`phi_offdiag = 0`).
    pub fn new(rho: f64, sigma: f64, varphi: f64) -> Result<Self, PtError> {
        Self::general(rho, sigma, varphi, 0.0)
    }

    pub fn general(rho: f64, sigma: f64, varphi: f64, phi_offdiag: f64) -> Result<Self, PtError> {
        let p = Self {
            rho,
            sigma,
            varphi,
            phi_offdiag,
        };
        p.check_finite()?;
        Ok(p)
    }

    fn check_finite(&self) -> Result<(), PtError> {
        for (name, v) in [
            ("rho", self.rho),
            ("sigma", self.sigma),
            ("varphi", self.varphi),
            ("phi_offdiag", self.phi_offdiag),
        ] {
            if !v.is_finite() {
                return Err(PtError::NonFinite { name });
            }
        }
        Ok(())
    }

    /// `σ² − ρ² sin² ϕ`; positive in the unbroken phase.
    pub fn discriminant(&self) -> f64 {
        let s = self.rho * self.varphi.sin();
        self.sigma * self.sigma - s * s
    }

    /// Whether `phi_offdiag` is a multiple of π within tolerance.
    pub fn is_symmetric_form(&self) -> bool {
        let r = self.phi_offdiag / PI;
        (r - r.round()).abs() * PI <= SYMMETRIC_PHASE_TOL
    }

    /// Signed off-diagonal entry of the symmetric form: `σ cos(nπ) = ±σ`.
    pub fn coupling(&self) -> f64 {
        let n = (self.phi_offdiag / PI).round() as i64;
        if n.rem_euclid(2) == 0 {
            self.sigma
        } else {
            -self.sigma
        }
    }

    /// `ϕ = nπ`: the Hermitian limit.
    pub fn is_hermitian_limit(&self) -> bool {
        (self.rho * self.varphi.sin()).abs() <= PHASE_RTOL * self.rho.abs().max(f64::MIN_POSITIVE)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhaseClass {
    Unbroken,
    Exceptional,
    Broken,
}

impl fmt::Display for PhaseClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PhaseClass::Unbroken => "unbroken",
            PhaseClass::Exceptional => "exceptional",
            PhaseClass::Broken => "broken",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PTPhase {
    pub class: PhaseClass,
    /// `σ² − ρ² sin² ϕ`.
    pub discriminant: f64,
}

/// Hamiltonian with an arbitrary off-diagonal phase `phi_offdiag`.
pub fn build_general_hamiltonian(p: &PTParams) -> Mat2 {
    let diag = Complex::from_polar(p.rho, p.varphi);
    let off = Complex::from_polar(p.sigma, p.phi_offdiag);
    Mat2::new(diag, off, off.conj(), diag.conj())
}

/// Symmetric form; requires `phi_offdiag = nπ`.
pub fn build_symmetric_hamiltonian(p: &PTParams) -> Result<Mat2, PtError> {
    if !p.is_symmetric_form() {
        return Err(PtError::NotSymmetric {
            phi_offdiag: p.phi_offdiag,
        });
    }
    let diag = Complex::from_polar(p.rho, p.varphi);
    let s = re(p.coupling());
    Ok(Mat2::new(diag, s, s, diag.conj()))
}

pub fn classify_phase(p: &PTParams) -> PTPhase {
    let discriminant = p.discriminant();
    // σ = 0 with ϕ = nπ: H = ρ cos ϕ · 1, diagonal and Hermitian.
    if p.sigma == 0.0 && p.is_hermitian_limit() {
        return PTPhase {
            class: PhaseClass::Unbroken,
            discriminant,
        };
    }
    let tol = PHASE_RTOL * (p.sigma * p.sigma).max(p.rho * p.rho);
    let class = if discriminant.abs() <= tol {
        PhaseClass::Exceptional
    } else if discriminant > 0.0 {
        PhaseClass::Unbroken
    } else {
        PhaseClass::Broken
    };
    PTPhase {
        class,
        discriminant,
    }
}

/// The full unbroken-phase eigensystem and derived operators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralData {
    params: PTParams,
    hamiltonian: Mat2,
    e_plus: f64,
    e_minus: f64,
    alpha: f64,
    u_plus: Vec2,
    u_minus: Vec2,
    a: Mat2,
    a_inv: Mat2,
    eta_plus: Mat2,
    c: Mat2,
    g: Mat2,
    h_prime: Mat2,
    v: Mat2,
}

impl SpectralData {
    pub fn params(&self) -> &PTParams {
        &self.params
    }

    pub fn hamiltonian(&self) -> &Mat2 {
        &self.hamiltonian
    }

    /// Eigenvalue of `|u₊⟩`.
    pub fn e_plus(&self) -> f64 {
        self.e_plus
    }

    /// Eigenvalue of `|u₋⟩`.
    pub fn e_minus(&self) -> f64 {
        self.e_minus
    }

    /// `β = E₊ − E₋`.
    pub fn beta(&self) -> f64 {
        self.e_plus - self.e_minus
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn sec_alpha(&self) -> f64 {
        1.0 / self.alpha.cos()
    }

    pub fn tan_alpha(&self) -> f64 {
        self.alpha.tan()
    }

    pub fn u_plus(&self) -> &Vec2 {
        &self.u_plus
    }

    pub fn u_minus(&self) -> &Vec2 {
        &self.u_minus
    }

    /// Mass eigenvectors in `(+, −)` order.
    pub fn mass_basis(&self) -> [Vec2; 2] {
        [self.u_plus, self.u_minus]
    }

    /// Diagonalising matrix: `A H A⁻¹ = diag(E₊, E₋)`.
    pub fn a(&self) -> &Mat2 {
        &self.a
    }

    /// Columns are `|u₊⟩`, `|u₋⟩`.
    pub fn a_inv(&self) -> &Mat2 {
        &self.a_inv
    }

    pub fn eta_plus(&self) -> &Mat2 {
        &self.eta_plus
    }

    /// `η₊⁻¹ = η₊^T`.
    pub fn eta_plus_inv(&self) -> Mat2 {
        self.eta_plus.transpose()
    }

    pub fn c(&self) -> &Mat2 {
        &self.c
    }

    /// The linear part of the CPT map, `C·P`.
    pub fn cp(&self) -> Mat2 {
        self.c * Mat2::parity()
    }

    pub fn g(&self) -> &Mat2 {
        &self.g
    }

    pub fn h_prime(&self) -> &Mat2 {
        &self.h_prime
    }

    pub fn v(&self) -> &Mat2 {
        &self.v
    }

    pub fn diagonal(&self) -> Mat2 {
        Mat2::diag(re(self.e_plus), re(self.e_minus))
    }

    /// Apply CPT: `|ψ⟩ ↦ C P |ψ⟩*`.
    pub fn apply_cpt(&self, psi: &Vec2) -> Vec2 {
        self.cp().apply(&psi.conj())
    }
}

/// Diagonalise a symmetric PT-symmetric Hamiltonian in the unbroken phase.
///
/// `h` must be the matrix built from `p`; parameters are taken from `p` rather
/// than read back off the matrix.
pub fn spectral_decompose(h: &Mat2, p: &PTParams) -> Result<SpectralData, PtError> {
    let expected = build_symmetric_hamiltonian(p)?;
    let deviation = h.max_abs_diff(&expected);
    if deviation > PARAM_MATCH_RTOL * expected.max_abs().max(1.0) {
        return Err(PtError::ParameterMismatch { deviation });
    }

    let phase = classify_phase(p);
    let center = p.rho * p.varphi.cos();
    match phase.class {
        PhaseClass::Broken => {
            let half = (-phase.discriminant).sqrt();
            return Err(PtError::BrokenPhase {
                discriminant: phase.discriminant,
                eigenvalues: [Complex::new(center, half), Complex::new(center, -half)],
            });
        }
        PhaseClass::Exceptional => {
            return Err(PtError::ExceptionalPoint {
                discriminant: phase.discriminant,
                eigenvalue: center,
            });
        }
        PhaseClass::Unbroken => {}
    }

    let coupling = p.coupling();
    let alpha = mixing_angle(p);
    let split = coupling * alpha.cos();
    let e_plus = center + split;
    let e_minus = center - split;

    let norm = re(1.0 / (2.0 * alpha.cos()).sqrt());
    let half = Complex::from_polar(1.0, alpha / 2.0);
    let u_plus = Vec2::new(half, half.conj()).scale(norm);
    let u_minus = Vec2::new(half.conj(), -half).scale(norm);

    let a_inv = Mat2::from_columns(&u_plus, &u_minus);
    let a = inverse(&a_inv)?;

    Ok(SpectralData {
        params: *p,
        hamiltonian: *h,
        e_plus,
        e_minus,
        alpha,
        u_plus,
        u_minus,
        a,
        a_inv,
        eta_plus: metric_matrix(alpha),
        c: c_matrix(alpha),
        g: g_matrix(alpha),
        h_prime: Mat2::real(center, split, split, center),
        v: v_matrix(),
    })
}

/// Convenience: build the symmetric `H` from `p` and decompose it.
pub fn decompose(p: &PTParams) -> Result<SpectralData, PtError> {
    let h = build_symmetric_hamiltonian(p)?;
    spectral_decompose(&h, p)
}

/// Principal-branch `α = arcsin(ρ sin ϕ / s)` with `s` the signed coupling.
fn mixing_angle(p: &PTParams) -> f64 {
    let coupling = p.coupling();
    if coupling == 0.0 {
        return 0.0;
    }
    (p.rho * p.varphi.sin() / coupling).clamp(-1.0, 1.0).asin()
}

fn metric_matrix(alpha: f64) -> Mat2 {
    let (sec, tan) = (1.0 / alpha.cos(), alpha.tan());
    Mat2::new(re(sec), -I * tan, I * tan, re(sec))
}

fn c_matrix(alpha: f64) -> Mat2 {
    let (sec, tan) = (1.0 / alpha.cos(), alpha.tan());
    Mat2::new(I * tan, re(sec), re(sec), -I * tan)
}

fn g_matrix(alpha: f64) -> Mat2 {
    let (s, c) = (alpha / 2.0).sin_cos();
    Mat2::new(re(c), -I * s, I * s, re(c)).scale(re(1.0 / alpha.cos().sqrt()))
}

fn v_matrix() -> Mat2 {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    Mat2::real(r, r, r, -r)
}

/// Metric operator `η₊ = [[sec α, −i tan α], [i tan α, sec α]]`.
pub fn build_metric(sd: &SpectralData) -> Mat2 {
    metric_matrix(sd.alpha)
}

/// `C = P η₊ = η₊⁻¹ P = [[i tan α, sec α], [sec α, −i tan α]]`.
pub fn build_c_operator(sd: &SpectralData) -> Mat2 {
    c_matrix(sd.alpha)
}

/// The Hermitian-equivalent picture: `G H G⁻¹ = H′`, `V H′ V⁻¹ = diag(E₊, E₋)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HermitianEquivalent {
    pub g: Mat2,
    pub h_prime: Mat2,
    pub v: Mat2,
    pub u_prime_plus: Vec2,
    pub u_prime_minus: Vec2,
}

pub fn build_hermitian_equivalent(sd: &SpectralData) -> HermitianEquivalent {
    let center = sd.params.rho * sd.params.varphi.cos();
    let split = sd.beta() / 2.0;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    HermitianEquivalent {
        g: g_matrix(sd.alpha),
        h_prime: Mat2::real(center, split, split, center),
        v: v_matrix(),
        u_prime_plus: Vec2::new(re(r), re(r)),
        u_prime_minus: Vec2::new(re(r), re(-r)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_6;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn general_hamiltonian_hermitian_limit() {
        let p = PTParams::general(1.0, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(
            build_general_hamiltonian(&p),
            Mat2::real(1.0, 1.0, 1.0, 1.0)
        );
    }

    #[test]
    fn general_hamiltonian_is_pt_symmetric() {
        // PT H (PT)⁻¹ = P H* P
        for &(rho, sigma, vp, ph) in &[
            (2.0, 1.0, 0.7, -1.3),
            (0.4, 3.0, 2.9, 0.2),
            (1.0, 1.0, 5.0, 3.0),
        ] {
            let p = PTParams::general(rho, sigma, vp, ph).unwrap();
            let h = build_general_hamiltonian(&p);
            let pt = Mat2::parity() * h.conj() * Mat2::parity();
            assert!(pt.max_abs_diff(&h) <= 1e-14);
        }
    }

    #[test]
    fn determinant_is_rho2_minus_sigma2() {
        let p = PTParams::general(2.0, 1.0, PI / 5.0, PI / 7.0).unwrap();
        assert!((build_general_hamiltonian(&p).det() - re(3.0)).norm() <= 1e-14);
        let p = PTParams::new(2.0, 1.0, 1.1).unwrap();
        assert!((build_symmetric_hamiltonian(&p).unwrap().det() - re(3.0)).norm() <= 1e-14);
    }

    #[test]
    fn symmetric_hamiltonian_values() {
        let p = PTParams::new(1.0, 2.0, FRAC_PI_6).unwrap();
        let h = build_symmetric_hamiltonian(&p).unwrap();
        let s3 = 3f64.sqrt() / 2.0;
        let expected = Mat2::new(c(s3, 0.5), re(2.0), re(2.0), c(s3, -0.5));
        assert!(h.max_abs_diff(&expected) <= 1e-15);
        assert_eq!(h.transpose(), h);

        let p = PTParams::new(1.5, 0.5, 0.0).unwrap();
        assert_eq!(
            build_symmetric_hamiltonian(&p).unwrap(),
            Mat2::real(1.5, 0.5, 0.5, 1.5)
        );
    }

    #[test]
    fn symmetric_form_requires_phase_on_grid() {
        let p = PTParams::general(1.0, 2.0, 0.3, PI / 4.0).unwrap();
        assert!(matches!(
            build_symmetric_hamiltonian(&p),
            Err(PtError::NotSymmetric { .. })
        ));
        let p = PTParams::general(1.0, 2.0, 0.3, PI).unwrap();
        let h = build_symmetric_hamiltonian(&p).unwrap();
        assert_eq!(h[(0, 1)], re(-2.0));
        assert!(h.max_abs_diff(&build_general_hamiltonian(&p)) <= 1e-15);
    }

    #[test]
    fn non_finite_params_rejected() {
        assert_eq!(
            PTParams::new(f64::NAN, 1.0, 0.0),
            Err(PtError::NonFinite { name: "rho" })
        );
    }

    #[test]
    fn phase_classification() {
        let unbroken = classify_phase(&PTParams::new(1.0, 2.0, FRAC_PI_6).unwrap());
        assert_eq!(unbroken.class, PhaseClass::Unbroken);
        assert!((unbroken.discriminant - 3.75).abs() <= 1e-15);

        let broken = classify_phase(&PTParams::new(1.0, 0.5, PI / 2.0).unwrap());
        assert_eq!(broken.class, PhaseClass::Broken);
        assert!((broken.discriminant + 0.75).abs() <= 1e-15);

        let ep = classify_phase(&PTParams::new(1.0, 0.5, FRAC_PI_6).unwrap());
        assert_eq!(ep.class, PhaseClass::Exceptional);
    }

    #[test]
    fn zero_coupling_cases() {
        // σ = 0, ϕ = 0: already diagonal and Hermitian
        let p = PTParams::new(1.3, 0.0, 0.0).unwrap();
        assert_eq!(classify_phase(&p).class, PhaseClass::Unbroken);
        let sd = decompose(&p).unwrap();
        assert_eq!(sd.alpha(), 0.0);
        assert_eq!(sd.e_plus(), 1.3);
        assert_eq!(sd.e_minus(), 1.3);
        // σ = 0, ρ sin ϕ ≠ 0: broken
        let p = PTParams::new(1.0, 0.0, 0.4).unwrap();
        assert_eq!(classify_phase(&p).class, PhaseClass::Broken);
        assert!(matches!(decompose(&p), Err(PtError::BrokenPhase { .. })));
    }

    #[test]
    fn broken_phase_error_carries_complex_pair() {
        let p = PTParams::new(1.0, 0.5, PI / 2.0).unwrap();
        match decompose(&p) {
            Err(PtError::BrokenPhase { eigenvalues, .. }) => {
                let h = 3f64.sqrt() / 2.0;
                assert!((eigenvalues[0] - c(0.0, h)).norm() <= 1e-15);
                assert!((eigenvalues[1] - c(0.0, -h)).norm() <= 1e-15);
            }
            other => panic!("expected BrokenPhase, got {other:?}"),
        }
        let p = PTParams::new(1.0, 0.5, FRAC_PI_6).unwrap();
        assert!(matches!(
            decompose(&p),
            Err(PtError::ExceptionalPoint { .. })
        ));
    }

    #[test]
    fn mismatched_hamiltonian_rejected() {
        let p = PTParams::new(1.0, 2.0, 0.3).unwrap();
        let h = Mat2::real(1.0, 2.0, 2.0, 1.0);
        assert!(matches!(
            spectral_decompose(&h, &p),
            Err(PtError::ParameterMismatch { .. })
        ));
    }

    #[test]
    fn eigenvalues_match_characteristic_roots() {
        // (1, 1, π/6): E₊ = √3, E₋ = 0
        let p = PTParams::new(1.0, 1.0, FRAC_PI_6).unwrap();
        let sd = decompose(&p).unwrap();
        assert!((sd.e_plus() - 3f64.sqrt()).abs() <= 1e-15);
        assert!(sd.e_minus().abs() <= 1e-15);
        // trace/det check
        let h = sd.hamiltonian();
        assert!((h.trace() - re(sd.e_plus() + sd.e_minus())).norm() <= 1e-14);
        assert!((h.det() - re(sd.e_plus() * sd.e_minus())).norm() <= 1e-14);
    }

    #[test]
    fn hermitian_limit() {
        let p = PTParams::new(1.0, 2.0, 0.0).unwrap();
        let sd = decompose(&p).unwrap();
        assert_eq!(sd.e_plus(), 3.0);
        assert_eq!(sd.e_minus(), -1.0);
        assert_eq!(sd.alpha(), 0.0);
        assert!(sd.a().max_abs_diff(sd.v()) <= 1e-15);
        assert!(sd.eta_plus().max_abs_diff(&Mat2::identity()) <= 1e-15);
        assert!(build_c_operator(&sd).max_abs_diff(&Mat2::parity()) <= 1e-15);
        let he = build_hermitian_equivalent(&sd);
        assert!(he.g.max_abs_diff(&Mat2::identity()) <= 1e-15);
        assert!(he.h_prime.max_abs_diff(sd.hamiltonian()) <= 1e-15);
    }

    #[test]
    fn reference_point_values() {
        // (1, 2, π/6): sin α = 1/4
        let p = PTParams::new(1.0, 2.0, FRAC_PI_6).unwrap();
        let sd = decompose(&p).unwrap();
        assert!((sd.alpha() - 0.252_680_255_142_078_65).abs() <= 1e-12);
        assert!((sd.alpha().sin() - 0.25).abs() <= 1e-12);
        // Euclidean norm of u₊ by explicit dot product
        let n = sd.u_plus().dot_conj(sd.u_plus());
        assert!((n - re(1.032_795_558_988_644_4)).norm() <= 1e-12);

        let eta = build_metric(&sd);
        let expected = Mat2::new(
            re(1.032_795_558_988_644_4),
            c(0.0, -0.258_198_889_747_161_1),
            c(0.0, 0.258_198_889_747_161_1),
            re(1.032_795_558_988_644_4),
        );
        assert!(eta.max_abs_diff(&expected) <= 1e-12);

        let he = build_hermitian_equivalent(&sd);
        let expected_hp = Mat2::real(
            0.866_025_403_784_438_6,
            1.936_491_673_103_708_5,
            1.936_491_673_103_708_5,
            0.866_025_403_784_438_6,
        );
        assert!(he.h_prime.max_abs_diff(&expected_hp) <= 1e-12);
        assert!((sd.beta() - 2.0 * 3.75f64.sqrt()).abs() <= 1e-12);
    }

    #[test]
    fn metric_inverts_completeness_sum() {
        let p = PTParams::new(1.0, 2.0, FRAC_PI_6).unwrap();
        let sd = decompose(&p).unwrap();
        let completeness =
            Mat2::outer(sd.u_plus(), sd.u_plus()) + Mat2::outer(sd.u_minus(), sd.u_minus());
        let eta = inverse(&completeness).unwrap();
        assert!(eta.max_abs_diff(&build_metric(&sd)) <= 1e-12);
        assert!((build_metric(&sd).det() - re(1.0)).norm() <= 1e-12);
    }

    #[test]
    fn c_operator_properties() {
        let p = PTParams::new(0.7, 1.9, -2.2).unwrap();
        let sd = decompose(&p).unwrap();
        let c_op = build_c_operator(&sd);
        assert!((c_op * c_op).max_abs_diff(&Mat2::identity()) <= 1e-12);
        assert!(c_op.commutator(sd.hamiltonian()).max_abs() <= 1e-12);
        assert!((c_op.det() - re(-1.0)).norm() <= 1e-12);
        let p_eta = Mat2::parity() * *sd.eta_plus();
        let eta_inv_p = sd.eta_plus_inv() * Mat2::parity();
        assert!(c_op.max_abs_diff(&p_eta) <= 1e-12);
        assert!(c_op.max_abs_diff(&eta_inv_p) <= 1e-12);
    }

    #[test]
    fn hermitian_equivalent_diagonalises() {
        let p = PTParams::new(1.0, 2.0, FRAC_PI_6).unwrap();
        let sd = decompose(&p).unwrap();
        let he = build_hermitian_equivalent(&sd);
        let g_inv = inverse(&he.g).unwrap();
        assert!((he.g * *sd.hamiltonian() * g_inv).max_abs_diff(&he.h_prime) <= 1e-12);
        let v_inv = inverse(&he.v).unwrap();
        assert!((he.v * he.h_prime * v_inv).max_abs_diff(&sd.diagonal()) <= 1e-12);
        assert!((he.v * he.g).max_abs_diff(sd.a()) <= 1e-12);
        assert!(g_inv.max_abs_diff(&he.g.conj()) <= 1e-12);
        assert!(g_inv.max_abs_diff(&he.g.transpose()) <= 1e-12);
        assert!(
            he.h_prime
                .apply(&he.u_prime_plus)
                .max_abs_diff(&he.u_prime_plus.scale(re(sd.e_plus())))
                <= 1e-12
        );
        assert!(
            he.h_prime
                .apply(&he.u_prime_minus)
                .max_abs_diff(&he.u_prime_minus.scale(re(sd.e_minus())))
                <= 1e-12
        );
    }

    #[test]
    fn negative_coupling_keeps_identities() {
        let p = PTParams::general(0.8, 1.5, 0.9, PI).unwrap();
        let sd = decompose(&p).unwrap();
        let h = sd.hamiltonian();
        assert!(sd.beta() < 0.0);
        assert!((*sd.a() * *h * *sd.a_inv()).max_abs_diff(&sd.diagonal()) <= 1e-12);
        let eta = sd.eta_plus();
        let eta_inv = inverse(eta).unwrap();
        assert!((*eta * *h * eta_inv).max_abs_diff(&h.adjoint()) <= 1e-12);
        assert!(sd.c().commutator(h).max_abs() <= 1e-12);
        let g_inv = inverse(sd.g()).unwrap();
        assert!((*sd.g() * *h * g_inv).max_abs_diff(sd.h_prime()) <= 1e-12);
    }
}
