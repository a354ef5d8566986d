//! Two-flavour (νμ, ντ) vacuum oscillations with a PT-symmetric
//! non-Hermitian correction.
//!
//! Units: masses squared and the non-Hermitian parameters `ρ`, `σ` in eV²,
//! energy in GeV, baselines in km. Hamiltonians are returned in eV²/GeV;
//! multiplying by [`PHASE_PER_KM`] converts them into a phase per km with the
//! identification `t = L/c`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{re, Complex, Mat2, Vec2};
use crate::pt::{classify_phase, decompose, PTParams, PhaseClass, PtError, SpectralData};
use crate::transitions::{cpt_eigenstate, Flavor};

/// ħc in eV·m.
pub const HBAR_C_EV_M: f64 = 1.973_269_804e-7;

/// Oscillation constant `1/(4ħc)` in km⁻¹·GeV·eV⁻² (≈ 1.26693).
pub const OSC_CONSTANT: f64 = 1e3 / (4.0 * 1e9 * HBAR_C_EV_M);

/// Converts a Hamiltonian entry in eV²/GeV into radians per km.
pub const PHASE_PER_KM: f64 = 4.0 * OSC_CONSTANT;

/// Slack allowed on `|α′| ≤ π/2` for the closed-form curve path.
const ALPHA_RANGE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NeutrinoError {
    #[error("neutrino energy must be positive, got {0} GeV")]
    NonPositiveEnergy(f64),
    #[error("baseline {0} km is negative or not finite")]
    InvalidBaseline(f64),
    #[error("parameter `{0}` is not finite")]
    NonFinite(&'static str),
    #[error(
        "PT symmetry violated: |rho sin varphi| = {rho_sin:e} eV^2 exceeds |dm2_32 + sigma| = {bound:e} eV^2 (require |rho sin varphi| <= |dm2_32 + sigma|)"
    )]
    UnbrokenViolation { rho_sin: f64, bound: f64 },
    #[error("exceptional point: |rho sin varphi| = |dm2_32 + sigma| = {bound:e} eV^2")]
    ExceptionalPoint { bound: f64 },
    #[error("alpha' = {0} lies outside [-pi/2, pi/2]")]
    AlphaOutOfRange(f64),
    #[error(transparent)]
    Pt(#[from] PtError),
}

/// Physical oscillation parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillationConfig {
    /// `Δm²₃₂ = m₃² − m₂²`, eV².
    pub delta_m2_32: f64,
    /// `m̄² = m₂² + m₃²`, eV². Only shifts a global phase.
    pub m2_bar: f64,
    pub rho: f64,
    pub sigma: f64,
    pub varphi: f64,
    /// GeV.
    pub energy: f64,
    /// km, ascending.
    pub baselines: Vec<f64>,
}

impl OscillationConfig {
    /// Config with `m̄² = 0` and the default 0 to 2000 km grid.
    pub fn new(delta_m2_32: f64, rho: f64, sigma: f64, varphi: f64, energy: f64) -> Self {
        Self {
            delta_m2_32,
            m2_bar: 0.0,
            rho,
            sigma,
            varphi,
            energy,
            baselines: default_baselines(),
        }
    }

    /// `Δm²₃₂ + σ`.
    pub fn effective_dm2(&self) -> f64 {
        self.delta_m2_32 + self.sigma
    }

    pub fn rho_sin_varphi(&self) -> f64 {
        self.rho * self.varphi.sin()
    }

    pub fn validate(&self) -> Result<(), NeutrinoError> {
        for (name, v) in [
            ("delta_m2_32", self.delta_m2_32),
            ("m2_bar", self.m2_bar),
            ("rho", self.rho),
            ("sigma", self.sigma),
            ("varphi", self.varphi),
            ("energy", self.energy),
        ] {
            if !v.is_finite() {
                return Err(NeutrinoError::NonFinite(name));
            }
        }
        if self.energy <= 0.0 {
            return Err(NeutrinoError::NonPositiveEnergy(self.energy));
        }
        if let Some(&l) = self
            .baselines
            .iter()
            .find(|l| !(l.is_finite() && **l >= 0.0))
        {
            return Err(NeutrinoError::InvalidBaseline(l));
        }
        let (rho_sin, bound) = (self.rho_sin_varphi().abs(), self.effective_dm2().abs());
        if rho_sin > bound {
            return Err(NeutrinoError::UnbrokenViolation { rho_sin, bound });
        }
        Ok(())
    }
}

/// 0, 1, …, 2000 km.
pub fn default_baselines() -> Vec<f64> {
    (0..=2000).map(f64::from).collect()
}

/// Standard vacuum Hamiltonian `R(θ) diag(m₂², m₃²) R(θ)^T / (2E)` in eV²/GeV.
pub fn build_vacuum_hamiltonian(
    theta23: f64,
    m2_2: f64,
    m2_3: f64,
    energy: f64,
) -> Result<Mat2, NeutrinoError> {
    if !(energy > 0.0) {
        return Err(NeutrinoError::NonPositiveEnergy(energy));
    }
    let (s, c) = theta23.sin_cos();
    let rot = Mat2::real(c, s, -s, c);
    let masses = Mat2::diag(re(m2_2), re(m2_3));
    Ok((rot * masses * rot.transpose()).scale(re(1.0 / (2.0 * energy))))
}

/// Vacuum part at maximal mixing plus the symmetric PT-symmetric correction, eV²/GeV.
pub fn build_pt_hamiltonian(cfg: &OscillationConfig) -> Result<Mat2, NeutrinoError> {
    cfg.validate()?;
    let diag = re(cfg.m2_bar) + Complex::from_polar(cfg.rho, cfg.varphi);
    let off = re(cfg.effective_dm2());
    Ok(Mat2::new(diag, off, off, diag.conj()).scale(re(1.0 / (4.0 * cfg.energy))))
}

/// The Hamiltonian in km⁻¹ expressed as two-level [`PTParams`].
pub fn to_pt_params(cfg: &OscillationConfig) -> Result<PTParams, NeutrinoError> {
    cfg.validate()?;
    let diag = re(cfg.m2_bar) + Complex::from_polar(cfg.rho, cfg.varphi);
    let scale = OSC_CONSTANT / cfg.energy;
    Ok(PTParams::new(
        diag.norm() * scale,
        cfg.effective_dm2() * scale,
        diag.arg(),
    )?)
}

/// Spectral data of the km⁻¹ Hamiltonian; time arguments are then baselines in km.
pub fn spectral_data(cfg: &OscillationConfig) -> Result<SpectralData, NeutrinoError> {
    Ok(decompose(&to_pt_params(cfg)?)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscDerived {
    pub alpha_prime: f64,
    /// `β′` converted to radians per km.
    pub beta_prime_phase_per_km: f64,
    /// Eigenvalue paired with `|ν₊⟩`, eV²/GeV.
    pub omega_plus: f64,
    /// Eigenvalue paired with `|ν₋⟩`, eV²/GeV.
    pub omega_minus: f64,
}

impl OscDerived {
    /// `β′ = ω₊ − ω₋`, eV²/GeV.
    pub fn beta_prime(&self) -> f64 {
        self.omega_plus - self.omega_minus
    }

    /// Half of the accumulated oscillation phase at `L`.
    pub fn half_phase(&self, baseline_km: f64) -> f64 {
        0.5 * self.beta_prime_phase_per_km * baseline_km
    }
}

pub fn derive_osc_params(cfg: &OscillationConfig) -> Result<OscDerived, NeutrinoError> {
    let params = to_pt_params(cfg)?;
    if classify_phase(&params).class == PhaseClass::Exceptional {
        return Err(NeutrinoError::ExceptionalPoint {
            bound: cfg.effective_dm2().abs(),
        });
    }
    let dm2 = cfg.effective_dm2();
    let alpha_prime = if dm2 == 0.0 {
        0.0
    } else {
        (cfg.rho_sin_varphi() / dm2).clamp(-1.0, 1.0).asin()
    };
    let center = cfg.m2_bar + cfg.rho * cfg.varphi.cos();
    let split = dm2 * alpha_prime.cos();
    let inv4e = 1.0 / (4.0 * cfg.energy);
    Ok(OscDerived {
        alpha_prime,
        beta_prime_phase_per_km: 2.0 * OSC_CONSTANT * alpha_prime.cos() * dm2 / cfg.energy,
        omega_plus: (center + split) * inv4e,
        omega_minus: (center - split) * inv4e,
    })
}

/// `1 − sin²(α′/2 − K cos α′ Δm² L/E)` with `Δm²` the effective splitting.
pub fn survival_closed_form(alpha_prime: f64, dm2_eff: f64, energy: f64, baseline_km: f64) -> f64 {
    let phase =
        alpha_prime / 2.0 - OSC_CONSTANT * alpha_prime.cos() * dm2_eff * baseline_km / energy;
    1.0 - phase.sin().powi(2)
}

fn appearance_closed_form(alpha_prime: f64, dm2_eff: f64, energy: f64, baseline_km: f64) -> f64 {
    let phase =
        alpha_prime / 2.0 - OSC_CONSTANT * alpha_prime.cos() * dm2_eff * baseline_km / energy;
    phase.sin().powi(2)
}

/// `P(νμ → νμ)` at `L` km.
pub fn survival_probability(
    cfg: &OscillationConfig,
    baseline_km: f64,
) -> Result<f64, NeutrinoError> {
    let d = derive_osc_params(cfg)?;
    Ok(1.0
        - (d.alpha_prime / 2.0 - d.half_phase(baseline_km))
            .sin()
            .powi(2))
}

/// `P(νμ → ντ)` at `L` km.
pub fn appearance_probability(
    cfg: &OscillationConfig,
    baseline_km: f64,
) -> Result<f64, NeutrinoError> {
    let d = derive_osc_params(cfg)?;
    Ok((d.alpha_prime / 2.0 - d.half_phase(baseline_km))
        .sin()
        .powi(2))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityCurve {
    pub baseline_km: Vec<f64>,
    pub p_mumu: Vec<f64>,
    pub p_mutau: Vec<f64>,
}

impl ProbabilityCurve {
    pub fn len(&self) -> usize {
        self.baseline_km.len()
    }

    pub fn is_empty(&self) -> bool {
        self.baseline_km.is_empty()
    }
}

/// Curve over `cfg.baselines` from the `(ρ, ϕ)` parameters.
pub fn generate_curve(cfg: &OscillationConfig) -> Result<ProbabilityCurve, NeutrinoError> {
    let d = derive_osc_params(cfg)?;
    let phase = |l: f64| d.alpha_prime / 2.0 - d.half_phase(l);
    Ok(ProbabilityCurve {
        baseline_km: cfg.baselines.clone(),
        p_mumu: cfg
            .baselines
            .iter()
            .map(|&l| 1.0 - phase(l).sin().powi(2))
            .collect(),
        p_mutau: cfg
            .baselines
            .iter()
            .map(|&l| phase(l).sin().powi(2))
            .collect(),
    })
}

/// Parameters shared by the four α′ curves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveTemplate {
    pub delta_m2_32: f64,
    pub sigma: f64,
    pub energy: f64,
    pub baselines: Vec<f64>,
}

impl Default for CurveTemplate {
    /// `Δm²₃₂ = 2.5×10⁻³ eV²`, `σ = 0`, `E = 1 GeV`, 0 to 2000 km.
    fn default() -> Self {
        Self {
            delta_m2_32: 2.5e-3,
            sigma: 0.0,
            energy: 1.0,
            baselines: default_baselines(),
        }
    }
}

pub const REFERENCE_ALPHA_PRIMES: [f64; 4] = [0.0, FRAC_PI_6, FRAC_PI_4, FRAC_PI_2];

/// Curve for a directly specified `α′`.
///
/// Evaluates the closed form, which stays finite at `|α′| = π/2` where the
/// `(ρ, ϕ)` route sits on the exceptional point.
pub fn generate_curve_for_alpha(
    template: &CurveTemplate,
    alpha_prime: f64,
) -> Result<ProbabilityCurve, NeutrinoError> {
    if !alpha_prime.is_finite() || alpha_prime.abs() > FRAC_PI_2 + ALPHA_RANGE_TOL {
        return Err(NeutrinoError::AlphaOutOfRange(alpha_prime));
    }
    if !(template.energy > 0.0) {
        return Err(NeutrinoError::NonPositiveEnergy(template.energy));
    }
    if let Some(&l) = template
        .baselines
        .iter()
        .find(|l| !(l.is_finite() && **l >= 0.0))
    {
        return Err(NeutrinoError::InvalidBaseline(l));
    }
    let dm2 = template.delta_m2_32 + template.sigma;
    let e = template.energy;
    Ok(ProbabilityCurve {
        baseline_km: template.baselines.clone(),
        p_mumu: template
            .baselines
            .iter()
            .map(|&l| survival_closed_form(alpha_prime, dm2, e, l))
            .collect(),
        p_mutau: template
            .baselines
            .iter()
            .map(|&l| appearance_closed_form(alpha_prime, dm2, e, l))
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledCurve {
    pub alpha_prime: f64,
    pub curve: ProbabilityCurve,
}

/// The four curves for `α′ ∈ {0, π/6, π/4, π/2}`.
pub fn generate_fig1_curves(template: &CurveTemplate) -> Result<Vec<LabeledCurve>, NeutrinoError> {
    REFERENCE_ALPHA_PRIMES
        .iter()
        .map(|&alpha_prime| {
            Ok(LabeledCurve {
                alpha_prime,
                curve: generate_curve_for_alpha(template, alpha_prime)?,
            })
        })
        .collect()
}

/// `(|ν̃_μ⟩, |ν̃_τ⟩)`, the CPT eigenstates of the two flavours.
pub fn cpt_flavor_states_neutrino(sd: &SpectralData) -> (Vec2, Vec2) {
    (cpt_eigenstate(sd, Flavor::A), cpt_eigenstate(sd, Flavor::B))
}
