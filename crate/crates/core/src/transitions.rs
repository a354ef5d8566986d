//! Time evolution, transition amplitudes and probabilities.
//!
//! Two definitions of the flavour transition probability:
//!
//! * [`amplitude_raw`]: final states are the raw flavour vectors. With a
//!   positive-definite metric product this does not conserve probability
//!   unless `H` is Hermitian.
//! * [`probability_cpt`]: final states are the CPT eigenstates
//!   `|ũ_β⟩ = (|u_β⟩ + CPT|u_β⟩)/2`. Row sums are exactly one.
//!
//! Every probability is returned together with its normalisation so the two
//! can be compared directly. Times are dimensionless phases (energy × time).

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::inner::{inner, resolve, InnerProductSpec, NamedProduct};
use crate::linalg::{re, Complex, Mat2, Vec2};
use crate::pt::{build_hermitian_equivalent, SpectralData};

/// Points per period used for time-dependence sweeps.
pub const SWEEP_POINTS: usize = 256;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransitionError {
    #[error("the {product} inner product is not positive-definite; transition probabilities need cpt, eta-plus or t")]
    NonPositiveProduct { product: NamedProduct },
    #[error("unknown flavour `{0}` (expected a or b)")]
    UnknownFlavor(String),
}

/// Flavour basis label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Flavor {
    A,
    B,
}

impl Flavor {
    pub const BOTH: [Flavor; 2] = [Flavor::A, Flavor::B];

    pub fn index(self) -> usize {
        match self {
            Flavor::A => 0,
            Flavor::B => 1,
        }
    }

    /// `(1, 0)^T` or `(0, 1)^T`.
    pub fn vector(self) -> Vec2 {
        Vec2::basis(self.index())
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::A => "a",
            Flavor::B => "b",
        })
    }
}

impl FromStr for Flavor {
    type Err = TransitionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "a" => Ok(Flavor::A),
            "b" => Ok(Flavor::B),
            _ => Err(TransitionError::UnknownFlavor(s.to_string())),
        }
    }
}

/// Where an evolved state started.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StateOrigin {
    Flavor(Flavor),
    Tilde(Flavor),
    AntiFlavor(Flavor),
    TildeAntiFlavor(Flavor),
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolvedState {
    pub vector: Vec2,
    pub time: f64,
    pub origin: StateOrigin,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionResult {
    pub amplitude: Complex,
    pub probability: f64,
    /// Product of the final-state norm and the evolved initial-state norm.
    pub normalization: f64,
}

impl TransitionResult {
    fn from_parts(amplitude: Complex, final_norm: Complex, evolved_norm: Complex) -> Self {
        let normalization = final_norm.re * evolved_norm.re;
        Self {
            amplitude,
            probability: amplitude.norm_sqr() / normalization,
            normalization,
        }
    }
}

/// `e^{-iHt}|ψ⟩` through the mass eigenbasis: `A⁻¹ diag(e^{-iE±t}) A |ψ⟩`.
pub fn evolve(sd: &SpectralData, psi: &Vec2, t: f64) -> Vec2 {
    let coeffs = sd.a().apply(psi);
    let phase_plus = Complex::from_polar(1.0, -sd.e_plus() * t);
    let phase_minus = Complex::from_polar(1.0, -sd.e_minus() * t);
    sd.u_plus().scale(coeffs[0] * phase_plus) + sd.u_minus().scale(coeffs[1] * phase_minus)
}

pub fn evolve_flavor(sd: &SpectralData, origin: Flavor, t: f64) -> EvolvedState {
    EvolvedState {
        vector: evolve(sd, &origin.vector(), t),
        time: t,
        origin: StateOrigin::Flavor(origin),
    }
}

/// Normalised transition of `evolved` onto `final_state`.
fn transition(product: &InnerProductSpec, final_state: &Vec2, evolved: &Vec2) -> TransitionResult {
    TransitionResult::from_parts(
        inner(product, final_state, evolved),
        inner(product, final_state, final_state),
        inner(product, evolved, evolved),
    )
}

fn positive_product(
    sd: &SpectralData,
    product: NamedProduct,
) -> Result<InnerProductSpec, TransitionError> {
    if !product.is_positive_definite() {
        return Err(TransitionError::NonPositiveProduct { product });
    }
    Ok(resolve(product, sd))
}

/// Raw flavour-to-flavour transition `⟨u_β|u_α(t)⟩_η`.
pub fn amplitude_raw(
    sd: &SpectralData,
    product: NamedProduct,
    from: Flavor,
    to: Flavor,
    t: f64,
) -> Result<TransitionResult, TransitionError> {
    let ip = positive_product(sd, product)?;
    let evolved = evolve(sd, &from.vector(), t);
    Ok(transition(&ip, &to.vector(), &evolved))
}

/// `Σ_β P^η_{αβ}` over raw flavour final states.
pub fn raw_row_sum(
    sd: &SpectralData,
    product: NamedProduct,
    from: Flavor,
    t: f64,
) -> Result<f64, TransitionError> {
    Flavor::BOTH
        .into_iter()
        .map(|to| amplitude_raw(sd, product, from, to, t).map(|r| r.probability))
        .sum()
}

/// `(|ψ⟩ + CPT|ψ⟩)/2`.
pub fn cpt_symmetrize(sd: &SpectralData, psi: &Vec2) -> Vec2 {
    (*psi + sd.apply_cpt(psi)).scale(re(0.5))
}

/// CPT eigenstate `|ũ_α⟩` built from a flavour vector.
pub fn cpt_eigenstate(sd: &SpectralData, origin: Flavor) -> Vec2 {
    cpt_symmetrize(sd, &origin.vector())
}

/// Antiflavour state `|ū_α⟩ = C|u_α⟩`.
pub fn antiflavor(sd: &SpectralData, origin: Flavor) -> Vec2 {
    sd.c().apply(&origin.vector())
}

/// Conserving probability with CPT-eigenstate final states.
pub fn probability_cpt(sd: &SpectralData, from: Flavor, to: Flavor, t: f64) -> TransitionResult {
    let ip = resolve(NamedProduct::CPT, sd);
    let evolved = evolve(sd, &from.vector(), t);
    transition(&ip, &cpt_eigenstate(sd, to), &evolved)
}

/// Same construction on antiflavour states: `⟨ũ̄_β|ū_α(t)⟩_CPT`.
pub fn probability_cpt_antiflavor(
    sd: &SpectralData,
    from: Flavor,
    to: Flavor,
    t: f64,
) -> TransitionResult {
    let ip = resolve(NamedProduct::CPT, sd);
    let evolved = evolve(sd, &antiflavor(sd, from), t);
    let final_state = cpt_symmetrize(sd, &antiflavor(sd, to));
    transition(&ip, &final_state, &evolved)
}

/// The four CPT-eigenstate probabilities and their sums at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConservationReport {
    pub time: f64,
    pub p_aa: f64,
    pub p_ab: f64,
    pub p_ba: f64,
    pub p_bb: f64,
    /// `P_aa + P_ab`.
    pub row_a: f64,
    /// `P_ba + P_bb`.
    pub row_b: f64,
    /// `P_aa + P_ba`.
    pub col_a: f64,
    /// `P_ab + P_bb`.
    pub col_b: f64,
    /// Average of all four, the weak condition.
    pub weak: f64,
}

pub fn conservation_report(sd: &SpectralData, t: f64) -> ConservationReport {
    let p = |from, to| probability_cpt(sd, from, to, t).probability;
    let (p_aa, p_ab) = (p(Flavor::A, Flavor::A), p(Flavor::A, Flavor::B));
    let (p_ba, p_bb) = (p(Flavor::B, Flavor::A), p(Flavor::B, Flavor::B));
    ConservationReport {
        time: t,
        p_aa,
        p_ab,
        p_ba,
        p_bb,
        row_a: p_aa + p_ab,
        row_b: p_ba + p_bb,
        col_a: p_aa + p_ba,
        col_b: p_ab + p_bb,
        weak: (p_aa + p_ab + p_ba + p_bb) / 2.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymmetryReport {
    /// `P_ab − P_ba`.
    pub delta_t: f64,
    /// `P_ab − P_{b̄ā}`.
    pub delta_cpt: f64,
    pub time: f64,
}

pub fn asymmetries(sd: &SpectralData, t: f64) -> AsymmetryReport {
    let p_ab = probability_cpt(sd, Flavor::A, Flavor::B, t).probability;
    let p_ba = probability_cpt(sd, Flavor::B, Flavor::A, t).probability;
    let p_bar_ba = probability_cpt_antiflavor(sd, Flavor::B, Flavor::A, t).probability;
    AsymmetryReport {
        delta_t: p_ab - p_ba,
        delta_cpt: p_ab - p_bar_ba,
        time: t,
    }
}

/// Evolve `G|u_α⟩` under the Hermitian `H′` and project with the Euclidean
/// product onto `G|u_β⟩`.
pub fn hermitian_picture_probability(
    sd: &SpectralData,
    from: Flavor,
    to: Flavor,
    t: f64,
) -> TransitionResult {
    let he = build_hermitian_equivalent(sd);
    let start = he.g.apply(&from.vector());
    let final_state = he.g.apply(&to.vector());
    // H′ = V diag(E₊, E₋) V with V = V⁻¹
    let phases = Mat2::diag(
        Complex::from_polar(1.0, -sd.e_plus() * t),
        Complex::from_polar(1.0, -sd.e_minus() * t),
    );
    let evolved = (he.v * phases * he.v).apply(&start);
    transition(&InnerProductSpec::euclidean(), &final_state, &evolved)
}

/// `Σ_β |⟨ũ_β|ũ_α(t)⟩|²` normalised like [`probability_cpt`], for a system
/// prepared in a CPT eigenstate, under an arbitrary product.
pub fn tilde_initial_sum(
    sd: &SpectralData,
    product: NamedProduct,
    from: Flavor,
    t: f64,
) -> Result<f64, TransitionError> {
    let ip = positive_product(sd, product)?;
    let evolved = evolve(sd, &cpt_eigenstate(sd, from), t);
    Ok(Flavor::BOTH
        .into_iter()
        .map(|to| transition(&ip, &cpt_eigenstate(sd, to), &evolved).probability)
        .sum())
}

/// CPT-product sum for a system prepared in `|ũ_a⟩`.
pub fn tilde_initial_sum_check(sd: &SpectralData, t: f64) -> f64 {
    tilde_initial_sum(sd, NamedProduct::CPT, Flavor::A, t).expect("cpt is positive-definite")
}

/// One full oscillation period `2π/|β|`, or `2π` when `β = 0`.
pub fn period(sd: &SpectralData) -> f64 {
    let b = sd.beta().abs();
    if b > 0.0 {
        TAU / b
    } else {
        TAU
    }
}

/// [`SWEEP_POINTS`] uniform times covering one period.
pub fn period_grid(sd: &SpectralData) -> Vec<f64> {
    let p = period(sd);
    (0..SWEEP_POINTS)
        .map(|i| p * i as f64 / SWEEP_POINTS as f64)
        .collect()
}

/// `max − min` of `f` over one period.
pub fn variation_over_period(sd: &SpectralData, f: impl Fn(f64) -> f64) -> f64 {
    let (lo, hi) = period_grid(sd)
        .into_iter()
        .map(f)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    hi - lo
}
