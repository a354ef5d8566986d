//! Brute-force cross-checks for the spectral machinery.
//!
//! The oracle functions here only touch [`crate::linalg`]: evolution by the
//! series exponential, eigenvalues from the characteristic polynomial, and
//! the metric assembled from a biorthonormal eigenbasis. [`run_suite`] pits
//! them against the closed-form paths over random unbroken draws.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{inverse, mat_exp, re, Complex, LinalgError, Mat2, Vec2, I};
use crate::pt::{classify_phase, decompose, PTParams, PhaseClass, PtError};
use crate::transitions::{evolve, Flavor};

pub const BIORTHO_TOL: f64 = 1e-10;
pub const DERIVATIVE_STEP: f64 = 1e-5;
pub const DERIVATIVE_TOL: f64 = 1e-8;
pub const EVOLUTION_TOL: f64 = 1e-10;
pub const METRIC_TOL: f64 = 1e-12;
pub const EIGEN_TOL: f64 = 1e-12;
/// Draws are kept only if `|σ² − ρ² sin²ϕ| ≥ MARGIN · σ²`.
pub const SAMPLER_MARGIN: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("eigenbasis is not biorthonormal: |<phi_i|psi_j> - delta_ij| = {deviation:e}")]
    BiorthogonalityViolation { deviation: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Pt(#[from] PtError),
}

/// One primary-vs-oracle comparison.
///
/// Complex values are flattened as `[re, im, re, im, ...]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub quantity: String,
    pub primary: Vec<f64>,
    pub oracle: Vec<f64>,
    pub difference: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn flatten(values: &[Complex]) -> Vec<f64> {
    values.iter().flat_map(|c| [c.re, c.im]).collect()
}

impl OracleReport {
    /// Difference is the largest entrywise modulus `|p_k − o_k|`.
    pub fn complex(
        quantity: impl Into<String>,
        primary: &[Complex],
        oracle: &[Complex],
        tolerance: f64,
    ) -> Self {
        let difference = primary
            .iter()
            .zip(oracle)
            .map(|(p, o)| (p - o).norm())
            .fold(0.0, f64::max);
        Self {
            quantity: quantity.into(),
            primary: flatten(primary),
            oracle: flatten(oracle),
            difference,
            tolerance,
            pass: difference <= tolerance,
        }
    }

    pub fn scalar(quantity: impl Into<String>, primary: f64, oracle: f64, tolerance: f64) -> Self {
        Self::complex(quantity, &[re(primary)], &[re(oracle)], tolerance)
    }

    pub fn vector(
        quantity: impl Into<String>,
        primary: &Vec2,
        oracle: &Vec2,
        tolerance: f64,
    ) -> Self {
        Self::complex(
            quantity,
            &primary.components(),
            &oracle.components(),
            tolerance,
        )
    }

    pub fn matrix(
        quantity: impl Into<String>,
        primary: &Mat2,
        oracle: &Mat2,
        tolerance: f64,
    ) -> Self {
        let flat = |m: &Mat2| m.rows().concat();
        Self::complex(quantity, &flat(primary), &flat(oracle), tolerance)
    }

    /// One JSON object, no trailing newline.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report fields are always serializable")
    }
}

/// Line-delimited JSON, one report per line.
pub fn to_json_lines(reports: &[OracleReport]) -> String {
    reports.iter().map(|r| r.to_json_line() + "\n").collect()
}

/// `exp(−iHt)|ψ⟩` via the series exponential. Works in any phase.
pub fn evolve_by_series(h: &Mat2, state: &Vec2, t: f64) -> Vec2 {
    mat_exp(h, -I * t).apply(state)
}

/// Roots of `det(H − λI)`, the `+` root first.
pub fn eigen_by_charpoly(h: &Mat2) -> [Complex; 2] {
    let half_trace = h.trace() / 2.0;
    // (a − d)²/4 + bc avoids the cancellation in tr²/4 − det
    let half_gap = (h[(0, 0)] - h[(1, 1)]) / 2.0;
    let root = (half_gap * half_gap + h[(0, 1)] * h[(1, 0)]).sqrt();
    [half_trace + root, half_trace - root]
}

/// Left eigenvectors `|φ±⟩` with `⟨φ_i|ψ_j⟩ = δ_ij`, read off the rows of `[ψ₊ ψ₋]⁻¹`.
pub fn dual_basis(psi_plus: &Vec2, psi_minus: &Vec2) -> Result<(Vec2, Vec2), OracleError> {
    let rows = inverse(&Mat2::from_columns(psi_plus, psi_minus))?.rows();
    let conj_row = |r: [Complex; 2]| Vec2::new(r[0].conj(), r[1].conj());
    Ok((conj_row(rows[0]), conj_row(rows[1])))
}

fn biortho_deviation(psi: [&Vec2; 2], phi: [&Vec2; 2]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, p) in phi.iter().enumerate() {
        for (j, s) in psi.iter().enumerate() {
            let delta = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((p.dot_conj(s) - re(delta)).norm());
        }
    }
    worst
}

/// `η₊ = Σ|φ_i⟩⟨φ_i|` after checking biorthonormality.
pub fn metric_from_eigvecs(
    u_plus: &Vec2,
    u_minus: &Vec2,
    phi_plus: &Vec2,
    phi_minus: &Vec2,
) -> Result<Mat2, OracleError> {
    let deviation = biortho_deviation([u_plus, u_minus], [phi_plus, phi_minus]);
    if deviation > BIORTHO_TOL {
        return Err(OracleError::BiorthogonalityViolation { deviation });
    }
    Ok(Mat2::outer(phi_plus, phi_plus) + Mat2::outer(phi_minus, phi_minus))
}

/// `η₊⁻¹ = Σ|ψ_i⟩⟨ψ_i|`.
pub fn inverse_metric_from_eigvecs(u_plus: &Vec2, u_minus: &Vec2) -> Mat2 {
    Mat2::outer(u_plus, u_plus) + Mat2::outer(u_minus, u_minus)
}

/// `Σ|ψ_i⟩⟨φ_i|`, the identity for a biorthonormal pair.
pub fn completeness(u_plus: &Vec2, u_minus: &Vec2, phi_plus: &Vec2, phi_minus: &Vec2) -> Mat2 {
    Mat2::outer(u_plus, phi_plus) + Mat2::outer(u_minus, phi_minus)
}

fn metric_norm(eta: &Mat2, psi: &Vec2) -> f64 {
    psi.dot_conj(&eta.apply(psi)).re
}

/// `ψ / sqrt(⟨ψ|η|ψ⟩)`. `eta` must be positive definite.
pub fn normalize_in_metric(eta: &Mat2, psi: &Vec2) -> Vec2 {
    psi.scale(re(1.0 / metric_norm(eta, psi).sqrt()))
}

/// `d/dt ⟨ψ(t)|η|ψ(t)⟩ = i⟨ψ|(H†η − ηH)|ψ⟩`, evaluated on `ψ(t)`.
pub fn analytic_norm_derivative(h: &Mat2, eta: &Mat2, psi_t: &Vec2) -> f64 {
    let k = h.adjoint() * *eta - *eta * *h;
    (I * psi_t.dot_conj(&k.apply(psi_t))).re
}

/// Central difference of `⟨ψ(t)|η|ψ(t)⟩` against [`analytic_norm_derivative`].
///
/// Tolerance is [`DERIVATIVE_TOL`] scaled by `max(1, |analytic|)`.
pub fn numeric_time_derivative_check(h: &Mat2, eta: &Mat2, state: &Vec2, t: f64) -> OracleReport {
    let psi_t = evolve_by_series(h, state, t);
    // step from ψ(t) so the long-time series error cancels in the difference
    let n = |s: f64| metric_norm(eta, &evolve_by_series(h, &psi_t, s));
    let numeric = (n(DERIVATIVE_STEP) - n(-DERIVATIVE_STEP)) / (2.0 * DERIVATIVE_STEP);
    let analytic = analytic_norm_derivative(h, eta, &psi_t);
    OracleReport::scalar(
        "norm-time-derivative",
        analytic,
        numeric,
        DERIVATIVE_TOL * analytic.abs().max(1.0),
    )
}

/// Random unbroken parameters: `ρ, σ ∈ [0.1, 3]`, `ϕ ∈ (−π, π)`.
pub struct UnbrokenSampler {
    rng: ChaCha8Rng,
}

impl UnbrokenSampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn draw(&mut self) -> PTParams {
        loop {
            let rho = self.rng.gen_range(0.1..=3.0);
            let sigma = self.rng.gen_range(0.1..=3.0);
            let varphi = self.rng.gen_range(-PI..PI);
            if varphi == -PI {
                continue;
            }
            let p = PTParams::new(rho, sigma, varphi).expect("finite draw");
            let disc = p.discriminant();
            if disc.abs() >= SAMPLER_MARGIN * sigma * sigma
                && classify_phase(&p).class == PhaseClass::Unbroken
            {
                return p;
            }
        }
    }

    /// Components uniform in the unit square.
    pub fn state(&mut self) -> Vec2 {
        let mut c = || Complex::new(self.rng.gen_range(-1.0..1.0), self.rng.gen_range(-1.0..1.0));
        Vec2::new(c(), c())
    }

    pub fn time(&mut self) -> f64 {
        self.rng.gen_range(0.0..10.0)
    }
}

/// Tolerances for [`run_suite`]; `override_all` replaces every one of them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteTolerances {
    pub eigen: f64,
    pub evolution: f64,
    pub metric: f64,
    pub derivative: f64,
}

impl Default for SuiteTolerances {
    fn default() -> Self {
        Self {
            eigen: EIGEN_TOL,
            evolution: EVOLUTION_TOL,
            metric: METRIC_TOL,
            derivative: DERIVATIVE_TOL,
        }
    }
}

impl SuiteTolerances {
    pub fn override_all(tol: f64) -> Self {
        Self {
            eigen: tol,
            evolution: tol,
            metric: tol,
            derivative: tol,
        }
    }
}

/// Every oracle against its primary counterpart on `draws` random unbroken points.
pub fn run_suite(
    draws: usize,
    seed: u64,
    tol: SuiteTolerances,
) -> Result<Vec<OracleReport>, OracleError> {
    let mut sampler = UnbrokenSampler::new(seed);
    let mut reports = Vec::with_capacity(draws * 6);
    for _ in 0..draws {
        let p = sampler.draw();
        let sd = decompose(&p)?;
        let h = *sd.hamiltonian();
        let t = sampler.time();

        let [l0, l1] = eigen_by_charpoly(&h);
        let primary = [re(sd.e_plus()), re(sd.e_minus())];
        // charpoly roots are ordered by the principal sqrt, not by eigenvector label
        let oracle = if (l0 - primary[0]).norm() <= (l1 - primary[0]).norm() {
            [l0, l1]
        } else {
            [l1, l0]
        };
        reports.push(OracleReport::complex(
            "eigenvalues",
            &primary,
            &oracle,
            tol.eigen,
        ));

        let psi = sampler.state();
        reports.push(OracleReport::vector(
            "evolution",
            &evolve(&sd, &psi, t),
            &evolve_by_series(&h, &psi, t),
            tol.evolution,
        ));
        let flavor_a = Flavor::A.vector();
        reports.push(OracleReport::vector(
            "evolution-flavor-a",
            &evolve(&sd, &flavor_a, t),
            &evolve_by_series(&h, &flavor_a, t),
            tol.evolution,
        ));

        let (phi_p, phi_m) = dual_basis(sd.u_plus(), sd.u_minus())?;
        let eta = metric_from_eigvecs(sd.u_plus(), sd.u_minus(), &phi_p, &phi_m)?;
        reports.push(OracleReport::matrix(
            "eta-plus",
            sd.eta_plus(),
            &eta,
            tol.metric,
        ));
        reports.push(OracleReport::matrix(
            "eta-plus-inverse",
            &sd.eta_plus_inv(),
            &inverse_metric_from_eigvecs(sd.u_plus(), sd.u_minus()),
            tol.metric,
        ));

        let unit = normalize_in_metric(sd.eta_plus(), &psi);
        let mut d = numeric_time_derivative_check(&h, sd.eta_plus(), &unit, t);
        d.quantity = "eta-plus-norm-derivative".into();
        d.tolerance = tol.derivative * d.primary[0].abs().max(1.0);
        d.pass = d.difference <= d.tolerance;
        reports.push(d);
    }
    Ok(reports)
}
