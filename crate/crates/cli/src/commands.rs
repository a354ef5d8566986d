use std::f64::consts::FRAC_PI_6;

use serde::Serialize;
use thiserror::Error;

use ptqs_core::neutrino::{
    generate_curve, generate_curve_for_alpha, CurveTemplate, NeutrinoError, OscillationConfig,
};
use ptqs_core::oracle::{run_suite, OracleReport, SuiteTolerances};
use ptqs_core::pt::{build_hermitian_equivalent, classify_phase, PtError};
use ptqs_core::transitions::period;
use ptqs_core::{decompose, Complex, Flavor, Mat2, PTParams, PhaseClass, SchemeRegistry, Vec2};

use crate::config::{ConfigError, Format, Grid, RunConfig};
use crate::output::{fmt_complex, fmt_num, Csv};

pub const TOLERANCE_ENV: &str = "PTQS_TOLERANCE";

const DEFAULT_RHO: f64 = 1.0;
const DEFAULT_SIGMA: f64 = 2.0;
const DEFAULT_VARPHI: f64 = FRAC_PI_6;
const DEFAULT_TIME_POINTS: usize = 65;
const DEFAULT_DRAWS: usize = 1000;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Physics(String),
    #[error("{0}")]
    Io(String),
    #[error("{failed} of {total} oracle comparisons failed")]
    Verification {
        failed: usize,
        total: usize,
        output: String,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Physics(_) => 2,
            CliError::Verification { .. } => 3,
        }
    }
}

impl From<PtError> for CliError {
    fn from(e: PtError) -> Self {
        CliError::Physics(e.to_string())
    }
}

fn neutrino_error(e: NeutrinoError) -> CliError {
    match e {
        NeutrinoError::UnbrokenViolation { bound, .. } => CliError::Physics(format!(
            "{e}; the unbroken phase needs |ρ sin φ| ≤ {} eV²",
            power_of_ten(bound)
        )),
        NeutrinoError::ExceptionalPoint { .. } | NeutrinoError::Pt(_) => {
            CliError::Physics(e.to_string())
        }
        NeutrinoError::NonPositiveEnergy(_) => ConfigError::invalid("energy", e.to_string()).into(),
        NeutrinoError::InvalidBaseline(_) => ConfigError::invalid("grid", e.to_string()).into(),
        NeutrinoError::AlphaOutOfRange(_) => {
            ConfigError::invalid("alpha_prime", e.to_string()).into()
        }
        NeutrinoError::NonFinite(name) => ConfigError::invalid(name, e.to_string()).into(),
    }
}

/// `2.5×10⁻³` style rendering.
fn power_of_ten(x: f64) -> String {
    let sci = format!("{x:e}");
    let (mantissa, exp) = sci.split_once('e').unwrap_or((&sci, "0"));
    if exp == "0" {
        return mantissa.to_string();
    }
    let sup: String = exp
        .chars()
        .map(|c| match c {
            '-' => '⁻',
            d => "⁰¹²³⁴⁵⁶⁷⁸⁹"
                .chars()
                .nth(d.to_digit(10).unwrap_or(0) as usize)
                .unwrap(),
        })
        .collect();
    format!("{mantissa}×10{sup}")
}

fn two_level_params(cfg: &RunConfig) -> Result<PTParams, CliError> {
    Ok(PTParams::general(
        cfg.rho.unwrap_or(DEFAULT_RHO),
        cfg.sigma.unwrap_or(DEFAULT_SIGMA),
        cfg.varphi.unwrap_or(DEFAULT_VARPHI),
        cfg.phi_offdiag.unwrap_or(0.0),
    )?)
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serialises") + "\n"
}

fn pair(z: Complex) -> [f64; 2] {
    [z.re, z.im]
}

fn mat_json(m: &Mat2) -> [[[f64; 2]; 2]; 2] {
    m.rows().map(|r| r.map(pair))
}

fn vec_json(v: &Vec2) -> [[f64; 2]; 2] {
    v.components().map(pair)
}

#[derive(Serialize)]
struct SpectrumJson {
    phase: String,
    hermitian_limit: bool,
    discriminant: f64,
    e_plus: f64,
    e_minus: f64,
    beta: f64,
    alpha: f64,
    sec_alpha: f64,
    tan_alpha: f64,
    u_plus: [[f64; 2]; 2],
    u_minus: [[f64; 2]; 2],
    eta_plus: [[[f64; 2]; 2]; 2],
    c: [[[f64; 2]; 2]; 2],
    g: [[[f64; 2]; 2]; 2],
    h_prime: [[[f64; 2]; 2]; 2],
}

pub fn spectrum(cfg: &RunConfig) -> Result<String, CliError> {
    let p = two_level_params(cfg)?;
    let phase = classify_phase(&p);
    let sd = decompose(&p)?;
    let he = build_hermitian_equivalent(&sd);
    let hermitian = p.is_hermitian_limit();
    let label = if hermitian {
        format!("{} (Hermitian limit)", phase.class)
    } else {
        phase.class.to_string()
    };
    debug_assert_eq!(phase.class, PhaseClass::Unbroken);

    match cfg.format {
        Format::Json => Ok(json(&SpectrumJson {
            phase: phase.class.to_string(),
            hermitian_limit: hermitian,
            discriminant: phase.discriminant,
            e_plus: sd.e_plus(),
            e_minus: sd.e_minus(),
            beta: sd.beta(),
            alpha: sd.alpha(),
            sec_alpha: sd.sec_alpha(),
            tan_alpha: sd.tan_alpha(),
            u_plus: vec_json(sd.u_plus()),
            u_minus: vec_json(sd.u_minus()),
            eta_plus: mat_json(sd.eta_plus()),
            c: mat_json(sd.c()),
            g: mat_json(&he.g),
            h_prime: mat_json(&he.h_prime),
        })),
        Format::Csv => {
            let mut t = Csv::new(&["quantity", "value"]);
            t.row(&["phase", &label]);
            for (name, v) in [
                ("discriminant", phase.discriminant),
                ("E_plus", sd.e_plus()),
                ("E_minus", sd.e_minus()),
                ("beta", sd.beta()),
                ("alpha", sd.alpha()),
                ("sec_alpha", sd.sec_alpha()),
                ("tan_alpha", sd.tan_alpha()),
            ] {
                t.row(&[name, &fmt_num(v)]);
            }
            for (name, v) in [("u_plus", sd.u_plus()), ("u_minus", sd.u_minus())] {
                for (i, z) in v.components().into_iter().enumerate() {
                    t.row(&[format!("{name}_{i}"), fmt_complex(z)]);
                }
            }
            for (name, m) in [
                ("eta_plus", sd.eta_plus()),
                ("C", sd.c()),
                ("G", &he.g),
                ("H_prime", &he.h_prime),
            ] {
                for (i, row) in m.rows().into_iter().enumerate() {
                    for (j, z) in row.into_iter().enumerate() {
                        t.row(&[format!("{name}_{i}{j}"), fmt_complex(z)]);
                    }
                }
            }
            Ok(t.finish())
        }
    }
}

#[derive(Serialize)]
struct ProbabilityRow {
    t: f64,
    p_aa: f64,
    p_ab: f64,
    p_ba: f64,
    p_bb: f64,
    row_sum_a: f64,
    row_sum_b: f64,
    delta_t: f64,
}

pub fn probabilities(cfg: &RunConfig) -> Result<String, CliError> {
    let registry = SchemeRegistry::with_builtins();
    let name = cfg
        .scheme
        .as_deref()
        .unwrap_or(SchemeRegistry::DEFAULT_SCHEME);
    let scheme = registry.get(name).ok_or_else(|| {
        let known: Vec<_> = registry.names().collect();
        ConfigError::invalid(
            "scheme",
            format!("unknown scheme `{name}` (known: {})", known.join(", ")),
        )
    })?;
    let sd = decompose(&two_level_params(cfg)?)?;
    let grid = match cfg.grid {
        Some(g) => g,
        None => Grid::new(0.0, period(&sd), DEFAULT_TIME_POINTS).expect("period is positive"),
    };

    let mut rows = Vec::with_capacity(grid.count);
    for t in grid.points() {
        let p = |from, to| {
            scheme
                .probability(&sd, from, to, t)
                .map(|r| r.probability)
                .map_err(|e| CliError::Physics(e.to_string()))
        };
        let (p_aa, p_ab) = (p(Flavor::A, Flavor::A)?, p(Flavor::A, Flavor::B)?);
        let (p_ba, p_bb) = (p(Flavor::B, Flavor::A)?, p(Flavor::B, Flavor::B)?);
        rows.push(ProbabilityRow {
            t,
            p_aa,
            p_ab,
            p_ba,
            p_bb,
            row_sum_a: p_aa + p_ab,
            row_sum_b: p_ba + p_bb,
            delta_t: p_ab - p_ba,
        });
    }

    Ok(match cfg.format {
        Format::Json => json(&rows),
        Format::Csv => {
            let mut t = Csv::new(&[
                "t",
                "P_aa",
                "P_ab",
                "P_ba",
                "P_bb",
                "row_sum_a",
                "row_sum_b",
                "delta_T",
            ]);
            for r in &rows {
                t.numbers(&[
                    r.t,
                    r.p_aa,
                    r.p_ab,
                    r.p_ba,
                    r.p_bb,
                    r.row_sum_a,
                    r.row_sum_b,
                    r.delta_t,
                ]);
            }
            t.finish()
        }
    })
}

#[derive(Serialize)]
struct CurveJson<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha_prime: Option<f64>,
    baseline_km: &'a [f64],
    p_mumu: &'a [f64],
    p_mutau: &'a [f64],
}

pub fn neutrino_scan(cfg: &RunConfig) -> Result<String, CliError> {
    let template = CurveTemplate::default();
    let baselines = match cfg.grid {
        Some(g) => g.points(),
        None => template.baselines.clone(),
    };
    let dm2 = cfg.dm2.unwrap_or(template.delta_m2_32);
    let sigma = cfg.sigma.unwrap_or(template.sigma);
    let energy = cfg.energy.unwrap_or(template.energy);

    let curves = match &cfg.alpha_prime {
        Some(alphas) => {
            for key in ["rho", "varphi"] {
                let set = if key == "rho" { cfg.rho } else { cfg.varphi };
                if set.is_some() {
                    return Err(ConfigError::invalid(
                        "alpha_prime",
                        format!("cannot be combined with `{key}`"),
                    )
                    .into());
                }
            }
            let template = CurveTemplate {
                delta_m2_32: dm2,
                sigma,
                energy,
                baselines,
            };
            alphas
                .iter()
                .map(|&a| Ok((Some(a), generate_curve_for_alpha(&template, a)?)))
                .collect::<Result<Vec<_>, NeutrinoError>>()
                .map_err(neutrino_error)?
        }
        None => {
            let osc = OscillationConfig {
                delta_m2_32: dm2,
                m2_bar: cfg.m2_bar.unwrap_or(0.0),
                rho: cfg.rho.unwrap_or(0.0),
                sigma,
                varphi: cfg.varphi.unwrap_or(0.0),
                energy,
                baselines,
            };
            vec![(None, generate_curve(&osc).map_err(neutrino_error)?)]
        }
    };

    Ok(match cfg.format {
        Format::Json => {
            let out: Vec<_> = curves
                .iter()
                .map(|(a, c)| CurveJson {
                    alpha_prime: *a,
                    baseline_km: &c.baseline_km,
                    p_mumu: &c.p_mumu,
                    p_mutau: &c.p_mutau,
                })
                .collect();
            json(&out)
        }
        Format::Csv if cfg.alpha_prime.is_some() => {
            let mut t = Csv::new(&["alpha_prime", "L_km", "P_mumu", "P_mutau"]);
            for (a, c) in &curves {
                for i in 0..c.len() {
                    t.numbers(&[
                        a.unwrap_or(0.0),
                        c.baseline_km[i],
                        c.p_mumu[i],
                        c.p_mutau[i],
                    ]);
                }
            }
            t.finish()
        }
        Format::Csv => {
            let mut t = Csv::new(&["L_km", "P_mumu", "P_mutau"]);
            let c = &curves[0].1;
            for i in 0..c.len() {
                t.numbers(&[c.baseline_km[i], c.p_mumu[i], c.p_mutau[i]]);
            }
            t.finish()
        }
    })
}


/// Tolerance precedence: config or flag, then the environment, then defaults.
pub fn verify_tolerances(
    cfg: &RunConfig,
    env: Option<&str>,
) -> Result<SuiteTolerances, ConfigError> {
    if let Some(t) = cfg.tolerance {
        return Ok(SuiteTolerances::override_all(t));
    }
    match env {
        Some(raw) => match raw.trim().parse::<f64>() {
            Ok(t) if t.is_finite() && t >= 0.0 => Ok(SuiteTolerances::override_all(t)),
            _ => Err(ConfigError::invalid(
                TOLERANCE_ENV,
                format!("`{raw}` is not a non-negative number"),
            )),
        },
        None => Ok(SuiteTolerances::default()),
    }
}

fn render_reports(reports: &[OracleReport], format: Format) -> String {
    match format {
        Format::Json => ptqs_core::oracle::to_json_lines(reports),
        Format::Csv => {
            let mut t = Csv::new(&["quantity", "difference", "tolerance", "pass"]);
            for r in reports {
                t.row(&[
                    r.quantity.clone(),
                    fmt_num(r.difference),
                    fmt_num(r.tolerance),
                    r.pass.to_string(),
                ]);
            }
            t.finish()
        }
    }
}

pub fn verify(cfg: &RunConfig, env_tolerance: Option<&str>) -> Result<String, CliError> {
    let tol = verify_tolerances(cfg, env_tolerance)?;
    let reports = run_suite(
        cfg.draws.unwrap_or(DEFAULT_DRAWS),
        cfg.seed.unwrap_or(0),
        tol,
    )
    .map_err(|e| CliError::Physics(e.to_string()))?;
    let output = render_reports(&reports, cfg.format);
    let failed = reports.iter().filter(|r| !r.pass).count();
    if failed > 0 {
        return Err(CliError::Verification {
            failed,
            total: reports.len(),
            output,
        });
    }
    Ok(output)
}
