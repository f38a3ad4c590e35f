//! Rate-based multiuser flow control: `x' = (1/f(N)) sum_i u_i` with
//! unit weights, equal importance `mu_i = 1/N` and `x(0) = 1`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::feedback::solve_feedback_fixedpoint;
use crate::game::{validate_spec, GameSpec, ValidatedGame, WeightVector};
use crate::indices::{large_population_approx, poa_bound_zero_drift};
use crate::openloop::solve_openloop;
use crate::report::{Cell, Dataset};
use crate::social::solve_social;

pub const DEFAULT_N_MAX: usize = 50;

/// Normalization of the queue dynamics. The input gain is `b_i = 1/f(N)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FlowNormalization {
    /// `f(N) = 1`
    One,
    /// Input gain `b_i = 1/N`, i.e. `f(N) = N`.
    OneOverN,
    /// `f(N) = sqrt(N)`
    SqrtN,
    /// Fixed `f(N) = c`.
    Custom(f64),
}

impl FlowNormalization {
    pub fn factor(self, n: usize) -> f64 {
        let nf = n as f64;
        match self {
            Self::One => 1.0,
            Self::OneOverN => nf,
            Self::SqrtN => nf.sqrt(),
            Self::Custom(c) => c,
        }
    }

    pub fn tag(self) -> String {
        match self {
            Self::One => "one".into(),
            Self::OneOverN => "one-over-n".into(),
            Self::SqrtN => "sqrt-n".into(),
            Self::Custom(c) => format!("custom:{c}"),
        }
    }
}

impl fmt::Display for FlowNormalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

impl FromStr for FlowNormalization {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "one" | "1" => Ok(Self::One),
            "one-over-n" | "1/n" => Ok(Self::OneOverN),
            "sqrt-n" => Ok(Self::SqrtN),
            _ => s
                .strip_prefix("custom:")
                .and_then(|c| c.parse().ok())
                .map(Self::Custom)
                .ok_or_else(|| format!("unknown normalization `{s}` (one, one-over-n, sqrt-n, custom:<c>)")),
        }
    }
}

pub fn build_flow_control(n: usize) -> Result<ValidatedGame<f64>> {
    build_normalized_flow_control(n, FlowNormalization::One)
}

pub fn build_normalized_flow_control(n: usize, norm: FlowNormalization) -> Result<ValidatedGame<f64>> {
    if n == 0 {
        return Err(Error::NoPlayers);
    }
    let f = norm.factor(n);
    if !(f > 0.0 && f.is_finite()) {
        return Err(Error::InvalidNormalization { value: f });
    }
    validate_spec(
        GameSpec::new(0.0, vec![1.0 / f; n], vec![1.0; n], vec![1.0; n], 1.0),
        WeightVector::uniform(n),
    )
}

/// Exact indices of the symmetric flow-control game.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowIndices {
    pub n: usize,
    pub f: f64,
    pub j_fb: f64,
    pub j_social: f64,
    pub j_ol: f64,
    pub rho_fb: f64,
    pub rho_ol: f64,
    pub chi: f64,
}

pub fn closed_form_flow_indices(n: usize, norm: FlowNormalization) -> FlowIndices {
    let nf = n as f64;
    let f = norm.factor(n);
    let tail = 0.5 + 0.5 / nf;
    FlowIndices {
        n,
        f,
        j_fb: f / (2.0 * nf - 1.0).sqrt(),
        j_social: f / nf,
        j_ol: f / nf.sqrt() * tail,
        rho_fb: nf / (2.0 * nf - 1.0).sqrt(),
        rho_ol: nf.sqrt() * tail,
        chi: (2.0 - 1.0 / nf).sqrt() * tail,
    }
}

/// The same indices from the general solvers.
pub fn solved_flow_indices(n: usize, norm: FlowNormalization) -> Result<FlowIndices> {
    let g = build_normalized_flow_control(n, norm)?;
    let fb = solve_feedback_fixedpoint(&g)?;
    let ol = solve_openloop(&g);
    let opt = solve_social(&g);
    let rho_fb = fb.weighted_cost / opt.cost;
    let rho_ol = ol.weighted_cost / opt.cost;
    Ok(FlowIndices {
        n,
        f: norm.factor(n),
        j_fb: fb.weighted_cost,
        j_social: opt.cost,
        j_ol: ol.weighted_cost,
        rho_fb,
        rho_ol,
        chi: rho_ol / rho_fb,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReproduceTarget {
    Table1,
    Table2,
    FigPoiVsN,
    FigPoaVsN,
    FigNormalizedPoi,
    FigNormalizedPoa,
    FigSqrtNPoi,
}

impl ReproduceTarget {
    pub const ALL: [Self; 7] = [
        Self::Table1,
        Self::Table2,
        Self::FigPoiVsN,
        Self::FigPoaVsN,
        Self::FigNormalizedPoi,
        Self::FigNormalizedPoa,
        Self::FigSqrtNPoi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Table1 => "table1",
            Self::Table2 => "table2",
            Self::FigPoiVsN => "fig_poi_vs_N",
            Self::FigPoaVsN => "fig_poa_vs_N",
            Self::FigNormalizedPoi => "fig_normalized_poi",
            Self::FigNormalizedPoa => "fig_normalized_poa",
            Self::FigSqrtNPoi => "fig_sqrtN_poi",
        }
    }
}

impl fmt::Display for ReproduceTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ReproduceTarget {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let names: Vec<_> = Self::ALL.iter().map(|t| t.name()).collect();
                format!("unknown target `{s}` (expected one of {})", names.join(", "))
            })
    }
}

/// Population sizes used for the tables.
pub const TABLE_GRID: [usize; 10] = [1, 2, 3, 4, 5, 10, 20, 50, 100, 1000];

pub fn reproduce(target: ReproduceTarget) -> Result<Dataset> {
    reproduce_with(target, DEFAULT_N_MAX)
}

/// Figures cover `N = 2..=n_max`; tables use [`TABLE_GRID`].
pub fn reproduce_with(target: ReproduceTarget, n_max: usize) -> Result<Dataset> {
    match target {
        ReproduceTarget::Table1 => table1(),
        ReproduceTarget::Table2 => table2(),
        ReproduceTarget::FigPoiVsN => poi_figure(FlowNormalization::One, n_max),
        ReproduceTarget::FigPoaVsN => poa_figure(FlowNormalization::One, n_max),
        ReproduceTarget::FigNormalizedPoi => poi_figure(FlowNormalization::OneOverN, n_max),
        ReproduceTarget::FigNormalizedPoa => poa_figure(FlowNormalization::OneOverN, n_max),
        ReproduceTarget::FigSqrtNPoi => poi_figure(FlowNormalization::SqrtN, n_max),
    }
}

fn table1() -> Result<Dataset> {
    let mut d = Dataset::new([
        "N", "normalization", "f", "J_fb", "J_social", "J_ol", "rho_fb", "rho_ol", "chi", "J_fb_solver",
        "J_social_solver", "J_ol_solver", "rho_fb_solver", "rho_ol_solver", "chi_solver",
    ]);
    for norm in [FlowNormalization::One, FlowNormalization::OneOverN, FlowNormalization::SqrtN] {
        for n in TABLE_GRID {
            let c = closed_form_flow_indices(n, norm);
            let s = solved_flow_indices(n, norm)?;
            d.push(vec![
                n.into(),
                norm.tag().into(),
                c.f.into(),
                c.j_fb.into(),
                c.j_social.into(),
                c.j_ol.into(),
                c.rho_fb.into(),
                c.rho_ol.into(),
                c.chi.into(),
                s.j_fb.into(),
                s.j_social.into(),
                s.j_ol.into(),
                s.rho_fb.into(),
                s.rho_ol.into(),
                s.chi.into(),
            ]);
        }
    }
    Ok(d)
}

fn table2() -> Result<Dataset> {
    let mut d = Dataset::new([
        "N", "normalization", "J_fb_approx", "J_social", "J_ol", "rho_fb_approx", "rho_ol", "chi_approx",
        "J_fb_model_approx", "rho_fb_model_approx", "chi_model_approx", "J_fb_exact", "rho_fb_exact", "chi_exact",
    ]);
    for norm in [FlowNormalization::One, FlowNormalization::OneOverN] {
        for n in TABLE_GRID {
            let nf = n as f64;
            let f = norm.factor(n);
            let tail = 0.5 + 0.5 / nf;
            let g = build_normalized_flow_control(n, norm)?;
            let opt = solve_social(&g);
            let approx = large_population_approx(&g, &opt, None);
            let exact = closed_form_flow_indices(n, norm);
            d.push(vec![
                n.into(),
                norm.tag().into(),
                (f / (2.0 * nf).sqrt()).into(),
                (f / nf).into(),
                (f / nf.sqrt() * tail).into(),
                (nf / 2.0).sqrt().into(),
                (nf.sqrt() * tail).into(),
                (std::f64::consts::FRAC_1_SQRT_2 * (1.0 + 1.0 / nf)).into(),
                approx.j_star_approx.into(),
                approx.rho_fb_approx.into(),
                approx.chi_approx.into(),
                exact.j_fb.into(),
                exact.rho_fb.into(),
                exact.chi.into(),
            ]);
        }
    }
    Ok(d)
}

fn poi_figure(norm: FlowNormalization, n_max: usize) -> Result<Dataset> {
    let mut d = Dataset::new([
        "N", "J_fb", "J_ol", "J_social", "chi", "J_fb_closed", "J_ol_closed", "chi_closed", "J_fb_approx", "chi_approx",
    ]);
    for n in 2..=n_max {
        let s = solved_flow_indices(n, norm)?;
        let c = closed_form_flow_indices(n, norm);
        let g = build_normalized_flow_control(n, norm)?;
        let approx = large_population_approx(&g, &solve_social(&g), None);
        d.push(vec![
            n.into(),
            s.j_fb.into(),
            s.j_ol.into(),
            s.j_social.into(),
            s.chi.into(),
            c.j_fb.into(),
            c.j_ol.into(),
            c.chi.into(),
            approx.j_star_approx.into(),
            approx.chi_approx.into(),
        ]);
    }
    Ok(d)
}

fn poa_figure(norm: FlowNormalization, n_max: usize) -> Result<Dataset> {
    let mut d = Dataset::new([
        "N", "rho_fb", "rho_ol", "rho_fb_closed", "rho_ol_closed", "rho_fb_approx", "rho_fb_bound",
    ]);
    for n in 2..=n_max {
        let s = solved_flow_indices(n, norm)?;
        let c = closed_form_flow_indices(n, norm);
        let g = build_normalized_flow_control(n, norm)?;
        let approx = large_population_approx(&g, &solve_social(&g), None);
        d.push(vec![
            n.into(),
            s.rho_fb.into(),
            s.rho_ol.into(),
            c.rho_fb.into(),
            c.rho_ol.into(),
            approx.rho_fb_approx.into(),
            Cell::from(poa_bound_zero_drift(&g).ok()),
        ]);
    }
    Ok(d)
}
