//! Efficiency indices: Price of Anarchy under feedback and open-loop
//! information, Price of Information, their analytic bounds, and the
//! large-population approximations.

use crate::error::{Error, Result};
use crate::feedback::{
    analyze_feedback_eigen_with, solve_feedback_fixedpoint, FeedbackEquilibrium, FeedbackOptions, MonomialMatrix,
    Warning,
};
use crate::game::ValidatedGame;
use crate::openloop::{solve_openloop, OpenLoopEquilibrium};
use crate::scalar::{lit, to_f64, Scalar};
use crate::social::{solve_social, SocialOptimum};
use crate::linalg;

/// Worst-case ratio of the weighted equilibrium cost to the social optimum:
/// `max_k (mu . k) / k_hat`.
pub fn price_of_anarchy_fb<T: Scalar>(
    game: &ValidatedGame<T>,
    equilibria: &[FeedbackEquilibrium<T>],
    social: &SocialOptimum<T>,
) -> Result<T> {
    equilibria
        .iter()
        .map(|e| e.weighted_k(game) / social.k_hat)
        .reduce(T::max)
        .ok_or(Error::EmptyEquilibriumSet)
}

/// `k_mu* / k_hat` for the (unique) open-loop equilibrium.
pub fn price_of_anarchy_ol<T: Scalar>(
    game: &ValidatedGame<T>,
    ol: &OpenLoopEquilibrium<T>,
    social: &SocialOptimum<T>,
) -> T {
    ol.weighted_k(game) / social.k_hat
}

/// `chi = rho_OL / rho_FB`.
pub fn price_of_information<T: Scalar>(rho_ol: T, rho_fb: T) -> Result<T> {
    if rho_fb == T::zero() || !rho_fb.is_finite() {
        return Err(Error::DivisionByZero { what: "rho_fb" });
    }
    Ok(rho_ol / rho_fb)
}

/// Absolute row sums of the monomial matrix, read off its structure:
/// `N + |a|` for the empty set and
/// `(|a| + sum_{i in Omega} sigma_i + N - |Omega|) / (2 |Omega| - 1)` otherwise.
pub fn gersgorin_row_sum<T: Scalar>(game: &ValidatedGame<T>, omega: crate::feedback::Subset) -> T {
    let n = game.n();
    let a = game.a().abs();
    if omega.is_empty() {
        return lit::<T>(n as f64) + a;
    }
    let sigma = &game.params().sigma;
    let m = omega.len();
    let sum: T = omega.members(n).map(|i| sigma[i]).sum();
    (a + sum + lit((n - m) as f64)) / lit((2 * m - 1) as f64)
}

/// Max absolute row sum of the monomial matrix, an upper bound on its
/// spectral radius. Computed without forming the matrix: for each subset
/// size the largest row sum comes from the largest `sigma_i`.
pub fn gersgorin_bound<T: Scalar>(game: &ValidatedGame<T>) -> T {
    let n = game.n();
    let a = game.a().abs();
    let mut sigma = game.params().sigma.clone();
    sigma.sort_by(|x, y| y.partial_cmp(x).unwrap_or(std::cmp::Ordering::Equal));
    let mut best = lit::<T>(n as f64) + a;
    let mut top = T::zero();
    for (m, &s) in sigma.iter().enumerate() {
        let size = m + 1;
        top = top + s;
        let rs = (a + top + lit((n - size) as f64)) / lit((2 * size - 1) as f64);
        best = best.max(rs);
    }
    best
}

/// `mu_s_max (rho_M + a) / k_hat` for a spectral-radius value or surrogate.
pub fn spectral_poa_bound<T: Scalar>(game: &ValidatedGame<T>, social: &SocialOptimum<T>, radius: T) -> T {
    game.params().mu_s_max * (radius + game.a()) / social.k_hat
}

/// `(1 + (N + sigma_max - 1) / (2a)) s_bullet`. Valid for `a > 0` when
/// `sigma_max >= 1` and `mu_s_max b_bar <= s_bullet` (always true for
/// uniform weights); otherwise `BoundInapplicable`.
pub fn poa_bound_positive_drift<T: Scalar>(game: &ValidatedGame<T>) -> Result<T> {
    let a = game.a();
    if a <= T::zero() {
        return Err(Error::BoundInapplicable {
            reason: "requires a > 0",
        });
    }
    let p = game.params();
    require_sigma_max(game)?;
    let slack = lit::<T>(1e-12) * p.s_bullet;
    if p.mu_s_max * p.b_bar > p.s_bullet + slack {
        return Err(Error::BoundInapplicable {
            reason: "requires mu_s_max * b_bar <= s_bullet",
        });
    }
    let n = lit::<T>(game.n() as f64);
    Ok((T::one() + (n + p.sigma_max - T::one()) / (lit::<T>(2.0) * a)) * p.s_bullet)
}

/// `mu_s_max / (sqrt(q_bar) sqrt(mu_s_min)) sqrt(N) (N + sigma_max - 1)`.
/// Valid for `a = 0` when `sigma_max >= 1`.
pub fn poa_bound_zero_drift<T: Scalar>(game: &ValidatedGame<T>) -> Result<T> {
    if game.a() != T::zero() {
        return Err(Error::BoundInapplicable {
            reason: "requires a = 0",
        });
    }
    require_sigma_max(game)?;
    let p = game.params();
    let n = lit::<T>(game.n() as f64);
    Ok(p.mu_s_max / (p.q_bar.sqrt() * p.mu_s_min.sqrt()) * n.sqrt() * (n + p.sigma_max - T::one()))
}

// Below 1 the empty-set row dominates the Gersgorin sum and
// `N + sigma_max - 1` no longer bounds the spectral radius.
fn require_sigma_max<T: Scalar>(game: &ValidatedGame<T>) -> Result<()> {
    if game.params().sigma_max < T::one() {
        return Err(Error::BoundInapplicable {
            reason: "requires sigma_max >= 1",
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoaBounds<T> {
    pub gersgorin: T,
    pub spectral_radius: Option<T>,
    /// Spectral bound with the exact spectral radius.
    pub spectral_exact: Option<T>,
    /// Spectral bound with the Gersgorin surrogate.
    pub spectral_gersgorin: T,
    pub positive_drift: Option<T>,
    pub zero_drift: Option<T>,
}

/// Every PoA upper bound that applies to `game`. The exact spectral radius
/// is taken from `m_tilde` when given.
pub fn poa_bounds<T: Scalar>(
    game: &ValidatedGame<T>,
    social: &SocialOptimum<T>,
    m_tilde: Option<&MonomialMatrix<T>>,
) -> Result<PoaBounds<T>> {
    let spectral_radius = match m_tilde {
        Some(m) => Some(linalg::spectral_radius(&m.eigenvalues()?)),
        None => None,
    };
    Ok(bounds_from_radius(game, social, spectral_radius))
}

fn bounds_from_radius<T: Scalar>(
    game: &ValidatedGame<T>,
    social: &SocialOptimum<T>,
    spectral_radius: Option<T>,
) -> PoaBounds<T> {
    let gersgorin = gersgorin_bound(game);
    PoaBounds {
        gersgorin,
        spectral_radius,
        spectral_exact: spectral_radius.map(|r| spectral_poa_bound(game, social, r)),
        spectral_gersgorin: spectral_poa_bound(game, social, gersgorin),
        positive_drift: poa_bound_positive_drift(game).ok(),
        zero_drift: poa_bound_zero_drift(game).ok(),
    }
}

/// How well the large-population assumptions hold; reported, not enforced.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxConditions<T> {
    /// `a / N`
    pub drift_ratio: T,
    /// `sigma_max / sigma_bar`
    pub concentration: T,
    /// Whether every `p_-i > a` at the equilibrium used, when one is known.
    pub others_exceed_drift: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LargeNApprox<T> {
    /// `sigma_i / sqrt(2 sigma_bar)`
    pub p_approx: Vec<T>,
    /// Feedback gains `-sigma_i / (b_i sqrt(2 sigma_bar))`.
    pub gain_approx: Vec<T>,
    /// `q_bar x0^2 / sqrt(2 sigma_bar)`
    pub j_star_approx: T,
    /// `q_bar / (k_hat sqrt(2 sigma_bar))`
    pub rho_fb_approx: T,
    /// `sqrt(q_bar b_bar / (2 sigma_bar))`, the `a = 0` form.
    pub rho_fb_approx_a0: Option<T>,
    /// `(sqrt(2)/2) (1 + sum_i mu_i q_i sigma_i / (q_bar sigma_bar))`
    pub chi_approx: T,
    pub conditions: ApproxConditions<T>,
}

pub fn large_population_approx<T: Scalar>(
    game: &ValidatedGame<T>,
    social: &SocialOptimum<T>,
    equilibrium: Option<&FeedbackEquilibrium<T>>,
) -> LargeNApprox<T> {
    let p = game.params();
    let spec = game.spec();
    let root = (lit::<T>(2.0) * p.sigma_bar).sqrt();
    let p_approx: Vec<T> = p.sigma.iter().map(|&s| s / root).collect();
    let gain_approx = p.sigma.iter().zip(&spec.b).map(|(&s, &b)| -s / (b * root)).collect();
    let weighted: T = (0..game.n()).map(|i| game.mu().mu[i] * spec.q[i] * p.sigma[i]).sum();
    let others_exceed_drift = equilibrium.map(|e| {
        let total: T = e.p.iter().copied().sum();
        e.p.iter().all(|&pi| total - pi > game.a())
    });
    LargeNApprox {
        p_approx,
        gain_approx,
        j_star_approx: p.q_bar * spec.x0 * spec.x0 / root,
        rho_fb_approx: p.q_bar / (social.k_hat * root),
        rho_fb_approx_a0: (game.a() == T::zero()).then(|| (p.q_bar * p.b_bar / (lit::<T>(2.0) * p.sigma_bar)).sqrt()),
        chi_approx: T::FRAC_1_SQRT_2() * (T::one() + weighted / (p.q_bar * p.sigma_bar)),
        conditions: ApproxConditions {
            drift_ratio: game.a() / lit(game.n() as f64),
            concentration: p.sigma_max / p.sigma_bar,
            others_exceed_drift,
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoiDesignCheck<T> {
    /// `sum_i mu_i q_i sigma_i / (q_bar sigma_bar)`
    pub lhs: T,
    /// `sqrt(2) chi_target - 1`
    pub rhs: T,
    pub satisfied: bool,
}

/// Necessary condition for the PoI to stay below `chi_target` in a large
/// game with `a = 0`.
pub fn poi_design_check<T: Scalar>(game: &ValidatedGame<T>, chi_target: T) -> Result<PoiDesignCheck<T>> {
    let lo = T::FRAC_1_SQRT_2();
    let hi = T::SQRT_2();
    if !(chi_target > lo && chi_target <= hi) {
        return Err(Error::TargetOutOfRange {
            target: to_f64(chi_target),
        });
    }
    let p = game.params();
    let spec = game.spec();
    let weighted: T = (0..game.n()).map(|i| game.mu().mu[i] * spec.q[i] * p.sigma[i]).sum();
    let lhs = weighted / (p.q_bar * p.sigma_bar);
    let rhs = hi * chi_target - T::one();
    Ok(PoiDesignCheck {
        lhs,
        rhs,
        satisfied: lhs <= rhs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquilibriumMethod {
    /// All equilibria enumerated through the monomial eigenproblem.
    Eigen,
    /// Only the fixed-point equilibrium was computed; others may exist.
    FixedPoint,
}

/// All indices of one game.
#[derive(Debug, Clone)]
pub struct IndexReport<T> {
    pub method: EquilibriumMethod,
    pub feedback: Vec<FeedbackEquilibrium<T>>,
    pub openloop: OpenLoopEquilibrium<T>,
    pub social: SocialOptimum<T>,
    pub rho_fb: T,
    /// True when `rho_fb` is a max over a possibly incomplete equilibrium set.
    pub rho_fb_is_lower_bound: bool,
    pub rho_ol: T,
    pub chi: T,
    pub bounds: PoaBounds<T>,
    /// `k_mu* / (mu_s_max (rho_M + a))`, with the exact spectral radius.
    pub chi_lower_bound: Option<T>,
    /// Same with the Gersgorin surrogate for the spectral radius.
    pub chi_lower_bound_gersgorin: T,
    pub approximations: LargeNApprox<T>,
    pub warnings: Vec<Warning>,
}

pub fn compute_indices<T: Scalar>(game: &ValidatedGame<T>) -> Result<IndexReport<T>> {
    compute_indices_with(game, &FeedbackOptions::for_scalar::<T>())
}

/// Solves every equilibrium concept and evaluates all indices. Games above
/// the monomial-matrix cap fall back to the fixed-point solver.
pub fn compute_indices_with<T: Scalar>(game: &ValidatedGame<T>, opts: &FeedbackOptions) -> Result<IndexReport<T>> {
    let social = solve_social(game);
    let openloop = solve_openloop(game);
    let (method, feedback, radius, warnings) = if game.n() <= opts.n_cap {
        let analysis = analyze_feedback_eigen_with(game, opts)?;
        let radius = analysis.spectral_radius();
        let warnings = analysis.warnings();
        if analysis.equilibria.is_empty() {
            return Err(Error::NoEquilibrium {
                diagnostics: Box::new(analysis.diagnostics),
            });
        }
        (EquilibriumMethod::Eigen, analysis.equilibria, Some(radius), warnings)
    } else {
        let eq = solve_feedback_fixedpoint(game)?;
        (EquilibriumMethod::FixedPoint, vec![eq], None, Vec::new())
    };
    let rho_fb = price_of_anarchy_fb(game, &feedback, &social)?;
    let rho_ol = price_of_anarchy_ol(game, &openloop, &social);
    let chi = price_of_information(rho_ol, rho_fb)?;
    let bounds = bounds_from_radius(game, &social, radius);
    let k_mu = openloop.weighted_k(game);
    let mu_s_max = game.params().mu_s_max;
    let a = game.a();
    let chi_lower_bound = radius.map(|r| k_mu / (mu_s_max * (r + a)));
    let chi_lower_bound_gersgorin = k_mu / (mu_s_max * (bounds.gersgorin + a));
    let approximations = large_population_approx(game, &social, feedback.first());
    Ok(IndexReport {
        method,
        rho_fb_is_lower_bound: method == EquilibriumMethod::FixedPoint,
        feedback,
        openloop,
        social,
        rho_fb,
        rho_ol,
        chi,
        bounds,
        chi_lower_bound,
        chi_lower_bound_gersgorin,
        approximations,
        warnings,
    })
}
