//! Altruistic feedback game, in which player `i` minimizes
//! `sum_j lambda_ij J_j`, and the Price of Cooperation.

use crate::error::{Error, Result};
use crate::feedback::FeedbackEquilibrium;
use crate::game::{CooperationMatrix, ValidatedGame};
use crate::scalar::{lit, max_abs, to_f64, Scalar, Tolerances};

pub const MAX_ITERATIONS: usize = 10_000;
pub const GAIN_TOLERANCE: f64 = 1e-12;
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct AltruisticEquilibrium<T> {
    pub gains: Vec<T>,
    /// Value coefficients of the altruistic costs: `J~_i = k_tilde_i x0^2`.
    pub k_tilde: Vec<T>,
    /// Individual costs `J_i` under the altruistic profile.
    pub actual_costs: Vec<T>,
    pub closed_loop_pole: T,
    pub iterations: usize,
    pub residual: T,
}

/// Per-player cost ratio against the worst feedback NE.
#[derive(Debug, Clone, PartialEq)]
pub struct PoCReport<T> {
    pub nu: Vec<T>,
    pub altruistic: AltruisticEquilibrium<T>,
    pub baseline_costs: Vec<T>,
    /// The numerator uses the one altruistic equilibrium found.
    pub single_equilibrium: bool,
}

struct BestResponse<T> {
    k: T,
    gain: T,
}

fn best_response<T: Scalar>(game: &ValidatedGame<T>, lambda: &CooperationMatrix<T>, gains: &[T], i: usize) -> BestResponse<T> {
    let spec = game.spec();
    let row = &lambda.rows[i];
    let mut drift = game.a();
    let mut q_eff = T::zero();
    for j in 0..game.n() {
        q_eff = q_eff + row[j] * spec.q[j];
        if j != i {
            drift = drift + spec.b[j] * gains[j];
            q_eff = q_eff + row[j] * spec.r[j] * gains[j] * gains[j];
        }
    }
    let r_eff = row[i] * spec.r[i];
    let b = spec.b[i];
    let k = (r_eff / (b * b)) * (drift + (drift * drift + q_eff * b * b / r_eff).sqrt());
    BestResponse { k, gain: -b * k / r_eff }
}

/// `2 K_i (a + sum_j b_j g_j) + sum_j lambda_ij (q_j + r_j g_j^2)`
fn stationarity<T: Scalar>(game: &ValidatedGame<T>, lambda: &CooperationMatrix<T>, gains: &[T], k: &[T]) -> Vec<T> {
    let spec = game.spec();
    let pole = closed_loop(game, gains);
    (0..game.n())
        .map(|i| {
            let weighted: T = (0..game.n())
                .map(|j| lambda.rows[i][j] * (spec.q[j] + spec.r[j] * gains[j] * gains[j]))
                .sum();
            lit::<T>(2.0) * k[i] * pole + weighted
        })
        .collect()
}

fn closed_loop<T: Scalar>(game: &ValidatedGame<T>, gains: &[T]) -> T {
    game.a() + game.spec().b.iter().zip(gains).map(|(&b, &g)| b * g).sum::<T>()
}

/// Gauss-Seidel best-response iteration from zero gains.
pub fn solve_altruistic_fb<T: Scalar>(
    game: &ValidatedGame<T>,
    lambda: &CooperationMatrix<T>,
) -> Result<AltruisticEquilibrium<T>> {
    let tols = Tolerances::for_scalar::<T>();
    lambda.validate(game.n(), &tols)?;
    let widen = tols.residual / Tolerances::default().residual;
    let n = game.n();
    let tol = lit::<T>(GAIN_TOLERANCE * widen);
    let mut gains = vec![T::zero(); n];
    let mut iterations = 0;
    loop {
        iterations += 1;
        let mut change = T::zero();
        for i in 0..n {
            let g = best_response(game, lambda, &gains, i).gain;
            change = change.max((g - gains[i]).abs());
            gains[i] = g;
        }
        if !change.is_finite() {
            return Err(non_convergence(iterations, change, &gains));
        }
        if change <= tol * (T::one() + max_abs(&gains)) {
            break;
        }
        if iterations >= MAX_ITERATIONS {
            return Err(non_convergence(iterations, change, &gains));
        }
    }
    let k_tilde: Vec<T> = (0..n).map(|i| best_response(game, lambda, &gains, i).k).collect();
    let pole = closed_loop(game, &gains);
    if pole >= T::zero() {
        return Err(Error::UnstableClosedLoop { pole: to_f64(pole) });
    }
    let spec = game.spec();
    let mut residual = max_abs(&stationarity(game, lambda, &gains, &k_tilde));
    for i in 0..n {
        let r_eff = lambda.rows[i][i] * spec.r[i];
        residual = residual.max((gains[i] + spec.b[i] * k_tilde[i] / r_eff).abs());
    }
    let residual_tol = lit::<T>(RESIDUAL_TOLERANCE * widen);
    if residual > residual_tol * (T::one() + max_abs(&k_tilde)) {
        return Err(non_convergence(iterations, residual, &gains));
    }
    let x0sq = game.x0() * game.x0();
    let actual_costs = (0..n)
        .map(|i| (spec.q[i] + spec.r[i] * gains[i] * gains[i]) * x0sq / (-lit::<T>(2.0) * pole))
        .collect();
    Ok(AltruisticEquilibrium {
        gains,
        k_tilde,
        actual_costs,
        closed_loop_pole: pole,
        iterations,
        residual,
    })
}

fn non_convergence<T: Scalar>(iterations: usize, change: T, gains: &[T]) -> Error {
    Error::NonConvergence {
        iterations,
        last_change: to_f64(change),
        gains: gains.iter().map(|&g| to_f64(g)).collect(),
    }
}

/// `nu_i = J_i(altruistic) / max_{feedback NE} J_i`.
pub fn price_of_cooperation<T: Scalar>(
    game: &ValidatedGame<T>,
    lambda: &CooperationMatrix<T>,
    equilibria: &[FeedbackEquilibrium<T>],
) -> Result<PoCReport<T>> {
    if equilibria.is_empty() {
        return Err(Error::EmptyEquilibriumSet);
    }
    let altruistic = solve_altruistic_fb(game, lambda)?;
    let baseline_costs: Vec<T> = (0..game.n())
        .map(|i| equilibria.iter().map(|e| e.costs[i]).fold(T::neg_infinity(), T::max))
        .collect();
    let nu = altruistic
        .actual_costs
        .iter()
        .zip(&baseline_costs)
        .map(|(&j, &b)| j / b)
        .collect();
    Ok(PoCReport {
        nu,
        altruistic,
        baseline_costs,
        single_equilibrium: true,
    })
}
