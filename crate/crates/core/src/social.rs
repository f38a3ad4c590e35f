//! Centralized optimum of the `mu`-weighted total cost.

use crate::error::{Error, Result};
use crate::game::ValidatedGame;
use crate::scalar::{to_f64, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct SocialOptimum<T> {
    /// `(a + sqrt(a^2 + q_bar b_bar)) / b_bar`
    pub k_hat: T,
    /// `g_i = -b_i k_hat / (mu_i r_i)`
    pub gains: Vec<T>,
    /// `a - b_bar k_hat`
    pub closed_loop_pole: T,
    /// Minimum social cost `k_hat x0^2`.
    pub cost: T,
}

pub fn solve_social<T: Scalar>(game: &ValidatedGame<T>) -> SocialOptimum<T> {
    let a = game.a();
    let p = game.params();
    let spec = game.spec();
    let mu = &game.mu().mu;
    let k_hat = (a + (a * a + p.q_bar * p.b_bar).sqrt()) / p.b_bar;
    let gains = (0..game.n())
        .map(|i| -spec.b[i] * k_hat / (mu[i] * spec.r[i]))
        .collect();
    SocialOptimum {
        k_hat,
        gains,
        closed_loop_pole: a - p.b_bar * k_hat,
        cost: k_hat * spec.x0 * spec.x0,
    }
}

/// Open-loop representation of the optimum: `u_i(t) = g_i exp(pole t) x0`.
pub fn social_control<T: Scalar>(opt: &SocialOptimum<T>, game: &ValidatedGame<T>, t: T) -> Result<Vec<T>> {
    if t < T::zero() {
        return Err(Error::NegativeTime { t: to_f64(t) });
    }
    let phi = (opt.closed_loop_pole * t).exp();
    Ok(opt.gains.iter().map(|&g| g * phi * game.x0()).collect())
}
