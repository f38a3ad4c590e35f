//! Open-loop Nash equilibrium, available in closed form.

use crate::error::{Error, Result};
use crate::game::ValidatedGame;
use crate::scalar::{lit, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct OpenLoopEquilibrium<T> {
    /// `xi_i = q_i / (sqrt(a^2 + sigma_bar) - a)`
    pub xi: Vec<T>,
    /// `sqrt(a^2 + sigma_bar) + a`
    pub p_bar: T,
    /// Cost coefficients: `J_i = k_i x0^2`.
    pub k_star: Vec<T>,
    /// `a - sum_j s_j xi_j`; equals `-sqrt(a^2 + sigma_bar)`.
    pub decay_rate: T,
    pub costs: Vec<T>,
    pub weighted_cost: T,
}

impl<T: Scalar> OpenLoopEquilibrium<T> {
    pub fn weighted_k(&self, game: &ValidatedGame<T>) -> T {
        game.mu().dot(&self.k_star)
    }

    /// Control amplitudes `-(b_i / r_i) xi_i x0`, i.e. `u_i(0)`.
    pub fn amplitudes(&self, game: &ValidatedGame<T>) -> Vec<T> {
        let spec = game.spec();
        (0..self.xi.len())
            .map(|i| -(spec.b[i] / spec.r[i]) * self.xi[i] * spec.x0)
            .collect()
    }
}

pub fn solve_openloop<T: Scalar>(game: &ValidatedGame<T>) -> OpenLoopEquilibrium<T> {
    let a = game.a();
    let params = game.params();
    let q = &game.spec().q;
    let two = lit::<T>(2.0);
    let root = (a * a + params.sigma_bar).sqrt();
    let gap = root - a;
    let xi: Vec<T> = q.iter().map(|&qi| qi / gap).collect();
    let k_star: Vec<T> = q
        .iter()
        .zip(&params.sigma)
        .map(|(&qi, &si)| (qi / two + si * qi / (two * gap * gap)) / root)
        .collect();
    let decay_rate = a - params.s.iter().zip(&xi).map(|(&s, &x)| s * x).sum::<T>();
    let x0sq = game.x0() * game.x0();
    let costs = k_star.iter().map(|&k| k * x0sq).collect();
    let weighted_cost = game.mu().dot(&k_star) * x0sq;
    OpenLoopEquilibrium {
        xi,
        p_bar: root + a,
        k_star,
        decay_rate,
        costs,
        weighted_cost,
    }
}

/// `u_i(t) = -(b_i / r_i) xi_i exp(decay_rate t) x0`
pub fn openloop_control<T: Scalar>(eq: &OpenLoopEquilibrium<T>, game: &ValidatedGame<T>, t: T) -> Result<Vec<T>> {
    if t < T::zero() {
        return Err(Error::NegativeTime { t: t.to_f64().unwrap_or(f64::NAN) });
    }
    let decay = (eq.decay_rate * t).exp();
    Ok(eq.amplitudes(game).into_iter().map(|u| u * decay).collect())
}

/// `2 a xi_i + q_i - xi_i sum_j s_j xi_j`
pub fn riccati_residual_ol<T: Scalar>(game: &ValidatedGame<T>, xi: &[T]) -> Vec<T> {
    let a = game.a();
    let s = &game.params().s;
    let q = &game.spec().q;
    let two = lit::<T>(2.0);
    let total: T = s.iter().zip(xi).map(|(&s, &x)| s * x).sum();
    (0..xi.len()).map(|i| two * a * xi[i] + q[i] - xi[i] * total).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{validate_spec, GameSpec, WeightVector};
    use crate::scalar::max_abs;

    fn flow(n: usize) -> ValidatedGame<f64> {
        validate_spec(
            GameSpec::new(0.0, vec![1.0; n], vec![1.0; n], vec![1.0; n], 1.0),
            WeightVector::uniform(n),
        )
        .unwrap()
    }

    fn sample() -> ValidatedGame<f64> {
        validate_spec(
            GameSpec::new(0.4, vec![1.0, -2.0, 0.5], vec![2.0, 0.3, 1.1], vec![0.5, 1.5, 2.0], 1.7),
            WeightVector::new(vec![0.2, 0.3, 0.5]),
        )
        .unwrap()
    }

    #[test]
    fn flow_control_costs() {
        let e2 = solve_openloop(&flow(2));
        let expected2 = (0.5 + 0.25) / 2f64.sqrt();
        assert!((e2.weighted_cost - expected2).abs() < 1e-14);
        assert!((e2.weighted_cost - 0.5303).abs() < 5e-5);
        let e3 = solve_openloop(&flow(3));
        assert!((e3.weighted_cost - 0.3849).abs() < 5e-5);
        for n in 1..40 {
            let nf = n as f64;
            let e = solve_openloop(&flow(n));
            let expected = (0.5 + 0.5 / nf) / nf.sqrt();
            for &k in &e.k_star {
                assert!((k - expected).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn a_zero_specialization() {
        let g: ValidatedGame<f64> = validate_spec(
            GameSpec::new(0.0, vec![1.0, 2.0], vec![3.0, 0.5], vec![1.0, 4.0], 1.0),
            WeightVector::uniform(2),
        )
        .unwrap();
        let e = solve_openloop(&g);
        let p = g.params();
        let sb = p.sigma_bar;
        for i in 0..2 {
            let q = g.spec().q[i];
            let k = (q / 2.0 + p.sigma[i] * q / (2.0 * sb)) / sb.sqrt();
            assert!((e.k_star[i] - k).abs() < 1e-14);
        }
    }

    #[test]
    fn equilibrium_invariants() {
        let g = sample();
        let e = solve_openloop(&g);
        let p = g.params();
        let a = g.a();
        assert!(e.decay_rate < 0.0);
        assert!((e.decay_rate + (a * a + p.sigma_bar).sqrt()).abs() < 1e-12);
        assert!(max_abs(&riccati_residual_ol(&g, &e.xi)) < 1e-12);
        let total: f64 = p.s.iter().zip(&e.xi).map(|(s, x)| s * x).sum();
        for i in 0..3 {
            // p_i = sigma_i / (p_bar - 2a), summing to p_bar
            let pi = p.s[i] * e.xi[i];
            assert!((pi - p.sigma[i] / (e.p_bar - 2.0 * a)).abs() < 1e-10);
            // cost coefficients solve the linear Lyapunov equation
            let lin = 2.0 * (a - total) * e.k_star[i] + g.spec().q[i] + p.s[i] * e.xi[i] * e.xi[i];
            assert!(lin.abs() < 1e-10);
            assert!(e.xi[i] > 0.0 && e.k_star[i] > 0.0);
        }
        assert!((total - e.p_bar).abs() < 1e-10);
    }

    #[test]
    fn residual_examples() {
        let g = flow(2);
        assert_eq!(riccati_residual_ol(&g, &[0.0, 0.0]), vec![1.0, 1.0]);
        let e = solve_openloop(&g);
        let scaled: Vec<f64> = e.xi.iter().map(|x| x * 1.01).collect();
        assert!(max_abs(&riccati_residual_ol(&g, &scaled)) > 1e-3);
    }

    #[test]
    fn controls() {
        let g = flow(2);
        let e = solve_openloop(&g);
        let u0 = openloop_control(&e, &g, 0.0).unwrap();
        for u in &u0 {
            assert!((u + 1.0 / 2f64.sqrt()).abs() < 1e-14);
        }
        let eps = 1e-8;
        let norm0 = u0.iter().map(|u| u * u).sum::<f64>().sqrt();
        let t = (norm0 / eps).ln() / e.decay_rate.abs();
        for u in openloop_control(&e, &g, t).unwrap() {
            assert!(u.abs() <= eps * (1.0 + 1e-9));
        }
        assert!(matches!(openloop_control(&e, &g, -1.0), Err(Error::NegativeTime { .. })));
    }

    #[test]
    fn cost_scales_with_square_of_initial_state() {
        let g = sample();
        let h = g.with_initial_state(3.0 * g.x0()).unwrap();
        let (e, f) = (solve_openloop(&g), solve_openloop(&h));
        for (a, b) in e.costs.iter().zip(&f.costs) {
            assert!((b - 9.0 * a).abs() < 1e-12 * b.abs());
        }
    }
}
