//! Time-domain oracle: integrates the state and the running costs with a
//! fixed-step classical Runge-Kutta scheme and adds the closed-form tail.

use std::io::Write;

use crate::error::{Error, Result};
use crate::game::ValidatedGame;
use crate::scalar::{lit, to_f64, Scalar};

const BLOWUP: f64 = 1e12;

#[derive(Debug, Clone, PartialEq)]
pub enum PolicyProfile<T> {
    /// `u_i = g_i x`
    Feedback { gains: Vec<T> },
    /// `u_i(t) = amplitude_i exp(decay_rate t)`
    OpenLoop { amplitudes: Vec<T>, decay_rate: T },
}

impl<T: Scalar> PolicyProfile<T> {
    fn controls(&self, t: T, x: T) -> Vec<T> {
        match self {
            PolicyProfile::Feedback { gains } => gains.iter().map(|&g| g * x).collect(),
            PolicyProfile::OpenLoop {
                amplitudes,
                decay_rate,
            } => {
                let e = (*decay_rate * t).exp();
                amplitudes.iter().map(|&u| u * e).collect()
            }
        }
    }

    fn len(&self) -> usize {
        match self {
            PolicyProfile::Feedback { gains } => gains.len(),
            PolicyProfile::OpenLoop { amplitudes, .. } => amplitudes.len(),
        }
    }

    /// Rate at which the state decays under the profile, when it does.
    pub fn closed_loop_rate(&self, game: &ValidatedGame<T>) -> T {
        match self {
            PolicyProfile::Feedback { gains } => closed_loop_pole(game, gains),
            PolicyProfile::OpenLoop { decay_rate, .. } => *decay_rate,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationResult<T> {
    pub horizon: T,
    pub step: T,
    /// `int_0^T (q_i x^2 + r_i u_i^2) dt`
    pub per_player_cost: Vec<T>,
    pub terminal_state: T,
    /// Closed-form `int_T^inf` of the running cost, per player.
    pub truncation_estimate: Vec<T>,
}

impl<T: Scalar> SimulationResult<T> {
    /// Integral plus tail, approximating the infinite-horizon cost.
    pub fn total_costs(&self) -> Vec<T> {
        self.per_player_cost
            .iter()
            .zip(&self.truncation_estimate)
            .map(|(&c, &t)| c + t)
            .collect()
    }
}

/// Sampled trajectory: `t, x, u_1..u_N, running_cost_1..N` per row.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trajectory<T> {
    pub rows: Vec<(T, T, Vec<T>, Vec<T>)>,
}

impl<T: Scalar> Trajectory<T> {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let n = self.rows.first().map_or(0, |r| r.2.len());
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["t".to_string(), "x".to_string()];
        header.extend((1..=n).map(|i| format!("u_{i}")));
        header.extend((1..=n).map(|i| format!("running_cost_{i}")));
        w.write_record(&header)?;
        for (t, x, u, c) in &self.rows {
            let mut rec = vec![crate::report::fmt_num(to_f64(*t)), crate::report::fmt_num(to_f64(*x))];
            rec.extend(u.iter().map(|&v| crate::report::fmt_num(to_f64(v))));
            rec.extend(c.iter().map(|&v| crate::report::fmt_num(to_f64(v))));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn closed_loop_pole<T: Scalar>(game: &ValidatedGame<T>, gains: &[T]) -> T {
    game.a() + game.spec().b.iter().zip(gains).map(|(&b, &g)| b * g).sum::<T>()
}

/// Exact infinite-horizon costs of a stable linear feedback profile:
/// `J_i = (q_i + r_i g_i^2) x0^2 / (-2 a_cl)`.
pub fn eval_linear_policy_costs<T: Scalar>(game: &ValidatedGame<T>, gains: &[T]) -> Result<Vec<T>> {
    let pole = closed_loop_pole(game, gains);
    if pole >= T::zero() {
        return Err(Error::UnstableClosedLoop { pole: to_f64(pole) });
    }
    let spec = game.spec();
    let denom = lit::<T>(-2.0) * pole;
    let x0sq = spec.x0 * spec.x0;
    Ok((0..gains.len())
        .map(|i| (spec.q[i] + spec.r[i] * gains[i] * gains[i]) * x0sq / denom)
        .collect())
}

/// `T = 20 / |rate|`, `dt = min(1e-3, 0.01 / |rate|)`.
pub fn default_grid<T: Scalar>(rate: T) -> (T, T) {
    let r = rate.abs();
    (lit::<T>(20.0) / r, lit::<T>(1e-3).min(lit::<T>(0.01) / r))
}

pub fn simulate<T: Scalar>(
    game: &ValidatedGame<T>,
    policy: &PolicyProfile<T>,
    horizon: T,
    dt: T,
) -> Result<SimulationResult<T>> {
    run(game, policy, horizon, dt, None)
}

/// As [`simulate`], also recording every `record_every`-th step.
pub fn simulate_with_trajectory<T: Scalar>(
    game: &ValidatedGame<T>,
    policy: &PolicyProfile<T>,
    horizon: T,
    dt: T,
    record_every: usize,
) -> Result<(SimulationResult<T>, Trajectory<T>)> {
    let mut traj = Trajectory::default();
    let res = run(game, policy, horizon, dt, Some((record_every.max(1), &mut traj)))?;
    Ok((res, traj))
}

fn run<T: Scalar>(
    game: &ValidatedGame<T>,
    policy: &PolicyProfile<T>,
    horizon: T,
    dt: T,
    mut record: Option<(usize, &mut Trajectory<T>)>,
) -> Result<SimulationResult<T>> {
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(dt > T::zero()) || !(horizon >= dt) || !horizon.is_finite() {
        return Err(Error::InvalidGrid {
            horizon: to_f64(horizon),
            step: to_f64(dt),
        });
    }
    let n = game.n();
    if policy.len() != n {
        return Err(Error::LengthMismatch {
            field: "policy".into(),
            expected: n,
            found: policy.len(),
        });
    }
    let spec = game.spec();
    let steps = (to_f64(horizon) / to_f64(dt)).round().max(1.0) as usize;
    let h = horizon / lit(steps as f64);
    let half = h / lit(2.0);
    let sixth = h / lit(6.0);
    let two = lit::<T>(2.0);

    // y = [x, c_1, ..., c_N]
    let rhs = |t: T, y: &[T]| -> Vec<T> {
        let x = y[0];
        let u = policy.controls(t, x);
        let mut d = Vec::with_capacity(n + 1);
        d.push(spec.a * x + spec.b.iter().zip(&u).map(|(&b, &u)| b * u).sum::<T>());
        d.extend((0..n).map(|i| spec.q[i] * x * x + spec.r[i] * u[i] * u[i]));
        d
    };
    let axpy = |y: &[T], k: &[T], c: T| -> Vec<T> { y.iter().zip(k).map(|(&a, &b)| a + c * b).collect() };

    let mut y = vec![T::zero(); n + 1];
    y[0] = spec.x0;
    let mut t = T::zero();
    let push = |t: T, y: &[T], rec: &mut Option<(usize, &mut Trajectory<T>)>, step: usize| {
        if let Some((every, traj)) = rec {
            if step.is_multiple_of(*every) || step == steps {
                traj.rows.push((t, y[0], policy.controls(t, y[0]), y[1..].to_vec()));
            }
        }
    };
    push(t, &y, &mut record, 0);
    for step in 1..=steps {
        let k1 = rhs(t, &y);
        let k2 = rhs(t + half, &axpy(&y, &k1, half));
        let k3 = rhs(t + half, &axpy(&y, &k2, half));
        let k4 = rhs(t + h, &axpy(&y, &k3, h));
        for j in 0..y.len() {
            y[j] = y[j] + sixth * (k1[j] + two * k2[j] + two * k3[j] + k4[j]);
        }
        t = h * lit(step as f64);
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(y[0].abs() <= lit(BLOWUP)) {
            return Err(Error::UnstableClosedLoop {
                pole: to_f64(policy.closed_loop_rate(game)),
            });
        }
        push(t, &y, &mut record, step);
    }

    let x_t = y[0];
    let rate = policy.closed_loop_rate(game);
    let u_t = policy.controls(t, x_t);
    let truncation_estimate = (0..n)
        .map(|i| {
            if rate < T::zero() {
                (spec.q[i] * x_t * x_t + spec.r[i] * u_t[i] * u_t[i]) / (lit::<T>(-2.0) * rate)
            } else {
                T::infinity()
            }
        })
        .collect();
    Ok(SimulationResult {
        horizon,
        step: h,
        per_player_cost: y[1..].to_vec(),
        terminal_state: x_t,
        truncation_estimate,
    })
}
