//! Scalar N-player LQ differential game: parameters, validation, and the
//! derived quantities shared by the solvers.
//!
//! State dynamics `x' = a x + sum_i b_i u_i`, `x(0) = x0`, and player costs
//! `J_i = int_0^inf (q_i x^2 + r_i u_i^2) dt`.

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Scalar, Tolerances};

#[derive(Debug, Clone, PartialEq)]
pub struct GameSpec<T> {
    pub a: T,
    pub b: Vec<T>,
    pub q: Vec<T>,
    pub r: Vec<T>,
    pub x0: T,
}

impl<T: Scalar> GameSpec<T> {
    pub fn new(a: T, b: Vec<T>, q: Vec<T>, r: Vec<T>, x0: T) -> Self {
        Self { a, b, q, r, x0 }
    }

    pub fn n_players(&self) -> usize {
        self.b.len()
    }

    /// Same game started from `c * x0`.
    pub fn with_initial_state(&self, x0: T) -> Self {
        Self {
            x0,
            ..self.clone()
        }
    }
}

/// Positive weights on the simplex used to aggregate player costs.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector<T> {
    pub mu: Vec<T>,
}

impl<T: Scalar> WeightVector<T> {
    pub fn new(mu: Vec<T>) -> Self {
        Self { mu }
    }

    pub fn uniform(n: usize) -> Self {
        let w = T::one() / lit(n as f64);
        Self { mu: vec![w; n] }
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    /// `mu . v`
    pub fn dot(&self, v: &[T]) -> T {
        self.mu.iter().zip(v).map(|(&m, &x)| m * x).sum()
    }

    pub fn validate(&self, n: usize, tol: &Tolerances) -> Result<()> {
        check_len("mu", self.mu.len(), n)?;
        for (i, &m) in self.mu.iter().enumerate() {
            check_finite(&format!("mu[{i}]"), m)?;
            if m <= T::zero() {
                return Err(Error::NonPositiveWeight {
                    field: format!("mu[{i}]"),
                    value: to_f64(m),
                });
            }
        }
        let sum: T = self.mu.iter().copied().sum();
        if (to_f64(sum) - 1.0).abs() > tol.simplex {
            return Err(Error::WeightSumMismatch {
                field: "mu".into(),
                sum: to_f64(sum),
            });
        }
        Ok(())
    }
}

/// Row `i` holds player `i`'s altruism weights over all players' costs.
#[derive(Debug, Clone, PartialEq)]
pub struct CooperationMatrix<T> {
    pub rows: Vec<Vec<T>>,
}

impl<T: Scalar> CooperationMatrix<T> {
    pub fn new(rows: Vec<Vec<T>>) -> Self {
        Self { rows }
    }

    /// Purely selfish players: the original Nash game.
    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
            .collect();
        Self { rows }
    }

    /// Every player adopts the social weighting `mu`.
    pub fn full_cooperation(mu: &WeightVector<T>) -> Self {
        Self {
            rows: vec![mu.mu.clone(); mu.len()],
        }
    }

    /// Keeps weight `self_weight` on the own cost and spreads the rest evenly.
    pub fn uniform_altruism(n: usize, self_weight: T) -> Self {
        let other = if n > 1 {
            (T::one() - self_weight) / lit((n - 1) as f64)
        } else {
            T::zero()
        };
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { self_weight } else { other }).collect())
            .collect();
        Self { rows }
    }

    pub fn weight(&self, i: usize, j: usize) -> T {
        self.rows[i][j]
    }

    pub fn validate(&self, n: usize, tol: &Tolerances) -> Result<()> {
        check_len("lambda", self.rows.len(), n)?;
        for (i, row) in self.rows.iter().enumerate() {
            check_len(&format!("lambda[{i}]"), row.len(), n)?;
            for (j, &w) in row.iter().enumerate() {
                let field = format!("lambda[{i}][{j}]");
                check_finite(&field, w)?;
                if w < T::zero() {
                    return Err(Error::NegativeAltruism {
                        field,
                        value: to_f64(w),
                    });
                }
            }
            let sum: T = row.iter().copied().sum();
            if (to_f64(sum) - 1.0).abs() > tol.simplex {
                return Err(Error::WeightSumMismatch {
                    field: format!("lambda[{i}]"),
                    sum: to_f64(sum),
                });
            }
            if row[i] <= T::zero() {
                return Err(Error::ZeroSelfWeight {
                    field: format!("lambda[{i}][{i}]"),
                    player: i,
                });
            }
        }
        Ok(())
    }
}

/// Scalar combinations of the game parameters used throughout.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedParams<T> {
    /// `s_i = b_i^2 / r_i`
    pub s: Vec<T>,
    /// `sigma_i = s_i q_i`
    pub sigma: Vec<T>,
    pub sigma_bar: T,
    pub sigma_max: T,
    /// `sum_i mu_i q_i`
    pub q_bar: T,
    /// `sum_i b_i^2 / (mu_i r_i)`
    pub b_bar: T,
    /// `max_i mu_i / s_i`
    pub mu_s_max: T,
    /// `min_i mu_i / s_i`
    pub mu_s_min: T,
    /// `sum_i s_i / min_j s_j`
    pub s_bullet: T,
}

/// A game whose parameters passed [`validate_spec`], with its weights and
/// derived parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedGame<T> {
    spec: GameSpec<T>,
    mu: WeightVector<T>,
    params: DerivedParams<T>,
}

impl<T: Scalar> ValidatedGame<T> {
    pub fn spec(&self) -> &GameSpec<T> {
        &self.spec
    }
    pub fn mu(&self) -> &WeightVector<T> {
        &self.mu
    }
    pub fn params(&self) -> &DerivedParams<T> {
        &self.params
    }
    pub fn n(&self) -> usize {
        self.spec.n_players()
    }
    pub fn a(&self) -> T {
        self.spec.a
    }
    pub fn x0(&self) -> T {
        self.spec.x0
    }

    /// Re-validates with a different weighting.
    pub fn with_weights(&self, mu: WeightVector<T>) -> Result<Self> {
        validate_spec(self.spec.clone(), mu)
    }

    /// Same game from initial state `x0`; derived parameters are unchanged.
    pub fn with_initial_state(&self, x0: T) -> Result<Self> {
        validate_spec(self.spec.with_initial_state(x0), self.mu.clone())
    }

    pub fn into_parts(self) -> (GameSpec<T>, WeightVector<T>) {
        (self.spec, self.mu)
    }
}

fn check_len(field: &str, found: usize, expected: usize) -> Result<()> {
    if found != expected {
        return Err(Error::LengthMismatch {
            field: field.into(),
            expected,
            found,
        });
    }
    Ok(())
}

fn check_finite<T: Scalar>(field: &str, v: T) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::NonFinite { field: field.into() });
    }
    Ok(())
}

/// Checks every invariant of the game and weights, using the tolerances
/// appropriate for `T`.
pub fn validate_spec<T: Scalar>(raw: GameSpec<T>, mu: WeightVector<T>) -> Result<ValidatedGame<T>> {
    validate_spec_with(raw, mu, &Tolerances::for_scalar::<T>())
}

pub fn validate_spec_with<T: Scalar>(
    raw: GameSpec<T>,
    mu: WeightVector<T>,
    tol: &Tolerances,
) -> Result<ValidatedGame<T>> {
    let n = raw.b.len();
    if n == 0 {
        return Err(Error::NoPlayers);
    }
    check_len("q", raw.q.len(), n)?;
    check_len("r", raw.r.len(), n)?;
    check_finite("a", raw.a)?;
    check_finite("x0", raw.x0)?;
    for (i, &b) in raw.b.iter().enumerate() {
        check_finite(&format!("b[{i}]"), b)?;
        if b == T::zero() {
            return Err(Error::ZeroGain {
                field: format!("b[{i}]"),
            });
        }
    }
    for (name, values) in [("q", &raw.q), ("r", &raw.r)] {
        for (i, &v) in values.iter().enumerate() {
            let field = format!("{name}[{i}]");
            check_finite(&field, v)?;
            if v <= T::zero() {
                return Err(Error::NonPositiveWeight {
                    field,
                    value: to_f64(v),
                });
            }
        }
    }
    mu.validate(n, tol)?;
    if raw.x0 == T::zero() {
        return Err(Error::ZeroInitialState);
    }
    let params = compute_params(&raw, &mu);
    Ok(ValidatedGame {
        spec: raw,
        mu,
        params,
    })
}

fn compute_params<T: Scalar>(g: &GameSpec<T>, mu: &WeightVector<T>) -> DerivedParams<T> {
    let s: Vec<T> = g.b.iter().zip(&g.r).map(|(&b, &r)| b * b / r).collect();
    let sigma: Vec<T> = s.iter().zip(&g.q).map(|(&s, &q)| s * q).collect();
    let sigma_bar = sigma.iter().copied().sum();
    let sigma_max = sigma.iter().copied().fold(T::zero(), T::max);
    let q_bar = mu.dot(&g.q);
    let b_bar = (0..s.len()).map(|i| s[i] / mu.mu[i]).sum();
    let ratios: Vec<T> = mu.mu.iter().zip(&s).map(|(&m, &s)| m / s).collect();
    let mu_s_max = ratios.iter().copied().fold(T::neg_infinity(), T::max);
    let mu_s_min = ratios.iter().copied().fold(T::infinity(), T::min);
    let s_min = s.iter().copied().fold(T::infinity(), T::min);
    let s_bullet = s.iter().map(|&x| x / s_min).sum();
    DerivedParams {
        s,
        sigma,
        sigma_bar,
        sigma_max,
        q_bar,
        b_bar,
        mu_s_max,
        mu_s_min,
        s_bullet,
    }
}

/// Derived parameters of a validated game.
pub fn derive_params<T: Scalar>(game: &ValidatedGame<T>) -> DerivedParams<T> {
    compute_params(&game.spec, &game.mu)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flow2() -> ValidatedGame<f64> {
        validate_spec(
            GameSpec::new(0.0, vec![1.0, 1.0], vec![1.0, 1.0], vec![1.0, 1.0], 1.0),
            WeightVector::new(vec![0.5, 0.5]),
        )
        .unwrap()
    }

    #[test]
    fn flow_control_game_is_valid() {
        let g = flow2();
        assert_eq!(g.n(), 2);
    }

    #[test]
    fn negative_state_weight_is_rejected() {
        let err = validate_spec(
            GameSpec::new(0.0, vec![1.0, 1.0], vec![-1.0, 1.0], vec![1.0, 1.0], 1.0),
            WeightVector::uniform(2),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonPositiveWeight { ref field, .. } if field == "q[0]"));
    }

    #[test]
    fn weights_must_sum_to_one() {
        let err = validate_spec(
            GameSpec::new(0.0, vec![1.0, 1.0], vec![1.0, 1.0], vec![1.0, 1.0], 1.0),
            WeightVector::new(vec![0.6, 0.6]),
        )
        .unwrap_err();
        assert!(matches!(err, Error::WeightSumMismatch { sum, .. } if (sum - 1.2).abs() < 1e-12));
    }

    #[test]
    fn other_invariants() {
        let base = GameSpec::new(0.0, vec![1.0, 1.0], vec![1.0, 1.0], vec![1.0, 1.0], 1.0);
        let mu = WeightVector::uniform(2);
        let mut g = base.clone();
        g.b[1] = 0.0;
        assert!(matches!(validate_spec(g, mu.clone()), Err(Error::ZeroGain { .. })));
        let mut g = base.clone();
        g.x0 = 0.0;
        assert!(matches!(validate_spec(g, mu.clone()), Err(Error::ZeroInitialState)));
        let mut g = base.clone();
        g.r.pop();
        assert!(matches!(validate_spec(g, mu.clone()), Err(Error::LengthMismatch { .. })));
        let mut g = base.clone();
        g.r[0] = 0.0;
        assert!(matches!(validate_spec(g, mu.clone()), Err(Error::NonPositiveWeight { .. })));
        assert!(matches!(
            validate_spec(base.clone(), WeightVector::new(vec![1.5, -0.5])),
            Err(Error::NonPositiveWeight { .. })
        ));
        assert!(matches!(
            validate_spec(base, WeightVector::uniform(3)),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn flow_control_params() {
        let p = flow2().params().clone();
        assert_eq!(p.s, vec![1.0, 1.0]);
        assert_eq!(p.sigma, vec![1.0, 1.0]);
        assert_eq!(p.sigma_bar, 2.0);
        assert_eq!(p.q_bar, 1.0);
        assert_eq!(p.b_bar, 4.0);
        assert_eq!(p.s_bullet, 2.0);
        assert_eq!(p.mu_s_max, 0.5);
    }

    #[test]
    fn single_player_params() {
        let g = validate_spec(
            GameSpec::new(1.0, vec![2.0], vec![3.0], vec![4.0], 1.0),
            WeightVector::new(vec![1.0]),
        )
        .unwrap();
        let p = derive_params(&g);
        assert_eq!(p.s, vec![1.0]);
        assert_eq!(p.sigma, vec![3.0]);
        assert_eq!(p.b_bar, 1.0);
        assert!(p.sigma_max <= p.sigma_bar);
    }

    #[test]
    fn s_proportional_weights_equalize_ratios() {
        let b = vec![1.0, 2.0, 0.5];
        let r = vec![1.0, 3.0, 0.7];
        let s: Vec<f64> = b.iter().zip(&r).map(|(b, r)| b * b / r).collect();
        let total: f64 = s.iter().sum();
        let mu = WeightVector::new(s.iter().map(|x| x / total).collect());
        let g = validate_spec(GameSpec::new(0.3, b, vec![1.0, 2.0, 3.0], r, 1.0), mu).unwrap();
        let p = g.params();
        assert!((p.mu_s_max - 1.0 / total).abs() < 1e-12);
        assert!((p.mu_s_min - 1.0 / total).abs() < 1e-12);
    }

    #[test]
    fn params_do_not_depend_on_initial_state() {
        let g = flow2();
        let h = g.with_initial_state(-7.5).unwrap();
        assert_eq!(g.params(), h.params());
    }

    #[test]
    fn cooperation_matrix_checks() {
        let tol = Tolerances::default();
        assert!(CooperationMatrix::<f64>::identity(3).validate(3, &tol).is_ok());
        let bad = CooperationMatrix::new(vec![vec![0.0, 1.0], vec![0.5, 0.5]]);
        assert!(matches!(bad.validate(2, &tol), Err(Error::ZeroSelfWeight { player: 0, .. })));
        let bad = CooperationMatrix::new(vec![vec![0.7, 0.7], vec![0.5, 0.5]]);
        assert!(matches!(bad.validate(2, &tol), Err(Error::WeightSumMismatch { .. })));
        let u = CooperationMatrix::<f64>::uniform_altruism(3, 0.5);
        assert!(u.validate(3, &tol).is_ok());
        assert_eq!(u.weight(0, 2), 0.25);
    }
}
