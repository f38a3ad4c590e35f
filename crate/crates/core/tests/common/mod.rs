#![allow(dead_code)]

use lqdg::{validate_spec, Game, GameSpec, WeightVector};
use proptest::prelude::*;
use rand::Rng;

/// Raw parameters of a random game: `N <= 6`, `a in [-1, 1]`,
/// `sigma_i in [0.1, 10]`.
#[derive(Debug, Clone)]
pub struct RandomGame {
    pub a: f64,
    pub b: Vec<f64>,
    pub r: Vec<f64>,
    pub sigma: Vec<f64>,
    pub weights: Vec<f64>,
    pub x0: f64,
}

impl RandomGame {
    pub fn build(&self) -> Game {
        let n = self.b.len();
        let q = (0..n).map(|i| self.sigma[i] * self.r[i] / (self.b[i] * self.b[i])).collect();
        let total: f64 = self.weights.iter().sum();
        let mu = self.weights.iter().map(|w| w / total).collect();
        validate_spec(GameSpec::new(self.a, self.b.clone(), q, self.r.clone(), self.x0), WeightVector::new(mu))
            .expect("generated game is valid")
    }

    pub fn sample<R: Rng>(rng: &mut R, max_n: usize) -> Self {
        let n = rng.gen_range(1..=max_n);
        let sign = |rng: &mut R| if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        Self {
            a: rng.gen_range(-1.0..=1.0),
            b: (0..n).map(|_| sign(rng) * rng.gen_range(0.5..2.0)).collect(),
            r: (0..n).map(|_| rng.gen_range(0.5..2.0)).collect(),
            sigma: (0..n).map(|_| rng.gen_range(0.1..10.0)).collect(),
            weights: (0..n).map(|_| rng.gen_range(0.1..1.0)).collect(),
            x0: sign(rng) * rng.gen_range(0.2..3.0),
        }
    }
}

fn signed(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo..hi, any::<bool>()).prop_map(|(v, neg)| if neg { -v } else { v })
}

pub fn random_game(max_n: usize, drift: impl Strategy<Value = f64> + 'static) -> impl Strategy<Value = RandomGame> {
    (1..=max_n, drift).prop_flat_map(|(n, a)| {
        (
            Just(a),
            prop::collection::vec(signed(0.5, 2.0), n),
            prop::collection::vec(0.5..2.0f64, n),
            prop::collection::vec(0.1..10.0f64, n),
            prop::collection::vec(0.1..1.0f64, n),
            signed(0.2, 3.0),
        )
            .prop_map(|(a, b, r, sigma, weights, x0)| RandomGame {
                a,
                b,
                r,
                sigma,
                weights,
                x0,
            })
    })
}

pub fn any_game(max_n: usize) -> impl Strategy<Value = RandomGame> {
    random_game(max_n, -1.0..=1.0f64)
}

pub fn rel_err(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs().max(1e-300)
}
