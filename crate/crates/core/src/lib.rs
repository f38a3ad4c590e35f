//! Scalar N-player linear-quadratic differential games: feedback and
//! open-loop Nash equilibria, the social optimum, efficiency indices and a
//! simulation oracle.
//!
//! Solvers are generic over [`Scalar`] (`f32` or `f64`); the aliases at the
//! crate root fix the type to `f64`.

pub mod altruistic;
pub mod config;
pub mod error;
pub mod feedback;
pub mod flow;
pub mod game;
pub mod indices;
pub mod linalg;
pub mod openloop;
pub mod report;
pub mod scalar;
pub mod simulate;
pub mod social;

pub use altruistic::{price_of_cooperation, solve_altruistic_fb};
pub use config::{load_config, parse_config, ConfigError, GameConfig};
pub use error::{Error, Result};
pub use feedback::{
    analyze_feedback_eigen, build_m_tilde, solve_feedback_eigen, solve_feedback_fixedpoint, FeedbackOptions,
};
pub use game::{validate_spec, CooperationMatrix, GameSpec, ValidatedGame, WeightVector};
pub use indices::{compute_indices, compute_indices_with};
pub use openloop::solve_openloop;
pub use scalar::{Scalar, Tolerances};
pub use simulate::{simulate, PolicyProfile};
pub use social::solve_social;

pub type Game = game::ValidatedGame<f64>;
pub type Spec = game::GameSpec<f64>;
pub type Weights = game::WeightVector<f64>;
pub type Cooperation = game::CooperationMatrix<f64>;
pub type FeedbackEquilibrium = feedback::FeedbackEquilibrium<f64>;
pub type EigenAnalysis = feedback::EigenAnalysis<f64>;
pub type OpenLoopEquilibrium = openloop::OpenLoopEquilibrium<f64>;
pub type SocialOptimum = social::SocialOptimum<f64>;
pub type IndexReport = indices::IndexReport<f64>;
pub type AltruisticEquilibrium = altruistic::AltruisticEquilibrium<f64>;
pub type PoCReport = altruistic::PoCReport<f64>;
pub type SimulationResult = simulate::SimulationResult<f64>;
