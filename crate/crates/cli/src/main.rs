mod args;
mod output;

use std::process::ExitCode;

use clap::Parser;
use lqdg::feedback::{analyze_feedback_eigen_with, FeedbackOptions};
use lqdg::game::{validate_spec, GameSpec};
use lqdg::indices::{compute_indices_with, poa_bound_positive_drift, poa_bound_zero_drift, EquilibriumMethod};
use lqdg::report::{Cell, Dataset};
use lqdg::simulate::{default_grid, eval_linear_policy_costs, simulate_with_trajectory};
use lqdg::{
    load_config, price_of_cooperation, solve_feedback_fixedpoint, solve_openloop, solve_social,
    ConfigError, FeedbackEquilibrium, Game, GameConfig, PolicyProfile, WeightVector,
};

use args::{Cli, Command, Common, Method, Policy};
use output::{Output, Report};

enum Failure {
    /// Bad input or invocation; exit code 2.
    Usage(String),
    /// The solver ran and failed; exit code 1.
    Solver(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<lqdg::Error> for Failure {
    fn from(e: lqdg::Error) -> Self {
        if e.is_solver_failure() {
            Failure::Solver(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

fn options(common: &Common) -> FeedbackOptions {
    let mut opts = FeedbackOptions::default();
    if let Some(cap) = common.n_cap {
        opts.n_cap = cap;
    }
    if let Some(t) = common.tol_residual {
        opts.tol.residual = t;
    }
    if let Some(t) = common.tol_consistency {
        opts.tol.consistency = t;
    }
    if let Some(t) = common.tol_reality {
        opts.tol.reality = t;
    }
    opts
}

fn note(msg: &str) {
    eprintln!("note: {msg}");
}

fn fixed_point_note(n: usize, cap: usize) {
    note(&format!(
        "N = {n} exceeds the eigen-method cap {cap}; using the fixed-point solver, other equilibria are not ruled out"
    ));
}

/// All feedback equilibria reachable with the chosen method, and whether
/// the set is known to be complete.
fn feedback_equilibria(
    game: &Game,
    opts: &FeedbackOptions,
    method: Method,
) -> Result<(Vec<FeedbackEquilibrium>, bool), Failure> {
    let use_eigen = match method {
        Method::Eigen => true,
        Method::FixedPoint => false,
        Method::Auto => {
            let eigen = game.n() <= opts.n_cap;
            if !eigen {
                fixed_point_note(game.n(), opts.n_cap);
            }
            eigen
        }
    };
    if !use_eigen {
        return Ok((vec![solve_feedback_fixedpoint(game)?], false));
    }
    let analysis = analyze_feedback_eigen_with(game, opts)?;
    for w in analysis.warnings() {
        note(&w.to_string());
    }
    if analysis.equilibria.is_empty() {
        return Err(lqdg::Error::NoEquilibrium {
            diagnostics: Box::new(analysis.diagnostics),
        }
        .into());
    }
    Ok((analysis.equilibria, true))
}

fn solve_fb(cfg: &GameConfig, opts: &FeedbackOptions, method: Method) -> Result<Output, Failure> {
    let (eqs, complete) = feedback_equilibria(&cfg.game, opts, method)?;
    let mut r = Report::default();
    r.scalar("method", if complete { "eigen" } else { "fixed-point" });
    r.flag("set_complete", complete);
    r.scalar("equilibria", eqs.len());
    for (j, eq) in eqs.iter().enumerate() {
        let p = format!("eq{}.", j + 1);
        r.scalar(format!("{p}lambda"), eq.lambda);
        r.vector(format!("{p}k"), &eq.k);
        r.vector(format!("{p}p"), &eq.p);
        r.vector(format!("{p}gains"), &eq.gains);
        r.scalar(format!("{p}closed_loop_pole"), eq.closed_loop_pole);
        r.vector(format!("{p}costs"), &eq.costs);
        r.scalar(format!("{p}weighted_cost"), eq.weighted_cost);
        r.scalar(format!("{p}residual"), eq.residual);
    }
    Ok(Output::Report(r))
}

fn solve_ol(cfg: &GameConfig) -> Output {
    let e = solve_openloop(&cfg.game);
    let mut r = Report::default();
    r.vector("xi", &e.xi);
    r.scalar("p_bar", e.p_bar);
    r.vector("k_star", &e.k_star);
    r.vector("amplitudes", &e.amplitudes(&cfg.game));
    r.scalar("decay_rate", e.decay_rate);
    r.vector("costs", &e.costs);
    r.scalar("weighted_cost", e.weighted_cost);
    Output::Report(r)
}

fn solve_soc(cfg: &GameConfig) -> Output {
    let s = solve_social(&cfg.game);
    let mut r = Report::default();
    r.scalar("k_hat", s.k_hat);
    r.vector("gains", &s.gains);
    r.scalar("closed_loop_pole", s.closed_loop_pole);
    r.scalar("cost", s.cost);
    Output::Report(r)
}

fn bound_cell(b: lqdg::Result<f64>) -> Cell {
    match b {
        Ok(v) => Cell::Num(v),
        Err(lqdg::Error::BoundInapplicable { reason }) => Cell::Text(format!("n/a ({reason})")),
        Err(e) => Cell::Text(format!("n/a ({e})")),
    }
}

fn indices(cfg: &GameConfig, opts: &FeedbackOptions) -> Result<Output, Failure> {
    let game = &cfg.game;
    if game.n() > opts.n_cap {
        fixed_point_note(game.n(), opts.n_cap);
    }
    let x = compute_indices_with(game, opts)?;
    for w in &x.warnings {
        note(&w.to_string());
    }
    let mut r = Report::default();
    r.scalar(
        "method",
        match x.method {
            EquilibriumMethod::Eigen => "eigen",
            EquilibriumMethod::FixedPoint => "fixed-point",
        },
    );
    r.scalar("equilibria", x.feedback.len());
    r.scalar("rho_fb", x.rho_fb);
    r.flag("rho_fb_is_lower_bound", x.rho_fb_is_lower_bound);
    r.scalar("rho_ol", x.rho_ol);
    r.scalar("chi", x.chi);
    r.scalar("J_fb_worst", x.feedback.iter().map(|e| e.weighted_cost).fold(f64::NEG_INFINITY, f64::max));
    r.scalar("J_ol", x.openloop.weighted_cost);
    r.scalar("J_social", x.social.cost);
    let b = &x.bounds;
    r.scalar("gersgorin_bound", b.gersgorin);
    r.scalar("spectral_radius", b.spectral_radius);
    r.scalar("poa_bound_spectral", b.spectral_exact);
    r.scalar("poa_bound_spectral_gersgorin", b.spectral_gersgorin);
    r.scalar("poa_bound_positive_drift", bound_cell(poa_bound_positive_drift(game)));
    r.scalar("poa_bound_zero_drift", bound_cell(poa_bound_zero_drift(game)));
    r.scalar("chi_lower_bound", x.chi_lower_bound);
    r.scalar("chi_lower_bound_gersgorin", x.chi_lower_bound_gersgorin);
    let a = &x.approximations;
    r.vector("approx.p", &a.p_approx);
    r.vector("approx.gains", &a.gain_approx);
    r.scalar("approx.J_fb", a.j_star_approx);
    r.scalar("approx.rho_fb", a.rho_fb_approx);
    r.scalar("approx.rho_fb_zero_drift", a.rho_fb_approx_a0);
    r.scalar("approx.chi", a.chi_approx);
    r.scalar("condition.a_over_N", a.conditions.drift_ratio);
    r.scalar("condition.sigma_max_over_sigma_bar", a.conditions.concentration);
    match a.conditions.others_exceed_drift {
        Some(v) => r.flag("condition.p_minus_i_exceeds_a", v),
        None => r.scalar("condition.p_minus_i_exceeds_a", Cell::Empty),
    }
    Ok(Output::Report(r))
}

fn poc(cfg: &GameConfig, opts: &FeedbackOptions) -> Result<Output, Failure> {
    let lambda = cfg
        .lambda
        .as_ref()
        .ok_or_else(|| Failure::Usage("config has no `lambda` matrix; poc needs one".into()))?;
    let (eqs, complete) = feedback_equilibria(&cfg.game, opts, Method::Auto)?;
    let p = price_of_cooperation(&cfg.game, lambda, &eqs)?;
    let mut r = Report::default();
    r.vector("nu", &p.nu);
    r.vector("altruistic_costs", &p.altruistic.actual_costs);
    r.vector("baseline_costs", &p.baseline_costs);
    r.flag("baseline_set_complete", complete);
    r.flag("single_equilibrium", p.single_equilibrium);
    r.vector("gains", &p.altruistic.gains);
    r.vector("k_tilde", &p.altruistic.k_tilde);
    r.scalar("closed_loop_pole", p.altruistic.closed_loop_pole);
    r.scalar("iterations", p.altruistic.iterations);
    r.scalar("residual", p.altruistic.residual);
    Ok(Output::Report(r))
}

struct SimArgs<'a> {
    policy: Policy,
    horizon: Option<f64>,
    dt: Option<f64>,
    trajectory: Option<&'a std::path::Path>,
    record_every: usize,
}

fn run_simulation(cfg: &GameConfig, opts: &FeedbackOptions, a: SimArgs) -> Result<Output, Failure> {
    let game = &cfg.game;
    let (profile, closed_form) = match a.policy {
        Policy::Feedback => {
            let (eqs, _) = feedback_equilibria(game, opts, Method::Auto)?;
            if eqs.len() > 1 {
                note("several feedback equilibria; simulating the costliest");
            }
            let eq = &eqs[0];
            (PolicyProfile::Feedback { gains: eq.gains.clone() }, eq.costs.clone())
        }
        Policy::OpenLoop => {
            let e = solve_openloop(game);
            (
                PolicyProfile::OpenLoop {
                    amplitudes: e.amplitudes(game),
                    decay_rate: e.decay_rate,
                },
                e.costs,
            )
        }
        Policy::Social => {
            let s = solve_social(game);
            let costs = eval_linear_policy_costs(game, &s.gains)?;
            (PolicyProfile::Feedback { gains: s.gains }, costs)
        }
    };
    let (t_default, dt_default) = default_grid(profile.closed_loop_rate(game));
    let horizon = a.horizon.unwrap_or(t_default);
    let dt = a.dt.unwrap_or(dt_default);
    let (res, traj) = simulate_with_trajectory(game, &profile, horizon, dt, a.record_every)?;
    if let Some(path) = a.trajectory {
        let file = std::fs::File::create(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        traj.write_csv(file).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    let mut r = Report::default();
    r.scalar("horizon", res.horizon);
    r.scalar("step", res.step);
    r.scalar("terminal_state", res.terminal_state);
    r.vector("integral_costs", &res.per_player_cost);
    r.vector("tail_estimate", &res.truncation_estimate);
    r.vector("total_costs", &res.total_costs());
    r.vector("closed_form_costs", &closed_form);
    Ok(Output::Report(r))
}

/// Symmetric N-player game replicating player 1 of `cfg`.
fn symmetric_game(cfg: &GameConfig, n: usize) -> Result<Game, Failure> {
    let s = cfg.game.spec();
    Ok(validate_spec(
        GameSpec::new(s.a, vec![s.b[0]; n], vec![s.q[0]; n], vec![s.r[0]; n], s.x0),
        WeightVector::uniform(n),
    )?)
}

fn sweep(cfg: &GameConfig, opts: &FeedbackOptions, from: usize, to: usize) -> Result<Output, Failure> {
    if from == 0 || from > to {
        return Err(Failure::Usage(format!("invalid range --from {from} --to {to}")));
    }
    if to > opts.n_cap {
        note(&format!(
            "N above {} uses the fixed-point solver; rho_fb is then a lower bound",
            opts.n_cap
        ));
    }
    let mut d = Dataset::new([
        "N", "method", "rho_fb", "rho_fb_is_lower_bound", "rho_ol", "chi", "J_fb", "J_ol", "J_social",
    ]);
    for n in from..=to {
        let x = compute_indices_with(&symmetric_game(cfg, n)?, opts)?;
        let worst = x.feedback.iter().map(|e| e.weighted_cost).fold(f64::NEG_INFINITY, f64::max);
        d.push(vec![
            n.into(),
            match x.method {
                EquilibriumMethod::Eigen => "eigen",
                EquilibriumMethod::FixedPoint => "fixed-point",
            }
            .into(),
            x.rho_fb.into(),
            x.rho_fb_is_lower_bound.to_string().into(),
            x.rho_ol.into(),
            x.chi.into(),
            worst.into(),
            x.openloop.weighted_cost.into(),
            x.social.cost.into(),
        ]);
    }
    Ok(Output::Table(d))
}

fn run(cli: Cli) -> Result<(), Failure> {
    let opts = options(&cli.common);
    let load = |c: &args::ConfigArg| load_config(&c.config);
    let out = match &cli.command {
        Command::SolveFb { config, method } => solve_fb(&load(config)?, &opts, *method)?,
        Command::SolveOl { config } => solve_ol(&load(config)?),
        Command::SolveSocial { config } => solve_soc(&load(config)?),
        Command::Indices { config } => indices(&load(config)?, &opts)?,
        Command::Poc { config } => poc(&load(config)?, &opts)?,
        Command::Simulate {
            config,
            policy,
            horizon,
            dt,
            trajectory,
            record_every,
        } => run_simulation(
            &load(config)?,
            &opts,
            SimArgs {
                policy: *policy,
                horizon: *horizon,
                dt: *dt,
                trajectory: trajectory.as_deref(),
                record_every: *record_every,
            },
        )?,
        Command::Sweep { config, from, to, .. } => sweep(&load(config)?, &opts, *from, *to)?,
        Command::Reproduce { target, n_max } => Output::Table(lqdg::flow::reproduce_with(*target, *n_max)?),
    };
    out.write(cli.common.format, cli.common.output.as_deref())
        .map_err(|e| Failure::Usage(format!("cannot write output: {e}")))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Solver(msg)) => {
            eprintln!("solver error: {msg}");
            ExitCode::from(1)
        }
    }
}
