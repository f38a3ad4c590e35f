//! Stationary feedback Nash equilibria of the scalar LQ game.
//!
//! An equilibrium is a solution `k` of the coupled algebraic Riccati system
//!
//! ```text
//! 2 (a - sum_j s_j k_j) k_i + q_i + s_i k_i^2 = 0,   a - sum_j s_j k_j < 0.
//! ```
//!
//! With `p_i = s_i k_i` and `lambda = sum_i p_i - a` the system becomes
//! `p_i^2 - 2 lambda p_i + sigma_i = 0`, and the vector of all subset
//! products of the `p_i` is an eigenvector of a `2^N x 2^N` matrix with
//! eigenvalue `lambda`. [`analyze_feedback_eigen`] enumerates every such
//! eigenpair; [`solve_feedback_fixedpoint`] solves the aggregate scalar
//! equation for `p_bar = sum_i p_i` when the equilibrium is known to be
//! unique.

use std::fmt;

use crate::error::{Error, Result};
use crate::game::ValidatedGame;
use crate::linalg::{self, Complex, DenseMatrix};
use crate::report::fmt_num;
use crate::scalar::{lit, max_abs, to_f64, Scalar, Tolerances};

/// Largest N for which the monomial matrix is built by default.
pub const DEFAULT_N_CAP: usize = 14;

/// Subset of players encoded as a bitmask: bit `i` set means player `i`
/// (zero-based) belongs to the subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subset(pub usize);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn singleton(i: usize) -> Self {
        Subset(1 << i)
    }
    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
    pub fn with(self, i: usize) -> Self {
        Subset(self.0 | (1 << i))
    }
    pub fn without(self, i: usize) -> Self {
        Subset(self.0 & !(1 << i))
    }
    pub fn members(self, n: usize) -> impl Iterator<Item = usize> {
        (0..n).filter(move |&i| self.contains(i))
    }

    /// Product of `values[i]` over members.
    pub fn product<T: Scalar>(self, values: &[T]) -> T {
        self.members(values.len()).fold(T::one(), |acc, i| acc * values[i])
    }
}

/// Indices `0..2^n` ordered by subset size, then lexicographically by member
/// list: `[{}, {1}, ..., {N}, {1,2}, {1,3}, ..., {1..N}]`. This is the
/// conventional display order; matrices are stored in bitmask order.
pub fn graded_order(n: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..1usize << n).collect();
    idx.sort_by_key(|&m| {
        let members: Vec<usize> = Subset(m).members(n).collect();
        (members.len(), members)
    });
    idx
}

/// The `2^N x 2^N` monomial matrix, rows and columns indexed by
/// [`Subset`] bitmasks.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialMatrix<T> {
    n: usize,
    matrix: DenseMatrix<T>,
}

impl<T: Scalar> MonomialMatrix<T> {
    pub fn n_players(&self) -> usize {
        self.n
    }
    pub fn dim(&self) -> usize {
        1 << self.n
    }
    pub fn matrix(&self) -> &DenseMatrix<T> {
        &self.matrix
    }
    pub fn entry(&self, row: Subset, col: Subset) -> T {
        self.matrix.get(row.0, col.0)
    }
    pub fn index_of(&self, s: Subset) -> usize {
        s.0
    }
    pub fn subset_at(&self, index: usize) -> Subset {
        Subset(index)
    }

    /// Rows and columns permuted into [`graded_order`].
    pub fn graded_rows(&self) -> Vec<Vec<T>> {
        let order = graded_order(self.n);
        order
            .iter()
            .map(|&i| order.iter().map(|&j| self.matrix.get(i, j)).collect())
            .collect()
    }

    pub fn eigenvalues(&self) -> Result<Vec<Complex<T>>> {
        linalg::eigenvalues(&self.matrix)
    }
}

/// Builds the monomial matrix acting on `[1, p_1, ..., p_1 p_2, ...]`.
///
/// Row `{}` encodes `lambda = sum_j p_j - a`. Row `Omega != {}` carries
/// `sigma_i` at `Omega \ {i}` for `i in Omega`, `-1` at `Omega + {i}` for
/// `i not in Omega`, and `a` at `Omega`, all divided by `2|Omega| - 1`.
pub fn build_m_tilde<T: Scalar>(game: &ValidatedGame<T>, cap: usize) -> Result<MonomialMatrix<T>> {
    let n = game.n();
    if n > cap || n >= usize::BITS as usize - 1 {
        return Err(Error::DimensionCap { n, cap });
    }
    let a = game.a();
    let sigma = &game.params().sigma;
    let dim = 1usize << n;
    let mut m = DenseMatrix::zeros(dim, dim);
    m.set(0, 0, -a);
    for i in 0..n {
        m.set(0, Subset::singleton(i).0, T::one());
    }
    for row in 1..dim {
        let omega = Subset(row);
        let scale = T::one() / lit((2 * omega.len() - 1) as f64);
        m.set(row, row, a * scale);
        for (i, &s) in sigma.iter().enumerate().take(n) {
            if omega.contains(i) {
                m.set(row, omega.without(i).0, s * scale);
            } else {
                m.set(row, omega.with(i).0, -scale);
            }
        }
    }
    Ok(MonomialMatrix { n, matrix: m })
}

/// Applies the diagonal similarity `D^{-1} M~ D`, `D = diag(prod_{j in Omega} s_j)`,
/// giving the matrix that acts on subset products of the `k_i`.
pub fn to_m<T: Scalar>(m_tilde: &MonomialMatrix<T>, game: &ValidatedGame<T>) -> MonomialMatrix<T> {
    let s = &game.params().s;
    let dim = m_tilde.dim();
    let d: Vec<T> = (0..dim).map(|i| Subset(i).product(s)).collect();
    let mut m = DenseMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            let v = m_tilde.matrix.get(i, j);
            if v != T::zero() {
                m.set(i, j, v * d[j] / d[i]);
            }
        }
    }
    MonomialMatrix { n: m_tilde.n, matrix: m }
}

/// A stationary feedback Nash equilibrium.
#[derive(Debug, Clone, PartialEq)]
pub struct FeedbackEquilibrium<T> {
    /// `sum_i p_i - a`
    pub lambda: T,
    /// Riccati solutions; player costs are `k_i x0^2`.
    pub k: Vec<T>,
    /// `p_i = s_i k_i`
    pub p: Vec<T>,
    /// Feedback gains `g_i = -(b_i / r_i) k_i`; player `i` plays `u_i = g_i x`.
    pub gains: Vec<T>,
    /// `a + sum_i b_i g_i`
    pub closed_loop_pole: T,
    pub costs: Vec<T>,
    /// `(mu . k) x0^2`
    pub weighted_cost: T,
    /// Max absolute coupled-Riccati residual at `k`.
    pub residual: T,
    /// Normalized monomial eigenvector in bitmask order when the equilibrium
    /// came from the eigen method.
    pub eigenvector: Option<Vec<T>>,
}

impl<T: Scalar> FeedbackEquilibrium<T> {
    /// `mu . k`
    pub fn weighted_k(&self, game: &ValidatedGame<T>) -> T {
        game.mu().dot(&self.k)
    }
}

/// `r_i = 2 (a - sum_j s_j k_j) k_i + q_i + s_i k_i^2`
pub fn riccati_residual_fb<T: Scalar>(game: &ValidatedGame<T>, k: &[T]) -> Vec<T> {
    let s = &game.params().s;
    let q = &game.spec().q;
    let two = lit::<T>(2.0);
    let drift = game.a() - s.iter().zip(k).map(|(&s, &k)| s * k).sum::<T>();
    (0..k.len())
        .map(|i| two * drift * k[i] + q[i] + s[i] * k[i] * k[i])
        .collect()
}

/// One Newton step on the coupled Riccati system. `None` if the Jacobian is
/// singular.
pub fn newton_polish<T: Scalar>(game: &ValidatedGame<T>, k: &[T]) -> Option<Vec<T>> {
    let n = k.len();
    let s = &game.params().s;
    let two = lit::<T>(2.0);
    let drift = game.a() - s.iter().zip(k).map(|(&s, &k)| s * k).sum::<T>();
    let mut jac = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut v = -two * s[j] * k[i];
            if i == j {
                v = v + two * drift + two * s[i] * k[i];
            }
            jac.set(i, j, v);
        }
    }
    let res = riccati_residual_fb(game, k);
    let step = linalg::solve_dense(&jac, &res)?;
    let next: Vec<T> = k.iter().zip(&step).map(|(&k, &d)| k - d).collect();
    next.iter().all(|x| x.is_finite()).then_some(next)
}

/// Assembles an equilibrium record from Riccati solutions `k`.
pub fn equilibrium_from_k<T: Scalar>(game: &ValidatedGame<T>, k: Vec<T>) -> FeedbackEquilibrium<T> {
    let spec = game.spec();
    let s = &game.params().s;
    let p: Vec<T> = s.iter().zip(&k).map(|(&s, &k)| s * k).collect();
    let p_bar: T = p.iter().copied().sum();
    let gains: Vec<T> = (0..k.len()).map(|i| -(spec.b[i] / spec.r[i]) * k[i]).collect();
    let closed_loop_pole = spec.a + spec.b.iter().zip(&gains).map(|(&b, &g)| b * g).sum::<T>();
    let x0sq = spec.x0 * spec.x0;
    let costs = k.iter().map(|&k| k * x0sq).collect();
    let weighted_cost = game.mu().dot(&k) * x0sq;
    let residual = max_abs(&riccati_residual_fb(game, &k));
    FeedbackEquilibrium {
        lambda: p_bar - spec.a,
        k,
        p,
        gains,
        closed_loop_pole,
        costs,
        weighted_cost,
        residual,
        eigenvector: None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeedbackOptions {
    pub n_cap: usize,
    pub tol: Tolerances,
}

impl Default for FeedbackOptions {
    fn default() -> Self {
        Self {
            n_cap: DEFAULT_N_CAP,
            tol: Tolerances::default(),
        }
    }
}

impl FeedbackOptions {
    pub fn for_scalar<T: Scalar>() -> Self {
        Self {
            n_cap: DEFAULT_N_CAP,
            tol: Tolerances::for_scalar::<T>(),
        }
    }
}

/// Why an eigenpair did not yield an equilibrium.
#[derive(Debug, Clone, PartialEq)]
pub enum Rejection {
    ComplexEigenvalue { im: f64 },
    NonPositiveEigenvalue,
    /// `lambda^2 < sigma_max`: some `p_i` would be complex.
    BelowSqrtSigmaMax { sqrt_sigma_max: f64 },
    DegenerateLeadEntry { magnitude: f64 },
    ComplexEntry { subset: usize, im: f64 },
    NonPositiveP { player: usize, p: f64 },
    InconsistentMonomial { subset: usize, expected: f64, found: f64 },
    PolishFailed,
    Residual { value: f64 },
    Unstable { pole: f64 },
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::ComplexEigenvalue { im } => write!(f, "complex eigenvalue (imaginary part {im:e})"),
            Rejection::NonPositiveEigenvalue => write!(f, "eigenvalue not positive"),
            Rejection::BelowSqrtSigmaMax { sqrt_sigma_max } => {
                write!(f, "eigenvalue below sqrt(sigma_max) = {sqrt_sigma_max}")
            }
            Rejection::DegenerateLeadEntry { magnitude } => {
                write!(f, "empty-set entry of eigenvector is ~0 ({magnitude:e})")
            }
            Rejection::ComplexEntry { subset, im } => {
                write!(f, "eigenvector entry {subset:#b} not real (imaginary part {im:e})")
            }
            Rejection::NonPositiveP { player, p } => write!(f, "p_{} = {p} is not positive", player + 1),
            Rejection::InconsistentMonomial { subset, expected, found } => write!(
                f,
                "entry {subset:#b} = {found} differs from product of singletons {expected}"
            ),
            Rejection::PolishFailed => write!(f, "Newton polish hit a singular Jacobian"),
            Rejection::Residual { value } => write!(f, "Riccati residual {value:e} after polish"),
            Rejection::Unstable { pole } => write!(f, "closed loop not stable (pole {pole})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateReport {
    pub eigenvalue: (f64, f64),
    pub outcome: std::result::Result<(), Rejection>,
}

/// Full record of an eigen solve, kept for error reporting.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDiagnostics {
    pub n_players: usize,
    pub eigenvalues: Vec<(f64, f64)>,
    pub candidates: Vec<CandidateReport>,
    /// Some eigenvalues coincide within tolerance; the nondefective,
    /// distinct-eigenvalue assumption of the method does not hold.
    pub repeated_spectrum: bool,
}

impl fmt::Display for EigenDiagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "eigen diagnostics (N = {}):", self.n_players)?;
        if self.repeated_spectrum {
            writeln!(f, "  warning: repeated eigenvalues; spectrum may be defective")?;
        }
        for c in &self.candidates {
            let (re, im) = c.eigenvalue;
            let sign = if im < 0.0 { '-' } else { '+' };
            let value = format!("{} {sign} {}i", fmt_num(re), fmt_num(im.abs()));
            match &c.outcome {
                Ok(()) => writeln!(f, "  lambda = {value}: accepted")?,
                Err(r) => writeln!(f, "  lambda = {value}: rejected, {r}")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Warning {
    DefectiveSpectrum,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::DefectiveSpectrum => {
                f.write_str("monomial matrix has repeated eigenvalues; eigenvectors of a repeated eigenvalue may mix")
            }
        }
    }
}

/// Every eigenpair of the monomial matrix, screened for equilibria.
#[derive(Debug, Clone)]
pub struct EigenAnalysis<T> {
    /// Accepted equilibria, sorted by weighted cost, largest first.
    pub equilibria: Vec<FeedbackEquilibrium<T>>,
    pub eigenvalues: Vec<Complex<T>>,
    pub diagnostics: EigenDiagnostics,
    pub m_tilde: MonomialMatrix<T>,
}

impl<T: Scalar> EigenAnalysis<T> {
    pub fn spectral_radius(&self) -> T {
        linalg::spectral_radius(&self.eigenvalues)
    }

    pub fn warnings(&self) -> Vec<Warning> {
        if self.diagnostics.repeated_spectrum {
            vec![Warning::DefectiveSpectrum]
        } else {
            Vec::new()
        }
    }
}

fn has_repeated<T: Scalar>(values: &[Complex<T>], tol: f64) -> bool {
    for (i, u) in values.iter().enumerate() {
        for v in &values[i + 1..] {
            let d = to_f64(Complex { re: u.re - v.re, im: u.im - v.im }.norm());
            let scale = to_f64(u.norm()).max(to_f64(v.norm())).max(1.0);
            if d <= tol * scale {
                return true;
            }
        }
    }
    false
}

fn screen_candidate<T: Scalar>(
    game: &ValidatedGame<T>,
    value: Complex<T>,
    vector: &[Complex<T>],
    tol: &Tolerances,
) -> std::result::Result<FeedbackEquilibrium<T>, Rejection> {
    let n = game.n();
    let params = game.params();
    let lam = value.re;
    if to_f64(value.im).abs() > tol.reality * to_f64(value.norm()) {
        return Err(Rejection::ComplexEigenvalue { im: to_f64(value.im) });
    }
    if lam <= T::zero() {
        return Err(Rejection::NonPositiveEigenvalue);
    }
    // p_i = lambda -+ sqrt(lambda^2 - sigma_i) is real only if lambda^2 >= sigma_i.
    let slack = lit::<T>(1.0 - tol.consistency);
    if lam * lam < params.sigma_max * slack {
        return Err(Rejection::BelowSqrtSigmaMax {
            sqrt_sigma_max: to_f64(params.sigma_max.sqrt()),
        });
    }
    let vmax = vector.iter().map(Complex::norm).fold(T::zero(), T::max);
    let lead = vector[0];
    let lead_mag = lead.norm();
    if to_f64(lead_mag) < tol.lead_entry * to_f64(vmax).max(f64::MIN_POSITIVE) {
        return Err(Rejection::DegenerateLeadEntry {
            magnitude: to_f64(lead_mag / vmax),
        });
    }
    // Divide by the (complex) lead entry so that entry {} becomes 1.
    let denom = lead.re * lead.re + lead.im * lead.im;
    let normalized: Vec<Complex<T>> = vector
        .iter()
        .map(|z| Complex {
            re: (z.re * lead.re + z.im * lead.im) / denom,
            im: (z.im * lead.re - z.re * lead.im) / denom,
        })
        .collect();
    let nmax = to_f64(normalized.iter().map(Complex::norm).fold(T::zero(), T::max));
    for (idx, z) in normalized.iter().enumerate() {
        let im = to_f64(z.im).abs();
        if im > tol.consistency * to_f64(z.norm()).max(tol.consistency * nmax) {
            return Err(Rejection::ComplexEntry { subset: idx, im });
        }
    }
    let p: Vec<T> = (0..n).map(|i| normalized[Subset::singleton(i).0].re).collect();
    if let Some((player, &pi)) = p.iter().enumerate().find(|(_, &x)| x <= T::zero()) {
        return Err(Rejection::NonPositiveP { player, p: to_f64(pi) });
    }
    for (idx, z) in normalized.iter().enumerate() {
        let expected = to_f64(Subset(idx).product(&p));
        let found = to_f64(z.re);
        let scale = expected.abs().max(tol.consistency * nmax);
        if (found - expected).abs() > tol.consistency * scale {
            return Err(Rejection::InconsistentMonomial {
                subset: idx,
                expected,
                found,
            });
        }
    }
    let k0: Vec<T> = p.iter().zip(&params.s).map(|(&p, &s)| p / s).collect();
    let k = newton_polish(game, &k0).ok_or(Rejection::PolishFailed)?;
    let mut eq = equilibrium_from_k(game, k);
    if to_f64(eq.residual) > tol.residual {
        return Err(Rejection::Residual {
            value: to_f64(eq.residual),
        });
    }
    if let Some((player, &pi)) = eq.p.iter().enumerate().find(|(_, &x)| x <= T::zero()) {
        return Err(Rejection::NonPositiveP { player, p: to_f64(pi) });
    }
    if eq.closed_loop_pole >= T::zero() {
        return Err(Rejection::Unstable {
            pole: to_f64(eq.closed_loop_pole),
        });
    }
    eq.eigenvector = Some(normalized.iter().map(|z| z.re).collect());
    Ok(eq)
}

/// Eigen method with default options for `T`; returns every diagnostic.
pub fn analyze_feedback_eigen<T: Scalar>(game: &ValidatedGame<T>) -> Result<EigenAnalysis<T>> {
    analyze_feedback_eigen_with(game, &FeedbackOptions::for_scalar::<T>())
}

pub fn analyze_feedback_eigen_with<T: Scalar>(
    game: &ValidatedGame<T>,
    opts: &FeedbackOptions,
) -> Result<EigenAnalysis<T>> {
    let m_tilde = build_m_tilde(game, opts.n_cap)?;
    let pairs = linalg::eigen(m_tilde.matrix())?;
    let repeated = has_repeated(&pairs.values, opts.tol.repeated_eigenvalue);
    let mut equilibria = Vec::new();
    let mut candidates = Vec::with_capacity(pairs.values.len());
    for (value, vector) in pairs.values.iter().zip(&pairs.vectors) {
        let outcome = match screen_candidate(game, *value, vector, &opts.tol) {
            Ok(eq) => {
                equilibria.push(eq);
                Ok(())
            }
            Err(r) => Err(r),
        };
        candidates.push(CandidateReport {
            eigenvalue: (to_f64(value.re), to_f64(value.im)),
            outcome,
        });
    }
    equilibria.sort_by(|x, y| {
        y.weighted_cost
            .partial_cmp(&x.weighted_cost)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let diagnostics = EigenDiagnostics {
        n_players: game.n(),
        eigenvalues: pairs.values.iter().map(|z| (to_f64(z.re), to_f64(z.im))).collect(),
        candidates,
        repeated_spectrum: repeated,
    };
    Ok(EigenAnalysis {
        equilibria,
        eigenvalues: pairs.values,
        diagnostics,
        m_tilde,
    })
}

/// All feedback equilibria found by the eigen method, largest weighted cost
/// first.
pub fn solve_feedback_eigen<T: Scalar>(game: &ValidatedGame<T>) -> Result<Vec<FeedbackEquilibrium<T>>> {
    solve_feedback_eigen_with(game, &FeedbackOptions::for_scalar::<T>())
}

pub fn solve_feedback_eigen_with<T: Scalar>(
    game: &ValidatedGame<T>,
    opts: &FeedbackOptions,
) -> Result<Vec<FeedbackEquilibrium<T>>> {
    let analysis = analyze_feedback_eigen_with(game, opts)?;
    if analysis.equilibria.is_empty() {
        return Err(Error::NoEquilibrium {
            diagnostics: Box::new(analysis.diagnostics),
        });
    }
    Ok(analysis.equilibria)
}

/// Bisection on a function increasing on `[lo, hi]` with `f(lo) <= 0 <= f(hi)`.
fn bisect_increasing<T: Scalar>(f: impl Fn(T) -> T, mut lo: T, mut hi: T) -> T {
    let two = lit::<T>(2.0);
    for _ in 0..400 {
        let mid = (lo + hi) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) <= T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / two
}

/// Aggregate fixed-point map in `y = p_bar - a`:
/// `(sum_i sqrt(y^2 - sigma_i) + a) / (N - 1) - y`.
fn aggregate_map<T: Scalar>(y: T, a: T, sigma: &[T]) -> T {
    let n1 = lit::<T>((sigma.len() - 1) as f64);
    let roots: T = sigma.iter().map(|&s| (y * y - s).max(T::zero()).sqrt()).sum();
    (roots + a) / n1 - y
}

/// Solves the aggregate scalar equation for `p_bar` by bracketing and
/// bisection, then recovers `p_i = (p_bar - a) - sqrt((p_bar - a)^2 - sigma_i)`.
///
/// Valid when the equilibrium is unique: `a = 0`, or every `p_-i > a`. The
/// latter is checked on the recovered solution.
pub fn solve_feedback_fixedpoint<T: Scalar>(game: &ValidatedGame<T>) -> Result<FeedbackEquilibrium<T>> {
    let n = game.n();
    let a = game.a();
    let params = game.params();
    let sigma = &params.sigma;
    if n == 1 {
        // Scalar Riccati: p = a + sqrt(a^2 + sigma).
        let p = a + (a * a + sigma[0]).sqrt();
        return Ok(equilibrium_from_k(game, vec![p / params.s[0]]));
    }
    let lo = params.sigma_max.sqrt();
    let f = |y: T| aggregate_map(y, a, sigma);
    if f(lo) > T::zero() {
        return Err(Error::NoBracket { upper: to_f64(lo) });
    }
    let mut hi = (lo + a.abs()).max(T::one()) * lit(2.0);
    let mut grown = 0;
    while f(hi) <= T::zero() {
        hi = hi * lit(2.0);
        grown += 1;
        if grown > 200 || !hi.is_finite() {
            return Err(Error::NoBracket { upper: to_f64(hi) });
        }
    }
    let y = bisect_increasing(f, lo, hi);
    // sigma / (y + sqrt(y^2 - sigma)) avoids cancellation when sigma << y^2.
    let p: Vec<T> = sigma
        .iter()
        .map(|&s| s / (y + (y * y - s).max(T::zero()).sqrt()))
        .collect();
    let k0: Vec<T> = p.iter().zip(&params.s).map(|(&p, &s)| p / s).collect();
    let k = match newton_polish(game, &k0) {
        Some(k) if max_abs(&riccati_residual_fb(game, &k)) <= max_abs(&riccati_residual_fb(game, &k0)) => k,
        _ => k0,
    };
    let eq = equilibrium_from_k(game, k);
    if a != T::zero() {
        let p_bar: T = eq.p.iter().copied().sum();
        for (i, &pi) in eq.p.iter().enumerate() {
            let p_minus_i = p_bar - pi;
            if p_minus_i <= a {
                return Err(Error::ConditionViolated {
                    player: i,
                    p_minus_i: to_f64(p_minus_i),
                    a: to_f64(a),
                });
            }
        }
    }
    Ok(eq)
}

/// Whether the uniqueness conditions hold at `eq`: `a = 0` or `p_-i > a`
/// for every player.
pub fn uniqueness_conditions_hold<T: Scalar>(game: &ValidatedGame<T>, eq: &FeedbackEquilibrium<T>) -> bool {
    let a = game.a();
    if a == T::zero() {
        return true;
    }
    let p_bar: T = eq.p.iter().copied().sum();
    game.n() >= 2 && eq.p.iter().all(|&pi| p_bar - pi > a)
}
