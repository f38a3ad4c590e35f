//! Scalar abstraction shared by every solver.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type the solvers are written against: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

#[inline]
pub(crate) fn to_f64<T: Scalar>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn max_abs<T: Scalar>(xs: &[T]) -> T {
    xs.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
}

/// Numerical acceptance thresholds.
///
/// The defaults are tuned for `f64`. [`Tolerances::for_scalar`] widens them
/// in proportion to the machine epsilon of a coarser type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative imaginary part below which an eigenvalue counts as real.
    pub reality: f64,
    /// Relative mismatch allowed between an eigenvector entry and the product
    /// of its singleton entries.
    pub consistency: f64,
    /// Max absolute coupled-Riccati residual accepted after polishing.
    pub residual: f64,
    /// Magnitude below which the empty-set coordinate of an eigenvector is
    /// treated as zero.
    pub lead_entry: f64,
    /// Eigenvalue separation below which the spectrum is flagged as repeated.
    pub repeated_eigenvalue: f64,
    /// Tolerance on simplex constraints (weights and altruism rows).
    pub simplex: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            reality: 1e-9,
            consistency: 1e-6,
            residual: 1e-9,
            lead_entry: 1e-10,
            repeated_eigenvalue: 1e-8,
            simplex: 1e-12,
        }
    }
}

impl Tolerances {
    pub fn for_scalar<T: Scalar>() -> Self {
        let ratio = (to_f64(T::epsilon()) / f64::EPSILON).max(1.0);
        let d = Self::default();
        let widen = |x: f64| (x * ratio).min(1e-2);
        Self {
            reality: widen(d.reality),
            consistency: widen(d.consistency),
            residual: widen(d.residual),
            lead_entry: d.lead_entry,
            repeated_eigenvalue: widen(d.repeated_eigenvalue),
            simplex: widen(d.simplex),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_tolerances_are_the_defaults() {
        assert_eq!(Tolerances::for_scalar::<f64>(), Tolerances::default());
    }

    #[test]
    fn f32_tolerances_are_wider() {
        let t = Tolerances::for_scalar::<f32>();
        assert!(t.residual > 1e-9 && t.residual <= 1e-2);
        assert!(t.simplex > 1e-12);
    }
}
