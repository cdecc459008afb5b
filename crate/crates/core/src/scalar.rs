//! Scalar abstraction shared by every numeric type in the crate.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FromPrimitive};

/// Real field the linear algebra is generic over (`f32` or `f64`).
///
/// Besides the arithmetic bounds, each implementation carries the numeric
/// thresholds that depend on the precision of the type.
pub trait Real:
    Float + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Default comparison tolerance used by checks.
    fn default_eps() -> Self;
    /// Eigenvalues closer than this are merged into one spectral projector.
    fn degeneracy_threshold() -> Self;
    /// Density-operator eigenvalues below this count as zero.
    fn zero_eigenvalue() -> Self;

    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn default_eps() -> Self {
        1e-9
    }
    fn degeneracy_threshold() -> Self {
        1e-7
    }
    fn zero_eigenvalue() -> Self {
        1e-12
    }
}

impl Real for f32 {
    fn default_eps() -> Self {
        1e-4
    }
    fn degeneracy_threshold() -> Self {
        1e-3
    }
    fn zero_eigenvalue() -> Self {
        1e-6
    }
}

/// Complex scalar over a [`Real`] field.
pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn c<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn cr<T: Real>(re: T) -> C<T> {
    Complex::new(re, T::zero())
}

#[inline]
pub(crate) fn czero<T: Real>() -> C<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub(crate) fn cone<T: Real>() -> C<T> {
    Complex::new(T::one(), T::zero())
}
