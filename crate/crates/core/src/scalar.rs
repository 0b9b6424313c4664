//! Scalar abstraction shared by every module.
//!
//! All numerics are generic over [`Real`], which is satisfied by `f32` and
//! `f64`. Complex amplitudes are `num_complex::Complex<T>`.

use nalgebra::RealField;
use num_complex::Complex;

/// Real floating point scalar usable throughout the crate.
pub trait Real: RealField + Copy {}

impl Real for f32 {}
impl Real for f64 {}

/// Lossless-ish conversion of an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    nalgebra::convert(x)
}

/// Narrowing conversion used for reports and error payloads.
#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    nalgebra::convert_unchecked::<T, f64>(x)
}

/// Conversion of an index or count into `T`.
#[inline]
pub fn from_usize<T: Real>(n: usize) -> T {
    nalgebra::convert(n as f64)
}

/// Lower-bounds a requested absolute tolerance by a multiple of the
/// scalar's machine epsilon so `f32` checks stay meaningful.
#[inline]
pub fn tol<T: Real>(requested: f64) -> T {
    let floor = T::default_epsilon() * lit::<T>(256.0);
    let requested = lit::<T>(requested);
    if requested > floor {
        requested
    } else {
        floor
    }
}

/// `exp(iθ)`.
#[inline]
pub fn cis<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

#[inline]
pub fn modulus<T: Real>(z: Complex<T>) -> T {
    z.re.hypot(z.im)
}

#[inline]
pub fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// The imaginary unit.
#[inline]
pub fn i_unit<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}

/// Reduced Planck constant in the caller's unit system.
///
/// Every formula that needs ħ reads it from one of these instead of
/// hard-coding a value. Defaults to natural units (ħ = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hbar<T>(T);

impl<T: Real> Hbar<T> {
    pub fn new(value: T) -> crate::Result<Self> {
        if value > T::zero() && value.is_finite() {
            Ok(Self(value))
        } else {
            Err(crate::Error::Validation(format!(
                "hbar must be positive and finite, got {value}"
            )))
        }
    }

    #[inline]
    pub fn get(self) -> T {
        self.0
    }
}

impl<T: Real> Default for Hbar<T> {
    fn default() -> Self {
        Self(T::one())
    }
}
