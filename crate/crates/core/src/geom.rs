//! Horizontal strips.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::real::{Complex, Real};

/// Open horizontal strip `S(a, b) = { z : a < Im z < b }`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StripSpec<T> {
    /// Height of the lower boundary line.
    pub a: T,
    /// Height of the upper boundary line.
    pub b: T,
}

impl<T: Real> StripSpec<T> {
    pub fn new(a: T, b: T) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::invalid(format!(
                "strip requires finite a < b, got a = {a}, b = {b}"
            )));
        }
        Ok(Self { a, b })
    }

    /// The standard strip `{ |Im z| < π/2 }`.
    pub fn standard() -> Self {
        Self {
            a: -T::FRAC_PI_2(),
            b: T::FRAC_PI_2(),
        }
    }

    /// The widened strip `S_δ = { −π/2 < Im z < π/2 + δ }`.
    pub fn widened(delta: T) -> Result<Self> {
        if !(delta > T::zero()) {
            return Err(Error::invalid(format!("widened strip needs δ > 0, got {delta}")));
        }
        Ok(Self {
            a: -T::FRAC_PI_2(),
            b: T::FRAC_PI_2() + delta,
        })
    }

    #[inline]
    pub fn width(&self) -> T {
        self.b - self.a
    }

    #[inline]
    pub fn midline(&self) -> T {
        (self.a + self.b) * T::half()
    }

    #[inline]
    pub fn contains(&self, w: Complex<T>) -> bool {
        self.a < w.im && w.im < self.b
    }

    pub fn is_standard(&self) -> bool {
        (self.a + T::FRAC_PI_2()).abs() <= T::epsilon() * T::of(8.0)
            && (self.b - T::FRAC_PI_2()).abs() <= T::epsilon() * T::of(8.0)
    }
}
