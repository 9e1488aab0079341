//! Densities of the hyperbolic metric (curvature −1 convention).
//!
//! The density of the unit disk is `λ_D(z) = 2/(1−|z|²)`; every other density
//! is obtained by pushing forward through an explicit conformal map:
//! `λ_Ω(m(ζ))·|m'(ζ)| = λ_source(ζ)`. Pushforwards are evaluated in log space
//! so that points exponentially close to the boundary (backward orbits near
//! the α-point) lose no precision.

use crate::error::{Error, Result};
use crate::geom::StripSpec;
use crate::maps::ln_abs_cosh;
use crate::real::{Complex, Real};

/// `λ_D(z) = 2/(1−|z|²)` on the unit disk.
pub fn disk_density<T: Real>(z: Complex<T>) -> Result<T> {
    let n2 = z.norm_sqr();
    if n2 >= T::one() {
        return Err(Error::outside(z));
    }
    Ok(T::two() / (T::one() - n2))
}

/// `log λ_D` at the point `tanh(ζ/2)`, evaluated through the strip
/// coordinate `ζ` of the standard strip. Stable for arbitrarily negative
/// `Re ζ`, where the disk point itself would round to the boundary.
pub fn log_disk_density_at_strip_coord<T: Real>(zeta: Complex<T>) -> Result<T> {
    if zeta.im.abs() >= T::FRAC_PI_2() {
        return Err(Error::outside(zeta));
    }
    Ok(T::LN_2() + T::two() * ln_abs_cosh(zeta * T::half()) - zeta.im.cos().ln())
}

/// Hyperbolic density of the strip `S(a,b)` at `w`: the pushforward of
/// [`disk_density`] through the explicit map `tanh(π(w − i·mid)/(2(b−a)))`.
/// In `λ_D(F(w))·|F'(w)|` the `cosh` factors cancel identically, leaving
/// `(π/(b−a)) / cos(π(Im w − mid)/(b−a))`; the cancellation is carried out
/// in closed form so the value depends only on `Im w`, exactly.
pub fn strip_density<T: Real>(w: Complex<T>, strip: &StripSpec<T>) -> Result<T> {
    if !strip.contains(w) {
        return Err(Error::outside(w));
    }
    let scale = T::PI() / strip.width();
    let y = (w.im - strip.midline()) * scale;
    Ok(scale / y.cos())
}

/// Literal (non-log) pushforward; used as an oracle in tests for moderate
/// arguments.
pub fn strip_density_literal<T: Real>(w: Complex<T>, strip: &StripSpec<T>) -> Result<T> {
    if !strip.contains(w) {
        return Err(Error::outside(w));
    }
    let scale = T::PI() / strip.width();
    let zeta = Complex::new(w.re * scale, (w.im - strip.midline()) * scale);
    let image = (zeta * T::half()).tanh();
    let deriv = {
        let c = (zeta * T::half()).cosh();
        (c * c * T::two()).inv() * scale
    };
    Ok(disk_density(image)? * deriv.norm())
}

/// Hyperbolic distance in the unit disk:
/// `d_D(z, w) = 2 artanh |(z−w)/(1−z·conj(w))| = log((1+r)/(1−r))`.
pub fn disk_distance<T: Real>(z: Complex<T>, w: Complex<T>) -> Result<T> {
    if z.norm_sqr() >= T::one() || w.norm_sqr() >= T::one() {
        return Err(Error::outside(if z.norm_sqr() >= T::one() { z } else { w }));
    }
    let r = ((z - w) / (Complex::new(T::one(), T::zero()) - z * w.conj())).norm();
    Ok(((T::one() + r) / (T::one() - r)).ln())
}

/// `log(μ(w)/sinh μ(w))` with `μ(w) = (1−|w|²)/|1−w|²`; the density drop of
/// the exponential covering `w ↦ exp(−(1+w)/(1−w))` of the punctured disk.
/// Always in `[−μ²/6, 0]`.
pub fn elliptic_density_factor<T: Real>(w: Complex<T>) -> Result<T> {
    let n2 = w.norm_sqr();
    let one = Complex::new(T::one(), T::zero());
    if n2 >= T::one() || w == one {
        return Err(Error::outside(w));
    }
    let mu = (T::one() - n2) / (one - w).norm_sqr();
    if mu < T::of(1e-4) {
        // sinh μ / μ = 1 + μ²/6 + μ⁴/120 + …
        let mu2 = mu * mu;
        Ok(-(mu2 / T::of(6.0) + mu2 * mu2 / T::of(120.0)).ln_1p())
    } else {
        Ok((mu / mu.sinh()).ln())
    }
}
