//! Green's functions, harmonic measure, conformal radii and the strong
//! Markov identity.
//!
//! For a simply connected domain `D` the Green's function transports through
//! any conformal map, and the conformal radius `R(w, D) = 2/λ_D(w)` satisfies
//!
//! `log R(w, D₂)/R(w, D₁) = ∫_A G_{D₂}(α, w) ω_{D₁}(w, dα)`,  `A = D₂ ∩ ∂D₁`,
//!
//! for `D₁ ⊂ D₂` — the strong Markov property. The numerical identity between
//! that integral and the exact log-ratio of radii is one of the crate's
//! cross-checks.

use num_complex::Complex;

use crate::domain::DomainModel;
use crate::error::{Error, Result};
use crate::geom::StripSpec;
use crate::maps::{ln_abs_cosh, ln_abs_sinh};
use crate::metric::{disk_distance, strip_density};
use crate::quad::{integrate_right_tail, integrate_real_line, ImproperPolicy};
use crate::real::Real;

/// `G_D(z, w) = log |(1 − z·conj(w))/(z − w)|` on the unit disk.
pub fn green_disk<T: Real>(z: Complex<T>, w: Complex<T>) -> Result<T> {
    if z.norm_sqr() >= T::one() || w.norm_sqr() >= T::one() {
        return Err(Error::outside(if z.norm_sqr() >= T::one() { z } else { w }));
    }
    if z == w {
        return Err(Error::GreenSingularity);
    }
    let one = Complex::new(T::one(), T::zero());
    Ok(((one - z * w.conj()) / (z - w)).norm().ln())
}

/// Green's function of the strip `S(a, b)`, as the pushforward of
/// [`green_disk`] through the strip-to-disk map. In standard-strip
/// coordinates `Z, W` the pushforward simplifies to
/// `log|cosh((Z − conj(W))/2)| − log|sinh((Z − W)/2)|`, which stays accurate
/// for arbitrarily distant arguments.
pub fn green_strip<T: Real>(z: Complex<T>, w: Complex<T>, strip: &StripSpec<T>) -> Result<T> {
    if !strip.contains(z) || !strip.contains(w) {
        return Err(Error::outside(if strip.contains(z) { w } else { z }));
    }
    if z == w {
        return Err(Error::GreenSingularity);
    }
    let scale = T::PI() / strip.width();
    let zz = Complex::new(z.re * scale, (z.im - strip.midline()) * scale);
    let ww = Complex::new(w.re * scale, (w.im - strip.midline()) * scale);
    Ok(ln_abs_cosh((zz - ww.conj()) * T::half()) - ln_abs_sinh((zz - ww) * T::half()))
}

/// Density (in `x`) of the harmonic measure of the **upper** boundary line of
/// the standard strip, seen from `iy`:
/// `ω_S(iy, dz) = (2π)^{−1} cos y (cosh x − sin y)^{−1} dx` on `Im z = π/2`.
pub fn harmonic_measure_strip_upper<T: Real>(y: T, x: T) -> Result<T> {
    if y.abs() >= T::FRAC_PI_2() {
        return Err(Error::outside(Complex::new(T::zero(), y)));
    }
    Ok(y.cos() / (x.cosh() - y.sin()) / T::TAU())
}

/// Harmonic measure at `z` of the boundary arc `{e^{iθ} : α < θ < β}` of the
/// unit disk, via the Möbius transport `T(σ, z) = (σ − z)/(1 − σ·conj(z))`
/// and normalized arc length.
pub fn harmonic_measure_disk_arc<T: Real>(z: Complex<T>, alpha: T, beta: T) -> Result<T> {
    if z.norm_sqr() >= T::one() {
        return Err(Error::outside(z));
    }
    if !(alpha < beta) || beta > alpha + T::TAU() + T::epsilon() * T::of(16.0) {
        return Err(Error::invalid("arc needs α < β ≤ α + 2π"));
    }
    if beta - alpha >= T::TAU() {
        return Ok(T::one());
    }
    let transport = |theta: T| -> T {
        let sigma = Complex::new(theta.cos(), theta.sin());
        let one = Complex::new(T::one(), T::zero());
        ((sigma - z) / (one - sigma * z.conj())).arg()
    };
    let ta = transport(alpha);
    let tb = transport(beta);
    let mut swept = tb - ta;
    while swept < T::zero() {
        swept = swept + T::TAU();
    }
    while swept > T::TAU() {
        swept = swept - T::TAU();
    }
    Ok(swept / T::TAU())
}

/// Exact conformal radius `R(w, Ω) = 2/λ_Ω(w)` for catalog domains.
pub fn conf_radius<T: Real>(domain: &DomainModel<T>, w: Complex<T>) -> Result<T> {
    if !domain.contains(w) {
        return Err(Error::outside(w));
    }
    match domain {
        DomainModel::Disk => Ok(T::one() - w.norm_sqr()),
        DomainModel::HalfPlane { floor } => Ok(T::two() * (w.im - *floor)),
        DomainModel::Strip(s) => Ok(T::two() / strip_density(w, s)?),
        DomainModel::WidenedStrip { delta } => {
            Ok(T::two() / strip_density(w, &StripSpec::widened(*delta)?)?)
        }
        DomainModel::TwoSlit { .. } | DomainModel::Mapped(_) => {
            let chain = domain
                .chain_from_standard_strip()
                .ok_or(Error::UnsupportedExact("no explicit map"))?;
            let zeta = chain.invert(w)?;
            let std = StripSpec::standard();
            Ok(T::two() / strip_density(zeta, &std)? * chain.deriv(zeta).norm())
        }
        DomainModel::Profile(_) => Err(Error::UnsupportedExact(
            "profile domains have no exact radius; use the Monte Carlo estimator",
        )),
    }
}

/// Hyperbolic distance in a catalog domain (pushforward of the disk metric).
pub fn hyperbolic_distance<T: Real>(
    domain: &DomainModel<T>,
    z: Complex<T>,
    w: Complex<T>,
) -> Result<T> {
    if !domain.contains(z) || !domain.contains(w) {
        return Err(Error::outside(if domain.contains(z) { w } else { z }));
    }
    let to_disk = |v: Complex<T>| -> Result<Complex<T>> {
        match domain {
            DomainModel::Disk => Ok(v),
            DomainModel::HalfPlane { floor } => {
                // Upper half-plane above `floor` onto the disk.
                let i = Complex::new(T::zero(), T::one());
                let shifted = Complex::new(v.re, v.im - *floor);
                Ok((shifted - i) / (shifted + i))
            }
            DomainModel::Strip(s) => {
                let chain = crate::maps::MapChain::strip_to_disk(s);
                Ok(chain.eval(v))
            }
            DomainModel::WidenedStrip { delta } => {
                let chain = crate::maps::MapChain::strip_to_disk(&StripSpec::widened(*delta)?);
                Ok(chain.eval(v))
            }
            DomainModel::TwoSlit { .. } | DomainModel::Mapped(_) => {
                let chain = domain
                    .chain_from_standard_strip()
                    .ok_or(Error::UnsupportedExact("no explicit map"))?;
                let zeta = chain.invert(v)?;
                Ok((zeta * T::half()).tanh())
            }
            DomainModel::Profile(_) => Err(Error::UnsupportedExact(
                "profile domains have no exact hyperbolic distance",
            )),
        }
    };
    disk_distance(to_disk(z)?, to_disk(w)?)
}

/// Strong Markov integral `∫_A G_outer(α, w) ω_inner(w, dα)` for the
/// supported nested pairs: `inner` a strip, `outer` either a wider strip or a
/// two-slit plane whose slits run along the inner strip's boundary lines.
///
/// Equals `log(R(w, outer)/R(w, inner))` whenever both radii are exact.
pub fn strong_markov_log_ratio<T: Real>(
    inner: &DomainModel<T>,
    outer: &DomainModel<T>,
    w: Complex<T>,
    tol: T,
) -> Result<T> {
    if inner == outer {
        return Ok(T::zero());
    }
    let inner_strip = match inner {
        DomainModel::Strip(s) => *s,
        DomainModel::WidenedStrip { delta } => StripSpec::widened(*delta)?,
        _ => {
            return Err(Error::UnsupportedExact(
                "strong Markov integral implemented for strip inners",
            ))
        }
    };
    if !inner_strip.contains(w) {
        return Err(Error::outside(w));
    }
    let policy = ImproperPolicy::<T> {
        tol: tol * T::of(0.1),
        cutoff_start: T::of(16.0),
        max_cutoff: T::of(1e12),
        nonnegative: true,
    };
    // Harmonic-measure densities on the two boundary lines of the inner
    // strip, seen from `w`, as functions of the boundary abscissa.
    let scale = T::PI() / inner_strip.width();
    let y_std = (w.im - inner_strip.midline()) * scale;
    let density = |x: T, upper: bool| -> T {
        // Transport to the standard strip: boundary abscissa rescales, and
        // the density picks up the same factor.
        let xs = (x - w.re) * scale;
        let y_eff = if upper { y_std } else { -y_std };
        y_eff.cos() / (xs.cosh() - y_eff.sin()) / T::TAU() * scale
    };

    match outer {
        DomainModel::Strip(_) | DomainModel::WidenedStrip { .. } => {
            let outer_strip = match outer {
                DomainModel::Strip(s) => *s,
                DomainModel::WidenedStrip { delta } => StripSpec::widened(*delta)?,
                _ => unreachable!(),
            };
            if outer_strip.a > inner_strip.a || outer_strip.b < inner_strip.b {
                return Err(Error::UnsupportedExact("outer strip does not contain inner"));
            }
            let mut total = T::zero();
            for (line_y, upper) in [(inner_strip.b, true), (inner_strip.a, false)] {
                // Boundary lines coinciding with the outer boundary carry no
                // Green's mass (A = outer ∩ ∂inner is interior to outer).
                let on_outer_boundary = line_y == outer_strip.a || line_y == outer_strip.b;
                if on_outer_boundary {
                    continue;
                }
                let mut f = |x: T| {
                    let g = green_strip(Complex::new(x, line_y), w, &outer_strip)
                        .unwrap_or(T::zero());
                    g * density(x, upper)
                };
                let r = integrate_real_line(&mut f, &policy);
                total += r.value;
            }
            Ok(total)
        }
        DomainModel::TwoSlit { strip, slit_end } => {
            if *strip != inner_strip {
                return Err(Error::UnsupportedExact(
                    "two-slit outer must share the inner strip's boundary lines",
                ));
            }
            let chain = outer
                .chain_from_standard_strip()
                .expect("two-slit domains have explicit maps");
            let w_pre = chain.invert(w)?;
            let std = StripSpec::standard();
            let green_outer = |alpha: Complex<T>| -> T {
                match chain.invert(alpha) {
                    Ok(pre) => green_strip(pre, w_pre, &std).unwrap_or(T::zero()),
                    Err(_) => T::zero(),
                }
            };
            let mut total = T::zero();
            for (line_y, upper) in [(inner_strip.b, true), (inner_strip.a, false)] {
                let mut f = |x: T| green_outer(Complex::new(x, line_y)) * density(x, upper);
                let r = integrate_right_tail(&mut f, *slit_end, &policy);
                total += r.value;
            }
            Ok(total)
        }
        _ => Err(Error::UnsupportedExact(
            "strong Markov integral implemented for strip and two-slit outers",
        )),
    }
}
