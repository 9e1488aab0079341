//! Conformal building-block maps and their chains.
//!
//! Every explicit domain in the catalog is reached from the standard strip
//! `S = { |Im z| < π/2 }` (or from the unit disk) by composing a handful of
//! primitive maps. Each primitive knows its derivative and its inverse, so a
//! [`MapChain`] supports evaluation, chain-rule differentiation and inversion.
//!
//! The slit-plane primitive `g(z) = z + (1 + e^{2z})/2` maps `S` onto the
//! two-slit plane `C ∖ { Re w ≤ 0, |Im w| = π/2 }`; its inverse has no closed
//! form and is computed by damped Newton iteration confined to the strip
//! (`g'(z) = 1 + e^{2z}` does not vanish in the open strip).

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::real::Real;

#[inline]
fn cx<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::of(re), T::of(im))
}

#[inline]
fn i<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}

/// `log|cosh v|`, stable for arbitrarily large `|Re v|`.
pub fn ln_abs_cosh<T: Real>(v: Complex<T>) -> T {
    let x = v.re.abs();
    let tail = Complex::new(-(x + x), -(v.im + v.im)).exp();
    x - T::LN_2() + (Complex::new(T::one(), T::zero()) + tail).norm().ln()
}

/// `log|sinh v|`, stable for arbitrarily large `|Re v|`.
pub fn ln_abs_sinh<T: Real>(v: Complex<T>) -> T {
    let x = v.re.abs();
    if x > T::of(0.1) {
        let tail = Complex::new(-(x + x), -(v.im + v.im)).exp();
        x - T::LN_2() + (Complex::new(T::one(), T::zero()) - tail).norm().ln()
    } else {
        v.sinh().norm().ln()
    }
}

/// Primitive conformal maps.
#[derive(Debug, Clone, PartialEq)]
pub enum Map<T> {
    /// `w ↦ a·w + b`.
    Affine { a: Complex<T>, b: Complex<T> },
    /// Standard strip onto the unit disk: `w ↦ tanh(w/2)`.
    StripToDisk,
    /// Unit disk onto the standard strip: `z ↦ log((1+z)/(1−z))`.
    DiskToStrip,
    /// Standard strip onto the two-slit plane: `z ↦ z + (1 + e^{2z})/2`.
    SlitPlane,
    /// Two-slit plane back onto the standard strip (Newton).
    SlitPlaneInv,
    /// Standard strip onto `C ∖ (−∞, −1/4]`: `z ↦ (e^{2z} − 1)/4`.
    KoebeExp,
    /// Unit disk onto the upper half-plane: `z ↦ i(1+z)/(1−z)`.
    Cayley,
    /// Standard strip onto `{ ζ : Re ζ > f(Im ζ) }` with `f(η) = η²` for
    /// `η < 0`, `f(0) = 1/4`, `f = −∞` above: `z ↦ i e^z − i e^{iπ/4} e^{z/2}`.
    SqrtShift,
}

impl<T: Real> Map<T> {
    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        let one = Complex::new(T::one(), T::zero());
        match self {
            Map::Affine { a, b } => *a * z + *b,
            Map::StripToDisk => (z * T::half()).tanh(),
            Map::DiskToStrip => ((one + z) / (one - z)).ln(),
            Map::SlitPlane => z + (one + (z + z).exp()) * T::half(),
            Map::SlitPlaneInv => invert_slit_plane(z).expect("slit-plane inversion failed"),
            Map::KoebeExp => ((z + z).exp() - one) * T::of(0.25),
            Map::Cayley => i::<T>() * (one + z) / (one - z),
            Map::SqrtShift => {
                let u = (z * T::half()).exp();
                i::<T>() * u * u - i::<T>() * cx::<T>(0.0, core::f64::consts::FRAC_PI_4).exp() * u
            }
        }
    }

    pub fn deriv(&self, z: Complex<T>) -> Complex<T> {
        let one = Complex::new(T::one(), T::zero());
        match self {
            Map::Affine { a, .. } => *a,
            Map::StripToDisk => {
                let c = (z * T::half()).cosh();
                (c * c * T::two()).inv()
            }
            Map::DiskToStrip => (one - z * z).inv() * T::two(),
            Map::SlitPlane => one + (z + z).exp(),
            Map::SlitPlaneInv => {
                let w = invert_slit_plane(z).expect("slit-plane inversion failed");
                (one + (w + w).exp()).inv()
            }
            Map::KoebeExp => (z + z).exp() * T::half(),
            Map::Cayley => {
                let d = one - z;
                i::<T>() * T::two() / (d * d)
            }
            Map::SqrtShift => {
                let u = (z * T::half()).exp();
                i::<T>() * u * u - i::<T>() * cx::<T>(0.0, core::f64::consts::FRAC_PI_4).exp() * u * T::half()
            }
        }
    }

    pub fn invert(&self, w: Complex<T>) -> Result<Complex<T>> {
        let one = Complex::new(T::one(), T::zero());
        match self {
            Map::Affine { a, b } => Ok((w - *b) / *a),
            Map::StripToDisk => Ok(((one + w) / (one - w)).ln()),
            Map::DiskToStrip => Ok((w * T::half()).tanh()),
            Map::SlitPlane => invert_slit_plane(w),
            Map::SlitPlaneInv => Ok(Map::SlitPlane.eval(w)),
            Map::KoebeExp => Ok((w * T::of(4.0) + one).ln() * T::half()),
            Map::Cayley => Ok((w - i::<T>()) / (w + i::<T>())),
            Map::SqrtShift => invert_sqrt_shift(w),
        }
    }
}

/// Newton inversion of `g(z) = z + (1 + e^{2z})/2` on the standard strip.
///
/// Initial guesses: the left-end asymptote `w − 1/2`, quadratic expansions at
/// the two slit tips `±iπ/2` (where `g' = 0` on the boundary), a heuristic for
/// points on the slit lines far to the right, and a few fixed interior seeds.
/// Steps are damped and the imaginary part is clamped to the open strip.
fn invert_slit_plane<T: Real>(w: Complex<T>) -> Result<Complex<T>> {
    let g = |z: Complex<T>| Map::SlitPlane.eval(z);
    let gp = |z: Complex<T>| Map::<T>::SlitPlane.deriv(z);
    let cap = T::FRAC_PI_2() - T::epsilon() * T::of(8.0);
    let clamp = |z: Complex<T>| {
        Complex::new(z.re, num_traits::clamp(z.im, -cap, cap))
    };
    let scale = T::one().max(w.norm());
    let tol = T::epsilon() * T::of(64.0) * scale;

    let mut seeds: Vec<Complex<T>> = Vec::with_capacity(12);
    seeds.push(w - cx::<T>(0.5, 0.0));
    if w.norm() > T::of(3.0) {
        // For large |w| the exponential dominates: e^{2ζ} ≈ 2(w − ζ − 1/2).
        let s0 = clamp((w * T::two()).ln() * T::half());
        seeds.push(s0);
        seeds.push(clamp(((w - s0 - cx::<T>(0.5, 0.0)) * T::two()).ln() * T::half()));
    }
    for sign in [T::one(), -T::one()] {
        // g(ζ) ≈ tip − (ζ − tip)² near the tips, so ζ ≈ tip ± √(tip − w).
        let tip = Complex::new(T::zero(), sign * T::FRAC_PI_2());
        let root = (tip - w).sqrt();
        seeds.push(clamp(tip + root));
        seeds.push(clamp(tip - root));
    }
    if w.re > T::one() && w.im.abs() > T::one() {
        // Preimages of points on the slit lines drift toward the real axis.
        let v = (T::FRAC_PI_4() / w.re.abs()).min(T::FRAC_PI_4());
        let u = (w.re.abs() + w.re.abs()).ln() * T::half();
        seeds.push(Complex::new(u, v * w.im.signum()));
    }
    seeds.push(cx::<T>(0.0, 0.0));
    seeds.push(cx::<T>(1.0, 0.0));
    seeds.push(cx::<T>(-1.0, 0.0));
    seeds.push(cx::<T>(0.5, 0.7));
    seeds.push(cx::<T>(0.5, -0.7));

    let residual = |z: Complex<T>| {
        let r = (g(z) - w).norm();
        if r.is_finite() {
            r
        } else {
            T::infinity()
        }
    };
    let mut best_residual = T::infinity();
    for seed in seeds {
        let mut z = clamp(seed);
        let mut r = residual(z);
        if !r.is_finite() {
            continue;
        }
        for _ in 0..60 {
            if r <= tol {
                return Ok(z);
            }
            let step = (g(z) - w) / gp(z);
            let mut alpha = T::one();
            let mut advanced = false;
            for _ in 0..8 {
                let cand = clamp(z - step * alpha);
                let rc = residual(cand);
                if rc < r {
                    z = cand;
                    r = rc;
                    advanced = true;
                    break;
                }
                alpha = alpha * T::half();
            }
            if !advanced {
                break;
            }
        }
        if r <= tol {
            return Ok(z);
        }
        best_residual = best_residual.min(r);
    }
    Err(Error::NewtonDiverged {
        residual: best_residual.to_f64().unwrap_or(f64::NAN),
    })
}

/// Closed-form inverse of the square-root shift map via its quadratic in
/// `u = e^{z/2}`, selecting the root that lands in the strip.
fn invert_sqrt_shift<T: Real>(w: Complex<T>) -> Result<Complex<T>> {
    let one = Complex::new(T::one(), T::zero());
    let rot = cx::<T>(0.0, core::f64::consts::FRAC_PI_4).exp();
    // i u² − i rot u = w  ⇔  u² − rot·u + (−i w·... ) with u = e^{z/2}:
    // u = [rot ± √(rot² − 4·(−i)·(−w)·...)]/2; rot² = i.
    let disc = (i::<T>() - i::<T>() * w * T::of(4.0)).sqrt();
    for sign in [T::one(), -T::one()] {
        let u = (rot + disc * sign) * T::half();
        if u.norm() <= T::epsilon() {
            continue;
        }
        let z = u.ln() * T::two();
        if z.im.abs() < T::FRAC_PI_2() {
            let back = Map::SqrtShift.eval(z);
            if (back - w).norm() <= T::of(1e-10) * T::one().max(w.norm()) {
                return Ok(z);
            }
        }
    }
    // Newton fallback from the half-plane asymptote.
    let mut z = (w / i::<T>() + one).ln();
    let mut r = (Map::SqrtShift.eval(z) - w).norm();
    let tol = T::epsilon() * T::of(64.0) * T::one().max(w.norm());
    for _ in 0..60 {
        if r <= tol {
            return Ok(z);
        }
        let step = (Map::SqrtShift.eval(z) - w) / Map::<T>::SqrtShift.deriv(z);
        let cand = Complex::new(
            z.re - step.re,
            num_traits::clamp(z.im - step.im, -T::FRAC_PI_2(), T::FRAC_PI_2()),
        );
        let rc = (Map::SqrtShift.eval(cand) - w).norm();
        if !(rc < r) {
            break;
        }
        z = cand;
        r = rc;
    }
    Err(Error::NewtonDiverged {
        residual: r.to_f64().unwrap_or(f64::NAN),
    })
}

/// A composition of primitive maps, applied left to right.
#[derive(Debug, Clone, PartialEq)]
pub struct MapChain<T> {
    pub maps: Vec<Map<T>>,
}

impl<T: Real> MapChain<T> {
    pub fn new(maps: Vec<Map<T>>) -> Self {
        Self { maps }
    }

    pub fn identity() -> Self {
        Self { maps: Vec::new() }
    }

    /// Affine map sending the standard strip onto `strip`.
    pub fn standard_to_strip(strip: &crate::geom::StripSpec<T>) -> Self {
        let scale = strip.width() / T::PI();
        Self::new(vec![Map::Affine {
            a: Complex::new(scale, T::zero()),
            b: Complex::new(T::zero(), strip.midline()),
        }])
    }

    /// Conformal map of `strip` onto the unit disk.
    pub fn strip_to_disk(strip: &crate::geom::StripSpec<T>) -> Self {
        let scale = T::PI() / strip.width();
        Self::new(vec![
            Map::Affine {
                a: Complex::new(scale, T::zero()),
                b: Complex::new(T::zero(), -strip.midline() * scale),
            },
            Map::StripToDisk,
        ])
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.maps.iter().fold(z, |w, m| m.eval(w))
    }

    /// Chain-rule derivative of the composition at `z`.
    pub fn deriv(&self, z: Complex<T>) -> Complex<T> {
        let mut w = z;
        let mut d = Complex::new(T::one(), T::zero());
        for m in &self.maps {
            d = d * m.deriv(w);
            w = m.eval(w);
        }
        d
    }

    pub fn invert(&self, w: Complex<T>) -> Result<Complex<T>> {
        let mut z = w;
        for m in self.maps.iter().rev() {
            z = m.invert(z)?;
        }
        Ok(z)
    }

    /// Appends `other` after `self`.
    pub fn then(mut self, other: MapChain<T>) -> Self {
        self.maps.extend(other.maps);
        self
    }
}
