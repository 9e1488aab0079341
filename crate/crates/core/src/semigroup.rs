//! Semigroup dynamics in Koenigs coordinates.
//!
//! A non-elliptic one-parameter semigroup is the flow `φ_t = h⁻¹ ∘ (h + t)`
//! of its Koenigs map `h`, which satisfies Abel's equation
//! `h(φ_t(z)) = h(z) + t`. Here `h` is fixed as `m ∘ σ₀`, where
//! `σ₀(z) = log((1+z)/(1−z))` maps the disk onto the standard strip and `m`
//! is the catalog domain's strip-source map; this pins the additive constant
//! `h` is otherwise only defined up to.
//!
//! Backward orbits approach the α-point `σ = −1` exponentially, so every
//! quantity that degenerates there (`|φ_t − σ|`, `λ_D(φ_t)`, `|h'(φ_t)|`) is
//! evaluated through the strip coordinate `ζ_t = m⁻¹(h(z) + t)` instead of
//! the collapsed disk point.

use num_complex::Complex;

use crate::domain::DomainModel;
use crate::error::{Error, Result};
use crate::geom::StripSpec;
use crate::maps::{ln_abs_cosh, MapChain};

type Cx = Complex<f64>;

/// Koenigs map `h = m ∘ σ₀` with stable strip-coordinate accessors.
#[derive(Debug, Clone)]
pub struct Koenigs {
    /// `m`: standard strip onto the Koenigs domain.
    strip_map: MapChain<f64>,
}

impl Koenigs {
    pub fn new(strip_map: MapChain<f64>) -> Self {
        Self { strip_map }
    }

    /// `σ₀(z) = log((1+z)/(1−z))`.
    pub fn sigma0(z: Cx) -> Cx {
        ((Cx::new(1.0, 0.0) + z) / (Cx::new(1.0, 0.0) - z)).ln()
    }

    pub fn h(&self, z: Cx) -> Cx {
        self.strip_map.eval(Self::sigma0(z))
    }

    pub fn h_prime(&self, z: Cx) -> Cx {
        let zeta = Self::sigma0(z);
        self.strip_map.deriv(zeta) * 2.0 / (Cx::new(1.0, 0.0) - z * z)
    }

    pub fn h_inv(&self, w: Cx) -> Result<Cx> {
        Ok((self.strip_map.invert(w)? * 0.5).tanh())
    }

    /// Standard-strip coordinate `ζ = m⁻¹(w)`.
    pub fn strip_coord(&self, w: Cx) -> Result<Cx> {
        self.strip_map.invert(w)
    }

    /// Disk point `tanh(ζ/2)` of a strip coordinate.
    pub fn disk_point(zeta: Cx) -> Cx {
        (zeta * 0.5).tanh()
    }

    /// `h'` evaluated at the disk point of `ζ`, via
    /// `σ₀'(tanh(ζ/2)) = 2 cosh²(ζ/2)`.
    pub fn h_prime_at(&self, zeta: Cx) -> Cx {
        let c = (zeta * 0.5).cosh();
        self.strip_map.deriv(zeta) * 2.0 * c * c
    }

    /// `log|h'|` at the disk point of `ζ`; stable for any `Re ζ`.
    pub fn ln_abs_h_prime_at(&self, zeta: Cx) -> f64 {
        self.strip_map.deriv(zeta).norm().ln()
            + core::f64::consts::LN_2
            + 2.0 * ln_abs_cosh(zeta * 0.5)
    }

    /// `log λ_D` at the disk point of `ζ`; stable for any `Re ζ`.
    pub fn ln_disk_density_at(zeta: Cx) -> f64 {
        core::f64::consts::LN_2 + 2.0 * ln_abs_cosh(zeta * 0.5) - zeta.im.cos().ln()
    }

    /// `log|tanh(ζ/2) − (−1)| = log|2e^ζ/(1 + e^ζ)|`, the distance to the
    /// α-point, stable for any `Re ζ`.
    pub fn ln_dist_alpha_at(zeta: Cx) -> f64 {
        let one = Cx::new(1.0, 0.0);
        if zeta.re <= 0.0 {
            core::f64::consts::LN_2 + zeta.re - (one + zeta.exp()).norm().ln()
        } else {
            core::f64::consts::LN_2 - (one + (-zeta).exp()).norm().ln()
        }
    }

    /// `arg(1 − conj(σ)·tanh(ζ/2)) = arg(2e^ζ/(1+e^ζ))` for `σ = −1`.
    pub fn arg_one_minus_alpha_conj_at(zeta: Cx) -> f64 {
        let one = Cx::new(1.0, 0.0);
        if zeta.re <= 0.0 {
            zeta.im - (one + zeta.exp()).arg()
        } else {
            -(one + (-zeta).exp()).arg()
        }
    }
}

/// Dynamical type of the semigroup the domain generates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SemigroupKind {
    Hyperbolic,
    Parabolic,
}

/// Petal bookkeeping: maximal strip, α-point, spectral data.
#[derive(Debug, Clone)]
pub struct PetalRecord {
    pub strip: StripSpec<f64>,
    /// α-point on the unit circle (σ = −1 under the fixed normalization).
    pub alpha_point: Cx,
    /// `λ = π/ν(S)`; the angular derivative at σ is `e^{λt}`.
    pub spectral_value: f64,
    /// Strip width `ν(S)`.
    pub width: f64,
}

/// Classification of the backward-orbit rate constant
/// `C(σ, z) = lim e^{−λt} |φ_t(z) − σ|`.
#[derive(Debug, Clone, PartialEq)]
pub enum RateClass {
    Finite(f64),
    Infinite,
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct RateConstant {
    pub class: RateClass,
    /// `(t, log(e^{−λt}|φ_t(z) − σ|))` over the extrapolation grid.
    pub samples: Vec<(f64, f64)>,
}

/// One backward-orbit sample with its stable distance to the α-point.
#[derive(Debug, Clone, Copy)]
pub struct OrbitSample {
    pub t: f64,
    pub z: Cx,
    pub log_dist_alpha: f64,
}

/// A semigroup presented by its Koenigs domain; the Koenigs map is present
/// exactly when the domain carries an explicit strip parametrization.
#[derive(Debug, Clone)]
pub struct SemigroupModel {
    pub domain: DomainModel<f64>,
    pub koenigs: Option<Koenigs>,
    pub kind: SemigroupKind,
}

impl SemigroupModel {
    pub fn from_domain(domain: DomainModel<f64>) -> Result<Self> {
        if matches!(domain, DomainModel::Disk) {
            return Err(Error::WrongType(
                "the disk is not a Koenigs domain of a non-elliptic semigroup",
            ));
        }
        let (lo, hi) = domain.im_bounds();
        let kind = if lo.is_finite() && hi.is_finite() {
            SemigroupKind::Hyperbolic
        } else {
            SemigroupKind::Parabolic
        };
        let koenigs = domain.chain_from_standard_strip().map(Koenigs::new);
        Ok(Self {
            domain,
            koenigs,
            kind,
        })
    }

    fn koenigs(&self) -> Result<&Koenigs> {
        self.koenigs
            .as_ref()
            .ok_or(Error::UnsupportedExact("model has no explicit Koenigs map"))
    }

    /// Strip coordinate of the orbit point `φ_t(z)`.
    pub fn orbit_strip_coord(&self, z: Cx, t: f64) -> Result<Cx> {
        let k = self.koenigs()?;
        let w = k.h(z);
        if t < 0.0 && !self.domain.horizontal_ray_admissible(w, t) {
            return Err(Error::BackwardInadmissible { t });
        }
        k.strip_coord(w + Cx::new(t, 0.0))
    }

    /// `φ_t(z) = h⁻¹(h(z) + t)`; negative `t` requires the segment
    /// `[h(z)+t, h(z)]` to stay inside the Koenigs domain.
    pub fn phi_t(&self, z: Cx, t: f64) -> Result<Cx> {
        Ok(Koenigs::disk_point(self.orbit_strip_coord(z, t)?))
    }

    /// `φ_t'(z) = h'(z)/h'(φ_t(z))`.
    pub fn phi_t_prime(&self, z: Cx, t: f64) -> Result<Cx> {
        let k = self.koenigs()?;
        let zeta_t = self.orbit_strip_coord(z, t)?;
        Ok(k.h_prime(z) / k.h_prime_at(zeta_t))
    }

    /// Infinitesimal generator `G = 1/h'`.
    pub fn generator(&self, z: Cx) -> Result<Cx> {
        Ok(self.koenigs()?.h_prime(z).inv())
    }

    /// Backward orbit `γ(t) = h⁻¹(h(z) + t)` sampled on a grid of `t ≤ 0`.
    pub fn backward_orbit(&self, z: Cx, t_grid: &[f64]) -> Result<Vec<OrbitSample>> {
        let k = self.koenigs()?;
        let w = k.h(z);
        if !self
            .domain
            .maximal_strip()
            .map(|s| s.contains(w))
            .unwrap_or(false)
        {
            return Err(Error::NoPetal);
        }
        t_grid
            .iter()
            .map(|&t| {
                let zeta = self.orbit_strip_coord(z, t)?;
                Ok(OrbitSample {
                    t,
                    z: Koenigs::disk_point(zeta),
                    log_dist_alpha: Koenigs::ln_dist_alpha_at(zeta),
                })
            })
            .collect()
    }

    /// The hyperbolic petal attached to the domain's maximal strip.
    pub fn petal_of(&self) -> Result<PetalRecord> {
        let strip = self.domain.maximal_strip().ok_or(Error::WrongType(
            "no maximal strip: parabolic petals are classified separately",
        ))?;
        let width = strip.width();
        Ok(PetalRecord {
            strip,
            alpha_point: Cx::new(-1.0, 0.0),
            spectral_value: core::f64::consts::PI / width,
            width,
        })
    }

    /// Ω-coordinate of the pre-model map:
    /// `ψ(w) = h⁻¹((ν/π)·log w + i(a+b)/2 + s)`, `w` in the right half-plane.
    pub fn pre_model_strip_arg(&self, petal: &PetalRecord, w: Cx, s: f64) -> Result<Cx> {
        if w.re <= 0.0 {
            return Err(Error::outside(w));
        }
        let nu_over_pi = petal.width / core::f64::consts::PI;
        Ok(w.ln() * nu_over_pi + Cx::new(s, petal.strip.midline()))
    }

    pub fn pre_model_psi(&self, petal: &PetalRecord, w: Cx, s: f64) -> Result<Cx> {
        let arg = self.pre_model_strip_arg(petal, w, s)?;
        self.koenigs()?.h_inv(arg)
    }

    /// `ψ⁻¹(z) = exp((h(z) − i(a+b)/2 − s)·π/ν)`.
    pub fn pre_model_psi_inverse(&self, petal: &PetalRecord, z: Cx, s: f64) -> Result<Cx> {
        let k = self.koenigs()?;
        let w = k.h(z);
        if !petal.strip.contains(w) {
            return Err(Error::NoPetal);
        }
        let pi_over_nu = core::f64::consts::PI / petal.width;
        Ok(((w - Cx::new(s, petal.strip.midline())) * pi_over_nu).exp())
    }

    /// `|ψ'(0)|` by angular differentiation along the positive reals,
    /// evaluated through strip coordinates.
    pub fn psi_prime_zero_abs(&self, petal: &PetalRecord, s: f64) -> Result<f64> {
        let k = self.koenigs()?;
        let sample = |x: f64| -> Result<f64> {
            let arg = self.pre_model_strip_arg(petal, Cx::new(x, 0.0), s)?;
            let zeta = k.strip_coord(arg)?;
            Ok(Koenigs::ln_dist_alpha_at(zeta) - x.ln())
        };
        // |ψ(x) − σ|/x at two scales with a Richardson-style correction.
        let a = sample(1e-6)?;
        let b = sample(1e-8)?;
        Ok((b + (b - a) * 0.01).exp())
    }

    /// Extrapolated rate constant `C(σ, z)` on the grid `t = −2^k, k = 0..8`.
    /// Finite when the last three log-samples are Cauchy at 1e−3, infinite
    /// when the samples keep growing beyond a factor 10³.
    pub fn rate_constant(&self, petal: &PetalRecord, z: Cx) -> Result<RateConstant> {
        let lambda = petal.spectral_value;
        let mut samples = Vec::with_capacity(9);
        for k in 0..=8 {
            let t = -((1u32 << k) as f64);
            let zeta = self.orbit_strip_coord(z, t)?;
            samples.push((t, -lambda * t + Koenigs::ln_dist_alpha_at(zeta)));
        }
        let n = samples.len();
        let d1 = (samples[n - 1].1 - samples[n - 2].1).abs();
        let d2 = (samples[n - 2].1 - samples[n - 3].1).abs();
        let class = if d1 < 1e-3 && d2 < 1e-3 {
            RateClass::Finite(samples[n - 1].1.exp())
        } else if samples[n - 1].1 - samples[0].1 > 3.0 * core::f64::consts::LN_10
            && samples[n - 1].1 > samples[n - 2].1
        {
            RateClass::Infinite
        } else {
            RateClass::Inconclusive
        };
        Ok(RateConstant { class, samples })
    }
}

/// Convenience constructors for the models exercised throughout the tests.
impl SemigroupModel {
    /// Koenigs domain = standard strip (`h = σ₀`).
    pub fn strip_model() -> Self {
        Self::from_domain(DomainModel::Strip(StripSpec::standard())).expect("valid domain")
    }

    /// Koenigs domain = standard two-slit plane (`h = g ∘ σ₀`).
    pub fn two_slit_model() -> Self {
        Self::from_domain(DomainModel::standard_two_slit()).expect("valid domain")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Cx {
        Cx::new(re, im)
    }

    #[test]
    fn abel_equation_round_trip() {
        let model = SemigroupModel::two_slit_model();
        let k = model.koenigs.as_ref().unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let z = c(
                0.9 * (rng.random::<f64>() - 0.5),
                0.9 * (rng.random::<f64>() - 0.5),
            );
            let t = 4.0 * rng.random::<f64>();
            let phi = model.phi_t(z, t).unwrap();
            let lhs = k.h(phi);
            let rhs = k.h(z) + c(t, 0.0);
            assert!((lhs - rhs).norm() < 1e-10, "Abel residual {}", (lhs - rhs).norm());
        }
    }

    #[test]
    fn identity_at_zero_and_semigroup_law() {
        let model = SemigroupModel::two_slit_model();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        for _ in 0..25 {
            let z = c(
                0.8 * (rng.random::<f64>() - 0.5),
                0.8 * (rng.random::<f64>() - 0.5),
            );
            assert!((model.phi_t(z, 0.0).unwrap() - z).norm() < 1e-12);
            let (s, t) = (2.0 * rng.random::<f64>(), 2.0 * rng.random::<f64>());
            let a = model.phi_t(model.phi_t(z, t).unwrap(), s).unwrap();
            let b = model.phi_t(z, s + t).unwrap();
            assert!((a - b).norm() < 1e-10, "semigroup law residual {}", (a - b).norm());
        }
    }

    #[test]
    fn backward_step_into_the_petal() {
        let model = SemigroupModel::two_slit_model();
        let k = model.koenigs.as_ref().unwrap();
        let z = k.h_inv(c(-1.0, 0.0)).unwrap();
        let back = model.phi_t(z, -5.0).unwrap();
        assert!((k.h(back) - c(-6.0, 0.0)).norm() < 1e-10);
        // A point on a slit height line cannot flow past the slit end.
        let z_line = k.h_inv(c(3.0, core::f64::consts::FRAC_PI_2)).unwrap();
        assert!(model.phi_t(z_line, -1.0).is_ok());
        assert!(matches!(
            model.phi_t(z_line, -4.0),
            Err(Error::BackwardInadmissible { .. })
        ));
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let model = SemigroupModel::two_slit_model();
        let h = 1e-7;
        for (z, t) in [
            (c(0.1, 0.2), 1.5),
            (c(-0.3, 0.1), 3.0),
            (c(0.2, -0.4), -2.0),
        ] {
            let d = model.phi_t_prime(z, t).unwrap();
            let fd = (model.phi_t(z + c(h, 0.0), t).unwrap() - model.phi_t(z - c(h, 0.0), t).unwrap())
                / c(2.0 * h, 0.0);
            assert!((d - fd).norm() < 1e-5 * d.norm().max(1.0), "at ({z}, {t})");
            assert!((model.phi_t_prime(z, 0.0).unwrap() - c(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn generator_on_strip_model() {
        // h = σ₀ has h'(0) = 2, so G(0) = 1/2.
        let model = SemigroupModel::strip_model();
        assert_relative_eq!(
            model.generator(c(0.0, 0.0)).unwrap().re,
            0.5,
            epsilon = 1e-14
        );
        // G does not vanish on petal samples.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let model = SemigroupModel::two_slit_model();
        for _ in 0..30 {
            let z = c(
                0.9 * (rng.random::<f64>() - 0.5),
                0.9 * (rng.random::<f64>() - 0.5),
            );
            assert!(model.generator(z).unwrap().norm() > 0.0);
        }
    }

    #[test]
    fn generator_ode_cross_check() {
        // Integrating dz/dt = G(z) over [0, 1] reproduces φ₁(z).
        let model = SemigroupModel::two_slit_model();
        let z0 = c(0.15, 0.25);
        // Classic fixed-step RK4 with Richardson halving until stable.
        let flow = |n: usize| {
            let mut z = z0;
            let h = 1.0 / n as f64;
            for _ in 0..n {
                let f = |p: Cx| model.generator(p).unwrap();
                let k1 = f(z);
                let k2 = f(z + k1 * (h / 2.0));
                let k3 = f(z + k2 * (h / 2.0));
                let k4 = f(z + k3 * h);
                z = z + (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0);
            }
            z
        };
        let coarse = flow(400);
        let fine = flow(800);
        assert!((fine - coarse).norm() < 1e-10);
        let target = model.phi_t(z0, 1.0).unwrap();
        assert!(
            (fine - target).norm() < 1e-8,
            "ODE flow vs Abel flow: {}",
            (fine - target).norm()
        );
    }

    #[test]
    fn petal_records() {
        let ts = SemigroupModel::two_slit_model();
        let p = ts.petal_of().unwrap();
        assert_relative_eq!(p.width, core::f64::consts::PI);
        assert_relative_eq!(p.spectral_value, 1.0);
        assert_relative_eq!(p.spectral_value * p.width, core::f64::consts::PI);

        let narrow = SemigroupModel::from_domain(DomainModel::Strip(
            StripSpec::new(0.0, core::f64::consts::FRAC_PI_2).unwrap(),
        ))
        .unwrap();
        assert_relative_eq!(narrow.petal_of().unwrap().spectral_value, 2.0);

        let widened = SemigroupModel::from_domain(DomainModel::widened_strip(0.4).unwrap()).unwrap();
        let rec = widened.petal_of().unwrap();
        assert_relative_eq!(
            rec.spectral_value,
            core::f64::consts::PI / (core::f64::consts::PI + 0.4)
        );

        let half = SemigroupModel::from_domain(DomainModel::HalfPlane { floor: 0.0 }).unwrap();
        assert_eq!(half.kind, SemigroupKind::Parabolic);
        assert!(half.petal_of().is_err());
    }

    #[test]
    fn backward_orbit_converges_to_alpha_point() {
        // Strip model: the orbit of h(z) = 0 is h⁻¹(−t) → −1.
        let model = SemigroupModel::strip_model();
        let k = model.koenigs.as_ref().unwrap();
        let z = k.h_inv(c(0.0, 0.0)).unwrap();
        let grid: Vec<f64> = (0..=40).map(|i| -(i as f64)).collect();
        let orbit = model.backward_orbit(z, &grid).unwrap();
        assert!((orbit[0].z - z).norm() < 1e-12);
        let last = orbit.last().unwrap();
        assert!((last.z - c(-1.0, 0.0)).norm() < 1e-15);
        assert!(last.log_dist_alpha < -35.0);
        // (1/t)·log|γ(t) − σ| → λ = 1 with the anticipated log C/t offset.
        let rate = last.log_dist_alpha / last.t;
        assert!((rate - (1.0 - 2.0f64.ln() / 40.0)).abs() < 1e-6, "rate {rate}");
        // The local slope converges exponentially fast.
        let last_idx = orbit.len() - 1;
        let slope = (orbit[last_idx].log_dist_alpha - orbit[last_idx - 1].log_dist_alpha)
            / (orbit[last_idx].t - orbit[last_idx - 1].t);
        assert!((slope - 1.0).abs() < 1e-12, "slope {slope}");
    }

    #[test]
    fn backward_orbit_rate_on_two_slit() {
        let model = SemigroupModel::two_slit_model();
        let k = model.koenigs.as_ref().unwrap();
        let z = k.h_inv(c(0.0, 0.3)).unwrap();
        let grid: Vec<f64> = (0..=40).map(|i| -(i as f64)).collect();
        let orbit = model.backward_orbit(z, &grid).unwrap();
        let last = orbit.last().unwrap();
        let rate = last.log_dist_alpha / last.t;
        assert!((rate - 1.0).abs() < 2e-2, "rate {rate}");
        let last_idx = orbit.len() - 1;
        let slope = (orbit[last_idx].log_dist_alpha - orbit[last_idx - 1].log_dist_alpha)
            / (orbit[last_idx].t - orbit[last_idx - 1].t);
        assert!((slope - 1.0).abs() < 1e-3, "slope {slope}");
        // Definite slope: arg(1 − conj(σ)γ(t)) is Cauchy over the last decade.
        let slope_at = |t: f64| {
            let zeta = model.orbit_strip_coord(z, t).unwrap();
            Koenigs::arg_one_minus_alpha_conj_at(zeta)
        };
        let s30 = slope_at(-30.0);
        let s40 = slope_at(-40.0);
        assert!((s30 - s40).abs() < 1e-4, "slope drift {}", (s30 - s40).abs());
        // Points outside every petal are rejected.
        let outside = k.h_inv(c(3.0, core::f64::consts::FRAC_PI_2)).unwrap();
        assert!(model.backward_orbit(outside, &grid).is_err());
    }

    #[test]
    fn pre_model_intertwines_the_flow() {
        let model = SemigroupModel::two_slit_model();
        let petal = model.petal_of().unwrap();
        let lambda = petal.spectral_value;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
        for s in [0.0, 1.3] {
            for _ in 0..20 {
                let w = c(2.0 * rng.random::<f64>() + 0.05, 3.0 * (rng.random::<f64>() - 0.5));
                let t = 3.0 * (rng.random::<f64>() - 0.5);
                let lhs = model
                    .pre_model_psi(&petal, w * (lambda * t).exp(), s)
                    .unwrap();
                let rhs = model
                    .phi_t(model.pre_model_psi(&petal, w, s).unwrap(), t)
                    .unwrap();
                assert!(
                    (lhs - rhs).norm() < 1e-9,
                    "intertwining residual {} at w={w}, t={t}",
                    (lhs - rhs).norm()
                );
            }
        }
        // ψ(1) with s = 0 is h⁻¹(i·midline).
        let k = model.koenigs.as_ref().unwrap();
        let psi1 = model.pre_model_psi(&petal, c(1.0, 0.0), 0.0).unwrap();
        let expect = k.h_inv(c(0.0, petal.strip.midline())).unwrap();
        assert!((psi1 - expect).norm() < 1e-12);
    }

    #[test]
    fn pre_model_isogonal_at_zero() {
        // arg((1 − conj(σ)ψ(x))/x) → 0 along the positive reals.
        let model = SemigroupModel::two_slit_model();
        let petal = model.petal_of().unwrap();
        let k = model.koenigs.as_ref().unwrap();
        let angle = |x: f64| {
            let arg = model.pre_model_strip_arg(&petal, c(x, 0.0), 0.0).unwrap();
            let zeta = k.strip_coord(arg).unwrap();
            Koenigs::arg_one_minus_alpha_conj_at(zeta) - 0.0
        };
        assert!(angle(1e-6).abs() < 1e-3);
        assert!(angle(1e-9).abs() < 1e-6);
    }

    #[test]
    fn rate_constant_two_slit_matches_pre_model() {
        let model = SemigroupModel::two_slit_model();
        let petal = model.petal_of().unwrap();
        let k = model.koenigs.as_ref().unwrap();
        for w0 in [c(0.0, 0.0), c(-1.0, 0.7), c(1.0, -0.5)] {
            let z = k.h_inv(w0).unwrap();
            let rate = model.rate_constant(&petal, z).unwrap();
            let c_direct = match rate.class {
                RateClass::Finite(v) => v,
                ref other => panic!("expected finite rate, got {other:?}"),
            };
            for s in [0.0, 0.8] {
                let dual = model.pre_model_psi_inverse(&petal, z, s).unwrap().norm()
                    * model.psi_prime_zero_abs(&petal, s).unwrap();
                assert!(
                    (c_direct - dual).abs() <= 0.01 * dual,
                    "C = {c_direct} vs |ψ⁻¹(z)|·|ψ'(0)| = {dual} (s = {s})"
                );
            }
        }
    }

    #[test]
    fn rate_constant_strip_model_closed_form() {
        // For h = σ₀: C(σ, z) = 2 e^{Re h(z)}.
        let model = SemigroupModel::strip_model();
        let petal = model.petal_of().unwrap();
        let k = model.koenigs.as_ref().unwrap();
        for w0 in [c(0.0, 0.2), c(1.0, -0.8)] {
            let z = k.h_inv(w0).unwrap();
            match model.rate_constant(&petal, z).unwrap().class {
                RateClass::Finite(v) => {
                    assert_relative_eq!(v, 2.0 * w0.re.exp(), max_relative = 1e-6)
                }
                other => panic!("expected finite, got {other:?}"),
            }
        }
    }

    #[test]
    fn phi_prime_scales_with_spectral_rate() {
        // |φ'_t(z)| ≍ e^{λt} along a backward orbit (equivalently, the
        // derivative of the t-parametrized backward map decays like e^{−λt}).
        let model = SemigroupModel::two_slit_model();
        let k = model.koenigs.as_ref().unwrap();
        let z = k.h_inv(c(0.0, 0.0)).unwrap();
        for t in [-10.0, -20.0, -30.0] {
            let d = model.phi_t_prime(z, t).unwrap().norm();
            let ratio = d * (-t).exp(); // λ = 1
            assert!(ratio > 0.05 && ratio < 20.0, "ratio {ratio} at t={t}");
        }
    }
}
