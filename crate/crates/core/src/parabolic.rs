//! Conformality of parabolic petals at the Denjoy–Wolff point.
//!
//! For a parabolic petal with Denjoy–Wolff point `τ` the petal is conformal
//! at `τ` iff the angular limit `L = ∠lim_{z→τ} (z−τ)h(z)` is finite; if the
//! semigroup has positive hyperbolic step (equivalently, the Koenigs domain
//! fits inside a horizontal half-plane) the petal is always conformal. When
//! `L` is finite it is purely imaginary relative to `τ`: `Re(conj(τ)·L) = 0`.
//!
//! Angular limits are probed radially (`z = τ(1 − 10^{−k})`), which Lindelöf's
//! theorem justifies for these maps; a Richardson step assuming a half-power
//! error term sharpens the square-root boundary behaviour of the worked
//! examples.

use num_complex::Complex;
use serde::Serialize;

use crate::domain::DomainModel;
use crate::error::{Error, Result};
use crate::maps::{Map, MapChain};
use crate::semigroup::Koenigs;

type Cx = Complex<f64>;

/// Hyperbolic-step class of a parabolic semigroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepClass {
    Zero,
    Positive,
}

/// Outcome of the radial extrapolation of `(z−τ)h(z)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum LLimit {
    Finite([f64; 2]),
    Infinite,
    Inconclusive,
}

/// Classification of a parabolic petal.
#[derive(Debug, Clone, Serialize)]
pub struct ParabolicReport {
    pub step_class: StepClass,
    pub l_estimate: LLimit,
    /// `None` when the evidence is inconclusive.
    pub conformal: Option<bool>,
    /// `|Re(conj(τ)·L)|` when `L` is finite.
    pub consistency: Option<f64>,
}

/// Positive step iff the Koenigs domain is contained in a horizontal
/// half-plane; strip-type domains are rejected as non-parabolic.
pub fn hyperbolic_step_class(domain: &DomainModel<f64>) -> Result<StepClass> {
    let (lo, hi) = domain.im_bounds();
    if matches!(domain, DomainModel::Disk) {
        return Err(Error::WrongType("elliptic domains have no step class"));
    }
    if lo.is_finite() && hi.is_finite() {
        return Err(Error::WrongType(
            "domain fits in a strip: hyperbolic, not parabolic",
        ));
    }
    if lo.is_finite() || hi.is_finite() {
        Ok(StepClass::Positive)
    } else {
        Ok(StepClass::Zero)
    }
}

/// Radial extrapolation of `L = ∠lim_{z→τ} (z−τ)h(z)` on the grid
/// `z = τ(1 − 10^{−k})`, `k ∈ k_grid`. Finite when the Richardson-corrected
/// values are Cauchy at relative 1e−2 over the last three grid points;
/// infinite when the magnitudes grow monotonically beyond 10³.
pub fn l_limit(h: &dyn Fn(Cx) -> Cx, tau: Cx, k_grid: &[i32]) -> LLimit {
    assert!(k_grid.len() >= 3, "need at least three radial probes");
    let raw: Vec<Cx> = k_grid
        .iter()
        .map(|&k| {
            let z = tau * (1.0 - 10f64.powi(-k));
            (z - tau) * h(z)
        })
        .collect();
    let n = raw.len();
    let mags: Vec<f64> = raw.iter().map(|v| v.norm()).collect();
    let growing = mags.windows(2).all(|w| w[1] > w[0]);
    if growing && mags[n - 1] > 1e3 {
        return LLimit::Infinite;
    }
    // Richardson step assuming value(k) = L + C·10^{−k/2}: consecutive grid
    // points shrink the error term by 10^{−1/2}.
    let q = 10f64.powf(-0.5);
    let corrected: Vec<Cx> = raw
        .windows(2)
        .map(|w| w[1] + (w[1] - w[0]) * (q / (1.0 - q)))
        .collect();
    let m = corrected.len();
    let scale = corrected[m - 1].norm().max(1e-12);
    let c1 = (corrected[m - 1] - corrected[m - 2]).norm() / scale;
    let c2 = (corrected[m - 2] - corrected[m - 3]).norm() / scale;
    if c1 < 1e-2 && c2 < 1e-2 {
        let l = corrected[m - 1];
        LLimit::Finite([l.re, l.im])
    } else {
        LLimit::Inconclusive
    }
}

/// Default radial grid `k = 2..7` (down to `1 − |z| = 10^{−7}`).
pub fn default_radial_grid() -> Vec<i32> {
    (2..=7).collect()
}

/// The three worked parabolic models.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParabolicExample {
    /// Koenigs domain `{Im w > 0}`; positive hyperbolic step.
    HalfPlane,
    /// Koebe function `h(z) = z/(1−z)²`, domain `C ∖ (−∞, −1/4]`.
    Koebe,
    /// `h(z) = w − i√w`, `w = i(1+z)/(1−z)`, with the square-root branch
    /// mapping the upper half-plane onto the first quadrant.
    SqrtExample,
}

impl ParabolicExample {
    pub fn domain(&self) -> DomainModel<f64> {
        match self {
            ParabolicExample::HalfPlane => DomainModel::HalfPlane { floor: 0.0 },
            ParabolicExample::Koebe => DomainModel::koebe_image(),
            ParabolicExample::SqrtExample => DomainModel::sqrt_image(),
        }
    }

    /// The Koenigs map of the example, evaluable near `τ = 1`.
    pub fn koenigs_map(&self) -> Box<dyn Fn(Cx) -> Cx + Send + Sync> {
        match self {
            ParabolicExample::HalfPlane => Box::new(|z: Cx| {
                Map::Cayley.eval(z)
            }),
            ParabolicExample::Koebe => {
                let chain = MapChain::new(vec![Map::<f64>::KoebeExp]);
                Box::new(move |z: Cx| chain.eval(Koenigs::sigma0(z)))
            }
            ParabolicExample::SqrtExample => {
                let chain = MapChain::new(vec![Map::<f64>::SqrtShift]);
                Box::new(move |z: Cx| chain.eval(Koenigs::sigma0(z)))
            }
        }
    }

    pub fn tau(&self) -> Cx {
        Cx::new(1.0, 0.0)
    }
}

/// Classifies the parabolic petal of a model: positive step forces
/// conformality (the L-limit is still evaluated as a cross-check when the
/// Koenigs map is available); at zero step conformality is equivalent to a
/// finite L.
pub fn classify_parabolic_petal(
    domain: &DomainModel<f64>,
    h: Option<&dyn Fn(Cx) -> Cx>,
    tau: Cx,
) -> Result<ParabolicReport> {
    let step = hyperbolic_step_class(domain)?;
    let l = match h {
        Some(h) => l_limit(h, tau, &default_radial_grid()),
        None => LLimit::Inconclusive,
    };
    let consistency = match &l {
        LLimit::Finite([re, im]) => Some((tau.conj() * Cx::new(*re, *im)).re.abs()),
        _ => None,
    };
    let conformal = match (step, &l) {
        (StepClass::Positive, _) => Some(true),
        (StepClass::Zero, LLimit::Finite(_)) => Some(true),
        (StepClass::Zero, LLimit::Infinite) => Some(false),
        (StepClass::Zero, LLimit::Inconclusive) => None,
    };
    Ok(ParabolicReport {
        step_class: step,
        l_estimate: l,
        conformal,
        consistency,
    })
}

/// Classifies one of the worked examples.
pub fn classify_example(example: ParabolicExample) -> Result<ParabolicReport> {
    let domain = example.domain();
    let h = example.koenigs_map();
    classify_parabolic_petal(&domain, Some(&*h), example.tau())
}

/// Validity condition of the worked examples: `Re[(1−z)² h'(z)] > 0` on the
/// disk, which makes `h` univalent and `h⁻¹∘(h+t)` a semigroup.
pub fn generator_positivity(h_chain: &MapChain<f64>, samples: usize, seed: u64) -> bool {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let r = rng.random::<f64>().sqrt() * 0.999;
        let theta = rng.random::<f64>() * core::f64::consts::TAU;
        let z = Cx::new(r * theta.cos(), r * theta.sin());
        let zeta = Koenigs::sigma0(z);
        let h_prime = h_chain.deriv(zeta) * 2.0 / (Cx::new(1.0, 0.0) - z * z);
        let one_minus = Cx::new(1.0, 0.0) - z;
        if (one_minus * one_minus * h_prime).re <= 0.0 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::{SemigroupKind, SemigroupModel};

    fn c(re: f64, im: f64) -> Cx {
        Cx::new(re, im)
    }

    #[test]
    fn step_classes_of_the_examples() {
        assert_eq!(
            hyperbolic_step_class(&DomainModel::HalfPlane { floor: 0.0 }).unwrap(),
            StepClass::Positive
        );
        assert_eq!(
            hyperbolic_step_class(&DomainModel::koebe_image()).unwrap(),
            StepClass::Zero
        );
        assert_eq!(
            hyperbolic_step_class(&DomainModel::sqrt_image()).unwrap(),
            StepClass::Zero
        );
        // Strip-type domains are the wrong type.
        assert!(hyperbolic_step_class(&DomainModel::Strip(
            crate::geom::StripSpec::standard()
        ))
        .is_err());
        // The two-slit plane (a zero-step parabolic domain) classifies too.
        assert_eq!(
            hyperbolic_step_class(&DomainModel::standard_two_slit()).unwrap(),
            StepClass::Zero
        );
    }

    #[test]
    fn koebe_l_limit_is_infinite() {
        // (z−1)·z/(1−z)² = −z/(1−z) blows up radially.
        let ex = ParabolicExample::Koebe;
        let h = ex.koenigs_map();
        assert_eq!(l_limit(&*h, ex.tau(), &default_radial_grid()), LLimit::Infinite);
    }

    #[test]
    fn sqrt_example_l_limit_is_minus_two_i() {
        let ex = ParabolicExample::SqrtExample;
        let h = ex.koenigs_map();
        match l_limit(&*h, ex.tau(), &default_radial_grid()) {
            LLimit::Finite([re, im]) => {
                assert!(
                    (re - 0.0).abs() < 1e-2 && (im + 2.0).abs() < 1e-2,
                    "L = {re} + {im}i"
                );
            }
            other => panic!("expected finite L, got {other:?}"),
        }
    }

    #[test]
    fn half_plane_affine_ray() {
        // h(z) = i(1+z)/(1−z): (z−1)h(z) = −i(1+z) → −2i.
        let ex = ParabolicExample::HalfPlane;
        let h = ex.koenigs_map();
        // The error term here is first-power in 1−|z|, so the half-power
        // Richardson overcorrects by O(10⁻⁷); still far inside tolerance.
        match l_limit(&*h, ex.tau(), &default_radial_grid()) {
            LLimit::Finite([re, im]) => {
                assert!((re).abs() < 1e-6 && (im + 2.0).abs() < 1e-6);
            }
            other => panic!("expected finite L, got {other:?}"),
        }
    }

    #[test]
    fn classification_of_the_three_examples() {
        let half = classify_example(ParabolicExample::HalfPlane).unwrap();
        assert_eq!(half.step_class, StepClass::Positive);
        assert_eq!(half.conformal, Some(true));

        let koebe = classify_example(ParabolicExample::Koebe).unwrap();
        assert_eq!(koebe.step_class, StepClass::Zero);
        assert_eq!(koebe.l_estimate, LLimit::Infinite);
        assert_eq!(koebe.conformal, Some(false));

        let sqrt = classify_example(ParabolicExample::SqrtExample).unwrap();
        assert_eq!(sqrt.step_class, StepClass::Zero);
        assert_eq!(sqrt.conformal, Some(true));
        let residual = sqrt.consistency.expect("finite L has a residual");
        assert!(residual < 1e-2, "Re(conj(τ)L) = {residual}");
    }

    #[test]
    fn example_generators_are_admissible() {
        // Re[(1−z)² h'(z)] > 0 sampled over the disk for both examples.
        for chain in [
            MapChain::new(vec![Map::<f64>::KoebeExp]),
            MapChain::new(vec![Map::<f64>::SqrtShift]),
        ] {
            assert!(generator_positivity(&chain, 10_000, 99));
        }
    }

    #[test]
    fn parabolic_models_have_parabolic_kind() {
        for d in [
            DomainModel::koebe_image(),
            DomainModel::sqrt_image(),
            DomainModel::HalfPlane { floor: 0.0 },
        ] {
            assert_eq!(
                SemigroupModel::from_domain(d).unwrap().kind,
                SemigroupKind::Parabolic
            );
        }
    }

    #[test]
    fn koebe_map_membership_of_images() {
        // h₁(D) really lands in C ∖ (−∞, −1/4].
        let dom = DomainModel::<f64>::koebe_image();
        let h = ParabolicExample::Koebe.koenigs_map();
        let mut rng_state = 1u64;
        let mut next = || {
            rng_state = rng_state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (rng_state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..2000 {
            let r = next().sqrt() * 0.98;
            let th = next() * core::f64::consts::TAU;
            let z = c(r * th.cos(), r * th.sin());
            assert!(dom.contains(h(z)), "h₁({z}) escaped");
        }
    }
}
