//! Adaptive quadrature and improper integrals over `(−∞, b]`.
//!
//! Finite panels use adaptive 15-point Gauss–Kronrod bisection. Improper
//! integrals are truncated to `[b − T, b]` with `T` doubling from a
//! configurable start until
//!
//! * the last doubling changes the value by less than `tol/2` **and** an
//!   empirical tail bound (integrand at the cutoff divided by its measured
//!   local decay rate, with a safety factor) is below `tol/2` — classified
//!   `Finite`; or
//! * the partial integrals keep growing by a non-contracting increment while
//!   the integrand is pointwise non-negative — classified `Divergent`, with
//!   the two offending partial integrals recorded as a witness; or
//! * the cutoff budget is exhausted — classified `Inconclusive`.
//!
//! A variant accepts noisy (Monte Carlo) integrand values with a standard
//! error per node; noise is propagated through the quadrature weights and an
//! estimate whose noise exceeds the tolerance is never classified `Finite`.

use serde::Serialize;

use crate::real::Real;

/// Convergence verdict of an improper integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Finite,
    Divergent,
    Inconclusive,
}

/// Value and diagnosis of an improper integral.
#[derive(Debug, Clone, Serialize)]
pub struct QuadratureResult<T> {
    /// Best available value (partial integral for non-finite classifications).
    pub value: T,
    /// Quadrature error plus tail bound; for noisy integrands also the
    /// propagated Monte Carlo standard error.
    pub error_estimate: T,
    pub classification: Classification,
    /// Left truncation actually used: the integral was computed on
    /// `[b − cutoff_used, b]`.
    pub cutoff_used: T,
    /// For `Divergent`: partial integrals at the last two cutoffs.
    pub divergence_witness: Option<(T, T)>,
    /// Propagated standard error of the Monte Carlo noise, when present.
    pub mc_sigma: Option<T>,
}

impl<T: Real> QuadratureResult<T> {
    pub fn exact_zero() -> Self {
        Self {
            value: T::zero(),
            error_estimate: T::zero(),
            classification: Classification::Finite,
            cutoff_used: T::zero(),
            divergence_witness: None,
            mc_sigma: None,
        }
    }
}

// 15-point Kronrod abscissae/weights with the embedded 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// One Gauss–Kronrod panel: returns (kronrod value, error estimate).
pub fn gk15<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> (T, T) {
    let center = (a + b) * T::half();
    let half = (b - a) * T::half();
    let mut kronrod = T::zero();
    let mut gauss = T::zero();
    let fc = f(center);
    kronrod += T::of(WGK[7]) * fc;
    gauss += T::of(WG[3]) * fc;
    for j in 0..7 {
        let dx = half * T::of(XGK[j]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += T::of(WGK[j]) * (f1 + f2);
        if j % 2 == 1 {
            gauss += T::of(WG[j / 2]) * (f1 + f2);
        }
    }
    kronrod = kronrod * half;
    gauss = gauss * half;
    (kronrod, (kronrod - gauss).abs())
}

/// Adaptive bisection with GK15 panels. Returns (value, error estimate).
pub fn adaptive<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T, tol: T) -> (T, T) {
    struct Item<T> {
        a: T,
        b: T,
        value: T,
        err: T,
    }
    let (v0, e0) = gk15(f, a, b);
    let mut stack = vec![Item {
        a,
        b,
        value: v0,
        err: e0,
    }];
    let mut value = T::zero();
    let mut error = T::zero();
    let mut splits = 0usize;
    while let Some(item) = stack.pop() {
        let local_tol = tol * ((item.b - item.a) / (b - a)).abs();
        if item.err <= local_tol.max(T::epsilon() * T::of(4.0) * item.value.abs()) || splits > 2000 {
            value += item.value;
            error += item.err;
            continue;
        }
        splits += 1;
        let mid = (item.a + item.b) * T::half();
        let (vl, el) = gk15(f, item.a, mid);
        let (vr, er) = gk15(f, mid, item.b);
        stack.push(Item {
            a: item.a,
            b: mid,
            value: vl,
            err: el,
        });
        stack.push(Item {
            a: mid,
            b: item.b,
            value: vr,
            err: er,
        });
    }
    (value, error)
}

/// Policy knobs for the improper engine.
#[derive(Debug, Clone)]
pub struct ImproperPolicy<T> {
    pub tol: T,
    /// Initial truncation length `T₀`.
    pub cutoff_start: T,
    /// Give up (classify `Inconclusive`) beyond this truncation length.
    pub max_cutoff: T,
    /// Declared by the caller when the integrand is pointwise non-negative;
    /// required for a `Divergent` classification.
    pub nonnegative: bool,
}

impl<T: Real> Default for ImproperPolicy<T> {
    fn default() -> Self {
        Self {
            tol: T::of(1e-6),
            cutoff_start: T::of(16.0),
            max_cutoff: T::of((1u32 << 22) as f64),
            nonnegative: true,
        }
    }
}

/// Improper integral of `f` over `(−∞, b]` under the doubling policy.
pub fn integrate_left_tail<T: Real, F: FnMut(T) -> T>(
    f: &mut F,
    b: T,
    policy: &ImproperPolicy<T>,
) -> QuadratureResult<T> {
    let tol = policy.tol;
    let piece_budget = tol * T::of(0.02);
    let mut cutoff = policy.cutoff_start;
    let (mut total, mut quad_err) = adaptive(f, b - cutoff, b, piece_budget);
    let mut prev_increment: Option<T> = None;
    let mut prev_total;
    let mut grew_last_round = false;

    loop {
        let next = cutoff * T::two();
        let (piece, piece_err) = adaptive(f, b - next, b - cutoff, piece_budget);
        let increment = piece;
        prev_total = total;
        total += piece;
        quad_err += piece_err;
        cutoff = next;

        // Tail bound from the measured local decay rate at the cutoff.
        let f_far = f(b - cutoff);
        let f_mid = f(b - cutoff * T::half());
        let tail = tail_bound(f_far, f_mid, cutoff * T::half());

        let delta = increment.abs();
        if delta < tol * T::of(0.4) && tail < tol * T::of(0.4) && quad_err < tol * T::of(0.2) {
            return QuadratureResult {
                value: total,
                error_estimate: quad_err + delta + tail,
                classification: Classification::Finite,
                cutoff_used: cutoff,
                divergence_witness: None,
                mc_sigma: None,
            };
        }

        // Divergence: non-negative integrand whose partial integrals keep
        // growing by a non-contracting increment.
        if policy.nonnegative {
            let big = increment > tol.max(T::of(0.05) * total.abs());
            let non_contracting = prev_increment
                .map(|p| increment >= T::of(0.8) * p)
                .unwrap_or(false);
            if big && non_contracting && grew_last_round {
                return QuadratureResult {
                    value: total,
                    error_estimate: T::infinity(),
                    classification: Classification::Divergent,
                    cutoff_used: cutoff,
                    divergence_witness: Some((prev_total, total)),
                    mc_sigma: None,
                };
            }
            grew_last_round = big;
        }
        prev_increment = Some(increment);

        if cutoff >= policy.max_cutoff {
            return QuadratureResult {
                value: total,
                error_estimate: quad_err + tail,
                classification: Classification::Inconclusive,
                cutoff_used: cutoff,
                divergence_witness: None,
                mc_sigma: None,
            };
        }
    }
}

fn tail_bound<T: Real>(f_far: T, f_mid: T, gap: T) -> T {
    let far = f_far.abs();
    let mid = f_mid.abs();
    if far == T::zero() {
        return T::zero();
    }
    if far >= mid {
        // Not decaying toward −∞ at the sampled points: no usable bound.
        return T::infinity();
    }
    // f(b−T−s) ≲ f(b−T)·e^{−rs} with r estimated over the last half-interval;
    // the tail is then ≤ f(b−T)/r, doubled for safety. For power-law decay
    // c|t|^{−p} the estimate reproduces the exact tail up to the safety factor.
    let rate = (mid / far).ln() / gap;
    far / rate * T::two()
}

/// Improper integral with noisy nodes: `f(t)` returns `(value, std_error)`.
///
/// Fixed (non-adaptive) GK15 panels of width `panel`; refinement driven by
/// random noise would be unsound. Partial integrals at each doubling are
/// recorded so callers can report stabilizing/growing behaviour. The result is
/// classified `Finite` only if the propagated noise is below the tolerance,
/// which Monte Carlo nodes in practice never reach: callers treat the
/// classification together with [`QuadratureResult::mc_sigma`].
pub struct NoisyTail<T> {
    pub result: QuadratureResult<T>,
    /// `(cutoff, partial integral, propagated sigma)` per doubling step.
    pub partials: Vec<(T, T, T)>,
}

pub fn integrate_left_tail_noisy<T: Real, F: FnMut(T) -> (T, T)>(
    f: &mut F,
    b: T,
    panel: T,
    max_cutoff: T,
    policy: &ImproperPolicy<T>,
) -> NoisyTail<T> {
    let mut partials = Vec::new();
    let mut total = T::zero();
    let mut var = T::zero();
    let mut covered = T::zero();
    let mut cutoff = policy.cutoff_start;
    loop {
        while covered < cutoff {
            let hi = b - covered;
            let lo = hi - panel.min(cutoff - covered);
            let (v, s2) = gk15_noisy(f, lo, hi);
            total += v;
            var += s2;
            covered += hi - lo;
        }
        partials.push((cutoff, total, var.sqrt()));
        if cutoff >= max_cutoff {
            break;
        }
        cutoff = (cutoff * T::two()).min(max_cutoff);
    }
    let sigma = var.sqrt();
    let n = partials.len();
    let (classification, witness) = if n >= 3 {
        let d1 = partials[n - 2].1 - partials[n - 3].1;
        let d2 = partials[n - 1].1 - partials[n - 2].1;
        let noise = T::of(3.0) * sigma;
        if policy.nonnegative && d2 > noise && d2 >= T::of(0.8) * d1 - noise {
            (
                Classification::Divergent,
                Some((partials[n - 2].1, partials[n - 1].1)),
            )
        } else if sigma <= policy.tol && d2.abs() < policy.tol {
            (Classification::Finite, None)
        } else {
            (Classification::Inconclusive, None)
        }
    } else {
        (Classification::Inconclusive, None)
    };
    NoisyTail {
        result: QuadratureResult {
            value: total,
            error_estimate: sigma,
            classification,
            cutoff_used: cutoff,
            divergence_witness: witness,
            mc_sigma: Some(sigma),
        },
        partials,
    }
}

fn gk15_noisy<T: Real, F: FnMut(T) -> (T, T)>(f: &mut F, a: T, b: T) -> (T, T) {
    let center = (a + b) * T::half();
    let half = (b - a) * T::half();
    let mut value = T::zero();
    let mut var = T::zero();
    let (fc, sc) = f(center);
    value += T::of(WGK[7]) * fc;
    var += (T::of(WGK[7]) * sc) * (T::of(WGK[7]) * sc);
    for j in 0..7 {
        let dx = half * T::of(XGK[j]);
        let w = T::of(WGK[j]);
        for x in [center - dx, center + dx] {
            let (v, s) = f(x);
            value += w * v;
            var += (w * s) * (w * s);
        }
    }
    (value * half, var * half * half)
}

/// Integral over the whole real line, decaying both ways.
pub fn integrate_real_line<T: Real, F: FnMut(T) -> T>(f: &mut F, policy: &ImproperPolicy<T>) -> QuadratureResult<T> {
    let right = integrate_left_tail(&mut |t: T| f(-t), T::zero(), policy);
    let left = integrate_left_tail(f, T::zero(), policy);
    let classification = match (left.classification, right.classification) {
        (Classification::Finite, Classification::Finite) => Classification::Finite,
        (Classification::Divergent, _) | (_, Classification::Divergent) => Classification::Divergent,
        _ => Classification::Inconclusive,
    };
    QuadratureResult {
        value: left.value + right.value,
        error_estimate: left.error_estimate + right.error_estimate,
        classification,
        cutoff_used: left.cutoff_used.max(right.cutoff_used),
        divergence_witness: left.divergence_witness.or(right.divergence_witness),
        mc_sigma: None,
    }
}

/// Integral over `[from, +∞)` by reflection onto the left-tail engine.
pub fn integrate_right_tail<T: Real, F: FnMut(T) -> T>(
    f: &mut F,
    from: T,
    policy: &ImproperPolicy<T>,
) -> QuadratureResult<T> {
    integrate_left_tail(&mut |t: T| f(-t), -from, policy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn adaptive_matches_closed_forms() {
        let (v, e) = adaptive(&mut |x: f64| x.sin(), 0.0, core::f64::consts::PI, 1e-12);
        assert_relative_eq!(v, 2.0, epsilon = 1e-12);
        assert!(e < 1e-9);
        let (v, _) = adaptive(&mut |x: f64| (-x * x).exp(), -8.0, 8.0, 1e-12);
        assert_relative_eq!(v, core::f64::consts::PI.sqrt(), epsilon = 1e-11);
    }

    #[test]
    fn exponential_tail_is_finite() {
        let policy = ImproperPolicy::<f64>::default();
        let r = integrate_left_tail(&mut |t: f64| t.exp(), 0.0, &policy);
        assert_eq!(r.classification, Classification::Finite);
        assert_relative_eq!(r.value, 1.0, epsilon = 1e-6);
        assert!(r.error_estimate <= 1e-6);
    }

    #[test]
    fn quadratic_tail_is_finite() {
        // ∫_{−∞}^{−1} t^{−2} dt = 1, integrand extended by the constant 1 on (−1, 0].
        let policy = ImproperPolicy::<f64> {
            tol: 1e-6,
            ..Default::default()
        };
        let r = integrate_left_tail(
            &mut |t: f64| if t <= -1.0 { t.powi(-2) } else { 1.0 },
            0.0,
            &policy,
        );
        assert_eq!(r.classification, Classification::Finite);
        assert_relative_eq!(r.value, 2.0, epsilon = 2e-6);
    }

    #[test]
    fn harmonic_tail_is_divergent_with_witness() {
        let policy = ImproperPolicy::<f64>::default();
        let r = integrate_left_tail(
            &mut |t: f64| if t <= -1.0 { -t.recip() } else { 1.0 },
            0.0,
            &policy,
        );
        assert_eq!(r.classification, Classification::Divergent);
        let (p1, p2) = r.divergence_witness.expect("witness");
        assert!(p2 > p1);
    }

    #[test]
    fn real_line_sech() {
        // ∫ 1/cosh x dx = π.
        let policy = ImproperPolicy::<f64> {
            tol: 1e-10,
            ..Default::default()
        };
        let r = integrate_real_line(&mut |x: f64| x.cosh().recip(), &policy);
        assert_eq!(r.classification, Classification::Finite);
        assert_relative_eq!(r.value, core::f64::consts::PI, epsilon = 1e-9);
    }

    #[test]
    fn noisy_engine_flags_growth() {
        // Deterministic "noisy" integrand with tiny sigma: 1/|t| tail.
        let mut f = |t: f64| ((-t).max(1.0).recip(), 1e-9);
        let policy = ImproperPolicy::<f64> {
            cutoff_start: 32.0,
            ..Default::default()
        };
        let out = integrate_left_tail_noisy(&mut f, 0.0, 4.0, 128.0, &policy);
        assert_eq!(out.result.classification, Classification::Divergent);
        assert_eq!(out.partials.len(), 3);
    }
}
