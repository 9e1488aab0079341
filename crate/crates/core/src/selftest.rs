//! The acceptance battery: eleven self-contained checks that replay the
//! library's defining identities at desk scale. Each item prints one
//! pass/fail line with its measured values; the suite passes only if every
//! item does. Exposed both to `cargo test` (the `acceptance` integration
//! suite) and to the CLI `selftest` command.

use num_complex::Complex;

use crate::config::RunConfig;
use crate::criteria;
use crate::domain::{DomainModel, ProfileDomain};
use crate::geom::StripSpec;
use crate::metric::strip_density_literal;
use crate::parabolic::{self, LLimit, ParabolicExample, StepClass};
use crate::potential::{
    conf_radius, green_strip, harmonic_measure_strip_upper, strong_markov_log_ratio,
};
use crate::profile::{max_gap_integral, BoundaryProfile};
use crate::quad::{integrate_real_line, Classification, ImproperPolicy};
use crate::semigroup::{RateClass, SemigroupModel};
use crate::wos::{wos_log_conf_radius, WosParams};

type Cx = Complex<f64>;
const PI: f64 = core::f64::consts::PI;

/// Outcome of one acceptance item.
#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub index: usize,
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "[{:>2}] {} {} — {}",
            self.index,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.details
        )
    }
}

macro_rules! check {
    ($ok:expr, $details:expr, $msgs:expr) => {
        if !$ok {
            $msgs.push(format!("FAILED: {}", $details));
        } else {
            $msgs.push($details);
        }
    };
}

fn item<F: FnOnce(&mut Vec<String>) -> bool>(
    index: usize,
    name: &'static str,
    body: F,
) -> CriterionReport {
    let mut msgs = Vec::new();
    let passed = body(&mut msgs);
    CriterionReport {
        index,
        name,
        passed,
        details: msgs.join("; "),
    }
}

fn item_1_strip_kernels(_cfg: &RunConfig) -> CriterionReport {
    item(1, "strip kernel identities", |msgs| {
        let std = StripSpec::standard();
        let mut max_err = 0.0f64;
        for k in 0..50 {
            let y = -1.5 + 3.0 * k as f64 / 49.0;
            let lit = strip_density_literal(Cx::new(0.0, y), &std).unwrap();
            max_err = max_err.max((lit - y.cos().recip()).abs());
        }
        let ok_density = max_err < 1e-12;
        check!(ok_density, format!("pushforward λ_S(iy) vs 1/cos y: max |err| = {max_err:.2e}"), msgs);

        let r0 = conf_radius(&DomainModel::Strip(std), Cx::new(0.0, 0.0)).unwrap();
        let ok_radius = (r0 - 2.0).abs() < 1e-14;
        check!(ok_radius, format!("R(0, S) = {r0}"), msgs);

        let delta = 1e-4;
        let mut ok_deriv = true;
        let mut worst = 0.0f64;
        for y in [-1.0, 0.0, 1.0] {
            let widened = DomainModel::<f64>::widened_strip(delta).unwrap();
            let ratio = (conf_radius(&widened, Cx::new(0.0, y)).unwrap()
                / conf_radius(&DomainModel::Strip(std), Cx::new(0.0, y)).unwrap())
            .ln()
                / delta;
            let limit = 1.0 / PI + (PI + 2.0 * y) * y.tan() / (2.0 * PI);
            worst = worst.max((ratio - limit).abs());
            ok_deriv &= (ratio - limit).abs() < 1e-3;
        }
        check!(ok_deriv, format!("δ-derivative of log R(iy, S_δ) vs 1/π + (π+2y)·tan y/(2π): max |err| = {worst:.2e}"), msgs);
        ok_density && ok_radius && ok_deriv
    })
}

fn item_2_harmonic_mass(_cfg: &RunConfig) -> CriterionReport {
    item(2, "harmonic-measure mass", |msgs| {
        let policy = ImproperPolicy::<f64> {
            tol: 1e-10,
            ..Default::default()
        };
        let mut ok = true;
        let mut worst = 0.0f64;
        for y in [-1.0, 0.0, 1.0] {
            let mass = integrate_real_line(
                &mut |x: f64| harmonic_measure_strip_upper(y, x).unwrap(),
                &policy,
            );
            let expect = 0.5 + y / PI;
            worst = worst.max((mass.value - expect).abs());
            ok &= (mass.value - expect).abs() < 1e-8;
        }
        check!(ok, format!("∫ ω_S(iy, dx) over the upper line vs 1/2 + y/π: max |err| = {worst:.2e}"), msgs);
        ok
    })
}

fn item_3_green_bounds(cfg: &RunConfig) -> CriterionReport {
    item(3, "Green's-function bounds", |msgs| {
        use rand::{Rng, SeedableRng};
        let std = StripSpec::standard();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x6ee);
        let mut ok_lemma = true;
        let mut tested = 0usize;
        while tested < 1000 {
            let beta = 0.98 * PI * (rng.random::<f64>() - 0.5);
            let alpha0 = 0.5 * (PI / 2.0 - beta) * rng.random::<f64>().max(0.02);
            let alpha = alpha0 * (0.98 * rng.random::<f64>()).max(0.01);
            let x = 10.0 * (rng.random::<f64>() - 0.5);
            if alpha0 <= 1e-6 || alpha <= 1e-8 {
                continue;
            }
            tested += 1;
            let h0 = green_strip(Cx::new(0.0, beta), Cx::new(0.0, PI / 2.0 - alpha), &std).unwrap();
            let hx = green_strip(Cx::new(0.0, beta), Cx::new(x, PI / 2.0 - alpha), &std).unwrap();
            let lower = h0 * (1.0 - alpha0.cos()) / (x.cosh() - alpha0.cos());
            ok_lemma &= hx <= h0 + 1e-13 && hx >= lower - 1e-13;
        }
        check!(ok_lemma, "two-sided strip Green's bound at 1000 samples".to_string(), msgs);

        // Two-slit bound with exact pushforward Green's values.
        let slit = DomainModel::<f64>::standard_two_slit();
        let chain = slit.chain_from_standard_strip().unwrap();
        let mut ok_slit = true;
        let mut min_slack = f64::INFINITY;
        for k in 0..200 {
            let u = -4.0 * ((k % 20) as f64 + 0.3) / 20.0 - 0.05;
            let v = 0.96 * PI * (((k / 20) as f64 + 0.5) / 10.0 - 0.5);
            let w = Cx::new(u, v);
            let x = 6.0 * ((k % 17) as f64 + 0.4) / 17.0 + 0.02;
            let sgn = if k % 2 == 0 { 1.0 } else { -1.0 };
            let s = Cx::new(x, sgn * PI / 2.0);
            let g = green_strip(chain.invert(w).unwrap(), chain.invert(s).unwrap(), &std).unwrap();
            let cap = ((1.0 + u.exp()) / (1.0 - u.exp())).ln();
            min_slack = min_slack.min(cap - g);
            ok_slit &= cap - g >= -1e-12;
        }
        check!(ok_slit, format!("two-slit Green's bound at 200 pairs, min slack = {min_slack:.3e}"), msgs);
        ok_lemma && ok_slit
    })
}

fn item_4_strong_markov(_cfg: &RunConfig) -> CriterionReport {
    item(4, "strong-Markov identity", |msgs| {
        let inner = DomainModel::Strip(StripSpec::<f64>::standard());
        let mut ok = true;
        let mut worst = 0.0f64;
        for delta in [0.1, 0.3] {
            for y in [0.0, 1.0, -1.0] {
                let outer = DomainModel::<f64>::widened_strip(delta).unwrap();
                let w = Cx::new(0.0, y);
                let got = strong_markov_log_ratio(&inner, &outer, w, 1e-8).unwrap();
                let exact =
                    (conf_radius(&outer, w).unwrap() / conf_radius(&inner, w).unwrap()).ln();
                worst = worst.max((got - exact).abs());
                ok &= (got - exact).abs() < 1e-6;
            }
        }
        check!(ok, format!("∫ G_Sδ ω_S vs exact log-ratio, max |err| = {worst:.2e}"), msgs);
        ok
    })
}

fn item_5_phi_delta(cfg: &RunConfig) -> CriterionReport {
    item(5, "Φ_δ → 1/2", |msgs| {
        let walks = cfg.mc_walks.max(1_000);
        let (phi, denom) = criteria::phi_delta(0.0, 0.05, walks, cfg.seed ^ 0x901).unwrap();
        let ok = (phi.mean - 0.5).abs() < 0.1 && !phi.is_inconclusive();
        check!(
            ok,
            format!(
                "Φ_0.05(0) = {:.4} ± {:.4} ({} walks; denominator {:.6})",
                phi.mean, phi.std_error, walks, denom
            ),
            msgs
        );
        ok
    })
}

fn item_6_equivalence(cfg: &RunConfig) -> CriterionReport {
    item(6, "density/euclidean equivalence at desk scale", |msgs| {
        let std = StripSpec::standard();
        let tail_conv = BoundaryProfile::power_tail(1.0, 2.0, -1.0).unwrap();
        let tail_div = BoundaryProfile::power_tail(1.0, 1.0, -1.0).unwrap();

        // Tail contribution of the convergent profile is exactly 1.
        let tail_part = max_gap_integral(&tail_conv, &BoundaryProfile::<f64>::zero(), -1.0);
        let ok_tail = matches!(tail_part.classification, Classification::Finite)
            && (tail_part.value - 1.0).abs() < 1e-13;
        check!(ok_tail, format!("∫_(−∞,−1] |t|⁻² dt = {}", tail_part.value), msgs);

        let conv = DomainModel::Profile(ProfileDomain::new(
            std,
            tail_conv.clone(),
            BoundaryProfile::zero(),
        ));
        let div = DomainModel::Profile(ProfileDomain::new(
            std,
            tail_div.clone(),
            BoundaryProfile::zero(),
        ));
        let report_cfg = RunConfig {
            mc_walks: cfg.mc_walks.min(25_000),
            ..cfg.clone()
        };
        let rc = crate::report::assemble_report(&conv, None, &report_cfg).unwrap();
        let rd = crate::report::assemble_report(&div, None, &report_cfg).unwrap();
        let ok_verdicts = rc.verdict == crate::report::Verdict::Conformal
            && rd.verdict == crate::report::Verdict::NonConformal;
        check!(
            ok_verdicts,
            format!("verdicts: p=2 → {:?}, p=1 → {:?}", rc.verdict, rd.verdict),
            msgs
        );

        // Monte Carlo strip-side partials at cutoffs 32, 64, 128.
        let walks = (cfg.mc_walks / 32).clamp(1_000, 4_000);
        let partials = |dom: &DomainModel<f64>| {
            criteria::hyperbolic_integral_strip_side_mc(
                dom,
                &std,
                Cx::new(0.0, 0.0),
                walks,
                cfg.seed ^ 0x66,
                cfg.tolerance,
                32.0,
                128.0,
                8.0,
            )
            .unwrap()
            .partials
        };
        let pc = partials(&conv);
        let pd = partials(&div);
        let inc = |p: &Vec<(f64, f64, f64)>, k: usize| p[k].1 - p[k - 1].1;
        let sig = |p: &Vec<(f64, f64, f64)>, k: usize| {
            (p[k].2 * p[k].2 - p[k - 1].2 * p[k - 1].2).abs().sqrt()
        };
        // Divergent tail: the last increment is significantly positive and
        // non-contracting; convergent tail: statistically indistinguishable
        // from stabilization.
        let d_inc2 = inc(&pd, 2);
        let d_sig2 = sig(&pd, 2);
        let ok_div = d_inc2 > 3.0 * d_sig2 && d_inc2 > 0.6 * inc(&pd, 1);
        let c_inc2 = inc(&pc, 2);
        let c_sig2 = sig(&pc, 2);
        let ok_conv = c_inc2.abs() < 3.0 * c_sig2 + 0.5 * inc(&pc, 1).abs();
        check!(
            ok_div,
            format!("p=1 partials grow: ΔI = {:.4} ± {:.4}", d_inc2, d_sig2),
            msgs
        );
        check!(
            ok_conv,
            format!("p=2 partials stabilize: ΔI = {:.5} ± {:.5}", c_inc2, c_sig2),
            msgs
        );
        ok_tail && ok_verdicts && ok_div && ok_conv
    })
}

fn item_7_identity_chain(_cfg: &RunConfig) -> CriterionReport {
    item(7, "coordinate-identity chain and monotone convergence", |msgs| {
        let model = SemigroupModel::two_slit_model();
        let k = model.koenigs.as_ref().unwrap();
        let w0 = Cx::new(0.0, 0.0);
        let z0 = k.h_inv(w0).unwrap();
        let mut worst = 0.0f64;
        for i in 0..20 {
            let t = -30.0 * (i as f64 + 0.5) / 20.0;
            let (a, b) = criteria::disk_side_integrand(&model, z0, t).unwrap();
            worst = worst.max((a - b).abs());
        }
        let ok_chain = worst < 1e-8;
        check!(ok_chain, format!("disk-side vs strip-side integrand: max |diff| = {worst:.2e}"), msgs);

        // Monotone convergence: λ_Ω(w₀+t) non-decreasing as t decreases,
        // approaching λ_S(w₀) = 1.
        let dom = &model.domain;
        let lam_s = 1.0;
        let lambda_at = |t: f64| 2.0 / conf_radius(dom, w0 + Cx::new(t, 0.0)).unwrap();
        let mut ok_monotone = true;
        let mut prev = lambda_at(0.0);
        for i in 1..=60 {
            let t = -(i as f64) * 0.5;
            let lam = lambda_at(t);
            ok_monotone &= lam >= prev - 1e-14;
            prev = lam;
        }
        let gap_at_30 = (lambda_at(-30.0) - lam_s).abs();
        let ok_limit = gap_at_30 < 1e-6;
        check!(ok_monotone, "λ_Ω(w₀+t) non-decreasing as t decreases".to_string(), msgs);
        check!(ok_limit, format!("|λ_Ω(w₀−30) − λ_S(w₀)| = {gap_at_30:.2e}"), msgs);
        ok_chain && ok_monotone && ok_limit
    })
}

fn item_8_rate_constant(cfg: &RunConfig) -> CriterionReport {
    item(8, "rate constant and rate integrals", |msgs| {
        let model = SemigroupModel::two_slit_model();
        let petal = model.petal_of().unwrap();
        let k = model.koenigs.as_ref().unwrap();
        let mut ok_rate = true;
        let mut worst_rel = 0.0f64;
        for w in [Cx::new(0.0, 0.0), Cx::new(-1.0, 0.7), Cx::new(1.0, -0.5)] {
            let z = k.h_inv(w).unwrap();
            let c_direct = match model.rate_constant(&petal, z).unwrap().class {
                RateClass::Finite(v) => v,
                other => {
                    msgs.push(format!("FAILED: rate at {w} classified {other:?}"));
                    ok_rate = false;
                    continue;
                }
            };
            let dual = model.pre_model_psi_inverse(&petal, z, 0.0).unwrap().norm()
                * model.psi_prime_zero_abs(&petal, 0.0).unwrap();
            let rel = (c_direct - dual).abs() / dual;
            worst_rel = worst_rel.max(rel);
            ok_rate &= rel <= 0.01;
        }
        check!(ok_rate, format!("C(σ,z) vs |ψ⁻¹(z)ψ'(0)| at 3 petal points: max rel err = {worst_rel:.2e}"), msgs);

        let z0 = k.h_inv(Cx::new(0.0, 0.3)).unwrap();
        let (i_res, j_res) =
            criteria::ij_integrals(&model, z0, cfg.tolerance, cfg.cutoff_start).unwrap();
        let ok_ij = i_res.classification == Classification::Finite
            && j_res.classification == Classification::Finite;
        check!(
            ok_ij,
            format!(
                "I = {:.6} ({:?}), J = {:.6} ({:?})",
                i_res.value, i_res.classification, j_res.value, j_res.classification
            ),
            msgs
        );
        ok_rate && ok_ij
    })
}

fn item_9_parabolic(_cfg: &RunConfig) -> CriterionReport {
    item(9, "parabolic worked examples", |msgs| {
        let koebe = parabolic::classify_example(ParabolicExample::Koebe).unwrap();
        let ok_koebe =
            koebe.step_class == StepClass::Zero && koebe.l_estimate == LLimit::Infinite;
        check!(ok_koebe, format!("Koebe: step {:?}, L {:?}", koebe.step_class, koebe.l_estimate), msgs);

        let sqrt = parabolic::classify_example(ParabolicExample::SqrtExample).unwrap();
        let (ok_sqrt, detail) = match sqrt.l_estimate {
            LLimit::Finite([re, im]) => {
                let err = (re.powi(2) + (im + 2.0).powi(2)).sqrt();
                let residual = sqrt.consistency.unwrap_or(f64::NAN);
                (
                    sqrt.step_class == StepClass::Zero && err < 1e-2 && residual < 1e-2,
                    format!("h₂: L = {re:.4} + {im:.4}i (err {err:.1e}), Re(conj(τ)L) = {residual:.1e}"),
                )
            }
            ref other => (false, format!("h₂: L classified {other:?}")),
        };
        check!(ok_sqrt, detail, msgs);

        let half = parabolic::classify_example(ParabolicExample::HalfPlane).unwrap();
        let ok_half = half.step_class == StepClass::Positive && half.conformal == Some(true);
        check!(ok_half, format!("half-plane: step {:?}", half.step_class), msgs);
        ok_koebe && ok_sqrt && ok_half
    })
}

fn item_10_wos(cfg: &RunConfig) -> CriterionReport {
    item(10, "walk-on-spheres calibration", |msgs| {
        let walks = cfg.mc_walks.max(1_000);
        let strip = DomainModel::Strip(StripSpec::<f64>::standard());
        let origin = Cx::new(0.0, 0.0);
        let est = wos_log_conf_radius(&strip, origin, &WosParams::new(walks, cfg.seed)).unwrap();
        let ok_log2 = (est.mean - 2.0f64.ln()).abs() < 3.0 * est.std_error;
        check!(
            ok_log2,
            format!(
                "log R(0, S) = {:.5} ± {:.5} vs log 2 = {:.5}",
                est.mean,
                est.std_error,
                2.0f64.ln()
            ),
            msgs
        );

        let delta = 0.5;
        let half = DomainModel::<f64>::half_widened_strip(delta).unwrap();
        let widened = DomainModel::<f64>::widened_strip(delta).unwrap();
        let est_half =
            wos_log_conf_radius(&half, origin, &WosParams::new(walks, cfg.seed ^ 0xa)).unwrap();
        let lo = conf_radius(&strip, origin).unwrap().ln();
        let hi = conf_radius(&widened, origin).unwrap().ln();
        let ok_bracket = lo < est_half.mean && est_half.mean < hi;
        check!(
            ok_bracket,
            format!(
                "bracketing: {:.5} < {:.5} (MC) < {:.5}",
                lo, est_half.mean, hi
            ),
            msgs
        );
        ok_log2 && ok_bracket
    })
}

fn item_11_sandwich(cfg: &RunConfig) -> CriterionReport {
    item(11, "sandwich bounds on the half-widened strip", |msgs| {
        let std = StripSpec::standard();
        let dom = DomainModel::<f64>::half_widened_strip(0.2).unwrap();
        let walks = (cfg.mc_walks / 10).clamp(2_000, 20_000);
        let y = 0.0;

        // Lower chain: log R(t+iy, Ω)/R(t+iy, S) ≥ log R(iy, S*_{δ₂(t)})/R(iy, S),
        // which on this domain (δ₂ ≡ 0 for t ≤ 0) reduces to nonnegative
        // slack of the Monte Carlo log-ratio at each probe.
        let mut ok_lower = true;
        let mut lower_details = Vec::new();
        for (i, &t) in [-3.0, -6.0, -10.0].iter().enumerate() {
            let est = crate::wos::wos_log_ratio(
                &dom,
                &DomainModel::Strip(std),
                Cx::new(t, y),
                &WosParams::new(walks, cfg.seed ^ (0x40 + i as u64)),
            )
            .unwrap();
            let holds = est.mean >= -3.0 * est.std_error;
            ok_lower &= holds;
            lower_details.push(format!("t={t}: {:.2e} ± {:.1e}", est.mean, est.std_error));
        }
        check!(ok_lower, format!("lower chain probes: {}", lower_details.join(", ")), msgs);

        // Monotonicity along rays (the shifted-family inequality
        // R(t+iy, Ω) ≥ R(iy, S*_{δ₂(t)}) at probes inside the widened part).
        let mut ok_shift = true;
        let mut shift_details = Vec::new();
        for (i, &t) in [2.0, 5.0].iter().enumerate() {
            let at_t = wos_log_conf_radius(
                &dom,
                Cx::new(t, y),
                &WosParams::new(walks, cfg.seed ^ (0x80 + i as u64)),
            )
            .unwrap();
            let at_0 = wos_log_conf_radius(
                &dom,
                Cx::new(0.0, y),
                &WosParams::new(walks, cfg.seed ^ (0x90 + i as u64)),
            )
            .unwrap();
            let sigma = (at_t.std_error.powi(2) + at_0.std_error.powi(2)).sqrt();
            let holds = at_t.mean - at_0.mean >= -3.0 * sigma;
            ok_shift &= holds;
            shift_details.push(format!(
                "t={t}: Δ = {:.2e} ± {:.1e}",
                at_t.mean - at_0.mean,
                sigma
            ));
        }
        check!(ok_shift, format!("shifted-family probes: {}", shift_details.join(", ")), msgs);

        // Upper chain with exact two-slit and strip radii on the right.
        let t_set: Vec<f64> = vec![-0.5, -1.0, -1.5, -3.0, -6.0, -10.0];
        let chk = criteria::upper_bound_check(
            &dom,
            &std,
            y,
            &t_set,
            Some((walks, cfg.seed ^ 0xabc)),
        )
        .unwrap();
        let ok_upper = chk.all_hold;
        check!(
            ok_upper,
            format!(
                "upper chain at {} probes, min slack = {:.3e}",
                chk.probes.len(),
                chk.min_slack
            ),
            msgs
        );
        ok_lower && ok_shift && ok_upper
    })
}

/// Runs one acceptance item by its 1-based index.
pub fn run_item(index: usize, cfg: &RunConfig) -> Option<CriterionReport> {
    match index {
        1 => Some(item_1_strip_kernels(cfg)),
        2 => Some(item_2_harmonic_mass(cfg)),
        3 => Some(item_3_green_bounds(cfg)),
        4 => Some(item_4_strong_markov(cfg)),
        5 => Some(item_5_phi_delta(cfg)),
        6 => Some(item_6_equivalence(cfg)),
        7 => Some(item_7_identity_chain(cfg)),
        8 => Some(item_8_rate_constant(cfg)),
        9 => Some(item_9_parabolic(cfg)),
        10 => Some(item_10_wos(cfg)),
        11 => Some(item_11_sandwich(cfg)),
        _ => None,
    }
}

/// Runs the full acceptance battery.
pub fn run_all(cfg: &RunConfig) -> Vec<CriterionReport> {
    (1..=11).map(|i| run_item(i, cfg).unwrap()).collect()
}
