//! Aggregated conformality reports.
//!
//! The verdict policy privileges exact evidence: `conformal` requires at
//! least one exact criterion (euclidean gap integral, or an exact
//! hyperbolic-density integral) to classify finite, `non_conformal` requires
//! an exact divergence witness, and Monte Carlo evidence alone yields
//! `undecided` with advisory notes. Individual criterion failures degrade the
//! report, they never abort it.

use num_complex::Complex;
use serde::Serialize;

use crate::config::RunConfig;
use crate::criteria;
use crate::domain::DomainModel;
use crate::error::{Error, Result};
use crate::parabolic::{self, LLimit, ParabolicReport, StepClass};
use crate::quad::Classification;
use crate::semigroup::{RateClass, SemigroupModel};

type Cx = Complex<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Conformal,
    NonConformal,
    Undecided,
}

/// One row of the report: a criterion, its classification, and its numbers.
/// Non-finite values (±∞) are reported as `null`.
#[derive(Debug, Clone, Serialize)]
pub struct CriterionEntry {
    pub name: String,
    pub classification: String,
    pub value: Option<f64>,
    pub error: Option<f64>,
}

impl CriterionEntry {
    fn from_quadrature(name: &str, q: &crate::quad::QuadratureResult<f64>) -> Self {
        let cls = match q.classification {
            Classification::Finite => "finite",
            Classification::Divergent => "divergent",
            Classification::Inconclusive => "inconclusive",
        };
        Self {
            name: name.to_string(),
            classification: cls.to_string(),
            value: q.value.is_finite().then_some(q.value),
            error: q.error_estimate.is_finite().then_some(q.error_estimate),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConformalityReport {
    pub verdict: Verdict,
    pub criteria: Vec<CriterionEntry>,
    /// Base point `w₀ ∈ S` of the integrals (`[Re, Im]`); the Denjoy–Wolff
    /// point for parabolic reports.
    pub base_point: [f64; 2],
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parabolic: Option<ParabolicReport>,
}

/// Runs every applicable criterion on the domain and folds the evidence into
/// a verdict. `w0` defaults to the midline point `i(a+b)/2` of the maximal
/// strip.
pub fn assemble_report(
    domain: &DomainModel<f64>,
    w0: Option<Cx>,
    config: &RunConfig,
) -> Result<ConformalityReport> {
    config.validate()?;
    match domain.maximal_strip() {
        Some(_) => hyperbolic_report(domain, w0, config),
        None => parabolic_report(domain, config),
    }
}

fn parabolic_koenigs_map(domain: &DomainModel<f64>) -> Option<Box<dyn Fn(Cx) -> Cx + Send + Sync>> {
    match domain {
        DomainModel::HalfPlane { floor } => {
            let floor = *floor;
            Some(Box::new(move |z: Cx| {
                crate::maps::Map::Cayley.eval(z) + Cx::new(0.0, floor)
            }))
        }
        DomainModel::Mapped(m) => {
            let chain = m.chain.clone();
            Some(Box::new(move |z: Cx| {
                chain.eval(crate::semigroup::Koenigs::sigma0(z))
            }))
        }
        _ => None,
    }
}

fn parabolic_report(domain: &DomainModel<f64>, _config: &RunConfig) -> Result<ConformalityReport> {
    let tau = Cx::new(1.0, 0.0);
    let h = parabolic_koenigs_map(domain);
    let report = parabolic::classify_parabolic_petal(
        domain,
        h.as_ref().map(|f| &**f as &dyn Fn(Cx) -> Cx),
        tau,
    )?;
    let mut criteria_rows = vec![CriterionEntry {
        name: "parabolic_step_class".into(),
        classification: match report.step_class {
            StepClass::Positive => "positive".into(),
            StepClass::Zero => "zero".into(),
        },
        value: None,
        error: None,
    }];
    let (l_cls, l_val) = match &report.l_estimate {
        LLimit::Finite([re, im]) => ("finite", Some((re * re + im * im).sqrt())),
        LLimit::Infinite => ("infinite", None),
        LLimit::Inconclusive => ("inconclusive", None),
    };
    criteria_rows.push(CriterionEntry {
        name: "parabolic_l_limit".into(),
        classification: l_cls.into(),
        value: l_val,
        error: report.consistency,
    });
    let mut notes = vec!["parabolic petal: classified via the boundary limit of the Koenigs map".into()];
    if let LLimit::Finite([re, im]) = report.l_estimate {
        notes.push(format!("L = {re:.6} + {im:.6}i; |Re(conj(tau)*L)| = {:.3e}", report.consistency.unwrap_or(f64::NAN)));
    }
    let verdict = match report.conformal {
        Some(true) => Verdict::Conformal,
        Some(false) => Verdict::NonConformal,
        None => Verdict::Undecided,
    };
    criteria_rows.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(ConformalityReport {
        verdict,
        criteria: criteria_rows,
        base_point: [tau.re, tau.im],
        notes,
        parabolic: Some(report),
    })
}

fn hyperbolic_report(
    domain: &DomainModel<f64>,
    w0: Option<Cx>,
    config: &RunConfig,
) -> Result<ConformalityReport> {
    let strip = domain.maximal_strip().expect("hyperbolic branch");
    let w0 = w0.unwrap_or(Cx::new(0.0, strip.midline()));
    if !strip.contains(w0) {
        return Err(Error::outside(w0));
    }
    let mut rows: Vec<CriterionEntry> = Vec::new();
    let mut notes: Vec<String> = Vec::new();
    let mut exact_finite = false;
    let mut exact_divergent = false;

    // Euclidean gap integral — exact whenever the gap function is known.
    let euclid_cls = match domain.euclidean_gap_integral() {
        Ok(q) => {
            match q.classification {
                Classification::Finite => exact_finite = true,
                Classification::Divergent => {
                    exact_divergent = true;
                    if let Some((p1, p2)) = q.divergence_witness {
                        notes.push(format!(
                            "euclidean gap integral diverges: partial integrals {p1:.6} -> {p2:.6}"
                        ));
                    }
                }
                Classification::Inconclusive => {}
            }
            notes.push("euclidean_gap_integral: exact (closed form per segment)".into());
            let cls = q.classification;
            rows.push(CriterionEntry::from_quadrature("euclidean_gap_integral", &q));
            Some(cls)
        }
        Err(Error::UnsupportedExact(why)) => {
            notes.push(format!("euclidean_gap_integral unavailable: {why}"));
            None
        }
        Err(e) => return Err(e),
    };

    // Hyperbolic-density integral, strip side.
    if domain.chain_from_standard_strip().is_some() {
        match criteria::hyperbolic_integral_strip_side(
            domain,
            &strip,
            w0,
            config.tolerance,
            config.cutoff_start,
        ) {
            Ok(q) => {
                match q.classification {
                    Classification::Finite => exact_finite = true,
                    Classification::Divergent => exact_divergent = true,
                    Classification::Inconclusive => {}
                }
                notes.push("hyperbolic_integral_strip_side: exact (explicit conformal map)".into());
                rows.push(CriterionEntry::from_quadrature(
                    "hyperbolic_integral_strip_side",
                    &q,
                ));
            }
            Err(e) => notes.push(format!("hyperbolic_integral_strip_side failed: {e}")),
        }
    } else if domain.supports_wos() {
        let walks = (config.mc_walks / 25).clamp(1_000, 8_000);
        match criteria::hyperbolic_integral_strip_side_mc(
            domain,
            &strip,
            w0,
            walks,
            config.seed,
            config.tolerance,
            32.0,
            128.0,
            16.0,
        ) {
            Ok(mc) => {
                let sigma = mc.result.mc_sigma.unwrap_or(f64::NAN);
                notes.push(format!(
                    "hyperbolic_integral_strip_side: Monte Carlo ({walks} walks/node, sigma = {sigma:.2e}); partial integrals {}",
                    mc.partials
                        .iter()
                        .map(|(c, v, s)| format!("[T={c}: {v:.5} ± {s:.1e}]"))
                        .collect::<Vec<_>>()
                        .join(" ")
                ));
                rows.push(CriterionEntry::from_quadrature(
                    "hyperbolic_integral_strip_side",
                    &mc.result,
                ));
            }
            Err(e) => notes.push(format!("hyperbolic_integral_strip_side (MC) failed: {e}")),
        }
    }

    // Orbit-side криteria need the Koenigs map.
    let model = SemigroupModel::from_domain(domain.clone())?;
    if model.koenigs.is_some() {
        let k = model.koenigs.as_ref().unwrap();
        let z0 = k.h_inv(w0)?;
        match criteria::hyperbolic_integral_disk_side(&model, z0, config.tolerance, config.cutoff_start)
        {
            Ok(q) => {
                match q.classification {
                    Classification::Finite => exact_finite = true,
                    Classification::Divergent => exact_divergent = true,
                    Classification::Inconclusive => {}
                }
                notes.push(
                    "hyperbolic_integral_disk_side: exact; orbit route and pushforward route agree pointwise"
                        .into(),
                );
                rows.push(CriterionEntry::from_quadrature(
                    "hyperbolic_integral_disk_side",
                    &q,
                ));
            }
            Err(e) => notes.push(format!("hyperbolic_integral_disk_side failed: {e}")),
        }

        match criteria::ij_integrals(&model, z0, config.tolerance, config.cutoff_start) {
            Ok((i_res, j_res)) => {
                rows.push(CriterionEntry::from_quadrature("integral_i", &i_res));
                rows.push(CriterionEntry::from_quadrature("integral_j", &j_res));
            }
            Err(e) => notes.push(format!("rate integrals failed: {e}")),
        }

        if let Ok(petal) = model.petal_of() {
            match model.rate_constant(&petal, z0) {
                Ok(rc) => {
                    let (cls, value) = match rc.class {
                        RateClass::Finite(v) => ("finite", Some(v)),
                        RateClass::Infinite => ("infinite", None),
                        RateClass::Inconclusive => ("inconclusive", None),
                    };
                    rows.push(CriterionEntry {
                        name: "rate_constant".into(),
                        classification: cls.into(),
                        value,
                        error: None,
                    });
                }
                Err(e) => notes.push(format!("rate_constant failed: {e}")),
            }
        }

        match criteria::nu_and_log_limit(&model, Cx::new(-1.0, 0.0), &[3, 4, 5, 6, 7]) {
            Ok((nu, class)) => {
                let cls = match class {
                    LLimit::Finite(_) => "finite",
                    LLimit::Infinite => "infinite",
                    LLimit::Inconclusive => "inconclusive",
                };
                rows.push(CriterionEntry {
                    name: "koenigs_log_limit".into(),
                    classification: cls.into(),
                    value: Some(nu),
                    error: None,
                });
                notes.push(format!("nu = {:.8} (strip width / pi = {:.8})", nu, strip.width() / core::f64::consts::PI));
            }
            Err(e) => notes.push(format!("koenigs_log_limit failed: {e}")),
        }

        match criteria::hyperbolic_length_gap(&model, z0, &[5.0, 10.0, 20.0, 40.0]) {
            Ok(gaps) => {
                let n = gaps.len();
                let d_last = gaps[n - 1] - gaps[n - 2];
                let cls = if d_last.abs() < 1e-4 * gaps[n - 1].abs().max(1.0) {
                    "finite"
                } else if d_last > config.tolerance {
                    "divergent"
                } else {
                    "inconclusive"
                };
                rows.push(CriterionEntry {
                    name: "hyperbolic_length_gap".into(),
                    classification: cls.into(),
                    value: Some(gaps[n - 1]),
                    error: Some(d_last.abs()),
                });
            }
            Err(e) => notes.push(format!("hyperbolic_length_gap failed: {e}")),
        }

        match criteria::bk_comparator(&model, w0.im, &[(-21.0, -20.0), (-41.0, -40.0)]) {
            Ok(gaps) => notes.push(format!(
                "distance comparator gaps d_S - d_Omega: {:.3e} (t ~ -20), {:.3e} (t ~ -40); one-sided: vanishing gaps imply the density condition at this height",
                gaps[0], gaps[1]
            )),
            Err(e) => notes.push(format!("distance comparator unavailable: {e}")),
        }
    } else if let Some(cls) = euclid_cls {
        // Profile domains: the rate-constant classification follows from the
        // exact euclidean criterion through the main equivalence.
        let mapped = match cls {
            Classification::Finite => Some("finite"),
            Classification::Divergent => Some("infinite"),
            Classification::Inconclusive => None,
        };
        if let Some(cls_str) = mapped {
            rows.push(CriterionEntry {
                name: "rate_constant".into(),
                classification: cls_str.into(),
                value: None,
                error: None,
            });
            notes.push(
                "rate_constant: derived from the exact euclidean criterion via the main equivalence (no explicit Koenigs map)"
                    .into(),
            );
        }
    }

    // Sandwich bounds where the gap function is known.
    if matches!(
        domain,
        DomainModel::Profile(_) | DomainModel::TwoSlit { .. }
    ) && strip.is_standard()
    {
        let mc = domain
            .chain_from_standard_strip()
            .is_none()
            .then_some(((config.mc_walks / 25).clamp(1_000, 8_000), config.seed ^ 0xb0ff));
        let t_set: Vec<f64> = (1..=6).map(|k| -3.0 * k as f64 - 0.5).collect();
        match criteria::lower_bound_check(domain, &strip, &[w0.im], &t_set, mc) {
            Ok(chk) => {
                rows.push(CriterionEntry {
                    name: "lower_bound".into(),
                    classification: if chk.all_hold { "holds".into() } else { "fails".into() },
                    value: Some(chk.min_slack),
                    error: None,
                });
                if let Some(c) = chk.measured_c {
                    notes.push(format!("lower bound: measured c = {c:.4}"));
                }
            }
            Err(e) => notes.push(format!("lower_bound unavailable: {e}")),
        }
        match criteria::upper_bound_check(domain, &strip, w0.im, &t_set, mc) {
            Ok(chk) => {
                rows.push(CriterionEntry {
                    name: "upper_bound".into(),
                    classification: if chk.all_hold { "holds".into() } else { "fails".into() },
                    value: Some(chk.min_slack),
                    error: None,
                });
            }
            Err(e) => notes.push(format!("upper_bound unavailable: {e}")),
        }
    }

    // Exact criteria agree or the report refuses to decide.
    let verdict = match (exact_finite, exact_divergent) {
        (true, false) => Verdict::Conformal,
        (false, true) => Verdict::NonConformal,
        (true, true) => {
            notes.push("exact criteria disagree; refusing a verdict".into());
            Verdict::Undecided
        }
        (false, false) => {
            notes.push("no exact criterion completed; Monte Carlo evidence alone is advisory".into());
            Verdict::Undecided
        }
    };
    rows.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(ConformalityReport {
        verdict,
        criteria: rows,
        base_point: [w0.re, w0.im],
        notes,
        parabolic: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::ProfileDomain;
    use crate::geom::StripSpec;
    use crate::profile::BoundaryProfile;

    fn config() -> RunConfig {
        RunConfig {
            mc_walks: 2_000,
            ..Default::default()
        }
    }

    #[test]
    fn strip_domain_is_conformal() {
        let report = assemble_report(
            &DomainModel::Strip(StripSpec::standard()),
            None,
            &config(),
        )
        .unwrap();
        assert_eq!(report.verdict, Verdict::Conformal);
        let euclid = report
            .criteria
            .iter()
            .find(|c| c.name == "euclidean_gap_integral")
            .unwrap();
        assert_eq!(euclid.classification, "finite");
        assert_eq!(euclid.value, Some(0.0));
    }

    #[test]
    fn two_slit_domain_is_conformal() {
        let report =
            assemble_report(&DomainModel::standard_two_slit(), None, &config()).unwrap();
        assert_eq!(report.verdict, Verdict::Conformal);
        // Criteria are sorted by name.
        let names: Vec<&str> = report.criteria.iter().map(|c| c.name.as_str()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
        // rate constant is finite on a conformal petal.
        let rate = report.criteria.iter().find(|c| c.name == "rate_constant").unwrap();
        assert_eq!(rate.classification, "finite");
    }

    #[test]
    fn profile_tails_decide_both_ways() {
        let std = StripSpec::standard();
        let conv = DomainModel::Profile(ProfileDomain::new(
            std,
            BoundaryProfile::power_tail(1.0, 2.0, -1.0).unwrap(),
            BoundaryProfile::zero(),
        ));
        let report = assemble_report(&conv, None, &config()).unwrap();
        assert_eq!(report.verdict, Verdict::Conformal);
        let rate = report.criteria.iter().find(|c| c.name == "rate_constant").unwrap();
        assert_eq!(rate.classification, "finite");

        let div = DomainModel::Profile(ProfileDomain::new(
            std,
            BoundaryProfile::power_tail(1.0, 1.0, -1.0).unwrap(),
            BoundaryProfile::zero(),
        ));
        let report = assemble_report(&div, None, &config()).unwrap();
        assert_eq!(report.verdict, Verdict::NonConformal);
        let rate = report.criteria.iter().find(|c| c.name == "rate_constant").unwrap();
        assert_eq!(rate.classification, "infinite");
    }

    #[test]
    fn parabolic_reports() {
        let half = assemble_report(&DomainModel::HalfPlane { floor: 0.0 }, None, &config()).unwrap();
        assert_eq!(half.verdict, Verdict::Conformal);
        assert!(half.parabolic.is_some());

        let koebe = assemble_report(&DomainModel::koebe_image(), None, &config()).unwrap();
        assert_eq!(koebe.verdict, Verdict::NonConformal);

        let sqrt = assemble_report(&DomainModel::sqrt_image(), None, &config()).unwrap();
        assert_eq!(sqrt.verdict, Verdict::Conformal);
    }

    #[test]
    fn report_serializes_against_the_schema() {
        let report =
            assemble_report(&DomainModel::Strip(StripSpec::standard()), None, &config()).unwrap();
        let js = serde_json::to_value(&report).unwrap();
        assert!(js["verdict"].is_string());
        assert!(js["criteria"].is_array());
        assert!(js["criteria"][0]["name"].is_string());
        assert!(js["criteria"][0]["classification"].is_string());
        assert!(js["base_point"].is_array());
        assert!(js["notes"].is_array());
        // Deterministic byte-for-byte given identical inputs.
        let a = serde_json::to_string(&report).unwrap();
        let b = serde_json::to_string(
            &assemble_report(&DomainModel::Strip(StripSpec::standard()), None, &config()).unwrap(),
        )
        .unwrap();
        assert_eq!(a, b);
    }
}
