//! Boundary gap profiles of starlike-at-infinity domains.
//!
//! A profile records how far a domain exceeds its maximal strip at each
//! abscissa: `δ(t) ≥ 0`, non-decreasing, with `δ(t) → 0` as `t → −∞`. Two
//! shapes are admitted — constants (staircase steps) and power tails
//! `c·|t|^{−p}` — enough to realize both convergent (`p > 1`) and divergent
//! (`p ≤ 1`) gap integrals.
//!
//! A profile is a breakpoint list `(t_k, shape_k)`; `shape_k` applies on
//! `(t_{k−1}, t_k]`, the first shape extends to `−∞`, and past the last
//! breakpoint the gap continues at its final value. Segment lists may be
//! supplied in any order; they are sorted on construction and the
//! monotonicity and decay invariants are enforced there.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{Classification, QuadratureResult};
use crate::real::Real;

/// Shape of one profile segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentShape<T> {
    /// Constant gap.
    Const(T),
    /// `c·|t|^{−p}` (only meaningful for `t < 0`).
    Tail { c: T, p: T },
}

impl<T: Real> SegmentShape<T> {
    fn eval(&self, t: T) -> T {
        match *self {
            SegmentShape::Const(v) => v,
            SegmentShape::Tail { c, p } => c * (-t).powf(-p),
        }
    }
}

/// One breakpoint: `shape` applies up to (and including) `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileSegment<T> {
    pub t: T,
    pub shape: SegmentShape<T>,
}

/// Monotone boundary gap function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryProfile<T> {
    segments: Vec<ProfileSegment<T>>,
}

impl<T: Real> BoundaryProfile<T> {
    /// Identically zero gap.
    pub fn zero() -> Self {
        Self { segments: Vec::new() }
    }

    /// Step profile: `0` for `t ≤ at`, `height` beyond.
    pub fn step(at: T, height: T) -> Result<Self> {
        Self::new(vec![
            ProfileSegment {
                t: at,
                shape: SegmentShape::Const(T::zero()),
            },
            ProfileSegment {
                t: at + T::one(),
                shape: SegmentShape::Const(height),
            },
        ])
    }

    /// Pure power tail `c|t|^{−p}` up to `t_end < 0`, constant afterwards.
    pub fn power_tail(c: T, p: T, t_end: T) -> Result<Self> {
        let plateau = c * (-t_end).powf(-p);
        Self::new(vec![
            ProfileSegment {
                t: t_end,
                shape: SegmentShape::Tail { c, p },
            },
            ProfileSegment {
                t: t_end + T::one(),
                shape: SegmentShape::Const(plateau),
            },
        ])
    }

    pub fn new(mut segments: Vec<ProfileSegment<T>>) -> Result<Self> {
        segments.sort_by(|a, b| a.t.partial_cmp(&b.t).expect("finite breakpoints"));
        for pair in segments.windows(2) {
            if !(pair[0].t < pair[1].t) {
                return Err(Error::invalid("profile breakpoints must be distinct"));
            }
        }
        for (k, seg) in segments.iter().enumerate() {
            if !seg.t.is_finite() {
                return Err(Error::invalid("profile breakpoint must be finite"));
            }
            match seg.shape {
                SegmentShape::Const(v) => {
                    if !(v >= T::zero()) {
                        return Err(Error::invalid("constant gap must be ≥ 0"));
                    }
                    if k == 0 && v > T::zero() {
                        return Err(Error::invalid(
                            "leftmost profile segment must vanish at −∞ (use a power tail or a zero constant)",
                        ));
                    }
                }
                SegmentShape::Tail { c, p } => {
                    if !(c > T::zero()) || !(p > T::zero()) {
                        return Err(Error::invalid("power tail needs c > 0 and p > 0"));
                    }
                    if !(seg.t < T::zero()) {
                        return Err(Error::invalid("power-tail segment must end at t < 0"));
                    }
                }
            }
        }
        // Monotone non-decreasing across junctions (shapes themselves are
        // non-decreasing for t < 0).
        for pair in segments.windows(2) {
            let left_end = pair[0].shape.eval(pair[0].t);
            let right_start = pair[1].shape.eval(pair[0].t);
            if left_end > right_start + T::epsilon() * T::of(16.0) * (T::one() + left_end.abs()) {
                return Err(Error::invalid(format!(
                    "profile gap decreases at t = {}: {} drops to {}",
                    pair[0].t, left_end, right_start
                )));
            }
        }
        Ok(Self { segments })
    }

    pub fn segments(&self) -> &[ProfileSegment<T>] {
        &self.segments
    }

    /// Gap value at `t`.
    pub fn eval(&self, t: T) -> T {
        if self.segments.is_empty() {
            return T::zero();
        }
        for seg in &self.segments {
            if t <= seg.t {
                return seg.shape.eval(t);
            }
        }
        // Past the last breakpoint: continue at the final value.
        let last = self.segments.last().unwrap();
        last.shape.eval(last.t)
    }

    /// Supremum of the gap over all of `R` (the final value, by monotonicity).
    pub fn sup_gap(&self) -> T {
        match self.segments.last() {
            None => T::zero(),
            Some(seg) => seg.shape.eval(seg.t),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.segments.iter().all(|s| matches!(s.shape, SegmentShape::Const(v) if v == T::zero()))
    }

    /// Piecewise decomposition of the profile restricted to `(−∞, hi]`.
    /// `lo = None` marks the unbounded leftmost piece.
    pub(crate) fn pieces(&self, hi: T) -> Vec<Piece<T>> {
        let mut out = Vec::new();
        if self.segments.is_empty() {
            out.push(Piece {
                lo: None,
                hi,
                shape: SegmentShape::Const(T::zero()),
            });
            return out;
        }
        let mut lo: Option<T> = None;
        for seg in &self.segments {
            let piece_hi = seg.t.min(hi);
            let lo_val = lo.unwrap_or(T::neg_infinity());
            if lo_val < piece_hi {
                out.push(Piece {
                    lo,
                    hi: piece_hi,
                    shape: seg.shape,
                });
            }
            lo = Some(seg.t);
            if seg.t >= hi {
                return out;
            }
        }
        let last = self.segments.last().unwrap();
        if last.t < hi {
            out.push(Piece {
                lo: Some(last.t),
                hi,
                shape: SegmentShape::Const(last.shape.eval(last.t)),
            });
        }
        out
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Piece<T> {
    pub lo: Option<T>,
    pub hi: T,
    pub shape: SegmentShape<T>,
}

/// Closed-form `∫ shape` over `(lo, hi]`; `None` when divergent.
fn piece_integral<T: Real>(piece: &Piece<T>) -> Option<T> {
    match piece.shape {
        SegmentShape::Const(v) => match piece.lo {
            None => {
                if v == T::zero() {
                    Some(T::zero())
                } else {
                    None
                }
            }
            Some(lo) => Some(v * (piece.hi - lo)),
        },
        SegmentShape::Tail { c, p } => {
            let u_hi = -piece.hi; // substitution u = −t, ∫ c u^{−p} du
            match piece.lo {
                None => {
                    if p > T::one() {
                        Some(c * u_hi.powf(T::one() - p) / (p - T::one()))
                    } else {
                        None
                    }
                }
                Some(lo) => {
                    let u_lo = -lo;
                    if (p - T::one()).abs() < T::epsilon() * T::of(4.0) {
                        Some(c * (u_lo.ln() - u_hi.ln()))
                    } else {
                        Some(c * (u_lo.powf(T::one() - p) - u_hi.powf(T::one() - p)) / (T::one() - p))
                    }
                }
            }
        }
    }
}

/// Crossing abscissa of two shapes inside `(lo, hi)`, if any. Each pair of
/// admitted shapes crosses at most once on the negative axis.
fn crossing<T: Real>(a: &SegmentShape<T>, b: &SegmentShape<T>, lo: Option<T>, hi: T) -> Option<T> {
    let candidate = match (*a, *b) {
        (SegmentShape::Const(_), SegmentShape::Const(_)) => return None,
        (SegmentShape::Const(k), SegmentShape::Tail { c, p })
        | (SegmentShape::Tail { c, p }, SegmentShape::Const(k)) => {
            if k <= T::zero() {
                return None;
            }
            Some(-(c / k).powf(p.recip()))
        }
        (SegmentShape::Tail { c: c1, p: p1 }, SegmentShape::Tail { c: c2, p: p2 }) => {
            if (p1 - p2).abs() < T::epsilon() * T::of(4.0) {
                return None;
            }
            Some(-(c2 / c1).powf((p2 - p1).recip()))
        }
    };
    let t = candidate?;
    let lo_val = lo.unwrap_or(T::neg_infinity());
    if lo_val < t && t < hi {
        Some(t)
    } else {
        None
    }
}

/// Exact `∫_{−∞}^{hi} max(upper(t), lower(t)) dt` for two profiles, classified
/// per the quadrature conventions. Divergent results carry closed-form partial
/// integrals at truncations `hi − 16` and `hi − 32` as the growth witness.
pub fn max_gap_integral<T: Real>(
    upper: &BoundaryProfile<T>,
    lower: &BoundaryProfile<T>,
    hi: T,
) -> QuadratureResult<T> {
    match max_integral_closed(upper, lower, None, hi) {
        Some(value) => QuadratureResult {
            value,
            error_estimate: T::zero(),
            classification: Classification::Finite,
            cutoff_used: T::infinity(),
            divergence_witness: None,
            mc_sigma: None,
        },
        None => {
            let p1 = max_integral_closed(upper, lower, Some(hi - T::of(16.0)), hi)
                .expect("finite truncation");
            let p2 = max_integral_closed(upper, lower, Some(hi - T::of(32.0)), hi)
                .expect("finite truncation");
            QuadratureResult {
                value: p2,
                error_estimate: T::infinity(),
                classification: Classification::Divergent,
                cutoff_used: T::of(32.0),
                divergence_witness: Some((p1, p2)),
                mc_sigma: None,
            }
        }
    }
}

/// Closed-form integral of the pointwise max on `(clip_lo, hi]`
/// (`clip_lo = None` meaning `−∞`); `None` when divergent.
fn max_integral_closed<T: Real>(
    upper: &BoundaryProfile<T>,
    lower: &BoundaryProfile<T>,
    clip_lo: Option<T>,
    hi: T,
) -> Option<T> {
    let ups = upper.pieces(hi);
    let los = lower.pieces(hi);
    let mut total = T::zero();
    for up in &ups {
        for lo in &los {
            // Overlap of the two pieces.
            let start = match (up.lo, lo.lo, clip_lo) {
                (None, None, None) => None,
                (a, b, c) => {
                    let m = a
                        .unwrap_or(T::neg_infinity())
                        .max(b.unwrap_or(T::neg_infinity()))
                        .max(c.unwrap_or(T::neg_infinity()));
                    if m.is_finite() {
                        Some(m)
                    } else {
                        None
                    }
                }
            };
            let end = up.hi.min(lo.hi);
            let start_val = start.unwrap_or(T::neg_infinity());
            if !(start_val < end) {
                continue;
            }
            let mut bounds: Vec<Option<T>> = vec![start];
            if let Some(x) = crossing(&up.shape, &lo.shape, start, end) {
                bounds.push(Some(x));
            }
            bounds.push(Some(end));
            for w in bounds.windows(2) {
                let (s, e) = (w[0], w[1].unwrap());
                let sample = match s {
                    Some(sv) => (sv + e) * T::half(),
                    None => e - T::one(),
                };
                let shape = if up.shape.eval(sample) >= lo.shape.eval(sample) {
                    up.shape
                } else {
                    lo.shape
                };
                total += piece_integral(&Piece {
                    lo: s,
                    hi: e,
                    shape,
                })?;
            }
        }
    }
    Some(total)
}
