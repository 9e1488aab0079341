//! Catalog of starlike-at-infinity domains and their geometry oracles.
//!
//! Catalog members carry an explicit conformal map from the standard strip
//! (so conformal radii, Green's functions and hyperbolic distances are exact);
//! profile domains carry only geometry — membership, exact distance to the
//! boundary, and the gap functions `δ_j` — and are served by the Monte Carlo
//! estimator instead.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::geom::StripSpec;
use crate::maps::{Map, MapChain};
use crate::profile::{max_gap_integral, BoundaryProfile};
use crate::quad::{Classification, QuadratureResult};
use crate::real::Real;

/// Geometry of a domain reached through an explicit map that is not otherwise
/// catalogued; membership and `Im`-range are still exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MappedKind {
    /// `C ∖ (−∞, −1/4]`, the image of the Koebe function.
    KoebeSlit,
    /// `{ ζ : Re ζ > f(Im ζ) }` with `f(η) = η²` for `η < 0`, `f(0) = 1/4`
    /// and no constraint for `η > 0`.
    SqrtBoundary,
}

/// An explicitly mapped domain: image of the standard strip under `chain`.
#[derive(Debug, Clone, PartialEq)]
pub struct MappedDomain<T> {
    pub chain: MapChain<T>,
    pub kind: MappedKind,
}

/// A profile domain: maximal strip plus monotone boundary gaps.
/// `x + iy` belongs to the domain iff `a − δ₁(x) < y < b + δ₂(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileDomain<T> {
    pub strip: StripSpec<T>,
    pub upper: BoundaryProfile<T>,
    pub lower: BoundaryProfile<T>,
    elements: Vec<Element<T>>,
}

impl<T: Real> ProfileDomain<T> {
    pub fn new(strip: StripSpec<T>, upper: BoundaryProfile<T>, lower: BoundaryProfile<T>) -> Self {
        let mut elements = boundary_elements(&upper, strip.b, true);
        elements.extend(boundary_elements(&lower, strip.a, false));
        // Straight segments first: they are cheap and set a tight bound that
        // lets the tail arcs reject themselves without a search.
        elements.sort_by_key(|e| matches!(e, Element::TailArc { .. }) as u8);
        Self {
            strip,
            upper,
            lower,
            elements,
        }
    }
}

/// The domain catalog.
#[derive(Debug, Clone, PartialEq)]
pub enum DomainModel<T> {
    /// Unit disk (test fixture; not a Koenigs domain).
    Disk,
    /// Upper half-plane `{ Im w > floor }`.
    HalfPlane { floor: T },
    /// Horizontal strip.
    Strip(StripSpec<T>),
    /// Widened strip `S_δ = S(−π/2, π/2 + δ)`.
    WidenedStrip { delta: T },
    /// Plane minus two horizontal slits `{ Re w ≤ slit_end, Im w ∈ {a, b} }`.
    TwoSlit { strip: StripSpec<T>, slit_end: T },
    /// Image of the standard strip under an explicit chain.
    Mapped(MappedDomain<T>),
    /// Strip with monotone boundary gaps; geometry oracles only.
    Profile(ProfileDomain<T>),
}

impl<T: Real> DomainModel<T> {
    /// The standard two-slit plane `C ∖ { Re w ≤ 0, |Im w| = π/2 }`.
    pub fn standard_two_slit() -> Self {
        DomainModel::TwoSlit {
            strip: StripSpec::standard(),
            slit_end: T::zero(),
        }
    }

    pub fn widened_strip(delta: T) -> Result<Self> {
        StripSpec::widened(delta)?;
        Ok(DomainModel::WidenedStrip { delta })
    }

    /// Profile realization of the half-widened strip
    /// `S*_δ = S ∪ (S_δ ∩ {Re > 0})`.
    pub fn half_widened_strip(delta: T) -> Result<Self> {
        Ok(DomainModel::Profile(ProfileDomain::new(
            StripSpec::standard(),
            BoundaryProfile::step(T::zero(), delta)?,
            BoundaryProfile::zero(),
        )))
    }

    /// `C ∖ (−∞, −1/4]` with its strip parametrization `(e^{2ζ} − 1)/4`.
    pub fn koebe_image() -> Self {
        DomainModel::Mapped(MappedDomain {
            chain: MapChain::new(vec![Map::KoebeExp]),
            kind: MappedKind::KoebeSlit,
        })
    }

    /// `{ Re ζ > f(Im ζ) }` with its strip parametrization
    /// `i e^ζ − i e^{iπ/4} e^{ζ/2}`.
    pub fn sqrt_image() -> Self {
        DomainModel::Mapped(MappedDomain {
            chain: MapChain::new(vec![Map::SqrtShift]),
            kind: MappedKind::SqrtBoundary,
        })
    }

    /// Exact membership test.
    pub fn contains(&self, z: Complex<T>) -> bool {
        match self {
            DomainModel::Disk => z.norm_sqr() < T::one(),
            DomainModel::HalfPlane { floor } => z.im > *floor,
            DomainModel::Strip(s) => s.contains(z),
            DomainModel::WidenedStrip { delta } => {
                StripSpec::widened(*delta).map(|s| s.contains(z)).unwrap_or(false)
            }
            DomainModel::TwoSlit { strip, slit_end } => {
                !(z.re <= *slit_end && (z.im == strip.a || z.im == strip.b))
            }
            DomainModel::Mapped(m) => match m.kind {
                MappedKind::KoebeSlit => !(z.im == T::zero() && z.re <= -T::of(0.25)),
                MappedKind::SqrtBoundary => {
                    if z.im > T::zero() {
                        true
                    } else if z.im == T::zero() {
                        z.re > T::of(0.25)
                    } else {
                        z.re > z.im * z.im
                    }
                }
            },
            DomainModel::Profile(p) => {
                p.strip.a - p.lower.eval(z.re) < z.im && z.im < p.strip.b + p.upper.eval(z.re)
            }
        }
    }

    /// Exact euclidean distance to the boundary together with a nearest
    /// boundary point.
    pub fn dist_and_nearest(&self, z: Complex<T>) -> Result<(T, Complex<T>)> {
        if !self.contains(z) {
            return Err(Error::outside(z));
        }
        match self {
            DomainModel::Disk => {
                let r = z.norm();
                let nearest = if r == T::zero() {
                    Complex::new(T::one(), T::zero())
                } else {
                    z / r
                };
                Ok((T::one() - r, nearest))
            }
            DomainModel::HalfPlane { floor } => {
                Ok((z.im - *floor, Complex::new(z.re, *floor)))
            }
            DomainModel::Strip(s) => {
                let down = z.im - s.a;
                let up = s.b - z.im;
                if down <= up {
                    Ok((down, Complex::new(z.re, s.a)))
                } else {
                    Ok((up, Complex::new(z.re, s.b)))
                }
            }
            DomainModel::WidenedStrip { delta } => {
                DomainModel::Strip(StripSpec::widened(*delta)?).dist_and_nearest(z)
            }
            DomainModel::TwoSlit { strip, slit_end } => {
                let lower = half_line_dist(z, strip.a, *slit_end);
                let upper = half_line_dist(z, strip.b, *slit_end);
                Ok(if lower.0 <= upper.0 { lower } else { upper })
            }
            DomainModel::Mapped(_) => Err(Error::UnsupportedExact(
                "distance oracle not available for mapped domains",
            )),
            DomainModel::Profile(p) => {
                let mut best: Option<(T, Complex<T>)> = None;
                for el in &p.elements {
                    let cand = el.dist(z, best.as_ref().map(|b| b.0));
                    if let Some((d, pt)) = cand {
                        if best.as_ref().map(|b| d < b.0).unwrap_or(true) {
                            best = Some((d, pt));
                        }
                    }
                }
                Ok(best.expect("profile boundary is non-empty"))
            }
        }
    }

    pub fn dist_to_boundary(&self, z: Complex<T>) -> Result<T> {
        Ok(self.dist_and_nearest(z)?.0)
    }

    /// Gap functions `(δ₁, δ₂)` of the cross-section component containing the
    /// strip midline; `+∞` for unbounded cross-sections.
    pub fn delta_j(&self, t: T) -> Result<(T, T)> {
        match self {
            DomainModel::Strip(_) | DomainModel::WidenedStrip { .. } => Ok((T::zero(), T::zero())),
            DomainModel::TwoSlit { slit_end, .. } => {
                if t <= *slit_end {
                    Ok((T::zero(), T::zero()))
                } else {
                    Ok((T::infinity(), T::infinity()))
                }
            }
            DomainModel::Profile(p) => Ok((p.lower.eval(t), p.upper.eval(t))),
            _ => Err(Error::UnsupportedExact("gap function needs a known cross-section")),
        }
    }

    /// `δ_Ω(t) = max(δ₁(t), δ₂(t))`.
    pub fn delta(&self, t: T) -> Result<T> {
        let (d1, d2) = self.delta_j(t)?;
        Ok(d1.max(d2))
    }

    /// Closed-form `∫_{−∞}^0 δ_Ω(t) dt` with convergence classification.
    pub fn euclidean_gap_integral(&self) -> Result<QuadratureResult<T>> {
        match self {
            DomainModel::Strip(_) | DomainModel::WidenedStrip { .. } => {
                Ok(QuadratureResult::exact_zero())
            }
            DomainModel::TwoSlit { slit_end, .. } => {
                if *slit_end >= T::zero() {
                    Ok(QuadratureResult::exact_zero())
                } else {
                    // The cross-section is unbounded on (slit_end, 0].
                    Ok(QuadratureResult {
                        value: T::infinity(),
                        error_estimate: T::infinity(),
                        classification: Classification::Divergent,
                        cutoff_used: T::zero(),
                        divergence_witness: Some((T::infinity(), T::infinity())),
                        mc_sigma: None,
                    })
                }
            }
            DomainModel::Profile(p) => Ok(max_gap_integral(&p.upper, &p.lower, T::zero())),
            _ => Err(Error::UnsupportedExact("gap integral needs a known cross-section")),
        }
    }

    /// The maximal horizontal strip, where the catalog fixes one.
    pub fn maximal_strip(&self) -> Option<StripSpec<T>> {
        match self {
            DomainModel::Strip(s) => Some(*s),
            DomainModel::WidenedStrip { delta } => StripSpec::widened(*delta).ok(),
            DomainModel::TwoSlit { strip, .. } => Some(*strip),
            DomainModel::Profile(p) => Some(p.strip),
            _ => None,
        }
    }

    /// Conformal map from the standard strip onto the domain, when explicit.
    pub fn chain_from_standard_strip(&self) -> Option<MapChain<T>> {
        match self {
            DomainModel::Strip(s) => Some(MapChain::standard_to_strip(s)),
            DomainModel::WidenedStrip { delta } => {
                StripSpec::widened(*delta).ok().map(|s| MapChain::standard_to_strip(&s))
            }
            DomainModel::TwoSlit { strip, slit_end } => {
                let scale = strip.width() / T::PI();
                Some(MapChain::new(vec![
                    Map::SlitPlane,
                    Map::Affine {
                        a: Complex::new(scale, T::zero()),
                        b: Complex::new(*slit_end, strip.midline()),
                    },
                ]))
            }
            DomainModel::Mapped(m) => Some(m.chain.clone()),
            _ => None,
        }
    }

    /// Range of `Im` over the domain; drives the hyperbolic-step classifier.
    pub fn im_bounds(&self) -> (T, T) {
        match self {
            DomainModel::Disk => (-T::one(), T::one()),
            DomainModel::HalfPlane { floor } => (*floor, T::infinity()),
            DomainModel::Strip(s) => (s.a, s.b),
            DomainModel::WidenedStrip { delta } => (-T::FRAC_PI_2(), T::FRAC_PI_2() + *delta),
            DomainModel::TwoSlit { .. } | DomainModel::Mapped(_) => {
                (T::neg_infinity(), T::infinity())
            }
            DomainModel::Profile(p) => (
                p.strip.a - p.lower.sup_gap(),
                p.strip.b + p.upper.sup_gap(),
            ),
        }
    }

    /// Whether the walk-on-spheres estimator may run here (exact distance
    /// oracle, and bounded profile gaps for termination).
    pub fn supports_wos(&self) -> bool {
        match self {
            DomainModel::Mapped(_) => false,
            DomainModel::Profile(p) => {
                p.upper.sup_gap().is_finite() && p.lower.sup_gap().is_finite()
            }
            _ => true,
        }
    }

    /// Whether the horizontal segment `{ w + s : s ∈ [t, 0] }` stays inside
    /// the domain. Exact for every variant: the gap functions are monotone,
    /// so the leftmost point is the extremal one.
    pub fn horizontal_ray_admissible(&self, w: Complex<T>, t: T) -> bool {
        debug_assert!(t <= T::zero());
        if !self.contains(w) {
            return false;
        }
        match self {
            DomainModel::Disk => false,
            DomainModel::HalfPlane { .. }
            | DomainModel::Strip(_)
            | DomainModel::WidenedStrip { .. } => true,
            DomainModel::TwoSlit { strip, slit_end } => {
                // Round trips through the Koenigs map land on the slit lines
                // only up to rounding; classify by a tolerance band.
                let eps = T::epsilon() * T::of(64.0) * (T::one() + w.im.abs());
                if (w.im - strip.a).abs() <= eps || (w.im - strip.b).abs() <= eps {
                    w.re + t > *slit_end
                } else {
                    true
                }
            }
            DomainModel::Mapped(m) => match m.kind {
                MappedKind::KoebeSlit => w.im != T::zero() || w.re + t > -T::of(0.25),
                MappedKind::SqrtBoundary => self.contains(w + Complex::new(t, T::zero())),
            },
            DomainModel::Profile(_) => self.contains(w + Complex::new(t, T::zero())),
        }
    }
}

/// The two-slit strip map `g(z) = z + (1 + e^{2z})/2` onto the standard
/// two-slit plane.
pub fn two_slit_map<T: Real>(z: Complex<T>) -> Result<Complex<T>> {
    if z.im.abs() >= T::FRAC_PI_2() {
        return Err(Error::outside(z));
    }
    Ok(Map::SlitPlane.eval(z))
}

/// Newton inverse of [`two_slit_map`]; round trips to `< 1e−11` relative.
pub fn two_slit_map_inverse<T: Real>(w: Complex<T>) -> Result<Complex<T>> {
    if !DomainModel::<T>::standard_two_slit().contains(w) {
        return Err(Error::outside(w));
    }
    Map::SlitPlane.invert(w)
}

fn half_line_dist<T: Real>(z: Complex<T>, y: T, x_max: T) -> (T, Complex<T>) {
    if z.re <= x_max {
        ((z.im - y).abs(), Complex::new(z.re, y))
    } else {
        let tip = Complex::new(x_max, y);
        ((z - tip).norm(), tip)
    }
}

/// Boundary elements of one side of a profile domain.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Element<T> {
    /// Horizontal segment `{ (x, y) : lo ≤ x ≤ hi }`; `lo`/`hi` may be ±∞.
    HSeg { y: T, lo: T, hi: T },
    /// Vertical segment at a profile jump.
    VSeg { x: T, lo: T, hi: T },
    /// Power-tail arc `y = base ± c|x|^{−p}` on `[lo, hi]`, `hi < 0`.
    TailArc {
        c: T,
        p: T,
        base: T,
        upward: bool,
        lo: T,
        hi: T,
    },
}

impl<T: Real> Element<T> {
    fn curve_y(c: T, p: T, base: T, upward: bool, x: T) -> T {
        let u = -x;
        // The catalog tails overwhelmingly use p ∈ {1, 2}; skip powf there.
        let gap = if p == T::one() {
            c / u
        } else if p == T::two() {
            c / (u * u)
        } else {
            c * u.powf(-p)
        };
        if upward {
            base + gap
        } else {
            base - gap
        }
    }

    /// Distance from `z` to the element with the nearest point, or `None`
    /// when a prior bound already rules the element out.
    fn dist(&self, z: Complex<T>, bound: Option<T>) -> Option<(T, Complex<T>)> {
        match *self {
            Element::HSeg { y, lo, hi } => {
                let x = num_traits::clamp(z.re, lo, hi);
                let pt = Complex::new(x, y);
                Some(((z - pt).norm(), pt))
            }
            Element::VSeg { x, lo, hi } => {
                let y = num_traits::clamp(z.im, lo, hi);
                let pt = Complex::new(x, y);
                Some(((z - pt).norm(), pt))
            }
            Element::TailArc {
                c,
                p,
                base,
                upward,
                lo,
                hi,
            } => {
                // Arc points reachable below the current best lie in
                // x ≤ x_cap; on that window the gap is at most gap(x_cap)
                // (monotone), giving a cheap bounding band.
                if let Some(b) = bound {
                    let x_cap = hi.min(z.re + b);
                    if x_cap < lo {
                        return None;
                    }
                    let gap_cap = Self::curve_y(c, p, T::zero(), true, x_cap);
                    let (band_lo, band_hi) = if upward {
                        (base, base + gap_cap)
                    } else {
                        (base - gap_cap, base)
                    };
                    let dx = (z.re - hi).max(lo - z.re).max(T::zero());
                    let dy = (band_lo - z.im).max(z.im - band_hi).max(T::zero());
                    if (dx * dx + dy * dy).sqrt() >= b {
                        return None;
                    }
                }
                let end = Complex::new(hi, Self::curve_y(c, p, base, upward, hi));
                let mut best = (z - end).norm();
                let mut best_pt = end;
                // Arc points outside this window are farther than the current
                // best purely by horizontal offset.
                let window_hi = hi.min(z.re + best + T::one());
                let window_lo = lo.max(z.re.min(window_hi) - (best + T::one()));
                let n: u32 = 32;
                let span = window_hi - window_lo;
                if span > T::zero() {
                    let mut k_best: u32 = n;
                    for k in 0..=n {
                        let x = window_lo + span * T::of(k as f64 / n as f64);
                        let pt = Complex::new(x, Self::curve_y(c, p, base, upward, x));
                        let d = (z - pt).norm();
                        if d < best {
                            best = d;
                            best_pt = pt;
                            k_best = k;
                        }
                    }
                    // Ternary refinement on the bracketing sub-interval. The
                    // distance is quadratically flat at its minimum, so ~50
                    // shrink steps already pin it far below 1e−9.
                    let mut a =
                        window_lo + span * T::of(k_best.saturating_sub(1) as f64 / n as f64);
                    let mut b = window_lo + span * T::of((k_best + 1).min(n) as f64 / n as f64);
                    let d_at = |x: T| {
                        let pt = Complex::new(x, Self::curve_y(c, p, base, upward, x));
                        ((z - pt).norm(), pt)
                    };
                    for _ in 0..60 {
                        let third = (b - a) / T::of(3.0);
                        let x1 = a + third;
                        let x2 = b - third;
                        if d_at(x1).0 <= d_at(x2).0 {
                            b = x2;
                        } else {
                            a = x1;
                        }
                        if b - a <= T::epsilon() * (T::one() + a.abs()) {
                            break;
                        }
                    }
                    let (d, pt) = d_at((a + b) * T::half());
                    if d < best {
                        best = d;
                        best_pt = pt;
                    }
                }
                Some((best, best_pt))
            }
        }
    }
}

fn boundary_elements<T: Real>(
    profile: &BoundaryProfile<T>,
    base: T,
    upward: bool,
) -> Vec<Element<T>> {
    use crate::profile::SegmentShape;
    let mut out = Vec::new();
    let pieces = profile.pieces(T::infinity());
    let side = |gap: T| if upward { base + gap } else { base - gap };
    let mut prev_end: Option<(T, T)> = None; // (x, y at segment end)
    for piece in &pieces {
        let lo = piece.lo.unwrap_or(T::neg_infinity());
        match piece.shape {
            SegmentShape::Const(v) => out.push(Element::HSeg {
                y: side(v),
                lo,
                hi: piece.hi,
            }),
            SegmentShape::Tail { c, p } => out.push(Element::TailArc {
                c,
                p,
                base,
                upward,
                lo,
                hi: piece.hi,
            }),
        }
        let start_gap = match piece.shape {
            SegmentShape::Const(v) => v,
            SegmentShape::Tail { c, p } => {
                if lo.is_finite() {
                    c * (-lo).powf(-p)
                } else {
                    T::zero()
                }
            }
        };
        if let Some((x_prev, y_prev)) = prev_end {
            let y_start = side(start_gap);
            if (y_prev - y_start).abs() > T::epsilon() * T::of(8.0) {
                out.push(Element::VSeg {
                    x: x_prev,
                    lo: y_prev.min(y_start),
                    hi: y_prev.max(y_start),
                });
            }
        }
        let end_gap = match piece.shape {
            SegmentShape::Const(v) => v,
            SegmentShape::Tail { c, p } => c * (-piece.hi).powf(-p),
        };
        prev_end = Some((piece.hi, side(end_gap)));
    }
    out
}
