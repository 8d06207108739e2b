use std::f64::consts::PI;

use num::complex::Complex64;

use crate::error::{Error, Result};

/// A smooth piece of an integration path, parametrised by `t ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment {
    Line {
        from: Complex64,
        to: Complex64,
    },
    /// `center + radius·e^{iθ}` for `θ` from `start` to `end` (radians; `end > start` is counterclockwise).
    Arc {
        center: Complex64,
        radius: f64,
        start: f64,
        end: f64,
    },
}

impl Segment {
    pub fn point(&self, t: f64) -> Complex64 {
        match *self {
            Segment::Line { from, to } => from + (to - from) * t,
            Segment::Arc { center, radius, start, end } => {
                center + Complex64::from_polar(radius, start + t * (end - start))
            }
        }
    }

    pub fn velocity(&self, t: f64) -> Complex64 {
        match *self {
            Segment::Line { from, to } => to - from,
            Segment::Arc { radius, start, end, .. } => {
                let theta = start + t * (end - start);
                Complex64::i() * Complex64::from_polar(radius, theta) * (end - start)
            }
        }
    }

    /// Euclidean distance from `s` to the segment.
    pub fn distance_to(&self, s: Complex64) -> f64 {
        match *self {
            Segment::Line { from, to } => {
                let d = to - from;
                let len2 = d.norm_sqr();
                if len2 == 0.0 {
                    return (s - from).norm();
                }
                let t = (((s - from) * d.conj()).re / len2).clamp(0.0, 1.0);
                (s - self.point(t)).norm()
            }
            Segment::Arc { center, radius, start, end } => {
                let v = s - center;
                let (lo, hi) = if start <= end { (start, end) } else { (end, start) };
                let ends = (s - self.point(0.0)).norm().min((s - self.point(1.0)).norm());
                if hi - lo >= 2.0 * PI || v.norm() == 0.0 {
                    return (v.norm() - radius).abs().min(ends);
                }
                let phi = v.arg();
                let k = ((lo - phi) / (2.0 * PI)).ceil();
                let inside = phi + 2.0 * PI * k <= hi;
                if inside {
                    (v.norm() - radius).abs()
                } else {
                    ends
                }
            }
        }
    }
}

/// A closed or open path made of consecutive segments.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    pub segments: Vec<Segment>,
}

impl Path {
    pub fn start(&self) -> Complex64 {
        self.segments[0].point(0.0)
    }

    pub fn end(&self) -> Complex64 {
        self.segments[self.segments.len() - 1].point(1.0)
    }

    pub fn is_closed(&self) -> bool {
        (self.start() - self.end()).norm() < 1e-12
    }

    /// Fails with a geometry error if any segment passes within `radius` of
    /// one of `singular` points.
    pub fn check_clearance(&self, singular: &[f64], radius: f64) -> Result<()> {
        for seg in &self.segments {
            for &s in singular {
                let distance = seg.distance_to(Complex64::new(s, 0.0));
                if distance < radius {
                    return Err(Error::Geometry { point: s, distance, radius });
                }
            }
        }
        Ok(())
    }

    /// Counterclockwise loop around the real point `center` on a circle of
    /// radius `radius`, joined to the real basepoint by a segment of the real
    /// axis.
    pub fn real_loop(basepoint: f64, center: f64, radius: f64) -> Path {
        let (touch, angle) = if basepoint > center { (center + radius, 0.0) } else { (center - radius, PI) };
        let b = Complex64::new(basepoint, 0.0);
        let t = Complex64::new(touch, 0.0);
        let c = Complex64::new(center, 0.0);
        Path {
            segments: vec![
                Segment::Line { from: b, to: t },
                Segment::Arc { center: c, radius, start: angle, end: angle + 2.0 * PI },
                Segment::Line { from: t, to: b },
            ],
        }
    }

    /// Clockwise circle of radius `radius` about `center`, entered from its
    /// top point; for a circle enclosing 0 and 1 this is a counterclockwise
    /// loop around ∞ and equals `(γ₀γ₁)⁻¹` when the basepoint sits between
    /// 0 and 1.
    pub fn loop_at_infinity(basepoint: f64, center: f64, radius: f64) -> Path {
        let b = Complex64::new(basepoint, 0.0);
        let top = Complex64::new(center, radius);
        Path {
            segments: vec![
                Segment::Line { from: b, to: top },
                Segment::Arc { center: Complex64::new(center, 0.0), radius, start: PI / 2.0, end: PI / 2.0 - 2.0 * PI },
                Segment::Line { from: top, to: b },
            ],
        }
    }
}
