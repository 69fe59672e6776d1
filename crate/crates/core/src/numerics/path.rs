use std::f64::consts::PI;

use super::Complex;
use crate::{Error, Result};

const JOIN_TOL: f64 = 1e-12;

/// One piece of an integration path in the punctured plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment {
    Line {
        from: Complex,
        to: Complex,
    },
    /// `center + radius·e^{iθ}` for `θ` running from `start_angle` to `end_angle`.
    Arc {
        center: Complex,
        radius: f64,
        start_angle: f64,
        end_angle: f64,
    },
}

impl Segment {
    /// Point at parameter `t ∈ [0, 1]`.
    pub fn point(&self, t: f64) -> Complex {
        match *self {
            Segment::Line { from, to } => from + (to - from) * t,
            Segment::Arc {
                center,
                radius,
                start_angle,
                end_angle,
            } => {
                let theta = start_angle + (end_angle - start_angle) * t;
                center + Complex::from_polar(radius, theta)
            }
        }
    }

    /// `dz/dt` at parameter `t`.
    pub fn derivative(&self, t: f64) -> Complex {
        match *self {
            Segment::Line { from, to } => to - from,
            Segment::Arc {
                radius,
                start_angle,
                end_angle,
                ..
            } => {
                let theta = start_angle + (end_angle - start_angle) * t;
                Complex::new(0.0, 1.0)
                    * Complex::from_polar(radius, theta)
                    * (end_angle - start_angle)
            }
        }
    }

    pub fn start(&self) -> Complex {
        self.point(0.0)
    }

    pub fn end(&self) -> Complex {
        self.point(1.0)
    }

    pub fn reversed(&self) -> Segment {
        match *self {
            Segment::Line { from, to } => Segment::Line { from: to, to: from },
            Segment::Arc {
                center,
                radius,
                start_angle,
                end_angle,
            } => Segment::Arc {
                center,
                radius,
                start_angle: end_angle,
                end_angle: start_angle,
            },
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            Segment::Line { from, to } => (to - from).norm(),
            Segment::Arc {
                radius,
                start_angle,
                end_angle,
                ..
            } => radius * (end_angle - start_angle).abs(),
        }
    }

    /// True when the origin lies strictly inside the segment (endpoints excluded).
    fn passes_through_origin(&self) -> bool {
        match *self {
            Segment::Line { from, to } => {
                let d = to - from;
                let len2 = d.norm_sqr();
                if len2 == 0.0 {
                    return false;
                }
                // projection of 0 onto the line
                let t = -(from.re * d.re + from.im * d.im) / len2;
                if t <= 0.0 || t >= 1.0 {
                    return false;
                }
                (from + d * t).norm() <= JOIN_TOL * (1.0 + from.norm().max(to.norm()))
            }
            Segment::Arc {
                center,
                radius,
                start_angle,
                end_angle,
            } => {
                if (center.norm() - radius).abs() > JOIN_TOL * (1.0 + radius) {
                    return false;
                }
                let zero_angle = (-center).arg();
                let (lo, hi) = if start_angle <= end_angle {
                    (start_angle, end_angle)
                } else {
                    (end_angle, start_angle)
                };
                // any representative zero_angle + 2πk strictly inside (lo, hi)
                let k = ((lo - zero_angle) / (2.0 * PI)).floor();
                let mut a = zero_angle + 2.0 * PI * k;
                while a <= hi {
                    if a > lo + 1e-14 && a < hi - 1e-14 {
                        return true;
                    }
                    a += 2.0 * PI;
                }
                false
            }
        }
    }
}

/// A connected path made of lines and arcs.
///
/// The origin may only appear as a first or last point, and only when that endpoint
/// is flagged removable: the integrand must tend to zero there.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSpec {
    segments: Vec<Segment>,
    removable_start: bool,
    removable_end: bool,
}

impl PathSpec {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        Self::with_removable(segments, false, false)
    }

    /// The empty path: transport along it is the identity, integrals vanish.
    pub fn empty() -> Self {
        PathSpec {
            segments: Vec::new(),
            removable_start: false,
            removable_end: false,
        }
    }

    pub fn with_removable(
        segments: Vec<Segment>,
        removable_start: bool,
        removable_end: bool,
    ) -> Result<Self> {
        for pair in segments.windows(2) {
            let (a, b) = (pair[0].end(), pair[1].start());
            if (a - b).norm() > JOIN_TOL * (1.0 + a.norm()) {
                return Err(Error::InvalidPath(format!(
                    "segments do not join: {a} vs {b}"
                )));
            }
        }
        for s in &segments {
            if s.passes_through_origin() {
                return Err(Error::InvalidPath("path passes through 0".into()));
            }
        }
        for (i, s) in segments.iter().enumerate() {
            // interior joins must avoid 0 as well
            if i + 1 < segments.len() && s.end().norm() == 0.0 {
                return Err(Error::InvalidPath("interior vertex at 0".into()));
            }
        }
        if let (Some(first), Some(last)) = (segments.first(), segments.last()) {
            if first.start().norm() == 0.0 && !removable_start {
                return Err(Error::InvalidPath(
                    "starts at 0 without removable flag".into(),
                ));
            }
            if last.end().norm() == 0.0 && !removable_end {
                return Err(Error::InvalidPath(
                    "ends at 0 without removable flag".into(),
                ));
            }
        }
        Ok(PathSpec {
            segments,
            removable_start,
            removable_end,
        })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn removable_start(&self) -> bool {
        self.removable_start
    }

    pub fn removable_end(&self) -> bool {
        self.removable_end
    }

    pub fn start(&self) -> Option<Complex> {
        self.segments.first().map(Segment::start)
    }

    pub fn end(&self) -> Option<Complex> {
        self.segments.last().map(Segment::end)
    }

    pub fn length(&self) -> f64 {
        self.segments.iter().map(Segment::length).sum()
    }

    pub fn reversed(&self) -> PathSpec {
        PathSpec {
            segments: self.segments.iter().rev().map(Segment::reversed).collect(),
            removable_start: self.removable_end,
            removable_end: self.removable_start,
        }
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &PathSpec) -> Result<PathSpec> {
        let mut segments = self.segments.clone();
        segments.extend_from_slice(&other.segments);
        let removable_start = if self.is_empty() {
            other.removable_start
        } else {
            self.removable_start
        };
        let removable_end = if other.is_empty() {
            self.removable_end
        } else {
            other.removable_end
        };
        PathSpec::with_removable(segments, removable_start, removable_end)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn disconnected_segments_rejected() {
        let err = PathSpec::new(vec![
            Segment::Line {
                from: c(1.0, 0.0),
                to: c(2.0, 0.0),
            },
            Segment::Line {
                from: c(3.0, 0.0),
                to: c(4.0, 0.0),
            },
        ]);
        assert!(matches!(err, Err(Error::InvalidPath(_))));
    }

    #[test]
    fn line_through_origin_rejected() {
        let err = PathSpec::new(vec![Segment::Line {
            from: c(-1.0, 0.0),
            to: c(1.0, 0.0),
        }]);
        assert!(matches!(err, Err(Error::InvalidPath(_))));
    }

    #[test]
    fn arc_through_origin_rejected() {
        // circle of radius 1 about 1 passes through 0 at angle π
        let err = PathSpec::new(vec![Segment::Arc {
            center: c(1.0, 0.0),
            radius: 1.0,
            start_angle: 0.0,
            end_angle: 4.0,
        }]);
        assert!(matches!(err, Err(Error::InvalidPath(_))));
        let ok = PathSpec::new(vec![Segment::Arc {
            center: c(1.0, 0.0),
            radius: 1.0,
            start_angle: -2.0,
            end_angle: 2.0,
        }]);
        assert!(ok.is_ok());
    }

    #[test]
    fn origin_endpoint_requires_flag() {
        let seg = vec![Segment::Line {
            from: c(0.0, 0.0),
            to: c(0.0, 1.0),
        }];
        assert!(PathSpec::new(seg.clone()).is_err());
        assert!(PathSpec::with_removable(seg, true, false).is_ok());
    }

    #[test]
    fn reversal_swaps_flags_and_endpoints() {
        let p = PathSpec::with_removable(
            vec![
                Segment::Line {
                    from: c(0.0, 0.0),
                    to: c(0.0, 1.0),
                },
                Segment::Arc {
                    center: c(0.0, 0.0),
                    radius: 1.0,
                    start_angle: PI / 2.0,
                    end_angle: PI / 4.0,
                },
            ],
            true,
            false,
        )
        .unwrap();
        let r = p.reversed();
        assert!(r.removable_end() && !r.removable_start());
        assert!((r.start().unwrap() - p.end().unwrap()).norm() < 1e-15);
        assert!((r.end().unwrap() - p.start().unwrap()).norm() < 1e-15);
    }
}
