use crate::error::{invalid, Result};
use crate::quadrature::{gauss_legendre, Rule};
use std::f64::consts::PI;

pub type Point = [f64; 2];

/// One smooth piece of a boundary, traversed as its local parameter `s` runs
/// over `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub enum CurveSegment {
    /// `(a cos t, b sin t)` for `t` running from `t0` to `t1`; `t1 < t0`
    /// means the arc is traversed clockwise.
    EllipticArc { a: f64, b: f64, t0: f64, t1: f64 },
    Straight { p0: Point, p1: Point },
}

impl CurveSegment {
    pub fn point(&self, s: f64) -> Point {
        match *self {
            CurveSegment::EllipticArc { a, b, t0, t1 } => {
                let t = t0 + s * (t1 - t0);
                [a * t.cos(), b * t.sin()]
            }
            CurveSegment::Straight { p0, p1 } => {
                [p0[0] + s * (p1[0] - p0[0]), p0[1] + s * (p1[1] - p0[1])]
            }
        }
    }

    /// Derivative of [`point`](Self::point) with respect to `s`.
    pub fn derivative(&self, s: f64) -> Point {
        match *self {
            CurveSegment::EllipticArc { a, b, t0, t1 } => {
                let dt = t1 - t0;
                let t = t0 + s * dt;
                [-a * t.sin() * dt, b * t.cos() * dt]
            }
            CurveSegment::Straight { p0, p1 } => [p1[0] - p0[0], p1[1] - p0[1]],
        }
    }

    pub fn speed(&self, s: f64) -> f64 {
        let d = self.derivative(s);
        d[0].hypot(d[1])
    }

    pub fn start(&self) -> Point {
        self.point(0.0)
    }

    pub fn end(&self) -> Point {
        self.point(1.0)
    }

    fn validate(&self) -> Result<()> {
        match *self {
            CurveSegment::EllipticArc { a, b, t0, t1 } => {
                if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
                    return Err(invalid(format!("elliptic arc semi-axes ({a}, {b}) must be positive")));
                }
                if !(t0.is_finite() && t1.is_finite()) || t0 == t1 {
                    return Err(invalid("elliptic arc parameter interval is degenerate"));
                }
            }
            CurveSegment::Straight { p0, p1 } => {
                if p0 == p1 || !p0.iter().chain(&p1).all(|v| v.is_finite()) {
                    return Err(invalid("straight segment is degenerate"));
                }
            }
        }
        Ok(())
    }
}

/// Arclength of one segment, tabulated on panels for fast inversion.
#[derive(Debug, Clone)]
pub(crate) struct ArclengthTable {
    panels: usize,
    cumulative: Vec<f64>,
    rule: Rule,
}

impl ArclengthTable {
    pub(crate) fn new(seg: &CurveSegment) -> Self {
        let panels = match seg {
            CurveSegment::Straight { .. } => 1,
            CurveSegment::EllipticArc { .. } => 64,
        };
        let rule = gauss_legendre(16);
        let mut cumulative = vec![0.0; panels + 1];
        for p in 0..panels {
            let (lo, hi) = (p as f64 / panels as f64, (p + 1) as f64 / panels as f64);
            cumulative[p + 1] = cumulative[p] + integrate(seg, &rule, lo, hi);
        }
        ArclengthTable { panels, cumulative, rule }
    }

    pub(crate) fn total(&self) -> f64 {
        self.cumulative[self.panels]
    }

    /// Arclength from the segment start to local parameter `s`.
    pub(crate) fn length_to(&self, seg: &CurveSegment, s: f64) -> f64 {
        let s = s.clamp(0.0, 1.0);
        let p = ((s * self.panels as f64) as usize).min(self.panels - 1);
        let lo = p as f64 / self.panels as f64;
        self.cumulative[p] + integrate(seg, &self.rule, lo, s)
    }

    /// Local parameter at which the arclength from the start equals `target`.
    pub(crate) fn invert(&self, seg: &CurveSegment, target: f64) -> f64 {
        let total = self.total();
        if target <= 0.0 {
            return 0.0;
        }
        if target >= total {
            return 1.0;
        }
        let (mut lo, mut hi) = (0.0, 1.0);
        let mut s = target / total;
        for _ in 0..100 {
            let f = self.length_to(seg, s) - target;
            if f > 0.0 {
                hi = s;
            } else {
                lo = s;
            }
            if f.abs() <= 1e-15 * total {
                break;
            }
            let mut next = s - f / seg.speed(s);
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - s).abs() < 1e-16 {
                s = next;
                break;
            }
            s = next;
        }
        s
    }
}

fn integrate(seg: &CurveSegment, rule: &Rule, lo: f64, hi: f64) -> f64 {
    let w = hi - lo;
    rule.nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&x, &wt)| wt * seg.speed(lo + w * x))
        .sum::<f64>()
        * w
}

/// Closed, positively oriented chain of segments.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve {
    pub name: String,
    pub segments: Vec<CurveSegment>,
}

impl BoundaryCurve {
    pub fn new(name: impl Into<String>, segments: Vec<CurveSegment>) -> Result<Self> {
        let curve = BoundaryCurve { name: name.into(), segments };
        curve.validate()?;
        Ok(curve)
    }

    pub fn validate(&self) -> Result<()> {
        if self.segments.is_empty() {
            return Err(invalid("curve has no segments"));
        }
        for s in &self.segments {
            s.validate()?;
        }
        let n = self.segments.len();
        for i in 0..n {
            let a = self.segments[i].end();
            let b = self.segments[(i + 1) % n].start();
            if (a[0] - b[0]).hypot(a[1] - b[1]) > 1e-12 {
                return Err(invalid(format!("segment {i} does not join segment {}", (i + 1) % n)));
            }
        }
        if self.signed_area() <= 0.0 {
            return Err(invalid("curve is not positively oriented"));
        }
        Ok(())
    }

    pub fn is_closed(&self) -> bool {
        let a = self.segments.last().map(|s| s.end());
        let b = self.segments.first().map(|s| s.start());
        match (a, b) {
            (Some(a), Some(b)) => (a[0] - b[0]).hypot(a[1] - b[1]) <= 1e-12,
            _ => false,
        }
    }

    pub fn segment_lengths(&self) -> Vec<f64> {
        self.segments.iter().map(|s| ArclengthTable::new(s).total()).collect()
    }

    pub fn perimeter(&self) -> f64 {
        self.segment_lengths().iter().sum()
    }

    /// Enclosed area by `1/2 ∮ (x dy - y dx)`.
    pub fn signed_area(&self) -> f64 {
        let rule = gauss_legendre(16);
        let panels = 64;
        let mut area = 0.0;
        for seg in &self.segments {
            for p in 0..panels {
                let lo = p as f64 / panels as f64;
                for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
                    let s = lo + x / panels as f64;
                    let q = seg.point(s);
                    let d = seg.derivative(s);
                    area += 0.5 * w / panels as f64 * (q[0] * d[1] - q[1] * d[0]);
                }
            }
        }
        area
    }
}

/// Elliptic cavity with inner arc `(cos t, 0.5 sin t)`, `|t| ≤ phi0`, outer arc
/// `(1.3 cos t, 0.6 sin t)`, `|t| ≤ phi1` with `cos phi1 = cos(phi0)/1.3`,
/// joined by vertical caps at `x = cos phi0`.
pub fn make_cavity(phi0: f64) -> Result<BoundaryCurve> {
    if !(phi0 > PI / 2.0 && phi0 < PI) {
        return Err(invalid(format!("cavity angle {phi0} must lie in (pi/2, pi)")));
    }
    let (a_in, b_in, a_out, b_out) = (1.0, 0.5, 1.3, 0.6);
    let phi1 = (phi0.cos() / a_out).acos();
    let xc = phi0.cos();
    let top_in = [xc, b_in * phi0.sin()];
    let top_out = [a_out * phi1.cos(), b_out * phi1.sin()];
    let segments = vec![
        CurveSegment::EllipticArc { a: a_out, b: b_out, t0: -phi1, t1: phi1 },
        CurveSegment::Straight { p0: top_out, p1: top_in },
        CurveSegment::EllipticArc { a: a_in, b: b_in, t0: phi0, t1: -phi0 },
        CurveSegment::Straight {
            p0: [top_in[0], -top_in[1]],
            p1: [top_out[0], -top_out[1]],
        },
    ];
    BoundaryCurve::new(format!("cavity({phi0})"), segments)
}

pub fn make_small_cavity() -> BoundaryCurve {
    let mut c = make_cavity(0.7 * PI).expect("valid cavity angle");
    c.name = "small-cavity".into();
    c
}

pub fn make_large_cavity() -> BoundaryCurve {
    let mut c = make_cavity(0.9 * PI).expect("valid cavity angle");
    c.name = "large-cavity".into();
    c
}

pub fn make_ellipse(a1: f64, a2: f64) -> Result<BoundaryCurve> {
    if !(a1 > a2 && a2 > 0.0 && a1.is_finite()) {
        return Err(invalid(format!("ellipse needs a1 > a2 > 0, got ({a1}, {a2})")));
    }
    BoundaryCurve::new(
        format!("ellipse({a1},{a2})"),
        vec![CurveSegment::EllipticArc { a: a1, b: a2, t0: 0.0, t1: 2.0 * PI }],
    )
}

pub fn make_circle(radius: f64) -> Result<BoundaryCurve> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(invalid(format!("circle radius {radius} must be positive")));
    }
    BoundaryCurve::new(
        format!("circle({radius})"),
        vec![CurveSegment::EllipticArc { a: radius, b: radius, t0: 0.0, t1: 2.0 * PI }],
    )
}
