//! Adaptive tracing of the Pareto boundary of the sensing-throughput region.
//!
//! `v(T_S)` is concave and piecewise linear on `[0, s*]`. An interval whose
//! midpoint lies on the chord is a single linear piece (a concave function
//! that touches its chord in the interior is linear there), so recursive
//! bisection with a midpoint collinearity test finds every piece; intervals
//! that keep bending are cut down to `min_interval` and the breakpoint
//! inside them is then recovered by intersecting the neighboring lines.

use std::fmt;

use crate::simplex::OBJECTIVE_TOL;

use super::assignment::SensingThroughputPoint;
use super::program::{max_sensing, max_throughput_at_sensing};
use super::RegionError;
use crate::netmodel::ValidatedNetwork;

/// Default collinearity tolerance on `Δf/Δs`.
pub const DEFAULT_SLOPE_TOL: f64 = 1e-6;
/// Default minimum interval, as a fraction of `s*`.
pub const DEFAULT_MIN_INTERVAL_FRACTION: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentKind {
    /// Vertical edge at `s = s*` from `(s*, 0)` to `X = (s*, f~)`.
    FreeCommunication,
    /// Sloped edge with `Δf/Δs` close to `-1/k`.
    Tradeoff,
    /// Horizontal edge at `f = f*` from `Z = (s~, f*)` to `(0, f*)`.
    FreeSensing,
}

impl fmt::Display for SegmentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SegmentKind::FreeCommunication => "free-communication",
            SegmentKind::Tradeoff => "trade-off",
            SegmentKind::FreeSensing => "free-sensing",
        })
    }
}

/// Edge between two breakpoints of a [`RegionBoundary`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub start: usize,
    pub end: usize,
    pub kind: SegmentKind,
    /// `ds/df` along the edge: `0` for the vertical edge, `-inf` for the
    /// horizontal one, `-k` on an exact trade-off edge.
    pub slope: f64,
    /// Integer `k` with `|Δf/Δs + 1/k| <= slope_tol`, if one exists.
    pub k: Option<u32>,
}

impl Segment {
    /// `Δf/Δs`, the reciprocal orientation of [`Segment::slope`].
    pub fn df_ds(&self) -> f64 {
        1.0 / self.slope
    }
}

/// Pareto boundary: breakpoints ordered by increasing throughput (ties by
/// decreasing sensing) and the edges joining consecutive ones.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionBoundary {
    pub breakpoints: Vec<SensingThroughputPoint>,
    pub segments: Vec<Segment>,
}

impl RegionBoundary {
    pub fn tradeoff_segments(&self) -> impl Iterator<Item = &Segment> {
        self.segments
            .iter()
            .filter(|s| s.kind == SegmentKind::Tradeoff)
    }

    pub fn max_throughput(&self) -> f64 {
        self.breakpoints.last().map_or(0.0, |p| p.throughput)
    }

    pub fn max_sensing(&self) -> f64 {
        self.breakpoints
            .iter()
            .map(|p| p.sensing)
            .fold(0.0, f64::max)
    }

    /// Point `X = (s*, f~)`.
    pub fn x_point(&self) -> Option<SensingThroughputPoint> {
        let s_star = self.max_sensing();
        self.breakpoints
            .iter()
            .rev()
            .find(|p| p.sensing == s_star)
            .copied()
    }

    /// Point `Z = (s~, f*)`.
    pub fn z_point(&self) -> Option<SensingThroughputPoint> {
        let f_star = self.max_throughput();
        self.breakpoints
            .iter()
            .find(|p| p.throughput == f_star)
            .copied()
    }

    pub fn free_communication(&self) -> f64 {
        self.x_point().map_or(0.0, |p| p.throughput)
    }

    pub fn free_sensing(&self) -> f64 {
        self.z_point().map_or(0.0, |p| p.sensing)
    }

    /// Breakpoints strictly between `X` and `Z`.
    pub fn interior_points(&self) -> Vec<SensingThroughputPoint> {
        let (Some(x), Some(z)) = (self.x_point(), self.z_point()) else {
            return Vec::new();
        };
        self.breakpoints
            .iter()
            .filter(|p| p.throughput > x.throughput && p.throughput < z.throughput)
            .copied()
            .collect()
    }

    /// `ds/df` is non-increasing from the maximum-sensing end toward the
    /// maximum-throughput end.
    pub fn is_concave(&self) -> bool {
        self.segments
            .windows(2)
            .all(|w| w[1].slope <= w[0].slope + 1e-9)
    }
}

/// Traces the boundary of the region with the default tolerances.
pub fn trace_region_default(net: &ValidatedNetwork) -> Result<RegionBoundary, RegionError> {
    let s_star = max_sensing(net);
    let min_interval = (s_star * DEFAULT_MIN_INTERVAL_FRACTION).max(f64::MIN_POSITIVE);
    trace_region(net, DEFAULT_SLOPE_TOL, min_interval)
}

/// Traces the boundary of the sensing-throughput region.
pub fn trace_region(
    net: &ValidatedNetwork,
    slope_tol: f64,
    min_interval: f64,
) -> Result<RegionBoundary, RegionError> {
    if !(slope_tol > 0.0) || !(min_interval > 0.0) {
        return Err(RegionError::InvalidParameter(format!(
            "slope_tol and min_interval must be positive (got {slope_tol}, {min_interval})"
        )));
    }
    let v = |t: f64| -> Result<f64, RegionError> { Ok(max_throughput_at_sensing(net, t)?.value) };
    let s_star = max_sensing(net);

    if s_star <= 0.0 {
        let f_star = v(0.0)?;
        let origin = SensingThroughputPoint::new(0.0, 0.0);
        if f_star <= OBJECTIVE_TOL {
            return Ok(RegionBoundary {
                breakpoints: vec![origin],
                segments: Vec::new(),
            });
        }
        return Ok(RegionBoundary {
            breakpoints: vec![origin, SensingThroughputPoint::new(0.0, f_star)],
            segments: vec![Segment {
                start: 0,
                end: 1,
                kind: SegmentKind::FreeCommunication,
                slope: 0.0,
                k: None,
            }],
        });
    }

    let points = subdivide(&v, s_star, slope_tol, min_interval)?;
    let points = merge_collinear(points, slope_tol);
    let points = refine_breakpoints(&v, points, slope_tol, min_interval)?;
    Ok(assemble(points, s_star, slope_tol))
}

fn slope(p: (f64, f64), q: (f64, f64)) -> f64 {
    (q.1 - p.1) / (q.0 - p.0)
}

/// Samples `v` on `[0, s_star]`, returning points in increasing `T`.
fn subdivide(
    v: &impl Fn(f64) -> Result<f64, RegionError>,
    s_star: f64,
    slope_tol: f64,
    min_interval: f64,
) -> Result<Vec<(f64, f64)>, RegionError> {
    let start = (0.0, v(0.0)?);
    let end = (s_star, v(s_star)?);
    let mut points = vec![start];
    let mut stack = vec![(start, end)];
    while let Some((a, b)) = stack.pop() {
        let mid_t = 0.5 * (a.0 + b.0);
        let m = (mid_t, v(mid_t)?);
        if (slope(a, m) - slope(m, b)).abs() <= slope_tol {
            points.push(b);
        } else if b.0 - a.0 <= min_interval {
            points.push(m);
            points.push(b);
        } else {
            stack.push((m, b));
            stack.push((a, m));
        }
    }
    Ok(points)
}

/// Drops interior points that lie on the line through their neighbors.
fn merge_collinear(points: Vec<(f64, f64)>, slope_tol: f64) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(points.len());
    for p in points {
        while out.len() >= 2 {
            let (a, b) = (out[out.len() - 2], out[out.len() - 1]);
            if (slope(a, b) - slope(b, p)).abs() <= slope_tol {
                out.pop();
            } else {
                break;
            }
        }
        out.push(p);
    }
    out
}

/// Replaces a short bridging piece between two long ones by the
/// intersection of the long pieces' lines.
fn refine_breakpoints(
    v: &impl Fn(f64) -> Result<f64, RegionError>,
    mut points: Vec<(f64, f64)>,
    slope_tol: f64,
    min_interval: f64,
) -> Result<Vec<(f64, f64)>, RegionError> {
    let short = 4.0 * min_interval;
    let mut j = 1;
    while j + 2 < points.len() {
        let len = |i: usize, pts: &[(f64, f64)]| pts[i + 1].0 - pts[i].0;
        if len(j, &points) > short || len(j - 1, &points) <= short || len(j + 1, &points) <= short {
            j += 1;
            continue;
        }
        let (p0, p1, p2, p3) = (points[j - 1], points[j], points[j + 1], points[j + 2]);
        let (m1, m2) = (slope(p0, p1), slope(p2, p3));
        if (m1 - m2).abs() <= slope_tol {
            j += 1;
            continue;
        }
        // Lines y = p1.1 + m1 (x - p1.0) and y = p2.1 + m2 (x - p2.0).
        let t = (p2.1 - p1.1 + m1 * p1.0 - m2 * p2.0) / (m1 - m2);
        if t < p1.0 - min_interval || t > p2.0 + min_interval {
            j += 1;
            continue;
        }
        let t = t.clamp(p0.0, p3.0);
        points.splice(j..j + 2, [(t, v(t)?)]);
    }
    Ok(merge_collinear(points, slope_tol))
}

fn assemble(points: Vec<(f64, f64)>, s_star: f64, slope_tol: f64) -> RegionBoundary {
    // Points run from (0, f*) to (s*, f~); the boundary lists them by
    // increasing throughput.
    let clean = |y: f64| if y.abs() <= OBJECTIVE_TOL { 0.0 } else { y };
    // v is non-increasing; solver noise must not reorder the points.
    let mut points = points;
    for i in 1..points.len() {
        let prev = points[i - 1].1;
        if points[i].1 > prev || prev - points[i].1 <= 1e-9 * prev.abs().max(1.0) {
            points[i].1 = prev;
        }
    }
    let mut breakpoints = Vec::with_capacity(points.len() + 1);
    let mut segments = Vec::with_capacity(points.len());

    let f_tilde = clean(points.last().map_or(0.0, |p| p.1));
    if f_tilde > 0.0 {
        breakpoints.push(SensingThroughputPoint::new(s_star, 0.0));
    }
    for &(t, y) in points.iter().rev() {
        breakpoints.push(SensingThroughputPoint::new(t, clean(y)));
    }
    if f_tilde > 0.0 {
        segments.push(Segment {
            start: 0,
            end: 1,
            kind: SegmentKind::FreeCommunication,
            slope: 0.0,
            k: None,
        });
    }
    let offset = usize::from(f_tilde > 0.0);
    for i in offset..breakpoints.len() - 1 {
        let (p, q) = (breakpoints[i], breakpoints[i + 1]);
        let df_ds = (q.throughput - p.throughput) / (q.sensing - p.sensing);
        if df_ds.abs() <= slope_tol {
            segments.push(Segment {
                start: i,
                end: i + 1,
                kind: SegmentKind::FreeSensing,
                slope: f64::NEG_INFINITY,
                k: None,
            });
        } else {
            segments.push(Segment {
                start: i,
                end: i + 1,
                kind: SegmentKind::Tradeoff,
                slope: 1.0 / df_ds,
                k: match_integer_gradient(df_ds, slope_tol),
            });
        }
    }
    RegionBoundary {
        breakpoints,
        segments,
    }
}

/// The positive integer `k` with `|df_ds + 1/k| <= tol`, if any.
pub fn match_integer_gradient(df_ds: f64, tol: f64) -> Option<u32> {
    if !(df_ds < 0.0) {
        return None;
    }
    let k = (-1.0 / df_ds).round();
    (k >= 1.0 && k <= u32::MAX as f64 && (df_ds + 1.0 / k).abs() <= tol).then_some(k as u32)
}
