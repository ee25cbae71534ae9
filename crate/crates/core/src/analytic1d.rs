//! Closed-form region of one-dimensional path networks.
//!
//! On a path `1 - 2 - ... - K` with the source at 1 and the sink at `K`,
//! every forward link carries the full throughput `f`, so the maximum
//! throughput is the smallest capacity and each sensing link keeps
//! `c_u - f` for sensing. The boundary is the line
//! `s = sum_{U(A)} c_u - |U(A)| f` for `f` in `[0, c_min]`.

use std::fmt;

use thiserror::Error;

use crate::netmodel::{sensing_link_sets, NodeId, ValidatedNetwork};
use crate::region::{RegionBoundary, Segment, SegmentKind, SensingThroughputPoint};

/// A network recognized as a one-dimensional path.
#[derive(Debug, Clone)]
pub struct PathNetwork<'a> {
    net: &'a ValidatedNetwork,
    /// Link index of `{j, j+1}` at position `j - 1`.
    order: Vec<usize>,
    c_min: f64,
    sensing_links: usize,
    s_star: f64,
}

/// Why a network is not a path network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NotAPath {
    Endpoints { source: NodeId, sink: NodeId },
    LinkCount { expected: usize, found: usize },
    MissingLink { a: NodeId, b: NodeId },
    EmptySensingArea,
}

impl fmt::Display for NotAPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotAPath::Endpoints { source, sink } => {
                write!(f, "source/sink are {source}/{sink}, path networks need 1/K")
            }
            NotAPath::LinkCount { expected, found } => {
                write!(f, "{found} links, a path over these nodes has {expected}")
            }
            NotAPath::MissingLink { a, b } => write!(f, "link {{{a},{b}}} is missing"),
            NotAPath::EmptySensingArea => f.write_str("no link lies inside the sensing area"),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
#[error("throughput {f} outside [0, {c_min}]")]
pub struct ThroughputOutOfRange {
    pub f: f64,
    pub c_min: f64,
}

/// Recognizes `V = [1:K]`, `U = {{j, j+1}}`, `Tx = 1`, `Rx = K` with a
/// non-empty `U(A)`. Relabelled paths are not detected.
pub fn classify_path(net: &ValidatedNetwork) -> Result<PathNetwork<'_>, NotAPath> {
    let k = net.node_count();
    if net.source() != NodeId(1) || net.sink() != NodeId(k) {
        return Err(NotAPath::Endpoints {
            source: net.source(),
            sink: net.sink(),
        });
    }
    let expected = k as usize - 1;
    if net.links().len() != expected {
        return Err(NotAPath::LinkCount {
            expected,
            found: net.links().len(),
        });
    }
    let mut order = Vec::with_capacity(expected);
    for j in 1..k {
        match net.find_link(NodeId(j), NodeId(j + 1)) {
            Some(idx) => order.push(idx),
            None => {
                return Err(NotAPath::MissingLink {
                    a: NodeId(j),
                    b: NodeId(j + 1),
                })
            }
        }
    }
    let sets = sensing_link_sets(net);
    if sets.u_a.is_empty() {
        return Err(NotAPath::EmptySensingArea);
    }
    let c_min = order
        .iter()
        .map(|&i| net.links()[i].capacity)
        .fold(f64::INFINITY, f64::min);
    let s_star = sets.u_a.iter().map(|&i| net.links()[i].capacity).sum();
    Ok(PathNetwork {
        net,
        order,
        c_min,
        sensing_links: sets.u_a.len(),
        s_star,
    })
}

impl<'a> PathNetwork<'a> {
    pub fn network(&self) -> &'a ValidatedNetwork {
        self.net
    }

    pub fn c_min(&self) -> f64 {
        self.c_min
    }

    /// Number of links `K - 1`.
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Capacities of `{1,2}, {2,3}, ...` in path order.
    pub fn capacities(&self) -> Vec<f64> {
        self.order
            .iter()
            .map(|&i| self.net.links()[i].capacity)
            .collect()
    }

    /// `|U(A)|`.
    pub fn sensing_links(&self) -> usize {
        self.sensing_links
    }

    /// `s* = sum_{U(A)} c_u`.
    pub fn max_sensing(&self) -> f64 {
        self.s_star
    }

    /// Largest throughput at sensing target `t`: the inverse of
    /// [`analytic_boundary`], capped at `c_min`.
    pub fn throughput_at(&self, t: f64) -> f64 {
        ((self.s_star - t) / self.sensing_links as f64)
            .min(self.c_min)
            .max(0.0)
    }
}

/// `f* = c_min`.
pub fn analytic_max_throughput(p: &PathNetwork<'_>) -> f64 {
    p.c_min
}

/// Largest sensing fidelity at throughput `f`.
pub fn analytic_boundary(p: &PathNetwork<'_>, f: f64) -> Result<f64, ThroughputOutOfRange> {
    if !(0.0..=p.c_min).contains(&f) {
        return Err(ThroughputOutOfRange { f, c_min: p.c_min });
    }
    Ok(p.s_star - p.sensing_links as f64 * f)
}

/// The boundary from `(s*, 0)` to `(s* - |U(A)| c_min, c_min)`.
pub fn analytic_region(p: &PathNetwork<'_>) -> RegionBoundary {
    let start = SensingThroughputPoint::new(p.s_star, 0.0);
    if p.c_min <= 0.0 {
        return RegionBoundary {
            breakpoints: vec![start],
            segments: Vec::new(),
        };
    }
    let corner = SensingThroughputPoint::new(p.s_star - p.sensing_links as f64 * p.c_min, p.c_min);
    RegionBoundary {
        breakpoints: vec![start, corner],
        segments: vec![Segment {
            start: 0,
            end: 1,
            kind: SegmentKind::Tradeoff,
            slope: -(p.sensing_links as f64),
            k: Some(p.sensing_links as u32),
        }],
    }
}

/// Free sensing exists iff some sensing link is wider than the bottleneck.
pub fn free_sensing_possible(p: &PathNetwork<'_>) -> bool {
    sensing_link_sets(p.net)
        .u_a
        .iter()
        .any(|&i| p.net.links()[i].capacity > p.c_min)
}
