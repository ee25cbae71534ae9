//! Sensing-throughput region of a general network: the rate-allocation
//! programs, the characteristic points `f*`, `s*`, `f~`, `s~`, boundary
//! tracing and witness checking.

mod assignment;
mod program;
mod trace;

use thiserror::Error;

use crate::netmodel::DirectedLink;
use crate::simplex::SimplexError;

pub use assignment::{
    check_validity, evaluate_point, find_violation, measure, LinkRates, RateAssignment,
    SensingThroughputPoint, Violation,
};
pub use program::{
    approx_free_sensing, build_p1, build_p2, free_communication, free_communication_witness,
    has_avoiding_path, max_sensing, max_throughput, max_throughput_at_sensing, FreeSensing,
    RateProgram, Throughput,
};
pub use trace::{
    match_integer_gradient, trace_region, trace_region_default, RegionBoundary, Segment,
    SegmentKind, DEFAULT_MIN_INTERVAL_FRACTION, DEFAULT_SLOPE_TOL,
};

#[derive(Debug, Error, PartialEq)]
pub enum RegionError {
    #[error("sensing target {target} outside [0, {max}]")]
    TargetOutOfRange { target: f64, max: f64 },
    #[error("{0}")]
    InvalidParameter(String),
    #[error("assignment link set mismatch at {link}: {detail}")]
    LinkSetMismatch {
        link: DirectedLink,
        detail: &'static str,
    },
    #[error("invalid assignment: {0}")]
    InvalidAssignment(Violation),
    #[error(transparent)]
    Solver(#[from] SimplexError),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}
