//! Sensing-throughput regions of integrated sensing and communication
//! (ISAC) relay networks.
//!
//! Every undirected link time-shares its capacity between the two
//! directions and, inside the sensing area, between carrying traffic and
//! sensing. The crate computes the largest throughput for any sensing
//! target by linear programming, traces the piecewise-linear Pareto
//! boundary, and ships independent checks: a closed form for path networks,
//! an augmenting-path max-flow and a brute-force grid enumeration.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod analytic1d;
pub mod cli;
pub mod maxflow;
pub mod netmodel;
pub mod oracle;
pub mod region;
pub mod simplex;

pub use netmodel::{
    load_network, parse_network, sensing_link_sets, serialize_network, validate_network,
    DirectedLink, NetworkError, NetworkSpec, NodeId, SensingLinkSets, ValidatedNetwork,
};
pub use region::{RateAssignment, RegionBoundary, RegionError, SensingThroughputPoint};
