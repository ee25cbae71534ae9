use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::netmodel::{DirectedLink, NodeId, ValidatedNetwork};
use crate::simplex::FEASIBILITY_TOL;

use super::RegionError;

/// Communication and sensing rate carried by one directed link.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct LinkRates {
    pub comm: f64,
    pub sense: f64,
}

/// Per-directed-link rates `f_e`, `s_e`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RateAssignment {
    rates: BTreeMap<DirectedLink, LinkRates>,
}

/// A single `(s, f)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensingThroughputPoint {
    pub sensing: f64,
    pub throughput: f64,
}

impl SensingThroughputPoint {
    pub fn new(sensing: f64, throughput: f64) -> Self {
        SensingThroughputPoint {
            sensing,
            throughput,
        }
    }
}

impl fmt::Display for SensingThroughputPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(s={}, f={})", self.sensing, self.throughput)
    }
}

/// First constraint an assignment breaks.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Capacity {
        a: NodeId,
        b: NodeId,
        load: f64,
        capacity: f64,
    },
    Conservation {
        node: NodeId,
        imbalance: f64,
    },
    NegativeRate {
        link: DirectedLink,
        value: f64,
    },
    /// Communication into the source or out of the sink.
    Boundary {
        link: DirectedLink,
        value: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Capacity {
                a,
                b,
                load,
                capacity,
            } => write!(f, "link {{{a},{b}}} carries {load} > capacity {capacity}"),
            Violation::Conservation { node, imbalance } => {
                write!(
                    f,
                    "flow conservation violated at node {node} (imbalance {imbalance})"
                )
            }
            Violation::NegativeRate { link, value } => {
                write!(f, "negative rate {value} on {link}")
            }
            Violation::Boundary { link, value } => {
                write!(
                    f,
                    "communication rate {value} on {link} touches the source/sink boundary"
                )
            }
        }
    }
}

impl RateAssignment {
    /// All-zero assignment over the directed links of `net`.
    pub fn zero(net: &ValidatedNetwork) -> Self {
        RateAssignment {
            rates: net
                .directed_links()
                .into_iter()
                .map(|e| (e, LinkRates::default()))
                .collect(),
        }
    }

    pub fn get(&self, link: DirectedLink) -> Option<LinkRates> {
        self.rates.get(&link).copied()
    }

    pub fn comm(&self, link: DirectedLink) -> f64 {
        self.rates.get(&link).map_or(0.0, |r| r.comm)
    }

    pub fn sense(&self, link: DirectedLink) -> f64 {
        self.rates.get(&link).map_or(0.0, |r| r.sense)
    }

    pub fn set(&mut self, link: DirectedLink, rates: LinkRates) {
        self.rates.insert(link, rates);
    }

    pub fn set_comm(&mut self, link: DirectedLink, value: f64) {
        self.rates.entry(link).or_default().comm = value;
    }

    pub fn set_sense(&mut self, link: DirectedLink, value: f64) {
        self.rates.entry(link).or_default().sense = value;
    }

    pub fn iter(&self) -> impl Iterator<Item = (DirectedLink, LinkRates)> + '_ {
        self.rates.iter().map(|(k, v)| (*k, *v))
    }

    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    /// Rescales every communication rate by `comm_factor` and every sensing
    /// rate by `sense_factor`. With both factors in `[0, 1]` a valid
    /// assignment stays valid; this is how any point below the boundary is
    /// certified from a boundary witness.
    pub fn scaled(&self, comm_factor: f64, sense_factor: f64) -> Self {
        RateAssignment {
            rates: self
                .rates
                .iter()
                .map(|(k, r)| {
                    (
                        *k,
                        LinkRates {
                            comm: r.comm * comm_factor,
                            sense: r.sense * sense_factor,
                        },
                    )
                })
                .collect(),
        }
    }

    /// Collapses every undirected link onto a single active direction: the
    /// direction with the larger communication rate keeps the net flow and
    /// all of the link's sensing, the other is zeroed. Sensing fidelity and
    /// throughput are unchanged.
    pub fn one_direction_form(&self, net: &ValidatedNetwork) -> Self {
        let mut out = self.clone();
        for link in net.links() {
            let (fwd, bwd) = (link.forward(), link.backward());
            let (rf, rb) = (
                self.get(fwd).unwrap_or_default(),
                self.get(bwd).unwrap_or_default(),
            );
            let sense = rf.sense + rb.sense;
            let (active, idle) = if rf.comm >= rb.comm {
                (fwd, bwd)
            } else {
                (bwd, fwd)
            };
            let net_flow = rf.comm.max(rb.comm) - rf.comm.min(rb.comm);
            out.set(
                active,
                LinkRates {
                    comm: net_flow,
                    sense,
                },
            );
            out.set(idle, LinkRates::default());
        }
        out
    }

    fn check_link_set(&self, net: &ValidatedNetwork) -> Result<(), RegionError> {
        let expected = net.directed_links();
        if let Some(extra) = self.rates.keys().find(|k| {
            !net.contains(k.from) || !net.contains(k.to) || net.find_link(k.from, k.to).is_none()
        }) {
            return Err(RegionError::LinkSetMismatch {
                link: *extra,
                detail: "not a link of the network",
            });
        }
        if let Some(missing) = expected.iter().find(|e| !self.rates.contains_key(e)) {
            return Err(RegionError::LinkSetMismatch {
                link: *missing,
                detail: "missing from the assignment",
            });
        }
        Ok(())
    }
}

/// Returns the first violated constraint, or `None` if the assignment is
/// valid. Tolerances scale with the capacity magnitude and the number of
/// terms in each row.
pub fn find_violation(
    assign: &RateAssignment,
    net: &ValidatedNetwork,
) -> Result<Option<Violation>, RegionError> {
    assign.check_link_set(net)?;
    let scale = FEASIBILITY_TOL * net.max_capacity().max(1.0);

    for (link, r) in assign.iter() {
        for value in [r.comm, r.sense] {
            if value < -scale || !value.is_finite() {
                return Ok(Some(Violation::NegativeRate { link, value }));
            }
        }
        if (link.to == net.source() || link.from == net.sink()) && r.comm.abs() > scale {
            return Ok(Some(Violation::Boundary {
                link,
                value: r.comm,
            }));
        }
    }

    for link in net.links() {
        let f = assign.get(link.forward()).unwrap_or_default();
        let b = assign.get(link.backward()).unwrap_or_default();
        let load = f.comm + b.comm + f.sense + b.sense;
        if load > link.capacity + 4.0 * scale {
            return Ok(Some(Violation::Capacity {
                a: link.a,
                b: link.b,
                load,
                capacity: link.capacity,
            }));
        }
    }

    for node in net.nodes() {
        if node == net.source() || node == net.sink() {
            continue;
        }
        let incident = net.incident(node);
        let imbalance: f64 = incident
            .iter()
            .map(|inc| {
                assign.comm(DirectedLink::new(inc.neighbor, node))
                    - assign.comm(DirectedLink::new(node, inc.neighbor))
            })
            .sum();
        if imbalance.abs() > 2.0 * incident.len().max(1) as f64 * scale {
            return Ok(Some(Violation::Conservation { node, imbalance }));
        }
    }
    Ok(None)
}

/// Whether `assign` is a valid rate assignment for `net`.
pub fn check_validity(
    assign: &RateAssignment,
    net: &ValidatedNetwork,
) -> Result<bool, RegionError> {
    Ok(find_violation(assign, net)?.is_none())
}

/// Sensing fidelity and throughput achieved by `assign`, without checking
/// validity.
pub fn measure(assign: &RateAssignment, net: &ValidatedNetwork) -> SensingThroughputPoint {
    let mut sensing = 0.0;
    for (idx, link) in net.links().iter().enumerate() {
        if net.link_in_area(idx) {
            sensing += assign.sense(link.forward()) + assign.sense(link.backward());
        }
    }
    let tx = net.source();
    let throughput = net.incident(tx).iter().fold(0.0, |acc, inc| {
        acc + assign.comm(DirectedLink::new(tx, inc.neighbor))
    });
    SensingThroughputPoint {
        sensing,
        throughput,
    }
}

/// Sensing fidelity and throughput of a valid assignment.
pub fn evaluate_point(
    assign: &RateAssignment,
    net: &ValidatedNetwork,
) -> Result<SensingThroughputPoint, RegionError> {
    if let Some(v) = find_violation(assign, net)? {
        return Err(RegionError::InvalidAssignment(v));
    }
    Ok(measure(assign, net))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netmodel::load_network;

    fn k5() -> ValidatedNetwork {
        load_network(
            r#"{"nodes": 5, "source": 1, "sink": 5, "sensing_area": [2, 3, 4],
                "links": [{"a": 1, "b": 2, "capacity": 6}, {"a": 2, "b": 3, "capacity": 5},
                          {"a": 3, "b": 4, "capacity": 6}, {"a": 4, "b": 5, "capacity": 4}]}"#,
        )
        .unwrap()
    }

    fn dl(a: u32, b: u32) -> DirectedLink {
        DirectedLink::new(NodeId(a), NodeId(b))
    }

    #[test]
    fn zero_assignment_is_valid_origin() {
        let net = k5();
        let zero = RateAssignment::zero(&net);
        assert!(check_validity(&zero, &net).unwrap());
        assert_eq!(
            evaluate_point(&zero, &net).unwrap(),
            SensingThroughputPoint::new(0.0, 0.0)
        );
    }

    #[test]
    fn corner_assignment_evaluates_to_3_4() {
        let net = k5();
        let mut a = RateAssignment::zero(&net);
        for j in 1..5 {
            a.set_comm(dl(j, j + 1), 4.0);
        }
        a.set_sense(dl(2, 3), 1.0);
        a.set_sense(dl(3, 4), 2.0);
        assert_eq!(
            evaluate_point(&a, &net).unwrap(),
            SensingThroughputPoint::new(3.0, 4.0)
        );
    }

    #[test]
    fn full_sensing_evaluates_to_s_star() {
        let net = k5();
        let mut a = RateAssignment::zero(&net);
        a.set_sense(dl(2, 3), 5.0);
        a.set_sense(dl(4, 3), 6.0);
        assert_eq!(
            evaluate_point(&a, &net).unwrap(),
            SensingThroughputPoint::new(11.0, 0.0)
        );
    }

    #[test]
    fn conservation_violation_detected() {
        let net = k5();
        let mut a = RateAssignment::zero(&net);
        a.set_comm(dl(1, 2), 4.0);
        a.set_comm(dl(2, 3), 5.0);
        assert!(!check_validity(&a, &net).unwrap());
        assert!(matches!(
            find_violation(&a, &net).unwrap(),
            Some(Violation::Conservation {
                node: NodeId(2),
                ..
            })
        ));
        assert!(matches!(
            evaluate_point(&a, &net),
            Err(RegionError::InvalidAssignment(_))
        ));
    }

    #[test]
    fn capacity_and_sign_violations() {
        let net = k5();
        let mut a = RateAssignment::zero(&net);
        a.set_sense(dl(2, 3), 3.0);
        a.set_sense(dl(3, 2), 3.0);
        assert!(matches!(
            find_violation(&a, &net).unwrap(),
            Some(Violation::Capacity { .. })
        ));
        let mut b = RateAssignment::zero(&net);
        b.set_sense(dl(1, 2), -1.0);
        assert!(matches!(
            find_violation(&b, &net).unwrap(),
            Some(Violation::NegativeRate { .. })
        ));
    }

    #[test]
    fn boundary_convention_enforced() {
        let net = k5();
        let mut a = RateAssignment::zero(&net);
        a.set_comm(dl(2, 1), 1.0);
        a.set_comm(dl(1, 2), 1.0);
        assert!(matches!(
            find_violation(&a, &net).unwrap(),
            Some(Violation::Boundary { .. })
        ));
    }

    #[test]
    fn link_set_mismatch_is_structural() {
        let net = k5();
        let mut a = RateAssignment::zero(&net);
        a.set_comm(dl(1, 3), 0.0);
        assert!(matches!(
            check_validity(&a, &net),
            Err(RegionError::LinkSetMismatch { .. })
        ));
        assert!(matches!(
            check_validity(&RateAssignment::default(), &net),
            Err(RegionError::LinkSetMismatch { .. })
        ));
    }

    #[test]
    fn one_direction_form_cancels_opposing_flow() {
        let net = k5();
        let mut a = RateAssignment::zero(&net);
        for j in 1..5 {
            a.set_comm(dl(j, j + 1), 3.0);
        }
        a.set_comm(dl(3, 2), 0.5);
        a.set_comm(dl(2, 3), 3.5);
        a.set_sense(dl(3, 2), 0.5);
        a.set_sense(dl(2, 3), 0.25);
        assert!(check_validity(&a, &net).unwrap());
        let r = a.one_direction_form(&net);
        assert_eq!(
            r.get(dl(2, 3)).unwrap(),
            LinkRates {
                comm: 3.0,
                sense: 0.75
            }
        );
        assert_eq!(r.get(dl(3, 2)).unwrap(), LinkRates::default());
        assert!(check_validity(&r, &net).unwrap());
        assert_eq!(measure(&a, &net), measure(&r, &net));
    }
}
