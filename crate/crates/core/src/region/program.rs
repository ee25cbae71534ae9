//! The throughput-maximizing linear programs and the quantities derived
//! from them: `v(T_S)`, `f*`, `s*`, free communication and free sensing.

use std::collections::VecDeque;

use crate::netmodel::{sensing_link_sets, ValidatedNetwork};
use crate::simplex::{
    solve_lp, LinearProgram, LpSolution, Relation, FEASIBILITY_TOL, OBJECTIVE_TOL,
};

use super::assignment::{LinkRates, RateAssignment};
use super::RegionError;

/// A rate-allocation LP together with the map from directed links to its
/// variables. Directed link `2u` is the forward direction of undirected link
/// `u`, `2u + 1` the backward one.
#[derive(Debug, Clone)]
pub struct RateProgram {
    pub lp: LinearProgram,
    comm: Vec<Option<usize>>,
    sense: Vec<Option<usize>>,
}

impl RateProgram {
    /// Decodes LP variable values into a rate assignment over all of `E`.
    pub fn assignment(&self, net: &ValidatedNetwork, values: &[f64]) -> RateAssignment {
        let mut out = RateAssignment::zero(net);
        for (e, link) in net.directed_links().into_iter().enumerate() {
            let pick = |v: Option<usize>| v.map_or(0.0, |i| values[i]);
            out.set(
                link,
                LinkRates {
                    comm: pick(self.comm[e]),
                    sense: pick(self.sense[e]),
                },
            );
        }
        out
    }

    pub fn comm_variable(&self, directed_index: usize) -> Option<usize> {
        self.comm[directed_index]
    }

    pub fn sense_variable(&self, directed_index: usize) -> Option<usize> {
        self.sense[directed_index]
    }
}

/// Optimal throughput and the assignment achieving it.
#[derive(Debug, Clone)]
pub struct Throughput {
    pub value: f64,
    pub witness: RateAssignment,
}

/// Result of the free-sensing bisection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeSensing {
    pub value: f64,
    pub lp_calls: u32,
}

/// `s* = sum of c_u over U(A)`.
pub fn max_sensing(net: &ValidatedNetwork) -> f64 {
    sensing_link_sets(net)
        .u_a
        .iter()
        .map(|&i| net.links()[i].capacity)
        .sum()
}

/// Allocates communication variables for every directed link that may carry
/// flow (nothing enters the source or leaves the sink) and, where
/// `with_sensing` selects it, sensing variables.
fn layout(
    net: &ValidatedNetwork,
    comm_allowed: impl Fn(usize) -> bool,
    sense_allowed: impl Fn(usize) -> bool,
) -> (usize, Vec<Option<usize>>, Vec<Option<usize>>) {
    let edges = net.directed_links();
    let mut next = 0;
    let mut comm = Vec::with_capacity(edges.len());
    let mut sense = Vec::with_capacity(edges.len());
    for (e, link) in edges.iter().enumerate() {
        let u = e / 2;
        let usable = link.to != net.source() && link.from != net.sink() && comm_allowed(u);
        comm.push(usable.then(|| {
            next += 1;
            next - 1
        }));
        sense.push(sense_allowed(u).then(|| {
            next += 1;
            next - 1
        }));
    }
    (next, comm, sense)
}

fn add_conservation(net: &ValidatedNetwork, lp: &mut LinearProgram, comm: &[Option<usize>]) {
    for node in net.nodes() {
        if node == net.source() || node == net.sink() {
            continue;
        }
        let mut terms = Vec::new();
        for inc in net.incident(node) {
            let link = &net.links()[inc.link];
            // Directed index of node -> neighbor and neighbor -> node.
            let (out_e, in_e) = if link.a == node {
                (2 * inc.link, 2 * inc.link + 1)
            } else {
                (2 * inc.link + 1, 2 * inc.link)
            };
            if let Some(v) = comm[in_e] {
                terms.push((v, 1.0));
            }
            if let Some(v) = comm[out_e] {
                terms.push((v, -1.0));
            }
        }
        if !terms.is_empty() {
            lp.add_sparse(&terms, Relation::Eq, 0.0);
        }
    }
}

fn set_throughput_objective(
    net: &ValidatedNetwork,
    lp: &mut LinearProgram,
    comm: &[Option<usize>],
) {
    let tx = net.source();
    for inc in net.incident(tx) {
        let link = &net.links()[inc.link];
        let out_e = if link.a == tx {
            2 * inc.link
        } else {
            2 * inc.link + 1
        };
        if let Some(v) = comm[out_e] {
            lp.objective[v] = 1.0;
        }
    }
}

/// Clamps `target` into `[0, s*]` when it is within tolerance of the
/// interval, and rejects it otherwise.
fn checked_target(net: &ValidatedNetwork, target: f64) -> Result<f64, RegionError> {
    let s_star = max_sensing(net);
    let tol = FEASIBILITY_TOL * s_star.max(1.0);
    if !target.is_finite() || target < -tol || target > s_star + tol {
        return Err(RegionError::TargetOutOfRange {
            target,
            max: s_star,
        });
    }
    Ok(target.clamp(0.0, s_star))
}

/// Builds the throughput LP at sensing target `target`: maximize the rate
/// leaving the source subject to the per-link budget
/// `f_ij + f_ji + s_ij + s_ji <= c_ij`, flow conservation at relays, and
/// total sensing over `E(A)` equal to the target.
pub fn build_p1(net: &ValidatedNetwork, target: f64) -> Result<RateProgram, RegionError> {
    let target = checked_target(net, target)?;
    let (n, comm, sense) = layout(net, |_| true, |u| net.link_in_area(u));
    let mut lp = LinearProgram::new(n);

    for (u, link) in net.links().iter().enumerate() {
        let terms: Vec<(usize, f64)> =
            [comm[2 * u], comm[2 * u + 1], sense[2 * u], sense[2 * u + 1]]
                .into_iter()
                .flatten()
                .map(|v| (v, 1.0))
                .collect();
        if !terms.is_empty() {
            lp.add_sparse(&terms, Relation::Le, link.capacity);
        }
    }
    add_conservation(net, &mut lp, &comm);

    let sensing_terms: Vec<(usize, f64)> = sense.iter().flatten().map(|&v| (v, 1.0)).collect();
    if !sensing_terms.is_empty() {
        lp.add_sparse(&sensing_terms, Relation::Eq, target);
    }
    set_throughput_objective(net, &mut lp, &comm);
    Ok(RateProgram { lp, comm, sense })
}

/// Builds the reduced LP used at maximum sensing: links of `E(A)` carry no
/// communication, every other undirected link shares its capacity between
/// its two directions.
pub fn build_p2(net: &ValidatedNetwork) -> RateProgram {
    let (n, comm, sense) = layout(net, |u| !net.link_in_area(u), |_| false);
    let mut lp = LinearProgram::new(n);
    for (u, link) in net.links().iter().enumerate() {
        let terms: Vec<(usize, f64)> = [comm[2 * u], comm[2 * u + 1]]
            .into_iter()
            .flatten()
            .map(|v| (v, 1.0))
            .collect();
        if !terms.is_empty() {
            lp.add_sparse(&terms, Relation::Le, link.capacity);
        }
    }
    add_conservation(net, &mut lp, &comm);
    set_throughput_objective(net, &mut lp, &comm);
    RateProgram { lp, comm, sense }
}

fn solve_rate_program(
    net: &ValidatedNetwork,
    program: &RateProgram,
    what: &str,
) -> Result<Throughput, RegionError> {
    match solve_lp(&program.lp)? {
        LpSolution::Optimal { objective, values } => {
            let value = if objective < 0.0 && objective > -OBJECTIVE_TOL {
                0.0
            } else {
                objective
            };
            Ok(Throughput {
                value,
                witness: program.assignment(net, &values),
            })
        }
        other => Err(RegionError::Inconsistent(format!(
            "{what} reported {:?}",
            other.status()
        ))),
    }
}

/// `v(T_S)`: the largest throughput compatible with sensing fidelity
/// `target`, with a witness assignment.
pub fn max_throughput_at_sensing(
    net: &ValidatedNetwork,
    target: f64,
) -> Result<Throughput, RegionError> {
    let program = build_p1(net, target)?;
    solve_rate_program(net, &program, &format!("throughput LP at sensing {target}"))
}

/// `f* = v(0)`.
pub fn max_throughput(net: &ValidatedNetwork) -> Result<f64, RegionError> {
    Ok(max_throughput_at_sensing(net, 0.0)?.value)
}

/// Throughput at maximum sensing, with a witness of `(s*, f~)`: the P2
/// flow plus full-capacity sensing on the forward direction of every link
/// in `U(A)`.
pub fn free_communication_witness(net: &ValidatedNetwork) -> Result<Throughput, RegionError> {
    let mut result = solve_rate_program(net, &build_p2(net), "free-communication LP")?;
    for (u, link) in net.links().iter().enumerate() {
        if net.link_in_area(u) {
            result.witness.set_sense(link.forward(), link.capacity);
        }
    }
    Ok(result)
}

/// `f~ = max{f : (s*, f) in R}`.
pub fn free_communication(net: &ValidatedNetwork) -> Result<f64, RegionError> {
    Ok(free_communication_witness(net)?.value)
}

/// Whether a source-to-sink path exists over positive-capacity links
/// outside the sensing region.
pub fn has_avoiding_path(net: &ValidatedNetwork) -> bool {
    let mut seen = vec![false; net.node_count() as usize];
    let mut queue = VecDeque::from([net.source()]);
    seen[net.source().index()] = true;
    while let Some(node) = queue.pop_front() {
        if node == net.sink() {
            return true;
        }
        for inc in net.incident(node) {
            if net.link_in_area(inc.link) || net.links()[inc.link].capacity <= 0.0 {
                continue;
            }
            if !seen[inc.neighbor.index()] {
                seen[inc.neighbor.index()] = true;
                queue.push_back(inc.neighbor);
            }
        }
    }
    false
}

/// Bisection for the largest sensing fidelity at which the throughput still
/// reaches `f*`. Returns `s'` with `s' >= s~ - delta`.
///
/// `lp_calls` counts every throughput LP solved, including the one for
/// `f* = v(0)`; it is zero when `s* <= delta` and no search is needed.
pub fn approx_free_sensing(net: &ValidatedNetwork, delta: f64) -> Result<FreeSensing, RegionError> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(RegionError::InvalidParameter(format!(
            "delta must be positive, got {delta}"
        )));
    }
    let mut lower = 0.0;
    let mut upper = max_sensing(net);
    if upper - lower <= delta {
        return Ok(FreeSensing {
            value: 0.0,
            lp_calls: 0,
        });
    }
    let f_star = max_throughput(net)?;
    let mut lp_calls = 1;
    while upper - lower > delta {
        let mid = (lower + upper) / 2.0;
        let v = max_throughput_at_sensing(net, mid)?.value;
        lp_calls += 1;
        if (v - f_star).abs() <= OBJECTIVE_TOL {
            lower = mid;
        } else {
            upper = mid;
        }
    }
    Ok(FreeSensing {
        value: lower,
        lp_calls,
    })
}
