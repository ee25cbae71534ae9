//! Brute-force grid enumeration of the sensing-throughput region for tiny
//! networks.
//!
//! Every undirected link gets one active direction and a communication rate
//! that is a multiple of the grid step; the rest of its capacity, rounded
//! down to the grid, is available for sensing when the link lies in the
//! sensing area. Flow vectors violating conservation are discarded. For
//! each surviving flow the reachable sensing totals form the contiguous grid
//! range `0..=S_max`, so the per-link sensing split never has to be listed
//! one by one.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::analytic1d::classify_path;
use crate::netmodel::ValidatedNetwork;
use crate::region::{check_validity, LinkRates, RateAssignment, SensingThroughputPoint};

/// Enumeration refuses to start beyond this many flow assignments.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub step: f64,
    pub max_links: usize,
    pub budget: u64,
}

impl GridSpec {
    pub fn new(step: f64) -> Self {
        GridSpec {
            step,
            max_links: 5,
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("grid step must be positive, got {0}")]
    InvalidStep(f64),
    #[error("network has {links} links, enumeration is limited to {max}")]
    TooManyLinks { links: usize, max: usize },
    #[error("enumeration of {size} assignments exceeds the budget of {budget}")]
    BudgetExceeded { size: u128, budget: u64 },
    #[error("sensing target {target} is not a multiple of the grid step {step}")]
    TargetNotOnGrid { target: f64, step: f64 },
    #[error("sensing target {target} is not reachable on the grid")]
    TargetUnreachable { target: f64 },
}

/// Best grid flow for one throughput level.
#[derive(Debug, Clone)]
struct Best {
    sensing_units: i64,
    flow_units: Vec<i64>,
}

struct Enumerator<'a> {
    net: &'a ValidatedNetwork,
    levels: Vec<i64>,
    /// Whether link `u` may carry flow `b -> a`.
    backward_allowed: Vec<bool>,
    /// Nodes whose last incident link (in enumeration order) is `u`.
    closes: Vec<Vec<usize>>,
    flow: Vec<i64>,
    /// Net inflow per node, in grid units.
    balance: Vec<i64>,
    best: BTreeMap<i64, Best>,
}

impl Enumerator<'_> {
    fn run(&mut self, u: usize) {
        if u == self.levels.len() {
            self.record();
            return;
        }
        let link = self.net.links()[u];
        let (a, b) = (link.a, link.b);
        let lo = if self.backward_allowed[u] {
            -self.levels[u]
        } else {
            0
        };
        for k in lo..=self.levels[u] {
            // k > 0 is a -> b, k < 0 is b -> a.
            let (from, to) = if k >= 0 { (a, b) } else { (b, a) };
            if k != 0 && (to == self.net.source() || from == self.net.sink()) {
                continue;
            }
            self.flow[u] = k;
            self.balance[a.index()] -= k;
            self.balance[b.index()] += k;
            let closed_ok = self.closes[u].iter().all(|&node| {
                let id = crate::netmodel::NodeId::from_index(node);
                id == self.net.source() || id == self.net.sink() || self.balance[node] == 0
            });
            if closed_ok {
                self.run(u + 1);
            }
            self.balance[a.index()] += k;
            self.balance[b.index()] -= k;
        }
        self.flow[u] = 0;
    }

    fn record(&mut self) {
        let throughput = -self.balance[self.net.source().index()];
        let sensing: i64 = (0..self.levels.len())
            .filter(|&u| self.net.link_in_area(u))
            .map(|u| self.levels[u] - self.flow[u].abs())
            .sum();
        let better = self
            .best
            .get(&throughput)
            .is_none_or(|b| sensing > b.sensing_units);
        if better {
            self.best.insert(
                throughput,
                Best {
                    sensing_units: sensing,
                    flow_units: self.flow.clone(),
                },
            );
        }
    }
}

fn enumerate(net: &ValidatedNetwork, grid: &GridSpec) -> Result<BTreeMap<i64, Best>, OracleError> {
    if !(grid.step > 0.0) || !grid.step.is_finite() {
        return Err(OracleError::InvalidStep(grid.step));
    }
    let links = net.links();
    if links.len() > grid.max_links {
        return Err(OracleError::TooManyLinks {
            links: links.len(),
            max: grid.max_links,
        });
    }
    // Path networks only need the forward orientation.
    let is_path = classify_path(net).is_ok();
    let levels: Vec<i64> = links
        .iter()
        .map(|l| (l.capacity / grid.step + 1e-9).floor() as i64)
        .collect();
    let backward_allowed = vec![!is_path; links.len()];
    let size = levels
        .iter()
        .zip(&backward_allowed)
        .try_fold(1u128, |acc, (&m, &both)| {
            let options = if both {
                2 * m as u128 + 1
            } else {
                m as u128 + 1
            };
            acc.checked_mul(options)
        })
        .unwrap_or(u128::MAX);
    if size > u128::from(grid.budget) {
        return Err(OracleError::BudgetExceeded {
            size,
            budget: grid.budget,
        });
    }

    let n = net.node_count() as usize;
    let mut closes = vec![Vec::new(); links.len()];
    for node in 0..n {
        let last = links
            .iter()
            .rposition(|l| l.a.index() == node || l.b.index() == node);
        if let Some(u) = last {
            closes[u].push(node);
        }
    }
    let mut e = Enumerator {
        net,
        levels,
        backward_allowed,
        closes,
        flow: vec![0; links.len()],
        balance: vec![0; n],
        best: BTreeMap::new(),
    };
    // Relays without any link are trivially balanced.
    e.run(0);
    Ok(e.best)
}

fn witness(net: &ValidatedNetwork, grid: &GridSpec, best: &Best) -> RateAssignment {
    let mut out = RateAssignment::zero(net);
    for (u, link) in net.links().iter().enumerate() {
        let k = best.flow_units[u];
        let active = if k >= 0 {
            link.forward()
        } else {
            link.backward()
        };
        let levels = (link.capacity / grid.step + 1e-9).floor() as i64;
        let sense = if net.link_in_area(u) {
            (levels - k.abs()) as f64 * grid.step
        } else {
            0.0
        };
        out.set(
            active,
            LinkRates {
                comm: k.abs() as f64 * grid.step,
                sense,
            },
        );
    }
    out
}

/// Pareto-maximal grid points of the region, by increasing throughput.
pub fn brute_force_boundary(
    net: &ValidatedNetwork,
    grid: &GridSpec,
) -> Result<Vec<SensingThroughputPoint>, OracleError> {
    let best = enumerate(net, grid)?;
    let mut frontier = Vec::new();
    let mut best_sensing = i64::MIN;
    for (&throughput, b) in best.iter().rev() {
        if b.sensing_units > best_sensing {
            best_sensing = b.sensing_units;
            let w = witness(net, grid, b);
            assert!(
                check_validity(&w, net).unwrap_or(false),
                "enumerated grid assignment failed validation"
            );
            frontier.push(SensingThroughputPoint::new(
                b.sensing_units as f64 * grid.step,
                throughput as f64 * grid.step,
            ));
        }
    }
    frontier.reverse();
    Ok(frontier)
}

/// Largest grid throughput whose sensing range reaches `target`.
pub fn brute_force_max_f(
    net: &ValidatedNetwork,
    target: f64,
    grid: &GridSpec,
) -> Result<f64, OracleError> {
    if !(grid.step > 0.0) {
        return Err(OracleError::InvalidStep(grid.step));
    }
    let units = (target / grid.step).round();
    if units < 0.0 || (units * grid.step - target).abs() > 1e-9 * target.abs().max(1.0) {
        return Err(OracleError::TargetNotOnGrid {
            target,
            step: grid.step,
        });
    }
    let units = units as i64;
    enumerate(net, grid)?
        .iter()
        .rev()
        .find(|(_, b)| b.sensing_units >= units)
        .map(|(&f, _)| f as f64 * grid.step)
        .ok_or(OracleError::TargetUnreachable { target })
}
