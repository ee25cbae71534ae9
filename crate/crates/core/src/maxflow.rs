//! Edmonds-Karp maximum flow on capacity-shared undirected links.
//!
//! Each undirected link `{i, j}` holds one signed flow value `x` (positive
//! means `i -> j`); its residual capacity is `c - x` towards `j` and
//! `c + x` towards `i`. Augmenting paths are found by breadth-first search
//! visiting neighbors in ascending node id.

use std::collections::{BTreeMap, VecDeque};

use crate::netmodel::{DirectedLink, NodeId, ValidatedNetwork};

#[derive(Debug, Clone, PartialEq)]
pub struct FlowResult {
    pub value: f64,
    /// Flow on every directed link; at most one direction of each
    /// undirected link is positive.
    pub flow: BTreeMap<DirectedLink, f64>,
    /// Directed links from the source side to the sink side of the final
    /// residual graph.
    pub min_cut: Vec<DirectedLink>,
    pub source_side: Vec<NodeId>,
}

impl FlowResult {
    pub fn cut_capacity(&self, net: &ValidatedNetwork) -> f64 {
        self.min_cut
            .iter()
            .map(|e| {
                net.find_link(e.from, e.to)
                    .map_or(0.0, |i| net.links()[i].capacity)
            })
            .sum()
    }
}

/// Residual capacities below this are treated as saturated.
fn residual_floor(net: &ValidatedNetwork) -> f64 {
    1e-12 * net.max_capacity().max(1.0)
}

pub fn max_flow(net: &ValidatedNetwork) -> FlowResult {
    let links = net.links();
    let mut signed = vec![0.0f64; links.len()];
    let floor = residual_floor(net);
    let n = net.node_count() as usize;
    let residual = |signed: &[f64], link: usize, from: NodeId| {
        let l = &links[link];
        if from == l.a {
            l.capacity - signed[link]
        } else {
            l.capacity + signed[link]
        }
    };

    let mut value = 0.0;
    loop {
        // BFS predecessor: (previous node, link index).
        let mut pred: Vec<Option<(NodeId, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[net.source().index()] = true;
        let mut queue = VecDeque::from([net.source()]);
        while let Some(u) = queue.pop_front() {
            if u == net.sink() {
                break;
            }
            for inc in net.incident(u) {
                let v = inc.neighbor;
                if !seen[v.index()] && residual(&signed, inc.link, u) > floor {
                    seen[v.index()] = true;
                    pred[v.index()] = Some((u, inc.link));
                    queue.push_back(v);
                }
            }
        }
        if !seen[net.sink().index()] {
            let source_side: Vec<NodeId> = net.nodes().filter(|v| seen[v.index()]).collect();
            let mut min_cut = Vec::new();
            for link in links {
                let (a_in, b_in) = (seen[link.a.index()], seen[link.b.index()]);
                if a_in && !b_in {
                    min_cut.push(link.forward());
                } else if b_in && !a_in {
                    min_cut.push(link.backward());
                }
            }
            let mut flow = BTreeMap::new();
            for (i, link) in links.iter().enumerate() {
                flow.insert(link.forward(), signed[i].max(0.0));
                flow.insert(link.backward(), (-signed[i]).max(0.0));
            }
            return FlowResult {
                value,
                flow,
                min_cut,
                source_side,
            };
        }

        let mut bottleneck = f64::INFINITY;
        let mut v = net.sink();
        while let Some((u, link)) = pred[v.index()] {
            bottleneck = bottleneck.min(residual(&signed, link, u));
            v = u;
        }
        let mut v = net.sink();
        while let Some((u, link)) = pred[v.index()] {
            if u == links[link].a {
                signed[link] += bottleneck;
            } else {
                signed[link] -= bottleneck;
            }
            v = u;
        }
        value += bottleneck;
    }
}
