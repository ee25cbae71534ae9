//! Network data model: nodes, capacity-shared undirected links, the
//! source/sink pair and the sensing area.
//!
//! A [`NetworkSpec`] is the raw, syntactically well-formed content of a
//! network file. [`validate_network`] checks every structural invariant and
//! produces a [`ValidatedNetwork`], which carries the derived undirected link
//! set, the directed closure and per-node adjacency used by the solvers.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// 1-based node identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    /// Zero-based position of the node, for indexing per-node tables.
    pub fn index(self) -> usize {
        (self.0 as usize).wrapping_sub(1)
    }

    pub fn from_index(index: usize) -> Self {
        NodeId(index as u32 + 1)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Directed link `(from, to)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DirectedLink {
    pub from: NodeId,
    pub to: NodeId,
}

impl DirectedLink {
    pub fn new(from: NodeId, to: NodeId) -> Self {
        DirectedLink { from, to }
    }

    pub fn reversed(self) -> Self {
        DirectedLink {
            from: self.to,
            to: self.from,
        }
    }
}

impl fmt::Display for DirectedLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.from, self.to)
    }
}

/// One undirected link record as it appears in a network file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkSpec {
    pub a: NodeId,
    pub b: NodeId,
    pub capacity: f64,
}

/// Unvalidated network description, field-for-field the file format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSpec {
    #[serde(rename = "nodes")]
    pub node_count: u32,
    pub source: NodeId,
    pub sink: NodeId,
    #[serde(default)]
    pub sensing_area: Vec<NodeId>,
    #[serde(default)]
    pub links: Vec<LinkSpec>,
}

#[derive(Debug, Error, PartialEq)]
pub enum NetworkError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate link between nodes {a} and {b}")]
    DuplicateLink { a: NodeId, b: NodeId },
    #[error("self-loop at node {node}")]
    SelfLoop { node: NodeId },
    #[error("source and sink are both node {node}")]
    SourceIsSink { node: NodeId },
    #[error("{role} node {node} is outside [1:{node_count}]")]
    NodeOutOfRange {
        role: &'static str,
        node: NodeId,
        node_count: u32,
    },
    #[error("link {{{a},{b}}} has invalid capacity {capacity} (must be finite and non-negative)")]
    InvalidCapacity { a: NodeId, b: NodeId, capacity: f64 },
}

/// Undirected link with canonical endpoint order `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UndirectedLink {
    pub a: NodeId,
    pub b: NodeId,
    pub capacity: f64,
}

impl UndirectedLink {
    /// The `a -> b` direction.
    pub fn forward(&self) -> DirectedLink {
        DirectedLink::new(self.a, self.b)
    }

    /// The `b -> a` direction.
    pub fn backward(&self) -> DirectedLink {
        DirectedLink::new(self.b, self.a)
    }

    pub fn other_end(&self, node: NodeId) -> NodeId {
        if node == self.a {
            self.b
        } else {
            self.a
        }
    }
}

/// Incidence entry of the adjacency index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Incidence {
    pub neighbor: NodeId,
    pub link: usize,
}

/// A network whose invariants have been checked, together with its derived
/// link sets. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedNetwork {
    node_count: u32,
    source: NodeId,
    sink: NodeId,
    sensing_area: BTreeSet<NodeId>,
    links: Vec<UndirectedLink>,
    in_area: Vec<bool>,
    adjacency: Vec<Vec<Incidence>>,
}

/// The links that perform sensing: `U(A)` and its directed closure `E(A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SensingLinkSets {
    /// Indices into [`ValidatedNetwork::links`].
    pub u_a: Vec<usize>,
    pub e_a: Vec<DirectedLink>,
}

/// Parses network-file text. Only syntax is checked here, plus duplicate
/// unordered link pairs.
pub fn parse_network(text: &str) -> Result<NetworkSpec, NetworkError> {
    let spec: NetworkSpec = serde_json::from_str(text).map_err(|e| NetworkError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut seen = HashSet::new();
    for link in &spec.links {
        let key = (link.a.min(link.b), link.a.max(link.b));
        if !seen.insert(key) {
            return Err(NetworkError::DuplicateLink { a: key.0, b: key.1 });
        }
    }
    Ok(spec)
}

/// Checks all structural invariants and builds the derived indices.
pub fn validate_network(spec: &NetworkSpec) -> Result<ValidatedNetwork, NetworkError> {
    let n = spec.node_count;
    let in_range = |node: NodeId| node.0 >= 1 && node.0 <= n;
    let check = |role: &'static str, node: NodeId| {
        if in_range(node) {
            Ok(())
        } else {
            Err(NetworkError::NodeOutOfRange {
                role,
                node,
                node_count: n,
            })
        }
    };

    check("source", spec.source)?;
    check("sink", spec.sink)?;
    if spec.source == spec.sink {
        return Err(NetworkError::SourceIsSink { node: spec.source });
    }
    for &node in &spec.sensing_area {
        check("sensing-area", node)?;
    }

    let sensing_area: BTreeSet<NodeId> = spec.sensing_area.iter().copied().collect();
    let mut links = Vec::with_capacity(spec.links.len());
    let mut seen = HashSet::new();
    for link in &spec.links {
        if link.a == link.b {
            return Err(NetworkError::SelfLoop { node: link.a });
        }
        check("link endpoint", link.a)?;
        check("link endpoint", link.b)?;
        if !link.capacity.is_finite() || link.capacity < 0.0 {
            return Err(NetworkError::InvalidCapacity {
                a: link.a,
                b: link.b,
                capacity: link.capacity,
            });
        }
        let (a, b) = (link.a.min(link.b), link.a.max(link.b));
        if !seen.insert((a, b)) {
            return Err(NetworkError::DuplicateLink { a, b });
        }
        links.push(UndirectedLink {
            a,
            b,
            capacity: link.capacity,
        });
    }

    let in_area = links
        .iter()
        .map(|l| sensing_area.contains(&l.a) && sensing_area.contains(&l.b))
        .collect();

    let mut adjacency = vec![Vec::new(); n as usize];
    for (idx, link) in links.iter().enumerate() {
        adjacency[link.a.index()].push(Incidence {
            neighbor: link.b,
            link: idx,
        });
        adjacency[link.b.index()].push(Incidence {
            neighbor: link.a,
            link: idx,
        });
    }
    for list in &mut adjacency {
        list.sort_by_key(|inc| inc.neighbor);
    }

    Ok(ValidatedNetwork {
        node_count: n,
        source: spec.source,
        sink: spec.sink,
        sensing_area,
        links,
        in_area,
        adjacency,
    })
}

/// Parse and validate in one step.
pub fn load_network(text: &str) -> Result<ValidatedNetwork, NetworkError> {
    validate_network(&parse_network(text)?)
}

/// Derives `U(A)` and `E(A)`.
pub fn sensing_link_sets(net: &ValidatedNetwork) -> SensingLinkSets {
    let u_a: Vec<usize> = (0..net.links.len()).filter(|&i| net.in_area[i]).collect();
    let e_a = u_a
        .iter()
        .flat_map(|&i| [net.links[i].forward(), net.links[i].backward()])
        .collect();
    SensingLinkSets { u_a, e_a }
}

impl ValidatedNetwork {
    pub fn node_count(&self) -> u32 {
        self.node_count
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn sink(&self) -> NodeId {
        self.sink
    }

    pub fn sensing_area(&self) -> &BTreeSet<NodeId> {
        &self.sensing_area
    }

    /// The undirected link set `U`, in file order.
    pub fn links(&self) -> &[UndirectedLink] {
        &self.links
    }

    /// Whether link `idx` belongs to `U(A)`.
    pub fn link_in_area(&self, idx: usize) -> bool {
        self.in_area[idx]
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (1..=self.node_count).map(NodeId)
    }

    /// Links incident to `node`, sorted by neighbor id.
    pub fn incident(&self, node: NodeId) -> &[Incidence] {
        &self.adjacency[node.index()]
    }

    /// The directed edge set `E`: for link `u`, entries `2u` and `2u + 1`
    /// are its forward and backward directions.
    pub fn directed_links(&self) -> Vec<DirectedLink> {
        self.links
            .iter()
            .flat_map(|l| [l.forward(), l.backward()])
            .collect()
    }

    /// Index of the undirected link joining `a` and `b`, if any.
    pub fn find_link(&self, a: NodeId, b: NodeId) -> Option<usize> {
        if !self.contains(a) || !self.contains(b) {
            return None;
        }
        self.incident(a)
            .binary_search_by_key(&b, |inc| inc.neighbor)
            .ok()
            .map(|pos| self.incident(a)[pos].link)
    }

    pub fn contains(&self, node: NodeId) -> bool {
        node.0 >= 1 && node.0 <= self.node_count
    }

    pub fn max_capacity(&self) -> f64 {
        self.links.iter().map(|l| l.capacity).fold(0.0, f64::max)
    }

    /// Back to the file representation.
    pub fn to_spec(&self) -> NetworkSpec {
        NetworkSpec {
            node_count: self.node_count,
            source: self.source,
            sink: self.sink,
            sensing_area: self.sensing_area.iter().copied().collect(),
            links: self
                .links
                .iter()
                .map(|l| LinkSpec {
                    a: l.a,
                    b: l.b,
                    capacity: l.capacity,
                })
                .collect(),
        }
    }
}

/// Serializes a network to file text.
pub fn serialize_network(net: &ValidatedNetwork) -> String {
    serde_json::to_string_pretty(&net.to_spec()).expect("network spec always serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const K5_PATH: &str = r#"{
        "nodes": 5, "source": 1, "sink": 5, "sensing_area": [2, 3, 4],
        "links": [
            {"a": 1, "b": 2, "capacity": 6},
            {"a": 2, "b": 3, "capacity": 5},
            {"a": 3, "b": 4, "capacity": 6},
            {"a": 4, "b": 5, "capacity": 4}
        ]
    }"#;

    #[test]
    fn parses_minimal_network() {
        let spec = parse_network(
            r#"{"nodes": 2, "source": 1, "sink": 2, "sensing_area": [1, 2],
                "links": [{"a": 1, "b": 2, "capacity": 5}]}"#,
        )
        .unwrap();
        assert_eq!(spec.links.len(), 1);
        assert_eq!(spec.links[0].capacity, 5.0);
    }

    #[test]
    fn parses_k5_path() {
        let spec = parse_network(K5_PATH).unwrap();
        assert_eq!(spec.links.len(), 4);
        let net = validate_network(&spec).unwrap();
        assert_eq!(net.links().len(), 4);
        assert_eq!(net.directed_links().len(), 8);
    }

    #[test]
    fn scientific_notation_capacity() {
        let spec = parse_network(
            r#"{"nodes": 2, "source": 1, "sink": 2, "links": [{"a": 1, "b": 2, "capacity": 2.5e3}]}"#,
        )
        .unwrap();
        assert_eq!(spec.links[0].capacity, 2500.0);
    }

    #[test]
    fn self_loop_rejected() {
        let spec = parse_network(
            r#"{"nodes": 3, "source": 1, "sink": 2, "links": [{"a": 3, "b": 3, "capacity": 1}]}"#,
        )
        .unwrap();
        let err = validate_network(&spec).unwrap_err();
        assert_eq!(err, NetworkError::SelfLoop { node: NodeId(3) });
        assert_eq!(err.to_string(), "self-loop at node 3");
    }

    #[test]
    fn duplicate_link_rejected_in_either_orientation() {
        let err = parse_network(
            r#"{"nodes": 3, "source": 1, "sink": 2,
                "links": [{"a": 1, "b": 2, "capacity": 1}, {"a": 2, "b": 1, "capacity": 3}]}"#,
        )
        .unwrap_err();
        assert_eq!(
            err,
            NetworkError::DuplicateLink {
                a: NodeId(1),
                b: NodeId(2)
            }
        );
    }

    #[test]
    fn malformed_text_reports_location() {
        let err = parse_network("{\n  \"nodes\": 2,\n  \"source\": oops\n}").unwrap_err();
        match err {
            NetworkError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_network(r#"{"nodes": 2, "source": 1, "sink": 2, "extra": 1}"#),
            Err(NetworkError::Parse { .. })
        ));
    }

    #[test]
    fn negative_capacity_rejected() {
        let spec = parse_network(
            r#"{"nodes": 2, "source": 1, "sink": 2, "links": [{"a": 1, "b": 2, "capacity": -1}]}"#,
        )
        .unwrap();
        assert!(matches!(
            validate_network(&spec),
            Err(NetworkError::InvalidCapacity { .. })
        ));
    }

    #[test]
    fn endpoint_errors() {
        let same = parse_network(r#"{"nodes": 2, "source": 1, "sink": 1}"#).unwrap();
        assert_eq!(
            validate_network(&same),
            Err(NetworkError::SourceIsSink { node: NodeId(1) })
        );
        let out = parse_network(
            r#"{"nodes": 2, "source": 1, "sink": 2, "links": [{"a": 1, "b": 7, "capacity": 1}]}"#,
        )
        .unwrap();
        assert!(matches!(
            validate_network(&out),
            Err(NetworkError::NodeOutOfRange {
                node: NodeId(7),
                ..
            })
        ));
        let area =
            parse_network(r#"{"nodes": 2, "source": 1, "sink": 2, "sensing_area": [0]}"#).unwrap();
        assert!(matches!(
            validate_network(&area),
            Err(NetworkError::NodeOutOfRange {
                node: NodeId(0),
                ..
            })
        ));
    }

    #[test]
    fn sensing_sets_of_k5_path() {
        let net = load_network(K5_PATH).unwrap();
        let sets = sensing_link_sets(&net);
        let pairs: Vec<_> = sets
            .u_a
            .iter()
            .map(|&i| (net.links()[i].a.0, net.links()[i].b.0))
            .collect();
        assert_eq!(pairs, vec![(2, 3), (3, 4)]);
        assert_eq!(sets.e_a.len(), 4);
    }

    #[test]
    fn sensing_sets_degenerate_areas() {
        let mut spec = parse_network(K5_PATH).unwrap();
        spec.sensing_area = (1..=5).map(NodeId).collect();
        let full = validate_network(&spec).unwrap();
        assert_eq!(sensing_link_sets(&full).u_a, vec![0, 1, 2, 3]);

        spec.sensing_area = vec![NodeId(1)];
        let single = validate_network(&spec).unwrap();
        assert!(sensing_link_sets(&single).u_a.is_empty());

        spec.sensing_area = vec![];
        let empty = validate_network(&spec).unwrap();
        assert!(sensing_link_sets(&empty).e_a.is_empty());
    }

    #[test]
    fn find_link_is_symmetric() {
        let net = load_network(K5_PATH).unwrap();
        assert_eq!(net.find_link(NodeId(3), NodeId(2)), Some(1));
        assert_eq!(net.find_link(NodeId(2), NodeId(3)), Some(1));
        assert_eq!(net.find_link(NodeId(1), NodeId(3)), None);
        assert_eq!(net.find_link(NodeId(1), NodeId(9)), None);
    }

    fn arb_network() -> impl Strategy<Value = ValidatedNetwork> {
        (2u32..8)
            .prop_flat_map(|n| {
                let pairs: Vec<(u32, u32)> = (1..=n)
                    .flat_map(|a| (a + 1..=n).map(move |b| (a, b)))
                    .collect();
                (
                    Just(n),
                    proptest::sample::subsequence(pairs.clone(), 0..=pairs.len()),
                    proptest::collection::vec(0.0f64..100.0, pairs.len()),
                    proptest::collection::vec(any::<bool>(), n as usize),
                    any::<bool>(),
                )
            })
            .prop_map(|(n, pairs, caps, area, flip)| {
                let spec = NetworkSpec {
                    node_count: n,
                    source: NodeId(1),
                    sink: NodeId(n),
                    sensing_area: (1..=n)
                        .filter(|&i| area[i as usize - 1])
                        .map(NodeId)
                        .collect(),
                    links: pairs
                        .iter()
                        .zip(&caps)
                        .map(|(&(a, b), &capacity)| {
                            let (a, b) = if flip { (b, a) } else { (a, b) };
                            LinkSpec {
                                a: NodeId(a),
                                b: NodeId(b),
                                capacity,
                            }
                        })
                        .collect(),
                };
                validate_network(&spec).unwrap()
            })
    }

    proptest! {
        #[test]
        fn directed_closure_is_symmetric(net in arb_network()) {
            let edges = net.directed_links();
            prop_assert_eq!(edges.len(), 2 * net.links().len());
            let set: HashSet<_> = edges.iter().copied().collect();
            for e in &edges {
                prop_assert!(set.contains(&e.reversed()));
            }
        }

        #[test]
        fn sensing_links_match_double_loop(net in arb_network()) {
            let sets = sensing_link_sets(&net);
            let area = net.sensing_area();
            let mut expected = Vec::new();
            for (i, link) in net.links().iter().enumerate() {
                for &x in area {
                    for &y in area {
                        if x < y && link.a == x && link.b == y {
                            expected.push(i);
                        }
                    }
                }
            }
            prop_assert_eq!(&sets.u_a, &expected);
            prop_assert_eq!(sets.e_a.len(), 2 * sets.u_a.len());
        }

        #[test]
        fn serialize_parse_round_trip(net in arb_network()) {
            let text = serialize_network(&net);
            let back = load_network(&text).unwrap();
            prop_assert_eq!(back, net);
        }
    }
}
