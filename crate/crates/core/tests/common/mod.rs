#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use isac_region::netmodel::LinkSpec;
use isac_region::{validate_network, NetworkSpec, NodeId, ValidatedNetwork};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("data")
        .join(name)
}

pub fn fixture(name: &str) -> ValidatedNetwork {
    let text = std::fs::read_to_string(data_path(name)).expect("fixture readable");
    isac_region::load_network(&text).expect("fixture valid")
}

fn build(
    node_count: u32,
    source: u32,
    sink: u32,
    area: BTreeSet<u32>,
    links: Vec<(u32, u32, f64)>,
) -> ValidatedNetwork {
    let spec = NetworkSpec {
        node_count,
        source: NodeId(source),
        sink: NodeId(sink),
        sensing_area: area.into_iter().map(NodeId).collect(),
        links: links
            .into_iter()
            .map(|(a, b, capacity)| LinkSpec {
                a: NodeId(a),
                b: NodeId(b),
                capacity,
            })
            .collect(),
    };
    validate_network(&spec).expect("generated network is valid")
}

fn random_area<R: Rng>(rng: &mut R, n: u32, non_empty: bool) -> BTreeSet<u32> {
    loop {
        let area: BTreeSet<u32> = (1..=n).filter(|_| rng.gen_bool(0.5)).collect();
        if !non_empty || !area.is_empty() {
            return area;
        }
    }
}

/// Path `1 - 2 - ... - K`, `K` in `[2, 12]`, capacities uniform in
/// `[0, 20]`, random non-empty sensing area.
pub fn random_path<R: Rng>(rng: &mut R) -> ValidatedNetwork {
    let k = rng.gen_range(2..=12u32);
    let links = (1..k)
        .map(|j| (j, j + 1, rng.gen_range(0.0..=20.0)))
        .collect();
    let area = random_area(rng, k, true);
    build(k, 1, k, area, links)
}

/// Random graph with up to `max_nodes` nodes and `max_links` links. With
/// `int_caps = Some(c)` capacities are integers in `[0, c]`, otherwise
/// uniform reals in `[0, 20]`.
pub fn random_general<R: Rng>(
    rng: &mut R,
    max_nodes: u32,
    max_links: usize,
    int_caps: Option<u32>,
) -> ValidatedNetwork {
    let n = rng.gen_range(2..=max_nodes);
    let mut pairs: Vec<(u32, u32)> = (1..=n)
        .flat_map(|a| (a + 1..=n).map(move |b| (a, b)))
        .collect();
    pairs.shuffle(rng);
    let count = rng.gen_range(1..=pairs.len().min(max_links));
    let links = pairs[..count]
        .iter()
        .map(|&(a, b)| {
            let c = match int_caps {
                Some(max) => f64::from(rng.gen_range(0..=max)),
                None => rng.gen_range(0.0..=20.0),
            };
            (a, b, c)
        })
        .collect();
    let source = rng.gen_range(1..=n);
    let sink = loop {
        let t = rng.gen_range(1..=n);
        if t != source {
            break t;
        }
    };
    let area = random_area(rng, n, false);
    build(n, source, sink, area, links)
}

/// At most 8 nodes and 14 links, real capacities.
pub fn random_general_real<R: Rng>(rng: &mut R) -> ValidatedNetwork {
    random_general(rng, 8, 14, None)
}

/// At most 6 nodes, integer capacities in `[0, 10]`.
pub fn random_integer<R: Rng>(rng: &mut R) -> ValidatedNetwork {
    random_general(rng, 6, 15, Some(10))
}

/// At most 4 links and 5 nodes, integer capacities in `[0, 6]`.
pub fn random_tiny<R: Rng>(rng: &mut R) -> ValidatedNetwork {
    random_general(rng, 5, 4, Some(6))
}

pub const FIXTURES: [&str; 4] = [
    "k5_path.json",
    "diamond.json",
    "empty_area.json",
    "single_link.json",
];

/// Fixtures plus `per_family` networks of each random family.
pub fn corpus(seed: u64, per_family: usize) -> Vec<(String, ValidatedNetwork)> {
    let mut out: Vec<(String, ValidatedNetwork)> = FIXTURES
        .iter()
        .map(|name| (name.to_string(), fixture(name)))
        .collect();
    let mut r = rng(seed);
    for i in 0..per_family {
        out.push((format!("path #{i}"), random_path(&mut r)));
        out.push((format!("general #{i}"), random_general_real(&mut r)));
        out.push((format!("integer #{i}"), random_integer(&mut r)));
        out.push((format!("tiny #{i}"), random_tiny(&mut r)));
    }
    out
}

/// `n` evenly spaced targets covering `[0, s_star]`, endpoints exact.
pub fn targets(s_star: f64, n: usize) -> Vec<f64> {
    if s_star <= 0.0 || n < 2 {
        return vec![0.0];
    }
    (0..n)
        .map(|i| {
            if i == n - 1 {
                s_star
            } else {
                s_star * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// Whether a positive-capacity path from the source to the sink avoids
/// every link with both endpoints in the sensing area.
pub fn avoiding_path_reference(net: &ValidatedNetwork) -> bool {
    let area = net.sensing_area();
    let usable: Vec<(NodeId, NodeId)> = net
        .links()
        .iter()
        .filter(|l| l.capacity > 0.0 && !(area.contains(&l.a) && area.contains(&l.b)))
        .map(|l| (l.a, l.b))
        .collect();
    let mut reached = BTreeSet::from([net.source()]);
    loop {
        let before = reached.len();
        for &(a, b) in &usable {
            if reached.contains(&a) {
                reached.insert(b);
            }
            if reached.contains(&b) {
                reached.insert(a);
            }
        }
        if reached.len() == before {
            return reached.contains(&net.sink());
        }
    }
}
