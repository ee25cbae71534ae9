//! Witness files: a list of `{from, to, f, s}` records, zero-rate links
//! omitted.

use serde::{Deserialize, Serialize};

use crate::netmodel::{DirectedLink, NodeId, ValidatedNetwork};
use crate::region::{LinkRates, RateAssignment, RegionError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessRecord {
    pub from: NodeId,
    pub to: NodeId,
    pub f: f64,
    pub s: f64,
}

pub fn witness_records(assign: &RateAssignment) -> Vec<WitnessRecord> {
    assign
        .iter()
        .filter(|(_, r)| r.comm != 0.0 || r.sense != 0.0)
        .map(|(link, r)| WitnessRecord {
            from: link.from,
            to: link.to,
            f: r.comm,
            s: r.sense,
        })
        .collect()
}

pub fn serialize_witness(assign: &RateAssignment) -> String {
    let mut text = serde_json::to_string_pretty(&witness_records(assign))
        .expect("witness records always serialize");
    text.push('\n');
    text
}

#[derive(Debug, thiserror::Error)]
pub enum WitnessError {
    #[error("malformed witness: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Region(#[from] RegionError),
}

/// Reads a witness file against `net`, filling omitted links with zeros.
pub fn parse_witness(text: &str, net: &ValidatedNetwork) -> Result<RateAssignment, WitnessError> {
    let records: Vec<WitnessRecord> = serde_json::from_str(text)?;
    let mut assign = RateAssignment::zero(net);
    for r in records {
        let link = DirectedLink::new(r.from, r.to);
        if net.find_link(r.from, r.to).is_none() {
            return Err(RegionError::LinkSetMismatch {
                link,
                detail: "not a link of the network",
            }
            .into());
        }
        assign.set(
            link,
            LinkRates {
                comm: r.f,
                sense: r.s,
            },
        );
    }
    Ok(assign)
}
