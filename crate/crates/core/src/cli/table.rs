use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::region::{RegionBoundary, SegmentKind};

/// Rounds to 12 significant decimal digits, the precision used in every
/// emitted table and report.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if !x.is_finite() {
        return x;
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    if rounded == 0.0 {
        0.0
    } else {
        rounded
    }
}

/// Decimal rendering with at most 12 significant digits.
pub fn fmt_num(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{}", round_sig(x))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionRow {
    pub target_sensing: f64,
    pub max_throughput: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentRow {
    pub kind: SegmentKind,
    pub from: (f64, f64),
    pub to: (f64, f64),
    pub ds_df: f64,
    pub k: Option<u32>,
}

/// Sampled `v(T_S)` plus the boundary summary it was computed with.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionTable {
    pub name: String,
    pub f_star: f64,
    pub s_star: f64,
    pub f_tilde: f64,
    pub s_tilde: f64,
    pub segments: Vec<SegmentRow>,
    rows: Vec<RegionRow>,
}

impl RegionTable {
    /// Builds a table; rows are sorted by target and rounded to the emitted
    /// precision, so the CSV reproduces them exactly.
    pub fn new(
        name: impl Into<String>,
        boundary: &RegionBoundary,
        mut rows: Vec<RegionRow>,
    ) -> Self {
        for r in &mut rows {
            r.target_sensing = round_sig(r.target_sensing);
            r.max_throughput = round_sig(r.max_throughput);
        }
        rows.sort_by(|a, b| a.target_sensing.total_cmp(&b.target_sensing));
        let segments = boundary
            .segments
            .iter()
            .map(|s| {
                let (p, q) = (boundary.breakpoints[s.start], boundary.breakpoints[s.end]);
                SegmentRow {
                    kind: s.kind,
                    from: (p.sensing, p.throughput),
                    to: (q.sensing, q.throughput),
                    ds_df: s.slope,
                    k: s.k,
                }
            })
            .collect();
        RegionTable {
            name: name.into(),
            f_star: boundary.max_throughput(),
            s_star: boundary.max_sensing(),
            f_tilde: boundary.free_communication(),
            s_tilde: boundary.free_sensing(),
            segments,
            rows,
        }
    }

    pub fn rows(&self) -> &[RegionRow] {
        &self.rows
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["target_sensing", "max_throughput"])?;
        for r in &self.rows {
            w.write_record([fmt_num(r.target_sensing), fmt_num(r.max_throughput)])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Reads rows back from CSV text written by [`RegionTable::write_csv`].
pub fn read_csv<R: Read>(input: R) -> Result<Vec<RegionRow>, csv::Error> {
    csv::Reader::from_reader(input).deserialize().collect()
}
