//! Marching squares over a [`SweepGrid`], with segments stitched into
//! polylines in (loss, power) coordinates.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::explore::SweepGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    Gsnr,
    Throughput,
}

impl Field {
    pub fn name(self) -> &'static str {
        match self {
            Field::Gsnr => "gsnr_db",
            Field::Throughput => "throughput_tbps",
        }
    }
}

impl std::str::FromStr for Field {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "gsnr" | "gsnr_db" => Ok(Field::Gsnr),
            "throughput" | "throughput_tbps" => Ok(Field::Throughput),
            other => Err(format!("unknown field {other:?} (expected gsnr or throughput)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourPoint {
    pub loss_db_per_km: f64,
    pub edfa_power_dbm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    pub points: Vec<ContourPoint>,
    /// First and last points coincide.
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContourSet {
    pub field: Field,
    pub level: f64,
    pub polylines: Vec<Polyline>,
}

/// A grid edge, named by its lower-left lattice node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Edge {
    /// From (i, j) to (i + 1, j).
    AlongLoss(usize, usize),
    /// From (i, j) to (i, j + 1).
    AlongPower(usize, usize),
}

pub fn extract_contour(grid: &SweepGrid, field: Field, level: f64) -> Result<ContourSet> {
    let z = grid.field(field);
    let nx = grid.loss_axis.len();
    let ny = grid.power_axis.len();
    for (i, row) in z.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteCell { row: i, col: j });
            }
        }
    }
    if !level.is_finite() {
        return Err(Error::domain("contour level", level, "must be finite"));
    }

    let inside = |i: usize, j: usize| z[i][j] >= level;
    let mut segments: Vec<(Edge, Edge)> = Vec::new();

    for i in 0..nx.saturating_sub(1) {
        for j in 0..ny.saturating_sub(1) {
            // corners counter-clockwise from (i, j)
            let c = [inside(i, j), inside(i + 1, j), inside(i + 1, j + 1), inside(i, j + 1)];
            let edges = [
                (Edge::AlongLoss(i, j), c[0] != c[1]),
                (Edge::AlongPower(i + 1, j), c[1] != c[2]),
                (Edge::AlongLoss(i, j + 1), c[3] != c[2]),
                (Edge::AlongPower(i, j), c[0] != c[3]),
            ];
            let crossed: Vec<Edge> = edges.iter().filter(|e| e.1).map(|e| e.0).collect();
            match crossed.len() {
                0 => {}
                2 => segments.push((crossed[0], crossed[1])),
                4 => {
                    let centre = 0.25 * (z[i][j] + z[i + 1][j] + z[i + 1][j + 1] + z[i][j + 1]);
                    let [e0, e1, e2, e3] = [edges[0].0, edges[1].0, edges[2].0, edges[3].0];
                    if (centre >= level) == c[0] {
                        // c0 and c2 join through the centre; cut off c1 and c3
                        segments.push((e0, e1));
                        segments.push((e2, e3));
                    } else {
                        segments.push((e3, e0));
                        segments.push((e1, e2));
                    }
                }
                _ => unreachable!("a closed cell boundary crosses a level an even number of times"),
            }
        }
    }

    let point = |edge: Edge| -> ContourPoint {
        let (i0, j0, i1, j1) = match edge {
            Edge::AlongLoss(i, j) => (i, j, i + 1, j),
            Edge::AlongPower(i, j) => (i, j, i, j + 1),
        };
        let (za, zb) = (z[i0][j0], z[i1][j1]);
        let t = (level - za) / (zb - za);
        let lerp = |a: f64, b: f64| a + t * (b - a);
        ContourPoint {
            loss_db_per_km: lerp(grid.loss_axis[i0], grid.loss_axis[i1]),
            edfa_power_dbm: lerp(grid.power_axis[j0], grid.power_axis[j1]),
        }
    };

    let polylines = stitch(&segments)
        .into_iter()
        .map(|(edges, closed)| Polyline {
            points: edges.into_iter().map(point).collect(),
            closed,
        })
        .collect();

    Ok(ContourSet {
        field,
        level,
        polylines,
    })
}

/// Joins segments sharing an edge. Open chains come first, each walked from
/// a dangling end; whatever is left forms closed loops.
fn stitch(segments: &[(Edge, Edge)]) -> Vec<(Vec<Edge>, bool)> {
    let mut touching: HashMap<Edge, Vec<usize>> = HashMap::new();
    for (k, (a, b)) in segments.iter().enumerate() {
        touching.entry(*a).or_default().push(k);
        touching.entry(*b).or_default().push(k);
    }
    let mut used = vec![false; segments.len()];

    let walk = |start_seg: usize, start_edge: Edge, used: &mut Vec<bool>| -> Vec<Edge> {
        let mut chain = vec![start_edge];
        let mut seg = start_seg;
        let mut at = start_edge;
        loop {
            used[seg] = true;
            let (a, b) = segments[seg];
            let next = if a == at { b } else { a };
            chain.push(next);
            at = next;
            match touching[&at].iter().find(|&&s| !used[s]) {
                Some(&s) => seg = s,
                None => break,
            }
        }
        chain
    };

    let mut out = Vec::new();
    for k in 0..segments.len() {
        if used[k] {
            continue;
        }
        let (a, b) = segments[k];
        let start = if touching[&a].len() == 1 {
            Some(a)
        } else if touching[&b].len() == 1 {
            Some(b)
        } else {
            None
        };
        if let Some(edge) = start {
            out.push((walk(k, edge, &mut used), false));
        }
    }
    for k in 0..segments.len() {
        if !used[k] {
            let chain = walk(k, segments[k].0, &mut used);
            out.push((chain, true));
        }
    }
    out
}
