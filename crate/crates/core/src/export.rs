//! CSV and JSON writers for vertex tables, matrices, solver snapshots and
//! Dirichlet error reports.
//!
//! Numbers are written in shortest round-trip form, so identical runs give
//! byte-identical files.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::analysis::DirichletReport;
use crate::error::Result;
use crate::geometry::GraphApprox;
use crate::laplacian::TridiagonalMatrix;
use crate::scalar::Scalar;
use crate::schemes::{Scheme, SolutionSnapshot, StabilityReport};

/// Matrices up to this dimension are exported densely.
pub const DENSE_EXPORT_MAX: usize = 100;

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_num(v: f64) -> String {
    format!("{v:?}")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub index: usize,
    pub param: f64,
    pub x: f64,
    pub y: f64,
    pub address: String,
}

pub fn vertex_records<T: Scalar>(graph: &GraphApprox<T>) -> Vec<VertexRecord> {
    graph
        .vertices()
        .map(|v| VertexRecord {
            index: v.index,
            param: v.param.to_f64(),
            x: v.coords.x.to_f64(),
            y: v.coords.y.to_f64(),
            address: v.address.to_string(),
        })
        .collect()
}

/// `index,param,x,y,address`, one row per vertex in chain order.
pub fn write_vertices_csv<T: Scalar, W: Write>(graph: &GraphApprox<T>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["index", "param", "x", "y", "address"])?;
    for r in vertex_records(graph) {
        w.write_record([
            r.index.to_string(),
            fmt_num(r.param),
            fmt_num(r.x),
            fmt_num(r.y),
            r.address,
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_vertices_json<T: Scalar, W: Write>(graph: &GraphApprox<T>, out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, &vertex_records(graph))?;
    Ok(())
}

/// Dense CSV (no header) when `n <= 100`, otherwise `row,col,value` triplets
/// of the nonzero band.
pub fn write_matrix_csv<T: Scalar, W: Write>(mat: &TridiagonalMatrix<T>, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(out);
    let n = mat.dim();
    if n <= DENSE_EXPORT_MAX {
        for r in 0..n {
            w.write_record((0..n).map(|c| fmt_num(mat.get(r, c).to_f64())))?;
        }
    } else {
        w.write_record(["row", "col", "value"])?;
        for r in 0..n {
            for c in r.saturating_sub(1)..(r + 2).min(n) {
                let v = mat.get(r, c);
                if !v.is_zero() {
                    w.write_record([r.to_string(), c.to_string(), fmt_num(v.to_f64())])?;
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// `step,time,index,param,x,y,u`, one row per vertex per snapshot.
pub fn write_snapshots_csv<T: Scalar, W: Write>(
    graph: &GraphApprox<T>,
    snapshots: &[SolutionSnapshot<T>],
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["step", "time", "index", "param", "x", "y", "u"])?;
    for s in snapshots {
        let time = fmt_num(s.time.to_f64());
        for (i, u) in s.values.iter().enumerate() {
            let p = graph.point(i);
            w.write_record([
                s.step.to_string(),
                time.clone(),
                i.to_string(),
                fmt_num(graph.param(i).to_f64()),
                fmt_num(p.x.to_f64()),
                fmt_num(p.y.to_f64()),
                fmt_num(u.to_f64()),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityRecord {
    pub ratio: f64,
    pub spectral_bound: f64,
    pub stable: bool,
}

impl<T: Scalar> From<&StabilityReport<T>> for StabilityRecord {
    fn from(r: &StabilityReport<T>) -> Self {
        StabilityRecord {
            ratio: r.ratio.to_f64(),
            spectral_bound: r.spectral_bound.to_f64(),
            stable: r.stable,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnapshotRecord {
    pub step: usize,
    pub time: f64,
    pub values: Vec<f64>,
}

/// JSON form of a solver run: metadata plus snapshots.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub scheme: String,
    pub m: u32,
    #[serde(rename = "T")]
    pub horizon: f64,
    #[serde(rename = "N")]
    pub steps: usize,
    pub h: f64,
    pub initial: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub velocity: Option<String>,
    pub stability: StabilityRecord,
    pub snapshots: Vec<SnapshotRecord>,
}

impl RunRecord {
    #[allow(clippy::too_many_arguments)]
    pub fn new<T: Scalar>(
        scheme: Scheme,
        m: u32,
        horizon: &T,
        steps: usize,
        initial: String,
        velocity: Option<String>,
        stability: &StabilityReport<T>,
        snapshots: &[SolutionSnapshot<T>],
    ) -> Self {
        RunRecord {
            scheme: scheme.to_string(),
            m,
            horizon: horizon.to_f64(),
            steps,
            h: horizon.to_f64() / steps as f64,
            initial,
            velocity,
            stability: stability.into(),
            snapshots: snapshots
                .iter()
                .map(|s| SnapshotRecord {
                    step: s.step,
                    time: s.time.to_f64(),
                    values: s.values.iter().map(Scalar::to_f64).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub m: u32,
    pub q: f64,
    pub boundary: [f64; 2],
    #[serde(rename = "E_m")]
    pub error: f64,
    pub residual: f64,
    pub solver: String,
}

impl<T: Scalar> From<&DirichletReport<T>> for ErrorRecord {
    fn from(r: &DirichletReport<T>) -> Self {
        ErrorRecord {
            m: r.level,
            q: r.q.to_f64(),
            boundary: [r.boundary.a.to_f64(), r.boundary.b.to_f64()],
            error: r.error.to_f64(),
            residual: r.residual.to_f64(),
            solver: "tridiagonal-direct".into(),
        }
    }
}

/// `m,q,a,b,E_m,residual`, one row per report.
pub fn write_error_csv<W: Write>(records: &[ErrorRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["m", "q", "a", "b", "E_m", "residual"])?;
    for r in records {
        w.write_record([
            r.m.to_string(),
            fmt_num(r.q),
            fmt_num(r.boundary[0]),
            fmt_num(r.boundary[1]),
            fmt_num(r.error),
            fmt_num(r.residual),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_graph;
    use crate::laplacian::laplacian_matrix;

    fn to_string(f: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> String {
        let mut buf = Vec::new();
        f(&mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn vertex_csv_level_one() {
        let g = build_graph::<f64>(1).unwrap();
        let s = to_string(|b| write_vertices_csv(&g, b));
        let lines: Vec<_> = s.lines().collect();
        assert_eq!(lines.len(), 10);
        assert_eq!(lines[0], "index,param,x,y,address");
        assert_eq!(lines[1], "0,0.0,0.0,0.0,origin");
        assert_eq!(lines[3], "2,0.25,0.25,0.25,2");
        assert_eq!(lines[9], "8,1.0,1.0,0.0,8");
    }

    #[test]
    fn vertex_json_fields() {
        let g = build_graph::<f64>(0).unwrap();
        let s = to_string(|b| write_vertices_json(&g, b));
        let parsed: Vec<VertexRecord> = serde_json::from_str(&s).unwrap();
        assert_eq!(parsed.len(), 2);
        assert_eq!(parsed[1].x, 1.0);
        assert_eq!(parsed[0].address, "origin");
    }

    #[test]
    fn matrix_csv_dense_and_sparse() {
        let l1 = laplacian_matrix::<f64>(1).unwrap();
        let s = to_string(|b| write_matrix_csv(&l1, b));
        assert_eq!(s.lines().count(), 9);
        assert!(s.starts_with("1.0,-1.0,0.0,"));

        let l3 = laplacian_matrix::<f64>(3).unwrap();
        let s = to_string(|b| write_matrix_csv(&l3, b));
        let lines: Vec<_> = s.lines().collect();
        assert_eq!(lines[0], "row,col,value");
        // 513 diagonal + 2 * 512 off-diagonal entries.
        assert_eq!(lines.len(), 1 + 513 + 1024);
        assert_eq!(lines[1], "0,0,1.0");
    }

    #[test]
    fn round_trip_number_format() {
        for v in [0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0] {
            assert_eq!(fmt_num(v).parse::<f64>().unwrap(), v);
        }
    }
}
