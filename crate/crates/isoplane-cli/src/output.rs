//! Deterministic JSON and CSV emission.
//!
//! Machine outputs must be byte-identical across runs and worker counts, so
//! floats are printed with a fixed 12-significant-digit scientific format
//! and JSON objects keep their struct field order, one record per line.

use std::io;

use serde::Serialize;

use isoplane::{Estimate, RelationReport};

/// Fixed machine formatting: 12 significant digits.
pub fn fmt_f64(x: f64) -> String {
    assert!(x.is_finite(), "machine outputs must be finite, got {x}");
    format!("{x:.11e}")
}

struct SigFigFormatter;

impl serde_json::ser::Formatter for SigFigFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        assert!(value.is_finite(), "machine outputs must be finite, got {value}");
        write!(writer, "{value:.11e}")
    }
}

/// One record as a single JSON line.
pub fn json_line<T: Serialize>(record: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigFigFormatter);
    record
        .serialize(&mut ser)
        .expect("flat records always serialize");
    let mut line = String::from_utf8(out).expect("serde_json emits UTF-8");
    line.push('\n');
    line
}

/// The flat record `compute` emits.
#[derive(Serialize)]
pub struct ComputeRecord {
    pub constant: &'static str,
    pub param: Option<f64>,
    pub norm: String,
    pub value: f64,
    pub witness_x1: f64,
    pub witness_x2: f64,
    pub witness_y1: f64,
    pub witness_y2: f64,
    pub witness_param: Option<f64>,
    pub direction: &'static str,
    pub theta_grid: usize,
    pub radius_grid: usize,
    pub refine_tol: f64,
}

impl ComputeRecord {
    pub fn new(norm: String, estimate: &Estimate, radius_grid: usize) -> ComputeRecord {
        ComputeRecord {
            constant: estimate.constant.label(),
            param: estimate.constant.param(),
            norm,
            value: estimate.value,
            witness_x1: estimate.witness.x.x1,
            witness_x2: estimate.witness.x.x2,
            witness_y1: estimate.witness.y.x1,
            witness_y2: estimate.witness.y.x2,
            witness_param: estimate.witness.param,
            direction: estimate.direction.as_str(),
            theta_grid: estimate.grid_size,
            radius_grid,
            refine_tol: estimate.refine_tol,
        }
    }

    pub const CSV_HEADER: &'static str = "constant,param,norm,value,witness_x1,witness_x2,witness_y1,witness_y2,witness_param,direction,theta_grid,radius_grid,refine_tol";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.constant,
            opt_f64(self.param),
            csv_field(&self.norm),
            fmt_f64(self.value),
            fmt_f64(self.witness_x1),
            fmt_f64(self.witness_x2),
            fmt_f64(self.witness_y1),
            fmt_f64(self.witness_y2),
            opt_f64(self.witness_param),
            self.direction,
            self.theta_grid,
            self.radius_grid,
            fmt_f64(self.refine_tol),
        )
    }
}

/// One relation-check row.
#[derive(Serialize)]
pub struct VerifyRecord {
    pub relation: String,
    pub norm: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub asserted: bool,
    pub note: Option<String>,
}

impl VerifyRecord {
    pub fn new(report: &RelationReport) -> VerifyRecord {
        VerifyRecord {
            relation: report.relation_id.clone(),
            norm: report.norm_label.clone(),
            lhs: report.lhs,
            rhs: report.rhs,
            slack: report.slack,
            tolerance: report.tolerance,
            pass: report.pass,
            asserted: report.asserted,
            note: report.note.clone(),
        }
    }

    pub const CSV_HEADER: &'static str = "relation,norm,lhs,rhs,slack,tolerance,pass,asserted,note";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            csv_field(&self.relation),
            csv_field(&self.norm),
            fmt_f64(self.lhs),
            fmt_f64(self.rhs),
            fmt_f64(self.slack),
            fmt_f64(self.tolerance),
            self.pass,
            self.asserted,
            csv_field(self.note.as_deref().unwrap_or("")),
        )
    }
}

/// One sweep row.
#[derive(Serialize)]
pub struct SweepRecord {
    pub param: f64,
    pub value: f64,
}

impl SweepRecord {
    pub const CSV_HEADER: &'static str = "param,value";

    pub fn csv_row(&self) -> String {
        format!("{},{}", fmt_f64(self.param), fmt_f64(self.value))
    }
}

fn opt_f64(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// Quote a CSV field only when it needs it.
fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
