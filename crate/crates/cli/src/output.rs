//! Serialisable records. Floats are rounded to 15 significant digits so the
//! output is byte-stable.

use multizeta::{Complex64, EvalResult64, PolarReport};
use serde::Serialize;

pub fn r15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().expect("formatted float parses")
}

/// Shortest round-trip text of the rounded value.
pub fn num(x: f64) -> String {
    serde_json::to_string(&r15(x)).expect("finite floats serialise")
}

pub fn pair(z: Complex64) -> [f64; 2] {
    [r15(z.re), r15(z.im)]
}

#[derive(Serialize)]
pub struct EvalRecord {
    pub point: Vec<[f64; 2]>,
    pub value: [f64; 2],
    pub error_bound: f64,
    pub terms_used: u64,
}

impl EvalRecord {
    pub fn new(point: &[Complex64], r: &EvalResult64) -> Self {
        Self {
            point: point.iter().map(|&z| pair(z)).collect(),
            value: pair(r.value),
            error_bound: r15(r.abs_error_bound),
            terms_used: r.terms_used,
        }
    }
}

#[derive(Serialize)]
pub struct HyperplaneRecord {
    pub index: usize,
    pub level: i64,
    pub equation: String,
}

#[derive(Serialize)]
pub struct PoleRecord {
    pub hyperplane: HyperplaneRecord,
    pub status: &'static str,
    pub residue_factor: Option<String>,
    pub provenance: String,
}

impl From<&PolarReport> for PoleRecord {
    fn from(r: &PolarReport) -> Self {
        Self {
            hyperplane: HyperplaneRecord {
                index: r.hyperplane.index,
                level: r.hyperplane.level,
                equation: r.hyperplane.to_string(),
            },
            status: r.status.as_str(),
            residue_factor: r.residue_factor.clone(),
            provenance: r.provenance.clone(),
        }
    }
}

#[derive(Serialize)]
pub struct ResidueRecord {
    pub hyperplane: HyperplaneRecord,
    pub point: Vec<[f64; 2]>,
    pub formula: [f64; 2],
    pub numeric: [f64; 2],
    pub difference: f64,
    pub radius: f64,
}

#[derive(Serialize)]
pub struct PropertyRecord {
    pub module: &'static str,
    pub property: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Serialize)]
pub struct VerifyRecord {
    pub passed: usize,
    pub failed: usize,
    pub properties: Vec<PropertyRecord>,
}

/// One CSV line per grid point; `error` holds the error name when the point failed.
pub fn csv_header(depth: usize) -> String {
    let mut cols = Vec::new();
    for i in 1..=depth {
        cols.push(format!("s{i}_re"));
        cols.push(format!("s{i}_im"));
    }
    cols.extend(["value_re", "value_im", "error_bound", "terms_used", "error"].map(String::from));
    cols.join(",")
}

pub fn csv_row(point: &[Complex64], result: &Result<EvalResult64, multizeta::Error>) -> String {
    let mut cells: Vec<String> = point.iter().flat_map(|z| [num(z.re), num(z.im)]).collect();
    match result {
        Ok(r) => {
            cells.push(num(r.value.re));
            cells.push(num(r.value.im));
            cells.push(num(r.abs_error_bound));
            cells.push(r.terms_used.to_string());
            cells.push(String::new());
        }
        Err(e) => {
            cells.extend(["", "", "", ""].map(String::from));
            cells.push(e.name().to_string());
        }
    }
    cells.join(",")
}
