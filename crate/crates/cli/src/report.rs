//! CSV and JSON writers. Every float is printed as `{:.11e}`, twelve
//! significant digits in decimal scientific notation, so identical inputs
//! give byte-identical files.

use std::io::Write;

use freeplate_core::bounds::BoundRow;
use freeplate_core::fourier::MasterReport;
use freeplate_core::{DomainSpec, Method, Operator, Spectrum};
use serde::Serialize;
use serde_json::value::RawValue;

use crate::pipeline::VerifyRow;
use crate::CliError;

pub fn sci(v: f64) -> String {
    format!("{v:.11e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(sci).unwrap_or_default()
}

fn finish<W: Write>(mut w: csv::Writer<W>) -> Result<(), CliError> {
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}

pub fn write_verify_csv<W: Write>(out: W, rows: &[VerifyRow]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "m",
        "sum_computed",
        "sum_bound",
        "eig_computed",
        "eig_bound",
        "slack_sum",
        "slack_eig",
        "status",
    ])
    .map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.m.to_string(),
            sci(r.sum_computed),
            sci(r.sum_bound),
            opt(r.eig_computed),
            sci(r.eig_bound),
            sci(r.slack_sum),
            opt(r.slack_eig),
            r.status().to_string(),
        ])
        .map_err(csv_err)?;
    }
    finish(w)
}

pub fn write_fourier_csv<W: Write>(out: W, reports: &[MasterReport]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["m", "r", "N", "D", "ratio", "lambda_next", "margin"])
        .map_err(csv_err)?;
    for row in reports.iter().flat_map(|rep| &rep.rows) {
        w.write_record([
            row.m.to_string(),
            sci(row.r),
            sci(row.numerator),
            sci(row.denominator),
            sci(row.ratio),
            sci(row.lambda_next),
            sci(row.margin),
        ])
        .map_err(csv_err)?;
    }
    finish(w)
}

pub fn write_bounds_wide<W: Write>(out: W, rows: &[BoundRow]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["m"];
    header.extend(BoundRow::KINDS);
    w.write_record(&header).map_err(csv_err)?;
    for row in rows {
        let mut rec = vec![row.m.to_string()];
        rec.extend(row.values().map(sci));
        w.write_record(&rec).map_err(csv_err)?;
    }
    finish(w)
}

pub fn write_bounds_long<W: Write>(out: W, rows: &[BoundRow]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["m", "bound_kind", "value"]).map_err(csv_err)?;
    for row in rows {
        for (kind, v) in BoundRow::KINDS.iter().zip(row.values()) {
            w.write_record([row.m.to_string(), kind.to_string(), sci(v)])
                .map_err(csv_err)?;
        }
    }
    finish(w)
}

#[derive(Serialize)]
struct SpectrumJson<'a> {
    domain: &'a DomainSpec,
    operator: Operator,
    tau: Box<RawValue>,
    method: Method,
    degree_used: usize,
    converged: bool,
    values: Vec<Box<RawValue>>,
}

fn raw(v: f64) -> Box<RawValue> {
    RawValue::from_string(sci(v)).expect("finite floats format as JSON numbers")
}

pub fn spectrum_json(spectrum: &Spectrum) -> String {
    let doc = SpectrumJson {
        domain: &spectrum.domain,
        operator: spectrum.operator,
        tau: raw(spectrum.tau),
        method: spectrum.method,
        degree_used: spectrum.degree_used,
        converged: spectrum.converged,
        values: spectrum.values.iter().map(|v| raw(*v)).collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("spectrum serializes");
    text.push('\n');
    text
}
