//! Flat records for CSV and JSON output.
//!
//! Floats go to CSV as `{:.16e}`, i.e. 17 significant digits, which parse
//! back to the same bits. JSON uses the shortest representation that
//! round-trips.

use crate::classical::StaircaseStep;
use crate::edlab::{ChemicalPotentialSample, EDProblem, EDResult, SectorSolve};
use crate::error::{Error, Result};
use crate::strongcoupling::LobeCurve;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

/// One CSV row type.
pub trait CsvRecord: Serialize + DeserializeOwned {
    const HEADER: &'static [&'static str];

    fn fields(&self) -> Vec<String>;

    /// Multiply every energy-valued field by `factor`.
    fn rescale(&mut self, factor: f64);
}

/// 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn ser(e: impl std::fmt::Display) -> Error {
    Error::Serialization(e.to_string())
}

pub fn write_csv<R: CsvRecord, W: Write>(out: W, records: &[R]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(R::HEADER).map_err(ser)?;
    for r in records {
        w.write_record(r.fields()).map_err(ser)?;
    }
    w.flush().map_err(ser)
}

pub fn to_csv_string<R: CsvRecord>(records: &[R]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(&mut buf, records)?;
    String::from_utf8(buf).map_err(ser)
}

/// Parses rows written by [`write_csv`]; the header must match exactly.
pub fn read_csv<R: CsvRecord, Rd: Read>(input: Rd) -> Result<Vec<R>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers().map_err(ser)?.clone();
    if header.iter().ne(R::HEADER.iter().copied()) {
        return Err(Error::Serialization(format!(
            "expected header {:?}, found {:?}",
            R::HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    r.deserialize().map(|row| row.map_err(ser)).collect()
}

pub fn to_json<R: Serialize + ?Sized>(records: &R) -> Result<String> {
    serde_json::to_string_pretty(records).map_err(ser)
}

pub fn from_json<R: DeserializeOwned>(text: &str) -> Result<R> {
    serde_json::from_str(text).map_err(ser)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StaircaseRecord {
    pub m: u32,
    pub n: u32,
    pub q: f64,
    pub mu_lo: f64,
    pub mu_hi: f64,
    pub order: u8,
    pub beta: u32,
}

impl StaircaseRecord {
    pub fn new(step: &StaircaseStep, beta: u32) -> Self {
        Self {
            m: step.filling.m(),
            n: step.filling.n(),
            q: step.filling.value(),
            mu_lo: step.mu_lo,
            mu_hi: step.mu_hi,
            order: step.order,
            beta,
        }
    }
}

impl CsvRecord for StaircaseRecord {
    const HEADER: &'static [&'static str] = &["m", "n", "q", "mu_lo", "mu_hi", "order", "beta"];

    fn fields(&self) -> Vec<String> {
        vec![
            self.m.to_string(),
            self.n.to_string(),
            format_float(self.q),
            format_float(self.mu_lo),
            format_float(self.mu_hi),
            self.order.to_string(),
            self.beta.to_string(),
        ]
    }

    fn rescale(&mut self, factor: f64) {
        self.mu_lo *= factor;
        self.mu_hi *= factor;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LobeRecord {
    pub n: u32,
    pub beta: u32,
    pub order: u8,
    #[serde(rename = "J")]
    pub hopping: f64,
    pub mu_minus: f64,
    pub mu_plus: f64,
}

impl CsvRecord for LobeRecord {
    const HEADER: &'static [&'static str] = &["n", "beta", "order", "J", "mu_minus", "mu_plus"];

    fn fields(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.beta.to_string(),
            self.order.to_string(),
            format_float(self.hopping),
            format_float(self.mu_minus),
            format_float(self.mu_plus),
        ]
    }

    fn rescale(&mut self, factor: f64) {
        self.hopping *= factor;
        self.mu_minus *= factor;
        self.mu_plus *= factor;
    }
}

pub fn lobe_records(curve: &LobeCurve) -> Vec<LobeRecord> {
    curve
        .hopping_grid
        .iter()
        .zip(&curve.mu_minus)
        .zip(&curve.mu_plus)
        .map(|((&j, &lo), &hi)| LobeRecord {
            n: curve.filling.n(),
            beta: curve.beta,
            order: curve.order,
            hopping: j,
            mu_minus: lo,
            mu_plus: hi,
        })
        .collect()
}

/// JSON sidecar written next to a lobe CSV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LobeSummary {
    pub n: u32,
    pub beta: u32,
    pub order: u8,
    pub closure_estimate: Option<f64>,
}

impl LobeSummary {
    pub fn new(curve: &LobeCurve) -> Self {
        Self {
            n: curve.filling.n(),
            beta: curve.beta,
            order: curve.order,
            closure_estimate: curve.closure_estimate,
        }
    }

    pub fn rescale(&mut self, factor: f64) {
        if let Some(j) = self.closure_estimate.as_mut() {
            *j *= factor;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdRecord {
    #[serde(rename = "L")]
    pub length: usize,
    #[serde(rename = "N")]
    pub particles: usize,
    #[serde(rename = "J")]
    pub hopping: f64,
    pub beta: u32,
    pub r: usize,
    #[serde(rename = "E0")]
    pub ground_energy: f64,
    pub residual: f64,
    pub iters: usize,
}

impl EdRecord {
    pub fn new(problem: &EDProblem, result: &EDResult) -> Self {
        Self {
            length: problem.length,
            particles: problem.particles,
            hopping: problem.hopping,
            beta: problem.model.beta(),
            r: problem.interaction_range,
            ground_energy: result.ground_energy,
            residual: result.residual_norm,
            iters: result.iterations,
        }
    }

    pub fn from_sector(solve: &SectorSolve, beta: u32, range: usize) -> Self {
        Self {
            length: solve.sites,
            particles: solve.particles,
            hopping: solve.hopping,
            beta,
            r: range,
            ground_energy: solve.result.ground_energy,
            residual: solve.result.residual_norm,
            iters: solve.result.iterations,
        }
    }
}

impl CsvRecord for EdRecord {
    const HEADER: &'static [&'static str] = &["L", "N", "J", "beta", "r", "E0", "residual", "iters"];

    fn fields(&self) -> Vec<String> {
        vec![
            self.length.to_string(),
            self.particles.to_string(),
            format_float(self.hopping),
            self.beta.to_string(),
            self.r.to_string(),
            format_float(self.ground_energy),
            format_float(self.residual),
            self.iters.to_string(),
        ]
    }

    fn rescale(&mut self, factor: f64) {
        self.hopping *= factor;
        self.ground_energy *= factor;
        self.residual *= factor;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChemicalPotentialRecord {
    #[serde(rename = "L")]
    pub length: usize,
    pub q: f64,
    #[serde(rename = "J")]
    pub hopping: f64,
    pub mu_minus: f64,
    pub mu_plus: f64,
}

impl From<&ChemicalPotentialSample> for ChemicalPotentialRecord {
    fn from(s: &ChemicalPotentialSample) -> Self {
        Self {
            length: s.length,
            q: s.filling.value(),
            hopping: s.hopping,
            mu_minus: s.mu_minus,
            mu_plus: s.mu_plus,
        }
    }
}

impl CsvRecord for ChemicalPotentialRecord {
    const HEADER: &'static [&'static str] = &["L", "q", "J", "mu_minus", "mu_plus"];

    fn fields(&self) -> Vec<String> {
        vec![
            self.length.to_string(),
            format_float(self.q),
            format_float(self.hopping),
            format_float(self.mu_minus),
            format_float(self.mu_plus),
        ]
    }

    fn rescale(&mut self, factor: f64) {
        self.hopping *= factor;
        self.mu_minus *= factor;
        self.mu_plus *= factor;
    }
}
