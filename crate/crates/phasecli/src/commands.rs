//! The subcommands. Each takes a validated [`RunConfig`] and returns the
//! files it wrote.

use crate::config::{ConfigError, Format, RunConfig};
use crate::plot::{render_plot, Dataset, PlotError, PlotStyle};
use crate::verify::{run_battery, VerifyOptions};
use rayon::prelude::*;
use serde::Serialize;
use staircase_core::classical::{build_staircase, unit_step_scaling_exponent, Filling};
use staircase_core::edlab::{
    chemical_potential_sweep, chemical_potential_sweep_detailed, extrapolate_samples, EdOptions, SolverOptions,
};
use staircase_core::export::{
    lobe_records, to_json, write_csv, ChemicalPotentialRecord, CsvRecord, EdRecord, LobeRecord, LobeSummary,
    StaircaseRecord,
};
use staircase_core::strongcoupling::{lobe, LobeCurve};
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Compute(#[from] staircase_core::Error),
    #[error(transparent)]
    Plot(#[from] PlotError),
    #[error("cannot write {path}: {message}")]
    Write { path: PathBuf, message: String },
    #[error("{failed} of {total} checks failed")]
    Verification { failed: usize, total: usize },
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Config(_) => 2,
            _ => 1,
        }
    }
}

struct Outputs<'a> {
    cfg: &'a RunConfig,
    written: Vec<PathBuf>,
}

impl<'a> Outputs<'a> {
    fn new(cfg: &'a RunConfig) -> Result<Self, RunError> {
        std::fs::create_dir_all(&cfg.output_dir).map_err(|e| RunError::Write {
            path: cfg.output_dir.clone(),
            message: e.to_string(),
        })?;
        Ok(Self {
            cfg,
            written: Vec::new(),
        })
    }

    fn put(&mut self, name: String, bytes: &[u8]) -> Result<(), RunError> {
        let path = self.cfg.output_dir.join(name);
        std::fs::write(&path, bytes).map_err(|e| RunError::Write {
            path: path.clone(),
            message: e.to_string(),
        })?;
        self.written.push(path);
        Ok(())
    }

    fn csv<R: CsvRecord>(&mut self, stem: &str, records: &[R]) -> Result<(), RunError> {
        if !self.cfg.wants(Format::Csv) {
            return Ok(());
        }
        let mut buf = Vec::new();
        write_csv(&mut buf, records)?;
        self.put(format!("{stem}.csv"), &buf)
    }

    fn json<T: Serialize + ?Sized>(&mut self, stem: &str, value: &T) -> Result<(), RunError> {
        if !self.cfg.wants(Format::Json) {
            return Ok(());
        }
        self.put(format!("{stem}.json"), (to_json(value)? + "\n").as_bytes())
    }

    fn svg(&mut self, stem: &str, data: &Dataset, default: PlotStyle) -> Result<(), RunError> {
        if !self.cfg.wants(Format::Svg) {
            return Ok(());
        }
        let svg = render_plot(data, self.cfg.style.unwrap_or(default), self.cfg.energy_unit())?;
        self.put(format!("{stem}.svg"), svg.as_bytes())
    }
}

fn rescaled<R: CsvRecord>(mut records: Vec<R>, factor: f64) -> Vec<R> {
    for r in &mut records {
        r.rescale(factor);
    }
    records
}

/// Hoppings as given in the config, converted to units of `C`.
fn reduced(values: &[f64], cfg: &RunConfig) -> Vec<f64> {
    values.iter().map(|j| j / cfg.energy_scale()).collect()
}

fn ed_options(cfg: &RunConfig) -> EdOptions {
    EdOptions {
        geometry: cfg.geometry,
        solver: SolverOptions::default(),
        dimension_cap: cfg.dimension_cap,
    }
}

pub fn staircase(cfg: &RunConfig) -> Result<Vec<PathBuf>, RunError> {
    let steps = build_staircase(&cfg.model(), cfg.max_denominator)?;
    let records = rescaled(
        steps.iter().map(|s| StaircaseRecord::new(s, cfg.beta)).collect(),
        cfg.energy_scale(),
    );
    let mut out = Outputs::new(cfg)?;
    out.csv("staircase", &records)?;
    out.json("staircase", &records)?;
    out.svg("staircase", &Dataset::Staircase(&records), PlotStyle::LogLog)?;
    print!("{} steps up to denominator {}", steps.len(), cfg.max_denominator);
    let n_min = if cfg.max_denominator >= 5 { 4 } else { 2 };
    match unit_step_scaling_exponent(&steps, n_min, cfg.max_denominator) {
        Ok(a) => println!(", 1/n midpoints (n >= {n_min}) scale with exponent {a:.4}"),
        Err(_) => println!(),
    }
    Ok(out.written)
}

fn curves(cfg: &RunConfig) -> Result<Vec<LobeCurve>, RunError> {
    let grid = reduced(&cfg.hopping_grid.values(), cfg);
    let model = cfg.model();
    let curves: Vec<_> = cfg
        .n_values
        .par_iter()
        .map(|&n| lobe(n, &model, &grid, cfg.order))
        .collect::<Result<_, _>>()?;
    Ok(curves)
}

#[derive(Serialize)]
struct LobeDocument<'a> {
    summary: LobeSummary,
    records: &'a [LobeRecord],
}

fn summary(curve: &LobeCurve, cfg: &RunConfig) -> LobeSummary {
    let mut s = LobeSummary::new(curve);
    s.rescale(cfg.energy_scale());
    s
}

fn report_closure(s: &LobeSummary, unit: &str) {
    match s.closure_estimate {
        Some(j) => println!("1/{}: order {} closure estimate J* = {j:.6e} {unit}", s.n, s.order),
        None => println!("1/{}: order {} lobe stays open on the grid", s.n, s.order),
    }
}

pub fn lobes(cfg: &RunConfig) -> Result<Vec<PathBuf>, RunError> {
    let curves = curves(cfg)?;
    let mut out = Outputs::new(cfg)?;
    let mut all = Vec::new();
    for curve in &curves {
        let records = rescaled(lobe_records(curve), cfg.energy_scale());
        let meta = summary(curve, cfg);
        let stem = format!("lobe_n{}", curve.filling.n());
        out.csv(&stem, &records)?;
        if cfg.wants(Format::Csv) {
            out.put(format!("{stem}.closure.json"), (to_json(&meta)? + "\n").as_bytes())?;
        }
        out.json(
            &stem,
            &LobeDocument {
                summary: meta,
                records: &records,
            },
        )?;
        report_closure(&meta, cfg.energy_unit());
        all.extend(records);
    }
    out.svg(
        "lobes",
        &Dataset::Lobes {
            curves: &all,
            ed: &[],
        },
        PlotStyle::LogLog,
    )?;
    Ok(out.written)
}

pub fn ed_sweep(cfg: &RunConfig) -> Result<Vec<PathBuf>, RunError> {
    let hoppings = reduced(&cfg.ed_hopping, cfg);
    let rows = chemical_potential_sweep_detailed(
        &cfg.lengths,
        cfg.filling,
        &hoppings,
        &cfg.model(),
        cfg.interaction_range,
        &ed_options(cfg),
    )?;
    let scale = cfg.energy_scale();
    let solves = rescaled(
        rows.iter()
            .flat_map(|(_, s)| s.iter().map(|x| EdRecord::from_sector(x, cfg.beta, cfg.interaction_range)))
            .collect(),
        scale,
    );
    let potentials = rescaled(rows.iter().map(|(s, _)| ChemicalPotentialRecord::from(s)).collect(), scale);
    let mut out = Outputs::new(cfg)?;
    out.csv("ed_sweep", &solves)?;
    out.json("ed_sweep", &solves)?;
    out.csv("chemical_potentials", &potentials)?;
    out.json("chemical_potentials", &potentials)?;
    out.svg("chemical_potentials", &Dataset::ChemicalPotentials(&potentials), PlotStyle::Linear)?;

    let samples: Vec<_> = rows.iter().map(|(s, _)| *s).collect();
    if let Some(ext) = extrapolated(&samples, cfg)? {
        println!("J mu_minus(L->inf) mu_plus(L->inf) [{}]", cfg.energy_unit());
        for r in ext {
            println!("{:.6e} {:.12} {:.12}", r.hopping, r.mu_minus, r.mu_plus);
        }
    }
    Ok(out.written)
}

/// Infinite-length values per hopping, as records with `L = 0`; `None`
/// if there are too few lengths for the fit.
fn extrapolated(
    samples: &[staircase_core::edlab::ChemicalPotentialSample],
    cfg: &RunConfig,
) -> Result<Option<Vec<ChemicalPotentialRecord>>, RunError> {
    let mut lengths: Vec<usize> = samples.iter().map(|s| s.length).collect();
    lengths.sort_unstable();
    lengths.dedup();
    if lengths.len() <= cfg.fit_degree {
        return Ok(None);
    }
    let Some(first) = samples.first() else {
        return Ok(None);
    };
    let plus = extrapolate_samples(samples, cfg.fit_degree, |s| s.mu_plus)?;
    let minus = extrapolate_samples(samples, cfg.fit_degree, |s| s.mu_minus)?;
    let scale = cfg.energy_scale();
    Ok(Some(
        plus.iter()
            .zip(&minus)
            .map(|(p, m)| ChemicalPotentialRecord {
                length: 0,
                q: first.filling.value(),
                hopping: p.0 * scale,
                mu_minus: m.1 * scale,
                mu_plus: p.1 * scale,
            })
            .collect(),
    ))
}

pub fn diagram(cfg: &RunConfig) -> Result<Vec<PathBuf>, RunError> {
    let curves = curves(cfg)?;
    let scale = cfg.energy_scale();
    let mut lobes = Vec::new();
    let mut ed = Vec::new();
    let hoppings = reduced(&cfg.ed_hopping, cfg);
    for curve in &curves {
        lobes.extend(rescaled(lobe_records(curve), scale));
        report_closure(&summary(curve, cfg), cfg.energy_unit());
        let n = curve.filling.n() as usize;
        let lengths: Vec<usize> = cfg.lengths.iter().copied().filter(|l| l % n == 0).collect();
        if lengths.len() <= cfg.fit_degree {
            log::warn!("skipping ED for 1/{n}: need more than {} lengths divisible by {n}", cfg.fit_degree);
            continue;
        }
        let q = Filling::unit(n as u32)?;
        let samples = chemical_potential_sweep(
            &lengths,
            q,
            &hoppings,
            &cfg.model(),
            cfg.interaction_range,
            &ed_options(cfg),
        )?;
        if let Some(ext) = extrapolated(&samples, cfg)? {
            ed.extend(ext);
        }
    }
    let mut out = Outputs::new(cfg)?;
    out.csv("diagram_lobes", &lobes)?;
    out.csv("diagram_ed", &ed)?;
    out.json("diagram_lobes", &lobes)?;
    out.json("diagram_ed", &ed)?;
    out.svg(
        "diagram",
        &Dataset::Lobes {
            curves: &lobes,
            ed: &ed,
        },
        PlotStyle::LogLog,
    )?;
    Ok(out.written)
}

pub fn verify(opts: &VerifyOptions) -> Result<(), RunError> {
    let checks = run_battery(opts);
    for c in &checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    if failed > 0 {
        return Err(RunError::Verification {
            failed,
            total: checks.len(),
        });
    }
    println!("all {} checks passed", checks.len());
    Ok(())
}
