//! Run configuration: a flat TOML file, overridden by command-line flags.

use crate::plot::PlotStyle;
use clap::Args;
use serde::Deserialize;
use staircase_core::classical::{Filling, PowerLawModel};
use staircase_core::edlab::{ChainGeometry, DEFAULT_DIMENSION_CAP, DEFAULT_INTERACTION_RANGE};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("invalid `{field}`: {message}")]
    Field { field: &'static str, message: String },
    #[error("cannot read config {path}: {message}")]
    Read { path: PathBuf, message: String },
    #[error("invalid config {path}: {message}")]
    Parse { path: PathBuf, message: String },
}

fn field(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Field {
        field,
        message: message.into(),
    }
}

/// One layer of settings; every key is optional. Parsed from the config
/// file, and again from the flags shared by all subcommands.
#[derive(Debug, Clone, Default, PartialEq, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct ConfigLayer {
    /// Power-law exponent of V(r) = C / r^beta
    #[arg(long, global = true)]
    pub beta: Option<i64>,
    /// Interaction coefficient C, used only with --units raw
    #[arg(long, global = true)]
    pub coefficient: Option<f64>,
    /// Largest denominator in the staircase
    #[arg(long, global = true)]
    pub max_denominator: Option<i64>,
    /// Lobes 1/n to compute, e.g. 2,3,4
    #[arg(long = "n", global = true, value_delimiter = ',')]
    pub n: Option<Vec<i64>>,
    /// Expansion order of the lobe boundaries (1 or 2)
    #[arg(long, global = true)]
    pub order: Option<i64>,
    /// Hopping grid, `lin:start:stop:points` or `log:start:stop:points`
    #[arg(long, global = true)]
    pub j_grid: Option<String>,
    /// Filling for ed-sweep, e.g. 1/3
    #[arg(long, global = true)]
    pub filling: Option<String>,
    /// Nominal chain lengths for exact diagonalization
    #[arg(long, global = true, value_delimiter = ',')]
    pub lengths: Option<Vec<i64>>,
    /// Hoppings for exact diagonalization
    #[arg(long, global = true, value_delimiter = ',')]
    pub ed_hopping: Option<Vec<f64>>,
    /// Interaction range kept in exact diagonalization
    #[arg(long, global = true)]
    pub interaction_range: Option<i64>,
    /// Largest sector dimension
    #[arg(long, global = true)]
    pub dimension_cap: Option<i64>,
    /// `commensurate` or `plain`
    #[arg(long, global = true)]
    pub geometry: Option<String>,
    /// Degree of the polynomial in 1/L used to extrapolate ED data
    #[arg(long, global = true)]
    pub fit_degree: Option<i64>,
    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,
    /// Output formats, any of csv,json,svg
    #[arg(long, global = true, value_delimiter = ',')]
    pub formats: Option<Vec<String>>,
    /// `delta` (energies in units of C) or `raw` (multiplied by C)
    #[arg(long, global = true)]
    pub units: Option<String>,
    /// `linear` or `loglog`
    #[arg(long, global = true)]
    pub style: Option<String>,
}

macro_rules! overlay {
    ($top:expr, $bottom:expr, $($f:ident),*) => {
        ConfigLayer { $($f: $top.$f.or($bottom.$f)),* }
    };
}

impl ConfigLayer {
    pub fn from_toml(text: &str, path: &Path) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse {
            path: path.to_path_buf(),
            message: e.message().to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Self::from_toml(&text, path)
    }

    /// Keys set in `self` win over those in `below`.
    pub fn over(self, below: ConfigLayer) -> ConfigLayer {
        overlay!(
            self, below, beta, coefficient, max_denominator, n, order, j_grid, filling, lengths, ed_hopping,
            interaction_range, dimension_cap, geometry, fit_degree, output_dir, formats, units, style
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoppingGrid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl HoppingGrid {
    pub fn parse(text: &str) -> Result<Self, String> {
        let parts: Vec<&str> = text.split(':').collect();
        let [kind, start, stop, points] = parts[..] else {
            return Err(format!("expected `lin|log:start:stop:points`, got `{text}`"));
        };
        let spacing = match kind {
            "lin" | "linear" => Spacing::Linear,
            "log" => Spacing::Log,
            other => return Err(format!("unknown spacing `{other}`")),
        };
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| format!("`{s}` is not a number"));
        let (start, stop) = (num(start)?, num(stop)?);
        let points: usize = points
            .trim()
            .parse()
            .map_err(|_| format!("`{points}` is not a point count"))?;
        if !(start.is_finite() && stop.is_finite()) || start < 0.0 || stop < start {
            return Err(format!("need 0 <= start <= stop, got {start}..{stop}"));
        }
        if points == 0 || (points == 1 && start != stop) || (points > 1 && start == stop) {
            return Err(format!("{points} points cannot span {start}..{stop}"));
        }
        if spacing == Spacing::Log && start <= 0.0 {
            return Err("a log grid must start above zero".into());
        }
        Ok(Self {
            start,
            stop,
            points,
            spacing,
        })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|k| {
                if k == 0 {
                    return self.start;
                }
                if k + 1 == self.points {
                    return self.stop;
                }
                let t = k as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.start + t * (self.stop - self.start),
                    Spacing::Log => (self.start.ln() + t * (self.stop / self.start).ln()).exp(),
                }
            })
            .collect()
    }

    /// The same grid with both ends multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            start: self.start * factor,
            stop: self.stop * factor,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Units {
    /// Energies in units of the interaction coefficient.
    Delta,
    /// Energies multiplied back by the coefficient.
    Raw,
}

/// Validated settings. Energies given here (hoppings) are in the units
/// selected by `units`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub beta: u32,
    pub coefficient: f64,
    pub max_denominator: u32,
    pub n_values: Vec<u32>,
    pub order: u8,
    pub hopping_grid: HoppingGrid,
    pub filling: Filling,
    pub lengths: Vec<usize>,
    pub ed_hopping: Vec<f64>,
    pub interaction_range: usize,
    pub dimension_cap: u128,
    pub geometry: ChainGeometry,
    pub fit_degree: usize,
    pub output_dir: PathBuf,
    pub formats: Vec<Format>,
    pub units: Units,
    pub style: Option<PlotStyle>,
}

fn in_range(name: &'static str, v: i64, lo: i64, hi: i64) -> Result<i64, ConfigError> {
    if v < lo || v > hi {
        return Err(field(name, format!("must be in {lo}..={hi}, got {v}")));
    }
    Ok(v)
}

impl RunConfig {
    pub fn from_layer(layer: ConfigLayer) -> Result<Self, ConfigError> {
        let beta = in_range("beta", layer.beta.unwrap_or(6), 2, 64)? as u32;
        let coefficient = layer.coefficient.unwrap_or(1.0);
        if !(coefficient.is_finite() && coefficient > 0.0) {
            return Err(field("coefficient", format!("must be positive and finite, got {coefficient}")));
        }
        PowerLawModel::new(beta, coefficient).map_err(|e| field("beta", e.to_string()))?;
        let max_denominator = in_range("max_denominator", layer.max_denominator.unwrap_or(12), 2, 500)? as u32;

        let n_values = layer.n.unwrap_or_else(|| vec![2, 3, 4]);
        if n_values.is_empty() {
            return Err(field("n", "needs at least one value"));
        }
        let n_values = n_values
            .into_iter()
            .map(|n| in_range("n", n, 2, 1000).map(|n| n as u32))
            .collect::<Result<Vec<_>, _>>()?;
        let order = in_range("order", layer.order.unwrap_or(2), 1, 2)? as u8;
        let hopping_grid = HoppingGrid::parse(layer.j_grid.as_deref().unwrap_or("log:1e-5:1:200"))
            .map_err(|m| field("j_grid", m))?;

        let filling = parse_filling(layer.filling.as_deref().unwrap_or("1/2")).map_err(|m| field("filling", m))?;
        let lengths = layer.lengths.unwrap_or_else(|| vec![12, 16, 20]);
        if lengths.is_empty() {
            return Err(field("lengths", "needs at least one value"));
        }
        let lengths = lengths
            .into_iter()
            .map(|l| in_range("lengths", l, 2, 63).map(|l| l as usize))
            .collect::<Result<Vec<_>, _>>()?;
        let ed_hopping = layer
            .ed_hopping
            .unwrap_or_else(|| vec![0.005, 0.01, 0.015, 0.02, 0.025, 0.03]);
        if ed_hopping.is_empty() || ed_hopping.iter().any(|j| !(j.is_finite() && *j >= 0.0)) {
            return Err(field("ed_hopping", "needs finite non-negative values"));
        }
        let interaction_range = in_range(
            "interaction_range",
            layer.interaction_range.unwrap_or(DEFAULT_INTERACTION_RANGE as i64),
            1,
            63,
        )? as usize;
        let dimension_cap = in_range(
            "dimension_cap",
            layer.dimension_cap.unwrap_or(DEFAULT_DIMENSION_CAP as i64),
            1,
            i64::MAX,
        )? as u128;
        let geometry = match layer.geometry.as_deref().unwrap_or("commensurate") {
            "commensurate" => ChainGeometry::Commensurate,
            "plain" => ChainGeometry::Plain,
            other => return Err(field("geometry", format!("expected commensurate or plain, got `{other}`"))),
        };
        let fit_degree = in_range("fit_degree", layer.fit_degree.unwrap_or(1), 1, 4)? as usize;

        let mut formats = Vec::new();
        for f in layer
            .formats
            .unwrap_or_else(|| vec!["csv".into(), "json".into(), "svg".into()])
        {
            formats.push(match f.trim() {
                "csv" => Format::Csv,
                "json" => Format::Json,
                "svg" => Format::Svg,
                other => return Err(field("formats", format!("unknown format `{other}`"))),
            });
        }
        formats.sort();
        formats.dedup();
        if formats.is_empty() {
            return Err(field("formats", "needs at least one format"));
        }
        let units = match layer.units.as_deref().unwrap_or("delta") {
            "delta" => Units::Delta,
            "raw" => Units::Raw,
            other => return Err(field("units", format!("expected delta or raw, got `{other}`"))),
        };
        let style = layer
            .style
            .as_deref()
            .map(|s| s.parse::<PlotStyle>().map_err(|m| field("style", m)))
            .transpose()?;

        Ok(Self {
            beta,
            coefficient,
            max_denominator,
            n_values,
            order,
            hopping_grid,
            filling,
            lengths,
            ed_hopping,
            interaction_range,
            dimension_cap,
            geometry,
            fit_degree,
            output_dir: layer.output_dir.unwrap_or_else(|| PathBuf::from("phasecli-out")),
            formats,
            units,
            style,
        })
    }

    /// Model in reduced units; all computation happens with `C = 1`.
    pub fn model(&self) -> PowerLawModel {
        PowerLawModel::unit(self.beta).expect("validated")
    }

    /// Factor from reduced energies to output energies.
    pub fn energy_scale(&self) -> f64 {
        match self.units {
            Units::Delta => 1.0,
            Units::Raw => self.coefficient,
        }
    }

    pub fn energy_unit(&self) -> &'static str {
        match self.units {
            Units::Delta => "Δ_β",
            Units::Raw => "C",
        }
    }

    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }
}

fn parse_filling(text: &str) -> Result<Filling, String> {
    let (m, n) = text
        .split_once('/')
        .ok_or_else(|| format!("expected m/n, got `{text}`"))?;
    let m: u32 = m.trim().parse().map_err(|_| format!("bad numerator `{m}`"))?;
    let n: u32 = n.trim().parse().map_err(|_| format!("bad denominator `{n}`"))?;
    Filling::new(m, n).map_err(|e| e.to_string())
}
