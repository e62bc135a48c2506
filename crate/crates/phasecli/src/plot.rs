//! Minimal self-contained SVG charts.

use staircase_core::edlab::polynomial_fit;
use staircase_core::export::{ChemicalPotentialRecord, LobeRecord, StaircaseRecord};
use std::fmt::Write;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotStyle {
    Linear,
    LogLog,
}

impl FromStr for PlotStyle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "linear" => Ok(PlotStyle::Linear),
            "loglog" => Ok(PlotStyle::LogLog),
            other => Err(format!("expected linear or loglog, got `{other}`")),
        }
    }
}

pub enum Dataset<'a> {
    /// Step plot of `q` against `mu`; in log-log form the `1/n` step
    /// midpoints against `1/n` with the fitted exponent.
    Staircase(&'a [StaircaseRecord]),
    /// Lobe boundaries as dashed lines, optionally with ED points.
    Lobes {
        curves: &'a [LobeRecord],
        ed: &'a [ChemicalPotentialRecord],
    },
    /// ED chemical potentials against the hopping, one colour per length.
    ChemicalPotentials(&'a [ChemicalPotentialRecord]),
}

#[derive(Debug, Error, PartialEq)]
pub enum PlotError {
    #[error("nothing to plot: {0}")]
    Empty(String),
}

#[derive(Clone, Copy, PartialEq)]
enum Mark {
    Line,
    Dashed,
    Dots,
}

struct Series {
    label: String,
    points: Vec<(f64, f64)>,
    mark: Mark,
    colour: usize,
}

struct Figure {
    title: String,
    x_label: String,
    y_label: String,
    series: Vec<Series>,
    note: Option<String>,
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];
const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 84.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 56.0;

pub fn render_plot(data: &Dataset, style: PlotStyle, unit: &str) -> Result<String, PlotError> {
    let log = style == PlotStyle::LogLog;
    let mut fig = match data {
        Dataset::Staircase(steps) => staircase_figure(steps, log, unit)?,
        Dataset::Lobes { curves, ed } => lobe_figure(curves, ed, unit)?,
        Dataset::ChemicalPotentials(rows) => potentials_figure(rows, unit)?,
    };
    if log {
        for s in &mut fig.series {
            s.points.retain(|p| p.0 > 0.0 && p.1 > 0.0);
        }
        fig.series.retain(|s| !s.points.is_empty());
        if fig.series.is_empty() {
            return Err(PlotError::Empty("no positive data for logarithmic axes".into()));
        }
    }
    Ok(draw(&fig, log))
}

fn staircase_figure(steps: &[StaircaseRecord], log: bool, unit: &str) -> Result<Figure, PlotError> {
    if steps.is_empty() {
        return Err(PlotError::Empty("staircase has no steps".into()));
    }
    let beta = steps[0].beta;
    if !log {
        let mut sorted = steps.to_vec();
        sorted.sort_by(|a, b| a.q.total_cmp(&b.q));
        let points = sorted.iter().flat_map(|s| [(s.mu_lo, s.q), (s.mu_hi, s.q)]).collect();
        return Ok(Figure {
            title: format!("Filling against chemical potential, β = {beta}"),
            x_label: format!("μ / {unit}"),
            y_label: "q".into(),
            series: vec![Series {
                label: "q(μ)".into(),
                points,
                mark: Mark::Line,
                colour: 0,
            }],
            note: None,
        });
    }
    let mut units: Vec<(f64, f64)> = steps
        .iter()
        .filter(|s| s.m == 1)
        .map(|s| (1.0 / s.n as f64, 0.5 * (s.mu_lo + s.mu_hi)))
        .collect();
    units.sort_by(|a, b| a.0.total_cmp(&b.0));
    if units.len() < 2 {
        return Err(PlotError::Empty("log-log staircase needs at least two 1/n steps".into()));
    }
    // the smallest n sit before the asymptotic power law sets in
    let tail: Vec<(f64, f64)> = units.iter().copied().filter(|p| p.0 <= 0.25).collect();
    let fitted = if tail.len() >= 2 { &tail } else { &units };
    let logs: Vec<(f64, f64)> = fitted.iter().map(|p| (p.0.ln(), p.1.ln())).collect();
    let mut series = vec![Series {
        label: "1/n step midpoints".into(),
        points: units.clone(),
        mark: Mark::Dots,
        colour: 0,
    }];
    let mut note = None;
    if let Ok(c) = polynomial_fit(&logs, 1) {
        let line = [fitted[0].0, fitted[fitted.len() - 1].0]
            .iter()
            .map(|&x| (x, (c[0] + c[1] * x.ln()).exp()))
            .collect();
        series.push(Series {
            label: "power-law fit".into(),
            points: line,
            mark: Mark::Dashed,
            colour: 1,
        });
        note = Some(format!("fitted exponent {:.3} (n >= {})", c[1], (1.0 / fitted[fitted.len() - 1].0).round()));
    }
    Ok(Figure {
        title: format!("Step midpoints of the 1/n crystals, β = {beta}"),
        x_label: "1/n".into(),
        y_label: format!("μ / {unit}"),
        series,
        note,
    })
}

fn lobe_figure(curves: &[LobeRecord], ed: &[ChemicalPotentialRecord], unit: &str) -> Result<Figure, PlotError> {
    if curves.is_empty() && ed.is_empty() {
        return Err(PlotError::Empty("no lobe or ED records".into()));
    }
    let mut ns: Vec<u32> = curves.iter().map(|r| r.n).collect();
    ns.sort_unstable();
    ns.dedup();
    let mut series = Vec::new();
    for (k, &n) in ns.iter().enumerate() {
        // the expansion is only meaningful up to the first crossing
        let mut rows: Vec<&LobeRecord> = curves.iter().filter(|r| r.n == n).collect();
        rows.sort_by(|a, b| a.hopping.total_cmp(&b.hopping));
        let open = rows.iter().take_while(|r| r.mu_plus >= r.mu_minus).count();
        rows.truncate(open);
        if rows.is_empty() {
            continue;
        }
        let order = rows[0].order;
        series.push(Series {
            label: format!("1/{n} μ+ (order {order})"),
            points: rows.iter().map(|r| (r.hopping, r.mu_plus)).collect(),
            mark: Mark::Dashed,
            colour: k,
        });
        series.push(Series {
            label: format!("1/{n} μ−"),
            points: rows.iter().map(|r| (r.hopping, r.mu_minus)).collect(),
            mark: Mark::Dashed,
            colour: k,
        });
    }
    let mut qs: Vec<f64> = ed.iter().map(|r| r.q).collect();
    qs.sort_by(f64::total_cmp);
    qs.dedup();
    for q in qs {
        let rows: Vec<&ChemicalPotentialRecord> = ed.iter().filter(|r| r.q == q).collect();
        let n = (1.0 / q).round() as u32;
        let colour = ns.iter().position(|&m| m == n).unwrap_or(ns.len());
        series.push(Series {
            label: format!("ED q = {}", tick_label(q)),
            points: rows
                .iter()
                .flat_map(|r| [(r.hopping, r.mu_plus), (r.hopping, r.mu_minus)])
                .collect(),
            mark: Mark::Dots,
            colour,
        });
    }
    if series.is_empty() {
        return Err(PlotError::Empty("every lobe is closed on the whole grid".into()));
    }
    Ok(Figure {
        title: "Phase boundaries of the 1/n crystals".into(),
        x_label: format!("J / {unit}"),
        y_label: format!("μ / {unit}"),
        series,
        note: None,
    })
}

fn potentials_figure(rows: &[ChemicalPotentialRecord], unit: &str) -> Result<Figure, PlotError> {
    if rows.is_empty() {
        return Err(PlotError::Empty("no chemical-potential samples".into()));
    }
    let mut lengths: Vec<usize> = rows.iter().map(|r| r.length).collect();
    lengths.sort_unstable();
    lengths.dedup();
    let series = lengths
        .iter()
        .enumerate()
        .map(|(k, &l)| {
            let mut pts: Vec<(f64, f64)> = rows
                .iter()
                .filter(|r| r.length == l)
                .flat_map(|r| [(r.hopping, r.mu_plus), (r.hopping, r.mu_minus)])
                .collect();
            pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
            Series {
                label: format!("L = {l}"),
                points: pts,
                mark: Mark::Dots,
                colour: k,
            }
        })
        .collect();
    Ok(Figure {
        title: "Chemical potentials from exact diagonalization".into(),
        x_label: format!("J / {unit}"),
        y_label: format!("μ / {unit}"),
        series,
        note: None,
    })
}

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn new(values: impl Iterator<Item = f64>, log: bool) -> Self {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values.filter(|v| v.is_finite()) {
            let v = if log { v.log10() } else { v };
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if hi - lo <= 1e-12 * lo.abs().max(1.0) {
            let pad = if log { 0.5 } else { 0.1 * lo.abs().max(1e-3) };
            lo -= pad;
            hi += pad;
        } else {
            let pad = 0.04 * (hi - lo);
            lo -= pad;
            hi += pad;
        }
        Self { lo, hi, log }
    }

    fn fraction(&self, v: f64) -> f64 {
        let v = if self.log { v.log10() } else { v };
        (v - self.lo) / (self.hi - self.lo)
    }

    /// Tick positions in axis coordinates (log10 for a log axis).
    fn ticks(&self) -> Vec<f64> {
        if self.log && self.hi - self.lo >= 2.0 {
            let step = ((self.hi - self.lo) / 8.0).ceil().max(1.0);
            let first = (self.lo / step).ceil() as i64;
            let last = (self.hi / step).floor() as i64;
            return (first..=last).map(|k| k as f64 * step).collect();
        }
        if self.log {
            let mut out = Vec::new();
            for decade in self.lo.floor() as i64..=self.hi.ceil() as i64 {
                for m in [1.0f64, 2.0, 5.0] {
                    let t = decade as f64 + m.log10();
                    if t >= self.lo && t <= self.hi {
                        out.push(t);
                    }
                }
            }
            if out.len() >= 2 {
                return out;
            }
        }
        let raw = (self.hi - self.lo) / 6.0;
        let mag = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 5.0, 10.0]
            .iter()
            .map(|m| m * mag)
            .find(|s| *s >= raw)
            .unwrap_or(10.0 * mag);
        let first = (self.lo / step).ceil() as i64;
        let last = (self.hi / step).floor() as i64;
        (first..=last).map(|k| k as f64 * step).collect()
    }

    fn label(&self, t: f64) -> String {
        if self.log {
            if (t - t.round()).abs() < 1e-9 {
                return format!("1e{}", t.round() as i64);
            }
            return tick_label(10f64.powf(t));
        }
        tick_label(t)
    }
}

fn tick_label(v: f64) -> String {
    if v == 0.0 || v.abs() < 1e-15 {
        return "0".into();
    }
    let a = v.abs();
    if !(1e-3..1e4).contains(&a) {
        return format!("{v:.1e}");
    }
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn draw(fig: &Figure, log: bool) -> String {
    let all = || fig.series.iter().flat_map(|s| s.points.iter());
    let x = Axis::new(all().map(|p| p.0), log);
    let y = Axis::new(all().map(|p| p.1), log);
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let px = |v: f64| LEFT + x.fraction(v) * pw;
    let py = |v: f64| TOP + (1.0 - y.fraction(v)) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        LEFT + pw / 2.0,
        escape(&fig.title)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for t in x.ticks() {
        let xp = LEFT + (t - x.lo) / (x.hi - x.lo) * pw;
        let _ = writeln!(
            s,
            r##"<line x1="{xp:.2}" y1="{:.2}" x2="{xp:.2}" y2="{:.2}" stroke="#999" stroke-width="0.5"/>"##,
            TOP,
            TOP + ph
        );
        let _ = writeln!(
            s,
            r#"<text x="{xp:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            TOP + ph + 16.0,
            escape(&x.label(t))
        );
    }
    for t in y.ticks() {
        let yp = TOP + (1.0 - (t - y.lo) / (y.hi - y.lo)) * ph;
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{yp:.2}" x2="{:.2}" y2="{yp:.2}" stroke="#999" stroke-width="0.5"/>"##,
            LEFT + pw
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            yp + 4.0,
            escape(&y.label(t))
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 14.0,
        escape(&fig.x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(&fig.y_label)
    );

    let _ = writeln!(
        s,
        r#"<clipPath id="plot-area"><rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}"/></clipPath>"#
    );
    let _ = writeln!(s, r#"<g clip-path="url(#plot-area)">"#);
    for series in &fig.series {
        let colour = PALETTE[series.colour % PALETTE.len()];
        match series.mark {
            Mark::Line | Mark::Dashed => {
                let pts: Vec<String> = series
                    .points
                    .iter()
                    .map(|p| format!("{:.2},{:.2}", px(p.0), py(p.1)))
                    .collect();
                let dash = if series.mark == Mark::Dashed {
                    r#" stroke-dasharray="6 4""#
                } else {
                    ""
                };
                let _ = writeln!(
                    s,
                    r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="1.5"{dash}/>"#,
                    pts.join(" ")
                );
            }
            Mark::Dots => {
                for p in &series.points {
                    let _ = writeln!(
                        s,
                        r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{colour}"/>"#,
                        px(p.0),
                        py(p.1)
                    );
                }
            }
        }
    }
    let _ = writeln!(s, "</g>");

    let lx = LEFT + pw + 12.0;
    for (k, series) in fig.series.iter().enumerate() {
        let ly = TOP + 10.0 + 18.0 * k as f64;
        let colour = PALETTE[series.colour % PALETTE.len()];
        if series.mark == Mark::Dots {
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{ly:.2}" r="3" fill="{colour}"/>"#, lx + 10.0);
        } else {
            let dash = if series.mark == Mark::Dashed {
                r#" stroke-dasharray="6 4""#
            } else {
                ""
            };
            let _ = writeln!(
                s,
                r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{colour}" stroke-width="1.5"{dash}/>"#,
                lx + 20.0
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 26.0,
            ly + 4.0,
            escape(&series.label)
        );
    }
    if let Some(note) = &fig.note {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-style="italic">{}</text>"#,
            LEFT + 10.0,
            TOP + 18.0,
            escape(note)
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn steps() -> Vec<StaircaseRecord> {
        (2..8)
            .map(|n| StaircaseRecord {
                m: 1,
                n,
                q: 1.0 / n as f64,
                mu_lo: 0.5 * (n as f64).powi(-6),
                mu_hi: 2.0 * (n as f64).powi(-6),
                order: 0,
                beta: 6,
            })
            .collect()
    }

    #[test]
    fn exponent_is_annotated() {
        let svg = render_plot(&Dataset::Staircase(&steps()), PlotStyle::LogLog, "Δ_β").unwrap();
        assert!(svg.contains("fitted exponent 6.000 (n &gt;= 4)"), "{svg}");
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(render_plot(&Dataset::Staircase(&[]), PlotStyle::Linear, "Δ_β").is_err());
        let e = render_plot(&Dataset::ChemicalPotentials(&[]), PlotStyle::LogLog, "Δ_β");
        assert!(matches!(e, Err(PlotError::Empty(_))));
    }

    #[test]
    fn tick_labels() {
        assert_eq!(tick_label(0.25), "0.25");
        assert_eq!(tick_label(2.0), "2");
        assert_eq!(tick_label(1e-5), "1.0e-5");
        assert_eq!(tick_label(0.0), "0");
    }
}
