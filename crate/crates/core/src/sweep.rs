//! Parameter-grid execution: sweeps over one or two model parameters,
//! figure-reproducing recipes, and deterministic CSV/SVG emission.
//!
//! Grid points are independent and solved in parallel; assembly is by axis
//! index, so the output is byte-identical regardless of worker count or
//! scheduling.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;

use crate::analytic;
use crate::error::{Error, Result};
use crate::liouville::{build_liouvillian, steady_state, SteadyStateReport, DEFAULT_TOL};
use crate::model::{build_heff, collapse_channels, SystemParams};
use crate::observables;
use crate::quantum::Truncation;

/// Model parameter a sweep axis may vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamName {
    G,
    Kappa,
    Gamma,
    Epsilon,
    DeltaP,
    NTh,
}

impl ParamName {
    pub fn as_str(&self) -> &'static str {
        match self {
            ParamName::G => "g",
            ParamName::Kappa => "kappa",
            ParamName::Gamma => "gamma",
            ParamName::Epsilon => "epsilon",
            ParamName::DeltaP => "delta_p",
            ParamName::NTh => "n_th",
        }
    }

    pub fn apply(&self, sp: &mut SystemParams, value: f64) {
        match self {
            ParamName::G => sp.g = value,
            ParamName::Kappa => sp.kappa = value,
            ParamName::Gamma => sp.gamma = value,
            ParamName::Epsilon => sp.epsilon = value,
            ParamName::DeltaP => sp.delta_p = value,
            ParamName::NTh => sp.n_th = value,
        }
    }
}

impl FromStr for ParamName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "g" => Ok(ParamName::G),
            "kappa" => Ok(ParamName::Kappa),
            "gamma" => Ok(ParamName::Gamma),
            "epsilon" => Ok(ParamName::Epsilon),
            "delta_p" => Ok(ParamName::DeltaP),
            "n_th" => Ok(ParamName::NTh),
            other => Err(Error::InvalidSpec(format!("unknown axis parameter `{other}`"))),
        }
    }
}

/// Column a sweep can emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputKind {
    G2Numeric,
    G2Analytic,
    Fidelity,
    MeanPhonons,
    MeanPhotons,
    Residual,
}

impl OutputKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            OutputKind::G2Numeric => "g2_numeric",
            OutputKind::G2Analytic => "g2_analytic",
            OutputKind::Fidelity => "fidelity",
            OutputKind::MeanPhonons => "mean_phonons",
            OutputKind::MeanPhotons => "mean_photons",
            OutputKind::Residual => "residual",
        }
    }

    /// Whether this column requires a master-equation solve (as opposed to
    /// a closed-form evaluation).
    fn needs_solve(&self) -> bool {
        !matches!(self, OutputKind::G2Analytic)
    }
}

impl FromStr for OutputKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "g2_numeric" => Ok(OutputKind::G2Numeric),
            "g2_analytic" => Ok(OutputKind::G2Analytic),
            "fidelity" => Ok(OutputKind::Fidelity),
            "mean_phonons" => Ok(OutputKind::MeanPhonons),
            "mean_photons" => Ok(OutputKind::MeanPhotons),
            "residual" => Ok(OutputKind::Residual),
            other => Err(Error::InvalidSpec(format!("unknown output column `{other}`"))),
        }
    }
}

/// One sweep dimension: a named parameter and the grid values it takes.
#[derive(Debug, Clone)]
pub struct Axis {
    pub name: ParamName,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn linear(name: ParamName, min: f64, max: f64, points: usize) -> Result<Self> {
        if points < 2 {
            return Err(Error::InvalidSpec(format!(
                "axis {} needs at least 2 points, got {points}",
                name.as_str()
            )));
        }
        let step = (max - min) / (points - 1) as f64;
        Ok(Axis {
            name,
            values: (0..points).map(|i| min + step * i as f64).collect(),
        })
    }

    pub fn log(name: ParamName, min: f64, max: f64, points: usize) -> Result<Self> {
        if min <= 0.0 || max <= 0.0 {
            return Err(Error::InvalidSpec(format!(
                "log axis {} needs positive bounds, got [{min}, {max}]",
                name.as_str()
            )));
        }
        let lin = Axis::linear(name, min.ln(), max.ln(), points)?;
        Ok(Axis {
            name,
            values: lin.values.into_iter().map(f64::exp).collect(),
        })
    }

    pub fn list(name: ParamName, values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidSpec(format!(
                "axis {} needs at least 2 points, got {}",
                name.as_str(),
                values.len()
            )));
        }
        Ok(Axis { name, values })
    }
}

/// Full description of a sweep: base parameters, 1 or 2 axes, the output
/// columns, and the solver settings applied at every grid point.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub base: SystemParams,
    pub axes: Vec<Axis>,
    pub outputs: Vec<OutputKind>,
    pub truncation: Truncation,
    pub tol: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(Error::InvalidSpec(format!(
                "sweeps take 1 or 2 axes, got {}",
                self.axes.len()
            )));
        }
        for axis in &self.axes {
            if axis.values.len() < 2 {
                return Err(Error::InvalidSpec(format!(
                    "axis {} needs at least 2 points",
                    axis.name.as_str()
                )));
            }
        }
        if self.tol <= 0.0 {
            return Err(Error::InvalidSpec(format!("tol = {} must be > 0", self.tol)));
        }
        Ok(())
    }

    fn grid_len(&self) -> usize {
        self.axes.iter().map(|a| a.values.len()).product()
    }

    /// Axis values at flat grid index (row-major: first axis outermost).
    fn point(&self, flat: usize) -> Vec<f64> {
        match self.axes.len() {
            1 => vec![self.axes[0].values[flat]],
            2 => {
                let inner = self.axes[1].values.len();
                vec![
                    self.axes[0].values[flat / inner],
                    self.axes[1].values[flat % inner],
                ]
            }
            _ => unreachable!("validated axis count"),
        }
    }
}

/// One grid point's results: axis values, one optional value per output
/// column (None where the computation failed), and the error code if any.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub axis_values: Vec<f64>,
    pub outputs: Vec<Option<f64>>,
    pub error: Option<&'static str>,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
}

fn solve_point(sp: &SystemParams, dims: Truncation, tol: f64) -> Result<SteadyStateReport> {
    let h = build_heff(sp, dims)?;
    let l = build_liouvillian(&h, &collapse_channels(sp, dims))?;
    steady_state(&l, tol)
}

fn compute_row(spec: &SweepSpec, flat: usize) -> SweepRow {
    let axis_values = spec.point(flat);
    let mut sp = spec.base;
    for (axis, &v) in spec.axes.iter().zip(&axis_values) {
        axis.name.apply(&mut sp, v);
    }

    let mut outputs = vec![None; spec.outputs.len()];
    let mut error: Option<&'static str> = None;
    let record = |e: &Error, error: &mut Option<&'static str>| {
        if error.is_none() {
            *error = Some(e.code());
        }
    };

    if let Err(e) = sp.validate() {
        return SweepRow { axis_values, outputs, error: Some(e.code()) };
    }

    let report = if spec.outputs.iter().any(OutputKind::needs_solve) {
        match solve_point(&sp, spec.truncation, spec.tol) {
            Ok(r) => Some(r),
            Err(e) => {
                record(&e, &mut error);
                None
            }
        }
    } else {
        None
    };

    for (slot, kind) in outputs.iter_mut().zip(&spec.outputs) {
        match kind {
            OutputKind::G2Analytic => *slot = Some(analytic::g2_analytic(&sp)),
            OutputKind::G2Numeric => {
                if let Some(r) = &report {
                    match observables::g2_zero(&r.rho) {
                        Ok(v) => *slot = Some(v),
                        Err(e) => record(&e, &mut error),
                    }
                }
            }
            OutputKind::Fidelity => {
                if let Some(r) = &report {
                    match observables::fidelity_f(&r.rho) {
                        Ok(v) => *slot = Some(v),
                        Err(e) => record(&e, &mut error),
                    }
                }
            }
            OutputKind::MeanPhonons => {
                if let Some(r) = &report {
                    *slot = Some(observables::occupations(&r.rho).1);
                }
            }
            OutputKind::MeanPhotons => {
                if let Some(r) = &report {
                    *slot = Some(observables::occupations(&r.rho).0);
                }
            }
            OutputKind::Residual => {
                if let Some(r) = &report {
                    *slot = Some(r.residual);
                }
            }
        }
    }
    SweepRow { axis_values, outputs, error }
}

/// Executes every grid point (in parallel) and assembles rows in axis-index
/// order. Per-point failures become row error codes; only an invalid spec
/// fails the whole sweep.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let rows: Vec<SweepRow> = (0..spec.grid_len())
        .into_par_iter()
        .map(|flat| compute_row(spec, flat))
        .collect();
    Ok(SweepResult { spec: spec.clone(), rows })
}

/// The five canned figures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
}

impl Figure {
    pub fn number(&self) -> u8 {
        match self {
            Figure::Fig2 => 2,
            Figure::Fig3 => 3,
            Figure::Fig4 => 4,
            Figure::Fig5 => 5,
            Figure::Fig6 => 6,
        }
    }
}

impl FromStr for Figure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2" | "fig2" => Ok(Figure::Fig2),
            "3" | "fig3" => Ok(Figure::Fig3),
            "4" | "fig4" => Ok(Figure::Fig4),
            "5" | "fig5" => Ok(Figure::Fig5),
            "6" | "fig6" => Ok(Figure::Fig6),
            other => Err(Error::InvalidSpec(format!("unknown figure `{other}`"))),
        }
    }
}

/// Default thermal occupations for the fig6 family of curves (the source
/// figure does not state its values).
pub const FIG6_N_TH: [f64; 6] = [0.0, 0.01, 0.1, 0.5, 1.0, 2.0];

/// Locked parameter sets reproducing the reference figures.
pub fn figure_recipe(which: Figure) -> SweepSpec {
    let base = SystemParams::baseline();
    let trunc = |n_a, n_b| Truncation::new(n_a, n_b).expect("static sizes are valid");
    match which {
        // log-plot of g2 over the (detuning, coupling) plane
        Figure::Fig2 => SweepSpec {
            base,
            axes: vec![
                Axis::linear(ParamName::DeltaP, -3.0, 3.0, 61).expect("static axis"),
                Axis::linear(ParamName::G, 0.5, 3.0, 61).expect("static axis"),
            ],
            outputs: vec![OutputKind::G2Numeric],
            truncation: trunc(3, 8),
            tol: DEFAULT_TOL,
        },
        // fidelity of the few-phonon expansion vs pump strength
        Figure::Fig3 => SweepSpec {
            base,
            axes: vec![Axis::linear(ParamName::Epsilon, 0.01, 1.0, 101).expect("static axis")],
            outputs: vec![OutputKind::Fidelity, OutputKind::MeanPhonons, OutputKind::Residual],
            truncation: trunc(3, 12),
            tol: DEFAULT_TOL,
        },
        // the blockade dip: numeric and closed-form g2 vs detuning
        Figure::Fig4 => SweepSpec {
            base,
            axes: vec![Axis::linear(ParamName::DeltaP, -4.0, 4.0, 101).expect("static axis")],
            outputs: vec![
                OutputKind::G2Numeric,
                OutputKind::G2Analytic,
                OutputKind::MeanPhonons,
                OutputKind::Residual,
            ],
            truncation: trunc(3, 10),
            tol: DEFAULT_TOL,
        },
        // cooperativity structure over the dissipation plane
        Figure::Fig5 => SweepSpec {
            base,
            axes: vec![
                Axis::log(ParamName::Kappa, 0.1, 10.0, 61).expect("static axis"),
                Axis::log(ParamName::Gamma, 1e-3, 0.1, 61).expect("static axis"),
            ],
            outputs: vec![OutputKind::G2Numeric, OutputKind::G2Analytic],
            truncation: trunc(3, 10),
            tol: DEFAULT_TOL,
        },
        // the fig4 cut at a family of thermal occupations
        Figure::Fig6 => SweepSpec {
            base,
            axes: vec![
                Axis::list(ParamName::NTh, FIG6_N_TH.to_vec()).expect("static axis"),
                Axis::linear(ParamName::DeltaP, -4.0, 4.0, 41).expect("static axis"),
            ],
            outputs: vec![OutputKind::G2Numeric],
            truncation: trunc(3, 16),
            tol: DEFAULT_TOL,
        },
    }
}

fn format_value(v: f64) -> String {
    format!("{v:e}")
}

/// Renders the result as CSV text: header of axis names, output names and
/// `error`; shortest-round-trip scientific values; empty cells for failed
/// outputs; LF line endings.
pub fn csv_text(result: &SweepResult) -> String {
    let mut out = String::new();
    let header: Vec<&str> = result
        .spec
        .axes
        .iter()
        .map(|a| a.name.as_str())
        .chain(result.spec.outputs.iter().map(|o| o.as_str()))
        .chain(std::iter::once("error"))
        .collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in &result.rows {
        let mut cells: Vec<String> = row.axis_values.iter().map(|&v| format_value(v)).collect();
        for v in &row.outputs {
            cells.push(v.map(format_value).unwrap_or_default());
        }
        cells.push(row.error.unwrap_or("").to_string());
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn write_csv(result: &SweepResult, path: &Path) -> Result<()> {
    std::fs::write(path, csv_text(result))?;
    Ok(())
}

const SVG_W: f64 = 800.0;
const SVG_H: f64 = 600.0;
const MARGIN_L: f64 = 80.0;
const MARGIN_R: f64 = 30.0;
const MARGIN_T: f64 = 30.0;
const MARGIN_B: f64 = 60.0;
const LINE_COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn px(v: f64) -> String {
    format!("{v:.2}")
}

/// Maps t in [0, 1] to a blue-white-red diverging color.
fn heat_color(t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    let lerp = |a: f64, b: f64, s: f64| a + (b - a) * s;
    let (r, g, b) = if t < 0.5 {
        let s = t / 0.5;
        (lerp(33.0, 247.0, s), lerp(102.0, 247.0, s), lerp(172.0, 247.0, s))
    } else {
        let s = (t - 0.5) / 0.5;
        (lerp(247.0, 178.0, s), lerp(247.0, 24.0, s), lerp(247.0, 43.0, s))
    };
    format!("rgb({},{},{})", r.round() as u8, g.round() as u8, b.round() as u8)
}

fn svg_header(body: &mut String) {
    let _ = writeln!(
        body,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_W}\" height=\"{SVG_H}\" viewBox=\"0 0 {SVG_W} {SVG_H}\">"
    );
    let _ = writeln!(body, "<rect width=\"{SVG_W}\" height=\"{SVG_H}\" fill=\"white\"/>");
}

fn axis_labels(body: &mut String, x_label: &str, y_label: &str) {
    let _ = writeln!(
        body,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"16\">{x_label}</text>",
        px((MARGIN_L + SVG_W - MARGIN_R) / 2.0),
        px(SVG_H - 15.0)
    );
    let _ = writeln!(
        body,
        "<text x=\"20\" y=\"{}\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"16\" transform=\"rotate(-90 20 {})\">{y_label}</text>",
        px((MARGIN_T + SVG_H - MARGIN_B) / 2.0),
        px((MARGIN_T + SVG_H - MARGIN_B) / 2.0)
    );
}

fn render_line_plot(result: &SweepResult) -> String {
    let xs = &result.spec.axes[0].values;
    let (x_min, x_max) = (xs[0].min(xs[xs.len() - 1]), xs[0].max(xs[xs.len() - 1]));
    let plot_w = SVG_W - MARGIN_L - MARGIN_R;
    let plot_h = SVG_H - MARGIN_T - MARGIN_B;

    // collect finite values across all output columns to fix the y range
    let mut finite: Vec<f64> = Vec::new();
    for row in &result.rows {
        for v in row.outputs.iter().flatten() {
            if v.is_finite() {
                finite.push(*v);
            }
        }
    }
    let log_y = !finite.is_empty()
        && finite.iter().all(|&v| v > 0.0)
        && finite.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            / finite.iter().cloned().fold(f64::INFINITY, f64::min)
            > 1e2;
    let transform = |v: f64| if log_y { v.log10() } else { v };
    let (mut y_min, mut y_max) = finite
        .iter()
        .map(|&v| transform(v))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !y_min.is_finite() || y_min == y_max {
        y_min -= 1.0;
        y_max += 1.0;
    }

    let x_px = |x: f64| MARGIN_L + (x - x_min) / (x_max - x_min) * plot_w;
    let y_px = |y: f64| MARGIN_T + (y_max - y) / (y_max - y_min) * plot_h;

    let mut body = String::new();
    svg_header(&mut body);
    let _ = writeln!(
        body,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>",
        px(MARGIN_L),
        px(MARGIN_T),
        px(plot_w),
        px(plot_h)
    );
    for (col, kind) in result.spec.outputs.iter().enumerate() {
        let mut points = String::new();
        for (row, &x) in result.rows.iter().zip(xs) {
            if let Some(v) = row.outputs[col] {
                if v.is_finite() && (!log_y || v > 0.0) {
                    let _ = write!(points, "{},{} ", px(x_px(x)), px(y_px(transform(v))));
                }
            }
        }
        let color = LINE_COLORS[col % LINE_COLORS.len()];
        let _ = writeln!(
            body,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>",
            points.trim_end()
        );
        let _ = writeln!(
            body,
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"13\" fill=\"{color}\">{}</text>",
            px(MARGIN_L + 10.0),
            px(MARGIN_T + 20.0 + 16.0 * col as f64),
            kind.as_str()
        );
    }
    // corner tick labels
    let _ = writeln!(
        body,
        "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"12\">{}</text>",
        px(MARGIN_L),
        px(SVG_H - MARGIN_B + 20.0),
        format_value(x_min)
    );
    let _ = writeln!(
        body,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"12\">{}</text>",
        px(SVG_W - MARGIN_R),
        px(SVG_H - MARGIN_B + 20.0),
        format_value(x_max)
    );
    let y_label = if log_y {
        format!("log10({})", result.spec.outputs[0].as_str())
    } else {
        result.spec.outputs[0].as_str().to_string()
    };
    axis_labels(&mut body, result.spec.axes[0].name.as_str(), &y_label);
    body.push_str("</svg>\n");
    body
}

fn render_heatmap(result: &SweepResult) -> String {
    let xs = &result.spec.axes[0].values;
    let ys = &result.spec.axes[1].values;
    let (nx, ny) = (xs.len(), ys.len());
    let plot_w = SVG_W - MARGIN_L - MARGIN_R;
    let plot_h = SVG_H - MARGIN_T - MARGIN_B;
    let cell_w = plot_w / nx as f64;
    let cell_h = plot_h / ny as f64;

    // log10 of the first output column
    let values: Vec<Option<f64>> = result
        .rows
        .iter()
        .map(|r| r.outputs[0].filter(|v| v.is_finite() && *v > 0.0).map(f64::log10))
        .collect();
    let (mut lo, mut hi) = values
        .iter()
        .flatten()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() || lo == hi {
        lo -= 1.0;
        hi += 1.0;
    }

    let mut body = String::new();
    svg_header(&mut body);
    for i in 0..nx {
        for j in 0..ny {
            let flat = i * ny + j;
            let fill = match values[flat] {
                Some(v) => heat_color((v - lo) / (hi - lo)),
                None => "rgb(128,128,128)".to_string(),
            };
            // y axis increases upward: last j at the top
            let x0 = MARGIN_L + i as f64 * cell_w;
            let y0 = MARGIN_T + (ny - 1 - j) as f64 * cell_h;
            let _ = writeln!(
                body,
                "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{fill}\"/>",
                px(x0),
                px(y0),
                px(cell_w + 0.5),
                px(cell_h + 0.5)
            );
        }
    }

    // overlay the two-phonon resonance curves when the axes are
    // (detuning, coupling)
    if result.spec.axes[0].name == ParamName::DeltaP && result.spec.axes[1].name == ParamName::G {
        let (x_min, x_max) = (xs[0], xs[nx - 1]);
        let (y_min, y_max) = (ys[0], ys[ny - 1]);
        let x_px = |x: f64| MARGIN_L + (x - x_min) / (x_max - x_min) * plot_w;
        let y_px = |y: f64| MARGIN_T + (y_max - y) / (y_max - y_min) * plot_h;
        for sign in [-1.0, 1.0] {
            let mut points = String::new();
            for k in 0..=100 {
                let g = y_min + (y_max - y_min) * k as f64 / 100.0;
                let dp = sign * 2f64.sqrt() * g / 2.0;
                if dp >= x_min && dp <= x_max {
                    let _ = write!(points, "{},{} ", px(x_px(dp)), px(y_px(g)));
                }
            }
            let _ = writeln!(
                body,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"white\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"/>",
                points.trim_end()
            );
        }
    }

    let _ = writeln!(
        body,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>",
        px(MARGIN_L),
        px(MARGIN_T),
        px(plot_w),
        px(plot_h)
    );
    axis_labels(
        &mut body,
        result.spec.axes[0].name.as_str(),
        result.spec.axes[1].name.as_str(),
    );
    body.push_str("</svg>\n");
    body
}

/// Renders a 1-axis result as a line plot (log-scale y when the data spans
/// decades) or a 2-axis result as a log10 heatmap of the first output.
pub fn svg_text(result: &SweepResult) -> Result<String> {
    if result.spec.outputs.is_empty() {
        return Err(Error::UnsupportedShape("no output columns to plot".into()));
    }
    match result.spec.axes.len() {
        1 => Ok(render_line_plot(result)),
        2 => Ok(render_heatmap(result)),
        n => Err(Error::UnsupportedShape(format!("{n} axes"))),
    }
}

pub fn render_svg(result: &SweepResult, path: &Path) -> Result<()> {
    std::fs::write(path, svg_text(result)?)?;
    Ok(())
}

/// Parses a plain-text sweep description: `key = value` lines with `#`
/// comments. Keys: the six model parameters, `na`, `nb`, `tol`,
/// `outputs = a, b, ...`, and one or two
/// `axis = <param> <linear|log> <min> <max> <points>` or
/// `axis = <param> list <v1,v2,...>` lines.
pub fn parse_sweep_spec(text: &str) -> Result<SweepSpec> {
    let mut base = SystemParams::baseline();
    let mut axes: Vec<Axis> = Vec::new();
    let mut outputs: Vec<OutputKind> = Vec::new();
    let mut n_a = 3usize;
    let mut n_b = 10usize;
    let mut tol = DEFAULT_TOL;

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::InvalidSpec(format!("line {}: expected `key = value`", lineno + 1))
        })?;
        let (key, value) = (key.trim(), value.trim());
        let parse_f64 = |v: &str| -> Result<f64> {
            v.parse::<f64>()
                .map_err(|_| Error::InvalidSpec(format!("line {}: bad number `{v}`", lineno + 1)))
        };
        match key {
            "g" => base.g = parse_f64(value)?,
            "kappa" => base.kappa = parse_f64(value)?,
            "gamma" => base.gamma = parse_f64(value)?,
            "epsilon" => base.epsilon = parse_f64(value)?,
            "delta_p" => base.delta_p = parse_f64(value)?,
            "n_th" => base.n_th = parse_f64(value)?,
            "cavity_detuning" => base.cavity_detuning = Some(parse_f64(value)?),
            "na" => {
                n_a = value.parse().map_err(|_| {
                    Error::InvalidSpec(format!("line {}: bad integer `{value}`", lineno + 1))
                })?
            }
            "nb" => {
                n_b = value.parse().map_err(|_| {
                    Error::InvalidSpec(format!("line {}: bad integer `{value}`", lineno + 1))
                })?
            }
            "tol" => tol = parse_f64(value)?,
            "outputs" => {
                for item in value.split(',') {
                    outputs.push(item.trim().parse()?);
                }
            }
            "axis" => {
                let parts: Vec<&str> = value.split_whitespace().collect();
                let usage = || {
                    Error::InvalidSpec(format!(
                        "line {}: axis wants `<param> <linear|log> <min> <max> <points>` or `<param> list <v1,v2,...>`",
                        lineno + 1
                    ))
                };
                if parts.len() < 3 {
                    return Err(usage());
                }
                let name: ParamName = parts[0].parse()?;
                let axis = match parts[1] {
                    "list" => {
                        let values: Vec<f64> = parts[2]
                            .split(',')
                            .map(parse_f64)
                            .collect::<Result<_>>()?;
                        Axis::list(name, values)?
                    }
                    kind @ ("linear" | "log") => {
                        if parts.len() != 5 {
                            return Err(usage());
                        }
                        let (min, max) = (parse_f64(parts[2])?, parse_f64(parts[3])?);
                        let points: usize = parts[4].parse().map_err(|_| usage())?;
                        if kind == "linear" {
                            Axis::linear(name, min, max, points)?
                        } else {
                            Axis::log(name, min, max, points)?
                        }
                    }
                    _ => return Err(usage()),
                };
                axes.push(axis);
            }
            other => {
                return Err(Error::InvalidSpec(format!(
                    "line {}: unknown key `{other}`",
                    lineno + 1
                )))
            }
        }
    }
    if outputs.is_empty() {
        outputs = vec![OutputKind::G2Numeric, OutputKind::G2Analytic];
    }
    let spec = SweepSpec {
        base,
        axes,
        outputs,
        truncation: Truncation::new(n_a, n_b)?,
        tol,
    };
    spec.validate()?;
    Ok(spec)
}
