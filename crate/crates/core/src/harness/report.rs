use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::harness::suite::SuiteSummary;
use crate::harness::verify::GridReport;

/// File formats the emitters know how to write.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
    Svg,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
            OutputFormat::Svg => "svg",
        };
        f.write_str(name)
    }
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "svg" => Ok(OutputFormat::Svg),
            other => Err(Error::InvalidArgument(format!(
                "unknown output format '{other}', expected csv, json or svg"
            ))),
        }
    }
}

/// Write suite results into `out_dir` in the requested formats and
/// return the files written. Suites are sorted by configuration before
/// writing, so the byte content depends only on the results themselves.
pub fn emit_results(
    summaries: &[SuiteSummary],
    out_dir: &Path,
    formats: &[OutputFormat],
) -> Result<Vec<PathBuf>> {
    if summaries.is_empty() || summaries.iter().any(|s| s.records.is_empty()) {
        return Err(Error::EmptyResults);
    }
    fs::create_dir_all(out_dir)?;
    let mut sorted: Vec<&SuiteSummary> = summaries.iter().collect();
    sorted.sort_by(|a, b| {
        let ka = suite_key(a);
        let kb = suite_key(b);
        ka.partial_cmp(&kb).expect("finite config keys")
    });

    let mut written = Vec::new();
    for format in formats {
        let path = match format {
            OutputFormat::Csv => {
                let path = out_dir.join("results.csv");
                fs::write(&path, results_csv(&sorted)?)?;
                path
            }
            OutputFormat::Json => {
                let path = out_dir.join("results.json");
                let body = serde_json::to_vec_pretty(&sorted)?;
                fs::write(&path, body)?;
                path
            }
            OutputFormat::Svg => {
                let path = out_dir.join("results.svg");
                fs::write(&path, trace_svg(sorted[0]))?;
                path
            }
        };
        written.push(path);
    }
    Ok(written)
}

fn suite_key(s: &SuiteSummary) -> (usize, f64, f64, String) {
    (
        s.config.trial.n,
        s.config.trial.bias_mean,
        s.config.trial.corr_mean,
        s.config.trial.weighting.to_string(),
    )
}

fn results_csv(sorted: &[&SuiteSummary]) -> Result<Vec<u8>> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record([
        "n",
        "b_mean",
        "b_std",
        "c_mean",
        "c_std",
        "model",
        "trials",
        "accuracy_mean",
        "accuracy_std",
        "efficiency_mean",
        "efficiency_std",
        "c0_mean",
        "c0_std",
    ])?;
    for summary in sorted {
        let t = &summary.config.trial;
        for agg in &summary.aggregates {
            writer.write_record([
                t.n.to_string(),
                t.bias_mean.to_string(),
                t.bias_std.to_string(),
                t.corr_mean.to_string(),
                t.corr_std.to_string(),
                agg.model.clone(),
                agg.trials.to_string(),
                agg.accuracy_mean.to_string(),
                agg.accuracy_std.to_string(),
                agg.efficiency_mean.to_string(),
                agg.efficiency_std.to_string(),
                summary.c0_mean.to_string(),
                summary.c0_std.to_string(),
            ])?;
        }
    }
    Ok(writer.into_inner().expect("vec sink cannot fail"))
}

/// One `results.csv` row, as written by [`emit_results`].
#[derive(Debug, Clone, Deserialize)]
pub struct SummaryRow {
    pub n: usize,
    pub b_mean: f64,
    pub b_std: f64,
    pub c_mean: f64,
    pub c_std: f64,
    pub model: String,
    pub trials: usize,
    pub accuracy_mean: f64,
    pub accuracy_std: f64,
    pub efficiency_mean: f64,
    pub efficiency_std: f64,
    pub c0_mean: f64,
    pub c0_std: f64,
}

/// Read a `results.csv` back into rows, preserving file order.
pub fn read_results_csv(path: &Path) -> Result<Vec<SummaryRow>> {
    let mut reader = csv::Reader::from_path(path)?;
    let mut rows = Vec::new();
    for row in reader.deserialize() {
        rows.push(row?);
    }
    if rows.is_empty() {
        return Err(Error::EmptyResults);
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// hand-rolled SVG, enough for a trace plot and a grid heat map
// ---------------------------------------------------------------------------

struct Canvas {
    body: String,
    width: f64,
    height: f64,
}

impl Canvas {
    fn new(width: f64, height: f64) -> Self {
        Self {
            body: String::new(),
            width,
            height,
        }
    }

    fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, style: &str) {
        self.body.push_str(&format!(
            "<line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" {style}/>\n"
        ));
    }

    fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, style: &str) {
        self.body.push_str(&format!(
            "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{w:.2}\" height=\"{h:.2}\" {style}/>\n"
        ));
    }

    fn text(&mut self, x: f64, y: f64, anchor: &str, size: u32, content: &str) {
        self.body.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{y:.2}\" text-anchor=\"{anchor}\" font-size=\"{size}\" \
             font-family=\"sans-serif\" fill=\"#222\">{content}</text>\n"
        ));
    }

    fn text_rotated(&mut self, x: f64, y: f64, angle: f64, size: u32, content: &str) {
        self.body.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{y:.2}\" text-anchor=\"end\" font-size=\"{size}\" \
             font-family=\"sans-serif\" fill=\"#222\" \
             transform=\"rotate({angle:.0} {x:.2} {y:.2})\">{content}</text>\n"
        ));
    }

    fn polyline(&mut self, points: &[(f64, f64)], style: &str) {
        let coords: Vec<String> = points
            .iter()
            .map(|(x, y)| format!("{x:.2},{y:.2}"))
            .collect();
        self.body.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" {style}/>\n",
            coords.join(" ")
        ));
    }

    fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{:.0}\" \
             viewBox=\"0 0 {:.0} {:.0}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}</svg>\n",
            self.width, self.height, self.width, self.height, self.body
        )
    }
}

fn nice_step(span: f64, target_ticks: f64) -> f64 {
    let raw = (span / target_ticks).max(1e-9);
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let step = if norm <= 1.0 {
        1.0
    } else if norm <= 2.0 {
        2.0
    } else if norm <= 5.0 {
        5.0
    } else {
        10.0
    };
    step * mag
}

/// Worst-interference trace of the first trial, with the threshold, the
/// first real failure, the headline flag and the chosen static floor
/// marked.
fn trace_svg(summary: &SuiteSummary) -> String {
    let record = &summary.records[0];
    let (width, height) = (860.0, 520.0);
    let (left, right, top, bottom) = (70.0, 30.0, 48.0, 64.0);
    let plot_w = width - left - right;
    let plot_h = height - top - bottom;
    let mut canvas = Canvas::new(width, height);

    let len = record.traces.expectation.len().max(1);
    let peak = record
        .traces
        .expectation
        .iter()
        .chain(&record.traces.raw)
        .chain(&record.traces.exact)
        .fold(0.0f64, |acc, &v| acc.max(v));
    let y_max = (peak * 1.15).max(1.25);
    let x_of = |k: usize| {
        if len == 1 {
            left + plot_w / 2.0
        } else {
            left + (k as f64 - 1.0) / (len as f64 - 1.0) * plot_w
        }
    };
    let y_of = |v: f64| top + (1.0 - (v.max(0.0) / y_max)) * plot_h;

    canvas.text(
        width / 2.0,
        24.0,
        "middle",
        15,
        &format!(
            "worst interference while storing (trial 0, n = {}, b = {:.3}, c = {:.3})",
            record.n, record.drawn_bias, record.drawn_correlation
        ),
    );

    // frame and ticks
    canvas.rect(
        left,
        top,
        plot_w,
        plot_h,
        "fill=\"none\" stroke=\"#888\" stroke-width=\"1\"",
    );
    let x_step = nice_step(len as f64, 8.0).max(1.0) as usize;
    let mut k = x_step;
    while k <= len {
        let x = x_of(k);
        canvas.line(x, top + plot_h, x, top + plot_h + 5.0, "stroke=\"#888\"");
        canvas.text(x, top + plot_h + 20.0, "middle", 11, &k.to_string());
        k += x_step;
    }
    let y_step = nice_step(y_max, 6.0);
    let mut v = 0.0;
    while v <= y_max + 1e-9 {
        let y = y_of(v);
        canvas.line(left - 5.0, y, left, y, "stroke=\"#888\"");
        canvas.line(
            left,
            y,
            left + plot_w,
            y,
            "stroke=\"#eee\" stroke-width=\"1\"",
        );
        canvas.text(left - 9.0, y + 4.0, "end", 11, &format!("{v:.2}"));
        v += y_step;
    }
    canvas.text(width / 2.0, height - 14.0, "middle", 12, "patterns stored");

    // region past the true capacity, where stored memories start breaking
    let c0 = record.true_capacity;
    if c0 < len {
        let x = x_of(c0.max(1));
        canvas.rect(
            x,
            top,
            left + plot_w - x,
            plot_h,
            "fill=\"#d62728\" opacity=\"0.06\"",
        );
    }

    // threshold
    let ty = y_of(1.0);
    canvas.line(
        left,
        ty,
        left + plot_w,
        ty,
        "stroke=\"#d62728\" stroke-dasharray=\"6 3\" stroke-width=\"1.2\"",
    );
    canvas.text(
        left + plot_w - 4.0,
        ty - 5.0,
        "end",
        11,
        "destructive threshold",
    );

    // traces
    let series: [(&str, &Vec<f64>, &str); 3] = [
        ("expectation", &record.traces.expectation, "#1f77b4"),
        ("raw", &record.traces.raw, "#ff7f0e"),
        ("exact", &record.traces.exact, "#2ca02c"),
    ];
    for (_, trace, color) in &series {
        let points: Vec<(f64, f64)> = trace
            .iter()
            .enumerate()
            .map(|(i, &v)| (x_of(i + 1), y_of(v)))
            .collect();
        canvas.polyline(&points, &format!("stroke=\"{color}\" stroke-width=\"1.6\""));
    }

    // vertical markers
    let mut marker = |k: usize, style: &str, label: &str, dy: f64| {
        if k >= 1 && k <= len {
            let x = x_of(k);
            canvas.line(x, top, x, top + plot_h, style);
            canvas.text(x + 4.0, top + dy, "start", 11, label);
        }
    };
    marker(
        c0,
        "stroke=\"#444\" stroke-width=\"1.4\"",
        &format!("true capacity = {c0}"),
        16.0,
    );
    let headline = record.estimates.get(summary.config.trial.weighting);
    marker(
        headline,
        "stroke=\"#1f77b4\" stroke-dasharray=\"4 3\" stroke-width=\"1.2\"",
        &format!("flag = {headline}"),
        32.0,
    );
    let static_floor = record
        .statics
        .iter()
        .find(|s| s.model.to_string() == summary.static_choice)
        .map(|s| s.floor())
        .unwrap_or(0);
    marker(
        static_floor,
        "stroke=\"#9467bd\" stroke-dasharray=\"2 3\" stroke-width=\"1.2\"",
        &format!("static = {static_floor}"),
        48.0,
    );

    // legend
    let mut ly = top + 14.0;
    for (name, _, color) in &series {
        canvas.line(
            left + 10.0,
            ly - 4.0,
            left + 34.0,
            ly - 4.0,
            &format!("stroke=\"{color}\" stroke-width=\"2\""),
        );
        canvas.text(left + 40.0, ly, "start", 11, name);
        ly += 16.0;
    }

    canvas.finish()
}

const BAR_COLORS: [&str; 8] = [
    "#1f77b4", "#aec7e8", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

#[derive(Clone, Copy, PartialEq)]
enum BarMetric {
    Accuracy,
    Efficiency,
}

impl BarMetric {
    fn pick(self, row: &SummaryRow) -> (f64, f64) {
        match self {
            BarMetric::Accuracy => (row.accuracy_mean, row.accuracy_std),
            BarMetric::Efficiency => (row.efficiency_mean, row.efficiency_std),
        }
    }

    fn tick_label(self, v: f64) -> String {
        match self {
            BarMetric::Accuracy => format!("{v:.2}"),
            BarMetric::Efficiency => format!("{v:.1e}"),
        }
    }

    fn caption(self) -> &'static str {
        match self {
            BarMetric::Accuracy => "stop load / true capacity",
            BarMetric::Efficiency => "stop load / weight count",
        }
    }
}

fn bar_panel(
    canvas: &mut Canvas,
    left: f64,
    top: f64,
    w: f64,
    h: f64,
    rows: &[&SummaryRow],
    metric: BarMetric,
) {
    let spreads: Vec<(f64, f64)> = rows.iter().map(|r| metric.pick(r)).collect();
    let mut y_max = spreads
        .iter()
        .fold(0.0f64, |acc, &(mean, std)| acc.max(mean + std))
        * 1.15;
    if metric == BarMetric::Accuracy {
        y_max = y_max.max(1.2);
    }
    if y_max <= 0.0 {
        y_max = 1.0;
    }
    let y_of = |v: f64| top + (1.0 - (v.max(0.0) / y_max)) * h;

    canvas.rect(
        left,
        top,
        w,
        h,
        "fill=\"none\" stroke=\"#888\" stroke-width=\"1\"",
    );
    let y_step = nice_step(y_max, 4.0);
    let mut v = 0.0;
    while v <= y_max + 1e-12 {
        let y = y_of(v);
        canvas.line(left - 5.0, y, left, y, "stroke=\"#888\"");
        canvas.text(left - 9.0, y + 4.0, "end", 10, &metric.tick_label(v));
        v += y_step;
    }
    if metric == BarMetric::Accuracy {
        // parity with the true capacity
        let y = y_of(1.0);
        canvas.line(
            left,
            y,
            left + w,
            y,
            "stroke=\"#d62728\" stroke-dasharray=\"5 3\" stroke-width=\"1\"",
        );
    }

    let slot = w / rows.len() as f64;
    for (i, (row, &(mean, std))) in rows.iter().zip(spreads.iter()).enumerate() {
        let cx = left + slot * (i as f64 + 0.5);
        let bar_w = slot * 0.58;
        let y = y_of(mean);
        canvas.rect(
            cx - bar_w / 2.0,
            y,
            bar_w,
            top + h - y,
            &format!(
                "fill=\"{}\" stroke=\"#555\" stroke-width=\"0.6\"",
                BAR_COLORS[i % BAR_COLORS.len()]
            ),
        );
        if std > 0.0 {
            let lo = y_of((mean - std).max(0.0));
            let hi = y_of(mean + std);
            canvas.line(cx, hi, cx, lo, "stroke=\"#333\" stroke-width=\"1.1\"");
            canvas.line(
                cx - 4.0,
                hi,
                cx + 4.0,
                hi,
                "stroke=\"#333\" stroke-width=\"1.1\"",
            );
            canvas.line(
                cx - 4.0,
                lo,
                cx + 4.0,
                lo,
                "stroke=\"#333\" stroke-width=\"1.1\"",
            );
        }
        canvas.text_rotated(cx + 4.0, top + h + 12.0, -32.0, 10, &row.model);
    }
    canvas.text(
        left + w / 2.0,
        top + h + 52.0,
        "middle",
        11,
        metric.caption(),
    );
}

/// Per-model accuracy and efficiency chart rebuilt from `results.csv`
/// rows, one horizontal band per configuration.
pub fn comparison_svg(rows: &[SummaryRow]) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::EmptyResults);
    }
    let mut bands: Vec<(String, Vec<&SummaryRow>)> = Vec::new();
    for row in rows {
        let key = format!(
            "n = {}, bias {:.2} +/- {:.2}, corr {:.2} +/- {:.2}, {} trials",
            row.n, row.b_mean, row.b_std, row.c_mean, row.c_std, row.trials
        );
        match bands.last_mut() {
            Some((k, group)) if *k == key => group.push(row),
            _ => bands.push((key, vec![row])),
        }
    }

    let width = 900.0;
    let header = 44.0;
    let band_h = 256.0;
    let height = header + band_h * bands.len() as f64 + 8.0;
    let mut canvas = Canvas::new(width, height);
    canvas.text(
        width / 2.0,
        26.0,
        "middle",
        15,
        "capacity models: accuracy and efficiency by configuration",
    );

    for (bi, (label, group)) in bands.iter().enumerate() {
        let band_top = header + band_h * bi as f64;
        canvas.text(70.0, band_top + 16.0, "start", 12, label);
        bar_panel(
            &mut canvas,
            70.0,
            band_top + 30.0,
            340.0,
            band_h - 110.0,
            group,
            BarMetric::Accuracy,
        );
        bar_panel(
            &mut canvas,
            520.0,
            band_top + 30.0,
            340.0,
            band_h - 110.0,
            group,
            BarMetric::Efficiency,
        );
    }
    Ok(canvas.finish())
}

/// Write a generator verification grid as CSV, JSON or a two-panel
/// error heat map.
pub fn emit_grid(
    report: &GridReport,
    out_dir: &Path,
    formats: &[OutputFormat],
) -> Result<Vec<PathBuf>> {
    if report.cells.is_empty() {
        return Err(Error::EmptyResults);
    }
    fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    for format in formats {
        let path = match format {
            OutputFormat::Csv => {
                let path = out_dir.join("generator-grid.csv");
                fs::write(&path, grid_csv(report)?)?;
                path
            }
            OutputFormat::Json => {
                let path = out_dir.join("generator-grid.json");
                fs::write(&path, serde_json::to_vec_pretty(report)?)?;
                path
            }
            OutputFormat::Svg => {
                let path = out_dir.join("generator-grid.svg");
                fs::write(&path, grid_svg(report))?;
                path
            }
        };
        written.push(path);
    }
    Ok(written)
}

fn grid_csv(report: &GridReport) -> Result<Vec<u8>> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record([
        "bias",
        "correlation",
        "measured_bias",
        "measured_correlation",
        "bias_error",
        "corr_error",
        "deviation_prone",
    ])?;
    for cell in &report.cells {
        writer.write_record([
            cell.bias.to_string(),
            cell.correlation.to_string(),
            cell.measured_bias.to_string(),
            cell.measured_correlation.to_string(),
            cell.bias_error.to_string(),
            cell.corr_error.to_string(),
            cell.deviation_prone.to_string(),
        ])?;
    }
    Ok(writer.into_inner().expect("vec sink cannot fail"))
}

fn heat_color(error: f64, scale: f64) -> String {
    let t = (error / scale).clamp(0.0, 1.0);
    let g = (255.0 * (1.0 - t)).round() as u8;
    format!("rgb(255,{g},{g})")
}

fn grid_svg(report: &GridReport) -> String {
    let biases: Vec<f64> = dedup_sorted(report.cells.iter().map(|c| c.bias));
    let corrs: Vec<f64> = dedup_sorted(report.cells.iter().map(|c| c.correlation));
    let cell = 26.0;
    let (left, top) = (64.0, 56.0);
    let panel_w = corrs.len() as f64 * cell;
    let panel_h = biases.len() as f64 * cell;
    let gap = 70.0;
    let width = left + panel_w * 2.0 + gap + 40.0;
    let height = top + panel_h + 70.0;
    let mut canvas = Canvas::new(width, height);

    canvas.text(
        width / 2.0,
        22.0,
        "middle",
        14,
        &format!(
            "generator agreement with requested parameters (n = {}, {} patterns per cell)",
            report.n, report.count
        ),
    );

    for (panel, title) in [(0usize, "bias error"), (1usize, "correlation error")] {
        let x0 = left + panel as f64 * (panel_w + gap);
        canvas.text(x0 + panel_w / 2.0, top - 12.0, "middle", 12, title);
        for cellv in &report.cells {
            let bi = index_of(&biases, cellv.bias);
            let ci = index_of(&corrs, cellv.correlation);
            let err = if panel == 0 {
                cellv.bias_error
            } else {
                cellv.corr_error
            };
            let x = x0 + ci as f64 * cell;
            let y = top + bi as f64 * cell;
            let border = if cellv.deviation_prone {
                "stroke=\"#555\" stroke-width=\"1.2\""
            } else {
                "stroke=\"#ddd\" stroke-width=\"0.5\""
            };
            canvas.rect(
                x,
                y,
                cell,
                cell,
                &format!("fill=\"{}\" {}", heat_color(err, 0.05), border),
            );
        }
        for (ci, c) in corrs.iter().enumerate() {
            canvas.text(
                x0 + ci as f64 * cell + cell / 2.0,
                top + panel_h + 16.0,
                "middle",
                10,
                &format!("{c:.1}"),
            );
        }
        canvas.text(
            x0 + panel_w / 2.0,
            top + panel_h + 34.0,
            "middle",
            11,
            "correlation",
        );
    }
    for (bi, b) in biases.iter().enumerate() {
        canvas.text(
            left - 8.0,
            top + bi as f64 * cell + cell / 2.0 + 4.0,
            "end",
            10,
            &format!("{b:.2}"),
        );
    }
    canvas.text(16.0, top + panel_h / 2.0, "middle", 11, "bias");
    canvas.text(
        width / 2.0,
        height - 12.0,
        "middle",
        10,
        "shade: white = exact, red = error at or past 0.05; outlined cells are flagged deviation-prone",
    );
    canvas.finish()
}

fn dedup_sorted(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite grid values"));
    v.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    v
}

fn index_of(values: &[f64], target: f64) -> usize {
    values
        .iter()
        .position(|v| (v - target).abs() < 1e-9)
        .expect("grid value present")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::{SuiteConfig, TrialConfig};
    use crate::harness::suite::run_suite;
    use crate::harness::verify::verify_generator;

    fn tiny_summary() -> SuiteSummary {
        run_suite(&SuiteConfig {
            trial: TrialConfig {
                n: 80,
                seed: 3,
                ..TrialConfig::default()
            },
            trials: 2,
        })
        .unwrap()
    }

    #[test]
    fn format_names_round_trip() {
        for f in [OutputFormat::Csv, OutputFormat::Json, OutputFormat::Svg] {
            assert_eq!(f.to_string().parse::<OutputFormat>().unwrap(), f);
        }
        assert!("pdf".parse::<OutputFormat>().is_err());
    }

    #[test]
    fn empty_input_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let out = emit_results(&[], dir.path(), &[OutputFormat::Csv]);
        assert!(matches!(out, Err(Error::EmptyResults)));
    }

    #[test]
    fn csv_has_one_row_per_model() {
        let summary = tiny_summary();
        let dir = tempfile::tempdir().unwrap();
        let files = emit_results(
            &[summary],
            dir.path(),
            &[OutputFormat::Csv, OutputFormat::Json, OutputFormat::Svg],
        )
        .unwrap();
        assert_eq!(files.len(), 3);
        let body = fs::read_to_string(&files[0]).unwrap();
        // header plus the eight model rows
        assert_eq!(body.lines().count(), 9);
        assert!(body.lines().next().unwrap().starts_with("n,b_mean,b_std"));
        let svg = fs::read_to_string(&files[2]).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("destructive threshold"));
    }

    #[test]
    fn identical_runs_write_identical_bytes() {
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        let formats = [OutputFormat::Csv, OutputFormat::Json, OutputFormat::Svg];
        let files_a = emit_results(&[tiny_summary()], dir_a.path(), &formats).unwrap();
        let files_b = emit_results(&[tiny_summary()], dir_b.path(), &formats).unwrap();
        for (a, b) in files_a.iter().zip(files_b.iter()) {
            assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
        }
    }

    #[test]
    fn csv_rows_read_back_in_order() {
        let summary = tiny_summary();
        let dir = tempfile::tempdir().unwrap();
        let files = emit_results(
            std::slice::from_ref(&summary),
            dir.path(),
            &[OutputFormat::Csv],
        )
        .unwrap();
        let rows = read_results_csv(&files[0]).unwrap();
        assert_eq!(rows.len(), summary.aggregates.len());
        for (row, agg) in rows.iter().zip(summary.aggregates.iter()) {
            assert_eq!(row.model, agg.model);
            assert_eq!(row.accuracy_mean, agg.accuracy_mean);
            assert_eq!(row.efficiency_std, agg.efficiency_std);
            assert_eq!(row.c0_mean, summary.c0_mean);
        }
    }

    #[test]
    fn comparison_chart_covers_every_model_once_per_band() {
        let summary = tiny_summary();
        let dir = tempfile::tempdir().unwrap();
        let files = emit_results(&[summary], dir.path(), &[OutputFormat::Csv]).unwrap();
        let rows = read_results_csv(&files[0]).unwrap();
        let svg = comparison_svg(&rows).unwrap();
        assert!(svg.starts_with("<svg"));
        // one rotated label per model per panel, two panels
        assert_eq!(svg.matches(">maximum</text>").count(), 2);
        assert_eq!(svg.matches(">mceliece</text>").count(), 2);
        assert_eq!(comparison_svg(&rows).unwrap(), svg);
        assert!(matches!(comparison_svg(&[]), Err(Error::EmptyResults)));
    }

    #[test]
    fn grid_emission_writes_all_formats() {
        let report = verify_generator(60, 40, 9).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let files = emit_grid(
            &report,
            dir.path(),
            &[OutputFormat::Csv, OutputFormat::Json, OutputFormat::Svg],
        )
        .unwrap();
        assert_eq!(files.len(), 3);
        let csv_body = fs::read_to_string(&files[0]).unwrap();
        assert_eq!(csv_body.lines().count(), 101);
    }
}
