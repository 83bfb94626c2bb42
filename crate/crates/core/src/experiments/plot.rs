//! Minimal static SVG line plots of experiment CSVs.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::config::Kind;
use super::{columns, schema_line};
use crate::error::{precondition, Error, Result};

const W: f64 = 640.0;
const H: f64 = 420.0;
const MARGIN: (f64, f64, f64, f64) = (70.0, 20.0, 30.0, 50.0); // left, right, top, bottom
const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, Clone, Default)]
pub struct Series {
    pub label: String,
    /// `(x, y, stderr)`.
    pub points: Vec<(f64, f64, f64)>,
    pub dashed: bool,
}

#[derive(Debug, Clone, Default)]
pub struct Figure {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub series: Vec<Series>,
    pub vlines: Vec<(f64, String)>,
}

fn ticks(lo: f64, hi: f64, log: bool) -> Vec<f64> {
    if log {
        let (a, b) = (lo.floor() as i32, hi.ceil() as i32);
        return (a..=b).map(|e| e as f64).filter(|&t| t >= lo - 1e-9 && t <= hi + 1e-9).collect();
    }
    let span = (hi - lo).max(f64::MIN_POSITIVE);
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| span / s <= 6.0)
        .unwrap_or(10.0 * mag);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + 1e-9 * step {
        out.push(t);
        t += step;
    }
    out
}

fn tick_label(v: f64, log: bool) -> String {
    if log {
        format!("1e{}", v as i32)
    } else {
        let s = format!("{:.3}", v);
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

impl Figure {
    fn tx(&self, v: f64) -> Option<f64> {
        if self.log_x {
            (v > 0.0).then(|| v.log10())
        } else {
            Some(v)
        }
    }

    fn ty(&self, v: f64) -> Option<f64> {
        if self.log_y {
            (v > 0.0).then(|| v.log10())
        } else {
            Some(v)
        }
    }

    /// Renders the figure; errors if nothing is plottable.
    pub fn to_svg(&self) -> Result<String> {
        let pts: Vec<(f64, f64)> = self
            .series
            .iter()
            .flat_map(|s| s.points.iter())
            .filter_map(|&(x, y, _)| Some((self.tx(x)?, self.ty(y)?)))
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .collect();
        if pts.is_empty() {
            return Err(precondition("no plottable points"));
        }
        let (mut x0, mut x1, mut y0, mut y1) = pts.iter().fold(
            (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY),
            |(a, b, c, d), &(x, y)| (a.min(x), b.max(x), c.min(y), d.max(y)),
        );
        for (v, _) in &self.vlines {
            if let Some(t) = self.tx(*v) {
                x0 = x0.min(t);
                x1 = x1.max(t);
            }
        }
        if x1 - x0 < 1e-12 {
            x0 -= 0.5;
            x1 += 0.5;
        }
        if y1 - y0 < 1e-12 {
            y0 -= 0.5;
            y1 += 0.5;
        }
        let pad = 0.05 * (y1 - y0);
        let (y0, y1) = (y0 - pad, y1 + pad);
        let (l, r, t, b) = MARGIN;
        let px = |x: f64| l + (x - x0) / (x1 - x0) * (W - l - r);
        let py = |y: f64| H - b - (y - y0) / (y1 - y0) * (H - t - b);

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
        let _ = writeln!(s, r#"<text x="{}" y="18" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, esc(&self.title));
        let _ = writeln!(
            s,
            r#"<rect x="{l}" y="{t}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            W - l - r,
            H - t - b
        );
        for tv in ticks(x0, x1, self.log_x) {
            let x = px(tv);
            let _ = writeln!(s, r#"<line x1="{x:.1}" y1="{}" x2="{x:.1}" y2="{}" stroke="black"/>"#, H - b, H - b + 5.0);
            let _ = writeln!(s, r#"<text x="{x:.1}" y="{}" text-anchor="middle">{}</text>"#, H - b + 18.0, tick_label(tv, self.log_x));
        }
        for tv in ticks(y0, y1, self.log_y) {
            let y = py(tv);
            let _ = writeln!(s, r#"<line x1="{}" y1="{y:.1}" x2="{l}" y2="{y:.1}" stroke="black"/>"#, l - 5.0);
            let _ = writeln!(s, r#"<text x="{}" y="{:.1}" text-anchor="end">{}</text>"#, l - 8.0, y + 4.0, tick_label(tv, self.log_y));
        }
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, l + (W - l - r) / 2.0, H - 10.0, esc(&self.x_label));
        let _ = writeln!(
            s,
            r#"<text x="16" y="{0}" text-anchor="middle" transform="rotate(-90 16 {0})">{1}</text>"#,
            t + (H - t - b) / 2.0,
            esc(&self.y_label)
        );
        for (v, label) in &self.vlines {
            if let Some(tv) = self.tx(*v) {
                let x = px(tv);
                let _ = writeln!(
                    s,
                    r#"<line class="vline" x1="{x:.1}" y1="{t}" x2="{x:.1}" y2="{}" stroke="gray" stroke-dasharray="2,3"/>"#,
                    H - b
                );
                let _ = writeln!(s, r#"<text x="{:.1}" y="{}" fill="gray">{}</text>"#, x + 4.0, t + 14.0, esc(label));
            }
        }
        for (k, series) in self.series.iter().enumerate() {
            let color = COLORS[k % COLORS.len()];
            let mapped: Vec<(f64, f64, (f64, f64))> = series
                .points
                .iter()
                .filter_map(|&(x, y, e)| Some((self.tx(x)?, self.ty(y)?, e, y)))
                .filter(|(x, y, _, _)| x.is_finite() && y.is_finite())
                .map(|(x, y, e, raw)| (x, y, self.err_span(raw, e)))
                .collect();
            let path: Vec<String> = mapped
                .iter()
                .map(|&(x, y, _)| format!("{:.1},{:.1}", px(x), py(y.clamp(y0, y1))))
                .collect();
            let dash = if series.dashed { r#" stroke-dasharray="6,4""# } else { "" };
            let _ = writeln!(
                s,
                r#"<polyline data-label="{}" points="{}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>"#,
                esc(&series.label),
                path.join(" ")
            );
            if !series.dashed {
                for &(x, y, (lo, hi)) in &mapped {
                    let _ = writeln!(s, r#"<circle cx="{:.1}" cy="{:.1}" r="3" fill="{color}"/>"#, px(x), py(y));
                    if hi > lo {
                        let _ = writeln!(
                            s,
                            r#"<line x1="{0:.1}" y1="{1:.1}" x2="{0:.1}" y2="{2:.1}" stroke="{color}"/>"#,
                            px(x),
                            py(lo.clamp(y0, y1)),
                            py(hi.clamp(y0, y1))
                        );
                    }
                }
            }
            let ly = t + 16.0 + 16.0 * k as f64;
            let lx = W - r - 170.0;
            let _ = writeln!(s, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"{dash}/>"#, lx + 20.0);
            let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, lx + 25.0, ly + 4.0, esc(&series.label));
        }
        s.push_str("</svg>\n");
        Ok(s)
    }

    /// Error bar `y ± e` in transformed coordinates.
    fn err_span(&self, y: f64, e: f64) -> (f64, f64) {
        if !(e > 0.0) {
            return (0.0, 0.0);
        }
        match (self.ty(y - e), self.ty(y + e)) {
            (Some(lo), Some(hi)) => (lo, hi),
            (None, Some(hi)) => (self.ty(y).unwrap_or(hi), hi),
            _ => (0.0, 0.0),
        }
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Parsed experiment CSV: header plus rows keyed by column name.
struct Table {
    rows: Vec<BTreeMap<String, String>>,
}

impl Table {
    fn read(path: &Path, kind: Kind) -> Result<Table> {
        let text = fs::read_to_string(path)?;
        let mut lines = text.lines();
        let first = lines.next().unwrap_or("");
        if first.trim() != schema_line(kind) {
            return Err(precondition(format!(
                "schema mismatch: expected `{}`, found `{}`",
                schema_line(kind),
                first.trim()
            )));
        }
        let body: String = lines.collect::<Vec<_>>().join("\n");
        let mut rdr = csv::Reader::from_reader(body.as_bytes());
        let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        if header != columns(kind) {
            return Err(precondition(format!("schema mismatch: unexpected columns {header:?}")));
        }
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            rows.push(header.iter().cloned().zip(rec.iter().map(str::to_string)).collect());
        }
        if rows.is_empty() {
            return Err(precondition(format!("{} has no data rows", path.display())));
        }
        Ok(Table { rows })
    }

    fn num(row: &BTreeMap<String, String>, key: &str) -> Result<f64> {
        let v = row.get(key).map(String::as_str).unwrap_or("");
        v.parse::<f64>()
            .map_err(|_| Error::Parse {
                line: 0,
                msg: format!("column {key}: `{v}` is not a number"),
            })
    }

    /// Groups rows by the `group` columns into series of `(x, y, err)`.
    fn series(&self, group: &[&str], x: &str, y: &str, err: Option<&str>) -> Result<Vec<Series>> {
        let mut by: BTreeMap<String, Vec<(f64, f64, f64)>> = BTreeMap::new();
        let mut order = Vec::new();
        for row in &self.rows {
            let label = group
                .iter()
                .map(|g| format!("{g}={}", row.get(*g).map(String::as_str).unwrap_or("")))
                .collect::<Vec<_>>()
                .join(" ");
            let e = match err {
                Some(c) => Self::num(row, c)?,
                None => 0.0,
            };
            if !by.contains_key(&label) {
                order.push(label.clone());
            }
            by.entry(label).or_default().push((Self::num(row, x)?, Self::num(row, y)?, e));
        }
        Ok(order
            .into_iter()
            .map(|label| {
                let mut points = by.remove(&label).unwrap_or_default();
                points.sort_by(|a, b| a.0.total_cmp(&b.0));
                Series {
                    label,
                    points,
                    dashed: false,
                }
            })
            .collect())
    }
}

/// Builds the figure for a CSV of the given kind.
pub fn figure(path: &Path, kind: Kind) -> Result<Figure> {
    let table = Table::read(path, kind)?;
    let mut fig = Figure {
        title: format!("{kind}"),
        ..Figure::default()
    };
    match kind {
        Kind::ThetaScan => {
            fig.series = table.series(&["L"], "beta", "estimate", Some("stderr"))?;
            fig.x_label = "beta".into();
            fig.y_label = "P[0 <-> outside B_L]".into();
            let betas: Vec<f64> = fig.series.iter().flat_map(|s| s.points.iter().map(|p| p.0)).collect();
            let (lo, hi) = betas
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
            let lo = lo.max(1.0).min(hi);
            let curve = (0..=50)
                .map(|k| lo + (hi - lo) * k as f64 / 50.0)
                .filter(|&b| b >= 1.0)
                .map(|b| (b, 1.0 / b.sqrt(), 0.0))
                .collect();
            fig.series.push(Series {
                label: "theta = 1/sqrt(beta)".into(),
                points: curve,
                dashed: true,
            });
            fig.vlines.push((1.0, "beta = 1".into()));
        }
        Kind::PBad => {
            fig.series = table.series(&["beta", "lambda", "theta"], "K", "p_hat", Some("stderr"))?;
            fig.log_x = true;
            fig.log_y = true;
            fig.x_label = "K".into();
            fig.y_label = "P[B_K bad]".into();
        }
        Kind::Pbar | Kind::Lemma2 | Kind::Thm2Events => {
            fig.series = table.series(&["beta", "lambda"], "K", "estimate", Some("stderr"))?;
            fig.log_x = true;
            fig.log_y = kind == Kind::Pbar;
            fig.x_label = "K".into();
            fig.y_label = match kind {
                Kind::Pbar => "pbar(K)",
                Kind::Lemma2 => "pbar(CK)",
                _ => "P[B] pbar^2",
            }
            .into();
        }
        Kind::Multiscale => {
            let mut s = table.series(&["beta", "lambda"], "n", "u_hat", Some("stderr"))?;
            let target = table.series(&["beta", "lambda"], "n", "target", None)?;
            if let Some(t) = target.into_iter().next() {
                s.push(Series {
                    label: "C_n^-2 / 400".into(),
                    points: t.points,
                    dashed: true,
                });
            }
            fig.series = s;
            fig.log_y = true;
            fig.x_label = "level n".into();
            fig.y_label = "u_n".into();
        }
        Kind::FkTheta | Kind::Magnetization => {
            fig.series = table.series(&["q", "beta", "lambda"], "L", "estimate", Some("stderr"))?;
            fig.log_x = true;
            fig.x_label = "L".into();
            fig.y_label = if kind == Kind::FkTheta { "theta_fk" } else { "m" }.into();
        }
        Kind::Sample => {
            fig.series = table.series(&["beta", "lambda"], "L", "largest_cluster", None)?;
            fig.log_x = true;
            fig.x_label = "L".into();
            fig.y_label = "largest cluster".into();
        }
    }
    Ok(fig)
}

/// Writes `<csv stem>.svg` next to the CSV and returns its path. No file is
/// created on error.
pub fn plot(csv_path: &Path, kind: Kind) -> Result<PathBuf> {
    let svg = figure(csv_path, kind)?.to_svg()?;
    let out = csv_path.with_extension("svg");
    fs::write(&out, svg)?;
    Ok(out)
}
