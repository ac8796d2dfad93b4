//! Minimal hand-written SVG line charts for the four figure layouts.

use std::fmt::{self, Write as _};
use std::path::Path;

use crate::error::CliError;
use crate::trajectory::Trajectory;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FigKind {
    /// `|Γ|` for several ring sizes at one coupling.
    Fig2,
    /// `|Γ|` for several couplings at one ring size.
    Fig3,
    /// `|Γ|` and `σ` on twin axes.
    Fig4,
    /// `⟨Q⟩` and `|Γ|` on twin axes.
    Fig5,
}

impl FigKind {
    pub const ALL: [FigKind; 4] = [FigKind::Fig2, FigKind::Fig3, FigKind::Fig4, FigKind::Fig5];

    pub fn number(self) -> u8 {
        match self {
            FigKind::Fig2 => 2,
            FigKind::Fig3 => 3,
            FigKind::Fig4 => 4,
            FigKind::Fig5 => 5,
        }
    }

    pub fn is_overlay(self) -> bool {
        matches!(self, FigKind::Fig2 | FigKind::Fig3)
    }
}

impl fmt::Display for FigKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fig{}", self.number())
    }
}

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 460.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 80.0;
const TOP: f64 = 56.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Clone, Copy, PartialEq, Eq)]
enum Axis {
    Left,
    Right,
}

struct Series {
    label: String,
    xs: Vec<f64>,
    ys: Vec<f64>,
    color: &'static str,
    dashed: bool,
    axis: Axis,
}

struct Chart {
    title: String,
    x_label: &'static str,
    left_label: &'static str,
    right_label: Option<&'static str>,
    series: Vec<Series>,
}

/// Finite range of `values`, widened when it collapses to a point.
fn padded_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let span = hi - lo;
    let scale = lo.abs().max(hi.abs());
    if span <= 1e-12 * scale {
        let pad = if scale > 0.0 { 0.05 * scale } else { 0.5 };
        return (lo - pad, hi + pad);
    }
    (lo - 0.03 * span, hi + 0.03 * span)
}

fn tick_step(lo: f64, hi: f64) -> f64 {
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let unit = raw / mag;
    let nice = if unit < 1.5 {
        1.0
    } else if unit < 3.5 {
        2.0
    } else if unit < 7.5 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn ticks(lo: f64, hi: f64) -> (Vec<f64>, usize) {
    let step = tick_step(lo, hi);
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    let values = (first..=last).map(|k| k as f64 * step).collect();
    (values, decimals)
}

fn format_tick(v: f64, decimals: usize) -> String {
    if decimals > 5 {
        format!("{v:.2e}")
    } else {
        let s = format!("{v:.decimals$}");
        if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
            "0".to_string()
        } else {
            s
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl Chart {
    fn render(&self) -> String {
        let plot_w = WIDTH - LEFT - RIGHT;
        let plot_h = HEIGHT - TOP - BOTTOM;
        let (x0, x1) = padded_range(self.series.iter().flat_map(|s| s.xs.iter().copied()));
        let axis_range = |axis: Axis| {
            padded_range(
                self.series
                    .iter()
                    .filter(|s| s.axis == axis)
                    .flat_map(|s| s.ys.iter().copied()),
            )
        };
        let left = axis_range(Axis::Left);
        let right = axis_range(Axis::Right);
        let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * plot_w;
        let py = |y: f64, (lo, hi): (f64, f64)| TOP + (hi - y) / (hi - lo) * plot_h;

        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            out,
            r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
        );

        let (xt, xd) = ticks(x0, x1);
        for x in xt {
            let p = px(x);
            let _ = writeln!(
                out,
                r#"<line x1="{p:.2}" y1="{b}" x2="{p:.2}" y2="{b2}" stroke="black"/><text x="{p:.2}" y="{ty}" text-anchor="middle">{}</text>"#,
                format_tick(x, xd),
                b = TOP + plot_h,
                b2 = TOP + plot_h + 5.0,
                ty = TOP + plot_h + 18.0,
            );
        }
        let _ = writeln!(
            out,
            r#"<text class="x-label" x="{}" y="{}" text-anchor="middle">{}</text>"#,
            LEFT + plot_w / 2.0,
            HEIGHT - 15.0,
            escape(self.x_label)
        );

        let mut y_axis = |range: (f64, f64), side: Axis, label: &str| {
            let (edge, dir, anchor) = match side {
                Axis::Left => (LEFT, -1.0, "end"),
                Axis::Right => (LEFT + plot_w, 1.0, "start"),
            };
            let (yt, yd) = ticks(range.0, range.1);
            for y in yt {
                let p = py(y, range);
                let _ = writeln!(
                    out,
                    r#"<line x1="{edge}" y1="{p:.2}" x2="{e2}" y2="{p:.2}" stroke="black"/><text x="{tx}" y="{ty:.2}" text-anchor="{anchor}">{}</text>"#,
                    format_tick(y, yd),
                    e2 = edge + 5.0 * dir,
                    tx = edge + 8.0 * dir,
                    ty = p + 4.0,
                );
            }
            let lx = edge + 62.0 * dir;
            let ly = TOP + plot_h / 2.0;
            let _ = writeln!(
                out,
                r#"<text class="y-label" x="{lx}" y="{ly}" text-anchor="middle" transform="rotate(-90 {lx} {ly})">{}</text>"#,
                escape(label)
            );
        };
        y_axis(left, Axis::Left, self.left_label);
        if let Some(label) = self.right_label {
            y_axis(right, Axis::Right, label);
        }

        for s in &self.series {
            let range = if s.axis == Axis::Left { left } else { right };
            let points: Vec<String> =
                s.xs.iter()
                    .zip(&s.ys)
                    .filter(|(x, y)| x.is_finite() && y.is_finite())
                    .map(|(&x, &y)| format!("{:.2},{:.2}", px(x), py(y, range)))
                    .collect();
            let dash = if s.dashed {
                r#" stroke-dasharray="6 4""#
            } else {
                ""
            };
            if points.len() == 1 {
                let (x, y) = points[0].split_once(',').unwrap_or(("0", "0"));
                let _ = writeln!(out, r#"<circle cx="{x}" cy="{y}" r="3" fill="{}"/>"#, s.color);
            }
            let _ = writeln!(
                out,
                r#"<polyline class="series" fill="none" stroke="{}" stroke-width="1.5"{dash} points="{}"/>"#,
                s.color,
                points.join(" ")
            );
        }

        // legend runs along the top margin, clear of the data
        for (i, s) in self.series.iter().enumerate() {
            let y = TOP - 12.0;
            let x = LEFT + 110.0 * i as f64;
            let dash = if s.dashed {
                r#" stroke-dasharray="6 4""#
            } else {
                ""
            };
            let _ = writeln!(
                out,
                r#"<line x1="{x}" y1="{y}" x2="{x2}" y2="{y}" stroke="{}" stroke-width="1.5"{dash}/><text x="{tx}" y="{ty}">{}</text>"#,
                s.color,
                escape(&s.label),
                x2 = x + 24.0,
                tx = x + 30.0,
                ty = y + 4.0,
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

/// Horizontal coordinate `J_z·t` in units of `|J_z|`.
fn scaled_times(traj: &Trajectory) -> Vec<f64> {
    let jz = traj.params.j_z.abs();
    traj.times().into_iter().map(|t| jz * t).collect()
}

fn single<'a>(kind: FigKind, data: &[&'a Trajectory]) -> Result<&'a Trajectory, CliError> {
    match data {
        [] => Err(CliError::MissingSeries {
            kind,
            reason: "no trajectory supplied",
        }),
        [one] => Ok(one),
        _ => Err(CliError::MissingSeries {
            kind,
            reason: "expects exactly one trajectory",
        }),
    }
}

/// Builds the SVG document for `kind`. Overlay kinds draw one `|Γ|` curve per trajectory;
/// twin-axis kinds take exactly one trajectory.
pub fn render_svg(kind: FigKind, data: &[&Trajectory]) -> Result<String, CliError> {
    if data.is_empty() {
        return Err(CliError::MissingSeries {
            kind,
            reason: "no trajectory supplied",
        });
    }
    if data.iter().any(|t| t.is_empty()) {
        return Err(CliError::MissingSeries {
            kind,
            reason: "trajectory has no samples",
        });
    }
    let chart = match kind {
        FigKind::Fig2 | FigKind::Fig3 => {
            let series = data
                .iter()
                .enumerate()
                .map(|(i, t)| Series {
                    label: if kind == FigKind::Fig2 {
                        format!("N = {}", t.n_spins())
                    } else {
                        format!("g = {}", t.g())
                    },
                    xs: scaled_times(t),
                    ys: t.abs_gamma(),
                    color: PALETTE[i % PALETTE.len()],
                    dashed: false,
                    axis: Axis::Left,
                })
                .collect();
            let title = if kind == FigKind::Fig2 {
                format!("Coherence vs ring size, g = {}", data[0].g())
            } else {
                format!("Coherence vs coupling, N = {}", data[0].n_spins())
            };
            Chart {
                title,
                x_label: "J_z·t",
                left_label: "|Γ(t)|",
                right_label: None,
                series,
            }
        }
        FigKind::Fig4 => {
            let t = single(kind, data)?;
            Chart {
                title: format!(
                    "Coherence and information flow, N = {}, g = {}",
                    t.n_spins(),
                    t.g()
                ),
                x_label: "J_z·t",
                left_label: "|Γ(t)|",
                right_label: Some("σ(t)"),
                series: vec![
                    Series {
                        label: "|Γ(t)|".into(),
                        xs: scaled_times(t),
                        ys: t.abs_gamma(),
                        color: PALETTE[0],
                        dashed: false,
                        axis: Axis::Left,
                    },
                    Series {
                        label: "σ(t)".into(),
                        xs: scaled_times(t),
                        ys: t.sigma(),
                        color: PALETTE[1],
                        dashed: true,
                        axis: Axis::Right,
                    },
                ],
            }
        }
        FigKind::Fig5 => {
            let t = single(kind, data)?;
            Chart {
                title: format!("Mean heat and coherence, N = {}, g = {}", t.n_spins(), t.g()),
                x_label: "J_z·t",
                left_label: "⟨Q⟩",
                right_label: Some("|Γ(t)|"),
                series: vec![
                    Series {
                        label: "⟨Q⟩".into(),
                        xs: scaled_times(t),
                        ys: t.q_mean(),
                        color: PALETTE[1],
                        dashed: false,
                        axis: Axis::Left,
                    },
                    Series {
                        label: "|Γ(t)|".into(),
                        xs: scaled_times(t),
                        ys: t.abs_gamma(),
                        color: PALETTE[0],
                        dashed: true,
                        axis: Axis::Right,
                    },
                ],
            }
        }
    };
    Ok(chart.render())
}

pub fn export_svg(kind: FigKind, data: &[&Trajectory], path: &Path) -> Result<(), CliError> {
    let doc = render_svg(kind, data)?;
    std::fs::write(path, doc).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}
