//! Minimal SVG charts: mean trajectories with error bars, normal QQ plots and
//! log-scale tail frequencies.

use std::fmt::Write as _;

use statrs::distribution::{ContinuousCDF, Normal};

use super::config::{ExperimentKind, Variant};
use super::runner::ExperimentOutput;
use super::stats::moments_of;

const W: f64 = 480.0;
const H: f64 = 360.0;
const PAD: f64 = 48.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// A series of (x, y, half-width of error bar) points.
struct Series {
    label: String,
    points: Vec<(f64, f64, f64)>,
}

struct Axes {
    x: (f64, f64),
    y: (f64, f64),
    log_y: bool,
}

impl Axes {
    fn fit(series: &[Series], log_y: bool) -> Axes {
        let mut x = (f64::INFINITY, f64::NEG_INFINITY);
        let mut y = (f64::INFINITY, f64::NEG_INFINITY);
        for (px, py, e) in series.iter().flat_map(|s| s.points.iter().copied()) {
            if log_y && py <= 0.0 {
                continue;
            }
            x = (x.0.min(px), x.1.max(px));
            let (lo, hi) = if log_y { (py, py) } else { (py - e, py + e) };
            y = (y.0.min(lo), y.1.max(hi));
        }
        if !x.0.is_finite() {
            x = (0.0, 1.0);
            y = if log_y { (1e-3, 1.0) } else { (0.0, 1.0) };
        }
        if log_y {
            y = (y.0.log10(), y.1.log10());
        }
        let widen = |(a, b): (f64, f64)| if b - a < 1e-12 { (a - 0.5, b + 0.5) } else { (a, b) };
        Axes { x: widen(x), y: widen(y), log_y }
    }

    fn sx(&self, x: f64) -> f64 {
        PAD + (x - self.x.0) / (self.x.1 - self.x.0) * (W - 2.0 * PAD)
    }

    fn sy(&self, y: f64) -> f64 {
        let y = if self.log_y { y.log10() } else { y };
        H - PAD - (y - self.y.0) / (self.y.1 - self.y.0) * (H - 2.0 * PAD)
    }
}

fn frame(svg: &mut String, title: &str, ax: &Axes, xlabel: &str, ylabel: &str) {
    writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="11">"#).unwrap();
    writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#).unwrap();
    writeln!(svg, r#"<text x="{}" y="18" text-anchor="middle" font-size="13">{title}</text>"#, W / 2.0).unwrap();
    writeln!(
        svg,
        r#"<path d="M{PAD} {PAD} V{} H{}" fill="none" stroke="black"/>"#,
        H - PAD,
        W - PAD
    )
    .unwrap();
    let fmt = |v: f64| if ax.log_y { format!("1e{v:.1}") } else { format!("{v:.3}") };
    writeln!(svg, r#"<text x="{PAD}" y="{}" text-anchor="middle">{:.3}</text>"#, H - PAD + 14.0, ax.x.0).unwrap();
    writeln!(svg, r#"<text x="{}" y="{}" text-anchor="middle">{:.3}</text>"#, W - PAD, H - PAD + 14.0, ax.x.1).unwrap();
    writeln!(svg, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, PAD - 4.0, H - PAD, fmt(ax.y.0)).unwrap();
    writeln!(svg, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, PAD - 4.0, PAD + 4.0, fmt(ax.y.1)).unwrap();
    writeln!(svg, r#"<text x="{}" y="{}" text-anchor="middle">{xlabel}</text>"#, W / 2.0, H - 10.0).unwrap();
    writeln!(svg, r#"<text x="12" y="{}" transform="rotate(-90 12 {})" text-anchor="middle">{ylabel}</text>"#, H / 2.0, H / 2.0).unwrap();
}

fn draw(series: &[Series], title: &str, xlabel: &str, ylabel: &str, log_y: bool, lines: bool, diagonal: bool) -> String {
    let ax = Axes::fit(series, log_y);
    let mut svg = String::new();
    frame(&mut svg, title, &ax, xlabel, ylabel);
    if diagonal {
        let lo = ax.x.0.max(ax.y.0);
        let hi = ax.x.1.min(ax.y.1);
        writeln!(
            svg,
            r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#888" stroke-dasharray="4 3"/>"##,
            ax.sx(lo),
            ax.sy(lo),
            ax.sx(hi),
            ax.sy(hi)
        )
        .unwrap();
    }
    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<_> = s.points.iter().filter(|p| !log_y || p.1 > 0.0).collect();
        if lines && pts.len() > 1 {
            let path: Vec<String> = pts.iter().map(|p| format!("{:.2},{:.2}", ax.sx(p.0), ax.sy(p.1))).collect();
            writeln!(svg, r#"<polyline points="{}" fill="none" stroke="{color}"/>"#, path.join(" ")).unwrap();
        }
        for &&(x, y, e) in &pts {
            if e > 0.0 && !log_y {
                writeln!(
                    svg,
                    r#"<line x1="{0:.2}" y1="{1:.2}" x2="{0:.2}" y2="{2:.2}" stroke="{color}"/>"#,
                    ax.sx(x),
                    ax.sy(y - e),
                    ax.sy(y + e)
                )
                .unwrap();
            }
            writeln!(svg, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#, ax.sx(x), ax.sy(y)).unwrap();
        }
        writeln!(svg, r#"<text x="{}" y="{}" fill="{color}">{}</text>"#, W - PAD - 90.0, PAD + 14.0 * i as f64, s.label).unwrap();
    }
    svg.push_str("</svg>\n");
    svg
}

fn variants_and_ks(output: &ExperimentOutput) -> Vec<(Variant, usize)> {
    let mut v: Vec<(Variant, usize)> = output.summary.iter().map(|r| (r.variant, r.k)).collect();
    v.sort();
    v.dedup();
    v
}

/// All plots for a run, as (file name, SVG text).
pub fn render_all(output: &ExperimentOutput) -> Vec<(String, String)> {
    let kind = output.config.kind;
    let xlabel = if kind.grid_is_side_length() { "l" } else { "n" };
    let groups = variants_and_ks(output);
    let mean_series: Vec<Series> = groups
        .iter()
        .map(|&(v, k)| Series {
            label: format!("{} k={k}", v.name()),
            points: output.rows(v, k).iter().map(|r| (r.grid, r.mean, 2.0 * r.std_err)).collect(),
        })
        .collect();
    let mut out = vec![(
        "means.svg".to_string(),
        draw(&mean_series, &format!("{}: mean ± 2 se", kind.name()), xlabel, "mean", false, true, false),
    )];
    if kind == ExperimentKind::Clt {
        let normal = Normal::new(0.0, 1.0).expect("standard normal");
        for &(v, k) in &groups {
            let Some(top) = output.rows(v, k).last().map(|r| r.grid_index) else { continue };
            let mut vals: Vec<f64> = output
                .records
                .iter()
                .filter(|r| r.variant == v && r.k == k && r.grid_index == top)
                .map(|r| r.value)
                .collect();
            let m = moments_of(&vals);
            let sd = m.variance().sqrt().max(1e-300);
            vals.sort_by(f64::total_cmp);
            let n = vals.len() as f64;
            let points = vals
                .iter()
                .enumerate()
                .map(|(i, x)| (normal.inverse_cdf((i as f64 + 0.5) / n), (x - m.mean()) / sd, 0.0))
                .collect();
            let s = [Series { label: format!("{} k={k}", v.name()), points }];
            out.push((format!("qq_{}_k{k}.svg", v.name()), draw(&s, "normal QQ", "normal quantile", "standardized", false, false, true)));
        }
    }
    if matches!(kind, ExperimentKind::Concentration | ExperimentKind::DppConcentration) {
        let tails: Vec<Series> = groups
            .iter()
            .map(|&(v, k)| Series {
                label: format!("{} k={k}", v.name()),
                points: output.rows(v, k).iter().map(|r| (r.grid, r.tail_frequency, 0.0)).collect(),
            })
            .collect();
        out.push(("tails.svg".to_string(), draw(&tails, "tail frequency (log scale)", xlabel, "P(|X - mean| >= t)", true, true, false)));
    }
    out
}
