//! Static SVG plots: mean-ARI line charts for weight sweeps and box plots
//! for criterion comparisons. No plotting dependency; the files are plain
//! hand-assembled SVG.

use std::fmt::Write as _;
use std::path::Path;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_L: f64 = 60.0;
const MARGIN_R: f64 = 110.0;
const MARGIN_T: f64 = 30.0;
const MARGIN_B: f64 = 50.0;

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        MARGIN_L + (v - self.x_min) / (self.x_max - self.x_min) * (WIDTH - MARGIN_L - MARGIN_R)
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT - MARGIN_B
            - (v - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - MARGIN_T - MARGIN_B)
    }
}

fn open_svg(title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        s,
        r#"<rect width="100%" height="100%" fill="white"/><text x="{}" y="18" font-family="sans-serif" font-size="14" text-anchor="middle">{title}</text>"#,
        WIDTH / 2.0
    );
    s
}

fn axes(s: &mut String, frame: &Frame, x_label: &str, y_label: &str, x_ticks: &[f64]) {
    let x0 = frame.x(frame.x_min);
    let x1 = frame.x(frame.x_max);
    let y0 = frame.y(frame.y_min);
    let y1 = frame.y(frame.y_max);
    let _ = writeln!(
        s,
        r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/><line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#
    );
    for &t in x_ticks {
        let x = frame.x(t);
        let _ = writeln!(
            s,
            r#"<line x1="{x}" y1="{y0}" x2="{x}" y2="{}" stroke="black"/><text x="{x}" y="{}" font-family="sans-serif" font-size="10" text-anchor="middle">{t}</text>"#,
            y0 + 4.0,
            y0 + 16.0
        );
    }
    let mut ty = frame.y_min;
    while ty <= frame.y_max + 1e-9 {
        let y = frame.y(ty);
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{y}" x2="{x0}" y2="{y}" stroke="black"/><text x="{}" y="{}" font-family="sans-serif" font-size="10" text-anchor="end">{ty:.1}</text>"#,
            x0 - 4.0,
            x0 - 7.0,
            y + 3.0
        );
        ty += 0.2;
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">{x_label}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 16 {})">{y_label}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );
}

fn polyline(s: &mut String, frame: &Frame, points: &[(f64, f64)], style: &str) {
    if points.is_empty() {
        return;
    }
    let coords: Vec<String> = points
        .iter()
        .map(|&(x, y)| format!("{:.2},{:.2}", frame.x(x), frame.y(y.clamp(frame.y_min, frame.y_max))))
        .collect();
    let _ = writeln!(s, r#"<polyline fill="none" points="{}" {style}/>"#, coords.join(" "));
}

/// Mean-ARI sweep: one grey polyline per candidate weight, a dotted black
/// line through the best weight per labelled percentage, and ±1/±2
/// standard-deviation bands around that chosen line.
pub struct SweepSeries {
    pub alpha: f64,
    /// (percent labelled, mean ARI) points.
    pub points: Vec<(f64, f64)>,
}

pub struct ChosenSeries {
    /// (percent labelled, chosen alpha, mean ARI, sd ARI).
    pub points: Vec<(f64, f64, f64, f64)>,
}

pub fn write_sweep_plot(
    path: &Path,
    title: &str,
    series: &[SweepSeries],
    chosen: &ChosenSeries,
) -> std::io::Result<()> {
    let xs: Vec<f64> = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.0))
        .collect();
    let x_min = xs.iter().cloned().fold(f64::INFINITY, f64::min);
    let x_max = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let frame = Frame {
        x_min,
        x_max: if x_max > x_min { x_max } else { x_min + 1.0 },
        y_min: 0.0,
        y_max: 1.0,
    };
    let mut s = open_svg(title);

    // Error bands behind everything else.
    for (factor, color) in [(2.0, "#dddddd"), (1.0, "#bbbbbb")] {
        if chosen.points.len() >= 2 {
            let upper: Vec<(f64, f64)> = chosen
                .points
                .iter()
                .map(|&(p, _, m, sd)| (p, (m + factor * sd).min(1.0)))
                .collect();
            let lower: Vec<(f64, f64)> = chosen
                .points
                .iter()
                .rev()
                .map(|&(p, _, m, sd)| (p, (m - factor * sd).max(0.0)))
                .collect();
            let coords: Vec<String> = upper
                .iter()
                .chain(lower.iter())
                .map(|&(x, y)| format!("{:.2},{:.2}", frame.x(x), frame.y(y)))
                .collect();
            let _ = writeln!(
                s,
                r#"<polygon points="{}" fill="{color}" stroke="none"/>"#,
                coords.join(" ")
            );
        }
    }

    let x_ticks: Vec<f64> = series
        .first()
        .map(|f| f.points.iter().map(|p| p.0).collect())
        .unwrap_or_default();
    axes(&mut s, &frame, "percent labelled", "mean ARI", &x_ticks);

    for (i, sw) in series.iter().enumerate() {
        let shade = 60 + (140 * i / series.len().max(1)) as u8;
        let style = format!(r##"stroke="rgb({shade},{shade},{shade})" stroke-width="1""##);
        polyline(&mut s, &frame, &sw.points, &style);
        if let Some(&(x, y)) = sw.points.last() {
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" font-family="sans-serif" font-size="9" fill="rgb({shade},{shade},{shade})">α={}</text>"#,
                frame.x(x) + 4.0,
                frame.y(y.clamp(0.0, 1.0)) + 3.0,
                sw.alpha
            );
        }
    }

    let chosen_line: Vec<(f64, f64)> = chosen.points.iter().map(|&(p, _, m, _)| (p, m)).collect();
    polyline(
        &mut s,
        &frame,
        &chosen_line,
        r#"stroke="black" stroke-width="2" stroke-dasharray="4 3""#,
    );
    for &(p, alpha, m, _) in &chosen.points {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="10" text-anchor="middle">{alpha}</text>"#,
            frame.x(p),
            frame.y(m.clamp(0.0, 1.0)) - 8.0
        );
    }

    s.push_str("</svg>\n");
    std::fs::write(path, s)
}

/// Box of a five-number summary per labelled group of values.
pub fn write_box_plot(
    path: &Path,
    title: &str,
    groups: &[(String, Vec<f64>)],
) -> std::io::Result<()> {
    let frame = Frame {
        x_min: 0.0,
        x_max: groups.len() as f64,
        y_min: 0.0,
        y_max: 1.0,
    };
    let mut s = open_svg(title);
    axes(&mut s, &frame, "", "ARI", &[]);
    for (i, (name, values)) in groups.iter().enumerate() {
        let mut v: Vec<f64> = values.iter().cloned().filter(|x| x.is_finite()).collect();
        if v.is_empty() {
            continue;
        }
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let q = |f: f64| -> f64 {
            let pos = f * (v.len() - 1) as f64;
            let lo = pos.floor() as usize;
            let hi = pos.ceil() as usize;
            let frac = pos - lo as f64;
            v[lo] * (1.0 - frac) + v[hi] * frac
        };
        let (min, q1, med, q3, max) = (v[0], q(0.25), q(0.5), q(0.75), v[v.len() - 1]);
        let cx = frame.x(i as f64 + 0.5);
        let half_w = 18.0;
        let clamp_y = |val: f64| frame.y(val.clamp(0.0, 1.0));
        let _ = writeln!(
            s,
            r#"<line x1="{cx}" y1="{}" x2="{cx}" y2="{}" stroke="black"/>"#,
            clamp_y(min),
            clamp_y(max)
        );
        let _ = writeln!(
            s,
            r##"<rect x="{}" y="{}" width="{}" height="{}" fill="#e8e8e8" stroke="black"/>"##,
            cx - half_w,
            clamp_y(q3),
            2.0 * half_w,
            (clamp_y(q1) - clamp_y(q3)).max(0.5)
        );
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="2"/>"#,
            cx - half_w,
            clamp_y(med),
            cx + half_w,
            clamp_y(med)
        );
        let _ = writeln!(
            s,
            r#"<text x="{cx}" y="{}" font-family="sans-serif" font-size="11" text-anchor="middle">{name}</text>"#,
            HEIGHT - MARGIN_B + 16.0
        );
    }
    s.push_str("</svg>\n");
    std::fs::write(path, s)
}
