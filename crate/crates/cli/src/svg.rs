//! Static SVG panels: a heat grid of the rating matrix next to a plot of
//! per-datapoint scores, both in the same column order.

use std::fmt::Write;

use likert_lpp::AnnotationMatrix;

pub const BLUE: &str = "#1f5fbf";
pub const RED: &str = "#d62728";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mark {
    Line,
    Dots,
}

pub struct Series<'a> {
    pub name: &'a str,
    pub color: &'a str,
    pub mark: Mark,
    /// Indexed by datapoint, not by plot position.
    pub values: &'a [f64],
}

const CELL_H: f64 = 14.0;
const GRID_W: f64 = 420.0;
const PLOT_W: f64 = 420.0;
const PLOT_H: f64 = 220.0;
const MARGIN: f64 = 40.0;

fn rating_color(r: u32, k: u32) -> String {
    if r == 0 {
        return "#e6e6e6".into();
    }
    // light yellow to dark blue
    let t = if k > 1 {
        f64::from(r - 1) / f64::from(k - 1)
    } else {
        1.0
    };
    let lerp = |a: f64, b: f64| (a + (b - a) * t).round() as u8;
    format!(
        "#{:02x}{:02x}{:02x}",
        lerp(255.0, 8.0),
        lerp(247.0, 48.0),
        lerp(188.0, 107.0)
    )
}

fn heat_grid(out: &mut String, matrix: &AnnotationMatrix, order: &[usize], x0: f64, y0: f64) -> f64 {
    let m = matrix.n_annotators();
    let cw = GRID_W / order.len() as f64;
    let ratings = matrix.ratings();
    let _ = writeln!(out, r#"<g class="matrix">"#);
    for i in 0..m {
        for (pos, &j) in order.iter().enumerate() {
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                x0 + pos as f64 * cw,
                y0 + i as f64 * CELL_H,
                cw,
                CELL_H,
                rating_color(ratings[[i, j]], matrix.scale_max())
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="9" text-anchor="end">{}</text>"#,
            x0 - 4.0,
            y0 + (i as f64 + 0.75) * CELL_H,
            escape(&matrix.annotator_ids()[i])
        );
    }
    let _ = writeln!(out, "</g>");
    m as f64 * CELL_H
}

fn score_plot(out: &mut String, series: &[Series<'_>], order: &[usize], x0: f64, y0: f64) {
    let finite = series
        .iter()
        .flat_map(|s| order.iter().map(|&j| s.values[j]))
        .filter(|v| v.is_finite());
    let (mut lo, mut hi) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if hi.is_nan() || lo.is_nan() || hi <= lo {
        lo -= 0.5;
        hi += 0.5;
    }
    let n = order.len();
    let px = |pos: usize| {
        x0 + if n > 1 {
            pos as f64 * PLOT_W / (n - 1) as f64
        } else {
            PLOT_W / 2.0
        }
    };
    let py = |v: f64| y0 + PLOT_H - (v - lo) / (hi - lo) * PLOT_H;

    let _ = writeln!(out, r#"<g class="scores">"#);
    let _ = writeln!(
        out,
        r##"<rect x="{x0:.2}" y="{y0:.2}" width="{PLOT_W:.2}" height="{PLOT_H:.2}" fill="none" stroke="#999"/>"##
    );
    for (v, anchor) in [(lo, y0 + PLOT_H), (hi, y0 + 8.0)] {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="9" text-anchor="end">{:.3}</text>"#,
            x0 - 4.0,
            anchor,
            v
        );
    }
    for (k, s) in series.iter().enumerate() {
        match s.mark {
            Mark::Line => {
                let pts: Vec<String> = order
                    .iter()
                    .enumerate()
                    .map(|(pos, &j)| format!("{:.2},{:.2}", px(pos), py(s.values[j])))
                    .collect();
                let _ = writeln!(
                    out,
                    r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
                    s.color,
                    pts.join(" ")
                );
            }
            Mark::Dots => {
                for (pos, &j) in order.iter().enumerate() {
                    let _ = writeln!(
                        out,
                        r#"<circle cx="{:.2}" cy="{:.2}" r="2" fill="{}"/>"#,
                        px(pos),
                        py(s.values[j]),
                        s.color
                    );
                }
            }
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="10" fill="{}">{}</text>"#,
            x0 + 6.0,
            y0 + 14.0 + 12.0 * k as f64,
            s.color,
            escape(s.name)
        );
    }
    let _ = writeln!(out, "</g>");
}

/// Heat grid on the left, score curves on the right, columns in `order`.
pub fn panel(title: &str, matrix: &AnnotationMatrix, order: &[usize], series: &[Series<'_>]) -> String {
    let grid_h = matrix.n_annotators() as f64 * CELL_H;
    let body_h = grid_h.max(PLOT_H);
    let width = MARGIN * 3.0 + GRID_W + PLOT_W;
    let height = body_h + MARGIN * 2.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{MARGIN:.2}" y="{:.2}" font-size="13" font-family="sans-serif">{}</text>"#,
        MARGIN * 0.6,
        escape(title)
    );
    heat_grid(&mut out, matrix, order, MARGIN, MARGIN);
    score_plot(&mut out, series, order, MARGIN * 2.0 + GRID_W, MARGIN);
    let _ = writeln!(out, "</svg>");
    out
}

/// Score curves only, each series sorted ascending on its own.
pub fn sorted_curves(title: &str, series: &[Series<'_>]) -> String {
    let width = MARGIN * 2.0 + PLOT_W;
    let height = MARGIN * 2.0 + PLOT_H;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{MARGIN:.2}" y="{:.2}" font-size="13" font-family="sans-serif">{}</text>"#,
        MARGIN * 0.6,
        escape(title)
    );
    let sorted: Vec<Vec<f64>> = series
        .iter()
        .map(|s| {
            let mut v = s.values.to_vec();
            v.sort_by(f64::total_cmp);
            v
        })
        .collect();
    let resorted: Vec<Series<'_>> = series
        .iter()
        .zip(&sorted)
        .map(|(s, v)| Series {
            name: s.name,
            color: s.color,
            mark: s.mark,
            values: v,
        })
        .collect();
    let order: Vec<usize> = (0..sorted.first().map_or(0, Vec::len)).collect();
    score_plot(&mut out, &resorted, &order, MARGIN, MARGIN);
    let _ = writeln!(out, "</svg>");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}
