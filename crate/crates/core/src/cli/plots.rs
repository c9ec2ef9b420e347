//! Deterministic SVG plots and their CSV data.

use std::fmt::Write as _;

use crate::stats::average_ranks;
use crate::uncertainty::UaSummary;

const W: f64 = 480.0;
const H: f64 = 320.0;
const PAD: f64 = 40.0;

/// Most points drawn per scatter or cobweb plot; larger samples are strided.
const MAX_POINTS: usize = 5000;

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        let widen = |a: f64, b: f64| if b > a { (a, b) } else { (a - 0.5, b + 0.5) };
        let (x0, x1) = widen(x0, x1);
        let (y0, y1) = widen(y0, y1);
        Self { x0, x1, y0, y1 }
    }

    fn px(&self, x: f64) -> f64 {
        PAD + (x - self.x0) / (self.x1 - self.x0) * (W - 2.0 * PAD)
    }

    fn py(&self, y: f64) -> f64 {
        H - PAD - (y - self.y0) / (self.y1 - self.y0) * (H - 2.0 * PAD)
    }
}

fn open(s: &mut String, title: &str, width: f64, height: f64) {
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{:.1}" y="16" text-anchor="middle" font-size="13">{}</text>"#, width / 2.0, escape(title));
}

fn axes(s: &mut String, f: &Frame, dx: f64, dy: f64, xlabel: &str) {
    let _ = writeln!(
        s,
        r#"<g transform="translate({dx:.1},{dy:.1})"><path d="M{PAD} {top} V{bottom} H{right}" fill="none" stroke="black"/>"#,
        top = PAD,
        bottom = H - PAD,
        right = W - PAD
    );
    let _ = writeln!(s, r#"<text x="{PAD}" y="{:.1}">{}</text>"#, H - PAD + 14.0, fmt(f.x0));
    let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#, W - PAD, H - PAD + 14.0, fmt(f.x1));
    let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#, PAD - 4.0, H - PAD, fmt(f.y0));
    let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#, PAD - 4.0, PAD + 4.0, fmt(f.y1));
    let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text></g>"#, W / 2.0, H - 8.0, escape(xlabel));
}

fn fmt(v: f64) -> String {
    format!("{v:.4}")
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn histogram_svg(ua: &UaSummary) -> String {
    let h = &ua.histogram;
    let top = *h.counts.iter().max().unwrap_or(&1) as f64;
    let f = Frame::new(h.edges[0], h.edges[h.edges.len() - 1], 0.0, top);
    let mut s = String::new();
    open(&mut s, &format!("Histogram of {}", ua.name), W, H);
    for (i, &c) in h.counts.iter().enumerate() {
        let (x0, x1) = (f.px(h.edges[i]), f.px(h.edges[i + 1]));
        let y = f.py(c as f64);
        let _ = writeln!(
            s,
            r##"<rect x="{x0:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="#4a7ab5" stroke="white"/>"##,
            (x1 - x0).max(1.0),
            f.py(0.0) - y
        );
    }
    axes(&mut s, &f, 0.0, 0.0, &ua.name);
    s.push_str("</svg>\n");
    s
}

/// ECDF step curve with the Kolmogorov band.
pub fn ecdf_svg(ua: &UaSummary) -> String {
    let f = Frame::new(ua.min, ua.max, 0.0, 1.0);
    let eps = ua.kolmogorov_halfwidth;
    let step = |offset: f64| {
        let mut d = format!("M{:.2} {:.2}", f.px(ua.min), f.py((0.0 + offset).clamp(0.0, 1.0)));
        for &(x, p) in &ua.ecdf {
            let _ = write!(d, " H{:.2} V{:.2}", f.px(x), f.py((p + offset).clamp(0.0, 1.0)));
        }
        d
    };
    let mut s = String::new();
    open(&mut s, &format!("ECDF of {} with {:.0}% band", ua.name, (1.0 - ua.alpha) * 100.0), W, H);
    for off in [-eps, eps] {
        let _ = writeln!(s, r##"<path d="{}" fill="none" stroke="#b0b0b0" stroke-dasharray="4 3"/>"##, step(off));
    }
    let _ = writeln!(s, r##"<path d="{}" fill="none" stroke="#4a7ab5" stroke-width="1.5"/>"##, step(0.0));
    axes(&mut s, &f, 0.0, 0.0, &ua.name);
    s.push_str("</svg>\n");
    s
}

fn stride(n: usize) -> usize {
    n.div_ceil(MAX_POINTS).max(1)
}

/// One scatter panel per factor, output on the vertical axis. Faulted rows
/// (non-finite `y`) are skipped.
pub fn scatter_svg(names: &[String], columns: &[Vec<f64>], y: &[f64], yname: &str) -> String {
    let per_row = 3usize.min(names.len().max(1));
    let rows = names.len().div_ceil(per_row).max(1);
    let (width, height) = (W * per_row as f64, H * rows as f64 + 20.0);
    let finite: Vec<f64> = y.iter().copied().filter(|v| v.is_finite()).collect();
    let (ylo, yhi) = bounds(&finite);
    let mut s = String::new();
    open(&mut s, &format!("{yname} against each factor"), width, height);
    let step = stride(y.len());
    for (j, (name, col)) in names.iter().zip(columns).enumerate() {
        let (dx, dy) = ((j % per_row) as f64 * W, (j / per_row) as f64 * H + 20.0);
        let (xlo, xhi) = bounds(col);
        let f = Frame::new(xlo, xhi, ylo, yhi);
        let _ = writeln!(s, r##"<g transform="translate({dx:.1},{dy:.1})" fill="#4a7ab5" fill-opacity="0.5">"##);
        for i in (0..y.len()).step_by(step) {
            if y[i].is_finite() {
                let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="1.5"/>"#, f.px(col[i]), f.py(y[i]));
            }
        }
        s.push_str("</g>\n");
        axes(&mut s, &f, dx, dy, name);
    }
    s.push_str("</svg>\n");
    s
}

fn bounds(v: &[f64]) -> (f64, f64) {
    v.iter()
        .filter(|x| x.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)))
}

/// Normalized ranks in `[0, 1]` of every factor and the output, for the
/// cobweb (parallel coordinates) plot. Rows with a faulted output are dropped.
pub fn cobweb_ranks(columns: &[Vec<f64>], y: &[f64]) -> Vec<Vec<f64>> {
    let keep: Vec<usize> = (0..y.len()).filter(|&i| y[i].is_finite()).collect();
    let n = keep.len();
    let scale = |c: Vec<f64>| -> Vec<f64> {
        let r = average_ranks(&c);
        r.into_iter().map(|v| if n > 1 { (v - 1.0) / (n - 1) as f64 } else { 0.5 }).collect()
    };
    let mut axes: Vec<Vec<f64>> =
        columns.iter().map(|c| scale(keep.iter().map(|&i| c[i]).collect())).collect();
    axes.push(scale(keep.iter().map(|&i| y[i]).collect()));
    (0..n).map(|r| axes.iter().map(|a| a[r]).collect()).collect()
}

pub fn cobweb_csv(names: &[String], yname: &str, ranks: &[Vec<f64>]) -> String {
    let mut s = names.join(",");
    let _ = writeln!(s, ",{yname}");
    for row in ranks {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(s, "{}", cells.join(","));
    }
    s
}

/// Polylines through the rank of each factor and the output; lines are
/// colored by output rank.
pub fn cobweb_svg(names: &[String], yname: &str, ranks: &[Vec<f64>]) -> String {
    let axes_n = names.len() + 1;
    let width = (120.0 * axes_n as f64).max(W);
    let x = |a: usize| PAD + a as f64 * (width - 2.0 * PAD) / (axes_n - 1).max(1) as f64;
    let y = |v: f64| H - PAD - v * (H - 2.0 * PAD);
    let mut s = String::new();
    open(&mut s, &format!("Cobweb plot of ranks ({yname})"), width, H);
    for row in ranks.iter().step_by(stride(ranks.len())) {
        let out = row[axes_n - 1];
        let color = format!("rgb({},{},{})", (out * 200.0) as u8 + 30, 80, ((1.0 - out) * 200.0) as u8 + 30);
        let mut d = String::new();
        for (a, &v) in row.iter().enumerate() {
            let _ = write!(d, "{}{:.2} {:.2}", if a == 0 { "M" } else { " L" }, x(a), y(v));
        }
        let _ = writeln!(s, r#"<path d="{d}" fill="none" stroke="{color}" stroke-opacity="0.25"/>"#);
    }
    for (a, name) in names.iter().map(String::as_str).chain([yname]).enumerate() {
        let _ = writeln!(s, r#"<line x1="{0:.2}" y1="{PAD}" x2="{0:.2}" y2="{1:.2}" stroke="black"/>"#, x(a), H - PAD);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.1}" text-anchor="middle">{}</text>"#, x(a), H - PAD + 16.0, escape(name));
    }
    s.push_str("</svg>\n");
    s
}

/// Factor columns and the output, one row per sample row.
pub fn scatter_csv(names: &[String], columns: &[Vec<f64>], y: &[f64], yname: &str) -> String {
    let mut s = names.join(",");
    let _ = writeln!(s, ",{yname}");
    for i in 0..y.len() {
        for c in columns {
            let _ = write!(s, "{},", c[i]);
        }
        let _ = writeln!(s, "{}", if y[i].is_finite() { y[i].to_string() } else { "NaN".into() });
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cobweb_ranks_span_unit_interval() {
        let cols = vec![vec![3.0, 1.0, 2.0]];
        let r = cobweb_ranks(&cols, &[10.0, f64::NAN, 30.0]);
        assert_eq!(r, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
    }

    #[test]
    fn svgs_are_well_formed_enough() {
        let names = vec!["a".to_string(), "b".to_string()];
        let cols = vec![vec![0.0, 1.0, 2.0], vec![1.0, 1.0, 1.0]];
        let s = scatter_svg(&names, &cols, &[1.0, 2.0, 3.0], "Y");
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert_eq!(s.matches("<circle").count(), 6);
        let c = cobweb_svg(&names, "Y", &cobweb_ranks(&cols, &[1.0, 2.0, 3.0]));
        assert_eq!(c.matches("<path").count(), 3);
    }
}
