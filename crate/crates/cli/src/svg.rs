//! Standalone SVG log-log plots. The plotted values are embedded as comments
//! at the top of the file, so the figure carries its own data and no plotting
//! dependency is needed to regenerate or inspect it.

use anyhow::{Context, Result};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

pub struct Series<'a> {
    pub label: &'a str,
    pub xs: &'a [f64],
    pub ys: &'a [f64],
}

const W: f64 = 720.0;
const H: f64 = 480.0;
const ML: f64 = 72.0;
const MR: f64 = 24.0;
const MT: f64 = 42.0;
const MB: f64 = 54.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

/// Writes a log-log polyline plot. Nonpositive or non-finite points are
/// dropped from the drawing (they still appear in the data comments).
pub fn loglog_plot(
    title: &str,
    xlabel: &str,
    ylabel: &str,
    series: &[Series],
    path: &Path,
) -> Result<()> {
    let mut pts: Vec<Vec<(f64, f64)>> = Vec::new();
    for s in series {
        let kept: Vec<(f64, f64)> =
            s.xs.iter()
                .zip(s.ys)
                .filter(|(x, y)| **x > 0.0 && **y > 0.0 && x.is_finite() && y.is_finite())
                .map(|(x, y)| (x.log10(), y.log10()))
                .collect();
        pts.push(kept);
    }
    let all = pts.iter().flatten();
    let (mut x0, mut x1, mut y0, mut y1) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for (x, y) in all {
        x0 = x0.min(*x);
        x1 = x1.max(*x);
        y0 = y0.min(*y);
        y1 = y1.max(*y);
    }
    if !x0.is_finite() {
        // nothing plottable; emit an empty frame rather than failing the run
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 - x0 < 1e-9 {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if y1 - y0 < 1e-9 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let padx = 0.04 * (x1 - x0);
    let pady = 0.06 * (y1 - y0);
    let (x0, x1, y0, y1) = (x0 - padx, x1 + padx, y0 - pady, y1 + pady);
    let sx = |lx: f64| ML + (lx - x0) / (x1 - x0) * (W - ML - MR);
    let sy = |ly: f64| H - MB - (ly - y0) / (y1 - y0) * (H - MT - MB);

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {W} {H}\" \
         font-family=\"monospace\" font-size=\"13\">\n"
    ));
    for s in series {
        let mut line = format!("<!-- data {}:", s.label);
        for (x, y) in s.xs.iter().zip(s.ys) {
            let _ = write!(line, " {x},{y}");
        }
        line.push_str(" -->\n");
        out.push_str(&line);
    }
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // frame
    out.push_str(&format!(
        "<rect x=\"{ML}\" y=\"{MT}\" width=\"{:.2}\" height=\"{:.2}\" \
         fill=\"none\" stroke=\"#333\"/>\n",
        W - ML - MR,
        H - MT - MB
    ));
    // decade gridlines and tick labels
    for k in (x0.ceil() as i64)..=(x1.floor() as i64) {
        let x = sx(k as f64);
        out.push_str(&format!(
            "<line x1=\"{x:.2}\" y1=\"{MT}\" x2=\"{x:.2}\" y2=\"{:.2}\" \
             stroke=\"#ddd\"/>\n<text x=\"{x:.2}\" y=\"{:.2}\" \
             text-anchor=\"middle\">1e{k}</text>\n",
            H - MB,
            H - MB + 18.0
        ));
    }
    for k in (y0.ceil() as i64)..=(y1.floor() as i64) {
        let y = sy(k as f64);
        out.push_str(&format!(
            "<line x1=\"{ML}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" \
             stroke=\"#ddd\"/>\n<text x=\"{:.2}\" y=\"{:.2}\" \
             text-anchor=\"end\">1e{k}</text>\n",
            W - MR,
            ML - 6.0,
            y + 4.0
        ));
    }
    // series polylines and legend
    for (i, (s, kept)) in series.iter().zip(&pts).enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        if !kept.is_empty() {
            let mut poly = String::from("<polyline fill=\"none\" stroke-width=\"1.6\" points=\"");
            for (lx, ly) in kept {
                let _ = write!(poly, "{:.2},{:.2} ", sx(*lx), sy(*ly));
            }
            out.push_str(&format!("{}\" stroke=\"{color}\"/>\n", poly.trim_end()));
        }
        out.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" fill=\"{color}\">{}</text>\n",
            W - MR - 220.0,
            MT + 18.0 + 16.0 * i as f64,
            s.label
        ));
    }
    out.push_str(&format!(
        "<text x=\"{:.2}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{title}</text>\n\
         <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{xlabel}</text>\n\
         <text x=\"16\" y=\"{:.2}\" text-anchor=\"middle\" \
         transform=\"rotate(-90 16 {:.2})\">{ylabel}</text>\n",
        (ML + W - MR) / 2.0,
        (ML + W - MR) / 2.0,
        H - 12.0,
        (MT + H - MB) / 2.0,
        (MT + H - MB) / 2.0,
    ));
    out.push_str("</svg>\n");
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plot_embeds_data_and_is_deterministic() {
        let dir = std::env::temp_dir().join("egx_svg_test");
        fs::create_dir_all(&dir).unwrap();
        let xs = [1.0, 2.0, 4.0];
        let ys = [1.0, 0.25, 0.0625];
        let p1 = dir.join("a.svg");
        let p2 = dir.join("b.svg");
        let s = [Series {
            label: "decay",
            xs: &xs,
            ys: &ys,
        }];
        loglog_plot("t", "n", "sigma", &s, &p1).unwrap();
        loglog_plot("t", "n", "sigma", &s, &p2).unwrap();
        let a = fs::read_to_string(&p1).unwrap();
        let b = fs::read_to_string(&p2).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("<!-- data decay: 1,1 2,0.25 4,0.0625 -->"));
        assert!(a.starts_with("<svg"));
        assert!(a.trim_end().ends_with("</svg>"));
        fs::remove_dir_all(&dir).ok();
    }
}
