//! Minimal self-contained SVG plots: line charts for the r-sweeps and a
//! heatmap for the (b, c) grid. No external assets, just shapes and text.

const W: f64 = 800.0;
const H: f64 = 520.0;
const ML: f64 = 78.0; // left margin
const MR: f64 = 26.0;
const MT: f64 = 46.0;
const MB: f64 = 58.0;

fn tick_label(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let a = x.abs();
    if (1e-3..1e4).contains(&a) {
        format!("{x:.4}")
    } else {
        format!("{x:.2e}")
    }
}

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn from_ranges(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Frame {
        let pad = |lo: f64, hi: f64| {
            let span = (hi - lo).abs().max(1e-12);
            (lo - 0.05 * span, hi + 0.05 * span)
        };
        let (y_min, y_max) = pad(y_min, y_max);
        Frame {
            x_min,
            x_max,
            y_min,
            y_max,
        }
    }

    fn px(&self, x: f64) -> f64 {
        ML + (x - self.x_min) / (self.x_max - self.x_min) * (W - ML - MR)
    }

    fn py(&self, y: f64) -> f64 {
        H - MB - (y - self.y_min) / (self.y_max - self.y_min) * (H - MT - MB)
    }
}

fn svg_open(out: &mut String) {
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
         viewBox=\"0 0 {W} {H}\" font-family=\"sans-serif\" font-size=\"13\">\n\
         <rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n"
    ));
}

fn axes(out: &mut String, f: &Frame, title: &str, x_label: &str, y_label: &str) {
    out.push_str(&format!(
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">{title}</text>\n",
        W / 2.0
    ));
    out.push_str(&format!(
        "<line x1=\"{ML}\" y1=\"{0}\" x2=\"{1}\" y2=\"{0}\" stroke=\"black\"/>\n\
         <line x1=\"{ML}\" y1=\"{MT}\" x2=\"{ML}\" y2=\"{0}\" stroke=\"black\"/>\n",
        H - MB,
        W - MR
    ));
    for i in 0..=4 {
        let fx = f.x_min + (f.x_max - f.x_min) * i as f64 / 4.0;
        let fy = f.y_min + (f.y_max - f.y_min) * i as f64 / 4.0;
        let (px, py) = (f.px(fx), f.py(fy));
        out.push_str(&format!(
            "<line x1=\"{px}\" y1=\"{0}\" x2=\"{px}\" y2=\"{1}\" stroke=\"black\"/>\n\
             <text x=\"{px}\" y=\"{2}\" text-anchor=\"middle\">{3}</text>\n",
            H - MB,
            H - MB + 5.0,
            H - MB + 20.0,
            tick_label(fx)
        ));
        out.push_str(&format!(
            "<line x1=\"{0}\" y1=\"{py}\" x2=\"{ML}\" y2=\"{py}\" stroke=\"black\"/>\n\
             <text x=\"{1}\" y=\"{2}\" text-anchor=\"end\">{3}</text>\n",
            ML - 5.0,
            ML - 8.0,
            py + 4.0,
            tick_label(fy)
        ));
    }
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{x_label}</text>\n",
        ML + (W - ML - MR) / 2.0,
        H - 14.0
    ));
    out.push_str(&format!(
        "<text x=\"18\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {0})\">{y_label}</text>\n",
        MT + (H - MT - MB) / 2.0
    ));
}

/// Polyline chart of `(x, y)` points (non-finite points are skipped).
pub fn line_plot(points: &[(f64, f64)], title: &str, x_label: &str, y_label: &str) -> String {
    let finite: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .collect();
    let mut out = String::new();
    svg_open(&mut out);
    if finite.is_empty() {
        out.push_str("<text x=\"40\" y=\"60\">no finite data</text>\n</svg>\n");
        return out;
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in &finite {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let frame = Frame::from_ranges(x0, x1, y0, y1);
    axes(&mut out, &frame, title, x_label, y_label);
    let pts: Vec<String> = finite
        .iter()
        .map(|&(x, y)| format!("{:.2},{:.2}", frame.px(x), frame.py(y)))
        .collect();
    out.push_str(&format!(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.8\"/>\n",
        pts.join(" ")
    ));
    for &(x, y) in &finite {
        out.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.4\" fill=\"#1f6fb2\"/>\n",
            frame.px(x),
            frame.py(y)
        ));
    }
    out.push_str("</svg>\n");
    out
}

/// Two-ended color ramp through white (low: blue, high: red).
fn ramp(f: f64) -> String {
    let f = f.clamp(0.0, 1.0);
    let lerp = |a: f64, b: f64, t: f64| a + (b - a) * t;
    let (r, g, b) = if f < 0.5 {
        let t = f / 0.5;
        (
            lerp(59.0, 221.0, t),
            lerp(76.0, 221.0, t),
            lerp(192.0, 221.0, t),
        )
    } else {
        let t = (f - 0.5) / 0.5;
        (
            lerp(221.0, 180.0, t),
            lerp(221.0, 4.0, t),
            lerp(221.0, 38.0, t),
        )
    };
    format!("rgb({},{},{})", r as u8, g as u8, b as u8)
}

/// Heatmap over the tensor grid `xs` x `ys`; `values` is x-major
/// (`values[ix * ys.len() + iy]`). Non-finite cells are drawn gray.
pub fn heatmap(
    xs: &[f64],
    ys: &[f64],
    values: &[f64],
    title: &str,
    x_label: &str,
    y_label: &str,
) -> String {
    let mut out = String::new();
    svg_open(&mut out);
    if xs.is_empty() || ys.is_empty() || values.len() != xs.len() * ys.len() {
        out.push_str("<text x=\"40\" y=\"60\">no data</text>\n</svg>\n");
        return out;
    }
    let finite: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    let (lo, hi) = finite
        .iter()
        .fold((f64::MAX, f64::MIN), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let span = (hi - lo).max(1e-300);

    let plot_w = W - ML - MR - 70.0; // leave room for the color bar
    let plot_h = H - MT - MB;
    let cw = plot_w / xs.len() as f64;
    let ch = plot_h / ys.len() as f64;
    out.push_str(&format!(
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">{title}</text>\n",
        W / 2.0
    ));
    for (ix, _) in xs.iter().enumerate() {
        for (iy, _) in ys.iter().enumerate() {
            let v = values[ix * ys.len() + iy];
            let fill = if v.is_finite() {
                ramp((v - lo) / span)
            } else {
                "rgb(128,128,128)".into()
            };
            let x = ML + ix as f64 * cw;
            let y = H - MB - (iy + 1) as f64 * ch;
            out.push_str(&format!(
                "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{fill}\"/>\n",
                cw + 0.5,
                ch + 0.5
            ));
        }
    }
    // axis tick labels at first/middle/last grid values
    for (i, &x) in xs.iter().enumerate() {
        if i == 0 || i == xs.len() - 1 || i == xs.len() / 2 {
            out.push_str(&format!(
                "<text x=\"{:.2}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
                ML + (i as f64 + 0.5) * cw,
                H - MB + 20.0,
                tick_label(x)
            ));
        }
    }
    for (i, &y) in ys.iter().enumerate() {
        if i == 0 || i == ys.len() - 1 || i == ys.len() / 2 {
            out.push_str(&format!(
                "<text x=\"{}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>\n",
                ML - 8.0,
                H - MB - (i as f64 + 0.5) * ch + 4.0,
                tick_label(y)
            ));
        }
    }
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{x_label}</text>\n",
        ML + plot_w / 2.0,
        H - 14.0
    ));
    out.push_str(&format!(
        "<text x=\"18\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {0})\">{y_label}</text>\n",
        MT + plot_h / 2.0
    ));
    // color bar
    let bar_x = W - MR - 44.0;
    let steps = 64;
    for i in 0..steps {
        let f = i as f64 / (steps - 1) as f64;
        let y = H - MB - (i + 1) as f64 * plot_h / steps as f64;
        out.push_str(&format!(
            "<rect x=\"{bar_x}\" y=\"{y:.2}\" width=\"16\" height=\"{:.2}\" fill=\"{}\"/>\n",
            plot_h / steps as f64 + 0.5,
            ramp(f)
        ));
    }
    out.push_str(&format!(
        "<text x=\"{0}\" y=\"{1}\" font-size=\"11\">{2}</text>\n\
         <text x=\"{0}\" y=\"{3}\" font-size=\"11\">{4}</text>\n",
        bar_x + 20.0,
        H - MB,
        tick_label(lo),
        MT + 10.0,
        tick_label(hi)
    ));
    out.push_str("</svg>\n");
    out
}
