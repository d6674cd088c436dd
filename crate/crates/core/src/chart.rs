//! Minimal static SVG line charts for the comparison outputs.
//!
//! Hand-rolled on purpose: the charts are simple cumulative-metric lines,
//! and emitting the markup directly keeps the output byte-deterministic.

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 25.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 55.0;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
];

/// One polyline: a label plus (x, y) points.
#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// A single-panel line chart.
#[derive(Debug, Clone)]
pub struct LineChart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

fn fmt(v: f64) -> String {
    // fixed precision keeps the SVG stable across runs
    format!("{v:.3}")
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let magnitude = v.abs();
    if magnitude >= 1000.0 {
        format!("{v:.0}")
    } else if magnitude >= 1.0 {
        format!("{v:.2}")
    } else {
        format!("{v:.4}")
    }
}

impl LineChart {
    pub fn to_svg(&self) -> String {
        let mut xs: Vec<f64> = Vec::new();
        let mut ys: Vec<f64> = Vec::new();
        for s in &self.series {
            for &(x, y) in &s.points {
                xs.push(x);
                ys.push(y);
            }
        }
        let (x_min, x_max) = bounds(&xs);
        let (y_min, y_max) = bounds(&ys);
        // pad a flat line so it does not sit on the frame
        let (y_min, y_max) = if (y_max - y_min).abs() < 1e-12 {
            (y_min - 0.5, y_max + 0.5)
        } else {
            (y_min, y_max)
        };
        let (x_min, x_max) = if (x_max - x_min).abs() < 1e-12 {
            (x_min - 0.5, x_max + 0.5)
        } else {
            (x_min, x_max)
        };

        let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        let sx = move |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
        let sy = move |y: f64| MARGIN_TOP + plot_h - (y - y_min) / (y_max - y_min) * plot_h;

        let mut svg = String::new();
        svg.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
             viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\">\n"
        ));
        svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"16\">{}</text>\n",
            WIDTH / 2.0,
            escape(&self.title)
        ));

        // axes frame
        svg.push_str(&format!(
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#333\"/>\n",
            fmt(MARGIN_LEFT),
            fmt(MARGIN_TOP),
            fmt(plot_w),
            fmt(plot_h)
        ));

        // ticks and grid lines
        for tick in 0..=5 {
            let frac = tick as f64 / 5.0;
            let y_val = y_min + frac * (y_max - y_min);
            let y_px = sy(y_val);
            svg.push_str(&format!(
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#ddd\"/>\n",
                fmt(MARGIN_LEFT),
                fmt(y_px),
                fmt(MARGIN_LEFT + plot_w),
                fmt(y_px)
            ));
            svg.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-size=\"11\">{}</text>\n",
                fmt(MARGIN_LEFT - 6.0),
                fmt(y_px + 4.0),
                fmt_tick(y_val)
            ));

            let x_val = x_min + frac * (x_max - x_min);
            let x_px = sx(x_val);
            svg.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"11\">{}</text>\n",
                fmt(x_px),
                fmt(MARGIN_TOP + plot_h + 18.0),
                fmt_tick(x_val)
            ));
        }

        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"13\">{}</text>\n",
            WIDTH / 2.0,
            HEIGHT - 12.0,
            escape(&self.x_label)
        ));
        svg.push_str(&format!(
            "<text x=\"18\" y=\"{}\" text-anchor=\"middle\" font-size=\"13\" \
             transform=\"rotate(-90 18 {})\">{}</text>\n",
            HEIGHT / 2.0,
            HEIGHT / 2.0,
            escape(&self.y_label)
        ));

        for (i, series) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            if !series.points.is_empty() {
                let path: Vec<String> = series
                    .points
                    .iter()
                    .map(|&(x, y)| format!("{},{}", fmt(sx(x)), fmt(sy(y))))
                    .collect();
                svg.push_str(&format!(
                    "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
                    color,
                    path.join(" ")
                ));
            }
            // legend
            let ly = MARGIN_TOP + 14.0 + i as f64 * 18.0;
            svg.push_str(&format!(
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                fmt(MARGIN_LEFT + plot_w - 150.0),
                fmt(ly - 4.0),
                fmt(MARGIN_LEFT + plot_w - 125.0),
                fmt(ly - 4.0),
                color
            ));
            svg.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" font-size=\"12\">{}</text>\n",
                fmt(MARGIN_LEFT + plot_w - 118.0),
                fmt(ly),
                escape(&series.label)
            ));
        }

        svg.push_str("</svg>\n");
        svg
    }
}

fn bounds(values: &[f64]) -> (f64, f64) {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for &v in values {
        if v.is_finite() {
            min = min.min(v);
            max = max.max(v);
        }
    }
    if !min.is_finite() || !max.is_finite() {
        (0.0, 1.0)
    } else {
        (min, max)
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
