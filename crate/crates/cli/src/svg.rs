//! Hand-emitted SVG 1.1 line charts: axes, ticks, legend, solid data
//! series, dashed horizontal asymptotes. No rendering dependency.

const WIDTH: f64 = 820.0;
const HEIGHT: f64 = 520.0;
const ML: f64 = 78.0;
const MR: f64 = 24.0;
const MT: f64 = 46.0;
const MB: f64 = 58.0;

const PALETTE: [&str; 6] = [
    "#c62828", "#1565c0", "#2e7d32", "#6a1b9a", "#ef6c00", "#00838f",
];

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub series: Vec<Series>,
    /// Dashed horizontal reference lines `(label, y)`.
    pub asymptotes: Vec<(String, f64)>,
}

fn fmt_tick(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let a = x.abs();
    if (1e-3..1e4).contains(&a) {
        format!("{x:.3}")
    } else {
        format!("{x:.2e}")
    }
}

impl Chart {
    pub fn render(&self) -> String {
        let tx = |x: f64| if self.log_x { x.ln() } else { x };
        let mut xs: Vec<f64> = Vec::new();
        let mut ys: Vec<f64> = Vec::new();
        for s in &self.series {
            for &(x, y) in &s.points {
                if x.is_finite() && y.is_finite() {
                    xs.push(tx(x));
                    ys.push(y);
                }
            }
        }
        for &(_, y) in &self.asymptotes {
            ys.push(y);
        }
        let (x0, x1) = span(&xs);
        let (y0, y1) = span(&ys);
        let px = |x: f64| ML + (tx(x) - x0) / (x1 - x0) * (WIDTH - ML - MR);
        let py = |y: f64| HEIGHT - MB - (y - y0) / (y1 - y0) * (HEIGHT - MT - MB);

        let mut out = String::new();
        out.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
        ));
        out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
        out.push_str(&format!(
            "<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
            WIDTH / 2.0,
            xml_escape(&self.title)
        ));

        // axes
        out.push_str(&format!(
            "<line x1=\"{ML}\" y1=\"{0}\" x2=\"{1}\" y2=\"{0}\" stroke=\"black\"/>\n",
            HEIGHT - MB,
            WIDTH - MR
        ));
        out.push_str(&format!(
            "<line x1=\"{ML}\" y1=\"{MT}\" x2=\"{ML}\" y2=\"{}\" stroke=\"black\"/>\n",
            HEIGHT - MB
        ));

        // ticks
        for i in 0..=5 {
            let t = i as f64 / 5.0;
            let gx = x0 + t * (x1 - x0);
            let x_val = if self.log_x { gx.exp() } else { gx };
            let sx = ML + t * (WIDTH - ML - MR);
            out.push_str(&format!(
                "<line x1=\"{sx}\" y1=\"{0}\" x2=\"{sx}\" y2=\"{1}\" stroke=\"black\"/>\n",
                HEIGHT - MB,
                HEIGHT - MB + 5.0
            ));
            out.push_str(&format!(
                "<text x=\"{sx}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
                HEIGHT - MB + 18.0,
                fmt_tick(x_val)
            ));
            let y_val = y0 + t * (y1 - y0);
            let sy = HEIGHT - MB - t * (HEIGHT - MT - MB);
            out.push_str(&format!(
                "<line x1=\"{0}\" y1=\"{sy}\" x2=\"{ML}\" y2=\"{sy}\" stroke=\"black\"/>\n",
                ML - 5.0
            ));
            out.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{}</text>\n",
                ML - 8.0,
                sy + 4.0,
                fmt_tick(y_val)
            ));
        }
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
            (ML + WIDTH - MR) / 2.0,
            HEIGHT - 14.0,
            xml_escape(&self.x_label)
        ));
        out.push_str(&format!(
            "<text x=\"20\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 20 {0})\">{1}</text>\n",
            (MT + HEIGHT - MB) / 2.0,
            xml_escape(&self.y_label)
        ));

        // dashed asymptotes
        for (k, (label, y)) in self.asymptotes.iter().enumerate() {
            let color = PALETTE[k % PALETTE.len()];
            let sy = py(*y);
            out.push_str(&format!(
                "<line x1=\"{ML}\" y1=\"{sy}\" x2=\"{}\" y2=\"{sy}\" stroke=\"{color}\" stroke-dasharray=\"7 5\" stroke-width=\"1.2\"/>\n",
                WIDTH - MR
            ));
            out.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\" fill=\"{color}\">{}</text>\n",
                WIDTH - MR - 4.0,
                sy - 4.0,
                xml_escape(label)
            ));
        }

        // data series
        for (k, s) in self.series.iter().enumerate() {
            let color = PALETTE[k % PALETTE.len()];
            let pts: Vec<String> = s
                .points
                .iter()
                .filter(|(x, y)| x.is_finite() && y.is_finite())
                .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
                .collect();
            if pts.len() > 1 {
                out.push_str(&format!(
                    "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\"/>\n",
                    pts.join(" ")
                ));
            }
            // legend entry
            let ly = MT + 8.0 + 18.0 * k as f64;
            out.push_str(&format!(
                "<line x1=\"{0}\" y1=\"{ly}\" x2=\"{1}\" y2=\"{ly}\" stroke=\"{color}\" stroke-width=\"2\"/>\n",
                ML + 10.0,
                ML + 38.0
            ));
            out.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
                ML + 44.0,
                ly + 4.0,
                xml_escape(&s.label)
            ));
        }
        out.push_str("</svg>\n");
        out
    }
}

fn span(vals: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in vals {
        if v.is_finite() {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if lo == hi {
        return (lo - 0.5, hi + 0.5);
    }
    let pad = 0.04 * (hi - lo);
    (lo - pad, hi + pad)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
