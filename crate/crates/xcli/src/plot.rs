use std::fmt::Write as _;

/// Styling/scale options for [`render_svg`].
pub struct PlotSpec {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    /// Draw markers only (scatter) instead of a polyline.
    pub scatter: bool,
    /// Extra annotation drawn inside the plot area (e.g. a fitted slope).
    pub annotation: Option<String>,
}

const W: f64 = 640.0;
const H: f64 = 480.0;
const ML: f64 = 70.0; // left margin
const MR: f64 = 20.0;
const MT: f64 = 40.0;
const MB: f64 = 55.0;

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else if v.abs() >= 0.01 && v.abs() < 10000.0 {
        format!("{v:.3}")
    } else {
        format!("{v:.2e}")
    }
}

/// Render a self-contained SVG line or scatter plot.
///
/// Nonpositive points are dropped on logarithmic axes; an empty point set is
/// a caller error and should be rejected before calling.
pub fn render_svg(points: &[(f64, f64)], spec: &PlotSpec) -> String {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(x, y)| {
            x.is_finite() && y.is_finite() && (!spec.log_x || x > 0.0) && (!spec.log_y || y > 0.0)
        })
        .map(|(x, y)| {
            (
                if spec.log_x { x.log10() } else { x },
                if spec.log_y { y.log10() } else { y },
            )
        })
        .collect();

    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &usable {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !(x1 > x0) {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if !(y1 > y0) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let sx = |x: f64| ML + (x - x0) / (x1 - x0) * (W - ML - MR);
    let sy = |y: f64| H - MB - (y - y0) / (y1 - y0) * (H - MT - MB);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="monospace" font-size="15">{}</text>"#,
        W / 2.0,
        xml_escape(&spec.title)
    );

    // Axes.
    let _ = writeln!(
        svg,
        r#"<line x1="{ML}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
        H - MB,
        W - MR,
        H - MB
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{ML}" y1="{MT}" x2="{ML}" y2="{}" stroke="black"/>"#,
        H - MB
    );

    // Ticks: 5 per axis, labeled in original coordinates.
    for i in 0..=4 {
        let fx = x0 + (x1 - x0) * i as f64 / 4.0;
        let px = sx(fx);
        let label = fmt_tick(if spec.log_x { 10f64.powf(fx) } else { fx });
        let _ = writeln!(
            svg,
            r#"<line x1="{px}" y1="{}" x2="{px}" y2="{}" stroke="black"/>"#,
            H - MB,
            H - MB + 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{px}" y="{}" text-anchor="middle" font-family="monospace" font-size="11">{label}</text>"#,
            H - MB + 18.0
        );

        let fy = y0 + (y1 - y0) * i as f64 / 4.0;
        let py = sy(fy);
        let label = fmt_tick(if spec.log_y { 10f64.powf(fy) } else { fy });
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{py}" x2="{ML}" y2="{py}" stroke="black"/>"#,
            ML - 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" text-anchor="end" font-family="monospace" font-size="11">{label}</text>"#,
            ML - 8.0,
            py + 4.0
        );
    }

    // Axis labels.
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="monospace" font-size="12">{}</text>"#,
        (ML + W - MR) / 2.0,
        H - 12.0,
        xml_escape(&spec.x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{}" text-anchor="middle" font-family="monospace" font-size="12" transform="rotate(-90 16 {})">{}</text>"#,
        (MT + H - MB) / 2.0,
        (MT + H - MB) / 2.0,
        xml_escape(&spec.y_label)
    );

    // Data.
    if spec.scatter {
        for &(x, y) in &usable {
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="steelblue" fill-opacity="0.7"/>"#,
                sx(x),
                sy(y)
            );
        }
    } else {
        let path: Vec<String> = usable
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="1.5"/>"#,
            path.join(" ")
        );
    }

    if let Some(note) = &spec.annotation {
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" text-anchor="end" font-family="monospace" font-size="13">{}</text>"#,
            W - MR - 8.0,
            MT + 18.0,
            xml_escape(note)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Emit a gnuplot script that renders the same data from its CSV artifact
/// (the dependency-free alternative to the SVG path).
pub fn render_gnuplot(csv_path: &str, spec: &PlotSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "set datafile separator ','");
    let _ = writeln!(out, "set key off");
    let _ = writeln!(out, "set title '{}'", spec.title.replace('\'', ""));
    let _ = writeln!(out, "set xlabel '{}'", spec.x_label.replace('\'', ""));
    let _ = writeln!(out, "set ylabel '{}'", spec.y_label.replace('\'', ""));
    if spec.log_x {
        let _ = writeln!(out, "set logscale x");
    }
    if spec.log_y {
        let _ = writeln!(out, "set logscale y");
    }
    let style = if spec.scatter { "points pt 7" } else { "lines" };
    let _ = writeln!(
        out,
        "plot '{csv_path}' using 1:2 skip 1 with {style} lc rgb 'steel-blue'"
    );
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
