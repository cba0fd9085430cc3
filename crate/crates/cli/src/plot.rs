//! Regret curves with asymmetric error bars, written as standalone SVG.
//!
//! The plot area's data ranges are stored as `data-*` attributes on the
//! `<g class="plot-area">` element, so every pixel coordinate can be mapped
//! back to a round and a regret value (see [`read_error_bars`]).

use std::fmt::Write as _;

use crate::output::SUMMARY_HEADER;

pub const WIDTH: f64 = 760.0;
pub const HEIGHT: f64 = 480.0;
pub const LEFT: f64 = 80.0;
pub const RIGHT: f64 = 580.0;
pub const TOP: f64 = 50.0;
pub const BOTTOM: f64 = 420.0;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

/// One parsed line of a summary table.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryPoint {
    pub algorithm: String,
    pub adversary: String,
    pub round: usize,
    pub center: f64,
    pub dev_below: f64,
    pub dev_above: f64,
    pub n_trials: usize,
    pub a0: usize,
}

/// Parses summary CSV text. Lines starting with `#` and blank lines are
/// skipped; the first other line must be the header. Errors carry the
/// 1-based line number.
pub fn parse_summary_csv(text: &str) -> Result<Vec<SummaryPoint>, (usize, String)> {
    let mut header_seen = false;
    let mut points = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        if !header_seen {
            if line != SUMMARY_HEADER {
                return Err((lineno, format!("expected header `{SUMMARY_HEADER}`, got `{line}`")));
            }
            header_seen = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err((lineno, format!("expected 8 fields, got {}", fields.len())));
        }
        let num = |idx: usize, what: &str| -> Result<f64, (usize, String)> {
            match fields[idx].parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err((lineno, format!("{what} `{}` is not a finite number", fields[idx]))),
            }
        };
        let int = |idx: usize, what: &str| -> Result<usize, (usize, String)> {
            fields[idx]
                .parse::<usize>()
                .map_err(|_| (lineno, format!("{what} `{}` is not a non-negative integer", fields[idx])))
        };
        let point = SummaryPoint {
            algorithm: fields[0].to_string(),
            adversary: fields[1].to_string(),
            round: int(2, "round")?,
            center: num(3, "center")?,
            dev_below: num(4, "dev_below")?,
            dev_above: num(5, "dev_above")?,
            n_trials: int(6, "n_trials")?,
            a0: int(7, "a0")?,
        };
        if point.round == 0 {
            return Err((lineno, "round must be >= 1".into()));
        }
        if point.dev_below < 0.0 || point.dev_above < 0.0 {
            return Err((lineno, "deviations must be non-negative".into()));
        }
        points.push(point);
    }
    if !header_seen {
        return Err((text.lines().count().max(1), "missing header".into()));
    }
    Ok(points)
}

/// Distinct values in order of first appearance.
fn distinct<'a>(values: impl Iterator<Item = &'a str>) -> Vec<&'a str> {
    let mut out: Vec<&str> = Vec::new();
    for v in values {
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

pub fn adversaries(points: &[SummaryPoint]) -> Vec<&str> {
    distinct(points.iter().map(|p| p.adversary.as_str()))
}

/// Maps data to pixels inside the plot area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub log2_min: f64,
    pub log2_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Frame {
    fn fit(points: &[&SummaryPoint]) -> Self {
        let lx = |p: &&SummaryPoint| (p.round as f64).log2();
        let mut log2_min = points.iter().map(lx).fold(f64::INFINITY, f64::min);
        let mut log2_max = points.iter().map(lx).fold(f64::NEG_INFINITY, f64::max);
        if log2_max - log2_min < 1e-9 {
            log2_min -= 0.5;
            log2_max += 0.5;
        }
        let lo = points.iter().map(|p| p.center - p.dev_below).fold(0.0, f64::min);
        let hi = points.iter().map(|p| p.center + p.dev_above).fold(f64::NEG_INFINITY, f64::max);
        let span = if hi - lo > 0.0 { hi - lo } else { 1.0 };
        Frame {
            log2_min,
            log2_max,
            y_min: lo - 0.02 * span,
            y_max: lo + 1.05 * span,
        }
    }

    pub fn x(&self, round: f64) -> f64 {
        LEFT + (round.log2() - self.log2_min) / (self.log2_max - self.log2_min) * (RIGHT - LEFT)
    }

    pub fn y(&self, value: f64) -> f64 {
        BOTTOM - (value - self.y_min) / (self.y_max - self.y_min) * (BOTTOM - TOP)
    }

    pub fn round_at(&self, x: f64) -> f64 {
        ((x - LEFT) / (RIGHT - LEFT) * (self.log2_max - self.log2_min) + self.log2_min).exp2()
    }

    pub fn value_at(&self, y: f64) -> f64 {
        (BOTTOM - y) / (BOTTOM - TOP) * (self.y_max - self.y_min) + self.y_min
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn nice_step(span: f64, target: f64) -> f64 {
    let raw = span / target;
    let mag = 10f64.powf(raw.log10().floor());
    let m = raw / mag;
    let nice = if m < 1.5 {
        1.0
    } else if m < 3.0 {
        2.0
    } else if m < 7.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.to_string() }
}

/// Renders every point of `adversary` as one SVG document.
pub fn render_svg(adversary: &str, points: &[SummaryPoint]) -> Option<String> {
    let mine: Vec<&SummaryPoint> = points.iter().filter(|p| p.adversary == adversary).collect();
    if mine.is_empty() {
        return None;
    }
    let frame = Frame::fit(&mine);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="28" text-anchor="middle" font-size="15">Regret against the {} adversary</text>"#,
        (LEFT + RIGHT) / 2.0,
        esc(adversary)
    );
    let _ = writeln!(
        s,
        r#"<g class="plot-area" data-left="{LEFT}" data-right="{RIGHT}" data-top="{TOP}" data-bottom="{BOTTOM}" data-log2-min="{}" data-log2-max="{}" data-y-min="{}" data-y-max="{}">"#,
        frame.log2_min, frame.log2_max, frame.y_min, frame.y_max
    );
    let _ = writeln!(
        s,
        r##"<rect x="{LEFT}" y="{TOP}" width="{}" height="{}" fill="none" stroke="#333"/>"##,
        RIGHT - LEFT,
        BOTTOM - TOP
    );

    // x ticks at powers of two
    let first = frame.log2_min.ceil() as i32;
    let last = frame.log2_max.floor() as i32;
    let stride = ((last - first) / 10 + 1).max(1);
    let mut k = first;
    while k <= last {
        let x = frame.x(2f64.powi(k));
        let _ = writeln!(
            s,
            r##"<line x1="{x:.4}" y1="{BOTTOM}" x2="{x:.4}" y2="{}" stroke="#333"/><text x="{x:.4}" y="{}" text-anchor="middle">2<tspan dy="-5" font-size="9">{k}</tspan></text>"##,
            BOTTOM + 5.0,
            BOTTOM + 20.0
        );
        k += stride;
    }
    // y ticks
    let step = nice_step(frame.y_max - frame.y_min, 6.0);
    let mut v = (frame.y_min / step).ceil() * step;
    while v <= frame.y_max {
        let y = frame.y(v);
        let _ = writeln!(
            s,
            r##"<line x1="{}" y1="{y:.4}" x2="{RIGHT}" y2="{y:.4}" stroke="#ddd"/><text x="{}" y="{:.4}" text-anchor="end">{}</text>"##,
            LEFT - 5.0,
            LEFT - 8.0,
            y + 4.0,
            tick_label(v)
        );
        v += step;
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">round t (log scale)</text>"#,
        (LEFT + RIGHT) / 2.0,
        BOTTOM + 42.0
    );
    let _ = writeln!(
        s,
        r#"<text transform="translate(20 {}) rotate(-90)" text-anchor="middle">regret</text>"#,
        (TOP + BOTTOM) / 2.0
    );

    let algorithms = distinct(mine.iter().map(|p| p.algorithm.as_str()));
    for (i, algo) in algorithms.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut series: Vec<&&SummaryPoint> = mine.iter().filter(|p| p.algorithm == *algo).collect();
        series.sort_by_key(|p| p.round);
        let _ = writeln!(s, r#"<g class="series" data-algorithm="{}" stroke="{color}">"#, esc(algo));
        let pts: Vec<String> = series
            .iter()
            .map(|p| format!("{:.4},{:.4}", frame.x(p.round as f64), frame.y(p.center)))
            .collect();
        let _ = writeln!(s, r#"<polyline fill="none" stroke-width="1.5" points="{}"/>"#, pts.join(" "));
        for p in &series {
            let x = frame.x(p.round as f64);
            let (lo, hi) = (frame.y(p.center - p.dev_below), frame.y(p.center + p.dev_above));
            let _ = writeln!(
                s,
                r#"<line class="errbar" data-algorithm="{}" data-round="{}" x1="{x:.4}" y1="{lo:.4}" x2="{x:.4}" y2="{hi:.4}"/>"#,
                esc(algo),
                p.round
            );
            for cap in [lo, hi] {
                let _ = writeln!(
                    s,
                    r#"<line x1="{:.4}" y1="{cap:.4}" x2="{:.4}" y2="{cap:.4}"/>"#,
                    x - 3.0,
                    x + 3.0
                );
            }
            let _ = writeln!(
                s,
                r#"<circle class="center" cx="{x:.4}" cy="{:.4}" r="2.5" fill="{color}"/>"#,
                frame.y(p.center)
            );
        }
        let _ = writeln!(s, "</g>");
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r#"<g class="legend">"#);
    for (i, algo) in algorithms.iter().enumerate() {
        let y = TOP + 10.0 + 20.0 * i as f64;
        let color = PALETTE[i % PALETTE.len()];
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
            RIGHT + 15.0,
            RIGHT + 40.0,
            RIGHT + 46.0,
            y + 4.0,
            esc(algo)
        );
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    Some(s)
}

/// Safe file-name fragment for an adversary name.
pub fn file_stem(adversary: &str) -> String {
    let cleaned: String = adversary
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect();
    format!("regret_{cleaned}")
}

/// An error bar read back from an emitted SVG, in data coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorBar {
    pub algorithm: String,
    pub round: usize,
    pub lower: f64,
    pub upper: f64,
}

fn attr<'a>(element: &'a str, name: &str) -> Option<&'a str> {
    let key = format!(" {name}=\"");
    let start = element.find(&key)? + key.len();
    let len = element[start..].find('"')?;
    Some(&element[start..start + len])
}

fn attr_f64(element: &str, name: &str) -> Result<f64, String> {
    attr(element, name)
        .ok_or_else(|| format!("missing {name}"))?
        .parse()
        .map_err(|e| format!("bad {name}: {e}"))
}

/// The plot frame and every error bar of an SVG written by
/// [`render_svg`], with pixel coordinates mapped back to data values.
pub fn read_error_bars(svg: &str) -> Result<(Frame, Vec<ErrorBar>), String> {
    let area_at = svg.find("<g class=\"plot-area\"").ok_or("no plot area")?;
    let area = &svg[area_at..area_at + svg[area_at..].find('>').ok_or("unterminated plot area")?];
    let frame = Frame {
        log2_min: attr_f64(area, "data-log2-min")?,
        log2_max: attr_f64(area, "data-log2-max")?,
        y_min: attr_f64(area, "data-y-min")?,
        y_max: attr_f64(area, "data-y-max")?,
    };
    let mut bars = Vec::new();
    for (at, _) in svg.match_indices("<line class=\"errbar\"") {
        let element = &svg[at..at + svg[at..].find("/>").ok_or("unterminated line")?];
        let (y1, y2) = (attr_f64(element, "y1")?, attr_f64(element, "y2")?);
        bars.push(ErrorBar {
            algorithm: attr(element, "data-algorithm").ok_or("missing algorithm")?.to_string(),
            round: frame.round_at(attr_f64(element, "x1")?).round() as usize,
            lower: frame.value_at(y1),
            upper: frame.value_at(y2),
        });
    }
    Ok((frame, bars))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# config horizon = 8
algorithm,adversary,round,center,dev_below,dev_above,n_trials,a0
exp3,stochastic,1,0.5,0.1,0.2,4,2
exp3,stochastic,2,1,0.5,0.25,4,2
exp3,stochastic,8,3,1,2,4,2
exp3-tau,stochastic,1,0,0,0,4,2
exp3-tau,stochastic,8,-1,0.5,4,4,2
";

    #[test]
    fn parses_and_reports_line_numbers() {
        let points = parse_summary_csv(SAMPLE).unwrap();
        assert_eq!(points.len(), 5);
        assert_eq!(points[2].round, 8);
        assert_eq!(points[4].center, -1.0);

        let bad = SAMPLE.replace("exp3,stochastic,2,1,0.5", "exp3,stochastic,2,one,0.5");
        assert_eq!(parse_summary_csv(&bad).unwrap_err().0, 4);
        let bad = SAMPLE.replace("exp3-tau,stochastic,1,0,0,0,4,2", "exp3-tau,stochastic,1,0,0");
        assert_eq!(parse_summary_csv(&bad).unwrap_err().0, 6);
        assert_eq!(parse_summary_csv("round,regret\n").unwrap_err().0, 1);
        assert!(parse_summary_csv("").is_err());
        let bad = SAMPLE.replace(",0.1,0.2,", ",-0.1,0.2,");
        assert_eq!(parse_summary_csv(&bad).unwrap_err().0, 3);
    }

    #[test]
    fn svg_structure() {
        let points = parse_summary_csv(SAMPLE).unwrap();
        assert_eq!(adversaries(&points), vec!["stochastic"]);
        let svg = render_svg("stochastic", &points).unwrap();
        assert!(svg.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\""));
        assert_eq!(svg.matches("<g class=\"series\"").count(), 2);
        assert!(svg.contains(">exp3</text>") && svg.contains(">exp3-tau</text>"));
        assert!(render_svg("oblivious", &points).is_none());
    }

    #[test]
    fn error_bars_parse_back() {
        let points = parse_summary_csv(SAMPLE).unwrap();
        let svg = render_svg("stochastic", &points).unwrap();
        let (frame, bars) = read_error_bars(&svg).unwrap();
        assert_eq!(bars.len(), points.len());
        let tol = 1e-3 * (frame.y_max - frame.y_min);
        for p in &points {
            let bar = bars
                .iter()
                .find(|b| b.algorithm == p.algorithm && b.round == p.round)
                .unwrap();
            assert!((bar.lower - (p.center - p.dev_below)).abs() <= tol, "{bar:?} {p:?}");
            assert!((bar.upper - (p.center + p.dev_above)).abs() <= tol, "{bar:?} {p:?}");
        }
    }

    #[test]
    fn frame_inverts() {
        let f = Frame {
            log2_min: 0.0,
            log2_max: 18.0,
            y_min: -3.0,
            y_max: 7000.0,
        };
        for r in [1.0, 3.0, 1024.0, 262_144.0] {
            assert!((f.round_at(f.x(r)) - r).abs() <= 1e-9 * r);
        }
        for v in [-3.0, 0.0, 123.4, 7000.0] {
            assert!((f.value_at(f.y(v)) - v).abs() <= 1e-9 * 7000.0);
        }
    }

    #[test]
    fn names_are_escaped() {
        let p = SummaryPoint {
            algorithm: "a<b".into(),
            adversary: "x&y".into(),
            round: 1,
            center: 1.0,
            dev_below: 0.0,
            dev_above: 0.0,
            n_trials: 1,
            a0: 1,
        };
        let svg = render_svg("x&y", &[p]).unwrap();
        assert!(svg.contains("a&lt;b") && svg.contains("x&amp;y"));
        assert_eq!(file_stem("x&y/z"), "regret_x_y_z");
    }
}
