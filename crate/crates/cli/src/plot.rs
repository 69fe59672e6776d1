use std::fmt::Write;

/// One traced leaf: `(theta, y)` samples for a fixed leaf index.
pub struct Trace {
    pub c_index: usize,
    pub points: Vec<(f64, f64, f64)>,
}

const WIDTH: f64 = 900.0;
const PANEL_HEIGHT: f64 = 320.0;
const MARGIN: f64 = 50.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

pub fn to_csv(traces: &[Trace]) -> anyhow::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["theta", "re_y", "im_y", "c_index"])?;
    for t in traces {
        for &(theta, re, im) in &t.points {
            w.write_record([
                theta.to_string(),
                re.to_string(),
                im.to_string(),
                t.c_index.to_string(),
            ])?;
        }
    }
    Ok(w.into_inner()?)
}

/// Two stacked panels, `Re y` and `Im y` against `arg x`.
pub fn to_svg(traces: &[Trace], title: &str) -> String {
    let height = 2.0 * PANEL_HEIGHT + 3.0 * MARGIN;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        out,
        r#"<text x="{}" y="20" font-size="14" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    )
    .unwrap();
    for (panel, label) in [(0usize, "Re y"), (1, "Im y")] {
        let top = MARGIN + panel as f64 * (PANEL_HEIGHT + MARGIN);
        panel_svg(&mut out, traces, top, label, |p| {
            if panel == 0 {
                p.1
            } else {
                p.2
            }
        });
    }
    out.push_str("</svg>\n");
    out
}

fn panel_svg(
    out: &mut String,
    traces: &[Trace],
    top: f64,
    label: &str,
    value: impl Fn(&(f64, f64, f64)) -> f64,
) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in traces.iter().flat_map(|t| t.points.iter()) {
        let v = value(p);
        if v.is_finite() {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    if !lo.is_finite() {
        (lo, hi) = (-1.0, 1.0);
    }
    if hi - lo < 1e-12 {
        (lo, hi) = (lo - 1.0, hi + 1.0);
    }
    let left = MARGIN;
    let right = WIDTH - MARGIN;
    let sx =
        |theta: f64| left + (theta + std::f64::consts::PI) / std::f64::consts::TAU * (right - left);
    let sy = |v: f64| top + PANEL_HEIGHT - (v - lo) / (hi - lo) * PANEL_HEIGHT;
    writeln!(
        out,
        r#"<rect x="{left}" y="{top}" width="{}" height="{PANEL_HEIGHT}" fill="none" stroke="black"/>"#,
        right - left
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="12">{label}</text>"#,
        left + 4.0,
        top + 14.0
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="10" text-anchor="end">{hi:.3e}</text>"#,
        left - 4.0,
        top + 10.0
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="10" text-anchor="end">{lo:.3e}</text>"#,
        left - 4.0,
        top + PANEL_HEIGHT
    )
    .unwrap();
    for t in traces {
        let colour = PALETTE[t.c_index % PALETTE.len()];
        // break the polyline wherever the sector switches (a jump in theta)
        let mut runs: Vec<Vec<String>> = vec![Vec::new()];
        let mut previous: Option<f64> = None;
        for p in &t.points {
            let v = value(p);
            if !v.is_finite() {
                continue;
            }
            if previous.is_some_and(|q| p.0 < q) {
                runs.push(Vec::new());
            }
            previous = Some(p.0);
            runs.last_mut()
                .unwrap()
                .push(format!("{:.2},{:.2}", sx(p.0), sy(v)));
        }
        for run in runs.iter().filter(|r| r.len() > 1) {
            writeln!(
                out,
                r#"<polyline fill="none" stroke="{colour}" stroke-width="1.2" points="{}"/>"#,
                run.join(" ")
            )
            .unwrap();
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn traces() -> Vec<Trace> {
        vec![Trace {
            c_index: 0,
            points: vec![(-1.0, 0.0, 1.0), (0.0, 1.0, 0.5), (1.0, 2.0, 0.0)],
        }]
    }

    #[test]
    fn svg_has_two_panels() {
        let svg = to_svg(&traces(), "t");
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("Re y") && svg.contains("Im y"));
    }

    #[test]
    fn csv_header() {
        let text = String::from_utf8(to_csv(&traces()).unwrap()).unwrap();
        assert!(text.starts_with("theta,re_y,im_y,c_index\n"));
        assert_eq!(text.lines().count(), 4);
    }
}
