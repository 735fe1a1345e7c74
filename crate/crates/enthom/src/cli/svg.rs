//! Deterministic SVG rendering of a barcode document.
//!
//! One 800-wide viewport, one row per interval (grouped by dimension,
//! sorted by birth then death within a group), infinite bars drawn to the
//! right margin with an arrowhead, axis ticks at the distinct filtration
//! values. Identical documents render to identical bytes.

use super::document::{BarcodeDocument, DocumentInterval};

const WIDTH: f64 = 800.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 40.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 40.0;
const ROW_HEIGHT: f64 = 20.0;
const MAX_TICKS: usize = 12;

const DIM_COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

fn px(x: f64) -> String {
    format!("{x:.2}")
}

fn tick_label(v: f64) -> String {
    // shortest round-trip representation keeps the output stable
    format!("{v}")
}

pub fn render_svg(doc: &BarcodeDocument) -> String {
    let mut bars: Vec<&DocumentInterval> = doc.intervals.iter().collect();
    bars.sort_by(|a, b| {
        a.dim
            .cmp(&b.dim)
            .then(a.birth.total_cmp(&b.birth))
            .then(match (a.death, b.death) {
                (Some(x), Some(y)) => x.total_cmp(&y),
                (Some(_), None) => std::cmp::Ordering::Less,
                (None, Some(_)) => std::cmp::Ordering::Greater,
                (None, None) => std::cmp::Ordering::Equal,
            })
    });

    let height = ROW_HEIGHT * bars.len() as f64 + MARGIN_TOP + MARGIN_BOTTOM;
    let plot_right = WIDTH - MARGIN_RIGHT;

    // axis range: start at 0 (or the earliest birth) and span all endpoints
    let mut lo = 0.0f64;
    let mut hi = doc.epsilon_max;
    for iv in &bars {
        lo = lo.min(iv.birth);
        hi = hi.max(iv.birth);
        if let Some(d) = iv.death {
            hi = hi.max(d);
        }
    }
    let span = if hi > lo { hi - lo } else { 1.0 };
    let x_of = |v: f64| MARGIN_LEFT + (v - lo) / span * (plot_right - MARGIN_LEFT);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n",
        w = px(WIDTH),
        h = px(height)
    ));
    svg.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n",
        px(WIDTH),
        px(height)
    ));

    // axis with ticks at the distinct filtration values
    let axis_y = height - MARGIN_BOTTOM;
    svg.push_str(&format!(
        "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"1\"/>\n",
        px(MARGIN_LEFT),
        px(axis_y),
        px(plot_right),
        px(axis_y)
    ));
    let mut ticks: Vec<f64> = Vec::new();
    ticks.push(doc.epsilon_max);
    for iv in &bars {
        ticks.push(iv.birth);
        if let Some(d) = iv.death {
            ticks.push(d);
        }
    }
    ticks.sort_by(f64::total_cmp);
    ticks.dedup();
    let shown: Vec<f64> = if ticks.len() > MAX_TICKS {
        (0..MAX_TICKS)
            .map(|i| ticks[i * (ticks.len() - 1) / (MAX_TICKS - 1)])
            .collect()
    } else {
        ticks
    };
    for &t in &shown {
        let x = x_of(t);
        svg.push_str(&format!(
            "  <line x1=\"{x}\" y1=\"{y1}\" x2=\"{x}\" y2=\"{y2}\" stroke=\"black\" stroke-width=\"1\"/>\n",
            x = px(x),
            y1 = px(axis_y),
            y2 = px(axis_y + 5.0)
        ));
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
            px(x),
            px(axis_y + 18.0),
            tick_label(t)
        ));
    }

    // bars, with a dimension label at the first row of each group
    let mut last_dim = usize::MAX;
    for (row, iv) in bars.iter().enumerate() {
        let y = MARGIN_TOP + ROW_HEIGHT * row as f64 + ROW_HEIGHT / 2.0;
        let color = DIM_COLORS[iv.dim % DIM_COLORS.len()];
        if iv.dim != last_dim {
            svg.push_str(&format!(
                "  <text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"12\" fill=\"{}\">H{}</text>\n",
                px(MARGIN_LEFT - 40.0),
                px(y + 4.0),
                color,
                iv.dim
            ));
            last_dim = iv.dim;
        }
        let x1 = x_of(iv.birth);
        match iv.death {
            Some(d) if d == iv.birth => {
                svg.push_str(&format!(
                    "  <circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{}\"/>\n",
                    px(x1),
                    px(y),
                    color
                ));
            }
            Some(d) => {
                svg.push_str(&format!(
                    "  <line x1=\"{}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"{}\" stroke-width=\"6\"/>\n",
                    px(x1),
                    px(x_of(d)),
                    color,
                    y = px(y)
                ));
            }
            None => {
                let x2 = plot_right;
                svg.push_str(&format!(
                    "  <line x1=\"{}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"{}\" stroke-width=\"6\"/>\n",
                    px(x1),
                    px(x2 - 8.0),
                    color,
                    y = px(y)
                ));
                svg.push_str(&format!(
                    "  <polygon points=\"{},{} {},{} {},{}\" fill=\"{}\"/>\n",
                    px(x2 - 8.0),
                    px(y - 6.0),
                    px(x2 - 8.0),
                    px(y + 6.0),
                    px(x2 + 2.0),
                    px(y),
                    color
                ));
            }
        }
    }

    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::super::document::{build_document, BarcodeDocument};
    use super::*;
    use crate::functionals::{interaction_information, make_total_correlation_functional};
    use crate::persistence::{build_filtration, compute_barcode, Mode};
    use crate::states::{ghz, graph_state};

    fn document(mode: Mode) -> BarcodeDocument {
        let s = graph_state(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let f = make_total_correlation_functional(&s, 2.0, 1.0).unwrap();
        let bc = compute_barcode(&build_filtration(&f, mode).unwrap());
        let i2 = interaction_information(&s, 2.0).unwrap();
        build_document(&s, &f, &bc, 2.0, i2, 1.0, 0.0).unwrap()
    }

    #[test]
    fn triangle_svg_has_three_bars_and_axis() {
        let svg = render_svg(&document(Mode::Reduced));
        assert!(svg.starts_with("<svg "));
        assert_eq!(svg.matches("<line").count(), 3 + 1 + 3); // bars + axis + ticks at {0, 0.5, 1.5}
        assert!(svg.contains(">H0<") && svg.contains(">H1<"));
        // height = 20 * 3 bars + 80
        assert!(svg.contains("height=\"140.00\""));
    }

    #[test]
    fn infinite_bars_get_arrowheads() {
        let svg = render_svg(&document(Mode::Absolute));
        assert_eq!(svg.matches("<polygon").count(), 1);
    }

    #[test]
    fn rendering_is_deterministic() {
        let doc = document(Mode::Reduced);
        assert_eq!(render_svg(&doc), render_svg(&doc));
    }

    #[test]
    fn empty_interval_list_renders_axis_only() {
        let s = ghz(2).unwrap();
        let f = make_total_correlation_functional(&s, 2.0, 1.0).unwrap();
        let bc = compute_barcode(&build_filtration(&f, Mode::Reduced).unwrap());
        let i2 = interaction_information(&s, 2.0).unwrap();
        // min_length above every bar length leaves an empty document
        let doc = build_document(&s, &f, &bc, 2.0, i2, 1.0, 100.0).unwrap();
        assert!(doc.intervals.is_empty());
        let svg = render_svg(&doc);
        assert!(svg.contains("height=\"80.00\""));
        assert!(!svg.contains("<circle"));
    }
}
