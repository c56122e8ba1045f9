//! Deterministic SVG rendering of a rescaled interferogram with trial-factor
//! markers: solid verticals for factor verdicts, dashed for non-factors.
//! Fixed canvas, fixed float formatting, no timestamps, so identical inputs
//! hash identically.

use std::fmt::Write as _;

use ctes::analysis::Verdict;
use ctes::{FactorReport, Interferogram};

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 560.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 25.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 55.0;
/// Cap on polyline points; longer traces are strided down.
const MAX_POINTS: usize = 4000;

pub fn render_factor_plot(ig: &Interferogram, report: &FactorReport) -> String {
    let scale = report.n as f64 / ig.setup.x_nm;
    let xi_min = ig.samples.first().map(|s| s.lambda_nm * scale).unwrap_or(0.0);
    let xi_max = ig.samples.last().map(|s| s.lambda_nm * scale).unwrap_or(1.0);
    let y_max = ig
        .samples
        .iter()
        .map(|s| s.intensity.value())
        .fold(1.0_f64, f64::max)
        * 1.05;

    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let to_x = |xi: f64| MARGIN_L + (xi - xi_min) / (xi_max - xi_min) * plot_w;
    let to_y = |v: f64| MARGIN_T + (1.0 - v / y_max) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(svg, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");
    let _ = writeln!(
        svg,
        "<text x=\"{:.1}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" \
         text-anchor=\"middle\">N = {}</text>",
        WIDTH / 2.0,
        report.n
    );

    // Axes.
    let _ = writeln!(
        svg,
        "<line x1=\"{MARGIN_L}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>",
        HEIGHT - MARGIN_B,
        WIDTH - MARGIN_R,
        HEIGHT - MARGIN_B
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{MARGIN_L}\" y1=\"{MARGIN_T}\" x2=\"{MARGIN_L}\" y2=\"{:.1}\" stroke=\"black\"/>",
        HEIGHT - MARGIN_B
    );
    for tick in 0..=4 {
        let v = y_max * tick as f64 / 4.0;
        let y = to_y(v);
        let _ = writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" \
             text-anchor=\"end\">{:.2}</text>",
            MARGIN_L - 6.0,
            y + 4.0,
            v
        );
        let _ = writeln!(
            svg,
            "<line x1=\"{:.1}\" y1=\"{y:.1}\" x2=\"{MARGIN_L}\" y2=\"{y:.1}\" stroke=\"black\"/>",
            MARGIN_L - 4.0
        );
    }
    let _ = writeln!(
        svg,
        "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"13\" \
         text-anchor=\"middle\">xi_N = N*lambda/x</text>",
        MARGIN_L + plot_w / 2.0,
        HEIGHT - 14.0
    );
    let _ = writeln!(
        svg,
        "<text x=\"18\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"13\" \
         text-anchor=\"middle\" transform=\"rotate(-90 18 {:.1})\">intensity</text>",
        MARGIN_T + plot_h / 2.0,
        MARGIN_T + plot_h / 2.0
    );

    // Trial-factor markers under the trace.
    for check in &report.checks {
        let xi = check.trial_factor as f64;
        if xi < xi_min || xi > xi_max {
            continue;
        }
        let x = to_x(xi);
        let (stroke, dash) = match check.verdict {
            Verdict::Factor => ("#d62728", ""),
            Verdict::NonFactor => ("#808080", " stroke-dasharray=\"5,4\""),
            Verdict::Uncovered => continue,
        };
        let _ = writeln!(
            svg,
            "<line x1=\"{x:.2}\" y1=\"{MARGIN_T}\" x2=\"{x:.2}\" y2=\"{:.1}\" \
             stroke=\"{stroke}\" stroke-width=\"1.4\"{dash}/>",
            HEIGHT - MARGIN_B
        );
        let _ = writeln!(
            svg,
            "<text x=\"{x:.2}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"10\" \
             text-anchor=\"middle\">{}</text>",
            HEIGHT - MARGIN_B + 14.0,
            check.trial_factor
        );
    }

    // Intensity trace.
    let stride = ig.samples.len().div_ceil(MAX_POINTS).max(1);
    let mut points = String::new();
    for s in ig.samples.iter().step_by(stride) {
        let _ = write!(points, "{:.2},{:.2} ", to_x(s.lambda_nm * scale), to_y(s.intensity.value()));
    }
    let last = ig.samples.last().unwrap();
    let _ = write!(points, "{:.2},{:.2}", to_x(last.lambda_nm * scale), to_y(last.intensity.value()));
    let _ = writeln!(
        svg,
        "<polyline points=\"{points}\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1\"/>"
    );

    svg.push_str("</svg>\n");
    svg
}
