//! Staircase drawings of Bloch diagrams as ASCII art or SVG.
//!
//! Step `i` is one unit wide and `k_i` units tall. The main diagonal starts
//! at the origin; the upper diagonal is offset one unit vertically.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::coeff::{CoefficientEngine, Method};
use crate::diagram::{crossing_numbers, is_convex, BlochSequence, CrossingNumbers};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RenderFormat {
    Ascii,
    Svg,
}

#[derive(Clone, Debug)]
pub struct RenderSpec {
    pub sequences: Vec<BlochSequence>,
    pub format: RenderFormat,
    pub annotations: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Annotation {
    pub c: Rational,
    pub e: Rational,
    pub crossing: CrossingNumbers,
    pub convex: bool,
}

impl Annotation {
    pub fn compute(s: &BlochSequence, engine: &CoefficientEngine) -> Self {
        Annotation {
            c: engine.c(s, Method::Closed),
            e: engine.e(s, Method::Closed),
            crossing: crossing_numbers(s),
            convex: is_convex(s),
        }
    }

    fn lines(&self) -> [String; 4] {
        [
            format!("c = {}", self.c),
            format!("e = {}", self.e),
            format!("crossing numbers = {}", self.crossing),
            format!("convex = {}", self.convex),
        ]
    }
}

pub fn render(spec: &RenderSpec, engine: &CoefficientEngine) -> String {
    let annotated: Vec<(&BlochSequence, Option<Annotation>)> = spec
        .sequences
        .iter()
        .map(|s| (s, spec.annotations.then(|| Annotation::compute(s, engine))))
        .collect();
    match spec.format {
        RenderFormat::Ascii => annotated
            .iter()
            .map(|(s, a)| render_ascii(s, a.as_ref()))
            .collect::<Vec<_>>()
            .join("\n"),
        RenderFormat::Svg => render_svg(&annotated),
    }
}

/// Lattice points visited by the staircase, in path order.
fn path_points(s: &BlochSequence) -> Vec<(usize, usize)> {
    let mut pts = vec![(0, 0)];
    let mut y = 0;
    for (i, &k) in s.parts().iter().enumerate() {
        for _ in 0..k {
            y += 1;
            pts.push((i, y));
        }
        pts.push((i + 1, y));
    }
    pts
}

const ASCII_X: usize = 4;
const ASCII_Y: usize = 2;

pub fn render_ascii(s: &BlochSequence, annotation: Option<&Annotation>) -> String {
    let n = s.order();
    let width = ASCII_X * n + 1;
    let height = ASCII_Y * n + 1;
    let mut grid = vec![vec![' '; width]; height];
    let row = |y: usize| ASCII_Y * (n - y);

    // Diagonals: one character per canvas row.
    for (r, line) in grid.iter_mut().enumerate() {
        let y2 = 2 * n - r; // twice the y coordinate
        let main_col = y2 * ASCII_X / 2;
        if main_col < width {
            line[main_col] = '/';
        }
        if y2 >= 2 {
            let upper_col = (y2 - 2) * ASCII_X / 2;
            if upper_col < width {
                line[upper_col] = ':';
            }
        }
    }

    let pts = path_points(s);
    for w in pts.windows(2) {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if x0 == x1 {
            for line in &mut grid[row(y1) + 1..row(y0)] {
                line[ASCII_X * x0] = '|';
            }
        } else {
            grid[row(y0)][ASCII_X * x0 + 1..ASCII_X * x1].fill('-');
        }
    }
    for &(x, y) in &pts {
        grid[row(y)][ASCII_X * x] = '+';
    }

    let mut out = format!("{s}\n");
    for line in grid {
        let line: String = line.into_iter().collect();
        out.push_str(line.trim_end());
        out.push('\n');
    }
    if let Some(a) = annotation {
        for l in a.lines() {
            out.push_str(&l);
            out.push('\n');
        }
    }
    out
}

const UNIT: usize = 40;
const MARGIN: usize = 30;
const LINE: usize = 18;

pub fn render_svg(items: &[(&BlochSequence, Option<Annotation>)]) -> String {
    let label_rows = |a: &Option<Annotation>| 1 + if a.is_some() { 4 } else { 0 };
    let panel_width = |s: &BlochSequence| s.order() * UNIT + 2 * MARGIN;
    let total_width: usize = items.iter().map(|(s, _)| panel_width(s)).sum();
    let total_height = items
        .iter()
        .map(|(s, a)| s.order() * UNIT + 2 * MARGIN + label_rows(a) * LINE)
        .max()
        .unwrap_or(2 * MARGIN);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total_width}" height="{total_height}" viewBox="0 0 {total_width} {total_height}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);

    let mut offset = 0;
    for (s, annotation) in items {
        let n = s.order();
        let px = |x: usize| MARGIN + x * UNIT;
        let py = |y: usize| MARGIN + (n - y) * UNIT;
        let _ = writeln!(out, r#"<g transform="translate({offset},0)">"#);

        let _ = writeln!(out, r##"<g stroke="#dddddd" stroke-width="1">"##);
        for i in 0..=n {
            let _ = writeln!(
                out,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                px(i),
                py(0),
                px(i),
                py(n)
            );
            let _ = writeln!(
                out,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                px(0),
                py(i),
                px(n),
                py(i)
            );
        }
        let _ = writeln!(out, "</g>");

        let _ = writeln!(
            out,
            r##"<line class="main-diagonal" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#3366cc" stroke-width="1.5"/>"##,
            px(0),
            py(0),
            px(n),
            py(n)
        );
        if n >= 1 {
            let _ = writeln!(
                out,
                r##"<line class="upper-diagonal" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#cc3333" stroke-width="1.5" stroke-dasharray="6,4"/>"##,
                px(0),
                py(1),
                px(n - 1),
                py(n)
            );
        }

        let points: Vec<String> = path_points(s)
            .into_iter()
            .map(|(x, y)| format!("{},{}", px(x), py(y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline class="staircase" points="{}" fill="none" stroke="black" stroke-width="3"/>"#,
            points.join(" ")
        );

        let mut text_y = py(0) + MARGIN;
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{text_y}" font-family="monospace" font-size="14">{s}</text>"#,
            px(0)
        );
        if let Some(a) = annotation {
            for l in a.lines() {
                text_y += LINE;
                let _ = writeln!(
                    out,
                    r#"<text x="{}" y="{text_y}" font-family="monospace" font-size="12">{l}</text>"#,
                    px(0)
                );
            }
        }
        let _ = writeln!(out, "</g>");
        offset += panel_width(s);
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(p: &[u32]) -> BlochSequence {
        BlochSequence::new(p.to_vec()).unwrap()
    }

    #[test]
    fn ascii_two_unit_steps() {
        let art = render_ascii(&seq(&[1, 1]), None);
        let expected = "\
(1,1)
    +---+
  : | /
+---+
| /
+
";
        assert_eq!(art, expected);
    }

    #[test]
    fn ascii_shows_diagonals_below_path() {
        let art = render_ascii(&seq(&[0, 2]), None);
        assert!(art.contains('/'));
        assert!(art.contains(':'));
    }

    #[test]
    fn svg_has_both_diagonals_and_path() {
        let eng = CoefficientEngine::new();
        let spec = RenderSpec {
            sequences: vec![seq(&[2, 0, 0, 2, 0, 2, 0, 3, 0])],
            format: RenderFormat::Svg,
            annotations: true,
        };
        let svg = render(&spec, &eng);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("main-diagonal"));
        assert!(svg.contains("upper-diagonal"));
        assert!(svg.contains("crossing numbers = 1,3,1,0"));
        // 9 unit widths plus 9 unit rises: 19 lattice points on the staircase.
        let points = svg
            .lines()
            .find(|l| l.contains("staircase"))
            .unwrap()
            .split("points=\"")
            .nth(1)
            .unwrap()
            .split('"')
            .next()
            .unwrap()
            .split(' ')
            .count();
        assert_eq!(points, 19);
    }

    #[test]
    fn annotations_use_closed_form_values() {
        let eng = CoefficientEngine::new();
        let a = Annotation::compute(&seq(&[2, 0, 0, 2]), &eng);
        assert_eq!(a.c, Rational::new(1, 2));
        assert_eq!(a.e, Rational::new(1, 4));
        assert!(!a.convex);
    }
}
