//! SVG and ASCII charts in Adams grading: stem `t − s` across, filtration `s` up.

use std::fmt::Write;

use klocal_core::ss::{summands, Bidegree, Cell, Page};

const UNIT: i64 = 40;
const MARGIN: i64 = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChartRange {
    pub stem_min: i64,
    pub stem_max: i64,
    pub s_max: i64,
}

impl ChartRange {
    pub fn is_empty(&self) -> bool {
        self.stem_min > self.stem_max || self.s_max < 0
    }

    fn contains(&self, b: Bidegree) -> bool {
        (self.stem_min..=self.stem_max).contains(&b.stem()) && (0..=self.s_max).contains(&b.s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Glyph {
    Free,
    /// `Z/p^k`.
    Torsion(u32),
    /// Torsion prime to `p`, labelled by its order.
    Coprime(u64),
    Unknown,
}

impl Glyph {
    fn ascii(&self) -> String {
        match self {
            Glyph::Free => "#".into(),
            Glyph::Torsion(k) => k.to_string(),
            Glyph::Coprime(n) => format!("({n})"),
            Glyph::Unknown => "?".into(),
        }
    }
}

fn glyphs(page: &Page, b: Bidegree) -> Vec<Glyph> {
    match page.cell(b) {
        Some(Cell::Truncated) => vec![Glyph::Unknown],
        Some(Cell::Known(g)) => summands(&g)
            .into_iter()
            .map(|(q, k)| match k {
                None => Glyph::Free,
                Some(k) if q == page.prime() => Glyph::Torsion(k),
                Some(k) => Glyph::Coprime(q.pow(k)),
            })
            .collect(),
        None => Vec::new(),
    }
}

fn cells_in(page: &Page, range: &ChartRange) -> Vec<(Bidegree, Vec<Glyph>)> {
    let mut out = Vec::new();
    for s in 0..=range.s_max {
        for stem in range.stem_min..=range.stem_max {
            let b = Bidegree::new(s, s + stem);
            let g = glyphs(page, b);
            if !g.is_empty() {
                out.push((b, g));
            }
        }
    }
    out
}

/// Nonzero differentials with both ends on the chart.
fn arrows_in(page: &Page, range: &ChartRange) -> Vec<(Bidegree, Bidegree)> {
    page.differentials()
        .filter(|(_, d)| !d.is_zero())
        .map(|(b, _)| (b, b.d_target(page.r())))
        .filter(|(a, b)| range.contains(*a) && range.contains(*b))
        .collect()
}

pub fn ascii(page: &Page, range: &ChartRange, title: &str) -> String {
    let mut out = format!("{title}\n");
    if range.is_empty() {
        return out;
    }
    let labels: Vec<Vec<String>> = (0..=range.s_max)
        .rev()
        .map(|s| {
            (range.stem_min..=range.stem_max)
                .map(|stem| {
                    let g = glyphs(page, Bidegree::new(s, s + stem));
                    if g.is_empty() {
                        ".".into()
                    } else {
                        g.iter().map(Glyph::ascii).collect::<Vec<_>>().join("")
                    }
                })
                .collect()
        })
        .collect();
    let width = labels.iter().flatten().map(|l| l.chars().count()).chain([3]).max().unwrap_or(3) + 1;
    for (row, s) in labels.iter().zip((0..=range.s_max).rev()) {
        let _ = write!(out, "{s:>3} |");
        for l in row {
            let _ = write!(out, "{l:>width$}");
        }
        out.push('\n');
    }
    let _ = write!(out, "    +{}\n     ", "-".repeat(width * row_len(range)));
    for stem in range.stem_min..=range.stem_max {
        let _ = write!(out, "{stem:>width$}");
    }
    out.push('\n');
    out.push_str("legend: # Z_p, k Z/p^k, (n) torsion prime to p, ? depends on data outside the window\n");
    out
}

fn row_len(range: &ChartRange) -> usize {
    (range.stem_max - range.stem_min + 1) as usize
}

pub fn svg(page: &Page, range: &ChartRange, title: &str) -> String {
    let (cols, rows) = if range.is_empty() {
        (0, 0)
    } else {
        (range.stem_max - range.stem_min + 1, range.s_max + 1)
    };
    let (w, h) = (cols * UNIT + 2 * MARGIN, rows * UNIT + 2 * MARGIN);
    // centre of cell (stem, s); y grows downward in SVG
    let x = |stem: i64| MARGIN + (stem - range.stem_min) * UNIT + UNIT / 2;
    let y = |s: i64| MARGIN + (range.s_max - s) * UNIT + UNIT / 2;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="10">"#
    );
    out.push_str(
        r#"<defs><marker id="head" viewBox="0 0 6 6" refX="5" refY="3" markerWidth="6" markerHeight="6" orient="auto"><path d="M0,0 L6,3 L0,6 z" fill="black"/></marker></defs>"#,
    );
    out.push('\n');
    let _ = writeln!(out, r#"<text x="{MARGIN}" y="{}" font-size="12">{}</text>"#, MARGIN / 2, escape(title));
    if !range.is_empty() {
        for stem in range.stem_min..=range.stem_max {
            let _ = writeln!(
                out,
                r##"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="#ddd"/><text x="{0}" y="{3}" text-anchor="middle">{stem}</text>"##,
                x(stem),
                y(range.s_max) - UNIT / 2,
                y(0) + UNIT / 2,
                y(0) + UNIT / 2 + 12,
            );
        }
        for s in 0..=range.s_max {
            let _ = writeln!(
                out,
                r##"<line x1="{0}" y1="{2}" x2="{1}" y2="{2}" stroke="#ddd"/><text x="{3}" y="{4}" text-anchor="end">{s}</text>"##,
                x(range.stem_min) - UNIT / 2,
                x(range.stem_max) + UNIT / 2,
                y(s),
                MARGIN - 4,
                y(s) + 3,
            );
        }
    }
    for (a, b) in arrows_in(page, range) {
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" marker-end="url(#head)"/>"#,
            x(a.stem()),
            y(a.s),
            x(b.stem()),
            y(b.s),
        );
    }
    for (b, gs) in cells_in(page, range) {
        let n = gs.len() as i64;
        for (i, g) in gs.iter().enumerate() {
            // spread summands of one cell horizontally
            let cx = x(b.stem()) + (2 * i as i64 - (n - 1)) * 5;
            let cy = y(b.s);
            let _ = writeln!(out, "{}", glyph_svg(g, cx, cy));
        }
    }
    out.push_str("</svg>\n");
    out
}

fn glyph_svg(g: &Glyph, cx: i64, cy: i64) -> String {
    match g {
        Glyph::Free => format!(r#"<rect x="{}" y="{}" width="8" height="8" fill="black"/>"#, cx - 4, cy - 4),
        Glyph::Torsion(k) => format!(
            r#"<circle cx="{cx}" cy="{cy}" r="4" fill="none" stroke="black"/><text x="{cx}" y="{}" text-anchor="middle" font-size="8">{k}</text>"#,
            cy - 6
        ),
        Glyph::Coprime(n) => format!(
            r#"<path d="M{cx},{} L{},{cy} L{cx},{} L{},{cy} z" fill="none" stroke="gray"/><text x="{cx}" y="{}" text-anchor="middle" font-size="8">{n}</text>"#,
            cy - 5,
            cx + 5,
            cy + 5,
            cx - 5,
            cy - 7
        ),
        Glyph::Unknown => format!(r#"<text x="{cx}" y="{}" text-anchor="middle" font-size="12">?</text>"#, cy + 4),
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use klocal_core::ss::Window;
    use klocal_core::AbGroup;

    fn sample() -> Page {
        let mut page = Page::new(3, 2, Window::new(-2, 6, 2));
        page.set(Bidegree::new(0, 0), AbGroup::from_module(3, klocal_core::FgZpModule::free(3, 1)).unwrap())
            .unwrap();
        page.set(Bidegree::new(1, 4), AbGroup::cyclic(3, 9).unwrap()).unwrap();
        page.set(Bidegree::new(2, 1), AbGroup::cyclic(3, 2).unwrap()).unwrap();
        page.set_truncated(Bidegree::new(2, 6));
        page
    }

    #[test]
    fn ascii_glyphs() {
        let range = ChartRange {
            stem_min: -1,
            stem_max: 4,
            s_max: 2,
        };
        let text = ascii(&sample(), &range, "E_2");
        assert!(text.contains('#'));
        assert!(text.contains("(2)"));
        assert!(text.contains('?'));
        // Z/9 at stem 3, filtration 1
        let row1: Vec<&str> = text.lines().find(|l| l.starts_with("  1 |")).unwrap().split_whitespace().collect();
        assert_eq!(row1[2..], [".", ".", ".", ".", "2", "."]);
    }

    #[test]
    fn svg_is_stable_and_empty_is_valid() {
        let range = ChartRange {
            stem_min: -1,
            stem_max: 4,
            s_max: 2,
        };
        let a = svg(&sample(), &range, "E_2");
        assert_eq!(a, svg(&sample(), &range, "E_2"));
        assert!(a.contains("<rect") && a.contains("<circle") && a.contains(">?<"));
        let empty = ChartRange {
            stem_min: 1,
            stem_max: 0,
            s_max: 2,
        };
        let e = svg(&sample(), &empty, "E_2");
        assert!(e.starts_with("<svg") && e.ends_with("</svg>\n") && !e.contains("<rect"));
    }
}
