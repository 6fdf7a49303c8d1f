//! Deterministic SVG charts of spectral sequence pages in Adams
//! coordinates `(t - s, s)`.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::MonomialAlgebra;
use crate::grading::{differential_target, BiDegree, Degree};
use crate::slice::{NegativeForcing, SliceChart};
use crate::sseq::{EventKind, Page};

#[derive(Debug, Error)]
pub enum ChartError {
    #[error("chart range {0} exceeds the computed window")]
    OutOfWindow(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChartMode {
    /// Degrees `n + 0 sigma`.
    IntegerStems,
    /// Degrees `a + b sigma` with `b` in the band, placed at stem `a + b`.
    RhoGradedBand { sigma: [i64; 2] },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartSpec {
    pub title: String,
    pub stems: [i64; 2],
    pub filtrations: [i64; 2],
    pub mode: ChartMode,
    pub arrows: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Dot {
    pub label: String,
    /// 0 for infinite order.
    pub order: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Arrow {
    pub from: (i64, i64),
    pub to: (i64, i64),
    pub r: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ChartData {
    pub cells: BTreeMap<(i64, i64), Vec<Dot>>,
    pub arrows: Vec<Arrow>,
}

fn degrees_at(spec: &ChartSpec, stem: i64) -> Vec<Degree> {
    match spec.mode {
        ChartMode::IntegerStems => vec![Degree::new(stem, 0)],
        ChartMode::RhoGradedBand { sigma } => (sigma[0]..=sigma[1]).map(|b| Degree::new(stem - b, b)).collect(),
    }
}

/// Classes of `page` inside the spec's range, with the differentials
/// recorded on the way to it.
pub fn page_data(spec: &ChartSpec, alg: &MonomialAlgebra, page: &Page) -> Result<ChartData, ChartError> {
    let w = &page.window;
    let mut data = ChartData::default();
    for stem in spec.stems[0]..=spec.stems[1] {
        for d in degrees_at(spec, stem) {
            for s in spec.filtrations[0].max(0)..=spec.filtrations[1] {
                let x = BiDegree::new(d, s);
                if !w.contains(x) {
                    return Err(ChartError::OutOfWindow(format!("{x}")));
                }
                if let Some(p) = page.piece(x) {
                    let dots: Vec<Dot> =
                        p.classes(alg).into_iter().map(|c| Dot { label: c.label, order: c.order }).collect();
                    if !dots.is_empty() {
                        data.cells.entry((stem, s)).or_default().extend(dots);
                    }
                }
                if spec.arrows {
                    for ev in page.provenance.get(&x).into_iter().flatten() {
                        if ev.kind == EventKind::Supports {
                            let t = differential_target(x, ev.r);
                            data.arrows.push(Arrow { from: (stem, s), to: (t.stem(), t.s), r: ev.r });
                        }
                    }
                }
            }
        }
    }
    Ok(data)
}

/// The slice chart, with forced differentials when supplied.
pub fn slice_data(spec: &ChartSpec, chart: &SliceChart, forcing: Option<&NegativeForcing>) -> ChartData {
    let mut data = ChartData::default();
    let inside = |stem: i64, s: i64| {
        (spec.stems[0]..=spec.stems[1]).contains(&stem) && (spec.filtrations[0]..=spec.filtrations[1]).contains(&s)
    };
    for (&(stem, s), cs) in &chart.entries {
        if !inside(stem, s) {
            continue;
        }
        for c in cs {
            let order = if c.group.free_rank > 0 { 0 } else { c.group.invariant_factors.iter().product() };
            data.cells.entry((stem, s)).or_default().push(Dot { label: c.cell.label(), order });
        }
    }
    if spec.arrows {
        if let Some(f) = forcing {
            for d in &f.differentials {
                let (a, b) = ((d.source.stem, d.source.s), (d.target.stem, d.target.s));
                if inside(a.0, a.1) && inside(b.0, b.1) {
                    data.arrows.push(Arrow { from: a, to: b, r: d.r });
                }
            }
            data.arrows.sort_by_key(|x| (x.from, x.to, x.r));
            data.arrows.dedup();
        }
    }
    data
}

const CELL: i64 = 40;
const MARGIN: i64 = 50;

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn arrow_colour(r: i64) -> &'static str {
    match r {
        3 => "#c0392b",
        7 => "#2471a3",
        _ => "#7d3c98",
    }
}

pub fn render_chart(spec: &ChartSpec, data: &ChartData) -> String {
    let [x0, x1] = spec.stems;
    let [s0, s1] = spec.filtrations;
    let width = (x1 - x0 + 1) * CELL;
    let height = (s1 - s0 + 1) * CELL;
    let legend: Vec<String> = data
        .cells
        .iter()
        .map(|((x, s), dots)| {
            let names: Vec<&str> = dots.iter().map(|d| d.label.as_str()).collect();
            format!("({x}, {s}): {}", names.join(", "))
        })
        .collect();
    let total_w = width + 2 * MARGIN;
    let total_h = height + 2 * MARGIN + 16 * legend.len() as i64 + 20;
    let px = |x: i64| MARGIN + (x - x0) * CELL + CELL / 2;
    let py = |s: i64| MARGIN + (s1 - s) * CELL + CELL / 2;
    let mut o = String::new();
    let _ = writeln!(
        o,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total_w}" height="{total_h}" viewBox="0 0 {total_w} {total_h}" font-family="monospace" font-size="10">"#
    );
    let _ = writeln!(o, r#"<rect width="{total_w}" height="{total_h}" fill="white"/>"#);
    let _ = writeln!(o, r#"<text x="{MARGIN}" y="20" font-size="14">{}</text>"#, esc(&spec.title));
    let _ = writeln!(o, r##"<g stroke="#dddddd" stroke-width="1">"##);
    for i in 0..=(x1 - x0 + 1) {
        let x = MARGIN + i * CELL;
        let _ = writeln!(o, r#"<line x1="{x}" y1="{MARGIN}" x2="{x}" y2="{}"/>"#, MARGIN + height);
    }
    for j in 0..=(s1 - s0 + 1) {
        let y = MARGIN + j * CELL;
        let _ = writeln!(o, r#"<line x1="{MARGIN}" y1="{y}" x2="{}" y2="{y}"/>"#, MARGIN + width);
    }
    let _ = writeln!(o, "</g>");
    for x in x0..=x1 {
        let _ = writeln!(o, r#"<text x="{}" y="{}" text-anchor="middle">{x}</text>"#, px(x), MARGIN + height + 14);
    }
    for s in s0..=s1 {
        let _ = writeln!(o, r#"<text x="{}" y="{}" text-anchor="end">{s}</text>"#, MARGIN - 6, py(s) + 3);
    }
    if spec.arrows {
        for a in &data.arrows {
            let (ax, ay, bx, by) = (px(a.from.0), py(a.from.1), px(a.to.0), py(a.to.1));
            if !(x0..=x1).contains(&a.to.0) || !(s0..=s1).contains(&a.to.1) {
                continue;
            }
            let _ = writeln!(
                o,
                r#"<line x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}" stroke="{}" stroke-width="1.2"><title>d{}</title></line>"#,
                arrow_colour(a.r),
                a.r
            );
            let _ = writeln!(o, r#"<circle cx="{bx}" cy="{by}" r="2" fill="{}"/>"#, arrow_colour(a.r));
        }
    }
    for (&(x, s), dots) in &data.cells {
        let (cx, cy) = (px(x), py(s));
        if dots.len() > 3 {
            let _ = writeln!(o, r#"<circle cx="{cx}" cy="{cy}" r="9" fill="white" stroke="black"/>"#);
            let _ = writeln!(o, r#"<text x="{cx}" y="{}" text-anchor="middle">{}</text>"#, cy + 3, dots.len());
            continue;
        }
        let n = dots.len() as i64;
        for (i, d) in dots.iter().enumerate() {
            let dx = cx + (2 * i as i64 - (n - 1)) * 6;
            let title = esc(&d.label);
            match d.order {
                0 => {
                    let _ = writeln!(
                        o,
                        r#"<rect x="{}" y="{}" width="8" height="8" fill="black"><title>{title}</title></rect>"#,
                        dx - 4,
                        cy - 4
                    );
                }
                2 => {
                    let _ = writeln!(o, r#"<circle cx="{dx}" cy="{cy}" r="4" fill="black"><title>{title}</title></circle>"#);
                }
                k => {
                    let _ = writeln!(
                        o,
                        r#"<circle cx="{dx}" cy="{cy}" r="4" fill="white" stroke="black"><title>{title} (order {k})</title></circle>"#
                    );
                }
            }
        }
    }
    let ly = MARGIN + height + 36;
    let _ = writeln!(o, r#"<text x="{MARGIN}" y="{ly}">■ Z[1/3]   ● Z/2   ○ other   ① count</text>"#);
    for (i, line) in legend.iter().enumerate() {
        let _ = writeln!(o, r#"<text x="{MARGIN}" y="{}">{}</text>"#, ly + 16 * (i as i64 + 1), esc(line));
    }
    o.push_str("</svg>\n");
    o
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sseq::Window;
    use crate::tmf13::build_scenario;

    fn spec(stems: [i64; 2], s: [i64; 2]) -> ChartSpec {
        ChartSpec { title: "t".into(), stems, filtrations: s, mode: ChartMode::IntegerStems, arrows: true }
    }

    #[test]
    fn eta_and_nu() {
        let scn = build_scenario("tmf13").unwrap();
        let page = crate::sseq::Page::e2(&scn.algebra, Window::square(10, 10)).unwrap();
        let data = page_data(&spec([0, 8], [0, 8]), &scn.algebra, &page).unwrap();
        let at = |x, s| data.cells.get(&(x, s)).map(|d| d.iter().map(|d| d.label.clone()).collect::<Vec<_>>());
        assert!(at(1, 1).unwrap().contains(&"a_sigma*a1bar".to_string()));
        assert!(at(3, 3).unwrap().contains(&"a_sigma^3*a3bar".to_string()));
        assert!(page_data(&spec([0, 20], [0, 8]), &scn.algebra, &page).is_err());
    }

    #[test]
    fn empty_is_grid_only() {
        let svg = render_chart(&spec([0, 2], [0, 2]), &ChartData::default());
        assert!(svg.contains("<line"));
        assert!(!svg.contains("<rect x="));
        assert_eq!(svg, render_chart(&spec([0, 2], [0, 2]), &ChartData::default()));
    }
}
