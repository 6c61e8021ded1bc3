//! Height-one slices of PL complexes of rank at most three as SVG.
//!
//! The slice is taken at coordinate sum one. Cells with a ray of non-positive
//! height have unbounded slices and are left out.

use std::fmt::Write;

use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::lattice::Vector;
use crate::pl::PLComplex;

const PALETTE: [&str; 10] = ["#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"];
const SIZE: f64 = 400.0;
const MARGIN: f64 = 20.0;

/// Plane coordinates of the height-one point on a ray: the standard simplex drawn
/// as an equilateral triangle in rank three, a segment in rank two.
fn project(r: &Vector) -> Option<(f64, f64)> {
    let h: num_bigint::BigInt = r.iter().sum();
    if !h.is_positive() {
        return None;
    }
    let h = h.to_f64()?;
    let c: Vec<f64> = r.iter().map(|x| x.to_f64().unwrap_or(0.0) / h).collect();
    let (x, y) = match c.len() {
        1 => (0.5, 0.0),
        2 => (c[1], 0.0),
        _ => (c[1] + c[2] / 2.0, c[2] * 3f64.sqrt() / 2.0),
    };
    Some((MARGIN + x * SIZE, MARGIN + (1.0 - y) * SIZE * 0.9))
}

fn sort_around(mut pts: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    let n = pts.len() as f64;
    let (cx, cy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x / n, b + y / n));
    pts.sort_by(|p, q| {
        let (a, b) = ((p.1 - cy).atan2(p.0 - cx), (q.1 - cy).atan2(q.0 - cx));
        a.partial_cmp(&b).unwrap()
    });
    pts
}

pub fn slice_svg(pl: &PLComplex) -> Result<String> {
    if pl.rank() > 3 || pl.rank() == 0 {
        return Err(Error::Cap(format!("slices are drawn for ranks 1 to 3, not {}", pl.rank())));
    }
    let mut body = String::new();
    let mut skipped = 0;
    // higher-dimensional cells first so that lower strata stay visible
    let mut order: Vec<usize> = (0..pl.fan.len()).filter(|&c| !pl.fan.cones[c].rays.is_empty()).collect();
    order.sort_by_key(|&c| (std::cmp::Reverse(pl.fan.cones[c].dim()), c));
    for c in order {
        let cone = &pl.fan.cones[c];
        let Some(pts) = cone.rays.iter().map(project).collect::<Option<Vec<_>>>() else {
            skipped += 1;
            continue;
        };
        let s = pl.cell_stratum[c];
        let colour = PALETTE[s % PALETTE.len()];
        match pts.len() {
            1 => writeln!(body, r#"<circle cx="{:.3}" cy="{:.3}" r="4" fill="{colour}" data-stratum="{s}"/>"#, pts[0].0, pts[0].1),
            2 if cone.dim() == 2 => writeln!(
                body,
                r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{colour}" stroke-width="3" data-stratum="{s}"/>"#,
                pts[0].0, pts[0].1, pts[1].0, pts[1].1
            ),
            _ => {
                let poly: Vec<String> = sort_around(pts).iter().map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
                writeln!(body, r#"<polygon points="{}" fill="{colour}" fill-opacity="0.5" stroke="white" data-stratum="{s}"/>"#, poly.join(" "))
            }
        }
        .expect("writing to a string");
    }
    let side = SIZE + 2.0 * MARGIN;
    let mut out = format!(r#"<svg xmlns="http://www.w3.org/2000/svg" width="{side}" height="{side}" viewBox="0 0 {side} {side}">"#);
    out.push('\n');
    if skipped > 0 {
        writeln!(out, "<!-- {skipped} cells with unbounded slices omitted -->").unwrap();
    }
    out.push_str(&body);
    out.push_str("</svg>\n");
    Ok(out)
}
