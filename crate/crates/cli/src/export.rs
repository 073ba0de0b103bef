//! CSV and SVG renderings of slice grids.

use std::collections::HashSet;
use std::fmt::Write as _;

use pconvex::geometry::{build_slice, Cell, Certificate, Domain, SliceGrid};
use pconvex::Subspace;

/// Rebuilds the slice a certificate lives on.
pub fn certificate_slice(domain: &Domain, cert: &Certificate) -> pconvex::Result<SliceGrid> {
    let w = Subspace::from_vectors(domain.ambient(), &cert.basis)?;
    build_slice(domain, &cert.origin, &w, cert.h, &cert.extent)
}

fn num(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v}")
    }
}

/// One row per cell: slice coordinates, ambient coordinates, `d`, `in_x`.
pub fn slice_csv(s: &SliceGrid) -> String {
    let mut out = String::new();
    let k = s.k();
    let n = s.origin.len();
    let mut header: Vec<String> = (1..=k).map(|j| format!("w{j}")).collect();
    header.extend((1..=n).map(|j| format!("x{j}")));
    header.push("d".into());
    header.push("in_x".into());
    writeln!(out, "{}", header.join(",")).unwrap();
    for i in 0..s.len() {
        let mut row: Vec<String> = s.coords(i).into_iter().map(num).collect();
        row.extend(s.point(i).into_iter().map(num));
        row.push(num(s.d[i]));
        row.push(if s.in_x[i] { "1".into() } else { "0".into() });
        writeln!(out, "{}", row.join(",")).unwrap();
    }
    out
}

/// Piecewise-linear map onto a perceptually ordered blue-to-yellow ramp.
fn color(t: f64) -> String {
    const STOPS: [(f64, [u8; 3]); 5] = [
        (0.0, [68, 1, 84]),
        (0.25, [59, 82, 139]),
        (0.5, [33, 145, 140]),
        (0.75, [94, 201, 98]),
        (1.0, [253, 231, 37]),
    ];
    let t = t.clamp(0.0, 1.0);
    let j = STOPS.iter().rposition(|(s, _)| *s <= t).unwrap_or(0).min(STOPS.len() - 2);
    let (s0, c0) = STOPS[j];
    let (s1, c1) = STOPS[j + 1];
    let f = (t - s0) / (s1 - s0);
    let mix = |a: u8, b: u8| (a as f64 + f * (b as f64 - a as f64)).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(c0[0], c1[0]), mix(c0[1], c1[1]), mix(c0[2], c1[2]))
}

fn finite_range(s: &SliceGrid, cells: impl Iterator<Item = usize>) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in cells {
        if s.in_x[i] && s.d[i].is_finite() {
            lo = lo.min(s.d[i]);
            hi = hi.max(s.d[i]);
        }
    }
    if lo > hi {
        (0.0, 1.0)
    } else {
        (lo, hi)
    }
}

fn svg_open(out: &mut String, w: f64, h: f64, title: &str) {
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    )
    .unwrap();
    writeln!(out, "<title>{}</title>", escape(title)).unwrap();
    writeln!(out, r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#).unwrap();
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Heatmap for 2-D and 3-D slices (3-D shows the layer through `x₀`),
/// profile for 1-D slices. `K` is outlined when a certificate is given.
pub fn slice_svg(s: &SliceGrid, cert: Option<&Certificate>, title: &str) -> String {
    match s.k() {
        1 => profile_svg(s, cert, title),
        _ => heatmap_svg(s, cert, title),
    }
}

fn profile_svg(s: &SliceGrid, cert: Option<&Certificate>, title: &str) -> String {
    let (w, h, pad) = (640.0, 320.0, 40.0);
    let m = s.len();
    let (_, dmax) = finite_range(s, 0..m);
    let dmax = if dmax > 0.0 { dmax } else { 1.0 };
    let x_of = |i: usize| pad + (w - 2.0 * pad) * i as f64 / (m.max(2) - 1) as f64;
    let y_of = |d: f64| h - pad - (h - 2.0 * pad) * (d.min(dmax) / dmax);
    let mut out = String::new();
    svg_open(&mut out, w, h, title);
    if let Some(c) = cert {
        let idx: Vec<usize> = c.k_cells.iter().filter_map(|cell| s.index(cell)).collect();
        if let (Some(&a), Some(&b)) = (idx.iter().min(), idx.iter().max()) {
            writeln!(
                out,
                r##"<rect x="{:.2}" y="{pad}" width="{:.2}" height="{:.2}" fill="#ffd6d6" stroke="#c00000"/>"##,
                x_of(a),
                (x_of(b) - x_of(a)).max(1.0),
                h - 2.0 * pad
            )
            .unwrap();
        }
    }
    let mut pts = String::new();
    for i in 0..m {
        let d = if s.in_x[i] { s.d[i] } else { 0.0 };
        write!(pts, "{:.2},{:.2} ", x_of(i), y_of(d)).unwrap();
    }
    writeln!(out, r##"<polyline fill="none" stroke="#1f4e99" stroke-width="1.5" points="{}"/>"##, pts.trim_end()).unwrap();
    writeln!(
        out,
        r##"<line x1="{pad}" y1="{0:.2}" x2="{1:.2}" y2="{0:.2}" stroke="black"/>"##,
        h - pad,
        w - pad
    )
    .unwrap();
    if let Some(c) = cert {
        if let Some(i) = s.index(&c.x0_cell) {
            writeln!(out, r##"<circle cx="{:.2}" cy="{:.2}" r="4" fill="#c00000"/>"##, x_of(i), y_of(s.d[i])).unwrap();
        }
    }
    writeln!(out, r#"<text x="{pad}" y="20" font-size="12" font-family="sans-serif">{}</text>"#, escape(title)).unwrap();
    writeln!(
        out,
        r#"<text x="{pad}" y="{:.0}" font-size="11" font-family="sans-serif">d max {}</text>"#,
        h - 10.0,
        num(dmax)
    )
    .unwrap();
    out.push_str("</svg>\n");
    out
}

fn heatmap_svg(s: &SliceGrid, cert: Option<&Certificate>, title: &str) -> String {
    let (rows, cols) = (s.shape[0], s.shape[1]);
    // Third lattice coordinate of the displayed layer.
    let layer: Option<i64> = (s.k() == 3).then(|| match cert {
        Some(c) => c.x0_cell[2],
        None => s.lo[2] + s.shape[2] as i64 / 2,
    });
    let cell_at = |a: usize, b: usize| -> usize {
        let mut c: Cell = vec![s.lo[0] + a as i64, s.lo[1] + b as i64];
        if let Some(z) = layer {
            c.push(z);
        }
        s.index(&c).expect("cell inside the grid")
    };
    let px = (600.0 / rows.max(cols) as f64).max(1.0);
    let pad = 40.0;
    let (w, h) = (cols as f64 * px + 2.0 * pad, rows as f64 * px + 2.0 * pad + 20.0);
    let shown: Vec<usize> = (0..rows).flat_map(|a| (0..cols).map(move |b| (a, b))).map(|(a, b)| cell_at(a, b)).collect();
    let (dmin, dmax) = finite_range(s, shown.iter().copied());
    let span = if dmax > dmin { dmax - dmin } else { 1.0 };
    let mut out = String::new();
    svg_open(&mut out, w, h, title);
    // First lattice axis runs down the image, second across.
    let pos = |a: usize, b: usize| (pad + b as f64 * px, pad + a as f64 * px);
    for a in 0..rows {
        for b in 0..cols {
            let i = cell_at(a, b);
            let fill = if !s.in_x[i] {
                "#808080".to_string()
            } else if s.d[i].is_finite() {
                color((s.d[i] - dmin) / span)
            } else {
                color(1.0)
            };
            let (x, y) = pos(a, b);
            writeln!(out, r#"<rect x="{x:.2}" y="{y:.2}" width="{px:.2}" height="{px:.2}" fill="{fill}"/>"#).unwrap();
        }
    }
    if let Some(c) = cert {
        let key = |cell: &Cell| (cell[0], cell[1]);
        let k: HashSet<(i64, i64)> = c
            .k_cells
            .iter()
            .filter(|cell| layer.is_none_or(|z| cell[2] == z))
            .map(key)
            .collect();
        let mut path = String::new();
        for &(ca, cb) in &k {
            let a = (ca - s.lo[0]) as f64;
            let b = (cb - s.lo[1]) as f64;
            let (x0, y0) = (pad + b * px, pad + a * px);
            let (x1, y1) = (x0 + px, y0 + px);
            if !k.contains(&(ca - 1, cb)) {
                write!(path, "M{x0:.2} {y0:.2}H{x1:.2}").unwrap();
            }
            if !k.contains(&(ca + 1, cb)) {
                write!(path, "M{x0:.2} {y1:.2}H{x1:.2}").unwrap();
            }
            if !k.contains(&(ca, cb - 1)) {
                write!(path, "M{x0:.2} {y0:.2}V{y1:.2}").unwrap();
            }
            if !k.contains(&(ca, cb + 1)) {
                write!(path, "M{x1:.2} {y0:.2}V{y1:.2}").unwrap();
            }
        }
        if !path.is_empty() {
            writeln!(out, r##"<path d="{path}" fill="none" stroke="#ff2020" stroke-width="2"/>"##).unwrap();
        }
        let (x, y) = pos((c.x0_cell[0] - s.lo[0]) as usize, (c.x0_cell[1] - s.lo[1]) as usize);
        writeln!(
            out,
            r##"<circle cx="{:.2}" cy="{:.2}" r="{:.2}" fill="none" stroke="white" stroke-width="2"/>"##,
            x + px / 2.0,
            y + px / 2.0,
            (px * 0.8).max(3.0)
        )
        .unwrap();
    }
    writeln!(out, r#"<text x="{pad}" y="20" font-size="12" font-family="sans-serif">{}</text>"#, escape(title)).unwrap();
    writeln!(
        out,
        r#"<text x="{pad}" y="{:.0}" font-size="11" font-family="sans-serif">d from {} to {}; gray = outside X</text>"#,
        h - 12.0,
        num(dmin),
        num(dmax)
    )
    .unwrap();
    out.push_str("</svg>\n");
    out
}
