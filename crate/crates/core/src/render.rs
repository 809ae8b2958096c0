//! SVG pictures of planar partial reachable sets.

use crate::exactnum::{rat_to_f64, Rat, RealAlg};
use crate::geometry::{partial_sum, GenPolyhedron};
use crate::linalg::AlgVector;
use crate::preprocess::LtiSystem;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;
use std::fmt::Write;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RenderError {
    #[error("only planar systems can be drawn, got dimension {0}")]
    NotPlanar(usize),
    #[error("cannot draw unbounded sets")]
    Unbounded,
}

const SIZE: f64 = 480.0;

/// Vertices in counter-clockwise order around their centroid.
pub fn polygon(p: &GenPolyhedron) -> Vec<Vec<Rat>> {
    let vs = p.vertices().to_vec();
    if vs.len() < 3 {
        return vs;
    }
    let k = Rat::from_integer(vs.len().into());
    let cx = vs.iter().map(|v| v[0].clone()).sum::<Rat>() / &k;
    let cy = vs.iter().map(|v| v[1].clone()).sum::<Rat>() / &k;
    let rel = |v: &Vec<Rat>| (&v[0] - &cx, &v[1] - &cy);
    let upper = |(x, y): &(Rat, Rat)| y.is_positive() || (y.is_zero() && x.is_positive());
    let mut out = vs.clone();
    out.sort_by(|a, b| {
        let (pa, pb) = (rel(a), rel(b));
        match (upper(&pa), upper(&pb)) {
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => {
                let cross = &pa.0 * &pb.1 - &pa.1 * &pb.0;
                Rat::zero().cmp(&cross)
            }
        }
    });
    out
}

/// The vertex polygon of `Σ_{i≤n} A^i(U)`, with `U` the hull of the controls.
pub fn partial_reach_polygon(sys: &LtiSystem, n: usize) -> Result<Vec<Vec<Rat>>, RenderError> {
    if sys.dim() != 2 {
        return Err(RenderError::NotPlanar(sys.dim()));
    }
    let u = sys.controls.hull();
    if !u.is_polytope() {
        return Err(RenderError::Unbounded);
    }
    Ok(polygon(&partial_sum(&sys.a, &u, n)))
}

pub struct Line<'a> {
    pub tau: &'a AlgVector,
    pub level: &'a RealAlg,
}

pub fn render_partial_reach(sys: &LtiSystem, n: usize, line: Option<Line<'_>>) -> Result<String, RenderError> {
    let reach = partial_reach_polygon(sys, n)?;
    let u = polygon(&sys.controls.hull());
    let q = polygon(&sys.target);
    let to_f = |vs: &[Vec<Rat>]| -> Vec<(f64, f64)> { vs.iter().map(|v| (rat_to_f64(&v[0]), rat_to_f64(&v[1]))).collect() };
    let (reach, u, q) = (to_f(&reach), to_f(&u), to_f(&q));

    let all = reach.iter().chain(&u).chain(&q);
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let pad = 0.1 * span;
    let (x0, y0, span) = (x0 - pad, y0 - pad, span + 2.0 * pad);
    let sx = |x: f64| (x - x0) / span * SIZE;
    let sy = |y: f64| SIZE - (y - y0) / span * SIZE;
    let points = |ps: &[(f64, f64)]| {
        ps.iter().map(|&(x, y)| format!("{:.3},{:.3}", sx(x), sy(y))).collect::<Vec<_>>().join(" ")
    };

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(svg, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##).unwrap();
    let shape = |svg: &mut String, id: &str, ps: &[(f64, f64)], fill: &str, stroke: &str| {
        writeln!(
            svg,
            r#"<polygon id="{id}" points="{}" fill="{fill}" fill-opacity="0.35" stroke="{stroke}" stroke-width="1.5"/>"#,
            points(ps)
        )
        .unwrap();
    };
    shape(&mut svg, "reach", &reach, "#4a90d9", "#1f4e8c");
    shape(&mut svg, "controls", &u, "#f5a623", "#9c6500");
    shape(&mut svg, "target", &q, "#d0021b", "#7a0010");
    if let Some(Line { tau, level }) = line {
        let t = tau.to_f64();
        let c = level.to_f64();
        let (a, b) = if t[1].abs() > t[0].abs() {
            let y = |x: f64| (c - t[0] * x) / t[1];
            ((x0, y(x0)), (x0 + span, y(x0 + span)))
        } else {
            let x = |y: f64| (c - t[1] * y) / t[0];
            ((x(y0), y0), (x(y0 + span), y0 + span))
        };
        writeln!(
            svg,
            r##"<line id="certificate" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#000000" stroke-width="1.5" stroke-dasharray="6 4"/>"##,
            sx(a.0),
            sy(a.1),
            sx(b.0),
            sy(b.1)
        )
        .unwrap();
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};
    use crate::geometry::ControlSet;
    use crate::linalg::RatMatrix;

    fn fig() -> LtiSystem {
        let u = GenPolyhedron::polytope(
            [[-2, -1], [0, -1], [0, 1], [2, 1]].iter().map(|r| r.iter().map(|x| int(*x)).collect()).collect(),
        );
        LtiSystem::new(
            RatMatrix::diag(&[rat(1, 3), rat(2, 3)]),
            ControlSet::single(u),
            vec![int(0), int(0)],
            GenPolyhedron::point(vec![int(0), int(3)]),
        )
        .unwrap()
    }

    #[test]
    fn hull_extent_after_twelve_steps() {
        let p = partial_reach_polygon(&fig(), 12).unwrap();
        // x-extent is 2·Σ_{i≤12} 3^{-i} = 3 − 3^{-12}
        let xmax = p.iter().map(|v| v[0].clone()).max().unwrap();
        let xmin = p.iter().map(|v| v[0].clone()).min().unwrap();
        let expect = int(3) - Rat::new(1.into(), 3u32.pow(12).into());
        assert_eq!(xmax, expect);
        assert_eq!(xmin, -expect.clone());
        assert!((rat_to_f64(&xmax) - 3.0).abs() < 1e-3);
    }

    #[test]
    fn zero_steps_is_the_control_set() {
        let p = partial_reach_polygon(&fig(), 0).unwrap();
        let mut got = p.clone();
        got.sort();
        let mut u = fig().controls.hull().vertices().to_vec();
        u.sort();
        assert_eq!(got, u);
        // counter-clockwise: consecutive cross products are positive
        for i in 0..p.len() {
            let (a, b, c) = (&p[i], &p[(i + 1) % p.len()], &p[(i + 2) % p.len()]);
            let cross = (&b[0] - &a[0]) * (&c[1] - &b[1]) - (&b[1] - &a[1]) * (&c[0] - &b[0]);
            assert!(cross.is_positive());
        }
    }

    #[test]
    fn certificate_line_is_horizontal() {
        let tau = AlgVector::Rational(vec![int(0), int(1)]);
        let level = RealAlg::from_i64(3);
        let svg = render_partial_reach(&fig(), 4, Some(Line { tau: &tau, level: &level })).unwrap();
        let line = svg.lines().find(|l| l.contains("id=\"certificate\"")).unwrap();
        let attr = |k: &str| -> f64 {
            let s = line.split(&format!("{k}=\"")).nth(1).unwrap();
            s[..s.find('"').unwrap()].parse().unwrap()
        };
        assert_eq!(attr("y1"), attr("y2"));
        assert!(svg.starts_with("<?xml") && svg.contains("version=\"1.1\""));
    }

    #[test]
    fn rejects_non_planar() {
        let u = GenPolyhedron::cube(3, &int(1));
        let sys = LtiSystem::new(RatMatrix::identity(3), ControlSet::single(u), vec![int(0); 3], GenPolyhedron::origin(3))
            .unwrap();
        assert_eq!(render_partial_reach(&sys, 1, None), Err(RenderError::NotPlanar(3)));
    }
}
