//! Minimal SVG output for ray diagrams and knot projections. Coordinates
//! are printed with six decimals so the files are reproducible.

use std::f64::consts::TAU;
use std::fmt::Write;

use crate::curves::PlaneCurve;
use crate::geometry::GeodesicPath;
use crate::knot::Crossing;
use crate::lift::ProjCurve;
use crate::vec2::Vec2;

const SIZE: f64 = 600.0;

/// A square drawing whose view box is `[−extent, extent]²`, `y` up.
pub struct Canvas {
    extent: f64,
    body: String,
}

impl Canvas {
    pub fn new(extent: f64) -> Self {
        Self {
            extent,
            body: String::new(),
        }
    }

    fn map(&self, p: Vec2) -> (f64, f64) {
        let k = SIZE / (2.0 * self.extent);
        ((p.x + self.extent) * k, (self.extent - p.y) * k)
    }

    pub fn circle(&mut self, center: Vec2, radius: f64, style: &str) {
        let (x, y) = self.map(center);
        let r = radius * SIZE / (2.0 * self.extent);
        let _ = writeln!(self.body, r#"<circle cx="{x:.6}" cy="{y:.6}" r="{r:.6}" {style}/>"#);
    }

    pub fn polyline(&mut self, points: &[Vec2], closed: bool, style: &str) {
        if points.len() < 2 {
            return;
        }
        let mut d = String::new();
        for (i, &p) in points.iter().enumerate() {
            let (x, y) = self.map(p);
            let _ = write!(d, "{}{x:.6},{y:.6} ", if i == 0 { 'M' } else { 'L' });
        }
        if closed {
            d.push('Z');
        }
        let _ = writeln!(self.body, r#"<path d="{}" fill="none" {style}/>"#, d.trim_end());
    }

    pub fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n\
             <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}</svg>\n",
            self.body
        )
    }
}

/// Traced rays inside the disk of radius `radius`; trapped rays in red.
pub fn rays_svg(radius: f64, paths: &[GeodesicPath]) -> String {
    let mut c = Canvas::new(1.1 * radius);
    c.circle(Vec2::ZERO, radius, r##"fill="#f4f4f4" stroke="black" stroke-width="1""##);
    for p in paths {
        let style = if p.exit.vector().is_some() {
            r##"stroke="#1f5fa8" stroke-width="0.8""##
        } else {
            r##"stroke="#c0392b" stroke-width="0.8""##
        };
        c.polyline(&p.positions().collect::<Vec<_>>(), false, style);
    }
    c.finish()
}

/// A closed plane curve with its crossings marked.
pub fn curve_svg(curve: &dyn PlaneCurve, crossings: &[Crossing]) -> String {
    let pts: Vec<Vec2> = (0..2048).map(|i| curve.point(i as f64 / 2048.0)).collect();
    let extent = 1.1 * pts.iter().fold(1e-9_f64, |m, p| m.max(p.x.abs()).max(p.y.abs()));
    let mut c = Canvas::new(extent);
    c.polyline(&pts, curve.closed(), r#"stroke="black" stroke-width="1.2""#);
    for x in crossings {
        let color = if x.sign > 0 { "#1f8a3a" } else { "#c0392b" };
        c.circle(x.point, extent * 0.02, &format!(r#"fill="{color}""#));
    }
    c.finish()
}

/// The knot drawn in the annulus `R0 + x` at angle `fiber`: the `PΩN` fiber
/// angle `2φ` when `projective`, else the unit-vector angle `φ`.
pub fn annulus_svg(knot: &ProjCurve, projective: bool) -> String {
    const R0: f64 = 2.0;
    let xmax = knot.points.iter().fold(1e-9_f64, |m, p| m.max(p.base.x.abs()));
    let scale = 1.0 / xmax;
    let pts: Vec<Vec2> = knot
        .points
        .iter()
        .map(|p| {
            let angle = if projective { 2.0 * p.lift } else { p.lift };
            Vec2::from_angle(angle.rem_euclid(TAU)) * (R0 + scale * p.base.x)
        })
        .collect();
    let mut c = Canvas::new(R0 + 1.3);
    c.circle(Vec2::ZERO, R0 + 1.0, r##"fill="none" stroke="#999" stroke-width="0.6""##);
    c.circle(Vec2::ZERO, R0 - 1.0, r##"fill="none" stroke="#999" stroke-width="0.6""##);
    c.polyline(&pts, knot.closed, r##"stroke="#1f5fa8" stroke-width="1.2""##);
    c.finish()
}
