use std::f64::consts::TAU;

use crate::geometry::diff::{periodic_derivatives_vec, periodic_integral, DiffScheme};
use crate::{Error, Result, Vec2};

/// Minimum number of nodes of a [`ClosedCurve`].
pub const MIN_NODES: usize = 16;

/// Relative threshold (against total length) below which spacings count as degenerate.
pub const DEGENERACY_REL: f64 = 1e-12;

/// A closed plane curve sampled at `x_j = 2 pi j / N`, counterclockwise.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedCurve {
    nodes: Vec<Vec2>,
}

impl ClosedCurve {
    /// Validates the samples and normalizes orientation to counterclockwise.
    ///
    /// A clockwise input is reversed as `v_j -> v_{(N - j) mod N}`, so node 0 is kept.
    pub fn new(mut nodes: Vec<Vec2>) -> Result<Self> {
        if nodes.len() < MIN_NODES {
            return Err(Error::TooFewNodes {
                got: nodes.len(),
                min: MIN_NODES,
            });
        }
        if let Some((j, p)) = nodes
            .iter()
            .enumerate()
            .find(|(_, p)| !(p.x.is_finite() && p.y.is_finite()))
        {
            return Err(Error::InvalidParameter(format!(
                "node {j} is not finite: ({}, {})",
                p.x, p.y
            )));
        }
        check_spacing(&nodes)?;
        if polygon_signed_area(&nodes) < 0.0 {
            nodes[1..].reverse();
        }
        Ok(Self { nodes })
    }

    pub fn nodes(&self) -> &[Vec2] {
        &self.nodes
    }

    pub fn into_nodes(self) -> Vec<Vec2> {
        self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Parameter spacing `2 pi / N`.
    pub fn param_step(&self) -> f64 {
        TAU / self.nodes.len() as f64
    }

    pub fn param(&self, j: usize) -> f64 {
        self.param_step() * j as f64
    }

    /// Smallest chord between consecutive nodes.
    pub fn min_chord(&self) -> f64 {
        chords(&self.nodes).fold(f64::INFINITY, f64::min)
    }

    /// Shortest chord `|v_{j+1} - v_j|` and its start node `j`.
    pub fn min_chord_node(&self) -> (usize, f64) {
        chords(&self.nodes).enumerate().fold(
            (0, f64::INFINITY),
            |best, (j, c)| if c < best.1 { (j, c) } else { best },
        )
    }

    /// Enclosed (signed) area `1/2 int (v1 v2' - v2 v1') dx`, spectral derivative + trapezoid.
    pub fn enclosed_area(&self) -> f64 {
        let (d1, _) = periodic_derivatives_vec(&self.nodes, DiffScheme::Spectral);
        0.5 * periodic_integral(self.nodes.iter().zip(&d1).map(|(v, dv)| v.cross(*dv)))
    }

    /// Total length `int |v'| dx`, spectral derivative + trapezoid.
    pub fn total_length(&self) -> f64 {
        let (d1, _) = periodic_derivatives_vec(&self.nodes, DiffScheme::Spectral);
        periodic_integral(d1.iter().map(|d| d.norm()))
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::InvalidParameter(format!("scale factor {factor}")));
        }
        Ok(Self {
            nodes: self.nodes.iter().map(|&p| p * factor).collect(),
        })
    }

    /// Rigid rotation about the origin.
    pub fn rotated(&self, angle: f64) -> Self {
        Self {
            nodes: self.nodes.iter().map(|p| p.rotate(angle)).collect(),
        }
    }

    pub fn translated(&self, by: Vec2) -> Self {
        Self {
            nodes: self.nodes.iter().map(|&p| p + by).collect(),
        }
    }

    /// Circle of radius `r` about `center`, counterclockwise from angle 0.
    pub fn circle(r: f64, center: Vec2, n: usize) -> Result<Self> {
        positive("r", r)?;
        Self::sampled(n, |x| center + Vec2::from_polar(r, x))
    }

    /// Ellipse `(a cos x, b sin x)`.
    pub fn ellipse(a: f64, b: f64, n: usize) -> Result<Self> {
        positive("a", a)?;
        positive("b", b)?;
        Self::sampled(n, |x| Vec2::new(a * x.cos(), b * x.sin()))
    }

    /// Polar curve `radius(theta) (cos theta, sin theta)` with `theta = x`.
    pub fn polar(radius: impl Fn(f64) -> f64, n: usize) -> Result<Self> {
        Self::sampled(n, |x| Vec2::from_polar(radius(x), x))
    }

    /// Samples an arbitrary periodic map at the uniform parameter grid.
    pub fn sampled(n: usize, map: impl Fn(f64) -> Vec2) -> Result<Self> {
        let h = TAU / n as f64;
        Self::new((0..n).map(|j| map(h * j as f64)).collect())
    }
}

fn positive(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive, got {value}")))
    }
}

fn chords(nodes: &[Vec2]) -> impl Iterator<Item = f64> + '_ {
    let n = nodes.len();
    (0..n).map(move |j| (nodes[(j + 1) % n] - nodes[j]).norm())
}

/// Rejects node sets where two consecutive nodes (nearly) coincide.
pub(crate) fn check_spacing(nodes: &[Vec2]) -> Result<()> {
    let perimeter: f64 = chords(nodes).sum();
    let threshold = DEGENERACY_REL * perimeter;
    match chords(nodes).enumerate().find(|&(_, c)| !(c > threshold)) {
        Some((node, spacing)) => Err(Error::DegenerateCurve {
            node,
            spacing,
            threshold,
        }),
        None => Ok(()),
    }
}

/// Shoelace area of the polygon through the nodes.
pub fn polygon_signed_area(nodes: &[Vec2]) -> f64 {
    let n = nodes.len();
    0.5 * (0..n).map(|j| nodes[j].cross(nodes[(j + 1) % n])).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, SQRT_2};

    #[test]
    fn rejects_short_and_degenerate_input() {
        let few: Vec<Vec2> = (0..8).map(|j| Vec2::from_polar(1.0, j as f64)).collect();
        assert!(matches!(ClosedCurve::new(few), Err(Error::TooFewNodes { .. })));

        let mut nodes = ClosedCurve::circle(1.0, Vec2::ZERO, 32).unwrap().into_nodes();
        nodes[5] = nodes[4];
        assert!(matches!(
            ClosedCurve::new(nodes),
            Err(Error::DegenerateCurve { node: 4, .. })
        ));
    }

    #[test]
    fn clockwise_input_is_reversed_keeping_node_zero() {
        let cw: Vec<Vec2> = (0..32).map(|j| Vec2::from_polar(1.0, -TAU * j as f64 / 32.0)).collect();
        let c = ClosedCurve::new(cw.clone()).unwrap();
        assert_eq!(c.nodes()[0], cw[0]);
        assert_eq!(c.nodes()[1], cw[31]);
        assert!(c.enclosed_area() > 0.0);
    }

    #[test]
    fn circle_area_and_length() {
        let c = ClosedCurve::circle(1.0, Vec2::ZERO, 256).unwrap();
        assert!((c.enclosed_area() - PI).abs() < 1e-8);
        assert!((c.total_length() - TAU).abs() < 1e-8);
        let c = ClosedCurve::circle(SQRT_2, Vec2::ZERO, 64).unwrap();
        assert!(c.nodes().iter().all(|v| (v.norm() - SQRT_2).abs() < 1e-14));
    }

    #[test]
    fn ellipse_area() {
        let e = ClosedCurve::ellipse(2.0, 1.0, 128).unwrap();
        assert!((e.enclosed_area() - 2.0 * PI).abs() < 1e-6);
    }

    #[test]
    fn rounded_square_area() {
        // z = e^{ix} + 0.1 e^{-3ix}; area = pi * sum_k k |c_k|^2 = pi (1 - 3 * 0.01).
        let c = ClosedCurve::sampled(256, |x| {
            Vec2::new(x.cos() + 0.1 * (3.0 * x).cos(), x.sin() - 0.1 * (3.0 * x).sin())
        })
        .unwrap();
        assert!((c.enclosed_area() - 0.97 * PI).abs() < 1e-4);
    }
}
