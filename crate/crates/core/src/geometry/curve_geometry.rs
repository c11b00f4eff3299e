use crate::geometry::curve::{ClosedCurve, DEGENERACY_REL};
use crate::geometry::diff::{periodic_derivatives_vec, periodic_integral, DiffScheme};
use crate::{Error, Result, Vec2};

/// Threshold on `|v|` below which the angle psi is undefined.
pub const ORIGIN_EPS: f64 = 1e-12;

/// Per-node derived data of a [`ClosedCurve`].
///
/// `normal` is the outer normal `(v2', -v1') / |v'|` of a counterclockwise curve and
/// `curvature` is `(-v1'' v2' + v1' v2'') / |v'|^3`, positive on convex arcs.
/// `cos_psi = <v, n> / |v|`; `psi` is stored unsigned in `[0, pi]`.
#[derive(Clone, Debug)]
pub struct CurveGeometry {
    scheme: DiffScheme,
    pos: Vec<Vec2>,
    d1: Vec<Vec2>,
    d2: Vec<Vec2>,
    speed: Vec<f64>,
    tangent: Vec<Vec2>,
    normal: Vec<Vec2>,
    curvature: Vec<f64>,
    radius: Vec<f64>,
    cos_psi: Vec<f64>,
    psi: Vec<f64>,
    origin_node: Option<usize>,
}

impl CurveGeometry {
    pub fn new(curve: &ClosedCurve, scheme: DiffScheme) -> Result<Self> {
        Self::from_nodes(curve.nodes(), scheme)
    }

    /// Same as [`CurveGeometry::new`] for raw node data (e.g. Runge-Kutta stages).
    pub fn from_nodes(nodes: &[Vec2], scheme: DiffScheme) -> Result<Self> {
        let (d1, d2) = periodic_derivatives_vec(nodes, scheme);
        let speed: Vec<f64> = d1.iter().map(|d| d.norm()).collect();
        let length = periodic_integral(speed.iter().copied());
        let h = std::f64::consts::TAU / nodes.len() as f64;
        let threshold = DEGENERACY_REL * length;
        if let Some((node, s)) = speed.iter().enumerate().find(|&(_, &s)| !(s * h > threshold)) {
            return Err(Error::DegenerateCurve {
                node,
                spacing: s * h,
                threshold,
            });
        }

        let tangent: Vec<Vec2> = d1.iter().zip(&speed).map(|(d, s)| *d / *s).collect();
        let normal: Vec<Vec2> = tangent.iter().map(|t| t.rot_cw()).collect();
        let curvature = d1
            .iter()
            .zip(&d2)
            .zip(&speed)
            .map(|((a, b), s)| a.cross(*b) / (s * s * s))
            .collect();
        let radius: Vec<f64> = nodes.iter().map(|v| v.norm()).collect();

        let origin_node = radius.iter().position(|&r| !(r >= ORIGIN_EPS));
        let cos_psi: Vec<f64> = nodes
            .iter()
            .zip(&normal)
            .zip(&radius)
            .map(|((v, n), r)| {
                if *r >= ORIGIN_EPS {
                    (v.dot(*n) / r).clamp(-1.0, 1.0)
                } else {
                    f64::NAN
                }
            })
            .collect();
        let psi = cos_psi.iter().map(|c| c.acos()).collect();

        Ok(Self {
            scheme,
            pos: nodes.to_vec(),
            d1,
            d2,
            speed,
            tangent,
            normal,
            curvature,
            radius,
            cos_psi,
            psi,
            origin_node,
        })
    }

    pub fn len(&self) -> usize {
        self.pos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pos.is_empty()
    }

    pub fn scheme(&self) -> DiffScheme {
        self.scheme
    }

    pub fn positions(&self) -> &[Vec2] {
        &self.pos
    }

    /// First parameter derivative `v'`.
    pub fn d1(&self) -> &[Vec2] {
        &self.d1
    }

    /// Second parameter derivative `v''`.
    pub fn d2(&self) -> &[Vec2] {
        &self.d2
    }

    pub fn speed(&self) -> &[f64] {
        &self.speed
    }

    pub fn tangent(&self) -> &[Vec2] {
        &self.tangent
    }

    pub fn normal(&self) -> &[Vec2] {
        &self.normal
    }

    pub fn curvature(&self) -> &[f64] {
        &self.curvature
    }

    pub fn radius(&self) -> &[f64] {
        &self.radius
    }

    fn require_angle(&self) -> Result<()> {
        match self.origin_node {
            Some(node) => Err(Error::OriginCrossing {
                node,
                radius: self.radius[node],
            }),
            None => Ok(()),
        }
    }

    pub fn cos_psi(&self) -> Result<&[f64]> {
        self.require_angle()?;
        Ok(&self.cos_psi)
    }

    pub fn psi(&self) -> Result<&[f64]> {
        self.require_angle()?;
        Ok(&self.psi)
    }

    /// Arclength weights `ds_j = |v'_j| 2 pi / N`.
    pub fn arclength_weights(&self) -> Vec<f64> {
        let h = std::f64::consts::TAU / self.len() as f64;
        self.speed.iter().map(|s| s * h).collect()
    }

    /// `(node, cos psi)` of the node with the smallest `cos psi`.
    pub fn min_cos_psi(&self) -> Result<(usize, f64)> {
        let c = self.cos_psi()?;
        Ok(c.iter()
            .copied()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (j, v)| if v < acc.1 { (j, v) } else { acc }))
    }

    /// True iff `cos psi >= margin` at every node.
    ///
    /// A curve through the origin is never star-shaped.
    pub fn is_star_shaped(&self, margin: f64) -> bool {
        self.cos_psi().map(|c| c.iter().all(|&v| v >= margin)).unwrap_or(false)
    }

    /// Errors with the worst node when the curve is not star-shaped with the margin.
    pub fn require_star_shaped(&self, margin: f64) -> Result<&[f64]> {
        let (node, cos_psi) = self.min_cos_psi()?;
        if cos_psi >= margin {
            Ok(&self.cos_psi)
        } else {
            Err(Error::NotStarShaped { node, cos_psi, margin })
        }
    }
}

/// Geometry of a curve; see [`CurveGeometry`].
pub fn derivatives(curve: &ClosedCurve, scheme: DiffScheme) -> Result<CurveGeometry> {
    CurveGeometry::new(curve, scheme)
}

/// True iff the curve is star-shaped about the origin with `cos psi >= margin`.
pub fn is_star_shaped(geom: &CurveGeometry, margin: f64) -> bool {
    geom.is_star_shaped(margin)
}
