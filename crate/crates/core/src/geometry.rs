//! Closed planar curves, spheres, signed curvatures and parallel offsets.
//!
//! Orientation: curves run counter-clockwise, `n` is the outward unit normal
//! and principal curvatures are the eigenvalues of `L = −dn`, so a circle of
//! radius `R` has `κ = −1/R` and the offset at signed distance `t` stretches
//! lengths by `f = 1 − tκ`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const RANGE_SAFETY: f64 = 0.9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CurveKind {
    Circle {
        #[serde(rename = "R")]
        r: f64,
    },
    Ellipse {
        a: f64,
        b: f64,
    },
    /// Star-shaped curve `r(θ)(cos θ, sin θ)` with
    /// `r(θ) = Σ_{k≥0} cos[k]·cos(kθ) + Σ_{k≥1} sin[k−1]·sin(kθ)`.
    Fourier {
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
    },
}

/// Position with first and second parameter derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub x: [f64; 2],
    pub d1: [f64; 2],
    pub d2: [f64; 2],
}

/// Geometry of a point on a (possibly offset) curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub x: [f64; 2],
    /// Derivative with respect to the parameter.
    pub d1: [f64; 2],
    pub speed: f64,
    /// Outward unit normal.
    pub normal: [f64; 2],
    /// Signed curvature, `−1/R` on a circle.
    pub kappa: f64,
}

/// A curve given analytically over the parameter interval `[0, 2π)`.
pub trait ParamCurve {
    fn at(&self, theta: f64) -> CurvePoint;
}

impl CurveKind {
    pub fn validate(&self) -> Result<()> {
        match self {
            CurveKind::Circle { r } if !(r.is_finite() && *r > 0.0) => {
                Err(Error::Geometry(format!("circle radius must be positive, got {r}")))
            }
            CurveKind::Ellipse { a, b } if !(a.is_finite() && b.is_finite() && *a > 0.0 && *b > 0.0) => {
                Err(Error::Geometry(format!("ellipse semi-axes must be positive, got ({a}, {b})")))
            }
            CurveKind::Fourier { cos, sin } => {
                if cos.is_empty() {
                    return Err(Error::Geometry("fourier curve needs at least the constant term".into()));
                }
                if cos.iter().chain(sin).any(|c| !c.is_finite()) {
                    return Err(Error::Geometry("non-finite fourier coefficient".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn jet(&self, theta: f64) -> Jet {
        let (s, c) = theta.sin_cos();
        match self {
            CurveKind::Circle { r } => Jet {
                x: [r * c, r * s],
                d1: [-r * s, r * c],
                d2: [-r * c, -r * s],
            },
            CurveKind::Ellipse { a, b } => Jet {
                x: [a * c, b * s],
                d1: [-a * s, b * c],
                d2: [-a * c, -b * s],
            },
            CurveKind::Fourier { cos, sin } => {
                let (mut r, mut r1, mut r2) = (0.0, 0.0, 0.0);
                for (k, a) in cos.iter().enumerate() {
                    let kf = k as f64;
                    let (sk, ck) = (kf * theta).sin_cos();
                    r += a * ck;
                    r1 -= a * kf * sk;
                    r2 -= a * kf * kf * ck;
                }
                for (j, b) in sin.iter().enumerate() {
                    let kf = (j + 1) as f64;
                    let (sk, ck) = (kf * theta).sin_cos();
                    r += b * sk;
                    r1 += b * kf * ck;
                    r2 -= b * kf * kf * sk;
                }
                Jet {
                    x: [r * c, r * s],
                    d1: [r1 * c - r * s, r1 * s + r * c],
                    d2: [r2 * c - 2.0 * r1 * s - r * c, r2 * s + 2.0 * r1 * c - r * s],
                }
            }
        }
    }

    fn radius_at(&self, theta: f64) -> Option<f64> {
        match self {
            CurveKind::Fourier { .. } => {
                let j = self.jet(theta);
                Some(j.x[0] * theta.cos() + j.x[1] * theta.sin())
            }
            _ => None,
        }
    }
}

fn point_from_jet(j: Jet) -> CurvePoint {
    let speed = j.d1[0].hypot(j.d1[1]);
    let cross = j.d1[0] * j.d2[1] - j.d1[1] * j.d2[0];
    CurvePoint {
        x: j.x,
        d1: j.d1,
        speed,
        normal: [j.d1[1] / speed, -j.d1[0] / speed],
        kappa: -cross / speed.powi(3),
    }
}

impl ParamCurve for CurveKind {
    fn at(&self, theta: f64) -> CurvePoint {
        point_from_jet(self.jet(theta))
    }
}

pub fn uniform_nodes(n: usize) -> Vec<f64> {
    (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect()
}

/// An analytic closed curve together with its uniform parameter grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedCurve {
    kind: CurveKind,
    nodes: Vec<f64>,
    points: Vec<CurvePoint>,
}

impl ClosedCurve {
    pub fn new(kind: CurveKind, samples: usize) -> Result<Self> {
        kind.validate()?;
        if samples < 8 {
            return Err(Error::Geometry(format!("need at least 8 samples, got {samples}")));
        }
        let nodes = uniform_nodes(samples);
        let points: Vec<CurvePoint> = nodes.iter().map(|&t| kind.at(t)).collect();
        for (i, p) in points.iter().enumerate() {
            if !(p.speed >= 1e-12) {
                return Err(Error::Geometry(format!("degenerate tangent at node {i}")));
            }
        }
        // Star-shaped descriptors must keep r > 0, checked on a refined grid.
        if let CurveKind::Fourier { .. } = kind {
            for t in uniform_nodes(4 * samples) {
                if kind.radius_at(t).unwrap() <= 0.0 {
                    return Err(Error::Geometry("fourier radius must stay positive".into()));
                }
            }
        }
        let xs: Vec<[f64; 2]> = points.iter().map(|p| p.x).collect();
        if !polygon_is_simple(&xs) {
            return Err(Error::Geometry("curve self-intersects on the sample grid".into()));
        }
        Ok(Self { kind, nodes, points })
    }

    pub fn circle(r: f64, samples: usize) -> Result<Self> {
        Self::new(CurveKind::Circle { r }, samples)
    }

    pub fn ellipse(a: f64, b: f64, samples: usize) -> Result<Self> {
        Self::new(CurveKind::Ellipse { a, b }, samples)
    }

    pub fn kind(&self) -> &CurveKind {
        &self.kind
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &CurvePoint {
        &self.points[i]
    }

    /// Same curve on a different grid.
    pub fn resampled(&self, samples: usize) -> Result<Self> {
        Self::new(self.kind.clone(), samples)
    }
}

impl ParamCurve for ClosedCurve {
    fn at(&self, theta: f64) -> CurvePoint {
        self.kind.at(theta)
    }
}

/// The parallel curve `q + t·n(q)`, evaluated analytically.
#[derive(Debug, Clone, PartialEq)]
pub struct OffsetCurve {
    pub base: CurveKind,
    pub t: f64,
}

impl ParamCurve for OffsetCurve {
    fn at(&self, theta: f64) -> CurvePoint {
        let p = self.base.at(theta);
        let f = 1.0 - self.t * p.kappa;
        CurvePoint {
            x: [p.x[0] + self.t * p.normal[0], p.x[1] + self.t * p.normal[1]],
            d1: [p.d1[0] * f, p.d1[1] * f],
            speed: p.speed * f,
            normal: p.normal,
            kappa: p.kappa / f,
        }
    }
}

/// Sampled parallel offset of a closed curve.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledOffset {
    pub t: f64,
    pub nodes: Vec<f64>,
    pub points: Vec<[f64; 2]>,
    pub curve: OffsetCurve,
}

impl SampledOffset {
    /// Arclength from spectral differentiation of the sampled points.
    pub fn length(&self) -> f64 {
        spectral_length(&self.points)
    }
}

/// Principal curvatures per node, their mean `K₁`, and the dimension `d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureField {
    pub d: usize,
    /// `principal[node]` holds the `d − 1` principal curvatures.
    pub principal: Vec<Vec<f64>>,
    pub k1: Vec<f64>,
}

impl CurvatureField {
    /// Sphere of radius `r` in `R^d` sampled at `nodes` points.
    pub fn sphere(r: f64, d: usize, nodes: usize) -> Result<Self> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::Geometry(format!("sphere radius must be positive, got {r}")));
        }
        if !(2..=3).contains(&d) {
            return Err(Error::Geometry(format!("spheres supported for d ∈ {{2, 3}}, got {d}")));
        }
        Ok(Self {
            d,
            principal: vec![vec![-1.0 / r; d - 1]; nodes],
            k1: vec![-1.0 / r; nodes],
        })
    }

    pub fn kappa(&self) -> Vec<f64> {
        self.principal.iter().map(|p| p[0]).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.principal
            .iter()
            .flatten()
            .fold(0.0f64, |m, k| m.max(k.abs()))
    }
}

pub fn curvature(curve: &ClosedCurve) -> CurvatureField {
    let principal: Vec<Vec<f64>> = curve.points.iter().map(|p| vec![p.kappa]).collect();
    let k1 = curve.points.iter().map(|p| p.kappa).collect();
    CurvatureField { d: 2, principal, k1 }
}

/// `f(q, t) = ∏(1 − tκ_μ(q))`.
pub fn jacobian_f(field: &CurvatureField, node: usize, t: f64) -> Result<f64> {
    let kappas = field
        .principal
        .get(node)
        .ok_or_else(|| Error::Input(format!("node {node} out of range")))?;
    let kmax = kappas.iter().fold(0.0f64, |m, k| m.max(k.abs()));
    if !(t.abs() * kmax < 1.0) {
        return Err(Error::Geometry(format!("t = {t} violates t·max|κ| < 1 at node {node}")));
    }
    Ok(kappas.iter().map(|k| 1.0 - t * k).product())
}

pub fn max_parallel_range(curve: &ClosedCurve) -> f64 {
    let kmax = uniform_nodes(4 * curve.len())
        .into_iter()
        .map(|t| curve.kind.at(t).kappa.abs())
        .chain(curve.points.iter().map(|p| p.kappa.abs()))
        .fold(0.0f64, f64::max);
    if kmax == 0.0 {
        f64::INFINITY
    } else {
        RANGE_SAFETY / kmax
    }
}

pub fn parallel_offset(curve: &ClosedCurve, t: f64) -> Result<SampledOffset> {
    let range = max_parallel_range(curve);
    if !(t.abs() < range) {
        return Err(Error::Geometry(format!(
            "offset {t} outside the admissible range ±{range}"
        )));
    }
    let offset = OffsetCurve {
        base: curve.kind.clone(),
        t,
    };
    let points: Vec<[f64; 2]> = curve
        .points
        .iter()
        .map(|p| [p.x[0] + t * p.normal[0], p.x[1] + t * p.normal[1]])
        .collect();
    if !polygon_is_simple(&points) {
        return Err(Error::Geometry(format!("offset at t = {t} self-intersects")));
    }
    Ok(SampledOffset {
        t,
        nodes: curve.nodes.clone(),
        points,
        curve: offset,
    })
}

/// Periodic trapezoid rule for `∫_Σ v dΣ`.
pub fn surface_integral(curve: &ClosedCurve, samples: &[Complex64]) -> Result<Complex64> {
    if samples.len() != curve.len() {
        return Err(Error::Input(format!(
            "{} samples for {} nodes",
            samples.len(),
            curve.len()
        )));
    }
    let h = 2.0 * PI / curve.len() as f64;
    Ok(samples
        .iter()
        .zip(&curve.points)
        .map(|(v, p)| v * p.speed)
        .sum::<Complex64>()
        * h)
}

/// Length of a closed curve sampled at uniform parameter values, from the
/// trigonometric interpolant's derivative.
pub fn spectral_length(points: &[[f64; 2]]) -> f64 {
    let n = points.len();
    let mut buf: Vec<Complex64> = points.iter().map(|p| Complex64::new(p[0], p[1])).collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    for (k, v) in buf.iter_mut().enumerate() {
        let freq = if 2 * k < n {
            k as f64
        } else if 2 * k == n {
            0.0
        } else {
            k as f64 - n as f64
        };
        *v *= Complex64::new(0.0, freq) / n as f64;
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    buf.iter().map(|d| d.norm()).sum::<f64>() * 2.0 * PI / n as f64
}

fn segments_cross(p1: [f64; 2], p2: [f64; 2], q1: [f64; 2], q2: [f64; 2]) -> bool {
    let orient = |a: [f64; 2], b: [f64; 2], c: [f64; 2]| (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    (d1 > 0.0) != (d2 > 0.0) && (d3 > 0.0) != (d4 > 0.0) && d1 != 0.0 && d2 != 0.0 && d3 != 0.0 && d4 != 0.0
}

/// No two non-adjacent edges of the closed polygon intersect.
pub fn polygon_is_simple(points: &[[f64; 2]]) -> bool {
    let n = points.len();
    for i in 0..n {
        let (a, b) = (points[i], points[(i + 1) % n]);
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if segments_cross(a, b, points[j], points[(j + 1) % n]) {
                return false;
            }
        }
    }
    true
}
