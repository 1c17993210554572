//! Boundary curves, multiply connected domains, trapezoidal quadrature and
//! point location.
//!
//! Every curve is a truncated Fourier series `γ(t) = Σ a_k e^{ikt}`, so both
//! `γ` and `γ'` are exact. The domain keeps one uniform grid per curve; the
//! trapezoidal rule on those grids converges geometrically for analytic
//! periodic integrands, which is what every contour integral here relies on.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const DEFAULT_NODES: usize = 256;

/// Multiple of the node spacing used to separate curves and to keep a curve
/// from folding back on itself.
const SEPARATION_FACTOR: f64 = 10.0;

/// Probes closer than this many node spacings to the boundary see a nearly
/// singular Cauchy kernel and lose trapezoidal accuracy.
const CLEARANCE_SPACINGS: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    CounterClockwise,
    Clockwise,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::CounterClockwise => 1.0,
            Orientation::Clockwise => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Orientation::CounterClockwise => Orientation::Clockwise,
            Orientation::Clockwise => Orientation::CounterClockwise,
        }
    }
}

/// A closed curve `γ(t) = Σ_k a_k e^{ikt}` traversed in `orientation`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve {
    coeffs: Vec<(i32, Complex64)>,
    orientation: Orientation,
    node_count: usize,
}

impl BoundaryCurve {
    /// Builds a curve traversed in the direction of increasing `t`.
    pub fn new(coeffs: Vec<(i32, Complex64)>, node_count: usize) -> Result<Self> {
        if node_count < 8 || !node_count.is_power_of_two() {
            return Err(Error::BadNodeCount(node_count));
        }
        if coeffs.iter().any(|(_, a)| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite Fourier coefficient".into()));
        }
        let mut merged: Vec<(i32, Complex64)> = Vec::with_capacity(coeffs.len());
        for (k, a) in coeffs {
            match merged.iter_mut().find(|(j, _)| *j == k) {
                Some((_, b)) => *b += a,
                None => merged.push((k, a)),
            }
        }
        merged.sort_by_key(|(k, _)| *k);
        let mut curve = BoundaryCurve {
            coeffs: merged,
            orientation: Orientation::CounterClockwise,
            node_count,
        };
        curve.orientation = curve.parametric_orientation();
        Ok(curve)
    }

    pub fn circle(center: Complex64, radius: f64, node_count: usize) -> Result<Self> {
        Self::new(
            vec![(0, center), (1, Complex64::new(radius, 0.0))],
            node_count,
        )
    }

    pub fn coeffs(&self) -> &[(i32, Complex64)] {
        &self.coeffs
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    pub fn reversed(self) -> Self {
        let o = self.orientation.flipped();
        self.with_orientation(o)
    }

    pub fn with_node_count(mut self, node_count: usize) -> Result<Self> {
        if node_count < 8 || !node_count.is_power_of_two() {
            return Err(Error::BadNodeCount(node_count));
        }
        self.node_count = node_count;
        Ok(self)
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|&(k, a)| a * Complex64::cis(k as f64 * t))
            .sum()
    }

    pub fn derivative(&self, t: f64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|&(k, a)| a * Complex64::new(0.0, k as f64) * Complex64::cis(k as f64 * t))
            .sum()
    }

    /// Signed area enclosed when `t` increases: `π Σ k |a_k|²`.
    pub fn signed_area(&self) -> f64 {
        PI * self
            .coeffs
            .iter()
            .map(|&(k, a)| k as f64 * a.norm_sqr())
            .sum::<f64>()
    }

    /// Direction the parametrization runs in as `t` increases.
    pub fn parametric_orientation(&self) -> Orientation {
        if self.signed_area() >= 0.0 {
            Orientation::CounterClockwise
        } else {
            Orientation::Clockwise
        }
    }

    /// `+1` when traversal follows increasing `t`, `-1` otherwise.
    pub fn traversal_sign(&self) -> f64 {
        self.orientation.sign() * self.parametric_orientation().sign()
    }

    fn derivative_scale(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|&(k, a)| (k as f64).abs() * a.norm())
            .sum()
    }
}

/// Quadrature grid of one curve at `t_i = 2πi/M`.
#[derive(Debug, Clone)]
pub struct CurveGrid {
    pub params: Vec<f64>,
    pub points: Vec<Complex64>,
    pub derivs: Vec<Complex64>,
    /// `dζ` weights `±γ'(t_i)·2π/M`, signed by traversal direction.
    pub weights: Vec<Complex64>,
    pub sign: f64,
}

impl CurveGrid {
    fn new(curve: &BoundaryCurve) -> Self {
        let m = curve.node_count;
        let h = 2.0 * PI / m as f64;
        let sign = curve.traversal_sign();
        let params: Vec<f64> = (0..m).map(|i| h * i as f64).collect();
        let points = params.iter().map(|&t| curve.eval(t)).collect();
        let derivs: Vec<Complex64> = params.iter().map(|&t| curve.derivative(t)).collect();
        let weights = derivs.iter().map(|d| d * (sign * h)).collect();
        CurveGrid {
            params,
            points,
            derivs,
            weights,
            sign,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Unit normal pointing to the left of the traversal direction, i.e.
    /// into the domain when the curve carries the standard orientation.
    pub fn inward_normal(&self, i: usize) -> Complex64 {
        let d = self.derivs[i] * self.sign;
        Complex64::i() * d / d.norm()
    }

    /// Winding number of the sampled polygon around `z`, in traversal
    /// direction.
    pub fn polygon_winding(&self, z: Complex64) -> i32 {
        polygon_winding(&self.points, z) * self.sign as i32
    }

    pub fn distance_to(&self, z: Complex64) -> f64 {
        let n = self.points.len();
        (0..n)
            .map(|i| segment_distance(self.points[i], self.points[(i + 1) % n], z))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Winding number of a closed polygon (vertex order) around `z`.
pub fn polygon_winding(vertices: &[Complex64], z: Complex64) -> i32 {
    let n = vertices.len();
    let mut winding = 0;
    for i in 0..n {
        let a = vertices[i] - z;
        let b = vertices[(i + 1) % n] - z;
        let cross = a.re * b.im - a.im * b.re;
        if a.im <= 0.0 {
            if b.im > 0.0 && cross > 0.0 {
                winding += 1;
            }
        } else if b.im <= 0.0 && cross < 0.0 {
            winding -= 1;
        }
    }
    winding
}

fn segment_distance(a: Complex64, b: Complex64, z: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = ((z - a) * ab.conj()).re / len2;
    (a + ab * t.clamp(0.0, 1.0) - z).norm()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionTag {
    /// In the domain D.
    Interior,
    /// In the bounded complementary component enclosed by curve `j`.
    Hole(usize),
    /// In the unbounded complementary component.
    Exterior,
    NearBoundary,
}

/// A bounded domain whose boundary is a finite union of disjoint curves,
/// each oriented so that the domain lies to its left.
#[derive(Debug, Clone)]
pub struct DomainBoundary {
    curves: Vec<BoundaryCurve>,
    grids: Vec<CurveGrid>,
    outer: usize,
    reoriented: Vec<bool>,
    delta_band: f64,
    diameter: f64,
    center: Complex64,
    radius: f64,
    min_separation: f64,
}

/// Validates the curves, finds the outer one and normalizes orientation.
pub fn build_domain(curves: Vec<BoundaryCurve>) -> Result<DomainBoundary> {
    DomainBoundary::new(curves)
}

impl DomainBoundary {
    pub fn new(curves: Vec<BoundaryCurve>) -> Result<Self> {
        if curves.is_empty() {
            return Err(Error::NoCurves);
        }
        let raw: Vec<CurveGrid> = curves.iter().map(CurveGrid::new).collect();
        let spacing: Vec<f64> = curves
            .iter()
            .zip(&raw)
            .map(|(c, g)| max_speed(g) * 2.0 * PI / c.node_count as f64)
            .collect();

        for (ci, (curve, grid)) in curves.iter().zip(&raw).enumerate() {
            let floor = 1e-12 * curve.derivative_scale().max(f64::MIN_POSITIVE);
            if let Some(node) = grid.derivs.iter().position(|d| d.norm() <= floor) {
                return Err(Error::DegenerateCurve { curve: ci, node });
            }
            check_simple(ci, grid, SEPARATION_FACTOR * spacing[ci])?;
        }

        let mut min_separation = f64::INFINITY;
        for i in 0..curves.len() {
            for j in i + 1..curves.len() {
                let threshold = SEPARATION_FACTOR * spacing[i].max(spacing[j]);
                if let Some(d) = min_distance_within(&raw[i].points, &raw[j].points, threshold) {
                    return Err(Error::CurvesIntersect {
                        first: i,
                        second: j,
                        distance: d,
                    });
                }
                min_separation = min_separation.min(curve_distance(&curves[i], &curves[j]));
            }
        }

        // inside[i][j]: curve i lies inside curve j
        let m = curves.len();
        let inside = |i: usize, j: usize| polygon_winding(&raw[j].points, raw[i].points[0]) != 0;
        let candidates: Vec<usize> = (0..m)
            .filter(|&j| (0..m).all(|i| i == j || inside(i, j)))
            .collect();
        let outer = match candidates.as_slice() {
            [o] => *o,
            [] => {
                return Err(Error::AmbiguousNesting(
                    "no curve encloses all the others".into(),
                ))
            }
            _ => return Err(Error::AmbiguousNesting("several outer candidates".into())),
        };
        for i in (0..m).filter(|&i| i != outer) {
            for j in (0..m).filter(|&j| j != outer && j != i) {
                if inside(i, j) {
                    return Err(Error::AmbiguousNesting(format!(
                        "inner curve {i} lies inside inner curve {j}"
                    )));
                }
            }
        }

        let mut reoriented = Vec::with_capacity(m);
        let curves: Vec<BoundaryCurve> = curves
            .into_iter()
            .enumerate()
            .map(|(i, c)| {
                let want = if i == outer {
                    Orientation::CounterClockwise
                } else {
                    Orientation::Clockwise
                };
                reoriented.push(c.orientation != want);
                c.with_orientation(want)
            })
            .collect();
        let grids: Vec<CurveGrid> = curves.iter().map(CurveGrid::new).collect();

        let outer_pts = &grids[outer].points;
        let center = outer_pts.iter().sum::<Complex64>() / outer_pts.len() as f64;
        let radius = outer_pts
            .iter()
            .map(|p| (p - center).norm())
            .fold(0.0, f64::max);
        let mut diameter: f64 = 0.0;
        let hull = shape_points(&curves[outer], SHAPE_SAMPLES);
        for (i, a) in hull.iter().enumerate() {
            for b in &hull[i + 1..] {
                diameter = diameter.max((a - b).norm());
            }
        }

        Ok(DomainBoundary {
            curves,
            grids,
            outer,
            reoriented,
            delta_band: 1e-3 * diameter,
            diameter,
            center,
            radius,
            min_separation,
        })
    }

    /// The unit disc sampled with `node_count` nodes.
    pub fn unit_disc(node_count: usize) -> Result<Self> {
        Self::new(vec![BoundaryCurve::circle(Complex64::new(0.0, 0.0), 1.0, node_count)?])
    }

    /// The annulus `inner < |z - center| < outer`.
    pub fn annulus(center: Complex64, inner: f64, outer: f64, node_count: usize) -> Result<Self> {
        Self::new(vec![
            BoundaryCurve::circle(center, outer, node_count)?,
            BoundaryCurve::circle(center, inner, node_count)?,
        ])
    }

    pub fn with_delta_band(mut self, delta_band: f64) -> Result<Self> {
        if !(delta_band > 0.0 && delta_band.is_finite()) {
            return Err(Error::InvalidParameter(format!("delta_band {delta_band}")));
        }
        self.delta_band = delta_band;
        Ok(self)
    }

    pub fn curves(&self) -> &[BoundaryCurve] {
        &self.curves
    }

    pub fn grids(&self) -> &[CurveGrid] {
        &self.grids
    }

    pub fn curve_count(&self) -> usize {
        self.curves.len()
    }

    pub fn outer_index(&self) -> usize {
        self.outer
    }

    /// Indices of the curves bounding holes.
    pub fn hole_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.curves.len()).filter(move |&i| i != self.outer)
    }

    /// Which input curves had their orientation flipped.
    pub fn reoriented(&self) -> &[bool] {
        &self.reoriented
    }

    pub fn delta_band(&self) -> f64 {
        self.delta_band
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Centroid of the outer curve's nodes.
    pub fn center(&self) -> Complex64 {
        self.center
    }

    /// Largest distance from `center()` to the outer curve.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Smallest distance between different curves, sampled at a fixed
    /// resolution independent of the node count.
    pub fn min_separation(&self) -> f64 {
        self.min_separation
    }

    pub fn total_nodes(&self) -> usize {
        self.grids.iter().map(CurveGrid::len).sum()
    }

    /// Largest arc length between neighbouring nodes over all curves.
    pub fn node_spacing(&self) -> f64 {
        self.curves
            .iter()
            .zip(&self.grids)
            .map(|(c, g)| max_speed(g) * 2.0 * PI / c.node_count as f64)
            .fold(0.0, f64::max)
    }

    /// Distance from the boundary beyond which trapezoidal Cauchy integrals
    /// are accurate to near machine precision.
    pub fn probe_clearance(&self) -> f64 {
        self.delta_band.max(CLEARANCE_SPACINGS * self.node_spacing())
    }

    pub fn boundary_distance(&self, z: Complex64) -> f64 {
        self.grids
            .iter()
            .map(|g| g.distance_to(z))
            .fold(f64::INFINITY, f64::min)
    }

    /// Classifies `z` by the winding numbers of the oriented boundary curves.
    pub fn locate_point(&self, z: Complex64) -> RegionTag {
        if self.boundary_distance(z) < self.delta_band {
            return RegionTag::NearBoundary;
        }
        self.locate_unbanded(z)
    }

    /// Like [`locate_point`](Self::locate_point) but never reports
    /// `NearBoundary`.
    pub fn locate_unbanded(&self, z: Complex64) -> RegionTag {
        let windings: Vec<i32> = self.grids.iter().map(|g| g.polygon_winding(z)).collect();
        let total: i32 = windings.iter().sum();
        if total == 1 {
            return RegionTag::Interior;
        }
        if windings[self.outer] == 0 {
            return RegionTag::Exterior;
        }
        match self.hole_indices().find(|&j| windings[j] == -1) {
            Some(j) => RegionTag::Hole(j),
            None => RegionTag::Exterior,
        }
    }

    /// Trapezoidal approximation of `∮_{bD} g(ζ) dζ` from samples of `g` at
    /// every grid node.
    pub fn contour_integral<S: AsRef<[Complex64]>>(&self, samples: &[S]) -> Result<Complex64> {
        self.check_layout(samples)?;
        Ok(self
            .grids
            .iter()
            .zip(samples)
            .map(|(g, s)| curve_sum(g, s.as_ref()))
            .sum())
    }

    /// The same integral restricted to one curve.
    pub fn curve_integral(&self, curve: usize, samples: &[Complex64]) -> Result<Complex64> {
        let g = self
            .grids
            .get(curve)
            .ok_or_else(|| Error::SampleMismatch(format!("no curve {curve}")))?;
        if samples.len() != g.len() {
            return Err(Error::SampleMismatch(format!(
                "curve {curve}: {} samples for {} nodes",
                samples.len(),
                g.len()
            )));
        }
        Ok(curve_sum(g, samples))
    }

    pub fn check_layout<S: AsRef<[Complex64]>>(&self, samples: &[S]) -> Result<()> {
        if samples.len() != self.grids.len() {
            return Err(Error::SampleMismatch(format!(
                "{} sample arrays for {} curves",
                samples.len(),
                self.grids.len()
            )));
        }
        for (i, (g, s)) in self.grids.iter().zip(samples).enumerate() {
            if s.as_ref().len() != g.len() {
                return Err(Error::SampleMismatch(format!(
                    "curve {i}: {} samples for {} nodes",
                    s.as_ref().len(),
                    g.len()
                )));
            }
        }
        Ok(())
    }

    /// Evaluates `f` at every grid node.
    pub fn sample<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Vec<Vec<Complex64>> {
        self.grids
            .iter()
            .map(|g| g.points.iter().map(|&z| f(z)).collect())
            .collect()
    }
}

fn curve_sum(grid: &CurveGrid, samples: &[Complex64]) -> Complex64 {
    samples
        .iter()
        .zip(&grid.weights)
        .map(|(v, w)| v * w)
        .sum()
}

fn max_speed(grid: &CurveGrid) -> f64 {
    grid.derivs.iter().map(|d| d.norm()).fold(0.0, f64::max)
}

/// Fixed-resolution sampling for node-count independent shape quantities
/// (diameter, separation).
const SHAPE_SAMPLES: usize = 512;
const COARSE_SAMPLES: usize = 256;

fn shape_points(curve: &BoundaryCurve, n: usize) -> Vec<Complex64> {
    (0..n).map(|k| curve.eval(2.0 * PI * k as f64 / n as f64)).collect()
}

fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..60 {
        let a = hi - r * (hi - lo);
        let b = lo + r * (hi - lo);
        if f(a) < f(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    0.5 * (lo + hi)
}

/// Distance between two curves: the closest coarse sample pair, refined on
/// the curves themselves by alternating line searches.
fn curve_distance(a: &BoundaryCurve, b: &BoundaryCurve) -> f64 {
    let h = 2.0 * PI / COARSE_SAMPLES as f64;
    let (pa, pb) = (shape_points(a, COARSE_SAMPLES), shape_points(b, COARSE_SAMPLES));
    let (mut s, mut t, mut best) = (0.0, 0.0, f64::INFINITY);
    for (i, p) in pa.iter().enumerate() {
        for (j, q) in pb.iter().enumerate() {
            let d = (p - q).norm_sqr();
            if d < best {
                (s, t, best) = (i as f64 * h, j as f64 * h, d);
            }
        }
    }
    for _ in 0..25 {
        s = golden_min(|x| (a.eval(x) - b.eval(t)).norm(), s - h, s + h);
        t = golden_min(|y| (a.eval(s) - b.eval(y)).norm(), t - h, t + h);
    }
    (a.eval(s) - b.eval(t)).norm().min(best.sqrt())
}

/// Indices of `points` sorted by real part.
fn sorted_by_x(points: &[Complex64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&i, &j| points[i].re.total_cmp(&points[j].re));
    idx
}

/// Smallest distance `<= threshold` between `a` and `b`, if any.
fn min_distance_within(a: &[Complex64], b: &[Complex64], threshold: f64) -> Option<f64> {
    let order = sorted_by_x(b);
    let xs: Vec<f64> = order.iter().map(|&i| b[i].re).collect();
    let mut best: Option<f64> = None;
    for p in a {
        let start = xs.partition_point(|&x| x < p.re - threshold);
        for &j in order[start..].iter().take_while(|&&j| b[j].re <= p.re + threshold) {
            let d = (p - b[j]).norm();
            if d <= threshold && best.map_or(true, |m| d < m) {
                best = Some(d);
            }
        }
    }
    best
}


/// Flags node pairs that are close in the plane but far apart along the
/// curve.
fn check_simple(curve: usize, grid: &CurveGrid, threshold: f64) -> Result<()> {
    let n = grid.len();
    let mut arc = vec![0.0; n + 1];
    for i in 0..n {
        arc[i + 1] = arc[i] + (grid.points[(i + 1) % n] - grid.points[i]).norm();
    }
    let total = arc[n];
    let order = sorted_by_x(&grid.points);
    for (k, &i) in order.iter().enumerate() {
        let p = grid.points[i];
        for &j in order[k + 1..].iter().take_while(|&&j| grid.points[j].re <= p.re + threshold) {
            let along = (arc[j] - arc[i]).abs();
            let along = along.min(total - along);
            if along <= 2.0 * threshold {
                continue;
            }
            let d = (p - grid.points[j]).norm();
            if d <= threshold {
                return Err(Error::CurvesIntersect {
                    first: curve,
                    second: curve,
                    distance: d,
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn unit_circle_evaluation() {
        let curve = BoundaryCurve::circle(c(0.0, 0.0), 1.0, 256).unwrap();
        assert_abs_diff_eq!((curve.eval(0.0) - c(1.0, 0.0)).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((curve.eval(PI / 2.0) - c(0.0, 1.0)).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((curve.derivative(0.0) - c(0.0, 1.0)).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn shifted_circle_at_pi() {
        let center = c(0.3, -0.7);
        let curve = BoundaryCurve::circle(center, 2.0, 64).unwrap();
        assert_abs_diff_eq!((curve.eval(PI) - (center - 2.0)).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn rejects_bad_node_counts() {
        assert_eq!(
            BoundaryCurve::circle(c(0.0, 0.0), 1.0, 100),
            Err(Error::BadNodeCount(100))
        );
    }

    #[test]
    fn single_circle_domain() {
        let d = DomainBoundary::unit_disc(256).unwrap();
        assert_eq!(d.curve_count(), 1);
        assert_eq!(d.outer_index(), 0);
        assert_eq!(d.reoriented(), &[false]);
        assert_abs_diff_eq!(d.diameter(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d.delta_band(), 2e-3, epsilon = 1e-15);
    }

    #[test]
    fn annulus_inner_curve_becomes_clockwise() {
        let d = DomainBoundary::annulus(c(0.0, 0.0), 0.5, 1.0, 256).unwrap();
        assert_eq!(d.curve_count(), 2);
        assert_eq!(d.outer_index(), 0);
        assert_eq!(d.curves()[1].orientation(), Orientation::Clockwise);
        assert_eq!(d.reoriented(), &[false, true]);
    }

    #[test]
    fn outer_curve_detected_regardless_of_order() {
        let d = DomainBoundary::new(vec![
            BoundaryCurve::circle(c(0.2, 0.0), 0.3, 512).unwrap(),
            BoundaryCurve::circle(c(0.0, 0.0), 2.0, 512).unwrap(),
            BoundaryCurve::circle(c(-0.9, 0.3), 0.4, 512).unwrap(),
        ])
        .unwrap();
        assert_eq!(d.outer_index(), 1);
        assert_eq!(d.hole_indices().collect::<Vec<_>>(), vec![0, 2]);
    }

    #[test]
    fn clockwise_outer_curve_is_reoriented() {
        let cw = BoundaryCurve::new(vec![(-1, c(1.0, 0.0))], 128).unwrap();
        assert_eq!(cw.orientation(), Orientation::Clockwise);
        let d = DomainBoundary::new(vec![cw]).unwrap();
        assert_eq!(d.reoriented(), &[true]);
        assert_eq!(d.curves()[0].orientation(), Orientation::CounterClockwise);
        let z = d.contour_integral(&d.sample(|z| 1.0 / z)).unwrap();
        assert_abs_diff_eq!((z - c(0.0, 2.0 * PI)).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn separation_and_diameter_do_not_depend_on_nodes() {
        for m in [256, 512, 2048] {
            let outer = BoundaryCurve::circle(c(0.0, 0.0), 1.0, m).unwrap();
            let inner = BoundaryCurve::circle(c(0.2, -0.1), 0.3, m).unwrap();
            let d = DomainBoundary::new(vec![outer, inner]).unwrap();
            let want = 1.0 - 0.3 - c(0.2, -0.1).norm();
            assert_abs_diff_eq!(d.min_separation(), want, epsilon = 1e-10);
            assert_abs_diff_eq!(d.diameter(), 2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn coincident_circles_intersect() {
        let err = DomainBoundary::new(vec![
            BoundaryCurve::circle(c(0.0, 0.0), 1.0, 256).unwrap(),
            BoundaryCurve::circle(c(0.0, 0.0), 1.0, 256).unwrap(),
        ])
        .unwrap_err();
        assert!(matches!(err, Error::CurvesIntersect { .. }));
    }

    #[test]
    fn overlapping_circles_intersect() {
        let err = DomainBoundary::new(vec![
            BoundaryCurve::circle(c(0.0, 0.0), 1.0, 256).unwrap(),
            BoundaryCurve::circle(c(1.0, 0.0), 1.0, 256).unwrap(),
        ])
        .unwrap_err();
        assert!(matches!(err, Error::CurvesIntersect { .. }));
    }

    #[test]
    fn disjoint_circles_have_no_outer_curve() {
        let err = DomainBoundary::new(vec![
            BoundaryCurve::circle(c(0.0, 0.0), 1.0, 128).unwrap(),
            BoundaryCurve::circle(c(5.0, 0.0), 1.0, 128).unwrap(),
        ])
        .unwrap_err();
        assert!(matches!(err, Error::AmbiguousNesting(_)));
    }

    #[test]
    fn nested_holes_are_ambiguous() {
        let err = DomainBoundary::new(vec![
            BoundaryCurve::circle(c(0.0, 0.0), 4.0, 256).unwrap(),
            BoundaryCurve::circle(c(0.0, 0.0), 2.0, 256).unwrap(),
            BoundaryCurve::circle(c(0.0, 0.0), 0.5, 256).unwrap(),
        ])
        .unwrap_err();
        assert!(matches!(err, Error::AmbiguousNesting(_)));
    }

    #[test]
    fn constant_curve_is_degenerate() {
        let curve = BoundaryCurve::new(vec![(0, c(1.0, 0.0))], 64).unwrap();
        let err = DomainBoundary::new(vec![curve]).unwrap_err();
        assert!(matches!(err, Error::DegenerateCurve { curve: 0, .. }));
    }

    #[test]
    fn figure_eight_is_not_simple() {
        // γ(t) = sin t + i sin 2t crosses itself at the origin
        let curve = BoundaryCurve::new(
            vec![
                (1, c(0.0, -0.5)),
                (-1, c(0.0, 0.5)),
                (2, c(0.5, 0.0)),
                (-2, c(-0.5, 0.0)),
            ],
            256,
        )
        .unwrap();
        assert!(matches!(
            DomainBoundary::new(vec![curve]),
            Err(Error::CurvesIntersect { .. })
        ));
    }

    #[test]
    fn locate_in_disc_and_annulus() {
        let disc = DomainBoundary::unit_disc(256).unwrap();
        assert_eq!(disc.locate_point(c(0.0, 0.0)), RegionTag::Interior);
        assert_eq!(disc.locate_point(c(2.0, 0.0)), RegionTag::Exterior);
        assert_eq!(disc.locate_point(c(1.0005, 0.0)), RegionTag::NearBoundary);
        let ann = DomainBoundary::annulus(c(0.0, 0.0), 0.5, 1.0, 256).unwrap();
        assert_eq!(ann.locate_point(c(0.25, 0.0)), RegionTag::Hole(1));
        assert_eq!(ann.locate_point(c(0.0, 0.75)), RegionTag::Interior);
        assert_eq!(ann.locate_point(c(-3.0, 1.0)), RegionTag::Exterior);
    }

    #[test]
    fn contour_integrals_of_monomials() {
        let d = DomainBoundary::unit_disc(256).unwrap();
        let z1 = d.contour_integral(&d.sample(|z| z)).unwrap();
        assert_abs_diff_eq!(z1.norm(), 0.0, epsilon = 1e-14);
        let zinv = d.contour_integral(&d.sample(|z| 1.0 / z)).unwrap();
        assert_abs_diff_eq!((zinv - c(0.0, 2.0 * PI)).norm(), 0.0, epsilon = 1e-13);
    }

    #[test]
    fn contour_integral_simple_pole_matches_residue() {
        let d = DomainBoundary::unit_disc(256).unwrap();
        let v = d.contour_integral(&d.sample(|z| 1.0 / (z - 0.3))).unwrap();
        // residue 1 at 0.3
        assert_abs_diff_eq!((v - c(0.0, 2.0 * PI)).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn sample_mismatch_is_reported() {
        let d = DomainBoundary::unit_disc(64).unwrap();
        let bad = vec![vec![Complex64::new(1.0, 0.0); 63]];
        assert!(matches!(d.contour_integral(&bad), Err(Error::SampleMismatch(_))));
        let two: Vec<Vec<Complex64>> = vec![vec![]; 2];
        assert!(matches!(d.contour_integral(&two), Err(Error::SampleMismatch(_))));
    }

    #[test]
    fn reversing_orientation_negates_curve_integral() {
        let curve = BoundaryCurve::circle(c(0.1, 0.2), 1.3, 128).unwrap();
        let f = |z: Complex64| (z * z + 1.0) / (z - c(0.4, 0.1));
        let forward = CurveGrid::new(&curve);
        let backward = CurveGrid::new(&curve.clone().reversed());
        let samples: Vec<Complex64> = forward.points.iter().map(|&z| f(z)).collect();
        let a = curve_sum(&forward, &samples);
        let b = curve_sum(&backward, &samples);
        assert_abs_diff_eq!((a + b).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn inward_normal_points_into_domain() {
        let ann = DomainBoundary::annulus(c(0.0, 0.0), 0.5, 1.0, 256).unwrap();
        for (ci, g) in ann.grids().iter().enumerate() {
            for i in [0, 7, 33] {
                let p = g.points[i] + g.inward_normal(i) * 0.1;
                assert_eq!(ann.locate_point(p), RegionTag::Interior, "curve {ci} node {i}");
            }
        }
    }
}
