//! Moments, the Cauchy transform of boundary data, the holomorphic
//! extendibility test and evaluation of (meromorphic) extensions.
//!
//! Boundary data `f` extends holomorphically through `D` exactly when its
//! Cauchy transform vanishes on every complementary component. The test
//! samples that transform on probe rings outside the domain and on a grid
//! inside each hole, and checks the leading coefficients of its expansion at
//! infinity, where far probes alone see almost nothing.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::geometry::{DomainBoundary, RegionTag};
use crate::poly::Polynomial;

const TWO_PI_I: Complex64 = Complex64::new(0.0, 2.0 * PI);

/// Values of a boundary function at every grid node, curve by curve.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySamples {
    values: Vec<Vec<Complex64>>,
}

impl BoundarySamples {
    pub fn new(domain: &DomainBoundary, values: Vec<Vec<Complex64>>) -> Result<Self> {
        domain.check_layout(&values)?;
        for (curve, v) in values.iter().enumerate() {
            if let Some(node) = v.iter().position(|z| !z.is_finite()) {
                return Err(Error::NonFiniteSample { curve, node });
            }
        }
        Ok(BoundarySamples { values })
    }

    /// Samples `f` at the domain's nodes.
    pub fn from_fn<F: Fn(Complex64) -> Complex64>(domain: &DomainBoundary, f: F) -> Result<Self> {
        Self::new(domain, domain.sample(f))
    }

    pub fn zeros(domain: &DomainBoundary) -> Self {
        BoundarySamples {
            values: domain
                .grids()
                .iter()
                .map(|g| vec![Complex64::new(0.0, 0.0); g.len()])
                .collect(),
        }
    }

    pub fn values(&self) -> &[Vec<Complex64>] {
        &self.values
    }

    pub fn curve(&self, i: usize) -> &[Complex64] {
        &self.values[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Complex64> {
        self.values.iter().flatten()
    }

    /// `max |f|` over all nodes.
    pub fn scale(&self) -> f64 {
        self.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn min_modulus(&self) -> f64 {
        self.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min)
    }

    /// Pointwise `op(ζ, f(ζ))`.
    pub fn map<F>(&self, domain: &DomainBoundary, op: F) -> Self
    where
        F: Fn(Complex64, Complex64) -> Complex64,
    {
        BoundarySamples {
            values: self
                .values
                .iter()
                .zip(domain.grids())
                .map(|(v, g)| v.iter().zip(&g.points).map(|(&f, &z)| op(z, f)).collect())
                .collect(),
        }
    }

    /// Samples of `P·f`.
    pub fn times_poly(&self, domain: &DomainBoundary, p: &Polynomial) -> Self {
        self.map(domain, |z, f| p.eval(z) * f)
    }

    pub fn scaled(&self, lambda: Complex64) -> Self {
        BoundarySamples {
            values: self
                .values
                .iter()
                .map(|v| v.iter().map(|f| f * lambda).collect())
                .collect(),
        }
    }

    pub fn add(&self, other: &BoundarySamples) -> Self {
        BoundarySamples {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        }
    }
}

/// The coefficients `c_1, c_2, ...` of the Cauchy transform's expansion
/// `Σ c_j z^{-j}` at infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence {
    values: Vec<Complex64>,
}

impl MomentSequence {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter("empty moment sequence".into()));
        }
        if values.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("non-finite moment".into()));
        }
        Ok(MomentSequence { values })
    }

    /// Number of moments `J`.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `c_j` for `j >= 1`.
    pub fn c(&self, j: usize) -> Complex64 {
        self.values[j - 1]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.values
    }
}

/// `c_j = -(1/2πi) ∮ ζ^{j-1} f(ζ) dζ` for `j = 1..=count`.
pub fn compute_moments(
    domain: &DomainBoundary,
    f: &BoundarySamples,
    count: usize,
) -> Result<MomentSequence> {
    compute_moments_about(domain, f, count, Complex64::new(0.0, 0.0), 1.0)
}

/// Moments in the variable `u = (ζ - center)/radius`:
/// `-(1/2πi) ∮ u^{j-1} f(ζ) dζ`. Far from the origin these stay well scaled
/// where the plain moments grow like `|center|^j`.
pub fn compute_moments_about(
    domain: &DomainBoundary,
    f: &BoundarySamples,
    count: usize,
    center: Complex64,
    radius: f64,
) -> Result<MomentSequence> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter(format!("moment radius {radius}")));
    }
    if count == 0 {
        return Err(Error::InvalidParameter("moment count must be >= 1".into()));
    }
    domain.check_layout(f.values())?;
    let mut acc = vec![Complex64::new(0.0, 0.0); count];
    for (grid, vals) in domain.grids().iter().zip(f.values()) {
        for ((&z, &w), &v) in grid.points.iter().zip(&grid.weights).zip(vals) {
            let u = (z - center) / radius;
            let mut term = v * w;
            for a in acc.iter_mut() {
                *a += term;
                term *= u;
            }
        }
    }
    MomentSequence::new(acc.into_iter().map(|s| -s / TWO_PI_I).collect())
}

/// `(1/2πi) ∮ f(ζ)/(ζ - z) dζ` without the boundary-band check.
pub fn cauchy_transform_unchecked(
    domain: &DomainBoundary,
    f: &BoundarySamples,
    z: Complex64,
) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for (grid, vals) in domain.grids().iter().zip(f.values()) {
        for ((&zeta, &w), &v) in grid.points.iter().zip(&grid.weights).zip(vals) {
            sum += v * w / (zeta - z);
        }
    }
    sum / TWO_PI_I
}

/// Cauchy transform of `f` at `z`, refusing points inside the boundary band.
pub fn cauchy_transform(
    domain: &DomainBoundary,
    f: &BoundarySamples,
    z: Complex64,
) -> Result<Complex64> {
    domain.check_layout(f.values())?;
    if domain.locate_point(z) == RegionTag::NearBoundary {
        return Err(Error::ProbeTooClose(z));
    }
    Ok(cauchy_transform_unchecked(domain, f, z))
}

/// Where the holomorphic test looks.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeConfig {
    /// Exterior probe rings, as multiples of the domain radius.
    pub exterior_radii: Vec<f64>,
    pub ring_points: usize,
    /// Side of the probe grid laid over each hole.
    pub hole_grid: usize,
    /// Number of expansion coefficients checked at infinity.
    pub moment_checks: usize,
    pub tol_rel: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            exterior_radii: vec![1.5, 2.0, 4.0],
            ring_points: 16,
            hole_grid: 5,
            moment_checks: 8,
            tol_rel: 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldProbe {
    pub z: Complex64,
    pub region: RegionTag,
    pub value: Complex64,
}

/// Cauchy transform sampled at the probe set.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyField {
    pub probes: Vec<FieldProbe>,
    /// `(component, max |transform|)`, exterior first, then holes.
    pub component_max: Vec<(RegionTag, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HoloTest {
    pub verdict: bool,
    /// Worst probe or moment value relative to `scale(g)`.
    pub max_residual: f64,
    /// Worst `|transform|` over the probes, unnormalized.
    pub max_abs_transform: f64,
    /// Worst normalized expansion coefficient at infinity.
    pub moment_residual: f64,
    pub scale: f64,
    pub field: CauchyField,
}

/// Probe points for every complementary component, exterior first.
pub fn probe_points(domain: &DomainBoundary, cfg: &ProbeConfig) -> Result<Vec<(Complex64, RegionTag)>> {
    let mut pts = Vec::new();
    let center = domain.center();
    let radius = domain.radius();
    let clearance = domain.probe_clearance();
    for &r in &cfg.exterior_radii {
        for k in 0..cfg.ring_points {
            let theta = 2.0 * PI * (k as f64 + 0.5) / cfg.ring_points as f64;
            let z = center + Complex64::from_polar(r * radius, theta);
            if domain.boundary_distance(z) >= clearance
                && domain.locate_unbanded(z) == RegionTag::Exterior
            {
                pts.push((z, RegionTag::Exterior));
            }
        }
    }
    if pts.is_empty() {
        return Err(Error::NoProbes("exterior".into()));
    }
    let max_per_hole = cfg.hole_grid * cfg.hole_grid;
    for j in domain.hole_indices() {
        let found = hole_probes(domain, j, cfg.hole_grid, clearance, max_per_hole);
        if found.is_empty() {
            return Err(Error::NoProbes(format!("hole {j}")));
        }
        pts.extend(found.into_iter().map(|z| (z, RegionTag::Hole(j))));
    }
    Ok(pts)
}

fn hole_probes(
    domain: &DomainBoundary,
    hole: usize,
    grid: usize,
    clearance: f64,
    cap: usize,
) -> Vec<Complex64> {
    let nodes = &domain.grids()[hole].points;
    let (mut lo, mut hi) = (nodes[0], nodes[0]);
    for p in nodes {
        lo = Complex64::new(lo.re.min(p.re), lo.im.min(p.im));
        hi = Complex64::new(hi.re.max(p.re), hi.im.max(p.im));
    }
    // Refine the grid until something fits, then thin to the cap.
    let mut n = grid.max(1);
    while n <= 4 * grid.max(1) + 1 {
        let mut found = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let fx = (a as f64 + 1.0) / (n as f64 + 1.0);
                let fy = (b as f64 + 1.0) / (n as f64 + 1.0);
                let z = Complex64::new(lo.re + fx * (hi.re - lo.re), lo.im + fy * (hi.im - lo.im));
                if domain.boundary_distance(z) >= clearance
                    && domain.locate_unbanded(z) == RegionTag::Hole(hole)
                {
                    found.push(z);
                }
            }
        }
        if !found.is_empty() {
            if found.len() > cap {
                let stride = found.len() as f64 / cap as f64;
                found = (0..cap).map(|i| found[(i as f64 * stride) as usize]).collect();
            }
            return found;
        }
        n = 2 * n + 1;
    }
    Vec::new()
}

/// Normalized expansion coefficients of the exterior transform about the
/// domain center: `|∮ ((ζ-c)/R)^j g dζ| / (scale · length)` for
/// `j = 0..count`.
pub fn normalized_exterior_moments(
    domain: &DomainBoundary,
    g: &BoundarySamples,
    count: usize,
) -> Vec<f64> {
    let center = domain.center();
    let radius = domain.radius();
    let scale = g.scale();
    let length: f64 = domain
        .grids()
        .iter()
        .flat_map(|gr| gr.weights.iter())
        .map(|w| w.norm())
        .sum();
    let mut acc = vec![Complex64::new(0.0, 0.0); count];
    for (grid, vals) in domain.grids().iter().zip(g.values()) {
        for ((&z, &w), &v) in grid.points.iter().zip(&grid.weights).zip(vals) {
            let u = (z - center) / radius;
            let mut term = v * w;
            for a in acc.iter_mut() {
                *a += term;
                term *= u;
            }
        }
    }
    if scale == 0.0 {
        return vec![0.0; count];
    }
    acc.into_iter().map(|a| a.norm() / (scale * length)).collect()
}

/// Decides whether `g` extends holomorphically through the domain.
pub fn holo_test(domain: &DomainBoundary, g: &BoundarySamples, cfg: &ProbeConfig) -> Result<HoloTest> {
    domain.check_layout(g.values())?;
    let points = probe_points(domain, cfg)?;
    let probes: Vec<FieldProbe> = points
        .par_iter()
        .map(|&(z, region)| FieldProbe {
            z,
            region,
            value: cauchy_transform_unchecked(domain, g, z),
        })
        .collect();

    let mut component_max: Vec<(RegionTag, f64)> = Vec::new();
    for p in &probes {
        let m = p.value.norm();
        match component_max.iter_mut().find(|(r, _)| *r == p.region) {
            Some((_, best)) => *best = best.max(m),
            None => component_max.push((p.region, m)),
        }
    }
    let max_abs_transform = component_max.iter().map(|(_, m)| *m).fold(0.0, f64::max);
    let scale = g.scale();
    let moment_residual = normalized_exterior_moments(domain, g, cfg.moment_checks)
        .into_iter()
        .fold(0.0, f64::max);
    let probe_residual = if scale > 0.0 {
        max_abs_transform / scale
    } else {
        0.0
    };
    let max_residual = probe_residual.max(moment_residual);
    Ok(HoloTest {
        verdict: max_residual <= cfg.tol_rel,
        max_residual,
        max_abs_transform,
        moment_residual,
        scale,
        field: CauchyField {
            probes,
            component_max,
        },
    })
}

/// `h/Q` where `h` is the holomorphic extension of `Q·f`.
#[derive(Debug, Clone)]
pub struct MeromorphicExtension<'a> {
    domain: &'a DomainBoundary,
    numerator: BoundarySamples,
    denominator: Polynomial,
    pole_floor: f64,
}

impl<'a> MeromorphicExtension<'a> {
    pub fn new(domain: &'a DomainBoundary, f: &BoundarySamples, q: Polynomial) -> Result<Self> {
        domain.check_layout(f.values())?;
        let numerator = f.times_poly(domain, &q);
        let q_scale = domain
            .grids()
            .iter()
            .flat_map(|g| g.points.iter())
            .map(|&z| q.eval(z).norm())
            .fold(0.0, f64::max);
        Ok(MeromorphicExtension {
            domain,
            numerator,
            denominator: q,
            pole_floor: 1e-10 * q_scale,
        })
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.denominator
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        match self.domain.locate_point(z) {
            RegionTag::Interior => {}
            RegionTag::NearBoundary => return Err(Error::ProbeTooClose(z)),
            _ => return Err(Error::NotInterior(z)),
        }
        let q = self.denominator.eval(z);
        if q.norm() <= self.pole_floor {
            return Err(Error::EvalAtPole(z));
        }
        Ok(cauchy_transform_unchecked(self.domain, &self.numerator, z) / q)
    }

    /// `h(z)` for interior `z`, skipping the band and pole checks.
    pub fn numerator_at(&self, z: Complex64) -> Complex64 {
        cauchy_transform_unchecked(self.domain, &self.numerator, z)
    }
}

/// Value at `z` of the meromorphic extension with denominator `q`.
pub fn reconstruct(
    domain: &DomainBoundary,
    f: &BoundarySamples,
    q: &Polynomial,
    z: Complex64,
) -> Result<Complex64> {
    MeromorphicExtension::new(domain, f, q.clone())?.eval(z)
}

/// `max |h₋(ζ)/Q(ζ) - f(ζ)|` over the nodes, where `h₋` is the interior
/// boundary value of the Cauchy integral of `Q·f`.
///
/// The interior limit is taken exactly by subtracting `g(ζ_i)` under the
/// integral, which leaves a smooth integrand whose diagonal term is the
/// spectral derivative of `g`.
pub fn boundary_mismatch(domain: &DomainBoundary, f: &BoundarySamples, q: &Polynomial) -> Result<f64> {
    domain.check_layout(f.values())?;
    let q_vals = domain.sample(|z| q.eval(z));
    let q_scale = q_vals.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
    for (grid, qs) in domain.grids().iter().zip(&q_vals) {
        if let Some(i) = qs.iter().position(|v| v.norm() <= 1e-10 * q_scale) {
            return Err(Error::EvalAtPole(grid.points[i]));
        }
    }
    let g = f.times_poly(domain, q);
    let dg: Vec<Vec<Complex64>> = domain
        .grids()
        .iter()
        .zip(g.values())
        .map(|(grid, vals)| {
            spectral_derivative(vals)
                .into_iter()
                .zip(&grid.derivs)
                .map(|(dt, dz)| dt / dz)
                .collect()
        })
        .collect();

    let grids = domain.grids();
    let targets: Vec<(usize, usize)> = grids
        .iter()
        .enumerate()
        .flat_map(|(c, gr)| (0..gr.len()).map(move |i| (c, i)))
        .collect();
    let worst = targets
        .par_iter()
        .map(|&(c, i)| {
            let zi = grids[c].points[i];
            let gi = g.curve(c)[i];
            let mut sum = Complex64::new(0.0, 0.0);
            for (cc, grid) in grids.iter().enumerate() {
                let vals = g.curve(cc);
                for k in 0..grid.len() {
                    if cc == c && k == i {
                        sum += dg[c][i] * grid.weights[k];
                    } else {
                        sum += (vals[k] - gi) / (grid.points[k] - zi) * grid.weights[k];
                    }
                }
            }
            let inner = gi + sum / TWO_PI_I;
            (inner / q_vals[c][i] - f.curve(c)[i]).norm()
        })
        .collect::<Vec<f64>>()
        .into_iter()
        .fold(0.0, f64::max);
    Ok(worst)
}

/// `d/dt` of periodic samples at `t_k = 2πk/M`.
pub fn spectral_derivative(values: &[Complex64]) -> Vec<Complex64> {
    let m = values.len();
    let mut planner = FftPlanner::<f64>::new();
    let mut buf = values.to_vec();
    planner.plan_fft_forward(m).process(&mut buf);
    for (k, v) in buf.iter_mut().enumerate() {
        let freq = if k < m / 2 {
            k as f64
        } else if k == m / 2 && m % 2 == 0 {
            0.0
        } else {
            k as f64 - m as f64
        };
        *v *= Complex64::new(0.0, freq);
    }
    planner.plan_fft_inverse(m).process(&mut buf);
    buf.iter().map(|v| v / m as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn disc() -> DomainBoundary {
        DomainBoundary::unit_disc(256).unwrap()
    }

    fn annulus() -> DomainBoundary {
        DomainBoundary::annulus(c(0.0, 0.0), 0.5, 1.0, 256).unwrap()
    }

    #[test]
    fn zero_data_has_zero_moments() {
        let d = disc();
        let m = compute_moments(&d, &BoundarySamples::zeros(&d), 6).unwrap();
        assert!(m.as_slice().iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn monomials_have_vanishing_moments() {
        let d = disc();
        for k in 0..4 {
            let f = BoundarySamples::from_fn(&d, |z| z.powi(k)).unwrap();
            let m = compute_moments(&d, &f, 10).unwrap();
            assert!(m.as_slice().iter().all(|c| c.norm() < 1e-14), "k = {k}");
        }
    }

    #[test]
    fn zero_moment_count_rejected() {
        let d = disc();
        assert!(compute_moments(&d, &BoundarySamples::zeros(&d), 0).is_err());
    }

    #[test]
    fn transform_examples() {
        let d = disc();
        let inv = BoundarySamples::from_fn(&d, |z| 1.0 / z).unwrap();
        let v = cauchy_transform(&d, &inv, c(2.0, 0.0)).unwrap();
        assert_abs_diff_eq!((v - c(-0.5, 0.0)).norm(), 0.0, epsilon = 1e-14);
        let sq = BoundarySamples::from_fn(&d, |z| z * z).unwrap();
        let v = cauchy_transform(&d, &sq, c(0.3, 0.0)).unwrap();
        assert_abs_diff_eq!((v - c(0.09, 0.0)).norm(), 0.0, epsilon = 1e-14);
        let a = annulus();
        let inv = BoundarySamples::from_fn(&a, |z| 1.0 / z).unwrap();
        let v = cauchy_transform(&a, &inv, c(0.25, 0.0)).unwrap();
        assert_abs_diff_eq!(v.norm(), 0.0, epsilon = 1e-13);
    }

    #[test]
    fn transform_refuses_band() {
        let d = disc();
        let f = BoundarySamples::from_fn(&d, |z| z).unwrap();
        assert_eq!(
            cauchy_transform(&d, &f, c(1.0005, 0.0)),
            Err(Error::ProbeTooClose(c(1.0005, 0.0)))
        );
    }

    #[test]
    fn holo_test_polynomial_passes() {
        let d = disc();
        let g = BoundarySamples::from_fn(&d, |z| z * z).unwrap();
        let t = holo_test(&d, &g, &ProbeConfig::default()).unwrap();
        assert!(t.verdict);
        assert!(t.max_residual < 1e-14);
    }

    #[test]
    fn holo_test_inverse_fails_with_exterior_residual() {
        let d = disc();
        let g = BoundarySamples::from_fn(&d, |z| 1.0 / z).unwrap();
        let t = holo_test(&d, &g, &ProbeConfig::default()).unwrap();
        assert!(!t.verdict);
        // transform is -1/z outside; the nearest ring has radius 1.5
        assert_abs_diff_eq!(t.max_abs_transform, 1.0 / 1.5, epsilon = 1e-12);
        for p in &t.field.probes {
            assert_abs_diff_eq!((p.value + 1.0 / p.z).norm(), 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn holo_test_annulus_probes_hole_and_exterior() {
        let a = annulus();
        let g = BoundarySamples::from_fn(&a, |z| 1.0 / z).unwrap();
        let t = holo_test(&a, &g, &ProbeConfig::default()).unwrap();
        assert!(t.verdict, "{}", t.max_residual);
        let regions: Vec<RegionTag> = t.field.component_max.iter().map(|(r, _)| *r).collect();
        assert_eq!(regions, vec![RegionTag::Exterior, RegionTag::Hole(1)]);
        assert!(t.field.probes.iter().filter(|p| p.region == RegionTag::Hole(1)).count() <= 25);
    }

    #[test]
    fn holo_test_detects_pole_in_hole_only_via_hole_probes() {
        // z² on the inner circle, 0 on the outer one: the exterior transform
        // and every moment vanish, the hole sees -z².
        let a = annulus();
        let g = BoundarySamples::from_fn(&a, |z| {
            if z.norm() < 0.75 {
                z * z
            } else {
                c(0.0, 0.0)
            }
        })
        .unwrap();
        let t = holo_test(&a, &g, &ProbeConfig::default()).unwrap();
        assert!(!t.verdict);
        let hole = t.field.component_max.iter().find(|(r, _)| *r == RegionTag::Hole(1)).unwrap();
        assert!(hole.1 > 1e-3);
    }

    #[test]
    fn thin_hole_reports_no_probes() {
        let d = DomainBoundary::new(vec![
            crate::geometry::BoundaryCurve::circle(c(0.0, 0.0), 1.0, 256).unwrap(),
            crate::geometry::BoundaryCurve::circle(c(0.0, 0.0), 0.04, 8).unwrap(),
        ])
        .unwrap();
        let g = BoundarySamples::from_fn(&d, |z| z).unwrap();
        assert!(matches!(
            holo_test(&d, &g, &ProbeConfig::default()),
            Err(Error::NoProbes(_))
        ));
    }

    #[test]
    fn reconstruct_examples() {
        let d = disc();
        let f = BoundarySamples::from_fn(&d, |z| 1.0 / (z - 0.4)).unwrap();
        let q = Polynomial::new(vec![c(-0.4, 0.0), c(1.0, 0.0)]);
        let v = reconstruct(&d, &f, &q, c(0.7, 0.0)).unwrap();
        assert_abs_diff_eq!((v - c(10.0 / 3.0, 0.0)).norm(), 0.0, epsilon = 1e-10);

        let f = BoundarySamples::from_fn(&d, |z| z * z).unwrap();
        let v = reconstruct(&d, &f, &Polynomial::one(), c(0.5, 0.0)).unwrap();
        assert_abs_diff_eq!((v - c(0.25, 0.0)).norm(), 0.0, epsilon = 1e-14);

        let f = BoundarySamples::from_fn(&d, |z| z.conj()).unwrap();
        let q = Polynomial::new(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        let v = reconstruct(&d, &f, &q, c(0.5, 0.0)).unwrap();
        assert_abs_diff_eq!((v - c(2.0, 0.0)).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn reconstruct_errors() {
        let d = disc();
        let f = BoundarySamples::from_fn(&d, |z| 1.0 / (z - 0.4)).unwrap();
        let q = Polynomial::new(vec![c(-0.4, 0.0), c(1.0, 0.0)]);
        assert_eq!(reconstruct(&d, &f, &q, c(0.4, 0.0)), Err(Error::EvalAtPole(c(0.4, 0.0))));
        assert_eq!(reconstruct(&d, &f, &q, c(3.0, 0.0)), Err(Error::NotInterior(c(3.0, 0.0))));
        assert_eq!(
            reconstruct(&d, &f, &q, c(0.9995, 0.0)),
            Err(Error::ProbeTooClose(c(0.9995, 0.0)))
        );
    }

    #[test]
    fn mismatch_small_for_true_extensions() {
        let d = disc();
        let f = BoundarySamples::from_fn(&d, |z| 1.0 / (z - 0.4)).unwrap();
        let q = Polynomial::new(vec![c(-0.4, 0.0), c(1.0, 0.0)]);
        assert!(boundary_mismatch(&d, &f, &q).unwrap() < 1e-6);
        let f = BoundarySamples::from_fn(&d, |z| z.powi(3)).unwrap();
        assert!(boundary_mismatch(&d, &f, &Polynomial::one()).unwrap() < 1e-10);
        let f = BoundarySamples::from_fn(&d, |z| (z * 0.7).exp() + 1.0 / (z - c(0.1, 0.5))).unwrap();
        let q = Polynomial::new(vec![c(-0.1, -0.5), c(1.0, 0.0)]);
        assert!(boundary_mismatch(&d, &f, &q).unwrap() < 1e-10);
    }

    #[test]
    fn mismatch_bounded_away_for_essential_singularity() {
        let d = disc();
        let f = BoundarySamples::from_fn(&d, |z| (1.0 / z).exp()).unwrap();
        for n in 0..=5 {
            let mut coeffs = vec![c(0.0, 0.0); n + 1];
            coeffs[n] = c(1.0, 0.0);
            let q = Polynomial::new(coeffs);
            let m = boundary_mismatch(&d, &f, &q).unwrap();
            // ζ^n e^{1/ζ} misses its tail Σ_{k>n} ζ^{n-k}/k!, of size ≥ 1/(n+1)!
            let bound = 1.0 / (1..=n + 1).map(|k| k as f64).product::<f64>();
            assert!(m > 0.9 * bound, "n = {n}: {m}");
        }
    }

    #[test]
    fn spectral_derivative_of_trig_polynomial() {
        let m = 32;
        let vals: Vec<Complex64> = (0..m)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / m as f64;
                Complex64::cis(3.0 * t) + c(0.5, 0.0) * Complex64::cis(-2.0 * t)
            })
            .collect();
        let d = spectral_derivative(&vals);
        for (k, v) in d.iter().enumerate() {
            let t = 2.0 * PI * k as f64 / m as f64;
            let expect = c(0.0, 3.0) * Complex64::cis(3.0 * t) + c(0.0, -1.0) * Complex64::cis(-2.0 * t);
            assert_abs_diff_eq!((v - expect).norm(), 0.0, epsilon = 1e-12);
        }
    }
}
