//! Winding numbers of nonvanishing boundary functions and the probe harness
//! for the bound `W(Pf + Q) >= -N`.
//!
//! If `f` extends meromorphically with `N` poles, then for every `P, Q`
//! holomorphic on the closed domain with `Pf + Q` zero-free on the boundary,
//! the argument principle gives `W(Pf + Q) >= -N`. Probes draw `P` and `Q`
//! from rational functions with poles off the closed domain. A violation is
//! evidence against extendibility; the absence of one proves nothing.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cauchy::{cauchy_transform_unchecked, BoundarySamples};
use crate::error::{Error, Result};
use crate::geometry::{DomainBoundary, RegionTag};
use crate::poly::Polynomial;

/// Argument steps at or above this are not trusted.
const MAX_STEP: f64 = PI / 2.0;
/// Sampling may grow to `2^MAX_REFINEMENTS` times the grid.
const MAX_REFINEMENTS: u32 = 8;

type ParamFn<'a> = Box<dyn Fn(usize, f64) -> Complex64 + Send + Sync + 'a>;

/// A nonvanishing function on the boundary, known at the grid nodes and
/// optionally evaluable at any curve parameter.
pub struct LoopFunction<'a> {
    base: Vec<Vec<Complex64>>,
    min_modulus: f64,
    scale: f64,
    eval: Option<ParamFn<'a>>,
}

impl<'a> LoopFunction<'a> {
    /// File-backed data: never refined, so large argument steps are reported
    /// as unresolved instead of being interpolated.
    pub fn sampled(samples: &BoundarySamples) -> Self {
        Self::from_values(samples.values().to_vec(), None)
    }

    /// `φ(ζ)` from a closed-form function of the boundary point.
    pub fn analytic<F>(domain: &'a DomainBoundary, f: F) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'a,
    {
        let base = domain.sample(&f);
        let curves = domain.curves();
        Self::from_values(base, Some(Box::new(move |c, t| f(curves[c].eval(t)))))
    }

    /// `φ` as a function of `(curve index, parameter t)`.
    pub fn parametric<F>(domain: &DomainBoundary, f: F) -> Self
    where
        F: Fn(usize, f64) -> Complex64 + Send + Sync + 'a,
    {
        let base = domain
            .grids()
            .iter()
            .enumerate()
            .map(|(c, g)| g.params.iter().map(|&t| f(c, t)).collect())
            .collect();
        Self::from_values(base, Some(Box::new(f)))
    }

    fn from_values(base: Vec<Vec<Complex64>>, eval: Option<ParamFn<'a>>) -> Self {
        let (min_modulus, scale) = base
            .iter()
            .flatten()
            .map(|v| v.norm())
            .fold((f64::INFINITY, 0.0_f64), |(lo, hi), m| (lo.min(m), hi.max(m)));
        LoopFunction {
            base,
            min_modulus,
            scale,
            eval,
        }
    }

    pub fn min_modulus(&self) -> f64 {
        self.min_modulus
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn is_refinable(&self) -> bool {
        self.eval.is_some()
    }
}

fn near_zero(min: f64, scale: f64) -> bool {
    !(min > 1e-14 * scale) || !min.is_finite()
}

fn max_step(values: &[Complex64]) -> f64 {
    let n = values.len();
    (0..n)
        .map(|k| (values[(k + 1) % n] / values[k]).arg().abs())
        .fold(0.0, f64::max)
}

fn total_argument(values: &[Complex64]) -> f64 {
    let n = values.len();
    (0..n).map(|k| (values[(k + 1) % n] / values[k]).arg()).sum()
}

/// Winding number of `φ` around the origin along the oriented boundary.
pub fn winding_number(domain: &DomainBoundary, phi: &LoopFunction) -> Result<i32> {
    domain.check_layout(&phi.base)?;
    if near_zero(phi.min_modulus, phi.scale) {
        return Err(Error::NearZero(phi.min_modulus));
    }
    let mut total = 0;
    for (c, grid) in domain.grids().iter().enumerate() {
        let mut values = phi.base[c].clone();
        let mut m = grid.len();
        let mut level = 0;
        loop {
            let step = max_step(&values);
            if step < MAX_STEP {
                break;
            }
            match &phi.eval {
                Some(eval) if level < MAX_REFINEMENTS => {
                    m *= 2;
                    level += 1;
                    values = (0..m)
                        .map(|k| eval(c, 2.0 * PI * k as f64 / m as f64))
                        .collect();
                    let min = values.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
                    if near_zero(min, phi.scale) {
                        return Err(Error::NearZero(min));
                    }
                }
                _ => return Err(Error::Unresolved { curve: c, step }),
            }
        }
        let turns = total_argument(&values) / (2.0 * PI);
        total += grid.sign as i32 * turns.round() as i32;
    }
    Ok(total)
}

/// Both sides of `W(f) = ν₀ - ν_p` for an extension with denominator `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArgumentCheck {
    pub winding: i32,
    /// Zeros of the extension, counted by the winding of `h = Q·f̃` just
    /// inside the boundary.
    pub zeros: i32,
    pub poles: usize,
}

impl ArgumentCheck {
    pub fn zeros_minus_poles(&self) -> i32 {
        self.zeros - self.poles as i32
    }
}

/// Counts zeros of the extension `h/q` through the winding of `h` on the
/// boundary pushed inward by the probe clearance; zeros closer to the
/// boundary than that are not seen.
pub fn argument_principle_check(
    domain: &DomainBoundary,
    f: &BoundarySamples,
    q: &Polynomial,
) -> Result<ArgumentCheck> {
    let winding = winding_number(domain, &LoopFunction::sampled(f))?;
    let g = f.times_poly(domain, q);
    let eps = domain.probe_clearance();
    let curves = domain.curves();
    let grids = domain.grids();
    let shrunk = LoopFunction::parametric(domain, |c, t| {
        let d = curves[c].derivative(t) * grids[c].sign;
        let z = curves[c].eval(t) + Complex64::i() * d / d.norm() * eps;
        cauchy_transform_unchecked(domain, &g, z)
    });
    let zeros = winding_number(domain, &shrunk)?;
    let poles = q.trimmed(0.0).degree();
    Ok(ArgumentCheck {
        winding,
        zeros,
        poles,
    })
}

/// `Σ b_k u^k + Σ r_j / (z - w_j)` with `u = (z - center)/radius`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeFunction {
    pub center: Complex64,
    pub radius: f64,
    pub poly: Vec<Complex64>,
    /// `(pole w_j, residue r_j)`.
    pub poles: Vec<(Complex64, Complex64)>,
}

impl ProbeFunction {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let u = (z - self.center) / self.radius;
        let poly = self
            .poly
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &b| acc * u + b);
        poly + self
            .poles
            .iter()
            .map(|&(w, r)| r / (z - w))
            .sum::<Complex64>()
    }
}

/// A pair `P, Q` of rational functions holomorphic on the closed domain.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalProbe {
    pub p: ProbeFunction,
    pub q: ProbeFunction,
    pub seed: u64,
    pub complexity: usize,
}

impl RationalProbe {
    pub fn pole_locations(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.p.poles.iter().chain(&self.q.poles).map(|&(w, _)| w)
    }
}

/// Minimum distance from probe poles to the boundary.
pub fn probe_margin(domain: &DomainBoundary) -> f64 {
    (2.0 * domain.delta_band()).max(4.0 * domain.node_spacing())
}

fn unit_disc_point(rng: &mut ChaCha8Rng) -> Complex64 {
    let r = rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, 2.0 * PI * rng.gen::<f64>())
}

fn place_pole(domain: &DomainBoundary, rng: &mut ChaCha8Rng, margin: f64) -> Complex64 {
    let holes: Vec<usize> = domain.hole_indices().collect();
    let target = rng.gen_range(0..=holes.len());
    if target < holes.len() {
        let j = holes[target];
        let pts = &domain.grids()[j].points;
        let (mut lo, mut hi) = (pts[0], pts[0]);
        for p in pts {
            lo = Complex64::new(lo.re.min(p.re), lo.im.min(p.im));
            hi = Complex64::new(hi.re.max(p.re), hi.im.max(p.im));
        }
        for _ in 0..1000 {
            let z = Complex64::new(
                rng.gen_range(lo.re..=hi.re),
                rng.gen_range(lo.im..=hi.im),
            );
            if domain.locate_unbanded(z) == RegionTag::Hole(j) && domain.boundary_distance(z) >= margin {
                return z;
            }
        }
    }
    let center = domain.center();
    let radius = domain.radius();
    loop {
        let rho = rng.gen_range(1.0..3.0);
        let z = center + Complex64::from_polar(rho * radius, 2.0 * PI * rng.gen::<f64>());
        if domain.locate_unbanded(z) == RegionTag::Exterior && domain.boundary_distance(z) >= margin {
            return z;
        }
    }
}

/// Deterministic random `P, Q` with at most `complexity` poles in total,
/// spread over the exterior and the holes, and polynomial parts of degree
/// at most `complexity`.
pub fn make_probe(domain: &DomainBoundary, seed: u64, complexity: usize) -> RationalProbe {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let margin = probe_margin(domain);
    let center = domain.center();
    let radius = domain.radius();
    let part = |rng: &mut ChaCha8Rng| ProbeFunction {
        center,
        radius,
        poly: {
            let deg = rng.gen_range(0..=complexity);
            (0..=deg).map(|_| unit_disc_point(rng)).collect()
        },
        poles: Vec::new(),
    };
    let mut p = part(&mut rng);
    let mut q = part(&mut rng);
    let pole_count = if complexity == 0 {
        0
    } else {
        rng.gen_range(0..=complexity)
    };
    for _ in 0..pole_count {
        let w = place_pole(domain, &mut rng, margin);
        let r = unit_disc_point(&mut rng) * (0.5 * radius);
        if rng.gen::<bool>() {
            p.poles.push((w, r));
        } else {
            q.poles.push((w, r));
        }
    }
    RationalProbe {
        p,
        q,
        seed,
        complexity,
    }
}

/// Boundary data for the harness.
#[derive(Clone, Copy)]
pub enum BoundaryData<'a> {
    Sampled(&'a BoundarySamples),
    Analytic(&'a (dyn Fn(Complex64) -> Complex64 + Sync)),
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarnessConfig {
    /// Trial `k` uses complexity `k mod (max_complexity + 1)`.
    pub max_complexity: usize,
    /// Trials with `min |Pf+Q| < rho_min_rel · max |Pf+Q|` are skipped.
    pub rho_min_rel: f64,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            max_complexity: 3,
            rho_min_rel: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrialStatus {
    Resolved(i32),
    /// `Pf + Q` comes too close to zero on the boundary.
    Inadmissible,
    /// Argument steps stayed too large at the sampling cap.
    Unresolved,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOutcome {
    pub seed: u64,
    pub complexity: usize,
    pub status: TrialStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub n_bound: usize,
    pub trials: Vec<TrialOutcome>,
    pub attempted: usize,
    pub admissible: usize,
    pub unresolved: usize,
    pub min_winding: Option<i32>,
    /// Trials with `W(Pf+Q) < -N`.
    pub violations: Vec<TrialOutcome>,
}

fn trial_seed(seed: u64, trial: usize) -> u64 {
    // splitmix64 step
    let mut z = seed ^ (trial as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs `trials` random probes and collects `W(Pf + Q)`.
pub fn probe_harness(
    domain: &DomainBoundary,
    f: BoundaryData<'_>,
    n: usize,
    trials: usize,
    seed: u64,
    cfg: &HarnessConfig,
) -> Result<ProbeReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    if let BoundaryData::Sampled(s) = f {
        domain.check_layout(s.values())?;
    }
    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let s = trial_seed(seed, k);
            let complexity = k % (cfg.max_complexity + 1);
            let probe = make_probe(domain, s, complexity);
            let status = run_trial(domain, f, &probe, cfg.rho_min_rel);
            TrialOutcome {
                seed: s,
                complexity,
                status,
            }
        })
        .collect();

    let windings: Vec<i32> = outcomes
        .iter()
        .filter_map(|o| match o.status {
            TrialStatus::Resolved(w) => Some(w),
            _ => None,
        })
        .collect();
    if windings.is_empty() {
        return Err(Error::AllTrialsInadmissible);
    }
    let violations = outcomes
        .iter()
        .filter(|o| matches!(o.status, TrialStatus::Resolved(w) if w < -(n as i32)))
        .copied()
        .collect();
    Ok(ProbeReport {
        n_bound: n,
        attempted: trials,
        admissible: outcomes
            .iter()
            .filter(|o| o.status != TrialStatus::Inadmissible)
            .count(),
        unresolved: outcomes
            .iter()
            .filter(|o| o.status == TrialStatus::Unresolved)
            .count(),
        min_winding: windings.iter().copied().min(),
        violations,
        trials: outcomes,
    })
}

fn run_trial(
    domain: &DomainBoundary,
    f: BoundaryData<'_>,
    probe: &RationalProbe,
    rho_min_rel: f64,
) -> TrialStatus {
    let combine = |z: Complex64, fz: Complex64| probe.p.eval(z) * fz + probe.q.eval(z);
    let phi = match f {
        BoundaryData::Sampled(s) => LoopFunction::sampled(&s.map(domain, combine)),
        BoundaryData::Analytic(func) => LoopFunction::analytic(domain, move |z| combine(z, func(z))),
    };
    if !(phi.min_modulus() >= rho_min_rel * phi.scale()) {
        return TrialStatus::Inadmissible;
    }
    match winding_number(domain, &phi) {
        Ok(w) => TrialStatus::Resolved(w),
        Err(Error::NearZero(_)) => TrialStatus::Inadmissible,
        Err(_) => TrialStatus::Unresolved,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn disc() -> DomainBoundary {
        DomainBoundary::unit_disc(256).unwrap()
    }

    #[test]
    fn winding_examples() {
        let d = disc();
        let w = |f: fn(Complex64) -> Complex64| {
            winding_number(&d, &LoopFunction::sampled(&BoundarySamples::from_fn(&d, f).unwrap()))
        };
        assert_eq!(w(|z| z.powi(3)), Ok(3));
        assert_eq!(w(|_| c(5.0, 0.0)), Ok(0));
        assert_eq!(w(|z| 1.0 / (z - 0.3)), Ok(-1));
    }

    #[test]
    fn winding_on_annulus_counts_both_curves() {
        let a = DomainBoundary::annulus(c(0.0, 0.0), 0.5, 1.0, 128).unwrap();
        // z: outer +1, inner (clockwise) -1
        let f = BoundarySamples::from_fn(&a, |z| z).unwrap();
        assert_eq!(winding_number(&a, &LoopFunction::sampled(&f)), Ok(0));
        // (z - 0.75): one zero in the annulus
        let f = BoundarySamples::from_fn(&a, |z| z - 0.75).unwrap();
        assert_eq!(winding_number(&a, &LoopFunction::sampled(&f)), Ok(1));
    }

    #[test]
    fn vanishing_loop_is_near_zero() {
        let d = disc();
        let f = BoundarySamples::from_fn(&d, |z| z - 1.0).unwrap();
        assert!(matches!(
            winding_number(&d, &LoopFunction::sampled(&f)),
            Err(Error::NearZero(_))
        ));
    }

    #[test]
    fn coarse_samples_are_unresolved_but_analytic_refines() {
        let d = DomainBoundary::unit_disc(16).unwrap();
        let f = |z: Complex64| z.powi(7);
        let sampled = BoundarySamples::from_fn(&d, f).unwrap();
        assert!(matches!(
            winding_number(&d, &LoopFunction::sampled(&sampled)),
            Err(Error::Unresolved { curve: 0, .. })
        ));
        assert_eq!(winding_number(&d, &LoopFunction::analytic(&d, f)), Ok(7));
    }

    #[test]
    fn argument_principle_examples() {
        let d = disc();
        let check = |f: fn(Complex64) -> Complex64, q: Polynomial| {
            argument_principle_check(&d, &BoundarySamples::from_fn(&d, f).unwrap(), &q).unwrap()
        };
        let r = check(|z| 1.0 / (z - 0.3), Polynomial::new(vec![c(-0.3, 0.0), c(1.0, 0.0)]));
        assert_eq!((r.winding, r.zeros, r.poles), (-1, 0, 1));
        let r = check(
            |z| (z - 0.5) / (z - 0.2),
            Polynomial::new(vec![c(-0.2, 0.0), c(1.0, 0.0)]),
        );
        assert_eq!((r.winding, r.zeros, r.poles), (0, 1, 1));
        let r = check(|z| z, Polynomial::one());
        assert_eq!((r.winding, r.zeros_minus_poles()), (1, 1));
    }

    #[test]
    fn constant_probe_at_zero_complexity() {
        let d = disc();
        let p = make_probe(&d, 7, 0);
        assert_eq!(p.p.poly.len(), 1);
        assert_eq!(p.q.poly.len(), 1);
        assert!(p.p.poles.is_empty() && p.q.poles.is_empty());
    }

    #[test]
    fn probes_are_deterministic() {
        let d = disc();
        assert_eq!(make_probe(&d, 99, 3), make_probe(&d, 99, 3));
        assert_ne!(make_probe(&d, 99, 3), make_probe(&d, 100, 3));
    }

    #[test]
    fn annulus_probe_poles_avoid_domain() {
        let a = DomainBoundary::annulus(c(0.0, 0.0), 0.5, 1.0, 256).unwrap();
        let margin = probe_margin(&a);
        let mut in_hole = 0;
        for seed in 0..200 {
            let p = make_probe(&a, seed, 2);
            for w in p.pole_locations() {
                match a.locate_point(w) {
                    RegionTag::Hole(1) => in_hole += 1,
                    RegionTag::Exterior => {}
                    other => panic!("pole {w} landed in {other:?}"),
                }
                assert!(a.boundary_distance(w) >= margin);
            }
        }
        assert!(in_hole > 0);
    }

    #[test]
    fn harness_single_pole_has_no_violations() {
        let d = disc();
        let f = |z: Complex64| 1.0 / (z - c(0.2, 0.3));
        let r = probe_harness(&d, BoundaryData::Analytic(&f), 1, 200, 11, &HarnessConfig::default())
            .unwrap();
        assert!(r.violations.is_empty());
        assert_eq!(r.min_winding, Some(-1));
        assert_eq!(r.trials.len(), 200);
    }

    #[test]
    fn harness_holomorphic_data_has_no_negative_winding() {
        let d = disc();
        let f = BoundarySamples::from_fn(&d, |z| z * z).unwrap();
        let r = probe_harness(&d, BoundaryData::Sampled(&f), 0, 100, 5, &HarnessConfig::default())
            .unwrap();
        assert!(r.violations.is_empty());
        assert!(r.min_winding.unwrap() >= 0);
    }

    #[test]
    fn harness_is_deterministic() {
        let d = disc();
        let f = BoundarySamples::from_fn(&d, |z| 1.0 / (z - 0.3)).unwrap();
        let cfg = HarnessConfig::default();
        let a = probe_harness(&d, BoundaryData::Sampled(&f), 1, 50, 3, &cfg).unwrap();
        let b = probe_harness(&d, BoundaryData::Sampled(&f), 1, 50, 3, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn harness_rejects_zero_trials() {
        let d = disc();
        let f = BoundarySamples::zeros(&d);
        assert!(probe_harness(&d, BoundaryData::Sampled(&f), 0, 0, 1, &HarnessConfig::default()).is_err());
    }
}
