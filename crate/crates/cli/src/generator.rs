//! Synthetic boundary data with known ground truth.

use anyhow::{bail, Result};
use merext_core::{BoundarySamples, Complex64, DomainBoundary, Polynomial, RegionTag};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::formats::PoleJson;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntireFactor {
    Exp,
    Sin,
    Cos,
}

/// A boundary function. Complex numbers are `[re, im]` pairs and polynomial
/// coefficients are in ascending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GeneratorSpec {
    /// `R(z)/S(z) + E(z)` with `S = Π (z - w)^m`.
    Rational {
        poles: Vec<PoleJson>,
        #[serde(default = "one_coeffs")]
        numerator: Vec<[f64; 2]>,
        #[serde(default)]
        entire: Vec<[f64; 2]>,
    },
    /// `poly(z) · factor(scale · z)`, or just `poly(z)` with no factor.
    Entire {
        #[serde(default = "one_coeffs")]
        poly: Vec<[f64; 2]>,
        #[serde(default)]
        factor: Option<EntireFactor>,
        #[serde(default = "unit")]
        scale: [f64; 2],
    },
    /// `exp(1/(z - center))`.
    Essential {
        #[serde(default)]
        center: [f64; 2],
    },
    /// Complex conjugate of another generator.
    Conjugate { base: Box<GeneratorSpec> },
    Sum { terms: Vec<GeneratorSpec> },
}

fn one_coeffs() -> Vec<[f64; 2]> {
    vec![[1.0, 0.0]]
}

fn unit() -> [f64; 2] {
    [1.0, 0.0]
}

fn cx(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

fn poly(coeffs: &[[f64; 2]]) -> Polynomial {
    Polynomial::new(coeffs.iter().copied().map(cx).collect())
}

/// What is known about the extension of a generated function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    /// `None` when the generator gives no guarantee either way.
    pub extendible: Option<bool>,
    /// Poles inside the domain, when extendible.
    pub poles: Option<Vec<PoleJson>>,
}

impl GroundTruth {
    pub fn pole_count(&self) -> Option<usize> {
        self.poles
            .as_ref()
            .map(|p| p.iter().map(|p| p.multiplicity).sum())
    }
}

impl GeneratorSpec {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            GeneratorSpec::Rational {
                poles,
                numerator,
                entire,
            } => {
                let s: Complex64 = poles
                    .iter()
                    .map(|p| (z - p.z()).powu(p.multiplicity as u32))
                    .product();
                poly(numerator).eval(z) / s + poly(entire).eval(z)
            }
            GeneratorSpec::Entire {
                poly: coeffs,
                factor,
                scale,
            } => {
                let w = cx(*scale) * z;
                let g = match factor {
                    None => Complex64::new(1.0, 0.0),
                    Some(EntireFactor::Exp) => w.exp(),
                    Some(EntireFactor::Sin) => w.sin(),
                    Some(EntireFactor::Cos) => w.cos(),
                };
                poly(coeffs).eval(z) * g
            }
            GeneratorSpec::Essential { center } => (1.0 / (z - cx(*center))).exp(),
            GeneratorSpec::Conjugate { base } => base.eval(z).conj(),
            GeneratorSpec::Sum { terms } => terms.iter().map(|t| t.eval(z)).sum(),
        }
    }

    pub fn sample(&self, domain: &DomainBoundary) -> Result<BoundarySamples> {
        for (c, grid) in domain.grids().iter().enumerate() {
            for (i, &z) in grid.points.iter().enumerate() {
                if !self.eval(z).is_finite() {
                    bail!("generator is not finite at node ({c}, {i}), z = {z}");
                }
            }
        }
        Ok(BoundarySamples::from_fn(domain, |z| self.eval(z))?)
    }

    /// Rational generators are assumed to be in lowest terms.
    pub fn ground_truth(&self, domain: &DomainBoundary) -> GroundTruth {
        let interior = |z: Complex64| domain.locate_unbanded(z) == RegionTag::Interior;
        match self {
            GeneratorSpec::Rational { poles, .. } => GroundTruth {
                extendible: Some(true),
                poles: Some(poles.iter().copied().filter(|p| interior(p.z())).collect()),
            },
            GeneratorSpec::Entire { .. } => GroundTruth {
                extendible: Some(true),
                poles: Some(Vec::new()),
            },
            GeneratorSpec::Essential { center } => {
                if interior(cx(*center)) {
                    GroundTruth {
                        extendible: Some(false),
                        poles: None,
                    }
                } else {
                    GroundTruth {
                        extendible: Some(true),
                        poles: Some(Vec::new()),
                    }
                }
            }
            GeneratorSpec::Conjugate { .. } => GroundTruth {
                extendible: None,
                poles: None,
            },
            GeneratorSpec::Sum { terms } => {
                let parts: Vec<GroundTruth> = terms.iter().map(|t| t.ground_truth(domain)).collect();
                // one non-extendible term among extendible ones spoils the sum
                let bad = parts.iter().filter(|p| p.extendible == Some(false)).count();
                let unknown = parts.iter().any(|p| p.extendible.is_none());
                if unknown || bad > 1 {
                    return GroundTruth {
                        extendible: None,
                        poles: None,
                    };
                }
                if bad == 1 {
                    return GroundTruth {
                        extendible: Some(false),
                        poles: None,
                    };
                }
                // poles shared by several terms may partially cancel, so the
                // merged multiplicity is an upper bound
                let mut merged: Vec<PoleJson> = Vec::new();
                for p in parts.iter().flat_map(|p| p.poles.iter().flatten()) {
                    match merged.iter_mut().find(|q| q.z() == p.z()) {
                        Some(q) => q.multiplicity = q.multiplicity.max(p.multiplicity),
                        None => merged.push(*p),
                    }
                }
                GroundTruth {
                    extendible: Some(true),
                    poles: Some(merged),
                }
            }
        }
    }
}

/// A random `R/S + E` with `deg S <= max_degree` (repeated roots allowed),
/// distinct poles in `|z| <= pole_radius` at least `min_separation` apart,
/// `deg R < deg S` and `R` nonzero at every pole.
pub fn random_rational(
    seed: u64,
    max_degree: usize,
    pole_radius: f64,
    min_separation: f64,
) -> GeneratorSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let degree = rng.gen_range(1..=max_degree);
    let distinct = rng.gen_range(1..=degree);
    let mut mults = vec![1usize; distinct];
    for _ in distinct..degree {
        let k = rng.gen_range(0..distinct);
        mults[k] += 1;
    }
    let mut pts: Vec<Complex64> = Vec::with_capacity(distinct);
    while pts.len() < distinct {
        let r = pole_radius * rng.gen::<f64>().sqrt();
        let z = Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU));
        if pts.iter().all(|w| (w - z).norm() >= min_separation) {
            pts.push(z);
        }
    }
    let poles: Vec<PoleJson> = pts
        .iter()
        .zip(&mults)
        .map(|(z, &m)| PoleJson {
            re: z.re,
            im: z.im,
            multiplicity: m,
        })
        .collect();
    let coeff = |rng: &mut ChaCha8Rng| [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
    let numerator = loop {
        let r: Vec<[f64; 2]> = (0..degree).map(|_| coeff(&mut rng)).collect();
        let rp = poly(&r);
        // keep R away from zero at the poles so no multiplicity cancels
        if pts.iter().all(|&w| rp.eval(w).norm() > 0.1) {
            break r;
        }
    };
    let entire_degree = rng.gen_range(0..=3);
    let entire = (0..=entire_degree).map(|_| coeff(&mut rng)).collect();
    GeneratorSpec::Rational {
        poles,
        numerator,
        entire,
    }
}
