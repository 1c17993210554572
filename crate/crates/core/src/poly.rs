//! Dense complex polynomials in the monomial basis.

use std::f64::consts::PI;

use num_complex::Complex64;

/// `Σ coeffs[k] z^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Polynomial { coeffs }
    }

    pub fn constant(c: Complex64) -> Self {
        Polynomial { coeffs: vec![c] }
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    /// Monic `Π (z - r)^m`.
    pub fn from_roots<'a, I>(roots: I) -> Self
    where
        I: IntoIterator<Item = &'a (Complex64, usize)>,
    {
        let mut p = Self::one();
        for &(r, m) in roots {
            for _ in 0..m {
                p = p.mul(&Polynomial::new(vec![-r, Complex64::new(1.0, 0.0)]));
            }
        }
        p
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Index of the last stored coefficient; `0` for constants and empties.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Polynomial::new(Vec::new());
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Drops leading (highest-power) coefficients whose modulus is at most
    /// `rel` times the largest one.
    pub fn trimmed(&self, rel: f64) -> Polynomial {
        let cut = rel * self.max_abs_coeff();
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.norm() <= cut) {
            coeffs.pop();
        }
        Polynomial::new(coeffs)
    }

    /// All roots by simultaneous Aberth–Ehrlich iteration. Multiple roots
    /// come back as tight clusters. The leading coefficient must be nonzero.
    pub fn roots(&self) -> Vec<Complex64> {
        let n = self.degree();
        if self.coeffs.len() < 2 {
            return Vec::new();
        }
        let lead = self.coeffs[n];
        let monic = Polynomial::new(self.coeffs.iter().map(|c| c / lead).collect());
        let dmonic = monic.derivative();

        // Cauchy bound on root moduli
        let bound = 1.0
            + monic.coeffs[..n]
                .iter()
                .map(|c| c.norm())
                .fold(0.0, f64::max);
        let radius = (monic.coeffs[0].norm().powf(1.0 / n as f64)).clamp(1e-3, bound);
        let mut z: Vec<Complex64> = (0..n)
            .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + 0.4))
            .collect();

        let mut converged = vec![false; n];
        for _ in 0..2000 {
            let mut all = true;
            for k in 0..n {
                if converged[k] {
                    continue;
                }
                let p = monic.eval(z[k]);
                if p == Complex64::new(0.0, 0.0) {
                    converged[k] = true;
                    continue;
                }
                let ratio = p / dmonic.eval(z[k]);
                let repulsion: Complex64 = (0..n)
                    .filter(|&j| j != k)
                    .map(|j| {
                        let d = z[k] - z[j];
                        if d == Complex64::new(0.0, 0.0) {
                            Complex64::new(0.0, 0.0)
                        } else {
                            1.0 / d
                        }
                    })
                    .sum();
                let denom = 1.0 - ratio * repulsion;
                let step = if denom.norm() > 0.0 && denom.is_finite() {
                    ratio / denom
                } else {
                    ratio
                };
                if !step.is_finite() {
                    converged[k] = true;
                    continue;
                }
                z[k] -= step;
                if step.norm() <= 1e-15 * (1.0 + z[k].norm()) {
                    converged[k] = true;
                } else {
                    all = false;
                }
            }
            if all {
                break;
            }
        }
        z
    }
}
