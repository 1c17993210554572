//! Candidate pole polynomials from the moment Hankel system, and the
//! detection pipeline built on them.
//!
//! With moments `c_j` of `f`, any nontrivial `D = (D_0, ..., D_N)` solving
//!
//! ```text
//! Σ_i c_{i+j} D_i = 0,   j = 1..N
//! ```
//!
//! gives `P(z) = Σ D_i z^i` such that `f` has a meromorphic extension with at
//! most `N` poles iff `P·f` extends holomorphically. The poles are then among
//! the roots of `P` inside the domain. Roots on the boundary are removable
//! and roots off the closure never matter.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::cauchy::{
    boundary_mismatch, compute_moments_about, holo_test, BoundarySamples, HoloTest,
    MeromorphicExtension, MomentSequence, ProbeConfig,
};
use crate::error::{Error, Result};
use crate::geometry::{DomainBoundary, RegionTag};
use crate::poly::Polynomial;

/// The `N × (N+1)` Hankel matrix `H[j-1][i] = c_{i+j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelSystem {
    n: usize,
    matrix: Vec<Vec<Complex64>>,
    moments: MomentSequence,
}

impl HankelSystem {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<Complex64>] {
        &self.matrix
    }

    pub fn moments(&self) -> &MomentSequence {
        &self.moments
    }

    pub fn apply(&self, d: &[Complex64]) -> Vec<Complex64> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(d).map(|(h, x)| h * x).sum())
            .collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix
            .iter()
            .flatten()
            .map(|h| h.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

pub fn build_hankel(moments: &MomentSequence, n: usize) -> Result<HankelSystem> {
    if n == 0 {
        return Err(Error::InvalidParameter("Hankel system needs N >= 1".into()));
    }
    if moments.len() < 2 * n {
        return Err(Error::InsufficientMoments {
            needed: 2 * n,
            available: moments.len(),
        });
    }
    let matrix = (1..=n)
        .map(|j| (0..=n).map(|i| moments.c(i + j)).collect())
        .collect();
    Ok(HankelSystem {
        n,
        matrix,
        moments: moments.clone(),
    })
}

/// Unit-norm minimizer of `‖H·D‖` and the singular values of `H`.
#[derive(Debug, Clone, PartialEq)]
pub struct NullVector {
    pub coeffs: Vec<Complex64>,
    /// Singular values of `H`, descending.
    pub singular_values: Vec<f64>,
    /// `‖H·D‖ / ‖H‖_F`, zero when `H` vanishes.
    pub residual: f64,
}

/// Right singular vector of the smallest singular value, phase-normalized
/// so that its first coefficient of largest modulus is real and positive.
pub fn null_vector(h: &HankelSystem) -> NullVector {
    let n = h.n;
    // Pad with a zero row: the square SVD then carries the full right basis.
    let padded = DMatrix::from_fn(n + 1, n + 1, |r, c| {
        if r < n {
            h.matrix[r][c]
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors were requested");
    let sv = svd.singular_values;
    let (min_idx, _) = sv
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |(bi, bv), (i, &v)| if v < bv { (i, v) } else { (bi, bv) });
    let mut coeffs: Vec<Complex64> = v_t.row(min_idx).iter().map(|v| v.conj()).collect();
    let norm = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    for c in coeffs.iter_mut() {
        *c /= norm;
    }
    normalize_phase(&mut coeffs);

    let mut singular_values: Vec<f64> = sv.iter().copied().collect();
    singular_values.sort_by(|a, b| b.total_cmp(a));
    singular_values.truncate(n);

    let hn = h.frobenius_norm();
    let hd = h
        .apply(&coeffs)
        .iter()
        .map(|v| v.norm_sqr())
        .sum::<f64>()
        .sqrt();
    NullVector {
        coeffs,
        singular_values,
        residual: if hn > 0.0 { hd / hn } else { 0.0 },
    }
}

fn normalize_phase(coeffs: &mut [Complex64]) {
    let max = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let lead = coeffs
        .iter()
        .copied()
        .find(|c| c.norm() >= max * (1.0 - 1e-9))
        .expect("a coefficient attains the maximum");
    let rot = lead.conj() / lead.norm();
    for c in coeffs.iter_mut() {
        *c *= rot;
    }
}

/// Thresholds for turning coefficients into clustered roots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootConfig {
    /// Trailing coefficients below `drop_rel · max|D_i|` are dropped.
    pub drop_rel: f64,
    /// Roots closer than `cluster_rel · (1 + max|root|)` merge.
    pub cluster_rel: f64,
    /// Clusters up to `merge_radius_rel · (1 + max|root|)` apart also merge
    /// when the polynomial with the merged root differs from the original
    /// by at most `merge_rel` in relative coefficient size. A split
    /// `m`-fold root spreads like `noise^{1/m}`, which can exceed the
    /// cluster radius while leaving the coefficients unchanged to noise
    /// level.
    pub merge_radius_rel: f64,
    pub merge_rel: f64,
}

impl Default for RootConfig {
    fn default() -> Self {
        RootConfig {
            drop_rel: 1e-10,
            cluster_rel: 1e-5,
            merge_radius_rel: 1e-2,
            merge_rel: 1e-10,
        }
    }
}

/// A root cluster: its centroid and size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub z: Complex64,
    pub multiplicity: usize,
}

/// Roots of the effective polynomial with clustered multiplicities.
pub fn poly_roots(coeffs: &[Complex64], cfg: &RootConfig) -> Result<Vec<Root>> {
    let p = Polynomial::new(coeffs.to_vec()).trimmed(cfg.drop_rel);
    if p.coeffs().is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    let raw = p.roots();
    if raw.is_empty() {
        return Ok(Vec::new());
    }
    let radius = cfg.cluster_rel * (1.0 + raw.iter().map(|z| z.norm()).fold(0.0, f64::max));

    // single-linkage clustering
    let mut parent: Vec<usize> = (0..raw.len()).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for i in 0..raw.len() {
        for j in i + 1..raw.len() {
            if (raw[i] - raw[j]).norm() <= radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b.max(a)] = a.min(b);
                }
            }
        }
    }
    let mut clusters: Vec<(usize, Vec<Complex64>)> = Vec::new();
    for (i, &z) in raw.iter().enumerate() {
        let r = find(&mut parent, i);
        match clusters.iter_mut().find(|(id, _)| *id == r) {
            Some((_, members)) => members.push(z),
            None => clusters.push((r, vec![z])),
        }
    }
    let wide = cfg.merge_radius_rel * (1.0 + raw.iter().map(|z| z.norm()).fold(0.0, f64::max));
    let clusters = merge_clusters(
        &p,
        clusters.into_iter().map(|(_, m)| m).collect(),
        wide,
        cfg.merge_rel,
    );
    let mut roots: Vec<Root> = clusters
        .into_iter()
        .map(|members| {
            let mean = members.iter().sum::<Complex64>() / members.len() as f64;
            Root {
                z: polish_multiple(&p, mean, members.len(), radius.max(spread(&members, mean))),
                multiplicity: members.len(),
            }
        })
        .collect();
    roots.sort_by(|a, b| {
        a.z.norm()
            .total_cmp(&b.z.norm())
            .then(a.z.arg().total_cmp(&b.z.arg()))
    });
    Ok(roots)
}

fn centroid(members: &[Complex64]) -> Complex64 {
    members.iter().sum::<Complex64>() / members.len() as f64
}

fn spread(members: &[Complex64], center: Complex64) -> f64 {
    members.iter().map(|z| (z - center).norm()).fold(0.0, f64::max)
}

/// Groups clusters that lie within `wide` of each other and merges each
/// group into one multiple root when that keeps the coefficients of `p` to
/// `tol` relative accuracy.
fn merge_clusters(p: &Polynomial, clusters: Vec<Vec<Complex64>>, wide: f64, tol: f64) -> Vec<Vec<Complex64>> {
    let n = clusters.len();
    let centers: Vec<Complex64> = clusters.iter().map(|c| centroid(c)).collect();
    let mut group: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in i + 1..n {
            if (centers[i] - centers[j]).norm() <= wide {
                let (gi, gj) = (group[i], group[j]);
                for g in group.iter_mut().filter(|g| **g == gj) {
                    *g = gi;
                }
            }
        }
    }
    let Some(&lead) = p.coeffs().last() else {
        return clusters;
    };
    let scale = p.max_abs_coeff();
    let mut out: Vec<Vec<Complex64>> = Vec::new();
    for g in 0..n {
        let members: Vec<usize> = (0..n).filter(|&i| group[i] == g).collect();
        if members.len() < 2 {
            out.extend(members.iter().map(|&i| clusters[i].clone()));
            continue;
        }
        let merged: Vec<Complex64> = members.iter().flat_map(|&i| clusters[i].iter().copied()).collect();
        let center = polish_multiple(p, centroid(&merged), merged.len(), wide);
        let mut roots: Vec<(Complex64, usize)> = vec![(center, merged.len())];
        roots.extend(
            (0..n)
                .filter(|&i| group[i] != g)
                .flat_map(|i| clusters[i].iter().map(|&z| (z, 1))),
        );
        let q = Polynomial::from_roots(&roots);
        let dev = q
            .coeffs()
            .iter()
            .zip(p.coeffs())
            .map(|(a, b)| (a * lead - b).norm())
            .fold(0.0, f64::max);
        if dev <= tol * scale {
            out.push(merged);
        } else {
            out.extend(members.iter().map(|&i| clusters[i].clone()));
        }
    }
    out
}

/// A root of multiplicity `m` is a simple root of `P^{(m-1)}`; Newton on
/// that derivative sharpens the cluster centroid. Falls back to the centroid
/// if the iteration wanders off the cluster.
fn polish_multiple(p: &Polynomial, start: Complex64, m: usize, radius: f64) -> Complex64 {
    if m < 2 {
        return start;
    }
    let mut d = p.clone();
    for _ in 1..m {
        d = d.derivative();
    }
    let dd = d.derivative();
    let mut z = start;
    for _ in 0..30 {
        let step = d.eval(z) / dd.eval(z);
        if !step.is_finite() {
            return start;
        }
        z -= step;
        if step.norm() <= 1e-16 * (1.0 + z.norm()) {
            break;
        }
    }
    if (z - start).norm() <= radius {
        z
    } else {
        start
    }
}

/// Roots sorted by where they fall relative to the domain.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RootPartition {
    pub inside: Vec<Root>,
    pub boundary: Vec<Root>,
    pub outside: Vec<Root>,
}

pub fn classify_roots(roots: &[Root], domain: &DomainBoundary) -> RootPartition {
    let mut part = RootPartition::default();
    for &r in roots {
        match domain.locate_point(r.z) {
            RegionTag::Interior => part.inside.push(r),
            RegionTag::NearBoundary => part.boundary.push(r),
            RegionTag::Hole(_) | RegionTag::Exterior => part.outside.push(r),
        }
    }
    part
}

/// `d_{N+j} = Σ_i D_i c_{i+N+j}` for `j = 1..=extra`: the coefficients of
/// `z^{-(N+j)}` in `P(z)·Σ c_k z^{-k}`.
pub fn tail_residuals(
    moments: &MomentSequence,
    coeffs: &[Complex64],
    extra: usize,
) -> Result<Vec<Complex64>> {
    let n = coeffs.len().saturating_sub(1);
    let needed = 2 * n + extra;
    if moments.len() < needed {
        return Err(Error::InsufficientMoments {
            needed,
            available: moments.len(),
        });
    }
    Ok((1..=extra)
        .map(|j| {
            coeffs
                .iter()
                .enumerate()
                .map(|(i, d)| d * moments.c(i + n + j))
                .sum()
        })
        .collect())
}

/// The polynomial `P` extracted from the Hankel system, with diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidatePolynomial {
    /// Coefficients of `P(ζ)`, ascending.
    pub coeffs: Vec<Complex64>,
    /// The null vector as solved, in `u = (ζ - center)/radius`.
    pub frame_coeffs: Vec<Complex64>,
    pub effective_degree: usize,
    pub roots: Vec<(Root, RegionTag)>,
    pub singular_values: Vec<f64>,
    pub null_residual: f64,
}

impl CandidatePolynomial {
    pub fn polynomial(&self) -> Polynomial {
        Polynomial::new(self.coeffs.clone())
    }
}

/// Builds `P` for bound `n` from the moments.
pub fn candidate_polynomial(
    moments: &MomentSequence,
    n: usize,
    domain: &DomainBoundary,
    cfg: &RootConfig,
) -> Result<CandidatePolynomial> {
    candidate_polynomial_about(moments, n, domain, cfg, Complex64::new(0.0, 0.0), 1.0)
}

/// Same as [`candidate_polynomial`] for moments taken in
/// `u = (ζ - center)/radius`; the annihilating condition is invariant under
/// that change of variable, so `P` and its roots are mapped back to `ζ`.
pub fn candidate_polynomial_about(
    moments: &MomentSequence,
    n: usize,
    domain: &DomainBoundary,
    cfg: &RootConfig,
    center: Complex64,
    radius: f64,
) -> Result<CandidatePolynomial> {
    let h = build_hankel(moments, n)?;
    let nv = null_vector(&h);
    let roots = poly_roots(&nv.coeffs, cfg)?;
    let effective_degree = roots.iter().map(|r| r.multiplicity).sum();
    let u = Polynomial::new(vec![-center / radius, Complex64::new(1.0 / radius, 0.0)]);
    // Horner in u
    let mut coeffs = vec![Complex64::new(0.0, 0.0)];
    for &d in nv.coeffs.iter().rev() {
        coeffs = Polynomial::new(coeffs).mul(&u).coeffs().to_vec();
        coeffs[0] += d;
    }
    coeffs.resize(nv.coeffs.len(), Complex64::new(0.0, 0.0));
    Ok(CandidatePolynomial {
        coeffs,
        frame_coeffs: nv.coeffs,
        effective_degree,
        roots: roots
            .into_iter()
            .map(|r| {
                let z = center + r.z * radius;
                (
                    Root {
                        z,
                        multiplicity: r.multiplicity,
                    },
                    domain.locate_point(z),
                )
            })
            .collect(),
        singular_values: nv.singular_values,
        null_residual: nv.residual,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectConfig {
    pub probe: ProbeConfig,
    pub roots: RootConfig,
    /// Tail coefficients reported past the `N` the system annihilates.
    pub extra: usize,
    /// Allowed `boundary_mismatch / scale(f)`.
    pub mismatch_tol: f64,
    /// Largest accepted pole bound; Hankel systems degrade quickly past it.
    pub max_n: usize,
}

impl Default for DetectConfig {
    fn default() -> Self {
        DetectConfig {
            probe: ProbeConfig::default(),
            roots: RootConfig::default(),
            extra: 8,
            mismatch_tol: 1e-6,
            max_n: 16,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holomorphic,
    Meromorphic,
    /// No meromorphic extension with at most this many poles.
    NotExtendible(usize),
}

impl Verdict {
    pub fn is_extendible(self) -> bool {
        !matches!(self, Verdict::NotExtendible(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionReport {
    pub verdict: Verdict,
    pub n_bound: usize,
    /// `P·f` passed the holomorphic test but the extension built from it
    /// does not reproduce the data.
    pub conflicting_evidence: bool,
    pub p: Polynomial,
    pub candidate: Option<CandidatePolynomial>,
    /// Zeros of `Q`, i.e. the poles of the extension.
    pub poles: Vec<Root>,
    /// Roots of `P` off the closed domain.
    pub outside_roots: Vec<Root>,
    pub discarded_boundary_roots: Vec<Root>,
    /// Interior roots of `P` that `f` did not need.
    pub pruned_roots: Vec<Root>,
    pub holo: HoloTest,
    /// `d_{N+j} = Σ D_i c_{i+N+j}`, in the same frame as `moments`.
    pub tail: Vec<Complex64>,
    pub mismatch: Option<f64>,
    /// Moments in `u = (ζ - center)/radius` about the domain center.
    pub moments: MomentSequence,
}

impl ExtensionReport {
    pub fn q(&self) -> Polynomial {
        q_from_roots(&self.poles)
    }

    pub fn pole_count(&self) -> usize {
        self.poles.iter().map(|r| r.multiplicity).sum()
    }

    pub fn max_tail(&self) -> f64 {
        self.tail.iter().map(|d| d.norm()).fold(0.0, f64::max)
    }

    /// Evaluator for the extension `h/Q`.
    pub fn extension<'a>(
        &self,
        domain: &'a DomainBoundary,
        f: &BoundarySamples,
    ) -> Result<MeromorphicExtension<'a>> {
        MeromorphicExtension::new(domain, f, self.q())
    }
}

fn q_from_roots(roots: &[Root]) -> Polynomial {
    let pairs: Vec<(Complex64, usize)> = roots.iter().map(|r| (r.z, r.multiplicity)).collect();
    Polynomial::from_roots(&pairs)
}

/// Decides whether `f` extends meromorphically with at most `n` poles and,
/// if so, locates them.
pub fn detect(
    domain: &DomainBoundary,
    f: &BoundarySamples,
    n: usize,
    cfg: &DetectConfig,
) -> Result<ExtensionReport> {
    if n > cfg.max_n {
        return Err(Error::InvalidParameter(format!(
            "pole bound {n} exceeds the configured maximum {}",
            cfg.max_n
        )));
    }
    domain.check_layout(f.values())?;
    let (center, radius) = (domain.center(), domain.radius());
    let moments = compute_moments_about(domain, f, (2 * n + cfg.extra).max(1), center, radius)?;
    let mut probe = cfg.probe.clone();
    probe.moment_checks += n;

    let candidate = if n == 0 {
        None
    } else {
        Some(candidate_polynomial_about(&moments, n, domain, &cfg.roots, center, radius)?)
    };
    let p = candidate
        .as_ref()
        .map(CandidatePolynomial::polynomial)
        .unwrap_or_else(Polynomial::one);
    let frame = candidate
        .as_ref()
        .map(|c| c.frame_coeffs.clone())
        .unwrap_or_else(|| vec![Complex64::new(1.0, 0.0)]);
    let tail = tail_residuals(&moments, &frame, cfg.extra)?;
    let holo = holo_test(domain, &f.times_poly(domain, &p), &probe)?;

    let mut report = ExtensionReport {
        verdict: Verdict::NotExtendible(n),
        n_bound: n,
        conflicting_evidence: false,
        p,
        candidate,
        poles: Vec::new(),
        outside_roots: Vec::new(),
        discarded_boundary_roots: Vec::new(),
        pruned_roots: Vec::new(),
        holo,
        tail,
        mismatch: None,
        moments,
    };
    if !report.holo.verdict {
        return Ok(report);
    }

    let roots: Vec<Root> = report
        .candidate
        .as_ref()
        .map(|c| c.roots.iter().map(|(r, _)| *r).collect())
        .unwrap_or_default();
    let part = classify_roots(&roots, domain);
    report.outside_roots = part.outside;
    report.discarded_boundary_roots = part.boundary;

    // With a nullspace of dimension > 1, P carries factors f does not need;
    // drop every interior root whose removal keeps Q·f holomorphic.
    let mut inside = part.inside;
    let mut pruned: Vec<Root> = Vec::new();
    for k in 0..inside.len() {
        while inside[k].multiplicity > 0 {
            inside[k].multiplicity -= 1;
            let q = q_from_roots(&inside);
            if holo_test(domain, &f.times_poly(domain, &q), &probe)?.verdict {
                match pruned.iter_mut().find(|r| r.z == inside[k].z) {
                    Some(r) => r.multiplicity += 1,
                    None => pruned.push(Root {
                        z: inside[k].z,
                        multiplicity: 1,
                    }),
                }
            } else {
                inside[k].multiplicity += 1;
                break;
            }
        }
    }
    inside.retain(|r| r.multiplicity > 0);
    report.pruned_roots = pruned;
    report.poles = inside;

    let mismatch = boundary_mismatch(domain, f, &report.q())?;
    report.mismatch = Some(mismatch);
    if mismatch <= cfg.mismatch_tol * f.scale() {
        report.verdict = if report.poles.is_empty() {
            Verdict::Holomorphic
        } else {
            Verdict::Meromorphic
        };
    } else {
        report.conflicting_evidence = true;
    }
    Ok(report)
}
