//! On-disk formats: domain specs (JSON), boundary samples (CSV), detection
//! and probe reports (JSON) and the plot-ready CSV tables.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use merext_core::argument::{ProbeReport, TrialStatus};
use merext_core::poles::Root;
use merext_core::{BoundaryCurve, BoundarySamples, Complex64, DomainBoundary, ExtensionReport, Verdict};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSpec {
    /// `[k, re(a_k), im(a_k)]` triples.
    pub coeffs: Vec<(i32, f64, f64)>,
    #[serde(default = "default_nodes")]
    pub nodes: usize,
}

fn default_nodes() -> usize {
    merext_core::geometry::DEFAULT_NODES
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub curves: Vec<CurveSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_band: Option<f64>,
}

impl DomainSpec {
    pub fn circle(center: Complex64, radius: f64, nodes: usize) -> CurveSpec {
        CurveSpec {
            coeffs: vec![(0, center.re, center.im), (1, radius, 0.0)],
            nodes,
        }
    }

    /// Builds the domain, with `nodes` overriding every curve's node count.
    pub fn build(&self, nodes: Option<usize>) -> Result<DomainBoundary> {
        let curves = self
            .curves
            .iter()
            .map(|c| {
                BoundaryCurve::new(
                    c.coeffs
                        .iter()
                        .map(|&(k, re, im)| (k, Complex64::new(re, im)))
                        .collect(),
                    nodes.unwrap_or(c.nodes),
                )
            })
            .collect::<merext_core::Result<Vec<_>>>()?;
        let mut domain = DomainBoundary::new(curves)?;
        if let Some(band) = self.delta_band {
            domain = domain.with_delta_band(band)?;
        }
        Ok(domain)
    }
}

pub fn read_domain(path: &Path, nodes: Option<usize>) -> Result<DomainBoundary> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading domain file {}", path.display()))?;
    let spec: DomainSpec = serde_json::from_str(&text)
        .with_context(|| format!("parsing domain file {}", path.display()))?;
    spec.build(nodes)
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn samples_to_csv(samples: &BoundarySamples) -> String {
    let mut out = String::from("curve_index,node_index,re_f,im_f\n");
    for (c, vals) in samples.values().iter().enumerate() {
        for (i, v) in vals.iter().enumerate() {
            let _ = writeln!(out, "{c},{i},{},{}", fmt_f64(v.re), fmt_f64(v.im));
        }
    }
    out
}

/// Parses a samples table; records must cover every node exactly once.
pub fn samples_from_csv(domain: &DomainBoundary, text: &str) -> Result<BoundarySamples> {
    let mut values: Vec<Vec<Option<Complex64>>> = domain
        .grids()
        .iter()
        .map(|g| vec![None; g.len()])
        .collect();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    for (line, record) in reader.records().enumerate() {
        let record = record.with_context(|| format!("samples record {}", line + 1))?;
        if record.len() != 4 {
            bail!("samples record {}: expected 4 fields, got {}", line + 1, record.len());
        }
        let curve: usize = record[0].parse().context("curve_index")?;
        let node: usize = record[1].parse().context("node_index")?;
        let re: f64 = record[2].parse().context("re_f")?;
        let im: f64 = record[3].parse().context("im_f")?;
        let slot = values
            .get_mut(curve)
            .and_then(|v| v.get_mut(node))
            .ok_or_else(|| anyhow!("sample ({curve}, {node}) is outside the domain grid"))?;
        if slot.replace(Complex64::new(re, im)).is_some() {
            bail!("duplicate sample ({curve}, {node})");
        }
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(c, v)| {
            v.into_iter()
                .enumerate()
                .map(|(i, s)| s.ok_or_else(|| anyhow!("missing sample ({c}, {i})")))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundarySamples::new(domain, values)?)
}

pub fn read_samples(domain: &DomainBoundary, path: &Path) -> Result<BoundarySamples> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading samples file {}", path.display()))?;
    samples_from_csv(domain, &text).with_context(|| format!("in samples file {}", path.display()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(z: Complex64) -> Self {
        ComplexJson { re: z.re, im: z.im }
    }
}

impl From<ComplexJson> for Complex64 {
    fn from(z: ComplexJson) -> Self {
        Complex64::new(z.re, z.im)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoleJson {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
}

impl From<&Root> for PoleJson {
    fn from(r: &Root) -> Self {
        PoleJson {
            re: r.z.re,
            im: r.z.im,
            multiplicity: r.multiplicity,
        }
    }
}

impl PoleJson {
    pub fn z(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualsJson {
    pub holo: f64,
    pub moment: f64,
    pub tail: Vec<f64>,
    pub mismatch: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub verdict: String,
    pub n_bound: usize,
    pub conflicting_evidence: bool,
    pub poles: Vec<PoleJson>,
    pub residuals: ResidualsJson,
    pub singular_values: Vec<f64>,
    pub p_coeffs: Vec<ComplexJson>,
    pub discarded_boundary_roots: Vec<PoleJson>,
    pub outside_roots: Vec<PoleJson>,
    pub pruned_roots: Vec<PoleJson>,
}

pub fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Holomorphic => "holomorphic",
        Verdict::Meromorphic => "meromorphic",
        Verdict::NotExtendible(_) => "not_extendible",
    }
}

impl From<&ExtensionReport> for ReportJson {
    fn from(r: &ExtensionReport) -> Self {
        ReportJson {
            verdict: verdict_name(r.verdict).to_string(),
            n_bound: r.n_bound,
            conflicting_evidence: r.conflicting_evidence,
            poles: r.poles.iter().map(PoleJson::from).collect(),
            residuals: ResidualsJson {
                holo: r.holo.max_residual,
                moment: r.holo.moment_residual,
                tail: r.tail.iter().map(|d| d.norm()).collect(),
                mismatch: r.mismatch,
            },
            singular_values: r
                .candidate
                .as_ref()
                .map(|c| c.singular_values.clone())
                .unwrap_or_default(),
            p_coeffs: r.p.coeffs().iter().map(|&c| c.into()).collect(),
            discarded_boundary_roots: r.discarded_boundary_roots.iter().map(PoleJson::from).collect(),
            outside_roots: r.outside_roots.iter().map(PoleJson::from).collect(),
            pruned_roots: r.pruned_roots.iter().map(PoleJson::from).collect(),
        }
    }
}

impl ReportJson {
    /// Exit status for a detection verdict.
    pub fn exit_code(&self) -> i32 {
        match (self.verdict.as_str(), self.conflicting_evidence) {
            (_, true) => 4,
            ("holomorphic" | "meromorphic", false) => 0,
            _ => 3,
        }
    }
}

pub fn poles_to_csv(poles: &[PoleJson]) -> String {
    let mut out = String::from("re,im,multiplicity\n");
    for p in poles {
        let _ = writeln!(out, "{},{},{}", fmt_f64(p.re), fmt_f64(p.im), p.multiplicity);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialJson {
    pub seed: u64,
    pub complexity: usize,
    pub status: String,
    pub winding: Option<i32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReportJson {
    pub n_bound: usize,
    pub attempted: usize,
    pub admissible: usize,
    pub unresolved: usize,
    pub min_winding: Option<i32>,
    pub violations: Vec<TrialJson>,
    pub trials: Vec<TrialJson>,
}

impl From<&ProbeReport> for ProbeReportJson {
    fn from(r: &ProbeReport) -> Self {
        let trial = |t: &merext_core::argument::TrialOutcome| {
            let (status, winding) = match t.status {
                TrialStatus::Resolved(w) => ("resolved", Some(w)),
                TrialStatus::Inadmissible => ("inadmissible", None),
                TrialStatus::Unresolved => ("unresolved", None),
            };
            TrialJson {
                seed: t.seed,
                complexity: t.complexity,
                status: status.to_string(),
                winding,
            }
        };
        ProbeReportJson {
            n_bound: r.n_bound,
            attempted: r.attempted,
            admissible: r.admissible,
            unresolved: r.unresolved,
            min_winding: r.min_winding,
            violations: r.violations.iter().map(trial).collect(),
            trials: r.trials.iter().map(trial).collect(),
        }
    }
}

/// Evaluation points from a `re,im` CSV table.
pub fn points_from_csv(text: &str) -> Result<Vec<Complex64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    reader
        .records()
        .enumerate()
        .map(|(i, rec)| {
            let rec = rec.with_context(|| format!("point record {}", i + 1))?;
            if rec.len() != 2 {
                bail!("point record {}: expected re,im", i + 1);
            }
            Ok(Complex64::new(rec[0].parse()?, rec[1].parse()?))
        })
        .collect()
}

pub fn parse_point(text: &str) -> Result<Complex64> {
    let (re, im) = text
        .split_once(',')
        .ok_or_else(|| anyhow!("point {text:?} is not of the form re,im"))?;
    Ok(Complex64::new(re.trim().parse()?, im.trim().parse()?))
}
