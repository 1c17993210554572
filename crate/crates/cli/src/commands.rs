//! Subcommands. Each returns an [`Outcome`]; nothing touches the filesystem
//! for output until [`Outcome::commit`].

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use merext_core::argument::{probe_harness, winding_number, BoundaryData, HarnessConfig, LoopFunction};
use merext_core::cauchy::{compute_moments, MeromorphicExtension};
use merext_core::poles::RootConfig;
use merext_core::{
    detect, BoundarySamples, Complex64, DetectConfig, DomainBoundary, Error, Polynomial, ProbeConfig,
};

use crate::formats::{
    fmt_f64, parse_point, points_from_csv, poles_to_csv, read_domain, read_samples, samples_to_csv,
    verdict_name, ProbeReportJson, ReportJson,
};
use crate::generator::GeneratorSpec;

#[derive(Debug, Parser)]
#[command(
    name = "merext",
    version,
    about = "Meromorphic extendibility of boundary data on planar domains"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Domain description (JSON).
    #[arg(long)]
    pub domain: PathBuf,
    /// Override the node count of every curve.
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Numerical tolerances shared by the analysis commands.
#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Relative threshold of the holomorphic test.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Allowed boundary mismatch relative to max |f|.
    #[arg(long, default_value_t = 1e-6)]
    pub mismatch_tol: f64,
    /// Absolute width of the boundary band; 1e-3 times the diameter by default.
    #[arg(long)]
    pub delta_band: Option<f64>,
    /// Root clustering radius relative to 1 + max |root|.
    #[arg(long, default_value_t = 1e-5)]
    pub cluster: f64,
    /// Largest pole bound accepted.
    #[arg(long, default_value_t = 16)]
    pub max_n: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tol: 1e-12,
            mismatch_tol: 1e-6,
            delta_band: None,
            cluster: 1e-5,
            max_n: 16,
        }
    }
}

impl RunConfig {
    pub fn detect_config(&self) -> DetectConfig {
        DetectConfig {
            probe: ProbeConfig {
                tol_rel: self.tol,
                ..ProbeConfig::default()
            },
            roots: RootConfig {
                cluster_rel: self.cluster,
                ..RootConfig::default()
            },
            mismatch_tol: self.mismatch_tol,
            max_n: self.max_n,
            ..DetectConfig::default()
        }
    }

    fn apply(&self, domain: DomainBoundary) -> Result<DomainBoundary> {
        Ok(match self.delta_band {
            Some(b) => domain.with_delta_band(b)?,
            None => domain,
        })
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a domain and describe its layout.
    DomainCheck {
        #[command(flatten)]
        common: Common,
    },
    /// Sample a generator on the boundary grid.
    Synth {
        #[command(flatten)]
        common: Common,
        /// Generator description (JSON).
        #[arg(long)]
        generator: PathBuf,
        /// Ground-truth sidecar; `<out>.truth.json` by default.
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Boundary moments c_1..c_count.
    Moments {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        samples: PathBuf,
        #[arg(long, default_value_t = 16)]
        count: usize,
    },
    /// Decide extendibility with at most N poles.
    Detect {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        samples: PathBuf,
        #[arg(long)]
        n_poles: usize,
        #[command(flatten)]
        run: RunConfig,
        /// Also write the poles as CSV here.
        #[arg(long)]
        poles_csv: Option<PathBuf>,
    },
    /// Winding number of the sampled data.
    Winding {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        samples: PathBuf,
    },
    /// Random-probe check of W(Pf + Q) >= -N.
    Probe {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        samples: PathBuf,
        #[arg(long)]
        n_poles: usize,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        max_complexity: usize,
        #[arg(long, default_value_t = 1e-6)]
        rho_min: f64,
    },
    /// Evaluate the extension described by a detection report.
    Reconstruct {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        samples: PathBuf,
        /// Report written by `detect`.
        #[arg(long)]
        report: PathBuf,
        /// CSV of `re,im` points.
        #[arg(long)]
        points: Option<PathBuf>,
        /// A single point `re,im`; may be repeated.
        #[arg(long = "at", allow_hyphen_values = true)]
        at: Vec<String>,
    },
    /// Run detection for every N in `--n-min..=--n-max`.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        samples: PathBuf,
        #[arg(long, default_value_t = 0)]
        n_min: usize,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        #[command(flatten)]
        run: RunConfig,
    },
}

/// Everything a command produces.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    /// Primary output: goes to `--out` or stdout.
    pub primary: String,
    pub primary_path: Option<PathBuf>,
    /// Extra files such as sidecars.
    pub files: Vec<(PathBuf, String)>,
    pub exit: i32,
}

impl Outcome {
    fn new(primary: String, path: Option<PathBuf>) -> Self {
        Outcome {
            primary,
            primary_path: path,
            files: Vec::new(),
            exit: 0,
        }
    }

    /// Writes every file through a temporary and a rename, then prints the
    /// primary output if it has no path.
    pub fn commit(&self) -> Result<()> {
        for (path, text) in self
            .primary_path
            .iter()
            .map(|p| (p, &self.primary))
            .chain(self.files.iter().map(|(p, t)| (p, t)))
        {
            write_atomic(path, text)?;
        }
        if self.primary_path.is_none() {
            print!("{}", self.primary);
        }
        Ok(())
    }
}

fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, text).with_context(|| format!("writing {}", tmp.display()))?;
    std::fs::rename(&tmp, path).with_context(|| format!("renaming to {}", path.display()))?;
    Ok(())
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn load(common: &Common, samples: &Path) -> Result<(DomainBoundary, BoundarySamples)> {
    let domain = read_domain(&common.domain, common.nodes)?;
    let f = read_samples(&domain, samples)?;
    Ok((domain, f))
}

pub fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::DomainCheck { common } => cmd_domain_check(&common),
        Command::Synth {
            common,
            generator,
            truth,
        } => cmd_synth(&common, &generator, truth),
        Command::Moments {
            common,
            samples,
            count,
        } => cmd_moments(&common, &samples, count),
        Command::Detect {
            common,
            samples,
            n_poles,
            run,
            poles_csv,
        } => cmd_detect(&common, &samples, n_poles, &run, poles_csv),
        Command::Winding { common, samples } => cmd_winding(&common, &samples),
        Command::Probe {
            common,
            samples,
            n_poles,
            trials,
            seed,
            max_complexity,
            rho_min,
        } => cmd_probe(
            &common,
            &samples,
            n_poles,
            trials,
            seed,
            &HarnessConfig {
                max_complexity,
                rho_min_rel: rho_min,
            },
        ),
        Command::Reconstruct {
            common,
            samples,
            report,
            points,
            at,
        } => cmd_reconstruct(&common, &samples, &report, points.as_deref(), &at),
        Command::Sweep {
            common,
            samples,
            n_min,
            n_max,
            run,
        } => cmd_sweep(&common, &samples, n_min..=n_max, &run),
    }
}

#[derive(serde::Serialize)]
struct DomainSummary {
    summary: String,
    curves: usize,
    outer: usize,
    holes: Vec<usize>,
    reoriented: Vec<bool>,
    nodes: Vec<usize>,
    diameter: f64,
    delta_band: f64,
    min_separation: f64,
}

pub fn cmd_domain_check(common: &Common) -> Result<Outcome> {
    let d = read_domain(&common.domain, common.nodes)?;
    let fixed = d.reoriented().iter().any(|&r| r);
    let summary = DomainSummary {
        summary: format!(
            "m={}, outer={}, orientation {}",
            d.curve_count(),
            d.outer_index(),
            if fixed { "normalized" } else { "already standard" }
        ),
        curves: d.curve_count(),
        outer: d.outer_index(),
        holes: d.hole_indices().collect(),
        reoriented: d.reoriented().to_vec(),
        nodes: d.grids().iter().map(|g| g.len()).collect(),
        diameter: d.diameter(),
        delta_band: d.delta_band(),
        min_separation: d.min_separation(),
    };
    let text = match common.format {
        Format::Json => to_json(&summary)?,
        Format::Csv => {
            let mut out = String::from("curve,role,nodes,reoriented\n");
            for c in 0..summary.curves {
                let role = if c == summary.outer { "outer" } else { "hole" };
                let _ = writeln!(out, "{c},{role},{},{}", summary.nodes[c], summary.reoriented[c]);
            }
            out
        }
    };
    Ok(Outcome::new(text, common.out.clone()))
}

pub fn cmd_synth(common: &Common, generator: &Path, truth: Option<PathBuf>) -> Result<Outcome> {
    let d = read_domain(&common.domain, common.nodes)?;
    let text = std::fs::read_to_string(generator)
        .with_context(|| format!("reading generator {}", generator.display()))?;
    let spec: GeneratorSpec = serde_json::from_str(&text)
        .with_context(|| format!("parsing generator {}", generator.display()))?;
    let samples = spec.sample(&d)?;
    let mut outcome = Outcome::new(samples_to_csv(&samples), common.out.clone());
    let truth_path = truth.or_else(|| {
        common.out.as_ref().map(|p| {
            let mut s = p.as_os_str().to_owned();
            s.push(".truth.json");
            PathBuf::from(s)
        })
    });
    if let Some(path) = truth_path {
        outcome.files.push((path, to_json(&spec.ground_truth(&d))?));
    }
    Ok(outcome)
}

pub fn cmd_moments(common: &Common, samples: &Path, count: usize) -> Result<Outcome> {
    let (d, f) = load(common, samples)?;
    let m = compute_moments(&d, &f, count)?;
    let text = match common.format {
        Format::Json => {
            let list: Vec<_> = m
                .as_slice()
                .iter()
                .enumerate()
                .map(|(i, c)| serde_json::json!({"j": i + 1, "re": c.re, "im": c.im}))
                .collect();
            to_json(&serde_json::json!({ "moments": list }))?
        }
        Format::Csv => {
            let mut out = String::from("j,re,im\n");
            for (i, c) in m.as_slice().iter().enumerate() {
                let _ = writeln!(out, "{},{},{}", i + 1, fmt_f64(c.re), fmt_f64(c.im));
            }
            out
        }
    };
    Ok(Outcome::new(text, common.out.clone()))
}

pub fn cmd_detect(
    common: &Common,
    samples: &Path,
    n: usize,
    run: &RunConfig,
    poles_csv: Option<PathBuf>,
) -> Result<Outcome> {
    let (d, f) = load(common, samples)?;
    let d = run.apply(d)?;
    let report = ReportJson::from(&detect(&d, &f, n, &run.detect_config())?);
    let text = match common.format {
        Format::Json => to_json(&report)?,
        Format::Csv => poles_to_csv(&report.poles),
    };
    let mut outcome = Outcome::new(text, common.out.clone());
    if let Some(path) = poles_csv {
        outcome.files.push((path, poles_to_csv(&report.poles)));
    }
    outcome.exit = report.exit_code();
    Ok(outcome)
}

pub fn cmd_winding(common: &Common, samples: &Path) -> Result<Outcome> {
    let (d, f) = load(common, samples)?;
    let w = winding_number(&d, &LoopFunction::sampled(&f))?;
    let text = match common.format {
        Format::Json => to_json(&serde_json::json!({ "winding": w }))?,
        Format::Csv => format!("winding\n{w}\n"),
    };
    Ok(Outcome::new(text, common.out.clone()))
}

pub fn cmd_probe(
    common: &Common,
    samples: &Path,
    n: usize,
    trials: usize,
    seed: u64,
    cfg: &HarnessConfig,
) -> Result<Outcome> {
    let (d, f) = load(common, samples)?;
    let report = ProbeReportJson::from(&probe_harness(&d, BoundaryData::Sampled(&f), n, trials, seed, cfg)?);
    let text = match common.format {
        Format::Json => to_json(&report)?,
        Format::Csv => {
            let mut out = String::from("seed,complexity,status,winding\n");
            for t in &report.trials {
                let w = t.winding.map(|w| w.to_string()).unwrap_or_default();
                let _ = writeln!(out, "{},{},{},{w}", t.seed, t.complexity, t.status);
            }
            out
        }
    };
    Ok(Outcome::new(text, common.out.clone()))
}

pub fn cmd_reconstruct(
    common: &Common,
    samples: &Path,
    report: &Path,
    points: Option<&Path>,
    at: &[String],
) -> Result<Outcome> {
    let (d, f) = load(common, samples)?;
    let text = std::fs::read_to_string(report)
        .with_context(|| format!("reading report {}", report.display()))?;
    let report: ReportJson = serde_json::from_str(&text)
        .with_context(|| format!("parsing report {}", report.display()))?;
    if report.verdict == "not_extendible" {
        bail!("report says the data is not extendible; nothing to reconstruct");
    }
    let mut pts = Vec::new();
    if let Some(p) = points {
        let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        pts.extend(points_from_csv(&text)?);
    }
    for a in at {
        pts.push(parse_point(a)?);
    }
    if pts.is_empty() {
        bail!("no evaluation points; pass --points or --at");
    }
    let roots: Vec<(Complex64, usize)> = report.poles.iter().map(|p| (p.z(), p.multiplicity)).collect();
    let ext = MeromorphicExtension::new(&d, &f, Polynomial::from_roots(&roots))?;

    let mut rows = Vec::with_capacity(pts.len());
    for z in pts {
        let (value, status) = match ext.eval(z) {
            Ok(v) => (Some(v), "ok"),
            Err(Error::EvalAtPole(_)) => (None, "eval_at_pole"),
            Err(Error::ProbeTooClose(_)) => (None, "too_close"),
            Err(Error::NotInterior(_)) => (None, "not_interior"),
            Err(e) => return Err(anyhow!(e)),
        };
        rows.push((z, value, status));
    }
    let text = match common.format {
        Format::Json => {
            let list: Vec<_> = rows
                .iter()
                .map(|(z, v, s)| {
                    serde_json::json!({
                        "re": z.re, "im": z.im,
                        "value": v.map(|v| serde_json::json!({"re": v.re, "im": v.im})),
                        "status": s,
                    })
                })
                .collect();
            to_json(&serde_json::json!({ "points": list }))?
        }
        Format::Csv => {
            let mut out = String::from("re,im,value_re,value_im,status\n");
            for (z, v, s) in &rows {
                let (vr, vi) = v
                    .map(|v| (fmt_f64(v.re), fmt_f64(v.im)))
                    .unwrap_or_default();
                let _ = writeln!(out, "{},{},{vr},{vi},{s}", fmt_f64(z.re), fmt_f64(z.im));
            }
            out
        }
    };
    Ok(Outcome::new(text, common.out.clone()))
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub verdict: String,
    pub conflicting_evidence: bool,
    pub pole_count: usize,
    /// Smallest retained singular value of the Hankel system; none for N = 0.
    pub min_singular_value: Option<f64>,
    pub holo_residual: f64,
    pub tail_max: f64,
}

pub fn cmd_sweep(
    common: &Common,
    samples: &Path,
    range: std::ops::RangeInclusive<usize>,
    run: &RunConfig,
) -> Result<Outcome> {
    if range.is_empty() {
        bail!("empty N range");
    }
    let (d, f) = load(common, samples)?;
    let d = run.apply(d)?;
    let cfg = run.detect_config();
    let rows = range
        .map(|n| {
            let r = detect(&d, &f, n, &cfg)?;
            Ok(SweepRow {
                n,
                verdict: verdict_name(r.verdict).to_string(),
                conflicting_evidence: r.conflicting_evidence,
                pole_count: r.pole_count(),
                min_singular_value: r
                    .candidate
                    .as_ref()
                    .and_then(|c| c.singular_values.last().copied()),
                holo_residual: r.holo.max_residual,
                tail_max: r.max_tail(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let text = match common.format {
        Format::Json => to_json(&rows)?,
        Format::Csv => {
            let mut out =
                String::from("n,verdict,conflicting_evidence,pole_count,min_singular_value,holo_residual,tail_max\n");
            for r in &rows {
                let s = r.min_singular_value.map(fmt_f64).unwrap_or_default();
                let _ = writeln!(
                    out,
                    "{},{},{},{},{s},{},{}",
                    r.n,
                    r.verdict,
                    r.conflicting_evidence,
                    r.pole_count,
                    fmt_f64(r.holo_residual),
                    fmt_f64(r.tail_max)
                );
            }
            out
        }
    };
    Ok(Outcome::new(text, common.out.clone()))
}
