//! Batch experiment runner behind the CLI: config parsing, wiring, and
//! CSV/JSON report output.
//!
//! Outputs are deterministic for a fixed (config, seed) and independent of
//! the worker-pool size; every file starts with a header echoing the config
//! and the crate version.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::averaging::{
    average_trace_with, ergodic_average_with, iterated_product_average, multiple_average,
    perturbation_bound_check,
};
use crate::decomposition::component_estimate;
use crate::error::{Error, Result};
use crate::folner::{
    adversarial_divergence_sequence, boundary_ratio, condition_ratios, is_summing_prefix,
    make_family, FamilySpec, FolnerSequence, DEFAULT_ELEMENT_BUDGET,
};
use crate::group::{int_interval, FiniteSubset, GroupElement};
use crate::meanlin::{
    cesaro_average, cox_check, duality_check, fixed_projection, spectral_norm, OperatorFamily,
};
use crate::recurrence::{dissipativity_probe, khintchine_density, qwap_density, visit_density};
use crate::systems::{Action, Observable, Point};

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// One experiment invocation, read from a JSON document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequence: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observable: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub indices: Option<Vec<usize>>,
    /// Mandatory: every run is reproducible.
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_tuple: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
}

impl ExperimentConfig {
    pub fn from_json(json: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(json)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !catalog().iter().any(|e| e.name == self.experiment) {
            return Err(Error::InvalidSpec(format!(
                "unknown experiment `{}`",
                self.experiment
            )));
        }
        if let Some(idx) = &self.indices {
            if idx.is_empty() || idx.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidSpec(
                    "indices must be nonempty and strictly ascending".into(),
                ));
            }
        }
        if let Some(s) = &self.system {
            Action::parse(s)?;
        }
        if let Some(s) = &self.sequence {
            s.parse::<FamilySpec>()?;
        }
        if let Some(s) = &self.observable {
            Observable::parse(s)?;
        }
        Ok(())
    }
}

/// A catalog entry: stable name plus a one-line description of the
/// mathematical content the experiment exercises.
#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
}

/// Stable, ordered list of the available experiments.
pub fn catalog() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "folner-check",
            description: "Folner boundary ratios and Tempelman/Shulman temperedness diagnostics",
        },
        CatalogEntry {
            name: "average",
            description: "ergodic average trace of a bounded observable along a Folner sequence",
        },
        CatalogEntry {
            name: "multiple",
            description: "multiple ergodic average over scalar multiples of Z-module generators",
        },
        CatalogEntry {
            name: "product-average",
            description: "iterated product-group average over commuting actions (mean ergodic theorem for products)",
        },
        CatalogEntry {
            name: "meanlin",
            description: "finite-dimensional vanishing/range duality, Cesaro operator averages, mean-ergodic projection, Cox identity criterion",
        },
        CatalogEntry {
            name: "decompose",
            description: "empirical ergodic disintegration: component moment vectors and 0-1-law scoring",
        },
        CatalogEntry {
            name: "khintchine",
            description: "Khintchine recurrence: density of group elements with near-maximal autocorrelation",
        },
        CatalogEntry {
            name: "visit",
            description: "Poincare visit density of a set along a Folner sequence",
        },
        CatalogEntry {
            name: "qwap",
            description: "quasi-weakly almost periodic return density of eps-returns",
        },
        CatalogEntry {
            name: "dissipativity",
            description: "dissipativity probe: averages of a compactly supported observable on the translation line",
        },
        CatalogEntry {
            name: "diverge-demo",
            description: "divergence of averages of an unbounded L1 observable along an adapted Folner sequence",
        },
        CatalogEntry {
            name: "perturb-check",
            description: "stability of averages under symmetric-difference perturbation of the Folner sets",
        },
    ]
}

/// The default configuration for each catalog experiment; sized for desk-scale runs.
pub fn default_config(name: &str) -> Result<ExperimentConfig> {
    let base = ExperimentConfig {
        experiment: name.to_string(),
        system: None,
        sequence: None,
        observable: None,
        indices: None,
        seed: 42,
        eps: None,
        n: None,
        sample_count: None,
        g_tuple: None,
        horizon: None,
        x0: None,
        budget: None,
    };
    let golden = "rotation:alpha=0.6180339887498949";
    let cfg = match name {
        "folner-check" => ExperimentConfig {
            sequence: Some("djr".into()),
            indices: Some((1..=20).collect()),
            ..base
        },
        "average" => ExperimentConfig {
            system: Some(golden.into()),
            sequence: Some("intervals".into()),
            observable: Some("cos:k=1".into()),
            indices: Some(vec![100, 1000, 10_000]),
            ..base
        },
        "multiple" => ExperimentConfig {
            system: Some(golden.into()),
            observable: Some("cos:k=1".into()),
            g_tuple: Some(vec![1, 2]),
            n: Some(10_000),
            ..base
        },
        "product-average" => ExperimentConfig {
            n: Some(500),
            ..base
        },
        "meanlin" => ExperimentConfig { n: Some(200), ..base },
        "decompose" => ExperimentConfig {
            system: Some("twocircle:a0=0.41421356237309515,a1=0.2599210498948732".into()),
            sequence: Some("intervals".into()),
            n: Some(5000),
            sample_count: Some(8),
            ..base
        },
        "khintchine" => ExperimentConfig {
            system: Some("rotation:alpha=0.41421356237309515".into()),
            sequence: Some("intervals".into()),
            observable: Some("arc:a=0.3".into()),
            eps: Some(0.01),
            n: Some(20_000),
            sample_count: Some(1000),
            ..base
        },
        "visit" => ExperimentConfig {
            system: Some("rotation:alpha=0.41421356237309515".into()),
            sequence: Some("intervals".into()),
            observable: Some("arc:a=0.25".into()),
            indices: Some(vec![100, 1000, 10_000]),
            x0: Some(0.1),
            ..base
        },
        "qwap" => ExperimentConfig {
            system: Some("rotation:alpha=0.41421356237309515".into()),
            sequence: Some("intervals".into()),
            eps: Some(0.05),
            indices: Some(vec![100, 1000, 10_000]),
            x0: Some(0.2),
            ..base
        },
        "dissipativity" => ExperimentConfig {
            system: Some("zline".into()),
            sequence: Some("intervals".into()),
            observable: Some("tent:half=5".into()),
            indices: Some(vec![10, 100, 1000]),
            ..base
        },
        "diverge-demo" => ExperimentConfig {
            system: Some("rotation:alpha=0.41421356237309515".into()),
            sequence: Some("intervals".into()),
            observable: Some("invsqrt".into()),
            indices: Some((5..=20).collect()),
            horizon: Some(2_000_000),
            x0: Some(0.3),
            ..base
        },
        "perturb-check" => ExperimentConfig {
            system: Some(golden.into()),
            sequence: Some("intervals".into()),
            observable: Some("cos:k=1".into()),
            indices: Some(vec![10, 100, 1000]),
            ..base
        },
        _ => {
            return Err(Error::InvalidSpec(format!("unknown experiment `{name}`")));
        }
    };
    Ok(cfg)
}

fn header(config: &ExperimentConfig) -> String {
    let json = serde_json::to_string(config).expect("config serializes");
    format!("# folnerlab v{ARTIFACT_VERSION}\n# config: {json}\n")
}

fn write_output(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents)?;
    Ok(())
}

fn require<T: Clone>(opt: &Option<T>, what: &str) -> Result<T> {
    opt.clone()
        .ok_or_else(|| Error::InvalidSpec(format!("config is missing `{what}`")))
}

fn parse_sequence(config: &ExperimentConfig) -> Result<FolnerSequence> {
    let spec: FamilySpec = require(&config.sequence, "sequence")?.parse()?;
    Ok(make_family(&spec))
}

fn parse_system(config: &ExperimentConfig) -> Result<Action> {
    Action::parse(&require(&config.system, "system")?)
}

fn parse_observable(config: &ExperimentConfig) -> Result<Observable> {
    Observable::parse(&require(&config.observable, "observable")?)
}

fn start_point(action: &Action, config: &ExperimentConfig) -> Point {
    match (config.x0, action.base_point()) {
        (Some(x0), Point::Circle(_)) => Point::circle(x0),
        (Some(x0), Point::TwoCircle { component, .. }) => Point::TwoCircle {
            component,
            x: x0 - x0.floor(),
        },
        (_, base) => base,
    }
}

/// Run one experiment; returns the paths of the files written.
pub fn run(config: &ExperimentConfig, out_dir: &Path) -> Result<Vec<PathBuf>> {
    config.validate()?;
    std::fs::create_dir_all(out_dir)?;
    let mut body = header(config);
    let ext;
    match config.experiment.as_str() {
        "folner-check" => {
            let seq = parse_sequence(config)?;
            let indices = require(&config.indices, "indices")?;
            let budget = config.budget.unwrap_or(DEFAULT_ELEMENT_BUDGET);
            let probes: FiniteSubset =
                [-1i64, 1].into_iter().map(GroupElement::Int).collect();
            body.push_str("n,cardinality,tempelman,shulman,nested,max_boundary_ratio\n");
            for &n in &indices {
                let f = seq.set(n)?;
                let r = condition_ratios(&seq, n, budget)?;
                let (nested, max_ratio) = if n >= 2 {
                    let rep = is_summing_prefix(&seq, n, &probes)?;
                    (rep.nested.to_string(), rep.max_boundary_ratio.to_string())
                } else {
                    ("true".to_string(), boundary_ratio(&f, &GroupElement::Int(1))?.to_string())
                };
                writeln!(
                    body,
                    "{n},{},{},{},{nested},{max_ratio}",
                    f.cardinality(),
                    r.tempelman,
                    r.shulman
                )
                .unwrap();
            }
            ext = "csv";
        }
        "average" => {
            let action = parse_system(config)?;
            let seq = parse_sequence(config)?;
            let phi = parse_observable(config)?;
            let indices = require(&config.indices, "indices")?;
            let x = start_point(&action, config);
            let trace = average_trace_with(&action, &seq, &phi, &x, &indices, 5, false)?;
            push_trace_csv(&mut body, &trace);
            ext = "csv";
        }
        "multiple" => {
            let action = parse_system(config)?;
            let phi = parse_observable(config)?;
            let g_tuple: Vec<GroupElement> = require(&config.g_tuple, "g_tuple")?
                .into_iter()
                .map(GroupElement::Int)
                .collect();
            let horizon = require(&config.n, "n")?;
            let x = start_point(&action, config);
            let k = int_interval(0, horizon as i64);
            let value = multiple_average(&action, &g_tuple, &k, &phi, &x)?;
            body.push_str("k_horizon,tuple_len,value\n");
            writeln!(body, "{horizon},{},{value}", g_tuple.len()).unwrap();
            ext = "csv";
        }
        "product-average" => {
            let n = require(&config.n, "n")?;
            let a1 = 0.41421356237309515;
            let a2 = 0.2599210498948732;
            let actions = [
                Action::torus_coord_rotation(2, 0, a1)?,
                Action::torus_coord_rotation(2, 1, a2)?,
            ];
            let seq = make_family(&FamilySpec::Intervals);
            let phi = Observable::product_of(
                &Observable::cos_coord(1, 0),
                &Observable::cos_coord(1, 1),
            );
            let x = Point::Torus(vec![0.0, 0.0]);
            let value = iterated_product_average(
                &actions,
                &[seq.clone(), seq],
                &phi,
                &x,
                n,
            )?;
            body.push_str("n,value\n");
            writeln!(body, "{n},{value}").unwrap();
            ext = "csv";
        }
        "meanlin" => {
            let n = require(&config.n, "n")?;
            body = meanlin_report(config, n)?;
            ext = "json";
        }
        "decompose" => {
            let action = parse_system(config)?;
            let seq = parse_sequence(config)?;
            let n = require(&config.n, "n")?;
            let count = require(&config.sample_count, "sample_count")?;
            let points = action.sampler().sample(count, config.seed)?;
            let dict = [
                Observable::constant(1.0),
                Observable::component_indicator(0),
                Observable::arc(0.3)?,
            ];
            body.push_str("point,observable,estimate,oscillation\n");
            for (i, p) in points.iter().enumerate() {
                let est = component_estimate(&action, &seq, p, &dict, n)?;
                for j in 0..est.labels.len() {
                    writeln!(
                        body,
                        "{i},{},{},{}",
                        est.labels[j], est.estimates[j], est.oscillations[j]
                    )
                    .unwrap();
                }
            }
            ext = "csv";
        }
        "khintchine" => {
            let action = parse_system(config)?;
            let seq = parse_sequence(config)?;
            let phi = parse_observable(config)?;
            let n = require(&config.n, "n")?;
            let eps = require(&config.eps, "eps")?;
            let count = config.sample_count.unwrap_or(1000);
            let d = khintchine_density(
                &action,
                &phi,
                eps,
                &seq,
                n,
                &action.sampler(),
                count,
                config.seed,
            )?;
            push_density_csv(&mut body, &[d]);
            ext = "csv";
        }
        "visit" => {
            let action = parse_system(config)?;
            let seq = parse_sequence(config)?;
            let phi = parse_observable(config)?;
            let indices = require(&config.indices, "indices")?;
            let x = start_point(&action, config);
            let list = visit_density(&action, &x, &phi, &seq, &indices)?;
            push_density_csv(&mut body, &list);
            ext = "csv";
        }
        "qwap" => {
            let action = parse_system(config)?;
            let seq = parse_sequence(config)?;
            let indices = require(&config.indices, "indices")?;
            let eps = require(&config.eps, "eps")?;
            let x = start_point(&action, config);
            let list = qwap_density(&action, &x, eps, &seq, &indices)?;
            push_density_csv(&mut body, &list);
            ext = "csv";
        }
        "dissipativity" => {
            let action = parse_system(config)?;
            let seq = parse_sequence(config)?;
            let phi = parse_observable(config)?;
            let indices = require(&config.indices, "indices")?;
            let x = start_point(&action, config);
            let trace = dissipativity_probe(&action, &phi, &x, &seq, &indices)?;
            push_trace_csv(&mut body, &trace);
            ext = "csv";
        }
        "diverge-demo" => {
            let action = parse_system(config)?;
            let phi = parse_observable(config)?;
            let indices = require(&config.indices, "indices")?;
            let horizon = require(&config.horizon, "horizon")?;
            let x = start_point(&action, config);
            let seq = adversarial_divergence_sequence(&action, &phi, &x, horizon)?;
            body.push_str("n,cardinality,value,boundary_ratio\n");
            for &n in &indices {
                let f = seq.set(n)?;
                let value = ergodic_average_with(&action, &f, &phi, &x, true)?;
                let r = boundary_ratio(&f, &GroupElement::Int(1))?;
                writeln!(body, "{n},{},{value},{r}", f.cardinality()).unwrap();
            }
            ext = "csv";
        }
        "perturb-check" => {
            let action = parse_system(config)?;
            let seq = parse_sequence(config)?;
            let phi = parse_observable(config)?;
            let indices = require(&config.indices, "indices")?;
            let x = start_point(&action, config);
            body.push_str("n,lhs,bound\n");
            for &n in &indices {
                let f = seq.set(n)?;
                let w = (n as f64).sqrt().floor() as i64;
                let d = int_interval(2 * n as i64, 2 * n as i64 + w + 1);
                let c = f.symmetric_difference(&d);
                let r = perturbation_bound_check(&action, &f, &c, &phi, &x)?;
                writeln!(body, "{n},{},{}", r.lhs, r.bound).unwrap();
            }
            ext = "csv";
        }
        other => {
            return Err(Error::InvalidSpec(format!("unknown experiment `{other}`")));
        }
    }
    let path = out_dir.join(format!("{}.{ext}", config.experiment));
    write_output(&path, &body)?;
    Ok(vec![path])
}

fn push_trace_csv(body: &mut String, trace: &crate::averaging::AverageTrace) {
    body.push_str("n,cardinality,value,oscillation\n");
    for (i, e) in trace.entries.iter().enumerate() {
        let tail_start = (i + 1).saturating_sub(trace.window);
        let tail = &trace.entries[tail_start..=i];
        let mut osc = 0.0f64;
        for (a_i, a) in tail.iter().enumerate() {
            for b in &tail[a_i + 1..] {
                osc = osc.max((a.value - b.value).abs());
            }
        }
        writeln!(body, "{},{},{},{}", e.n, e.cardinality, e.value, osc).unwrap();
    }
}

fn push_density_csv(body: &mut String, list: &[crate::recurrence::DensityEstimate]) {
    body.push_str("n,cardinality,hits,ratio,lower_envelope,upper_envelope\n");
    for d in list {
        writeln!(
            body,
            "{},{},{},{},{},{}",
            d.n, d.cardinality, d.hits, d.ratio, d.lower_envelope, d.upper_envelope
        )
        .unwrap();
    }
}

#[derive(Debug, Serialize)]
struct MeanlinReport {
    version: String,
    seed: u64,
    duality_families_checked: usize,
    duality_max_defect: f64,
    duality_dims_consistent: bool,
    cycle_projection_error: f64,
    cesaro_error: f64,
    cesaro_bound: f64,
    cox_norm: f64,
    cox_applicable: bool,
}

fn meanlin_report(config: &ExperimentConfig, n: usize) -> Result<String> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(config.seed);
    let mut max_defect = 0.0f64;
    let mut consistent = true;
    let families = 50;
    for _ in 0..families {
        let d = rng.gen_range(2..=8);
        let k = rng.gen_range(1..=5);
        let fam = OperatorFamily::new(
            (0..k)
                .map(|_| DMatrix::from_fn(d, d, |_, _| rng.gen::<f64>() * 2.0 - 1.0))
                .collect(),
        )?;
        let rep = duality_check(&fam);
        max_defect = max_defect.max(rep.max_orthogonality_defect);
        consistent &= rep.dims_consistent();
    }

    let cycle = DMatrix::from_row_slice(3, 3, &[0., 0., 1., 1., 0., 0., 0., 1., 0.]);
    let p = fixed_projection(&cycle)?;
    let third = DMatrix::from_element(3, 3, 1.0 / 3.0);
    let cycle_err = (&p - third).abs().max();

    let raw = DMatrix::from_fn(5, 5, |_, _| rng.gen::<f64>() * 2.0 - 1.0);
    let t = raw.qr().q();
    let a_n = cesaro_average(&t, n, 1.0 + 1e-9)?;
    let p_t = fixed_projection(&t)?;
    let cesaro_err = spectral_norm(&(a_n - &p_t));
    let eigs = t.complex_eigenvalues();
    let gamma = eigs
        .iter()
        .filter(|l| (*l - nalgebra::Complex::new(1.0, 0.0)).norm() > 1e-8)
        .map(|l| (nalgebra::Complex::new(1.0, 0.0) - l).norm())
        .fold(f64::INFINITY, f64::min);

    let fam = OperatorFamily::new(vec![cycle])?;
    let cox = cox_check(&[p], &[fam])?;

    let report = MeanlinReport {
        version: ARTIFACT_VERSION.to_string(),
        seed: config.seed,
        duality_families_checked: families,
        duality_max_defect: max_defect,
        duality_dims_consistent: consistent,
        cycle_projection_error: cycle_err,
        cesaro_error: cesaro_err,
        cesaro_bound: 2.0 / (n as f64 * gamma),
        cox_norm: cox.norm,
        cox_applicable: cox.applicable,
    };
    let mut body = header(config);
    body.push_str(&serde_json::to_string_pretty(&report)?);
    body.push('\n');
    Ok(body)
}
