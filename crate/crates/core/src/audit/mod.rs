//! Seeded audit of the inequality registry.
//!
//! Each trial derives its own seed from `(base_seed, case id, trial index)`,
//! so trials run in parallel while the report stays a pure function of the
//! configuration.

mod cases;
mod report;
mod sample;

pub use cases::{
    evaluate_case, evaluate_case_with, find_case, registry, wrqa_product, CaseParams, EnvDimSource,
    EvalCache, Form, InequalityCase, Instance, Margin,
};
pub use report::report_to_json;
pub use sample::{
    sample, Sample, SampleKind, Sampler, GAUSSIAN_METHOD, PD_FLOOR_FRACTION, PRNG_NAME,
};

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Parameter values swept by every case.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamGrid {
    /// Norm exponents, `p >= 1`; also used for `q`.
    pub norm_p: Vec<f64>,
    /// Anti-norm exponents in `(0, 1]`.
    pub anti_p: Vec<f64>,
    /// Negative Schatten anti-norm exponents.
    pub negative_p: Vec<f64>,
    pub alpha: Vec<f64>,
    pub s: Vec<f64>,
}

impl Default for ParamGrid {
    fn default() -> Self {
        Self {
            norm_p: vec![1.0, 1.5, 2.0, 3.0, 10.0, f64::INFINITY],
            anti_p: vec![0.25, 0.5, 0.75, 1.0],
            negative_p: vec![-0.5, -1.0, -2.0],
            alpha: vec![0.3, 0.7, 1.0, 1.5, 3.0],
            s: vec![-1.0, 0.0, 0.5, 1.0, 2.0],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditConfig {
    pub base_seed: u64,
    pub trials_per_case: usize,
    /// `(m, n)`: subsystem dimensions, or input and output dimension for channels.
    pub dims: Vec<(usize, usize)>,
    pub grid: ParamGrid,
    /// Relative to `max(1, |lhs|, |rhs|)`.
    pub tolerance: f64,
    pub env_dim_source: EnvDimSource,
    /// Case ids to run; `None` runs the whole registry.
    pub cases: Option<Vec<String>>,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self {
            base_seed: 0,
            trials_per_case: 200,
            dims: vec![(2, 2), (2, 3), (3, 2), (4, 3)],
            grid: ParamGrid::default(),
            tolerance: 1e-9,
            env_dim_source: EnvDimSource::ChoiRank,
            cases: None,
        }
    }
}

impl AuditConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials_per_case == 0 {
            return Err(Error::BadParams(
                "trials_per_case must be at least 1".into(),
            ));
        }
        if self.dims.is_empty() {
            return Err(Error::BadParams("dims must be nonempty".into()));
        }
        if let Some(&(m, n)) = self.dims.iter().find(|&&(m, n)| m == 0 || n == 0) {
            return Err(Error::BadDims(format!(
                "dimension pair {m}x{n} is not positive"
            )));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::BadParams(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if let Some(ids) = &self.cases {
            for id in ids {
                find_case(id)?;
            }
        }
        Ok(())
    }

    fn selected(&self) -> Vec<&'static InequalityCase> {
        registry()
            .iter()
            .filter(|c| {
                self.cases
                    .as_ref()
                    .is_none_or(|ids| ids.iter().any(|id| id == c.id))
            })
            .collect()
    }
}

/// Aggregated results for one case.
#[derive(Clone, Debug, PartialEq)]
pub struct CaseReport {
    pub id: &'static str,
    pub description: &'static str,
    pub formula: &'static str,
    pub trials: usize,
    pub evaluations: usize,
    /// Evaluations with relative margin below `−tolerance`.
    pub violations: usize,
    /// Trials or saturation runs that returned an error.
    pub failures: usize,
    pub first_failure: Option<String>,
    /// Smallest relative margin seen.
    pub worst_margin: Option<f64>,
    pub worst_at: Option<String>,
    /// Largest `|relative margin|` over the saturating instances.
    pub saturation_residual: Option<f64>,
    /// Trials where the companion inequality was strict.
    pub strict_count: Option<usize>,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditReport {
    pub config: AuditConfig,
    pub cases: Vec<CaseReport>,
    pub version: &'static str,
    pub prng: &'static str,
    pub gaussian: &'static str,
}

impl AuditReport {
    pub fn total_violations(&self) -> usize {
        self.cases.iter().map(|c| c.violations).sum()
    }

    pub fn total_failures(&self) -> usize {
        self.cases.iter().map(|c| c.failures).sum()
    }

    pub fn passed(&self) -> bool {
        self.cases.iter().all(CaseReport::passed)
    }

    pub fn case(&self, id: &str) -> Option<&CaseReport> {
        self.cases.iter().find(|c| c.id == id)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Seed of one trial: splitmix64 over the base seed, an FNV-1a hash of the
/// case id and the trial index.
pub fn trial_seed(base_seed: u64, case_id: &str, trial: u64) -> u64 {
    let h = splitmix64(base_seed ^ fnv1a(case_id.as_bytes()));
    splitmix64(h ^ splitmix64(trial))
}

/// Saturation runs use trial indices counting down from `u64::MAX`.
fn saturation_seed(base_seed: u64, case_id: &str, index: usize) -> u64 {
    trial_seed(base_seed, case_id, u64::MAX - index as u64)
}

#[derive(Default)]
struct TrialOutcome {
    evaluations: usize,
    violations: usize,
    failure: Option<String>,
    worst: Option<(f64, String)>,
    strict: bool,
}

fn run_trial(case: &InequalityCase, config: &AuditConfig, trial: usize) -> TrialOutcome {
    let dims = config.dims[trial % config.dims.len()];
    let mut sampler = Sampler::new(trial_seed(config.base_seed, case.id, trial as u64));
    let mut out = TrialOutcome::default();
    let instance = match case.draw(&mut sampler, dims, trial as u64) {
        Ok(i) => i,
        Err(e) => {
            out.failure = Some(format!("trial {trial} ({}x{}): draw: {e}", dims.0, dims.1));
            return out;
        }
    };
    let mut cache = EvalCache::new(&instance, config.env_dim_source);
    for params in case.grid(&instance, &config.grid) {
        match case.evaluate(&mut cache, &params) {
            Ok(margin) => {
                out.evaluations += 1;
                let rel = margin.relative();
                if !rel.is_finite() {
                    out.failure.get_or_insert_with(|| {
                        format!(
                            "trial {trial} ({}x{}) {params}: margin is not finite",
                            dims.0, dims.1
                        )
                    });
                    continue;
                }
                if rel < -config.tolerance {
                    out.violations += 1;
                }
                if out.worst.as_ref().is_none_or(|(w, _)| rel < *w) {
                    out.worst = Some((
                        rel,
                        format!("trial {trial} ({}x{}) {params}", dims.0, dims.1),
                    ));
                }
            }
            Err(e) => {
                out.failure.get_or_insert_with(|| {
                    format!("trial {trial} ({}x{}) {params}: {e}", dims.0, dims.1)
                });
            }
        }
    }
    if let Some(Ok(true)) = case.probe_strictness(&mut cache) {
        out.strict = true;
    }
    out
}

/// Largest `|relative margin|` over every saturating instance, one batch
/// per dimension pair.
fn run_saturation(
    case: &InequalityCase,
    config: &AuditConfig,
) -> Option<std::result::Result<f64, String>> {
    case.saturator?;
    let mut residual = 0f64;
    for (idx, &dims) in config.dims.iter().enumerate() {
        let mut sampler = Sampler::new(saturation_seed(config.base_seed, case.id, idx));
        let batch = match case.saturate(&mut sampler, dims, &config.grid)? {
            Ok(b) => b,
            Err(e) => return Some(Err(format!("saturation ({}x{}): {e}", dims.0, dims.1))),
        };
        for (instance, params) in &batch {
            let mut cache = EvalCache::new(instance, config.env_dim_source);
            for p in params {
                match case.evaluate(&mut cache, p) {
                    Ok(m) => residual = residual.max(m.relative().abs()),
                    Err(e) => {
                        return Some(Err(format!("saturation ({}x{}) {p}: {e}", dims.0, dims.1)))
                    }
                }
            }
        }
    }
    Some(Ok(residual))
}

fn run_case(case: &'static InequalityCase, config: &AuditConfig) -> CaseReport {
    let outcomes: Vec<TrialOutcome> = (0..config.trials_per_case)
        .into_par_iter()
        .map(|t| run_trial(case, config, t))
        .collect();
    let mut report = CaseReport {
        id: case.id,
        description: case.description,
        formula: case.formula,
        trials: config.trials_per_case,
        evaluations: 0,
        violations: 0,
        failures: 0,
        first_failure: None,
        worst_margin: None,
        worst_at: None,
        saturation_residual: None,
        strict_count: case.strictness_probe.map(|_| 0),
    };
    for o in outcomes {
        report.evaluations += o.evaluations;
        report.violations += o.violations;
        if let Some(f) = o.failure {
            report.failures += 1;
            report.first_failure.get_or_insert(f);
        }
        if let Some((w, at)) = o.worst {
            if report.worst_margin.is_none_or(|cur| w < cur) {
                report.worst_margin = Some(w);
                report.worst_at = Some(at);
            }
        }
        if o.strict {
            if let Some(c) = report.strict_count.as_mut() {
                *c += 1;
            }
        }
    }
    match run_saturation(case, config) {
        Some(Ok(r)) => report.saturation_residual = Some(r),
        Some(Err(e)) => {
            report.failures += 1;
            report.first_failure.get_or_insert(e);
        }
        None => {}
    }
    report
}

/// Runs every selected case. Evaluator errors are recorded per trial and
/// never abort the run; only an invalid configuration is an error.
pub fn run_audit(config: &AuditConfig) -> Result<AuditReport> {
    config.validate()?;
    let cases = config
        .selected()
        .into_iter()
        .map(|c| run_case(c, config))
        .collect();
    Ok(AuditReport {
        config: config.clone(),
        cases,
        version: env!("CARGO_PKG_VERSION"),
        prng: PRNG_NAME,
        gaussian: GAUSSIAN_METHOD,
    })
}
