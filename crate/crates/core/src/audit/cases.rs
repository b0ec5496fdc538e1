//! Registry of inequalities, each as a signed-margin evaluator.
//!
//! A margin is `bound side − bounded side`, oriented so that a nonnegative
//! value means the inequality holds. Margins are compared against a
//! tolerance relative to `max(1, |lhs|, |rhs|)`.

use std::fmt;

use crate::antinorms::{kp_antinorm_of_spectrum, schatten_antinorm_of_spectrum};
use crate::bipartite::{partial_trace_b, BipartiteOperator};
use crate::channels::{StinespringChannel, CHOI_RANK_TOL};
use crate::entropy::{
    density_spectrum, max_entropy_value, unified_entropy_of_spectrum, EntropyParams,
    DENSITY_TRACE_TOL,
};
use crate::error::{Error, Result};
use crate::linalg::{kron, psd_eigenvalues, singular_values, ComplexMatrix, HERMITIAN_TOL};
use crate::norms::{gauge_kp, Exponent};

use super::sample::{Sampler, PD_FLOOR_FRACTION};
use super::ParamGrid;

/// Input to an evaluator.
#[derive(Clone, Debug)]
pub enum Instance {
    /// A single operator (Props. on one matrix).
    Matrix(ComplexMatrix),
    /// An operator on `H_A ⊗ H_B`; the reduced side is `Tr_B`.
    Bipartite(BipartiteOperator),
    /// A channel and an input; the reduced side is the channel output.
    Channel {
        channel: StinespringChannel,
        input: ComplexMatrix,
    },
}

impl Instance {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Instance::Matrix(_) => "matrix",
            Instance::Bipartite(_) => "bipartite",
            Instance::Channel { .. } => "channel",
        }
    }
}

/// Which inequality an evaluation targets when a case carries companions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Form {
    #[default]
    Main,
    /// `‖W‖_(n) <= n ‖W‖_∞`, the comparison behind KPK2.
    Dominance,
    /// `margin_KQK1(k) = margin_KPK1(m − k)`, as a residual.
    Equivalence,
}

/// One point of a case's parameter grid. Unused fields are `None`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CaseParams {
    pub k: Option<usize>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub entropy: Option<EntropyParams>,
    pub form: Form,
}

impl CaseParams {
    pub fn k(k: usize) -> Self {
        Self {
            k: Some(k),
            ..Self::default()
        }
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = Some(p);
        self
    }

    pub fn with_q(mut self, q: f64) -> Self {
        self.q = Some(q);
        self
    }

    pub fn p_only(p: f64) -> Self {
        Self::default().with_p(p)
    }

    pub fn entropy(params: EntropyParams) -> Self {
        Self {
            entropy: Some(params),
            ..Self::default()
        }
    }

    pub fn with_form(mut self, form: Form) -> Self {
        self.form = form;
        self
    }

    fn need_k(&self) -> Result<usize> {
        self.k.ok_or_else(|| Error::BadParams("missing k".into()))
    }

    fn need_p(&self) -> Result<f64> {
        self.p.ok_or_else(|| Error::BadParams("missing p".into()))
    }

    fn need_q(&self) -> Result<f64> {
        self.q.ok_or_else(|| Error::BadParams("missing q".into()))
    }

    fn need_entropy(&self) -> Result<EntropyParams> {
        self.entropy
            .ok_or_else(|| Error::BadParams("missing entropy parameters".into()))
    }
}

impl fmt::Display for CaseParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(k) = self.k {
            parts.push(format!("k={k}"));
        }
        if let Some(p) = self.p {
            parts.push(format!("p={}", Exponent::from(p)));
        }
        if let Some(q) = self.q {
            parts.push(format!("q={}", Exponent::from(q)));
        }
        if let Some(e) = self.entropy {
            parts.push(format!("alpha={} s={}", e.alpha, e.s));
        }
        match self.form {
            Form::Main => {}
            Form::Dominance => parts.push("dominance".into()),
            Form::Equivalence => parts.push("equivalence".into()),
        }
        f.write_str(&parts.join(" "))
    }
}

/// Both sides of an inequality and its signed margin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Margin {
    pub lhs: f64,
    pub rhs: f64,
    pub value: f64,
}

impl Margin {
    /// `lhs <= rhs`.
    pub fn upper(lhs: f64, rhs: f64) -> Self {
        Self {
            lhs,
            rhs,
            value: rhs - lhs,
        }
    }

    /// `lhs >= rhs`.
    pub fn lower(lhs: f64, rhs: f64) -> Self {
        Self {
            lhs,
            rhs,
            value: lhs - rhs,
        }
    }

    /// `lhs == rhs`, scored as `−|lhs − rhs|`.
    pub fn equality(lhs: f64, rhs: f64) -> Self {
        Self {
            lhs,
            rhs,
            value: -(lhs - rhs).abs(),
        }
    }

    pub fn scale(&self) -> f64 {
        1f64.max(self.lhs.abs()).max(self.rhs.abs())
    }

    pub fn relative(&self) -> f64 {
        self.value / self.scale()
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.relative() >= -tol
    }
}

/// How the environment dimension of a channel enters the bounds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EnvDimSource {
    /// Rank of the Choi matrix, i.e. the minimal dilation.
    #[default]
    ChoiRank,
    /// The recorded dilation dimension.
    Dilation,
}

impl EnvDimSource {
    pub fn name(self) -> &'static str {
        match self {
            EnvDimSource::ChoiRank => "choi_rank",
            EnvDimSource::Dilation => "dilation",
        }
    }
}

/// Per-instance memo of spectra shared by all grid points.
pub struct EvalCache<'a> {
    instance: &'a Instance,
    env_source: EnvDimSource,
    reduced: Option<ComplexMatrix>,
    sv_whole: Option<Vec<f64>>,
    sv_reduced: Option<Vec<f64>>,
    eig_whole: Option<Vec<f64>>,
    eig_reduced: Option<Vec<f64>>,
    dens_whole: Option<Vec<f64>>,
    dens_reduced: Option<Vec<f64>>,
    env_dim: Option<usize>,
}

impl<'a> EvalCache<'a> {
    pub fn new(instance: &'a Instance, env_source: EnvDimSource) -> Self {
        Self {
            instance,
            env_source,
            reduced: None,
            sv_whole: None,
            sv_reduced: None,
            eig_whole: None,
            eig_reduced: None,
            dens_whole: None,
            dens_reduced: None,
            env_dim: None,
        }
    }

    fn whole(&self) -> &'a ComplexMatrix {
        match self.instance {
            Instance::Matrix(m) => m,
            Instance::Bipartite(w) => w.matrix(),
            Instance::Channel { input, .. } => input,
        }
    }

    fn reduced(&mut self) -> Result<&ComplexMatrix> {
        if self.reduced.is_none() {
            let r = match self.instance {
                Instance::Matrix(_) => {
                    return Err(Error::KindMismatch {
                        expected: "bipartite or channel",
                        got: "matrix",
                    })
                }
                Instance::Bipartite(w) => partial_trace_b(w),
                Instance::Channel { channel, input } => channel.apply(input)?,
            };
            self.reduced = Some(r);
        }
        Ok(self.reduced.as_ref().unwrap())
    }

    /// Dimension summed out: `n` for bipartite input, `d` for channels.
    fn traced_dim(&mut self) -> Result<usize> {
        match self.instance {
            Instance::Matrix(_) => Err(Error::KindMismatch {
                expected: "bipartite or channel",
                got: "matrix",
            }),
            Instance::Bipartite(w) => Ok(w.dim_b()),
            Instance::Channel { channel, .. } => {
                if self.env_dim.is_none() {
                    self.env_dim = Some(match self.env_source {
                        EnvDimSource::ChoiRank => channel.choi_rank(CHOI_RANK_TOL),
                        EnvDimSource::Dilation => channel.dim_env(),
                    });
                }
                Ok(self.env_dim.unwrap())
            }
        }
    }

    fn reduced_dim(&mut self) -> Result<usize> {
        Ok(self.reduced()?.rows())
    }

    fn sv_whole(&mut self) -> &[f64] {
        if self.sv_whole.is_none() {
            self.sv_whole = Some(singular_values(self.whole()));
        }
        self.sv_whole.as_deref().unwrap()
    }

    fn sv_reduced(&mut self) -> Result<&[f64]> {
        if self.sv_reduced.is_none() {
            let sv = singular_values(self.reduced()?);
            self.sv_reduced = Some(sv);
        }
        Ok(self.sv_reduced.as_deref().unwrap())
    }

    fn eig_whole(&mut self) -> Result<&[f64]> {
        if self.eig_whole.is_none() {
            self.eig_whole = Some(psd_eigenvalues(self.whole(), HERMITIAN_TOL)?);
        }
        Ok(self.eig_whole.as_deref().unwrap())
    }

    fn eig_reduced(&mut self) -> Result<&[f64]> {
        if self.eig_reduced.is_none() {
            let e = psd_eigenvalues(self.reduced()?, HERMITIAN_TOL)?;
            self.eig_reduced = Some(e);
        }
        Ok(self.eig_reduced.as_deref().unwrap())
    }

    fn dens_whole(&mut self) -> Result<&[f64]> {
        if self.dens_whole.is_none() {
            self.dens_whole = Some(density_spectrum(self.whole(), DENSITY_TRACE_TOL)?);
        }
        Ok(self.dens_whole.as_deref().unwrap())
    }

    fn dens_reduced(&mut self) -> Result<&[f64]> {
        if self.dens_reduced.is_none() {
            let d = density_spectrum(self.reduced()?, DENSITY_TRACE_TOL)?;
            self.dens_reduced = Some(d);
        }
        Ok(self.dens_reduced.as_deref().unwrap())
    }
}

/// Saturating instances, each with the grid points at which equality holds.
pub type SaturationBatch = Vec<(Instance, Vec<CaseParams>)>;

type Evaluator = fn(&mut EvalCache<'_>, &CaseParams) -> Result<Margin>;
type Drawer = fn(&mut Sampler, (usize, usize), u64) -> Result<Instance>;
type Saturator = fn(&mut Sampler, (usize, usize), &ParamGrid) -> Result<SaturationBatch>;
type GridFn = fn(&Instance, &ParamGrid) -> Vec<CaseParams>;
type Probe = fn(&mut EvalCache<'_>) -> Result<bool>;

/// One registry entry.
pub struct InequalityCase {
    pub id: &'static str,
    pub description: &'static str,
    /// The inequality in plain notation.
    pub formula: &'static str,
    pub requires: &'static str,
    pub(crate) draw: Drawer,
    pub(crate) grid: GridFn,
    pub(crate) evaluate: Evaluator,
    pub(crate) saturator: Option<Saturator>,
    /// Counts instances where a companion inequality is strict.
    pub(crate) strictness_probe: Option<Probe>,
}

impl InequalityCase {
    pub fn grid(&self, instance: &Instance, grid: &ParamGrid) -> Vec<CaseParams> {
        (self.grid)(instance, grid)
    }

    pub fn draw(
        &self,
        sampler: &mut Sampler,
        dims: (usize, usize),
        trial: u64,
    ) -> Result<Instance> {
        (self.draw)(sampler, dims, trial)
    }

    pub fn evaluate(&self, cache: &mut EvalCache<'_>, params: &CaseParams) -> Result<Margin> {
        check_kind(self, cache.instance)?;
        (self.evaluate)(cache, params)
    }

    pub fn saturate(
        &self,
        sampler: &mut Sampler,
        dims: (usize, usize),
        grid: &ParamGrid,
    ) -> Option<Result<SaturationBatch>> {
        self.saturator.map(|f| f(sampler, dims, grid))
    }

    pub fn probe_strictness(&self, cache: &mut EvalCache<'_>) -> Option<Result<bool>> {
        self.strictness_probe.map(|f| f(cache))
    }
}

impl fmt::Debug for InequalityCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InequalityCase")
            .field("id", &self.id)
            .field("formula", &self.formula)
            .finish()
    }
}

fn check_kind(case: &InequalityCase, instance: &Instance) -> Result<()> {
    let got = instance.kind_name();
    if case.requires.starts_with(got) {
        Ok(())
    } else {
        Err(Error::KindMismatch {
            expected: case.requires,
            got,
        })
    }
}

// ---------------------------------------------------------------------------
// Exponent helpers

fn exponent(p: f64) -> Result<Exponent> {
    Exponent::norm(p)
}

fn anti_p(p: f64) -> Result<f64> {
    if p > 0.0 && p <= 1.0 {
        Ok(p)
    } else {
        Err(Error::BadParams(format!(
            "anti-norm exponent {p} outside (0, 1]"
        )))
    }
}

/// `dim^{(p−1)/p}` for norm and anti-norm exponents alike (`p = ∞` gives `dim`).
fn dim_factor(dim: usize, p: f64) -> f64 {
    let w = if p == f64::INFINITY {
        1.0
    } else {
        (p - 1.0) / p
    };
    (dim as f64).powf(w)
}

fn check_case_k(k: usize, max: usize) -> Result<usize> {
    if k == 0 || k > max {
        Err(Error::BadK { k, max })
    } else {
        Ok(k)
    }
}

fn padded(values: &[f64], len: usize) -> Vec<f64> {
    let mut v = values.to_vec();
    if v.len() < len {
        v.resize(len, 0.0);
    }
    v
}

fn bipartite_dims(instance: &Instance) -> (usize, usize) {
    match instance {
        Instance::Bipartite(w) => (w.dim_a(), w.dim_b()),
        Instance::Matrix(m) => (m.rows(), 1),
        Instance::Channel { channel, .. } => (channel.dim_out(), channel.dim_env()),
    }
}

// ---------------------------------------------------------------------------
// Norm cases on bipartite operators

fn kpn1_margin(cache: &mut EvalCache<'_>, k: usize, p: f64) -> Result<Margin> {
    let e = exponent(p)?;
    let n = cache.traced_dim()?;
    let m = cache.reduced_dim()?;
    check_case_k(k, m)?;
    let lhs = gauge_kp(cache.sv_reduced()?, k, e)?;
    let whole = cache.sv_whole().to_vec();
    let rhs = dim_factor(n, p) * gauge_kp(&padded(&whole, k * n), k * n, e)?;
    Ok(Margin::upper(lhs, rhs))
}

fn eval_kpn1(cache: &mut EvalCache<'_>, params: &CaseParams) -> Result<Margin> {
    kpn1_margin(cache, params.need_k()?, params.need_p()?)
}

fn eval_spn1(cache: &mut EvalCache<'_>, params: &CaseParams) -> Result<Margin> {
    let m = cache.reduced_dim()?;
    kpn1_margin(cache, m, params.need_p()?)
}

fn eval_tfsn(cache: &mut EvalCache<'_>, params: &CaseParams) -> Result<Margin> {
    let p = params.need_p()?;
    let n = cache.traced_dim()? as f64;
    let constant = if p == 1.0 {
        1.0
    } else if p == 2.0 {
        n.sqrt()
    } else if p == f64::INFINITY {
        n
    } else {
        return Err(Error::BadParams(format!(
            "TFSN covers p in {{1, 2, inf}}, got {p}"
        )));
    };
    let e = exponent(p)?;
    let m = cache.reduced_dim()?;
    let lhs = gauge_kp(cache.sv_reduced()?, m, e)?;
    let whole = cache.sv_whole().to_vec();
    let rhs = constant * gauge_kp(&whole, whole.len(), e)?;
    Ok(Margin::upper(lhs, rhs))
}

fn eval_kpk1(cache: &mut EvalCache<'_>, params: &CaseParams) -> Result<Margin> {
    kpn1_margin(cache, params.need_k()?, 1.0)
}

fn eval_kpk2(cache: &mut EvalCache<'_>, params: &CaseParams) -> Result<Margin> {
    let n = cache.traced_dim()?;
    match params.form {
        Form::Dominance => {
            let whole = cache.sv_whole();
            let kyfan_n: f64 = whole[..n.min(whole.len())].iter().sum();
            Ok(Margin::upper(kyfan_n, n as f64 * whole[0]))
        }
        _ => kpn1_margin(cache, 1, 1.0),
    }
}

fn probe_kpk2(cache: &mut EvalCache<'_>) -> Result<bool> {
    let n = cache.traced_dim()?;
    let whole = cache.sv_whole();
    let kyfan_n: f64 = whole[..n.min(whole.len())].iter().sum();
    let spectral_bound = n as f64 * whole[0];
    Ok(kyfan_n < spectral_bound * (1.0 - 1e-12))
}

/// `k^{(q−1)/(pq)}` written as `k^{1/p − 1/(pq)}` so infinities behave.
fn holder_factor(k: usize, p: Exponent, q: Exponent) -> f64 {
    (k as f64).powf(p.recip() - p.times(q).recip())
}

fn eval_tpn2(cache: &mut EvalCache<'_>, params: &CaseParams) -> Result<Margin> {
    let (k, p, q) = (
        params.need_k()?,
        exponent(params.need_p()?)?,
        exponent(params.need_q()?)?,
    );
    let sv = cache.sv_whole();
    check_case_k(k, sv.len())?;
    let lhs = gauge_kp(sv, k, p)?;
    let rhs = holder_factor(k, p, q) * gauge_kp(sv, k, p.times(q))?;
    Ok(Margin::upper(lhs, rhs))
}

fn eval_cpn1(cache: &mut EvalCache<'_>, params: &CaseParams) -> Result<Margin> {
    let (k, p, q) = (
        params.need_k()?,
        exponent(params.need_p()?)?,
        exponent(params.need_q()?)?,
    );
    let n = cache.traced_dim()?;
    check_case_k(k, cache.reduced_dim()?)?;
    let pq = p.times(q);
    let lhs = gauge_kp(cache.sv_reduced()?, k, p)?;
    let factor = (k as f64).powf(p.recip() - pq.recip()) * (n as f64).powf(pq.conjugate_weight());
    let whole = cache.sv_whole().to_vec();
    let rhs = factor * gauge_kp(&whole, k * n, pq)?;
    Ok(Margin::upper(lhs, rhs))
}

// ---------------------------------------------------------------------------
// Anti-norm cases

fn kqn1_margin(cache: &mut EvalCache<'_>, k: usize, p: f64) -> Result<Margin> {
    let p = anti_p(p)?;
    let n = cache.traced_dim()?;
    let m = cache.reduced_dim()?;
    check_case_k(k, m)?;
    let lhs = kp_antinorm_of_spectrum(cache.eig_reduced()?, k, p, m);
    let whole = cache.eig_whole()?.to_vec();
    // the dilated operator lives on m·n (bipartite) or n_out·d (channel)
    let ambient = (m * n).max(whole.len());
    let rhs = dim_factor(n, p) * kp_antinorm_of_spectrum(&whole, k * n, p, ambient);
    Ok(Margin::lower(lhs, rhs))
}

fn eval_kqn1(cache: &mut EvalCache<'_>, params: &CaseParams) -> Result<Margin> {
    kqn1_margin(cache, params.need_k()?, params.need_p()?)
}

fn eval_kqn2(cache: &mut EvalCache<'_>, params: &CaseParams) -> Result<Margin> {
    let p = params.need_p()?;
    if p >= 0.0 {
        return Err(Error::BadParams(format!("KQN2 needs p < 0, got {p}")));
    }
    let n = cache.traced_dim()?;
    let lhs = schatten_antinorm_of_spectrum(cache.eig_reduced()?, p)?;
    let whole = cache.eig_whole()?.to_vec();
    let rhs = dim_factor(n, p) * schatten_antinorm_of_spectrum(&whole, p)?;
    Ok(Margin::lower(lhs, rhs))
}

fn eval_kqk1(cache: &mut EvalCache<'_>, params: &CaseParams) -> Result<Margin> {
    let k = params.need_k()?;
    let main = kqn1_margin(cache, k, 1.0)?;
    match params.form {
        Form::Equivalence => {
            let m = cache.reduced_dim()?;
            let dual = if k == m {
                0.0
            } else {
                kpn1_margin(cache, m - k, 1.0)?.value
            };
            let trace: f64 = cache.eig_whole()?.iter().sum();
            let norm = if trace > 0.0 { trace } else { 1.0 };
            Ok(Margin::equality(main.value / norm, dual / norm))
        }
        _ => Ok(main),
    }
}

fn eval_tpn62(cache: &mut EvalCache<'_>, params: &CaseParams) -> Result<Margin> {
    let (k, p, q) = (params.need_k()?, params.need_p()?, params.need_q()?);
    if !(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0) {
        return Err(Error::BadParams(format!(
            "TPN62 needs p, q in (0, 1), got {p}, {q}"
        )));
    }
    let eig = cache.eig_whole()?;
    let m = eig.len();
    check_case_k(k, m)?;
    let lhs = kp_antinorm_of_spectrum(eig, k, p, m);
    let factor = (k as f64).powf((q - 1.0) / (p * q));
    let rhs = factor * kp_antinorm_of_spectrum(eig, k, p * q, m);
    Ok(Margin::lower(lhs, rhs))
}

// ---------------------------------------------------------------------------
// Channel cases

fn eval_stct1(cache: &mut EvalCache<'_>, params: &CaseParams) -> Result<Margin> {
    kpn1_margin(cache, params.need_k()?, params.need_p()?)
}

fn eval_stctp(cache: &mut EvalCache<'_>, params: &CaseParams) -> Result<Margin> {
    let p = params.need_p()?;
    let e = exponent(p)?;
    let d = cache.traced_dim()?;
    let out = cache.sv_reduced()?.to_vec();
    let lhs = gauge_kp(&out, out.len(), e)?;
    let input = cache.sv_whole().to_vec();
    let rhs = dim_factor(d, p) * gauge_kp(&input, input.len(), e)?;
    Ok(Margin::upper(lhs, rhs))
}

fn eval_stct2(cache: &mut EvalCache<'_>, params: &CaseParams) -> Result<Margin> {
    kqn1_margin(cache, params.need_k()?, params.need_p()?)
}

fn eval_stctpp(cache: &mut EvalCache<'_>, params: &CaseParams) -> Result<Margin> {
    let p = anti_p(params.need_p()?)?;
    let d = cache.traced_dim()?;
    let lhs = schatten_antinorm_of_spectrum(cache.eig_reduced()?, p)?;
    let input = cache.eig_whole()?.to_vec();
    let rhs = dim_factor(d, p) * schatten_antinorm_of_spectrum(&input, p)?;
    Ok(Margin::lower(lhs, rhs))
}

// ---------------------------------------------------------------------------
// Entropy cases

/// `E(whole) <= dim^{(1−α)s} E(reduced) + (1/s) ln_α(dim^s)`.
fn entropy_margin(cache: &mut EvalCache<'_>, params: EntropyParams) -> Result<Margin> {
    let dim = cache.traced_dim()?;
    let lhs = unified_entropy_of_spectrum(cache.dens_whole()?, params);
    let reduced = unified_entropy_of_spectrum(cache.dens_reduced()?, params);
    let rhs = params.dimension_weight(dim as f64) * reduced + max_entropy_value(dim, params);
    Ok(Margin::upper(lhs, rhs))
}

fn eval_et41(cache: &mut EvalCache<'_>, params: &CaseParams) -> Result<Margin> {
    entropy_margin(cache, params.need_entropy()?)
}

fn eval_ett41(cache: &mut EvalCache<'_>, params: &CaseParams) -> Result<Margin> {
    let e = params.need_entropy()?;
    entropy_margin(cache, EntropyParams::tsallis(e.alpha)?)
}

fn eval_et42(cache: &mut EvalCache<'_>, params: &CaseParams) -> Result<Margin> {
    let e = params.need_entropy()?;
    entropy_margin(cache, EntropyParams::renyi(e.alpha)?)
}

// ---------------------------------------------------------------------------
// Saturation family W = c·R ⊗ I

fn eval_sat_wrqa(cache: &mut EvalCache<'_>, params: &CaseParams) -> Result<Margin> {
    let (k, p) = (params.need_k()?, params.need_p()?);
    let mut worst: Option<Margin> = None;
    let mut consider = |m: Margin| {
        let eq = Margin::equality(m.lhs, m.rhs);
        if worst.is_none_or(|w| eq.relative() < w.relative()) {
            worst = Some(eq);
        }
    };
    if p >= 1.0 {
        consider(kpn1_margin(cache, k, p)?);
    }
    if p <= 1.0 {
        consider(kqn1_margin(cache, k, p)?);
    }
    worst.ok_or_else(|| Error::BadParams(format!("no saturation check at p = {p}")))
}

// ---------------------------------------------------------------------------
// Grids

fn grid_k_norm_p(instance: &Instance, g: &ParamGrid) -> Vec<CaseParams> {
    let (m, _) = bipartite_dims(instance);
    (1..=m)
        .flat_map(|k| g.norm_p.iter().map(move |&p| CaseParams::k(k).with_p(p)))
        .collect()
}

fn grid_norm_p(_: &Instance, g: &ParamGrid) -> Vec<CaseParams> {
    g.norm_p.iter().map(|&p| CaseParams::p_only(p)).collect()
}

fn grid_tfsn(_: &Instance, _: &ParamGrid) -> Vec<CaseParams> {
    [1.0, 2.0, f64::INFINITY]
        .iter()
        .map(|&p| CaseParams::p_only(p))
        .collect()
}

fn grid_k_only(instance: &Instance, _: &ParamGrid) -> Vec<CaseParams> {
    let (m, _) = bipartite_dims(instance);
    (1..=m).map(CaseParams::k).collect()
}

fn grid_kpk2(_: &Instance, _: &ParamGrid) -> Vec<CaseParams> {
    vec![
        CaseParams::k(1).with_p(1.0),
        CaseParams::k(1).with_p(1.0).with_form(Form::Dominance),
    ]
}

fn grid_tpn2(instance: &Instance, g: &ParamGrid) -> Vec<CaseParams> {
    let m = match instance {
        Instance::Matrix(r) => r.rows(),
        other => bipartite_dims(other).0,
    };
    let mut out = Vec::new();
    for k in 1..=m {
        for &p in &g.norm_p {
            for &q in &g.norm_p {
                out.push(CaseParams::k(k).with_p(p).with_q(q));
            }
        }
    }
    out
}

fn grid_cpn1(instance: &Instance, g: &ParamGrid) -> Vec<CaseParams> {
    grid_tpn2(instance, g)
}

fn grid_k_anti_p(instance: &Instance, g: &ParamGrid) -> Vec<CaseParams> {
    let (m, _) = bipartite_dims(instance);
    (1..=m)
        .flat_map(|k| g.anti_p.iter().map(move |&p| CaseParams::k(k).with_p(p)))
        .collect()
}

fn grid_negative_p(_: &Instance, g: &ParamGrid) -> Vec<CaseParams> {
    g.negative_p
        .iter()
        .map(|&p| CaseParams::p_only(p))
        .collect()
}

fn grid_anti_p(_: &Instance, g: &ParamGrid) -> Vec<CaseParams> {
    g.anti_p.iter().map(|&p| CaseParams::p_only(p)).collect()
}

fn grid_kqk1(instance: &Instance, _: &ParamGrid) -> Vec<CaseParams> {
    let (m, _) = bipartite_dims(instance);
    (1..=m)
        .flat_map(|k| {
            [
                CaseParams::k(k),
                CaseParams::k(k).with_form(Form::Equivalence),
            ]
        })
        .collect()
}

fn open_unit(g: &ParamGrid) -> Vec<f64> {
    g.anti_p
        .iter()
        .copied()
        .filter(|&p| p > 0.0 && p < 1.0)
        .collect()
}

fn grid_tpn62(instance: &Instance, g: &ParamGrid) -> Vec<CaseParams> {
    let m = match instance {
        Instance::Matrix(r) => r.rows(),
        other => bipartite_dims(other).0,
    };
    let ps = open_unit(g);
    let mut out = Vec::new();
    for k in 1..=m {
        for &p in &ps {
            for &q in &ps {
                out.push(CaseParams::k(k).with_p(p).with_q(q));
            }
        }
    }
    out
}

fn entropy_grid(g: &ParamGrid) -> Vec<EntropyParams> {
    let mut out = Vec::new();
    for &alpha in &g.alpha {
        for &s in &g.s {
            if let Ok(e) = EntropyParams::new(alpha, s) {
                out.push(e);
            }
        }
    }
    out
}

fn grid_entropy_full(_: &Instance, g: &ParamGrid) -> Vec<CaseParams> {
    entropy_grid(g)
        .into_iter()
        .map(CaseParams::entropy)
        .collect()
}

fn grid_entropy_alpha(_: &Instance, g: &ParamGrid) -> Vec<CaseParams> {
    g.alpha
        .iter()
        .filter_map(|&a| EntropyParams::new(a, 1.0).ok())
        .map(CaseParams::entropy)
        .collect()
}

fn grid_sat_wrqa(instance: &Instance, g: &ParamGrid) -> Vec<CaseParams> {
    let (m, _) = bipartite_dims(instance);
    let mut ps: Vec<f64> = g.norm_p.clone();
    for &p in &g.anti_p {
        if !ps.contains(&p) {
            ps.push(p);
        }
    }
    (1..=m)
        .flat_map(|k| {
            ps.clone()
                .into_iter()
                .map(move |p| CaseParams::k(k).with_p(p))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Instance drawing

fn random_rank(s: &mut Sampler, dim: usize, trial: u64) -> usize {
    // odd trials are full rank, even trials draw a rank
    if trial % 2 == 1 {
        dim
    } else {
        s.range(1, dim)
    }
}

fn draw_bipartite_ginibre(s: &mut Sampler, (m, n): (usize, usize), _: u64) -> Result<Instance> {
    Ok(Instance::Bipartite(BipartiteOperator::new(
        s.ginibre(m * n, m * n),
        m,
        n,
    )?))
}

fn draw_bipartite_psd(s: &mut Sampler, (m, n): (usize, usize), trial: u64) -> Result<Instance> {
    let rank = random_rank(s, m * n, trial);
    Ok(Instance::Bipartite(BipartiteOperator::new(
        s.psd_with_rank(m * n, rank),
        m,
        n,
    )?))
}

fn draw_bipartite_pd(s: &mut Sampler, (m, n): (usize, usize), _: u64) -> Result<Instance> {
    Ok(Instance::Bipartite(BipartiteOperator::new(
        s.pd(m * n, PD_FLOOR_FRACTION),
        m,
        n,
    )?))
}

fn draw_bipartite_density(s: &mut Sampler, (m, n): (usize, usize), trial: u64) -> Result<Instance> {
    let rank = random_rank(s, m * n, trial);
    Ok(Instance::Bipartite(BipartiteOperator::new(
        s.density_with_rank(m * n, rank),
        m,
        n,
    )?))
}

fn draw_ginibre_square(s: &mut Sampler, (m, n): (usize, usize), _: u64) -> Result<Instance> {
    Ok(Instance::Matrix(s.ginibre(m * n, m * n)))
}

fn draw_psd_square(s: &mut Sampler, (m, n): (usize, usize), trial: u64) -> Result<Instance> {
    let rank = random_rank(s, m * n, trial);
    Ok(Instance::Matrix(s.psd_with_rank(m * n, rank)))
}

fn random_channel(s: &mut Sampler, m: usize, n: usize) -> Result<StinespringChannel> {
    let min_env = m.div_ceil(n);
    let d = s.range(min_env, min_env + 2);
    s.channel(m, n, d)
}

fn draw_channel_ginibre(s: &mut Sampler, (m, n): (usize, usize), _: u64) -> Result<Instance> {
    let channel = random_channel(s, m, n)?;
    let input = s.ginibre(m, m);
    Ok(Instance::Channel { channel, input })
}

fn draw_channel_psd(s: &mut Sampler, (m, n): (usize, usize), trial: u64) -> Result<Instance> {
    let channel = random_channel(s, m, n)?;
    let rank = random_rank(s, m, trial);
    let input = s.psd_with_rank(m, rank);
    Ok(Instance::Channel { channel, input })
}

fn draw_channel_density(s: &mut Sampler, (m, n): (usize, usize), trial: u64) -> Result<Instance> {
    let channel = random_channel(s, m, n)?;
    let rank = random_rank(s, m, trial);
    let input = s.density_with_rank(m, rank);
    Ok(Instance::Channel { channel, input })
}

fn draw_wrqa(s: &mut Sampler, (m, n): (usize, usize), trial: u64) -> Result<Instance> {
    let c = if trial.is_multiple_of(2) { 1.0 } else { 2.5 };
    Ok(Instance::Bipartite(wrqa_product(&s.psd(m), n, c)?))
}

// ---------------------------------------------------------------------------
// Saturators

/// `c · R ⊗ I_n`.
pub fn wrqa_product(r: &ComplexMatrix, n: usize, c: f64) -> Result<BipartiteOperator> {
    let m = r.ensure_square()?;
    BipartiteOperator::new(kron(r, &ComplexMatrix::identity(n)).scale_real(c), m, n)
}

fn with_grid(instances: Vec<Instance>, grid: GridFn, g: &ParamGrid) -> SaturationBatch {
    instances
        .into_iter()
        .map(|inst| {
            let params = grid(&inst, g);
            (inst, params)
        })
        .collect()
}

fn wrqa_instances(s: &mut Sampler, (m, n): (usize, usize)) -> Result<Vec<Instance>> {
    let r = s.psd(m);
    [1.0, 2.5]
        .iter()
        .map(|&c| Ok(Instance::Bipartite(wrqa_product(&r, n, c)?)))
        .collect()
}

fn pd_wrqa_instances(s: &mut Sampler, (m, n): (usize, usize)) -> Result<Vec<Instance>> {
    let r = s.pd(m, PD_FLOOR_FRACTION);
    [1.0, 2.5]
        .iter()
        .map(|&c| Ok(Instance::Bipartite(wrqa_product(&r, n, c)?)))
        .collect()
}

macro_rules! wrqa_saturator {
    ($name:ident, $grid:expr) => {
        fn $name(s: &mut Sampler, dims: (usize, usize), g: &ParamGrid) -> Result<SaturationBatch> {
            Ok(with_grid(wrqa_instances(s, dims)?, $grid, g))
        }
    };
}

wrqa_saturator!(sat_kpn1, grid_k_norm_p);
wrqa_saturator!(sat_spn1, grid_norm_p);
wrqa_saturator!(sat_tfsn, grid_tfsn);
wrqa_saturator!(sat_kpk1, grid_k_only);
wrqa_saturator!(sat_kpk2, |_: &Instance, _: &ParamGrid| vec![CaseParams::k(
    1
)
.with_p(1.0)]);
wrqa_saturator!(sat_kqn1, grid_k_anti_p);
wrqa_saturator!(sat_kqk1, grid_k_only);
wrqa_saturator!(sat_wrqa, grid_sat_wrqa);

fn sat_kqn2(s: &mut Sampler, dims: (usize, usize), g: &ParamGrid) -> Result<SaturationBatch> {
    Ok(with_grid(pd_wrqa_instances(s, dims)?, grid_negative_p, g))
}

fn sat_cpn1(s: &mut Sampler, (m, n): (usize, usize), g: &ParamGrid) -> Result<SaturationBatch> {
    let u = s.unitary(m);
    let w = BipartiteOperator::new(kron(&u, &ComplexMatrix::identity(n)).scale_real(2.5), m, n)?;
    Ok(with_grid(vec![Instance::Bipartite(w)], grid_cpn1, g))
}

/// `U diag(σ) V` whose leading `k` singular values coincide.
fn top_multiplicity_matrix(s: &mut Sampler, dim: usize, k: usize) -> ComplexMatrix {
    let mut sigma: Vec<f64> = (0..dim)
        .map(|j| {
            if j < k {
                3.0
            } else {
                2.0 - j as f64 / dim as f64
            }
        })
        .collect();
    sigma.reverse();
    let u = s.unitary(dim);
    let v = s.unitary(dim);
    u.matmul(&ComplexMatrix::from_diag(&sigma)).matmul(&v)
}

/// `U diag(λ) U†` whose smallest `k` eigenvalues coincide.
fn bottom_multiplicity_psd(s: &mut Sampler, dim: usize, k: usize) -> ComplexMatrix {
    let lambda: Vec<f64> = (0..dim)
        .map(|j| if j < k { 0.5 } else { 1.0 + j as f64 })
        .collect();
    let u = s.unitary(dim);
    ComplexMatrix::from_diag(&lambda).conjugate_by(&u)
}

fn sat_tpn2(s: &mut Sampler, (m, n): (usize, usize), g: &ParamGrid) -> Result<SaturationBatch> {
    let dim = m * n;
    Ok((1..=dim)
        .map(|k| {
            let inst = Instance::Matrix(top_multiplicity_matrix(s, dim, k));
            let params = grid_tpn2(&inst, g)
                .into_iter()
                .filter(|c| c.k == Some(k))
                .collect();
            (inst, params)
        })
        .collect())
}

fn sat_tpn62(s: &mut Sampler, (m, n): (usize, usize), g: &ParamGrid) -> Result<SaturationBatch> {
    let dim = m * n;
    Ok((1..=dim)
        .map(|k| {
            let inst = Instance::Matrix(bottom_multiplicity_psd(s, dim, k));
            let params = grid_tpn62(&inst, g)
                .into_iter()
                .filter(|c| c.k == Some(k))
                .collect();
            (inst, params)
        })
        .collect())
}

/// `Tr_B` as a channel fed with `c · R ⊗ I_n`.
fn partial_trace_channel_instances(
    s: &mut Sampler,
    (m, n): (usize, usize),
    density: bool,
) -> Vec<Instance> {
    let r = if density { s.density(m) } else { s.psd(m) };
    let scales: &[f64] = if density { &[1.0] } else { &[1.0, 2.5] };
    scales
        .iter()
        .map(|&c| {
            let c = if density { 1.0 / n as f64 } else { c };
            Instance::Channel {
                channel: StinespringChannel::partial_trace(m, n),
                input: kron(&r, &ComplexMatrix::identity(n)).scale_real(c),
            }
        })
        .collect()
}

macro_rules! channel_saturator {
    ($name:ident, $grid:expr, $density:expr) => {
        fn $name(s: &mut Sampler, dims: (usize, usize), g: &ParamGrid) -> Result<SaturationBatch> {
            Ok(with_grid(
                partial_trace_channel_instances(s, dims, $density),
                $grid,
                g,
            ))
        }
    };
}

channel_saturator!(sat_stct1, grid_k_norm_p, false);
channel_saturator!(sat_stctp, grid_norm_p, false);
channel_saturator!(sat_stct2, grid_k_anti_p, false);
channel_saturator!(sat_stctpp, grid_anti_p, false);
channel_saturator!(sat_stctep, grid_entropy_full, true);

fn product_density_instances(s: &mut Sampler, (m, n): (usize, usize)) -> Result<Vec<Instance>> {
    let rho = s.density(m);
    Ok(vec![Instance::Bipartite(wrqa_product(
        &rho,
        n,
        1.0 / n as f64,
    )?)])
}

macro_rules! product_saturator {
    ($name:ident, $grid:expr) => {
        fn $name(s: &mut Sampler, dims: (usize, usize), g: &ParamGrid) -> Result<SaturationBatch> {
            Ok(with_grid(product_density_instances(s, dims)?, $grid, g))
        }
    };
}

product_saturator!(sat_et41, grid_entropy_full);
product_saturator!(sat_ett41, grid_entropy_alpha);
product_saturator!(sat_et42, grid_entropy_alpha);

// ---------------------------------------------------------------------------

/// Every case, in report order.
pub fn registry() -> &'static [InequalityCase] {
    &REGISTRY
}

pub fn find_case(id: &str) -> Result<&'static InequalityCase> {
    registry()
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::UnknownCase(id.to_string()))
}

/// Signed margin of one case on one instance, with the environment
/// dimension of channels taken from the Choi rank.
pub fn evaluate_case(case_id: &str, instance: &Instance, params: &CaseParams) -> Result<Margin> {
    evaluate_case_with(case_id, instance, params, EnvDimSource::ChoiRank)
}

pub fn evaluate_case_with(
    case_id: &str,
    instance: &Instance,
    params: &CaseParams,
    env_source: EnvDimSource,
) -> Result<Margin> {
    let case = find_case(case_id)?;
    let mut cache = EvalCache::new(instance, env_source);
    case.evaluate(&mut cache, params)
}

static REGISTRY: [InequalityCase; 20] = [
    InequalityCase {
        id: "KPN1",
        description: "(k,p)-norm of the B-traced operator",
        formula: "||Tr_B W||_(k)^(p) <= n^((p-1)/p) ||W||_(kn)^(p)",
        requires: "bipartite",
        draw: draw_bipartite_ginibre,
        grid: grid_k_norm_p,
        evaluate: eval_kpn1,
        saturator: Some(sat_kpn1),
        strictness_probe: None,
    },
    InequalityCase {
        id: "SPN1",
        description: "Schatten norms under partial trace",
        formula: "||Tr_B W||_p <= n^((p-1)/p) ||W||_p",
        requires: "bipartite",
        draw: draw_bipartite_ginibre,
        grid: grid_norm_p,
        evaluate: eval_spn1,
        saturator: Some(sat_spn1),
        strictness_probe: None,
    },
    InequalityCase {
        id: "TFSN",
        description: "trace, Frobenius and spectral norms under partial trace",
        formula: "||Tr_B W||_1 <= ||W||_1; ||Tr_B W||_2 <= sqrt(n) ||W||_2; ||Tr_B W||_inf <= n ||W||_inf",
        requires: "bipartite",
        draw: draw_bipartite_ginibre,
        grid: grid_tfsn,
        evaluate: eval_tfsn,
        saturator: Some(sat_tfsn),
        strictness_probe: None,
    },
    InequalityCase {
        id: "KPK1",
        description: "Ky Fan norms under partial trace",
        formula: "||Tr_B W||_(k) <= ||W||_(kn)",
        requires: "bipartite",
        draw: draw_bipartite_ginibre,
        grid: grid_k_only,
        evaluate: eval_kpk1,
        saturator: Some(sat_kpk1),
        strictness_probe: None,
    },
    InequalityCase {
        id: "KPK2",
        description: "spectral norm of the B-traced operator against the Ky Fan n-norm",
        formula: "||Tr_B W||_inf <= ||W||_(n) <= n ||W||_inf",
        requires: "bipartite",
        draw: draw_bipartite_ginibre,
        grid: grid_kpk2,
        evaluate: eval_kpk2,
        saturator: Some(sat_kpk2),
        strictness_probe: Some(probe_kpk2),
    },
    InequalityCase {
        id: "TPN2",
        description: "(k,p)-norm against the (k,pq)-norm",
        formula: "||R||_(k)^(p) <= k^((q-1)/(pq)) ||R||_(k)^(pq)",
        requires: "matrix",
        draw: draw_ginibre_square,
        grid: grid_tpn2,
        evaluate: eval_tpn2,
        saturator: Some(sat_tpn2),
        strictness_probe: None,
    },
    InequalityCase {
        id: "CPN1",
        description: "combined partial-trace and exponent bound",
        formula: "||Tr_B W||_(k)^(p) <= [k^(q-1) n^(pq-1)]^(1/(pq)) ||W||_(kn)^(pq)",
        requires: "bipartite",
        draw: draw_bipartite_ginibre,
        grid: grid_cpn1,
        evaluate: eval_cpn1,
        saturator: Some(sat_cpn1),
        strictness_probe: None,
    },
    InequalityCase {
        id: "KQN1",
        description: "(k,p)-anti-norm of the B-traced PSD operator",
        formula: "||Tr_B W||_{k}^(p) >= n^((p-1)/p) ||W||_{kn}^(p), 0 < p <= 1",
        requires: "bipartite",
        draw: draw_bipartite_psd,
        grid: grid_k_anti_p,
        evaluate: eval_kqn1,
        saturator: Some(sat_kqn1),
        strictness_probe: None,
    },
    InequalityCase {
        id: "KQN2",
        description: "Schatten anti-norms with negative exponent under partial trace",
        formula: "||Tr_B W||_p >= n^((p-1)/p) ||W||_p, p < 0, W > 0",
        requires: "bipartite",
        draw: draw_bipartite_pd,
        grid: grid_negative_p,
        evaluate: eval_kqn2,
        saturator: Some(sat_kqn2),
        strictness_probe: None,
    },
    InequalityCase {
        id: "KQK1",
        description: "Ky Fan anti-norms under partial trace, dual to KPK1 at m-k",
        formula: "||Tr_B W||_{k} >= ||W||_{kn}",
        requires: "bipartite",
        draw: draw_bipartite_psd,
        grid: grid_kqk1,
        evaluate: eval_kqk1,
        saturator: Some(sat_kqk1),
        strictness_probe: None,
    },
    InequalityCase {
        id: "TPN62",
        description: "(k,p)-anti-norm against the (k,pq)-anti-norm",
        formula: "||R||_{k}^(p) >= k^((q-1)/(pq)) ||R||_{k}^(pq), 0 < p, q < 1",
        requires: "matrix",
        draw: draw_psd_square,
        grid: grid_tpn62,
        evaluate: eval_tpn62,
        saturator: Some(sat_tpn62),
        strictness_probe: None,
    },
    InequalityCase {
        id: "STCT1",
        description: "(k,p)-norm of a channel output",
        formula: "||Phi(Q)||_(k)^(p) <= d^((p-1)/p) ||Q||_(kd)^(p)",
        requires: "channel",
        draw: draw_channel_ginibre,
        grid: grid_k_norm_p,
        evaluate: eval_stct1,
        saturator: Some(sat_stct1),
        strictness_probe: None,
    },
    InequalityCase {
        id: "STCTP",
        description: "Schatten norm of a channel output",
        formula: "||Phi(Q)||_p <= d^((p-1)/p) ||Q||_p",
        requires: "channel",
        draw: draw_channel_ginibre,
        grid: grid_norm_p,
        evaluate: eval_stctp,
        saturator: Some(sat_stctp),
        strictness_probe: None,
    },
    InequalityCase {
        id: "STCT2",
        description: "(k,p)-anti-norm of a channel output, input spectrum zero-padded to n*d",
        formula: "||Phi(Q)||_{k}^(p) >= d^((p-1)/p) ||Q||_{kd}^(p), 0 < p <= 1",
        requires: "channel",
        draw: draw_channel_psd,
        grid: grid_k_anti_p,
        evaluate: eval_stct2,
        saturator: Some(sat_stct2),
        strictness_probe: None,
    },
    InequalityCase {
        id: "STCTPP",
        description: "Schatten anti-norm of a channel output",
        formula: "||Phi(Q)||_p >= d^((p-1)/p) ||Q||_p, 0 < p <= 1",
        requires: "channel",
        draw: draw_channel_psd,
        grid: grid_anti_p,
        evaluate: eval_stctpp,
        saturator: Some(sat_stctpp),
        strictness_probe: None,
    },
    InequalityCase {
        id: "ET41",
        description: "unified entropy of a joint state against its A marginal",
        formula: "E(W) <= n^((1-a)s) E(Tr_B W) + (1/s) ln_a(n^s)",
        requires: "bipartite",
        draw: draw_bipartite_density,
        grid: grid_entropy_full,
        evaluate: eval_et41,
        saturator: Some(sat_et41),
        strictness_probe: None,
    },
    InequalityCase {
        id: "ETT41",
        description: "Tsallis entropy of a joint state against its A marginal",
        formula: "T_a(W) <= n^(1-a) T_a(Tr_B W) + ln_a(n)",
        requires: "bipartite",
        draw: draw_bipartite_density,
        grid: grid_entropy_alpha,
        evaluate: eval_ett41,
        saturator: Some(sat_ett41),
        strictness_probe: None,
    },
    InequalityCase {
        id: "ET42",
        description: "Renyi entropy of a joint state against its A marginal",
        formula: "R_a(W) <= R_a(Tr_B W) + ln(n)",
        requires: "bipartite",
        draw: draw_bipartite_density,
        grid: grid_entropy_alpha,
        evaluate: eval_et42,
        saturator: Some(sat_et42),
        strictness_probe: None,
    },
    InequalityCase {
        id: "STCTEP",
        description: "unified entropy of a channel input against its output",
        formula: "E(rho) <= d^((1-a)s) E(Phi(rho)) + (1/s) ln_a(d^s)",
        requires: "channel",
        draw: draw_channel_density,
        grid: grid_entropy_full,
        evaluate: eval_et41,
        saturator: Some(sat_stctep),
        strictness_probe: None,
    },
    InequalityCase {
        id: "SAT-WRQA",
        description: "equality in KPN1 and KQN1 for W = c R (x) I",
        formula: "W = c R (x) I_n: equality in KPN1 (p >= 1) and KQN1 (p <= 1)",
        requires: "bipartite",
        draw: draw_wrqa,
        grid: grid_sat_wrqa,
        evaluate: eval_sat_wrqa,
        saturator: Some(sat_wrqa),
        strictness_probe: None,
    },
];
