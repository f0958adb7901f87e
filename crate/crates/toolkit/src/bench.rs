//! Phase-diagram experiments over `(m, n)` grids with paired instances.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;
use std::time::Instant;

use lire_core::baselines::{self, LassoLambda, SolverParams};
use lire_core::lire::{lire_correct, FillPolicy, LireConfig};
use lire_core::model::{generate_instance, mix_seed, random_support, EnsembleConfig};
use lire_core::SupportVector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ToolkitError};

/// Noise presets for the sweep experiments.
pub const NOISE_PRESETS: [f64; 3] = [0.0005, 0.001, 0.002];

/// Passes used when a descriptor names LiRE without a count.
pub const DEFAULT_BENCH_PASSES: usize = 5;

/// Domain separator for the random-initialization stream.
const RANDOM_INIT_TAG: u64 = 0x5241_4E44;

/// Containment semantics: `s_star ⊆ s_out`.
pub fn exact_recovery(s_out: &SupportVector, s_star: &SupportVector) -> bool {
    s_out.is_superset_of(s_star)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseAlgorithm {
    Omp,
    Cosamp,
    Bp,
    Lasso,
    /// Uniformly random support; only meaningful under LiRE.
    Random,
}

impl BaseAlgorithm {
    pub fn name(self) -> &'static str {
        match self {
            BaseAlgorithm::Omp => "omp",
            BaseAlgorithm::Cosamp => "cosamp",
            BaseAlgorithm::Bp => "bp",
            BaseAlgorithm::Lasso => "lasso",
            BaseAlgorithm::Random => "random",
        }
    }
}

impl FromStr for BaseAlgorithm {
    type Err = ToolkitError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "omp" => BaseAlgorithm::Omp,
            "cosamp" => BaseAlgorithm::Cosamp,
            "bp" => BaseAlgorithm::Bp,
            "lasso" => BaseAlgorithm::Lasso,
            "random" => BaseAlgorithm::Random,
            other => return Err(ToolkitError::Usage(format!("unknown algorithm {other:?}"))),
        })
    }
}

/// A base recoverer, optionally followed by LiRE passes.
///
/// Textual form: `omp`, `lire5_omp`, or `lire_omp` for the default pass count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AlgorithmDescriptor {
    pub base: BaseAlgorithm,
    pub lire_passes: Option<usize>,
}

impl AlgorithmDescriptor {
    pub fn plain(base: BaseAlgorithm) -> Self {
        Self { base, lire_passes: None }
    }

    pub fn with_lire(base: BaseAlgorithm, passes: usize) -> Self {
        Self {
            base,
            lire_passes: Some(passes),
        }
    }
}

impl fmt::Display for AlgorithmDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.lire_passes {
            Some(p) => write!(f, "lire{p}_{}", self.base.name()),
            None => f.write_str(self.base.name()),
        }
    }
}

impl FromStr for AlgorithmDescriptor {
    type Err = ToolkitError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let Some(rest) = s.strip_prefix("lire") else {
            let base: BaseAlgorithm = s.parse()?;
            if base == BaseAlgorithm::Random {
                return Err(ToolkitError::Usage("random initialization needs LiRE (lire_random)".into()));
            }
            return Ok(Self::plain(base));
        };
        let (count, base) = rest
            .split_once(['_', '+', '-'])
            .ok_or_else(|| ToolkitError::Usage(format!("malformed algorithm {s:?}")))?;
        let passes = if count.is_empty() {
            DEFAULT_BENCH_PASSES
        } else {
            count
                .parse::<usize>()
                .ok()
                .filter(|p| *p >= 1)
                .ok_or_else(|| ToolkitError::Usage(format!("bad LiRE pass count in {s:?}")))?
        };
        Ok(Self::with_lire(base.parse()?, passes))
    }
}

/// Measurement design used for every instance of a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Design {
    /// Seeded `N(0, 1/n)` ensemble.
    #[default]
    Gaussian,
    /// `Φ = I`; requires every `n` to equal `d`.
    Identity,
}

/// Experiment grid over sparsity levels `m_values` and measurement counts `n_values`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub d: usize,
    pub m_values: Vec<usize>,
    pub n_values: Vec<usize>,
    pub trials: usize,
    pub algorithms: Vec<AlgorithmDescriptor>,
    pub sigma2: f64,
    pub seed: u64,
    pub normalize_columns: bool,
    pub solver: SolverParams,
    pub fill_policy: FillPolicy,
    #[serde(default)]
    pub design: Design,
}

impl GridSpec {
    /// Desk-scale defaults: `d = 128`, 50 trials, `m` step 2, `n` step 4.
    pub fn desk_scale(algorithms: Vec<AlgorithmDescriptor>, seed: u64) -> Self {
        let d = 128;
        let m_step = (0.015 * d as f64).ceil() as usize;
        let n_step = (0.03 * d as f64).ceil() as usize;
        Self {
            d,
            m_values: (m_step..=16).step_by(m_step).collect(),
            n_values: (n_step * 4..=d).step_by(n_step).collect(),
            trials: 50,
            algorithms,
            sigma2: 0.0,
            seed,
            normalize_columns: false,
            solver: SolverParams::default(),
            fill_policy: FillPolicy::default(),
            design: Design::Gaussian,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let usage = |m: String| Err(ToolkitError::Usage(m));
        if self.trials == 0 {
            return usage("trials must be at least 1".into());
        }
        if self.m_values.is_empty() || self.n_values.is_empty() || self.algorithms.is_empty() {
            return usage("grid needs at least one m, one n and one algorithm".into());
        }
        let max_m = *self.m_values.iter().max().unwrap();
        let min_m = *self.m_values.iter().min().unwrap();
        let min_n = *self.n_values.iter().min().unwrap();
        let max_n = *self.n_values.iter().max().unwrap();
        if min_m == 0 || max_m > min_n || max_n > self.d {
            return usage(format!(
                "need 1 <= m <= n <= d for every pair; m in [{min_m}, {max_m}], n in [{min_n}, {max_n}], d = {}",
                self.d
            ));
        }
        if !self.n_values.windows(2).all(|w| w[0] < w[1]) {
            return usage("n_values must be strictly increasing".into());
        }
        if !(self.sigma2 >= 0.0 && self.sigma2.is_finite()) {
            return usage("sigma2 must be finite and nonnegative".into());
        }
        if self.design == Design::Identity && self.n_values.iter().any(|&n| n != self.d) {
            return usage("the identity design needs n = d".into());
        }
        self.solver.validate()?;
        Ok(())
    }
}

/// Outcome of one algorithm on one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub m: usize,
    pub n: usize,
    pub trial: usize,
    pub instance_seed: u64,
    pub algorithm: String,
    pub success: bool,
    /// False when an iterative solver hit its cap; such trials count as failures.
    pub converged: bool,
    pub runtime_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub m: usize,
    pub n: usize,
    pub algorithm: String,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub mean_runtime_ms: f64,
    pub nonconverged: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseGrid {
    pub d: usize,
    pub sigma2: f64,
    pub seed: u64,
    /// Sorted by `(m, n)`, then in the spec's algorithm order.
    pub cells: Vec<CellResult>,
    pub trials: Vec<TrialRecord>,
    pub wall_time_ms: f64,
}

impl PhaseGrid {
    pub fn cell(&self, m: usize, n: usize, algorithm: &str) -> Option<&CellResult> {
        self.cells
            .iter()
            .find(|c| c.m == m && c.n == n && c.algorithm == algorithm)
    }

    pub fn algorithms(&self) -> Vec<String> {
        let mut seen: Vec<String> = Vec::new();
        for c in &self.cells {
            if !seen.contains(&c.algorithm) {
                seen.push(c.algorithm.clone());
            }
        }
        seen
    }
}

struct BaseOutcome {
    support: SupportVector,
    converged: bool,
    ms: f64,
}

fn run_base(
    base: BaseAlgorithm,
    inst: &lire_core::model::SparseInstance,
    m: usize,
    spec: &GridSpec,
) -> Result<BaseOutcome> {
    let t0 = Instant::now();
    let (support, converged) = match base {
        BaseAlgorithm::Omp => (baselines::omp(&inst.phi, &inst.y, m)?.support, true),
        // The CoSaMP residual flag is informational: with noise it never reaches zero.
        BaseAlgorithm::Cosamp => (baselines::cosamp(&inst.phi, &inst.y, m, &spec.solver)?.support, true),
        BaseAlgorithm::Bp => {
            let (s, sol) = baselines::bp_support(&inst.phi, &inst.y, m, &spec.solver)?;
            (s, sol.converged)
        }
        BaseAlgorithm::Lasso => {
            let folds = match spec.solver.lasso_lambda {
                LassoLambda::CrossValidated { folds, .. } => folds.min(inst.phi.rows()),
                LassoLambda::Fixed(_) => 2,
            };
            let res = baselines::lasso_cv(&inst.phi, &inst.y, m, folds, &spec.solver)?;
            (res.support, res.converged)
        }
        BaseAlgorithm::Random => (
            random_support(inst.phi.cols(), m, mix_seed(inst.seed, &[RANDOM_INIT_TAG]))?,
            true,
        ),
    };
    Ok(BaseOutcome {
        support,
        converged,
        ms: t0.elapsed().as_secs_f64() * 1e3,
    })
}

/// Runs every descriptor on one instance, sharing base-algorithm runs.
fn run_trial(spec: &GridSpec, m: usize, n: usize, trial: usize) -> Result<Vec<TrialRecord>> {
    let seed = mix_seed(spec.seed, &[m as u64, n as u64, trial as u64]);
    let cfg = EnsembleConfig {
        d: spec.d,
        n,
        m,
        sigma2: spec.sigma2,
        normalize_columns: spec.normalize_columns,
        seed,
    };
    let mut inst = generate_instance(&cfg)?;
    if spec.design == Design::Identity {
        // Keep x* and the noise draw; swap the operator.
        let clean = inst.phi.matvec(&inst.x_star)?;
        for ((yi, c), x) in inst.y.iter_mut().zip(&clean).zip(&inst.x_star) {
            *yi += x - c;
        }
        inst.phi = lire_core::DesignMatrix::identity(spec.d);
    }
    let mut cache: BTreeMap<BaseAlgorithm, BaseOutcome> = BTreeMap::new();
    let mut out = Vec::with_capacity(spec.algorithms.len());
    for algo in &spec.algorithms {
        if !cache.contains_key(&algo.base) {
            cache.insert(algo.base, run_base(algo.base, &inst, m, spec)?);
        }
        let base = &cache[&algo.base];
        let (support, ms) = match algo.lire_passes {
            None => (base.support.clone(), base.ms),
            Some(passes) => {
                let t0 = Instant::now();
                let lcfg = LireConfig::new(m)
                    .with_passes(passes)
                    .with_fill_policy(spec.fill_policy);
                let (s, _) = lire_correct(&inst.phi, &inst.y, &base.support, &lcfg)?;
                (s, base.ms + t0.elapsed().as_secs_f64() * 1e3)
            }
        };
        // Only the base's own record inherits a solver failure; LiRE just uses it as a start.
        let converged = algo.lire_passes.is_some() || base.converged;
        out.push(TrialRecord {
            m,
            n,
            trial,
            instance_seed: seed,
            algorithm: algo.to_string(),
            success: converged && exact_recovery(&support, &inst.s_star),
            converged,
            runtime_ms: ms,
        });
    }
    Ok(out)
}

/// Runs the grid on `jobs` worker threads; the result does not depend on `jobs`.
pub fn run_grid(spec: &GridSpec, jobs: usize) -> Result<PhaseGrid> {
    spec.validate()?;
    let start = Instant::now();
    let mut units = Vec::new();
    for &m in &spec.m_values {
        for &n in &spec.n_values {
            for k in 0..spec.trials {
                units.push((m, n, k));
            }
        }
    }
    let run = || -> Result<Vec<Vec<TrialRecord>>> {
        units
            .par_iter()
            .map(|&(m, n, k)| run_trial(spec, m, n, k))
            .collect()
    };
    let per_trial = if jobs <= 1 {
        units
            .iter()
            .map(|&(m, n, k)| run_trial(spec, m, n, k))
            .collect::<Result<Vec<_>>>()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| ToolkitError::Usage(e.to_string()))?
            .install(run)?
    };
    let trials: Vec<TrialRecord> = per_trial.into_iter().flatten().collect();

    let mut cells = Vec::new();
    let stride = spec.algorithms.len();
    for (cell_idx, chunk) in trials.chunks(stride * spec.trials).enumerate() {
        let (m, n) = (chunk[0].m, chunk[0].n);
        debug_assert_eq!(cell_idx, cells.len() / stride);
        for (a, algo) in spec.algorithms.iter().enumerate() {
            let recs: Vec<&TrialRecord> = chunk.iter().skip(a).step_by(stride).collect();
            let successes = recs.iter().filter(|r| r.success).count();
            cells.push(CellResult {
                m,
                n,
                algorithm: algo.to_string(),
                trials: recs.len(),
                successes,
                success_rate: successes as f64 / recs.len() as f64,
                mean_runtime_ms: recs.iter().map(|r| r.runtime_ms).sum::<f64>() / recs.len() as f64,
                nonconverged: recs.iter().filter(|r| !r.converged).count(),
            });
        }
    }
    Ok(PhaseGrid {
        d: spec.d,
        sigma2: spec.sigma2,
        seed: spec.seed,
        cells,
        trials,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImprovementCell {
    pub m: usize,
    pub n: usize,
    /// `success_rate(algo1) − success_rate(algo2)`.
    pub difference: f64,
}

/// Cellwise success-rate difference between two algorithms of the same grid.
pub fn improvement_grid(grid: &PhaseGrid, algo1: &str, algo2: &str) -> Result<Vec<ImprovementCell>> {
    let mut out = Vec::new();
    for a in grid.cells.iter().filter(|c| c.algorithm == algo1) {
        let b = grid
            .cell(a.m, a.n, algo2)
            .ok_or_else(|| ToolkitError::Usage(format!("algorithm {algo2:?} missing at m={}, n={}", a.m, a.n)))?;
        if a.trials != b.trials {
            return Err(ToolkitError::Usage(format!("unequal trials at m={}, n={}", a.m, a.n)));
        }
        out.push(ImprovementCell {
            m: a.m,
            n: a.n,
            difference: a.success_rate - b.success_rate,
        });
    }
    if out.is_empty() {
        return Err(ToolkitError::Usage(format!("algorithm {algo1:?} not in grid")));
    }
    Ok(out)
}

/// Smallest `n` at which `algo` recovers every trial for sparsity `m`.
pub fn measurements_to_perfect(grid: &PhaseGrid, algo: &str, m: usize) -> Option<usize> {
    grid.cells
        .iter()
        .filter(|c| c.m == m && c.algorithm == algo && c.successes == c.trials)
        .map(|c| c.n)
        .min()
}

pub const CSV_HEADER: [&str; 10] = [
    "d",
    "m",
    "n",
    "algorithm",
    "sigma2",
    "trials",
    "successes",
    "success_rate",
    "mean_runtime_ms",
    "seed",
];

/// One row of the grid CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub d: usize,
    pub m: usize,
    pub n: usize,
    pub algorithm: String,
    pub sigma2: f64,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub mean_runtime_ms: f64,
    pub seed: u64,
}

pub fn write_grid_csv(grid: &PhaseGrid, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for c in &grid.cells {
        w.serialize(CsvRow {
            d: grid.d,
            m: c.m,
            n: c.n,
            algorithm: c.algorithm.clone(),
            sigma2: grid.sigma2,
            trials: c.trials,
            successes: c.successes,
            success_rate: c.success_rate,
            mean_runtime_ms: c.mean_runtime_ms,
            seed: grid.seed,
        })?;
    }
    w.flush().map_err(|e| ToolkitError::Csv(e.into()))?;
    Ok(())
}

pub fn read_grid_csv(input: impl Read) -> Result<Vec<CsvRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header != CSV_HEADER {
        return Err(ToolkitError::Usage(format!("unexpected CSV header {header:?}")));
    }
    r.deserialize().map(|row| row.map_err(ToolkitError::from)).collect()
}

pub fn write_trials_csv(grid: &PhaseGrid, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for t in &grid.trials {
        w.serialize(t)?;
    }
    w.flush().map_err(|e| ToolkitError::Csv(e.into()))?;
    Ok(())
}

/// Settings that shape results but are not grid coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionMetadata {
    pub fill_policy: FillPolicy,
    pub list_size_rule: String,
    pub tie_breaking: String,
    pub residual_zero_tol: f64,
    pub admm_rho: f64,
    pub admm_tolerance: f64,
    pub max_iterations: usize,
    pub lasso_lambda: LassoLambda,
    pub cosamp_iterations: String,
    pub success_metric: String,
    pub seed_derivation: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub toolkit_version: String,
    pub spec: GridSpec,
    pub algorithms: Vec<String>,
    pub jobs: usize,
    pub decisions: DecisionMetadata,
}

impl RunManifest {
    pub fn new(spec: &GridSpec, jobs: usize) -> Self {
        Self {
            toolkit_version: env!("CARGO_PKG_VERSION").to_owned(),
            spec: spec.clone(),
            algorithms: spec.algorithms.iter().map(ToString::to_string).collect(),
            jobs,
            decisions: DecisionMetadata {
                fill_policy: spec.fill_policy,
                list_size_rule: "floor(m/2) if 3m <= 2n else n-m, clamped to [1, m]".into(),
                tie_breaking: "lowest index".into(),
                residual_zero_tol: lire_core::linalg::RESIDUAL_ZERO_TOL,
                admm_rho: spec.solver.admm_rho,
                admm_tolerance: spec.solver.tolerance,
                max_iterations: spec.solver.max_iterations,
                lasso_lambda: spec.solver.lasso_lambda,
                cosamp_iterations: "ceil(d/4)".into(),
                success_metric: "s_star subset of s_out; solver non-convergence counts as failure".into(),
                seed_derivation: "splitmix64 chain of (seed, m, n, trial)".into(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_spec() -> GridSpec {
        GridSpec {
            d: 32,
            m_values: vec![2, 4],
            n_values: vec![8, 12, 16],
            trials: 6,
            algorithms: vec!["omp".parse().unwrap(), "lire3_omp".parse().unwrap()],
            sigma2: 0.0,
            seed: 9,
            normalize_columns: false,
            solver: SolverParams::default(),
            fill_policy: FillPolicy::default(),
            design: Design::Gaussian,
        }
    }

    #[test]
    fn descriptor_names_round_trip() {
        for s in ["omp", "cosamp", "bp", "lasso", "lire5_omp", "lire1_lasso", "lire3_random"] {
            let a: AlgorithmDescriptor = s.parse().unwrap();
            assert_eq!(a.to_string(), s);
        }
        assert_eq!("lire_omp".parse::<AlgorithmDescriptor>().unwrap().lire_passes, Some(5));
        assert_eq!("LiRE5+OMP".parse::<AlgorithmDescriptor>().unwrap().to_string(), "lire5_omp");
        assert!("random".parse::<AlgorithmDescriptor>().is_err());
        assert!("lire0_omp".parse::<AlgorithmDescriptor>().is_err());
        assert!("svm".parse::<AlgorithmDescriptor>().is_err());
    }

    #[test]
    fn exact_recovery_semantics() {
        let s = SupportVector::new(vec![1, 4, 7], 10).unwrap();
        assert!(exact_recovery(&s, &s));
        assert!(!exact_recovery(&SupportVector::new(vec![1, 4, 8], 10).unwrap(), &s));
        let bigger = SupportVector::new(vec![1, 2, 4, 7], 10).unwrap();
        assert!(exact_recovery(&bigger, &s));
    }

    #[test]
    fn grid_is_deterministic_and_jobs_independent() {
        let spec = small_spec();
        let a = run_grid(&spec, 1).unwrap();
        let b = run_grid(&spec, 3).unwrap();
        assert_eq!(a.cells.len(), 2 * 3 * 2);
        for (x, y) in a.cells.iter().zip(&b.cells) {
            assert_eq!((x.m, x.n, &x.algorithm, x.successes), (y.m, y.n, &y.algorithm, y.successes));
        }
        for c in &a.cells {
            assert!(c.successes <= c.trials);
            assert_eq!(c.success_rate, c.successes as f64 / c.trials as f64);
        }
        let total: f64 = a.cells.iter().map(|c| c.mean_runtime_ms * c.trials as f64).sum();
        assert!(total <= a.wall_time_ms);
    }

    #[test]
    fn identity_design_is_always_recovered() {
        let spec = GridSpec {
            d: 16,
            m_values: vec![1, 4, 8],
            n_values: vec![16],
            trials: 5,
            algorithms: ["omp", "cosamp", "bp", "lasso", "lire1_omp", "lire2_random"]
                .iter()
                .map(|a| a.parse().unwrap())
                .collect(),
            design: Design::Identity,
            ..small_spec()
        };
        let g = run_grid(&spec, 1).unwrap();
        for c in &g.cells {
            assert_eq!(c.success_rate, 1.0, "{c:?}");
        }
        let mut bad = spec;
        bad.n_values = vec![12];
        assert!(bad.validate().is_err());
    }

    #[test]
    fn improvements_and_thresholds() {
        let g = run_grid(&small_spec(), 1).unwrap();
        let same = improvement_grid(&g, "omp", "omp").unwrap();
        assert!(same.iter().all(|c| c.difference == 0.0));
        for c in improvement_grid(&g, "lire3_omp", "omp").unwrap() {
            let scaled = c.difference * 6.0;
            assert!((scaled - scaled.round()).abs() < 1e-12);
        }
        assert!(improvement_grid(&g, "bp", "omp").is_err());

        let mut perfect = g.clone();
        for c in &mut perfect.cells {
            c.successes = c.trials;
        }
        assert_eq!(measurements_to_perfect(&perfect, "omp", 2), Some(8));
        let mut never = g;
        for c in &mut never.cells {
            c.successes = 0;
        }
        assert_eq!(measurements_to_perfect(&never, "omp", 2), None);
    }

    #[test]
    fn csv_schema_round_trips() {
        let g = run_grid(&small_spec(), 1).unwrap();
        let mut buf = Vec::new();
        write_grid_csv(&g, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
        let rows = read_grid_csv(buf.as_slice()).unwrap();
        assert_eq!(rows.len(), g.cells.len());
        assert_eq!(rows[0].seed, 9);
    }

    #[test]
    fn invalid_specs() {
        let mut s = small_spec();
        s.m_values = vec![10];
        assert!(run_grid(&s, 1).is_err());
        let mut s = small_spec();
        s.trials = 0;
        assert!(s.validate().is_err());
        let mut s = small_spec();
        s.n_values = vec![40];
        assert!(s.validate().is_err());
    }
}
