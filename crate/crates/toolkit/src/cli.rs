//! Command-line front end. Every subcommand wraps one library entry point.
//!
//! Supports are 1-based on the command line and in every output.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use lire_core::baselines::{self, LassoLambda, SolverParams};
use lire_core::lire::{lire_correct, FillPolicy, LireConfig};
use lire_core::model::{generate_instance, random_support, EnsembleConfig};
use lire_core::theory::{
    corollary1_bound, corollary1_check, corollary2_bound, corollary2_check, omp_recovery_condition,
    rip_monte_carlo, theorem1_check, DeltaProvider, ExactDelta, RipMethod, UniformDelta,
};
use lire_core::{DesignMatrix, SupportVector};
use serde::Serialize;
use serde_json::Value;

use crate::bench::{self, AlgorithmDescriptor, GridSpec, RunManifest};
use crate::error::{io_err, Result, ToolkitError};
use crate::io;

#[derive(Debug, Parser)]
#[command(name = "lire", version, about = "Sparse support recovery with list-regression error correction")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format; defaults to JSON, or CSV for `phase`.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the result here instead of standard output.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RecoverAlgo {
    Omp,
    Cosamp,
    Bp,
    Lasso,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fill {
    Correlation,
    LowestIndex,
}

impl From<Fill> for FillPolicy {
    fn from(f: Fill) -> Self {
        match f {
            Fill::Correlation => FillPolicy::Correlation,
            Fill::LowestIndex => FillPolicy::LowestIndex,
        }
    }
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// ADMM iterations (bp) or coordinate sweeps (lasso).
    #[arg(long, default_value_t = 5000)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// ADMM penalty.
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,
    /// Fixed LASSO penalty; cross-validated when absent.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Cross-validation folds.
    #[arg(long, default_value_t = 10)]
    pub folds: usize,
}

impl SolverArgs {
    fn params(&self) -> SolverParams {
        let lasso_lambda = match (self.lambda, LassoLambda::default()) {
            (Some(l), _) => LassoLambda::Fixed(l),
            (None, LassoLambda::CrossValidated { grid_points, min_ratio, .. }) => LassoLambda::CrossValidated {
                folds: self.folds,
                grid_points,
                min_ratio,
            },
            (None, other) => other,
        };
        SolverParams {
            max_iterations: self.max_iter,
            tolerance: self.tol,
            admm_rho: self.rho,
            lasso_lambda,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw a seeded Gaussian instance and write it to a directory.
    Gen {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        seed: u64,
        /// Noise variance.
        #[arg(long, default_value_t = 0.0)]
        sigma2: f64,
        /// Rescale columns to unit norm.
        #[arg(long)]
        normalize: bool,
        /// Instance directory to create.
        #[arg(long, short)]
        out: PathBuf,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Run a baseline recoverer on an instance directory.
    Recover {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum)]
        algo: RecoverAlgo,
        /// Sparsity; defaults to the instance's m.
        #[arg(long)]
        m: Option<usize>,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Apply LiRE passes to an initial support estimate.
    Correct {
        #[arg(long)]
        instance: PathBuf,
        /// File of 1-based indices.
        #[arg(long, group = "start")]
        init: Option<PathBuf>,
        /// Start from this recoverer's output.
        #[arg(long, value_enum, group = "start")]
        algo: Option<RecoverAlgo>,
        /// Start from a uniformly random support (needs --seed).
        #[arg(long, group = "start")]
        random: bool,
        #[arg(long, default_value_t = 1)]
        passes: usize,
        /// List size; the default follows the m/n rule.
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = Fill::Correlation)]
        fill: Fill,
        #[arg(long)]
        m: Option<usize>,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Success rates over an (m, n) grid; CSV by default.
    Phase(PhaseArgs),
    /// Restricted isometry constant of a matrix file.
    Rip {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        t: usize,
        /// Exhaustive enumeration (default).
        #[arg(long, conflicts_with = "mc")]
        exact: bool,
        /// Lower bound from this many sampled supports (needs --seed).
        #[arg(long)]
        mc: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        normalize: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate a sufficient recovery condition.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
pub struct PhaseArgs {
    #[arg(long, default_value_t = 128)]
    pub d: usize,
    /// Comma-separated sparsity levels.
    #[arg(long, value_delimiter = ',', required = true)]
    pub m: Vec<usize>,
    /// Comma-separated list or `start:end:step` (inclusive).
    #[arg(long)]
    pub n: String,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    /// Comma-separated descriptors such as `omp,lire5_omp,bp`.
    #[arg(long, value_delimiter = ',', default_value = "omp,lire5_omp")]
    pub algos: Vec<String>,
    #[arg(long, default_value_t = 0.0)]
    pub sigma2: f64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long)]
    pub normalize: bool,
    #[arg(long, value_enum, default_value_t = Fill::Correlation)]
    pub fill: Fill,
    /// Write the run manifest (JSON) here.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Write per-trial records (CSV) here.
    #[arg(long)]
    pub trials_out: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("which").required(true).args(["theorem1", "cor1", "cor2", "omp"])))]
#[command(group(clap::ArgGroup::new("source").required(true).args(["delta", "matrix"])))]
pub struct CheckArgs {
    #[arg(long)]
    pub theorem1: bool,
    #[arg(long)]
    pub cor1: bool,
    #[arg(long)]
    pub cor2: bool,
    #[arg(long)]
    pub omp: bool,
    #[arg(long)]
    pub m: usize,
    /// Number of errors (ē for --cor2).
    #[arg(long, default_value_t = 0)]
    pub e: usize,
    /// List size; defaults to max(e, 1).
    #[arg(long)]
    pub ell: Option<usize>,
    /// Same δ at every order.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Exact δ from this matrix file.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    #[arg(long)]
    pub normalize: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}


/// Serializable view of a recovery.
#[derive(Debug, Serialize)]
pub struct RecoverOutput {
    pub algorithm: String,
    pub support: Vec<usize>,
    /// Aligned with `support`.
    pub coefficients: Vec<f64>,
    pub iterations: Option<usize>,
    pub final_residual_norm: f64,
    pub converged: bool,
    /// `s_star ⊆ support` and the solver converged.
    pub success: bool,
}

#[derive(Debug, Serialize)]
pub struct PassSummary {
    pub steps: usize,
    pub exited_early: bool,
    pub changed_slots: usize,
}

#[derive(Debug, Serialize)]
pub struct CorrectOutput {
    pub initial_support: Vec<usize>,
    pub support: Vec<usize>,
    pub list_size: usize,
    pub passes_run: usize,
    pub passes: Vec<PassSummary>,
    pub success: bool,
}

#[derive(Debug, Serialize)]
pub struct RipOutput {
    pub order: usize,
    pub delta: f64,
    pub extremal_support: Vec<usize>,
    pub method: RipMethod,
    pub exceeds_one: bool,
    pub subsets_examined: u64,
    /// Monte-Carlo values only bound the constant from below.
    pub optimistic: bool,
}

#[derive(Debug, Serialize)]
pub struct ConditionOutput {
    pub check: &'static str,
    pub m: usize,
    pub e: usize,
    pub satisfied: bool,
    /// Right-hand side of the error bound, when it applies.
    pub bound: Option<f64>,
    /// Every δ the check consulted, by order.
    pub deltas: BTreeMap<usize, f64>,
}

/// Records which orders a check asks for.
struct Recording<'a, P> {
    inner: &'a P,
    seen: RefCell<BTreeMap<usize, f64>>,
}

impl<P: DeltaProvider> DeltaProvider for Recording<'_, P> {
    fn delta(&self, order: usize) -> lire_core::Result<f64> {
        let v = self.inner.delta(order)?;
        self.seen.borrow_mut().insert(order, v);
        Ok(v)
    }
}

/// Parses `a,b,c` or an inclusive `start:end:step` range.
pub fn parse_n_values(text: &str) -> Result<Vec<usize>> {
    let bad = || ToolkitError::Usage(format!("cannot parse n values {text:?}"));
    if text.contains(':') {
        let parts: Vec<usize> = text
            .split(':')
            .map(|p| p.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let [start, end, step] = parts[..] else { return Err(bad()) };
        if step == 0 || start > end {
            return Err(bad());
        }
        return Ok((start..=end).step_by(step).collect());
    }
    text.split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| bad()))
        .collect()
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(io_err(p))?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(csv_cell).collect::<Vec<_>>().join(";"),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// JSON, or one `key,value` row per top-level field (arrays joined with `;`).
fn emit<T: Serialize>(value: &T, output: &OutputArgs, default: Format) -> Result<()> {
    emit_to(value, output.format.unwrap_or(default), &mut open_out(&output.out)?)
}

fn emit_to<T: Serialize>(value: &T, format: Format, w: &mut dyn Write) -> Result<()> {
    let json = serde_json::to_value(value)?;
    let ioe = |e| ToolkitError::Io {
        path: PathBuf::from("<output>"),
        source: e,
    };
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, &json)?;
            writeln!(w).map_err(ioe)?;
        }
        Format::Csv => {
            let mut cw = csv::Writer::from_writer(&mut *w);
            cw.write_record(["key", "value"])?;
            match &json {
                Value::Object(map) => {
                    for (k, v) in map {
                        let cell = match v {
                            Value::Object(_) => v.to_string(),
                            _ => csv_cell(v),
                        };
                        cw.write_record([k.as_str(), cell.as_str()])?;
                    }
                }
                other => cw.write_record(["value", csv_cell(other).as_str()])?,
            }
            cw.flush().map_err(ioe)?;
        }
    }
    w.flush().map_err(ioe)
}

fn load_matrix(path: &Path, normalize: bool) -> Result<DesignMatrix> {
    let phi = io::read_matrix_csv(path)?;
    Ok(if normalize { phi.normalized() } else { phi })
}

/// Runs a baseline; shared by `recover` and `correct --algo`.
pub fn recover_with(
    algo: RecoverAlgo,
    phi: &DesignMatrix,
    y: &[f64],
    m: usize,
    params: &SolverParams,
) -> Result<(SupportVector, Vec<f64>, Option<usize>, f64, bool)> {
    Ok(match algo {
        RecoverAlgo::Omp | RecoverAlgo::Cosamp => {
            let r = if algo == RecoverAlgo::Omp {
                baselines::omp(phi, y, m)?
            } else {
                baselines::cosamp(phi, y, m, params)?
            };
            (r.support, r.coefficients, Some(r.iterations), r.final_residual_norm, r.converged)
        }
        RecoverAlgo::Bp => {
            let (s, sol) = baselines::bp_support(phi, y, m, params)?;
            let coef: Vec<f64> = s.iter().map(|&i| sol.x[i]).collect();
            let resid = residual_norm(phi, &sol.x, y)?;
            (s, coef, Some(sol.iterations), resid, sol.converged)
        }
        RecoverAlgo::Lasso => {
            let folds = match params.lasso_lambda {
                LassoLambda::CrossValidated { folds, .. } => folds.min(phi.rows()),
                LassoLambda::Fixed(_) => 2,
            };
            let r = baselines::lasso_cv(phi, y, m, folds, params)?;
            let coef: Vec<f64> = r.support.iter().map(|&i| r.coefficients[i]).collect();
            let resid = residual_norm(phi, &r.coefficients, y)?;
            (r.support, coef, None, resid, r.converged)
        }
    })
}

fn residual_norm(phi: &DesignMatrix, x: &[f64], y: &[f64]) -> Result<f64> {
    let fit = phi.matvec(x)?;
    Ok(fit.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
}

fn algo_name(algo: RecoverAlgo) -> &'static str {
    match algo {
        RecoverAlgo::Omp => "omp",
        RecoverAlgo::Cosamp => "cosamp",
        RecoverAlgo::Bp => "bp",
        RecoverAlgo::Lasso => "lasso",
    }
}

/// Executes a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Gen {
            d,
            n,
            m,
            seed,
            sigma2,
            normalize,
            out,
            format,
        } => {
            let cfg = EnsembleConfig {
                d,
                n,
                m,
                sigma2,
                normalize_columns: normalize,
                seed,
            };
            let inst = generate_instance(&cfg)?;
            let meta = io::write_instance(&out, &inst, normalize)?;
            emit_to(&meta, format.unwrap_or(Format::Json), &mut std::io::stdout().lock())?;
            Ok(0)
        }
        Command::Recover {
            instance,
            algo,
            m,
            solver,
            output,
        } => {
            let inst = io::read_instance(&instance)?;
            let m = m.unwrap_or(inst.meta.m);
            let (support, coefficients, iterations, final_residual_norm, converged) =
                recover_with(algo, &inst.phi, &inst.y, m, &solver.params())?;
            let iterative = matches!(algo, RecoverAlgo::Bp | RecoverAlgo::Lasso);
            let solver_ok = converged || !iterative;
            let result = RecoverOutput {
                algorithm: algo_name(algo).to_owned(),
                success: solver_ok && bench::exact_recovery(&support, &inst.s_star),
                support: support.to_one_based(),
                coefficients,
                iterations,
                final_residual_norm,
                converged,
            };
            emit(&result, &output, Format::Json)?;
            Ok(if solver_ok { 0 } else { 1 })
        }
        Command::Correct {
            instance,
            init,
            algo,
            random,
            passes,
            ell,
            seed,
            fill,
            m,
            solver,
            output,
        } => {
            let inst = io::read_instance(&instance)?;
            let (phi, y) = (&inst.phi, &inst.y);
            let m = m.unwrap_or(inst.meta.m);
            let start = match (init, algo, random) {
                (Some(path), None, false) => io::read_support(&path, phi.cols())?,
                (None, Some(a), false) => recover_with(a, phi, y, m, &solver.params())?.0,
                (None, None, true) => {
                    let seed = seed.ok_or_else(|| ToolkitError::Usage("--random needs an explicit --seed".into()))?;
                    random_support(phi.cols(), m, seed)?
                }
                _ => return Err(ToolkitError::Usage("give exactly one of --init, --algo, --random".into())),
            };
            let mut cfg = LireConfig::new(m).with_passes(passes).with_fill_policy(fill.into());
            if let Some(l) = ell {
                cfg = cfg.with_list_size(l);
            }
            let (support, traces) = lire_correct(phi, y, &start, &cfg)?;
            let result = CorrectOutput {
                initial_support: start.to_one_based(),
                list_size: cfg.list_size_for(phi.rows()),
                passes_run: traces.len(),
                passes: traces
                    .iter()
                    .map(|t| PassSummary {
                        steps: t.steps.len(),
                        exited_early: t.exited_early,
                        changed_slots: t.steps.iter().filter(|s| s.chosen != s.removed).count(),
                    })
                    .collect(),
                success: bench::exact_recovery(&support, &inst.s_star),
                support: support.to_one_based(),
            };
            emit(&result, &output, Format::Json)?;
            Ok(0)
        }
        Command::Phase(args) => run_phase(args),
        Command::Rip {
            matrix,
            t,
            exact: _,
            mc,
            seed,
            normalize,
            jobs,
            output,
        } => {
            let phi = load_matrix(&matrix, normalize)?;
            let report = match mc {
                Some(samples) => {
                    let seed = seed.ok_or_else(|| ToolkitError::Usage("--mc needs an explicit --seed".into()))?;
                    rip_monte_carlo(&phi, t, samples, seed)?
                }
                None => crate::rip::rip_constant_parallel(&phi, t, jobs)?,
            };
            let result = RipOutput {
                order: report.order,
                delta: report.delta,
                extremal_support: report.extremal_support.to_one_based(),
                optimistic: report.method == RipMethod::MonteCarlo,
                method: report.method,
                exceeds_one: report.exceeds_one,
                subsets_examined: report.subsets_examined,
            };
            emit(&result, &output, Format::Json)?;
            Ok(0)
        }
        Command::Check(args) => run_check(args),
    }
}

fn run_phase(args: PhaseArgs) -> Result<i32> {
    let algorithms = args
        .algos
        .iter()
        .map(|a| a.parse::<AlgorithmDescriptor>())
        .collect::<Result<Vec<_>>>()?;
    let spec = GridSpec {
        d: args.d,
        m_values: args.m.clone(),
        n_values: parse_n_values(&args.n)?,
        trials: args.trials,
        algorithms,
        sigma2: args.sigma2,
        seed: args.seed,
        normalize_columns: args.normalize,
        solver: args.solver.params(),
        fill_policy: args.fill.into(),
        design: bench::Design::Gaussian,
    };
    spec.validate()?;
    let grid = bench::run_grid(&spec, args.jobs.max(1))?;
    if let Some(path) = &args.manifest {
        let text = serde_json::to_string_pretty(&RunManifest::new(&spec, args.jobs.max(1)))? + "\n";
        std::fs::write(path, text).map_err(io_err(path))?;
    }
    if let Some(path) = &args.trials_out {
        let f = BufWriter::new(File::create(path).map_err(io_err(path))?);
        bench::write_trials_csv(&grid, f)?;
    }
    match args.output.format.unwrap_or(Format::Csv) {
        Format::Csv => bench::write_grid_csv(&grid, open_out(&args.output.out)?)?,
        Format::Json => emit_to(&grid.cells, Format::Json, &mut open_out(&args.output.out)?)?,
    }
    Ok(0)
}

fn run_check(args: CheckArgs) -> Result<i32> {
    let matrix = match &args.matrix {
        Some(p) => Some(load_matrix(p, args.normalize)?),
        None => None,
    };
    let uniform = UniformDelta(args.delta.unwrap_or(0.0));
    let exact = matrix.as_ref().map(ExactDelta::new);
    match &exact {
        Some(p) => check_with(&args, p),
        None => check_with(&args, &uniform),
    }
}

fn check_with<P: DeltaProvider>(args: &CheckArgs, provider: &P) -> Result<i32> {
    let rec = Recording {
        inner: provider,
        seen: RefCell::new(BTreeMap::new()),
    };
    let (m, e) = (args.m, args.e);
    if args.theorem1 {
        let ell = args.ell.unwrap_or(e.max(1));
        let check = theorem1_check(m, e, ell, &rec)?;
        emit(&check, &args.output, Format::Json)?;
        return Ok(0);
    }
    let (name, satisfied, bound) = if args.cor1 {
        let ok = corollary1_check(m, e, &rec)?;
        ("cor1", ok, corollary1_bound(rec.delta(m + e + 2)?))
    } else if args.cor2 {
        let ok = corollary2_check(m, e, &rec)?;
        ("cor2", ok, corollary2_bound(rec.delta(m + e + 1)?))
    } else {
        let ok = omp_recovery_condition(m, &rec)?;
        ("omp", ok, Some(1.0 / ((m + 1) as f64).sqrt()))
    };
    let result = ConditionOutput {
        check: name,
        m,
        e,
        satisfied,
        bound: bound.filter(|b| b.is_finite()),
        deltas: rec.seen.into_inner(),
    };
    emit(&result, &args.output, Format::Json)?;
    Ok(0)
}
