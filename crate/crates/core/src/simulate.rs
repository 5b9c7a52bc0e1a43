//! Reproducible Monte Carlo for the collecting-pairs process.
//!
//! Two backends produce the same laws:
//!
//! * `Process` draws `Z_1, Z_2, ...` uniformly and watches for pairs `jj`.
//! * `Inversion` adds independent inter-collection times `Y_nj`, each drawn by
//!   inverting the closed-form distribution function.
//!
//! Replication `i` always draws from ChaCha8 stream `i` keyed by the master
//! seed, so a sample depends only on the configuration, never on scheduling.

use std::fmt;

use rand::distributions::Open01;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::distributions::{roots, PairModel, Roots};
use crate::error::{check_pair_params, domain, Error, Result};
use crate::limitlaws::Normalization;

/// Above this alphabet size the inversion backend is the default.
pub const PROCESS_DEFAULT_MAX_N: u64 = 50;

/// Waiting time to simulate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    /// Inter-collection time while `j` pairs are still missing.
    Y(u64),
    /// Time until `a` distinct pairs have been seen.
    S(u64),
    /// Time until all pairs have been seen.
    M,
    /// k-th largest of the single-pair waiting times, `S(n - k + 1)`.
    KthMax(u64),
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Y(j) => write!(f, "y({j})"),
            Target::S(a) => write!(f, "s({a})"),
            Target::M => f.write_str("m"),
            Target::KthMax(k) => write!(f, "kthmax({k})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Process,
    Inversion,
}

impl Backend {
    pub fn default_for(n: u64) -> Backend {
        if n > PROCESS_DEFAULT_MAX_N {
            Backend::Inversion
        } else {
            Backend::Process
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Process => "process",
            Backend::Inversion => "inversion",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub n: u64,
    pub target: Target,
    pub replications: usize,
    pub master_seed: u64,
    pub backend: Backend,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        PairModel::new(self.n)?;
        if self.replications == 0 {
            return domain("replications must be at least 1");
        }
        let n = self.n;
        match self.target {
            Target::Y(j) => check_pair_params(n, j),
            Target::S(a) if a == 0 || a > n => {
                domain(format!("a = {a} must satisfy 1 <= a <= n = {n}"))
            }
            Target::KthMax(k) if k == 0 || k > n => {
                domain(format!("k = {k} must satisfy 1 <= k <= n = {n}"))
            }
            _ => Ok(()),
        }
    }

    /// Number of pairs collected at the end of the target waiting time.
    pub fn collected(&self) -> u64 {
        match self.target {
            Target::Y(j) => self.n - j + 1,
            Target::S(a) => a,
            Target::M => self.n,
            Target::KthMax(k) => self.n - k + 1,
        }
    }
}

/// Random stream for one replication.
pub fn replication_rng(master_seed: u64, replication: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(replication);
    rng
}

/// Sorted outcomes of a batch of replications.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalSample {
    values: Vec<f64>,
    pub config: Option<SimConfig>,
    pub normalization: Option<Normalization>,
}

impl EmpiricalSample {
    /// Sorts `values`; the sample carries no seed lineage.
    pub fn from_values(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        Self {
            values,
            config: None,
            normalization: None,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        let m = self.mean();
        let ss: f64 = self.values.iter().map(|v| (v - m) * (v - m)).sum();
        ss / (self.values.len() as f64 - 1.0)
    }
}

/// Draws until every pair `jj` has occurred.
///
/// Entry `a - 1` of the result is the draw index at which the `a`-th distinct
/// pair completed, so the last entry is the full collection time.
pub fn simulate_process<R: Rng + ?Sized>(n: u64, rng: &mut R) -> Vec<u64> {
    simulate_process_until(n, n, rng)
}

fn simulate_process_until<R: Rng + ?Sized>(n: u64, stop_after: u64, rng: &mut R) -> Vec<u64> {
    let draws = std::iter::repeat_with(|| rng.gen_range(0..n as usize));
    pair_completions(n as usize, stop_after, draws)
}

// Scans a stream of symbols and records when each new pair first completes.
fn pair_completions(n: usize, stop_after: u64, draws: impl IntoIterator<Item = usize>) -> Vec<u64> {
    let mut collected = vec![false; n];
    let mut jumps = Vec::with_capacity(stop_after as usize);
    let mut prev = usize::MAX;
    for (draw, z) in (1u64..).zip(draws) {
        // a run jjj completes j once, at its second draw
        if z == prev && !collected[z] {
            collected[z] = true;
            jumps.push(draw);
            if jumps.len() as u64 >= stop_after {
                break;
            }
        }
        prev = z;
    }
    jumps
}

/// Draws `Y_nj` from uniforms by inverting its distribution function.
#[derive(Debug, Clone, Copy)]
pub struct InversionSampler {
    roots: Roots,
    mean: f64,
}

impl InversionSampler {
    pub fn new(n: u64, j: u64) -> Result<Self> {
        let roots = roots(n, j)?;
        Ok(Self {
            roots,
            mean: (n * n + n) as f64 / j as f64,
        })
    }

    /// Smallest `k >= 2` with `P{Y <= k} >= u`.
    pub fn sample(&self, u: f64) -> u64 {
        let target = 1.0 - u;
        let done = |k: u64| self.roots.tail(k) <= target;
        if done(2) {
            return 2;
        }
        let mut lo = 2u64;
        let mut hi = (self.mean.ceil() as u64).max(3);
        while !done(hi) {
            lo = hi;
            hi = hi.saturating_mul(2);
        }
        // invariant: !done(lo) && done(hi)
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if done(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }
}

pub fn sample_y_inversion(n: u64, j: u64, u: f64) -> Result<u64> {
    if !(u > 0.0 && u < 1.0) {
        return domain(format!("uniform variate u = {u} must lie in (0, 1)"));
    }
    Ok(InversionSampler::new(n, j)?.sample(u))
}

// Per-experiment state shared read-only by all replications.
enum Plan {
    Process { stop_after: u64 },
    // samplers for j = n, n - 1, ..., n - a + 1
    Inversion(Vec<InversionSampler>),
}

fn one_replication(config: &SimConfig, plan: &Plan, index: u64) -> f64 {
    let mut rng = replication_rng(config.master_seed, index);
    match plan {
        Plan::Process { stop_after } => {
            let jumps = simulate_process_until(config.n, *stop_after, &mut rng);
            let end = jumps[*stop_after as usize - 1];
            let value = match config.target {
                Target::Y(_) if *stop_after >= 2 => end - jumps[*stop_after as usize - 2],
                _ => end,
            };
            value as f64
        }
        Plan::Inversion(samplers) => {
            let draws: Vec<u64> = samplers
                .iter()
                .map(|s| s.sample(rng.sample(Open01)))
                .collect();
            let value: u64 = match config.target {
                Target::Y(_) => *draws.last().expect("at least one sampler"),
                _ => draws.iter().sum(),
            };
            value as f64
        }
    }
}

/// Runs `config.replications` independent replications on `workers` threads
/// (all available cores when `None`). The result depends only on `config`.
pub fn run_experiment(config: &SimConfig, workers: Option<usize>) -> Result<EmpiricalSample> {
    config.validate()?;
    let n = config.n;
    let collected = config.collected();
    let plan = match config.backend {
        Backend::Process => Plan::Process {
            stop_after: collected,
        },
        Backend::Inversion => {
            let samplers = ((n - collected + 1)..=n)
                .rev()
                .map(|j| InversionSampler::new(n, j))
                .collect::<Result<Vec<_>>>()?;
            Plan::Inversion(samplers)
        }
    };
    let reps = config.replications as u64;
    let values = with_workers(workers, || {
        (0..reps)
            .into_par_iter()
            .map(|i| one_replication(config, &plan, i))
            .collect::<Vec<f64>>()
    })?;
    let mut sample = EmpiricalSample::from_values(values);
    sample.config = Some(*config);
    Ok(sample)
}

/// Full jump-time paths from the process backend, one per replication.
pub fn process_paths(
    n: u64,
    replications: usize,
    master_seed: u64,
    workers: Option<usize>,
) -> Result<Vec<Vec<u64>>> {
    PairModel::new(n)?;
    with_workers(workers, || {
        (0..replications as u64)
            .into_par_iter()
            .map(|i| simulate_process(n, &mut replication_rng(master_seed, i)))
            .collect()
    })
}

fn with_workers<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(job()),
        Some(0) => domain("worker count must be positive"),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::Domain(format!("cannot start worker pool: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

/// Applies `(v - center) / scale` to every value.
pub fn normalize_sample(
    sample: &EmpiricalSample,
    normalization: &Normalization,
) -> EmpiricalSample {
    assert!(
        normalization.scale > 0.0,
        "normalization scale must be positive"
    );
    let values = sample
        .values
        .iter()
        .map(|v| (v - normalization.center) / normalization.scale)
        .collect();
    EmpiricalSample {
        values,
        config: sample.config,
        normalization: Some(*normalization),
    }
}
