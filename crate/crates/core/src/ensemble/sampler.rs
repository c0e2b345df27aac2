use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::rng::{draw_generators, trial_rng};
use crate::exact::{CdfTable, CdfValues, Provenance};
use crate::error::{invalid, Error, Result};
use crate::fqlin::{min_distance, FieldSpec};

/// Default cap on codeword visits summed over all trials.
pub const DEFAULT_BUDGET: u64 = 1 << 34;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SamplerConfig {
    pub q: u32,
    pub n: usize,
    pub k: usize,
    /// Redraw generators until they are linearly independent.
    pub condition_full_rank: bool,
    pub master_seed: u64,
    pub trials: u64,
    pub workers: usize,
    /// Cap on codeword visits over the whole run.
    pub budget: u64,
}

impl SamplerConfig {
    pub fn new(q: u32, n: usize, k: usize, trials: u64, master_seed: u64) -> Self {
        SamplerConfig {
            q,
            n,
            k,
            condition_full_rank: true,
            master_seed,
            trials,
            workers: 1,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn condition_full_rank(mut self, on: bool) -> Self {
        self.condition_full_rank = on;
        self
    }

    pub fn budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn validate(&self) -> Result<()> {
        crate::exact::check_field(self.q)?;
        if self.n == 0 {
            return Err(invalid("length n must be at least 1"));
        }
        crate::exact::check_k(self.n, self.k)?;
        if self.trials == 0 {
            return Err(invalid("trials must be at least 1"));
        }
        if self.workers == 0 {
            return Err(invalid("workers must be at least 1"));
        }
        Ok(())
    }

    pub(crate) fn field(&self) -> Result<Arc<FieldSpec>> {
        Ok(Arc::new(FieldSpec::with_order(self.q)?))
    }
}

/// Shared cap on codeword visits. Exceeding it aborts the run; whether a run
/// exceeds it depends only on the total, so the outcome is deterministic.
#[derive(Debug)]
pub struct Budget {
    cap: u64,
    used: AtomicU64,
    exceeded: AtomicBool,
}

impl Budget {
    pub fn new(cap: u64) -> Self {
        Budget {
            cap,
            used: AtomicU64::new(0),
            exceeded: AtomicBool::new(false),
        }
    }

    pub fn charge(&self, visits: u64) -> Result<()> {
        let used = self.used.fetch_add(visits, Ordering::Relaxed).saturating_add(visits);
        if used > self.cap {
            self.exceeded.store(true, Ordering::Relaxed);
        }
        self.check()
    }

    pub fn check(&self) -> Result<()> {
        if self.exceeded.load(Ordering::Relaxed) {
            return Err(Error::Budget {
                what: "codeword visits",
                needed: self.used.load(Ordering::Relaxed) as u128,
                cap: self.cap as u128,
            });
        }
        Ok(())
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }
}

/// Runs `trial(i)` for `i in 0..trials` on `workers` threads and folds the
/// results with the commutative `merge`.
pub fn par_trials<A, F, M>(trials: u64, workers: usize, identity: A, trial: F, merge: M) -> Result<A>
where
    A: Send + Sync + Clone,
    F: Fn(A, u64) -> Result<A> + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| invalid(format!("cannot start {workers} workers: {e}")))?;
    pool.install(|| {
        (0..trials)
            .into_par_iter()
            .try_fold(|| identity.clone(), &trial)
            .try_reduce(|| identity.clone(), |a, b| Ok(merge(a, b)))
    })
}

/// Histogram of sampled minimal distances.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmpiricalCdf {
    pub config: SamplerConfig,
    /// `counts[d]` = number of trials with `d_min = d`.
    pub counts: Vec<u64>,
    pub trials: u64,
    pub master_seed: u64,
    /// Rank-deficient draws discarded by conditioning.
    pub redraws: u64,
    /// Codewords evaluated over the run.
    pub visits: u64,
}

impl EmpiricalCdf {
    pub fn cdf(&self) -> Vec<f64> {
        let mut acc = 0;
        self.counts
            .iter()
            .map(|&c| {
                acc += c;
                acc as f64 / self.trials as f64
            })
            .collect()
    }

    /// Binomial standard error `sqrt(F (1 - F) / trials)` per `d`.
    pub fn stderr(&self) -> Vec<f64> {
        self.cdf()
            .into_iter()
            .map(|f| (f * (1.0 - f) / self.trials as f64).sqrt())
            .collect()
    }

    pub fn to_table(&self) -> CdfTable {
        CdfTable {
            n: self.counts.len() - 1,
            values: CdfValues::Decimal {
                cdf: self.cdf(),
                stderr: Some(self.stderr()),
            },
            provenance: Provenance::MonteCarlo {
                trials: self.trials,
                seed: self.master_seed,
            },
        }
    }
}

#[derive(Clone)]
struct Tally {
    counts: Vec<u64>,
    redraws: u64,
    visits: u64,
}

/// Samples the minimal distance of `trials` random codes.
///
/// Each trial draws `k` uniform rows (redrawn until independent when
/// conditioning is on) and records the least weight of a nonzero codeword;
/// `d_min = 0` only when every row is zero.
pub fn sample_dmin(cfg: &SamplerConfig) -> Result<EmpiricalCdf> {
    cfg.validate()?;
    let field = cfg.field()?;
    let budget = Budget::new(cfg.budget);
    let identity = Tally {
        counts: vec![0; cfg.n + 1],
        redraws: 0,
        visits: 0,
    };
    let tally = par_trials(
        cfg.trials,
        cfg.workers,
        identity,
        |mut acc, t| {
            budget.check()?;
            let mut rng = trial_rng(cfg.master_seed, t);
            let (g, redraws) = draw_generators(&field, cfg.n, cfg.k, cfg.condition_full_rank, &mut rng)?;
            let md = min_distance(&g);
            budget.charge(md.visits)?;
            acc.counts[md.distance as usize] += 1;
            acc.redraws += redraws;
            acc.visits += md.visits;
            Ok(acc)
        },
        |mut a, b| {
            a.counts.iter_mut().zip(&b.counts).for_each(|(x, y)| *x += y);
            a.redraws += b.redraws;
            a.visits += b.visits;
            a
        },
    )?;
    Ok(EmpiricalCdf {
        config: cfg.clone(),
        counts: tally.counts,
        trials: cfg.trials,
        master_seed: cfg.master_seed,
        redraws: tally.redraws,
        visits: tally.visits,
    })
}
