//! Monte Carlo check of linearized budgets.
//!
//! Each input is drawn from an independent normal `N(x, Δ(x)²)` and pushed
//! through the model. Samples are split into fixed-size chunks; chunk `k`
//! draws from the ChaCha8 stream `k` of a generator keyed by the seed, and
//! chunk statistics are merged in chunk order. The result therefore depends
//! only on `(seed, sample_count, chunk_size)`, never on the thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use thiserror::Error;

use crate::measurement::Measurement;
use crate::model::Model;
use crate::propagation::{propagate, resolve_inputs, Inputs, PropagationError};

pub const DEFAULT_CHUNK_SIZE: u64 = 65_536;
pub const DEFAULT_SEED: u64 = 0x7852_4620_5553_4e43;

/// Largest tolerated fraction of rejected (singular) samples.
pub const MAX_REJECTED_FRACTION: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum McError {
    #[error("invalid Monte Carlo configuration: {0}")]
    InvalidConfig(&'static str),
    #[error(transparent)]
    Propagation(#[from] PropagationError),
    #[error("degenerate sampling: {rejected} of {total} samples hit a singularity")]
    DegenerateSampling { rejected: u64, total: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    sample_count: u64,
    seed: u64,
    chunk_size: u64,
}

impl McConfig {
    pub fn new(sample_count: u64, seed: u64) -> Result<Self, McError> {
        Self::with_chunk_size(sample_count, seed, DEFAULT_CHUNK_SIZE)
    }

    pub fn with_chunk_size(sample_count: u64, seed: u64, chunk_size: u64) -> Result<Self, McError> {
        if sample_count == 0 {
            return Err(McError::InvalidConfig("sample_count must be at least 1"));
        }
        if chunk_size == 0 {
            return Err(McError::InvalidConfig("chunk_size must be at least 1"));
        }
        Ok(Self {
            sample_count,
            seed,
            chunk_size,
        })
    }

    pub fn sample_count(&self) -> u64 {
        self.sample_count
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn chunk_size(&self) -> u64 {
        self.chunk_size
    }

    fn chunk_count(&self) -> u64 {
        self.sample_count.div_ceil(self.chunk_size)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McResult {
    pub mean: f64,
    pub empirical_std: f64,
    /// Accepted samples.
    pub sample_count: u64,
    pub rejected: u64,
    pub linearized_std: f64,
    /// `empirical_std / linearized_std`; absent when the linearized value is 0.
    pub agreement_ratio: Option<f64>,
}

/// Single-pass mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let (na, nb, n) = (self.count as f64, other.count as f64, count as f64);
        let delta = other.mean - self.mean;
        Moments {
            count,
            mean: self.mean + delta * nb / n,
            m2: self.m2 + other.m2 + delta * delta * na * nb / n,
        }
    }

    /// Sample standard deviation (n − 1); zero below two samples.
    pub fn std_dev(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.m2 / (self.count - 1) as f64).sqrt()
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct ChunkStats {
    moments: Moments,
    rejected: u64,
}

fn run_chunk(model: &Model, inputs: &[Measurement], cfg: &McConfig, chunk: u64) -> ChunkStats {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(chunk);
    let start = chunk * cfg.chunk_size;
    let len = cfg.chunk_size.min(cfg.sample_count - start);
    let mut stats = ChunkStats::default();
    let mut draw = vec![0.0; inputs.len()];
    for _ in 0..len {
        for (slot, m) in draw.iter_mut().zip(inputs) {
            let z: f64 = StandardNormal.sample(&mut rng);
            *slot = m.value() + m.std_uncertainty() * z;
        }
        match model.eval(&draw) {
            Ok(y) => stats.moments.push(y),
            Err(_) => stats.rejected += 1,
        }
    }
    stats
}

pub fn mc_propagate(model: &Model, inputs: &Inputs, cfg: &McConfig) -> Result<McResult, McError> {
    let linearized = propagate(model, inputs)?;
    let resolved = resolve_inputs(model, inputs)?;
    let chunks: Vec<ChunkStats> = (0..cfg.chunk_count())
        .into_par_iter()
        .map(|k| run_chunk(model, &resolved, cfg, k))
        .collect();
    let (moments, rejected) = chunks
        .into_iter()
        .fold((Moments::default(), 0u64), |(m, r), c| {
            (m.merge(c.moments), r + c.rejected)
        });
    if rejected as f64 > MAX_REJECTED_FRACTION * cfg.sample_count as f64 {
        return Err(McError::DegenerateSampling {
            rejected,
            total: cfg.sample_count,
        });
    }
    let empirical_std = moments.std_dev();
    let linearized_std = linearized.combined;
    Ok(McResult {
        mean: moments.mean,
        empirical_std,
        sample_count: moments.count,
        rejected,
        linearized_std,
        agreement_ratio: (linearized_std > 0.0).then(|| empirical_std / linearized_std),
    })
}
