//! Fair-coin demonstration: every head frequency measured from a finite
//! run is only an estimate of `P(H) = 1/2` and carries an uncertainty.
//!
//! The uncertainty of a frequency `f` over `n` flips is taken as the Wald
//! binomial standard error `sqrt(f(1 − f)/n)`. This is a convention of this
//! crate; for `f ∈ {0, 1}` it collapses to zero and the estimate is flagged
//! degenerate instead of being corrected.

use std::fmt;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub const MAX_ENUMERATED_FLIPS: u32 = 20;

/// Seed used by the CLI when none is given.
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoinError {
    #[error("{what} out of range: {value}")]
    OutOfRange { what: &'static str, value: f64 },
}

/// Exact head frequency `heads/flips`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HeadFrequency {
    pub heads: u32,
    pub flips: u32,
}

impl HeadFrequency {
    pub fn as_f64(&self) -> f64 {
        f64::from(self.heads) / f64::from(self.flips)
    }

    /// Numerator and denominator in lowest terms.
    pub fn reduced(&self) -> (u32, u32) {
        let g = gcd(self.heads, self.flips);
        (self.heads / g, self.flips / g)
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

impl fmt::Display for HeadFrequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.reduced() {
            (num, 1) => write!(f, "{num}"),
            (num, den) => write!(f, "{num}/{den}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceRow {
    pub sequence: String,
    pub frequency: HeadFrequency,
}

/// All `2ⁿ` sequences of `n` flips, `H` before `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceTable {
    pub n: u32,
    pub rows: Vec<SequenceRow>,
}

impl SequenceTable {
    /// Average head frequency over all rows as an exact fraction
    /// `(total heads, n · 2ⁿ)`.
    pub fn mean_frequency(&self) -> (u64, u64) {
        let heads: u64 = self.rows.iter().map(|r| u64::from(r.frequency.heads)).sum();
        (heads, u64::from(self.n) * self.rows.len() as u64)
    }
}

pub fn enumerate_sequences(n: u32) -> Result<SequenceTable, CoinError> {
    if !(1..=MAX_ENUMERATED_FLIPS).contains(&n) {
        return Err(CoinError::OutOfRange {
            what: "flips per sequence",
            value: f64::from(n),
        });
    }
    let rows = (0u32..1 << n)
        .map(|code| {
            // Bit set = tails, most significant flip first.
            let sequence: String = (0..n)
                .rev()
                .map(|bit| if code >> bit & 1 == 1 { 'T' } else { 'H' })
                .collect();
            SequenceRow {
                sequence,
                frequency: HeadFrequency {
                    heads: n - code.count_ones(),
                    flips: n,
                },
            }
        })
        .collect();
    Ok(SequenceTable { n, rows })
}

/// Wald standard error `sqrt(f(1 − f)/n)` of a head frequency.
pub fn frequency_uncertainty(f: f64, n: u64) -> Result<f64, CoinError> {
    if !(0.0..=1.0).contains(&f) {
        return Err(CoinError::OutOfRange {
            what: "frequency",
            value: f,
        });
    }
    if n == 0 {
        return Err(CoinError::OutOfRange {
            what: "flip count",
            value: 0.0,
        });
    }
    Ok((f * (1.0 - f) / n as f64).sqrt())
}

/// `f(H) ± Δf` from a run of `n` flips.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyEstimate {
    pub heads: u64,
    pub n: u64,
    pub f: f64,
    pub delta_f: f64,
}

impl FrequencyEstimate {
    pub fn from_counts(heads: u64, n: u64) -> Result<Self, CoinError> {
        if heads > n {
            return Err(CoinError::OutOfRange {
                what: "head count",
                value: heads as f64,
            });
        }
        let f = heads as f64 / n as f64;
        Ok(Self {
            heads,
            n,
            f,
            delta_f: frequency_uncertainty(f, n)?,
        })
    }

    /// All heads or all tails: the Wald error is zero and meaningless.
    pub fn is_degenerate(&self) -> bool {
        self.heads == 0 || self.heads == self.n
    }

    /// Whether `p` lies in `f ± k·Δf`.
    pub fn covers(&self, p: f64, k: f64) -> bool {
        (self.f - p).abs() <= k * self.delta_f
    }
}

/// Counts heads in `n` fair flips, 64 at a time from the generator's words.
fn count_heads(rng: &mut impl RngCore, n: u64) -> u64 {
    let mut heads = 0u64;
    for _ in 0..n / 64 {
        heads += u64::from(rng.next_u64().count_ones());
    }
    let rest = n % 64;
    if rest > 0 {
        let mask = (1u64 << rest) - 1;
        heads += u64::from((rng.next_u64() & mask).count_ones());
    }
    heads
}

pub fn simulate_flips(n: u64, seed: u64) -> Result<FrequencyEstimate, CoinError> {
    if n == 0 {
        return Err(CoinError::OutOfRange {
            what: "flip count",
            value: 0.0,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    FrequencyEstimate::from_counts(count_heads(&mut rng, n), n)
}

/// Fraction of `batches` independent runs of `flips` whose interval
/// `f ± k·Δf` contains 1/2. Batch `b` uses stream `b` of the seeded
/// generator.
pub fn coverage(batches: u64, flips: u64, seed: u64, k: f64) -> Result<f64, CoinError> {
    if batches == 0 || flips == 0 {
        return Err(CoinError::OutOfRange {
            what: "batch or flip count",
            value: 0.0,
        });
    }
    let mut covered = 0u64;
    for b in 0..batches {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(b);
        let est = FrequencyEstimate::from_counts(count_heads(&mut rng, flips), flips)?;
        if est.covers(0.5, k) {
            covered += 1;
        }
    }
    Ok(covered as f64 / batches as f64)
}
