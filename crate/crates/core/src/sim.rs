//! Monte Carlo estimation of the decoder error probability P_E(t;u).
//!
//! Each trial draws a message, encodes it, adds a uniformly random error of
//! rank exactly u > t and decodes. Since such an error is never corrected,
//! every trial ends in either a decoding failure or a decoder error (a wrong
//! codeword). Runs stop once `min_decoder_errors` errors have been seen or
//! `max_trials` is reached.
//!
//! Randomness: trial `i` of a plan uses ChaCha20 seeded with
//! `seed_from_u64(seed)`, stream `stream_id`, word position `i << 32`. Trials
//! are executed in fixed batches of [`BATCH_SIZE`] and the stopping rule is
//! applied in trial order, so results do not depend on the worker count.

use std::io::Write;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{pe_universal_log_q, BoundParams};
use crate::error::{Error, Result};
use crate::gabidulin::{DecodeOutcome, GabidulinCode};
use crate::gfq::FieldElement;
use crate::oracle::fmt_f64;
use crate::rank_metric::{sample_rank_u, RankVector};

pub const BATCH_SIZE: u64 = 1024;
pub const DEFAULT_MIN_DECODER_ERRORS: u64 = 15;
pub const DEFAULT_MAX_TRIALS: u64 = 10_000_000;

fn default_min_errors() -> u64 {
    DEFAULT_MIN_DECODER_ERRORS
}

fn default_max_trials() -> u64 {
    DEFAULT_MAX_TRIALS
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialPlan {
    pub q: u32,
    pub m: usize,
    pub n: usize,
    pub k: usize,
    /// Rank of the injected error; must exceed t.
    pub u: usize,
    #[serde(default = "default_min_errors")]
    pub min_decoder_errors: u64,
    #[serde(default = "default_max_trials")]
    pub max_trials: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub stream_id: u64,
    /// Send the all-zero codeword instead of random messages.
    #[serde(default)]
    pub zero_message: bool,
}

impl TrialPlan {
    /// Plan for the code with `d = 2t + 1` of length n over GF(q^n).
    pub fn for_capability(q: u32, n: usize, t: usize, u: usize, seed: u64, stream_id: u64) -> Self {
        Self {
            q,
            m: n,
            n,
            k: n.saturating_sub(2 * t),
            u,
            min_decoder_errors: DEFAULT_MIN_DECODER_ERRORS,
            max_trials: DEFAULT_MAX_TRIALS,
            seed,
            stream_id,
            zero_message: false,
        }
    }

    pub fn params(&self) -> Result<BoundParams> {
        BoundParams::new(self.q, self.m, self.n, self.k)
    }

    pub fn t(&self) -> usize {
        (self.n - self.k) / 2
    }

    pub fn validate(&self) -> Result<BoundParams> {
        let p = self.params()?;
        if self.u <= p.t() {
            return Err(Error::InvalidParameters(format!(
                "error rank u = {} must exceed t = {}; below that decoding always succeeds",
                self.u,
                p.t()
            )));
        }
        if self.u > self.n {
            return Err(Error::RankOutOfRange { u: self.u, max: self.n });
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TrialOutcome {
    Success,
    Failure,
    DecoderError,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub index: u64,
    pub outcome: TrialOutcome,
    /// FNV-1a digest of the packed error vector.
    pub error_digest: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialTally {
    pub trials: u64,
    pub successes: u64,
    pub failures: u64,
    pub decoder_errors: u64,
    /// The trial cap was reached before enough decoder errors were seen.
    pub censored: bool,
}

impl TrialTally {
    pub fn pe_hat(&self) -> Option<f64> {
        (self.trials > 0).then(|| self.decoder_errors as f64 / self.trials as f64)
    }

    pub fn pf_hat(&self) -> Option<f64> {
        (self.trials > 0).then(|| self.failures as f64 / self.trials as f64)
    }

    /// Wilson score 95% interval for the decoder error rate.
    pub fn wilson_interval(&self) -> (f64, f64) {
        wilson_interval(self.decoder_errors, self.trials, 1.959_963_984_540_054)
    }

    pub fn merge(&mut self, other: &TrialTally) {
        self.trials += other.trials;
        self.successes += other.successes;
        self.failures += other.failures;
        self.decoder_errors += other.decoder_errors;
        self.censored |= other.censored;
    }
}

pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

fn trial_rng(plan: &TrialPlan, index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(plan.seed);
    rng.set_stream(plan.stream_id);
    rng.set_word_pos((index as u128) << 32);
    rng
}

fn digest(e: &RankVector) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for x in e.iter() {
        for byte in x.packed().to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    h
}

/// Runs trial `index` of `plan` on `code`.
pub fn run_trial(plan: &TrialPlan, code: &GabidulinCode, index: u64) -> Result<TrialRecord> {
    let f = code.field();
    let mut rng = trial_rng(plan, index);
    let message: Vec<FieldElement> = if plan.zero_message {
        vec![FieldElement::ZERO; code.k()]
    } else {
        (0..code.k()).map(|_| f.random(&mut rng)).collect()
    };
    let sent = code.encode(&message)?;
    let e = sample_rank_u(f, code.n(), plan.u, &mut rng)?;
    let received = sent.add(f, &e)?;
    let outcome = match code.decode(&received)? {
        DecodeOutcome::Failure(_) => TrialOutcome::Failure,
        DecodeOutcome::Decoded { codeword, .. } if codeword == sent => TrialOutcome::Success,
        DecodeOutcome::Decoded { .. } => TrialOutcome::DecoderError,
    };
    Ok(TrialRecord {
        index,
        outcome,
        error_digest: digest(&e),
    })
}

/// Runs a plan on the current rayon pool.
pub fn run_plan(plan: &TrialPlan) -> Result<TrialTally> {
    plan.validate()?;
    let code = GabidulinCode::new(plan.q, plan.m, plan.n, plan.k)?;
    let mut tally = TrialTally::default();
    let mut next = 0u64;
    while next < plan.max_trials {
        let end = (next + BATCH_SIZE).min(plan.max_trials);
        let batch: Vec<TrialRecord> = (next..end)
            .into_par_iter()
            .map(|i| run_trial(plan, &code, i))
            .collect::<Result<_>>()?;
        for rec in batch {
            tally.trials += 1;
            match rec.outcome {
                TrialOutcome::Failure => tally.failures += 1,
                TrialOutcome::DecoderError => tally.decoder_errors += 1,
                TrialOutcome::Success => {
                    return Err(Error::InvariantViolation(format!(
                        "trial {} recovered the sent codeword with error rank {} > t = {} (error digest {:016x})",
                        rec.index,
                        plan.u,
                        code.t(),
                        rec.error_digest
                    )));
                }
            }
            if tally.decoder_errors >= plan.min_decoder_errors {
                return Ok(tally);
            }
        }
        next = end;
    }
    tally.censored = true;
    Ok(tally)
}

/// Runs a plan on a dedicated pool of `workers` threads.
pub fn run_plan_with_workers(plan: &TrialPlan, workers: usize) -> Result<TrialTally> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidParameters(format!("thread pool: {e}")))?;
    pool.install(|| run_plan(plan))
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub plan: TrialPlan,
    pub result: Result<TrialTally>,
}

impl SweepRow {
    pub fn pe_eq8_log_q(&self) -> f64 {
        pe_universal_log_q(self.plan.q, self.plan.t())
    }

    pub fn pe_eq8(&self) -> f64 {
        (self.plan.q as f64).powf(self.pe_eq8_log_q())
    }
}

/// Runs every plan; a failing plan is reported in its row and does not stop
/// the others.
pub fn sweep(plans: &[TrialPlan], workers: Option<usize>) -> Vec<SweepRow> {
    plans
        .iter()
        .map(|plan| {
            let result = match workers {
                Some(w) => run_plan_with_workers(plan, w),
                None => run_plan(plan),
            };
            SweepRow {
                plan: plan.clone(),
                result,
            }
        })
        .collect()
}

pub const SWEEP_HEADER: [&str; 15] = [
    "q",
    "m",
    "n",
    "k",
    "t",
    "u",
    "trials",
    "failures",
    "decoder_errors",
    "PE_hat",
    "PE_eq8",
    "seed",
    "wilson_lo",
    "wilson_hi",
    "censored",
];

/// Writes the successful rows as CSV.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], w: W) -> Result<()> {
    let io = |e: csv::Error| Error::InvalidParameters(format!("csv output: {e}"));
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(SWEEP_HEADER).map_err(io)?;
    for row in rows {
        let Ok(tally) = &row.result else { continue };
        let p = &row.plan;
        let (lo, hi) = tally.wilson_interval();
        wr.write_record([
            p.q.to_string(),
            p.m.to_string(),
            p.n.to_string(),
            p.k.to_string(),
            p.t().to_string(),
            p.u.to_string(),
            tally.trials.to_string(),
            tally.failures.to_string(),
            tally.decoder_errors.to_string(),
            tally.pe_hat().map(fmt_f64).unwrap_or_default(),
            fmt_f64(row.pe_eq8()),
            p.seed.to_string(),
            fmt_f64(lo),
            fmt_f64(hi),
            tally.censored.to_string(),
        ])
        .map_err(io)?;
    }
    wr.flush().map_err(|e| Error::InvalidParameters(format!("csv output: {e}")))?;
    Ok(())
}

/// Replay manifest: the plans, the codes they ran on and the RNG key schedule.
pub fn manifest(rows: &[SweepRow]) -> serde_json::Value {
    let entries: Vec<serde_json::Value> = rows
        .iter()
        .map(|row| {
            let code = GabidulinCode::new(row.plan.q, row.plan.m, row.plan.n, row.plan.k)
                .ok()
                .map(|c| c.descriptor());
            serde_json::json!({
                "plan": row.plan,
                "code": code,
                "tally": row.result.as_ref().ok(),
                "error": row.result.as_ref().err().map(|e| e.to_string()),
            })
        })
        .collect();
    serde_json::json!({
        "rng": {
            "algorithm": "ChaCha20 (rand_chacha 0.3)",
            "key_schedule": "seed_from_u64(seed); set_stream(stream_id); set_word_pos(trial_index << 32)",
            "batch_size": BATCH_SIZE,
        },
        "runs": entries,
    })
}

/// Error probability versus t at full error rank: q = 2, m = n = 16, u = 16.
pub fn preset_fig1(seed: u64) -> Vec<TrialPlan> {
    (1..=3)
        .enumerate()
        .map(|(i, t)| TrialPlan::for_capability(2, 16, t, 16, seed, i as u64))
        .collect()
}

/// Error probability versus u for t in {2, 3}: q = 2, m = n = 16.
pub fn preset_fig2(seed: u64) -> Vec<TrialPlan> {
    let mut out = Vec::new();
    for t in [2usize, 3] {
        for u in t + 1..=16 {
            let stream = out.len() as u64;
            out.push(TrialPlan::for_capability(2, 16, t, u, seed, stream));
        }
    }
    out
}

pub fn preset(name: &str, seed: u64) -> Option<Vec<TrialPlan>> {
    match name {
        "fig1" => Some(preset_fig1(seed)),
        "fig2" => Some(preset_fig2(seed)),
        _ => None,
    }
}

/// Pearson chi-square statistic (1 degree of freedom) for equal
/// failure/decoder-error proportions in two tallies.
pub fn homogeneity_chi_square(a: &TrialTally, b: &TrialTally) -> f64 {
    let table = [
        [a.failures as f64, a.decoder_errors as f64],
        [b.failures as f64, b.decoder_errors as f64],
    ];
    let rows = [table[0][0] + table[0][1], table[1][0] + table[1][1]];
    let cols = [table[0][0] + table[1][0], table[0][1] + table[1][1]];
    let total = rows[0] + rows[1];
    let mut chi = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let expected = rows[i] * cols[j] / total;
            if expected > 0.0 {
                chi += (table[i][j] - expected).powi(2) / expected;
            }
        }
    }
    chi
}
