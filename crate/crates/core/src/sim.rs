//! Block erasure channel Monte-Carlo harness.
//!
//! Every trial draws a uniformly random message and a reception pattern from
//! its own ChaCha8 stream `(seed, trial index)`, so results do not depend on
//! which decoder runs or on how trials are scheduled across threads.
//! Aggregation is a sequential reduction in trial order.

use std::io::{self, Write};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::{CodeParams, GrmCode};
use crate::decoders::{DecoderKind, ProgressiveDecoder, ReceptionState};
use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::rsline::{interpolate_line, LineView};

/// Identifier of the generator behind every simulated draw, written into output headers.
pub const RNG_ALGORITHM: &str = "chacha8";

pub const CURVE_CSV_HEADER: &str =
    "received_fraction,mean_info_fraction,prob_full_decode,mean_elapsed_us";
pub const BENCH_CSV_HEADER: &str = "erased_fraction,decoder,mean_elapsed_us,mean_info_fraction";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ReceptionModel {
    /// Symbols arrive in a uniformly random order; prefixes of every length are decoded.
    #[default]
    RandomOrder,
    /// Each symbol is erased independently with the given probability.
    IidErasure(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub code_params: CodeParams,
    pub decoder: DecoderKind,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub reception_model: ReceptionModel,
    /// Record wall-clock decode times. Off by default so curve output is reproducible byte for byte.
    #[serde(default)]
    pub record_timing: bool,
}

impl TrialConfig {
    pub fn new(code_params: CodeParams, decoder: DecoderKind, trials: usize, seed: u64) -> Self {
        TrialConfig {
            code_params,
            decoder,
            trials,
            seed,
            reception_model: ReceptionModel::RandomOrder,
            record_timing: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Parameter("trials must be at least 1".into()));
        }
        if let ReceptionModel::IidErasure(eps) = self.reception_model {
            if !(0.0..=1.0).contains(&eps) {
                return Err(Error::Parameter(format!(
                    "erasure probability {eps} outside [0, 1]"
                )));
            }
        }
        Ok(())
    }
}

/// The random stream of one trial.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn random_message(code: &GrmCode, rng: &mut impl Rng) -> Vec<FieldElement> {
    let q = code.params().q;
    (0..code.params().k)
        .map(|_| FieldElement(rng.random_range(0..q) as u8))
        .collect()
}

/// A random codeword and a uniformly random reception order for trial `index`.
pub fn draw_trial(code: &GrmCode, seed: u64, index: u64) -> (Vec<FieldElement>, Vec<usize>) {
    let mut rng = trial_rng(seed, index);
    let word = code
        .encode(&random_message(code, &mut rng))
        .expect("message has length k");
    let mut order: Vec<usize> = (0..code.params().n).collect();
    order.shuffle(&mut rng);
    (word, order)
}

/// FNV-1a over the reception order.
pub fn order_digest(order: &[usize]) -> u64 {
    order
        .iter()
        .flat_map(|p| (*p as u32).to_le_bytes())
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
            (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
        })
}

/// Decoder outcome after the first `received` symbols of a trial's order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrefixSummary {
    pub received: usize,
    pub known: usize,
    pub info_known: usize,
    pub info_decode: bool,
    pub full_decode: bool,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub index: u64,
    pub seed: u64,
    pub order_digest: u64,
    /// One entry per prefix length `0..=n`.
    pub prefixes: Vec<PrefixSummary>,
    /// Smallest prefix length at which GE recovers every symbol (GE runs only).
    pub full_rank_threshold: Option<usize>,
}

fn summarize(received: usize, state: &ReceptionState, elapsed: Duration) -> PrefixSummary {
    PrefixSummary {
        received,
        known: state.known_count(),
        info_known: state.info_known_count(),
        info_decode: state.info_known_count() == state.info_len(),
        full_decode: state.is_complete(),
        elapsed,
    }
}

/// Decodes every prefix of trial `index`'s reception order.
pub fn run_trial(code: &GrmCode, cfg: &TrialConfig, index: u64) -> Result<TrialRecord> {
    let (word, order) = draw_trial(code, cfg.seed, index);
    let n = order.len();
    let mut prefixes = Vec::with_capacity(n + 1);
    match cfg.decoder {
        DecoderKind::Pld => {
            let mut decoder = ProgressiveDecoder::new(code);
            prefixes.push(summarize(0, decoder.state(), Duration::ZERO));
            let mut elapsed = Duration::ZERO;
            for (t, &p) in order.iter().enumerate() {
                let start = Instant::now();
                decoder.receive(p, word[p])?;
                elapsed += start.elapsed();
                prefixes.push(summarize(t + 1, decoder.state(), elapsed));
            }
        }
        kind => {
            let mut state = ReceptionState::erased(code);
            for t in 0..=n {
                if t > 0 {
                    state.receive(order[t - 1], word[order[t - 1]])?;
                }
                let start = Instant::now();
                let report = kind.decode(code, &state)?;
                let elapsed = start.elapsed();
                prefixes.push(summarize(t, &report.final_state, elapsed));
            }
        }
    }
    let full_rank_threshold = match cfg.decoder {
        DecoderKind::Ge => prefixes.iter().find(|s| s.full_decode).map(|s| s.received),
        _ => None,
    };
    Ok(TrialRecord {
        index,
        seed: cfg.seed,
        order_digest: order_digest(&order),
        prefixes,
        full_rank_threshold,
    })
}

pub fn run_trials(code: &GrmCode, cfg: &TrialConfig) -> Result<Vec<TrialRecord>> {
    cfg.validate()?;
    if cfg.reception_model != ReceptionModel::RandomOrder {
        return Err(Error::Parameter(
            "prefix curves need the random_order reception model".into(),
        ));
    }
    (0..cfg.trials as u64)
        .into_par_iter()
        .map(|i| run_trial(code, cfg, i))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub received: usize,
    pub received_fraction: f64,
    /// Mean over trials of (known information symbols) / k.
    pub mean_info_known_fraction: f64,
    /// Fraction of trials in which every information symbol is known.
    pub prob_full_info_decode: f64,
    /// `None` unless timing was recorded.
    pub mean_elapsed: Option<Duration>,
}

/// Reduces trial records, in the order given, to one point per prefix length.
pub fn aggregate(params: &CodeParams, records: &[TrialRecord], timed: bool) -> Vec<CurvePoint> {
    let n = params.n;
    let k = params.k as f64;
    let trials = records.len() as f64;
    (0..=n)
        .map(|t| {
            let mut info = 0.0;
            let mut full = 0usize;
            let mut elapsed = Duration::ZERO;
            for rec in records {
                let s = &rec.prefixes[t];
                info += s.info_known as f64 / k;
                full += usize::from(s.info_decode);
                elapsed += s.elapsed;
            }
            CurvePoint {
                received: t,
                received_fraction: t as f64 / n as f64,
                mean_info_known_fraction: info / trials,
                prob_full_info_decode: full as f64 / trials,
                mean_elapsed: timed.then(|| elapsed / records.len() as u32),
            }
        })
        .collect()
}

/// Success-probability curve against the fraction of symbols received.
pub fn run_curve(cfg: &TrialConfig) -> Result<Vec<CurvePoint>> {
    let code = GrmCode::from_params(cfg.code_params)?;
    run_curve_with(&code, cfg)
}

pub fn run_curve_with(code: &GrmCode, cfg: &TrialConfig) -> Result<Vec<CurvePoint>> {
    let records = run_trials(code, cfg)?;
    Ok(aggregate(code.params(), &records, cfg.record_timing))
}

fn format_duration_us(d: Option<Duration>) -> String {
    d.map(|d| format!("{:.3}", d.as_secs_f64() * 1e6))
        .unwrap_or_default()
}

/// `#`-prefixed run metadata followed by the curve table.
pub fn write_curve_csv<W: Write>(
    mut out: W,
    cfg: &TrialConfig,
    points: &[CurvePoint],
) -> io::Result<()> {
    let p = &cfg.code_params;
    writeln!(
        out,
        "# code r={} m={} q={} n={} k={} decoder={} trials={} seed={} rng={}",
        p.r, p.m, p.q, p.n, p.k, cfg.decoder, cfg.trials, cfg.seed, RNG_ALGORITHM
    )?;
    writeln!(out, "{CURVE_CSV_HEADER}")?;
    for pt in points {
        writeln!(
            out,
            "{:.6},{:.6},{:.6},{}",
            pt.received_fraction,
            pt.mean_info_known_fraction,
            pt.prob_full_info_decode,
            format_duration_us(pt.mean_elapsed)
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdSummary {
    pub samples: Vec<usize>,
    pub min: usize,
    pub median: f64,
    pub mean: f64,
    pub max: usize,
}

impl ThresholdSummary {
    fn from_samples(samples: Vec<usize>) -> ThresholdSummary {
        let mut sorted = samples.clone();
        sorted.sort_unstable();
        let len = sorted.len();
        let median = if len % 2 == 1 {
            sorted[len / 2] as f64
        } else {
            (sorted[len / 2 - 1] + sorted[len / 2]) as f64 / 2.0
        };
        ThresholdSummary {
            min: sorted[0],
            max: sorted[len - 1],
            mean: sorted.iter().sum::<usize>() as f64 / len as f64,
            median,
            samples,
        }
    }
}

/// Smallest prefix of `order` after which GE recovers the whole word.
///
/// GE success is monotone in the received set, so a binary search over the
/// prefix length finds it with `O(log n)` decodes.
pub fn full_rank_threshold(
    code: &GrmCode,
    word: &[FieldElement],
    order: &[usize],
) -> Result<usize> {
    let decodes_at = |t: usize| -> Result<bool> {
        let state = ReceptionState::from_positions(code, word, &order[..t])?;
        Ok(crate::decoders::decode_ge(code, &state)?.full_decode)
    };
    let (mut lo, mut hi) = (0, order.len());
    if !decodes_at(hi)? {
        return Err(Error::Parameter(
            "reception order does not cover the codeword".into(),
        ));
    }
    while lo < hi {
        let mid = (lo + hi) / 2;
        if decodes_at(mid)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(lo)
}

/// Distribution of the full-rank threshold over random reception orders.
pub fn measure_full_rank_threshold(cfg: &TrialConfig) -> Result<ThresholdSummary> {
    cfg.validate()?;
    if cfg.decoder != DecoderKind::Ge {
        return Err(Error::Parameter(
            "the full-rank threshold is defined for the ge decoder".into(),
        ));
    }
    let code = GrmCode::from_params(cfg.code_params)?;
    let samples = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|i| {
            let (word, order) = draw_trial(&code, cfg.seed, i);
            full_rank_threshold(&code, &word, &order)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ThresholdSummary::from_samples(samples))
}

fn default_bench_decoders() -> Vec<DecoderKind> {
    vec![DecoderKind::Ld, DecoderKind::Pld, DecoderKind::Ge]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub code_params: CodeParams,
    pub trials: usize,
    pub seed: u64,
    pub erasure_fractions: Vec<f64>,
    #[serde(default = "default_bench_decoders")]
    pub decoders: Vec<DecoderKind>,
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Parameter("trials must be at least 1".into()));
        }
        if self.decoders.is_empty() {
            return Err(Error::Parameter("no decoders to benchmark".into()));
        }
        match self
            .erasure_fractions
            .iter()
            .find(|f| !(0.0..=1.0).contains(*f))
        {
            Some(f) => Err(Error::Parameter(format!(
                "erasure fraction {f} outside [0, 1]"
            ))),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub erased_fraction: f64,
    pub decoder: DecoderKind,
    pub mean_elapsed: Duration,
    pub mean_info_known_fraction: f64,
}

/// Paired decode timings under i.i.d. erasures: every decoder sees the same
/// codewords and erasure patterns. Runs single-threaded to keep timings clean.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    cfg.validate()?;
    let code = GrmCode::from_params(cfg.code_params)?;
    let n = code.params().n;
    let k = code.params().k as f64;
    let mut rows = Vec::new();
    for (fi, &eps) in cfg.erasure_fractions.iter().enumerate() {
        let mut total = vec![Duration::ZERO; cfg.decoders.len()];
        let mut info = vec![0.0; cfg.decoders.len()];
        for trial in 0..cfg.trials as u64 {
            let mut rng = trial_rng(cfg.seed, ((fi as u64) << 32) | trial);
            let word = code.encode(&random_message(&code, &mut rng))?;
            let received: Vec<_> = (0..n)
                .map(|p| (!rng.random_bool(eps)).then_some(word[p]))
                .collect();
            let state = ReceptionState::from_received(&code, &received)?;
            for (d, kind) in cfg.decoders.iter().enumerate() {
                let start = Instant::now();
                let report = kind.decode(&code, &state)?;
                total[d] += start.elapsed();
                info[d] += report.final_state.info_known_count() as f64 / k;
            }
        }
        for (d, &kind) in cfg.decoders.iter().enumerate() {
            rows.push(BenchRow {
                erased_fraction: eps,
                decoder: kind,
                mean_elapsed: total[d] / cfg.trials as u32,
                mean_info_known_fraction: info[d] / cfg.trials as f64,
            });
        }
    }
    Ok(rows)
}

pub fn write_bench_csv<W: Write>(
    mut out: W,
    cfg: &BenchConfig,
    rows: &[BenchRow],
) -> io::Result<()> {
    let p = &cfg.code_params;
    writeln!(
        out,
        "# code r={} m={} q={} n={} k={} trials={} seed={} rng={}",
        p.r, p.m, p.q, p.n, p.k, cfg.trials, cfg.seed, RNG_ALGORITHM
    )?;
    writeln!(out, "{BENCH_CSV_HEADER}")?;
    for row in rows {
        writeln!(
            out,
            "{:.4},{},{},{:.6}",
            row.erased_fraction,
            row.decoder,
            format_duration_us(Some(row.mean_elapsed)),
            row.mean_info_known_fraction
        )?;
    }
    Ok(())
}

/// Baseline curve for a systematic `(q, k)` Reed-Solomon code over `F_q`
/// (message at abscissae `γ_0..γ_{k-1}`), decoded word-wise by interpolation
/// once `k` symbols are in.
pub fn rs_baseline_curve(q: usize, k: usize, trials: usize, seed: u64) -> Result<Vec<CurvePoint>> {
    let field = FieldSpec::new(q)?;
    if k == 0 || k > q {
        return Err(Error::Parameter(format!(
            "RS dimension {k} must be in 1..={q}"
        )));
    }
    if trials == 0 {
        return Err(Error::Parameter("trials must be at least 1".into()));
    }
    let per_trial = (0..trials as u64)
        .into_par_iter()
        .map(|i| -> Result<Vec<usize>> {
            let mut rng = trial_rng(seed, i);
            let mut values = vec![None; q];
            for v in values.iter_mut().take(k) {
                *v = Some(FieldElement(rng.random_range(0..q) as u8));
            }
            let word = interpolate_line(&field, &LineView::new(&field, values), k - 1)?;
            let mut order: Vec<usize> = (0..q).collect();
            order.shuffle(&mut rng);
            let mut known = vec![None; q];
            let mut info = Vec::with_capacity(q + 1);
            info.push(0);
            for (t, &p) in order.iter().enumerate() {
                known[p] = Some(word[p]);
                if t + 1 >= k {
                    let full =
                        interpolate_line(&field, &LineView::new(&field, known.clone()), k - 1)?;
                    debug_assert_eq!(full, word);
                    info.push(k);
                } else {
                    info.push(known[..k].iter().filter(|v| v.is_some()).count());
                }
            }
            Ok(info)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((0..=q)
        .map(|t| {
            let sum: usize = per_trial.iter().map(|v| v[t]).sum();
            let full = per_trial.iter().filter(|v| v[t] == k).count();
            CurvePoint {
                received: t,
                received_fraction: t as f64 / q as f64,
                mean_info_known_fraction: sum as f64 / (k * trials) as f64,
                prob_full_info_decode: full as f64 / trials as f64,
                mean_elapsed: None,
            }
        })
        .collect())
}
