//! Seeded parameter sweeps that regenerate each evaluation figure as CSV.
//!
//! Repeat `i` of every sweep point uses `seed_i = master_seed + i`, so all
//! points of a sweep share their random draws. Each `seed_i` is split with
//! [`derive_seed`]: the hash table uses `seed_i` itself, and tags 1 to 4
//! seed the message draw, the noise draw, the burst placement and the CDMA
//! chips.
//!
//! Every sweep point emits one row per repeat and measured metric, a `mean`
//! row per measured metric, and `model_*` rows for closed-form predictions.
//!
//! | id    | primary axis          | other axes / defaults                         |
//! |-------|-----------------------|-----------------------------------------------|
//! | fig2  | total data bits `A`   | model only                                    |
//! | fig3  | messages `m`          | noise levels 0 and 0.3                        |
//! | fig4  | messages `m`          | noise levels 0.1 to 0.5, model only           |
//! | fig5  | noise fraction        | `k` in {0, configured k}, m = 10              |
//! | fig7  | messages `m`          | zero noise                                    |
//! | fig8  | noise fraction        | pure-noise streams, q = 5                     |
//! | fig9  | noise fraction        | m = 10, CDMA arm uses chip flips              |
//! | fig10 | gap fraction          | m = 8, random burst start, gap bridging on    |
//! | fig11 | messages `m`          | powers of two up to 128                       |
//! | fig12 | messages `m`          | noise levels 0, 0.1, 0.2, 0.3                 |

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::seq::index;

use crate::analysis::{
    decoded_error_fraction, expected_hash_calls, expected_marks, noise_to_signal, open_vs_closed_hash_calls,
    positional_error_fraction, MetricRecord,
};
use crate::cdma::{cdma_decode, cdma_encode, CdmaParams};
use crate::channel::{add_noise, burst_erase, flip_noise, BurstStart};
use crate::codec::{decode, encode, hallucinations, DecodeOptions};
use crate::codeword::Codeword;
use crate::error::{Error, Result};
use crate::hash::{build_table_hash, TableHash};
use crate::params::{CodeParams, Message};
use crate::sync::{
    correlate, expected_principle_marks, false_correlation_rate, principle_marks, threshold_correlation_rate,
    DEFAULT_Q_THRESHOLD,
};
use crate::{derive_seed, rng_from_seed};

pub const CSV_HEADER: [&str; 11] = [
    "experiment",
    "m",
    "mu",
    "gap_fraction",
    "n",
    "k",
    "codeword_bits",
    "seed",
    "repeat",
    "metric",
    "value",
];

const MESSAGES_TAG: u64 = 1;
const NOISE_TAG: u64 = 2;
const BURST_TAG: u64 = 3;
const CHIPS_TAG: u64 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentId {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig7,
    Fig8,
    Fig9,
    Fig10,
    Fig11,
    Fig12,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 10] = [
        ExperimentId::Fig2,
        ExperimentId::Fig3,
        ExperimentId::Fig4,
        ExperimentId::Fig5,
        ExperimentId::Fig7,
        ExperimentId::Fig8,
        ExperimentId::Fig9,
        ExperimentId::Fig10,
        ExperimentId::Fig11,
        ExperimentId::Fig12,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentId::Fig2 => "fig2",
            ExperimentId::Fig3 => "fig3",
            ExperimentId::Fig4 => "fig4",
            ExperimentId::Fig5 => "fig5",
            ExperimentId::Fig7 => "fig7",
            ExperimentId::Fig8 => "fig8",
            ExperimentId::Fig9 => "fig9",
            ExperimentId::Fig10 => "fig10",
            ExperimentId::Fig11 => "fig11",
            ExperimentId::Fig12 => "fig12",
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown experiment '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub id: ExperimentId,
    pub repeats: u32,
    pub master_seed: u64,
    pub n: u32,
    pub k: u32,
    /// Fixed message count for sweeps over noise or gap fraction.
    pub messages: usize,
    /// Values of the primary axis (see the module table).
    pub sweep: Vec<f64>,
    /// Noise levels for fig3, fig4 and fig12.
    pub noise_levels: Vec<f64>,
    pub q_threshold: u32,
}

/// `start, start + step, ..` up to `end`, all in hundredths so values print
/// cleanly.
fn hundredths(start: u32, end: u32, step: u32) -> Vec<f64> {
    (start..=end).step_by(step as usize).map(|i| i as f64 / 100.0).collect()
}

fn counts(values: impl IntoIterator<Item = usize>) -> Vec<f64> {
    values.into_iter().map(|v| v as f64).collect()
}

impl ExperimentConfig {
    /// The default configuration of `id` with N = 8, k = 2.
    pub fn new(id: ExperimentId) -> Self {
        let mut cfg = ExperimentConfig {
            id,
            repeats: 30,
            master_seed: 1,
            n: 8,
            k: 2,
            messages: 10,
            sweep: Vec::new(),
            noise_levels: Vec::new(),
            q_threshold: DEFAULT_Q_THRESHOLD,
        };
        match id {
            ExperimentId::Fig2 => {
                cfg.repeats = 1;
                cfg.sweep = counts((1..=128).map(|m| 8 * m));
            }
            ExperimentId::Fig3 => {
                cfg.sweep = counts([1, 2, 5].into_iter().chain((10..=100).step_by(10)));
                cfg.noise_levels = vec![0.0, 0.3];
            }
            ExperimentId::Fig4 => {
                cfg.repeats = 1;
                cfg.sweep = counts(1..=100);
                cfg.noise_levels = hundredths(10, 50, 10);
            }
            ExperimentId::Fig5 => cfg.sweep = hundredths(0, 50, 5),
            ExperimentId::Fig7 => cfg.sweep = counts(1..=20),
            ExperimentId::Fig8 => cfg.sweep = hundredths(0, 50, 5),
            ExperimentId::Fig9 => {
                cfg.repeats = 50;
                cfg.sweep = hundredths(0, 50, 5);
            }
            ExperimentId::Fig10 => {
                cfg.repeats = 50;
                cfg.messages = 8;
                cfg.sweep = hundredths(0, 50, 1);
            }
            ExperimentId::Fig11 => cfg.sweep = counts((0..8).map(|p| 1 << p)),
            ExperimentId::Fig12 => {
                cfg.sweep = counts([1, 2, 5].into_iter().chain((10..=100).step_by(10)));
                cfg.noise_levels = hundredths(0, 30, 10);
            }
        }
        cfg
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.repeats == 0 {
            return bad("repeats must be at least 1".into());
        }
        if self.sweep.is_empty() {
            return bad(format!("{} needs a non-empty sweep", self.id));
        }
        if self.sweep.iter().chain(&self.noise_levels).any(|v| !v.is_finite()) {
            return bad("sweep values must be finite".into());
        }
        let params = self.params(self.k)?;
        let domain = 1u64 << self.n;
        let check_count = |m: f64| -> Result<()> {
            if m < 1.0 || m.fract() != 0.0 || m as u64 > domain {
                return bad(format!("message count {m} outside 1..={domain}"));
            }
            Ok(())
        };
        let check_fraction = |v: f64, max: f64, what: &str| -> Result<()> {
            if !(0.0..=max).contains(&v) {
                return bad(format!("{what} {v} outside [0, {max}]"));
            }
            Ok(())
        };
        match self.id {
            ExperimentId::Fig2 => {
                for &a in &self.sweep {
                    if a < 1.0 || a.fract() != 0.0 || !(a as u64).is_multiple_of(self.n as u64) {
                        return bad(format!("data size {a} is not a positive multiple of N = {}", self.n));
                    }
                }
            }
            ExperimentId::Fig3 | ExperimentId::Fig7 | ExperimentId::Fig12 => {
                self.sweep.iter().try_for_each(|&m| check_count(m))?;
                self.noise_levels
                    .iter()
                    .try_for_each(|&mu| check_fraction(mu, 1.0, "noise fraction"))?;
            }
            ExperimentId::Fig4 => {
                self.sweep.iter().try_for_each(|&m| check_count(m))?;
                self.noise_levels
                    .iter()
                    .try_for_each(|&mu| check_fraction(mu, 0.5, "noise fraction"))?;
                if self.noise_levels.is_empty() {
                    return bad("fig4 needs at least one noise level".into());
                }
                let largest = self.sweep.iter().cloned().fold(0.0, f64::max);
                let z = expected_marks(largest, params.hashes_per_message() as f64);
                if z >= params.codeword_len() as f64 {
                    return bad(format!("{largest} messages fill the codeword"));
                }
            }
            ExperimentId::Fig5 | ExperimentId::Fig8 | ExperimentId::Fig9 => {
                self.sweep
                    .iter()
                    .try_for_each(|&mu| check_fraction(mu, 1.0, "noise fraction"))?;
            }
            ExperimentId::Fig10 => {
                self.sweep
                    .iter()
                    .try_for_each(|&gf| check_fraction(gf, 1.0, "gap fraction"))?;
            }
            ExperimentId::Fig11 => self.sweep.iter().try_for_each(|&m| check_count(m))?,
        }
        if matches!(self.id, ExperimentId::Fig3 | ExperimentId::Fig12) && self.noise_levels.is_empty() {
            return bad(format!("{} needs at least one noise level", self.id));
        }
        if matches!(self.id, ExperimentId::Fig5 | ExperimentId::Fig9 | ExperimentId::Fig10) {
            check_count(self.messages as f64)?;
        }
        if matches!(self.id, ExperimentId::Fig9 | ExperimentId::Fig10) {
            self.cdma(self.messages, 0)?;
        }
        if self.id == ExperimentId::Fig11 {
            for &m in &self.sweep {
                self.cdma(m as usize, 0)?;
            }
        }
        if self.id == ExperimentId::Fig8 && !(1..=6).contains(&self.q_threshold) {
            return bad(format!("q threshold {} outside 1..=6", self.q_threshold));
        }
        Ok(())
    }

    fn params(&self, k: u32) -> Result<CodeParams> {
        CodeParams::closed(self.n, k).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    fn cdma(&self, m: usize, seed: u64) -> Result<CdmaParams> {
        let len = self.params(self.k)?.codeword_len();
        CdmaParams::with_data_bits(m, self.n as usize, len, derive_seed(seed, CHIPS_TAG))
            .map_err(|e| Error::InvalidConfig(format!("CDMA arm: {e}")))
    }

    fn repeat_seeds(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        (0..self.repeats).map(|r| (r, self.master_seed.wrapping_add(r as u64)))
    }
}

/// `m` distinct uniformly drawn `n`-bit messages, in draw order.
pub fn random_messages(n: u32, m: usize, seed: u64) -> Result<Vec<Message>> {
    if n == 0 || n > 24 {
        return Err(Error::params(format!("message length {n} outside 1..=24")));
    }
    let domain = 1usize << n;
    if m > domain {
        return Err(Error::params(format!(
            "{m} distinct messages exceed the {domain} possible"
        )));
    }
    let mut rng = rng_from_seed(seed);
    index::sample(&mut rng, domain, m)
        .into_iter()
        .map(|v| Message::new(v as u64, n))
        .collect()
}

/// Collects rows for one sweep point and appends mean rows on `finish`.
struct Point<'a> {
    cfg: &'a ExperimentConfig,
    m: usize,
    mu: f64,
    gap_fraction: f64,
    k: u32,
    codeword_bits: usize,
    rows: Vec<MetricRecord>,
    measured: Vec<(String, f64)>,
}

impl<'a> Point<'a> {
    fn new(cfg: &'a ExperimentConfig, params: &CodeParams, m: usize, mu: f64, gap_fraction: f64) -> Self {
        Point {
            cfg,
            m,
            mu,
            gap_fraction,
            k: params.n_checksum(),
            codeword_bits: params.codeword_len(),
            rows: Vec::new(),
            measured: Vec::new(),
        }
    }

    fn record(&self, seed: u64, repeat: Option<u32>, metric: &str, value: f64) -> MetricRecord {
        MetricRecord {
            experiment: self.cfg.id.name().to_string(),
            m: self.m,
            mu: self.mu,
            gap_fraction: self.gap_fraction,
            n: self.cfg.n,
            k: self.k,
            codeword_bits: self.codeword_bits,
            seed,
            repeat,
            metric: metric.to_string(),
            value,
        }
    }

    fn measure(&mut self, seed: u64, repeat: u32, metric: &str, value: f64) {
        self.rows.push(self.record(seed, Some(repeat), metric, value));
        match self.measured.iter_mut().find(|(name, _)| name == metric) {
            Some((_, sum)) => *sum += value,
            None => self.measured.push((metric.to_string(), value)),
        }
    }

    fn model(&mut self, metric: &str, value: f64) {
        self.rows.push(self.record(self.cfg.master_seed, None, metric, value));
    }

    fn finish(mut self, out: &mut Vec<MetricRecord>) {
        let repeats = self.cfg.repeats as f64;
        for (metric, sum) in std::mem::take(&mut self.measured) {
            let row = self.record(self.cfg.master_seed, None, &metric, sum / repeats);
            self.rows.push(row);
        }
        out.append(&mut self.rows);
    }
}

/// Per-repeat draws shared by every sweep point.
struct Trial {
    repeat: u32,
    table: TableHash,
    messages: Vec<Message>,
}

fn trial(cfg: &ExperimentConfig, params: &CodeParams, repeat: u32, seed: u64, m: usize) -> Result<Trial> {
    Ok(Trial {
        repeat,
        table: build_table_hash(params, seed)?,
        messages: random_messages(cfg.n, m, derive_seed(seed, MESSAGES_TAG))?,
    })
}

/// Runs the configured sweep. Identical configurations give identical rows.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<MetricRecord>> {
    cfg.validate()?;
    let mut out = Vec::new();
    let params = cfg.params(cfg.k)?;
    let n_eff = params.hashes_per_message() as f64;
    let len = params.codeword_len();
    match cfg.id {
        ExperimentId::Fig2 => {
            for &a in &cfg.sweep {
                let (open, closed) = open_vs_closed_hash_calls(a as u64, cfg.n, cfg.k)?;
                let mut point = Point::new(cfg, &params, a as usize / cfg.n as usize, 0.0, 0.0);
                point.model("model_open_hash_calls", open);
                point.model("model_closed_hash_calls", closed);
                point.finish(&mut out);
            }
        }
        ExperimentId::Fig3 | ExperimentId::Fig12 => {
            for &mu in &cfg.noise_levels {
                for &m in &cfg.sweep {
                    let m = m as usize;
                    let mut point = Point::new(cfg, &params, m, mu, 0.0);
                    for (repeat, seed) in cfg.repeat_seeds() {
                        let t = trial(cfg, &params, repeat, seed, m)?;
                        let cw = encode(&t.messages, &t.table, &params)?;
                        let noisy = add_noise(&cw, mu, derive_seed(seed, NOISE_TAG))?;
                        let res = decode(&noisy, &t.table, &params, &DecodeOptions::default())?;
                        if cfg.id == ExperimentId::Fig3 {
                            point.measure(seed, t.repeat, "marks", cw.mark_count() as f64);
                        } else {
                            point.measure(seed, t.repeat, "encode_hash_calls", (m as f64) * n_eff);
                        }
                        point.measure(seed, t.repeat, "decode_hash_calls", res.hash_calls as f64);
                    }
                    point.model("model_decode_hash_calls", expected_hash_calls(m as f64, mu, n_eff));
                    point.finish(&mut out);
                }
            }
        }
        ExperimentId::Fig4 => {
            for &mu in &cfg.noise_levels {
                for &m in &cfg.sweep {
                    let mut point = Point::new(cfg, &params, m as usize, mu, 0.0);
                    point.model("model_noise_to_signal", noise_to_signal(m, mu, &params)?);
                    point.finish(&mut out);
                }
            }
        }
        ExperimentId::Fig5 => {
            let mut ks = vec![0, cfg.k];
            ks.dedup();
            for k in ks {
                let params = cfg.params(k)?;
                for &mu in &cfg.sweep {
                    let mut point = Point::new(cfg, &params, cfg.messages, mu, 0.0);
                    for (repeat, seed) in cfg.repeat_seeds() {
                        let t = trial(cfg, &params, repeat, seed, cfg.messages)?;
                        let cw = encode(&t.messages, &t.table, &params)?;
                        let noisy = add_noise(&cw, mu, derive_seed(seed, NOISE_TAG))?;
                        let res = decode(&noisy, &t.table, &params, &DecodeOptions::default())?;
                        let false_decodes = hallucinations(&t.messages, &res.messages).len();
                        let recovered = t.messages.iter().all(|m| res.contains(m));
                        point.measure(seed, t.repeat, "hallucinations", false_decodes as f64);
                        point.measure(seed, t.repeat, "all_recovered", f64::from(u8::from(recovered)));
                    }
                    point.finish(&mut out);
                }
            }
        }
        ExperimentId::Fig7 => {
            for &m in &cfg.sweep {
                let m = m as usize;
                let mut point = Point::new(cfg, &params, m, 0.0, 0.0);
                for (repeat, seed) in cfg.repeat_seeds() {
                    let t = trial(cfg, &params, repeat, seed, m)?;
                    let cw = encode(&t.messages, &t.table, &params)?;
                    let score = principle_marks(&t.table).score_at(&cw, 0);
                    point.measure(seed, t.repeat, "correlation", score as f64);
                }
                point.model("model_correlation", expected_principle_marks(m)?);
                point.finish(&mut out);
            }
        }
        ExperimentId::Fig8 => {
            let q = cfg.q_threshold;
            for &mu in &cfg.sweep {
                let mut point = Point::new(cfg, &params, 0, mu, 0.0);
                for (repeat, seed) in cfg.repeat_seeds() {
                    let table = build_table_hash(&params, seed)?;
                    let pattern = principle_marks(&table);
                    let stream = add_noise(&Codeword::zeros(2 * len), mu, derive_seed(seed, NOISE_TAG))?;
                    let hits = correlate(&stream, &pattern, 0..len)
                        .iter()
                        .filter(|c| c.score >= q)
                        .count();
                    point.measure(seed, repeat, "false_correlations", hits as f64);
                }
                point.model("model_false_correlations", false_correlation_rate(q, mu, len));
                point.model("model_exact_false_correlations", threshold_correlation_rate(q, mu, len));
                point.finish(&mut out);
            }
        }
        ExperimentId::Fig9 | ExperimentId::Fig10 => {
            let m = cfg.messages;
            let noise_sweep = cfg.id == ExperimentId::Fig9;
            for &x in &cfg.sweep {
                let (mu, gf) = if noise_sweep { (x, 0.0) } else { (0.0, x) };
                let mut point = Point::new(cfg, &params, m, mu, gf);
                for (repeat, seed) in cfg.repeat_seeds() {
                    let t = trial(cfg, &params, repeat, seed, m)?;
                    let cdma = cfg.cdma(m, seed)?;
                    let cc_cw = encode(&t.messages, &t.table, &params)?;
                    let cdma_cw = cdma_encode(&t.messages, &cdma)?;
                    let noise_seed = derive_seed(seed, NOISE_TAG);
                    let burst_seed = derive_seed(seed, BURST_TAG);
                    let (cc_rx, cdma_rx, options) = if noise_sweep {
                        (
                            add_noise(&cc_cw, mu, noise_seed)?,
                            flip_noise(&cdma_cw, mu, noise_seed)?,
                            DecodeOptions::default(),
                        )
                    } else {
                        (
                            burst_erase(&cc_cw, gf, BurstStart::Random, burst_seed)?.0,
                            burst_erase(&cdma_cw, gf, BurstStart::Random, burst_seed)?.0,
                            DecodeOptions::bridging(),
                        )
                    };
                    let res = decode(&cc_rx, &t.table, &params, &options)?;
                    let cdma_out = cdma_decode(&cdma_rx, &cdma)?;
                    let recovered = t.messages.iter().all(|msg| res.contains(msg));
                    point.measure(
                        seed,
                        t.repeat,
                        "cc_error_fraction",
                        decoded_error_fraction(&t.messages, &res.messages),
                    );
                    point.measure(seed, t.repeat, "cc_all_recovered", f64::from(u8::from(recovered)));
                    point.measure(
                        seed,
                        t.repeat,
                        "cdma_error_fraction",
                        positional_error_fraction(&t.messages, &cdma_out),
                    );
                }
                point.finish(&mut out);
            }
        }
        ExperimentId::Fig11 => {
            for &m in &cfg.sweep {
                let m = m as usize;
                let mut point = Point::new(cfg, &params, m, 0.0, 0.0);
                for (repeat, seed) in cfg.repeat_seeds() {
                    let t = trial(cfg, &params, repeat, seed, m)?;
                    let cc = encode(&t.messages, &t.table, &params)?;
                    let cdma = cdma_encode(&t.messages, &cfg.cdma(m, seed)?)?;
                    point.measure(seed, t.repeat, "cc_marks", cc.mark_count() as f64);
                    point.measure(seed, t.repeat, "cdma_marks", cdma.mark_count() as f64);
                }
                point.model("model_cc_marks", expected_marks(m as f64, n_eff));
                point.model("model_cdma_marks", len as f64 / 2.0);
                point.finish(&mut out);
            }
        }
    }
    Ok(out)
}

/// Writes `records` as CSV with [`CSV_HEADER`]. Mean and model rows carry
/// `mean` in the repeat column.
pub fn write_csv<W: Write>(records: &[MetricRecord], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(CSV_HEADER)?;
    for r in records {
        let repeat = r.repeat.map_or_else(|| "mean".to_string(), |i| i.to_string());
        w.write_record([
            r.experiment.clone(),
            r.m.to_string(),
            r.mu.to_string(),
            r.gap_fraction.to_string(),
            r.n.to_string(),
            r.k.to_string(),
            r.codeword_bits.to_string(),
            r.seed.to_string(),
            repeat,
            r.metric.clone(),
            r.value.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Mean rows of `metric`, as `(primary axis value, mean)` pairs in sweep
/// order. The primary axis is `m`, `mu` or `gap_fraction` by experiment.
pub fn mean_series(records: &[MetricRecord], metric: &str) -> Vec<(f64, f64)> {
    records
        .iter()
        .filter(|r| r.repeat.is_none() && r.metric == metric)
        .map(|r| {
            let x = match r.experiment.as_str() {
                "fig5" | "fig8" | "fig9" => r.mu,
                "fig10" => r.gap_fraction,
                _ => r.m as f64,
            };
            (x, r.value)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(id: ExperimentId) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::new(id);
        cfg.repeats = 2;
        cfg.sweep.truncate(3);
        cfg
    }

    #[test]
    fn ids_round_trip() {
        for id in ExperimentId::ALL {
            assert_eq!(id.name().parse::<ExperimentId>().unwrap(), id);
        }
        assert!(matches!("fig6".parse::<ExperimentId>(), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn defaults_validate() {
        for id in ExperimentId::ALL {
            ExperimentConfig::new(id).validate().unwrap();
        }
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let mut cfg = ExperimentConfig::new(ExperimentId::Fig5);
        cfg.repeats = 0;
        assert!(matches!(run_experiment(&cfg), Err(Error::InvalidConfig(_))));
        let mut cfg = ExperimentConfig::new(ExperimentId::Fig9);
        cfg.sweep = vec![];
        assert!(matches!(run_experiment(&cfg), Err(Error::InvalidConfig(_))));
        cfg.sweep = vec![1.5];
        assert!(matches!(run_experiment(&cfg), Err(Error::InvalidConfig(_))));
        let mut cfg = ExperimentConfig::new(ExperimentId::Fig11);
        cfg.sweep = vec![256.0];
        assert!(matches!(run_experiment(&cfg), Err(Error::InvalidConfig(_))));
        let mut cfg = ExperimentConfig::new(ExperimentId::Fig4);
        cfg.noise_levels = vec![0.7];
        assert!(matches!(run_experiment(&cfg), Err(Error::InvalidConfig(_))));
        let mut cfg = ExperimentConfig::new(ExperimentId::Fig2);
        cfg.sweep = vec![12.0];
        assert!(matches!(run_experiment(&cfg), Err(Error::InvalidConfig(_))));
        let mut cfg = ExperimentConfig::new(ExperimentId::Fig9);
        cfg.n = 6;
        assert!(matches!(run_experiment(&cfg), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn random_messages_are_distinct() {
        let msgs = random_messages(8, 200, 3).unwrap();
        let mut values: Vec<u64> = msgs.iter().map(|m| m.value()).collect();
        values.sort_unstable();
        values.dedup();
        assert_eq!(values.len(), 200);
        assert_eq!(random_messages(8, 256, 1).unwrap().len(), 256);
        assert!(random_messages(8, 257, 1).is_err());
        assert_eq!(random_messages(8, 10, 9).unwrap(), random_messages(8, 10, 9).unwrap());
    }

    #[test]
    fn rows_per_point() {
        let cfg = small(ExperimentId::Fig9);
        let rows = run_experiment(&cfg).unwrap();
        // 3 points x 3 metrics x (2 repeats + mean).
        assert_eq!(rows.len(), 3 * 3 * 3);
        let seeds: Vec<u64> = rows.iter().filter(|r| r.repeat.is_some()).map(|r| r.seed).collect();
        assert!(seeds.iter().all(|&s| s == 1 || s == 2));
        for r in &rows {
            assert!(r.value.is_finite() && (0.0..=1.0).contains(&r.value));
        }
    }

    #[test]
    fn means_average_repeats() {
        let rows = run_experiment(&small(ExperimentId::Fig11)).unwrap();
        for mean in rows.iter().filter(|r| r.repeat.is_none() && r.metric == "cc_marks") {
            let vals: Vec<f64> = rows
                .iter()
                .filter(|r| r.m == mean.m && r.metric == "cc_marks" && r.repeat.is_some())
                .map(|r| r.value)
                .collect();
            assert_eq!(vals.len(), 2);
            assert_eq!(mean.value, (vals[0] + vals[1]) / 2.0);
        }
    }

    #[test]
    fn csv_is_byte_identical_across_runs() {
        for id in ExperimentId::ALL {
            let cfg = small(id);
            let mut a = Vec::new();
            let mut b = Vec::new();
            write_csv(&run_experiment(&cfg).unwrap(), &mut a).unwrap();
            write_csv(&run_experiment(&cfg).unwrap(), &mut b).unwrap();
            assert_eq!(a, b, "{id}");
            let text = String::from_utf8(a).unwrap();
            assert!(text.starts_with("experiment,m,mu,gap_fraction,n,k,codeword_bits,seed,repeat,metric,value\n"));
        }
    }

    #[test]
    fn fig5_covers_both_checksum_settings() {
        let rows = run_experiment(&small(ExperimentId::Fig5)).unwrap();
        assert!(rows.iter().any(|r| r.k == 0 && r.codeword_bits == 512));
        assert!(rows.iter().any(|r| r.k == 2 && r.codeword_bits == 2048));
        // Zero noise: nothing hallucinated, everything recovered.
        for r in rows.iter().filter(|r| r.mu == 0.0) {
            let expect = if r.metric == "hallucinations" { 0.0 } else { 1.0 };
            assert_eq!(r.value, expect, "{r:?}");
        }
    }

    #[test]
    fn model_series() {
        let rows = run_experiment(&ExperimentConfig::new(ExperimentId::Fig2)).unwrap();
        let open = mean_series(&rows, "model_open_hash_calls");
        assert_eq!(open.len(), 128);
        assert_eq!(open[0], (1.0, 16.0));
        let closed = mean_series(&rows, "model_closed_hash_calls");
        assert_eq!(closed[0], (1.0, 21.0));
        assert!(closed[127].1 < open[127].1);
    }
}
