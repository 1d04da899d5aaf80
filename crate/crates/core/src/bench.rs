//! Timing harness over seeded random data.
//!
//! Each `(l_p, K)` cell is run `reps` times; every repetition draws a fresh
//! pattern and text, uniform over `{A, B, C, D}`. Data depends only on the
//! seed and the cell, never on timing.

use std::io::Write;
use std::time::{Duration, Instant};

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::{Alphabet, Symbol};
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::systolic::{exec_time_model, simulate_core, CoreConfig};
use crate::types::Pattern;

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub pattern_lens: Vec<usize>,
    pub thresholds: Vec<usize>,
    pub text_len: usize,
    pub reps: usize,
    pub seed: u64,
    pub t_clk: Duration,
    /// Also run the cycle-level simulator on the first repetition.
    pub simulate: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            pattern_lens: vec![5, 7, 10, 15],
            thresholds: vec![3],
            text_len: 3104,
            reps: 100,
            seed: 1,
            t_clk: Duration::from_nanos(10),
            simulate: true,
        }
    }
}

pub fn bench_alphabet() -> Alphabet {
    Alphabet::new("ABCD".chars()).expect("static alphabet")
}

/// Pattern and text of one repetition.
pub fn dataset(seed: u64, pattern_len: usize, k: usize, text_len: usize, rep: usize) -> (Vec<Symbol>, Vec<Symbol>) {
    let stream = seed
        .wrapping_mul(0x9e37_79b9_7f4a_7c15)
        .wrapping_add((pattern_len as u64) << 40 | (k as u64) << 32 | rep as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(stream);
    let mut draw = |n: usize| (0..n).map(|_| Symbol(rng.random_range(0..4u16))).collect::<Vec<_>>();
    let p = draw(pattern_len);
    let t = draw(text_len);
    (p, t)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub pattern_len: usize,
    pub k: usize,
    pub text_len: usize,
    pub reps: usize,
    pub times: Vec<Duration>,
    /// Occurrences per repetition.
    pub occurrences: Vec<usize>,
    pub sim_cycles: Option<u64>,
    /// Analytical execution time, when the model applies.
    pub model_time: Option<Duration>,
}

impl BenchRow {
    pub fn mean_secs(&self) -> f64 {
        self.times.iter().map(Duration::as_secs_f64).sum::<f64>() / self.times.len() as f64
    }

    /// Sample standard deviation; zero for a single repetition.
    pub fn std_secs(&self) -> f64 {
        let n = self.times.len();
        if n < 2 {
            return 0.0;
        }
        let mean = self.mean_secs();
        let var = self
            .times
            .iter()
            .map(|t| (t.as_secs_f64() - mean).powi(2))
            .sum::<f64>()
            / (n - 1) as f64;
        var.sqrt()
    }

    pub fn median_secs(&self) -> f64 {
        let mut v: Vec<f64> = self.times.iter().map(Duration::as_secs_f64).collect();
        v.sort_by(f64::total_cmp);
        let n = v.len();
        if n % 2 == 1 {
            v[n / 2]
        } else {
            (v[n / 2 - 1] + v[n / 2]) / 2.0
        }
    }
}

/// Runs every cell with `K < l_p`; other cells are skipped.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    if cfg.reps == 0 {
        return Err(Error::Domain("at least one repetition is required".into()));
    }
    let alphabet = bench_alphabet();
    let mut rows = Vec::new();
    for &lp in &cfg.pattern_lens {
        for &k in &cfg.thresholds {
            if k >= lp {
                continue;
            }
            let mut times = Vec::with_capacity(cfg.reps);
            let mut occurrences = Vec::with_capacity(cfg.reps);
            let mut sim_cycles = None;
            for rep in 0..cfg.reps {
                let (p, t) = dataset(cfg.seed, lp, k, cfg.text_len, rep);
                let pattern = Pattern::new(p, k, alphabet.len())?;
                let started = Instant::now();
                let mut engine = Engine::new(pattern.clone());
                let mut found = engine.push_all(&t)?.len();
                found += engine.finalize()?.len();
                times.push(started.elapsed());
                occurrences.push(found);
                if cfg.simulate && rep == 0 {
                    let core = CoreConfig {
                        t_clk: cfg.t_clk,
                        ..CoreConfig::fitting(&pattern, alphabet.code_width_bits())
                    };
                    let report = simulate_core(&pattern, &t, &core, 0)?;
                    if report.occurrences.len() != found {
                        return Err(Error::Invariant(format!(
                            "simulator found {} occurrences, engine {found}",
                            report.occurrences.len()
                        )));
                    }
                    sim_cycles = Some(report.total_cycles);
                }
            }
            rows.push(BenchRow {
                pattern_len: lp,
                k,
                text_len: cfg.text_len,
                reps: cfg.reps,
                times,
                occurrences,
                sim_cycles,
                model_time: exec_time_model(lp, k, cfg.text_len, cfg.t_clk).ok(),
            });
        }
    }
    Ok(rows)
}

pub const BENCH_TSV_HEADER: &str =
    "l_p\tK\tl_t\treps\tmean_s\tstd_s\tmedian_s\toccurrences\tsim_cycles\tmodel_s";

pub fn write_bench_tsv(rows: &[BenchRow], mut w: impl Write) -> std::io::Result<()> {
    writeln!(w, "{BENCH_TSV_HEADER}")?;
    for r in rows {
        let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
        writeln!(
            w,
            "{}\t{}\t{}\t{}\t{:.6e}\t{:.6e}\t{:.6e}\t{}\t{}\t{}",
            r.pattern_len,
            r.k,
            r.text_len,
            r.reps,
            r.mean_secs(),
            r.std_secs(),
            r.median_secs(),
            r.occurrences.iter().sum::<usize>(),
            opt(r.sim_cycles.map(|c| c.to_string())),
            opt(r.model_time.map(|d| format!("{:.6e}", d.as_secs_f64()))),
        )?;
    }
    Ok(())
}
