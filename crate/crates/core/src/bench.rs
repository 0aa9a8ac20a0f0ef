//! Speedup/efficiency metrics and the strategy x k x workers benchmark
//! matrix, serialized as CSV.
//!
//! Speedup is whole-image serial time over block-parallel time for the
//! same task; efficiency is speedup over worker count. Timings aggregate
//! repeated runs by median so a single scheduling hiccup cannot skew a
//! record.

use crate::image::{Dims, Image};
use crate::kmeans::KMeansConfig;
use crate::partition::{Strategy, StrategyKind};
use crate::runtime::{run_block_parallel, run_block_serial, run_whole_image_serial};
use crate::Error;
use thiserror::Error;

/// How repeated measurements are folded into one number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Aggregation {
    Median,
}

/// One benchmark row: the configuration, the three measured times, and
/// the derived metrics (`speedup = serial_ms / parallel_ms`,
/// `efficiency = speedup / workers`).
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub data_size: Dims,
    pub strategy: StrategyKind,
    pub extent: usize,
    pub k: usize,
    pub workers: usize,
    pub serial_ms: f64,
    pub block_serial_ms: f64,
    pub parallel_ms: f64,
    pub speedup: f64,
    pub efficiency: f64,
    pub repetitions: usize,
    pub aggregation: Aggregation,
}

#[derive(Debug, Error, PartialEq)]
pub enum BenchError {
    #[error("times must be positive: serial {serial_ms}, parallel {parallel_ms}")]
    NonPositiveTime { serial_ms: f64, parallel_ms: f64 },
    #[error("worker count must be at least 1")]
    ZeroWorkers,
    #[error("repetitions must be at least 1")]
    ZeroRepetitions,
}

/// Serial wall time divided by parallel wall time for the same task.
pub fn speedup(serial_ms: f64, parallel_ms: f64) -> Result<f64, BenchError> {
    let positive = |v: f64| v.is_finite() && v > 0.0;
    if !positive(serial_ms) || !positive(parallel_ms) {
        return Err(BenchError::NonPositiveTime {
            serial_ms,
            parallel_ms,
        });
    }
    Ok(serial_ms / parallel_ms)
}

/// Speedup divided by the number of workers.
pub fn efficiency(speedup: f64, workers: usize) -> Result<f64, BenchError> {
    if workers == 0 {
        return Err(BenchError::ZeroWorkers);
    }
    Ok(speedup / workers as f64)
}

fn median(mut values: Vec<f64>) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

/// Runs the full measurement matrix on one image. For each strategy and
/// k the whole-image serial baseline is measured once per k and the
/// block-serial time once per (strategy, k); block-parallel is measured
/// per (strategy, k, workers). Every measurement is repeated
/// `repetitions` times and aggregated by median. Records are emitted in
/// deterministic order: strategies, then ks, then workers, each as given.
pub fn run_benchmark(
    img: &Image,
    strategies: &[Strategy],
    ks: &[usize],
    workers_list: &[usize],
    kmeans: &KMeansConfig,
    repetitions: usize,
) -> Result<Vec<BenchRecord>, Error> {
    if repetitions == 0 {
        return Err(BenchError::ZeroRepetitions.into());
    }
    let mut serial_by_k: Vec<(usize, f64)> = Vec::new();
    let mut records = Vec::new();
    for &strategy in strategies {
        for &k in ks {
            let cfg = KMeansConfig { k, ..*kmeans };
            let serial_ms = match serial_by_k.iter().find(|(kk, _)| *kk == k) {
                Some(&(_, ms)) => ms,
                None => {
                    let ms = median(
                        (0..repetitions)
                            .map(|_| run_whole_image_serial(img, &cfg).map(|r| r.wall_ms))
                            .collect::<Result<_, _>>()?,
                    );
                    serial_by_k.push((k, ms));
                    ms
                }
            };
            let block_serial_ms = median(
                (0..repetitions)
                    .map(|_| run_block_serial(img, strategy, &cfg).map(|r| r.wall_ms))
                    .collect::<Result<_, _>>()?,
            );
            for &workers in workers_list {
                let parallel_ms = median(
                    (0..repetitions)
                        .map(|_| {
                            run_block_parallel(img, strategy, workers, &cfg).map(|r| r.wall_ms)
                        })
                        .collect::<Result<_, _>>()?,
                );
                let speedup = speedup(serial_ms, parallel_ms).map_err(Error::from)?;
                let efficiency = efficiency(speedup, workers).map_err(Error::from)?;
                records.push(BenchRecord {
                    data_size: img.dims(),
                    strategy: strategy.kind,
                    extent: strategy.extent,
                    k,
                    workers,
                    serial_ms,
                    block_serial_ms,
                    parallel_ms,
                    speedup,
                    efficiency,
                    repetitions,
                    aggregation: Aggregation::Median,
                });
            }
        }
    }
    Ok(records)
}

pub const CSV_HEADER: &str =
    "data_size,strategy,extent,k,workers,serial_ms,block_serial_ms,parallel_ms,speedup,efficiency";

/// Serializes records as UTF-8 CSV with LF line endings, reals to six
/// decimal places, rows in input order. Byte-deterministic for equal
/// inputs.
pub fn write_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{:.6},{:.6},{:.6},{:.6},{:.6}\n",
            r.data_size,
            r.strategy.name(),
            r.extent,
            r.k,
            r.workers,
            r.serial_ms,
            r.block_serial_ms,
            r.parallel_ms,
            r.speedup,
            r.efficiency,
        ));
    }
    out
}
