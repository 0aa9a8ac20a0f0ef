//! The three execution modes being compared: whole-image serial k-means,
//! serial block processing, and parallel block processing over a bounded
//! worker pool.
//!
//! Each block is clustered with its own seed derived from the global seed
//! and the block's grid position, and results are merged by region
//! coordinates, so the output is a pure function of the inputs — bit
//! identical for any worker count and any completion order.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use crate::image::Image;
use crate::kmeans::{render, run_kmeans, KMeansConfig, KMeansModel, PointSet};
use crate::partition::{
    compute_grid, derive_block_shape, extract_block, reassemble, BlockRegion, Strategy,
};
use crate::rng::{SplitMix64, GOLDEN_GAMMA};
use crate::Error;

/// Which execution mode to run, with the parameters that mode needs.
#[derive(Debug, Clone, PartialEq)]
pub enum ExecutionPlan {
    WholeImageSerial {
        kmeans: KMeansConfig,
    },
    BlockSerial {
        strategy: Strategy,
        kmeans: KMeansConfig,
    },
    BlockParallel {
        strategy: Strategy,
        workers: usize,
        kmeans: KMeansConfig,
    },
}

/// A reassembled cluster map plus the per-block models (or the single
/// whole-image model) and the wall-clock time of the compute phase.
/// Timing covers flatten/cluster/render/reassemble and excludes file I/O.
#[derive(Debug, Clone)]
pub struct ClusteredResult {
    pub output: Image,
    pub block_models: Vec<(BlockRegion, KMeansModel)>,
    pub whole_image_model: Option<KMeansModel>,
    pub wall_ms: f64,
}

/// Derives the k-means seed for the block at `(grid_row, grid_col)`:
/// one SplitMix64 output step over the global seed XOR the block's
/// 1-based linear index times the golden gamma. A pure function, so any
/// worker can compute it for any block.
pub fn block_seed(global_seed: u64, grid_row: usize, grid_col: usize, grid_cols: usize) -> u64 {
    let linear = (grid_row as u64).wrapping_mul(grid_cols as u64) + grid_col as u64;
    SplitMix64::mix(global_seed ^ linear.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA))
}

/// Clusters the whole image as one point set and renders one cluster map.
pub fn run_whole_image_serial(img: &Image, cfg: &KMeansConfig) -> Result<ClusteredResult, Error> {
    let start = Instant::now();
    let ps = PointSet::from_image(img);
    let model = run_kmeans(&ps, cfg)?;
    let output = render(img.dims(), &model.labels, &model.centroids, img.maxval())?;
    Ok(ClusteredResult {
        output,
        block_models: Vec::new(),
        whole_image_model: Some(model),
        wall_ms: elapsed_ms(start),
    })
}

/// Clusters each block of the grid in row-major order on the calling
/// thread, then reassembles the cluster map.
pub fn run_block_serial(
    img: &Image,
    strategy: Strategy,
    cfg: &KMeansConfig,
) -> Result<ClusteredResult, Error> {
    let start = Instant::now();
    let grid = compute_grid(img.dims(), derive_block_shape(strategy, img.dims()));
    let mut pieces = Vec::with_capacity(grid.regions.len());
    let mut block_models = Vec::with_capacity(grid.regions.len());
    for region in &grid.regions {
        let (rendered, model) = process_block(img, region, cfg, grid.grid_cols)?;
        pieces.push((*region, rendered));
        block_models.push((*region, model));
    }
    let output = reassemble(img.dims(), &pieces)?;
    Ok(ClusteredResult {
        output,
        block_models,
        whole_image_model: None,
        wall_ms: elapsed_ms(start),
    })
}

/// Same contract as [`run_block_serial`] — same grid, same per-block
/// seeds, bit-identical output — but blocks are claimed from a row-major
/// queue by at most `workers` threads. A failing block aborts the run
/// with the error of the lowest-indexed failed block.
pub fn run_block_parallel(
    img: &Image,
    strategy: Strategy,
    workers: usize,
    cfg: &KMeansConfig,
) -> Result<ClusteredResult, Error> {
    assert!(workers >= 1, "worker count must be at least 1");
    let start = Instant::now();
    let grid = compute_grid(img.dims(), derive_block_shape(strategy, img.dims()));
    let n = grid.regions.len();

    type BlockSlot = Mutex<Option<Result<(Image, KMeansModel), Error>>>;
    let queue = AtomicUsize::new(0);
    let slots: Vec<BlockSlot> = (0..n).map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..workers.min(n) {
            scope.spawn(|| loop {
                let index = queue.fetch_add(1, Ordering::Relaxed);
                if index >= n {
                    break;
                }
                let outcome = process_block(img, &grid.regions[index], cfg, grid.grid_cols);
                *slots[index].lock().unwrap() = Some(outcome);
            });
        }
    });

    let mut pieces = Vec::with_capacity(n);
    let mut block_models = Vec::with_capacity(n);
    for (index, slot) in slots.into_iter().enumerate() {
        let outcome = slot
            .into_inner()
            .unwrap()
            .expect("every block slot is filled before the pool joins");
        let (rendered, model) = outcome?;
        pieces.push((grid.regions[index], rendered));
        block_models.push((grid.regions[index], model));
    }
    let output = reassemble(img.dims(), &pieces)?;
    Ok(ClusteredResult {
        output,
        block_models,
        whole_image_model: None,
        wall_ms: elapsed_ms(start),
    })
}

/// Dispatches on the plan's mode.
pub fn execute(img: &Image, plan: &ExecutionPlan) -> Result<ClusteredResult, Error> {
    match plan {
        ExecutionPlan::WholeImageSerial { kmeans } => run_whole_image_serial(img, kmeans),
        ExecutionPlan::BlockSerial { strategy, kmeans } => run_block_serial(img, *strategy, kmeans),
        ExecutionPlan::BlockParallel {
            strategy,
            workers,
            kmeans,
        } => run_block_parallel(img, *strategy, *workers, kmeans),
    }
}

fn process_block(
    img: &Image,
    region: &BlockRegion,
    cfg: &KMeansConfig,
    grid_cols: usize,
) -> Result<(Image, KMeansModel), Error> {
    let block = extract_block(img, region)?;
    let ps = PointSet::from_image(&block);
    let seed = block_seed(cfg.seed, region.grid_row, region.grid_col, grid_cols);
    let model = run_kmeans(&ps, &cfg.with_seed(seed))?;
    let rendered = render(block.dims(), &model.labels, &model.centroids, block.maxval())?;
    Ok((rendered, model))
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}
