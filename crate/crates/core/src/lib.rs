//! Distinct-block parallel k-means clustering for raster images.
//!
//! An image is partitioned into row-shaped, column-shaped, or square
//! blocks; each block is clustered independently (k-means++ seeding,
//! Lloyd iteration) by a bounded worker pool; the per-block cluster maps
//! are reassembled into one output image. Per-block seeds are derived
//! deterministically from the global seed and the block's grid position,
//! so the output is bit-identical for any worker count.
//!
//! The crate also measures the three execution modes against each other
//! (whole-image serial, serial block processing, parallel block
//! processing) and reports speedup and efficiency per strategy, cluster
//! count, and worker count as CSV.

pub mod bench;
pub mod image;
pub mod kmeans;
pub mod partition;
pub mod rng;
pub mod runtime;

pub use bench::{efficiency, run_benchmark, speedup, write_csv, BenchRecord};
pub use image::{decode_pnm, encode_pnm, generate_synthetic, Dims, Image};
pub use kmeans::{run_kmeans, KMeansConfig, KMeansModel, PointSet};
pub use partition::{
    compute_grid, derive_block_shape, extract_block, reassemble, BlockGrid, BlockRegion,
    BlockShape, Strategy, StrategyKind,
};
pub use runtime::{
    block_seed, execute, run_block_parallel, run_block_serial, run_whole_image_serial,
    ClusteredResult, ExecutionPlan,
};

/// Any error this crate can produce.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Image(#[from] image::ImageError),
    #[error(transparent)]
    Pnm(#[from] image::PnmError),
    #[error(transparent)]
    Partition(#[from] partition::PartitionError),
    #[error(transparent)]
    KMeans(#[from] kmeans::KMeansError),
    #[error(transparent)]
    Bench(#[from] bench::BenchError),
}
