//! Distinct-block decomposition of a raster into non-overlapping
//! rectangular regions, plus the three block-shape strategies
//! (row-shaped, column-shaped, square) and exact reassembly.
//!
//! Block shapes use `[rows cols]` order; regions also carry `width`/
//! `height` and `x0`/`y0` names so the two vocabularies cannot be
//! transposed silently.

use crate::image::{Dims, Image, ImageError};
use thiserror::Error;

/// How block dimensions are derived from the image extent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrategyKind {
    /// Blocks span the full image width; `extent` is the block height.
    RowShaped,
    /// Blocks span the full image height; `extent` is the block width.
    ColumnShaped,
    /// Square blocks of side `extent`.
    Square,
}

impl StrategyKind {
    /// Conventional extent for each shape: 1200 for rows and squares,
    /// 1000 for columns.
    pub fn default_extent(self) -> usize {
        match self {
            StrategyKind::RowShaped => 1200,
            StrategyKind::ColumnShaped => 1000,
            StrategyKind::Square => 1200,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::RowShaped => "row",
            StrategyKind::ColumnShaped => "column",
            StrategyKind::Square => "square",
        }
    }
}

/// A block-shape strategy: the kind plus its free dimension in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Strategy {
    pub kind: StrategyKind,
    pub extent: usize,
}

impl Strategy {
    pub fn new(kind: StrategyKind, extent: usize) -> Self {
        assert!(extent >= 1, "strategy extent must be at least 1");
        Self { kind, extent }
    }

    pub fn with_default_extent(kind: StrategyKind) -> Self {
        Self {
            kind,
            extent: kind.default_extent(),
        }
    }
}

/// Block dimensions in `[rows cols]` order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BlockShape {
    pub rows: usize,
    pub cols: usize,
}

impl std::fmt::Display for BlockShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.rows, self.cols)
    }
}

/// One tile of the decomposition: its grid position and its pixel
/// rectangle. Edge regions may be smaller than the nominal block shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BlockRegion {
    pub grid_row: usize,
    pub grid_col: usize,
    pub x0: usize,
    pub y0: usize,
    pub width: usize,
    pub height: usize,
}

/// The full decomposition: every pixel of `image_dims` is covered by
/// exactly one region; regions are enumerated row-major by
/// `(grid_row, grid_col)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockGrid {
    pub image_dims: Dims,
    pub shape: BlockShape,
    pub grid_rows: usize,
    pub grid_cols: usize,
    pub regions: Vec<BlockRegion>,
}

/// Errors from block extraction and reassembly.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("region at grid ({grid_row},{grid_col}) exceeds image bounds: x0={x0} y0={y0} {width}x{height} in {dims}")]
    OutOfBounds {
        grid_row: usize,
        grid_col: usize,
        x0: usize,
        y0: usize,
        width: usize,
        height: usize,
        dims: Dims,
    },
    #[error("piece at grid ({grid_row},{grid_col}) is {actual_width}x{actual_height}, region wants {width}x{height}")]
    PieceSizeMismatch {
        grid_row: usize,
        grid_col: usize,
        width: usize,
        height: usize,
        actual_width: usize,
        actual_height: usize,
    },
    #[error("piece at grid ({grid_row},{grid_col}) has channels={channels} maxval={maxval}, expected channels={expected_channels} maxval={expected_maxval}")]
    PieceFormatMismatch {
        grid_row: usize,
        grid_col: usize,
        channels: usize,
        maxval: u16,
        expected_channels: usize,
        expected_maxval: u16,
    },
    #[error("regions overlap at pixel ({x},{y}), second writer is grid ({grid_row},{grid_col})")]
    Overlap {
        x: usize,
        y: usize,
        grid_row: usize,
        grid_col: usize,
    },
    #[error("incomplete tiling: pixel ({x},{y}) is covered by no region")]
    Incomplete { x: usize, y: usize },
    #[error("no pieces supplied")]
    Empty,
    #[error(transparent)]
    Image(#[from] ImageError),
}

/// Resolves a strategy against concrete image dimensions. Extents larger
/// than the image are clamped, so any strategy fits any image.
pub fn derive_block_shape(strategy: Strategy, dims: Dims) -> BlockShape {
    match strategy.kind {
        StrategyKind::RowShaped => BlockShape {
            rows: strategy.extent.min(dims.height),
            cols: dims.width,
        },
        StrategyKind::ColumnShaped => BlockShape {
            rows: dims.height,
            cols: strategy.extent.min(dims.width),
        },
        StrategyKind::Square => BlockShape {
            rows: strategy.extent.min(dims.height),
            cols: strategy.extent.min(dims.width),
        },
    }
}

/// Tiles `dims` with blocks of `shape`. Interior regions are exactly
/// `shape.rows x shape.cols`; the last grid row/column shrinks to fit.
pub fn compute_grid(dims: Dims, shape: BlockShape) -> BlockGrid {
    assert!(dims.width >= 1 && dims.height >= 1, "dims must be at least 1x1");
    assert!(shape.rows >= 1 && shape.cols >= 1, "block shape must be at least 1x1");
    let grid_rows = dims.height.div_ceil(shape.rows);
    let grid_cols = dims.width.div_ceil(shape.cols);
    let mut regions = Vec::with_capacity(grid_rows * grid_cols);
    for grid_row in 0..grid_rows {
        let y0 = grid_row * shape.rows;
        let height = shape.rows.min(dims.height - y0);
        for grid_col in 0..grid_cols {
            let x0 = grid_col * shape.cols;
            let width = shape.cols.min(dims.width - x0);
            regions.push(BlockRegion {
                grid_row,
                grid_col,
                x0,
                y0,
                width,
                height,
            });
        }
    }
    BlockGrid {
        image_dims: dims,
        shape,
        grid_rows,
        grid_cols,
        regions,
    }
}

/// Copies one region out of `img` as a standalone sub-image with the same
/// channels and maxval.
pub fn extract_block(img: &Image, region: &BlockRegion) -> Result<Image, PartitionError> {
    let dims = img.dims();
    let in_bounds = region.width >= 1
        && region.height >= 1
        && region.x0 + region.width <= dims.width
        && region.y0 + region.height <= dims.height;
    if !in_bounds {
        return Err(PartitionError::OutOfBounds {
            grid_row: region.grid_row,
            grid_col: region.grid_col,
            x0: region.x0,
            y0: region.y0,
            width: region.width,
            height: region.height,
            dims,
        });
    }
    let channels = img.channels();
    let mut samples = Vec::with_capacity(region.width * region.height * channels);
    for y in region.y0..region.y0 + region.height {
        let start = (y * dims.width + region.x0) * channels;
        samples.extend_from_slice(&img.samples()[start..start + region.width * channels]);
    }
    Ok(Image::new(
        region.width,
        region.height,
        channels,
        img.maxval(),
        samples,
    )?)
}

/// Rebuilds a full image from `(region, piece)` pairs. The regions must
/// tile `dims` exactly once; piece order does not affect the output.
pub fn reassemble(dims: Dims, pieces: &[(BlockRegion, Image)]) -> Result<Image, PartitionError> {
    let (first_region, first) = pieces.first().ok_or(PartitionError::Empty)?;
    let channels = first.channels();
    let maxval = first.maxval();
    let _ = first_region;

    let mut samples = vec![0u16; dims.area() * channels];
    let mut covered = vec![false; dims.area()];
    for (region, piece) in pieces {
        if piece.channels() != channels || piece.maxval() != maxval {
            return Err(PartitionError::PieceFormatMismatch {
                grid_row: region.grid_row,
                grid_col: region.grid_col,
                channels: piece.channels(),
                maxval: piece.maxval(),
                expected_channels: channels,
                expected_maxval: maxval,
            });
        }
        if region.x0 + region.width > dims.width || region.y0 + region.height > dims.height {
            return Err(PartitionError::OutOfBounds {
                grid_row: region.grid_row,
                grid_col: region.grid_col,
                x0: region.x0,
                y0: region.y0,
                width: region.width,
                height: region.height,
                dims,
            });
        }
        if piece.width() != region.width || piece.height() != region.height {
            return Err(PartitionError::PieceSizeMismatch {
                grid_row: region.grid_row,
                grid_col: region.grid_col,
                width: region.width,
                height: region.height,
                actual_width: piece.width(),
                actual_height: piece.height(),
            });
        }
        for y in 0..region.height {
            let row = region.y0 + y;
            for x in 0..region.width {
                let idx = row * dims.width + region.x0 + x;
                if covered[idx] {
                    return Err(PartitionError::Overlap {
                        x: region.x0 + x,
                        y: row,
                        grid_row: region.grid_row,
                        grid_col: region.grid_col,
                    });
                }
                covered[idx] = true;
            }
            let dst = (row * dims.width + region.x0) * channels;
            let src = y * region.width * channels;
            samples[dst..dst + region.width * channels]
                .copy_from_slice(&piece.samples()[src..src + region.width * channels]);
        }
    }
    if let Some(idx) = covered.iter().position(|&c| !c) {
        return Err(PartitionError::Incomplete {
            x: idx % dims.width,
            y: idx / dims.width,
        });
    }
    Ok(Image::new(dims.width, dims.height, channels, maxval, samples)?)
}
