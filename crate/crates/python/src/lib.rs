//! Python bindings: exposes the image type, the three clustering modes,
//! the block-grid arithmetic, and the speedup/efficiency metrics as the
//! `blockmeans_py` extension module. Heavy calls release the GIL.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;

use blockmeans::image::{decode_pnm, encode_pnm, generate_synthetic, Dims};
use blockmeans::kmeans::KMeansConfig;
use blockmeans::partition::{compute_grid, derive_block_shape, Strategy, StrategyKind};
use blockmeans::runtime::{run_block_parallel, run_block_serial, run_whole_image_serial};
use blockmeans::{bench, Error};

fn runtime_err(err: Error) -> PyErr {
    PyRuntimeError::new_err(err.to_string())
}

fn parse_strategy(name: &str, extent: Option<usize>) -> PyResult<Strategy> {
    let kind = match name {
        "row" => StrategyKind::RowShaped,
        "column" => StrategyKind::ColumnShaped,
        "square" => StrategyKind::Square,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown strategy {other:?}: expected 'row', 'column', or 'square'"
            )))
        }
    };
    let extent = extent.unwrap_or(kind.default_extent());
    if extent == 0 {
        return Err(PyValueError::new_err("extent must be at least 1"));
    }
    Ok(Strategy::new(kind, extent))
}

/// A raster image with 1 or 3 channels and 8- or 16-bit samples.
#[pyclass(name = "Image", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyImage {
    inner: blockmeans::Image,
}

#[pymethods]
impl PyImage {
    /// Decode a binary P5/P6 image from bytes.
    #[staticmethod]
    fn decode(data: &[u8]) -> PyResult<Self> {
        decode_pnm(data)
            .map(|inner| Self { inner })
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    /// Read and decode a binary P5/P6 file.
    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let bytes = std::fs::read(path)?;
        Self::decode(&bytes)
    }

    /// Generate a deterministic synthetic test image (see the CLI `gen`
    /// subcommand for the same operation).
    #[staticmethod]
    #[pyo3(signature = (width, height, channels=3, regions=4, noise=0, seed=42))]
    fn generate(
        width: usize,
        height: usize,
        channels: usize,
        regions: usize,
        noise: u16,
        seed: u64,
    ) -> PyResult<Self> {
        let dims = Dims::new(width, height).map_err(|e| PyValueError::new_err(e.to_string()))?;
        generate_synthetic(dims, channels, regions, noise, seed)
            .map(|inner| Self { inner })
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    /// Encode as binary P5/P6 bytes.
    fn encode<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &encode_pnm(&self.inner))
    }

    /// Encode and write to a file.
    fn save(&self, path: &str) -> PyResult<()> {
        std::fs::write(path, encode_pnm(&self.inner))?;
        Ok(())
    }

    #[getter]
    fn width(&self) -> usize {
        self.inner.width()
    }

    #[getter]
    fn height(&self) -> usize {
        self.inner.height()
    }

    #[getter]
    fn channels(&self) -> usize {
        self.inner.channels()
    }

    #[getter]
    fn maxval(&self) -> u16 {
        self.inner.maxval()
    }

    /// All samples, row-major with interleaved channels.
    fn samples(&self) -> Vec<u16> {
        self.inner.samples().to_vec()
    }

    fn __eq__(&self, other: &Bound<'_, PyAny>) -> bool {
        other
            .extract::<PyRef<'_, PyImage>>()
            .map(|o| o.inner == self.inner)
            .unwrap_or(false)
    }

    fn __repr__(&self) -> String {
        format!(
            "Image({}x{}, channels={}, maxval={})",
            self.inner.width(),
            self.inner.height(),
            self.inner.channels(),
            self.inner.maxval()
        )
    }
}

/// The outcome of one clustering run.
#[pyclass(name = "ClusterResult", frozen)]
struct PyClusterResult {
    #[pyo3(get)]
    output: PyImage,
    /// Wall-clock time of the compute phase in milliseconds.
    #[pyo3(get)]
    wall_ms: f64,
    /// Number of independently clustered blocks (0 for whole-image mode).
    #[pyo3(get)]
    block_count: usize,
}

#[pymethods]
impl PyClusterResult {
    fn __repr__(&self) -> String {
        format!(
            "ClusterResult(blocks={}, wall_ms={:.3})",
            self.block_count, self.wall_ms
        )
    }
}

/// Cluster an image in one of the three modes: "whole" (one k-means over
/// every pixel), "block-serial", or "block-parallel" (bounded worker
/// pool; output is identical to block-serial for any worker count).
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (img, k, mode="block-parallel", strategy="square", extent=None, workers=None, seed=42))]
fn cluster(
    py: Python<'_>,
    img: &PyImage,
    k: usize,
    mode: &str,
    strategy: &str,
    extent: Option<usize>,
    workers: Option<usize>,
    seed: u64,
) -> PyResult<PyClusterResult> {
    if k == 0 {
        return Err(PyValueError::new_err("k must be at least 1"));
    }
    let strategy = parse_strategy(strategy, extent)?;
    let workers = workers.unwrap_or_else(|| {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    });
    if workers == 0 {
        return Err(PyValueError::new_err("workers must be at least 1"));
    }
    let cfg = KMeansConfig::new(k, seed);
    let image = &img.inner;
    let result = match mode {
        "whole" => py.detach(|| run_whole_image_serial(image, &cfg)),
        "block-serial" => py.detach(|| run_block_serial(image, strategy, &cfg)),
        "block-parallel" => {
            py.detach(|| run_block_parallel(image, strategy, workers, &cfg))
        }
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown mode {other:?}: expected 'whole', 'block-serial', or 'block-parallel'"
            )))
        }
    }
    .map_err(runtime_err)?;
    Ok(PyClusterResult {
        output: PyImage { inner: result.output },
        wall_ms: result.wall_ms,
        block_count: result.block_models.len(),
    })
}

/// Run the strategy x k x workers benchmark matrix and return the CSV
/// text (same format as the CLI `bench` subcommand).
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (img, strategies=None, ks=None, workers=None, extent=None, reps=3, seed=42))]
fn bench_csv(
    py: Python<'_>,
    img: &PyImage,
    strategies: Option<Vec<String>>,
    ks: Option<Vec<usize>>,
    workers: Option<Vec<usize>>,
    extent: Option<usize>,
    reps: usize,
    seed: u64,
) -> PyResult<String> {
    let names = strategies.unwrap_or_else(|| {
        vec!["row".to_string(), "column".to_string(), "square".to_string()]
    });
    let strategies: Vec<Strategy> = names
        .iter()
        .map(|name| parse_strategy(name, extent))
        .collect::<PyResult<_>>()?;
    let ks = ks.unwrap_or_else(|| vec![2, 4]);
    let workers = workers.unwrap_or_else(|| vec![2, 4, 8]);
    let cfg = KMeansConfig::new(ks.first().copied().unwrap_or(2), seed);
    let image = &img.inner;
    let records = py
        .detach(|| bench::run_benchmark(image, &strategies, &ks, &workers, &cfg, reps))
        .map_err(runtime_err)?;
    Ok(bench::write_csv(&records))
}

/// Serial wall time divided by parallel wall time.
#[pyfunction]
fn speedup(serial_ms: f64, parallel_ms: f64) -> PyResult<f64> {
    blockmeans::speedup(serial_ms, parallel_ms).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Speedup divided by worker count.
#[pyfunction]
fn efficiency(speedup: f64, workers: usize) -> PyResult<f64> {
    blockmeans::efficiency(speedup, workers).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// The k-means seed used for the block at (grid_row, grid_col).
#[pyfunction]
fn block_seed(seed: u64, grid_row: usize, grid_col: usize, grid_cols: usize) -> u64 {
    blockmeans::block_seed(seed, grid_row, grid_col, grid_cols)
}

/// Resolve a strategy against image dimensions: returns
/// (grid_rows, grid_cols, block_rows, block_cols).
#[pyfunction]
#[pyo3(signature = (width, height, strategy, extent=None))]
fn block_grid(
    width: usize,
    height: usize,
    strategy: &str,
    extent: Option<usize>,
) -> PyResult<(usize, usize, usize, usize)> {
    let dims = Dims::new(width, height).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let shape = derive_block_shape(parse_strategy(strategy, extent)?, dims);
    let grid = compute_grid(dims, shape);
    Ok((grid.grid_rows, grid.grid_cols, shape.rows, shape.cols))
}

#[pymodule]
fn blockmeans_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyImage>()?;
    m.add_class::<PyClusterResult>()?;
    m.add_function(wrap_pyfunction!(cluster, m)?)?;
    m.add_function(wrap_pyfunction!(bench_csv, m)?)?;
    m.add_function(wrap_pyfunction!(speedup, m)?)?;
    m.add_function(wrap_pyfunction!(efficiency, m)?)?;
    m.add_function(wrap_pyfunction!(block_seed, m)?)?;
    m.add_function(wrap_pyfunction!(block_grid, m)?)?;
    Ok(())
}
