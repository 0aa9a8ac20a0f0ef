//! The clustering kernel: k-means++ initialization with a pinned
//! generator, Lloyd iteration with deterministic empty-cluster repair,
//! centroid canonicalization, and cluster-map rendering.
//!
//! Every step is a pure function of its inputs. Equal inputs give
//! bit-equal models, so independently clustered image blocks can be
//! compared and merged without coordination.

use crate::image::{Dims, Image, ImageError};
use crate::rng::SplitMix64;
use thiserror::Error;

/// A nonempty set of equal-dimension points in channel space.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    data: Vec<f64>,
}

impl PointSet {
    /// `data` holds points back to back, `dim` values each.
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self, KMeansError> {
        if dim == 0 || data.is_empty() || !data.len().is_multiple_of(dim) {
            return Err(KMeansError::EmptyPointSet {
                dim,
                values: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    /// Flattens an image into one point per pixel, row-major.
    pub fn from_image(img: &Image) -> Self {
        Self {
            dim: img.channels(),
            data: img.samples().iter().map(|&s| s as f64).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        false // nonempty by construction
    }

    #[inline]
    pub fn point(&self, index: usize) -> &[f64] {
        &self.data[index * self.dim..(index + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim)
    }
}

/// Clustering parameters. `tol` is the centroid-movement convergence
/// threshold in sample units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KMeansConfig {
    pub k: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
}

impl KMeansConfig {
    pub const DEFAULT_MAX_ITERS: usize = 100;
    pub const DEFAULT_TOL: f64 = 1e-4;

    pub fn new(k: usize, seed: u64) -> Self {
        Self {
            k,
            max_iters: Self::DEFAULT_MAX_ITERS,
            tol: Self::DEFAULT_TOL,
            seed,
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }
}

/// A fitted model: `centroids[labels[i]]` is the nearest centroid to
/// point `i` (ties resolved to the lowest index), and `inertia` is the
/// sum of squared distances under that assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct KMeansModel {
    pub centroids: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    pub inertia: f64,
    pub iterations: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KMeansError {
    #[error("point set must be nonempty with dim >= 1 (dim {dim}, {values} values)")]
    EmptyPointSet { dim: usize, values: usize },
    #[error("dimension mismatch: points have dim {point_dim}, centroid {index} has dim {centroid_dim}")]
    DimensionMismatch {
        point_dim: usize,
        index: usize,
        centroid_dim: usize,
    },
    #[error("no centroids supplied")]
    NoCentroids,
    #[error("labels length {labels} does not match {expected} pixels")]
    LabelLengthMismatch { labels: usize, expected: usize },
    #[error("label {label} at point {index} out of range for {k} centroids")]
    LabelRange { label: usize, index: usize, k: usize },
    #[error(transparent)]
    Image(#[from] ImageError),
}

#[inline]
fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

/// Index of the nearest centroid under squared Euclidean distance,
/// ties to the lowest index.
#[inline]
fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> usize {
    let mut best = 0;
    let mut best_d = dist2(point, &centroids[0]);
    for (j, c) in centroids.iter().enumerate().skip(1) {
        let d = dist2(point, c);
        if d < best_d {
            best_d = d;
            best = j;
        }
    }
    best
}

fn assign_and_inertia(ps: &PointSet, centroids: &[Vec<f64>]) -> (Vec<usize>, f64) {
    let mut labels = Vec::with_capacity(ps.len());
    let mut inertia = 0.0;
    for p in ps.iter() {
        let j = nearest(p, centroids);
        inertia += dist2(p, &centroids[j]);
        labels.push(j);
    }
    (labels, inertia)
}

fn check_dims(ps: &PointSet, centroids: &[Vec<f64>]) -> Result<(), KMeansError> {
    if centroids.is_empty() {
        return Err(KMeansError::NoCentroids);
    }
    for (index, c) in centroids.iter().enumerate() {
        if c.len() != ps.dim() {
            return Err(KMeansError::DimensionMismatch {
                point_dim: ps.dim(),
                index,
                centroid_dim: c.len(),
            });
        }
    }
    Ok(())
}

/// k-means++ seeding driven by SplitMix64.
///
/// The first centroid is the point at index `first output mod n`; each
/// subsequent centroid is sampled with probability proportional to the
/// squared distance to its nearest already-chosen centroid (one uniform
/// draw per centroid). When every point coincides with a chosen centroid
/// the weights are all zero; the lowest-index not-yet-chosen point is
/// taken instead, or point 0 if every index has been used.
pub fn init_kmeans_pp(ps: &PointSet, k: usize, seed: u64) -> Vec<Vec<f64>> {
    assert!(k >= 1, "k must be at least 1");
    let n = ps.len();
    let mut rng = SplitMix64::new(seed);

    let first = rng.next_below(n as u64) as usize;
    let mut chosen_indices = vec![first];
    let mut centroids = vec![ps.point(first).to_vec()];
    // Squared distance from each point to its nearest chosen centroid.
    let mut weights: Vec<f64> = ps.iter().map(|p| dist2(p, &centroids[0])).collect();

    while centroids.len() < k {
        let total: f64 = weights.iter().sum();
        let pick = if total > 0.0 {
            // Walk the cumulative weights; the draw is scale-free because
            // the target is `u * total`.
            let target = rng.next_f64() * total;
            let mut acc = 0.0;
            let mut pick = None;
            for (i, &w) in weights.iter().enumerate() {
                acc += w;
                if target < acc {
                    pick = Some(i);
                    break;
                }
            }
            // Rounding can leave the target at or past the final sum;
            // fall back to the last point with nonzero weight.
            pick.unwrap_or_else(|| weights.iter().rposition(|&w| w > 0.0).unwrap())
        } else {
            (0..n)
                .find(|i| !chosen_indices.contains(i))
                .unwrap_or(0)
        };
        chosen_indices.push(pick);
        let centroid = ps.point(pick).to_vec();
        for (i, w) in weights.iter_mut().enumerate() {
            let d = dist2(ps.point(i), &centroid);
            if d < *w {
                *w = d;
            }
        }
        centroids.push(centroid);
    }
    centroids
}

/// New centroids, labels, and inertia from one Lloyd iteration.
pub type LloydStep = (Vec<Vec<f64>>, Vec<usize>, f64);

/// One Lloyd iteration: assign points to their nearest centroid, move
/// each centroid to its cluster mean, then repair empty clusters by
/// relocating them to the point farthest from its assigned centroid
/// (ascending cluster index, ties to the lowest point index) and
/// reassigning once. Returns the new centroids, the labels in force, and
/// the inertia of that final assignment against the new centroids.
pub fn lloyd_step(ps: &PointSet, centroids: &[Vec<f64>]) -> Result<LloydStep, KMeansError> {
    check_dims(ps, centroids)?;
    let k = centroids.len();
    let dim = ps.dim();

    let (mut labels, _) = assign_and_inertia(ps, centroids);

    // Per-cluster means in 64-bit accumulators.
    let mut sums = vec![0.0f64; k * dim];
    let mut counts = vec![0usize; k];
    for (i, p) in ps.iter().enumerate() {
        let j = labels[i];
        counts[j] += 1;
        for (d, &v) in p.iter().enumerate() {
            sums[j * dim + d] += v;
        }
    }
    let mut next: Vec<Vec<f64>> = (0..k)
        .map(|j| {
            if counts[j] > 0 {
                (0..dim).map(|d| sums[j * dim + d] / counts[j] as f64).collect()
            } else {
                centroids[j].clone() // placeholder until repaired below
            }
        })
        .collect();

    let mut repaired = false;
    for j in 0..k {
        if counts[j] > 0 {
            continue;
        }
        // Farthest point from its currently assigned centroid. Points that
        // already became repair targets sit at distance 0 and are never
        // picked again while any displaced point remains.
        let mut far_i = 0;
        let mut far_d = -1.0;
        for (i, p) in ps.iter().enumerate() {
            let d = dist2(p, &next[labels[i]]);
            if d > far_d {
                far_d = d;
                far_i = i;
            }
        }
        next[j] = ps.point(far_i).to_vec();
        labels[far_i] = j;
        repaired = true;
    }

    let (labels, inertia) = if repaired {
        assign_and_inertia(ps, &next)
    } else {
        let inertia = ps
            .iter()
            .zip(&labels)
            .map(|(p, &j)| dist2(p, &next[j]))
            .sum();
        (labels, inertia)
    };
    Ok((next, labels, inertia))
}

/// Runs seeded k-means++ followed by Lloyd iterations until the largest
/// centroid movement drops below `cfg.tol`, the labels stop changing, or
/// `cfg.max_iters` is reached. The returned model is canonicalized and a
/// pure function of `(ps, cfg)`.
pub fn run_kmeans(ps: &PointSet, cfg: &KMeansConfig) -> Result<KMeansModel, KMeansError> {
    run_kmeans_traced(ps, cfg).map(|(model, _)| model)
}

/// [`run_kmeans`] that also returns the inertia recorded after each Lloyd
/// iteration (a non-increasing sequence).
pub fn run_kmeans_traced(
    ps: &PointSet,
    cfg: &KMeansConfig,
) -> Result<(KMeansModel, Vec<f64>), KMeansError> {
    assert!(cfg.k >= 1, "k must be at least 1");
    assert!(cfg.max_iters >= 1, "max_iters must be at least 1");

    let mut centroids = init_kmeans_pp(ps, cfg.k, cfg.seed);
    let mut prev_labels: Option<Vec<usize>> = None;
    let mut trace = Vec::new();
    let mut iterations = 0;
    loop {
        let (next, labels, inertia) = lloyd_step(ps, &centroids)?;
        iterations += 1;
        trace.push(inertia);
        let movement = centroids
            .iter()
            .zip(&next)
            .map(|(a, b)| dist2(a, b).sqrt())
            .fold(0.0f64, f64::max);
        let labels_stable = prev_labels.as_deref() == Some(&labels[..]);
        centroids = next;
        prev_labels = Some(labels);
        if movement < cfg.tol || labels_stable || iterations >= cfg.max_iters {
            break;
        }
    }

    // Final assignment so the model invariant (labels point at the nearest
    // centroid) holds regardless of which stop condition fired.
    let (labels, inertia) = assign_and_inertia(ps, &centroids);
    let model = canonicalize(KMeansModel {
        centroids,
        labels,
        inertia,
        iterations,
    });
    Ok((model, trace))
}

/// Reorders centroids ascending by (component mean, then lexicographic
/// components) and remaps labels to match. Idempotent; assignments and
/// inertia are unchanged. This gives independently fitted models a
/// comparable label space.
pub fn canonicalize(model: KMeansModel) -> KMeansModel {
    let KMeansModel {
        centroids,
        mut labels,
        inertia,
        iterations,
    } = model;

    let mut order: Vec<usize> = (0..centroids.len()).collect();
    order.sort_by(|&a, &b| {
        let ca = &centroids[a];
        let cb = &centroids[b];
        let mean_a = ca.iter().sum::<f64>() / ca.len() as f64;
        let mean_b = cb.iter().sum::<f64>() / cb.len() as f64;
        mean_a.total_cmp(&mean_b).then_with(|| {
            ca.iter()
                .zip(cb)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    });

    let mut new_index = vec![0usize; order.len()];
    for (new_pos, &old) in order.iter().enumerate() {
        new_index[old] = new_pos;
    }
    let centroids: Vec<Vec<f64>> = order.iter().map(|&old| centroids[old].clone()).collect();
    for label in &mut labels {
        *label = new_index[*label];
    }
    KMeansModel {
        centroids,
        labels,
        inertia,
        iterations,
    }
}

/// Paints each pixel with its centroid's color, rounded half-up and
/// clamped to `[0, maxval]`. `labels` must hold one entry per pixel of
/// `dims`, in row-major order.
pub fn render(
    dims: Dims,
    labels: &[usize],
    centroids: &[Vec<f64>],
    maxval: u16,
) -> Result<Image, KMeansError> {
    if labels.len() != dims.area() {
        return Err(KMeansError::LabelLengthMismatch {
            labels: labels.len(),
            expected: dims.area(),
        });
    }
    if centroids.is_empty() {
        return Err(KMeansError::NoCentroids);
    }
    let channels = centroids[0].len();
    let rounded: Vec<Vec<u16>> = centroids
        .iter()
        .map(|c| {
            c.iter()
                .map(|&v| (v + 0.5).floor().clamp(0.0, maxval as f64) as u16)
                .collect()
        })
        .collect();
    let mut samples = Vec::with_capacity(labels.len() * channels);
    for (index, &label) in labels.iter().enumerate() {
        let color = rounded.get(label).ok_or(KMeansError::LabelRange {
            label,
            index,
            k: centroids.len(),
        })?;
        samples.extend_from_slice(color);
    }
    Ok(Image::new(dims.width, dims.height, channels, maxval, samples)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn points_1d(values: &[f64]) -> PointSet {
        PointSet::new(1, values.to_vec()).unwrap()
    }

    /// Exhaustive 2-partition oracle: the minimum inertia over every
    /// assignment of points to two clusters (empty side allowed).
    fn optimal_2partition_inertia(values: &[f64]) -> f64 {
        let n = values.len();
        let mut best = f64::INFINITY;
        for mask in 0..(1u32 << n) {
            let mut inertia = 0.0;
            for side in 0..2 {
                let members: Vec<f64> = (0..n)
                    .filter(|&i| (mask >> i) & 1 == side)
                    .map(|i| values[i])
                    .collect();
                if members.is_empty() {
                    continue;
                }
                let mean = members.iter().sum::<f64>() / members.len() as f64;
                inertia += members.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>();
            }
            if inertia < best {
                best = inertia;
            }
        }
        best
    }

    #[test]
    fn init_k1_is_generator_selected_point() {
        let ps = points_1d(&[5.0, 6.0, 7.0, 8.0]);
        for seed in 0..16 {
            let expected = SplitMix64::new(seed).next_u64() % 4;
            let centroids = init_kmeans_pp(&ps, 1, seed);
            assert_eq!(centroids, vec![vec![ps.point(expected as usize)[0]]]);
        }
    }

    #[test]
    fn init_identical_points_fall_back() {
        let ps = points_1d(&[3.0, 3.0, 3.0]);
        let centroids = init_kmeans_pp(&ps, 2, 9);
        assert_eq!(centroids, vec![vec![3.0], vec![3.0]]);
        // k beyond n keeps repeating point 0.
        let centroids = init_kmeans_pp(&ps, 5, 9);
        assert_eq!(centroids.len(), 5);
        assert!(centroids.iter().all(|c| c == &vec![3.0]));
    }

    #[test]
    fn init_second_centroid_lands_in_opposite_group() {
        // For {0, 0, 10, 10} the D^2 weights of the first centroid's own
        // group are zero, so the entire sampling CDF lies in the opposite
        // group; any uniform draw must land there.
        let ps = points_1d(&[0.0, 0.0, 10.0, 10.0]);
        for seed in 0..256 {
            let centroids = init_kmeans_pp(&ps, 2, seed);
            assert_ne!(
                centroids[0][0], centroids[1][0],
                "seed {seed} picked both centroids in one group"
            );
        }
    }

    #[test]
    fn lloyd_step_reference_case() {
        let ps = points_1d(&[10.0, 12.0, 40.0, 42.0]);
        let (next, labels, inertia) =
            lloyd_step(&ps, &[vec![10.0], vec![40.0]]).unwrap();
        assert_eq!(labels, vec![0, 0, 1, 1]);
        assert_eq!(next, vec![vec![11.0], vec![41.0]]);
        assert_eq!(inertia, 4.0);
        // The oracle confirms this is also the global optimum.
        assert_eq!(optimal_2partition_inertia(&[10.0, 12.0, 40.0, 42.0]), 4.0);
    }

    #[test]
    fn lloyd_step_fixed_point() {
        let ps = points_1d(&[10.0, 12.0, 40.0, 42.0]);
        let at_means = vec![vec![11.0], vec![41.0]];
        let (next, _, inertia) = lloyd_step(&ps, &at_means).unwrap();
        assert_eq!(next, at_means);
        assert_eq!(inertia, 4.0);
        let (next2, _, inertia2) = lloyd_step(&ps, &next).unwrap();
        assert_eq!(next2, next);
        assert_eq!(inertia2, inertia);
    }

    #[test]
    fn lloyd_step_repairs_empty_cluster() {
        let ps = points_1d(&[5.0, 5.0, 5.0]);
        let (next, labels, inertia) =
            lloyd_step(&ps, &[vec![5.0], vec![5.0]]).unwrap();
        assert_eq!(next, vec![vec![5.0], vec![5.0]]);
        assert_eq!(inertia, 0.0);
        // Post-repair reassignment resolves ties to the lowest index.
        assert!(labels.iter().all(|&l| l == 0));
    }

    #[test]
    fn lloyd_step_repair_relocates_to_farthest_point() {
        // Centroid 1 captures nothing; it must move to the point farthest
        // from its assigned mean, which is 100.0 (point index 3).
        let ps = points_1d(&[0.0, 1.0, 2.0, 100.0]);
        let (next, labels, _) = lloyd_step(&ps, &[vec![20.0], vec![500.0]]).unwrap();
        assert_eq!(next[1], vec![100.0]);
        assert_eq!(labels, vec![0, 0, 0, 1]);
    }

    #[test]
    fn lloyd_step_rejects_dimension_mismatch() {
        let ps = points_1d(&[1.0, 2.0]);
        assert_eq!(
            lloyd_step(&ps, &[vec![1.0, 2.0]]),
            Err(KMeansError::DimensionMismatch {
                point_dim: 1,
                index: 0,
                centroid_dim: 2
            })
        );
        assert_eq!(lloyd_step(&ps, &[]), Err(KMeansError::NoCentroids));
    }

    #[test]
    fn run_kmeans_separable_pairs_reach_optimum_for_every_seeding() {
        // All four possible first-centroid picks converge to {0, 10}.
        let ps = points_1d(&[0.0, 0.0, 10.0, 10.0]);
        for seed in 0..64 {
            let model = run_kmeans(&ps, &KMeansConfig::new(2, seed)).unwrap();
            assert_eq!(model.centroids, vec![vec![0.0], vec![10.0]]);
            assert_eq!(model.inertia, 0.0);
            assert_eq!(model.labels, vec![0, 0, 1, 1]);
        }
    }

    #[test]
    fn run_kmeans_k1_is_global_mean() {
        let values = [1.0, 2.0, 3.0, 4.0, 5.0, 9.0];
        let ps = points_1d(&values);
        let model = run_kmeans(&ps, &KMeansConfig::new(1, 77)).unwrap();
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        assert_eq!(model.centroids, vec![vec![mean]]);
        let expected: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
        assert!((model.inertia - expected).abs() <= 1e-9 * expected);
    }

    #[test]
    fn run_kmeans_k_at_least_distinct_points_zeroes_inertia() {
        let ps = points_1d(&[1.0, 4.0, 9.0]);
        for k in 3..=5 {
            let model = run_kmeans(&ps, &KMeansConfig::new(k, 5)).unwrap();
            assert_eq!(model.inertia, 0.0, "k={k}");
        }
    }

    #[test]
    fn canonicalize_sorts_and_remaps() {
        let model = KMeansModel {
            centroids: vec![vec![200.0], vec![10.0]],
            labels: vec![0, 1],
            inertia: 0.0,
            iterations: 1,
        };
        let canon = canonicalize(model);
        assert_eq!(canon.centroids, vec![vec![10.0], vec![200.0]]);
        assert_eq!(canon.labels, vec![1, 0]);

        let again = canonicalize(canon.clone());
        assert_eq!(again, canon);
    }

    #[test]
    fn canonicalize_breaks_mean_ties_lexicographically() {
        // Same component mean (30), different components.
        let model = KMeansModel {
            centroids: vec![vec![40.0, 20.0], vec![10.0, 50.0]],
            labels: vec![0, 1],
            inertia: 0.0,
            iterations: 1,
        };
        let canon = canonicalize(model);
        assert_eq!(canon.centroids, vec![vec![10.0, 50.0], vec![40.0, 20.0]]);
        assert_eq!(canon.labels, vec![1, 0]);
    }

    #[test]
    fn canonicalize_keeps_identical_centroids_stable() {
        let model = KMeansModel {
            centroids: vec![vec![5.0], vec![5.0]],
            labels: vec![0, 1, 0],
            inertia: 0.0,
            iterations: 1,
        };
        let canon = canonicalize(model);
        assert_eq!(canon.centroids, vec![vec![5.0], vec![5.0]]);
        assert_eq!(canon.labels, vec![0, 1, 0]);
    }

    #[test]
    fn render_rounds_half_up_and_reconstructs() {
        let dims = Dims::new(2, 1).unwrap();
        let img = render(dims, &[0, 1], &[vec![10.5], vec![0.4]], 255).unwrap();
        assert_eq!(img.samples(), &[11, 0]);

        // Centroids exactly on the source values reproduce the source.
        let source = Image::new(2, 2, 1, 255, vec![0, 10, 10, 0]).unwrap();
        let ps = PointSet::from_image(&source);
        let model = run_kmeans(&ps, &KMeansConfig::new(2, 3)).unwrap();
        let rendered = render(source.dims(), &model.labels, &model.centroids, 255).unwrap();
        assert_eq!(rendered, source);
    }

    #[test]
    fn render_validates_lengths() {
        let dims = Dims::new(2, 2).unwrap();
        assert_eq!(
            render(dims, &[0, 0], &[vec![1.0]], 255),
            Err(KMeansError::LabelLengthMismatch { labels: 2, expected: 4 })
        );
        assert!(matches!(
            render(dims, &[0, 0, 0, 9], &[vec![1.0]], 255),
            Err(KMeansError::LabelRange { label: 9, index: 3, .. })
        ));
    }

    #[test]
    fn small_sets_meet_exhaustive_oracle() {
        // Random small 1-D sets: final inertia never beats the exhaustive
        // optimum, and matches it when the set is well separated.
        let mut rng = SplitMix64::new(2024);
        for case in 0..200 {
            let n = 2 + (rng.next_below(7)) as usize;
            let values: Vec<f64> = (0..n)
                .map(|_| {
                    let group = rng.next_below(2);
                    let offset = rng.next_below(2) as f64;
                    group as f64 * 50.0 + offset
                })
                .collect();
            let ps = points_1d(&values);
            let model = run_kmeans(&ps, &KMeansConfig::new(2, case)).unwrap();
            let best = optimal_2partition_inertia(&values);
            assert!(
                model.inertia >= best - 1e-9,
                "case {case}: inertia {} below optimum {best}",
                model.inertia
            );
            let has_both = values.iter().any(|&v| v < 25.0) && values.iter().any(|&v| v > 25.0);
            if has_both {
                assert!(
                    (model.inertia - best).abs() <= 1e-9 * best.max(1.0),
                    "case {case}: separable set missed optimum ({} vs {best})",
                    model.inertia
                );
            }
        }
    }

    fn arb_pointset() -> impl Strategy<Value = PointSet> {
        (1usize..=3, 1usize..=24).prop_flat_map(|(dim, n)| {
            proptest::collection::vec(0.0f64..256.0, dim * n)
                .prop_map(move |data| PointSet::new(dim, data).unwrap())
        })
    }

    proptest! {
        #[test]
        fn run_is_deterministic(ps in arb_pointset(), k in 1usize..=4, seed: u64) {
            let cfg = KMeansConfig::new(k, seed);
            let a = run_kmeans(&ps, &cfg).unwrap();
            let b = run_kmeans(&ps, &cfg).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn inertia_is_non_increasing_and_labels_are_argmin(
            ps in arb_pointset(), k in 1usize..=4, seed: u64,
        ) {
            let cfg = KMeansConfig::new(k, seed);
            let (model, trace) = run_kmeans_traced(&ps, &cfg).unwrap();
            for pair in trace.windows(2) {
                prop_assert!(pair[1] <= pair[0] + 1e-9, "trace increased: {:?}", pair);
            }
            if let Some(&last) = trace.last() {
                prop_assert!(model.inertia <= last + 1e-9);
            }
            // Every label indexes the argmin-distance centroid (tie rule:
            // lowest index wins).
            let mut recomputed = 0.0;
            for (i, p) in ps.iter().enumerate() {
                let nearest = super::nearest(p, &model.centroids);
                prop_assert_eq!(model.labels[i], nearest);
                recomputed += dist2(p, &model.centroids[nearest]);
            }
            let scale = recomputed.max(1.0);
            prop_assert!((model.inertia - recomputed).abs() <= 1e-9 * scale);
        }

        #[test]
        fn scaling_points_scales_centroids(
            ps in arb_pointset(), k in 1usize..=4, seed: u64,
            scale in prop_oneof![Just(0.5f64), Just(2.0), Just(4.0)],
        ) {
            // Power-of-two scales are exact in binary floating point, and
            // the D^2 sampling path is scale-free, so the result scales
            // bit-exactly.
            let cfg = KMeansConfig { tol: 0.0, ..KMeansConfig::new(k, seed) };
            let scaled = PointSet::new(
                ps.dim(),
                ps.iter().flatten().map(|&v| v * scale).collect(),
            ).unwrap();
            let base = run_kmeans(&ps, &cfg).unwrap();
            let scaled_model = run_kmeans(&scaled, &cfg).unwrap();
            prop_assert_eq!(&scaled_model.labels, &base.labels);
            for (a, b) in base.centroids.iter().zip(&scaled_model.centroids) {
                for (x, y) in a.iter().zip(b) {
                    prop_assert_eq!(x * scale, *y);
                }
            }
        }
    }
}
