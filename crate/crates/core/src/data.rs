//! Dataset ingestion: IDX files (the MNIST container), average-pool
//! downsampling, balanced binary subsets, and a synthetic two-Gaussian
//! generator for hermetic runs.
//!
//! MNIST is never downloaded; files are found under an explicit directory or
//! the `QBIAS_DATA_DIR` environment variable, using the conventional names.

use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::rng;

pub const IDX_IMAGE_MAGIC: u32 = 0x0000_0803;
pub const IDX_LABEL_MAGIC: u32 = 0x0000_0801;

pub const MNIST_TRAIN_IMAGES: &str = "train-images-idx3-ubyte";
pub const MNIST_TRAIN_LABELS: &str = "train-labels-idx1-ubyte";
pub const MNIST_TEST_IMAGES: &str = "t10k-images-idx3-ubyte";
pub const MNIST_TEST_LABELS: &str = "t10k-labels-idx1-ubyte";

/// Environment variable consulted when no data directory is given.
pub const DATA_DIR_ENV: &str = "QBIAS_DATA_DIR";

/// Labeled feature matrix with entries in [0, 1] and labels in {-1, +1}.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<f64>,
    /// Where the data came from: file paths or generator parameters + seed.
    pub provenance: String,
}

impl Dataset {
    pub fn new(features: Vec<Vec<f64>>, labels: Vec<f64>, provenance: String) -> Result<Self> {
        if features.len() != labels.len() {
            return Err(Error::LengthMismatch {
                left: features.len(),
                right: labels.len(),
            });
        }
        for &label in &labels {
            if label != 1.0 && label != -1.0 {
                return Err(Error::BadLabel { found: label });
            }
        }
        for row in &features {
            for &x in row {
                if !(0.0..=1.0).contains(&x) {
                    return Err(Error::Domain {
                        what: "feature",
                        value: x,
                        domain: "[0, 1]",
                    });
                }
            }
        }
        Ok(Self {
            features,
            labels,
            provenance,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn num_features(&self) -> usize {
        self.features.first().map_or(0, Vec::len)
    }

    /// Fraction held by the most common label.
    pub fn majority_rate(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        let pos = self.labels.iter().filter(|&&l| l == 1.0).count();
        let neg = self.len() - pos;
        pos.max(neg) as f64 / self.len() as f64
    }
}

/// Parse an IDX byte buffer into (shape, raw payload).
///
/// Accepted magics: 0x00000803 (3-D u8 image tensor) and 0x00000801 (1-D u8
/// label vector). The payload length must match the shape product exactly.
pub fn parse_idx(bytes: &[u8]) -> Result<(Vec<usize>, Vec<u8>)> {
    if bytes.len() < 4 {
        return Err(Error::IdxLength {
            expected: 4,
            got: bytes.len(),
        });
    }
    let magic = u32::from_be_bytes([bytes[0], bytes[1], bytes[2], bytes[3]]);
    let ndim = match magic {
        IDX_IMAGE_MAGIC => 3,
        IDX_LABEL_MAGIC => 1,
        _ => return Err(Error::IdxMagic { magic }),
    };
    let header = 4 + 4 * ndim;
    if bytes.len() < header {
        return Err(Error::IdxLength {
            expected: header,
            got: bytes.len(),
        });
    }
    let mut shape = Vec::with_capacity(ndim);
    for d in 0..ndim {
        let off = 4 + 4 * d;
        shape.push(u32::from_be_bytes([
            bytes[off],
            bytes[off + 1],
            bytes[off + 2],
            bytes[off + 3],
        ]) as usize);
    }
    let expected: usize = shape.iter().product();
    let payload = &bytes[header..];
    if payload.len() != expected {
        return Err(Error::IdxLength {
            expected,
            got: payload.len(),
        });
    }
    Ok((shape, payload.to_vec()))
}

/// Read and parse an IDX file from disk.
pub fn load_idx(path: &Path) -> Result<(Vec<usize>, Vec<u8>)> {
    let bytes = std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_idx(&bytes)
}

/// Serialize a u8 tensor into IDX bytes; the magic follows from the rank
/// (3 dims -> image magic, 1 dim -> label magic).
pub fn encode_idx(shape: &[usize], data: &[u8]) -> Result<Vec<u8>> {
    let magic = match shape.len() {
        3 => IDX_IMAGE_MAGIC,
        1 => IDX_LABEL_MAGIC,
        n => {
            return Err(Error::IdxMagic {
                magic: 0x0800 | n as u32,
            })
        }
    };
    let expected: usize = shape.iter().product();
    if data.len() != expected {
        return Err(Error::IdxLength {
            expected,
            got: data.len(),
        });
    }
    let mut out = Vec::with_capacity(4 + 4 * shape.len() + data.len());
    out.extend_from_slice(&magic.to_be_bytes());
    for &dim in shape {
        out.extend_from_slice(&(dim as u32).to_be_bytes());
    }
    out.extend_from_slice(data);
    Ok(out)
}

/// Mean-pool a square u8 image over block×block tiles (row-major tile
/// order), rescaled by 255 into [0, 1].
pub fn avg_pool(image: &[u8], side: usize, block: usize) -> Result<Vec<f64>> {
    if block == 0 || !side.is_multiple_of(block) {
        return Err(Error::BlockDivisor { side, block });
    }
    if image.len() != side * side {
        return Err(Error::LengthMismatch {
            left: image.len(),
            right: side * side,
        });
    }
    let tiles = side / block;
    let mut out = Vec::with_capacity(tiles * tiles);
    for ty in 0..tiles {
        for tx in 0..tiles {
            let mut sum = 0u64;
            for dy in 0..block {
                for dx in 0..block {
                    sum += image[(ty * block + dy) * side + (tx * block + dx)] as u64;
                }
            }
            out.push(sum as f64 / (block * block) as f64 / 255.0);
        }
    }
    Ok(out)
}

/// Balanced two-class subset: `n_per_class` samples of each digit, picked by
/// a seeded per-class shuffle; `class_a` maps to +1 and `class_b` to -1.
pub fn make_binary_subset(
    features: &[Vec<f64>],
    labels: &[u8],
    class_a: u8,
    class_b: u8,
    n_per_class: usize,
    seed: u64,
) -> Result<Dataset> {
    if features.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: features.len(),
            right: labels.len(),
        });
    }
    let mut out_features = Vec::with_capacity(2 * n_per_class);
    let mut out_labels = Vec::with_capacity(2 * n_per_class);
    for (stream, (class, label)) in [(class_a, 1.0), (class_b, -1.0)].iter().enumerate() {
        let mut indices: Vec<usize> = labels
            .iter()
            .enumerate()
            .filter_map(|(i, &l)| (l == *class).then_some(i))
            .collect();
        if indices.len() < n_per_class {
            return Err(Error::InsufficientClass {
                class: *class,
                available: indices.len(),
                needed: n_per_class,
            });
        }
        indices.shuffle(&mut rng::substream(seed, stream as u64));
        for &i in &indices[..n_per_class] {
            out_features.push(features[i].clone());
            out_labels.push(*label);
        }
    }
    Dataset::new(
        out_features,
        out_labels,
        format!(
            "binary_subset(class_a={class_a}, class_b={class_b}, n_per_class={n_per_class}, seed={seed})"
        ),
    )
}

/// Two isotropic Gaussian clumps in [0, 1]^dim: class +1 centered at
/// 0.5 + separation/4 per coordinate, class -1 mirrored at 0.5 - separation/4,
/// sigma 0.1, clamped into range.
pub fn synthetic_gaussians(n_per_class: usize, dim: usize, separation: f64, seed: u64) -> Dataset {
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let mut gen = rng::substream(seed, 0);
    let mut features = Vec::with_capacity(2 * n_per_class);
    let mut labels = Vec::with_capacity(2 * n_per_class);
    for (mu, label) in [(0.5 + separation / 4.0, 1.0), (0.5 - separation / 4.0, -1.0)] {
        for _ in 0..n_per_class {
            let row: Vec<f64> = (0..dim)
                .map(|_| (mu + 0.1 * normal.sample(&mut gen)).clamp(0.0, 1.0))
                .collect();
            features.push(row);
            labels.push(label);
        }
    }
    Dataset {
        features,
        labels,
        provenance: format!(
            "synthetic_gaussians(n_per_class={n_per_class}, dim={dim}, separation={separation}, seed={seed})"
        ),
    }
}

/// Uniform feature vectors in [0, 1]^dim from a seeded stream; used by the
/// kernel-concentration experiment.
pub fn uniform_features(m: usize, dim: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    (0..m)
        .map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn idx_label_vector_example() {
        let bytes = [0x00, 0x00, 0x08, 0x01, 0x00, 0x00, 0x00, 0x02, 0x07, 0x02];
        let (shape, data) = parse_idx(&bytes).unwrap();
        assert_eq!(shape, vec![2]);
        assert_eq!(data, vec![7, 2]);
    }

    #[test]
    fn idx_image_tensor_example() {
        let mut bytes = vec![0x00, 0x00, 0x08, 0x03];
        for dim in [1u32, 2, 2] {
            bytes.extend_from_slice(&dim.to_be_bytes());
        }
        bytes.extend_from_slice(&[0x00, 0xFF, 0x00, 0xFF]);
        let (shape, data) = parse_idx(&bytes).unwrap();
        assert_eq!(shape, vec![1, 2, 2]);
        assert_eq!(data, vec![0, 255, 0, 255]);
    }

    #[test]
    fn idx_bad_magic() {
        let bytes = [0x00, 0x00, 0x08, 0x99, 0x00, 0x00, 0x00, 0x00];
        assert!(matches!(
            parse_idx(&bytes),
            Err(Error::IdxMagic { magic: 0x0899 })
        ));
    }

    #[test]
    fn idx_truncated_and_oversized_payloads() {
        let short = [0x00, 0x00, 0x08, 0x01, 0x00, 0x00, 0x00, 0x05, 0x07];
        assert!(matches!(
            parse_idx(&short),
            Err(Error::IdxLength {
                expected: 5,
                got: 1
            })
        ));
        let long = [0x00, 0x00, 0x08, 0x01, 0x00, 0x00, 0x00, 0x01, 0x07, 0x09];
        assert!(matches!(parse_idx(&long), Err(Error::IdxLength { .. })));
        assert!(matches!(parse_idx(&[0x00]), Err(Error::IdxLength { .. })));
    }

    #[test]
    fn idx_round_trip() {
        let shape = [2usize, 3, 3];
        let data: Vec<u8> = (0..18).collect();
        let bytes = encode_idx(&shape, &data).unwrap();
        let (parsed_shape, parsed_data) = parse_idx(&bytes).unwrap();
        assert_eq!(parsed_shape, shape);
        assert_eq!(parsed_data, data);
    }

    #[test]
    fn avg_pool_constant_images() {
        let white = vec![255u8; 28 * 28];
        let pooled = avg_pool(&white, 28, 7).unwrap();
        assert_eq!(pooled, vec![1.0; 16]);

        let black = vec![0u8; 28 * 28];
        assert_eq!(avg_pool(&black, 28, 7).unwrap(), vec![0.0; 16]);
    }

    #[test]
    fn avg_pool_small_tile() {
        let pooled = avg_pool(&[0, 255, 0, 255], 2, 2).unwrap();
        assert_eq!(pooled, vec![0.5]);
    }

    #[test]
    fn avg_pool_tile_order_is_row_major() {
        // 4x4 image, block 2: tiles are (top-left, top-right, bottom-left, bottom-right)
        #[rustfmt::skip]
        let image = [
            255, 255,   0,   0,
            255, 255,   0,   0,
              0,   0, 255, 255,
              0,   0, 255, 255,
        ];
        assert_eq!(avg_pool(&image, 4, 2).unwrap(), vec![1.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn avg_pool_rejects_non_divisor() {
        let img = vec![0u8; 28 * 28];
        assert!(matches!(
            avg_pool(&img, 28, 5),
            Err(Error::BlockDivisor { side: 28, block: 5 })
        ));
    }

    #[test]
    fn binary_subset_basics() {
        let features = vec![vec![0.1]; 6];
        let labels = [0u8, 1, 0, 1, 0, 1];
        let ds = make_binary_subset(&features, &labels, 0, 1, 1, 9).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.labels, vec![1.0, -1.0]);
    }

    #[test]
    fn binary_subset_missing_class() {
        let features = vec![vec![0.1]; 3];
        let labels = [0u8, 0, 0];
        assert!(matches!(
            make_binary_subset(&features, &labels, 0, 7, 1, 9),
            Err(Error::InsufficientClass { class: 7, .. })
        ));
    }

    #[test]
    fn binary_subset_deterministic() {
        let features: Vec<Vec<f64>> = (0..40).map(|i| vec![i as f64 / 40.0]).collect();
        let labels: Vec<u8> = (0..40).map(|i| (i % 2) as u8).collect();
        let a = make_binary_subset(&features, &labels, 0, 1, 10, 3).unwrap();
        let b = make_binary_subset(&features, &labels, 0, 1, 10, 3).unwrap();
        assert_eq!(a, b);
        let c = make_binary_subset(&features, &labels, 0, 1, 10, 4).unwrap();
        assert_ne!(a.features, c.features);
    }

    #[test]
    fn synthetic_means_mirror_at_half() {
        let ds = synthetic_gaussians(400, 2, 0.0, 11);
        let mean_pos: f64 = ds.features[..400].iter().map(|r| r[0]).sum::<f64>() / 400.0;
        let mean_neg: f64 = ds.features[400..].iter().map(|r| r[0]).sum::<f64>() / 400.0;
        assert!((mean_pos - 0.5).abs() < 0.02, "mean {mean_pos}");
        assert!((mean_neg - 0.5).abs() < 0.02, "mean {mean_neg}");
    }

    #[test]
    fn synthetic_wide_separation_clamps_to_corners() {
        let ds = synthetic_gaussians(200, 3, 2.0, 5);
        let mean_pos: f64 =
            ds.features[..200].iter().map(|r| r[0]).sum::<f64>() / 200.0;
        let mean_neg: f64 =
            ds.features[200..].iter().map(|r| r[0]).sum::<f64>() / 200.0;
        assert!(mean_pos > 0.9);
        assert!(mean_neg < 0.1);
        for row in &ds.features {
            for &x in row {
                assert!((0.0..=1.0).contains(&x));
            }
        }
    }

    #[test]
    fn synthetic_deterministic_per_seed() {
        let a = synthetic_gaussians(10, 4, 1.0, 77);
        let b = synthetic_gaussians(10, 4, 1.0, 77);
        assert_eq!(a, b);
    }

    #[test]
    fn dataset_validation() {
        assert!(matches!(
            Dataset::new(vec![vec![0.5]], vec![0.0], String::new()),
            Err(Error::BadLabel { .. })
        ));
        assert!(matches!(
            Dataset::new(vec![vec![1.5]], vec![1.0], String::new()),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            Dataset::new(vec![vec![0.5]], vec![], String::new()),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn majority_rate_balanced_and_skewed() {
        let ds = Dataset::new(
            vec![vec![0.0]; 4],
            vec![1.0, 1.0, 1.0, -1.0],
            String::new(),
        )
        .unwrap();
        assert_eq!(ds.majority_rate(), 0.75);
    }
}
