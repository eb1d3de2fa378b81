#![allow(dead_code)]

use easytl::{AnnotationProblem, LabeledDataset, Matrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `C ∈ [1, 4]`, `n_t ∈ [C, 8]`, costs uniform in `[0, 1)`.
pub fn random_problem(rng: &mut ChaCha8Rng) -> AnnotationProblem<f64> {
    let classes = rng.random_range(1..=4);
    let targets = rng.random_range(classes..=8);
    let data = (0..classes * targets)
        .map(|_| rng.random::<f64>())
        .collect();
    AnnotationProblem::new(Matrix::new(classes, targets, data).unwrap()).unwrap()
}

/// `B Bᵀ` for a Gaussian `B`, which is SPD with probability one.
pub fn random_spd(rng: &mut ChaCha8Rng, n: usize) -> Matrix<f64> {
    let data = (0..n * n).map(|_| StandardNormal.sample(rng)).collect();
    let b = Matrix::new(n, n, data).unwrap();
    b.matmul(&b.transpose()).unwrap()
}

pub fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, scale: f64) -> Matrix<f64> {
    let normal = Normal::new(0.0, scale).unwrap();
    Matrix::new(
        rows,
        cols,
        (0..rows * cols).map(|_| normal.sample(rng)).collect(),
    )
    .unwrap()
}

/// Gaussian blobs, one per class, with `per_class` samples each. Every class
/// is present.
pub fn blobs(
    rng: &mut ChaCha8Rng,
    centers: &[Vec<f64>],
    per_class: usize,
    spread: f64,
) -> LabeledDataset<f64> {
    let d = centers[0].len();
    let normal = Normal::new(0.0, spread).unwrap();
    let mut data = Vec::new();
    let mut labels = Vec::new();
    for (c, center) in centers.iter().enumerate() {
        for _ in 0..per_class {
            data.extend(center.iter().map(|&m| m + normal.sample(rng)));
            labels.push(c);
        }
    }
    LabeledDataset::new(
        Matrix::new(labels.len(), d, data).unwrap(),
        labels,
        centers.len(),
    )
    .unwrap()
}

/// Seeded two-class 2-D shift task.
///
/// Source: classes at (−3, 0) and (3, 0) with isotropic spread 2, so the
/// classes overlap and a few source points sit inside the other class.
/// Target: the same class means moved by (0, 4), spread shrunk to 0.5.
pub struct ShiftTask {
    pub source: LabeledDataset<f64>,
    pub target: LabeledDataset<f64>,
}

pub const SHIFT_SEED: u64 = 1;
pub const SHIFT_PER_CLASS: usize = 60;

pub fn synthetic_shift(seed: u64) -> ShiftTask {
    let mut rng = rng(seed);
    let source = blobs(
        &mut rng,
        &[vec![-3.0, 0.0], vec![3.0, 0.0]],
        SHIFT_PER_CLASS,
        2.0,
    );
    let target = blobs(
        &mut rng,
        &[vec![-3.0, 4.0], vec![3.0, 4.0]],
        SHIFT_PER_CLASS,
        0.5,
    );
    ShiftTask { source, target }
}

pub fn accuracy(pred: &[usize], truth: &[usize]) -> f64 {
    assert_eq!(pred.len(), truth.len());
    pred.iter().zip(truth).filter(|(a, b)| a == b).count() as f64 / truth.len() as f64
}

/// Exhaustive nearest-row scan, independent of the library's 1-NN.
pub fn nearest_row_oracle(src: &Matrix<f64>, x: &[f64]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for i in 0..src.rows() {
        let d: f64 = src.row(i).iter().zip(x).map(|(a, b)| (a - b).powi(2)).sum();
        if d < best_d {
            best = i;
            best_d = d;
        }
    }
    best
}

pub fn fixtures_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub const SHIFT_CLASS_NAMES: [&str; 2] = ["left", "right"];

pub fn write_labeled_csv(path: &std::path::Path, ds: &LabeledDataset<f64>, names: &[&str]) {
    let mut s = String::new();
    let d = ds.features.cols();
    for j in 0..d {
        s.push_str(&format!("x{j},"));
    }
    s.push_str("label\n");
    for (row, &l) in ds.features.iter_rows().zip(&ds.labels) {
        for v in row {
            s.push_str(&format!("{v},"));
        }
        s.push_str(names[l]);
        s.push('\n');
    }
    std::fs::write(path, s).unwrap();
}

pub fn write_label_csv(path: &std::path::Path, labels: &[usize], names: &[&str]) {
    let mut s = String::from("label\n");
    for &l in labels {
        s.push_str(names[l]);
        s.push('\n');
    }
    std::fs::write(path, s).unwrap();
}
