//! End-to-end EasyTL: optional alignment followed by a classifier, plus the
//! two non-parametric baselines used for comparison.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::alignment::{Alignment, AlignmentKind, FeatureTransform, Role};
use crate::error::{Error, Result, Stage};
use crate::linalg::Matrix;
use crate::lp::AnnotationMatrix;
use crate::programming::{
    self, argmin_first, class_centers, distance_matrix, LabeledDataset, Prediction,
};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassifierKind {
    #[serde(rename = "easytl")]
    EasyTl,
    #[serde(rename = "1nn")]
    NearestNeighbor1,
    #[serde(rename = "centroid")]
    NearestCentroid,
}

/// `(None, EasyTl)` is the classifier alone; `(Coral, EasyTl)` is the full
/// method and the default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub alignment: AlignmentKind,
    pub classifier: ClassifierKind,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            alignment: AlignmentKind::Coral,
            classifier: ClassifierKind::EasyTl,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct StageTimings {
    pub alignment: Duration,
    pub classification: Duration,
}

pub fn run<T: Scalar>(
    cfg: PipelineConfig,
    src: &LabeledDataset<T>,
    target: &Matrix<T>,
) -> Result<Prediction<T>> {
    run_timed(cfg, src, target).map(|(p, _)| p)
}

pub fn run_timed<T: Scalar>(
    cfg: PipelineConfig,
    src: &LabeledDataset<T>,
    target: &Matrix<T>,
) -> Result<(Prediction<T>, StageTimings)> {
    check_dims(src, target).map_err(|e| e.in_stage(Stage::Alignment))?;
    let started = Instant::now();
    let transform = FeatureTransform::fit(cfg.alignment, &src.features, target)
        .map_err(|e| e.in_stage(Stage::Alignment))?;
    let alignment = started.elapsed();
    let (prediction, mut timings) = run_with(&transform, cfg.classifier, src, target)?;
    timings.alignment += alignment;
    Ok((prediction, timings))
}

/// Runs a classifier after an arbitrary fitted [`Alignment`]. This is the hook
/// for pairing the classifier with other feature-learning methods.
pub fn run_with<T: Scalar, A: Alignment<T> + ?Sized>(
    alignment: &A,
    classifier: ClassifierKind,
    src: &LabeledDataset<T>,
    target: &Matrix<T>,
) -> Result<(Prediction<T>, StageTimings)> {
    let started = Instant::now();
    let aligned_src = alignment
        .apply(&src.features, Role::Source)
        .and_then(|x| src.with_features(x))
        .map_err(|e| e.in_stage(Stage::Alignment))?;
    let aligned_tgt = alignment
        .apply(target, Role::Target)
        .map_err(|e| e.in_stage(Stage::Alignment))?;
    let alignment_time = started.elapsed();

    let started = Instant::now();
    let prediction = classify(classifier, &aligned_src, &aligned_tgt)
        .map_err(|e| e.in_stage(Stage::Classification))?;
    Ok((
        prediction,
        StageTimings {
            alignment: alignment_time,
            classification: started.elapsed(),
        },
    ))
}

pub fn classify<T: Scalar>(
    kind: ClassifierKind,
    src: &LabeledDataset<T>,
    target: &Matrix<T>,
) -> Result<Prediction<T>> {
    match kind {
        ClassifierKind::EasyTl => programming::classify(src, target),
        ClassifierKind::NearestNeighbor1 => nearest_neighbor_1(src, target),
        ClassifierKind::NearestCentroid => nearest_centroid(src, target),
    }
}

fn check_dims<T: Scalar>(src: &LabeledDataset<T>, target: &Matrix<T>) -> Result<()> {
    if src.dim() != target.cols() {
        return Err(Error::invalid(format!(
            "source has {} features, target has {}",
            src.dim(),
            target.cols()
        )));
    }
    Ok(())
}

fn squared_distance<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| (x - y) * (x - y)).sum()
}

fn one_hot<T: Scalar>(num_classes: usize, labels: &[usize], objective: T) -> AnnotationMatrix<T> {
    let mut values = Matrix::zeros(num_classes, labels.len());
    for (j, &c) in labels.iter().enumerate() {
        values[(c, j)] = T::one();
    }
    AnnotationMatrix { values, objective }
}

/// Labels each target with its closest source sample; the lowest source row
/// wins ties.
pub fn nearest_neighbor_1<T: Scalar>(
    src: &LabeledDataset<T>,
    target: &Matrix<T>,
) -> Result<Prediction<T>> {
    if src.is_empty() {
        return Err(Error::invalid("1-NN needs at least one source sample"));
    }
    check_dims(src, target)?;
    let mut objective = T::zero();
    let labels: Vec<usize> = target
        .iter_rows()
        .map(|x| {
            let mut best = (0, T::infinity());
            for (i, s) in src.features.iter_rows().enumerate() {
                let d = squared_distance(x, s);
                if d < best.1 {
                    best = (i, d);
                }
            }
            objective += best.1;
            src.labels[best.0]
        })
        .collect();
    Ok(Prediction {
        probabilities: one_hot(src.num_classes, &labels, objective),
        labels,
    })
}

/// Labels each target with its closest class center; the lowest class index
/// wins ties.
pub fn nearest_centroid<T: Scalar>(
    src: &LabeledDataset<T>,
    target: &Matrix<T>,
) -> Result<Prediction<T>> {
    let centers = class_centers(src)?;
    let d = distance_matrix(&centers, target)?;
    let mut objective = T::zero();
    let labels: Vec<usize> = (0..d.cols())
        .map(|j| {
            let c = argmin_first((0..d.rows()).map(|c| d[(c, j)])).unwrap_or(0);
            objective += d[(c, j)];
            c
        })
        .collect();
    Ok(Prediction {
        probabilities: one_hot(src.num_classes, &labels, objective),
        labels,
    })
}
