//! Intra-domain programming: the EasyTL classifier.
//!
//! Source class centers give a squared-distance cost matrix against the target
//! samples; the annotation LP then assigns every target to a class while
//! making sure each class receives at least one target.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::lp::{self, AnnotationMatrix, AnnotationProblem};
use crate::scalar::Scalar;

/// Source features with dense labels in `[0, num_classes)`.
#[derive(Debug, Clone)]
pub struct LabeledDataset<T> {
    pub features: Matrix<T>,
    pub labels: Vec<usize>,
    pub num_classes: usize,
}

impl<T: Scalar> LabeledDataset<T> {
    pub fn new(features: Matrix<T>, labels: Vec<usize>, num_classes: usize) -> Result<Self> {
        if labels.len() != features.rows() {
            return Err(Error::invalid(format!(
                "{} labels for {} samples",
                labels.len(),
                features.rows()
            )));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= num_classes) {
            return Err(Error::invalid(format!(
                "label {bad} out of range for {num_classes} classes"
            )));
        }
        Ok(LabeledDataset {
            features,
            labels,
            num_classes,
        })
    }

    /// Takes the class count as one more than the largest label.
    pub fn from_labels(features: Matrix<T>, labels: Vec<usize>) -> Result<Self> {
        let num_classes = labels.iter().max().map_or(0, |&m| m + 1);
        Self::new(features, labels, num_classes)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.features.cols()
    }

    /// Same labels over different (e.g. aligned) features.
    pub fn with_features(&self, features: Matrix<T>) -> Result<Self> {
        Self::new(features, self.labels.clone(), self.num_classes)
    }
}

#[derive(Debug, Clone)]
pub struct ClassCenters<T> {
    /// One row per class.
    pub centers: Matrix<T>,
    pub counts: Vec<usize>,
}

impl<T: Scalar> ClassCenters<T> {
    pub fn num_classes(&self) -> usize {
        self.centers.rows()
    }

    pub fn dim(&self) -> usize {
        self.centers.cols()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction<T> {
    pub labels: Vec<usize>,
    pub probabilities: AnnotationMatrix<T>,
}

/// Per-class mean of the source features.
pub fn class_centers<T: Scalar>(src: &LabeledDataset<T>) -> Result<ClassCenters<T>> {
    let (c, d) = (src.num_classes, src.dim());
    let mut centers = Matrix::zeros(c, d);
    let mut counts = vec![0usize; c];
    for (row, &label) in src.features.iter_rows().zip(&src.labels) {
        counts[label] += 1;
        for (acc, &v) in centers.row_mut(label).iter_mut().zip(row) {
            *acc += v;
        }
    }
    if let Some(class) = counts.iter().position(|&k| k == 0) {
        return Err(Error::MissingClass { class });
    }
    for (k, &count) in counts.iter().enumerate() {
        let inv = T::one() / T::from_count(count);
        for v in centers.row_mut(k) {
            *v *= inv;
        }
    }
    Ok(ClassCenters { centers, counts })
}

/// `D[c][j] = ‖target_j − center_c‖²`.
pub fn distance_matrix<T: Scalar>(
    centers: &ClassCenters<T>,
    target: &Matrix<T>,
) -> Result<Matrix<T>> {
    if target.cols() != centers.dim() {
        return Err(Error::invalid(format!(
            "target has {} features, centers have {}",
            target.cols(),
            centers.dim()
        )));
    }
    let mut d = Matrix::zeros(centers.num_classes(), target.rows());
    for c in 0..centers.num_classes() {
        let h = centers.centers.row(c);
        for (j, x) in target.iter_rows().enumerate() {
            d[(c, j)] = x.iter().zip(h).map(|(&a, &b)| (a - b) * (a - b)).sum();
        }
    }
    Ok(d)
}

/// Index of the largest entry; the first one wins ties.
pub fn argmax_first<T: Scalar>(values: impl IntoIterator<Item = T>) -> Option<usize> {
    let mut best: Option<(usize, T)> = None;
    for (i, v) in values.into_iter().enumerate() {
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((i, v));
        }
    }
    best.map(|(i, _)| i)
}

/// Index of the smallest entry; the first one wins ties.
pub fn argmin_first<T: Scalar>(values: impl IntoIterator<Item = T>) -> Option<usize> {
    argmax_first(values.into_iter().map(|v| -v))
}

/// Normalizes each column of `m` to sum to one, then labels each column with
/// its arg-max class.
pub fn labels_from_annotation<T: Scalar>(m: &mut AnnotationMatrix<T>) -> Vec<usize> {
    let values = &mut m.values;
    (0..values.cols())
        .map(|j| {
            let sum: T = (0..values.rows()).map(|c| values[(c, j)]).sum();
            if sum > T::zero() {
                for c in 0..values.rows() {
                    values[(c, j)] /= sum;
                }
            }
            argmax_first((0..values.rows()).map(|c| values[(c, j)])).unwrap_or(0)
        })
        .collect()
}

/// Runs the EasyTL classifier on already-aligned features.
pub fn classify<T: Scalar>(src: &LabeledDataset<T>, target: &Matrix<T>) -> Result<Prediction<T>> {
    let centers = class_centers(src)?;
    classify_with_centers(&centers, target)
}

pub fn classify_with_centers<T: Scalar>(
    centers: &ClassCenters<T>,
    target: &Matrix<T>,
) -> Result<Prediction<T>> {
    let costs = distance_matrix(centers, target)?;
    let problem = AnnotationProblem::new(costs)?;
    let mut probabilities = lp::solve(&problem)?;
    let labels = labels_from_annotation(&mut probabilities);
    Ok(Prediction {
        labels,
        probabilities,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[f64]]) -> Matrix<f64> {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn centers_are_class_means() {
        let src = LabeledDataset::new(
            mat(&[&[0.0, 0.0], &[2.0, 2.0], &[5.0, 5.0]]),
            vec![0, 0, 1],
            2,
        )
        .unwrap();
        let cc = class_centers(&src).unwrap();
        assert_eq!(cc.centers.as_slice(), &[1.0, 1.0, 5.0, 5.0]);
        assert_eq!(cc.counts, vec![2, 1]);
    }

    #[test]
    fn single_sample_and_identical_samples() {
        let src = LabeledDataset::new(mat(&[&[3.0, -1.0], &[7.0, 2.0]]), vec![1, 0], 2).unwrap();
        let cc = class_centers(&src).unwrap();
        assert_eq!(cc.centers.as_slice(), &[7.0, 2.0, 3.0, -1.0]);

        let src = LabeledDataset::new(Matrix::from_rows(&[[0.1, 0.2]; 3]).unwrap(), vec![0; 3], 1)
            .unwrap();
        assert_eq!(class_centers(&src).unwrap().centers.as_slice(), &[0.1, 0.2]);
    }

    #[test]
    fn missing_class_is_named() {
        let src = LabeledDataset::new(mat(&[&[0.0], &[1.0]]), vec![0, 2], 3).unwrap();
        assert!(matches!(
            class_centers(&src),
            Err(Error::MissingClass { class: 1 })
        ));
    }

    #[test]
    fn dataset_validation() {
        assert!(LabeledDataset::new(mat(&[&[0.0]]), vec![0, 1], 2).is_err());
        assert!(LabeledDataset::new(mat(&[&[0.0]]), vec![2], 2).is_err());
        assert_eq!(
            LabeledDataset::from_labels(mat(&[&[0.0], &[1.0]]), vec![0, 3])
                .unwrap()
                .num_classes,
            4
        );
    }

    #[test]
    fn distances() {
        let cc = ClassCenters {
            centers: mat(&[&[0.0], &[2.0]]),
            counts: vec![1, 1],
        };
        assert_eq!(
            distance_matrix(&cc, &mat(&[&[1.0]])).unwrap().as_slice(),
            &[1.0, 1.0]
        );
        assert_eq!(distance_matrix(&cc, &mat(&[&[2.0]])).unwrap()[(1, 0)], 0.0);
        assert!(distance_matrix(&cc, &mat(&[&[1.0, 1.0]])).is_err());

        let cc = ClassCenters {
            centers: mat(&[&[0.0, 0.0]]),
            counts: vec![1],
        };
        assert_eq!(
            distance_matrix(&cc, &mat(&[&[3.0, 4.0]]))
                .unwrap()
                .as_slice(),
            &[25.0]
        );
    }

    #[test]
    fn separated_classes() {
        let src = LabeledDataset::new(mat(&[&[0.0], &[10.0]]), vec![0, 1], 2).unwrap();
        let p = classify(&src, &mat(&[&[1.0], &[9.0]])).unwrap();
        assert_eq!(p.labels, vec![0, 1]);
    }

    #[test]
    fn coverage_moves_smallest_margin_target() {
        // margins D1 - D0: 100 - 0 = 100, 81 - 1 = 80, 64 - 4 = 60
        let src = LabeledDataset::new(mat(&[&[0.0], &[10.0]]), vec![0, 1], 2).unwrap();
        let p = classify(&src, &mat(&[&[0.0], &[1.0], &[2.0]])).unwrap();
        assert_eq!(p.labels, vec![0, 0, 1]);
        assert!((p.probabilities.objective - 65.0).abs() < 1e-12);
    }

    #[test]
    fn argmax_picks_largest_then_lowest_index() {
        assert_eq!(argmax_first([0.1, 0.2, 0.3, 0.4]), Some(3));
        assert_eq!(argmax_first([0.5, 0.5]), Some(0));
        assert_eq!(argmin_first([2.0, 1.0, 1.0]), Some(1));
        assert_eq!(argmax_first(Vec::<f64>::new()), None);
    }

    #[test]
    fn soft_column_is_normalized_before_argmax() {
        let mut m = AnnotationMatrix {
            values: mat(&[&[0.2], &[0.4], &[0.6], &[0.8]]),
            objective: 0.0,
        };
        assert_eq!(labels_from_annotation(&mut m), vec![3]);
        let sum: f64 = m.values.column(0).iter().sum();
        assert!((sum - 1.0).abs() < 1e-15);
    }

    #[test]
    fn infeasible_propagates() {
        let src = LabeledDataset::new(mat(&[&[0.0], &[10.0]]), vec![0, 1], 2).unwrap();
        assert!(matches!(
            classify(&src, &mat(&[&[1.0]])),
            Err(Error::Infeasible {
                targets: 1,
                classes: 2
            })
        ));
    }
}
