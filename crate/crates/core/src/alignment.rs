//! Intra-domain alignment: whiten source features with the regularized source
//! covariance, then re-color them with the regularized target covariance.
//!
//! Target features are never touched. Feature-learning methods other than
//! CORAL plug in through [`Alignment`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{add_identity, covariance, matrix_power_half, HalfPower, Matrix};
use crate::scalar::Scalar;

/// Which domain a feature matrix comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Source,
    Target,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlignmentKind {
    None,
    Coral,
}

/// A feature transform fitted on both domains and applied per role.
pub trait Alignment<T: Scalar> {
    fn apply(&self, x: &Matrix<T>, role: Role) -> Result<Matrix<T>>;
}

#[derive(Debug, Clone)]
pub struct FeatureTransform<T> {
    kind: AlignmentKind,
    fitted_map: Option<Matrix<T>>,
}

impl<T: Scalar> FeatureTransform<T> {
    pub fn identity() -> Self {
        FeatureTransform {
            kind: AlignmentKind::None,
            fitted_map: None,
        }
    }

    /// A CORAL transform with no map yet; applying it is a state error.
    pub fn unfitted_coral() -> Self {
        FeatureTransform {
            kind: AlignmentKind::Coral,
            fitted_map: None,
        }
    }

    /// Fits `A = (cov(source) + I)^{-1/2} · (cov(target) + I)^{1/2}`.
    pub fn fit_coral(source: &Matrix<T>, target: &Matrix<T>) -> Result<Self> {
        let d = source.cols();
        if d == 0 || target.cols() != d {
            return Err(Error::invalid(format!(
                "source has {d} features, target has {}",
                target.cols()
            )));
        }
        if source.rows() == 0 || target.rows() == 0 {
            return Err(Error::invalid(
                "alignment needs at least one sample per domain",
            ));
        }
        let whiten = matrix_power_half(&add_identity(&covariance(source)?)?, HalfPower::InvSqrt)?;
        let recolor = matrix_power_half(&add_identity(&covariance(target)?)?, HalfPower::Sqrt)?;
        Ok(FeatureTransform {
            kind: AlignmentKind::Coral,
            fitted_map: Some(whiten.matmul(&recolor)?),
        })
    }

    pub fn fit(kind: AlignmentKind, source: &Matrix<T>, target: &Matrix<T>) -> Result<Self> {
        match kind {
            AlignmentKind::None => Ok(Self::identity()),
            AlignmentKind::Coral => Self::fit_coral(source, target),
        }
    }

    pub fn kind(&self) -> AlignmentKind {
        self.kind
    }

    pub fn fitted_map(&self) -> Option<&Matrix<T>> {
        self.fitted_map.as_ref()
    }
}

impl<T: Scalar> Alignment<T> for FeatureTransform<T> {
    fn apply(&self, x: &Matrix<T>, role: Role) -> Result<Matrix<T>> {
        match self.kind {
            AlignmentKind::None => Ok(x.clone()),
            AlignmentKind::Coral => {
                let map = self
                    .fitted_map
                    .as_ref()
                    .ok_or_else(|| Error::State("CORAL transform applied before fitting".into()))?;
                if x.cols() != map.rows() {
                    return Err(Error::invalid(format!(
                        "transform fitted on {} features, got {}",
                        map.rows(),
                        x.cols()
                    )));
                }
                match role {
                    Role::Source => x.matmul(map),
                    Role::Target => Ok(x.clone()),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(v: &[f64]) -> Matrix<f64> {
        Matrix::new(v.len(), 1, v.to_vec()).unwrap()
    }

    fn sample() -> Matrix<f64> {
        Matrix::from_rows(&[[1.0, 2.0], [0.5, -1.0], [3.0, 0.0], [-2.0, 1.5]]).unwrap()
    }

    #[test]
    fn same_domain_gives_identity_map() {
        let x = sample();
        let t = FeatureTransform::fit_coral(&x, &x).unwrap();
        assert!(t.fitted_map().unwrap().max_abs_diff(&Matrix::identity(2)) <= 1e-8);
    }

    #[test]
    fn single_source_row_gives_target_root() {
        let src = Matrix::from_rows(&[[4.0, 4.0]]).unwrap();
        let tgt = sample();
        let t = FeatureTransform::fit_coral(&src, &tgt).unwrap();
        let expected = matrix_power_half(
            &add_identity(&covariance(&tgt).unwrap()).unwrap(),
            HalfPower::Sqrt,
        )
        .unwrap();
        assert!(t.fitted_map().unwrap().max_abs_diff(&expected) <= 1e-12);
    }

    #[test]
    fn scalar_variances() {
        // sample variances 3 and 8: (3 + 1)^{-1/2} (8 + 1)^{1/2} = 1.5
        let src = col(&[0.0, 3.0, -3.0, 0.0, 0.0, 0.0, 0.0]);
        let tgt = col(&[0.0, 4.0, -4.0, 0.0, 0.0]);
        assert_eq!(covariance(&src).unwrap().as_slice(), &[3.0]);
        assert_eq!(covariance(&tgt).unwrap().as_slice(), &[8.0]);
        let t = FeatureTransform::fit_coral(&src, &tgt).unwrap();
        assert!((t.fitted_map().unwrap()[(0, 0)] - 1.5).abs() < 1e-12);
    }

    #[test]
    fn apply_roles() {
        let t = FeatureTransform {
            kind: AlignmentKind::Coral,
            fitted_map: Some(col(&[1.5])),
        };
        let x = col(&[2.0, -4.0]);
        assert_eq!(t.apply(&x, Role::Source).unwrap().as_slice(), &[3.0, -6.0]);
        assert_eq!(t.apply(&x, Role::Target).unwrap(), x);

        let id = FeatureTransform::<f64>::identity();
        let y = sample();
        assert_eq!(id.apply(&y, Role::Source).unwrap(), y);
        assert_eq!(id.apply(&y, Role::Target).unwrap(), y);
    }

    #[test]
    fn errors() {
        let x = sample();
        assert!(matches!(
            FeatureTransform::<f64>::unfitted_coral().apply(&x, Role::Source),
            Err(Error::State(_))
        ));
        assert!(matches!(
            FeatureTransform::fit_coral(&x, &col(&[1.0, 2.0])),
            Err(Error::InvalidInput(_))
        ));
        let t = FeatureTransform::fit_coral(&x, &x).unwrap();
        assert!(t.apply(&col(&[1.0]), Role::Source).is_err());
    }
}
