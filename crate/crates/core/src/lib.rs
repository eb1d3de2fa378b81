//! EasyTL: transfer learning without hyperparameters.
//!
//! Source features are optionally re-colored to match the target covariance
//! ([`alignment`]), then every target sample is assigned to a source class
//! center by a small linear program that keeps all classes represented
//! ([`programming`], [`lp`]). [`pipeline`] ties the two together and
//! [`dataio`] / [`cli`] expose it over CSV files.
//!
//! All numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix it to `f64`.

pub mod alignment;
pub mod cli;
pub mod dataio;
pub mod error;
pub mod linalg;
pub mod lp;
pub mod pipeline;
pub mod programming;
pub mod scalar;

pub use alignment::{Alignment, AlignmentKind, FeatureTransform, Role};
pub use error::{Error, Result, Stage};
pub use linalg::{
    covariance, matrix_power_half, symmetric_eig, HalfPower, Matrix, SymmetricSpectrum,
};
pub use lp::{brute_force_solve, solve, AnnotationMatrix, AnnotationProblem};
pub use pipeline::{ClassifierKind, PipelineConfig};
pub use programming::{
    class_centers, classify, distance_matrix, ClassCenters, LabeledDataset, Prediction,
};
pub use scalar::Scalar;

pub type RealMatrix = Matrix<f64>;
pub type FeatureMatrix = Matrix<f64>;
pub type Spectrum = SymmetricSpectrum<f64>;
pub type Transform = FeatureTransform<f64>;
pub type Problem = AnnotationProblem<f64>;
pub type Annotation = AnnotationMatrix<f64>;
pub type Dataset = LabeledDataset<f64>;
pub type Centers = ClassCenters<f64>;
pub type LabelPrediction = Prediction<f64>;
