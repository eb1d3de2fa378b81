//! Dense symmetric linear algebra: covariance estimation and regularized
//! matrix square roots.

mod eigen;
mod matrix;

pub use eigen::{symmetric_eig, SymmetricSpectrum};
pub use matrix::Matrix;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Eigenvalues below this are lifted before a fractional power is taken.
pub const EIGENVALUE_FLOOR: f64 = 1e-12;

/// Sign of the half power in [`matrix_power_half`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfPower {
    /// `S^{1/2}`
    Sqrt,
    /// `S^{-1/2}`
    InvSqrt,
}

/// Unbiased (n − 1) sample covariance of the columns of `x`.
///
/// With one sample or none the result is the d×d zero matrix. The output is
/// symmetric bit-for-bit: only the upper triangle is accumulated.
pub fn covariance<T: Scalar>(x: &Matrix<T>) -> Result<Matrix<T>> {
    let (n, d) = (x.rows(), x.cols());
    if d == 0 {
        return Err(Error::invalid("covariance of a matrix with no columns"));
    }
    let mut cov = Matrix::zeros(d, d);
    if n <= 1 {
        return Ok(cov);
    }

    let inv_n = T::one() / T::from_count(n);
    let mut mean = vec![T::zero(); d];
    for row in x.iter_rows() {
        for (m, &v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m *= inv_n;
    }

    let mut centered = vec![T::zero(); d];
    for row in x.iter_rows() {
        for ((c, &v), &m) in centered.iter_mut().zip(row).zip(&mean) {
            *c = v - m;
        }
        for i in 0..d {
            let ci = centered[i];
            if ci == T::zero() {
                continue;
            }
            let cov_row = cov.row_mut(i);
            for j in i..d {
                cov_row[j] += ci * centered[j];
            }
        }
    }

    let denom = T::one() / T::from_count(n - 1);
    for i in 0..d {
        for j in i..d {
            let v = cov[(i, j)] * denom;
            cov[(i, j)] = v;
            cov[(j, i)] = v;
        }
    }
    Ok(cov)
}

/// Returns `V · diag(λ^{±1/2}) · Vᵀ` for symmetric `s`, with eigenvalues
/// clamped to [`EIGENVALUE_FLOOR`] first.
pub fn matrix_power_half<T: Scalar>(s: &Matrix<T>, power: HalfPower) -> Result<Matrix<T>> {
    let spectrum = symmetric_eig(s)?;
    let floor = T::lit(EIGENVALUE_FLOOR);
    Ok(spectrum.reconstruct_with(|l| {
        let r = l.max(floor).sqrt();
        match power {
            HalfPower::Sqrt => r,
            HalfPower::InvSqrt => r.recip(),
        }
    }))
}

/// Returns `s + I`.
pub fn add_identity<T: Scalar>(s: &Matrix<T>) -> Result<Matrix<T>> {
    if !s.is_square() {
        return Err(Error::invalid(format!(
            "expected a square matrix, got {}x{}",
            s.rows(),
            s.cols()
        )));
    }
    let mut out = s.clone();
    for i in 0..s.rows() {
        out[(i, i)] += T::one();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix<f64> {
        Matrix::from_rows(rows).unwrap()
    }

    /// Deterministic pseudo-random values without pulling in an RNG.
    fn lcg_values(seed: u64, n: usize) -> Vec<f64> {
        let mut state = seed;
        (0..n)
            .map(|_| {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
            })
            .collect()
    }

    #[test]
    fn covariance_two_points() {
        let c = covariance(&m(&[&[0.0], &[2.0]])).unwrap();
        assert_eq!(c.as_slice(), &[2.0]);
    }

    #[test]
    fn covariance_single_sample_is_zero() {
        let c = covariance(&m(&[&[5.0, 7.0]])).unwrap();
        assert_eq!(c, Matrix::zeros(2, 2));
    }

    #[test]
    fn covariance_identical_rows_is_zero() {
        let c = covariance(&Matrix::from_rows(&[[1.5, -2.0, 3.0]; 4]).unwrap()).unwrap();
        assert_eq!(c, Matrix::zeros(3, 3));
    }

    #[test]
    fn covariance_rejects_no_columns() {
        assert!(matches!(
            covariance(&Matrix::<f64>::zeros(0, 0)),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn covariance_is_translation_invariant() {
        let x = Matrix::new(6, 3, lcg_values(7, 18)).unwrap();
        let mut shifted = x.clone();
        for i in 0..6 {
            for (j, c) in [10.0, -3.0, 0.25].iter().enumerate() {
                shifted[(i, j)] += c;
            }
        }
        let a = covariance(&x).unwrap();
        let b = covariance(&shifted).unwrap();
        assert!(a.max_abs_diff(&b) <= 1e-10);
    }

    #[test]
    fn eig_identity_and_diagonal() {
        let s = symmetric_eig(&Matrix::<f64>::identity(3)).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0, 1.0, 1.0]);

        let s = symmetric_eig(&Matrix::<f64>::from_diag(&[1.0, 4.0])).unwrap();
        assert_eq!(s.eigenvalues, vec![4.0, 1.0]);
        let v = &s.eigenvectors;
        assert!((v[(1, 0)].abs() - 1.0).abs() < 1e-15 && v[(0, 0)].abs() < 1e-15);
        assert!((v[(0, 1)].abs() - 1.0).abs() < 1e-15 && v[(1, 1)].abs() < 1e-15);
    }

    #[test]
    fn eig_rejects_non_square() {
        assert!(matches!(
            symmetric_eig(&Matrix::<f64>::zeros(2, 3)),
            Err(Error::InvalidInput(_))
        ));
        assert!(matrix_power_half(&Matrix::<f64>::zeros(3, 2), HalfPower::Sqrt).is_err());
    }

    #[test]
    fn eig_random_symmetric_reconstructs() {
        for seed in 0..20 {
            let a = Matrix::new(5, 5, lcg_values(seed, 25)).unwrap();
            let s = a.symmetrized().unwrap();
            let eig = symmetric_eig(&s).unwrap();
            let resid = eig.reconstruct().sub(&s).unwrap().frobenius_norm();
            assert!(
                resid <= 1e-8 * s.frobenius_norm().max(1.0),
                "seed {seed}: {resid}"
            );
            let vtv = eig
                .eigenvectors
                .transpose()
                .matmul(&eig.eigenvectors)
                .unwrap();
            assert!(vtv.max_abs_diff(&Matrix::identity(5)) <= 1e-12);
            assert!(eig.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn eig_handles_tiny_and_degenerate_sizes() {
        let s = symmetric_eig(&Matrix::from_diag(&[3.0])).unwrap();
        assert_eq!(s.eigenvalues, vec![3.0]);
        assert!(symmetric_eig(&Matrix::<f64>::zeros(0, 0))
            .unwrap()
            .eigenvalues
            .is_empty());
        let z = symmetric_eig(&Matrix::<f64>::zeros(4, 4)).unwrap();
        assert!(z.eigenvalues.iter().all(|&l| l == 0.0));
    }

    #[test]
    fn power_half_scalar_cases() {
        let i = Matrix::<f64>::identity(3);
        assert!(
            matrix_power_half(&i, HalfPower::InvSqrt)
                .unwrap()
                .max_abs_diff(&i)
                < 1e-15
        );
        let p = matrix_power_half(&Matrix::from_diag(&[4.0]), HalfPower::InvSqrt).unwrap();
        assert_eq!(p.as_slice(), &[0.5]);
    }

    #[test]
    fn power_half_multiplies_back() {
        for seed in 0..10 {
            let b = Matrix::new(4, 4, lcg_values(100 + seed, 16)).unwrap();
            let s = b.matmul(&b.transpose()).unwrap();
            let r = matrix_power_half(&s, HalfPower::Sqrt).unwrap();
            let resid = r.matmul(&r).unwrap().sub(&s).unwrap().frobenius_norm();
            assert!(resid <= 1e-8 * s.frobenius_norm().max(1.0));
        }
    }

    #[test]
    fn f32_power_half() {
        let s = Matrix::<f32>::from_rows(&[[5.0, 1.0], [1.0, 3.0]]).unwrap();
        let r = matrix_power_half(&s, HalfPower::Sqrt).unwrap();
        assert!(r.matmul(&r).unwrap().max_abs_diff(&s) < 1e-5);
    }
}
