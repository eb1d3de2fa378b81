use super::{AnnotationMatrix, AnnotationProblem};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const MAX_BRUTE_FORCE_CLASSES: usize = 5;
pub const MAX_BRUTE_FORCE_TARGETS: usize = 10;

/// Exhaustive reference solver: tries every column-to-class assignment that
/// covers all classes and keeps the cheapest (first found on ties).
///
/// Only meant as a test oracle for [`super::solve`].
pub fn brute_force_solve<T: Scalar>(p: &AnnotationProblem<T>) -> Result<AnnotationMatrix<T>> {
    let (c, n) = (p.num_classes(), p.num_targets());
    if c > MAX_BRUTE_FORCE_CLASSES || n > MAX_BRUTE_FORCE_TARGETS {
        return Err(Error::Capacity(format!(
            "brute force limited to C <= {MAX_BRUTE_FORCE_CLASSES} and n_t <= {MAX_BRUTE_FORCE_TARGETS}, got C = {c}, n_t = {n}"
        )));
    }
    if n < c {
        return Err(Error::Infeasible {
            targets: n,
            classes: c,
        });
    }

    let costs = p.costs();
    let mut assignment = vec![0usize; n];
    let mut counts = vec![0usize; c];
    counts[0] = n;
    let mut best: Option<(T, Vec<usize>)> = None;

    loop {
        if counts.iter().all(|&k| k > 0) {
            let obj: T = assignment
                .iter()
                .enumerate()
                .map(|(j, &k)| costs[(k, j)])
                .sum();
            if best.as_ref().is_none_or(|(b, _)| obj < *b) {
                best = Some((obj, assignment.clone()));
            }
        }
        // mixed-radix increment, column 0 least significant
        let mut j = 0;
        loop {
            if j == n {
                let (_, best) = best.expect("n_t >= C guarantees a covering assignment");
                return Ok(AnnotationMatrix::from_assignment(p, &best));
            }
            counts[assignment[j]] -= 1;
            assignment[j] += 1;
            if assignment[j] == c {
                assignment[j] = 0;
                counts[0] += 1;
                j += 1;
            } else {
                counts[assignment[j]] += 1;
                break;
            }
        }
    }
}
