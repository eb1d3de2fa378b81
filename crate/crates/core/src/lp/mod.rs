//! The annotation linear program.
//!
//! Minimize `Σ D_cj M_cj` subject to `0 ≤ M_cj ≤ 1`, every column summing to
//! one and every row summing to at least one. The constraint matrix is a
//! bipartite transportation structure, so the problem is solved exactly as a
//! min-cost flow:
//!
//! ```text
//!   S ──1──▶ column j ──1, D_cj──▶ class c ──1──────────▶ T
//!                                          └──∞──▶ slack ──(n_t − C)──▶ T
//! ```
//!
//! The unit edge from each class straight to `T` carries the row lower bound;
//! pushing `n_t` units saturates every edge into `T`, which is exactly
//! feasibility. Unit capacities make the optimum integral.

mod brute;
mod flow;

pub use brute::{brute_force_solve, MAX_BRUTE_FORCE_CLASSES, MAX_BRUTE_FORCE_TARGETS};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use flow::FlowNetwork;

/// Zero/pivot tolerance for cost comparisons.
pub const ZERO_TOLERANCE: f64 = 1e-9;
/// Tolerance on constraint satisfaction of a returned solution.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-7;

/// Cost matrix `D` (classes × targets) of an annotation LP.
#[derive(Debug, Clone)]
pub struct AnnotationProblem<T> {
    costs: Matrix<T>,
}

impl<T: Scalar> AnnotationProblem<T> {
    pub fn new(costs: Matrix<T>) -> Result<Self> {
        if costs.rows() == 0 {
            return Err(Error::invalid(
                "annotation problem needs at least one class",
            ));
        }
        for c in 0..costs.rows() {
            for (j, &v) in costs.row(c).iter().enumerate() {
                if !v.is_finite() || v < T::zero() {
                    return Err(Error::invalid(format!(
                        "cost D[{c}][{j}] = {v} must be finite and non-negative"
                    )));
                }
            }
        }
        Ok(AnnotationProblem { costs })
    }

    pub fn costs(&self) -> &Matrix<T> {
        &self.costs
    }

    pub fn num_classes(&self) -> usize {
        self.costs.rows()
    }

    pub fn num_targets(&self) -> usize {
        self.costs.cols()
    }
}

/// Solved probability annotation matrix `M` with its objective value.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnotationMatrix<T> {
    pub values: Matrix<T>,
    pub objective: T,
}

impl<T: Scalar> AnnotationMatrix<T> {
    /// One-hot matrix for a hard assignment of columns to classes.
    pub fn from_assignment(p: &AnnotationProblem<T>, assignment: &[usize]) -> Self {
        let costs = p.costs();
        let mut values = Matrix::zeros(p.num_classes(), assignment.len());
        let mut objective = T::zero();
        for (j, &c) in assignment.iter().enumerate() {
            values[(c, j)] = T::one();
            objective += costs[(c, j)];
        }
        AnnotationMatrix { values, objective }
    }

    pub fn num_classes(&self) -> usize {
        self.values.rows()
    }

    pub fn num_targets(&self) -> usize {
        self.values.cols()
    }

    /// Largest violation among the box, column-sum and row-coverage
    /// constraints. Zero for an exactly feasible matrix.
    pub fn max_violation(&self) -> T {
        let m = &self.values;
        let one = T::one();
        let mut worst = T::zero();
        let mut row_sums = vec![T::zero(); m.rows()];
        for j in 0..m.cols() {
            let mut col = T::zero();
            for (c, rs) in row_sums.iter_mut().enumerate() {
                let v = m[(c, j)];
                worst = worst.max(-v).max(v - one);
                col += v;
                *rs += v;
            }
            worst = worst.max((col - one).abs());
        }
        for rs in row_sums {
            worst = worst.max(one - rs);
        }
        worst
    }

    /// Largest distance of any entry from the nearest integer.
    pub fn max_fractionality(&self) -> T {
        self.values
            .as_slice()
            .iter()
            .map(|&v| (v - v.round()).abs())
            .fold(T::zero(), T::max)
    }
}

/// Solves the annotation LP to optimality, returning an integral vertex.
///
/// Among cost-equivalent choices a column is kept on the lowest class index
/// whenever coverage allows.
pub fn solve<T: Scalar>(p: &AnnotationProblem<T>) -> Result<AnnotationMatrix<T>> {
    let (classes, targets) = (p.num_classes(), p.num_targets());
    if targets < classes {
        return Err(Error::Infeasible { targets, classes });
    }
    let costs = p.costs();

    // node layout: source, columns, classes, slack, sink
    let source = 0;
    let col_node = |j: usize| 1 + j;
    let class_node = |c: usize| 1 + targets + c;
    let slack = 1 + targets + classes;
    let sink = slack + 1;

    let mut net = FlowNetwork::new(sink + 1);
    for j in 0..targets {
        net.add_edge(source, col_node(j), 1, T::zero());
    }
    let mut arcs = Vec::with_capacity(targets * classes);
    for j in 0..targets {
        for c in 0..classes {
            arcs.push(net.add_edge(col_node(j), class_node(c), 1, costs[(c, j)]));
        }
    }
    for c in 0..classes {
        net.add_edge(class_node(c), sink, 1, T::zero());
        net.add_edge(class_node(c), slack, targets, T::zero());
    }
    net.add_edge(slack, sink, targets - classes, T::zero());

    let zero_tol = T::tol(ZERO_TOLERANCE, 16.0);
    let pushed = net.run(source, sink, targets, zero_tol);
    debug_assert_eq!(pushed, targets, "n_t >= C is always feasible");

    let mut assignment = vec![usize::MAX; targets];
    for j in 0..targets {
        for c in 0..classes {
            if net.flow(arcs[j * classes + c]) == 1 {
                assignment[j] = c;
            }
        }
    }
    if assignment.contains(&usize::MAX) {
        return Err(Error::State("flow left a target column unassigned".into()));
    }

    prefer_low_class_on_ties(costs, &mut assignment, zero_tol);
    Ok(AnnotationMatrix::from_assignment(p, &assignment))
}

/// Moves each column to the lowest class index with the same cost when the
/// class it leaves stays covered. Objective is unchanged.
fn prefer_low_class_on_ties<T: Scalar>(costs: &Matrix<T>, assignment: &mut [usize], tol: T) {
    let mut counts = vec![0usize; costs.rows()];
    for &c in assignment.iter() {
        counts[c] += 1;
    }
    for (j, current) in assignment.iter_mut().enumerate() {
        let c = *current;
        if counts[c] < 2 {
            continue;
        }
        let here = costs[(c, j)];
        let scale = T::one().max(here.abs());
        if let Some(lower) = (0..c).find(|&k| (costs[(k, j)] - here).abs() <= tol * scale) {
            counts[c] -= 1;
            counts[lower] += 1;
            *current = lower;
        }
    }
}
