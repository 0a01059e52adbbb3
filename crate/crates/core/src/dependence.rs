//! Linear dependence tests, the independence margin of a column system, and
//! extraction of an equivalent linearly independent subsystem.
//!
//! A vector depends on a system exactly when its residual against the system
//! is the identity; a system is independent exactly when every column keeps a
//! residual strictly above the identity against the others. The margin is the
//! order minimum of those per-column residuals.

use crate::distance::{membership, residual_core};
use crate::linalg::{IndexSet, Matrix, Vector};
use crate::semifield::Scalar;
use crate::{Error, Result, Tolerance};

/// The outcome of testing one vector against a column system.
#[derive(Debug, Clone, PartialEq)]
pub struct DependenceReport {
    /// Whether the vector is a linear combination of the columns.
    pub dependent: bool,
    /// The residual of the vector against the columns.
    pub delta: Scalar,
    /// Coefficients reproducing the vector exactly, when dependent.
    pub coefficients: Option<Vector>,
}

/// An equivalent linearly independent subsystem of a column system.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisResult {
    /// Indices of the retained columns.
    pub kept: IndexSet,
    /// The retained columns as a matrix.
    pub basis: Matrix,
    /// The independence margin of the retained system.
    pub margin: Scalar,
}

/// Whether `d` is linearly dependent on the columns of `a`, with the
/// coefficient witness of the combination when it is.
pub fn is_dependent(d: &Vector, a: &Matrix, tol: Tolerance) -> Result<DependenceReport> {
    let t = membership(a, d, tol)?;
    Ok(DependenceReport {
        dependent: t.member,
        delta: t.delta,
        coefficients: t.witness,
    })
}

/// The independence margin: the order minimum over columns of each column's
/// residual against the matrix with that column removed.
///
/// A single nonzero column is independent by convention and reports the
/// maximal element.
pub fn independence_margin(a: &Matrix) -> Result<Scalar> {
    let sf = a.semifield();
    for j in 0..a.cols() {
        if a.col_is_zero(j) {
            return Err(Error::ZeroColumn { index: j });
        }
    }
    if a.cols() < 2 {
        return Ok(Scalar::top(sf));
    }
    let mut margin = sf.top();
    for j in 0..a.cols() {
        let rest = a.without_column(j)?;
        let core = residual_core(&rest, &a.column(j))?;
        margin = sf.order_min(margin, core.delta);
    }
    Ok(Scalar::new(sf, margin).expect("residuals stay in the carrier"))
}

/// Whether the columns of `a` are linearly independent: the margin exceeds
/// the identity strictly, beyond the tolerance.
pub fn is_independent(a: &Matrix, tol: Tolerance) -> Result<bool> {
    let sf = a.semifield();
    let margin = independence_margin(a)?;
    Ok(tol.lt(sf, sf.one(), margin.value()))
}

/// Extract an equivalent linearly independent subsystem by a forward scan.
///
/// Columns are examined in index order; a column is removed when it depends
/// on the other columns still retained at that step (later columns count as
/// retained until their own turn). Among mutually generating columns the
/// scan therefore keeps the last one.
pub fn extract_basis(a: &Matrix, tol: Tolerance) -> Result<BasisResult> {
    for j in 0..a.cols() {
        if a.col_is_zero(j) {
            return Err(Error::ZeroColumn { index: j });
        }
    }
    let mut retained: Vec<usize> = (0..a.cols()).collect();
    let mut step = 0;
    while step < retained.len() {
        let j = retained[step];
        let others: Vec<usize> = retained.iter().copied().filter(|&k| k != j).collect();
        if others.is_empty() {
            break;
        }
        let rest = a.select_columns(&others)?;
        let t = membership(&rest, &a.column(j), tol)?;
        if t.member {
            retained.remove(step);
        } else {
            step += 1;
        }
    }
    let basis = a.select_columns(&retained)?;
    let margin = independence_margin(&basis)?;
    Ok(BasisResult {
        kept: retained.into_iter().collect(),
        basis,
        margin,
    })
}
