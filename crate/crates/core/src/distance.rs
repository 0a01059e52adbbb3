//! Distances from a vector to the linear span of matrix columns.
//!
//! The central quantity is the residual of a right-hand side `d` against the
//! span of the columns of `A`: the square root of `(A (inv(d) A)^-)^- d`,
//! evaluated after the pair has been put into consistent form. The residual
//! equals the minimum distance from `d` to the span, is attained at an
//! explicit residuated point, and also controls the distances to the two
//! half-spaces `{A x <= d}` and `{A x >= d}`, which both sit at its square.
//!
//! The entry points here require a column-regular matrix and a nonzero
//! right-hand side; degenerate inputs (a zero matrix or zero right-hand side)
//! get closed-form verdicts in [`crate::solver::preprocess`].

use crate::linalg::{IndexSet, Matrix, Vector};
use crate::semifield::Scalar;
use crate::{Error, Result, Tolerance};

/// A matrix paired with the bookkeeping of its consistency transform.
///
/// Rows where the right-hand side is zero (`zero_rows`) force every column
/// meeting them (`forced_cols`) to carry a zero coefficient; the transformed
/// matrix zeroes those columns everywhere outside the zero rows.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsistentForm {
    /// The transformed matrix.
    pub matrix: Matrix,
    /// Row indices where the right-hand side is zero.
    pub zero_rows: IndexSet,
    /// Column indices whose coefficients are forced to zero.
    pub forced_cols: IndexSet,
}

/// The residual of a right-hand side against a column span, with witnesses.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    /// The residual value; at least the identity, the maximal element exactly
    /// when the matrix is not row regular after the consistency reduction.
    pub delta: Scalar,
    /// The coefficient vector attaining the minimum; present iff finite.
    pub argmin: Option<Vector>,
    /// The nearest point of the span; present iff the residual is finite.
    pub nearest: Option<Vector>,
    /// Row regularity of the matrix after the consistency reduction.
    pub row_regular: bool,
    /// The consistency transform, when one was applied internally.
    pub consistency: Option<ConsistentForm>,
}

impl Residual {
    /// Whether the consistency transform actually changed the matrix.
    pub fn consistent_form_applied(&self) -> bool {
        self.consistency
            .as_ref()
            .is_some_and(|form| !form.forced_cols.is_empty())
    }
}

/// The outcome of a span membership test.
#[derive(Debug, Clone, PartialEq)]
pub struct Membership {
    /// Whether the vector lies in the span of the columns.
    pub member: bool,
    /// A coefficient vector reproducing the input exactly, when a member.
    pub witness: Option<Vector>,
    /// The underlying residual value.
    pub delta: Scalar,
}

fn require_column_regular(a: &Matrix) -> Result<()> {
    for j in 0..a.cols() {
        if a.col_is_zero(j) {
            return Err(Error::ZeroColumn { index: j });
        }
    }
    Ok(())
}

fn require_shapes(a: &Matrix, d: &Vector) -> Result<()> {
    if a.semifield() != d.semifield() {
        return Err(Error::SemifieldMismatch {
            left: a.semifield(),
            right: d.semifield(),
        });
    }
    if a.rows() != d.len() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: d.len(),
        });
    }
    Ok(())
}

/// Put `a` into the form consistent with `d`.
///
/// Zero components of `d` pin the coefficients of every column with a nonzero
/// entry in those rows; the transform zeroes such columns everywhere else, so
/// that span membership respects supports. A regular `d` leaves `a` unchanged.
pub fn make_consistent(a: &Matrix, d: &Vector) -> Result<ConsistentForm> {
    require_shapes(a, d)?;
    require_column_regular(a)?;
    if d.is_zero_vector() {
        return Err(Error::ZeroRhs);
    }
    let sf = a.semifield();
    let zero_rows: IndexSet = (0..d.len()).filter(|&i| sf.is_zero(d.get(i))).collect();
    let mut forced_cols = IndexSet::new();
    for j in 0..a.cols() {
        if zero_rows.iter().any(|i| !sf.is_zero(a.get(i, j))) {
            forced_cols.insert(j);
        }
    }
    let mut matrix = a.clone();
    for i in 0..a.rows() {
        if zero_rows.contains(i) {
            continue;
        }
        for j in forced_cols.iter() {
            matrix.set(i, j, sf.zero());
        }
    }
    Ok(ConsistentForm {
        matrix,
        zero_rows,
        forced_cols,
    })
}

/// The residuated upper bound of `{x : A x <= d}`, column by column.
///
/// Entry `j` is the order minimum of `d_i * inv(a_ij)` over the rows where
/// `a_ij` is nonzero, so rows with a zero right-hand side force the entry to
/// zero, and a zero column (no constraint at all) leaves the maximal element.
/// For a column-regular matrix this equals the pseudo-inverse of the row
/// `inv(d) A` computed on the consistent form.
pub(crate) fn residuated_bound(a: &Matrix, d: &Vector) -> Vector {
    let sf = a.semifield();
    let mut bound = vec![sf.top(); a.cols()];
    for i in 0..a.rows() {
        let di = d.get(i);
        for (j, b) in bound.iter_mut().enumerate() {
            let aij = a.get(i, j);
            if !sf.is_zero(aij) {
                *b = sf.order_min(*b, sf.mul(di, sf.pseudo_inv(aij)));
            }
        }
    }
    Vector::from_raw(sf, bound)
}

/// Shared core: residual value and witnesses for a column-regular `a` and
/// nonzero `d`, applying the consistency reduction internally.
pub(crate) struct ResidualCore {
    pub delta: f64,
    /// The bound `(inv(d) A)^-` with forced columns already zeroed.
    pub bound: Vector,
    pub row_regular: bool,
    pub form: ConsistentForm,
}

pub(crate) fn residual_core(a: &Matrix, d: &Vector) -> Result<ResidualCore> {
    let form = make_consistent(a, d)?;
    let sf = a.semifield();
    let bound = residuated_bound(a, d);
    // Row regularity of the reduced system: every row with a nonzero
    // right-hand side must keep a nonzero entry outside the forced columns.
    let row_regular = (0..a.rows())
        .filter(|&i| !form.zero_rows.contains(i))
        .all(|i| (0..a.cols()).any(|j| !form.forced_cols.contains(j) && !sf.is_zero(a.get(i, j))));
    let y = a.mul_vector(&bound).expect("shapes were checked");
    // The support check subsumes the regularity gate and also catches the
    // corner where maximal-element entries force additional zeros.
    let delta = if y.support() != d.support() {
        sf.top()
    } else {
        // Each row contributes inv(y_i) d_i >= identity since y <= d; the
        // fold starts at the identity so that rows where both sides sit at
        // the maximal element stay neutral.
        let mut dev = sf.one();
        for i in 0..d.len() {
            dev = sf.add(dev, sf.mul(sf.pseudo_inv(y.get(i)), d.get(i)));
        }
        sf.sqrt(dev)
    };
    Ok(ResidualCore {
        delta,
        bound,
        row_regular,
        form,
    })
}

fn assemble(a: &Matrix, core: ResidualCore, keep_form: bool) -> Residual {
    let sf = a.semifield();
    let finite = !sf.is_top(core.delta);
    let argmin = finite.then(|| core.bound.scale(core.delta));
    let nearest = argmin
        .as_ref()
        .map(|x| a.mul_vector(x).expect("shapes were checked"));
    Residual {
        delta: Scalar::new(sf, core.delta).expect("residuals stay in the carrier"),
        argmin,
        nearest,
        row_regular: core.row_regular,
        consistency: keep_form.then_some(core.form),
    }
}

/// The residual of a pair already in consistent form.
///
/// Fails with [`Error::InconsistentPair`] when the matrix differs from its
/// own consistency transform; callers with raw input use [`nearest_point`].
pub fn residual(a: &Matrix, d: &Vector) -> Result<Residual> {
    let core = residual_core(a, d)?;
    if core.form.matrix != *a {
        return Err(Error::InconsistentPair);
    }
    Ok(assemble(a, core, false))
}

/// The distance from `d` to the span of the columns of `a`, with the
/// minimizing coefficients and the nearest point of the span.
///
/// The consistency transform is applied internally and returned for
/// transparency; coefficients of forced columns are zeroed in the witness.
pub fn nearest_point(a: &Matrix, d: &Vector) -> Result<Residual> {
    let core = residual_core(a, d)?;
    Ok(assemble(a, core, true))
}

/// The projection of `d` onto the half-space `{A x <= d}` of the span.
///
/// Returns the maximal coefficient vector of the half-space and its
/// deviation, the square of the residual (the maximal element when the
/// reduced matrix is not row regular).
pub fn project_below(a: &Matrix, d: &Vector) -> Result<(Vector, Scalar)> {
    let core = residual_core(a, d)?;
    let y = a.mul_vector(&core.bound)?;
    let rho = y.distance(d)?;
    Ok((core.bound, rho))
}

/// The projection of `d` onto the half-space `{A x >= d}` of the span.
///
/// Requires a finite residual; the witness is the below-projection scaled by
/// the squared residual, and its deviation again equals that square.
pub fn project_above(a: &Matrix, d: &Vector) -> Result<(Vector, Scalar)> {
    let core = residual_core(a, d)?;
    let sf = a.semifield();
    if sf.is_top(core.delta) {
        return Err(Error::NoFiniteProjection);
    }
    let delta_sq = sf.mul(core.delta, core.delta);
    let x2 = core.bound.scale(delta_sq);
    let y = a.mul_vector(&x2)?;
    let rho = y.distance(d)?;
    Ok((x2, rho))
}

/// Whether `d` belongs to the span of the columns of `a`.
///
/// Membership holds exactly when the residual equals the identity (within
/// the tolerance); the witness then reproduces `d` under multiplication.
pub fn membership(a: &Matrix, d: &Vector, tol: Tolerance) -> Result<Membership> {
    let core = residual_core(a, d)?;
    let sf = a.semifield();
    let member = tol.is_one(sf, core.delta);
    let delta = Scalar::new(sf, core.delta).expect("residuals stay in the carrier");
    Ok(Membership {
        member,
        witness: member.then_some(core.bound),
        delta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semifield::Semifield;

    const MP: Semifield = Semifield::MaxPlus;
    const NEG: f64 = f64::NEG_INFINITY;

    fn v(entries: &[f64]) -> Vector {
        Vector::new(MP, entries.to_vec()).unwrap()
    }

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(MP, rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn consistency_transform() {
        let a = m(&[&[1.0, 2.0], &[0.0, NEG]]);
        let d = v(&[3.0, NEG]);
        let form = make_consistent(&a, &d).unwrap();
        assert_eq!(form.matrix, m(&[&[NEG, 2.0], &[0.0, NEG]]));
        assert_eq!(form.zero_rows, IndexSet::from_iter([1]));
        assert_eq!(form.forced_cols, IndexSet::from_iter([0]));
    }

    #[test]
    fn consistency_is_identity_on_regular_rhs() {
        let a = m(&[&[1.0, 3.0], &[2.0, 1.0]]);
        let d = v(&[4.0, 5.0]);
        let form = make_consistent(&a, &d).unwrap();
        assert_eq!(form.matrix, a);
        assert!(form.forced_cols.is_empty());
    }

    #[test]
    fn consistency_skips_columns_meeting_only_zeros() {
        // The zero row of d meets only zero entries, so nothing is forced.
        let a = m(&[&[1.0, 2.0], &[NEG, NEG]]);
        let d = v(&[3.0, NEG]);
        let form = make_consistent(&a, &d).unwrap();
        assert_eq!(form.matrix, a);
        assert!(form.forced_cols.is_empty());
    }

    #[test]
    fn residual_on_a_member() {
        let a = m(&[&[1.0, 3.0], &[2.0, 1.0]]);
        let d = v(&[4.0, 5.0]);
        let r = residual(&a, &d).unwrap();
        assert_eq!(r.delta.value(), 0.0);
        assert_eq!(r.argmin.unwrap(), v(&[3.0, 1.0]));
        assert_eq!(r.nearest.unwrap(), d);
        assert!(r.row_regular);
    }

    #[test]
    fn residual_off_the_span() {
        let a = m(&[&[0.0], &[0.0]]);
        let d = v(&[3.0, 5.0]);
        let r = residual(&a, &d).unwrap();
        assert_eq!(r.delta.value(), 1.0);
        assert_eq!(r.argmin.as_ref().unwrap(), &v(&[4.0]));
        assert_eq!(r.nearest.unwrap(), v(&[4.0, 4.0]));
        assert_eq!(r.argmin.unwrap().len(), 1);
    }

    #[test]
    fn residual_infinite_without_row_regularity() {
        let a = m(&[&[0.0], &[NEG]]);
        let d = v(&[3.0, 5.0]);
        let r = residual(&a, &d).unwrap();
        assert!(r.delta.is_top());
        assert!(!r.row_regular);
        assert!(r.argmin.is_none());
        assert!(r.nearest.is_none());
    }

    #[test]
    fn residual_rejects_inconsistent_input() {
        let a = m(&[&[1.0, 2.0], &[0.0, NEG]]);
        let d = v(&[3.0, NEG]);
        assert_eq!(residual(&a, &d), Err(Error::InconsistentPair));
        // nearest_point applies the transform itself
        let r = nearest_point(&a, &d).unwrap();
        assert_eq!(r.delta.value(), 0.0);
        let x = r.argmin.unwrap();
        assert_eq!(x, v(&[NEG, 1.0]));
        assert_eq!(a.mul_vector(&x).unwrap(), d);
    }

    #[test]
    fn nearest_point_witnesses() {
        let a = m(&[&[0.0], &[0.0]]);
        let d = v(&[3.0, 5.0]);
        let r = nearest_point(&a, &d).unwrap();
        assert_eq!(r.delta.value(), 1.0);
        let y = r.nearest.unwrap();
        assert_eq!(y, v(&[4.0, 4.0]));
        assert_eq!(y.distance(&d).unwrap().value(), 1.0);

        let id = Matrix::identity(MP, 2);
        let r = nearest_point(&id, &d).unwrap();
        assert_eq!(r.delta.value(), 0.0);
        assert_eq!(r.argmin.unwrap(), d);
    }

    #[test]
    fn projections_sit_at_the_squared_residual() {
        let a = m(&[&[0.0], &[0.0]]);
        let d = v(&[3.0, 5.0]);
        let (x1, rho1) = project_below(&a, &d).unwrap();
        assert_eq!(x1, v(&[3.0]));
        assert!(a.mul_vector(&x1).unwrap().le(&d).unwrap());
        assert_eq!(rho1.value(), 2.0);

        let (x2, rho2) = project_above(&a, &d).unwrap();
        assert_eq!(x2, v(&[5.0]));
        assert!(d.le(&a.mul_vector(&x2).unwrap()).unwrap());
        assert_eq!(rho2.value(), 2.0);

        // A member collapses both projections onto the maximal solution.
        let a = m(&[&[1.0, 3.0], &[2.0, 1.0]]);
        let d = v(&[4.0, 5.0]);
        let (x1, rho1) = project_below(&a, &d).unwrap();
        let (x2, rho2) = project_above(&a, &d).unwrap();
        assert_eq!(x1, x2);
        assert_eq!(rho1.value(), 0.0);
        assert_eq!(rho2.value(), 0.0);

        let id = Matrix::identity(MP, 2);
        assert_eq!(project_below(&id, &d).unwrap().0, d);
        assert_eq!(project_above(&id, &d).unwrap().0, d);
    }

    #[test]
    fn projection_above_needs_finite_residual() {
        let a = m(&[&[0.0], &[NEG]]);
        let d = v(&[3.0, 5.0]);
        assert_eq!(project_above(&a, &d), Err(Error::NoFiniteProjection));
        // below still returns the maximal feasible point, at infinite deviation
        let (x1, rho) = project_below(&a, &d).unwrap();
        assert!(a.mul_vector(&x1).unwrap().le(&d).unwrap());
        assert!(rho.is_top());
    }

    #[test]
    fn membership_by_residual() {
        let tol = Tolerance::default();
        let a = m(&[&[1.0, 3.0], &[2.0, 1.0]]);
        let d = v(&[4.0, 5.0]);
        let t = membership(&a, &d, tol).unwrap();
        assert!(t.member);
        let w = t.witness.unwrap();
        assert_eq!(w, v(&[3.0, 1.0]));
        assert_eq!(a.mul_vector(&w).unwrap(), d);

        let d = v(&[0.0, 5.0]);
        let t = membership(&a, &d, tol).unwrap();
        assert!(!t.member);
        assert_eq!(t.delta.value(), 2.0);
        assert!(t.witness.is_none());

        // a column of the matrix is always a member
        let t = membership(&a, &a.column(1), tol).unwrap();
        assert!(t.member);
    }

    #[test]
    fn maximal_element_entries_stay_in_range() {
        // Adjoined maximal elements in the data must not push the residual
        // below the identity.
        let tol = Tolerance::default();
        let a = m(&[&[f64::INFINITY, 0.0]]);
        let d = v(&[f64::INFINITY]);
        let r = nearest_point(&a, &d).unwrap();
        assert_eq!(r.delta.value(), MP.one());
        let t = membership(&a, &d, tol).unwrap();
        assert!(t.member);
        let w = t.witness.unwrap();
        assert_eq!(a.mul_vector(&w).unwrap(), d);
    }

    #[test]
    fn degenerate_inputs_are_rejected() {
        let a = m(&[&[0.0], &[0.0]]);
        assert_eq!(
            nearest_point(&a, &Vector::zeros(MP, 2)),
            Err(Error::ZeroRhs)
        );
        let z = Matrix::zeros(MP, 2, 1);
        assert!(matches!(
            nearest_point(&z, &v(&[1.0, 2.0])),
            Err(Error::ZeroColumn { .. })
        ));
    }
}
