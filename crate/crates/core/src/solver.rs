//! Complete solutions of tropical linear problems: the inequality `A x <= d`,
//! the equation `A x = d` (existence, maximal solution, uniqueness,
//! pseudo-solution, full solution family), the combined system
//! `{A x = d, C x <= b}`, and the extended equation `A x (+) b = d`.
//!
//! Solvers accept raw input: degenerate cases (zero columns, a zero matrix, a
//! zero right-hand side) are handled by [`preprocess`] with closed-form
//! verdicts, and results are reported in the original column indexing.

use crate::distance::{
    make_consistent, membership, residual_core, residuated_bound, ConsistentForm,
};
use crate::linalg::{IndexSet, Matrix, Vector};
use crate::semifield::{Scalar, Semifield};
use crate::{Error, Result, Tolerance};
use itertools::Itertools;
use std::collections::BTreeMap;
use std::fmt;

/// Default cap on the column count of subset enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 20;

/// Knobs shared by the solving operations.
#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub tolerance: Tolerance,
    pub enumeration_cap: usize,
    pub check_uniqueness: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tolerance: Tolerance::default(),
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            check_uniqueness: false,
        }
    }
}

/// A problem reduced to a column-regular matrix and nonzero right-hand side.
#[derive(Debug, Clone)]
pub struct ReducedProblem {
    /// The matrix with zero columns removed (original entries otherwise).
    pub matrix: Matrix,
    /// The right-hand side, unchanged.
    pub rhs: Vector,
    /// Original indices of the removed zero columns; their unknowns are free.
    pub free: IndexSet,
    /// Original column index of each reduced column.
    pub kept: Vec<usize>,
    /// The consistency transform of the reduced pair.
    pub consistency: ConsistentForm,
}

impl ReducedProblem {
    /// Scatter reduced entries back to original indexing, with `free_value`
    /// at the free positions.
    fn expand(&self, reduced: &[f64], free_value: f64) -> Vector {
        let sf = self.matrix.semifield();
        let n = self.kept.len() + self.free.len();
        let mut entries = vec![free_value; n];
        for (r, &orig) in self.kept.iter().enumerate() {
            entries[orig] = reduced[r];
        }
        Vector::new(sf, entries).expect("expanded entries stay in the carrier")
    }
}

/// The outcome of preprocessing a raw `(A, d)` pair.
#[derive(Debug, Clone)]
pub enum Preprocessed {
    /// The matrix is zero: the equation is solved by every vector when the
    /// right-hand side is zero and by none otherwise; the inequality is
    /// solved by every vector regardless.
    ZeroMatrix { columns: usize, zero_rhs: bool },
    /// The right-hand side is zero: the equation and the inequality are both
    /// solved exactly by the zero vector on the non-free columns, uniquely so
    /// when no column is free.
    ZeroRhs { free: IndexSet, columns: usize },
    /// A genuine problem, reduced to column-regular form.
    Problem(Box<ReducedProblem>),
}

/// Validate shapes, strip zero columns, resolve trivial verdicts, and put the
/// remaining problem into consistent form with an index map back to the
/// original columns.
pub fn preprocess(a: &Matrix, d: &Vector) -> Result<Preprocessed> {
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
    let zero_cols: IndexSet = (0..a.cols()).filter(|&j| a.col_is_zero(j)).collect();
    if zero_cols.len() == a.cols() {
        return Ok(Preprocessed::ZeroMatrix {
            columns: a.cols(),
            zero_rhs: d.is_zero_vector(),
        });
    }
    if d.is_zero_vector() {
        return Ok(Preprocessed::ZeroRhs {
            free: zero_cols,
            columns: a.cols(),
        });
    }
    let kept: Vec<usize> = (0..a.cols()).filter(|j| !zero_cols.contains(*j)).collect();
    let matrix = a.select_columns(&kept)?;
    let consistency = make_consistent(&matrix, d)?;
    Ok(Preprocessed::Problem(Box::new(ReducedProblem {
        matrix,
        rhs: d.clone(),
        free: zero_cols,
        kept,
        consistency,
    })))
}

/// The complete solution of the inequality `A x <= d`.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalitySolution {
    /// The residuated upper bound: `x` solves the inequality iff `x` lies at
    /// or below this vector componentwise (free components are unrestricted
    /// and carry the maximal element here).
    pub upper_bound: Vector,
    /// Columns whose unknowns range over the whole semifield.
    pub free_cols: IndexSet,
}

/// Solve `A x <= d` for raw input; always solvable.
pub fn solve_inequality(a: &Matrix, d: &Vector) -> Result<InequalitySolution> {
    let sf = a.semifield();
    match preprocess(a, d)? {
        Preprocessed::ZeroMatrix { columns, .. } => Ok(InequalitySolution {
            upper_bound: Vector::filled(sf, columns, sf.top()),
            free_cols: (0..columns).collect(),
        }),
        Preprocessed::ZeroRhs { free, columns } => {
            let entries = (0..columns)
                .map(|j| {
                    if free.contains(j) {
                        sf.top()
                    } else {
                        sf.zero()
                    }
                })
                .collect();
            Ok(InequalitySolution {
                upper_bound: Vector::new(sf, entries)?,
                free_cols: free,
            })
        }
        Preprocessed::Problem(rp) => {
            let bound = residuated_bound(&rp.matrix, &rp.rhs);
            Ok(InequalitySolution {
                upper_bound: rp.expand(bound.entries(), sf.top()),
                free_cols: rp.free.clone(),
            })
        }
    }
}

/// The verdict on the equation `A x = d`.
#[derive(Debug, Clone, PartialEq)]
pub struct EquationSolution {
    /// Whether the equation has a solution (the residual is the identity).
    pub solvable: bool,
    /// The residual of `d` against the span of the columns.
    pub delta: Scalar,
    /// The greatest solution, present iff solvable.
    pub maximal: Option<Vector>,
    /// Whether the solution is unique; computed only on request, and only
    /// for solvable instances.
    pub unique: Option<bool>,
    /// The deviation-minimizing pseudo-solution, always present.
    pub pseudo: Vector,
}

/// Solve `A x = d` for raw input. Unsolvable is a verdict, not an error.
pub fn solve_equation(a: &Matrix, d: &Vector, opts: &SolveOptions) -> Result<EquationSolution> {
    let sf = a.semifield();
    match preprocess(a, d)? {
        Preprocessed::ZeroMatrix {
            columns,
            zero_rhs: true,
        } => {
            let all = Vector::filled(sf, columns, sf.top());
            Ok(EquationSolution {
                solvable: true,
                delta: Scalar::one(sf),
                maximal: Some(all.clone()),
                unique: Some(false),
                pseudo: all,
            })
        }
        Preprocessed::ZeroMatrix {
            columns,
            zero_rhs: false,
        } => Ok(EquationSolution {
            solvable: false,
            delta: Scalar::top(sf),
            maximal: None,
            unique: None,
            pseudo: Vector::zeros(sf, columns),
        }),
        Preprocessed::ZeroRhs { free, columns } => {
            let entries: Vec<f64> = (0..columns)
                .map(|j| {
                    if free.contains(j) {
                        sf.top()
                    } else {
                        sf.zero()
                    }
                })
                .collect();
            let x = Vector::new(sf, entries)?;
            Ok(EquationSolution {
                solvable: true,
                delta: Scalar::one(sf),
                maximal: Some(x.clone()),
                unique: Some(free.is_empty()),
                pseudo: x,
            })
        }
        Preprocessed::Problem(rp) => {
            let core = residual_core(&rp.matrix, &rp.rhs)?;
            let solvable = opts.tolerance.is_one(sf, core.delta);
            let maximal = solvable.then(|| rp.expand(core.bound.entries(), sf.top()));
            let pseudo = rp.expand(core.bound.scale(core.delta).entries(), sf.top());
            let unique = if solvable && opts.check_uniqueness {
                let sets = minimal_generator_sets(&rp.matrix, &rp.rhs, opts)?;
                let members = family_members(&rp, &core.bound, &sets, None);
                Some(members.len() == 1 && members[0].bounded.is_empty() && rp.free.is_empty())
            } else {
                None
            };
            Ok(EquationSolution {
                solvable,
                delta: Scalar::new(sf, core.delta)?,
                maximal,
                unique,
                pseudo,
            })
        }
    }
}

/// The two-sided bounds around `d`: the greatest sub-solution and the least
/// deviating super-solution, both at deviation equal to the squared residual.
pub fn bilateral_bounds(a: &Matrix, d: &Vector) -> Result<(Vector, Vector)> {
    let sf = a.semifield();
    match preprocess(a, d)? {
        Preprocessed::ZeroMatrix {
            columns,
            zero_rhs: true,
        } => {
            let all = Vector::filled(sf, columns, sf.top());
            Ok((all.clone(), all))
        }
        Preprocessed::ZeroMatrix {
            zero_rhs: false, ..
        } => Err(Error::NoFiniteProjection),
        Preprocessed::ZeroRhs { free, columns } => {
            let entries: Vec<f64> = (0..columns)
                .map(|j| {
                    if free.contains(j) {
                        sf.top()
                    } else {
                        sf.zero()
                    }
                })
                .collect();
            let x = Vector::new(sf, entries)?;
            Ok((x.clone(), x))
        }
        Preprocessed::Problem(rp) => {
            let core = residual_core(&rp.matrix, &rp.rhs)?;
            if sf.is_top(core.delta) {
                return Err(Error::NoFiniteProjection);
            }
            let delta_sq = sf.mul(core.delta, core.delta);
            let below = rp.expand(core.bound.entries(), sf.top());
            let above = rp.expand(core.bound.scale(delta_sq).entries(), sf.top());
            Ok((below, above))
        }
    }
}

/// One member of a solution family: the unknowns of the generating columns
/// are pinned, every other unknown ranges from zero up to its bound.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyMember {
    /// The minimal generating column set indexing this member.
    pub generators: IndexSet,
    /// Pinned components: the generators, plus any component whose upper
    /// bound collapses to zero.
    pub fixed: BTreeMap<usize, f64>,
    /// Upper bounds of the remaining components (the maximal element marks a
    /// free component).
    pub bounded: BTreeMap<usize, f64>,
    semifield: Semifield,
    columns: usize,
}

impl FamilyMember {
    /// The member's extreme point: every bounded component at its bound.
    pub fn extreme_point(&self) -> Vector {
        let sf = self.semifield;
        let entries = (0..self.columns)
            .map(|j| {
                self.fixed
                    .get(&j)
                    .or_else(|| self.bounded.get(&j))
                    .copied()
                    .unwrap_or(sf.zero())
            })
            .collect();
        Vector::new(sf, entries).expect("member values stay in the carrier")
    }

    pub fn semifield(&self) -> Semifield {
        self.semifield
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    /// Whether `x` belongs to this member's solution set.
    pub fn contains(&self, x: &Vector, tol: Tolerance) -> bool {
        if x.len() != self.columns || x.semifield() != self.semifield {
            return false;
        }
        let sf = self.semifield;
        self.fixed.iter().all(|(&j, &v)| tol.eq(sf, x.get(j), v))
            && self.bounded.iter().all(|(&j, &b)| tol.le(sf, x.get(j), b))
    }
}

/// Why a family-producing solver reported no solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnsolvableReason {
    /// The residual of the equation part exceeds the identity.
    ResidualAboveIdentity,
    /// No minimal generating set survives the inequality constraints.
    ConstraintFilterEmpty,
    /// The additive term exceeds the target somewhere (extended equation).
    RhsExceedsTarget,
}

impl fmt::Display for UnsolvableReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ResidualAboveIdentity => write!(f, "residual exceeds the identity"),
            Self::ConstraintFilterEmpty => {
                write!(f, "no generating set satisfies the constraints")
            }
            Self::RhsExceedsTarget => write!(f, "b not ≤ d"),
        }
    }
}

/// A solution family together with the solvability verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilySolution {
    pub solvable: bool,
    /// The residual of the (equation part of the) problem.
    pub delta: Scalar,
    /// One member per admissible minimal generating set; empty iff unsolvable.
    pub family: Vec<FamilyMember>,
    pub reason: Option<UnsolvableReason>,
}

impl FamilySolution {
    fn unsolvable(delta: Scalar, reason: UnsolvableReason) -> Self {
        Self {
            solvable: false,
            delta,
            family: Vec::new(),
            reason: Some(reason),
        }
    }

    fn solved(delta: Scalar, family: Vec<FamilyMember>) -> Self {
        Self {
            solvable: true,
            delta,
            family,
            reason: None,
        }
    }
}

/// All column index sets that generate `d` minimally: the subset spans `d`
/// and no proper subset does. Deterministic order: increasing cardinality,
/// then lexicographic. Empty exactly when the equation is unsolvable.
pub fn enumerate_minimal_generators(
    a: &Matrix,
    d: &Vector,
    opts: &SolveOptions,
) -> Result<Vec<IndexSet>> {
    match preprocess(a, d)? {
        Preprocessed::ZeroMatrix { zero_rhs: true, .. } => Ok(vec![IndexSet::new()]),
        Preprocessed::ZeroMatrix {
            zero_rhs: false, ..
        } => Ok(Vec::new()),
        // The zero vector is generated by the empty column set.
        Preprocessed::ZeroRhs { .. } => Ok(vec![IndexSet::new()]),
        Preprocessed::Problem(rp) => {
            let sets = minimal_generator_sets(&rp.matrix, &rp.rhs, opts)?;
            Ok(sets
                .into_iter()
                .map(|s| s.into_iter().map(|j| rp.kept[j]).collect())
                .collect())
        }
    }
}

/// Core enumeration over a column-regular matrix; indices are local.
///
/// Breadth-first over subset cardinality with a membership test per subset;
/// any found generator prunes all of its supersets, so survivors are minimal.
fn minimal_generator_sets(a: &Matrix, d: &Vector, opts: &SolveOptions) -> Result<Vec<Vec<usize>>> {
    let n = a.cols();
    if n > opts.enumeration_cap {
        return Err(Error::CapacityExceeded {
            columns: n,
            cap: opts.enumeration_cap,
        });
    }
    let mut found: Vec<Vec<usize>> = Vec::new();
    for k in 1..=n {
        for combo in (0..n).combinations(k) {
            if found.iter().any(|f| f.iter().all(|j| combo.contains(j))) {
                continue;
            }
            let sub = a.select_columns(&combo)?;
            if membership(&sub, d, opts.tolerance)?.member {
                found.push(combo);
            }
        }
    }
    Ok(found)
}

/// Assemble family members from generator sets and per-column upper bounds.
///
/// `bound` holds the equation-side bounds of the reduced columns; the value
/// of a generator column doubles as its pinned component. `extra` optionally
/// tightens non-generator components (in reduced indexing) with the bounds
/// coming from an inequality constraint. Bounds that collapse to zero are
/// represented as pinned-at-zero components; free columns stay bounded by the
/// maximal element.
fn family_members(
    rp: &ReducedProblem,
    bound: &Vector,
    sets: &[Vec<usize>],
    extra: Option<&[f64]>,
) -> Vec<FamilyMember> {
    let sf = rp.matrix.semifield();
    let n = rp.kept.len() + rp.free.len();
    sets.iter()
        .map(|set| {
            let mut fixed = BTreeMap::new();
            let mut bounded = BTreeMap::new();
            for (r, &orig) in rp.kept.iter().enumerate() {
                if set.contains(&r) {
                    fixed.insert(orig, bound.get(r));
                } else {
                    let mut ub = bound.get(r);
                    if let Some(extra) = extra {
                        ub = sf.order_min(ub, extra[r]);
                    }
                    if sf.is_zero(ub) {
                        fixed.insert(orig, ub);
                    } else {
                        bounded.insert(orig, ub);
                    }
                }
            }
            for j in rp.free.iter() {
                bounded.insert(j, sf.top());
            }
            FamilyMember {
                generators: set.iter().map(|&r| rp.kept[r]).collect(),
                fixed,
                bounded,
                semifield: sf,
                columns: n,
            }
        })
        .collect()
}

fn trivial_family(sf: Semifield, columns: usize, free: &IndexSet) -> Vec<FamilyMember> {
    // d = 0: the non-free unknowns are pinned at zero, the free ones range
    // over the whole semifield.
    let mut fixed = BTreeMap::new();
    let mut bounded = BTreeMap::new();
    for j in 0..columns {
        if free.contains(j) {
            bounded.insert(j, sf.top());
        } else {
            fixed.insert(j, sf.zero());
        }
    }
    vec![FamilyMember {
        generators: IndexSet::new(),
        fixed,
        bounded,
        semifield: sf,
        columns,
    }]
}

/// The general solution of `A x = d`: one family member per minimal
/// generating column set, each pinning the generators' coefficients and
/// bounding the rest.
pub fn general_solution(a: &Matrix, d: &Vector, opts: &SolveOptions) -> Result<FamilySolution> {
    let sf = a.semifield();
    match preprocess(a, d)? {
        Preprocessed::ZeroMatrix {
            columns,
            zero_rhs: true,
        } => {
            let mut bounded = BTreeMap::new();
            for j in 0..columns {
                bounded.insert(j, sf.top());
            }
            let member = FamilyMember {
                generators: IndexSet::new(),
                fixed: BTreeMap::new(),
                bounded,
                semifield: sf,
                columns,
            };
            Ok(FamilySolution::solved(Scalar::one(sf), vec![member]))
        }
        Preprocessed::ZeroMatrix {
            zero_rhs: false, ..
        } => Ok(FamilySolution::unsolvable(
            Scalar::top(sf),
            UnsolvableReason::ResidualAboveIdentity,
        )),
        Preprocessed::ZeroRhs { free, columns } => Ok(FamilySolution::solved(
            Scalar::one(sf),
            trivial_family(sf, columns, &free),
        )),
        Preprocessed::Problem(rp) => {
            let core = residual_core(&rp.matrix, &rp.rhs)?;
            let delta = Scalar::new(sf, core.delta)?;
            if !opts.tolerance.is_one(sf, core.delta) {
                return Ok(FamilySolution::unsolvable(
                    delta,
                    UnsolvableReason::ResidualAboveIdentity,
                ));
            }
            let sets = minimal_generator_sets(&rp.matrix, &rp.rhs, opts)?;
            let family = family_members(&rp, &core.bound, &sets, None);
            Ok(FamilySolution::solved(delta, family))
        }
    }
}

/// Solve the combined system `{A x = d, C x <= b}`.
///
/// The equation's minimal generating sets are filtered to those whose pinned
/// components respect the constraint bounds; surviving members get their
/// remaining components bounded by the order minimum of the equation-side and
/// constraint-side residuated bounds.
pub fn solve_system(
    a: &Matrix,
    d: &Vector,
    c: &Matrix,
    b: &Vector,
    opts: &SolveOptions,
) -> Result<FamilySolution> {
    let sf = a.semifield();
    if c.semifield() != sf || b.semifield() != sf {
        return Err(Error::SemifieldMismatch {
            left: sf,
            right: c.semifield(),
        });
    }
    if c.cols() != a.cols() {
        return Err(Error::DimensionMismatch {
            expected: a.cols(),
            found: c.cols(),
        });
    }
    if b.len() != c.rows() {
        return Err(Error::DimensionMismatch {
            expected: c.rows(),
            found: b.len(),
        });
    }
    for matrix in [a, c] {
        for j in 0..matrix.cols() {
            if matrix.col_is_zero(j) {
                return Err(Error::ZeroColumn { index: j });
            }
        }
    }
    if d.is_zero_vector() || b.is_zero_vector() {
        return Err(Error::ZeroRhs);
    }
    let rp = match preprocess(a, d)? {
        Preprocessed::Problem(rp) => rp,
        _ => unreachable!("zero columns and zero rhs were rejected above"),
    };
    let core = residual_core(&rp.matrix, &rp.rhs)?;
    let delta = Scalar::new(sf, core.delta)?;
    if !opts.tolerance.is_one(sf, core.delta) {
        return Ok(FamilySolution::unsolvable(
            delta,
            UnsolvableReason::ResidualAboveIdentity,
        ));
    }
    let sets = minimal_generator_sets(&rp.matrix, &rp.rhs, opts)?;
    let constraint_bound = residuated_bound(c, b);
    let admissible: Vec<Vec<usize>> = sets
        .into_iter()
        .filter(|set| {
            set.iter().all(|&r| {
                opts.tolerance
                    .le(sf, core.bound.get(r), constraint_bound.get(rp.kept[r]))
            })
        })
        .collect();
    if admissible.is_empty() {
        return Ok(FamilySolution::unsolvable(
            delta,
            UnsolvableReason::ConstraintFilterEmpty,
        ));
    }
    let extra: Vec<f64> = rp
        .kept
        .iter()
        .map(|&orig| constraint_bound.get(orig))
        .collect();
    let family = family_members(&rp, &core.bound, &admissible, Some(&extra));
    Ok(FamilySolution::solved(delta, family))
}

/// The row split of an extended equation `A x (+) b = d` into its equation
/// part (rows where the addend stays strictly below the target) and its
/// inequality part (rows where they tie).
#[derive(Debug, Clone)]
pub struct ExtendedSplit {
    /// Rows with `b_i < d_i`, strictly beyond the tolerance.
    pub rows_strict: IndexSet,
    /// Rows with `b_i = d_i` (ties within the tolerance land here).
    pub rows_tied: IndexSet,
    /// The equation part `A_1 x = d_1`, absent when no row is strict.
    pub equation: Option<(Matrix, Vector)>,
    /// The inequality part `A_2 x <= b_2`, absent when no row ties.
    pub constraint: Option<(Matrix, Vector)>,
}

impl ExtendedSplit {
    /// Split the rows of an extended equation. Returns `None` when `b <= d`
    /// fails somewhere, in which case the equation has no solution.
    pub fn new(a: &Matrix, b: &Vector, d: &Vector, tol: Tolerance) -> Result<Option<Self>> {
        let sf = a.semifield();
        if b.semifield() != sf || d.semifield() != sf {
            return Err(Error::SemifieldMismatch {
                left: sf,
                right: b.semifield(),
            });
        }
        if b.len() != a.rows() {
            return Err(Error::DimensionMismatch {
                expected: a.rows(),
                found: b.len(),
            });
        }
        if d.len() != a.rows() {
            return Err(Error::DimensionMismatch {
                expected: a.rows(),
                found: d.len(),
            });
        }
        let mut rows_strict = IndexSet::new();
        let mut rows_tied = IndexSet::new();
        for i in 0..a.rows() {
            if tol.lt(sf, b.get(i), d.get(i)) {
                rows_strict.insert(i);
            } else if tol.eq(sf, b.get(i), d.get(i)) {
                rows_tied.insert(i);
            } else {
                return Ok(None);
            }
        }
        let take = |rows: &IndexSet| -> Result<Option<(Matrix, Vector)>> {
            if rows.is_empty() {
                return Ok(None);
            }
            let idx: Vec<usize> = rows.iter().collect();
            let sub = a.select_rows(&idx)?;
            let rhs = Vector::new(sf, idx.iter().map(|&i| d.get(i)).collect())?;
            Ok(Some((sub, rhs)))
        };
        let equation = take(&rows_strict)?;
        let constraint = if rows_tied.is_empty() {
            None
        } else {
            let idx: Vec<usize> = rows_tied.iter().collect();
            let sub = a.select_rows(&idx)?;
            let rhs = Vector::new(sf, idx.iter().map(|&i| b.get(i)).collect())?;
            Some((sub, rhs))
        };
        Ok(Some(Self {
            rows_strict,
            rows_tied,
            equation,
            constraint,
        }))
    }
}

/// Solve the extended equation `A x (+) b = d`.
///
/// Requires `b <= d` (otherwise the verdict is "no solution"); the problem is
/// equivalent to the system `{A_1 x = d_1, A_2 x <= b_2}` over the row split,
/// and when no row is strict the family is the full solution set of the
/// inequality `A x <= d`.
pub fn solve_extended(
    a: &Matrix,
    b: &Vector,
    d: &Vector,
    opts: &SolveOptions,
) -> Result<FamilySolution> {
    let sf = a.semifield();
    for j in 0..a.cols() {
        if a.col_is_zero(j) {
            return Err(Error::ZeroColumn { index: j });
        }
    }
    if d.is_zero_vector() {
        return Err(Error::ZeroRhs);
    }
    let split = match ExtendedSplit::new(a, b, d, opts.tolerance)? {
        Some(split) => split,
        None => {
            return Ok(FamilySolution::unsolvable(
                Scalar::top(sf),
                UnsolvableReason::RhsExceedsTarget,
            ))
        }
    };
    let n = a.cols();
    let Some((a1, d1)) = split.equation.as_ref() else {
        // b = d everywhere: the equation part is vacuous and the family is
        // exactly the solution set of A x <= d.
        let bound = residuated_bound(a, d);
        let rp = ReducedProblem {
            matrix: a.clone(),
            rhs: d.clone(),
            free: IndexSet::new(),
            kept: (0..n).collect(),
            consistency: make_consistent(a, d)?,
        };
        let family = family_members(&rp, &bound, &[Vec::new()], None);
        return Ok(FamilySolution::solved(Scalar::one(sf), family));
    };

    // Columns that vanish on the strict rows impose no equation constraint.
    let kept1: Vec<usize> = (0..n).filter(|&j| !a1.col_is_zero(j)).collect();
    if kept1.is_empty() {
        // The equation part has a nonzero target but no generators.
        return Ok(FamilySolution::unsolvable(
            Scalar::top(sf),
            UnsolvableReason::ResidualAboveIdentity,
        ));
    }
    let a1s = a1.select_columns(&kept1)?;
    let core = residual_core(&a1s, d1)?;
    let delta = Scalar::new(sf, core.delta)?;
    if !opts.tolerance.is_one(sf, core.delta) {
        return Ok(FamilySolution::unsolvable(
            delta,
            UnsolvableReason::ResidualAboveIdentity,
        ));
    }
    let sets = minimal_generator_sets(&a1s, d1, opts)?;
    let constraint_bound = match split.constraint.as_ref() {
        Some((a2, b2)) => residuated_bound(a2, b2),
        None => Vector::filled(sf, n, sf.top()),
    };
    let admissible: Vec<Vec<usize>> = sets
        .into_iter()
        .filter(|set| {
            set.iter().all(|&r| {
                opts.tolerance
                    .le(sf, core.bound.get(r), constraint_bound.get(kept1[r]))
            })
        })
        .collect();
    if admissible.is_empty() {
        return Ok(FamilySolution::unsolvable(
            delta,
            UnsolvableReason::ConstraintFilterEmpty,
        ));
    }
    let free1: IndexSet = (0..n).filter(|j| !kept1.contains(j)).collect();
    let rp = ReducedProblem {
        matrix: a1s,
        rhs: d1.clone(),
        free: free1,
        kept: kept1.clone(),
        consistency: core.form.clone(),
    };
    let extra: Vec<f64> = kept1
        .iter()
        .map(|&orig| constraint_bound.get(orig))
        .collect();
    let mut family = family_members(&rp, &core.bound, &admissible, Some(&extra));
    // Components free for the equation part are still capped by the
    // inequality part.
    for member in &mut family {
        let free_caps: Vec<(usize, f64)> = member
            .bounded
            .iter()
            .filter(|(j, &v)| rp.free.contains(**j) && sf.is_top(v))
            .map(|(&j, _)| (j, constraint_bound.get(j)))
            .collect();
        for (j, cap) in free_caps {
            if sf.is_zero(cap) {
                member.bounded.remove(&j);
                member.fixed.insert(j, cap);
            } else {
                member.bounded.insert(j, cap);
            }
        }
    }
    Ok(FamilySolution::solved(delta, family))
}
