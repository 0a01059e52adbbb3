//! Independent brute-force verifiers backing the test suites: grid sweeps
//! over coefficient space, exhaustive subset enumeration of minimal
//! generating sets, family checking by sampling, and a seeded random
//! instance generator.
//!
//! Nothing here is used by the solvers; these are correctness anchors only.

use crate::distance::membership;
use crate::linalg::{IndexSet, Matrix, Vector};
use crate::semifield::{Scalar, Semifield};
use crate::solver::FamilyMember;
use crate::{Error, Result, Tolerance};
use itertools::Itertools;
use rand::Rng;

/// A per-component sweep grid, specified in the additive (max-plus) scale so
/// that one sweep implementation serves all four semifields.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub lower: f64,
    pub upper: f64,
    pub step: f64,
    /// Also try the zero element in every component.
    pub include_zero: bool,
    /// Cap on the total number of grid points.
    pub budget: u128,
}

impl GridSpec {
    pub fn new(lower: f64, upper: f64, step: f64) -> Self {
        Self {
            lower,
            upper,
            step,
            include_zero: false,
            budget: 20_000_000,
        }
    }

    pub fn with_zero(mut self) -> Self {
        self.include_zero = true;
        self
    }

    fn levels(&self, sf: Semifield) -> Result<Vec<f64>> {
        if !self.step.is_finite() || self.step <= 0.0 || self.lower > self.upper {
            return Err(Error::CarrierViolation {
                semifield: sf,
                value: self.step,
            });
        }
        let count = ((self.upper - self.lower) / self.step).floor() as usize + 1;
        let mut levels = Vec::with_capacity(count + 1);
        if self.include_zero {
            levels.push(sf.zero());
        }
        for k in 0..count {
            levels.push(sf.from_additive(self.lower + k as f64 * self.step));
        }
        Ok(levels)
    }
}

/// Which half-space of the span a constrained sweep is restricted to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfSpace {
    /// Points with `A x <= d`.
    Below,
    /// Points with `A x >= d`.
    Above,
}

fn sweep(
    a: &Matrix,
    d: &Vector,
    grid: &GridSpec,
    constraint: Option<HalfSpace>,
) -> Result<Option<(Scalar, Vector)>> {
    let sf = a.semifield();
    let levels = grid.levels(sf)?;
    let n = a.cols();
    let points = (levels.len() as u128)
        .checked_pow(n.min(u32::MAX as usize) as u32)
        .unwrap_or(u128::MAX);
    if points > grid.budget {
        return Err(Error::BudgetExceeded {
            points,
            budget: grid.budget,
        });
    }

    let mut idx = vec![0usize; n];
    let mut x = vec![levels[0]; n];
    let mut y = vec![sf.zero(); d.len()];
    let mut best: Option<(f64, Vec<f64>)> = None;
    loop {
        // y = A x
        for (i, yi) in y.iter_mut().enumerate() {
            let row = a.row_entries(i);
            let mut acc = sf.zero();
            for (aij, &xj) in row.iter().zip(&x) {
                acc = sf.add(acc, sf.mul(*aij, xj));
            }
            *yi = acc;
        }
        let feasible = match constraint {
            None => true,
            Some(HalfSpace::Below) => y.iter().zip(d.entries()).all(|(&yi, &di)| sf.le(yi, di)),
            Some(HalfSpace::Above) => y.iter().zip(d.entries()).all(|(&yi, &di)| sf.le(di, yi)),
        };
        if feasible {
            // rho(y, d), inline for speed
            let mut dev = sf.one();
            for (&yi, &di) in y.iter().zip(d.entries()) {
                dev = match (sf.is_zero(yi), sf.is_zero(di)) {
                    (true, true) => dev,
                    (false, false) => sf.add(
                        dev,
                        sf.add(sf.mul(sf.pseudo_inv(di), yi), sf.mul(sf.pseudo_inv(yi), di)),
                    ),
                    _ => sf.top(),
                };
                if sf.is_top(dev) {
                    break;
                }
            }
            let better = match &best {
                None => true,
                Some((b, _)) => sf.le(dev, *b) && dev != *b,
            };
            if better {
                best = Some((dev, x.clone()));
            }
        }
        // odometer increment
        let mut pos = n;
        for k in (0..n).rev() {
            if idx[k] + 1 < levels.len() {
                idx[k] += 1;
                x[k] = levels[idx[k]];
                pos = k;
                break;
            }
            idx[k] = 0;
            x[k] = levels[0];
        }
        if pos == n {
            break;
        }
    }
    Ok(best.map(|(dev, xs)| {
        let value = Scalar::new(sf, dev).expect("deviations stay in the carrier");
        (
            value,
            Vector::new(sf, xs).expect("grid points stay in the carrier"),
        )
    }))
}

/// Exhaustively minimize `rho(A x, d)` over the grid. The result is always
/// at least the true residual, with equality whenever the analytic minimizer
/// lies on the grid.
pub fn grid_min_distance(a: &Matrix, d: &Vector, grid: &GridSpec) -> Result<(Scalar, Vector)> {
    let found = sweep(a, d, grid, None)?;
    Ok(found.expect("an unconstrained sweep always visits at least one point"))
}

/// The constrained variant of [`grid_min_distance`], restricted to one of the
/// half-spaces; `None` when no grid point is feasible.
pub fn grid_min_distance_on(
    a: &Matrix,
    d: &Vector,
    grid: &GridSpec,
    side: HalfSpace,
) -> Result<Option<(Scalar, Vector)>> {
    sweep(a, d, grid, Some(side))
}

/// All minimal generating column sets of `d`, by testing every nonempty
/// subset of columns through the membership residual. Hard-capped at twelve
/// columns; this is the oracle the solver enumeration is checked against.
pub fn exhaustive_minimal_generators(
    a: &Matrix,
    d: &Vector,
    tol: Tolerance,
) -> Result<Vec<IndexSet>> {
    const CAP: usize = 12;
    let n = a.cols();
    if n > CAP {
        return Err(Error::CapacityExceeded {
            columns: n,
            cap: CAP,
        });
    }
    let mut generating: Vec<Vec<usize>> = Vec::new();
    for k in 1..=n {
        for combo in (0..n).combinations(k) {
            let sub = a.select_columns(&combo)?;
            if membership(&sub, d, tol)?.member {
                generating.push(combo);
            }
        }
    }
    let minimal: Vec<IndexSet> = generating
        .iter()
        .filter(|set| {
            !generating
                .iter()
                .any(|other| other.len() < set.len() && other.iter().all(|j| set.contains(j)))
        })
        .map(|set| set.iter().copied().collect())
        .collect();
    Ok(minimal)
}

/// The verdict of sampling a solution family against its defining problem.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyReport {
    pub passed: bool,
    /// A description of the first violation found, if any.
    pub violation: Option<String>,
    /// How many sample points were checked.
    pub samples: usize,
}

/// Check every member of a family by sampling its extreme point and random
/// interior points: each sample must satisfy `A x = d` and, when a constraint
/// pair is given, `C x <= b`, all within the tolerance.
pub fn verify_family<R: Rng>(
    a: &Matrix,
    d: &Vector,
    constraint: Option<(&Matrix, &Vector)>,
    family: &[FamilyMember],
    tol: Tolerance,
    rng: &mut R,
) -> FamilyReport {
    let sf = a.semifield();
    let mut samples = 0;
    for (k, member) in family.iter().enumerate() {
        let mut points = vec![member.extreme_point()];
        for _ in 0..8 {
            let extreme = member.extreme_point();
            let entries = (0..member.columns())
                .map(|j| {
                    let v = extreme.get(j);
                    if member.fixed.contains_key(&j) || sf.is_zero(v) {
                        return v;
                    }
                    if rng.random_bool(0.15) {
                        return sf.zero();
                    }
                    let slack = f64::from(rng.random_range(0..=6u32)) * 0.5;
                    if sf.is_top(v) {
                        sf.from_additive(f64::from(rng.random_range(-10..=10i32)))
                    } else {
                        sf.mul(v, sf.from_additive(-slack))
                    }
                })
                .collect();
            points.push(Vector::new(sf, entries).expect("samples stay in the carrier"));
        }
        for x in points {
            samples += 1;
            let y = match a.mul_vector(&x) {
                Ok(y) => y,
                Err(e) => {
                    return FamilyReport {
                        passed: false,
                        violation: Some(format!("member {k}: product failed: {e}")),
                        samples,
                    }
                }
            };
            let equal = (0..d.len()).all(|i| tol.eq(sf, y.get(i), d.get(i)));
            if !equal {
                return FamilyReport {
                    passed: false,
                    violation: Some(format!(
                        "member {k}: A x = {y} differs from d = {d} at sample x = {x}"
                    )),
                    samples,
                };
            }
            if let Some((c, b)) = constraint {
                let cx = match c.mul_vector(&x) {
                    Ok(cx) => cx,
                    Err(e) => {
                        return FamilyReport {
                            passed: false,
                            violation: Some(format!("member {k}: constraint product failed: {e}")),
                            samples,
                        }
                    }
                };
                let ok = (0..b.len()).all(|i| tol.le(sf, cx.get(i), b.get(i)));
                if !ok {
                    return FamilyReport {
                        passed: false,
                        violation: Some(format!(
                            "member {k}: C x = {cx} exceeds b = {b} at sample x = {x}"
                        )),
                        samples,
                    };
                }
            }
        }
    }
    FamilyReport {
        passed: true,
        violation: None,
        samples,
    }
}

/// Controls for the seeded random instance generator.
#[derive(Debug, Clone, Copy)]
pub struct InstanceSpec {
    pub semifield: Semifield,
    pub rows: usize,
    pub cols: usize,
    /// Integer entry range in the additive scale, inclusive.
    pub entry_range: (i32, i32),
    /// Probability of a zero entry.
    pub zero_prob: f64,
    /// Reject right-hand sides with any zero component.
    pub regular_rhs: bool,
    /// Reject matrices with zero rows as well as zero columns.
    pub row_regular: bool,
}

impl InstanceSpec {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self {
            semifield: Semifield::MaxPlus,
            rows,
            cols,
            entry_range: (-10, 10),
            zero_prob: 0.1,
            regular_rhs: false,
            row_regular: false,
        }
    }

    pub fn semifield(mut self, sf: Semifield) -> Self {
        self.semifield = sf;
        self
    }

    pub fn regular_rhs(mut self) -> Self {
        self.regular_rhs = true;
        self
    }

    pub fn row_regular(mut self) -> Self {
        self.row_regular = true;
        self
    }
}

fn random_entry<R: Rng>(spec: &InstanceSpec, rng: &mut R, allow_zero: bool) -> f64 {
    let sf = spec.semifield;
    if allow_zero && rng.random_bool(spec.zero_prob) {
        return sf.zero();
    }
    sf.from_additive(f64::from(
        rng.random_range(spec.entry_range.0..=spec.entry_range.1),
    ))
}

/// A random column-regular matrix with integer entries in the additive scale.
pub fn random_matrix<R: Rng>(spec: &InstanceSpec, rng: &mut R) -> Matrix {
    loop {
        let rows: Vec<Vec<f64>> = (0..spec.rows)
            .map(|_| {
                (0..spec.cols)
                    .map(|_| random_entry(spec, rng, true))
                    .collect()
            })
            .collect();
        let m = Matrix::from_rows(spec.semifield, rows).expect("generated shapes are valid");
        if m.is_column_regular() && (!spec.row_regular || m.is_row_regular()) {
            return m;
        }
    }
}

/// A random nonzero right-hand side (regular when requested).
pub fn random_rhs<R: Rng>(spec: &InstanceSpec, rng: &mut R) -> Vector {
    loop {
        let entries: Vec<f64> = (0..spec.rows)
            .map(|_| random_entry(spec, rng, !spec.regular_rhs))
            .collect();
        let v = Vector::new(spec.semifield, entries).expect("generated entries are valid");
        if !v.is_zero_vector() {
            return v;
        }
    }
}

/// A random instance: a column-regular matrix and a nonzero right-hand side.
pub fn random_instance<R: Rng>(spec: &InstanceSpec, rng: &mut R) -> (Matrix, Vector) {
    (random_matrix(spec, rng), random_rhs(spec, rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{general_solution, SolveOptions};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const MP: Semifield = Semifield::MaxPlus;

    fn v(entries: &[f64]) -> Vector {
        Vector::new(MP, entries.to_vec()).unwrap()
    }

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(MP, rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn grid_finds_the_analytic_minimum() {
        let a = m(&[&[0.0], &[0.0]]);
        let d = v(&[3.0, 5.0]);
        let grid = GridSpec::new(0.0, 8.0, 0.5);
        let (best, arg) = grid_min_distance(&a, &d, &grid).unwrap();
        assert_eq!(best.value(), 1.0);
        assert_eq!(arg, v(&[4.0]));
    }

    #[test]
    fn grid_levels_serve_the_times_semifields() {
        // The additive-scale grid maps into any semifield: the max-times
        // image of the known max-plus example has the same sweep result.
        let sf = Semifield::MaxTimes;
        let a = Matrix::from_rows(sf, vec![vec![1.0], vec![1.0]]).unwrap();
        let d = Vector::new(sf, vec![3.0f64.exp(), 5.0f64.exp()]).unwrap();
        let grid = GridSpec::new(0.0, 8.0, 0.5);
        let (best, arg) = grid_min_distance(&a, &d, &grid).unwrap();
        assert!((best.value() - 1.0f64.exp()).abs() < 1e-9);
        assert!((arg.get(0) - 4.0f64.exp()).abs() < 1e-9);
    }

    #[test]
    fn grid_away_from_the_minimizer_stays_above() {
        let a = m(&[&[0.0], &[0.0]]);
        let d = v(&[3.0, 5.0]);
        // the minimizer x = 4 is excluded
        let grid = GridSpec::new(6.0, 9.0, 0.5);
        let (best, _) = grid_min_distance(&a, &d, &grid).unwrap();
        assert!(best.value() > 1.0);
    }

    #[test]
    fn grid_budget_is_enforced() {
        let a = Matrix::identity(MP, 4);
        let d = v(&[1.0, 2.0, 3.0, 4.0]);
        let mut grid = GridSpec::new(-30.0, 30.0, 0.5);
        grid.budget = 1000;
        assert!(matches!(
            grid_min_distance(&a, &d, &grid),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn constrained_sweeps_respect_their_half_space() {
        let a = m(&[&[0.0], &[0.0]]);
        let d = v(&[3.0, 5.0]);
        let grid = GridSpec::new(-8.0, 8.0, 0.5);
        let (below, xb) = grid_min_distance_on(&a, &d, &grid, HalfSpace::Below)
            .unwrap()
            .unwrap();
        assert_eq!(below.value(), 2.0);
        assert!(a.mul_vector(&xb).unwrap().le(&d).unwrap());
        let (above, xa) = grid_min_distance_on(&a, &d, &grid, HalfSpace::Above)
            .unwrap()
            .unwrap();
        assert_eq!(above.value(), 2.0);
        assert!(d.le(&a.mul_vector(&xa).unwrap()).unwrap());
    }

    #[test]
    fn exhaustive_generators_match_hand_results() {
        let tol = Tolerance::default();
        let a = m(&[&[1.0, 3.0], &[2.0, 1.0]]);
        let d = v(&[4.0, 5.0]);
        let g = exhaustive_minimal_generators(&a, &d, tol).unwrap();
        assert_eq!(g, vec![IndexSet::from_iter([0])]);

        let a = m(&[&[0.0, 1.0], &[0.0, 1.0]]);
        let d = v(&[2.0, 2.0]);
        let g = exhaustive_minimal_generators(&a, &d, tol).unwrap();
        assert_eq!(g, vec![IndexSet::from_iter([0]), IndexSet::from_iter([1])]);

        let a = m(&[&[0.0], &[0.0]]);
        assert!(exhaustive_minimal_generators(&a, &v(&[3.0, 5.0]), tol)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn family_verification_passes_solver_output_and_catches_corruption() {
        let tol = Tolerance::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = m(&[&[1.0, 3.0], &[2.0, 1.0]]);
        let d = v(&[4.0, 5.0]);
        let sol = general_solution(&a, &d, &SolveOptions::default()).unwrap();
        let report = verify_family(&a, &d, None, &sol.family, tol, &mut rng);
        assert!(report.passed, "{:?}", report.violation);

        // raising a bound by one must be detected
        let mut corrupted = sol.family.clone();
        let (&j, &bound) = corrupted[0].bounded.iter().next().unwrap();
        corrupted[0].bounded.insert(j, bound + 1.0);
        let report = verify_family(&a, &d, None, &corrupted, tol, &mut rng);
        assert!(!report.passed);
        assert!(report.violation.is_some());
    }

    #[test]
    fn seeded_generator_is_reproducible_and_regular() {
        let spec = InstanceSpec::new(4, 3);
        let mut rng1 = ChaCha8Rng::seed_from_u64(42);
        let mut rng2 = ChaCha8Rng::seed_from_u64(42);
        let (a1, d1) = random_instance(&spec, &mut rng1);
        let (a2, d2) = random_instance(&spec, &mut rng2);
        assert_eq!(a1, a2);
        assert_eq!(d1, d2);
        assert!(a1.is_column_regular());
        assert!(!d1.is_zero_vector());
    }
}
