//! Tropical linear algebra over the four linearly ordered radicable idempotent
//! semifields (max-plus, min-plus, max-times, min-times).
//!
//! The crate solves linear vector equations `A x = d`, inequalities `A x <= d`,
//! combined systems `{A x = d, C x <= b}`, and extended equations
//! `A x (+) b = d` through a distance-based approach: the residual of a right-hand
//! side against the span of the columns of `A` measures how far the system is
//! from solvable, and residuated bounds give maximal solutions and complete
//! solution families indexed by minimal generating column sets.
//!
//! Module map:
//! - [`semifield`]: scalar algebra, order, powers, the scalar distance, and the
//!   isomorphisms between the four semifields;
//! - [`linalg`]: dense vectors, co-vectors, and matrices with pseudo-inversion;
//! - [`distance`]: the consistency transform, residuals, nearest points in a
//!   span, and half-space projections;
//! - [`dependence`]: linear dependence tests, the independence margin, and
//!   basis extraction;
//! - [`solver`]: complete solutions of equations, inequalities, combined
//!   systems, and extended equations;
//! - [`oracle`]: brute-force verifiers (grid sweeps, exhaustive subset
//!   enumeration) used by the test suites, never by the solvers.

pub mod dependence;
pub mod distance;
pub mod linalg;
pub mod oracle;
pub mod semifield;
pub mod solver;

pub use linalg::{CoVector, IndexSet, Matrix, Vector};
pub use semifield::{Rational, Scalar, Semifield};

use std::fmt;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two operands come from different semifields.
    SemifieldMismatch { left: Semifield, right: Semifield },
    /// Vector lengths or matrix shapes do not conform.
    DimensionMismatch { expected: usize, found: usize },
    /// A value does not lie in the carrier set of its semifield.
    CarrierViolation { semifield: Semifield, value: f64 },
    /// The zero element has no multiplicative inverse.
    ZeroInverse,
    /// A non-positive power of the zero element was requested.
    ZeroPower,
    /// A rational exponent needs a nonzero denominator.
    ZeroDenominator,
    /// Pseudo-inversion of the zero vector is undefined.
    ZeroVector,
    /// A zero column violates a column-regularity precondition.
    ZeroColumn { index: usize },
    /// A nonzero right-hand side is required here.
    ZeroRhs,
    /// The matrix is not in the form consistent with the right-hand side.
    InconsistentPair,
    /// No super-solution at finite deviation exists (the residual is infinite).
    NoFiniteProjection,
    /// Subset enumeration would exceed the configured column cap.
    CapacityExceeded { columns: usize, cap: usize },
    /// A grid sweep would exceed the configured point budget.
    BudgetExceeded { points: u128, budget: u128 },
    /// An empty vector or matrix was supplied.
    Empty,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SemifieldMismatch { left, right } => {
                write!(f, "semifield mismatch: {left} vs {right}")
            }
            Self::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Self::CarrierViolation { semifield, value } => {
                write!(f, "value {value} is outside the carrier of {semifield}")
            }
            Self::ZeroInverse => write!(f, "zero has no inverse"),
            Self::ZeroPower => write!(f, "zero cannot be raised to a non-positive power"),
            Self::ZeroDenominator => write!(f, "a rational exponent needs a nonzero denominator"),
            Self::ZeroVector => write!(f, "the zero vector has no pseudo-inverse"),
            Self::ZeroColumn { index } => {
                write!(f, "column {} is zero; a column-regular matrix is required", index + 1)
            }
            Self::ZeroRhs => write!(f, "a nonzero right-hand side is required"),
            Self::InconsistentPair => {
                write!(f, "matrix is not consistent with the right-hand side")
            }
            Self::NoFiniteProjection => {
                write!(f, "no super-solution with finite deviation exists")
            }
            Self::CapacityExceeded { columns, cap } => write!(
                f,
                "enumeration over {columns} columns exceeds the cap of {cap}; raise the cap to proceed"
            ),
            Self::BudgetExceeded { points, budget } => {
                write!(f, "grid of {points} points exceeds the budget of {budget}")
            }
            Self::Empty => write!(f, "empty vectors and matrices are not supported"),
        }
    }
}

impl std::error::Error for Error {}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Comparison tolerance, applied in the additive (max-plus) scale shared by
/// all four semifields through their isomorphisms.
///
/// For the plus-semifields this is an absolute tolerance on carrier values;
/// for the times-semifields it becomes a relative tolerance, which is the
/// regime where square roots accumulate rounding. Integer max-plus instances
/// compare exactly since their gaps are far above any reasonable epsilon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    eps: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { eps: 1e-9 }
    }
}

impl Tolerance {
    /// A tolerance with the given epsilon (must be finite and non-negative).
    pub fn new(eps: f64) -> Result<Self> {
        if eps.is_finite() && eps >= 0.0 {
            Ok(Self { eps })
        } else {
            Err(Error::CarrierViolation {
                semifield: Semifield::MaxPlus,
                value: eps,
            })
        }
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Equality of two carrier values of `sf` within the tolerance.
    pub fn eq(&self, sf: Semifield, x: f64, y: f64) -> bool {
        let (a, b) = (sf.to_additive(x), sf.to_additive(y));
        a == b || (a - b).abs() <= self.eps
    }

    /// `x <= y` in the semifield order, with slack `eps`.
    pub fn le(&self, sf: Semifield, x: f64, y: f64) -> bool {
        let (a, b) = (sf.to_additive(x), sf.to_additive(y));
        a <= b + self.eps || a == b
    }

    /// `x < y` in the semifield order, strictly beyond the tolerance.
    pub fn lt(&self, sf: Semifield, x: f64, y: f64) -> bool {
        let (a, b) = (sf.to_additive(x), sf.to_additive(y));
        a != b && b - a > self.eps
    }

    /// Whether `x` equals the multiplicative identity of `sf`.
    pub fn is_one(&self, sf: Semifield, x: f64) -> bool {
        self.eq(sf, x, sf.one())
    }
}
