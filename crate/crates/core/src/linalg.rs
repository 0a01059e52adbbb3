//! Dense vectors, co-vectors, and matrices over a semifield, with
//! component-wise algebra, pseudo-inversion, regularity and support queries,
//! and the vector distance function.
//!
//! Every container carries one semifield tag and raw `f64` entries. Spans of
//! column sets are never materialized; they are always represented by their
//! generator matrix.

use crate::semifield::{Scalar, Semifield};
use crate::{Error, Result};
use std::collections::BTreeSet;
use std::fmt;

fn check_semifields(left: Semifield, right: Semifield) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::SemifieldMismatch { left, right })
    }
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

fn validate_entries(sf: Semifield, entries: &mut [f64]) -> Result<()> {
    for v in entries.iter_mut() {
        if !sf.contains(*v) {
            return Err(Error::CarrierViolation {
                semifield: sf,
                value: *v,
            });
        }
        if *v == 0.0 {
            *v = 0.0; // normalize -0.0
        }
    }
    Ok(())
}

/// A sorted set of row or column indices.
///
/// Indices are stored zero-based; [`IndexSet::one_based`] and the `Display`
/// implementation render them one-based for user-facing output.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct IndexSet(BTreeSet<usize>);

impl IndexSet {
    pub fn new() -> Self {
        Self(BTreeSet::new())
    }

    pub fn insert(&mut self, index: usize) {
        self.0.insert(index);
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.contains(&index)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    /// The indices shifted to one-based form.
    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }
}

impl FromIterator<usize> for IndexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}

/// A column vector over a semifield.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    sf: Semifield,
    entries: Vec<f64>,
}

impl Vector {
    /// A vector with the given entries, validated against the carrier set.
    pub fn new(sf: Semifield, mut entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Empty);
        }
        validate_entries(sf, &mut entries)?;
        Ok(Self { sf, entries })
    }

    /// The zero vector of the given length.
    pub fn zeros(sf: Semifield, len: usize) -> Self {
        Self {
            sf,
            entries: vec![sf.zero(); len.max(1)],
        }
    }

    /// A constant vector filled with `value`.
    pub fn filled(sf: Semifield, len: usize, value: f64) -> Self {
        Self {
            sf,
            entries: vec![value; len.max(1)],
        }
    }

    pub fn semifield(&self) -> Semifield {
        self.sf
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees at least one entry
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> f64 {
        self.entries[i]
    }

    pub fn is_zero_vector(&self) -> bool {
        self.entries.iter().all(|&v| self.sf.is_zero(v))
    }

    /// Regular means no zero entries.
    pub fn is_regular(&self) -> bool {
        self.entries.iter().all(|&v| !self.sf.is_zero(v))
    }

    /// The index set of nonzero entries.
    pub fn support(&self) -> IndexSet {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, &v)| !self.sf.is_zero(v))
            .map(|(i, _)| i)
            .collect()
    }

    /// Component-wise idempotent addition.
    pub fn add(&self, other: &Vector) -> Result<Vector> {
        check_semifields(self.sf, other.sf)?;
        check_len(self.len(), other.len())?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| self.sf.add(a, b))
            .collect();
        Ok(Vector {
            sf: self.sf,
            entries,
        })
    }

    /// Component-wise multiplication by a raw scalar of the same semifield.
    pub fn scale(&self, x: f64) -> Vector {
        let entries = self.entries.iter().map(|&a| self.sf.mul(x, a)).collect();
        Vector {
            sf: self.sf,
            entries,
        }
    }

    /// Multiplication by a tagged scalar, checking semifields.
    pub fn scale_by(&self, x: &Scalar) -> Result<Vector> {
        check_semifields(self.sf, x.semifield())?;
        Ok(self.scale(x.value()))
    }

    /// The pseudo-inverse row vector: entries are inverted on the support and
    /// stay zero elsewhere. Defined only for nonzero vectors.
    pub fn pseudo_inverse(&self) -> Result<CoVector> {
        if self.is_zero_vector() {
            return Err(Error::ZeroVector);
        }
        let entries = self
            .entries
            .iter()
            .map(|&v| self.sf.pseudo_inv(v))
            .collect();
        Ok(CoVector {
            sf: self.sf,
            entries,
        })
    }

    /// The vector distance: `inv(b) a (+) inv(a) b` over the common support
    /// when supports agree, the maximal element when they differ, and the
    /// identity when both vectors are zero.
    pub fn distance(&self, other: &Vector) -> Result<Scalar> {
        check_semifields(self.sf, other.sf)?;
        check_len(self.len(), other.len())?;
        let sf = self.sf;
        let mut acc = sf.one();
        for (&a, &b) in self.entries.iter().zip(&other.entries) {
            match (sf.is_zero(a), sf.is_zero(b)) {
                (true, true) => {}
                (false, false) => {
                    let term = sf.add(sf.mul(sf.pseudo_inv(b), a), sf.mul(sf.pseudo_inv(a), b));
                    acc = sf.add(acc, term);
                }
                _ => return Ok(Scalar::top(sf)),
            }
        }
        Ok(Scalar::new(sf, acc).expect("distance stays in the carrier"))
    }

    /// Component-wise semifield order.
    pub fn le(&self, other: &Vector) -> Result<bool> {
        check_semifields(self.sf, other.sf)?;
        check_len(self.len(), other.len())?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .all(|(&a, &b)| self.sf.le(a, b)))
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_tuple(&self.entries, f)
    }
}

fn fmt_tuple(entries: &[f64], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "(")?;
    for (k, v) in entries.iter().enumerate() {
        if k > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{v}")?;
    }
    write!(f, ")")
}

/// A row vector over a semifield, the shape produced by pseudo-inversion.
#[derive(Debug, Clone, PartialEq)]
pub struct CoVector {
    sf: Semifield,
    entries: Vec<f64>,
}

impl CoVector {
    pub fn new(sf: Semifield, mut entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Empty);
        }
        validate_entries(sf, &mut entries)?;
        Ok(Self { sf, entries })
    }

    pub fn semifield(&self) -> Semifield {
        self.sf
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> f64 {
        self.entries[i]
    }

    pub fn is_zero_vector(&self) -> bool {
        self.entries.iter().all(|&v| self.sf.is_zero(v))
    }

    /// The product of this row with a conforming column, a scalar.
    pub fn dot(&self, x: &Vector) -> Result<Scalar> {
        check_semifields(self.sf, x.semifield())?;
        check_len(self.len(), x.len())?;
        let sf = self.sf;
        let mut acc = sf.zero();
        for (&r, &c) in self.entries.iter().zip(x.entries()) {
            acc = sf.add(acc, sf.mul(r, c));
        }
        Ok(Scalar::new(sf, acc).expect("products stay in the carrier"))
    }

    /// The product of this row with a conforming matrix, a row.
    pub fn mul_matrix(&self, a: &Matrix) -> Result<CoVector> {
        check_semifields(self.sf, a.semifield())?;
        check_len(self.len(), a.rows())?;
        let sf = self.sf;
        let mut entries = vec![sf.zero(); a.cols()];
        for i in 0..a.rows() {
            let r = self.entries[i];
            if sf.is_zero(r) {
                continue;
            }
            for (j, e) in entries.iter_mut().enumerate() {
                *e = sf.add(*e, sf.mul(r, a.get(i, j)));
            }
        }
        Ok(CoVector { sf, entries })
    }

    /// The pseudo-inverse column of a nonzero row.
    pub fn pseudo_inverse(&self) -> Result<Vector> {
        if self.is_zero_vector() {
            return Err(Error::ZeroVector);
        }
        let entries = self
            .entries
            .iter()
            .map(|&v| self.sf.pseudo_inv(v))
            .collect();
        Ok(Vector {
            sf: self.sf,
            entries,
        })
    }
}

impl fmt::Display for CoVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_tuple(&self.entries, f)
    }
}

/// A dense matrix over a semifield, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    sf: Semifield,
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// A matrix from row slices of equal length.
    pub fn from_rows(sf: Semifield, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::Empty);
        }
        let cols = rows[0].len();
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in &rows {
            check_len(cols, row.len())?;
            data.extend_from_slice(row);
        }
        validate_entries(sf, &mut data)?;
        Ok(Self {
            sf,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// The zero matrix of the given shape.
    pub fn zeros(sf: Semifield, rows: usize, cols: usize) -> Self {
        let (rows, cols) = (rows.max(1), cols.max(1));
        Self {
            sf,
            rows,
            cols,
            data: vec![sf.zero(); rows * cols],
        }
    }

    /// The identity matrix of order `n`.
    pub fn identity(sf: Semifield, n: usize) -> Self {
        let mut m = Self::zeros(sf, n, n);
        for i in 0..m.rows {
            m.data[i * m.cols + i] = sf.one();
        }
        m
    }

    /// A matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vector]) -> Result<Self> {
        let first = columns.first().ok_or(Error::Empty)?;
        let sf = first.semifield();
        let rows = first.len();
        let mut data = vec![sf.zero(); rows * columns.len()];
        for (j, col) in columns.iter().enumerate() {
            check_semifields(sf, col.semifield())?;
            check_len(rows, col.len())?;
            for i in 0..rows {
                data[i * columns.len() + j] = col.get(i);
            }
        }
        Ok(Self {
            sf,
            rows,
            cols: columns.len(),
            data,
        })
    }

    pub fn semifield(&self) -> Semifield {
        self.sf
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row_entries(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Column `j` as an owned vector.
    pub fn column(&self, j: usize) -> Vector {
        let entries = (0..self.rows).map(|i| self.get(i, j)).collect();
        Vector {
            sf: self.sf,
            entries,
        }
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(|&v| self.sf.is_zero(v))
    }

    fn row_is_zero(&self, i: usize) -> bool {
        self.row_entries(i).iter().all(|&v| self.sf.is_zero(v))
    }

    pub(crate) fn col_is_zero(&self, j: usize) -> bool {
        (0..self.rows).all(|i| self.sf.is_zero(self.get(i, j)))
    }

    /// Row and column regularity: no zero rows, no zero columns.
    pub fn regularity(&self) -> (bool, bool) {
        let row_regular = (0..self.rows).all(|i| !self.row_is_zero(i));
        let col_regular = (0..self.cols).all(|j| !self.col_is_zero(j));
        (row_regular, col_regular)
    }

    pub fn is_row_regular(&self) -> bool {
        self.regularity().0
    }

    pub fn is_column_regular(&self) -> bool {
        self.regularity().1
    }

    /// The matrix-vector product.
    pub fn mul_vector(&self, x: &Vector) -> Result<Vector> {
        check_semifields(self.sf, x.semifield())?;
        check_len(self.cols, x.len())?;
        let sf = self.sf;
        let xs = x.entries();
        let mut entries = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let row = self.row_entries(i);
            let mut acc = sf.zero();
            for (a, &v) in row.iter().zip(xs) {
                acc = sf.add(acc, sf.mul(*a, v));
            }
            entries.push(acc);
        }
        Ok(Vector { sf, entries })
    }

    /// The matrix-matrix product.
    pub fn mul_matrix(&self, other: &Matrix) -> Result<Matrix> {
        check_semifields(self.sf, other.sf)?;
        check_len(self.cols, other.rows)?;
        let sf = self.sf;
        let mut out = Matrix::zeros(sf, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let b = self.get(i, k);
                if sf.is_zero(b) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = sf.add(out.get(i, j), sf.mul(b, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// The matrix with column `j` removed; requires at least two columns.
    pub fn without_column(&self, j: usize) -> Result<Matrix> {
        if self.cols < 2 {
            return Err(Error::Empty);
        }
        let keep: Vec<usize> = (0..self.cols).filter(|&k| k != j).collect();
        self.select_columns(&keep)
    }

    /// The submatrix formed by the given columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> Result<Matrix> {
        if columns.is_empty() {
            return Err(Error::Empty);
        }
        let mut data = Vec::with_capacity(self.rows * columns.len());
        for i in 0..self.rows {
            for &j in columns {
                data.push(self.get(i, j));
            }
        }
        Ok(Matrix {
            sf: self.sf,
            rows: self.rows,
            cols: columns.len(),
            data,
        })
    }

    /// The submatrix formed by the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Result<Matrix> {
        if rows.is_empty() {
            return Err(Error::Empty);
        }
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            data.extend_from_slice(self.row_entries(i));
        }
        Ok(Matrix {
            sf: self.sf,
            rows: rows.len(),
            cols: self.cols,
            data,
        })
    }

    /// Map the matrix into another semifield under the isomorphism.
    pub fn map_to(&self, target: Semifield) -> Matrix {
        let data = self
            .data
            .iter()
            .map(|&v| self.sf.map_to(target, v))
            .collect();
        Matrix {
            sf: target,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }
}

impl Vector {
    /// Map the vector into another semifield under the isomorphism.
    pub fn map_to(&self, target: Semifield) -> Vector {
        let entries = self
            .entries
            .iter()
            .map(|&v| self.sf.map_to(target, v))
            .collect();
        Vector {
            sf: target,
            entries,
        }
    }

    pub(crate) fn from_raw(sf: Semifield, entries: Vec<f64>) -> Vector {
        debug_assert!(!entries.is_empty());
        Vector { sf, entries }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MP: Semifield = Semifield::MaxPlus;
    const NEG: f64 = f64::NEG_INFINITY;

    fn v(entries: &[f64]) -> Vector {
        Vector::new(MP, entries.to_vec()).unwrap()
    }

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(MP, rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn vector_addition_is_componentwise_max() {
        let a = v(&[1.0, 4.0]);
        let b = v(&[3.0, 2.0]);
        assert_eq!(a.add(&b).unwrap(), v(&[3.0, 4.0]));
        assert_eq!(a.add(&a).unwrap(), a);
        assert_eq!(a.add(&Vector::zeros(MP, 2)).unwrap(), a);
        // the sum dominates both arguments
        assert!(a.le(&a.add(&b).unwrap()).unwrap());
    }

    #[test]
    fn scalar_multiplication_shifts() {
        let a = v(&[1.0, 4.0]);
        assert_eq!(a.scale(2.0), v(&[3.0, 6.0]));
        assert_eq!(a.scale(MP.one()), a);
        assert!(a.scale(MP.zero()).is_zero_vector());
    }

    #[test]
    fn matrix_vector_product() {
        let a = m(&[&[1.0, 3.0], &[2.0, 1.0]]);
        let x = v(&[3.0, 1.0]);
        assert_eq!(a.mul_vector(&x).unwrap(), v(&[4.0, 5.0]));
        let id = Matrix::identity(MP, 2);
        assert_eq!(id.mul_vector(&x).unwrap(), x);
        assert!(Matrix::zeros(MP, 2, 2)
            .mul_vector(&x)
            .unwrap()
            .is_zero_vector());
    }

    #[test]
    fn matrix_product() {
        let a = m(&[&[0.0, 1.0], &[NEG, 0.0]]);
        let b = m(&[&[0.0], &[2.0]]);
        assert_eq!(a.mul_matrix(&b).unwrap(), m(&[&[3.0], &[2.0]]));
        let id = Matrix::identity(MP, 2);
        assert_eq!(id.mul_matrix(&a).unwrap(), a);
        assert!(a
            .mul_matrix(&Matrix::zeros(MP, 2, 3))
            .unwrap()
            .is_zero_matrix());
    }

    #[test]
    fn pseudo_inversion() {
        let x = v(&[2.0, NEG, 5.0]);
        let xi = x.pseudo_inverse().unwrap();
        assert_eq!(xi.entries(), &[-2.0, NEG, -5.0]);
        assert_eq!(xi.dot(&x).unwrap().value(), MP.one());
        let y = Vector::new(Semifield::MaxTimes, vec![4.0, 1.0]).unwrap();
        assert_eq!(y.pseudo_inverse().unwrap().entries(), &[0.25, 1.0]);
        assert_eq!(
            Vector::zeros(MP, 3).pseudo_inverse(),
            Err(Error::ZeroVector)
        );
    }

    #[test]
    fn support_and_regularity() {
        let x = v(&[2.0, NEG, 5.0]);
        assert_eq!(x.support(), IndexSet::from_iter([0, 2]));
        assert!(Vector::zeros(MP, 2).support().is_empty());
        assert_eq!(v(&[1.0, 2.0]).support().len(), 2);

        assert_eq!(m(&[&[0.0, NEG], &[NEG, 0.0]]).regularity(), (true, true));
        assert_eq!(m(&[&[0.0, NEG], &[NEG, NEG]]).regularity(), (false, false));
        assert_eq!(m(&[&[0.0], &[NEG]]).regularity(), (false, true));
    }

    #[test]
    fn vector_distance_is_chebyshev_in_max_plus() {
        let a = v(&[1.0, 2.0]);
        let b = v(&[3.0, 1.0]);
        assert_eq!(a.distance(&b).unwrap().value(), 2.0);
        assert_eq!(a.distance(&a).unwrap().value(), MP.one());
        let c = v(&[1.0, NEG]);
        let d = v(&[1.0, 2.0]);
        assert!(c.distance(&d).unwrap().is_top());
        let z = Vector::zeros(MP, 2);
        assert_eq!(z.distance(&z).unwrap().value(), MP.one());
    }

    #[test]
    fn shape_and_semifield_mismatches() {
        let a = v(&[1.0, 2.0]);
        let b = v(&[1.0, 2.0, 3.0]);
        assert!(matches!(a.add(&b), Err(Error::DimensionMismatch { .. })));
        let c = Vector::new(Semifield::MinPlus, vec![1.0, 2.0]).unwrap();
        assert!(matches!(
            a.distance(&c),
            Err(Error::SemifieldMismatch { .. })
        ));
        assert!(matches!(
            m(&[&[1.0]]).mul_vector(&a),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(Vector::new(Semifield::MaxTimes, vec![-2.0]).is_err());
    }

    #[test]
    fn column_and_row_selection() {
        let a = m(&[&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]]);
        assert_eq!(a.column(1).entries(), &[2.0, 5.0]);
        assert_eq!(a.without_column(0).unwrap(), m(&[&[2.0, 3.0], &[5.0, 6.0]]));
        assert_eq!(a.select_rows(&[1]).unwrap(), m(&[&[4.0, 5.0, 6.0]]));
        let cols = a.select_columns(&[2, 0]).unwrap();
        assert_eq!(cols, m(&[&[3.0, 1.0], &[6.0, 4.0]]));
    }
}
