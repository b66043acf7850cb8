//! Rational scalars and exact dense linear algebra.
//!
//! All elimination goes through [`Echelon`], a fraction-free Gauss-Jordan
//! reduction over primitive integer rows. Rational input rows are scaled to
//! integer rows once; every row operation is an integer cross-multiplication
//! followed by removal of the row content, so no rational arithmetic happens
//! inside the elimination loop. Pivots are chosen as the first nonzero entry in
//! column order, then row order, which makes every output deterministic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Arbitrary precision rational, always kept in lowest terms with a positive
/// denominator.
pub type ExactScalar = BigRational;

pub fn scalar(n: i64) -> ExactScalar {
    ExactScalar::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> ExactScalar {
    ExactScalar::new(BigInt::from(n), BigInt::from(d))
}

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<ExactScalar>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            entries: vec![ExactScalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, ExactScalar::one());
        }
        m
    }

    /// Builds a matrix from its rows. Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<ExactScalar>>) -> Self {
        let nrows = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(nrows * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            entries.extend(row);
        }
        QMatrix {
            rows: nrows,
            cols,
            entries,
        }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(nrows: usize, columns: &[Vec<ExactScalar>]) -> Self {
        let mut m = QMatrix::zeros(nrows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), nrows, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    m.set(i, j, v.clone());
                }
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        QMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| scalar(v)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &ExactScalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ExactScalar) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[ExactScalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[ExactScalar]) -> Vec<ExactScalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(ExactScalar::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        Echelon::of_matrix(self).rank()
    }

    /// Exact inverse, or `None` when the matrix is singular or not square.
    pub fn inverse(&self) -> Option<QMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let mut r = self.row(i).to_vec();
            r.extend((0..n).map(|j| {
                if i == j {
                    ExactScalar::one()
                } else {
                    ExactScalar::zero()
                }
            }));
            rows.push(r);
        }
        let ech = Echelon::new(rows, 2 * n);
        if ech.pivots.len() < n || ech.pivots.iter().any(|&p| p >= n) {
            return None;
        }
        let mut inv = QMatrix::zeros(n, n);
        for (k, row) in ech.rows.iter().enumerate() {
            let pivot = &row[ech.pivots[k]];
            for j in 0..n {
                if !row[n + j].is_zero() {
                    inv.set(k, j, ExactScalar::new(row[n + j].clone(), pivot.clone()));
                }
            }
        }
        Some(inv)
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Scales a rational row to a primitive integer row with the same span.
fn integer_row(row: &[ExactScalar]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .filter(|v| !v.is_zero())
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let mut out: Vec<BigInt> = row
        .iter()
        .map(|v| {
            if v.is_zero() {
                BigInt::zero()
            } else {
                v.numer() * (&lcm / v.denom())
            }
        })
        .collect();
    make_primitive(&mut out);
    out
}

fn make_primitive(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for v in row.iter() {
        if !v.is_zero() {
            g = g.gcd(v);
            if g.is_one() {
                return;
            }
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for v in row.iter_mut() {
        if !v.is_zero() {
            *v = &*v / &g;
        }
    }
}

/// Fully reduced fraction-free echelon form.
///
/// `rows[k]` is a primitive integer row whose first nonzero entry sits at
/// column `pivots[k]`; every other row is zero in that column. Rows that
/// reduced to zero are dropped.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

impl Echelon {
    pub fn of_matrix(m: &QMatrix) -> Self {
        let rows = (0..m.rows).map(|i| m.row(i).to_vec()).collect();
        Echelon::new(rows, m.cols)
    }

    pub fn new(rows: Vec<Vec<ExactScalar>>, cols: usize) -> Self {
        let rows: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| {
                debug_assert_eq!(r.len(), cols);
                integer_row(r)
            })
            .collect();
        Echelon::from_integer_rows(rows, cols)
    }

    pub fn from_integer_rows(mut rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..cols {
            let Some(found) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(rank, found);
            if rows[rank][col].is_negative() {
                for v in rows[rank].iter_mut() {
                    *v = -&*v;
                }
            }
            let (head, tail) = rows.split_at_mut(rank);
            let (pivot_row, tail) = tail.split_first_mut().expect("pivot row exists");
            for other in head.iter_mut().chain(tail.iter_mut()) {
                if other[col].is_zero() {
                    continue;
                }
                eliminate(other, pivot_row, col);
            }
            pivots.push(col);
            rank += 1;
        }
        rows.truncate(rank);
        Echelon { rows, pivots, cols }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Free (non-pivot) columns in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols).filter(|&c| !is_pivot[c]).collect()
    }

    /// Rows rescaled so each pivot equals one.
    pub fn normalized_rows(&self) -> Vec<Vec<ExactScalar>> {
        self.rows
            .iter()
            .zip(&self.pivots)
            .map(|(row, &p)| {
                let pivot = &row[p];
                row.iter().map(|v| ExactScalar::new(v.clone(), pivot.clone())).collect()
            })
            .collect()
    }
}

/// `target <- pivot[col] * target - target[col] * pivot`, then made primitive.
fn eliminate(target: &mut [BigInt], pivot: &[BigInt], col: usize) {
    let g = pivot[col].gcd(&target[col]);
    let a = &pivot[col] / &g;
    let b = &target[col] / &g;
    for (t, p) in target.iter_mut().zip(pivot) {
        match (t.is_zero(), p.is_zero()) {
            (true, true) => {}
            (false, true) => *t = &a * &*t,
            (true, false) => *t = -(&b * p),
            (false, false) => *t = &a * &*t - &b * p,
        }
    }
    debug_assert!(target[col].is_zero());
    make_primitive(target);
}

/// Basis of the right null space of `m`.
///
/// One vector per free column `f`: it has a one at `f`, zeros at the other
/// free columns, and the pivot columns solved from the reduced form. The
/// number of vectors is `cols - rank`.
pub fn kernel_basis(m: &QMatrix) -> Vec<Vec<ExactScalar>> {
    kernel_of_echelon(&Echelon::of_matrix(m))
}

pub fn kernel_of_echelon(ech: &Echelon) -> Vec<Vec<ExactScalar>> {
    ech.free_columns()
        .into_iter()
        .map(|f| {
            let mut v = vec![ExactScalar::zero(); ech.cols];
            v[f] = ExactScalar::one();
            for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
                if !row[f].is_zero() {
                    v[p] = -ExactScalar::new(row[f].clone(), row[p].clone());
                }
            }
            v
        })
        .collect()
}

/// One solution of `m x = rhs`, or `None` when the system is inconsistent.
///
/// Free variables are set to zero. `None` is a certificate: the reduced
/// augmented matrix has a pivot in the right-hand-side column.
pub fn solve_linear(m: &QMatrix, rhs: &[ExactScalar]) -> Option<Vec<ExactScalar>> {
    assert_eq!(rhs.len(), m.rows, "right-hand side length must equal row count");
    let cols = m.cols;
    let rows = (0..m.rows)
        .map(|i| {
            let mut r = m.row(i).to_vec();
            r.push(rhs[i].clone());
            r
        })
        .collect();
    let ech = Echelon::new(rows, cols + 1);
    if ech.pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![ExactScalar::zero(); cols];
    for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
        if !row[cols].is_zero() {
            x[p] = ExactScalar::new(row[cols].clone(), row[p].clone());
        }
    }
    Some(x)
}

/// Reduced echelon basis (pivots equal to one) of the span of `vectors`.
pub fn span_basis(vectors: &[Vec<ExactScalar>], dim: usize) -> Vec<Vec<ExactScalar>> {
    Echelon::new(vectors.to_vec(), dim).normalized_rows()
}

/// Coefficients expressing `v` in terms of `generators`, if `v` lies in their span.
pub fn span_coefficients(generators: &[Vec<ExactScalar>], v: &[ExactScalar]) -> Option<Vec<ExactScalar>> {
    let m = QMatrix::from_columns(v.len(), generators);
    solve_linear(&m, v)
}

/// Basis of `span(a) ∩ span(b)`.
///
/// Solves `sum alpha_i a_i = sum beta_j b_j` and maps every kernel vector back
/// through the `a` side. The result is returned in reduced echelon form.
pub fn subspace_intersection(a: &[Vec<ExactScalar>], b: &[Vec<ExactScalar>]) -> Vec<Vec<ExactScalar>> {
    let dim = match a.first().or(b.first()) {
        Some(v) => v.len(),
        None => return Vec::new(),
    };
    assert!(a.iter().chain(b).all(|v| v.len() == dim), "vectors must share a length");
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut columns: Vec<Vec<ExactScalar>> = a.to_vec();
    columns.extend(b.iter().map(|v| v.iter().map(|x| -x).collect()));
    let m = QMatrix::from_columns(dim, &columns);
    let combos: Vec<Vec<ExactScalar>> = kernel_basis(&m)
        .into_iter()
        .map(|k| {
            let mut v = vec![ExactScalar::zero(); dim];
            for (alpha, av) in k.iter().zip(a) {
                if alpha.is_zero() {
                    continue;
                }
                for (slot, x) in v.iter_mut().zip(av) {
                    if !x.is_zero() {
                        *slot += alpha * x;
                    }
                }
            }
            v
        })
        .collect();
    span_basis(&combos, dim)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<ExactScalar> {
        xs.iter().map(|&x| scalar(x)).collect()
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(kernel_basis(&QMatrix::identity(2)).is_empty());
    }

    #[test]
    fn kernel_of_single_relation() {
        let m = QMatrix::from_i64(&[&[1, 1]]);
        assert_eq!(kernel_basis(&m), vec![v(&[-1, 1])]);
    }

    #[test]
    fn kernel_of_zero_matrix_is_standard_basis() {
        let k = kernel_basis(&QMatrix::zeros(3, 3));
        assert_eq!(k, vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])]);
    }

    #[test]
    fn solve_identity() {
        assert_eq!(solve_linear(&QMatrix::identity(2), &v(&[3, 5])), Some(v(&[3, 5])));
    }

    #[test]
    fn solve_detects_contradiction() {
        let m = QMatrix::from_i64(&[&[1], &[0]]);
        assert_eq!(solve_linear(&m, &v(&[0, 1])), None);
    }

    #[test]
    fn solve_exact_division() {
        let m = QMatrix::from_i64(&[&[2]]);
        assert_eq!(solve_linear(&m, &v(&[1])), Some(vec![ratio(1, 2)]));
    }

    #[test]
    fn intersection_examples() {
        assert!(subspace_intersection(&[v(&[1, 0])], &[v(&[0, 1])]).is_empty());
        assert_eq!(subspace_intersection(&[v(&[1, 1])], &[v(&[1, 1])]), vec![v(&[1, 1])]);
        let i = subspace_intersection(&[v(&[1, 0, 0]), v(&[0, 1, 0])], &[v(&[1, 1, 0]), v(&[0, 0, 1])]);
        assert_eq!(i, vec![v(&[1, 1, 0])]);
    }

    #[test]
    fn inverse_round_trip() {
        let m = QMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), QMatrix::identity(2));
        assert!(QMatrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn rank_of_dependent_rows() {
        let m = QMatrix::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(kernel_basis(&m).len(), 1);
    }
}
