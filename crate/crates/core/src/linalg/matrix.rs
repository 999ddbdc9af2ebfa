use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{LinalgError, Rational};

/// Row-major dense matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalVector(Vec<Rational>);

impl RationalVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        Self(entries)
    }

    pub fn from_integers(values: &[i64]) -> Self {
        Self(values.iter().map(|&v| super::int(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Integer entries, if every entry is integral and fits in an `i64`.
    pub fn to_integers(&self) -> Option<Vec<i64>> {
        self.0
            .iter()
            .map(|q| {
                if q.is_integer() {
                    i64::try_from(q.numer()).ok()
                } else {
                    None
                }
            })
            .collect()
    }
}

impl std::ops::Index<usize> for RationalVector {
    type Output = Rational;

    fn index(&self, index: usize) -> &Rational {
        &self.0[index]
    }
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                expected: rows * cols,
                actual: entries.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    /// A matrix with no rows and `cols` columns.
    pub fn empty(cols: usize) -> Self {
        Self::zeros(0, cols)
    }

    pub fn identity(size: usize) -> Self {
        let mut out = Self::zeros(size, size);
        for i in 0..size {
            out.entries[i * size + i] = Rational::one();
        }
        out
    }

    /// Builds a matrix from rows. An empty row list yields a 0x0 matrix.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        let height = rows.len();
        let mut entries = Vec::with_capacity(height * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(LinalgError::RaggedRow {
                    row: i,
                    expected: cols,
                    actual: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(Self {
            rows: height,
            cols,
            entries,
        })
    }

    pub fn from_integer_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, LinalgError> {
        Self::from_rows(
            rows.iter()
                .map(|row| row.as_ref().iter().map(|&v| super::int(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.entries[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[Rational] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, col: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, col).clone()).collect()
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(Rational::is_integer)
    }

    /// Integer rows, if every entry is integral and fits in an `i64`.
    pub fn to_integer_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|q| {
                        if q.is_integer() {
                            i64::try_from(q.numer()).ok()
                        } else {
                            None
                        }
                    })
                    .collect()
            })
            .collect()
    }

    pub fn transpose(&self) -> RationalMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            entries.extend((0..self.rows).map(|i| self.get(i, j).clone()));
        }
        RationalMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// Dimension of the row space.
    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    /// Reduced row-echelon form with leading ones and zero rows dropped.
    pub fn rref(&self) -> RationalMatrix {
        self.echelon().0
    }

    /// Reduced row-echelon form together with its pivot columns.
    pub fn rref_with_pivots(&self) -> (RationalMatrix, Vec<usize>) {
        self.echelon()
    }

    fn echelon(&self) -> (RationalMatrix, Vec<usize>) {
        let mut work = self.row_vectors();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for col in 0..self.cols {
            if lead == work.len() {
                break;
            }
            let Some(found) = (lead..work.len()).find(|&i| !work[i][col].is_zero()) else {
                continue;
            };
            work.swap(lead, found);
            let inv = work[lead][col].recip();
            for entry in work[lead].iter_mut() {
                *entry *= &inv;
            }
            let pivot_row = work[lead].clone();
            for (i, row) in work.iter_mut().enumerate() {
                if i == lead || row[col].is_zero() {
                    continue;
                }
                let factor = row[col].clone();
                for (entry, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                    if !p.is_zero() {
                        *entry -= &factor * p;
                    }
                }
            }
            pivots.push(col);
            lead += 1;
        }
        work.truncate(lead);
        let reduced = RationalMatrix {
            rows: lead,
            cols: self.cols,
            entries: work.into_iter().flatten().collect(),
        };
        (reduced, pivots)
    }

    /// Basis of `{x : self * x = 0}` with exactly `cols - rank` vectors.
    pub fn kernel_basis(&self) -> Vec<RationalVector> {
        let (reduced, pivots) = self.echelon();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![Rational::zero(); self.cols];
                v[free] = Rational::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -reduced.get(i, free).clone();
                }
                RationalVector(v)
            })
            .collect()
    }

    /// Unique solution of `self * x = rhs` for a square `self`, or `None` if
    /// the matrix is singular.
    pub fn solve_square(
        &self,
        rhs: &RationalVector,
    ) -> Result<Option<RationalVector>, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows,
                actual: self.cols,
            });
        }
        if rhs.len() != self.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows,
                actual: rhs.len(),
            });
        }
        let size = self.rows;
        let mut augmented = Vec::with_capacity(size * (size + 1));
        for i in 0..size {
            augmented.extend_from_slice(self.row(i));
            augmented.push(rhs[i].clone());
        }
        let augmented = RationalMatrix::new(size, size + 1, augmented)?;
        let (reduced, pivots) = augmented.echelon();
        if pivots.len() < size || pivots[size - 1] != size - 1 {
            return Ok(None);
        }
        Ok(Some(RationalVector(
            (0..size).map(|i| reduced.get(i, size).clone()).collect(),
        )))
    }

    /// Columns listed in `indices`, in that order.
    pub fn select_columns(&self, indices: &[usize]) -> Result<RationalMatrix, LinalgError> {
        if let Some(&bad) = indices.iter().find(|&&c| c >= self.cols) {
            return Err(LinalgError::ColumnOutOfRange {
                index: bad,
                cols: self.cols,
            });
        }
        let mut entries = Vec::with_capacity(self.rows * indices.len());
        for i in 0..self.rows {
            let row = self.row(i);
            entries.extend(indices.iter().map(|&c| row[c].clone()));
        }
        Ok(RationalMatrix {
            rows: self.rows,
            cols: indices.len(),
            entries,
        })
    }

    pub fn select_rows(&self, indices: &[usize]) -> RationalMatrix {
        let mut entries = Vec::with_capacity(self.cols * indices.len());
        for &i in indices {
            entries.extend_from_slice(self.row(i));
        }
        RationalMatrix {
            rows: indices.len(),
            cols: self.cols,
            entries,
        }
    }

    /// Matrix whose column `j` is column `perm[j]` of `self`.
    pub fn permute_columns(&self, perm: &[usize]) -> RationalMatrix {
        self.select_columns(perm)
            .expect("permutation entries are column indices")
    }

    pub fn with_row(&self, row: Vec<Rational>) -> Result<RationalMatrix, LinalgError> {
        if row.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                actual: row.len(),
            });
        }
        let mut entries = self.entries.clone();
        entries.extend(row);
        Ok(RationalMatrix {
            rows: self.rows + 1,
            cols: self.cols,
            entries,
        })
    }

    pub fn mul_vector(&self, x: &[Rational]) -> Result<RationalVector, LinalgError> {
        if x.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                actual: x.len(),
            });
        }
        Ok(RationalVector(
            (0..self.rows)
                .map(|i| {
                    self.row(i)
                        .iter()
                        .zip(x)
                        .filter(|(a, _)| !a.is_zero())
                        .map(|(a, b)| a * b)
                        .sum()
                })
                .collect(),
        ))
    }

    /// `self * x` for an integer vector.
    pub fn mul_integers(&self, x: &[i64]) -> Result<RationalVector, LinalgError> {
        let x: Vec<Rational> = x.iter().map(|&v| super::int(v)).collect();
        self.mul_vector(&x)
    }

    /// True when `v` lies in the row space of an rref matrix with the given
    /// pivots. Only meaningful when `self` is already in reduced form.
    pub fn rref_contains(&self, pivots: &[usize], v: &[Rational]) -> bool {
        debug_assert_eq!(v.len(), self.cols);
        let mut residual = v.to_vec();
        for (i, &p) in pivots.iter().enumerate() {
            let coeff = residual[p].clone();
            if coeff.is_zero() {
                continue;
            }
            for (entry, r) in residual.iter_mut().zip(self.row(i)) {
                if !r.is_zero() {
                    *entry -= &coeff * r;
                }
            }
        }
        residual.iter().all(Zero::is_zero)
    }

    /// Multiplies every row by the least common multiple of its denominators
    /// and divides by the gcd of its numerators.
    pub fn primitive_integer_rows(&self) -> Vec<Vec<BigInt>> {
        use num_integer::Integer;
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let lcm = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
                let scaled: Vec<BigInt> = row
                    .iter()
                    .map(|q| (q * Rational::from_integer(lcm.clone())).to_integer())
                    .collect();
                let gcd = scaled.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
                if gcd.is_zero() {
                    scaled
                } else {
                    scaled.into_iter().map(|v| v / &gcd).collect()
                }
            })
            .collect()
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}
