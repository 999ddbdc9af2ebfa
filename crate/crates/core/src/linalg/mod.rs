//! Exact rational linear algebra.
//!
//! Everything in here works over arbitrary-precision rationals; there is no
//! floating point anywhere in the module. Matrices with zero rows or zero
//! columns are legal and have rank 0.

mod feasibility;
mod integer;
mod matrix;

pub use feasibility::positive_solution_exists;
pub use integer::{column_rank, integer_rank};
pub use matrix::{RationalMatrix, RationalVector};

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Exact rational number in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("column index {index} out of range for a matrix with {cols} columns")]
    ColumnOutOfRange { index: usize, cols: usize },
    #[error("ragged row {row}: expected {expected} entries, got {actual}")]
    RaggedRow {
        row: usize,
        expected: usize,
        actual: usize,
    },
}

/// Serializes a rational as `{"num", "den", "decimal"}` with the integer parts
/// as strings, so no precision is lost.
pub fn serialize_rational<S: serde::Serializer>(
    value: &Rational,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut out = serializer.serialize_struct("Rational", 3)?;
    out.serialize_field("num", &value.numer().to_string())?;
    out.serialize_field("den", &value.denom().to_string())?;
    out.serialize_field("decimal", &to_f64(value))?;
    out.end()
}

/// Wrapper giving a rational the `{"num", "den", "decimal"}` encoding.
#[derive(Debug, Clone, Copy)]
pub struct Exact<'a>(pub &'a Rational);

impl serde::Serialize for Exact<'_> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serialize_rational(self.0, serializer)
    }
}

pub fn serialize_rationals<S: serde::Serializer>(
    values: &[Rational],
    serializer: S,
) -> Result<S::Ok, S::Error> {
    serializer.collect_seq(values.iter().map(Exact))
}

pub fn serialize_optional_rational<S: serde::Serializer>(
    value: &Option<Rational>,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    use serde::Serialize;
    value.as_ref().map(Exact).serialize(serializer)
}

/// Nearest `f64`, computed from a scaled integer quotient so large numerators
/// and denominators do not overflow.
pub fn to_f64(value: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    if let (Some(n), Some(d)) = (value.numer().to_f64(), value.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let shift = value.denom().bits() as i64 - value.numer().bits() as i64 + 64;
    let scaled = if shift >= 0 {
        (value.numer() << shift as u64) / value.denom()
    } else {
        value.numer() / (value.denom() << (-shift) as u64)
    };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-shift as i32)
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `a`, `a/b` or a finite decimal such as `-1.25` exactly.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        return (!den.is_zero()).then(|| Rational::new(num, den));
    }
    let (whole, frac) = text.split_once('.').unwrap_or((text, ""));
    if !frac.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let negative = whole.starts_with('-');
    let digits = format!("{}{frac}", whole.trim_start_matches(['-', '+']));
    if digits.is_empty() {
        return None;
    }
    let mut num: BigInt = digits.parse().ok()?;
    if negative {
        num = -num;
    }
    Some(Rational::new(
        num,
        BigInt::from(10u32).pow(frac.len() as u32),
    ))
}

/// Solves a Vandermonde system exactly: returns coefficients `c_0..c_d` with
/// `sum_i c_i * nodes[j]^i = values[j]` for every node. Returns `None` if two
/// nodes coincide.
pub fn interpolate(nodes: &[Rational], values: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(nodes.len(), values.len(), "one value per node");
    let size = nodes.len();
    let rows = nodes
        .iter()
        .map(|node| {
            let mut row = Vec::with_capacity(size);
            let mut power = Rational::one();
            for _ in 0..size {
                row.push(power.clone());
                power *= node;
            }
            row
        })
        .collect::<Vec<_>>();
    let vandermonde = RationalMatrix::from_rows(rows).expect("square by construction");
    let rhs = RationalVector::new(values.to_vec());
    vandermonde
        .solve_square(&rhs)
        .expect("square by construction")
        .map(RationalVector::into_inner)
}

/// Evaluates `sum_i coeffs[i] * x^i` by Horner's rule.
pub fn evaluate_polynomial(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs
        .iter()
        .rev()
        .fold(Rational::zero(), |acc, c| acc * x + c)
}
