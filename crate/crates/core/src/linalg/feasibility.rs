//! Exact phase-one simplex for deciding `{x : M x = 0, x >= 1}`.

use num_traits::{One, Signed, Zero};

use super::{Rational, RationalMatrix};

/// Decides whether `matrix * x = 0` has a solution with every coordinate at
/// least one. By homogeneity this is the same as having a strictly positive
/// rational solution.
///
/// Substitutes `x = y + 1`, so the question becomes feasibility of
/// `M y = -M 1, y >= 0`, answered by phase one of the simplex method with
/// Bland's rule on an exact tableau.
pub fn positive_solution_exists(matrix: &RationalMatrix) -> bool {
    let rows = matrix.rows();
    let cols = matrix.cols();
    if cols == 0 {
        // x in an empty product space trivially satisfies every bound.
        return true;
    }
    let ones = vec![Rational::one(); cols];
    let image = matrix
        .mul_vector(&ones)
        .expect("ones vector has one entry per column");

    // Tableau layout: cols structural variables, rows artificials, rhs.
    let width = cols + rows + 1;
    let mut tableau: Vec<Vec<Rational>> = (0..rows)
        .map(|i| {
            let flip = image[i].is_positive();
            let mut row = vec![Rational::zero(); width];
            for (j, a) in matrix.row(i).iter().enumerate() {
                row[j] = if flip { -a.clone() } else { a.clone() };
            }
            row[cols + i] = Rational::one();
            let rhs = -image[i].clone();
            row[width - 1] = if flip { -rhs } else { rhs };
            row
        })
        .collect();
    let mut basis: Vec<usize> = (cols..cols + rows).collect();

    // Reduced costs for minimizing the sum of artificials.
    let mut costs = vec![Rational::zero(); width];
    for row in &tableau {
        for j in 0..cols {
            costs[j] -= &row[j];
        }
        costs[width - 1] -= &row[width - 1];
    }

    loop {
        let Some(entering) = (0..cols + rows).find(|&j| costs[j].is_negative()) else {
            break;
        };
        let mut leaving: Option<(usize, Rational)> = None;
        for (i, row) in tableau.iter().enumerate() {
            if !row[entering].is_positive() {
                continue;
            }
            let ratio = &row[width - 1] / &row[entering];
            let better = match &leaving {
                None => true,
                Some((li, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*li]),
            };
            if better {
                leaving = Some((i, ratio));
            }
        }
        // Phase one is bounded below by zero, so a pivot row always exists.
        let (pivot_row, _) = leaving.expect("phase-one objective is bounded");
        let inv = tableau[pivot_row][entering].recip();
        for entry in tableau[pivot_row].iter_mut() {
            *entry *= &inv;
        }
        let pivot = tableau[pivot_row].clone();
        for (i, row) in tableau.iter_mut().enumerate() {
            if i == pivot_row || row[entering].is_zero() {
                continue;
            }
            let factor = row[entering].clone();
            for (entry, p) in row.iter_mut().zip(&pivot) {
                if !p.is_zero() {
                    *entry -= &factor * p;
                }
            }
        }
        let factor = costs[entering].clone();
        for (entry, p) in costs.iter_mut().zip(&pivot) {
            if !p.is_zero() {
                *entry -= &factor * p;
            }
        }
        basis[pivot_row] = entering;
    }
    // costs[rhs] holds minus the objective value.
    costs[width - 1].is_zero()
}
