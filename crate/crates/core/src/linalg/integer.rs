//! Fraction-free rank for small integer matrices, used in hot loops.

use super::RationalMatrix;

/// Rank of an integer matrix. Runs Bareiss elimination in `i128` and falls
/// back to exact rationals if an intermediate value would overflow.
pub fn integer_rank<R: AsRef<[i64]>>(rows: &[R]) -> usize {
    let mut work: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.as_ref().iter().map(|&v| i128::from(v)).collect())
        .collect();
    match bareiss_rank(&mut work) {
        Some(rank) => rank,
        None => RationalMatrix::from_integer_rows(rows)
            .expect("rows share one length")
            .rank(),
    }
}

/// Rank of the submatrix formed by `columns` of `rows`.
pub fn column_rank<R: AsRef<[i64]>>(rows: &[R], columns: &[usize]) -> usize {
    if columns.is_empty() {
        return 0;
    }
    let selected: Vec<Vec<i64>> = rows
        .iter()
        .map(|r| {
            let r = r.as_ref();
            columns.iter().map(|&c| r[c]).collect()
        })
        .collect();
    integer_rank(&selected)
}

fn bareiss_rank(work: &mut [Vec<i128>]) -> Option<usize> {
    let height = work.len();
    let width = work.first().map_or(0, Vec::len);
    let mut lead = 0;
    let mut prev: i128 = 1;
    for col in 0..width {
        if lead == height {
            break;
        }
        let Some(found) = (lead..height).find(|&i| work[i][col] != 0) else {
            continue;
        };
        work.swap(lead, found);
        let pivot = work[lead][col];
        for i in lead + 1..height {
            let factor = work[i][col];
            for j in col..width {
                // Exact division: Sylvester's identity makes every entry a minor.
                let value = pivot
                    .checked_mul(work[i][j])?
                    .checked_sub(factor.checked_mul(work[lead][j])?)?;
                work[i][j] = value / prev;
            }
        }
        prev = pivot;
        lead += 1;
    }
    Some(lead)
}
