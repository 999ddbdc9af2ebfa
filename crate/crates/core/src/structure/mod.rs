//! Structure derived from a system: the exponent `c(M)`, induced submatrices,
//! derived systems for set partitions, triviality, symmetry and balance.

mod balance;
mod symmetry;

pub use balance::{
    balance_check, balance_check_with, BalanceReport, BalanceVerdict, BalanceWitness,
};
pub use symmetry::{
    canonicalize, library_symmetry_constant, symmetry_constant, symmetry_group,
    symmetry_group_with, Provenance, SymmetryConstant, SymmetryGroup, PERMUTATION_CAP,
};

use std::fmt;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};

use crate::linalg::{column_rank, integer_rank, Rational, RationalMatrix};
use crate::par::{map_range, Execution};
use crate::partition::{all_partitions, partition_of, SetPartition};
use crate::system::{check_irredundancy, check_positivity, LinearSystem};

/// Largest `m` for which the `2^m` column subsets are scanned.
pub const SUBSET_CAP: usize = 20;
/// Largest `m` for which all set partitions are scanned.
pub const PARTITION_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StructureError {
    #[error("{what} needs m <= {cap}, got m = {m}")]
    CapExceeded {
        what: &'static str,
        cap: usize,
        m: usize,
    },
    #[error("column set {0} has |Q| <= r_Q; the system is not admissible")]
    NonPositiveDegree(ColumnSet),
    #[error("r_Q = 0 for {0}; no induced submatrix exists")]
    EmptyInducedSubmatrix(ColumnSet),
    #[error("empty column set")]
    EmptyColumnSet,
    #[error("vector is not a solution of the system")]
    NotASolution,
    #[error("vector has length {actual}, expected {expected}")]
    WrongLength { expected: usize, actual: usize },
    #[error("no symmetry constant: m = {m} exceeds the permutation cap {cap} and no library value applies")]
    NoSymmetryConstant { m: usize, cap: usize },
}

/// A subset of the columns `{0, .., m-1}` stored as a bitmask. Printed and
/// serialized one-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ColumnSet {
    bits: u64,
    m: usize,
}

impl ColumnSet {
    pub fn from_bits(bits: u64, m: usize) -> Self {
        assert!(m <= 64, "at most 64 columns");
        debug_assert!(m == 64 || bits >> m == 0, "bits beyond m");
        Self { bits, m }
    }

    /// From zero-based indices; `None` if an index is out of range.
    pub fn from_indices(indices: &[usize], m: usize) -> Option<Self> {
        let mut bits = 0u64;
        for &i in indices {
            if i >= m {
                return None;
            }
            bits |= 1 << i;
        }
        Some(Self::from_bits(bits, m))
    }

    pub fn full(m: usize) -> Self {
        Self::from_bits(full_mask(m), m)
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn ground_size(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.m && self.bits & (1 << i) != 0
    }

    /// Zero-based indices in increasing order.
    pub fn indices(&self) -> Vec<usize> {
        (0..self.m).filter(|&i| self.contains(i)).collect()
    }

    pub fn complement(&self) -> Self {
        Self::from_bits(full_mask(self.m) & !self.bits, self.m)
    }

    /// Lexicographic order of the sorted index lists, for sets of equal size.
    fn lex_less(&self, other: &Self) -> bool {
        let diff = self.bits ^ other.bits;
        diff != 0 && (diff & diff.wrapping_neg()) & self.bits != 0
    }
}

fn full_mask(m: usize) -> u64 {
    if m == 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

impl fmt::Display for ColumnSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.indices().iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

impl Serialize for ColumnSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let one_based: Vec<usize> = self.indices().iter().map(|i| i + 1).collect();
        one_based.serialize(serializer)
    }
}

/// `r_Q = r - rk(M^{Q̄})`, with the rank of an empty column set taken as 0.
pub fn r_of(system: &LinearSystem, q: ColumnSet) -> usize {
    r_q(system.integer_rows(), system.r(), q)
}

fn r_q(rows: &[Vec<i64>], r: usize, q: ColumnSet) -> usize {
    r - column_rank(rows, &q.complement().indices())
}

/// Average degree `|Q| / (|Q| - r_Q)` kept as an unreduced fraction.
#[derive(Debug, Clone, Copy)]
pub(super) struct Degree {
    pub(super) num: usize,
    pub(super) den: usize,
}

impl Degree {
    fn exceeds(&self, other: &Degree) -> bool {
        self.num * other.den > other.num * self.den
    }

    fn equals(&self, other: &Degree) -> bool {
        self.num * other.den == other.num * self.den
    }

    fn to_rational(self) -> Rational {
        Rational::new(BigInt::from(self.num), BigInt::from(self.den))
    }
}

/// A candidate `(ratio, Q)`. Larger ratio wins; then smaller `|Q|`; then the
/// lexicographically smaller `Q`.
#[derive(Debug, Clone, Copy)]
pub(super) struct Candidate {
    pub(super) degree: Degree,
    pub(super) q: ColumnSet,
}

impl Candidate {
    fn beats(&self, other: &Candidate) -> bool {
        if self.degree.exceeds(&other.degree) {
            return true;
        }
        if !self.degree.equals(&other.degree) {
            return false;
        }
        match self.q.len().cmp(&other.q.len()) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Greater => false,
            std::cmp::Ordering::Equal => self.q.lex_less(&other.q),
        }
    }
}

fn better(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if b.beats(&a) { b } else { a }),
        (a, None) => a,
        (None, b) => b,
    }
}

/// Best subset of the columns of `rows` among those whose size passes
/// `admit`. Errors if some admitted `Q` has `|Q| <= r_Q`.
fn best_subset(
    rows: &[Vec<i64>],
    r: usize,
    m: usize,
    admit: impl Fn(usize) -> bool + Sync,
    exec: Execution,
) -> Result<Option<Candidate>, StructureError> {
    // Chunks by the top bits keep the reduction order fixed.
    let chunk_bits = m.min(6);
    let chunks = 1usize << chunk_bits;
    let low_bits = m - chunk_bits;
    let results = map_range(exec, chunks, |high| {
        let mut best: Option<Candidate> = None;
        for low in 0..(1u64 << low_bits) {
            let bits = ((high as u64) << low_bits) | low;
            let q = ColumnSet::from_bits(bits, m);
            let size = q.len();
            if size == 0 || !admit(size) {
                continue;
            }
            let rq = r_q(rows, r, q);
            if size <= rq {
                return Err(StructureError::NonPositiveDegree(q));
            }
            let candidate = Candidate {
                degree: Degree {
                    num: size,
                    den: size - rq,
                },
                q,
            };
            best = better(best, Some(candidate));
        }
        Ok(best)
    });
    let mut best = None;
    for chunk in results {
        best = better(best, chunk?);
    }
    Ok(best)
}

/// `c(M)` together with the maximizing column set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExponentReport {
    #[serde(serialize_with = "crate::linalg::serialize_rational")]
    pub c_value: Rational,
    pub argmax: ColumnSet,
    /// `-1 / c(M)`.
    #[serde(serialize_with = "crate::linalg::serialize_rational")]
    pub threshold_exponent: Rational,
}

pub fn c_exponent(system: &LinearSystem) -> Result<ExponentReport, StructureError> {
    c_exponent_with(system, Execution::default())
}

pub fn c_exponent_with(
    system: &LinearSystem,
    exec: Execution,
) -> Result<ExponentReport, StructureError> {
    let m = system.m();
    if m > SUBSET_CAP {
        return Err(StructureError::CapExceeded {
            what: "the exponent scan",
            cap: SUBSET_CAP,
            m,
        });
    }
    let best = best_subset(system.integer_rows(), system.r(), m, |_| true, exec)?
        .expect("m >= 1, so some nonempty Q exists");
    let c_value = best.degree.to_rational();
    let threshold_exponent = -c_value.recip();
    Ok(ExponentReport {
        c_value,
        argmax: best.q,
        threshold_exponent,
    })
}

/// `M[Q]` in reduced row-echelon form. Its rows span the combinations of rows
/// of `M` that vanish on `Q̄`, restricted to `Q`.
pub fn induced_submatrix(
    system: &LinearSystem,
    q: ColumnSet,
) -> Result<RationalMatrix, StructureError> {
    if q.is_empty() {
        return Err(StructureError::EmptyColumnSet);
    }
    if r_of(system, q) == 0 {
        return Err(StructureError::EmptyInducedSubmatrix(q));
    }
    let matrix = system.matrix();
    let outside = matrix
        .select_columns(&q.complement().indices())
        .expect("indices in range");
    let inside = matrix
        .select_columns(&q.indices())
        .expect("indices in range");
    let rows: Vec<Vec<Rational>> = outside
        .transpose()
        .kernel_basis()
        .iter()
        .map(|y| {
            (0..inside.cols())
                .map(|j| {
                    y.entries()
                        .iter()
                        .enumerate()
                        .map(|(i, yi)| yi * inside.get(i, j))
                        .sum()
                })
                .collect()
        })
        .collect();
    Ok(RationalMatrix::from_rows(rows)
        .expect("rows share one length")
        .rref())
}

/// Integer rows of `M_p`: column `b` is the sum of the columns in block `b`.
pub fn derived_rows(rows: &[Vec<i64>], p: &SetPartition) -> Vec<Vec<i64>> {
    rows.iter()
        .map(|row| {
            p.blocks()
                .iter()
                .map(|block| block.iter().map(|&j| row[j]).sum())
                .collect()
        })
        .collect()
}

pub fn derived_system(system: &LinearSystem, p: &SetPartition) -> RationalMatrix {
    RationalMatrix::from_integer_rows(&derived_rows(system.integer_rows(), p))
        .expect("rows share one length")
}

/// True iff `rk(M_{p(x)}) < r`. Errors unless `x` solves the system.
pub fn is_trivial(system: &LinearSystem, x: &[i64]) -> Result<bool, StructureError> {
    if x.len() != system.m() {
        return Err(StructureError::WrongLength {
            expected: system.m(),
            actual: x.len(),
        });
    }
    if !system.is_solution(x) {
        return Err(StructureError::NotASolution);
    }
    Ok(is_trivial_partition(system, &partition_of(x)))
}

/// Triviality of every solution whose equality pattern is `p`.
pub fn is_trivial_partition(system: &LinearSystem, p: &SetPartition) -> bool {
    integer_rank(&derived_rows(system.integer_rows(), p)) < system.r()
}

/// Whether some non-trivial solution has equality pattern exactly `p`: `M_p`
/// has rank `r`, is positive and is irredundant.
pub fn partition_admits_nontrivial(system: &LinearSystem, p: &SetPartition) -> bool {
    let rows = derived_rows(system.integer_rows(), p);
    if integer_rank(&rows) < system.r() {
        return false;
    }
    let matrix = RationalMatrix::from_integer_rows(&rows).expect("rows share one length");
    check_positivity(&matrix) && check_irredundancy(&matrix).is_none()
}

/// `𝔓(M)` in restricted-growth-string order, so the discrete partition is last.
pub fn nontrivial_partitions(system: &LinearSystem) -> Result<Vec<SetPartition>, StructureError> {
    nontrivial_partitions_with(system, Execution::default())
}

pub fn nontrivial_partitions_with(
    system: &LinearSystem,
    exec: Execution,
) -> Result<Vec<SetPartition>, StructureError> {
    let m = system.m();
    if m > PARTITION_CAP {
        return Err(StructureError::CapExceeded {
            what: "partition enumeration",
            cap: PARTITION_CAP,
            m,
        });
    }
    let all = all_partitions(m);
    let keep = map_range(exec, all.len(), |i| {
        partition_admits_nontrivial(system, &all[i])
    });
    Ok(all
        .into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::Family;

    fn named(family: Family) -> LinearSystem {
        LinearSystem::named(family).unwrap()
    }

    fn set(one_based: &[usize], m: usize) -> ColumnSet {
        let zero: Vec<usize> = one_based.iter().map(|i| i - 1).collect();
        ColumnSet::from_indices(&zero, m).unwrap()
    }

    fn blocks(size: usize, one_based: &[&[usize]]) -> SetPartition {
        let zero = one_based
            .iter()
            .map(|b| b.iter().map(|i| i - 1).collect())
            .collect();
        SetPartition::from_blocks(size, zero).unwrap()
    }

    fn row_space_equal(a: &RationalMatrix, b: &RationalMatrix) -> bool {
        a.rref() == b.rref()
    }

    #[test]
    fn column_set_basics() {
        let q = set(&[1, 3], 4);
        assert_eq!(q.to_string(), "{1,3}");
        assert_eq!(q.complement().to_string(), "{2,4}");
        assert_eq!(serde_json::to_string(&q).unwrap(), "[1,3]");
        assert!(set(&[1, 4], 4).lex_less(&set(&[2, 3], 4)));
        assert!(set(&[1, 2], 4).lex_less(&set(&[1, 3], 4)));
        assert!(!set(&[2, 3], 4).lex_less(&set(&[1, 4], 4)));
        assert!(ColumnSet::from_indices(&[4], 4).is_none());
    }

    #[test]
    fn r_of_examples() {
        let sidon = named(Family::Sidon);
        assert_eq!(r_of(&sidon, set(&[1, 2, 3, 4], 4)), 1);
        assert_eq!(r_of(&sidon, set(&[1, 2], 4)), 0);
        let m1 = named(Family::M1);
        assert_eq!(r_of(&m1, set(&[1, 2, 3, 4], 9)), 1);
    }

    #[test]
    fn exponent_examples() {
        let sidon = c_exponent(&named(Family::Sidon)).unwrap();
        assert_eq!(sidon.c_value, Rational::new(4.into(), 3.into()));
        assert_eq!(
            sidon.threshold_exponent,
            Rational::new((-3).into(), 4.into())
        );

        let m2 = c_exponent(&named(Family::M2)).unwrap();
        assert_eq!(m2.c_value, Rational::new(5.into(), 3.into()));
        assert_eq!(m2.argmax, set(&[1, 2, 3, 4, 5], 8));

        let m1 = c_exponent(&named(Family::M1)).unwrap();
        assert_eq!(m1.c_value, Rational::new(4.into(), 3.into()));
        assert_eq!(m1.argmax, set(&[1, 2, 3, 4], 9));
    }

    #[test]
    fn exponent_is_schedule_independent() {
        for family in [Family::M1, Family::M2, Family::Bhg { h: 3, g: 2 }] {
            let system = named(family);
            assert_eq!(
                c_exponent_with(&system, Execution::Sequential).unwrap(),
                c_exponent_with(&system, Execution::Parallel).unwrap()
            );
        }
    }

    #[test]
    fn exponent_at_least_average_degree() {
        for family in [
            Family::KAp { k: 5 },
            Family::Bhg { h: 2, g: 2 },
            Family::KCube { k: 3 },
            Family::KBarycentric { k: 4 },
            Family::M1,
            Family::M2,
            Family::ThreeFour,
        ] {
            let system = named(family);
            let report = c_exponent(&system).unwrap();
            let average = Rational::new(
                BigInt::from(system.m()),
                BigInt::from(system.m() - system.r()),
            );
            assert!(report.c_value >= average, "{family}");
        }
    }

    #[test]
    fn degenerate_subset_is_an_error() {
        // x1 = 0 is forced, so Q = {1} has r_Q = 1 = |Q|.
        let system = LinearSystem::new(vec![vec![1, 0, 0], vec![0, 1, -1]], None).unwrap();
        assert!(matches!(
            c_exponent(&system),
            Err(StructureError::NonPositiveDegree(_))
        ));
    }

    #[test]
    fn induced_submatrix_examples() {
        let m2 = named(Family::M2);
        let induced = induced_submatrix(&m2, set(&[1, 2, 3, 4, 5], 8)).unwrap();
        let expected =
            RationalMatrix::from_integer_rows(&[[1, -2, 1, 0, 0], [0, 1, 1, -1, -1]]).unwrap();
        assert!(row_space_equal(&induced, &expected));

        let m1 = named(Family::M1);
        let induced = induced_submatrix(&m1, set(&[1, 2, 3, 4], 9)).unwrap();
        let expected = RationalMatrix::from_integer_rows(&[[1, 1, -1, -1]]).unwrap();
        assert!(row_space_equal(&induced, &expected));

        for family in [Family::Sidon, Family::M2, Family::KAp { k: 4 }] {
            let system = named(family);
            let full = induced_submatrix(&system, ColumnSet::full(system.m())).unwrap();
            assert_eq!(full, system.matrix().rref());
        }

        let sidon = named(Family::Sidon);
        assert_eq!(
            induced_submatrix(&sidon, set(&[1, 2], 4)),
            Err(StructureError::EmptyInducedSubmatrix(set(&[1, 2], 4)))
        );
    }

    #[test]
    fn derived_system_examples() {
        let bhg = named(Family::Bhg { h: 3, g: 2 });
        let p1 = blocks(9, &[&[1, 4], &[2, 5], &[3, 6], &[7], &[8], &[9]]);
        let expected =
            RationalMatrix::from_integer_rows(&[[0, 0, 0, 0, 0, 0], [1, 1, 1, -1, -1, -1]])
                .unwrap();
        assert_eq!(derived_system(&bhg, &p1), expected);
        assert_eq!(derived_system(&bhg, &p1).rank(), 1);

        let p2 = blocks(9, &[&[1, 3, 5, 7], &[2], &[4, 8], &[6], &[9]]);
        let derived = derived_system(&bhg, &p2);
        assert_eq!((derived.rows(), derived.cols(), derived.rank()), (2, 5, 2));
        let paper =
            RationalMatrix::from_integer_rows(&[[1, 1, -1, -1, 0], [0, 0, 0, 1, -1]]).unwrap();
        assert!(row_space_equal(&derived, &paper));

        let discrete = SetPartition::discrete(9);
        assert_eq!(&derived_system(&bhg, &discrete), bhg.matrix());
    }

    #[test]
    fn triviality_examples() {
        let sidon = named(Family::Sidon);
        assert!(is_trivial(&sidon, &[1, 2, 1, 2]).unwrap());
        assert!(!is_trivial(&sidon, &[1, 3, 2, 2]).unwrap());
        assert_eq!(
            is_trivial(&sidon, &[1, 2, 3, 4]),
            Err(StructureError::NotASolution)
        );
        let ap = named(Family::KAp { k: 3 });
        for c in [1, 7, 1000] {
            assert!(is_trivial(&ap, &[c, c, c]).unwrap());
        }
        assert!(!is_trivial(&ap, &[1, 2, 3]).unwrap());
    }

    #[test]
    fn nontrivial_partition_examples() {
        let sidon = nontrivial_partitions(&named(Family::Sidon)).unwrap();
        assert!(sidon.contains(&blocks(4, &[&[1], &[2], &[3, 4]])));
        assert!(sidon.contains(&SetPartition::discrete(4)));
        assert!(!sidon.contains(&blocks(4, &[&[1, 3], &[2, 4]])));

        let bhg = named(Family::Bhg { h: 3, g: 2 });
        let p1 = blocks(9, &[&[1, 4], &[2, 5], &[3, 6], &[7], &[8], &[9]]);
        let p2 = blocks(9, &[&[1, 3, 5, 7], &[2], &[4, 8], &[6], &[9]]);
        assert!(!partition_admits_nontrivial(&bhg, &p1));
        // M_p2 keeps rank 2 but forces x6 = x9, so no solution has pattern
        // exactly p2; merging those blocks drops the rank.
        assert!(!is_trivial_partition(&bhg, &p2));
        assert!(!partition_admits_nontrivial(&bhg, &p2));
        let merged = blocks(9, &[&[1, 3, 5, 7], &[2], &[4, 8], &[6, 9]]);
        assert!(is_trivial_partition(&bhg, &merged));

        let ap = nontrivial_partitions(&named(Family::KAp { k: 3 })).unwrap();
        assert_eq!(ap, vec![SetPartition::discrete(3)]);
    }

    /// All `x` in `{1..bound}^m` solving the system, by direct scan.
    fn brute_solutions(system: &LinearSystem, bound: i64) -> Vec<Vec<i64>> {
        let m = system.m();
        let mut out = Vec::new();
        let mut x = vec![1i64; m];
        loop {
            if system.is_solution(&x) {
                out.push(x.clone());
            }
            let mut i = 0;
            loop {
                if i == m {
                    return out;
                }
                if x[i] < bound {
                    x[i] += 1;
                    break;
                }
                x[i] = 1;
                i += 1;
            }
        }
    }

    #[test]
    fn partitions_match_brute_force() {
        let systems = vec![
            named(Family::Sidon),
            named(Family::SumFree),
            named(Family::KSumFree { k: 2 }),
            named(Family::KAp { k: 4 }),
            named(Family::KBarycentric { k: 3 }),
            named(Family::KAp { k: 5 }),
            LinearSystem::new(vec![vec![1, 2, -1, -2]], None).unwrap(),
            LinearSystem::new(vec![vec![1, 1, 1, -3, 0], vec![0, 1, 1, 1, -3]], None).unwrap(),
        ];
        for system in systems {
            let mut oracle: Vec<SetPartition> = brute_solutions(&system, 12)
                .iter()
                .filter(|x| !is_trivial(&system, x).unwrap())
                .map(|x| partition_of(x))
                .collect();
            oracle.sort();
            oracle.dedup();
            let mut computed = nontrivial_partitions(&system).unwrap();
            computed.sort();
            assert_eq!(computed, oracle, "{:?}", system.integer_rows());
        }
    }

    #[test]
    fn restriction_property_on_small_solutions() {
        for family in [Family::M2, Family::KAp { k: 5 }, Family::Bhg { h: 2, g: 2 }] {
            let system = named(family);
            let m = system.m();
            let solutions: Vec<Vec<i64>> = brute_solutions(&system, 6)
                .into_iter()
                .filter(|x| !is_trivial(&system, x).unwrap())
                .take(30)
                .collect();
            assert!(!solutions.is_empty());
            for bits in 1..(1u64 << m) {
                let q = ColumnSet::from_bits(bits, m);
                let Ok(induced) = induced_submatrix(&system, q) else {
                    continue;
                };
                let rows = induced.primitive_integer_rows();
                let rows: Vec<Vec<i64>> = rows
                    .iter()
                    .map(|r| r.iter().map(|v| i64::try_from(v).unwrap()).collect())
                    .collect();
                let restricted_system = LinearSystem::new(rows, None).unwrap();
                for x in &solutions {
                    let xq: Vec<i64> = q.indices().iter().map(|&i| x[i]).collect();
                    let image = induced.mul_integers(&xq).unwrap();
                    assert!(image.is_zero());
                    assert!(!is_trivial(&restricted_system, &xq).unwrap());
                }
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let cube = named(Family::KCube { k: 4 });
        assert!(matches!(
            nontrivial_partitions(&cube),
            Err(StructureError::CapExceeded { .. })
        ));
    }
}

#[cfg(test)]
mod properties {
    use super::*;
    use crate::testing::{admissible_system, config};
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(config(120))]

        #[test]
        fn exponent_bounds(system in admissible_system()) {
            let (r, m) = (system.r(), system.m());
            for bits in 1..(1u64 << m) {
                let q = ColumnSet::from_bits(bits, m);
                prop_assert!(q.len() > r_of(&system, q));
            }
            let report = c_exponent(&system).unwrap();
            let average = Rational::new(BigInt::from(m), BigInt::from(m - r));
            prop_assert!(report.c_value >= average);
            let balance = balance_check(&system).unwrap();
            if balance.verdict == BalanceVerdict::StrictlyBalanced {
                prop_assert_eq!(report.c_value, average);
            }
        }

        #[test]
        fn symmetry_group_is_a_group_preserving_the_kernel(system in admissible_system()) {
            let group = symmetry_group(&system).unwrap();
            prop_assert!(group.satisfies_group_axioms());
            let m = system.m();
            prop_assert_eq!((1..=m).product::<usize>() % group.order(), 0);
            let kernel = system.matrix().kernel_basis();
            for perm in group.elements() {
                for v in &kernel {
                    let moved: Vec<Rational> = (0..m).map(|j| v.entries()[perm[j]].clone()).collect();
                    prop_assert!(system.matrix().mul_vector(&moved).unwrap().is_zero());
                }
            }
        }

        #[test]
        fn partitions_contain_the_discrete_one(system in admissible_system()) {
            let partitions = nontrivial_partitions(&system).unwrap();
            prop_assert_eq!(partitions.last(), Some(&SetPartition::discrete(system.m())));
            for p in &partitions {
                prop_assert!(partition_admits_nontrivial(&system, p));
                prop_assert!(!is_trivial_partition(&system, p));
            }
        }
    }
}
