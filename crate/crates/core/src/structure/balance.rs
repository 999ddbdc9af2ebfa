//! Balanced and strictly balanced systems.

use num_bigint::BigInt;
use serde::Serialize;

use super::{
    best_subset, derived_rows, nontrivial_partitions_with, ColumnSet, Degree, StructureError,
};
use crate::linalg::Rational;
use crate::par::{map_range, Execution};
use crate::partition::SetPartition;
use crate::system::LinearSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BalanceVerdict {
    StrictlyBalanced,
    BalancedNotStrictly,
    Unbalanced,
}

/// The `(p, Q)` pair with the largest average degree of `M_p[Q]`. `Q` indexes
/// the blocks of `p`, that is, the columns of `M_p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BalanceWitness {
    pub partition: SetPartition,
    pub q: ColumnSet,
    #[serde(serialize_with = "crate::linalg::serialize_rational")]
    pub ratio: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BalanceReport {
    pub verdict: BalanceVerdict,
    /// Present iff the verdict is not strictly balanced.
    pub witness: Option<BalanceWitness>,
    /// `m / (m - r)`.
    #[serde(serialize_with = "crate::linalg::serialize_rational")]
    pub average_degree: Rational,
    pub partitions_checked: usize,
}

pub fn balance_check(system: &LinearSystem) -> Result<BalanceReport, StructureError> {
    balance_check_with(system, Execution::default())
}

/// Scans every `p ∈ 𝔓(M)`, discrete partition first, and every `Q` over the
/// columns of `M_p` with `2 <= |Q| < |p|`.
pub fn balance_check_with(
    system: &LinearSystem,
    exec: Execution,
) -> Result<BalanceReport, StructureError> {
    let (m, r) = (system.m(), system.r());
    let mut partitions = nontrivial_partitions_with(system, exec)?;
    if let Some(pos) = partitions.iter().position(SetPartition::is_discrete) {
        let discrete = partitions.remove(pos);
        partitions.insert(0, discrete);
    }
    let rows = system.integer_rows();
    let per_partition = map_range(exec, partitions.len(), |i| {
        let p = &partitions[i];
        let derived = derived_rows(rows, p);
        let size = p.len();
        best_subset(
            &derived,
            r,
            size,
            |s| s >= 2 && s < size,
            Execution::Sequential,
        )
    });

    // The witness is the best Q of the first p that violates; failing that,
    // of the first p that ties.
    let average = Degree { num: m, den: m - r };
    let mut violating: Option<(usize, super::Candidate)> = None;
    let mut tight: Option<(usize, super::Candidate)> = None;
    for (i, best) in per_partition.into_iter().enumerate() {
        let Some(candidate) = best? else { continue };
        if candidate.degree.exceeds(&average) {
            violating.get_or_insert((i, candidate));
        } else if candidate.degree.equals(&average) {
            tight.get_or_insert((i, candidate));
        }
    }
    let (verdict, chosen) = match (violating, tight) {
        (Some(v), _) => (BalanceVerdict::Unbalanced, Some(v)),
        (None, Some(t)) => (BalanceVerdict::BalancedNotStrictly, Some(t)),
        (None, None) => (BalanceVerdict::StrictlyBalanced, None),
    };
    let witness = chosen.map(|(i, w)| BalanceWitness {
        partition: partitions[i].clone(),
        q: w.q,
        ratio: w.degree.to_rational(),
    });
    Ok(BalanceReport {
        verdict,
        witness,
        average_degree: Rational::new(BigInt::from(m), BigInt::from(m - r)),
        partitions_checked: partitions.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::c_exponent;
    use crate::system::Family;

    fn named(family: Family) -> LinearSystem {
        LinearSystem::named(family).unwrap()
    }

    #[test]
    fn examples() {
        let sidon = balance_check(&named(Family::Sidon)).unwrap();
        assert_eq!(sidon.verdict, BalanceVerdict::StrictlyBalanced);
        assert!(sidon.witness.is_none());

        let ap = balance_check(&named(Family::KAp { k: 3 })).unwrap();
        assert_eq!(ap.verdict, BalanceVerdict::StrictlyBalanced);
        assert_eq!(ap.partitions_checked, 1);

        let m2 = balance_check(&named(Family::M2)).unwrap();
        assert_eq!(m2.verdict, BalanceVerdict::Unbalanced);
        let witness = m2.witness.unwrap();
        assert!(witness.partition.is_discrete());
        assert_eq!(witness.q.to_string(), "{1,2,3,4,5}");
        assert_eq!(witness.ratio, Rational::new(5.into(), 3.into()));

        let m1 = balance_check(&named(Family::M1)).unwrap();
        assert_eq!(m1.verdict, BalanceVerdict::Unbalanced);
    }

    #[test]
    fn strictly_balanced_families_have_average_exponent() {
        for family in [
            Family::KAp { k: 4 },
            Family::Sidon,
            Family::KCube { k: 2 },
            Family::SumFree,
            Family::KSumFree { k: 3 },
            Family::KBarycentric { k: 3 },
        ] {
            let system = named(family);
            let report = balance_check(&system).unwrap();
            assert_eq!(report.verdict, BalanceVerdict::StrictlyBalanced, "{family}");
            assert_eq!(c_exponent(&system).unwrap().c_value, report.average_degree);
        }
    }

    #[test]
    fn cancelling_blocks_can_unbalance() {
        // x1 = x2, x3 = x4 cancels x3 against x4 and leaves 2 x1 = x5 + x6.
        let report = balance_check(&named(Family::Bhg { h: 3, g: 1 })).unwrap();
        assert_eq!(report.verdict, BalanceVerdict::Unbalanced);
        let witness = report.witness.unwrap();
        assert_eq!(witness.partition.to_string(), "{{1,2},{3,4},{5},{6}}");
        assert_eq!(witness.q.to_string(), "{1,3,4}");
    }

    #[test]
    fn bhg_with_two_equations_ties_through_a_derived_system() {
        // x1 = x2 leaves 2 x1 = x3 + x4, a 3-AP on three blocks with average
        // degree 3/2 = m/(m - r).
        let system = named(Family::Bhg { h: 2, g: 2 });
        let report = balance_check(&system).unwrap();
        assert_eq!(report.verdict, BalanceVerdict::BalancedNotStrictly);
        let witness = report.witness.unwrap();
        assert!(!witness.partition.is_discrete());
        assert_eq!(witness.ratio, Rational::new(3.into(), 2.into()));
    }

    #[test]
    fn schedule_independent() {
        let system = named(Family::M2);
        assert_eq!(
            balance_check_with(&system, Execution::Sequential).unwrap(),
            balance_check_with(&system, Execution::Parallel).unwrap()
        );
    }
}
