//! Column permutations preserving the row space, and orbit canonical forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::StructureError;
use crate::par::{map_range, Execution};
use crate::system::{Family, LinearSystem};

/// Largest `m` for which all `m!` permutations are searched.
pub const PERMUTATION_CAP: usize = 10;

/// A permutation group on `{0, .., m-1}`. Elements are stored as images
/// (`perm[j] = π(j)`) in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryGroup {
    degree: usize,
    elements: Vec<Vec<usize>>,
}

impl SymmetryGroup {
    /// Sorts and deduplicates `elements`; does not check the group axioms.
    pub fn from_elements(degree: usize, mut elements: Vec<Vec<usize>>) -> Self {
        elements.sort();
        elements.dedup();
        Self { degree, elements }
    }

    pub fn trivial(degree: usize) -> Self {
        Self {
            degree,
            elements: vec![(0..degree).collect()],
        }
    }

    /// `σ(M)`.
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn elements(&self) -> &[Vec<usize>] {
        &self.elements
    }

    pub fn contains(&self, perm: &[usize]) -> bool {
        self.elements
            .binary_search_by(|e| e.as_slice().cmp(perm))
            .is_ok()
    }

    /// Checks identity, closure under composition and closure under inverse.
    pub fn satisfies_group_axioms(&self) -> bool {
        let identity: Vec<usize> = (0..self.degree).collect();
        self.contains(&identity)
            && self.elements.iter().all(|a| {
                self.contains(&inverse(a))
                    && self.elements.iter().all(|b| self.contains(&compose(a, b)))
            })
    }

    /// The orbit `{x_π : π ∈ G}` without repetitions, sorted.
    pub fn orbit(&self, x: &[i64]) -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> = self.elements.iter().map(|p| permute(x, p)).collect();
        out.sort();
        out.dedup();
        out
    }
}

/// `(a ∘ b)(j) = a(b(j))`.
pub fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&j| a[j]).collect()
}

pub fn inverse(a: &[usize]) -> Vec<usize> {
    let mut out = vec![0; a.len()];
    for (j, &image) in a.iter().enumerate() {
        out[image] = j;
    }
    out
}

/// `x_π` with `x_π[j] = x[π(j)]`, matching column `j` of `M_π` being column
/// `π(j)` of `M`.
pub fn permute(x: &[i64], perm: &[usize]) -> Vec<i64> {
    perm.iter().map(|&j| x[j]).collect()
}

/// Lexicographically smallest vector in the orbit of `x`.
pub fn canonicalize(x: &[i64], group: &SymmetryGroup) -> Vec<i64> {
    assert_eq!(
        x.len(),
        group.degree,
        "vector length must match the group degree"
    );
    let mut best = x.to_vec();
    let mut candidate = vec![0i64; x.len()];
    for perm in &group.elements {
        for (c, &j) in candidate.iter_mut().zip(perm) {
            *c = x[j];
        }
        if candidate < best {
            best.copy_from_slice(&candidate);
        }
    }
    best
}

/// Integer data for the row-space test: with `R` the rref of `M` and `D` the
/// common denominator, `v` lies in the row space iff
/// `D v = Σ_k v[pivot_k] (D R)_k`.
struct RowSpaceTest {
    columns: Vec<Vec<i128>>,
    pivots: Vec<usize>,
    free: Vec<usize>,
    /// `scaled[k][j] = D * R[k][j]`.
    scaled: Vec<Vec<i128>>,
    denominator: i128,
}

impl RowSpaceTest {
    fn new(system: &LinearSystem) -> Self {
        let m = system.m();
        let (rref, pivots) = system.matrix().rref_with_pivots();
        let lcm = (0..rref.rows())
            .flat_map(|i| rref.row(i).iter())
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let as_i128 = |v: &BigInt| v.to_i128().expect("rref entries of an i64 matrix fit i128");
        let scaled = (0..rref.rows())
            .map(|i| {
                rref.row(i)
                    .iter()
                    .map(|q| as_i128(&(q.numer() * (&lcm / q.denom()))))
                    .collect()
            })
            .collect();
        let rows = system.integer_rows();
        let columns = (0..m)
            .map(|j| rows.iter().map(|row| i128::from(row[j])).collect())
            .collect();
        let free = (0..m).filter(|j| !pivots.contains(j)).collect();
        Self {
            columns,
            pivots,
            free,
            scaled,
            denominator: as_i128(&lcm),
        }
    }

    /// All `π` whose first pivot position maps to `first`.
    fn search_from(&self, first: usize) -> Vec<Vec<usize>> {
        let m = self.columns.len();
        let mut perm = vec![usize::MAX; m];
        let mut used = vec![false; m];
        let mut out = Vec::new();
        if self.pivots.is_empty() {
            // Zero matrix: every permutation preserves the (empty) row space.
            if first == 0 {
                self.assign_free(0, &mut perm, &mut used, &[], &mut out);
            }
            return out;
        }
        perm[self.pivots[0]] = first;
        used[first] = true;
        self.assign_pivots(1, &mut perm, &mut used, &mut out);
        out
    }

    fn assign_pivots(
        &self,
        k: usize,
        perm: &mut [usize],
        used: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        if k == self.pivots.len() {
            // targets[f][i] = Σ_k M[i][π(p_k)] * scaled[k][free_f]
            let rows = self.columns.first().map_or(0, Vec::len);
            let targets: Vec<Vec<i128>> = self
                .free
                .iter()
                .map(|&j| {
                    (0..rows)
                        .map(|i| {
                            self.pivots
                                .iter()
                                .enumerate()
                                .map(|(k, &p)| self.columns[perm[p]][i] * self.scaled[k][j])
                                .sum()
                        })
                        .collect()
                })
                .collect();
            self.assign_free(0, perm, used, &targets, out);
            return;
        }
        let position = self.pivots[k];
        for c in 0..perm.len() {
            if used[c] {
                continue;
            }
            used[c] = true;
            perm[position] = c;
            self.assign_pivots(k + 1, perm, used, out);
            used[c] = false;
        }
        perm[position] = usize::MAX;
    }

    fn assign_free(
        &self,
        f: usize,
        perm: &mut [usize],
        used: &mut [bool],
        targets: &[Vec<i128>],
        out: &mut Vec<Vec<usize>>,
    ) {
        if f == self.free.len() {
            out.push(perm.to_vec());
            return;
        }
        let position = self.free[f];
        for c in 0..perm.len() {
            if used[c] {
                continue;
            }
            let fits = targets.is_empty()
                || self.columns[c]
                    .iter()
                    .zip(&targets[f])
                    .all(|(&entry, &target)| entry * self.denominator == target);
            if !fits {
                continue;
            }
            used[c] = true;
            perm[position] = c;
            self.assign_free(f + 1, perm, used, targets, out);
            used[c] = false;
        }
        perm[position] = usize::MAX;
    }
}

/// `{π : rowspace(M_π) = rowspace(M)}` by exhaustive search with pruning.
pub fn symmetry_group(system: &LinearSystem) -> Result<SymmetryGroup, StructureError> {
    symmetry_group_with(system, Execution::default())
}

pub fn symmetry_group_with(
    system: &LinearSystem,
    exec: Execution,
) -> Result<SymmetryGroup, StructureError> {
    let m = system.m();
    if m > PERMUTATION_CAP {
        return Err(StructureError::CapExceeded {
            what: "permutation enumeration",
            cap: PERMUTATION_CAP,
            m,
        });
    }
    let test = RowSpaceTest::new(system);
    let elements = map_range(exec, m, |first| test.search_from(first))
        .into_iter()
        .flatten()
        .collect();
    Ok(SymmetryGroup::from_elements(m, elements))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Enumerated,
    /// Closed form for a named family; not verified by enumeration.
    LibraryConstant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymmetryConstant {
    pub sigma: u128,
    pub provenance: Provenance,
}

/// Closed-form `σ(M)` for the named families that have one.
pub fn library_symmetry_constant(family: Family) -> Option<u128> {
    let factorial = |n: usize| (1..=n as u128).product::<u128>();
    match family {
        Family::KAp { .. } | Family::SumFree | Family::KSumFree { .. } => Some(2),
        Family::Sidon => Some(8),
        Family::Bhg { h, g } => {
            let per_block = factorial(h).checked_pow(u32::try_from(g + 1).ok()?)?;
            factorial(g + 1).checked_mul(per_block)
        }
        // Affine symmetries of the k-dimensional cube.
        Family::KCube { k } => Some((1u128 << k) * factorial(k)),
        Family::KBarycentric { k } => Some(factorial(k)),
        Family::M1 | Family::M2 | Family::ThreeFour => None,
    }
}

/// `σ(M)` by enumeration within the cap, otherwise from the library.
pub fn symmetry_constant(system: &LinearSystem) -> Result<SymmetryConstant, StructureError> {
    let m = system.m();
    if m <= PERMUTATION_CAP {
        return Ok(SymmetryConstant {
            sigma: symmetry_group(system)?.order() as u128,
            provenance: Provenance::Enumerated,
        });
    }
    system
        .family()
        .and_then(library_symmetry_constant)
        .map(|sigma| SymmetryConstant {
            sigma,
            provenance: Provenance::LibraryConstant,
        })
        .ok_or(StructureError::NoSymmetryConstant {
            m,
            cap: PERMUTATION_CAP,
        })
}
