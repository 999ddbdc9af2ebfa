//! Solutions of `M x = 0` with every coordinate in a finite set `A`, sorted
//! into proper, trivial and non-trivial, and counted up to symmetry.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::ops::ControlFlow;

use serde::{Serialize, Serializer};

use crate::lattice::{Budget, BudgetExceeded, Parametrization};
use crate::par::{map_range, Execution};
use crate::partition::{growth_string, partition_of, SetPartition};
use crate::structure::{
    canonicalize, is_trivial_partition, symmetry_group, StructureError, SymmetryGroup,
};
use crate::system::LinearSystem;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CensusError {
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("system is not admissible: {0}")]
    NotAdmissible(String),
}

/// A finite set of integers: sorted values for iteration plus a hash set for
/// membership.
#[derive(Debug, Clone, Default)]
pub struct IntSet {
    sorted: Vec<i64>,
    members: HashSet<i64>,
}

impl IntSet {
    pub fn new(mut values: Vec<i64>) -> Self {
        values.sort_unstable();
        values.dedup();
        let members = values.iter().copied().collect();
        Self {
            sorted: values,
            members,
        }
    }

    /// `{lo..=hi}`.
    pub fn interval(lo: i64, hi: i64) -> Self {
        Self::new((lo..=hi).collect())
    }

    pub fn values(&self) -> &[i64] {
        &self.sorted
    }

    pub fn contains(&self, v: i64) -> bool {
        self.members.contains(&v)
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn is_subset(&self, other: &IntSet) -> bool {
        self.sorted.iter().all(|&v| other.contains(v))
    }
}

impl FromIterator<i64> for IntSet {
    fn from_iter<I: IntoIterator<Item = i64>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SolutionCensus {
    pub raw_vectors: u64,
    pub proper_vectors: u64,
    pub proper_orbits: u64,
    /// `X`: essentially different non-trivial solutions.
    pub nontrivial_orbits: u64,
    pub trivial_vectors: u64,
    /// Non-trivial orbits keyed by the equality pattern of their canonical form.
    #[serde(serialize_with = "serialize_per_partition")]
    pub per_partition: BTreeMap<SetPartition, u64>,
}

fn serialize_per_partition<S: Serializer>(
    map: &BTreeMap<SetPartition, u64>,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Entry<'a> {
        partition: &'a SetPartition,
        orbits: u64,
    }
    serializer.collect_seq(
        map.iter()
            .map(|(partition, &orbits)| Entry { partition, orbits }),
    )
}

/// Per-system data reused across many sets.
#[derive(Debug, Clone)]
pub struct CensusEngine {
    system: LinearSystem,
    param: Parametrization,
    group: SymmetryGroup,
}

/// Per-branch tallies before orbit merging.
#[derive(Default)]
struct Tally {
    raw: u64,
    proper: u64,
    trivial: u64,
    proper_forms: HashSet<Vec<i64>>,
    nontrivial_forms: HashSet<Vec<i64>>,
}

impl CensusEngine {
    pub fn new(system: &LinearSystem) -> Result<Self, CensusError> {
        if !system.is_admissible() {
            return Err(CensusError::NotAdmissible(
                system.admissibility().violation().unwrap_or_default(),
            ));
        }
        Ok(Self {
            system: system.clone(),
            param: Parametrization::new(system),
            group: symmetry_group(system)?,
        })
    }

    pub fn system(&self) -> &LinearSystem {
        &self.system
    }

    pub fn group(&self) -> &SymmetryGroup {
        &self.group
    }

    /// Visits every `x ∈ A^m` with `M x = 0` exactly once.
    pub fn for_each_in_set(
        &self,
        set: &IntSet,
        budget: &Budget,
        visit: &mut dyn FnMut(&[i64]) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>, BudgetExceeded> {
        self.param
            .enumerate(set.values(), &|v| set.contains(v), budget, visit)
    }

    fn tally_branch(
        &self,
        set: &IntSet,
        first: usize,
        budget: &Budget,
    ) -> Result<Tally, BudgetExceeded> {
        let m = self.system.m();
        let mut tally = Tally::default();
        let mut cache: HashMap<Vec<u8>, bool> = HashMap::new();
        let mut key = Vec::with_capacity(m);
        let _ = self.param.enumerate_branch(
            set.values(),
            &|v| set.contains(v),
            first,
            budget,
            &mut |x| {
                tally.raw += 1;
                growth_string(x, &mut key);
                let proper = key.last().is_some_and(|&b| usize::from(b) + 1 == m);
                let trivial = !proper
                    && *cache
                        .entry(key.clone())
                        .or_insert_with(|| is_trivial_partition(&self.system, &partition_of(x)));
                if trivial {
                    tally.trivial += 1;
                } else {
                    let form = canonicalize(x, &self.group);
                    if proper {
                        tally.proper += 1;
                        tally.proper_forms.insert(form.clone());
                    }
                    tally.nontrivial_forms.insert(form);
                }
                ControlFlow::Continue(())
            },
        )?;
        Ok(tally)
    }

    pub fn census(
        &self,
        set: &IntSet,
        exec: Execution,
        budget: &Budget,
    ) -> Result<SolutionCensus, CensusError> {
        let tallies = map_range(exec, self.param.branch_count(set.values()), |first| {
            self.tally_branch(set, first, budget)
        });
        let mut proper_forms = HashSet::new();
        let mut nontrivial_forms = HashSet::new();
        let mut out = SolutionCensus::default();
        for tally in tallies {
            let tally = tally?;
            out.raw_vectors += tally.raw;
            out.proper_vectors += tally.proper;
            out.trivial_vectors += tally.trivial;
            proper_forms.extend(tally.proper_forms);
            nontrivial_forms.extend(tally.nontrivial_forms);
        }
        out.proper_orbits = proper_forms.len() as u64;
        out.nontrivial_orbits = nontrivial_forms.len() as u64;
        for form in &nontrivial_forms {
            *out.per_partition.entry(partition_of(form)).or_insert(0) += 1;
        }
        Ok(out)
    }

    /// True iff some `x ∈ A^m` is a non-trivial solution; stops at the first.
    pub fn contains_nontrivial(&self, set: &IntSet, budget: &Budget) -> Result<bool, CensusError> {
        let m = self.system.m();
        let mut cache: HashMap<Vec<u8>, bool> = HashMap::new();
        let mut key = Vec::with_capacity(m);
        let flow = self.for_each_in_set(set, budget, &mut |x| {
            growth_string(x, &mut key);
            let trivial = *cache
                .entry(key.clone())
                .or_insert_with(|| is_trivial_partition(&self.system, &partition_of(x)));
            if trivial {
                ControlFlow::Continue(())
            } else {
                ControlFlow::Break(())
            }
        })?;
        Ok(flow.is_break())
    }
}

/// Every `x ∈ A^m` with `M x = 0`, in enumeration order.
pub fn enumerate_in_set(system: &LinearSystem, set: &IntSet) -> Result<Vec<Vec<i64>>, CensusError> {
    let param = Parametrization::new(system);
    let mut out = Vec::new();
    let _ = param.enumerate(
        set.values(),
        &|v| set.contains(v),
        &Budget::default(),
        &mut |x| {
            out.push(x.to_vec());
            ControlFlow::Continue(())
        },
    )?;
    Ok(out)
}

pub fn census(system: &LinearSystem, set: &IntSet) -> Result<SolutionCensus, CensusError> {
    CensusEngine::new(system)?.census(set, Execution::default(), &Budget::default())
}
