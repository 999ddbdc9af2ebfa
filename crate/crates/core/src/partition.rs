//! Set partitions of column indices.

use std::fmt;

use serde::{Serialize, Serializer};

/// A set partition of `{0, .., m-1}`. Blocks are sorted internally and ordered
/// by their minimum element, so structural equality is partition equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// Builds a partition from a block label per element. Elements with equal
    /// labels share a block; the labels themselves are arbitrary.
    pub fn from_labels<L: PartialEq>(labels: &[L]) -> Self {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut representatives: Vec<&L> = Vec::new();
        for (i, label) in labels.iter().enumerate() {
            match representatives.iter().position(|&r| r == label) {
                Some(b) => blocks[b].push(i),
                None => {
                    representatives.push(label);
                    blocks.push(vec![i]);
                }
            }
        }
        Self { blocks }
    }

    /// Checks disjointness and coverage of `{0, .., size-1}`, then canonicalizes.
    pub fn from_blocks(size: usize, blocks: Vec<Vec<usize>>) -> Option<Self> {
        let mut labels = vec![usize::MAX; size];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return None;
            }
            for &i in block {
                if i >= size || labels[i] != usize::MAX {
                    return None;
                }
                labels[i] = b;
            }
        }
        if labels.contains(&usize::MAX) {
            return None;
        }
        Some(Self::from_labels(&labels))
    }

    pub fn discrete(size: usize) -> Self {
        Self {
            blocks: (0..size).map(|i| vec![i]).collect(),
        }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Number of blocks.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Number of elements being partitioned.
    pub fn ground_size(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }

    /// Restricted growth string: element `i` gets the index of its block.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.ground_size()];
        for (b, block) in self.blocks.iter().enumerate() {
            for &i in block {
                labels[i] = b;
            }
        }
        labels
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (b, block) in self.blocks.iter().enumerate() {
            if b > 0 {
                write!(f, ",")?;
            }
            let items: Vec<String> = block.iter().map(|i| (i + 1).to_string()).collect();
            write!(f, "{{{}}}", items.join(","))?;
        }
        write!(f, "}}")
    }
}

impl Serialize for SetPartition {
    /// One-based blocks, matching how partitions are printed.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let one_based: Vec<Vec<usize>> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|i| i + 1).collect())
            .collect();
        one_based.serialize(serializer)
    }
}

/// Partition grouping equal coordinates of `x`.
pub fn partition_of(x: &[i64]) -> SetPartition {
    SetPartition::from_labels(x)
}

/// Restricted growth string of `x`, the hashable key of `partition_of(x)`.
pub fn growth_string(x: &[i64], out: &mut Vec<u8>) {
    out.clear();
    let mut next = 0u8;
    for (i, v) in x.iter().enumerate() {
        match x[..i].iter().position(|w| w == v) {
            Some(j) => out.push(out[j]),
            None => {
                out.push(next);
                next += 1;
            }
        }
    }
}

/// All set partitions of `{0, .., size-1}` in restricted-growth-string order.
pub fn all_partitions(size: usize) -> Vec<SetPartition> {
    let mut out = Vec::new();
    if size == 0 {
        out.push(SetPartition { blocks: Vec::new() });
        return out;
    }
    let mut labels = vec![0usize; size];
    loop {
        out.push(SetPartition::from_labels(&labels));
        let mut i = size - 1;
        loop {
            if i == 0 {
                return out;
            }
            let bound = labels[..i].iter().max().copied().unwrap_or(0) + 1;
            if labels[i] < bound {
                labels[i] += 1;
                for l in labels.iter_mut().skip(i + 1) {
                    *l = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}

/// Bell numbers via the Bell triangle.
pub fn bell_number(size: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..size {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().expect("rows are never empty"));
        for &v in &row {
            let last = *next.last().expect("seeded above");
            next.push(last + v);
        }
        row = next;
    }
    row[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn partition_of_examples() {
        assert_eq!(partition_of(&[1, 4, 2, 3]), SetPartition::discrete(4));
        assert_eq!(
            partition_of(&[1, 3, 2, 2]),
            SetPartition::from_blocks(4, vec![vec![0], vec![1], vec![2, 3]]).unwrap()
        );
        assert_eq!(partition_of(&[5, 5, 5]).blocks(), &[vec![0, 1, 2]]);
    }

    #[test]
    fn canonical_block_order() {
        let p = SetPartition::from_blocks(5, vec![vec![4, 1], vec![3], vec![0, 2]]).unwrap();
        assert_eq!(p.blocks(), &[vec![0, 2], vec![1, 4], vec![3]]);
        assert_eq!(p.to_string(), "{{1,3},{2,5},{4}}");
        assert!(SetPartition::from_blocks(3, vec![vec![0, 1]]).is_none());
        assert!(SetPartition::from_blocks(2, vec![vec![0, 1], vec![1]]).is_none());
    }

    #[test]
    fn enumeration_matches_bell_numbers() {
        for size in 0..=8 {
            let all = all_partitions(size);
            assert_eq!(all.len() as u128, bell_number(size), "size {size}");
            let distinct: HashSet<_> = all.iter().cloned().collect();
            assert_eq!(distinct.len(), all.len());
        }
        assert_eq!(bell_number(12), 4_213_597);
    }

    #[test]
    fn growth_string_matches_labels() {
        let x = [7, 3, 7, 9, 3];
        let mut key = Vec::new();
        growth_string(&x, &mut key);
        assert_eq!(key, vec![0, 1, 0, 2, 1]);
        let labels: Vec<u8> = partition_of(&x).labels().iter().map(|&l| l as u8).collect();
        assert_eq!(key, labels);
    }
}
