//! Construction-time tries and their path decompositions.
//!
//! These are plain pointer-free arenas built from a sorted key set with an
//! explicit work stack, so very deep tries do not recurse. The succinct
//! structures are produced from them and then they are dropped.

mod binary;
mod compacted;
mod decompose;

pub use binary::{Binarized, BinaryNode, BinaryTrie, BitKeys, BitStrings};
pub use compacted::{CompactedTrie, TrieNode};
pub use decompose::{decompose, ChildOrder, PathChoice, PathDecompTree, TrieShape};

/// Average and maximum of a list of depths.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct HeightStats {
    pub average: f64,
    pub max: usize,
}

impl HeightStats {
    pub(crate) fn from_depths(depths: impl Iterator<Item = usize>) -> Self {
        let (mut sum, mut count, mut max) = (0u64, 0u64, 0usize);
        for d in depths {
            sum += d as u64;
            count += 1;
            max = max.max(d);
        }
        HeightStats {
            average: if count == 0 { 0.0 } else { sum as f64 / count as f64 },
            max,
        }
    }
}
