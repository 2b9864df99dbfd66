//! Height and space statistics.

use crate::corpus::{check_keys, KeySet};
use crate::error::Result;
use crate::trie::{decompose, Binarized, BinaryTrie, ChildOrder, CompactedTrie, HeightStats, PathChoice};

/// Heights of the tries of one string set. Leaf depths for the plain tries,
/// node depths for the path decompositions, all in edges.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct HeightReport {
    pub strings: usize,
    pub compacted: HeightStats,
    pub lex: HeightStats,
    pub centroid: HeightStats,
    pub hollow: HeightStats,
    pub centroid_hollow: HeightStats,
}

impl HeightReport {
    pub fn compute<K: KeySet + ?Sized>(keys: &K) -> Result<Self> {
        check_keys(keys)?;
        let (compacted, lex, centroid) = {
            let t = CompactedTrie::build_unchecked(keys);
            let lex = decompose(&t, PathChoice::Leftmost, ChildOrder::BottomUp).heights();
            let centroid = decompose(&t, PathChoice::Heavy, ChildOrder::BottomUp).heights();
            (t.leaf_heights(), lex, centroid)
        };
        let b = BinaryTrie::build(&Binarized(keys));
        let centroid_hollow = decompose(&b, PathChoice::Heavy, ChildOrder::Lexicographic).heights();
        Ok(HeightReport {
            strings: keys.len(),
            compacted,
            lex,
            centroid,
            hollow: b.leaf_heights(),
            centroid_hollow,
        })
    }
}

/// Size of a structure against the raw corpus.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpaceReport {
    pub strings: usize,
    /// Corpus size as a newline-delimited file.
    pub raw_bytes: u64,
    pub size_bits: u64,
    pub bits_per_string: f64,
    /// Structure bytes over raw bytes.
    pub ratio: f64,
}

impl SpaceReport {
    pub fn new(size_bits: u64, strings: usize, raw_bytes: u64) -> Self {
        SpaceReport {
            strings,
            raw_bytes,
            size_bits,
            bits_per_string: size_bits as f64 / strings.max(1) as f64,
            ratio: size_bits as f64 / 8.0 / raw_bytes.max(1) as f64,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_set() {
        let keys = ["bar", "foo", "foobar"];
        let r = HeightReport::compute(&keys[..]).unwrap();
        // Leaves: bar (1), foo terminator leaf (2), foobar (2).
        assert!((r.compacted.average - 5.0 / 3.0).abs() < 1e-12);
        assert_eq!(r.lex.max, 2);
        assert_eq!(r.centroid.max, 1);
        assert!(r.centroid_hollow.max <= 1);
        let s = SpaceReport::new(80, 4, 20);
        assert_eq!(s.bits_per_string, 20.0);
        assert_eq!(s.ratio, 0.5);
    }
}
