use crate::corpus::{check_keys, KeySet};
use crate::error::Result;
use crate::trie::{HeightStats, TrieShape};

/// Byte at position `p` of `key` followed by the 0x00 terminator.
#[inline]
pub(crate) fn char_at(key: &[u8], p: usize) -> u8 {
    key.get(p).copied().unwrap_or(0)
}

/// A node of a [`CompactedTrie`].
///
/// The node spans keys `lo..hi`. Its label is positions `depth..end` of the
/// terminated key (`key ++ [0]`); internal nodes branch on the byte at
/// `end`, leaves have `end = key.len() + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrieNode {
    pub lo: u32,
    pub hi: u32,
    pub depth: u32,
    pub end: u32,
    pub first_child: u32,
    pub n_children: u16,
    /// Byte on the edge from the parent (0 for the root).
    pub branch: u8,
}

impl TrieNode {
    #[inline]
    pub fn leaves(&self) -> usize {
        (self.hi - self.lo) as usize
    }

    #[inline]
    pub fn is_leaf(&self) -> bool {
        self.n_children == 0
    }
}

/// Compacted trie over a sorted set of terminated byte strings. Children of
/// a node are contiguous in the arena and sorted by branching byte; node 0
/// is the root.
pub struct CompactedTrie<'a, K: KeySet + ?Sized> {
    keys: &'a K,
    nodes: Vec<TrieNode>,
}

impl<'a, K: KeySet + ?Sized> CompactedTrie<'a, K> {
    pub fn build(keys: &'a K) -> Result<Self> {
        check_keys(keys)?;
        Ok(Self::build_unchecked(keys))
    }

    pub(crate) fn build_unchecked(keys: &'a K) -> Self {
        let mut nodes = vec![TrieNode {
            lo: 0,
            hi: keys.len() as u32,
            depth: 0,
            end: 0,
            first_child: 0,
            n_children: 0,
            branch: 0,
        }];
        let mut stack = vec![0u32];
        while let Some(v) = stack.pop() {
            let TrieNode { lo, hi, depth, .. } = nodes[v as usize];
            let (lo, hi, depth) = (lo as usize, hi as usize, depth as usize);
            let first = keys.key(lo);
            if hi - lo == 1 {
                nodes[v as usize].end = first.len() as u32 + 1;
                continue;
            }
            let last = keys.key(hi - 1);
            let mut end = depth;
            while char_at(first, end) == char_at(last, end) {
                end += 1;
            }
            let first_child = nodes.len() as u32;
            let mut start = lo;
            while start < hi {
                let c = char_at(keys.key(start), end);
                let stop = start + partition_point(start, hi, |i| char_at(keys.key(i), end) <= c);
                nodes.push(TrieNode {
                    lo: start as u32,
                    hi: stop as u32,
                    depth: end as u32 + 1,
                    end: 0,
                    first_child: 0,
                    n_children: 0,
                    branch: c,
                });
                start = stop;
            }
            let n_children = nodes.len() as u32 - first_child;
            let node = &mut nodes[v as usize];
            node.end = end as u32;
            node.first_child = first_child;
            node.n_children = n_children as u16;
            stack.extend(first_child..first_child + n_children);
        }
        CompactedTrie { keys, nodes }
    }

    pub fn keys(&self) -> &'a K {
        self.keys
    }

    pub fn nodes(&self) -> &[TrieNode] {
        &self.nodes
    }

    #[inline]
    pub fn node(&self, v: u32) -> &TrieNode {
        &self.nodes[v as usize]
    }

    /// Label bytes of `v`, terminator included for leaves.
    pub fn label(&self, v: u32) -> impl Iterator<Item = u8> + '_ {
        let n = self.node(v);
        let key = self.keys.key(n.lo as usize);
        (n.depth as usize..n.end as usize).map(move |p| char_at(key, p))
    }

    pub fn num_leaves(&self) -> usize {
        self.keys.len()
    }

    /// Leaf depths counted in edges from the root.
    pub fn leaf_heights(&self) -> HeightStats {
        let depths = self.node_depths();
        HeightStats::from_depths(
            self.nodes
                .iter()
                .zip(&depths)
                .filter(|(n, _)| n.is_leaf())
                .map(|(_, &d)| d as usize),
        )
    }

    fn node_depths(&self) -> Vec<u32> {
        // Children always sit after their parent in the arena.
        let mut depth = vec![0u32; self.nodes.len()];
        for (v, n) in self.nodes.iter().enumerate() {
            for c in n.first_child..n.first_child + n.n_children as u32 {
                depth[c as usize] = depth[v] + 1;
            }
        }
        depth
    }
}

/// Number of indices `i` in `lo..hi` satisfying `pred`, for a predicate that
/// is true on a prefix of the range.
pub(crate) fn partition_point(lo: usize, hi: usize, pred: impl Fn(usize) -> bool) -> usize {
    let (mut a, mut b) = (lo, hi);
    while a < b {
        let mid = a + (b - a) / 2;
        if pred(mid) {
            a = mid + 1;
        } else {
            b = mid;
        }
    }
    a - lo
}

impl<K: KeySet + ?Sized> TrieShape for CompactedTrie<'_, K> {
    fn root(&self) -> u32 {
        0
    }

    #[inline]
    fn num_children(&self, v: u32) -> usize {
        self.node(v).n_children as usize
    }

    #[inline]
    fn child(&self, v: u32, k: usize) -> u32 {
        self.node(v).first_child + k as u32
    }

    #[inline]
    fn leaves(&self, v: u32) -> usize {
        self.node(v).leaves()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn label(t: &CompactedTrie<'_, [&str]>, v: u32) -> Vec<u8> {
        t.label(v).collect()
    }

    #[test]
    fn three_strings() {
        let keys = ["bar", "foo", "foobar"];
        let t = CompactedTrie::build(&keys[..]).unwrap();
        let root = *t.node(0);
        assert_eq!(label(&t, 0), b"");
        assert_eq!(root.n_children, 2);
        let b = t.child(0, 0);
        let f = t.child(0, 1);
        assert_eq!(t.node(b).branch, b'b');
        assert_eq!(label(&t, b), b"ar\0");
        assert_eq!(t.node(f).branch, b'f');
        assert_eq!(label(&t, f), b"oo");
        assert_eq!(t.num_children(f), 2);
        let (f0, fb) = (t.child(f, 0), t.child(f, 1));
        assert_eq!((t.node(f0).branch, label(&t, f0)), (0, vec![]));
        assert_eq!((t.node(fb).branch, label(&t, fb)), (b'b', b"ar\0".to_vec()));
        assert_eq!(t.nodes().iter().filter(|n| n.is_leaf()).count(), 3);
    }

    #[test]
    fn single_string_is_one_leaf() {
        let keys = ["a"];
        let t = CompactedTrie::build(&keys[..]).unwrap();
        assert_eq!(t.nodes().len(), 1);
        assert_eq!(label(&t, 0), b"a\0");
    }

    #[test]
    fn prefix_chain_is_path_shaped() {
        let keys: Vec<String> = (1..=16).map(|i| "a".repeat(i)).collect();
        let t = CompactedTrie::build(&keys).unwrap();
        let h = t.leaf_heights();
        assert_eq!(h.max, 15);
        assert!(t.nodes().iter().all(|n| n.is_leaf() || n.n_children == 2));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(CompactedTrie::build(&["b", "a"][..]).is_err());
        assert!(CompactedTrie::build(&["a\0"][..]).is_err());
    }
}
