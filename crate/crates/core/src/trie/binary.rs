use crate::corpus::{check_keys, KeySet};
use crate::error::{Error, Result};
use crate::trie::compacted::partition_point;
use crate::trie::{HeightStats, TrieShape};

/// A sorted, prefix-free set of bit strings.
pub trait BitKeys {
    fn len(&self) -> usize;
    fn bit_len(&self, i: usize) -> usize;
    fn bit(&self, i: usize, pos: usize) -> bool;

    /// First position where keys `i` and `j` differ. The keys must be distinct.
    fn lcp(&self, i: usize, j: usize) -> usize {
        let mut p = 0;
        while self.bit(i, p) == self.bit(j, p) {
            p += 1;
        }
        p
    }

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Byte strings seen through the prefix-free binary transform: each byte
/// becomes a `1` followed by its 8 bits, most significant first, and the
/// string ends with a single `0`.
pub struct Binarized<'a, K: KeySet + ?Sized>(pub &'a K);

impl<K: KeySet + ?Sized> Binarized<'_, K> {
    /// Bit `pos` of the transform of `key`.
    #[inline]
    pub fn bit_of(key: &[u8], pos: usize) -> bool {
        let (idx, r) = (pos / 9, pos % 9);
        match key.get(idx) {
            None => false,
            Some(_) if r == 0 => true,
            Some(&b) => (b >> (8 - r)) & 1 == 1,
        }
    }
}

impl<K: KeySet + ?Sized> BitKeys for Binarized<'_, K> {
    fn len(&self) -> usize {
        self.0.len()
    }

    fn bit_len(&self, i: usize) -> usize {
        9 * self.0.key(i).len() + 1
    }

    #[inline]
    fn bit(&self, i: usize, pos: usize) -> bool {
        Self::bit_of(self.0.key(i), pos)
    }

    fn lcp(&self, i: usize, j: usize) -> usize {
        let (a, b) = (self.0.key(i), self.0.key(j));
        let p = a.iter().zip(b).take_while(|(x, y)| x == y).count();
        if p == a.len().min(b.len()) {
            // One ends here: terminator 0 against continuation 1.
            9 * p
        } else {
            9 * p + 1 + (a[p] ^ b[p]).leading_zeros() as usize
        }
    }
}

/// Explicit bit strings, mostly for tests and small examples.
#[derive(Clone, Debug, Default)]
pub struct BitStrings(pub Vec<Vec<bool>>);

impl BitStrings {
    /// Parses strings of `'0'`/`'1'` and checks they are sorted and prefix-free.
    pub fn parse<S: AsRef<str>>(strings: &[S]) -> Result<Self> {
        let mut out = Vec::with_capacity(strings.len());
        for s in strings {
            let bits: Vec<bool> = s
                .as_ref()
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(Error::input(format!("invalid bit character {c:?}"))),
                })
                .collect::<Result<_>>()?;
            out.push(bits);
        }
        for w in out.windows(2) {
            if w[0] >= w[1] || w[1].starts_with(&w[0]) {
                return Err(Error::input("bit strings must be sorted and prefix-free"));
            }
        }
        Ok(BitStrings(out))
    }
}

impl BitKeys for BitStrings {
    fn len(&self) -> usize {
        self.0.len()
    }

    fn bit_len(&self, i: usize) -> usize {
        self.0[i].len()
    }

    fn bit(&self, i: usize, pos: usize) -> bool {
        self.0[i].get(pos).copied().unwrap_or(false)
    }
}

/// A node of a [`BinaryTrie`]: keys `lo..hi`, and for internal nodes the
/// skip and the arena index of the left child (the right one follows it).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BinaryNode {
    pub lo: u32,
    pub hi: u32,
    pub skip: u32,
    pub left: u32,
}

impl BinaryNode {
    #[inline]
    pub fn is_leaf(&self) -> bool {
        self.hi - self.lo == 1
    }

    #[inline]
    pub fn leaves(&self) -> usize {
        (self.hi - self.lo) as usize
    }
}

/// Binary compacted trie holding only topology and the skips of internal
/// nodes. Node 0 is the root.
#[derive(Clone, Debug)]
pub struct BinaryTrie {
    nodes: Vec<BinaryNode>,
}

impl BinaryTrie {
    /// Builds over byte strings through the 9-bit transform.
    pub fn build_bytes<K: KeySet + ?Sized>(keys: &K) -> Result<Self> {
        check_keys(keys)?;
        Ok(Self::build(&Binarized(keys)))
    }

    /// Builds over a sorted, prefix-free, nonempty bit key set.
    pub fn build<B: BitKeys + ?Sized>(keys: &B) -> Self {
        assert!(!keys.is_empty(), "empty key set");
        let mut nodes = vec![BinaryNode {
            lo: 0,
            hi: keys.len() as u32,
            skip: 0,
            left: 0,
        }];
        // Work items: (node, bit depth where its label starts).
        let mut stack = vec![(0u32, 0usize)];
        while let Some((v, depth)) = stack.pop() {
            let BinaryNode { lo, hi, .. } = nodes[v as usize];
            let (lo, hi) = (lo as usize, hi as usize);
            if hi - lo == 1 {
                continue;
            }
            let branch = keys.lcp(lo, hi - 1);
            debug_assert!(branch >= depth);
            let mid = lo + partition_point(lo, hi, |i| !keys.bit(i, branch));
            let left = nodes.len() as u32;
            nodes.push(BinaryNode {
                lo: lo as u32,
                hi: mid as u32,
                skip: 0,
                left: 0,
            });
            nodes.push(BinaryNode {
                lo: mid as u32,
                hi: hi as u32,
                skip: 0,
                left: 0,
            });
            let node = &mut nodes[v as usize];
            node.skip = (branch - depth) as u32;
            node.left = left;
            stack.push((left + 1, branch + 1));
            stack.push((left, branch + 1));
        }
        BinaryTrie { nodes }
    }

    pub fn nodes(&self) -> &[BinaryNode] {
        &self.nodes
    }

    #[inline]
    pub fn node(&self, v: u32) -> &BinaryNode {
        &self.nodes[v as usize]
    }

    pub fn num_leaves(&self) -> usize {
        self.nodes[0].leaves()
    }

    pub fn num_internal(&self) -> usize {
        self.nodes.iter().filter(|n| !n.is_leaf()).count()
    }

    /// Leaf depths counted in edges from the root.
    pub fn leaf_heights(&self) -> HeightStats {
        let mut depth = vec![0u32; self.nodes.len()];
        for (v, n) in self.nodes.iter().enumerate() {
            if !n.is_leaf() {
                depth[n.left as usize] = depth[v] + 1;
                depth[n.left as usize + 1] = depth[v] + 1;
            }
        }
        HeightStats::from_depths(
            self.nodes
                .iter()
                .zip(&depth)
                .filter(|(n, _)| n.is_leaf())
                .map(|(_, &d)| d as usize),
        )
    }
}

impl TrieShape for BinaryTrie {
    fn root(&self) -> u32 {
        0
    }

    #[inline]
    fn num_children(&self, v: u32) -> usize {
        if self.node(v).is_leaf() {
            0
        } else {
            2
        }
    }

    #[inline]
    fn child(&self, v: u32, k: usize) -> u32 {
        self.node(v).left + k as u32
    }

    #[inline]
    fn leaves(&self, v: u32) -> usize {
        self.node(v).leaves()
    }
}
