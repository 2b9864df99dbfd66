//! Monotone minimal perfect hashing with hollow tries.
//!
//! [`HollowTrieMph`] stores the centroid path decomposition of the binary
//! hollow trie of the (binarized) keys: the tree as DFUDS parentheses and,
//! for every `(`, the skip and direction of one internal node on the path.
//! [`FlatHollowTrie`] is the undecomposed hollow trie, kept as a baseline.
//!
//! Both answer `hash(s)` for every member `s` with its lexicographic rank and
//! return some value in `0..len()` for any other string.

use std::path::Path;

use crate::bitvectors::{BitVector, BitVectorBuilder, DenseSelect};
use crate::bp::{BpSequence, DEFAULT_BLOCK_SIZE};
use crate::container::{Container, ContainerWriter, Kind, Persist};
use crate::corpus::{check_keys, KeySet};
use crate::error::{Error, Result};
use crate::trie::{decompose, Binarized, BinaryTrie, BitKeys, ChildOrder, HeightStats, PathChoice};

/// A query bit string.
trait Bits {
    fn len(&self) -> usize;
    fn bit(&self, pos: usize) -> bool;
}

struct ByteBits<'a>(&'a [u8]);

impl Bits for ByteBits<'_> {
    #[inline]
    fn len(&self) -> usize {
        9 * self.0.len() + 1
    }

    #[inline]
    fn bit(&self, pos: usize) -> bool {
        Binarized::<[&[u8]]>::bit_of(self.0, pos)
    }
}

impl Bits for [bool] {
    fn len(&self) -> usize {
        <[bool]>::len(self)
    }

    fn bit(&self, pos: usize) -> bool {
        self[pos]
    }
}

/// Appends the code of `(delta, dir)`: the binary digits of `delta + 1`
/// after its leading one, most significant first, then `dir` go to `low`;
/// as many zeros followed by a one go to `high`.
pub fn encode_pair(delta: u64, dir: bool, high: &mut BitVectorBuilder, low: &mut BitVectorBuilder) {
    assert!(delta < 1 << 63, "skip too large");
    let v = delta + 1;
    let m = 63 - v.leading_zeros();
    for k in (0..m).rev() {
        low.push((v >> k) & 1 == 1);
    }
    low.push(dir);
    high.push_run(false, m as usize);
    high.push(true);
}

/// A sequence of (skip, direction) pairs.
#[derive(Clone, Debug)]
pub struct SkipPairs {
    high: DenseSelect,
    low: BitVector,
}

impl SkipPairs {
    pub fn new(pairs: impl IntoIterator<Item = (u64, bool)>) -> Result<Self> {
        let (mut high, mut low) = (BitVectorBuilder::new(), BitVectorBuilder::new());
        for (delta, dir) in pairs {
            encode_pair(delta, dir, &mut high, &mut low);
        }
        Self::from_parts(DenseSelect::new(high.build())?, low.build())
    }

    fn from_parts(high: DenseSelect, low: BitVector) -> Result<Self> {
        if high.bits().len() != low.len() || (!low.is_empty() && !high.bits().get(low.len() - 1)) {
            return Err(Error::format("skip pair bitvectors do not line up"));
        }
        Ok(SkipPairs { high, low })
    }

    pub fn len(&self) -> usize {
        self.high.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn high(&self) -> &BitVector {
        self.high.bits()
    }

    pub fn low(&self) -> &BitVector {
        &self.low
    }

    /// Bit offset of pair `g`, shared by both bitvectors.
    #[inline]
    pub fn offset(&self, g: usize) -> usize {
        if g == 0 {
            0
        } else {
            self.high.select1(g - 1) + 1
        }
    }

    /// Decodes the pair at `*pos` and moves `pos` to the next one.
    #[inline]
    pub fn read(&self, pos: &mut usize) -> (u64, bool) {
        let end = self.high.bits().next_one(*pos).expect("read past the last pair");
        let m = (end - *pos) as u32;
        let mantissa = if m == 0 {
            0
        } else {
            self.low.get_bits(*pos, m).reverse_bits() >> (64 - m)
        };
        let dir = self.low.get(end);
        *pos = end + 1;
        (((1u64 << m) | mantissa) - 1, dir)
    }

    pub fn get(&self, g: usize) -> Result<(u64, bool)> {
        Error::check_bounds(g as u64, self.len() as u64)?;
        Ok(self.read(&mut self.offset(g)))
    }

    pub fn size_in_bits(&self) -> usize {
        self.high.size_in_bits() + self.low.size_in_bits()
    }
}

impl Persist for SkipPairs {
    fn save(&self, prefix: &str, w: &mut ContainerWriter) {
        self.high.save(&format!("{prefix}.hi"), w);
        self.low.save(&format!("{prefix}.lo"), w);
    }

    fn load(prefix: &str, c: &Container) -> Result<Self> {
        Self::from_parts(
            DenseSelect::load(&format!("{prefix}.hi"), c)?,
            BitVector::load(&format!("{prefix}.lo"), c)?,
        )
    }
}

/// Centroid path-decomposed hollow trie.
#[derive(Clone, Debug)]
pub struct HollowTrieMph {
    bp: BpSequence,
    pairs: SkipPairs,
}

impl HollowTrieMph {
    /// Builds over sorted distinct byte strings without 0x00.
    pub fn build<K: KeySet + ?Sized>(keys: &K) -> Result<Self> {
        check_keys(keys)?;
        Self::build_bits(&Binarized(keys), DEFAULT_BLOCK_SIZE)
    }

    /// Builds over a sorted, prefix-free set of bit strings.
    pub fn build_bits<B: BitKeys + ?Sized>(keys: &B, block_size: usize) -> Result<Self> {
        if keys.is_empty() {
            return Err(Error::input("empty key set"));
        }
        let trie = BinaryTrie::build(keys);
        let tc = decompose(&trie, PathChoice::Heavy, ChildOrder::Lexicographic);
        let mut bits = BitVectorBuilder::with_capacity(2 * tc.len());
        let (mut high, mut low) = (BitVectorBuilder::new(), BitVectorBuilder::new());
        for x in 0..tc.len() {
            let path = tc.path(x);
            bits.push_run(true, path.len() - 1);
            bits.push(false);
            for w in path.windows(2) {
                let n = trie.node(w[0]);
                encode_pair(n.skip as u64, w[1] != n.left, &mut high, &mut low);
            }
        }
        drop(tc);
        drop(trie);
        Ok(HollowTrieMph {
            bp: BpSequence::new_dfuds(bits.build(), block_size)?,
            pairs: SkipPairs::from_parts(DenseSelect::new(high.build())?, low.build())?,
        })
    }

    pub fn len(&self) -> usize {
        self.bp.rank_select().count_zeros()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn bp(&self) -> &BpSequence {
        &self.bp
    }

    pub fn pairs(&self) -> &SkipPairs {
        &self.pairs
    }

    /// Rank of `s` if it is a member, some value in `0..len()` otherwise.
    #[inline]
    pub fn hash(&self, s: &[u8]) -> u64 {
        self.hash_impl(&ByteBits(s))
    }

    /// [`hash`](Self::hash) for a structure built with [`build_bits`](Self::build_bits).
    pub fn hash_bits(&self, s: &[bool]) -> u64 {
        self.hash_impl(s)
    }

    fn hash_impl<Q: Bits + ?Sized>(&self, s: &Q) -> u64 {
        let bp = &self.bp;
        let len = s.len();
        // Node start, id, '(' before it; bit position; left turns taken.
        let (mut p, mut id, mut base) = (0usize, 0usize, 0usize);
        let (mut pos, mut left_turns) = (0usize, 0usize);
        loop {
            let d = bp.bits().ones_run(p);
            let mut cur = if d > 0 { self.pairs.offset(base) } else { 0 };
            let (mut left_seen, mut right_seen) = (0usize, 0usize);
            let mut next = None;
            for _ in 0..d {
                let (delta, dir) = self.pairs.read(&mut cur);
                pos = pos.saturating_add(delta as usize);
                if pos >= len {
                    break;
                }
                let b = s.bit(pos);
                pos += 1;
                if b == dir {
                    if dir {
                        left_seen += 1;
                    } else {
                        right_seen += 1;
                    }
                    continue;
                }
                next = Some(if b {
                    d - 1 - right_seen
                } else {
                    left_turns += 1;
                    left_seen
                });
                break;
            }
            match next {
                Some(child) => {
                    let j = d - 1 - child;
                    let q = p + j;
                    let close = bp.close_of_with_excess(q, 2 * (base + j) as i64 - q as i64);
                    let half = (close - q).div_ceil(2);
                    id += half;
                    base += j + half;
                    p = close + 1;
                }
                None => {
                    // Leaves of the left sub-tries already passed sit after
                    // this node in preorder but before it in rank.
                    let k = left_seen;
                    let skipped = if k == 0 {
                        0
                    } else {
                        let q = p + d - 1 - k;
                        let close = bp.close_of_with_excess(q, 2 * (base + d - 1 - k) as i64 - q as i64);
                        (close - p - d + k) / 2
                    };
                    return (id + skipped).saturating_sub(left_turns).min(self.len() - 1) as u64;
                }
            }
        }
    }

    /// Whether every internal node has a right child, that is, at least one
    /// pair whose path goes left.
    pub fn internal_nodes_have_right_children(&self) -> bool {
        let mut cur = 0usize;
        let bits = self.bp.bits();
        let mut p = 0usize;
        while p < bits.len() {
            let d = bits.ones_run(p);
            let mut any_left = d == 0;
            for _ in 0..d {
                any_left |= !self.pairs.read(&mut cur).1;
            }
            if !any_left {
                return false;
            }
            p += d + 1;
        }
        true
    }

    /// Depths of all nodes of the decomposed tree.
    pub fn heights(&self) -> HeightStats {
        HeightStats::from_depths(self.bp.dfuds_nodes().into_iter().map(|(d, _)| d as usize))
    }

    pub fn size_in_bits(&self) -> usize {
        self.bp.size_in_bits() + self.pairs.size_in_bits()
    }

    pub fn bits_per_string(&self) -> f64 {
        self.size_in_bits() as f64 / self.len() as f64
    }

    pub fn to_writer(&self) -> ContainerWriter {
        let mut w = ContainerWriter::new(Kind::HollowMph);
        self.save("mph", &mut w);
        w
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        self.to_writer().write_to(path)
    }

    pub fn from_container(c: &Container) -> Result<Self> {
        c.expect_kind(Kind::HollowMph)?;
        Self::load("mph", c)
    }

    pub fn open(path: &Path) -> Result<Self> {
        Self::from_container(&Container::open(path)?)
    }
}

impl Persist for HollowTrieMph {
    fn save(&self, prefix: &str, w: &mut ContainerWriter) {
        self.bp.save(&format!("{prefix}.bp"), w);
        self.pairs.save(&format!("{prefix}.pairs"), w);
    }

    fn load(prefix: &str, c: &Container) -> Result<Self> {
        let bp = BpSequence::load(&format!("{prefix}.bp"), c)?;
        let pairs = SkipPairs::load(&format!("{prefix}.pairs"), c)?;
        if pairs.len() != bp.rank_select().count_ones() || bp.rank_select().count_zeros() == 0 {
            return Err(Error::format(format!(
                "{prefix}: {} pairs for {} open parentheses",
                pairs.len(),
                bp.rank_select().count_ones()
            )));
        }
        Ok(HollowTrieMph { bp, pairs })
    }
}

/// The hollow trie itself: DFUDS with `(()` per internal node and `)` per
/// leaf, plus the skip of every internal node (direction bits unused).
#[derive(Clone, Debug)]
pub struct FlatHollowTrie {
    bp: BpSequence,
    skips: SkipPairs,
}

impl FlatHollowTrie {
    pub fn build<K: KeySet + ?Sized>(keys: &K) -> Result<Self> {
        check_keys(keys)?;
        Self::build_bits(&Binarized(keys), DEFAULT_BLOCK_SIZE)
    }

    pub fn build_bits<B: BitKeys + ?Sized>(keys: &B, block_size: usize) -> Result<Self> {
        if keys.is_empty() {
            return Err(Error::input("empty key set"));
        }
        let trie = BinaryTrie::build(keys);
        let mut bits = BitVectorBuilder::with_capacity(2 * trie.nodes().len());
        let (mut high, mut low) = (BitVectorBuilder::new(), BitVectorBuilder::new());
        let mut stack = vec![0u32];
        while let Some(v) = stack.pop() {
            let n = trie.node(v);
            if n.is_leaf() {
                bits.push(false);
                continue;
            }
            bits.push_run(true, 2);
            bits.push(false);
            encode_pair(n.skip as u64, false, &mut high, &mut low);
            stack.push(n.left + 1);
            stack.push(n.left);
        }
        drop(trie);
        Ok(FlatHollowTrie {
            bp: BpSequence::new_dfuds(bits.build(), block_size)?,
            skips: SkipPairs::from_parts(DenseSelect::new(high.build())?, low.build())?,
        })
    }

    pub fn len(&self) -> usize {
        self.skips.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn hash(&self, s: &[u8]) -> u64 {
        self.hash_impl(&ByteBits(s))
    }

    pub fn hash_bits(&self, s: &[bool]) -> u64 {
        self.hash_impl(s)
    }

    fn hash_impl<Q: Bits + ?Sized>(&self, s: &Q) -> u64 {
        let bp = &self.bp;
        let mut p = 0usize;
        let mut pos = 0usize;
        loop {
            let ones = bp.rank1(p);
            // Leaves before `p`: closes minus one per internal node.
            let leaves_before = p - ones - ones / 2;
            if !bp.is_open(p) {
                return leaves_before as u64;
            }
            let (delta, _) = self.skips.read(&mut self.skips.offset(ones / 2));
            pos = pos.saturating_add(delta as usize);
            if pos >= s.len() {
                return leaves_before as u64;
            }
            p = if s.bit(pos) {
                bp.close_of_with_excess(p, 2 * ones as i64 - p as i64) + 1
            } else {
                p + 3
            };
            pos += 1;
        }
    }

    /// Leaf depths.
    pub fn heights(&self) -> HeightStats {
        HeightStats::from_depths(
            self.bp
                .dfuds_nodes()
                .into_iter()
                .filter(|&(_, deg)| deg == 0)
                .map(|(d, _)| d as usize),
        )
    }

    pub fn size_in_bits(&self) -> usize {
        self.bp.size_in_bits() + self.skips.size_in_bits()
    }

    pub fn bits_per_string(&self) -> f64 {
        self.size_in_bits() as f64 / self.len() as f64
    }

    pub fn to_writer(&self) -> ContainerWriter {
        let mut w = ContainerWriter::new(Kind::FlatHollow);
        self.save("flat", &mut w);
        w
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        self.to_writer().write_to(path)
    }

    pub fn from_container(c: &Container) -> Result<Self> {
        c.expect_kind(Kind::FlatHollow)?;
        Self::load("flat", c)
    }

    pub fn open(path: &Path) -> Result<Self> {
        Self::from_container(&Container::open(path)?)
    }
}

impl Persist for FlatHollowTrie {
    fn save(&self, prefix: &str, w: &mut ContainerWriter) {
        self.bp.save(&format!("{prefix}.bp"), w);
        self.skips.save(&format!("{prefix}.skips"), w);
    }

    fn load(prefix: &str, c: &Container) -> Result<Self> {
        let bp = BpSequence::load(&format!("{prefix}.bp"), c)?;
        let skips = SkipPairs::load(&format!("{prefix}.skips"), c)?;
        if 2 * skips.len() != bp.rank_select().count_ones() {
            return Err(Error::format(format!("{prefix}: skip count does not match the tree")));
        }
        Ok(FlatHollowTrie { bp, skips })
    }
}
