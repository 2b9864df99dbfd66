//! Balanced parentheses with excess, FindClose and FindOpen.

mod rmt;

pub use rmt::{RangeMinTree, DEFAULT_BLOCK_SIZE};

use crate::bitvectors::{BitVector, RankSelect};
use crate::container::{Container, ContainerWriter, Persist};
use crate::error::{Error, Result};

/// A parentheses sequence (`1` = open, `0` = close) with rank/select and a
/// Range Min tree for mate queries.
///
/// Two shapes are accepted: balanced sequences, and DFUDS sequences of a
/// tree without a super-root, which are balanced except for one extra close
/// parenthesis at the very end.
#[derive(Clone, Debug)]
pub struct BpSequence {
    rs: RankSelect,
    tree: RangeMinTree,
}

impl BpSequence {
    /// Builds over a balanced sequence.
    pub fn new(bits: BitVector) -> Result<Self> {
        Self::with_block_size(bits, DEFAULT_BLOCK_SIZE)
    }

    pub fn with_block_size(bits: BitVector, block_size: usize) -> Result<Self> {
        let tree = RangeMinTree::new(&bits, block_size)?;
        if tree.global_min() < 0 || tree.sample(tree.num_blocks()) != 0 {
            return Err(Error::input("parentheses sequence is not balanced"));
        }
        Ok(Self::assemble(bits, tree))
    }

    /// Builds over a DFUDS sequence without super-root: every proper prefix
    /// has nonnegative excess and the whole sequence has excess −1.
    pub fn new_dfuds(bits: BitVector, block_size: usize) -> Result<Self> {
        let tree = RangeMinTree::new(&bits, block_size)?;
        let total = tree.sample(tree.num_blocks());
        // The only way to reach −1 is the final step when every earlier prefix is ≥ 0.
        if total != -1 || tree.global_min() < -1 || !Self::first_negative_is_last(&bits) {
            return Err(Error::input("not a DFUDS parentheses sequence"));
        }
        Ok(Self::assemble(bits, tree))
    }

    fn first_negative_is_last(bits: &BitVector) -> bool {
        let mut e = 0i64;
        for (k, b) in bits.iter().enumerate() {
            e += if b { 1 } else { -1 };
            if e < 0 {
                return k + 1 == bits.len();
            }
        }
        false
    }

    fn assemble(bits: BitVector, tree: RangeMinTree) -> Self {
        BpSequence {
            rs: RankSelect::new(bits),
            tree,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.rs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rs.is_empty()
    }

    #[inline]
    pub fn bits(&self) -> &BitVector {
        self.rs.bits()
    }

    #[inline]
    pub fn rank_select(&self) -> &RankSelect {
        &self.rs
    }

    pub fn tree(&self) -> &RangeMinTree {
        &self.tree
    }

    #[inline]
    pub fn is_open(&self, i: usize) -> bool {
        self.rs.get(i)
    }

    #[inline]
    pub fn rank1(&self, i: usize) -> usize {
        self.rs.rank1(i)
    }

    #[inline]
    pub fn rank0(&self, i: usize) -> usize {
        self.rs.rank0(i)
    }

    #[inline]
    pub fn select0(&self, k: usize) -> usize {
        self.rs.select0(k)
    }

    #[inline]
    pub fn select1(&self, k: usize) -> usize {
        self.rs.select1(k)
    }

    /// Opens minus closes among the first `i` symbols. Requires `i <= len`.
    #[inline]
    pub fn excess_at(&self, i: usize) -> i64 {
        2 * self.rs.rank1(i) as i64 - i as i64
    }

    pub fn excess(&self, i: usize) -> Result<i64> {
        if i > self.len() {
            return Err(Error::OutOfBounds {
                index: i as u64,
                len: self.len() as u64 + 1,
            });
        }
        Ok(self.excess_at(i))
    }

    /// Mate of the open parenthesis at `i`, without argument checks.
    #[inline]
    pub fn close_of(&self, i: usize) -> usize {
        debug_assert!(self.is_open(i));
        self.tree
            .find_close(self.bits(), i, self.excess_at(i) as i32)
            .expect("open parenthesis without mate")
    }

    /// [`close_of`](Self::close_of) with the excess before `i` already known.
    #[inline]
    pub fn close_of_with_excess(&self, i: usize, excess: i64) -> usize {
        debug_assert_eq!(excess, self.excess_at(i));
        self.tree
            .find_close(self.bits(), i, excess as i32)
            .expect("open parenthesis without mate")
    }

    /// Mate of the close parenthesis at `j`, without argument checks.
    #[inline]
    pub fn open_of(&self, j: usize) -> usize {
        debug_assert!(!self.is_open(j));
        self.tree
            .find_open(self.bits(), j, self.excess_at(j) as i32)
            .expect("close parenthesis without mate")
    }

    pub fn find_close(&self, i: usize) -> Result<usize> {
        Error::check_bounds(i as u64, self.len() as u64)?;
        if !self.is_open(i) {
            return Err(Error::Precondition(format!("position {i} is not an open parenthesis")));
        }
        self.tree
            .find_close(self.bits(), i, self.excess_at(i) as i32)
            .ok_or_else(|| Error::Precondition(format!("open parenthesis at {i} has no mate")))
    }

    pub fn find_open(&self, j: usize) -> Result<usize> {
        Error::check_bounds(j as u64, self.len() as u64)?;
        if self.is_open(j) {
            return Err(Error::Precondition(format!("position {j} is not a close parenthesis")));
        }
        self.tree
            .find_open(self.bits(), j, self.excess_at(j) as i32)
            .ok_or_else(|| Error::Precondition(format!("close parenthesis at {j} has no mate")))
    }

    /// [`find_close`](Self::find_close) resolved with byte-at-a-time table lookups.
    pub fn find_close_bytewise(&self, i: usize) -> Option<usize> {
        self.tree.find_close_bytewise(self.bits(), i, self.excess_at(i) as i32)
    }

    pub fn find_open_bytewise(&self, j: usize) -> Option<usize> {
        self.tree.find_open_bytewise(self.bits(), j, self.excess_at(j) as i32)
    }

    /// Block where the search for the mate of the open at `i` terminates.
    pub fn close_block(&self, i: usize) -> Option<usize> {
        self.tree.close_block(self.bits(), i, self.excess_at(i) as i32)
    }

    /// Depth and degree of every node of a DFUDS sequence, in preorder.
    pub fn dfuds_nodes(&self) -> Vec<(u32, u32)> {
        // Children still to start, per ancestor, innermost last.
        let mut pending: Vec<usize> = Vec::new();
        let mut out = Vec::with_capacity(self.rs.count_zeros());
        let mut degree = 0usize;
        for b in self.bits().iter() {
            if b {
                degree += 1;
                continue;
            }
            while pending.last() == Some(&0) {
                pending.pop();
            }
            out.push((pending.len() as u32, degree as u32));
            if let Some(top) = pending.last_mut() {
                *top -= 1;
            }
            if degree > 0 {
                pending.push(degree);
            }
            degree = 0;
        }
        out
    }

    pub fn size_in_bits(&self) -> usize {
        self.rs.size_in_bits() + self.tree.size_in_bits()
    }
}

impl Persist for BpSequence {
    fn save(&self, prefix: &str, w: &mut ContainerWriter) {
        self.rs.save(prefix, w);
        self.tree.save(prefix, w);
    }

    fn load(prefix: &str, c: &Container) -> Result<Self> {
        let rs = RankSelect::load(prefix, c)?;
        let tree = RangeMinTree::load(prefix, c)?;
        if tree.num_blocks() != rs.len().div_ceil(tree.block_size()).max(1) {
            return Err(Error::format(format!(
                "{prefix}: range min tree does not match sequence length"
            )));
        }
        Ok(BpSequence { rs, tree })
    }
}
