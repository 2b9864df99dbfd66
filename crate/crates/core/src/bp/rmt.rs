use crate::bitvectors::BitVector;
use crate::broadword::{byte_min_excess, find_zero_in_word, find_zero_in_word_bytewise, reverse_complement};
use crate::container::{Container, ContainerWriter, Persist};
use crate::error::{Error, Result};
use crate::slab::Slab;

pub const DEFAULT_BLOCK_SIZE: usize = 512;

type WordSearch = fn(u64, u64, u32) -> std::result::Result<u32, u64>;

/// Block minima of the excess walk of a parentheses sequence, arranged as an
/// implicit complete binary tree (heap order, root at index 1).
///
/// The minimum of block `b` is taken over the excess at every boundary from
/// the start of `b` to the start of `b + 1`, both included, so one tree
/// serves both search directions. `samples[b]` is the excess at the start of
/// block `b`; there is one extra sample for the end of the sequence.
#[derive(Clone, Debug)]
pub struct RangeMinTree {
    block_size: usize,
    num_blocks: usize,
    leaf_start: usize,
    mins: Slab<i32>,
    samples: Slab<i32>,
}

impl RangeMinTree {
    pub fn new(bits: &BitVector, block_size: usize) -> Result<Self> {
        if block_size == 0 || !block_size.is_multiple_of(64) {
            return Err(Error::Precondition(format!(
                "block size must be a positive multiple of 64, got {block_size}"
            )));
        }
        let n = bits.len();
        let num_blocks = n.div_ceil(block_size).max(1);
        let leaf_start = num_blocks.next_power_of_two();
        let mut mins = vec![i32::MAX; 2 * leaf_start];
        let mut samples = Vec::with_capacity(num_blocks + 1);
        let mut e: i32 = 0;
        for b in 0..num_blocks {
            samples.push(e);
            let mut m = e;
            let start = b * block_size;
            let end = (start + block_size).min(n);
            let mut p = start;
            while p + 8 <= end {
                let byte = bits.get_bits(p, 8) as u8;
                m = m.min(e + byte_min_excess(byte) as i32);
                e += 2 * byte.count_ones() as i32 - 8;
                p += 8;
            }
            while p < end {
                e += if bits.get(p) { 1 } else { -1 };
                m = m.min(e);
                p += 1;
            }
            mins[leaf_start + b] = m;
        }
        samples.push(e);
        for v in (1..leaf_start).rev() {
            mins[v] = mins[2 * v].min(mins[2 * v + 1]);
        }
        Ok(RangeMinTree {
            block_size,
            num_blocks,
            leaf_start,
            mins: mins.into(),
            samples: samples.into(),
        })
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn num_blocks(&self) -> usize {
        self.num_blocks
    }

    /// Excess at the start of block `b` (`b == num_blocks` gives the total).
    #[inline]
    pub fn sample(&self, b: usize) -> i32 {
        self.samples[b]
    }

    /// Lowest excess reached anywhere in the sequence.
    pub fn global_min(&self) -> i32 {
        self.mins[1]
    }

    /// First block after `b` whose minimum is at most `t`.
    pub fn next_block_leq(&self, b: usize, t: i32) -> Option<usize> {
        let mut v = self.leaf_start + b;
        loop {
            if v == 1 {
                return None;
            }
            if v.is_multiple_of(2) && self.mins[v + 1] <= t {
                v += 1;
                break;
            }
            v /= 2;
        }
        while v < self.leaf_start {
            v *= 2;
            if self.mins[v] > t {
                v += 1;
            }
        }
        Some(v - self.leaf_start)
    }

    /// Last block before `b` whose minimum is at most `t`.
    pub fn prev_block_leq(&self, b: usize, t: i32) -> Option<usize> {
        let mut v = self.leaf_start + b;
        loop {
            if v == 1 {
                return None;
            }
            if v % 2 == 1 && self.mins[v - 1] <= t {
                v -= 1;
                break;
            }
            v /= 2;
        }
        while v < self.leaf_start {
            v = 2 * v + 1;
            if self.mins[v] > t {
                v -= 1;
            }
        }
        Some(v - self.leaf_start)
    }

    /// Matching close of the open parenthesis at `i`, whose excess before it is `e_i`.
    #[inline]
    pub fn find_close(&self, bits: &BitVector, i: usize, e_i: i32) -> Option<usize> {
        self.find_close_with(bits, i, e_i, find_zero_in_word).map(|(j, _)| j)
    }

    /// Matching open of the close parenthesis at `j`, whose excess before it is `e_j`.
    #[inline]
    pub fn find_open(&self, bits: &BitVector, j: usize, e_j: i32) -> Option<usize> {
        self.find_open_with(bits, j, e_j, find_zero_in_word).map(|(i, _)| i)
    }

    /// [`find_close`](Self::find_close) with a byte-at-a-time in-word search.
    pub fn find_close_bytewise(&self, bits: &BitVector, i: usize, e_i: i32) -> Option<usize> {
        self.find_close_with(bits, i, e_i, find_zero_in_word_bytewise)
            .map(|(j, _)| j)
    }

    pub fn find_open_bytewise(&self, bits: &BitVector, j: usize, e_j: i32) -> Option<usize> {
        self.find_open_with(bits, j, e_j, find_zero_in_word_bytewise)
            .map(|(i, _)| i)
    }

    /// The block in which the search for the mate of the open at `i` ends,
    /// whether found by the local scan or by the tree.
    pub fn close_block(&self, bits: &BitVector, i: usize, e_i: i32) -> Option<usize> {
        self.find_close_with(bits, i, e_i, find_zero_in_word).map(|(_, b)| b)
    }

    #[inline]
    fn find_close_with(&self, bits: &BitVector, i: usize, e_i: i32, search: WordSearch) -> Option<(usize, usize)> {
        let b = i / self.block_size;
        let end = ((b + 1) * self.block_size).min(bits.len());
        if let Ok(j) = scan_forward(bits, i + 1, end, 1, search) {
            return Some((j, b));
        }
        let nb = self.next_block_leq(b, e_i)?;
        let start = nb * self.block_size;
        let end = (start + self.block_size).min(bits.len());
        let d = (self.samples[nb] - e_i) as u64;
        scan_forward(bits, start, end, d, search).ok().map(|j| (j, nb))
    }

    #[inline]
    fn find_open_with(&self, bits: &BitVector, j: usize, e_j: i32, search: WordSearch) -> Option<(usize, usize)> {
        let t = e_j - 1;
        let b = j / self.block_size;
        let start = b * self.block_size;
        if let Ok(i) = scan_backward(bits, j, start, 1, search) {
            return Some((i, b));
        }
        let pb = self.prev_block_leq(b, t)?;
        let start = pb * self.block_size;
        let end = start + self.block_size;
        let d = (self.samples[pb + 1] - t) as u64;
        scan_backward(bits, end, start, d, search).ok().map(|i| (i, pb))
    }

    pub fn size_in_bits(&self) -> usize {
        32 * (self.mins.len() + self.samples.len()) + 3 * 64
    }
}

/// First position `j` in `[p, end)` where the walk started at relative
/// excess `d` reaches 0 after reading bit `j`.
#[inline]
fn scan_forward(
    bits: &BitVector,
    mut p: usize,
    end: usize,
    mut d: u64,
    search: WordSearch,
) -> std::result::Result<usize, u64> {
    let words = bits.words();
    while p < end {
        let off = p % 64;
        let nbits = (64 - off).min(end - p);
        let w = words[p / 64] >> off;
        match search(w, d, nbits as u32) {
            Ok(q) => return Ok(p + q as usize),
            Err(nd) => d = nd,
        }
        p += nbits;
    }
    Err(d)
}

/// Reading bits `p - 1, p - 2, ...` down to `start` and undoing their steps,
/// the first position `k` where the relative excess before `k` reaches 0.
#[inline]
fn scan_backward(
    bits: &BitVector,
    mut p: usize,
    start: usize,
    mut d: u64,
    search: WordSearch,
) -> std::result::Result<usize, u64> {
    let words = bits.words();
    while p > start {
        let nbits = ((p - 1) % 64 + 1).min(p - start);
        let lo = p - nbits;
        let w = words[lo / 64] >> (lo % 64);
        match search(reverse_complement(w, nbits as u32), d, nbits as u32) {
            Ok(q) => return Ok(p - 1 - q as usize),
            Err(nd) => d = nd,
        }
        p = lo;
    }
    Err(d)
}

impl Persist for RangeMinTree {
    fn save(&self, prefix: &str, w: &mut ContainerWriter) {
        w.put(
            &format!("{prefix}.rmt"),
            &[self.block_size as u64, self.num_blocks as u64, self.leaf_start as u64],
        );
        w.put(&format!("{prefix}.mins"), &self.mins);
        w.put(&format!("{prefix}.samples"), &self.samples);
    }

    fn load(prefix: &str, c: &Container) -> Result<Self> {
        let [block_size, num_blocks, leaf_start] = c.scalars::<3>(&format!("{prefix}.rmt"))?;
        let (block_size, num_blocks, leaf_start) = (block_size as usize, num_blocks as usize, leaf_start as usize);
        let mins: Slab<i32> = c.slab(&format!("{prefix}.mins"))?;
        let samples: Slab<i32> = c.slab(&format!("{prefix}.samples"))?;
        if block_size == 0
            || block_size % 64 != 0
            || num_blocks == 0
            || leaf_start != num_blocks.next_power_of_two()
            || mins.len() != 2 * leaf_start
            || samples.len() != num_blocks + 1
        {
            return Err(Error::format(format!("{prefix}: inconsistent range min tree")));
        }
        Ok(RangeMinTree {
            block_size,
            num_blocks,
            leaf_start,
            mins,
            samples,
        })
    }
}
