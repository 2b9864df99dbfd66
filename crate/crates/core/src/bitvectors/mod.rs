//! Plain bitvectors and their rank/select directories.

mod rank_select;
mod select;

pub use rank_select::RankSelect;
pub use select::{DenseSelect, SampledSelect};

use crate::container::{Container, ContainerWriter, Persist};
use crate::error::{Error, Result};
use crate::slab::Slab;

/// An immutable sequence of bits, packed LSB-first into 64-bit words.
///
/// Bits past `len` in the last word are always zero.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BitVector {
    words: Slab<u64>,
    len: usize,
}

/// Append-only builder for [`BitVector`].
#[derive(Clone, Debug, Default)]
pub struct BitVectorBuilder {
    words: Vec<u64>,
    len: usize,
}

impl BitVectorBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        BitVectorBuilder {
            words: Vec::with_capacity(bits.div_ceil(64)),
            len: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(64) {
            self.words.push(0);
        }
        if bit {
            *self.words.last_mut().unwrap() |= 1 << (self.len % 64);
        }
        self.len += 1;
    }

    /// Appends the low `nbits` bits of `value`, least significant first.
    pub fn push_bits(&mut self, value: u64, nbits: u32) {
        debug_assert!(nbits <= 64);
        if nbits == 0 {
            return;
        }
        let value = if nbits == 64 { value } else { value & ((1 << nbits) - 1) };
        let off = (self.len % 64) as u32;
        if off == 0 {
            self.words.push(value);
        } else {
            *self.words.last_mut().unwrap() |= value << off;
            if off + nbits > 64 {
                self.words.push(value >> (64 - off));
            }
        }
        self.len += nbits as usize;
    }

    /// Appends `n` copies of `bit`.
    pub fn push_run(&mut self, bit: bool, mut n: usize) {
        while n > 0 {
            let chunk = n.min(64) as u32;
            self.push_bits(if bit { u64::MAX } else { 0 }, chunk);
            n -= chunk as usize;
        }
    }

    pub fn build(self) -> BitVector {
        BitVector {
            words: Slab::from_vec(self.words),
            len: self.len,
        }
    }
}

impl FromIterator<bool> for BitVector {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut b = BitVectorBuilder::new();
        for bit in iter {
            b.push(bit);
        }
        b.build()
    }
}

impl BitVector {
    /// Parses a string of `'0'`/`'1'` characters; other characters are skipped.
    pub fn from_str_bits(s: &str) -> Self {
        s.chars()
            .filter_map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect()
    }

    pub fn from_words(words: Vec<u64>, len: usize) -> Result<Self> {
        if words.len() != len.div_ceil(64) {
            return Err(Error::format(format!(
                "bitvector of {len} bits needs {} words, got {}",
                len.div_ceil(64),
                words.len()
            )));
        }
        Self::from_slab(Slab::from_vec(words), len)
    }

    fn from_slab(words: Slab<u64>, len: usize) -> Result<Self> {
        if words.len() != len.div_ceil(64) {
            return Err(Error::format(format!(
                "bitvector of {len} bits needs {} words, got {}",
                len.div_ceil(64),
                words.len()
            )));
        }
        if !len.is_multiple_of(64) && words[words.len() - 1] >> (len % 64) != 0 {
            return Err(Error::format("nonzero bits past the end of a bitvector"));
        }
        Ok(BitVector { words, len })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    /// Reads `nbits <= 64` bits starting at `pos`; bit `pos` lands in bit 0.
    #[inline]
    pub fn get_bits(&self, pos: usize, nbits: u32) -> u64 {
        debug_assert!(nbits <= 64 && pos + nbits as usize <= self.len);
        if nbits == 0 {
            return 0;
        }
        let w = pos / 64;
        let off = (pos % 64) as u32;
        let mut v = self.words[w] >> off;
        if off + nbits > 64 {
            v |= self.words[w + 1] << (64 - off);
        }
        if nbits == 64 {
            v
        } else {
            v & ((1 << nbits) - 1)
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Position of the first set bit at or after `pos`.
    #[inline]
    pub fn next_one(&self, pos: usize) -> Option<usize> {
        if pos >= self.len {
            return None;
        }
        let mut w = pos / 64;
        let mut word = self.words[w] & (u64::MAX << (pos % 64));
        loop {
            if word != 0 {
                return Some(w * 64 + word.trailing_zeros() as usize);
            }
            w += 1;
            if w == self.words.len() {
                return None;
            }
            word = self.words[w];
        }
    }

    /// Length of the run of set bits starting at `pos`.
    #[inline]
    pub fn ones_run(&self, pos: usize) -> usize {
        let mut run = 0;
        let mut w = pos / 64;
        let mut off = pos % 64;
        while w < self.words.len() {
            let ones = (!(self.words[w] >> off)).trailing_zeros() as usize;
            let ones = ones.min(64 - off);
            run += ones;
            if off + ones < 64 {
                break;
            }
            w += 1;
            off = 0;
        }
        run.min(self.len.saturating_sub(pos))
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn size_in_bits(&self) -> usize {
        64 * (self.words.len() + 1)
    }
}

impl Persist for BitVector {
    fn save(&self, prefix: &str, w: &mut ContainerWriter) {
        w.put(&format!("{prefix}.len"), &[self.len as u64]);
        w.put(&format!("{prefix}.words"), &self.words);
    }

    fn load(prefix: &str, c: &Container) -> Result<Self> {
        let [len] = c.scalars::<1>(&format!("{prefix}.len"))?;
        Self::from_slab(c.slab(&format!("{prefix}.words"))?, len as usize)
    }
}
