use crate::bitvectors::BitVector;
use crate::broadword::select_in_word;
use crate::container::{Container, ContainerWriter, Persist};
use crate::error::{Error, Result};
use crate::slab::Slab;

const WORDS_PER_BLOCK: usize = 8;
const BLOCK_BITS: usize = 64 * WORDS_PER_BLOCK;
/// Default spacing, in occurrences, between select hints.
pub const DEFAULT_SELECT_HINT: usize = 8192;

/// Bitvector with a two-level interleaved rank directory and hinted select
/// for both bit values.
///
/// Each 512-bit block owns two directory words: the number of ones before the
/// block, and seven packed 9-bit counts of the ones before words 1..=7 of the
/// block. Select jumps through a hint table (the block holding every
/// `hint`-th occurrence) and binary searches the blocks in between.
#[derive(Clone, Debug)]
pub struct RankSelect {
    bits: BitVector,
    dir: Slab<u64>,
    hints1: Slab<u64>,
    hints0: Slab<u64>,
    ones: usize,
    hint: usize,
}

impl RankSelect {
    pub fn new(bits: BitVector) -> Self {
        Self::with_hint(bits, DEFAULT_SELECT_HINT)
    }

    pub fn with_hint(bits: BitVector, hint: usize) -> Self {
        assert!(hint > 0);
        let words = bits.words();
        let nblocks = words.len().div_ceil(WORDS_PER_BLOCK);
        let mut dir = Vec::with_capacity(2 * (nblocks + 1));
        let mut total = 0u64;
        for b in 0..nblocks {
            dir.push(total);
            let mut sub = 0u64;
            let mut inner = 0u64;
            for k in 0..WORDS_PER_BLOCK {
                if k > 0 {
                    sub |= inner << (9 * (k - 1));
                }
                inner += words.get(b * WORDS_PER_BLOCK + k).map_or(0, |w| w.count_ones() as u64);
            }
            dir.push(sub);
            total += inner;
        }
        dir.push(total);
        dir.push(0);
        let ones = total as usize;
        let zeros = bits.len() - ones;

        let mut hints1 = Vec::with_capacity(ones / hint + 2);
        let mut hints0 = Vec::with_capacity(zeros / hint + 2);
        for b in 0..nblocks {
            let start1 = dir[2 * b] as usize;
            let end1 = dir[2 * b + 2] as usize;
            while hints1.len() * hint < end1 && hints1.len() * hint >= start1 {
                hints1.push(b as u64);
            }
            let start0 = b * BLOCK_BITS - start1;
            let end0 = ((b + 1) * BLOCK_BITS - end1).min(zeros);
            while hints0.len() * hint < end0 && hints0.len() * hint >= start0 {
                hints0.push(b as u64);
            }
        }
        hints1.push(nblocks as u64);
        hints0.push(nblocks as u64);

        RankSelect {
            bits,
            dir: dir.into(),
            hints1: hints1.into(),
            hints0: hints0.into(),
            ones,
            hint,
        }
    }

    #[inline]
    pub fn bits(&self) -> &BitVector {
        &self.bits
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn count_ones(&self) -> usize {
        self.ones
    }

    pub fn count_zeros(&self) -> usize {
        self.len() - self.ones
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.bits.get(i)
    }

    /// Number of ones in positions `[0, i)`. Requires `i <= len`.
    #[inline]
    pub fn rank1(&self, i: usize) -> usize {
        debug_assert!(i <= self.len());
        let w = i / 64;
        let b = w / WORDS_PER_BLOCK;
        let k = w % WORDS_PER_BLOCK;
        let mut r = self.dir[2 * b];
        if k > 0 {
            r += (self.dir[2 * b + 1] >> (9 * (k - 1))) & 0x1ff;
        }
        let off = i % 64;
        if off > 0 {
            r += (self.bits.words()[w] & ((1 << off) - 1)).count_ones() as u64;
        }
        r as usize
    }

    #[inline]
    pub fn rank0(&self, i: usize) -> usize {
        i - self.rank1(i)
    }

    /// Checked rank: occurrences of `bit` in `[0, i)`.
    pub fn rank(&self, bit: bool, i: usize) -> Result<usize> {
        if i > self.len() {
            return Err(Error::OutOfBounds {
                index: i as u64,
                len: self.len() as u64 + 1,
            });
        }
        Ok(if bit { self.rank1(i) } else { self.rank0(i) })
    }

    /// Checked select: position of the `k`-th (0-based) occurrence of `bit`.
    pub fn select(&self, bit: bool, k: usize) -> Result<usize> {
        let count = if bit { self.ones } else { self.count_zeros() };
        Error::check_bounds(k as u64, count as u64)?;
        Ok(if bit { self.select1(k) } else { self.select0(k) })
    }

    #[inline]
    fn ones_before_block(&self, b: usize) -> usize {
        self.dir[2 * b] as usize
    }

    #[inline]
    fn sub_count(&self, b: usize, k: usize) -> usize {
        if k == 0 {
            0
        } else {
            ((self.dir[2 * b + 1] >> (9 * (k - 1))) & 0x1ff) as usize
        }
    }

    /// Position of the `k`-th one. Requires `k < count_ones()`.
    pub fn select1(&self, k: usize) -> usize {
        debug_assert!(k < self.ones);
        let h = k / self.hint;
        let mut lo = self.hints1[h] as usize;
        let nblocks = self.hints1[self.hints1.len() - 1] as usize;
        let mut hi = (self.hints1[h + 1] as usize).min(nblocks - 1);
        // Last block in [lo, hi] with ones_before_block <= k.
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if self.ones_before_block(mid) <= k {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let b = lo;
        let rem = k - self.ones_before_block(b);
        let mut w = 0;
        while w + 1 < WORDS_PER_BLOCK && self.sub_count(b, w + 1) <= rem {
            w += 1;
        }
        let word = self.bits.words()[b * WORDS_PER_BLOCK + w];
        (b * WORDS_PER_BLOCK + w) * 64 + select_in_word(word, (rem - self.sub_count(b, w)) as u32) as usize
    }

    /// Position of the `k`-th zero. Requires `k < count_zeros()`.
    pub fn select0(&self, k: usize) -> usize {
        debug_assert!(k < self.count_zeros());
        let zeros_before = |b: usize| b * BLOCK_BITS - self.ones_before_block(b);
        let h = k / self.hint;
        let mut lo = self.hints0[h] as usize;
        let nblocks = self.hints0[self.hints0.len() - 1] as usize;
        let mut hi = (self.hints0[h + 1] as usize).min(nblocks - 1);
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if zeros_before(mid) <= k {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let b = lo;
        let rem = k - zeros_before(b);
        let sub0 = |w: usize| 64 * w - self.sub_count(b, w);
        let mut w = 0;
        while w + 1 < WORDS_PER_BLOCK && sub0(w + 1) <= rem {
            w += 1;
        }
        let word = !self.bits.words()[b * WORDS_PER_BLOCK + w];
        (b * WORDS_PER_BLOCK + w) * 64 + select_in_word(word, (rem - sub0(w)) as u32) as usize
    }

    /// Directory overhead in bits, excluding the bitvector itself.
    pub fn overhead_bits(&self) -> usize {
        64 * (self.dir.len() + self.hints1.len() + self.hints0.len() + 3)
    }

    pub fn size_in_bits(&self) -> usize {
        self.bits.size_in_bits() + self.overhead_bits()
    }
}

impl Persist for RankSelect {
    fn save(&self, prefix: &str, w: &mut ContainerWriter) {
        self.bits.save(prefix, w);
        w.put(&format!("{prefix}.rs.meta"), &[self.ones as u64, self.hint as u64]);
        w.put(&format!("{prefix}.rs.dir"), &self.dir);
        w.put(&format!("{prefix}.rs.hints1"), &self.hints1);
        w.put(&format!("{prefix}.rs.hints0"), &self.hints0);
    }

    fn load(prefix: &str, c: &Container) -> Result<Self> {
        let bits = BitVector::load(prefix, c)?;
        let [ones, hint] = c.scalars::<2>(&format!("{prefix}.rs.meta"))?;
        let dir: Slab<u64> = c.slab(&format!("{prefix}.rs.dir"))?;
        let hints1: Slab<u64> = c.slab(&format!("{prefix}.rs.hints1"))?;
        let hints0: Slab<u64> = c.slab(&format!("{prefix}.rs.hints0"))?;
        let nblocks = bits.words().len().div_ceil(WORDS_PER_BLOCK);
        if dir.len() != 2 * (nblocks + 1)
            || dir[2 * nblocks] != ones
            || hint == 0
            || hints1.is_empty()
            || hints0.is_empty()
        {
            return Err(Error::format(format!("{prefix}: inconsistent rank/select directory")));
        }
        Ok(RankSelect {
            bits,
            dir,
            hints1,
            hints0,
            ones: ones as usize,
            hint: hint as usize,
        })
    }
}
