use crate::bitvectors::BitVector;
use crate::broadword::select_in_word;
use crate::container::{Container, ContainerWriter, Persist};
use crate::error::{Error, Result};
use crate::slab::Slab;

const DENSE_BLOCK: usize = 1024;
const DENSE_SUB: usize = 128;
const MAX_GAP: usize = 64;

/// Select over a bitvector whose consecutive ones are at most 64 positions
/// apart (and whose first one is below position 64).
///
/// Stores the absolute position of every 1024th one and, as a 16-bit offset
/// from that position, every 128th one. A query jumps to the nearest
/// sampled one and counts forward a few words.
#[derive(Clone, Debug)]
pub struct DenseSelect {
    bits: BitVector,
    blocks: Slab<u64>,
    subs: Slab<u16>,
    ones: usize,
}

impl DenseSelect {
    pub fn new(bits: BitVector) -> Result<Self> {
        let mut blocks = Vec::new();
        let mut subs = Vec::new();
        let mut prev: Option<usize> = None;
        let mut k = 0usize;
        let mut block_start = 0usize;
        for (wi, &word) in bits.words().iter().enumerate() {
            let mut w = word;
            while w != 0 {
                let p = wi * 64 + w.trailing_zeros() as usize;
                w &= w - 1;
                let gap = match prev {
                    Some(q) => p - q,
                    None => p + 1,
                };
                if gap > MAX_GAP {
                    return Err(Error::Precondition(format!(
                        "dense select needs ones at most {MAX_GAP} apart, found gap {gap} ending at {p}"
                    )));
                }
                if k.is_multiple_of(DENSE_BLOCK) {
                    blocks.push(p as u64);
                    block_start = p;
                }
                if k.is_multiple_of(DENSE_SUB) {
                    subs.push((p - block_start) as u16);
                }
                prev = Some(p);
                k += 1;
            }
        }
        Ok(DenseSelect {
            bits,
            blocks: blocks.into(),
            subs: subs.into(),
            ones: k,
        })
    }

    #[inline]
    pub fn bits(&self) -> &BitVector {
        &self.bits
    }

    pub fn count_ones(&self) -> usize {
        self.ones
    }

    /// Position of the `k`-th one. Requires `k < count_ones()`.
    #[inline]
    pub fn select1(&self, k: usize) -> usize {
        debug_assert!(k < self.ones);
        let start = self.blocks[k / DENSE_BLOCK] as usize + self.subs[k / DENSE_SUB] as usize;
        let rem = k % DENSE_SUB;
        if rem == 0 {
            return start;
        }
        scan_forward(self.bits.words(), start, rem)
    }

    /// Checked select.
    pub fn select(&self, k: usize) -> Result<usize> {
        Error::check_bounds(k as u64, self.ones as u64)?;
        Ok(self.select1(k))
    }

    pub fn overhead_bits(&self) -> usize {
        64 * (self.blocks.len() + 1) + 16 * self.subs.len()
    }

    pub fn size_in_bits(&self) -> usize {
        self.bits.size_in_bits() + self.overhead_bits()
    }
}

/// Position of the `rem`-th one strictly after the one at `start`.
#[inline]
fn scan_forward(words: &[u64], start: usize, rem: usize) -> usize {
    let mut wi = start / 64;
    let shift = start % 64;
    // Drop the bits up to and including `start`.
    let mut w = if shift == 63 {
        0
    } else {
        words[wi] & (u64::MAX << (shift + 1))
    };
    let mut rem = rem - 1;
    loop {
        let c = w.count_ones() as usize;
        if rem < c {
            return wi * 64 + select_in_word(w, rem as u32) as usize;
        }
        rem -= c;
        wi += 1;
        w = words[wi];
    }
}

impl Persist for DenseSelect {
    fn save(&self, prefix: &str, w: &mut ContainerWriter) {
        self.bits.save(prefix, w);
        w.put(&format!("{prefix}.ds.ones"), &[self.ones as u64]);
        w.put(&format!("{prefix}.ds.blocks"), &self.blocks);
        w.put(&format!("{prefix}.ds.subs"), &self.subs);
    }

    fn load(prefix: &str, c: &Container) -> Result<Self> {
        let bits = BitVector::load(prefix, c)?;
        let [ones] = c.scalars::<1>(&format!("{prefix}.ds.ones"))?;
        let ones = ones as usize;
        let blocks: Slab<u64> = c.slab(&format!("{prefix}.ds.blocks"))?;
        let subs: Slab<u16> = c.slab(&format!("{prefix}.ds.subs"))?;
        if blocks.len() != ones.div_ceil(DENSE_BLOCK) || subs.len() != ones.div_ceil(DENSE_SUB) || ones > bits.len() {
            return Err(Error::format(format!("{prefix}: inconsistent dense select samples")));
        }
        Ok(DenseSelect {
            bits,
            blocks,
            subs,
            ones,
        })
    }
}

const SAMPLE: usize = 256;

/// Select over an arbitrary bitvector: the position of every 256th one is
/// sampled and the rest is found by popcounting words forward.
#[derive(Clone, Debug)]
pub struct SampledSelect {
    bits: BitVector,
    samples: Slab<u64>,
    ones: usize,
}

impl SampledSelect {
    pub fn new(bits: BitVector) -> Self {
        let mut samples = Vec::new();
        let mut k = 0usize;
        for (wi, &word) in bits.words().iter().enumerate() {
            let c = word.count_ones() as usize;
            // Sampled ordinals falling inside this word.
            let mut next = k.div_ceil(SAMPLE) * SAMPLE;
            while next < k + c {
                samples.push((wi * 64 + select_in_word(word, (next - k) as u32) as usize) as u64);
                next += SAMPLE;
            }
            k += c;
        }
        SampledSelect {
            bits,
            samples: samples.into(),
            ones: k,
        }
    }

    #[inline]
    pub fn bits(&self) -> &BitVector {
        &self.bits
    }

    pub fn count_ones(&self) -> usize {
        self.ones
    }

    #[inline]
    pub fn select1(&self, k: usize) -> usize {
        debug_assert!(k < self.ones);
        let start = self.samples[k / SAMPLE] as usize;
        let rem = k % SAMPLE;
        if rem == 0 {
            return start;
        }
        scan_forward(self.bits.words(), start, rem)
    }

    pub fn select(&self, k: usize) -> Result<usize> {
        Error::check_bounds(k as u64, self.ones as u64)?;
        Ok(self.select1(k))
    }

    pub fn overhead_bits(&self) -> usize {
        64 * (self.samples.len() + 1)
    }

    pub fn size_in_bits(&self) -> usize {
        self.bits.size_in_bits() + self.overhead_bits()
    }
}

impl Persist for SampledSelect {
    fn save(&self, prefix: &str, w: &mut ContainerWriter) {
        self.bits.save(prefix, w);
        w.put(&format!("{prefix}.ss.ones"), &[self.ones as u64]);
        w.put(&format!("{prefix}.ss.samples"), &self.samples);
    }

    fn load(prefix: &str, c: &Container) -> Result<Self> {
        let bits = BitVector::load(prefix, c)?;
        let [ones] = c.scalars::<1>(&format!("{prefix}.ss.ones"))?;
        let ones = ones as usize;
        let samples: Slab<u64> = c.slab(&format!("{prefix}.ss.samples"))?;
        if samples.len() != ones.div_ceil(SAMPLE) || ones > bits.len() {
            return Err(Error::format(format!("{prefix}: inconsistent select samples")));
        }
        Ok(SampledSelect { bits, samples, ones })
    }
}
