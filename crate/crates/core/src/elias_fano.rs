//! Elias-Fano encoding of non-decreasing integer sequences.

use crate::bitvectors::{BitVector, BitVectorBuilder, DenseSelect, SampledSelect};
use crate::container::{Container, ContainerWriter, Persist};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
enum High {
    Dense(DenseSelect),
    Sampled(SampledSelect),
}

impl High {
    #[inline]
    fn select1(&self, k: usize) -> usize {
        match self {
            High::Dense(d) => d.select1(k),
            High::Sampled(s) => s.select1(k),
        }
    }

    fn bits(&self) -> &BitVector {
        match self {
            High::Dense(d) => d.bits(),
            High::Sampled(s) => s.bits(),
        }
    }

    fn size_in_bits(&self) -> usize {
        match self {
            High::Dense(d) => d.size_in_bits(),
            High::Sampled(s) => s.size_in_bits(),
        }
    }
}

/// A non-decreasing sequence of `m` integers in `[0, n)` with constant-time
/// positional access.
///
/// Each value is split into `ℓ` low bits, stored verbatim, and a high part
/// stored in unary as gaps in a bitvector of about `2m` bits.
#[derive(Clone, Debug)]
pub struct EliasFanoSeq {
    m: usize,
    n: u64,
    low_width: u32,
    low: BitVector,
    high: High,
}

/// `⌊log₂(n/m)⌋`, or 0 when `n <= m`.
pub fn low_width(m: usize, n: u64) -> u32 {
    if m == 0 || n <= m as u64 {
        0
    } else {
        (n / m as u64).ilog2()
    }
}

impl EliasFanoSeq {
    pub fn new(values: &[u64], n: u64) -> Result<Self> {
        Self::from_iter(values.iter().copied(), values.len(), n)
    }

    /// Builds from an iterator yielding exactly `m` values.
    pub fn from_iter(values: impl IntoIterator<Item = u64>, m: usize, n: u64) -> Result<Self> {
        if m > 0 && n == 0 {
            return Err(Error::input("nonempty sequence over an empty universe"));
        }
        let l = low_width(m, n);
        let mut low = BitVectorBuilder::with_capacity(m * l as usize);
        let high_len = if m == 0 { 0 } else { m + ((n - 1) >> l) as usize + 1 };
        let mut high = vec![0u64; high_len.div_ceil(64)];
        let mut prev = 0u64;
        let mut count = 0usize;
        for v in values {
            if v < prev {
                return Err(Error::input(format!(
                    "sequence decreases at index {count}: {v} < {prev}"
                )));
            }
            if v >= n {
                return Err(Error::input(format!(
                    "value {v} at index {count} is outside universe {n}"
                )));
            }
            if count == m {
                return Err(Error::input(format!("more than the declared {m} values")));
            }
            low.push_bits(v, l);
            let pos = (v >> l) as usize + count;
            high[pos / 64] |= 1 << (pos % 64);
            prev = v;
            count += 1;
        }
        if count != m {
            return Err(Error::input(format!("declared {m} values, got {count}")));
        }
        let high = BitVector::from_words(high, high_len)?;
        let high = match DenseSelect::new(high.clone()) {
            Ok(d) => High::Dense(d),
            Err(_) => High::Sampled(SampledSelect::new(high)),
        };
        Ok(EliasFanoSeq {
            m,
            n,
            low_width: l,
            low: low.build(),
            high,
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn universe(&self) -> u64 {
        self.n
    }

    pub fn low_width(&self) -> u32 {
        self.low_width
    }

    /// The `i`-th value. Requires `i < len()`.
    #[inline]
    pub fn get(&self, i: usize) -> u64 {
        debug_assert!(i < self.m);
        let hi = (self.high.select1(i) - i) as u64;
        let l = self.low_width;
        (hi << l) | self.low.get_bits(i * l as usize, l)
    }

    /// Checked access.
    pub fn access(&self, i: usize) -> Result<u64> {
        Error::check_bounds(i as u64, self.m as u64)?;
        Ok(self.get(i))
    }

    /// The high part, as unary-coded gaps.
    pub fn high_bits(&self) -> &BitVector {
        self.high.bits()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.m).map(move |i| self.get(i))
    }

    /// Every stored word plus the four header scalars.
    pub fn size_in_bits(&self) -> usize {
        self.low.size_in_bits() + self.high.size_in_bits() + 4 * 64
    }
}

impl Persist for EliasFanoSeq {
    fn save(&self, prefix: &str, w: &mut ContainerWriter) {
        let dense = matches!(self.high, High::Dense(_)) as u64;
        w.put(
            &format!("{prefix}.ef"),
            &[self.m as u64, self.n, self.low_width as u64, dense],
        );
        self.low.save(&format!("{prefix}.lo"), w);
        match &self.high {
            High::Dense(d) => d.save(&format!("{prefix}.hi"), w),
            High::Sampled(s) => s.save(&format!("{prefix}.hi"), w),
        }
    }

    fn load(prefix: &str, c: &Container) -> Result<Self> {
        let [m, n, l, dense] = c.scalars::<4>(&format!("{prefix}.ef"))?;
        let (m, l) = (m as usize, l as u32);
        let low = BitVector::load(&format!("{prefix}.lo"), c)?;
        let high = if dense == 1 {
            High::Dense(DenseSelect::load(&format!("{prefix}.hi"), c)?)
        } else {
            High::Sampled(SampledSelect::load(&format!("{prefix}.hi"), c)?)
        };
        let high_len = if m == 0 {
            0
        } else {
            m + ((n - 1) >> l.min(63)) as usize + 1
        };
        let ones = match &high {
            High::Dense(d) => d.count_ones(),
            High::Sampled(s) => s.count_ones(),
        };
        if l != low_width(m, n) || low.len() != m * l as usize || high.bits().len() != high_len || ones != m {
            return Err(Error::format(format!("{prefix}: inconsistent Elias-Fano header")));
        }
        Ok(EliasFanoSeq {
            m,
            n,
            low_width: l,
            low,
            high,
        })
    }
}
