//! The synthetic corpus `d^i c^j b^t σ₁…σ_k`.
//!
//! The suffix `σ₁…σ_k` is the same for every string: the first `k` bytes of
//! `0x21..=0x61`, `0x65..=0x7E`, `0x80..=0xFF` in that order. It avoids
//! `b`, `c`, `d`, 0x00 and newline, and since `σ₁ < b < c < d` the
//! generation order (`i`, then `j`, then `t` ascending) is already sorted.

use std::io::{BufWriter, Write};

use crate::corpus::{Corpus, CorpusBuilder};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SyntheticParams {
    pub i: usize,
    pub j: usize,
    pub t: usize,
    pub k: usize,
}

impl Default for SyntheticParams {
    fn default() -> Self {
        SyntheticParams {
            i: 500,
            j: 500,
            t: 10,
            k: 100,
        }
    }
}

/// The suffix alphabet, in order.
pub fn sigma_alphabet() -> impl Iterator<Item = u8> {
    (0x21..=0x61u8).chain(0x65..=0x7E).chain(0x80..=0xFF)
}

impl SyntheticParams {
    pub fn new(i: usize, j: usize, t: usize, k: usize) -> Self {
        SyntheticParams { i, j, t, k }
    }

    pub fn suffix(&self) -> Result<Vec<u8>> {
        let s: Vec<u8> = sigma_alphabet().take(self.k).collect();
        if s.len() < self.k {
            return Err(Error::input(format!(
                "suffix length {} exceeds the {} usable bytes",
                self.k,
                s.len()
            )));
        }
        Ok(s)
    }

    /// Number of strings, checked for overflow.
    pub fn count(&self) -> Result<usize> {
        if self.i == 0 || self.j == 0 || self.t == 0 {
            return Err(Error::input("synthetic ranges must be positive"));
        }
        self.i
            .checked_mul(self.j)
            .and_then(|x| x.checked_mul(self.t))
            .ok_or_else(|| Error::input("synthetic corpus size overflows"))
    }

    /// Total bytes without separators.
    pub fn total_bytes(&self) -> Result<u64> {
        let n = self.count()? as u64;
        let (i, j, t) = (self.i as u64, self.j as u64, self.t as u64);
        let runs = j * t * i * (i - 1) / 2 + i * t * j * (j - 1) / 2 + i * j * t * (t - 1) / 2;
        n.checked_mul(self.k as u64)
            .and_then(|x| x.checked_add(runs))
            .ok_or_else(|| Error::input("synthetic corpus size overflows"))
    }

    /// Calls `f` on every string in generation order.
    pub fn for_each(&self, mut f: impl FnMut(&[u8]) -> Result<()>) -> Result<()> {
        self.count()?;
        let suffix = self.suffix()?;
        let mut buf = Vec::with_capacity(self.i + self.j + self.t + self.k);
        for i in 0..self.i {
            for j in 0..self.j {
                for t in 0..self.t {
                    buf.clear();
                    buf.resize(i, b'd');
                    buf.resize(i + j, b'c');
                    buf.resize(i + j + t, b'b');
                    buf.extend_from_slice(&suffix);
                    f(&buf)?;
                }
            }
        }
        Ok(())
    }

    pub fn corpus(&self) -> Result<Corpus> {
        let mut b = CorpusBuilder::with_capacity(self.count()?, self.total_bytes()? as usize);
        self.for_each(|s| b.push(s))?;
        Ok(b.finish())
    }

    /// Writes the corpus newline-delimited.
    pub fn write<W: Write>(&self, w: W) -> Result<()> {
        let mut w = BufWriter::new(w);
        self.for_each(|s| {
            w.write_all(s)?;
            w.write_all(b"\n")?;
            Ok(())
        })?;
        w.flush()?;
        Ok(())
    }
}
