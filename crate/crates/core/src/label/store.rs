use crate::container::{Container, ContainerWriter, Persist};
use crate::elias_fano::EliasFanoSeq;
use crate::error::{Error, Result};
use crate::label::{vbyte_encode, Labels, RePair, RePairConfig, ALPHABET};
use crate::slab::Slab;

/// Flat word dictionary: words are concatenated 16-bit symbols and code `i`
/// is the word starting at `starts[i]`.
#[derive(Clone, Debug)]
pub struct CodeDictionary {
    chars: Slab<u16>,
    starts: Slab<u16>,
}

impl CodeDictionary {
    pub fn new(words: &[Vec<u16>]) -> Result<Self> {
        let total: usize = words.iter().map(|w| w.len()).sum();
        if total > 1 << 16 {
            return Err(Error::Precondition(format!(
                "dictionary of {total} symbols exceeds 2^16"
            )));
        }
        let mut chars = Vec::with_capacity(total);
        let mut starts = Vec::with_capacity(words.len());
        for w in words {
            if w.is_empty() {
                return Err(Error::Precondition("empty dictionary word".into()));
            }
            starts.push(chars.len() as u16);
            chars.extend_from_slice(w);
        }
        Self::from_parts(chars.into(), starts.into())
    }

    fn from_parts(chars: Slab<u16>, starts: Slab<u16>) -> Result<Self> {
        let ok = chars.len() <= 1 << 16
            && starts.windows(2).all(|w| w[0] < w[1])
            && starts.first().is_none_or(|&s| s == 0)
            && starts.last().is_none_or(|&s| (s as usize) < chars.len())
            && chars.iter().all(|&c| (c as usize) < ALPHABET);
        if !ok {
            return Err(Error::format("malformed label dictionary"));
        }
        Ok(CodeDictionary { chars, starts })
    }

    pub fn len(&self) -> usize {
        self.starts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.starts.is_empty()
    }

    #[inline]
    pub fn word(&self, code: usize) -> Option<&[u16]> {
        let start = *self.starts.get(code)? as usize;
        let end = self.starts.get(code + 1).map_or(self.chars.len(), |&e| e as usize);
        Some(&self.chars[start..end])
    }

    /// Total symbols over all words.
    pub fn total_len(&self) -> usize {
        self.chars.len()
    }

    pub fn size_in_bits(&self) -> usize {
        16 * (self.chars.len() + self.starts.len())
    }
}

/// The labels of a path-decomposed trie: a vbyte payload of raw symbols or
/// dictionary codes, plus Elias-Fano label end offsets.
#[derive(Clone, Debug)]
pub struct LabelStore {
    payload: Slab<u8>,
    ends: EliasFanoSeq,
    dict: Option<CodeDictionary>,
}

impl LabelStore {
    /// Stores `labels` as raw symbols.
    pub fn plain(labels: &Labels) -> Result<Self> {
        let mut payload = Vec::new();
        let mut ends = Vec::with_capacity(labels.len());
        for l in labels.iter() {
            for &s in l {
                vbyte_encode(s as u64, &mut payload);
            }
            ends.push(payload.len() as u64);
        }
        Self::assemble(payload, &ends, None)
    }

    /// Stores `labels` compressed with a Re-Pair dictionary.
    pub fn compressed(labels: &Labels, config: RePairConfig) -> Result<Self> {
        let rp = RePair::build(labels, config);
        let dict = CodeDictionary::new(rp.words())?;
        let mut payload = Vec::new();
        let mut ends = Vec::with_capacity(labels.len());
        for i in 0..labels.len() {
            for &c in rp.parse(i) {
                vbyte_encode(c as u64, &mut payload);
            }
            ends.push(payload.len() as u64);
        }
        Self::assemble(payload, &ends, Some(dict))
    }

    fn assemble(payload: Vec<u8>, ends: &[u64], dict: Option<CodeDictionary>) -> Result<Self> {
        let ends = EliasFanoSeq::new(ends, payload.len() as u64 + 1)?;
        Ok(LabelStore {
            payload: payload.into(),
            ends,
            dict,
        })
    }

    pub fn len(&self) -> usize {
        self.ends.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ends.is_empty()
    }

    pub fn is_compressed(&self) -> bool {
        self.dict.is_some()
    }

    pub fn dictionary(&self) -> Option<&CodeDictionary> {
        self.dict.as_ref()
    }

    pub fn payload_len(&self) -> usize {
        self.payload.len()
    }

    /// Payload bytes of label `i`.
    #[inline]
    fn bytes(&self, i: usize) -> &[u8] {
        let start = if i == 0 { 0 } else { self.ends.get(i - 1) as usize };
        &self.payload[start..self.ends.get(i) as usize]
    }

    /// Lazily decodes label `i`. Requires `i < len()`.
    #[inline]
    pub fn iter(&self, i: usize) -> LabelIter<'_> {
        LabelIter {
            payload: self.bytes(i),
            dict: self.dict.as_ref(),
            word: &[],
            words_decoded: 0,
            malformed: false,
        }
    }

    /// All symbols of label `i`, with payload validation.
    pub fn symbols(&self, i: usize) -> Result<Vec<u16>> {
        Error::check_bounds(i as u64, self.len() as u64)?;
        let mut it = self.iter(i);
        let out: Vec<u16> = it.by_ref().collect();
        if it.is_malformed() {
            return Err(Error::format(format!("label {i}: malformed payload")));
        }
        Ok(out)
    }

    pub fn size_in_bits(&self) -> usize {
        8 * self.payload.len() + self.ends.size_in_bits() + self.dict.as_ref().map_or(0, |d| d.size_in_bits())
    }
}

/// Symbol stream of one label. Stops early, and reports
/// [`is_malformed`](Self::is_malformed), on a corrupt payload.
pub struct LabelIter<'a> {
    payload: &'a [u8],
    dict: Option<&'a CodeDictionary>,
    word: &'a [u16],
    words_decoded: usize,
    malformed: bool,
}

impl LabelIter<'_> {
    /// Number of dictionary words expanded so far.
    pub fn words_decoded(&self) -> usize {
        self.words_decoded
    }

    pub fn is_malformed(&self) -> bool {
        self.malformed
    }

    #[inline]
    fn next_value(&mut self) -> Option<u64> {
        let b = *self.payload.first()?;
        if b < 0x80 {
            self.payload = &self.payload[1..];
            return Some(b as u64);
        }
        match super::vbyte_decode(self.payload) {
            Ok((v, n)) => {
                self.payload = &self.payload[n..];
                Some(v)
            }
            Err(_) => {
                self.malformed = true;
                self.payload = &[];
                None
            }
        }
    }
}

impl Iterator for LabelIter<'_> {
    type Item = u16;

    #[inline]
    fn next(&mut self) -> Option<u16> {
        if let Some((&s, rest)) = self.word.split_first() {
            self.word = rest;
            return Some(s);
        }
        let v = self.next_value()?;
        match self.dict {
            None if (v as usize) < ALPHABET => Some(v as u16),
            Some(d) => match d.word(v as usize) {
                Some(w) => {
                    self.words_decoded += 1;
                    self.word = &w[1..];
                    Some(w[0])
                }
                None => {
                    self.malformed = true;
                    self.payload = &[];
                    None
                }
            },
            None => {
                self.malformed = true;
                self.payload = &[];
                None
            }
        }
    }
}

impl Persist for LabelStore {
    fn save(&self, prefix: &str, w: &mut ContainerWriter) {
        w.put(&format!("{prefix}.flag"), &[self.dict.is_some() as u64]);
        w.put(&format!("{prefix}.payload"), &self.payload);
        self.ends.save(&format!("{prefix}.ends"), w);
        if let Some(d) = &self.dict {
            w.put(&format!("{prefix}.chars"), &d.chars);
            w.put(&format!("{prefix}.starts"), &d.starts);
        }
    }

    fn load(prefix: &str, c: &Container) -> Result<Self> {
        let [flag] = c.scalars::<1>(&format!("{prefix}.flag"))?;
        let payload: Slab<u8> = c.slab(&format!("{prefix}.payload"))?;
        let ends = EliasFanoSeq::load(&format!("{prefix}.ends"), c)?;
        if ends.universe() != payload.len() as u64 + 1
            || (!ends.is_empty() && ends.get(ends.len() - 1) != payload.len() as u64)
        {
            return Err(Error::format(format!(
                "{prefix}: label endpoints do not match the payload"
            )));
        }
        let dict = match flag {
            0 => None,
            1 => Some(CodeDictionary::from_parts(
                c.slab(&format!("{prefix}.chars"))?,
                c.slab(&format!("{prefix}.starts"))?,
            )?),
            f => return Err(Error::format(format!("{prefix}: unknown label flag {f}"))),
        };
        Ok(LabelStore { payload, ends, dict })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sample_labels(n: usize, seed: u64) -> Labels {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut l = Labels::new();
        for _ in 0..n {
            let len = rng.gen_range(0..40);
            let prefix = rng.gen_range(0..5);
            for k in 0..len {
                let s = match rng.gen_range(0..10) {
                    0 => 256 + rng.gen_range(0..3),
                    1 => rng.gen_range(128..256),
                    _ => b"abcdefgh"[(k + prefix) % 8] as u16,
                };
                l.symbols.push(s);
            }
            l.finish_label();
        }
        l
    }

    #[test]
    fn plain_and_compressed_agree() {
        let l = sample_labels(3000, 1);
        let plain = LabelStore::plain(&l).unwrap();
        let comp = LabelStore::compressed(&l, RePairConfig::default()).unwrap();
        assert!(comp.payload_len() < plain.payload_len());
        for i in 0..l.len() {
            assert_eq!(plain.symbols(i).unwrap(), l.get(i));
            assert_eq!(comp.symbols(i).unwrap(), l.get(i));
        }
    }

    #[test]
    fn early_exit_decodes_lazily() {
        let mut l = Labels::new();
        l.push(&[1, 2, 3, 4, 5, 6, 7, 8]);
        l.push(&[1, 2, 3, 4, 5, 6, 7, 8]);
        l.push(&[5, 6, 7, 8]);
        let comp = LabelStore::compressed(&l, RePairConfig::default()).unwrap();
        let mut it = comp.iter(0);
        let first: Vec<u16> = it.by_ref().take(3).collect();
        assert_eq!(first, [1, 2, 3]);
        assert!(it.words_decoded() <= 1, "decoded {}", it.words_decoded());
    }

    #[test]
    fn malformed_payload_is_reported() {
        let mut l = Labels::new();
        l.push(&[300]);
        let mut store = LabelStore::plain(&l).unwrap();
        // Cut the two-byte value in half.
        store.payload = vec![0xac].into();
        store.ends = EliasFanoSeq::new(&[1], 2).unwrap();
        assert!(matches!(store.symbols(0), Err(Error::Format(_))));
    }

    #[test]
    fn persists() {
        let l = sample_labels(500, 2);
        for store in [
            LabelStore::plain(&l).unwrap(),
            LabelStore::compressed(&l, RePairConfig::default()).unwrap(),
        ] {
            let mut w = ContainerWriter::new(crate::container::Kind::Dictionary);
            store.save("l", &mut w);
            let c = Container::from_bytes(&w.to_bytes()).unwrap();
            let back = LabelStore::load("l", &c).unwrap();
            for i in 0..l.len() {
                assert_eq!(back.symbols(i).unwrap(), l.get(i));
            }
        }
    }
}
