//! String sets: the [`KeySet`] view used by the builders and the [`Corpus`]
//! ingestion path for newline-delimited files.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Seek, SeekFrom, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::slab::Slab;

/// Default amount of raw input sorted in memory before spilling to runs.
pub const DEFAULT_MEMORY_BUDGET: usize = 1 << 30;

/// Random access to an indexed set of byte strings.
pub trait KeySet {
    fn len(&self) -> usize;
    fn key(&self, i: usize) -> &[u8];

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl<T: AsRef<[u8]>> KeySet for [T] {
    fn len(&self) -> usize {
        <[T]>::len(self)
    }

    fn key(&self, i: usize) -> &[u8] {
        self[i].as_ref()
    }
}

impl<T: AsRef<[u8]>> KeySet for Vec<T> {
    fn len(&self) -> usize {
        <Vec<T>>::len(self)
    }

    fn key(&self, i: usize) -> &[u8] {
        self[i].as_ref()
    }
}

/// Checks the builder precondition: nonempty, strictly increasing, no 0x00 byte.
pub fn check_keys<K: KeySet + ?Sized>(keys: &K) -> Result<()> {
    if keys.is_empty() {
        return Err(Error::input("empty string set"));
    }
    for i in 0..keys.len() {
        let k = keys.key(i);
        if let Some(p) = k.iter().position(|&b| b == 0) {
            return Err(Error::input(format!("string {i} contains a 0x00 byte at offset {p}")));
        }
        if i > 0 && keys.key(i - 1) >= k {
            return Err(Error::input(format!(
                "strings {} and {i} are not strictly increasing",
                i - 1
            )));
        }
    }
    Ok(())
}

/// A sorted, deduplicated set of byte strings held contiguously, either on
/// the heap or in a memory-mapped file.
#[derive(Clone, Debug)]
pub struct Corpus {
    data: Slab<u8>,
    // Key `i` is `data[starts[i] .. starts[i + 1] - sep]`.
    starts: Vec<u64>,
    sep: u64,
    input_sorted: bool,
}

impl KeySet for Corpus {
    #[inline]
    fn len(&self) -> usize {
        self.starts.len() - 1
    }

    #[inline]
    fn key(&self, i: usize) -> &[u8] {
        &self.data[self.starts[i] as usize..(self.starts[i + 1] - self.sep) as usize]
    }
}

/// Accumulates strings in arrival order; [`CorpusBuilder::finish`] sorts and
/// deduplicates them.
#[derive(Clone, Debug, Default)]
pub struct CorpusBuilder {
    data: Vec<u8>,
    starts: Vec<u64>,
}

impl CorpusBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(strings: usize, bytes: usize) -> Self {
        CorpusBuilder {
            data: Vec::with_capacity(bytes),
            starts: Vec::with_capacity(strings + 1),
        }
    }

    pub fn push(&mut self, key: &[u8]) -> Result<()> {
        check_bytes(key, self.starts.len())?;
        self.starts.push(self.data.len() as u64);
        self.data.extend_from_slice(key);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.starts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.starts.is_empty()
    }

    pub fn finish(mut self) -> Corpus {
        self.starts.push(self.data.len() as u64);
        finish_in_memory(self.data, self.starts, 0)
    }
}

fn check_bytes(key: &[u8], line: usize) -> Result<()> {
    match key.iter().position(|&b| b == 0 || b == b'\n') {
        Some(p) => Err(Error::input(format!(
            "string {line} contains a forbidden byte {:#04x} at offset {p}",
            key[p]
        ))),
        None => Ok(()),
    }
}

/// Sorts and deduplicates keys laid out as `data[starts[i] .. starts[i+1] - sep]`.
fn finish_in_memory(data: Vec<u8>, starts: Vec<u64>, sep: u64) -> Corpus {
    let n = starts.len() - 1;
    let key = |i: usize| &data[starts[i] as usize..(starts[i + 1] - sep) as usize];
    let strictly_sorted = (1..n).all(|i| key(i - 1) < key(i));
    if strictly_sorted {
        return Corpus {
            data: data.into(),
            starts,
            sep,
            input_sorted: true,
        };
    }
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_unstable_by(|&a, &b| key(a as usize).cmp(key(b as usize)));
    order.dedup_by(|a, b| key(*a as usize) == key(*b as usize));
    let mut out = CorpusBuilder::with_capacity(order.len(), data.len());
    for &i in &order {
        out.starts.push(out.data.len() as u64);
        out.data.extend_from_slice(key(i as usize));
    }
    out.starts.push(out.data.len() as u64);
    Corpus {
        data: out.data.into(),
        starts: out.starts,
        sep: 0,
        input_sorted: false,
    }
}

impl Corpus {
    /// Builds a corpus from strings in any order.
    pub fn from_keys<I>(keys: I) -> Result<Self>
    where
        I: IntoIterator,
        I::Item: AsRef<[u8]>,
    {
        let mut b = CorpusBuilder::new();
        for k in keys {
            b.push(k.as_ref())?;
        }
        Ok(b.finish())
    }

    /// Reads a newline-delimited file with the default memory budget.
    pub fn read(path: &Path) -> Result<Self> {
        Self::read_with_budget(path, DEFAULT_MEMORY_BUDGET)
    }

    /// Reads a newline-delimited file. Inputs larger than `budget` bytes are
    /// sorted externally through temporary run files and the merged result
    /// is memory-mapped.
    pub fn read_with_budget(path: &Path, budget: usize) -> Result<Self> {
        let mut file = File::open(path)?;
        let size = file.metadata()?.len() as usize;
        if size <= budget {
            let mut data = Vec::with_capacity(size);
            file.read_to_end(&mut data)?;
            let starts = line_starts(&data)?;
            return Ok(finish_in_memory(data, starts, 1));
        }
        external_sort(BufReader::new(file), budget)
    }

    /// Whether the input already was strictly increasing.
    pub fn input_was_sorted(&self) -> bool {
        self.input_sorted
    }

    /// Size of the corpus as a newline-delimited file.
    pub fn raw_bytes(&self) -> u64 {
        let n = self.len() as u64;
        self.starts[self.len()] - self.starts[0] - self.sep * n + n
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u8]> + '_ {
        (0..self.len()).map(move |i| self.key(i))
    }

    /// Writes the keys newline-delimited.
    pub fn write_lines<W: Write>(&self, w: W) -> Result<()> {
        let mut w = BufWriter::new(w);
        for k in self.iter() {
            w.write_all(k)?;
            w.write_all(b"\n")?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Start offsets of the lines of `data`, in the `sep = 1` layout. A final
/// newline does not open an extra empty line.
fn line_starts(data: &[u8]) -> Result<Vec<u64>> {
    let mut starts = vec![0u64];
    for (i, &b) in data.iter().enumerate() {
        if b == b'\n' {
            starts.push(i as u64 + 1);
        } else if b == 0 {
            return Err(Error::input(format!("line {} contains a 0x00 byte", starts.len())));
        }
    }
    if data.last().is_some_and(|&b| b != b'\n') {
        starts.push(data.len() as u64 + 1);
    }
    Ok(starts)
}

fn external_sort<R: BufRead>(reader: R, budget: usize) -> Result<Corpus> {
    let chunk_budget = (budget / 2).max(1);
    let mut runs = Vec::new();
    let mut chunk: Vec<Vec<u8>> = Vec::new();
    let mut chunk_bytes = 0usize;
    let mut line_no = 0usize;
    let mut input_sorted = true;
    let mut prev: Option<Vec<u8>> = None;

    let flush = |chunk: &mut Vec<Vec<u8>>, runs: &mut Vec<File>| -> Result<()> {
        chunk.sort_unstable();
        chunk.dedup();
        let mut f = tempfile::tempfile()?;
        {
            let mut w = BufWriter::new(&mut f);
            for k in chunk.iter() {
                w.write_all(k)?;
                w.write_all(b"\n")?;
            }
            w.flush()?;
        }
        f.seek(SeekFrom::Start(0))?;
        runs.push(f);
        chunk.clear();
        Ok(())
    };

    for line in reader.split(b'\n') {
        let line = line?;
        check_bytes(&line, line_no)?;
        line_no += 1;
        if let Some(p) = &prev {
            if *p >= line {
                input_sorted = false;
            }
        }
        prev = Some(line.clone());
        chunk_bytes += line.len() + 24;
        chunk.push(line);
        if chunk_bytes >= chunk_budget {
            flush(&mut chunk, &mut runs)?;
            chunk_bytes = 0;
        }
    }
    if !chunk.is_empty() {
        flush(&mut chunk, &mut runs)?;
    }

    let mut out = tempfile::tempfile()?;
    {
        let mut w = BufWriter::new(&mut out);
        let mut readers: Vec<_> = runs.into_iter().map(|f| BufReader::new(f).split(b'\n')).collect();
        let mut heap = BinaryHeap::new();
        for (r, it) in readers.iter_mut().enumerate() {
            if let Some(line) = it.next() {
                heap.push(Reverse((line?, r)));
            }
        }
        let mut last: Option<Vec<u8>> = None;
        while let Some(Reverse((line, r))) = heap.pop() {
            if let Some(next) = readers[r].next() {
                heap.push(Reverse((next?, r)));
            }
            if last.as_deref() != Some(&line[..]) {
                w.write_all(&line)?;
                w.write_all(b"\n")?;
                last = Some(line);
            }
        }
        w.flush()?;
    }
    let data = Slab::map_file(&out)?;
    let starts = line_starts(&data)?;
    Ok(Corpus {
        data,
        starts,
        sep: 1,
        input_sorted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn sorts_and_dedups() {
        let c = Corpus::from_keys(["foo", "bar", "foo", "", "foobar"]).unwrap();
        let keys: Vec<&[u8]> = c.iter().collect();
        assert_eq!(keys, [&b""[..], b"bar", b"foo", b"foobar"]);
        assert!(!c.input_was_sorted());
        assert_eq!(c.raw_bytes(), 1 + 4 + 4 + 7);
        assert!(check_keys(&c).is_ok());
    }

    #[test]
    fn rejects_forbidden_bytes() {
        assert!(matches!(Corpus::from_keys([b"a\0b"]), Err(Error::Input(_))));
        assert!(check_keys(&["b", "a"][..]).is_err());
        assert!(check_keys(&["a", "a"][..]).is_err());
        let empty: [&str; 0] = [];
        assert!(check_keys(&empty[..]).is_err());
    }

    fn write_temp(content: &[u8]) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content).unwrap();
        f.flush().unwrap();
        f
    }

    #[test]
    fn reads_files_both_paths() {
        let mut content = Vec::new();
        let mut expected = Vec::new();
        for i in (0..5000u32).rev() {
            let k = format!("key{:05}", (i * 7919) % 3000);
            content.extend_from_slice(k.as_bytes());
            content.push(b'\n');
            expected.push(k.into_bytes());
        }
        expected.sort();
        expected.dedup();
        let f = write_temp(&content);
        let small = Corpus::read_with_budget(f.path(), 1000).unwrap();
        let big = Corpus::read_with_budget(f.path(), 1 << 20).unwrap();
        for c in [&small, &big] {
            assert_eq!(c.len(), expected.len());
            assert!(c.iter().eq(expected.iter().map(|k| &k[..])));
            assert!(!c.input_was_sorted());
        }
    }

    #[test]
    fn sorted_file_kept_in_place() {
        let f = write_temp(b"a\nb\n\nc");
        // "" after "b" breaks the order.
        let c = Corpus::read(f.path()).unwrap();
        assert_eq!(c.iter().collect::<Vec<_>>(), [&b""[..], b"a", b"b", b"c"]);
        let f = write_temp(b"\na\nab\nb\n");
        let c = Corpus::read(f.path()).unwrap();
        assert!(c.input_was_sorted());
        assert_eq!(c.iter().collect::<Vec<_>>(), [&b""[..], b"a", b"ab", b"b"]);
        assert!(Corpus::read(write_temp(b"a\n\0\n").path()).is_err());
    }
}
