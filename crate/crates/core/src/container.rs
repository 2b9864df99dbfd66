//! The on-disk container shared by every serialized structure.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! 0   magic      b"PDT1"
//! 4   version    u32 (currently 1)
//! 8   kind       u32 (see [`Kind`])
//! 12  sections   u32, number of section table entries
//! 16  checksum   u64, FNV-1a over every byte after the section table
//! 24  table      `sections` entries of { name: [u8; 32] zero-padded, offset: u64, len: u64 }
//! ..  payload    sections, each starting at an 8-byte aligned offset, zero padded
//! ```
//!
//! Sections appear in the payload in table order and never overlap. A
//! structure owns every section whose name starts with its prefix.

use std::any::Any;
use std::fs::File;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use bytemuck::Pod;

use crate::error::{Error, Result};
use crate::slab::Slab;

pub const MAGIC: [u8; 4] = *b"PDT1";
pub const VERSION: u32 = 1;
const NAME_LEN: usize = 32;
const HEADER_LEN: usize = 24;
const ENTRY_LEN: usize = NAME_LEN + 16;

/// Which structure a container holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Dictionary = 1,
    HollowMph = 2,
    FlatHollow = 3,
}

impl Kind {
    fn from_tag(tag: u32) -> Result<Self> {
        match tag {
            1 => Ok(Kind::Dictionary),
            2 => Ok(Kind::HollowMph),
            3 => Ok(Kind::FlatHollow),
            t => Err(Error::format(format!("unknown structure kind tag {t}"))),
        }
    }
}

/// 64-bit FNV-1a.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Structures that can be written into and read back from a container.
pub trait Persist: Sized {
    fn save(&self, prefix: &str, w: &mut ContainerWriter);
    fn load(prefix: &str, c: &Container) -> Result<Self>;
}

/// Collects named sections and writes them out in insertion order.
pub struct ContainerWriter {
    kind: Kind,
    sections: Vec<(String, Vec<u8>)>,
}

impl ContainerWriter {
    pub fn new(kind: Kind) -> Self {
        ContainerWriter {
            kind,
            sections: Vec::new(),
        }
    }

    pub fn put<T: Pod>(&mut self, name: &str, data: &[T]) {
        assert!(name.len() <= NAME_LEN, "section name too long: {name}");
        assert!(self.sections.iter().all(|(n, _)| n != name), "duplicate section {name}");
        self.sections
            .push((name.to_owned(), bytemuck::cast_slice(data).to_vec()));
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let table_end = HEADER_LEN + ENTRY_LEN * self.sections.len();
        let mut offsets = Vec::with_capacity(self.sections.len());
        let mut pos = align8(table_end);
        for (_, data) in &self.sections {
            offsets.push(pos);
            pos = align8(pos + data.len());
        }
        let mut out = vec![0u8; pos];
        for ((_, data), &off) in self.sections.iter().zip(&offsets) {
            out[off..off + data.len()].copy_from_slice(data);
        }
        let checksum = fnv1a(&out[table_end..]);
        out[0..4].copy_from_slice(&MAGIC);
        out[4..8].copy_from_slice(&VERSION.to_le_bytes());
        out[8..12].copy_from_slice(&(self.kind as u32).to_le_bytes());
        out[12..16].copy_from_slice(&(self.sections.len() as u32).to_le_bytes());
        out[16..24].copy_from_slice(&checksum.to_le_bytes());
        for (i, ((name, data), &off)) in self.sections.iter().zip(&offsets).enumerate() {
            let e = HEADER_LEN + i * ENTRY_LEN;
            out[e..e + name.len()].copy_from_slice(name.as_bytes());
            out[e + NAME_LEN..e + NAME_LEN + 8].copy_from_slice(&(off as u64).to_le_bytes());
            out[e + NAME_LEN + 8..e + ENTRY_LEN].copy_from_slice(&(data.len() as u64).to_le_bytes());
        }
        out
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        let mut f = File::create(path)?;
        f.write_all(&self.to_bytes())?;
        f.sync_all()?;
        Ok(())
    }
}

fn align8(x: usize) -> usize {
    (x + 7) & !7
}

#[derive(Clone, Debug)]
struct Section {
    name: String,
    offset: usize,
    len: usize,
}

/// A parsed container, either memory-mapped or held in memory.
pub struct Container {
    kind: Kind,
    bytes: Slab<u8>,
    sections: Vec<Section>,
}

impl Container {
    /// Memory-maps `path` and validates header, table and checksum.
    pub fn open(path: &Path) -> Result<Self> {
        Self::open_with(path, true)
    }

    /// Like [`Container::open`], optionally skipping the checksum pass so that
    /// only the pages actually queried are touched.
    pub fn open_with(path: &Path, verify_checksum: bool) -> Result<Self> {
        let file = File::open(path)?;
        let len = file.metadata()?.len() as usize;
        if len == 0 {
            return Err(Error::format("empty file"));
        }
        let bytes = Slab::map_file(&file)?;
        Self::parse(bytes, verify_checksum)
    }

    pub fn from_bytes(data: &[u8]) -> Result<Self> {
        // Copy into u64 storage so every 8-aligned section is aligned in memory.
        let mut words = vec![0u64; data.len().div_ceil(8)];
        bytemuck::cast_slice_mut::<u64, u8>(&mut words)[..data.len()].copy_from_slice(data);
        let owner: Arc<dyn Any + Send + Sync> = Arc::new(words);
        let words = owner.downcast_ref::<Vec<u64>>().expect("just created");
        let bytes = Slab::view(&owner, &bytemuck::cast_slice(words)[..data.len()])?;
        Self::parse(bytes, true)
    }

    fn parse(bytes: Slab<u8>, verify_checksum: bool) -> Result<Self> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::format("file shorter than header"));
        }
        if bytes[0..4] != MAGIC {
            return Err(Error::format("bad magic, not a PDT1 container"));
        }
        let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
        let u64_at = |o: usize| u64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
        let version = u32_at(4);
        if version != VERSION {
            return Err(Error::format(format!("unsupported version {version}")));
        }
        let kind = Kind::from_tag(u32_at(8))?;
        let count = u32_at(12) as usize;
        let checksum = u64_at(16);
        let table_end = HEADER_LEN + ENTRY_LEN * count;
        if bytes.len() < table_end {
            return Err(Error::format(format!(
                "section table ({count} entries) exceeds file size {}",
                bytes.len()
            )));
        }
        let mut sections = Vec::with_capacity(count);
        let mut prev_end = table_end;
        for i in 0..count {
            let e = HEADER_LEN + i * ENTRY_LEN;
            let raw = &bytes[e..e + NAME_LEN];
            let name_len = raw.iter().position(|&b| b == 0).unwrap_or(NAME_LEN);
            let name = std::str::from_utf8(&raw[..name_len])
                .map_err(|_| Error::format(format!("section {i}: name is not UTF-8")))?
                .to_owned();
            let offset = u64_at(e + NAME_LEN) as usize;
            let len = u64_at(e + NAME_LEN + 8) as usize;
            if !offset.is_multiple_of(8) {
                return Err(Error::format(format!(
                    "section '{name}': offset {offset} not 8-byte aligned"
                )));
            }
            if offset < prev_end {
                return Err(Error::format(format!("section '{name}': overlaps previous section")));
            }
            let end = offset
                .checked_add(len)
                .filter(|&end| end <= bytes.len())
                .ok_or_else(|| {
                    Error::format(format!(
                        "section '{name}': {offset}+{len} exceeds file size {}",
                        bytes.len()
                    ))
                })?;
            prev_end = end;
            sections.push(Section { name, offset, len });
        }
        if verify_checksum && fnv1a(&bytes[table_end..]) != checksum {
            return Err(Error::format("payload checksum mismatch"));
        }
        Ok(Container { kind, bytes, sections })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn expect_kind(&self, kind: Kind) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(Error::format(format!(
                "expected a {kind:?} container, found {:?}",
                self.kind
            )))
        }
    }

    pub fn section_names(&self) -> impl Iterator<Item = &str> {
        self.sections.iter().map(|s| s.name.as_str())
    }

    /// Total container size in bytes.
    pub fn size_bytes(&self) -> usize {
        self.bytes.len()
    }

    pub fn slab<T: Pod>(&self, name: &str) -> Result<Slab<T>> {
        let s = self
            .sections
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| Error::format(format!("missing section '{name}'")))?;
        self.bytes
            .cast_range(s.offset, s.len)
            .map_err(|e| Error::format(format!("section '{name}': {e}")))
    }

    /// Reads a section of exactly `n` u64 scalars.
    pub fn scalars<const N: usize>(&self, name: &str) -> Result<[u64; N]> {
        let s: Slab<u64> = self.slab(name)?;
        <[u64; N]>::try_from(&s[..])
            .map_err(|_| Error::format(format!("section '{name}': expected {N} words, found {}", s.len())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ContainerWriter {
        let mut w = ContainerWriter::new(Kind::Dictionary);
        w.put("a.meta", &[1u64, 2, 3]);
        w.put("a.bytes", &[7u8, 8, 9]);
        w.put("b.mins", &[-1i32, 5]);
        w
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let bytes = sample().to_bytes();
        let c = Container::from_bytes(&bytes).unwrap();
        assert_eq!(c.kind(), Kind::Dictionary);
        assert_eq!(c.scalars::<3>("a.meta").unwrap(), [1, 2, 3]);
        assert_eq!(&*c.slab::<u8>("a.bytes").unwrap(), &[7, 8, 9]);
        assert_eq!(&*c.slab::<i32>("b.mins").unwrap(), &[-1, 5]);

        let mut w = ContainerWriter::new(c.kind());
        for name in ["a.meta", "a.bytes", "b.mins"] {
            w.put(name, &c.slab::<u8>(name).unwrap());
        }
        assert_eq!(w.to_bytes(), bytes);
    }

    #[test]
    fn sections_are_aligned() {
        let bytes = sample().to_bytes();
        let c = Container::from_bytes(&bytes).unwrap();
        assert!(c.sections.iter().all(|s| s.offset % 8 == 0));
    }

    #[test]
    fn corruption_is_detected() {
        let mut bytes = sample().to_bytes();
        let last = bytes.len() - 8;
        bytes[last] ^= 1;
        assert!(matches!(Container::from_bytes(&bytes), Err(Error::Format(_))));

        let mut bad_magic = sample().to_bytes();
        bad_magic[0] = b'X';
        assert!(matches!(Container::from_bytes(&bad_magic), Err(Error::Format(_))));

        let truncated = &sample().to_bytes()[..40];
        assert!(matches!(Container::from_bytes(truncated), Err(Error::Format(_))));
    }

    #[test]
    fn missing_section_names_the_section() {
        let c = Container::from_bytes(&sample().to_bytes()).unwrap();
        let err = c.slab::<u64>("nope").unwrap_err().to_string();
        assert!(err.contains("nope"));
    }

    #[test]
    fn mapped_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.pdt");
        sample().write_to(&path).unwrap();
        let c = Container::open(&path).unwrap();
        assert_eq!(&*c.slab::<i32>("b.mins").unwrap(), &[-1, 5]);
    }
}
