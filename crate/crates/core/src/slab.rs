//! Immutable typed arrays backed either by the heap or by a memory map.
//!
//! Every bulk array of the succinct structures is a [`Slab`], so a structure
//! loaded from a container file reads straight from the mapped pages.

use std::any::Any;
use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use bytemuck::Pod;

use crate::error::{Error, Result};

/// A shared, read-only `[T]`.
pub struct Slab<T: Pod> {
    ptr: *const T,
    len: usize,
    // Keeps the allocation or mapping that `ptr` points into alive.
    _owner: Arc<dyn Any + Send + Sync>,
}

// SAFETY: the pointee is immutable for the lifetime of `_owner`, and `T: Pod`
// has no interior mutability.
unsafe impl<T: Pod> Send for Slab<T> {}
unsafe impl<T: Pod> Sync for Slab<T> {}

struct Owned<T>(#[allow(dead_code)] Vec<T>);

// SAFETY: the vector is never touched again once wrapped, only read through `Slab`.
unsafe impl<T: Pod> Send for Owned<T> {}
unsafe impl<T: Pod> Sync for Owned<T> {}

impl<T: Pod> Slab<T> {
    pub fn from_vec(v: Vec<T>) -> Self {
        let ptr = v.as_ptr();
        let len = v.len();
        Slab {
            ptr,
            len,
            _owner: Arc::new(Owned(v)),
        }
    }

    /// Views `bytes`, which must live inside `owner`, as a `[T]`.
    pub(crate) fn view(owner: &Arc<dyn Any + Send + Sync>, bytes: &[u8]) -> Result<Self> {
        if bytes.is_empty() {
            return Ok(Slab::default());
        }
        let typed: &[T] = bytemuck::try_cast_slice(bytes)
            .map_err(|e| Error::format(format!("misaligned or truncated section: {e:?}")))?;
        Ok(Slab {
            ptr: typed.as_ptr(),
            len: typed.len(),
            _owner: Arc::clone(owner),
        })
    }

    pub fn as_bytes(&self) -> &[u8] {
        bytemuck::cast_slice(self)
    }
}

impl Slab<u8> {
    /// Maps `file` read-only. Empty files give an empty slab.
    pub(crate) fn map_file(file: &std::fs::File) -> Result<Self> {
        if file.metadata()?.len() == 0 {
            return Ok(Slab::default());
        }
        // SAFETY: the mapping is read-only and the files mapped here are never
        // modified while mapped.
        let map = unsafe { memmap2::Mmap::map(file)? };
        let owner: Arc<dyn Any + Send + Sync> = Arc::new(map);
        let map = owner.downcast_ref::<memmap2::Mmap>().expect("just created");
        Slab::view(&owner, &map[..])
    }

    /// Reinterprets `len` bytes starting at `start` as a `[U]` sharing this slab's owner.
    pub(crate) fn cast_range<U: Pod>(&self, start: usize, len: usize) -> Result<Slab<U>> {
        let end = start
            .checked_add(len)
            .filter(|&e| e <= self.len)
            .ok_or_else(|| Error::format(format!("section {start}+{len} exceeds file size {}", self.len)))?;
        Slab::view(&self._owner, &self[start..end])
    }
}

impl<T: Pod> Deref for Slab<T> {
    type Target = [T];

    #[inline]
    fn deref(&self) -> &[T] {
        if self.len == 0 {
            return &[];
        }
        // SAFETY: `ptr`/`len` describe a live, aligned, initialized slice owned by `_owner`.
        unsafe { std::slice::from_raw_parts(self.ptr, self.len) }
    }
}

impl<T: Pod> Clone for Slab<T> {
    fn clone(&self) -> Self {
        Slab {
            ptr: self.ptr,
            len: self.len,
            _owner: Arc::clone(&self._owner),
        }
    }
}

impl<T: Pod> Default for Slab<T> {
    fn default() -> Self {
        Slab::from_vec(Vec::new())
    }
}

impl<T: Pod + fmt::Debug> fmt::Debug for Slab<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Slab").field("len", &self.len).finish()
    }
}

impl<T: Pod + PartialEq> PartialEq for Slab<T> {
    fn eq(&self, other: &Self) -> bool {
        **self == **other
    }
}

impl<T: Pod> From<Vec<T>> for Slab<T> {
    fn from(v: Vec<T>) -> Self {
        Slab::from_vec(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heap_and_view_agree() {
        let s = Slab::from_vec(vec![1u64, 2, 3]);
        assert_eq!(&*s, &[1, 2, 3]);
        let bytes: Vec<u8> = s.as_bytes().to_vec();
        // Vec<u64> guarantees alignment for the view.
        let aligned: Vec<u64> = bytemuck::cast_slice(&bytes).to_vec();
        let owner: Arc<dyn Any + Send + Sync> = Arc::new(aligned);
        let raw = owner.downcast_ref::<Vec<u64>>().unwrap();
        let v: Slab<u32> = Slab::view(&owner, bytemuck::cast_slice(raw)).unwrap();
        assert_eq!(v.len(), 6);
        assert_eq!(v[2], 2);
    }

    #[test]
    fn empty_slab_derefs() {
        let s: Slab<u16> = Slab::default();
        assert!(s.is_empty());
    }
}
