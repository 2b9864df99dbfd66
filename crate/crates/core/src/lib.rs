//! Succinct path-decomposed tries.
//!
//! Two applications are built on a common layer of succinct primitives:
//!
//! - [`PathDecomposedTrie`]: a compressed string dictionary mapping each
//!   string of a set to an integer id and back (`lookup` / `access`).
//! - [`HollowTrieMph`]: a monotone minimal perfect hash that maps each string
//!   of a set to its lexicographic rank without storing the strings.
//!
//! The primitives are plain rank/select bitvectors, Elias-Fano sequences and
//! a balanced parentheses sequence with a Range Min tree whose in-block search
//! is broadword.
//!
//! ```
//! use pdtrie::{PathDecomposedTrie, DictionaryConfig, Strategy};
//!
//! let strings = ["bar", "foo", "foobar"];
//! let dict = PathDecomposedTrie::build(&strings[..], &DictionaryConfig::new(Strategy::Centroid))?;
//! assert_eq!(dict.lookup(b"foobar"), Some(1));
//! assert_eq!(dict.lookup(b"fo"), None);
//! assert_eq!(dict.access(2)?, b"bar");
//! # Ok::<(), pdtrie::Error>(())
//! ```

pub mod bench;
pub mod bitvectors;
pub mod bp;
pub mod broadword;
pub mod container;
pub mod corpus;
pub mod dictionary;
pub mod elias_fano;
mod error;
pub mod label;
pub mod mph;
pub mod slab;
pub mod stats;
pub mod synthetic;
pub mod trie;

pub use crate::bitvectors::{BitVector, DenseSelect, RankSelect};
pub use crate::bp::{BpSequence, RangeMinTree};
pub use crate::corpus::{Corpus, KeySet};
pub use crate::dictionary::{DictionaryConfig, PathDecomposedTrie, Strategy};
pub use crate::elias_fano::EliasFanoSeq;
pub use crate::error::{Error, Result};
pub use crate::mph::{FlatHollowTrie, HollowTrieMph};
