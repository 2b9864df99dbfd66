//! The path-decomposed trie string dictionary.
//!
//! The decomposed tree is stored as DFUDS parentheses (one run of `(` per
//! child followed by a `)`, nodes in preorder, no super-root). The hanging
//! branch bytes go into `B`, one per `(`, reversed per node, and the label of
//! every node into a [`LabelStore`] indexed by node id, which is also the
//! rank of the node's `)`.
//!
//! Children of a node are ordered deepest path node first, so the group of
//! sub-tries hanging off the `i`-th path node from the top is the contiguous
//! `B` range delimited by the special symbols seen so far in the label.

use std::path::Path;

use crate::bitvectors::BitVectorBuilder;
use crate::bp::{BpSequence, DEFAULT_BLOCK_SIZE};
use crate::container::{Container, ContainerWriter, Kind, Persist};
use crate::corpus::{check_keys, KeySet};
use crate::error::{Error, Result};
use crate::label::{is_special, push_specials, special_count, LabelStore, Labels, RePairConfig, TERMINATOR};
use crate::slab::Slab;
use crate::trie::{decompose, ChildOrder, CompactedTrie, HeightStats, PathChoice, TrieShape};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Leftmost paths: ids are lexicographic ranks.
    Lex,
    /// Heavy paths: height at most log₂ of the number of strings.
    Centroid,
}

impl Strategy {
    fn tag(self) -> u64 {
        match self {
            Strategy::Lex => 0,
            Strategy::Centroid => 1,
        }
    }

    fn from_tag(t: u64) -> Result<Self> {
        match t {
            0 => Ok(Strategy::Lex),
            1 => Ok(Strategy::Centroid),
            _ => Err(Error::format(format!("unknown strategy tag {t}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DictionaryConfig {
    pub strategy: Strategy,
    /// Re-Pair compression of the labels; `None` stores raw symbols.
    pub compression: Option<RePairConfig>,
    pub block_size: usize,
}

impl DictionaryConfig {
    pub fn new(strategy: Strategy) -> Self {
        DictionaryConfig {
            strategy,
            compression: None,
            block_size: DEFAULT_BLOCK_SIZE,
        }
    }

    pub fn compressed(mut self, config: RePairConfig) -> Self {
        self.compression = Some(config);
        self
    }
}

/// Work done by one lookup.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LookupTrace {
    pub nodes_visited: usize,
    pub symbols_scanned: usize,
    pub specials_scanned: usize,
}

#[derive(Clone, Debug)]
pub struct PathDecomposedTrie {
    bp: BpSequence,
    branching: Slab<u8>,
    labels: LabelStore,
    strategy: Strategy,
}

impl PathDecomposedTrie {
    pub fn build<K: KeySet + ?Sized>(keys: &K, config: &DictionaryConfig) -> Result<Self> {
        check_keys(keys)?;
        let (bits, branching, labels) = {
            let trie = CompactedTrie::build_unchecked(keys);
            let choice = match config.strategy {
                Strategy::Lex => PathChoice::Leftmost,
                Strategy::Centroid => PathChoice::Heavy,
            };
            let tc = decompose(&trie, choice, ChildOrder::BottomUp);
            Self::flatten(&trie, &tc)
        };
        let bp = BpSequence::new_dfuds(bits.build(), config.block_size)?;
        let labels = match config.compression {
            None => LabelStore::plain(&labels)?,
            Some(rp) => LabelStore::compressed(&labels, rp)?,
        };
        Ok(PathDecomposedTrie {
            bp,
            branching: branching.into(),
            labels,
            strategy: config.strategy,
        })
    }

    fn flatten<K: KeySet + ?Sized>(
        trie: &CompactedTrie<'_, K>,
        tc: &crate::trie::PathDecompTree,
    ) -> (BitVectorBuilder, Vec<u8>, Labels) {
        let mut bits = BitVectorBuilder::with_capacity(tc.len() + tc.children.len());
        let mut branching = Vec::with_capacity(tc.children.len());
        let mut labels = Labels::new();
        for x in 0..tc.len() {
            let children = tc.children(x);
            bits.push_run(true, children.len());
            bits.push(false);
            branching.extend(children.iter().rev().map(|&c| trie.node(tc.head(c as usize)).branch));
            let path = tc.path(x);
            for (k, &u) in path.iter().enumerate() {
                labels.symbols.extend(trie.label(u).map(|b| b as u16));
                if let Some(&next) = path.get(k + 1) {
                    push_specials(&mut labels.symbols, trie.num_children(u) - 1);
                    labels.symbols.push(trie.node(next).branch as u16);
                }
            }
            labels.finish_label();
        }
        (bits, branching, labels)
    }

    /// Number of strings.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn is_compressed(&self) -> bool {
        self.labels.is_compressed()
    }

    pub fn bp(&self) -> &BpSequence {
        &self.bp
    }

    pub fn labels(&self) -> &LabelStore {
        &self.labels
    }

    /// Id of `s`, or `None` if it is not in the set.
    #[inline]
    pub fn lookup(&self, s: &[u8]) -> Option<u64> {
        self.lookup_traced(s).0
    }

    pub fn lookup_traced(&self, s: &[u8]) -> (Option<u64>, LookupTrace) {
        let mut trace = LookupTrace::default();
        if s.contains(&0) {
            return (None, trace);
        }
        let bp = &self.bp;
        // Node start, its id and the number of '(' before it.
        let (mut p, mut id, mut base) = (0usize, 0usize, 0usize);
        let mut pos = 0usize;
        'node: loop {
            trace.nodes_visited += 1;
            let (mut acc, mut group) = (0usize, None::<usize>);
            for sym in self.labels.iter(id) {
                trace.symbols_scanned += 1;
                if is_special(sym) {
                    trace.specials_scanned += 1;
                    group.get_or_insert(acc);
                    acc += special_count(sym);
                    continue;
                }
                let c = s.get(pos).map_or(TERMINATOR, |&b| b as u16);
                if sym == c {
                    if c == TERMINATOR {
                        return (Some(id as u64), trace);
                    }
                    pos += 1;
                    group = None;
                    continue;
                }
                let Some(from) = group else {
                    return (None, trace);
                };
                let candidates = &self.branching[base + from..base + acc];
                let Some(k) = candidates.iter().position(|&b| b as u16 == c) else {
                    return (None, trace);
                };
                if c == TERMINATOR {
                    // Only the terminator leaf can hang on a terminator.
                    let j = from + k;
                    let q = p + j;
                    let close = bp.close_of_with_excess(q, 2 * (base + j) as i64 - q as i64);
                    return (Some((id + (close - q).div_ceil(2)) as u64), trace);
                }
                pos += 1;
                let j = from + k;
                let q = p + j;
                let close = bp.close_of_with_excess(q, 2 * (base + j) as i64 - q as i64);
                let half = (close - q).div_ceil(2);
                id += half;
                base += j + half;
                p = close + 1;
                continue 'node;
            }
            return (None, trace);
        }
    }

    /// String with id `id`.
    pub fn access(&self, id: u64) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        self.access_into(id, &mut out)?;
        Ok(out)
    }

    /// [`access`](Self::access) into a caller-owned buffer, which is cleared first.
    pub fn access_into(&self, id: u64, out: &mut Vec<u8>) -> Result<()> {
        Error::check_bounds(id, self.len() as u64)?;
        out.clear();
        let bp = &self.bp;
        let mut id = id as usize;
        let mut p = self.node_start(id);
        let mut piece = Vec::new();
        self.collect_label(id, usize::MAX, &mut piece)?;
        out.extend(piece.iter().rev());
        while p > 0 {
            let q = bp.open_of(p - 1);
            let parent = bp.rank0(q);
            let pp = self.node_start(parent);
            let j = q - pp;
            let b = self.branching[q - parent];
            if b != 0 {
                out.push(b);
            }
            piece.clear();
            self.collect_label(parent, j, &mut piece)?;
            out.extend(piece.iter().rev());
            id = parent;
            p = pp;
        }
        debug_assert_eq!(id, 0);
        out.reverse();
        Ok(())
    }

    #[inline]
    fn node_start(&self, id: usize) -> usize {
        if id == 0 {
            0
        } else {
            self.bp.select0(id - 1) + 1
        }
    }

    /// Literals of label `id` up to the special run whose range covers child
    /// slot `j` (the whole label for `usize::MAX`), terminators dropped.
    fn collect_label(&self, id: usize, j: usize, out: &mut Vec<u8>) -> Result<()> {
        let mut acc = 0usize;
        let mut it = self.labels.iter(id);
        for sym in it.by_ref() {
            if is_special(sym) {
                acc += special_count(sym);
                if acc > j {
                    return Ok(());
                }
            } else if sym != TERMINATOR {
                out.push(sym as u8);
            }
        }
        if it.is_malformed() || j != usize::MAX {
            return Err(Error::format(format!(
                "label {id}: malformed or too few hanging sub-tries"
            )));
        }
        Ok(())
    }

    /// Depths of the nodes of the decomposed tree, read off the parentheses.
    pub fn heights(&self) -> HeightStats {
        HeightStats::from_depths(self.bp.dfuds_nodes().into_iter().map(|(d, _)| d as usize))
    }

    pub fn size_in_bits(&self) -> usize {
        self.bp.size_in_bits() + 8 * self.branching.len() + self.labels.size_in_bits()
    }

    pub fn to_writer(&self) -> ContainerWriter {
        let mut w = ContainerWriter::new(Kind::Dictionary);
        self.save("dict", &mut w);
        w
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        self.to_writer().write_to(path)
    }

    pub fn from_container(c: &Container) -> Result<Self> {
        c.expect_kind(Kind::Dictionary)?;
        Self::load("dict", c)
    }

    pub fn open(path: &Path) -> Result<Self> {
        Self::from_container(&Container::open(path)?)
    }
}

impl Persist for PathDecomposedTrie {
    fn save(&self, prefix: &str, w: &mut ContainerWriter) {
        w.put(&format!("{prefix}.meta"), &[self.strategy.tag()]);
        self.bp.save(&format!("{prefix}.bp"), w);
        w.put(&format!("{prefix}.branching"), &self.branching);
        self.labels.save(&format!("{prefix}.labels"), w);
    }

    fn load(prefix: &str, c: &Container) -> Result<Self> {
        let [strategy] = c.scalars::<1>(&format!("{prefix}.meta"))?;
        let bp = BpSequence::load(&format!("{prefix}.bp"), c)?;
        let branching: Slab<u8> = c.slab(&format!("{prefix}.branching"))?;
        let labels = LabelStore::load(&format!("{prefix}.labels"), c)?;
        let opens = bp.rank_select().count_ones();
        let closes = bp.rank_select().count_zeros();
        if opens != branching.len() || closes != labels.len() || closes != opens + 1 {
            return Err(Error::format(format!(
                "{prefix}: {opens} opens, {closes} closes, {} branching bytes and {} labels do not agree",
                branching.len(),
                labels.len()
            )));
        }
        Ok(PathDecomposedTrie {
            bp,
            branching,
            labels,
            strategy: Strategy::from_tag(strategy)?,
        })
    }
}
