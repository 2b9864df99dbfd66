use rustc_hash::FxHashMap;

use crate::label::{Labels, ALPHABET};

pub const DEFAULT_PAIRS_PER_ROUND: usize = 256;
pub const DEFAULT_DICT_BOUND: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RePairConfig {
    /// Most frequent pairs considered per round.
    pub pairs_per_round: usize,
    /// Bound on the total number of symbols over all dictionary words (at most 2^16).
    pub dict_bound: usize,
}

impl Default for RePairConfig {
    fn default() -> Self {
        RePairConfig {
            pairs_per_round: DEFAULT_PAIRS_PER_ROUND,
            dict_bound: DEFAULT_DICT_BOUND,
        }
    }
}

/// Approximate Re-Pair over a list of labels.
///
/// Each round counts every adjacent pair of codes inside labels, takes the
/// `pairs_per_round` most frequent pairs occurring at least twice, admits
/// those whose expanded word still fits in the dictionary, and replaces them
/// greedily left to right. Words are kept expanded, never as rules.
///
/// Identical labels are parsed identically, so the work is done once per
/// distinct label with pair counts weighted by multiplicity.
#[derive(Clone, Debug)]
pub struct RePair {
    words: Vec<Vec<u16>>,
    freqs: Vec<u64>,
    codes: Vec<u32>,
    ends: Vec<u64>,
    label_map: Vec<u32>,
    rounds: usize,
}

struct WordArena {
    chars: Vec<u16>,
    spans: Vec<(u32, u32)>,
}

impl WordArena {
    fn word(&self, code: u32) -> &[u16] {
        let (s, l) = self.spans[code as usize];
        &self.chars[s as usize..(s + l) as usize]
    }

    fn push_pair(&mut self, a: u32, b: u32) -> u32 {
        let start = self.chars.len() as u32;
        let (sa, la) = self.spans[a as usize];
        let (sb, lb) = self.spans[b as usize];
        self.chars.extend_from_within(sa as usize..(sa + la) as usize);
        self.chars.extend_from_within(sb as usize..(sb + lb) as usize);
        self.spans.push((start, la + lb));
        self.spans.len() as u32 - 1
    }

    fn pair_len(&self, a: u32, b: u32) -> usize {
        (self.spans[a as usize].1 + self.spans[b as usize].1) as usize
    }

    fn cmp_pair(&self, x: (u32, u32), y: (u32, u32)) -> std::cmp::Ordering {
        let wx = self.word(x.0).iter().chain(self.word(x.1));
        let wy = self.word(y.0).iter().chain(self.word(y.1));
        wx.cmp(wy)
    }
}

impl RePair {
    pub fn build(labels: &Labels, config: RePairConfig) -> Self {
        // Distinct labels in order of first appearance, with multiplicities.
        let mut index: FxHashMap<&[u16], u32> = FxHashMap::default();
        let mut label_map = Vec::with_capacity(labels.len());
        let mut distinct: Vec<&[u16]> = Vec::new();
        let mut weight: Vec<u64> = Vec::new();
        for l in labels.iter() {
            let id = *index.entry(l).or_insert_with(|| {
                distinct.push(l);
                weight.push(0);
                distinct.len() as u32 - 1
            });
            weight[id as usize] += 1;
            label_map.push(id);
        }
        drop(index);

        // Initial dictionary: the symbols that occur.
        let mut used = vec![false; ALPHABET];
        for l in &distinct {
            for &s in l.iter() {
                used[s as usize] = true;
            }
        }
        let mut arena = WordArena {
            chars: Vec::new(),
            spans: Vec::new(),
        };
        let mut sym_code = vec![u32::MAX; ALPHABET];
        for (s, _) in used.iter().enumerate().filter(|(_, &u)| u) {
            sym_code[s] = arena.spans.len() as u32;
            arena.spans.push((arena.chars.len() as u32, 1));
            arena.chars.push(s as u16);
        }
        let bound = config.dict_bound.min(DEFAULT_DICT_BOUND).max(arena.chars.len());
        let mut dict_len = arena.chars.len();

        let mut codes: Vec<u32> = Vec::with_capacity(distinct.iter().map(|l| l.len()).sum());
        let mut ends: Vec<u64> = Vec::with_capacity(distinct.len());
        for l in &distinct {
            codes.extend(l.iter().map(|&s| sym_code[s as usize]));
            ends.push(codes.len() as u64);
        }
        drop(distinct);

        let k = config.pairs_per_round.max(1);
        let mut rounds = 0;
        let mut counts: FxHashMap<(u32, u32), u64> = FxHashMap::default();
        loop {
            counts.clear();
            let mut start = 0usize;
            for (d, &end) in ends.iter().enumerate() {
                let w = weight[d];
                for p in codes[start..end as usize].windows(2) {
                    *counts.entry((p[0], p[1])).or_insert(0) += w;
                }
                start = end as usize;
            }
            let mut cand: Vec<((u32, u32), u64)> =
                counts.iter().filter(|(_, &f)| f >= 2).map(|(&p, &f)| (p, f)).collect();
            if cand.is_empty() {
                break;
            }
            if cand.len() > k {
                cand.select_nth_unstable_by(k - 1, |a, b| b.1.cmp(&a.1));
                let threshold = cand[k - 1].1;
                // Keep every pair tied with the k-th so the tie-break below decides.
                let mut keep: Vec<_> = cand[..k].to_vec();
                keep.extend(cand[k..].iter().filter(|c| c.1 == threshold));
                cand = keep;
            }
            cand.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| arena.cmp_pair(a.0, b.0)));
            cand.truncate(k);

            let mut admitted: FxHashMap<(u32, u32), u32> = FxHashMap::default();
            for &((a, b), _) in &cand {
                let len = arena.pair_len(a, b);
                if dict_len + len <= bound {
                    dict_len += len;
                    let code = arena.push_pair(a, b);
                    admitted.insert((a, b), code);
                }
            }
            if admitted.is_empty() {
                break;
            }
            rounds += 1;

            let mut out = Vec::with_capacity(codes.len());
            let mut start = 0usize;
            for end in ends.iter_mut() {
                let label = &codes[start..*end as usize];
                let mut i = 0;
                while i < label.len() {
                    if i + 1 < label.len() {
                        if let Some(&c) = admitted.get(&(label[i], label[i + 1])) {
                            out.push(c);
                            i += 2;
                            continue;
                        }
                    }
                    out.push(label[i]);
                    i += 1;
                }
                start = *end as usize;
                *end = out.len() as u64;
            }
            codes = out;
        }

        // Final codes: by parse frequency, ties by first appearance; unused
        // single symbols stay (after everything else) so any label can be spelled.
        let n_words = arena.spans.len();
        let mut freq = vec![0u64; n_words];
        let mut first_seen = vec![u64::MAX; n_words];
        let mut pos = 0u64;
        let mut start = 0usize;
        for (d, &end) in ends.iter().enumerate() {
            for &c in &codes[start..end as usize] {
                freq[c as usize] += weight[d];
                if first_seen[c as usize] == u64::MAX {
                    first_seen[c as usize] = pos;
                }
                pos += 1;
            }
            start = end as usize;
        }
        let mut order: Vec<u32> = (0..n_words as u32)
            .filter(|&c| freq[c as usize] > 0 || arena.spans[c as usize].1 == 1)
            .collect();
        order.sort_by(|&a, &b| {
            let (fa, fb) = (freq[a as usize], freq[b as usize]);
            match (fa, fb) {
                (0, 0) => arena.word(a).cmp(arena.word(b)),
                _ => fb.cmp(&fa).then(first_seen[a as usize].cmp(&first_seen[b as usize])),
            }
        });
        let mut remap = vec![u32::MAX; n_words];
        for (new, &old) in order.iter().enumerate() {
            remap[old as usize] = new as u32;
        }
        for c in codes.iter_mut() {
            *c = remap[*c as usize];
        }
        RePair {
            words: order.iter().map(|&c| arena.word(c).to_vec()).collect(),
            freqs: order.iter().map(|&c| freq[c as usize]).collect(),
            codes,
            ends,
            label_map,
            rounds,
        }
    }

    /// Dictionary words, indexed by code.
    pub fn words(&self) -> &[Vec<u16>] {
        &self.words
    }

    /// Number of occurrences of `code` over the parses of all labels.
    pub fn frequency(&self, code: u32) -> u64 {
        self.freqs[code as usize]
    }

    /// Parse of label `i` as a sequence of codes.
    pub fn parse(&self, i: usize) -> &[u32] {
        let d = self.label_map[i] as usize;
        let start = if d == 0 { 0 } else { self.ends[d - 1] as usize };
        &self.codes[start..self.ends[d] as usize]
    }

    pub fn num_labels(&self) -> usize {
        self.label_map.len()
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// Total symbols over all words.
    pub fn dict_len(&self) -> usize {
        self.words.iter().map(|w| w.len()).sum()
    }
}
