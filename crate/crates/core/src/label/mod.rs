//! Node labels over the augmented alphabet and their storage.
//!
//! A label symbol is a `u16`: values below 256 are bytes (0 is the string
//! terminator) and `255 + k` for `k` in `1..=256` is the special symbol
//! recording that `k` sub-tries hang off the path at that point.

mod repair;
mod store;
mod vbyte;

pub use repair::{RePair, RePairConfig, DEFAULT_DICT_BOUND, DEFAULT_PAIRS_PER_ROUND};
pub use store::{CodeDictionary, LabelIter, LabelStore};
pub use vbyte::{vbyte_decode, vbyte_encode};

pub const TERMINATOR: u16 = 0;
/// One past the largest symbol value.
pub const ALPHABET: usize = 512;

#[inline]
pub fn is_special(s: u16) -> bool {
    s >= 256
}

/// Hanging count carried by a special symbol.
#[inline]
pub fn special_count(s: u16) -> usize {
    debug_assert!(is_special(s));
    s as usize - 255
}

/// Appends the specials for `k` hanging sub-tries: nothing for 0, one symbol
/// up to 256, and a run of symbols summing to `k` beyond that.
pub fn push_specials(out: &mut Vec<u16>, mut k: usize) {
    while k > 0 {
        let c = k.min(256);
        out.push((255 + c) as u16);
        k -= c;
    }
}

/// One node on a decomposed path: its label, how many sub-tries hang off it,
/// and the byte leading to the next node on the path (`None` for the last).
#[derive(Clone, Copy, Debug)]
pub struct PathNode<'a> {
    pub alpha: &'a [u8],
    pub hanging: usize,
    pub branch: Option<u8>,
}

/// Writes `α₁ S(k₁) c₁ α₂ S(k₂) c₂ … α_m`.
pub fn encode_label<'a>(path: impl IntoIterator<Item = PathNode<'a>>, out: &mut Vec<u16>) {
    for node in path {
        out.extend(node.alpha.iter().map(|&b| b as u16));
        if let Some(c) = node.branch {
            push_specials(out, node.hanging);
            out.push(c as u16);
        }
    }
}

/// A list of labels kept as one flat symbol array.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Labels {
    pub symbols: Vec<u16>,
    /// `ends[i]` is one past the last symbol of label `i`.
    pub ends: Vec<u64>,
}

impl Labels {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.ends.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ends.is_empty()
    }

    /// Closes the label made of the symbols pushed since the previous one.
    pub fn finish_label(&mut self) {
        self.ends.push(self.symbols.len() as u64);
    }

    pub fn push(&mut self, label: &[u16]) {
        self.symbols.extend_from_slice(label);
        self.finish_label();
    }

    #[inline]
    pub fn get(&self, i: usize) -> &[u16] {
        let start = if i == 0 { 0 } else { self.ends[i - 1] as usize };
        &self.symbols[start..self.ends[i] as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u16]> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const fn s(k: u16) -> u16 {
        255 + k
    }

    #[test]
    fn five_node_path_label() {
        // Five path nodes with hanging counts 2, 1, 2, 1 and single-byte labels.
        let alphas: [&[u8]; 5] = [b"A", b"B", b"C", b"D", b"E"];
        let hanging = [2, 1, 2, 1, 0];
        let branch = [Some(b'1'), Some(b'2'), Some(b'3'), Some(b'4'), None];
        let mut out = Vec::new();
        encode_label(
            (0..5).map(|i| PathNode {
                alpha: alphas[i],
                hanging: hanging[i],
                branch: branch[i],
            }),
            &mut out,
        );
        let expect = [
            b'A' as u16,
            s(2),
            b'1' as u16,
            b'B' as u16,
            s(1),
            b'2' as u16,
            b'C' as u16,
            s(2),
            b'3' as u16,
            b'D' as u16,
            s(1),
            b'4' as u16,
            b'E' as u16,
        ];
        assert_eq!(out, expect);
        let degree: usize = out.iter().filter(|&&x| is_special(x)).map(|&x| special_count(x)).sum();
        assert_eq!(degree, 6);
    }

    #[test]
    fn large_counts_split() {
        let mut out = Vec::new();
        push_specials(&mut out, 600);
        assert_eq!(out, [s(256), s(256), s(88)]);
        let mut out = Vec::new();
        push_specials(&mut out, 256);
        assert_eq!(out, [s(256)]);
    }

    #[test]
    fn labels_container() {
        let mut l = Labels::new();
        l.push(&[1, 2]);
        l.push(&[]);
        l.push(&[3]);
        assert_eq!(l.iter().collect::<Vec<_>>(), [&[1u16, 2][..], &[], &[3]]);
    }
}
