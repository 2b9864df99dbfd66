#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` distinct random strings over bytes 1..=255, lengths 1..=max_len, sorted.
pub fn random_strings(n: usize, max_len: usize, seed: u64) -> Vec<Vec<u8>> {
    let mut r = rng(seed);
    let mut set = BTreeSet::new();
    while set.len() < n {
        let len = r.gen_range(1..=max_len);
        set.insert((0..len).map(|_| r.gen_range(1..=255u8)).collect::<Vec<u8>>());
    }
    set.into_iter().collect()
}

/// `n` distinct URL-like strings sharing long prefixes, sorted.
pub fn url_strings(n: usize, seed: u64) -> Vec<Vec<u8>> {
    let mut r = rng(seed);
    let hosts: Vec<String> = (0..200)
        .map(|i| {
            format!(
                "http://www.{}{}.example.{}",
                ["news", "shop", "wiki", "blog"][i % 4],
                i,
                ["com", "org", "net"][i % 3]
            )
        })
        .collect();
    let words = [
        "index", "article", "2011", "category", "page", "item", "view", "en", "archive", "tag",
    ];
    let mut set = BTreeSet::new();
    while set.len() < n {
        let mut s = hosts[r.gen_range(0..hosts.len()).min(r.gen_range(0..hosts.len()))].clone();
        for _ in 0..r.gen_range(1..6) {
            s.push('/');
            s.push_str(words[r.gen_range(0..words.len())]);
        }
        if r.gen_bool(0.5) {
            s.push_str(&format!("?id={}", r.gen_range(0..100_000)));
        }
        set.insert(s.into_bytes());
    }
    set.into_iter().collect()
}

/// Strings not in `keys`: random mutations of members plus fresh strings.
pub fn non_members(keys: &[Vec<u8>], n: usize, seed: u64) -> Vec<Vec<u8>> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let base = &keys[r.gen_range(0..keys.len())];
        let mut s = base.clone();
        match r.gen_range(0..4) {
            0 => s.push(r.gen_range(1..=255)),
            1 => {
                s.pop();
            }
            2 => {
                if !s.is_empty() {
                    let i = r.gen_range(0..s.len());
                    s[i] = r.gen_range(1..=255);
                }
            }
            _ => s = (0..r.gen_range(0..20)).map(|_| r.gen_range(1..=255u8)).collect(),
        }
        if keys.binary_search(&s).is_err() {
            out.push(s);
        }
    }
    out
}
