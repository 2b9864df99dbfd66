mod common;

use pdtrie::label::RePairConfig;
use pdtrie::{DictionaryConfig, PathDecomposedTrie, Strategy};

fn variants() -> Vec<DictionaryConfig> {
    let mut out = Vec::new();
    for s in [Strategy::Lex, Strategy::Centroid] {
        out.push(DictionaryConfig::new(s));
        out.push(DictionaryConfig::new(s).compressed(RePairConfig::default()));
    }
    out
}

fn check(keys: &[Vec<u8>]) {
    let misses = common::non_members(keys, 2000, 7);
    let log2 = (keys.len() as f64).log2().floor() as usize;
    for config in variants() {
        let d = PathDecomposedTrie::build(keys, &config).unwrap();
        let mut seen = vec![false; keys.len()];
        for (rank, k) in keys.iter().enumerate() {
            let id = d.lookup(k).unwrap_or_else(|| panic!("{config:?}: lost {k:?}")) as usize;
            assert!(!std::mem::replace(&mut seen[id], true));
            if config.strategy == Strategy::Lex {
                assert_eq!(id, rank);
            }
            assert_eq!(&d.access(id as u64).unwrap(), k);
        }
        for m in &misses {
            assert_eq!(d.lookup(m), None, "{config:?}: false positive {m:?}");
        }
        if config.strategy == Strategy::Centroid {
            assert!(d.heights().max <= log2);
        }
    }
}

#[test]
fn random_strings_match_sort_oracle() {
    check(&common::random_strings(10_000, 12, 1));
    check(&common::random_strings(3000, 3, 2));
}

#[test]
fn url_like_strings_match_sort_oracle() {
    check(&common::url_strings(10_000, 3));
}

#[test]
fn visits_bounded_by_height() {
    let keys = common::url_strings(5000, 4);
    let d = PathDecomposedTrie::build(&keys, &DictionaryConfig::new(Strategy::Centroid)).unwrap();
    let h = d.heights().max;
    for k in &keys {
        let (id, trace) = d.lookup_traced(k);
        assert!(id.is_some());
        assert!(trace.nodes_visited <= h + 1);
        // Every non-special symbol either matches a pattern byte or is the final terminator.
        assert!(trace.symbols_scanned - trace.specials_scanned <= k.len() + 1);
    }
}

#[test]
fn small_blocks_agree() {
    let keys = common::random_strings(2000, 6, 5);
    let mut config = DictionaryConfig::new(Strategy::Centroid);
    config.block_size = 64;
    let d = PathDecomposedTrie::build(&keys, &config).unwrap();
    for k in &keys {
        assert_eq!(d.access(d.lookup(k).unwrap()).unwrap(), *k);
    }
}
