use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pdtrie::bench::{measure, sample_queries, DEFAULT_QUERIES, DEFAULT_RUNS};
use pdtrie::container::{Container, Kind};
use pdtrie::corpus::DEFAULT_MEMORY_BUDGET;
use pdtrie::label::{RePairConfig, DEFAULT_DICT_BOUND, DEFAULT_PAIRS_PER_ROUND};
use pdtrie::stats::{HeightReport, SpaceReport};
use pdtrie::synthetic::SyntheticParams;
use pdtrie::trie::HeightStats;
use pdtrie::{Corpus, DictionaryConfig, Error, FlatHollowTrie, HollowTrieMph, KeySet, PathDecomposedTrie, Strategy};

#[derive(Parser)]
#[command(
    name = "pdt",
    version,
    about = "Path-decomposed trie dictionaries and monotone minimal perfect hashes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Lex,
    Centroid,
}

#[derive(Subcommand)]
enum Command {
    /// Build a string dictionary from a newline-delimited corpus.
    Build {
        corpus: PathBuf,
        output: PathBuf,
        #[arg(long, value_enum, default_value = "centroid")]
        strategy: StrategyArg,
        /// Compress labels with approximate Re-Pair.
        #[arg(long)]
        compress: bool,
        /// Pairs replaced per Re-Pair round.
        #[arg(long, default_value_t = DEFAULT_PAIRS_PER_ROUND)]
        repair_k: usize,
        /// Bound on the total symbols of the Re-Pair dictionary.
        #[arg(long, default_value_t = DEFAULT_DICT_BOUND)]
        dict_bound: usize,
        /// Range Min tree block size in bits.
        #[arg(long, default_value_t = pdtrie::bp::DEFAULT_BLOCK_SIZE)]
        block_size: usize,
        /// Bytes of input sorted in memory before spilling to disk.
        #[arg(long, default_value_t = DEFAULT_MEMORY_BUDGET)]
        memory_budget: usize,
    },
    /// Print the id of every query string, or -1.
    Lookup {
        container: PathBuf,
        /// Query file, one string per line; standard input if absent.
        queries: Option<PathBuf>,
    },
    /// Print the string of every query id.
    Access { container: PathBuf, ids: Option<PathBuf> },
    /// Build a monotone minimal perfect hash from a corpus.
    MphBuild {
        corpus: PathBuf,
        output: PathBuf,
        /// Build the undecomposed hollow trie instead.
        #[arg(long)]
        flat: bool,
        #[arg(long, default_value_t = pdtrie::bp::DEFAULT_BLOCK_SIZE)]
        block_size: usize,
        #[arg(long, default_value_t = DEFAULT_MEMORY_BUDGET)]
        memory_budget: usize,
    },
    /// Print the hash of every query string.
    MphHash {
        container: PathBuf,
        queries: Option<PathBuf>,
    },
    /// Print statistics of a container or of a corpus as JSON.
    Stats {
        input: PathBuf,
        /// Corpus the container was built from, for the compression ratio.
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
    /// Time random member queries against a container.
    Bench {
        container: PathBuf,
        /// Member strings; required for hash structures.
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_QUERIES)]
        queries: usize,
        #[arg(long, default_value_t = DEFAULT_RUNS)]
        runs: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Write the synthetic corpus d^i c^j b^t σ₁…σ_k.
    GenSynthetic {
        output: PathBuf,
        #[arg(long, default_value_t = 500)]
        i: usize,
        #[arg(long, default_value_t = 500)]
        j: usize,
        #[arg(long, default_value_t = 10)]
        t: usize,
        #[arg(long, default_value_t = 100)]
        k: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pdt: {e:#}");
            let format = e
                .chain()
                .any(|c| matches!(c.downcast_ref::<Error>(), Some(Error::Format(_))));
            ExitCode::from(if format { 2 } else { 1 })
        }
    }
}

fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Build {
            corpus,
            output,
            strategy,
            compress,
            repair_k,
            dict_bound,
            block_size,
            memory_budget,
        } => {
            let keys = read_corpus(&corpus, memory_budget)?;
            let mut config = DictionaryConfig::new(match strategy {
                StrategyArg::Lex => Strategy::Lex,
                StrategyArg::Centroid => Strategy::Centroid,
            });
            config.block_size = block_size;
            if compress {
                config = config.compressed(RePairConfig {
                    pairs_per_round: repair_k,
                    dict_bound,
                });
            }
            let d = PathDecomposedTrie::build(&keys, &config)?;
            d.write(&output)
                .with_context(|| format!("writing {}", output.display()))?;
        }
        Command::Lookup { container, queries } => {
            let d = PathDecomposedTrie::open(&container)?;
            let input = read_queries(queries.as_deref())?;
            let mut out = BufWriter::new(io::stdout().lock());
            for q in lines(&input)? {
                match d.lookup(q) {
                    Some(id) => writeln!(out, "{id}")?,
                    None => writeln!(out, "-1")?,
                }
            }
            out.flush()?;
        }
        Command::Access { container, ids } => {
            let d = PathDecomposedTrie::open(&container)?;
            let input = read_queries(ids.as_deref())?;
            let mut out = BufWriter::new(io::stdout().lock());
            let mut buf = Vec::new();
            for (n, line) in lines(&input)?.enumerate() {
                let text = std::str::from_utf8(line).ok().map(str::trim);
                let Some(id) = text.and_then(|t| t.parse::<u64>().ok()) else {
                    bail!(Error::Input(format!("line {}: not an id", n + 1)));
                };
                d.access_into(id, &mut buf)?;
                out.write_all(&buf)?;
                out.write_all(b"\n")?;
            }
            out.flush()?;
        }
        Command::MphBuild {
            corpus,
            output,
            flat,
            block_size,
            memory_budget,
        } => {
            let keys = read_corpus(&corpus, memory_budget)?;
            let bits = pdtrie::trie::Binarized(&keys);
            if flat {
                FlatHollowTrie::build_bits(&bits, block_size)?.write(&output)?;
            } else {
                HollowTrieMph::build_bits(&bits, block_size)?.write(&output)?;
            }
        }
        Command::MphHash { container, queries } => {
            let hasher = Hasher::open(&container)?;
            let input = read_queries(queries.as_deref())?;
            let mut out = BufWriter::new(io::stdout().lock());
            for q in lines(&input)? {
                writeln!(out, "{}", hasher.hash(q))?;
            }
            out.flush()?;
        }
        Command::Stats { input, corpus } => {
            let report = if is_container(&input)? {
                container_stats(&input, corpus.as_deref())?
            } else {
                corpus_stats(&read_corpus(&input, DEFAULT_MEMORY_BUDGET)?)?
            };
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Command::Bench {
            container,
            corpus,
            queries,
            runs,
            seed,
        } => {
            let c = Container::open(&container)?;
            let report = if c.kind() == Kind::Dictionary {
                let d = PathDecomposedTrie::from_container(&c)?;
                let keys: Vec<Vec<u8>> = match corpus {
                    Some(p) => read_corpus(&p, DEFAULT_MEMORY_BUDGET)?
                        .iter()
                        .map(<[u8]>::to_vec)
                        .collect(),
                    None => (0..d.len() as u64).map(|i| d.access(i)).collect::<Result<_, _>>()?,
                };
                let q = sample_queries(&keys, queries, seed);
                let r = measure(&keys, &q, runs, |k| d.lookup(k).unwrap_or(u64::MAX));
                json!({
                    "kind": "dictionary",
                    "operation": "lookup",
                    "strings": d.len(),
                    "size_bits": d.size_in_bits(),
                    "bits_per_string": d.size_in_bits() as f64 / d.len() as f64,
                    "queries": r.queries,
                    "runs": r.runs,
                    "mean_ns": r.mean_ns,
                    "std_ns": r.std_ns,
                })
            } else {
                let Some(p) = corpus else {
                    bail!(Error::Input("hash structures need --corpus for member queries".into()));
                };
                let hasher = Hasher::from_container(&c)?;
                let keys = read_corpus(&p, DEFAULT_MEMORY_BUDGET)?;
                let q = sample_queries(&keys, queries, seed);
                let r = measure(&keys, &q, runs, |k| hasher.hash(k));
                json!({
                    "kind": hasher.kind_name(),
                    "operation": "hash",
                    "strings": keys.len(),
                    "size_bits": hasher.size_in_bits(),
                    "bits_per_string": hasher.size_in_bits() as f64 / keys.len() as f64,
                    "queries": r.queries,
                    "runs": r.runs,
                    "mean_ns": r.mean_ns,
                    "std_ns": r.std_ns,
                })
            };
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Command::GenSynthetic { output, i, j, t, k } => {
            let p = SyntheticParams::new(i, j, t, k);
            p.count()?;
            p.suffix()?;
            p.write(File::create(&output).with_context(|| format!("creating {}", output.display()))?)?;
        }
    }
    Ok(())
}

enum Hasher {
    Centroid(HollowTrieMph),
    Flat(FlatHollowTrie),
}

impl Hasher {
    fn open(path: &Path) -> anyhow::Result<Self> {
        Self::from_container(&Container::open(path)?)
    }

    fn from_container(c: &Container) -> anyhow::Result<Self> {
        Ok(match c.kind() {
            Kind::HollowMph => Hasher::Centroid(HollowTrieMph::from_container(c)?),
            Kind::FlatHollow => Hasher::Flat(FlatHollowTrie::from_container(c)?),
            Kind::Dictionary => bail!(Error::Format("container holds a dictionary, not a hash".into())),
        })
    }

    fn hash(&self, s: &[u8]) -> u64 {
        match self {
            Hasher::Centroid(m) => m.hash(s),
            Hasher::Flat(f) => f.hash(s),
        }
    }

    fn size_in_bits(&self) -> usize {
        match self {
            Hasher::Centroid(m) => m.size_in_bits(),
            Hasher::Flat(f) => f.size_in_bits(),
        }
    }

    fn kind_name(&self) -> &'static str {
        match self {
            Hasher::Centroid(_) => "centroid_hollow",
            Hasher::Flat(_) => "hollow",
        }
    }
}

fn read_corpus(path: &Path, budget: usize) -> anyhow::Result<Corpus> {
    Corpus::read_with_budget(path, budget).with_context(|| format!("reading corpus {}", path.display()))
}

fn read_queries(path: Option<&Path>) -> anyhow::Result<Vec<u8>> {
    let mut buf = Vec::new();
    match path {
        Some(p) if p != Path::new("-") => {
            File::open(p)
                .with_context(|| format!("opening {}", p.display()))?
                .read_to_end(&mut buf)?;
        }
        _ => {
            io::stdin().lock().read_to_end(&mut buf)?;
        }
    }
    Ok(buf)
}

/// Splits newline-delimited queries, rejecting any 0x00 byte up front.
fn lines(input: &[u8]) -> anyhow::Result<impl Iterator<Item = &[u8]>> {
    if let Some(p) = input.iter().position(|&b| b == 0) {
        let line = input[..p].iter().filter(|&&b| b == b'\n').count() + 1;
        bail!(Error::Input(format!("query line {line} contains a 0x00 byte")));
    }
    let body = input.strip_suffix(b"\n").unwrap_or(input);
    let empty = input.is_empty();
    Ok(body.split(|&b| b == b'\n').filter(move |_| !empty))
}

fn is_container(path: &Path) -> anyhow::Result<bool> {
    let mut magic = [0u8; 4];
    let mut f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let n = f.read(&mut magic)?;
    Ok(n == 4 && magic == pdtrie::container::MAGIC)
}

fn heights(h: HeightStats) -> Value {
    json!({ "average": h.average, "max": h.max })
}

fn space(size_bits: usize, strings: usize, corpus: Option<&Path>) -> anyhow::Result<Value> {
    let mut v = json!({
        "size_bits": size_bits,
        "size_bytes": size_bits.div_ceil(8),
        "bits_per_string": size_bits as f64 / strings as f64,
    });
    if let Some(p) = corpus {
        let keys = read_corpus(p, DEFAULT_MEMORY_BUDGET)?;
        let s = SpaceReport::new(size_bits as u64, keys.len(), keys.raw_bytes());
        v["raw_bytes"] = json!(s.raw_bytes);
        v["ratio"] = json!(s.ratio);
    }
    Ok(v)
}

fn container_stats(path: &Path, corpus: Option<&Path>) -> anyhow::Result<Value> {
    let c = Container::open(path)?;
    let file_bytes = c.size_bytes();
    let mut v = match c.kind() {
        Kind::Dictionary => {
            let d = PathDecomposedTrie::from_container(&c)?;
            json!({
                "kind": "dictionary",
                "strategy": match d.strategy() { Strategy::Lex => "lex", Strategy::Centroid => "centroid" },
                "compressed": d.is_compressed(),
                "strings": d.len(),
                "height": heights(d.heights()),
                "space": space(d.size_in_bits(), d.len(), corpus)?,
                "components_bits": {
                    "bp": d.bp().size_in_bits(),
                    "branching": 8 * d.bp().rank_select().count_ones(),
                    "labels": d.labels().size_in_bits(),
                },
            })
        }
        Kind::HollowMph => {
            let m = HollowTrieMph::from_container(&c)?;
            json!({
                "kind": "centroid_hollow",
                "strings": m.len(),
                "height": heights(m.heights()),
                "internal_nodes_have_right_children": m.internal_nodes_have_right_children(),
                "space": space(m.size_in_bits(), m.len(), corpus)?,
            })
        }
        Kind::FlatHollow => {
            let f = FlatHollowTrie::from_container(&c)?;
            json!({
                "kind": "hollow",
                "strings": f.len(),
                "height": heights(f.heights()),
                "space": space(f.size_in_bits(), f.len(), corpus)?,
            })
        }
    };
    v["file_bytes"] = json!(file_bytes);
    Ok(v)
}

fn corpus_stats(keys: &Corpus) -> anyhow::Result<Value> {
    let h = HeightReport::compute(keys)?;
    Ok(json!({
        "kind": "corpus",
        "strings": keys.len(),
        "raw_bytes": keys.raw_bytes(),
        "input_sorted": keys.input_was_sorted(),
        "height": {
            "compacted": heights(h.compacted),
            "lex": heights(h.lex),
            "centroid": heights(h.centroid),
            "hollow": heights(h.hollow),
            "centroid_hollow": heights(h.centroid_hollow),
        },
    }))
}
