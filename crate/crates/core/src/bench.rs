//! Index size and query time as a collection grows.

use std::io::Write;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::alibi::{AlibiIndex, AlibiOptions};
use crate::codec::Writer;
use crate::error::Result;
use crate::hybrid::{HybridIndex, IndexOptions};
use crate::kernel::KernelParams;
use crate::seq::ConcatenatedText;
use crate::succinct::SelfIndex;
use crate::testkit::{gen_synthetic, sample_patterns, SyntheticSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    /// `genome_count` is replaced by each entry of `sizes`.
    pub spec: SyntheticSpec,
    pub sizes: Vec<usize>,
    pub params: KernelParams,
    pub options: IndexOptions,
    pub query_len: usize,
    pub queries: usize,
    /// Only patterns with at least this many occurrences are timed.
    pub min_occurrences: usize,
    pub timing: bool,
    /// Each timing is the fastest of this many passes.
    pub repeats: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            spec: SyntheticSpec::default(),
            sizes: vec![10, 20, 30, 40],
            params: KernelParams::new(100, 0),
            options: IndexOptions {
                dedup: true,
                ..IndexOptions::default()
            },
            query_len: 8,
            queries: 200,
            min_occurrences: 50,
            timing: true,
            repeats: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub collection_size: usize,
    pub text_bytes: usize,
    pub baseline_index_bytes: usize,
    pub hybrid_bytes: usize,
    pub alibi_bytes: usize,
    /// Hybrid `find_all` time per reported occurrence, in nanoseconds.
    pub mean_query_time_per_occurrence: Option<f64>,
    pub baseline_ns_per_occ: Option<f64>,
    pub alibi_ns_per_occ: Option<f64>,
    pub timed_patterns: usize,
}

pub const CSV_HEADER: &str = "collection_size,baseline_index_bytes,hybrid_bytes,alibi_bytes,\
mean_query_time_per_occurrence,text_bytes,baseline_ns_per_occ,alibi_ns_per_occ,timed_patterns";

impl BenchRow {
    pub fn csv(&self) -> String {
        let t = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x:.1}"));
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.collection_size,
            self.baseline_index_bytes,
            self.hybrid_bytes,
            self.alibi_bytes,
            t(self.mean_query_time_per_occurrence),
            self.text_bytes,
            t(self.baseline_ns_per_occ),
            t(self.alibi_ns_per_occ),
            self.timed_patterns
        )
    }
}

/// Runs `f` over every pattern `repeats` times and returns the fastest pass
/// in nanoseconds per reported item.
fn time_per_item(patterns: &[Vec<u8>], repeats: usize, mut f: impl FnMut(&[u8]) -> usize) -> Option<f64> {
    let mut best: Option<f64> = None;
    for _ in 0..repeats.max(1) {
        let start = Instant::now();
        let total: usize = patterns.iter().map(|p| f(p)).sum();
        let elapsed = start.elapsed().as_nanos() as f64;
        if total == 0 {
            return None;
        }
        let per = elapsed / total as f64;
        best = Some(best.map_or(per, |b: f64| b.min(per)));
    }
    best
}

pub fn bench_size(cfg: &BenchConfig, genomes: usize) -> Result<BenchRow> {
    let spec = SyntheticSpec {
        genome_count: genomes,
        ..cfg.spec
    };
    let col = gen_synthetic(&spec)?;
    let text = ConcatenatedText::concatenate(&col.genomes)?;
    let baseline = SelfIndex::with_rate(text.bytes(), cfg.options.locate_rate)?;
    let mut w = Writer::new();
    baseline.encode(&mut w);
    let baseline_bytes = w.into_inner().len();
    let hybrid = HybridIndex::build(&text, cfg.params, cfg.options)?;
    let alibi = AlibiIndex::build(&col.genomes, &col.scripts, None, cfg.params, AlibiOptions {
        index: cfg.options,
        ..AlibiOptions::default()
    })?;

    let mut row = BenchRow {
        collection_size: genomes,
        text_bytes: text.len(),
        baseline_index_bytes: baseline_bytes,
        hybrid_bytes: hybrid.to_bytes().len(),
        alibi_bytes: alibi.to_bytes().len(),
        mean_query_time_per_occurrence: None,
        baseline_ns_per_occ: None,
        alibi_ns_per_occ: None,
        timed_patterns: 0,
    };
    if cfg.timing {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed.wrapping_add(genomes as u64));
        let len = cfg.query_len.min(cfg.params.max_pattern_len);
        let mut patterns = sample_patterns(&col.genomes, cfg.queries * 4, len, 0, &mut rng);
        patterns.retain(|p| baseline.count(p).unwrap_or(0) >= cfg.min_occurrences);
        patterns.truncate(cfg.queries);
        row.timed_patterns = patterns.len();
        row.baseline_ns_per_occ = time_per_item(&patterns, cfg.repeats, |p| baseline.locate(p).map_or(0, |v| v.len()));
        row.mean_query_time_per_occurrence = time_per_item(&patterns, cfg.repeats, |p| hybrid.find_all(p, 0).map_or(0, |v| v.len()));
        row.alibi_ns_per_occ = time_per_item(&patterns, cfg.repeats, |p| alibi.find_all(p, 0).map_or(0, |v| v.len()));
    }
    Ok(row)
}

pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    cfg.sizes.iter().map(|&g| bench_size(cfg, g)).collect()
}

pub fn write_csv<W: Write + ?Sized>(w: &mut W, rows: &[BenchRow]) -> Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(w, "{}", r.csv())?;
    }
    Ok(())
}
