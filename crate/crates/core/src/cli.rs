//! Command-line front end behind the `alibi` binary.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::alibi::{AlibiIndex, AlibiOptions};
use crate::bench::{run_bench, write_csv, BenchConfig};
use crate::container::{section_sizes, Index, HEADER_LEN, VERSION};
use crate::error::{Error, Result};
use crate::hybrid::{HybridIndex, IndexOptions};
use crate::kernel::KernelParams;
use crate::seq::{load_alignments, load_fasta, ConcatenatedText};
use crate::succinct::fm::DEFAULT_LOCATE_RATE;
use crate::succinct::gaplist::DEFAULT_SAMPLE_RATE;
use crate::testkit::{gen_synthetic, SyntheticSpec};

#[derive(Debug, Parser)]
#[command(name = "alibi", version, about = "Compressed approximate-match indexes for genome collections")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic collection: PREFIX.fa and PREFIX.aln
    Gen(GenArgs),
    /// Build the LZ77 hybrid index from a FASTA file
    BuildLz(BuildLzArgs),
    /// Build the alignment-based index from FASTA and alignment scripts
    BuildAlibi(BuildAlibiArgs),
    /// Report every approximate occurrence of one or more patterns
    Query(QueryArgs),
    /// Print per-section sizes of an index file
    Stats(StatsArgs),
    /// Index sizes and query times for growing synthetic collections
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct SpecArgs {
    #[arg(long = "len", default_value_t = SyntheticSpec::default().base_length)]
    pub base_length: usize,
    #[arg(long, default_value_t = SyntheticSpec::default().snp_rate)]
    pub snp: f64,
    #[arg(long, default_value_t = SyntheticSpec::default().indel_rate)]
    pub indel: f64,
    #[arg(long, default_value_t = SyntheticSpec::default().max_indel_len)]
    pub max_indel: usize,
    #[arg(long, default_value_t = SyntheticSpec::default().seed)]
    pub seed: u64,
}

impl SpecArgs {
    fn spec(&self, genome_count: usize) -> SyntheticSpec {
        SyntheticSpec {
            base_length: self.base_length,
            genome_count,
            snp_rate: self.snp,
            indel_rate: self.indel,
            max_indel_len: self.max_indel,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long, default_value_t = 10)]
    pub genomes: usize,
    #[arg(long)]
    pub out_prefix: PathBuf,
}

#[derive(Debug, Args)]
pub struct RateArgs {
    /// Sampling rate of the gap-encoded lists
    #[arg(long, default_value_t = DEFAULT_SAMPLE_RATE)]
    pub gap_rate: usize,
    /// Suffix-array sampling rate of the self-index
    #[arg(long, default_value_t = DEFAULT_LOCATE_RATE)]
    pub locate_rate: usize,
}

#[derive(Debug, Args)]
pub struct BuildLzArgs {
    #[arg(long)]
    pub fasta: PathBuf,
    /// Longest pattern the index will answer
    #[arg(long = "M")]
    pub m: usize,
    /// Largest edit distance the index will answer
    #[arg(long = "K", default_value_t = 0)]
    pub k: usize,
    /// Replace repeated kernel segments by references
    #[arg(long)]
    pub dedup: bool,
    #[command(flatten)]
    pub rates: RateArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BuildAlibiArgs {
    #[arg(long)]
    pub fasta: PathBuf,
    #[arg(long)]
    pub aln: PathBuf,
    /// Reference genome id (default: the first genome)
    #[arg(long = "ref")]
    pub reference: Option<String>,
    #[arg(long = "M")]
    pub m: usize,
    #[arg(long = "K", default_value_t = 0)]
    pub k: usize,
    /// Leave matches inside the reference out of query results
    #[arg(long)]
    pub exclude_reference: bool,
    #[command(flatten)]
    pub rates: RateArgs,
    /// List the distinct marked substrings
    #[arg(long, short)]
    pub verbose: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    #[arg(long)]
    pub index: PathBuf,
    #[arg(long, conflicts_with = "patterns", required_unless_present = "patterns")]
    pub pattern: Option<String>,
    /// File with one pattern per line
    #[arg(long)]
    pub patterns: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub k: usize,
    /// Print `pattern<TAB>count` lines instead of occurrences
    #[arg(long)]
    pub count: bool,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub index: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long, value_delimiter = ',', default_value = "10,20,30,40")]
    pub sizes: Vec<usize>,
    #[arg(long = "M", default_value_t = 100)]
    pub m: usize,
    #[arg(long = "K", default_value_t = 0)]
    pub k: usize,
    #[arg(long, default_value_t = 200)]
    pub queries: usize,
    /// Sizes only; leaves the timing columns empty
    #[arg(long)]
    pub no_timing: bool,
    #[command(flatten)]
    pub rates: RateArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn options(rates: &RateArgs, dedup: bool) -> IndexOptions {
    IndexOptions {
        gap_sample_rate: rates.gap_rate,
        locate_rate: rates.locate_rate,
        dedup,
    }
}

fn gen(a: &GenArgs, out: &mut dyn Write) -> Result<()> {
    let col = gen_synthetic(&a.spec.spec(a.genomes))?;
    let fa = a.out_prefix.with_extension("fa");
    let aln = a.out_prefix.with_extension("aln");
    fs::write(&fa, col.fasta())?;
    fs::write(&aln, col.alignments())?;
    writeln!(out, "fasta={}", fa.display())?;
    writeln!(out, "alignments={}", aln.display())?;
    writeln!(out, "genomes={}", col.genomes.len())?;
    Ok(())
}

fn build_lz(a: &BuildLzArgs, out: &mut dyn Write) -> Result<()> {
    let genomes = load_fasta(&a.fasta)?;
    let text = ConcatenatedText::concatenate(&genomes)?;
    let idx = HybridIndex::build(&text, KernelParams::new(a.m, a.k), options(&a.rates, a.dedup))?;
    let bytes = idx.to_bytes();
    fs::write(&a.out, &bytes)?;
    let s = idx.stats();
    writeln!(out, "n={}", s.text_len)?;
    writeln!(out, "z={}", s.phrases)?;
    writeln!(out, "kernel_len={}", s.kernel_len)?;
    writeln!(out, "segments={}", s.segments)?;
    writeln!(out, "aliases={}", s.aliases)?;
    write_sections(&bytes, out)
}

fn build_alibi(a: &BuildAlibiArgs, out: &mut dyn Write) -> Result<()> {
    let genomes = load_fasta(&a.fasta)?;
    let scripts = load_alignments(&a.aln)?;
    let opts = AlibiOptions {
        index: options(&a.rates, false),
        include_reference: !a.exclude_reference,
    };
    let idx = AlibiIndex::build(&genomes, &scripts, a.reference.as_deref(), KernelParams::new(a.m, a.k), opts)?;
    let bytes = idx.to_bytes();
    fs::write(&a.out, &bytes)?;
    let s = idx.stats();
    writeln!(out, "reference={}", idx.genomes().spans()[idx.reference()].id)?;
    writeln!(out, "reference_len={}", s.reference_len)?;
    writeln!(out, "kernel_len={}", s.kernel_len)?;
    writeln!(out, "marked_substrings={}", s.marked_substrings)?;
    writeln!(out, "pointers={}", s.pointers)?;
    writeln!(out, "grid_markers={}", s.markers)?;
    if a.verbose {
        for m in idx.marked_substrings()? {
            writeln!(out, "marked\t{}", String::from_utf8_lossy(&m))?;
        }
    }
    write_sections(&bytes, out)
}

fn write_sections(bytes: &[u8], out: &mut dyn Write) -> Result<()> {
    let (kind, sizes) = section_sizes(bytes)?;
    writeln!(out, "kind={}", kind.name())?;
    writeln!(out, "version={VERSION}")?;
    writeln!(out, "header_bytes={HEADER_LEN}")?;
    for (tag, size) in &sizes {
        writeln!(out, "section.{tag}={size}")?;
    }
    writeln!(out, "sections_total={}", sizes.iter().map(|s| s.1).sum::<usize>())?;
    writeln!(out, "file_bytes={}", bytes.len())?;
    Ok(())
}

fn read_patterns(a: &QueryArgs) -> Result<Vec<String>> {
    if let Some(p) = &a.pattern {
        return Ok(vec![p.clone()]);
    }
    let path = a.patterns.as_ref().expect("clap requires one pattern source");
    let mut v = Vec::new();
    for line in BufReader::new(fs::File::open(path)?).lines() {
        let line = line?;
        let t = line.trim();
        if !t.is_empty() {
            v.push(t.to_string());
        }
    }
    Ok(v)
}

fn query(a: &QueryArgs, out: &mut dyn Write) -> Result<()> {
    let idx = Index::load(&a.index)?;
    let params = idx.params();
    for pat in read_patterns(a)? {
        let p = pat.to_ascii_uppercase();
        let occ = idx.find_all(p.as_bytes(), a.k).map_err(|e| match e {
            Error::Parameter(msg) => Error::Parameter(format!(
                "{msg} (index built with M = {}, K = {})",
                params.max_pattern_len, params.max_edits
            )),
            e => e,
        })?;
        if a.count {
            writeln!(out, "{pat}\t{}", occ.len())?;
            continue;
        }
        let genomes = idx.genomes();
        for o in &occ {
            let (g, local) = genomes.project_index(o.global_start, o.length)?;
            writeln!(
                out,
                "{}\t{}\t{}\t{}",
                genomes.spans()[g].id,
                local,
                o.length,
                o.edit_distance
            )?;
        }
    }
    Ok(())
}

fn stats(a: &StatsArgs, out: &mut dyn Write) -> Result<()> {
    let bytes = fs::read(&a.index)?;
    write_sections(&bytes, out)?;
    let idx = Index::from_bytes(&bytes)?;
    let p = idx.params();
    writeln!(out, "M={}", p.max_pattern_len)?;
    writeln!(out, "K={}", p.max_edits)?;
    writeln!(out, "genomes={}", idx.genomes().genome_count())?;
    writeln!(out, "n={}", idx.genomes().total_len())?;
    match &idx {
        Index::Hybrid(h) => {
            let s = h.stats();
            writeln!(out, "z={}", s.phrases)?;
            writeln!(out, "kernel_len={}", s.kernel_len)?;
            writeln!(out, "segments={}", s.segments)?;
            writeln!(out, "aliases={}", s.aliases)?;
        }
        Index::Alibi(x) => {
            let s = x.stats();
            writeln!(out, "reference_len={}", s.reference_len)?;
            writeln!(out, "kernel_len={}", s.kernel_len)?;
            writeln!(out, "marked_substrings={}", s.marked_substrings)?;
            writeln!(out, "grid_markers={}", s.markers)?;
        }
    }
    Ok(())
}

fn bench(a: &BenchArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = BenchConfig {
        spec: a.spec.spec(1),
        sizes: a.sizes.clone(),
        params: KernelParams::new(a.m, a.k),
        options: options(&a.rates, true),
        queries: a.queries,
        timing: !a.no_timing,
        ..BenchConfig::default()
    };
    let rows = run_bench(&cfg)?;
    match &a.out {
        Some(path) => {
            let mut f = fs::File::create(path)?;
            write_csv(&mut f, &rows)?;
            writeln!(out, "wrote {} rows to {}", rows.len(), path.display())?;
        }
        None => write_csv(out, &rows)?,
    }
    Ok(())
}

/// Runs one parsed command, writing data to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Gen(a) => gen(a, out),
        Command::BuildLz(a) => build_lz(a, out),
        Command::BuildAlibi(a) => build_alibi(a, out),
        Command::Query(a) => query(a, out),
        Command::Stats(a) => stats(a, out),
        Command::Bench(a) => bench(a, out),
    }
}

pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(&cli, &mut lock).and_then(|_| lock.flush().map_err(Error::from)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
