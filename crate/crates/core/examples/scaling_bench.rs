//! Index sizes and per-occurrence query times for 10 to 40 genome copies.
//!
//! `cargo run --release --example scaling_bench [base_length]`

use alibi_index::bench::{run_bench, write_csv, BenchConfig};

fn main() -> alibi_index::Result<()> {
    let mut cfg = BenchConfig::default();
    if let Some(len) = std::env::args().nth(1) {
        cfg.spec.base_length = len.parse().expect("base length must be an integer");
    }
    let rows = run_bench(&cfg)?;
    write_csv(&mut std::io::stdout(), &rows)?;
    let first = &rows[0];
    let last = &rows[rows.len() - 1];
    let ratio = |a: usize, b: usize| b as f64 / a as f64;
    eprintln!(
        "growth {}->{} copies: baseline {:.2}, hybrid {:.2}, alibi {:.2}",
        first.collection_size,
        last.collection_size,
        ratio(first.baseline_index_bytes, last.baseline_index_bytes),
        ratio(first.hybrid_bytes, last.hybrid_bytes),
        ratio(first.alibi_bytes, last.alibi_bytes)
    );
    Ok(())
}
