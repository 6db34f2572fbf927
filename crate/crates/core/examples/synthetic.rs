//! Generates a synthetic collection and prints its FASTA and alignment scripts.
//!
//! `cargo run --example synthetic [genomes] [seed]`

use alibi_index::testkit::{gen_synthetic, SyntheticSpec};

fn main() -> alibi_index::Result<()> {
    let mut args = std::env::args().skip(1);
    let spec = SyntheticSpec {
        base_length: 120,
        genome_count: args.next().map_or(4, |s| s.parse().expect("genome count must be an integer")),
        snp_rate: 0.02,
        indel_rate: 0.01,
        seed: args.next().map_or(7, |s| s.parse().expect("seed must be an integer")),
        ..SyntheticSpec::default()
    };
    let col = gen_synthetic(&spec)?;
    print!("{}", col.fasta());
    print!("{}", col.alignments());
    for (script, (id, seq)) in col.scripts.iter().zip(&col.genomes) {
        assert_eq!(&script.apply(&col.genomes[0].1)?, seq, "script for {id}");
    }
    Ok(())
}
