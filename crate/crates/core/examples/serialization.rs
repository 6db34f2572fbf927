//! Saves both index kinds, reloads them and shows what a damaged file reports.
//!
//! `cargo run --example serialization`

use alibi_index::alibi::{AlibiIndex, AlibiOptions};
use alibi_index::container::{section_sizes, Index};
use alibi_index::hybrid::{HybridIndex, IndexOptions};
use alibi_index::kernel::KernelParams;
use alibi_index::seq::ConcatenatedText;
use alibi_index::testkit::{gen_synthetic, SyntheticSpec};

fn main() -> alibi_index::Result<()> {
    let spec = SyntheticSpec {
        base_length: 4000,
        genome_count: 6,
        snp_rate: 0.005,
        indel_rate: 0.0005,
        ..SyntheticSpec::default()
    };
    let col = gen_synthetic(&spec)?;
    let text = ConcatenatedText::concatenate(&col.genomes)?;
    let params = KernelParams::new(16, 1);
    let dir = std::env::temp_dir();

    let indexes = [
        ("hybrid", Index::Hybrid(HybridIndex::build(&text, params, IndexOptions::default())?)),
        (
            "alibi",
            Index::Alibi(AlibiIndex::build(&col.genomes, &col.scripts, None, params, AlibiOptions::default())?),
        ),
    ];
    for (name, idx) in &indexes {
        let path = dir.join(format!("example.{name}.idx"));
        idx.save(&path)?;
        let back = Index::load(&path)?;
        let pat = &col.genomes[2].1[100..112];
        assert_eq!(idx.find_all(pat, 1)?, back.find_all(pat, 1)?);

        let bytes = std::fs::read(&path)?;
        let (kind, sizes) = section_sizes(&bytes)?;
        println!("{} index, {} bytes", kind.name(), bytes.len());
        for (tag, size) in sizes {
            println!("  {tag} {size}");
        }
        let cut = bytes.len() - 20;
        match Index::from_bytes(&bytes[..cut]) {
            Err(e) => println!("  truncated to {cut} bytes: {e}"),
            Ok(_) => println!("  truncated file loaded"),
        }
        std::fs::remove_file(&path)?;
    }
    Ok(())
}
