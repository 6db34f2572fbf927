//! Approximate search over a small genome collection with the LZ77 hybrid index.
//!
//! `cargo run --example hybrid_query [pattern] [k]`

use alibi_index::hybrid::{HybridIndex, IndexOptions};
use alibi_index::kernel::KernelParams;
use alibi_index::seq::ConcatenatedText;
use alibi_index::testkit::{classify_lz, naive_find_all};

fn main() -> alibi_index::Result<()> {
    let mut args = std::env::args().skip(1);
    let pattern = args.next().unwrap_or_else(|| "GATTACA".to_string());
    let k: usize = args.next().map_or(1, |s| s.parse().expect("k must be an integer"));

    let base = b"CCGATTACAGGTTCATGCATTACAGGAACGTTAGCCATG".to_vec();
    let mut g2 = base.clone();
    g2[5] = b'G';
    let mut g3 = base.clone();
    g3.splice(20..20, *b"TT");
    let genomes = vec![("g1", base), ("g2", g2), ("g3", g3)];
    let text = ConcatenatedText::concatenate(&genomes)?;

    let opts = IndexOptions { dedup: true, ..IndexOptions::default() };
    let idx = HybridIndex::build(&text, KernelParams::new(8, 1), opts)?;
    let s = idx.stats();
    println!("n={} z={} kernel={} segments={}", s.text_len, s.phrases, s.kernel_len, s.segments);

    let occ = idx.find_all(pattern.as_bytes(), k)?;
    let primary = idx.find_primary(pattern.as_bytes(), k)?;
    println!("{} occurrences of {pattern} with k={k}, {} primary", occ.len(), primary.len());
    for o in &occ {
        let (g, local) = idx.project(o)?;
        println!("{}\t{local}\t{}\t{}", idx.genomes().spans()[g].id, o.length, o.edit_distance);
    }
    assert_eq!(occ, naive_find_all(text.bytes(), pattern.as_bytes(), k));

    let (prim, sec) = classify_lz(&alibi_index::lz77::parse(text.bytes()), &occ);
    println!("by parse structure: {} primary, {} secondary", prim.len(), sec.len());
    Ok(())
}
