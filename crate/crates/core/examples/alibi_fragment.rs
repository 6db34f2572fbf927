//! Marking, extension and queries on a 48-base reference and one aligned genome.
//!
//! `cargo run --example alibi_fragment`

use alibi_index::alibi::{mark, AlibiIndex, AlibiOptions};
use alibi_index::kernel::KernelParams;
use alibi_index::seq::AlignmentScript;

const REFERENCE: &[u8] = b"GATACATTGAATCAATCGACGGTTATGACGGCATATCGCCACATGATA";

fn main() -> alibi_index::Result<()> {
    let params = KernelParams::new(2, 1);
    let script = AlignmentScript::parse_line("g\t10= 3ICAC 14= 1XT 10= 3D 10=", 1)?;
    let genome = script.apply(REFERENCE)?;
    println!("reference {}", String::from_utf8_lossy(REFERENCE));
    println!("genome    {}", String::from_utf8_lossy(&genome));

    let regions = mark(REFERENCE, &script, params)?;
    for &(s, e) in &regions.marked {
        println!("marked   [{s}, {e}] {}", String::from_utf8_lossy(&genome[s - 1..e]));
    }
    for u in &regions.extend_unmarked(params).unmarked {
        println!(
            "unmarked [{}, {}] = reference [{}, {}]",
            u.genome_start,
            u.genome_end,
            u.ref_start,
            u.ref_end()
        );
    }

    let genomes = vec![("ref".to_string(), REFERENCE.to_vec()), ("g".to_string(), genome)];
    let opts = AlibiOptions { include_reference: false, ..AlibiOptions::default() };
    let idx = AlibiIndex::build(&genomes, &[script], None, params, opts)?;
    for pat in ["AC", "TG"] {
        let local = |v: Vec<alibi_index::seq::Occurrence>| -> alibi_index::Result<Vec<usize>> {
            v.iter().map(|o| Ok(idx.project(o)?.1)).collect()
        };
        println!(
            "{pat}: primary {:?}, all {:?}",
            local(idx.find_primary(pat.as_bytes(), 0)?)?,
            local(idx.find_all(pat.as_bytes(), 0)?)?
        );
    }
    Ok(())
}
