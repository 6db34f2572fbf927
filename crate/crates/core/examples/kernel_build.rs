//! Builds the kernel string of a text and shows how kernel positions map back.
//!
//! `cargo run --example kernel_build [text] [M] [K]`

use alibi_index::kernel::{KernelParams, KernelText};
use alibi_index::lz77::parse;

fn main() -> alibi_index::Result<()> {
    let mut args = std::env::args().skip(1);
    let text = args.next().unwrap_or_else(|| "abaabab".to_string());
    let m = args.next().map_or(2, |s| s.parse().expect("M must be an integer"));
    let k = args.next().map_or(0, |s| s.parse().expect("K must be an integer"));

    let p = parse(text.as_bytes());
    let kt = KernelText::build(text.as_bytes(), &p, KernelParams::new(m, k))?;
    println!("text:   {text}");
    println!("kernel: {}", String::from_utf8_lossy(&kt.bytes));
    for (i, s) in kt.layout.segments.iter().enumerate() {
        println!(
            "segment {i}: T[{}..={}] -> kernel[{}..={}], {} cuts",
            s.t_start,
            s.t_end(),
            s.kernel_start,
            s.kernel_end(),
            s.cut_count
        );
    }
    // every window of the kernel free of separators maps to a text interval
    let w = m.min(kt.len());
    for s in 1..=kt.len() + 1 - w {
        if let Some((a, b)) = kt.map_kernel_match(s, s + w - 1).unwrap_or(None) {
            println!("kernel[{s}..={}] = T[{a}..={b}]", s + w - 1);
        }
    }

    let d = kt.dedup()?;
    println!("after dedup: {} bytes, {} aliases", d.len(), d.layout.aliases.len());
    Ok(())
}
