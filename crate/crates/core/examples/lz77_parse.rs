//! LZ77 parse of a short text, checked against the quadratic parser and decoded back.
//!
//! `cargo run --example lz77_parse [text]`

use alibi_index::lz77::{brute_force_parse, decode, parse};

fn main() -> alibi_index::Result<()> {
    let text = std::env::args().nth(1).unwrap_or_else(|| "abaababaabaab".to_string());
    let p = parse(text.as_bytes());
    p.dump(&mut std::io::stdout())?;
    println!("phrases: {}", p.len());
    println!("cuts: {:?}", p.cuts());
    assert_eq!(p, brute_force_parse(text.as_bytes()));
    assert_eq!(decode(&p)?, text.as_bytes());
    println!("decode ok");
    Ok(())
}
