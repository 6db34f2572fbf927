//! LZ77 parse without trailing literals.
//!
//! Every phrase `T[i..j]` is either the first occurrence of a byte (a literal,
//! `i == j`) or the longest prefix of `T[i..]` that also starts somewhere before
//! `i`, stored with its leftmost occurrence as the source. Sources may overlap
//! the phrase itself.

use std::io::Write;

use crate::error::{Error, Result};
use crate::succinct::sa::{lcp_array, suffix_array};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhraseKind {
    Literal(u8),
    Copy { source: usize },
}

/// One phrase; positions are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Phrase {
    pub start: usize,
    pub len: usize,
    pub kind: PhraseKind,
}

impl Phrase {
    pub fn literal(start: usize, byte: u8) -> Self {
        Phrase {
            start,
            len: 1,
            kind: PhraseKind::Literal(byte),
        }
    }

    pub fn copy(start: usize, len: usize, source: usize) -> Self {
        Phrase {
            start,
            len,
            kind: PhraseKind::Copy { source },
        }
    }

    pub fn end(&self) -> usize {
        self.start + self.len - 1
    }

    pub fn source(&self) -> Option<usize> {
        match self.kind {
            PhraseKind::Copy { source } => Some(source),
            PhraseKind::Literal(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lz77Parse {
    phrases: Vec<Phrase>,
}

impl Lz77Parse {
    pub fn from_phrases(phrases: Vec<Phrase>) -> Self {
        Lz77Parse { phrases }
    }

    pub fn phrases(&self) -> &[Phrase] {
        &self.phrases
    }

    /// Number of phrases `z`.
    pub fn len(&self) -> usize {
        self.phrases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phrases.is_empty()
    }

    /// Length of the parsed text.
    pub fn text_len(&self) -> usize {
        self.phrases.last().map_or(0, Phrase::end)
    }

    /// Positions `c` such that one phrase ends at `c` and the next starts at `c + 1`.
    pub fn cuts(&self) -> Vec<usize> {
        self.phrases[..self.phrases.len().saturating_sub(1)]
            .iter()
            .map(Phrase::end)
            .collect()
    }

    /// Writes `start<TAB>len<TAB>(LIT byte | CPY src)` lines.
    pub fn dump<W: Write>(&self, w: &mut W) -> Result<()> {
        for p in &self.phrases {
            match p.kind {
                PhraseKind::Literal(b) => writeln!(w, "{}\t{}\tLIT {}", p.start, p.len, b as char)?,
                PhraseKind::Copy { source } => writeln!(w, "{}\t{}\tCPY {}", p.start, p.len, source)?,
            }
        }
        Ok(())
    }
}

/// Suffix-array based parse.
pub fn parse(text: &[u8]) -> Lz77Parse {
    let n = text.len();
    if n == 0 {
        return Lz77Parse::from_phrases(Vec::new());
    }
    let sa = suffix_array(text);
    let lcp = lcp_array(text, &sa);
    let mut rank = vec![0u32; n];
    for (r, &p) in sa.iter().enumerate() {
        rank[p as usize] = r as u32;
    }

    let mut phrases = Vec::new();
    let mut i = 0usize;
    while i < n {
        let r = rank[i] as usize;
        // Longest match with an earlier suffix: the nearest suffix in
        // lexicographic order on either side that starts before `i`.
        let mut best = 0usize;
        let mut cur = usize::MAX;
        let mut k = r;
        while k > 0 {
            cur = cur.min(lcp[k] as usize);
            if cur == 0 {
                break;
            }
            k -= 1;
            if (sa[k] as usize) < i {
                best = best.max(cur);
                break;
            }
        }
        cur = usize::MAX;
        k = r + 1;
        while k < n {
            cur = cur.min(lcp[k] as usize);
            if cur <= best {
                break;
            }
            if (sa[k] as usize) < i {
                best = cur;
                break;
            }
            k += 1;
        }

        if best == 0 {
            phrases.push(Phrase::literal(i + 1, text[i]));
            i += 1;
            continue;
        }
        // Leftmost start among all suffixes sharing `best` characters with suffix i.
        let mut lo = r;
        while lo > 0 && lcp[lo] as usize >= best {
            lo -= 1;
        }
        let mut hi = r;
        while hi + 1 < n && lcp[hi + 1] as usize >= best {
            hi += 1;
        }
        let source = sa[lo..=hi].iter().copied().min().unwrap() as usize;
        debug_assert!(source < i);
        phrases.push(Phrase::copy(i + 1, best, source + 1));
        i += best;
    }
    Lz77Parse::from_phrases(phrases)
}

/// Quadratic reference parse: compares every earlier start directly.
pub fn brute_force_parse(text: &[u8]) -> Lz77Parse {
    let n = text.len();
    let mut phrases = Vec::new();
    let mut i = 0;
    while i < n {
        let mut best = 0;
        let mut source = 0;
        for j in 0..i {
            let l = (0..n - i).take_while(|&d| text[j + d] == text[i + d]).count();
            if l > best {
                best = l;
                source = j;
            }
        }
        if best == 0 {
            phrases.push(Phrase::literal(i + 1, text[i]));
            i += 1;
        } else {
            phrases.push(Phrase::copy(i + 1, best, source + 1));
            i += best;
        }
    }
    Lz77Parse::from_phrases(phrases)
}

/// Reconstructs the text, resolving self-overlapping copies left to right.
pub fn decode(parse: &Lz77Parse) -> Result<Vec<u8>> {
    let mut out: Vec<u8> = Vec::with_capacity(parse.text_len());
    for (idx, p) in parse.phrases.iter().enumerate() {
        if p.start != out.len() + 1 || p.len == 0 {
            return Err(Error::Structure(format!(
                "phrase {} starts at {} with length {}, expected start {}",
                idx + 1,
                p.start,
                p.len,
                out.len() + 1
            )));
        }
        match p.kind {
            PhraseKind::Literal(b) => {
                if p.len != 1 {
                    return Err(Error::Structure(format!("literal phrase {} has length {}", idx + 1, p.len)));
                }
                out.push(b);
            }
            PhraseKind::Copy { source } => {
                if source == 0 || source >= p.start {
                    return Err(Error::Structure(format!(
                        "phrase {} copies from {} which does not precede it",
                        idx + 1,
                        source
                    )));
                }
                for d in 0..p.len {
                    out.push(out[source - 1 + d]);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cpy(start: usize, len: usize, src: usize) -> Phrase {
        Phrase::copy(start, len, src)
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse(b"a").phrases(), &[Phrase::literal(1, b'a')]);
        assert_eq!(parse(b"aaaa").phrases(), &[Phrase::literal(1, b'a'), cpy(2, 3, 1)]);
        let p = parse(b"abaabab");
        assert_eq!(
            p.phrases(),
            &[
                Phrase::literal(1, b'a'),
                Phrase::literal(2, b'b'),
                cpy(3, 1, 1),
                cpy(4, 3, 1),
                cpy(7, 1, 2)
            ]
        );
        assert_eq!(p.cuts(), vec![1, 2, 3, 6]);
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_parse(b"a").phrases(), &[Phrase::literal(1, b'a')]);
        assert_eq!(
            brute_force_parse(b"ab").phrases(),
            &[Phrase::literal(1, b'a'), Phrase::literal(2, b'b')]
        );
        assert_eq!(
            brute_force_parse(b"abab").phrases(),
            &[Phrase::literal(1, b'a'), Phrase::literal(2, b'b'), cpy(3, 2, 1)]
        );
    }

    #[test]
    fn decode_examples() {
        let lit = Lz77Parse::from_phrases(vec![Phrase::literal(1, b'a')]);
        assert_eq!(decode(&lit).unwrap(), b"a");
        let overlap = Lz77Parse::from_phrases(vec![Phrase::literal(1, b'a'), cpy(2, 3, 1)]);
        assert_eq!(decode(&overlap).unwrap(), b"aaaa");
        assert_eq!(decode(&parse(b"abaabab")).unwrap(), b"abaabab");
    }

    #[test]
    fn decode_rejects_malformed() {
        let gap = Lz77Parse::from_phrases(vec![Phrase::literal(1, b'a'), cpy(3, 1, 1)]);
        assert!(matches!(decode(&gap), Err(Error::Structure(_))));
        let forward = Lz77Parse::from_phrases(vec![Phrase::literal(1, b'a'), cpy(2, 1, 2)]);
        assert!(decode(&forward).is_err());
    }

    #[test]
    fn separators_are_ordinary_bytes() {
        let p = parse(b"ac#ac#ac");
        assert_eq!(p, brute_force_parse(b"ac#ac#ac"));
        assert_eq!(p.phrases()[2], Phrase::literal(3, b'#'));
        assert_eq!(p.phrases()[3], cpy(4, 5, 1));
    }

    #[test]
    fn dump_format() {
        let mut out = Vec::new();
        parse(b"aaaa").dump(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "1\t1\tLIT a\n2\t3\tCPY 1\n");
    }
}
