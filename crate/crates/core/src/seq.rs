//! Genome collections, the concatenated text and pairwise alignment scripts.
//!
//! All positions are 1-based and inclusive.

use std::fmt;
use std::fs;
use std::io::BufRead;
use std::path::Path;

use crate::codec::{Reader, Writer};
use crate::error::{Error, Result};

/// Byte inserted between genomes and between kernel segments. Never allowed
/// inside a genome or a pattern.
pub const SEPARATOR: u8 = b'#';

/// Location of one genome inside the concatenated text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenomeSpan {
    pub id: String,
    /// First position of the genome in the concatenated text.
    pub global_start: usize,
    pub len: usize,
}

impl GenomeSpan {
    pub fn global_end(&self) -> usize {
        self.global_start + self.len - 1
    }
}

/// Genome table shared by every index: ids, offsets and the total length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenomeLayout {
    spans: Vec<GenomeSpan>,
    total_len: usize,
}

impl GenomeLayout {
    pub fn from_lengths<S: AsRef<str>>(genomes: &[(S, usize)]) -> Result<Self> {
        if genomes.is_empty() {
            return Err(Error::EmptyCollection);
        }
        let mut spans = Vec::with_capacity(genomes.len());
        let mut pos = 1;
        for (id, len) in genomes {
            spans.push(GenomeSpan {
                id: id.as_ref().to_string(),
                global_start: pos,
                len: *len,
            });
            pos += len + 1;
        }
        Ok(GenomeLayout {
            spans,
            total_len: pos - 2,
        })
    }

    pub fn spans(&self) -> &[GenomeSpan] {
        &self.spans
    }

    pub fn genome_count(&self) -> usize {
        self.spans.len()
    }

    /// Length `n` of the concatenated text.
    pub fn total_len(&self) -> usize {
        self.total_len
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.spans.iter().position(|s| s.id == id)
    }

    /// Maps a separator-free interval of the text to `(genome index, local start)`.
    pub fn project_index(&self, global_start: usize, len: usize) -> Result<(usize, usize)> {
        let end = global_start + len.max(1) - 1;
        if global_start == 0 || end > self.total_len {
            return Err(Error::Projection {
                start: global_start,
                end,
                msg: format!("outside text of length {}", self.total_len),
            });
        }
        let idx = self
            .spans
            .partition_point(|s| s.global_start <= global_start)
            .saturating_sub(1);
        let span = &self.spans[idx];
        if global_start > span.global_end() || end > span.global_end() {
            return Err(Error::Projection {
                start: global_start,
                end,
                msg: "interval touches a separator".to_string(),
            });
        }
        Ok((idx, global_start - span.global_start + 1))
    }

    pub fn project(&self, global_start: usize, len: usize) -> Result<(&str, usize)> {
        let (idx, local) = self.project_index(global_start, len)?;
        Ok((&self.spans[idx].id, local))
    }

    /// Inverse of [`project_index`](Self::project_index).
    pub fn to_global(&self, genome: usize, local_start: usize) -> usize {
        self.spans[genome].global_start + local_start - 1
    }

    pub(crate) fn encode(&self, w: &mut Writer) {
        w.usize(self.spans.len());
        for s in &self.spans {
            w.str(&s.id);
            w.usize(s.len);
        }
    }

    pub(crate) fn decode(r: &mut Reader) -> Result<Self> {
        let count = r.usize()?;
        let mut genomes = Vec::with_capacity(count.min(1 << 16));
        for _ in 0..count {
            let id = r.str()?;
            let len = r.usize()?;
            if len == 0 {
                return Err(r.err(format!("genome {id} has length 0")));
            }
            genomes.push((id, len));
        }
        r.finish()?;
        GenomeLayout::from_lengths(&genomes).map_err(|_| r.err("empty genome table"))
    }
}

/// The text `T = g1 # g2 # ... # gm`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcatenatedText {
    bytes: Vec<u8>,
    layout: GenomeLayout,
}

impl ConcatenatedText {
    pub fn concatenate<S: AsRef<str>, B: AsRef<[u8]>>(genomes: &[(S, B)]) -> Result<Self> {
        if genomes.is_empty() {
            return Err(Error::EmptyCollection);
        }
        let total: usize = genomes.iter().map(|(_, g)| g.as_ref().len()).sum();
        let mut bytes = Vec::with_capacity(total + genomes.len() - 1);
        let mut lengths = Vec::with_capacity(genomes.len());
        for (i, (id, seq)) in genomes.iter().enumerate() {
            let seq = seq.as_ref();
            if seq.is_empty() {
                return Err(Error::param(format!("genome {} is empty", id.as_ref())));
            }
            if seq.contains(&SEPARATOR) {
                return Err(Error::ReservedByte {
                    context: format!("genome {}", id.as_ref()),
                });
            }
            if i > 0 {
                bytes.push(SEPARATOR);
            }
            bytes.extend_from_slice(seq);
            lengths.push((id.as_ref(), seq.len()));
        }
        let layout = GenomeLayout::from_lengths(&lengths)?;
        debug_assert_eq!(layout.total_len(), bytes.len());
        Ok(ConcatenatedText { bytes, layout })
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn len(&self) -> usize {
        self.bytes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bytes.is_empty()
    }

    pub fn layout(&self) -> &GenomeLayout {
        &self.layout
    }

    pub fn genome_bytes(&self, genome: usize) -> &[u8] {
        let s = &self.layout.spans[genome];
        &self.bytes[s.global_start - 1..s.global_start - 1 + s.len]
    }

    pub fn project(&self, global_start: usize, len: usize) -> Result<(&str, usize)> {
        self.layout.project(global_start, len)
    }
}

/// One match reported by an index, in text coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Occurrence {
    pub global_start: usize,
    pub length: usize,
    pub edit_distance: usize,
}

impl Occurrence {
    pub fn new(global_start: usize, length: usize, edit_distance: usize) -> Self {
        Occurrence {
            global_start,
            length,
            edit_distance,
        }
    }

    pub fn end(&self) -> usize {
        self.global_start + self.length - 1
    }
}

/// Parses FASTA text. Each record is one genome; sequence lines are uppercased.
pub fn parse_fasta<R: BufRead>(reader: R) -> Result<Vec<(String, Vec<u8>)>> {
    let mut out: Vec<(String, Vec<u8>)> = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let line = line.trim_end_matches('\r');
        if let Some(header) = line.strip_prefix('>') {
            let id = header.split_whitespace().next().unwrap_or("");
            if id.is_empty() {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "empty FASTA header".to_string(),
                });
            }
            out.push((id.to_string(), Vec::new()));
        } else if line.trim().is_empty() {
            continue;
        } else {
            let Some((id, seq)) = out.last_mut() else {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "sequence data before the first '>' header".to_string(),
                });
            };
            let bytes = line.trim().as_bytes();
            if bytes.contains(&SEPARATOR) {
                return Err(Error::ReservedByte {
                    context: format!("FASTA record {id} (line {lineno})"),
                });
            }
            seq.extend(bytes.iter().map(u8::to_ascii_uppercase));
        }
    }
    Ok(out)
}

pub fn load_fasta<P: AsRef<Path>>(path: P) -> Result<Vec<(String, Vec<u8>)>> {
    let file = fs::File::open(path)?;
    parse_fasta(std::io::BufReader::new(file))
}

pub fn write_fasta<W: std::io::Write>(w: &mut W, genomes: &[(String, Vec<u8>)]) -> Result<()> {
    for (id, seq) in genomes {
        writeln!(w, ">{id}")?;
        for line in seq.chunks(70) {
            w.write_all(line)?;
            w.write_all(b"\n")?;
        }
    }
    Ok(())
}

/// One edit token. Lengths are in bases; `Subst` and `Ins` carry their bases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EditOp {
    Match(usize),
    Subst(Vec<u8>),
    Ins(Vec<u8>),
    Del(usize),
}

impl EditOp {
    /// Reference bases consumed.
    pub fn ref_len(&self) -> usize {
        match self {
            EditOp::Match(n) | EditOp::Del(n) => *n,
            EditOp::Subst(b) => b.len(),
            EditOp::Ins(_) => 0,
        }
    }

    /// Genome bases produced.
    pub fn genome_len(&self) -> usize {
        match self {
            EditOp::Match(n) => *n,
            EditOp::Subst(b) | EditOp::Ins(b) => b.len(),
            EditOp::Del(_) => 0,
        }
    }
}

impl fmt::Display for EditOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EditOp::Match(n) => write!(f, "{n}="),
            EditOp::Subst(b) => write!(f, "{}X{}", b.len(), String::from_utf8_lossy(b)),
            EditOp::Ins(b) => write!(f, "{}I{}", b.len(), String::from_utf8_lossy(b)),
            EditOp::Del(n) => write!(f, "{n}D"),
        }
    }
}

/// Edit script turning the reference into one aligned genome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignmentScript {
    pub genome_id: String,
    pub ops: Vec<EditOp>,
}

impl AlignmentScript {
    pub fn new(genome_id: impl Into<String>, ops: Vec<EditOp>) -> Self {
        AlignmentScript {
            genome_id: genome_id.into(),
            ops,
        }
    }

    pub fn identity(genome_id: impl Into<String>, ref_len: usize) -> Self {
        Self::new(genome_id, vec![EditOp::Match(ref_len)])
    }

    pub fn ref_len(&self) -> usize {
        self.ops.iter().map(EditOp::ref_len).sum()
    }

    pub fn genome_len(&self) -> usize {
        self.ops.iter().map(EditOp::genome_len).sum()
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Script {
            genome: self.genome_id.clone(),
            msg: msg.into(),
        }
    }

    /// Applies the script to `reference`, producing the aligned genome.
    pub fn apply(&self, reference: &[u8]) -> Result<Vec<u8>> {
        if self.ref_len() != reference.len() {
            return Err(self.err(format!(
                "script covers {} reference bases but the reference has {}",
                self.ref_len(),
                reference.len()
            )));
        }
        let mut out = Vec::with_capacity(self.genome_len());
        let mut r = 0;
        for op in &self.ops {
            match op {
                EditOp::Match(n) => out.extend_from_slice(&reference[r..r + n]),
                EditOp::Subst(b) | EditOp::Ins(b) => {
                    if b.contains(&SEPARATOR) {
                        return Err(Error::ReservedByte {
                            context: format!("alignment script for {}", self.genome_id),
                        });
                    }
                    out.extend_from_slice(b)
                }
                EditOp::Del(_) => {}
            }
            r += op.ref_len();
        }
        Ok(out)
    }

    /// Parses one `genome_id<TAB>tokens` line.
    pub fn parse_line(line: &str, lineno: usize) -> Result<Self> {
        let perr = |msg: String| Error::Parse { line: lineno, msg };
        let (id, tokens) = line
            .split_once('\t')
            .ok_or_else(|| perr("expected 'genome_id<TAB>tokens'".to_string()))?;
        let id = id.trim();
        if id.is_empty() {
            return Err(perr("empty genome id".to_string()));
        }
        let mut ops = Vec::new();
        for tok in tokens.split_whitespace() {
            let digits = tok.bytes().take_while(u8::is_ascii_digit).count();
            if digits == 0 || digits == tok.len() {
                return Err(perr(format!("malformed token '{tok}'")));
            }
            let n: usize = tok[..digits]
                .parse()
                .map_err(|_| perr(format!("bad length in '{tok}'")))?;
            let kind = tok.as_bytes()[digits];
            let rest = &tok.as_bytes()[digits + 1..];
            let op = match kind {
                b'=' if rest.is_empty() => EditOp::Match(n),
                b'D' if rest.is_empty() => EditOp::Del(n),
                b'X' | b'I' => {
                    if rest.len() != n {
                        return Err(perr(format!(
                            "token '{tok}' declares {n} bases but carries {}",
                            rest.len()
                        )));
                    }
                    let bases = rest.to_ascii_uppercase();
                    if kind == b'X' {
                        EditOp::Subst(bases)
                    } else {
                        EditOp::Ins(bases)
                    }
                }
                _ => return Err(perr(format!("unknown token '{tok}'"))),
            };
            ops.push(op);
        }
        Ok(AlignmentScript::new(id, ops))
    }
}

impl fmt::Display for AlignmentScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t", self.genome_id)?;
        for (i, op) in self.ops.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{op}")?;
        }
        Ok(())
    }
}

/// Parses an alignment file: one script per non-empty line.
pub fn parse_alignments(text: &str) -> Result<Vec<AlignmentScript>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| AlignmentScript::parse_line(l, i + 1))
        .collect()
}

pub fn load_alignments<P: AsRef<Path>>(path: P) -> Result<Vec<AlignmentScript>> {
    parse_alignments(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fasta(s: &str) -> Result<Vec<(String, Vec<u8>)>> {
        parse_fasta(s.as_bytes())
    }

    #[test]
    fn fasta_records() {
        assert_eq!(fasta(">g1\nACGT\n").unwrap(), vec![("g1".into(), b"ACGT".to_vec())]);
        assert_eq!(
            fasta(">g1\nAC\nGT\n>g2\nTT\n").unwrap(),
            vec![("g1".into(), b"ACGT".to_vec()), ("g2".into(), b"TT".to_vec())]
        );
        assert_eq!(fasta(">g1 desc\nacgt\n").unwrap()[0].1, b"ACGT");
    }

    #[test]
    fn fasta_errors() {
        assert!(matches!(fasta(">g1\nAC#T\n"), Err(Error::ReservedByte { .. })));
        assert!(matches!(fasta("ACGT\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(fasta(">g1\nAC\n>\nGG\n"), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn concatenation() {
        let t = ConcatenatedText::concatenate(&[("g1", "AC")]).unwrap();
        assert_eq!(t.bytes(), b"AC");
        let t = ConcatenatedText::concatenate(&[("g1", "AC"), ("g2", "GT")]).unwrap();
        assert_eq!(t.bytes(), b"AC#GT");
        assert_eq!(t.len(), 5);
        let t = ConcatenatedText::concatenate(&[("g1", "abaabab")]).unwrap();
        assert_eq!(t.len(), 7);
        let none: [(&str, &str); 0] = [];
        assert!(matches!(ConcatenatedText::concatenate(&none), Err(Error::EmptyCollection)));
        assert!(ConcatenatedText::concatenate(&[("g", "A#")]).is_err());
    }

    #[test]
    fn projection() {
        let t = ConcatenatedText::concatenate(&[("g1", "AC"), ("g2", "GT")]).unwrap();
        assert_eq!(t.project(4, 2).unwrap(), ("g2", 1));
        assert_eq!(t.project(1, 2).unwrap(), ("g1", 1));
        assert!(matches!(t.project(2, 2), Err(Error::Projection { .. })));
        assert!(t.project(3, 1).is_err());
        assert!(t.project(5, 2).is_err());
        assert_eq!(t.layout().to_global(1, 2), 5);
    }

    #[test]
    fn alignment_apply() {
        let s = AlignmentScript::identity("g", 4);
        assert_eq!(s.apply(b"ACGT").unwrap(), b"ACGT");
        let s = AlignmentScript::new(
            "g",
            vec![EditOp::Match(1), EditOp::Subst(b"G".to_vec()), EditOp::Match(2)],
        );
        assert_eq!(s.apply(b"ACGT").unwrap(), b"AGGT");
        assert!(matches!(s.apply(b"ACG"), Err(Error::Script { .. })));
    }

    #[test]
    fn alignment_fragment() {
        let reference = b"GATACATTGAATCAATCGACGGTTATGACGGCATATCGCCACATGATA";
        let s = AlignmentScript::parse_line("g2\t10= 3ICAC 14= 1XT 10= 3D 10=", 1).unwrap();
        assert_eq!(s.ref_len(), reference.len());
        assert_eq!(
            s.apply(reference).unwrap(),
            b"GATACATTGACACATCAATCGACGGTTTTGACGGCATACCACATGATA".to_vec()
        );
        assert_eq!(s.to_string(), "g2\t10= 3ICAC 14= 1XT 10= 3D 10=");
    }

    #[test]
    fn alignment_parse_errors() {
        assert!(AlignmentScript::parse_line("g2 10=", 4).is_err());
        assert!(AlignmentScript::parse_line("g2\t2XA", 1).is_err());
        assert!(AlignmentScript::parse_line("g2\t=", 1).is_err());
        assert!(AlignmentScript::parse_line("g2\t3Q", 1).is_err());
        let all = parse_alignments("g1\t4=\n\ng2\t2= 1D 1=\n").unwrap();
        assert_eq!(all.len(), 2);
        assert_eq!(all[1].ops, vec![EditOp::Match(2), EditOp::Del(1), EditOp::Match(1)]);
    }
}
