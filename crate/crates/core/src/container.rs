//! On-disk index files.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! "ALBI"  u32 version  u8 kind
//! then sections: [u8; 4] tag, u64 payload length, payload
//! ```
//!
//! Hybrid files carry `PARM GNOM KLAY CUTT CUTK FMIX SRCS PPTR ERMQ`; AliBI
//! files carry `APRM GNOM ACAT AFMI AGRD`. Kernel bytes are not stored: the
//! self-index can extract them.

use std::fs;
use std::path::Path;

use crate::alibi::{AlibiIndex, CatalogEntry, RegionGrid};
use crate::codec::{Reader, Writer};
use crate::error::{Error, Result};
use crate::hybrid::{HybridIndex, SourceGrid};
use crate::kernel::{KernelLayout, KernelParams};
use crate::seq::{GenomeLayout, Occurrence};
use crate::succinct::{GapList, SelfIndex};

pub const MAGIC: &[u8; 4] = b"ALBI";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 9;
/// Tag plus length prefix in front of every section payload.
pub const SECTION_OVERHEAD: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexKind {
    Hybrid,
    Alibi,
}

impl IndexKind {
    fn code(self) -> u8 {
        match self {
            IndexKind::Hybrid => 1,
            IndexKind::Alibi => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            IndexKind::Hybrid => "hybrid",
            IndexKind::Alibi => "alibi",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub tag: [u8; 4],
    pub payload: Vec<u8>,
}

impl Section {
    fn new(tag: &[u8; 4], w: Writer) -> Self {
        Section {
            tag: *tag,
            payload: w.into_inner(),
        }
    }

    pub fn tag_str(&self) -> String {
        String::from_utf8_lossy(&self.tag).into_owned()
    }
}

pub fn write_container(kind: IndexKind, sections: &[Section]) -> Vec<u8> {
    let total: usize = sections.iter().map(|s| s.payload.len() + SECTION_OVERHEAD).sum();
    let mut out = Vec::with_capacity(HEADER_LEN + total);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.push(kind.code());
    for s in sections {
        out.extend_from_slice(&s.tag);
        out.extend_from_slice(&(s.payload.len() as u64).to_le_bytes());
        out.extend_from_slice(&s.payload);
    }
    out
}

pub fn read_container(bytes: &[u8]) -> Result<(IndexKind, Vec<Section>)> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::format("header", format!("file has {} bytes, header needs {HEADER_LEN}", bytes.len())));
    }
    if &bytes[..4] != MAGIC {
        return Err(Error::format("header", format!("bad magic {:?}", String::from_utf8_lossy(&bytes[..4]))));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != VERSION {
        return Err(Error::format(
            "header",
            format!("version mismatch: expected {VERSION}, found {version}"),
        ));
    }
    let kind = match bytes[8] {
        1 => IndexKind::Hybrid,
        2 => IndexKind::Alibi,
        k => return Err(Error::format("header", format!("unknown index kind {k}"))),
    };
    let mut sections = Vec::new();
    let mut pos = HEADER_LEN;
    while pos < bytes.len() {
        let rest = &bytes[pos..];
        let name = String::from_utf8_lossy(&rest[..rest.len().min(4)]).into_owned();
        if rest.len() < SECTION_OVERHEAD {
            return Err(Error::format(&name, "truncated section header"));
        }
        let tag: [u8; 4] = rest[..4].try_into().unwrap();
        let len = u64::from_le_bytes(rest[4..12].try_into().unwrap());
        let avail = (rest.len() - SECTION_OVERHEAD) as u64;
        if len > avail {
            return Err(Error::format(
                &name,
                format!("truncated: declares {len} bytes, {avail} present"),
            ));
        }
        let len = len as usize;
        sections.push(Section {
            tag,
            payload: rest[SECTION_OVERHEAD..SECTION_OVERHEAD + len].to_vec(),
        });
        pos += SECTION_OVERHEAD + len;
    }
    Ok((kind, sections))
}

/// Framed size of every section, in file order. With the header they add up
/// to the file length.
pub fn section_sizes(bytes: &[u8]) -> Result<(IndexKind, Vec<(String, usize)>)> {
    let (kind, sections) = read_container(bytes)?;
    Ok((
        kind,
        sections
            .iter()
            .map(|s| (s.tag_str(), s.payload.len() + SECTION_OVERHEAD))
            .collect(),
    ))
}

/// Looks sections up by tag, insisting on exactly the expected set.
struct SectionSet<'a> {
    sections: &'a [Section],
}

impl<'a> SectionSet<'a> {
    fn new(sections: &'a [Section], expected: &[&[u8; 4]]) -> Result<Self> {
        for (i, s) in sections.iter().enumerate() {
            if !expected.contains(&&s.tag) {
                return Err(Error::format(&s.tag_str(), "unexpected section"));
            }
            if sections[..i].iter().any(|o| o.tag == s.tag) {
                return Err(Error::format(&s.tag_str(), "duplicate section"));
            }
        }
        for t in expected {
            if !sections.iter().any(|s| &s.tag == *t) {
                return Err(Error::format(&String::from_utf8_lossy(*t), "missing section"));
            }
        }
        Ok(SectionSet { sections })
    }

    fn reader(&self, tag: &'a [u8; 4]) -> Reader<'a> {
        let s = self.sections.iter().find(|s| &s.tag == tag).unwrap();
        Reader::new(&s.payload, std::str::from_utf8(tag).unwrap())
    }
}

const HYBRID_TAGS: [&[u8; 4]; 9] = [b"PARM", b"GNOM", b"KLAY", b"CUTT", b"CUTK", b"FMIX", b"SRCS", b"PPTR", b"ERMQ"];
const ALIBI_TAGS: [&[u8; 4]; 5] = [b"APRM", b"GNOM", b"ACAT", b"AFMI", b"AGRD"];

fn genome_section(g: &GenomeLayout) -> Section {
    let mut w = Writer::new();
    g.encode(&mut w);
    Section::new(b"GNOM", w)
}

fn decode_gaplist(mut r: Reader) -> Result<GapList> {
    let g = GapList::decode(&mut r)?;
    r.finish()?;
    Ok(g)
}

fn decode_fm(mut r: Reader) -> Result<SelfIndex> {
    let fm = SelfIndex::decode(&mut r)?;
    r.finish()?;
    Ok(fm)
}

impl HybridIndex {
    pub fn to_sections(&self) -> Vec<Section> {
        let mut parm = Writer::new();
        self.kernel.params.encode(&mut parm);
        let mut klay = Writer::new();
        self.kernel.encode_segments(&mut klay);
        let mut cutt = Writer::new();
        self.kernel.cuts_in_t.encode(&mut cutt);
        let mut cutk = Writer::new();
        self.kernel.cuts_in_kernel.encode(&mut cutk);
        let mut fm = Writer::new();
        self.fm.encode(&mut fm);
        let (srcs, pptr, ermq) = self.grid.encode_parts();
        let raw = |tag: &[u8; 4], payload| Section { tag: *tag, payload };
        vec![
            Section::new(b"PARM", parm),
            genome_section(&self.genomes),
            Section::new(b"KLAY", klay),
            Section::new(b"CUTT", cutt),
            Section::new(b"CUTK", cutk),
            Section::new(b"FMIX", fm),
            raw(b"SRCS", srcs),
            raw(b"PPTR", pptr),
            raw(b"ERMQ", ermq),
        ]
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        write_container(IndexKind::Hybrid, &self.to_sections())
    }

    pub fn from_sections(sections: &[Section]) -> Result<Self> {
        let set = SectionSet::new(sections, &HYBRID_TAGS)?;
        let mut parm = set.reader(b"PARM");
        let params = KernelParams::decode(&mut parm)?;
        parm.finish()?;
        let genomes = GenomeLayout::decode(&mut set.reader(b"GNOM"))?;
        let cuts_t = decode_gaplist(set.reader(b"CUTT"))?;
        let cuts_k = decode_gaplist(set.reader(b"CUTK"))?;
        let mut klay = set.reader(b"KLAY");
        let kernel = KernelLayout::decode(params, &mut klay, cuts_t, cuts_k)?;
        if kernel.text_len != genomes.total_len() {
            return Err(klay.err("text length differs from the genome table"));
        }
        let fm = decode_fm(set.reader(b"FMIX"))?;
        if fm.len() != kernel.kernel_len {
            return Err(Error::format("FMIX", "self-index length differs from the kernel layout"));
        }
        let grid = SourceGrid::decode_parts(
            &mut set.reader(b"SRCS"),
            &mut set.reader(b"PPTR"),
            &mut set.reader(b"ERMQ"),
            kernel.cuts_in_t.len() + 1,
        )?;
        Ok(HybridIndex {
            genomes,
            kernel,
            fm,
            grid,
        })
    }
}

impl AlibiIndex {
    pub fn to_sections(&self) -> Vec<Section> {
        let mut prm = Writer::new();
        self.params.encode(&mut prm);
        prm.usize(self.reference);
        prm.u8(u8::from(self.include_reference));
        let mut cat = Writer::new();
        cat.usize(self.catalog.len());
        for c in &self.catalog {
            cat.varint(c.kernel_start as u64);
            cat.varint(c.len as u64);
            cat.bytes(&c.pointers);
        }
        let mut fm = Writer::new();
        self.fm.encode(&mut fm);
        let mut grd = Writer::new();
        self.grid.encode(&mut grd);
        vec![
            Section::new(b"APRM", prm),
            genome_section(&self.genomes),
            Section::new(b"ACAT", cat),
            Section::new(b"AFMI", fm),
            Section::new(b"AGRD", grd),
        ]
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        write_container(IndexKind::Alibi, &self.to_sections())
    }

    pub fn from_sections(sections: &[Section]) -> Result<Self> {
        let set = SectionSet::new(sections, &ALIBI_TAGS)?;
        let mut prm = set.reader(b"APRM");
        let params = KernelParams::decode(&mut prm)?;
        let reference = prm.usize()?;
        let include_reference = match prm.u8()? {
            0 => false,
            1 => true,
            _ => return Err(prm.err("bad include-reference flag")),
        };
        prm.finish()?;
        let genomes = GenomeLayout::decode(&mut set.reader(b"GNOM"))?;
        if reference >= genomes.genome_count() {
            return Err(prm.err("reference index outside the genome table"));
        }
        let fm = decode_fm(set.reader(b"AFMI"))?;
        let mut cat = set.reader(b"ACAT");
        let count = cat.usize()?;
        let mut catalog = Vec::with_capacity(count.min(fm.len()));
        let mut prev_end = genomes.spans()[reference].len;
        for _ in 0..count {
            let kernel_start = cat.varint()? as usize;
            let len = cat.varint()? as usize;
            let pointers = cat.bytes()?;
            if len == 0 || kernel_start <= prev_end || kernel_start + len - 1 > fm.len() {
                return Err(cat.err("catalog entry outside the kernel"));
            }
            prev_end = kernel_start + len - 1;
            catalog.push(CatalogEntry {
                kernel_start,
                len,
                pointers,
            });
        }
        cat.finish()?;
        let grid = RegionGrid::decode(&mut set.reader(b"AGRD"))?;
        if grid.markers().iter().any(|m| m.genome >= genomes.genome_count()) {
            return Err(Error::format("AGRD", "marker refers to an unknown genome"));
        }
        Ok(AlibiIndex {
            genomes,
            params,
            reference,
            include_reference,
            catalog,
            fm,
            grid,
        })
    }
}

/// Either kind of index, as loaded from a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Index {
    Hybrid(HybridIndex),
    Alibi(AlibiIndex),
}

impl Index {
    pub fn kind(&self) -> IndexKind {
        match self {
            Index::Hybrid(_) => IndexKind::Hybrid,
            Index::Alibi(_) => IndexKind::Alibi,
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        match self {
            Index::Hybrid(h) => h.to_bytes(),
            Index::Alibi(a) => a.to_bytes(),
        }
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let (kind, sections) = read_container(bytes)?;
        Ok(match kind {
            IndexKind::Hybrid => Index::Hybrid(HybridIndex::from_sections(&sections)?),
            IndexKind::Alibi => Index::Alibi(AlibiIndex::from_sections(&sections)?),
        })
    }

    pub fn save<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn load<P: AsRef<Path>>(path: P) -> Result<Self> {
        Self::from_bytes(&fs::read(path)?)
    }

    pub fn params(&self) -> KernelParams {
        match self {
            Index::Hybrid(h) => h.params(),
            Index::Alibi(a) => a.params(),
        }
    }

    pub fn genomes(&self) -> &GenomeLayout {
        match self {
            Index::Hybrid(h) => h.genomes(),
            Index::Alibi(a) => a.genomes(),
        }
    }

    pub fn find_all(&self, pattern: &[u8], k: usize) -> Result<Vec<Occurrence>> {
        match self {
            Index::Hybrid(h) => h.find_all(pattern, k),
            Index::Alibi(a) => a.find_all(pattern, k),
        }
    }

    pub fn find_primary(&self, pattern: &[u8], k: usize) -> Result<Vec<Occurrence>> {
        match self {
            Index::Hybrid(h) => h.find_primary(pattern, k),
            Index::Alibi(a) => a.find_primary(pattern, k),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hybrid::IndexOptions;
    use crate::seq::ConcatenatedText;

    fn running() -> HybridIndex {
        let text = ConcatenatedText::concatenate(&[("r", b"abaabab")]).unwrap();
        HybridIndex::build(&text, KernelParams::new(2, 0), IndexOptions::default()).unwrap()
    }

    #[test]
    fn hybrid_roundtrip() {
        let idx = running();
        let bytes = idx.to_bytes();
        let back = Index::from_bytes(&bytes).unwrap();
        assert_eq!(back, Index::Hybrid(idx));
        assert_eq!(back.to_bytes(), bytes);
        let (_, sizes) = section_sizes(&bytes).unwrap();
        assert_eq!(sizes.iter().map(|s| s.1).sum::<usize>() + HEADER_LEN, bytes.len());
    }

    #[test]
    fn header_errors() {
        let mut bytes = running().to_bytes();
        bytes[0] = b'X';
        let e = Index::from_bytes(&bytes).unwrap_err().to_string();
        assert!(e.contains("header") && e.contains("magic"), "{e}");
        let mut bytes = running().to_bytes();
        bytes[4] = 9;
        let e = Index::from_bytes(&bytes).unwrap_err().to_string();
        assert!(e.contains("expected 1, found 9"), "{e}");
    }

    #[test]
    fn truncation_names_the_section() {
        let bytes = running().to_bytes();
        let (_, sizes) = section_sizes(&bytes).unwrap();
        let mut offset = HEADER_LEN;
        for (tag, size) in sizes {
            let cut = offset + size - 1;
            match Index::from_bytes(&bytes[..cut]) {
                Err(Error::Format { section, .. }) => assert_eq!(section, tag),
                other => panic!("expected a format error for {tag}, got {other:?}"),
            }
            offset += size;
        }
    }
}
