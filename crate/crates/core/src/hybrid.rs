//! Hybrid index: a self-index over the kernel finds matches that cross a
//! phrase boundary, and the LZ77 source grid recovers the rest.

use crate::codec::{Reader, Writer};
use crate::error::Result;
use crate::grid::report_covering;
use crate::kernel::{KernelLayout, KernelParams, KernelText};
use crate::lz77::{self, Lz77Parse};
use crate::seq::{ConcatenatedText, GenomeLayout, Occurrence, SEPARATOR};
use crate::succinct::fm::DEFAULT_LOCATE_RATE;
use crate::succinct::gaplist::DEFAULT_SAMPLE_RATE;
use crate::succinct::{GapList, IntVector, RangeMaxIndex, SelfIndex};

/// Build-time knobs that do not change query results.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexOptions {
    pub gap_sample_rate: usize,
    pub locate_rate: usize,
    /// Replace repeated kernel segments by aliases.
    pub dedup: bool,
}

impl Default for IndexOptions {
    fn default() -> Self {
        IndexOptions {
            gap_sample_rate: DEFAULT_SAMPLE_RATE,
            locate_rate: DEFAULT_LOCATE_RATE,
            dedup: false,
        }
    }
}

/// Copy phrases as points `(source start, source end)`, sorted by start. The
/// end is implicit: it follows from the phrase length, which the phrase
/// pointer recovers from the cut list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceGrid {
    source_starts: GapList,
    /// Index (0-based) of the phrase each source belongs to, which is also
    /// the rank of the cut just before it.
    phrase_ptrs: IntVector,
    ends: Option<RangeMaxIndex>,
}

/// Start and length of phrase `q` (0-based) given the cuts of a text of length `n`.
fn phrase_extent(cuts: &GapList, n: usize, q: usize) -> (usize, usize) {
    let start = if q == 0 { 1 } else { cuts.get(q) + 1 };
    let end = if q == cuts.len() { n } else { cuts.get(q + 1) };
    (start, end + 1 - start)
}

/// One copy phrase whose source covers a queried interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct CoveringSource {
    pub source_start: usize,
    pub phrase_start: usize,
    pub len: usize,
}

impl SourceGrid {
    pub fn build(parse: &Lz77Parse, gap_rate: usize) -> Result<Self> {
        let mut pts: Vec<(usize, usize, usize)> = parse
            .phrases()
            .iter()
            .enumerate()
            .filter_map(|(q, p)| p.source().map(|s| (s, q, s + p.len - 1)))
            .collect();
        pts.sort_unstable();
        let starts: Vec<usize> = pts.iter().map(|p| p.0).collect();
        let ptrs: Vec<u64> = pts.iter().map(|p| p.1 as u64).collect();
        let ends: Vec<usize> = pts.iter().map(|p| p.2).collect();
        Ok(SourceGrid {
            source_starts: GapList::with_rate(&starts, gap_rate, false)?,
            phrase_ptrs: IntVector::from_slice(&ptrs),
            ends: if ends.is_empty() { None } else { Some(RangeMaxIndex::new(&ends)?) },
        })
    }

    pub fn len(&self) -> usize {
        self.source_starts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.source_starts.is_empty()
    }

    /// Every copy phrase whose source contains `[l, r]`.
    pub fn covering(&self, cuts: &GapList, n: usize, l: usize, r: usize) -> Vec<CoveringSource> {
        let mut out = Vec::new();
        self.for_each_covering(cuts, n, l, r, |c| out.push(c));
        out
    }

    fn for_each_covering(&self, cuts: &GapList, n: usize, l: usize, r: usize, mut f: impl FnMut(CoveringSource)) {
        report_covering(&self.source_starts, self.ends.as_ref(), l, |j| {
            let source_start = self.source_starts.get(j + 1);
            let (phrase_start, len) = phrase_extent(cuts, n, self.phrase_ptrs.get(j) as usize);
            let hit = source_start + len > r;
            if hit {
                f(CoveringSource {
                    source_start,
                    phrase_start,
                    len,
                });
            }
            hit
        });
    }

    pub(crate) fn encode_parts(&self) -> (Vec<u8>, Vec<u8>, Vec<u8>) {
        let mut s = Writer::new();
        self.source_starts.encode(&mut s);
        let mut p = Writer::new();
        self.phrase_ptrs.encode(&mut p);
        let mut e = Writer::new();
        match &self.ends {
            Some(rmq) => {
                e.u8(1);
                rmq.encode(&mut e);
            }
            None => e.u8(0),
        }
        (s.into_inner(), p.into_inner(), e.into_inner())
    }

    pub(crate) fn decode_parts(s: &mut Reader, p: &mut Reader, e: &mut Reader, phrases: usize) -> Result<Self> {
        let source_starts = GapList::decode(s)?;
        s.finish()?;
        let phrase_ptrs = IntVector::decode(p)?;
        p.finish()?;
        let ends = match e.u8()? {
            0 => None,
            1 => Some(RangeMaxIndex::decode(e)?),
            _ => return Err(e.err("bad presence flag")),
        };
        e.finish()?;
        if phrase_ptrs.len() != source_starts.len() {
            return Err(p.err("phrase pointer count differs from source count"));
        }
        if phrase_ptrs.iter().any(|q| q as usize >= phrases) {
            return Err(p.err("phrase pointer out of range"));
        }
        if ends.as_ref().map_or(0, RangeMaxIndex::len) != source_starts.len() {
            return Err(e.err("range-max size differs from source count"));
        }
        Ok(SourceGrid {
            source_starts,
            phrase_ptrs,
            ends,
        })
    }
}

/// Sizes and counts worth reporting about a built index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HybridStats {
    pub text_len: usize,
    pub phrases: usize,
    pub kernel_len: usize,
    pub segments: usize,
    pub aliases: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HybridIndex {
    pub(crate) genomes: GenomeLayout,
    pub(crate) kernel: KernelLayout,
    pub(crate) fm: SelfIndex,
    pub(crate) grid: SourceGrid,
}

impl HybridIndex {
    pub fn build(text: &ConcatenatedText, params: KernelParams, options: IndexOptions) -> Result<Self> {
        let parse = lz77::parse(text.bytes());
        Self::build_with_parse(text, &parse, params, options)
    }

    pub fn build_with_parse(
        text: &ConcatenatedText,
        parse: &Lz77Parse,
        params: KernelParams,
        options: IndexOptions,
    ) -> Result<Self> {
        let mut kernel = KernelText::build_with_rate(text.bytes(), parse, params, options.gap_sample_rate)?;
        if options.dedup {
            kernel = kernel.dedup()?;
        }
        Ok(HybridIndex {
            genomes: text.layout().clone(),
            fm: SelfIndex::with_rate(&kernel.bytes, options.locate_rate)?,
            kernel: kernel.layout,
            grid: SourceGrid::build(parse, options.gap_sample_rate)?,
        })
    }

    pub fn params(&self) -> KernelParams {
        self.kernel.params
    }

    pub fn genomes(&self) -> &GenomeLayout {
        &self.genomes
    }

    pub fn kernel_layout(&self) -> &KernelLayout {
        &self.kernel
    }

    pub fn stats(&self) -> HybridStats {
        HybridStats {
            text_len: self.kernel.text_len,
            phrases: self.kernel.cuts_in_t.len() + 1,
            kernel_len: self.kernel.kernel_len,
            segments: self.kernel.segments.len(),
            aliases: self.kernel.aliases.len(),
        }
    }

    /// Approximate matches that cross a phrase boundary (or sit on a literal
    /// phrase), in ascending order.
    pub fn find_primary(&self, pattern: &[u8], k: usize) -> Result<Vec<Occurrence>> {
        let mut out = self.primary_raw(pattern, k)?;
        out.sort_unstable();
        Ok(out)
    }

    fn primary_raw(&self, pattern: &[u8], k: usize) -> Result<Vec<Occurrence>> {
        self.kernel.params.check_query(pattern, k)?;
        let hits = self.fm.bounded_edit_search_within(pattern, k, SEPARATOR)?;
        let mut out = Vec::new();
        for h in hits {
            if let Some((st, et)) = self.kernel.map_kernel_match(h.start, h.end) {
                let len = et - st + 1;
                out.push(Occurrence::new(st, len, h.dist));
                let seg = self.kernel.segment_at(h.start);
                out.extend(
                    self.kernel
                        .alias_images(seg, st)
                        .map(|s| Occurrence::new(s, len, h.dist)),
                );
            }
        }
        Ok(out)
    }

    /// Every approximate match, in ascending order.
    pub fn find_all(&self, pattern: &[u8], k: usize) -> Result<Vec<Occurrence>> {
        let mut out = self.find_all_unsorted(pattern, k)?;
        out.sort_unstable();
        Ok(out)
    }

    /// [`find_all`](Self::find_all) in discovery order, without sorting or
    /// deduplication; each match appears exactly once.
    pub fn find_all_unsorted(&self, pattern: &[u8], k: usize) -> Result<Vec<Occurrence>> {
        let mut list = self.primary_raw(pattern, k)?;
        let mut head = 0;
        while head < list.len() {
            let occ = list[head];
            head += 1;
            let (cuts, n) = (&self.kernel.cuts_in_t, self.kernel.text_len);
            self.grid.for_each_covering(cuts, n, occ.global_start, occ.end(), |c| {
                let start = c.phrase_start + (occ.global_start - c.source_start);
                list.push(Occurrence::new(start, occ.length, occ.edit_distance));
            });
        }
        Ok(list)
    }

    /// Copy phrases whose source contains `[l, r]` (text coordinates).
    pub fn report_covering_sources(&self, l: usize, r: usize) -> Vec<CoveringSource> {
        self.grid.covering(&self.kernel.cuts_in_t, self.kernel.text_len, l, r)
    }

    /// `(genome index, 1-based local start)` of an occurrence.
    pub fn project(&self, occ: &Occurrence) -> Result<(usize, usize)> {
        self.genomes.project_index(occ.global_start, occ.length)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn index(genomes: &[&[u8]], m: usize, k: usize, dedup: bool) -> HybridIndex {
        let named: Vec<(String, &[u8])> = genomes
            .iter()
            .enumerate()
            .map(|(i, g)| (format!("g{i}"), *g))
            .collect();
        let text = ConcatenatedText::concatenate(&named).unwrap();
        let opts = IndexOptions {
            dedup,
            ..IndexOptions::default()
        };
        HybridIndex::build(&text, KernelParams::new(m, k), opts).unwrap()
    }

    fn scan(text: &[u8], pat: &[u8]) -> Vec<usize> {
        (0..=text.len() - pat.len())
            .filter(|&i| &text[i..i + pat.len()] == pat)
            .map(|i| i + 1)
            .collect()
    }

    #[test]
    fn running_example_exact() {
        let idx = index(&[b"abaabab"], 2, 0, false);
        let starts = |p: &[u8]| {
            idx.find_all(p, 0)
                .unwrap()
                .iter()
                .map(|o| o.global_start)
                .collect::<Vec<_>>()
        };
        assert_eq!(starts(b"ab"), vec![1, 4, 6]);
        assert_eq!(starts(b"ba"), vec![2, 5]);
        assert_eq!(starts(b"a"), vec![1, 3, 4, 6]);
        assert_eq!(starts(b"b"), vec![2, 5, 7]);
        assert!(starts(b"bb").is_empty());
    }

    #[test]
    fn unary_text() {
        let idx = index(&[b"aaaa"], 1, 0, false);
        assert_eq!(idx.stats().kernel_len, 1);
        let starts: Vec<usize> = idx.find_all(b"a", 0).unwrap().iter().map(|o| o.global_start).collect();
        assert_eq!(starts, vec![1, 2, 3, 4]);
        let idx = index(&[b"aaaa"], 2, 0, false);
        let starts: Vec<usize> = idx.find_all(b"aa", 0).unwrap().iter().map(|o| o.global_start).collect();
        assert_eq!(starts, vec![1, 2, 3]);
    }

    #[test]
    fn covering_sources_example() {
        let idx = index(&[b"abaabab"], 2, 0, false);
        // Phrase 4 (start 4, len 3) copies [1, 3]; phrase 3 copies [1, 1].
        let got = idx.report_covering_sources(1, 2);
        assert_eq!(
            got,
            vec![CoveringSource {
                source_start: 1,
                phrase_start: 4,
                len: 3
            }]
        );
        let mut got = idx.report_covering_sources(1, 1);
        got.sort();
        assert_eq!(got.len(), 2);
        assert!(idx.report_covering_sources(5, 6).is_empty());
    }

    #[test]
    fn exact_matches_over_collection() {
        let g1 = b"ACGTACGTTAGCATCGATCGGATCATTACGACGTAGCTAGCTACGACT".to_vec();
        let mut g2 = g1.clone();
        g2[10] = b'T';
        g2[30] = b'G';
        let mut g3 = g1.clone();
        g3.insert(20, b'A');
        for dedup in [false, true] {
            let idx = index(&[&g1, &g2, &g3], 6, 0, dedup);
            let text = ConcatenatedText::concatenate(&[("a", &g1), ("b", &g2), ("c", &g3)]).unwrap();
            for len in 1..=6 {
                for s in (0..g1.len() - len).step_by(3) {
                    let pat = &g1[s..s + len];
                    let got: Vec<usize> = idx.find_all(pat, 0).unwrap().iter().map(|o| o.global_start).collect();
                    assert_eq!(got, scan(text.bytes(), pat), "pattern {:?}", std::str::from_utf8(pat));
                }
            }
        }
    }

    #[test]
    fn query_bounds_are_enforced() {
        let idx = index(&[b"abaabab"], 2, 0, false);
        assert!(idx.find_all(b"aba", 0).is_err());
        assert!(idx.find_all(b"ab", 1).is_err());
        assert!(idx.find_all(b"", 0).is_err());
        assert!(idx.find_all(b"a#", 0).is_err());
    }
}
