//! The filtered text: only characters close to a phrase boundary survive.
//!
//! With `M` the longest pattern and `K` the largest edit distance, a match can
//! be at most `M + K` long, so a match crossing the cut after position `c`
//! lies inside `[c - (M+K) + 2, c + (M+K) - 1]`. Those windows are kept (plus
//! the positions of literal phrases, which hold the first occurrence of each
//! byte), merged into maximal runs, and joined by `K + 1` separator bytes.

use std::collections::HashMap;

use crate::codec::{Reader, Writer};
use crate::error::{Error, Result};
use crate::lz77::{Lz77Parse, PhraseKind};
use crate::seq::SEPARATOR;
use crate::succinct::gaplist::{GapList, DEFAULT_SAMPLE_RATE};

/// Upper bounds fixed at build time: `M` and `K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelParams {
    pub max_pattern_len: usize,
    pub max_edits: usize,
}

impl KernelParams {
    pub fn new(max_pattern_len: usize, max_edits: usize) -> Self {
        KernelParams {
            max_pattern_len,
            max_edits,
        }
    }

    /// `M + K - 1`: how far a kept character may lie from a boundary.
    pub fn reach(&self) -> usize {
        self.max_pattern_len + self.max_edits - 1
    }

    pub fn separator_run(&self) -> usize {
        self.max_edits + 1
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.max_pattern_len == 0 {
            return Err(Error::param("M must be at least 1"));
        }
        if self.max_pattern_len + self.max_edits > n {
            return Err(Error::param(format!(
                "M + K = {} exceeds the text length {n}",
                self.max_pattern_len + self.max_edits
            )));
        }
        Ok(())
    }

    /// Rejects queries outside the bounds the index was built for.
    pub fn check_query(&self, pattern: &[u8], k: usize) -> Result<()> {
        if pattern.is_empty() {
            return Err(Error::param("empty pattern"));
        }
        if pattern.contains(&SEPARATOR) {
            return Err(Error::ReservedByte {
                context: "pattern".to_string(),
            });
        }
        if pattern.len() > self.max_pattern_len {
            return Err(Error::param(format!(
                "pattern length {} exceeds M = {}",
                pattern.len(),
                self.max_pattern_len
            )));
        }
        if k > self.max_edits {
            return Err(Error::param(format!("k = {k} exceeds K = {}", self.max_edits)));
        }
        Ok(())
    }

    pub(crate) fn encode(&self, w: &mut Writer) {
        w.usize(self.max_pattern_len);
        w.usize(self.max_edits);
    }

    pub(crate) fn decode(r: &mut Reader) -> Result<Self> {
        Ok(KernelParams::new(r.usize()?, r.usize()?))
    }
}

/// A maximal run of kept text positions and where it sits in the kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub t_start: usize,
    pub len: usize,
    pub kernel_start: usize,
    /// Rank in the text cut list of the first cut inside this segment.
    pub first_t_rank: usize,
    /// Rank in the kernel cut list of the same cut.
    pub first_kernel_rank: usize,
    pub cut_count: usize,
}

impl Segment {
    pub fn t_end(&self) -> usize {
        self.t_start + self.len - 1
    }

    pub fn kernel_end(&self) -> usize {
        self.kernel_start + self.len - 1
    }
}

/// A removed segment whose content, cuts and literals equal those of a
/// retained one. It acts as a dummy phrase copying the retained segment, and
/// every primary match found in the retained segment is also reported here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct SegmentAlias {
    /// Index of the retained segment.
    pub segment: usize,
    pub target_t_start: usize,
}

/// Everything the query path needs about the kernel, without its bytes
/// (the self-index holds those).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelLayout {
    pub params: KernelParams,
    /// Length `n` of the original text.
    pub text_len: usize,
    pub kernel_len: usize,
    pub segments: Vec<Segment>,
    /// Every phrase boundary of the text.
    pub cuts_in_t: GapList,
    /// Kernel positions of the boundaries that survive in the kernel.
    pub cuts_in_kernel: GapList,
    /// `(kernel position, text position)` of literal phrases.
    pub literals: Vec<(usize, usize)>,
    pub aliases: Vec<SegmentAlias>,
}

/// Segment bytes with its cut offsets and literal offsets.
type SegmentKey<'a> = (&'a [u8], Vec<usize>, Vec<usize>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelText {
    pub bytes: Vec<u8>,
    pub layout: KernelLayout,
}

fn literal_positions(parse: &Lz77Parse) -> Vec<usize> {
    parse
        .phrases()
        .iter()
        .filter(|p| matches!(p.kind, PhraseKind::Literal(_)))
        .map(|p| p.start)
        .collect()
}

/// Kept positions as maximal runs `(start, end)`.
fn kept_runs(n: usize, cuts: &[usize], literals: &[usize], reach: usize) -> Vec<(usize, usize)> {
    let mut windows: Vec<(usize, usize)> = Vec::with_capacity(cuts.len() + literals.len());
    if reach > 0 {
        windows.extend(
            cuts.iter()
                .map(|&c| ((c + 1).saturating_sub(reach).max(1), (c + reach).min(n))),
        );
    }
    windows.extend(literals.iter().map(|&p| (p, p)));
    windows.sort_unstable();
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for (s, e) in windows {
        match runs.last_mut() {
            Some(last) if s <= last.1 + 1 => last.1 = last.1.max(e),
            _ => runs.push((s, e)),
        }
    }
    runs
}

impl KernelText {
    pub fn build(text: &[u8], parse: &Lz77Parse, params: KernelParams) -> Result<Self> {
        Self::build_with_rate(text, parse, params, DEFAULT_SAMPLE_RATE)
    }

    pub fn build_with_rate(
        text: &[u8],
        parse: &Lz77Parse,
        params: KernelParams,
        gap_rate: usize,
    ) -> Result<Self> {
        let n = text.len();
        params.validate(n)?;
        if parse.text_len() != n {
            return Err(Error::Structure(format!(
                "parse covers {} positions but the text has {n}",
                parse.text_len()
            )));
        }
        let cuts = parse.cuts();
        let literals = literal_positions(parse);
        let runs = kept_runs(n, &cuts, &literals, params.reach());
        let sep = params.separator_run();

        let mut bytes = Vec::new();
        let mut segments = Vec::with_capacity(runs.len());
        let mut kernel_cuts = Vec::new();
        let mut cut_idx = 0;
        for &(s, e) in &runs {
            if !segments.is_empty() {
                bytes.extend(std::iter::repeat_n(SEPARATOR, sep));
            }
            let kernel_start = bytes.len() + 1;
            bytes.extend_from_slice(&text[s - 1..e]);
            while cut_idx < cuts.len() && cuts[cut_idx] < s {
                cut_idx += 1;
            }
            let first_t_rank = cut_idx + 1;
            let first_kernel_rank = kernel_cuts.len() + 1;
            // A cut survives when both of its sides are kept in this run.
            while cut_idx < cuts.len() && cuts[cut_idx] < e {
                kernel_cuts.push(kernel_start + cuts[cut_idx] - s);
                cut_idx += 1;
            }
            segments.push(Segment {
                t_start: s,
                len: e - s + 1,
                kernel_start,
                first_t_rank,
                first_kernel_rank,
                cut_count: kernel_cuts.len() + 1 - first_kernel_rank,
            });
        }
        let mut lit_map = Vec::with_capacity(literals.len());
        let mut seg = 0;
        for &p in &literals {
            while segments[seg].t_end() < p {
                seg += 1;
            }
            let sgm = &segments[seg];
            lit_map.push((sgm.kernel_start + p - sgm.t_start, p));
        }
        Ok(KernelText {
            layout: KernelLayout {
                params,
                text_len: n,
                kernel_len: bytes.len(),
                segments,
                cuts_in_t: GapList::with_rate(&cuts, gap_rate, true)?,
                cuts_in_kernel: GapList::with_rate(&kernel_cuts, gap_rate, true)?,
                literals: lit_map,
                aliases: Vec::new(),
            },
            bytes,
        })
    }

    /// Removes every segment that repeats an earlier segment's bytes together
    /// with its cut and literal offsets, recording it as an alias instead.
    pub fn dedup(&self) -> Result<KernelText> {
        let lay = &self.layout;
        let sep = lay.params.separator_run();
        let mut canonical: HashMap<SegmentKey, usize> = HashMap::new();
        // old segment index -> new index of the segment holding its bytes
        let mut remap = vec![usize::MAX; lay.segments.len()];
        let mut bytes = Vec::new();
        let mut segments: Vec<Segment> = Vec::new();
        let mut kernel_cuts = Vec::new();
        let mut literals = Vec::new();
        let mut aliases = Vec::new();
        let mut lit_iter = lay.literals.iter().peekable();

        for (old, sg) in lay.segments.iter().enumerate() {
            let content = &self.bytes[sg.kernel_start - 1..sg.kernel_end()];
            let cut_offsets: Vec<usize> = (0..sg.cut_count)
                .map(|j| lay.cuts_in_kernel.get(sg.first_kernel_rank + j) - sg.kernel_start)
                .collect();
            let mut lit_offsets = Vec::new();
            let mut lit_t = Vec::new();
            while let Some(&&(kp, tp)) = lit_iter.peek() {
                if kp > sg.kernel_end() {
                    break;
                }
                lit_offsets.push(kp - sg.kernel_start);
                lit_t.push(tp);
                lit_iter.next();
            }
            let key = (content, cut_offsets, lit_offsets);
            if let Some(&target) = canonical.get(&key) {
                remap[old] = target;
                aliases.push(SegmentAlias {
                    segment: target,
                    target_t_start: sg.t_start,
                });
                continue;
            }
            let (content, cut_offsets, lit_offsets) = key;
            if !segments.is_empty() {
                bytes.extend(std::iter::repeat_n(SEPARATOR, sep));
            }
            let kernel_start = bytes.len() + 1;
            bytes.extend_from_slice(content);
            let first_kernel_rank = kernel_cuts.len() + 1;
            kernel_cuts.extend(cut_offsets.iter().map(|o| kernel_start + o));
            literals.extend(lit_offsets.iter().zip(&lit_t).map(|(o, &t)| (kernel_start + o, t)));
            let new_idx = segments.len();
            segments.push(Segment {
                kernel_start,
                first_kernel_rank,
                ..*sg
            });
            remap[old] = new_idx;
            canonical.insert((content, cut_offsets, lit_offsets), new_idx);
        }
        // Aliases from an earlier pass follow their segment.
        for a in &lay.aliases {
            aliases.push(SegmentAlias {
                segment: remap[a.segment],
                target_t_start: a.target_t_start,
            });
        }
        aliases.sort_unstable();
        let rate = lay.cuts_in_t.sample_rate();
        Ok(KernelText {
            layout: KernelLayout {
                params: lay.params,
                text_len: lay.text_len,
                kernel_len: bytes.len(),
                segments,
                cuts_in_t: lay.cuts_in_t.clone(),
                cuts_in_kernel: GapList::with_rate(&kernel_cuts, rate, true)?,
                literals,
                aliases,
            },
            bytes,
        })
    }

    /// Maps a kernel match to its primary match in the text, or `None` when
    /// the match crosses no phrase boundary. The interval must not contain a
    /// separator byte.
    pub fn map_kernel_match(&self, s: usize, e: usize) -> Result<Option<(usize, usize)>> {
        if s == 0 || s > e || e > self.bytes.len() {
            return Err(Error::Bounds {
                index: e,
                len: self.bytes.len(),
            });
        }
        if self.bytes[s - 1..e].contains(&SEPARATOR) {
            return Err(Error::Structure(format!(
                "kernel interval [{s}, {e}] contains a separator"
            )));
        }
        Ok(self.layout.map_kernel_match(s, e))
    }

    pub fn len(&self) -> usize {
        self.bytes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bytes.is_empty()
    }
}

impl KernelLayout {
    /// Index of the segment containing kernel position `pos`.
    pub fn segment_at(&self, pos: usize) -> usize {
        self.segments
            .partition_point(|s| s.kernel_start <= pos)
            .saturating_sub(1)
    }

    /// See [`KernelText::map_kernel_match`]; the separator check is the caller's.
    pub fn map_kernel_match(&self, s: usize, e: usize) -> Option<(usize, usize)> {
        if let Some((rank, ck)) = self.cuts_in_kernel.successor(s) {
            if ck < e {
                let sg = &self.segments[self.segment_at(ck)];
                let t_rank = sg.first_t_rank + rank - sg.first_kernel_rank;
                let ct = self.cuts_in_t.get(t_rank);
                let st = ct - (ck - s);
                return Some((st, st + (e - s)));
            }
        }
        if s == e {
            if let Ok(i) = self.literals.binary_search_by_key(&s, |&(k, _)| k) {
                let t = self.literals[i].1;
                return Some((t, t));
            }
        }
        None
    }

    /// Text starts of the removed copies of the segment holding text
    /// position `t_start` of a primary match in segment `seg`.
    pub fn alias_images(&self, seg: usize, t_start: usize) -> impl Iterator<Item = usize> + '_ {
        let from = self.aliases.partition_point(|a| a.segment < seg);
        let base = self.segments[seg].t_start;
        self.aliases[from..]
            .iter()
            .take_while(move |a| a.segment == seg)
            .map(move |a| a.target_t_start + (t_start - base))
    }

    /// Everything except the parameters and the two cut lists.
    pub(crate) fn encode_segments(&self, w: &mut Writer) {
        w.usize(self.text_len);
        w.usize(self.kernel_len);
        w.usize(self.segments.len());
        for s in &self.segments {
            w.varint(s.t_start as u64);
            w.varint(s.len as u64);
            w.varint(s.kernel_start as u64);
            w.varint(s.first_t_rank as u64);
            w.varint(s.first_kernel_rank as u64);
            w.varint(s.cut_count as u64);
        }
        w.usize(self.literals.len());
        for &(k, t) in &self.literals {
            w.varint(k as u64);
            w.varint(t as u64);
        }
        w.usize(self.aliases.len());
        for a in &self.aliases {
            w.varint(a.segment as u64);
            w.varint(a.target_t_start as u64);
        }
    }

    pub(crate) fn decode(
        params: KernelParams,
        seg: &mut Reader,
        cuts_t: GapList,
        cuts_k: GapList,
    ) -> Result<Self> {
        let text_len = seg.usize()?;
        let kernel_len = seg.usize()?;
        let v = |r: &mut Reader| r.varint().map(|x| x as usize);
        let ns = seg.usize()?;
        let mut segments = Vec::with_capacity(ns.min(kernel_len + 1));
        for _ in 0..ns {
            segments.push(Segment {
                t_start: v(seg)?,
                len: v(seg)?,
                kernel_start: v(seg)?,
                first_t_rank: v(seg)?,
                first_kernel_rank: v(seg)?,
                cut_count: v(seg)?,
            });
        }
        let nl = seg.usize()?;
        let mut literals = Vec::with_capacity(nl.min(256));
        for _ in 0..nl {
            literals.push((v(seg)?, v(seg)?));
        }
        let na = seg.usize()?;
        let mut aliases = Vec::with_capacity(na.min(ns));
        for _ in 0..na {
            aliases.push(SegmentAlias {
                segment: v(seg)?,
                target_t_start: v(seg)?,
            });
        }
        seg.finish()?;
        let consistent = segments.iter().all(|s| {
            s.len > 0
                && s.t_end() <= text_len
                && s.kernel_end() <= kernel_len
                && s.first_kernel_rank + s.cut_count <= cuts_k.len() + 1
                && s.first_t_rank + s.cut_count <= cuts_t.len() + 1
        }) && aliases.iter().all(|a| a.segment < segments.len())
            && literals.iter().all(|&(k, t)| k <= kernel_len && t <= text_len);
        if !consistent {
            return Err(seg.err("kernel layout refers outside its lists"));
        }
        Ok(KernelLayout {
            params,
            text_len,
            kernel_len,
            segments,
            cuts_in_t: cuts_t,
            cuts_in_kernel: cuts_k,
            literals,
            aliases,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lz77::parse;

    fn kernel(text: &[u8], m: usize, k: usize) -> KernelText {
        KernelText::build(text, &parse(text), KernelParams::new(m, k)).unwrap()
    }

    /// Keep rule evaluated position by position.
    fn kept_by_rule(text: &[u8], m: usize, k: usize) -> Vec<usize> {
        let p = parse(text);
        let cuts = p.cuts();
        let lits = literal_positions(&p);
        let reach = (m + k - 1) as i64;
        (1..=text.len())
            .filter(|&q| {
                lits.contains(&q)
                    || cuts.iter().any(|&c| {
                        let (c, q) = (c as i64, q as i64);
                        (q <= c && c - q < reach) || (q > c && q - c <= reach)
                    })
            })
            .collect()
    }

    fn kept_positions(kt: &KernelText) -> Vec<usize> {
        kt.layout
            .segments
            .iter()
            .flat_map(|s| s.t_start..=s.t_end())
            .collect()
    }

    #[test]
    fn running_example() {
        let kt = kernel(b"abaabab", 2, 0);
        assert_eq!(kt.bytes, b"abaa#ab");
        assert_eq!(kept_positions(&kt), vec![1, 2, 3, 4, 6, 7]);
        assert_eq!(kt.layout.cuts_in_kernel.iter().collect::<Vec<_>>(), vec![1, 2, 3, 6]);
        assert_eq!(kt.layout.cuts_in_t.iter().collect::<Vec<_>>(), vec![1, 2, 3, 6]);
        assert_eq!(kept_positions(&kt), kept_by_rule(b"abaabab", 2, 0));
    }

    #[test]
    fn long_patterns_keep_everything() {
        let text = b"abaababbab";
        let kt = kernel(text, text.len(), 0);
        assert_eq!(kt.bytes, text);
    }

    #[test]
    fn unary_text_single_byte_patterns() {
        // Only the literal survives; no match of length 1 can cross a cut.
        let kt = kernel(b"aaaa", 1, 0);
        assert_eq!(kt.bytes, b"a");
        assert_eq!(kept_positions(&kt), kept_by_rule(b"aaaa", 1, 0));
        let kt = kernel(b"aaaa", 2, 0);
        assert_eq!(kt.bytes, b"aa");
    }

    #[test]
    fn separator_blocks_have_k_plus_one_bytes() {
        let text = b"ACGTTGCAACGTAGGCTTACGATCGATTTACGGACGTTGCAACGTAGGCTTACGATCGTTTTACGGA";
        for k in 0..3 {
            let kt = kernel(text, 3, k);
            for w in kt.layout.segments.windows(2) {
                let gap = &kt.bytes[w[0].kernel_end()..w[1].kernel_start - 1];
                assert_eq!(gap, vec![SEPARATOR; k + 1].as_slice());
            }
            assert_eq!(kept_positions(&kt), kept_by_rule(text, 3, k));
        }
    }

    #[test]
    fn map_matches() {
        let kt = kernel(b"abaabab", 2, 0);
        assert_eq!(kt.map_kernel_match(1, 2).unwrap(), Some((1, 2)));
        assert_eq!(kt.map_kernel_match(6, 7).unwrap(), Some((6, 7)));
        assert_eq!(kt.map_kernel_match(3, 4).unwrap(), Some((3, 4)));
        // A lone copy position crosses nothing.
        assert_eq!(kt.map_kernel_match(4, 4).unwrap(), None);
        // Literals at 1 and 2 are primary on their own.
        assert_eq!(kt.map_kernel_match(2, 2).unwrap(), Some((2, 2)));
        assert!(kt.map_kernel_match(4, 6).is_err());
    }

    #[test]
    fn position_arithmetic_law() {
        let text = b"GATTACAGATTACCGATTACAGGATTACATTTTGATTACA";
        for (m, k) in [(2, 0), (3, 1), (5, 0)] {
            let kt = kernel(text, m, k);
            let lay = &kt.layout;
            let reach = m + k - 1;
            for sg in &lay.segments {
                for j in 0..sg.cut_count {
                    let ck = lay.cuts_in_kernel.get(sg.first_kernel_rank + j);
                    let ct = lay.cuts_in_t.get(sg.first_t_rank + j);
                    for d in -(reach as i64) + 1..=reach as i64 {
                        let tp = ct as i64 + d;
                        if tp < 1 || tp > text.len() as i64 {
                            continue;
                        }
                        let kp = (ck as i64 + d) as usize;
                        assert_eq!(kt.bytes[kp - 1], text[tp as usize - 1]);
                    }
                }
            }
        }
    }

    #[test]
    fn dedup_removes_repeated_segments() {
        // "acgt" surrounded by long unique context repeats as a kept segment.
        let text = b"acgtTTTTTTTTTTacgtTTTTTTTTTT";
        let kt = kernel(text, 2, 0);
        let dd = kt.dedup().unwrap();
        assert!(dd.len() <= kt.len());
        // Dedup of a kernel without repeats changes nothing.
        let plain = kernel(b"abaabab", 2, 0);
        assert_eq!(plain.dedup().unwrap(), plain);
    }

    #[test]
    fn dedup_exact_duplicate_segment() {
        let mut kt = kernel(b"abaabab", 2, 0);
        // Hand-made layout: two identical segments "acgt".
        kt.bytes = b"acgt#acgt".to_vec();
        kt.layout.kernel_len = 9;
        kt.layout.text_len = 30;
        kt.layout.segments = vec![
            Segment { t_start: 1, len: 4, kernel_start: 1, first_t_rank: 1, first_kernel_rank: 1, cut_count: 1 },
            Segment { t_start: 20, len: 4, kernel_start: 6, first_t_rank: 2, first_kernel_rank: 2, cut_count: 1 },
        ];
        kt.layout.cuts_in_t = GapList::new(&[2, 21]).unwrap();
        kt.layout.cuts_in_kernel = GapList::new(&[2, 7]).unwrap();
        kt.layout.literals = vec![];
        let dd = kt.dedup().unwrap();
        assert_eq!(dd.bytes, b"acgt");
        assert_eq!(dd.layout.aliases, vec![SegmentAlias { segment: 0, target_t_start: 20 }]);
        assert_eq!(dd.layout.alias_images(0, 2).collect::<Vec<_>>(), vec![21]);
    }

    #[test]
    fn parameter_errors() {
        let p = parse(b"abc");
        assert!(KernelText::build(b"abc", &p, KernelParams::new(0, 0)).is_err());
        assert!(KernelText::build(b"abc", &p, KernelParams::new(3, 1)).is_err());
    }
}
