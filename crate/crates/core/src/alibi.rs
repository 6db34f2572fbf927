//! Alignment-based index.
//!
//! Every genome comes with an alignment script against a reference. Genome
//! characters within `M + K - 1` of an alignment difference are marked; the
//! distinct marked substrings are indexed together with the reference, while
//! unmarked stretches are recorded as copies of reference intervals.

use std::collections::HashMap;

use crate::codec::{get_varint, put_varint, unzigzag, zigzag, Reader, Writer};
use crate::error::{Error, Result};
use crate::grid::report_covering;
use crate::hybrid::IndexOptions;
use crate::kernel::KernelParams;
use crate::seq::{AlignmentScript, EditOp, GenomeLayout, Occurrence, SEPARATOR};
use crate::succinct::{ApproxHit, GapList, IntVector, RangeMaxIndex, SelfIndex};

/// A genome stretch `[genome_start, genome_end]` equal to the reference from `ref_start` on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnmarkedRegion {
    pub genome_start: usize,
    pub genome_end: usize,
    pub ref_start: usize,
}

impl UnmarkedRegion {
    pub fn len(&self) -> usize {
        self.genome_end + 1 - self.genome_start
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn ref_end(&self) -> usize {
        self.ref_start + self.len() - 1
    }

    pub fn contains(&self, start: usize, end: usize) -> bool {
        self.genome_start <= start && end <= self.genome_end
    }
}

/// Marked intervals and unmarked regions of one genome, in genome coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedRegions {
    pub genome_len: usize,
    pub marked: Vec<(usize, usize)>,
    pub unmarked: Vec<UnmarkedRegion>,
    /// Maximal runs of matching characters, contiguous in both sequences.
    blocks: Vec<UnmarkedRegion>,
}

fn push_block(blocks: &mut Vec<UnmarkedRegion>, g: usize, len: usize, rp: usize) {
    if let Some(last) = blocks.last_mut() {
        if last.genome_end + 1 == g && last.ref_end() + 1 == rp {
            last.genome_end += len;
            return;
        }
    }
    blocks.push(UnmarkedRegion {
        genome_start: g,
        genome_end: g + len - 1,
        ref_start: rp,
    });
}

impl MarkedRegions {
    /// The reference itself: one marked interval covering all of it.
    pub fn reference(len: usize) -> Self {
        MarkedRegions {
            genome_len: len,
            marked: vec![(1, len)],
            unmarked: Vec::new(),
            blocks: Vec::new(),
        }
    }

    fn marked_run_containing(&self, pos: usize) -> Option<(usize, usize)> {
        let i = self.marked.partition_point(|&(s, _)| s <= pos);
        (i > 0 && self.marked[i - 1].1 >= pos).then(|| self.marked[i - 1])
    }

    fn block_of(&self, pos: usize) -> &UnmarkedRegion {
        let i = self.blocks.partition_point(|b| b.genome_start <= pos);
        &self.blocks[i - 1]
    }

    /// Grows each unmarked region by up to `M + K - 1` characters into the
    /// marked runs on either side, never past the matching block it lies in
    /// nor past the far end of the neighbouring marked run.
    pub fn extend_unmarked(&self, params: KernelParams) -> MarkedRegions {
        let r = params.reach();
        let unmarked = self
            .unmarked
            .iter()
            .map(|u| {
                let block = self.block_of(u.genome_start);
                let left = if u.genome_start > block.genome_start {
                    let (s, e) = self.marked_run_containing(u.genome_start - 1).unwrap();
                    r.min(e + 1 - s).min(u.genome_start - block.genome_start)
                } else {
                    0
                };
                let right = if u.genome_end < block.genome_end {
                    let (s, e) = self.marked_run_containing(u.genome_end + 1).unwrap();
                    r.min(e + 1 - s).min(block.genome_end - u.genome_end)
                } else {
                    0
                };
                UnmarkedRegion {
                    genome_start: u.genome_start - left,
                    genome_end: u.genome_end + right,
                    ref_start: u.ref_start - left,
                }
            })
            .collect();
        MarkedRegions {
            unmarked,
            ..self.clone()
        }
    }
}

/// Marks the genome described by `script`. Difference characters are
/// substituted and inserted characters, each marking everything within
/// `M + K - 1`; a deletion between genome positions `c` and `c + 1` marks the
/// windows of every length-`M + K` string crossing that junction.
pub fn mark(reference: &[u8], script: &AlignmentScript, params: KernelParams) -> Result<MarkedRegions> {
    if params.max_pattern_len == 0 {
        return Err(Error::param("M must be at least 1"));
    }
    let genome_len = script.apply(reference)?.len();
    let r = params.reach() as i64;
    let mut zones: Vec<(i64, i64)> = Vec::new();
    let mut blocks = Vec::new();
    let (mut g, mut rp) = (1usize, 1usize);
    for op in &script.ops {
        match op {
            EditOp::Match(n) => {
                if *n > 0 {
                    push_block(&mut blocks, g, *n, rp);
                }
                g += n;
                rp += n;
            }
            EditOp::Subst(b) | EditOp::Ins(b) => {
                zones.push((g as i64 - r, (g + b.len() - 1) as i64 + r));
                g += b.len();
                if matches!(op, EditOp::Subst(_)) {
                    rp += b.len();
                }
            }
            EditOp::Del(n) => {
                if r > 0 {
                    let c = g as i64 - 1;
                    zones.push((c - r + 1, c + r));
                }
                rp += n;
            }
        }
    }
    zones.sort_unstable();
    let mut marked: Vec<(usize, usize)> = Vec::new();
    for (s, e) in zones {
        let (s, e) = (s.max(1), e.min(genome_len as i64));
        if s > e {
            continue;
        }
        let (s, e) = (s as usize, e as usize);
        match marked.last_mut() {
            Some(last) if s <= last.1 + 1 => last.1 = last.1.max(e),
            _ => marked.push((s, e)),
        }
    }
    let mut unmarked = Vec::new();
    let mut mi = 0;
    for b in &blocks {
        let mut cur = b.genome_start;
        while mi < marked.len() && marked[mi].1 < cur {
            mi += 1;
        }
        let mut j = mi;
        while cur <= b.genome_end {
            let stop = if j < marked.len() && marked[j].0 <= b.genome_end {
                marked[j].0
            } else {
                b.genome_end + 1
            };
            if stop > cur {
                unmarked.push(UnmarkedRegion {
                    genome_start: cur,
                    genome_end: stop - 1,
                    ref_start: b.ref_start + (cur - b.genome_start),
                });
            }
            if stop > b.genome_end {
                break;
            }
            cur = marked[j].1 + 1;
            j += 1;
        }
    }
    Ok(MarkedRegions {
        genome_len,
        marked,
        unmarked,
        blocks,
    })
}

/// Reference position aligned to each of the sorted genome positions. An
/// inserted character projects to the next reference position.
fn project_to_reference(script: &AlignmentScript, positions: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(positions.len());
    let (mut g, mut rp) = (1usize, 1usize);
    let mut it = positions.iter().peekable();
    for op in &script.ops {
        let (glen, rlen) = (op.genome_len(), op.ref_len());
        while let Some(&&x) = it.peek() {
            if x >= g + glen {
                break;
            }
            out.push(if matches!(op, EditOp::Ins(_)) { rp } else { rp + (x - g) });
            it.next();
        }
        g += glen;
        rp += rlen;
    }
    out
}

/// Where a marked substring occurs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pointer {
    pub genome: usize,
    pub genome_start: usize,
    pub ref_projected_start: usize,
}

/// Encodes pointers sorted by genome: genome deltas, zigzag deltas of the
/// projected start, and the zigzag offset of the genome start from it.
pub fn compress_pointers(pointers: &[Pointer]) -> Vec<u8> {
    let mut out = Vec::new();
    put_varint(&mut out, pointers.len() as u64);
    let (mut genome, mut proj) = (0usize, 0i64);
    for p in pointers {
        put_varint(&mut out, (p.genome - genome) as u64);
        put_varint(&mut out, zigzag(p.ref_projected_start as i64 - proj));
        put_varint(&mut out, zigzag(p.genome_start as i64 - p.ref_projected_start as i64));
        genome = p.genome;
        proj = p.ref_projected_start as i64;
    }
    out
}

pub fn decompress_pointers(block: &[u8]) -> Result<Vec<Pointer>> {
    let bad = || Error::format("pointers", "truncated pointer block");
    let mut pos = 0;
    let count = get_varint(block, &mut pos).ok_or_else(bad)? as usize;
    let mut out = Vec::with_capacity(count.min(block.len()));
    let (mut genome, mut proj) = (0usize, 0i64);
    for _ in 0..count {
        genome += get_varint(block, &mut pos).ok_or_else(bad)? as usize;
        proj += unzigzag(get_varint(block, &mut pos).ok_or_else(bad)?);
        let start = proj + unzigzag(get_varint(block, &mut pos).ok_or_else(bad)?);
        if proj < 0 || start < 1 {
            return Err(Error::format("pointers", "negative position in pointer block"));
        }
        out.push(Pointer {
            genome,
            genome_start: start as usize,
            ref_projected_start: proj as usize,
        });
    }
    if pos != block.len() {
        return Err(Error::format("pointers", "trailing bytes in pointer block"));
    }
    Ok(out)
}

/// One distinct marked substring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub kernel_start: usize,
    pub len: usize,
    pub pointers: Vec<u8>,
}

/// Markers `(a, b)` in reference coordinates with satellite data
/// `(genome, delta)`: the genome holds `reference[a..=b]` at `a + delta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionGrid {
    starts: GapList,
    ends: IntVector,
    end_rmq: Option<RangeMaxIndex>,
    genome: IntVector,
    delta: IntVector,
}

/// A marker found by [`RegionGrid::covering`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Marker {
    pub a: usize,
    pub b: usize,
    pub genome: usize,
    pub delta: i64,
}

impl RegionGrid {
    pub fn build(markers: &mut [Marker], gap_rate: usize) -> Result<Self> {
        markers.sort_unstable();
        let ends: Vec<u64> = markers.iter().map(|m| m.b as u64).collect();
        Ok(RegionGrid {
            starts: GapList::with_rate(&markers.iter().map(|m| m.a).collect::<Vec<_>>(), gap_rate, false)?,
            end_rmq: if ends.is_empty() { None } else { Some(RangeMaxIndex::new(&ends)?) },
            ends: IntVector::from_slice(&ends),
            genome: IntVector::from_slice(&markers.iter().map(|m| m.genome as u64).collect::<Vec<_>>()),
            delta: IntVector::from_slice(&markers.iter().map(|m| zigzag(m.delta)).collect::<Vec<_>>()),
        })
    }

    pub fn len(&self) -> usize {
        self.starts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.starts.is_empty()
    }

    pub fn marker(&self, j: usize) -> Marker {
        Marker {
            a: self.starts.get(j + 1),
            b: self.ends.get(j) as usize,
            genome: self.genome.get(j) as usize,
            delta: unzigzag(self.delta.get(j)),
        }
    }

    pub fn markers(&self) -> Vec<Marker> {
        (0..self.len()).map(|j| self.marker(j)).collect()
    }

    /// Markers with `a <= l` and `r <= b`.
    pub fn covering(&self, l: usize, r: usize) -> Vec<Marker> {
        let mut out = Vec::new();
        report_covering(&self.starts, self.end_rmq.as_ref(), l, |j| {
            let hit = self.ends.get(j) as usize >= r;
            if hit {
                out.push(self.marker(j));
            }
            hit
        });
        out
    }

    pub(crate) fn encode(&self, w: &mut Writer) {
        self.starts.encode(w);
        self.ends.encode(w);
        self.genome.encode(w);
        self.delta.encode(w);
        match &self.end_rmq {
            Some(q) => {
                w.u8(1);
                q.encode(w);
            }
            None => w.u8(0),
        }
    }

    pub(crate) fn decode(r: &mut Reader) -> Result<Self> {
        let starts = GapList::decode(r)?;
        let ends = IntVector::decode(r)?;
        let genome = IntVector::decode(r)?;
        let delta = IntVector::decode(r)?;
        let end_rmq = match r.u8()? {
            0 => None,
            1 => Some(RangeMaxIndex::decode(r)?),
            _ => return Err(r.err("bad presence flag")),
        };
        r.finish()?;
        let n = starts.len();
        if ends.len() != n || genome.len() != n || delta.len() != n || end_rmq.as_ref().map_or(0, |q| q.len()) != n {
            return Err(r.err("grid component lengths disagree"));
        }
        Ok(RegionGrid {
            starts,
            ends,
            end_rmq,
            genome,
            delta,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlibiStats {
    pub reference_len: usize,
    pub kernel_len: usize,
    pub marked_substrings: usize,
    pub pointers: usize,
    pub markers: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlibiIndex {
    pub(crate) genomes: GenomeLayout,
    pub(crate) params: KernelParams,
    pub(crate) reference: usize,
    pub(crate) include_reference: bool,
    pub(crate) catalog: Vec<CatalogEntry>,
    pub(crate) fm: SelfIndex,
    pub(crate) grid: RegionGrid,
}

/// Build inputs besides the genomes themselves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlibiOptions {
    pub index: IndexOptions,
    /// Report matches inside the reference genome.
    pub include_reference: bool,
}

impl Default for AlibiOptions {
    fn default() -> Self {
        AlibiOptions {
            index: IndexOptions::default(),
            include_reference: true,
        }
    }
}

/// The per-genome marking used by [`AlibiIndex::build`], exposed for tests
/// and tools. Entry `i` belongs to genome `i`; the reference gets
/// [`MarkedRegions::reference`].
pub fn mark_collection(
    genomes: &[(String, Vec<u8>)],
    scripts: &[AlignmentScript],
    reference: usize,
    params: KernelParams,
) -> Result<Vec<MarkedRegions>> {
    let refseq = &genomes[reference].1;
    let by_id: HashMap<&str, &AlignmentScript> = scripts.iter().map(|s| (s.genome_id.as_str(), s)).collect();
    genomes
        .iter()
        .enumerate()
        .map(|(i, (id, seq))| {
            if i == reference {
                return Ok(MarkedRegions::reference(seq.len()));
            }
            let script = by_id.get(id.as_str()).ok_or_else(|| Error::Validation {
                genome: id.clone(),
                msg: "no alignment script".to_string(),
            })?;
            let aligned = script.apply(refseq).map_err(|e| Error::Validation {
                genome: id.clone(),
                msg: e.to_string(),
            })?;
            if &aligned != seq {
                return Err(Error::Validation {
                    genome: id.clone(),
                    msg: "alignment script does not reproduce the genome".to_string(),
                });
            }
            Ok(mark(refseq, script, params)?.extend_unmarked(params))
        })
        .collect()
}

impl AlibiIndex {
    /// `reference` names the reference genome; the first genome by default.
    pub fn build(
        genomes: &[(String, Vec<u8>)],
        scripts: &[AlignmentScript],
        reference: Option<&str>,
        params: KernelParams,
        options: AlibiOptions,
    ) -> Result<Self> {
        if genomes.is_empty() {
            return Err(Error::EmptyCollection);
        }
        let layout = GenomeLayout::from_lengths(&genomes.iter().map(|(id, g)| (id.as_str(), g.len())).collect::<Vec<_>>())?;
        for (id, g) in genomes {
            if g.is_empty() {
                return Err(Error::param(format!("genome {id} is empty")));
            }
            if g.contains(&SEPARATOR) {
                return Err(Error::ReservedByte {
                    context: format!("genome {id}"),
                });
            }
        }
        let ref_idx = match reference {
            None => 0,
            Some(id) => layout
                .index_of(id)
                .ok_or_else(|| Error::param(format!("reference genome {id} not in the collection")))?,
        };
        let refseq = &genomes[ref_idx].1;
        params.validate(refseq.len())?;
        let regions = mark_collection(genomes, scripts, ref_idx, params)?;

        let mut by_content: HashMap<&[u8], usize> = HashMap::new();
        let mut entries: Vec<(&[u8], Vec<Pointer>)> = Vec::new();
        let mut markers = Vec::new();
        let by_id: HashMap<&str, &AlignmentScript> = scripts.iter().map(|s| (s.genome_id.as_str(), s)).collect();
        for (gi, reg) in regions.iter().enumerate() {
            if gi == ref_idx {
                continue;
            }
            let seq = &genomes[gi].1;
            let starts: Vec<usize> = reg.marked.iter().map(|m| m.0).collect();
            let proj = project_to_reference(by_id[genomes[gi].0.as_str()], &starts);
            for (&(s, e), &p) in reg.marked.iter().zip(&proj) {
                let content = &seq[s - 1..e];
                let idx = *by_content.entry(content).or_insert_with(|| {
                    entries.push((content, Vec::new()));
                    entries.len() - 1
                });
                entries[idx].1.push(Pointer {
                    genome: gi,
                    genome_start: s,
                    ref_projected_start: p,
                });
            }
            markers.extend(reg.unmarked.iter().map(|u| Marker {
                a: u.ref_start,
                b: u.ref_end(),
                genome: gi,
                delta: u.genome_start as i64 - u.ref_start as i64,
            }));
        }

        let sep = params.separator_run();
        let mut kernel = refseq.clone();
        let mut catalog = Vec::with_capacity(entries.len());
        for (content, pointers) in &entries {
            kernel.extend(std::iter::repeat_n(SEPARATOR, sep));
            catalog.push(CatalogEntry {
                kernel_start: kernel.len() + 1,
                len: content.len(),
                pointers: compress_pointers(pointers),
            });
            kernel.extend_from_slice(content);
        }
        Ok(AlibiIndex {
            genomes: layout,
            params,
            reference: ref_idx,
            include_reference: options.include_reference,
            catalog,
            fm: SelfIndex::with_rate(&kernel, options.index.locate_rate)?,
            grid: RegionGrid::build(&mut markers, options.index.gap_sample_rate)?,
        })
    }

    pub fn params(&self) -> KernelParams {
        self.params
    }

    pub fn genomes(&self) -> &GenomeLayout {
        &self.genomes
    }

    pub fn reference(&self) -> usize {
        self.reference
    }

    pub fn reference_len(&self) -> usize {
        self.genomes.spans()[self.reference].len
    }

    pub fn include_reference(&self) -> bool {
        self.include_reference
    }

    pub fn set_include_reference(&mut self, on: bool) {
        self.include_reference = on;
    }

    pub fn grid(&self) -> &RegionGrid {
        &self.grid
    }

    /// The distinct marked substrings, in kernel order.
    pub fn marked_substrings(&self) -> Result<Vec<Vec<u8>>> {
        self.catalog
            .iter()
            .map(|c| self.fm.extract(c.kernel_start, c.len))
            .collect()
    }

    pub fn pointers(&self, entry: usize) -> Result<Vec<Pointer>> {
        decompress_pointers(&self.catalog[entry].pointers)
    }

    pub fn stats(&self) -> AlibiStats {
        let pointers = self
            .catalog
            .iter()
            .map(|c| {
                let mut pos = 0;
                get_varint(&c.pointers, &mut pos).unwrap_or(0) as usize
            })
            .sum();
        AlibiStats {
            reference_len: self.reference_len(),
            kernel_len: self.fm.len(),
            marked_substrings: self.catalog.len(),
            pointers,
            markers: self.grid.len(),
        }
    }

    /// User-visible primary matches plus the reference hits that seed
    /// secondary reporting.
    fn primary_raw(&self, pattern: &[u8], k: usize) -> Result<(Vec<Occurrence>, Vec<ApproxHit>)> {
        self.params.check_query(pattern, k)?;
        let r = self.params.reach();
        let ref_len = self.reference_len();
        let mut out = Vec::new();
        let mut ref_hits = Vec::new();
        for h in self.fm.bounded_edit_search_within(pattern, k, SEPARATOR)? {
            let len = h.end + 1 - h.start;
            if h.end <= ref_len {
                if self.include_reference {
                    out.push(Occurrence::new(self.genomes.to_global(self.reference, h.start), len, h.dist));
                }
                ref_hits.push(h);
                continue;
            }
            let e = self.catalog.partition_point(|c| c.kernel_start <= h.start) - 1;
            let entry = &self.catalog[e];
            let off = h.start - entry.kernel_start;
            for p in decompress_pointers(&entry.pointers)? {
                let run_end = p.genome_start + entry.len - 1;
                let (s, t) = (p.genome_start + off, p.genome_start + off + len - 1);
                let margin = r.min(entry.len);
                // Inside a margin next to an unmarked region: secondary.
                if p.genome_start > 1 && t < p.genome_start + margin {
                    continue;
                }
                if run_end < self.genomes.spans()[p.genome].len && s + margin > run_end {
                    continue;
                }
                out.push(Occurrence::new(self.genomes.to_global(p.genome, s), len, h.dist));
            }
        }
        Ok((out, ref_hits))
    }

    pub fn find_primary(&self, pattern: &[u8], k: usize) -> Result<Vec<Occurrence>> {
        let mut out = self.primary_raw(pattern, k)?.0;
        out.sort_unstable();
        Ok(out)
    }

    /// Every match in discovery order.
    pub fn find_all_unsorted(&self, pattern: &[u8], k: usize) -> Result<Vec<Occurrence>> {
        let (mut out, ref_hits) = self.primary_raw(pattern, k)?;
        for h in ref_hits {
            let len = h.end + 1 - h.start;
            for m in self.grid.covering(h.start, h.end) {
                let local = (h.start as i64 + m.delta) as usize;
                out.push(Occurrence::new(self.genomes.to_global(m.genome, local), len, h.dist));
            }
        }
        Ok(out)
    }

    pub fn find_all(&self, pattern: &[u8], k: usize) -> Result<Vec<Occurrence>> {
        let mut out = self.find_all_unsorted(pattern, k)?;
        out.sort_unstable();
        Ok(out)
    }

    pub fn project(&self, occ: &Occurrence) -> Result<(usize, usize)> {
        self.genomes.project_index(occ.global_start, occ.length)
    }
}
