//! FM-index over a byte string.
//!
//! Rows of the BWT matrix are numbered `0..=n`; row 0 is the empty suffix
//! (the implicit terminator). Symbol code 0 is the terminator and codes
//! `1..=sigma` are the distinct text bytes in order.

use super::bits::RankBitVec;
use super::intvec::IntVector;
use super::sa::suffix_array;
use crate::codec::{Reader, Writer};
use crate::error::{Error, Result};
use crate::seq::SEPARATOR;

pub const DEFAULT_LOCATE_RATE: usize = 32;
const OCC_BLOCK: usize = 64;

/// Approximate match of a pattern in the indexed string, 1-based inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ApproxHit {
    pub start: usize,
    pub end: usize,
    pub dist: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfIndex {
    n: usize,
    /// `symbols[c]` is the byte of code `c + 1`.
    symbols: Vec<u8>,
    code_of: [u8; 256],
    /// `c_table[c]` = number of symbols smaller than code `c` (terminator included).
    c_table: Vec<usize>,
    bwt: Vec<u8>,
    /// Cumulative symbol counts before every `OCC_BLOCK` rows, flattened by
    /// `block * (sigma + 1) + code`.
    occ: Vec<u32>,
    rate: usize,
    sampled_rows: RankBitVec,
    sa_samples: IntVector,
    /// `isa_samples[j]` = row of the suffix starting at `j * rate`; the last
    /// entry is the terminator row for position `n`.
    isa_samples: IntVector,
}

impl SelfIndex {
    pub fn new(text: &[u8]) -> Result<Self> {
        Self::with_rate(text, DEFAULT_LOCATE_RATE)
    }

    pub fn with_rate(text: &[u8], rate: usize) -> Result<Self> {
        if text.is_empty() {
            return Err(Error::param("cannot index an empty string"));
        }
        if rate == 0 {
            return Err(Error::param("locate sample rate must be positive"));
        }
        let n = text.len();
        let mut present = [false; 256];
        for &b in text {
            present[b as usize] = true;
        }
        let symbols: Vec<u8> = (0..=255u8).filter(|&b| present[b as usize]).collect();
        if symbols.len() > 255 {
            return Err(Error::param("alphabet of 256 bytes leaves no terminator code"));
        }
        let mut code_of = [0u8; 256];
        for (i, &b) in symbols.iter().enumerate() {
            code_of[b as usize] = i as u8 + 1;
        }
        let sigma = symbols.len();

        let sa = suffix_array(text);
        // Row 0 is the terminator suffix (position n).
        let row_pos = |row: usize| if row == 0 { n } else { sa[row - 1] as usize };

        let mut bwt = Vec::with_capacity(n + 1);
        let mut counts = vec![0usize; sigma + 1];
        let mut occ = Vec::with_capacity(((n + 1) / OCC_BLOCK + 1) * (sigma + 1));
        let mut sampled = Vec::with_capacity(n + 1);
        let mut sa_samples = Vec::new();
        let mut isa = vec![0u64; n / rate + 2];
        for row in 0..=n {
            if row % OCC_BLOCK == 0 {
                occ.extend(counts.iter().map(|&c| c as u32));
            }
            let p = row_pos(row);
            let sym = if p == 0 { 0 } else { code_of[text[p - 1] as usize] };
            bwt.push(sym);
            counts[sym as usize] += 1;
            let is_sample = p % rate == 0;
            sampled.push(is_sample);
            if is_sample {
                sa_samples.push(p as u64);
                isa[p / rate] = row as u64;
            }
        }
        // Position n gets its own slot when it is not a multiple of the rate.
        let last = isa.len() - 1;
        isa[last] = 0;
        if n.is_multiple_of(rate) {
            isa.truncate(last);
        }
        occ.extend(counts.iter().map(|&c| c as u32));

        let mut c_table = vec![0usize; sigma + 2];
        for c in 0..=sigma {
            c_table[c + 1] = c_table[c] + counts[c];
        }
        Ok(SelfIndex {
            n,
            symbols,
            code_of,
            c_table,
            bwt,
            occ,
            rate,
            sampled_rows: RankBitVec::from_bools(sampled),
            sa_samples: IntVector::from_slice(&sa_samples),
            isa_samples: IntVector::from_slice(&isa),
        })
    }

    /// Length of the indexed string.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn sigma(&self) -> usize {
        self.symbols.len()
    }

    /// Occurrences of `code` in `bwt[0..row)`.
    #[inline]
    fn rank(&self, code: u8, row: usize) -> usize {
        let block = row / OCC_BLOCK;
        let base = self.occ[block * (self.sigma() + 1) + code as usize] as usize;
        base + self.bwt[block * OCC_BLOCK..row]
            .iter()
            .filter(|&&b| b == code)
            .count()
    }

    #[inline]
    fn lf(&self, row: usize) -> usize {
        let c = self.bwt[row];
        self.c_table[c as usize] + self.rank(c, row)
    }

    #[inline]
    fn extend(&self, code: u8, lo: usize, hi: usize) -> (usize, usize) {
        let base = self.c_table[code as usize];
        (base + self.rank(code, lo), base + self.rank(code, hi))
    }

    /// 0-based text position of the suffix at `row`.
    fn row_to_pos(&self, mut row: usize) -> usize {
        let mut steps = 0;
        loop {
            if self.sampled_rows.get(row) {
                return self.sa_samples.get(self.sampled_rows.rank1(row)) as usize + steps;
            }
            if self.bwt[row] == 0 {
                return steps;
            }
            row = self.lf(row);
            steps += 1;
        }
    }

    fn check_pattern(pattern: &[u8]) -> Result<()> {
        if pattern.is_empty() {
            return Err(Error::param("empty pattern"));
        }
        if pattern.contains(&SEPARATOR) {
            return Err(Error::ReservedByte {
                context: "pattern".to_string(),
            });
        }
        Ok(())
    }

    /// BWT row range `[lo, hi)` of suffixes prefixed by `pattern`.
    fn backward_search(&self, pattern: &[u8]) -> (usize, usize) {
        let (mut lo, mut hi) = (0, self.n + 1);
        for &b in pattern.iter().rev() {
            let code = self.code_of[b as usize];
            if code == 0 {
                return (0, 0);
            }
            (lo, hi) = self.extend(code, lo, hi);
            if lo >= hi {
                return (0, 0);
            }
        }
        (lo, hi)
    }

    pub fn count(&self, pattern: &[u8]) -> Result<usize> {
        Self::check_pattern(pattern)?;
        let (lo, hi) = self.backward_search(pattern);
        Ok(hi - lo)
    }

    /// Sorted 1-based start positions of exact occurrences.
    pub fn locate(&self, pattern: &[u8]) -> Result<Vec<usize>> {
        Self::check_pattern(pattern)?;
        let (lo, hi) = self.backward_search(pattern);
        let mut out: Vec<usize> = (lo..hi).map(|r| self.row_to_pos(r) + 1).collect();
        out.sort_unstable();
        Ok(out)
    }

    /// The substring of length `len` starting at 1-based `start`.
    pub fn extract(&self, start: usize, len: usize) -> Result<Vec<u8>> {
        if start == 0 || start + len > self.n + 1 {
            return Err(Error::Bounds {
                index: start + len.max(1) - 1,
                len: self.n,
            });
        }
        let (a, b) = (start - 1, start - 1 + len);
        let slot = b.div_ceil(self.rate);
        let (mut row, mut pos) = if slot * self.rate <= self.n {
            (self.isa_samples.get(slot) as usize, slot * self.rate)
        } else {
            (self.isa_samples.get(self.isa_samples.len() - 1) as usize, self.n)
        };
        let mut out = Vec::with_capacity(len);
        while pos > a {
            let code = self.bwt[row];
            if pos <= b {
                out.push(self.symbols[code as usize - 1]);
            }
            row = self.lf(row);
            pos -= 1;
        }
        out.reverse();
        Ok(out)
    }

    /// Every interval of the indexed string within edit distance `k` of
    /// `pattern`, each with its minimal distance, sorted by `(start, end)`.
    /// The separator byte never matches a pattern byte.
    pub fn bounded_edit_search(&self, pattern: &[u8], k: usize) -> Result<Vec<ApproxHit>> {
        self.search(pattern, k, None)
    }

    /// As [`bounded_edit_search`](Self::bounded_edit_search), but no reported
    /// interval contains `barrier`.
    pub fn bounded_edit_search_within(
        &self,
        pattern: &[u8],
        k: usize,
        barrier: u8,
    ) -> Result<Vec<ApproxHit>> {
        self.search(pattern, k, Some(self.code_of[barrier as usize]).filter(|&c| c != 0))
    }

    fn search(&self, pattern: &[u8], k: usize, barrier: Option<u8>) -> Result<Vec<ApproxHit>> {
        Self::check_pattern(pattern)?;
        let m = pattern.len();
        if k == 0 {
            if barrier.is_some_and(|b| pattern.iter().any(|&c| self.code_of[c as usize] == b)) {
                return Ok(Vec::new());
            }
            return Ok(self
                .locate(pattern)?
                .into_iter()
                .map(|start| ApproxHit { start, end: start + m - 1, dist: 0 })
                .collect());
        }
        // col[i] = edit distance between pattern[i..] and the current string.
        let col: Vec<usize> = (0..=m).map(|i| m - i).collect();
        let mut hits = Vec::new();
        let mut search = EditSearch {
            index: self,
            pattern,
            k,
            barrier,
            max_depth: m + k,
            hits: &mut hits,
        };
        search.descend(0, self.n + 1, 0, &col);
        hits.sort_unstable();
        Ok(hits)
    }

    pub fn encode(&self, w: &mut Writer) {
        w.usize(self.n);
        w.usize(self.rate);
        w.bytes(&self.symbols);
        w.bytes(&self.bwt);
        w.u32s(&self.occ);
        self.sampled_rows.encode(w);
        self.sa_samples.encode(w);
        self.isa_samples.encode(w);
    }

    pub fn decode(r: &mut Reader) -> Result<Self> {
        let n = r.usize()?;
        let rate = r.usize()?;
        let symbols = r.bytes()?;
        let bwt = r.bytes()?;
        let occ = r.u32s()?;
        let sampled_rows = RankBitVec::decode(r)?;
        let sa_samples = IntVector::decode(r)?;
        let isa_samples = IntVector::decode(r)?;
        let sigma = symbols.len();
        if rate == 0
            || sigma == 0
            || sigma > 255
            || bwt.len() != n + 1
            || occ.len() != (n / OCC_BLOCK + 2) * (sigma + 1)
            || sampled_rows.len() != n + 1
            || sampled_rows.count_ones() != sa_samples.len()
            || isa_samples.len() != n / rate + 1 + usize::from(n % rate != 0)
            || bwt.iter().any(|&c| c as usize > sigma)
        {
            return Err(r.err("self-index components are inconsistent"));
        }
        let mut code_of = [0u8; 256];
        for (i, &b) in symbols.iter().enumerate() {
            code_of[b as usize] = i as u8 + 1;
        }
        let mut counts = vec![0usize; sigma + 1];
        for &c in &bwt {
            counts[c as usize] += 1;
        }
        let mut c_table = vec![0usize; sigma + 2];
        for c in 0..=sigma {
            c_table[c + 1] = c_table[c] + counts[c];
        }
        Ok(SelfIndex {
            n,
            symbols,
            code_of,
            c_table,
            bwt,
            occ,
            rate,
            sampled_rows,
            sa_samples,
            isa_samples,
        })
    }
}

/// Depth-first backtracking over backward-search extensions. The current
/// string grows to the left; `col` holds the edit distance of every pattern
/// suffix against it.
struct EditSearch<'a> {
    index: &'a SelfIndex,
    pattern: &'a [u8],
    k: usize,
    barrier: Option<u8>,
    max_depth: usize,
    hits: &'a mut Vec<ApproxHit>,
}

impl EditSearch<'_> {
    fn descend(&mut self, lo: usize, hi: usize, depth: usize, col: &[usize]) {
        let m = self.pattern.len();
        let mut next = vec![0usize; m + 1];
        for code in 1..=self.index.sigma() as u8 {
            if Some(code) == self.barrier {
                continue;
            }
            let (nlo, nhi) = self.index.extend(code, lo, hi);
            if nlo >= nhi {
                continue;
            }
            let byte = self.index.symbols[code as usize - 1];
            next[m] = depth + 1;
            let mut best = next[m];
            for i in (0..m).rev() {
                let sub = col[i + 1] + usize::from(self.pattern[i] != byte);
                next[i] = sub.min(col[i] + 1).min(next[i + 1] + 1);
                best = best.min(next[i]);
            }
            if best > self.k {
                continue;
            }
            if next[0] <= self.k {
                for row in nlo..nhi {
                    let start = self.index.row_to_pos(row) + 1;
                    self.hits.push(ApproxHit {
                        start,
                        end: start + depth,
                        dist: next[0],
                    });
                }
            }
            if depth + 1 < self.max_depth {
                self.descend(nlo, nhi, depth + 1, &next);
            }
        }
    }
}
