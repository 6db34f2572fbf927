use crate::codec::{get_varint, put_varint, Reader, Writer};
use crate::error::{Error, Result};

pub const DEFAULT_SAMPLE_RATE: usize = 16;

/// Sorted integer list stored as varint gaps, with every `rate`-th absolute
/// value sampled alongside the byte offset of the gap that follows it.
///
/// Built with [`GapList::new`] the list is strictly increasing and positive;
/// [`GapList::non_decreasing`] also admits zero gaps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapList {
    deltas: Vec<u8>,
    /// `(value of entry j*rate + 1, offset of the delta of entry j*rate + 2)`.
    samples: Vec<(u64, u64)>,
    count: usize,
    rate: usize,
}

impl GapList {
    pub fn new(values: &[usize]) -> Result<Self> {
        Self::with_rate(values, DEFAULT_SAMPLE_RATE, true)
    }

    pub fn non_decreasing(values: &[usize]) -> Result<Self> {
        Self::with_rate(values, DEFAULT_SAMPLE_RATE, false)
    }

    pub fn with_rate(values: &[usize], rate: usize, strict: bool) -> Result<Self> {
        if rate == 0 {
            return Err(Error::param("gap list sample rate must be positive"));
        }
        let mut deltas = Vec::with_capacity(values.len());
        let mut samples = Vec::with_capacity(values.len() / rate + 1);
        let mut prev = 0usize;
        for (i, &v) in values.iter().enumerate() {
            let ok = if strict { v > prev } else { v >= prev && (i > 0 || v > 0) };
            if !ok {
                return Err(Error::Structure(format!(
                    "gap list input not {} at index {i} ({prev} then {v})",
                    if strict { "strictly increasing and positive" } else { "non-decreasing and positive" }
                )));
            }
            put_varint(&mut deltas, (v - prev) as u64);
            if i % rate == 0 {
                samples.push((v as u64, deltas.len() as u64));
            }
            prev = v;
        }
        Ok(GapList {
            deltas,
            samples,
            count: values.len(),
            rate,
        })
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn sample_rate(&self) -> usize {
        self.rate
    }

    /// The raw gaps, first gap measured from zero.
    pub fn gaps(&self) -> Vec<usize> {
        let mut pos = 0;
        (0..self.count)
            .map(|_| get_varint(&self.deltas, &mut pos).unwrap() as usize)
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let mut pos = 0;
        let mut acc = 0u64;
        (0..self.count).map(move |_| {
            acc += get_varint(&self.deltas, &mut pos).unwrap();
            acc as usize
        })
    }

    /// Value of the 1-based `rank`-th entry.
    pub fn access(&self, rank: usize) -> Result<usize> {
        if rank == 0 || rank > self.count {
            return Err(Error::Bounds {
                index: rank,
                len: self.count,
            });
        }
        Ok(self.get(rank))
    }

    /// Unchecked access for internal callers that already hold a valid rank.
    #[inline]
    pub(crate) fn get(&self, rank: usize) -> usize {
        let idx = rank - 1;
        let (mut v, off) = self.samples[idx / self.rate];
        let mut pos = off as usize;
        for _ in 0..idx % self.rate {
            v += get_varint(&self.deltas, &mut pos).unwrap();
        }
        v as usize
    }

    /// Walks entries starting at the sample block `block`, yielding (rank, value).
    fn scan_from(&self, block: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let (first, off) = self.samples[block];
        let mut pos = off as usize;
        let mut v = first;
        let start_rank = block * self.rate + 1;
        (start_rank..=self.count).map(move |rank| {
            if rank > start_rank {
                v += get_varint(&self.deltas, &mut pos).unwrap();
            }
            (rank, v as usize)
        })
    }

    /// Smallest stored value `>= x`, with its rank (the first such rank when
    /// values repeat).
    pub fn successor(&self, x: usize) -> Option<(usize, usize)> {
        if self.count == 0 {
            return None;
        }
        // Last block whose sampled value is < x; the answer is at or after it.
        let b = self.samples.partition_point(|&(v, _)| (v as usize) < x);
        let block = b.saturating_sub(1);
        self.scan_from(block).find(|&(_, v)| v >= x)
    }

    /// Largest stored value `<= x`, with its rank (the last such rank when
    /// values repeat).
    pub fn predecessor(&self, x: usize) -> Option<(usize, usize)> {
        let b = self.samples.partition_point(|&(v, _)| (v as usize) <= x);
        if b == 0 {
            return None;
        }
        self.scan_from(b - 1).take_while(|&(_, v)| v <= x).last()
    }

    pub fn encode(&self, w: &mut Writer) {
        w.usize(self.count);
        w.usize(self.rate);
        w.bytes(&self.deltas);
        w.usize(self.samples.len());
        for &(v, off) in &self.samples {
            w.varint(v);
            w.varint(off);
        }
    }

    pub fn decode(r: &mut Reader) -> Result<Self> {
        let count = r.usize()?;
        let rate = r.usize()?;
        let deltas = r.bytes()?;
        let ns = r.usize()?;
        if rate == 0 || ns != count.div_ceil(rate) {
            return Err(r.err("gap list sample table size mismatch"));
        }
        let mut samples = Vec::with_capacity(ns);
        for _ in 0..ns {
            let v = r.varint()?;
            let off = r.varint()?;
            if off as usize > deltas.len() {
                return Err(r.err("gap list sample offset out of range"));
            }
            samples.push((v, off));
        }
        let list = GapList {
            deltas,
            samples,
            count,
            rate,
        };
        // Every delta must decode; catches truncated or corrupted payloads.
        let mut pos = 0;
        for _ in 0..count {
            if get_varint(&list.deltas, &mut pos).is_none() {
                return Err(r.err("gap list deltas truncated"));
            }
        }
        Ok(list)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn example() -> GapList {
        GapList::new(&[2, 3, 4, 7]).unwrap()
    }

    #[test]
    fn build_gaps() {
        assert_eq!(example().gaps(), vec![2, 1, 1, 3]);
        let empty = GapList::new(&[]).unwrap();
        assert_eq!(empty.len(), 0);
        assert_eq!(empty.successor(0), None);
        assert_eq!(empty.predecessor(10), None);
        assert_eq!(GapList::new(&[5]).unwrap().gaps(), vec![5]);
    }

    #[test]
    fn build_rejects_bad_input() {
        assert!(GapList::new(&[3, 2]).is_err());
        assert!(GapList::new(&[2, 2]).is_err());
        assert!(GapList::new(&[0, 2]).is_err());
        assert!(GapList::non_decreasing(&[2, 2, 5]).is_ok());
        assert!(GapList::non_decreasing(&[2, 1]).is_err());
    }

    #[test]
    fn access_examples() {
        let l = example();
        assert_eq!(l.access(3).unwrap(), 4);
        assert_eq!(l.access(1).unwrap(), 2);
        assert!(matches!(l.access(0), Err(Error::Bounds { .. })));
        assert!(matches!(l.access(5), Err(Error::Bounds { .. })));
    }

    #[test]
    fn successor_predecessor_examples() {
        let l = example();
        assert_eq!(l.successor(5), Some((4, 7)));
        assert_eq!(l.successor(2), Some((1, 2)));
        assert_eq!(l.successor(8), None);
        assert_eq!(l.predecessor(5), Some((3, 4)));
        assert_eq!(l.predecessor(1), None);
        assert_eq!(l.predecessor(7), Some((4, 7)));
    }

    #[test]
    fn random_lists_against_plain_vec() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..1000 {
            let len = rng.gen_range(0..300);
            let mut v = Vec::with_capacity(len);
            let mut x = 0usize;
            for _ in 0..len {
                x += rng.gen_range(1..1000);
                v.push(x);
            }
            let rate = [1, 3, 8, 64][trial % 4];
            let l = GapList::with_rate(&v, rate, true).unwrap();
            assert_eq!(l.iter().collect::<Vec<_>>(), v);
            for (i, &val) in v.iter().enumerate() {
                assert_eq!(l.access(i + 1).unwrap(), val);
            }
            for _ in 0..20 {
                let q = rng.gen_range(0..x + 10);
                let succ = v.iter().position(|&y| y >= q).map(|i| (i + 1, v[i]));
                let pred = v.iter().rposition(|&y| y <= q).map(|i| (i + 1, v[i]));
                assert_eq!(l.successor(q), succ);
                assert_eq!(l.predecessor(q), pred);
            }
        }
    }

    #[test]
    fn duplicates_spanning_samples() {
        let v = vec![1, 4, 4, 4, 4, 4, 4, 4, 9, 9];
        let l = GapList::with_rate(&v, 2, false).unwrap();
        assert_eq!(l.predecessor(4), Some((8, 4)));
        assert_eq!(l.predecessor(8), Some((8, 4)));
        assert_eq!(l.successor(4), Some((2, 4)));
        assert_eq!(l.successor(5), Some((9, 9)));
        assert_eq!(l.predecessor(100), Some((10, 9)));
    }

    #[test]
    fn serialization_roundtrip() {
        let l = GapList::with_rate(&[1, 5, 9, 200, 70000], 2, true).unwrap();
        let mut w = Writer::new();
        l.encode(&mut w);
        let buf = w.into_inner();
        let back = GapList::decode(&mut Reader::new(&buf, "T")).unwrap();
        assert_eq!(back, l);
        assert!(GapList::decode(&mut Reader::new(&buf[..buf.len() - 1], "T")).is_err());
    }
}
