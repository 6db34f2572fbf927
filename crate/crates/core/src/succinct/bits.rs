use crate::codec::{Reader, Writer};
use crate::error::Result;

/// Plain bitvector with a cumulative popcount per 64-bit word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankBitVec {
    words: Vec<u64>,
    ranks: Vec<u32>,
    len: usize,
}

impl RankBitVec {
    pub fn from_bools(bits: impl IntoIterator<Item = bool>) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for b in bits {
            if len % 64 == 0 {
                words.push(0);
            }
            if b {
                *words.last_mut().unwrap() |= 1 << (len % 64);
            }
            len += 1;
        }
        Self::with_words(words, len)
    }

    fn with_words(words: Vec<u64>, len: usize) -> Self {
        let mut ranks = Vec::with_capacity(words.len() + 1);
        let mut acc = 0u32;
        for w in &words {
            ranks.push(acc);
            acc += w.count_ones();
        }
        ranks.push(acc);
        RankBitVec { words, ranks, len }
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Number of set bits in `[0, i)`.
    #[inline]
    pub fn rank1(&self, i: usize) -> usize {
        let (w, off) = (i / 64, i % 64);
        let base = self.ranks[w] as usize;
        if off == 0 {
            base
        } else {
            base + (self.words[w] & ((1u64 << off) - 1)).count_ones() as usize
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn count_ones(&self) -> usize {
        *self.ranks.last().unwrap() as usize
    }

    pub fn encode(&self, w: &mut Writer) {
        w.usize(self.len);
        w.u64s(&self.words);
    }

    pub fn decode(r: &mut Reader) -> Result<Self> {
        let len = r.usize()?;
        let words = r.u64s()?;
        if words.len() != len.div_ceil(64) {
            return Err(r.err("bitvector length mismatch"));
        }
        Ok(Self::with_words(words, len))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_matches_prefix_count() {
        let bits: Vec<bool> = (0..300).map(|i| i % 3 == 0 || i % 7 == 2).collect();
        let bv = RankBitVec::from_bools(bits.iter().copied());
        for i in 0..=bits.len() {
            assert_eq!(bv.rank1(i), bits[..i].iter().filter(|&&b| b).count());
        }
        assert_eq!(bv.count_ones(), bv.rank1(300));
    }
}
