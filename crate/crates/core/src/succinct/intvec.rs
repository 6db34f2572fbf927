use crate::codec::{Reader, Writer};
use crate::error::Result;

/// Fixed-width bit-packed vector of unsigned integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntVector {
    words: Vec<u64>,
    width: u32,
    len: usize,
}

pub(crate) fn bits_for(max: u64) -> u32 {
    (64 - max.leading_zeros()).max(1)
}

impl IntVector {
    pub fn from_slice(values: &[u64]) -> Self {
        let width = bits_for(values.iter().copied().max().unwrap_or(0));
        let mut v = IntVector {
            words: vec![0; (values.len() * width as usize).div_ceil(64)],
            width,
            len: values.len(),
        };
        for (i, &x) in values.iter().enumerate() {
            v.set(i, x);
        }
        v
    }

    fn set(&mut self, i: usize, x: u64) {
        let w = self.width as usize;
        let bit = i * w;
        let (word, off) = (bit / 64, bit % 64);
        self.words[word] |= x << off;
        if off + w > 64 {
            self.words[word + 1] |= x >> (64 - off);
        }
    }

    #[inline]
    pub fn get(&self, i: usize) -> u64 {
        debug_assert!(i < self.len);
        let w = self.width as usize;
        let bit = i * w;
        let (word, off) = (bit / 64, bit % 64);
        let mask = if w == 64 { u64::MAX } else { (1u64 << w) - 1 };
        let mut x = self.words[word] >> off;
        if off + w > 64 {
            x |= self.words[word + 1] << (64 - off);
        }
        x & mask
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.len).map(|i| self.get(i))
    }

    pub fn encode(&self, w: &mut Writer) {
        w.u8(self.width as u8);
        w.usize(self.len);
        w.u64s(&self.words);
    }

    pub fn decode(r: &mut Reader) -> Result<Self> {
        let width = u32::from(r.u8()?);
        let len = r.usize()?;
        let words = r.u64s()?;
        if !(1..=64).contains(&width) || words.len() != (len * width as usize).div_ceil(64) {
            return Err(r.err("inconsistent packed vector"));
        }
        Ok(IntVector { words, width, len })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn packed_roundtrip(vals in proptest::collection::vec(any::<u64>().prop_map(|x| x >> (x % 64)), 0..200)) {
            let v = IntVector::from_slice(&vals);
            prop_assert_eq!(v.iter().collect::<Vec<_>>(), vals);
        }
    }

    #[test]
    fn width_from_max() {
        assert_eq!(IntVector::from_slice(&[0, 0]).width(), 1);
        assert_eq!(IntVector::from_slice(&[5, 1]).width(), 3);
        assert_eq!(IntVector::from_slice(&[u64::MAX]).get(0), u64::MAX);
    }
}
