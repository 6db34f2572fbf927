//! Range-maximum queries that never consult the original values.
//!
//! The argmax of `[l, r]` is the lowest common ancestor of `l` and `r` in the
//! max-Cartesian tree, which is the unique shallowest node in `[l, r]`. We keep
//! the node depths (bit-packed) and a sparse table over per-block minima, so a
//! query compares depths only. Equal values make the earlier index the
//! ancestor, giving the smallest-index tie-break.

use super::intvec::IntVector;
use crate::codec::{Reader, Writer};
use crate::error::{Error, Result};

const BLOCK: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeMaxIndex {
    depth: IntVector,
    /// `table[k][b]` = position of the shallowest node in blocks `[b, b + 2^k)`.
    table: Vec<IntVector>,
}

impl RangeMaxIndex {
    pub fn new<T: Ord>(values: &[T]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::param("range-max index over an empty array"));
        }
        let n = values.len();
        let mut parent = vec![usize::MAX; n];
        let mut stack: Vec<usize> = Vec::new();
        for j in 0..n {
            let mut last = usize::MAX;
            while let Some(&top) = stack.last() {
                if values[top] < values[j] {
                    last = stack.pop().unwrap();
                } else {
                    break;
                }
            }
            if last != usize::MAX {
                parent[last] = j;
            }
            if let Some(&top) = stack.last() {
                parent[j] = top;
            }
            stack.push(j);
        }
        // Parents of popped nodes may point right (to j) or left (stack top);
        // resolve depths by memoised walks.
        let mut depth = vec![u64::MAX; n];
        let mut path = Vec::new();
        for i in 0..n {
            let mut v = i;
            while depth[v] == u64::MAX {
                if parent[v] == usize::MAX {
                    depth[v] = 0;
                    break;
                }
                path.push(v);
                v = parent[v];
            }
            let mut d = depth[v];
            while let Some(u) = path.pop() {
                d += 1;
                depth[u] = d;
            }
        }

        let shallowest = |a: usize, b: usize| if depth[b] < depth[a] { b } else { a };
        let nblocks = n.div_ceil(BLOCK);
        let mut level: Vec<u64> = (0..nblocks)
            .map(|b| {
                (b * BLOCK..((b + 1) * BLOCK).min(n))
                    .reduce(shallowest)
                    .unwrap() as u64
            })
            .collect();
        let mut table = vec![IntVector::from_slice(&level)];
        let mut span = 1;
        while 2 * span <= nblocks {
            level = (0..=nblocks - 2 * span)
                .map(|b| shallowest(level[b] as usize, level[b + span] as usize) as u64)
                .collect();
            table.push(IntVector::from_slice(&level));
            span *= 2;
        }
        Ok(RangeMaxIndex {
            depth: IntVector::from_slice(&depth),
            table,
        })
    }

    pub fn len(&self) -> usize {
        self.depth.len()
    }

    pub fn is_empty(&self) -> bool {
        self.depth.is_empty()
    }

    #[inline]
    fn pick(&self, a: usize, b: usize) -> usize {
        if self.depth.get(b) < self.depth.get(a) {
            b
        } else {
            a
        }
    }

    fn scan(&self, l: usize, r: usize) -> usize {
        let (mut best, mut best_d) = (l, self.depth.get(l));
        for i in l + 1..=r {
            let d = self.depth.get(i);
            if d < best_d {
                best = i;
                best_d = d;
            }
        }
        best
    }

    /// 0-based inclusive argmax; callers guarantee `l <= r < len`.
    pub(crate) fn argmax0(&self, l: usize, r: usize) -> usize {
        let (bl, br) = (l / BLOCK, r / BLOCK);
        if br <= bl + 1 {
            return self.scan(l, r);
        }
        let mut best = self.scan(l, (bl + 1) * BLOCK - 1);
        let (first, last) = (bl + 1, br - 1);
        let k = (usize::BITS - 1 - (last - first + 1).leading_zeros()) as usize;
        let t = &self.table[k];
        best = self.pick(best, t.get(first) as usize);
        best = self.pick(best, t.get(last + 1 - (1 << k)) as usize);
        self.pick(best, self.scan(br * BLOCK, r))
    }

    /// 1-based inclusive query: an index in `[l, r]` holding the maximum, the
    /// smallest such index on ties.
    pub fn query(&self, l: usize, r: usize) -> Result<usize> {
        if l == 0 || l > r || r > self.len() {
            return Err(Error::Bounds {
                index: if l == 0 || l > r { l } else { r },
                len: self.len(),
            });
        }
        Ok(self.argmax0(l - 1, r - 1) + 1)
    }

    pub fn encode(&self, w: &mut Writer) {
        self.depth.encode(w);
        w.usize(self.table.len());
        for t in &self.table {
            t.encode(w);
        }
    }

    pub fn decode(r: &mut Reader) -> Result<Self> {
        let depth = IntVector::decode(r)?;
        let levels = r.usize()?;
        if levels > 64 {
            return Err(r.err("too many range-max levels"));
        }
        let table = (0..levels)
            .map(|_| IntVector::decode(r))
            .collect::<Result<Vec<_>>>()?;
        let nblocks = depth.len().div_ceil(BLOCK);
        if depth.is_empty() || table.is_empty() || table[0].len() != nblocks {
            return Err(r.err("range-max table does not match depth array"));
        }
        Ok(RangeMaxIndex { depth, table })
    }
}
