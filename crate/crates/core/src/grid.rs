//! Two-sided range reporting shared by both indexes.
//!
//! Points are sorted by start. Given `[l, r]`, the points with `start <= l`
//! form a prefix found by a predecessor search; within it a range-max over the
//! ends peels off every point with `end >= r`, splitting around each hit.

use crate::succinct::{GapList, RangeMaxIndex};

/// Calls `visit` on the 0-based ranks `j` with `starts[j] <= l`, in an order
/// driven by the range-max splits. `visit` returns whether `j` reaches `r`,
/// i.e. `end(j) >= r`; only then are the neighbouring ranges explored.
pub(crate) fn report_covering(
    starts: &GapList,
    ends: Option<&RangeMaxIndex>,
    l: usize,
    mut visit: impl FnMut(usize) -> bool,
) {
    let (Some(rmq), Some((last, _))) = (ends, starts.predecessor(l)) else {
        return;
    };
    // `next` holds one pending range so that most queries never allocate.
    let mut next = Some((0usize, last - 1));
    let mut stack = Vec::new();
    while let Some((a, b)) = next.take().or_else(|| stack.pop()) {
        let m = rmq.argmax0(a, b);
        if !visit(m) {
            continue;
        }
        if m > a {
            next = Some((a, m - 1));
        }
        if m < b {
            match next {
                None => next = Some((m + 1, b)),
                Some(_) => stack.push((m + 1, b)),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn against_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let n = rng.gen_range(1..120);
            let mut pts: Vec<(usize, usize)> = (0..n)
                .map(|_| {
                    let s = rng.gen_range(1..200);
                    (s, s + rng.gen_range(0..30))
                })
                .collect();
            pts.sort_unstable();
            let starts = GapList::non_decreasing(&pts.iter().map(|p| p.0).collect::<Vec<_>>()).unwrap();
            let ends: Vec<usize> = pts.iter().map(|p| p.1).collect();
            let rmq = RangeMaxIndex::new(&ends).unwrap();
            for _ in 0..40 {
                let l = rng.gen_range(1..230);
                let r = l + rng.gen_range(0..20);
                let mut got = Vec::new();
                report_covering(&starts, Some(&rmq), l, |j| {
                    let hit = ends[j] >= r;
                    if hit {
                        got.push(j);
                    }
                    hit
                });
                got.sort_unstable();
                let want: Vec<usize> = (0..n).filter(|&j| pts[j].0 <= l && pts[j].1 >= r).collect();
                assert_eq!(got, want);
            }
        }
    }
}
