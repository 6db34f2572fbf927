//! Suffix array by prefix doubling with radix sort, and Kasai's LCP.
//!
//! Suffixes compare as if the text ended with a unique smallest symbol, so a
//! proper prefix sorts before any extension of it.

/// 0-based suffix array of `text`.
pub fn suffix_array(text: &[u8]) -> Vec<u32> {
    let n = text.len();
    assert!(n < u32::MAX as usize, "text too long for 32-bit suffix array");
    if n == 0 {
        return Vec::new();
    }
    // rank 0 is reserved for "past the end".
    let mut rank: Vec<u32> = text.iter().map(|&b| u32::from(b) + 1).collect();
    let mut sa: Vec<u32> = (0..n as u32).collect();
    counting_sort(&mut sa, &rank, 257);

    let mut tmp = vec![0u32; n];
    let mut classes = rerank(&sa, &mut rank, &mut tmp, 0);
    let mut second: Vec<u32> = Vec::with_capacity(n);
    let mut k = 1usize;
    while classes < n {
        // Order by second key: suffixes whose second half is empty come first,
        // then the others in the order of their second half. The stable sort
        // by first key then yields order by the pair.
        second.clear();
        second.extend((n.saturating_sub(k)..n).map(|i| i as u32));
        second.extend(sa.iter().filter(|&&j| j as usize >= k).map(|&j| j - k as u32));
        std::mem::swap(&mut sa, &mut second);
        counting_sort(&mut sa, &rank, classes + 1);
        classes = rerank(&sa, &mut rank, &mut tmp, k);
        k *= 2;
    }
    sa
}

/// Dense ranks (from 1) of `sa`, which is sorted by `(rank[i], rank[i + k])`
/// (`k = 0` means by `rank[i]` alone). Returns the number of classes.
fn rerank(sa: &[u32], rank: &mut Vec<u32>, tmp: &mut Vec<u32>, k: usize) -> usize {
    let n = sa.len();
    let key = |i: usize| {
        let second = if k > 0 && i + k < n { rank[i + k] } else { 0 };
        (rank[i], second)
    };
    tmp[sa[0] as usize] = 1;
    let mut classes = 1u32;
    for w in 1..n {
        if key(sa[w] as usize) != key(sa[w - 1] as usize) {
            classes += 1;
        }
        tmp[sa[w] as usize] = classes;
    }
    std::mem::swap(rank, tmp);
    classes as usize
}

/// Stable counting sort of `items` by `key[item]`.
fn counting_sort(items: &mut Vec<u32>, key: &[u32], range: usize) {
    let mut count = vec![0usize; range + 1];
    for &i in items.iter() {
        count[key[i as usize] as usize + 1] += 1;
    }
    for c in 1..count.len() {
        count[c] += count[c - 1];
    }
    let mut out = vec![0u32; items.len()];
    for &i in items.iter() {
        let c = &mut count[key[i as usize] as usize];
        out[*c] = i;
        *c += 1;
    }
    *items = out;
}

/// `lcp[r]` = longest common prefix of suffixes `sa[r-1]` and `sa[r]`; `lcp[0] = 0`.
pub fn lcp_array(text: &[u8], sa: &[u32]) -> Vec<u32> {
    let n = text.len();
    let mut rank = vec![0u32; n];
    for (r, &p) in sa.iter().enumerate() {
        rank[p as usize] = r as u32;
    }
    let mut lcp = vec![0u32; n];
    let mut h = 0usize;
    for i in 0..n {
        let r = rank[i] as usize;
        if r > 0 {
            let j = sa[r - 1] as usize;
            while i + h < n && j + h < n && text[i + h] == text[j + h] {
                h += 1;
            }
            lcp[r] = h as u32;
            h = h.saturating_sub(1);
        } else {
            h = 0;
        }
    }
    lcp
}
