//! Brute-force oracles and synthetic genome collections.

use rand::distributions::{Distribution, Uniform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alibi::MarkedRegions;
use crate::error::{Error, Result};
use crate::lz77::{Lz77Parse, PhraseKind};
use crate::seq::{AlignmentScript, EditOp, Occurrence, SEPARATOR};

/// Every interval of `text` within edit distance `k` of `pattern`, with its
/// minimal distance, skipping intervals that contain the separator. Sorted
/// by `(start, length)`.
pub fn naive_find_all(text: &[u8], pattern: &[u8], k: usize) -> Vec<Occurrence> {
    let m = pattern.len();
    let mut out = Vec::new();
    if m == 0 {
        return out;
    }
    let mut col: Vec<usize> = vec![0; m + 1];
    let mut next: Vec<usize> = vec![0; m + 1];
    for s in 0..text.len() {
        // col[i] = distance between pattern[..i] and text[s..s + j].
        for (i, c) in col.iter_mut().enumerate() {
            *c = i;
        }
        for j in 1..=(m + k).min(text.len() - s) {
            let c = text[s + j - 1];
            if c == SEPARATOR {
                break;
            }
            next[0] = j;
            for i in 1..=m {
                let sub = col[i - 1] + usize::from(pattern[i - 1] != c);
                next[i] = sub.min(col[i] + 1).min(next[i - 1] + 1);
            }
            std::mem::swap(&mut col, &mut next);
            if col[m] <= k {
                out.push(Occurrence::new(s + 1, j, col[m]));
            }
            if col.iter().all(|&d| d > k) {
                break;
            }
        }
    }
    out
}

/// The `(start, end)` pairs with `start <= l` and `r <= end`, in input order.
pub fn naive_covering_sources(sources: &[(usize, usize)], l: usize, r: usize) -> Vec<(usize, usize)> {
    sources
        .iter()
        .copied()
        .filter(|&(s, e)| s <= l && r <= e)
        .collect()
}

/// Splits occurrences of an LZ77-parsed text into primary (crossing a cut,
/// or lying on a literal phrase) and secondary (inside one copy phrase).
pub fn classify_lz(parse: &Lz77Parse, occs: &[Occurrence]) -> (Vec<Occurrence>, Vec<Occurrence>) {
    let phrases = parse.phrases();
    occs.iter().partition(|o| {
        let i = phrases.partition_point(|p| p.start <= o.global_start) - 1;
        let p = &phrases[i];
        o.end() > p.end() || matches!(p.kind, PhraseKind::Literal(_))
    })
}

/// Splits occurrences in one genome into primary and secondary, where a
/// secondary occurrence lies inside an (extended) unmarked region. Positions
/// are genome-local.
pub fn classify_alibi(regions: &MarkedRegions, occs: &[Occurrence]) -> (Vec<Occurrence>, Vec<Occurrence>) {
    occs.iter()
        .partition(|o| !regions.unmarked.iter().any(|u| u.contains(o.global_start, o.end())))
}

/// Parameters of a synthetic collection: a random reference and mutated copies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticSpec {
    pub base_length: usize,
    pub genome_count: usize,
    pub snp_rate: f64,
    pub indel_rate: f64,
    pub max_indel_len: usize,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            base_length: 50_000,
            genome_count: 10,
            snp_rate: 0.00005,
            indel_rate: 0.000005,
            max_indel_len: 4,
            seed: 42,
        }
    }
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        let rate_ok = |r: f64| (0.0..=1.0).contains(&r);
        if !rate_ok(self.snp_rate) || !rate_ok(self.indel_rate) {
            return Err(Error::param("mutation rates must lie in [0, 1]"));
        }
        if self.base_length == 0 || self.genome_count == 0 {
            return Err(Error::param("base length and genome count must be positive"));
        }
        if self.indel_rate > 0.0 && self.max_indel_len == 0 {
            return Err(Error::param("indels need a positive maximum length"));
        }
        Ok(())
    }
}

/// Genomes `g1..` (first is the reference) and their alignment scripts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntheticCollection {
    pub genomes: Vec<(String, Vec<u8>)>,
    pub scripts: Vec<AlignmentScript>,
}

impl SyntheticCollection {
    pub fn fasta(&self) -> String {
        let mut out = Vec::new();
        crate::seq::write_fasta(&mut out, &self.genomes).expect("writing to memory");
        String::from_utf8(out).expect("ASCII genomes")
    }

    pub fn alignments(&self) -> String {
        self.scripts.iter().map(|s| format!("{s}\n")).collect()
    }
}

const BASES: &[u8; 4] = b"ACGT";

fn indel_len(rng: &mut ChaCha8Rng, max: usize) -> usize {
    let mut len = 1;
    while len < max && rng.gen_bool(0.5) {
        len += 1;
    }
    len
}

fn push_match(ops: &mut Vec<EditOp>, n: usize) {
    if n == 0 {
        return;
    }
    if let Some(EditOp::Match(m)) = ops.last_mut() {
        *m += n;
    } else {
        ops.push(EditOp::Match(n));
    }
}

/// One mutated copy of `reference`. Mutations are applied left to right:
/// at each reference position an indel happens with `indel_rate`, otherwise
/// a SNP with `snp_rate`.
fn mutate(reference: &[u8], spec: &SyntheticSpec, rng: &mut ChaCha8Rng) -> Vec<EditOp> {
    let mut ops = Vec::new();
    let mut i = 0;
    while i < reference.len() {
        if spec.indel_rate > 0.0 && rng.gen_bool(spec.indel_rate) {
            let len = indel_len(rng, spec.max_indel_len);
            if rng.gen_bool(0.5) {
                ops.push(EditOp::Ins((0..len).map(|_| BASES[rng.gen_range(0..4)]).collect()));
            } else {
                let len = len.min(reference.len() - i);
                ops.push(EditOp::Del(len));
                i += len;
            }
            continue;
        }
        if spec.snp_rate > 0.0 && rng.gen_bool(spec.snp_rate) {
            let cur = reference[i];
            let alts: Vec<u8> = BASES.iter().copied().filter(|&b| b != cur).collect();
            ops.push(EditOp::Subst(vec![alts[rng.gen_range(0..3)]]));
        } else {
            push_match(&mut ops, 1);
        }
        i += 1;
    }
    ops
}

/// Deterministic for a fixed spec; collections with more genomes extend
/// those with fewer, since genome `i` draws from its own seeded stream.
pub fn gen_synthetic(spec: &SyntheticSpec) -> Result<SyntheticCollection> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let dist = Uniform::from(0..4usize);
    let reference: Vec<u8> = (0..spec.base_length).map(|_| BASES[dist.sample(&mut rng)]).collect();
    let mut genomes = vec![("g1".to_string(), reference.clone())];
    let mut scripts = vec![AlignmentScript::identity("g1", reference.len())];
    for gi in 1..spec.genome_count {
        let mut grng = ChaCha8Rng::seed_from_u64(spec.seed ^ (gi as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let id = format!("g{}", gi + 1);
        let script = AlignmentScript::new(id.clone(), mutate(&reference, spec, &mut grng));
        let genome = script.apply(&reference)?;
        if genome.is_empty() {
            return Err(Error::param("a mutated genome came out empty"));
        }
        genomes.push((id, genome));
        scripts.push(script);
    }
    Ok(SyntheticCollection { genomes, scripts })
}

/// `count` patterns of length `len` cut from random genome positions, with
/// `mutations` random substitutions each.
pub fn sample_patterns(
    genomes: &[(String, Vec<u8>)],
    count: usize,
    len: usize,
    mutations: usize,
    rng: &mut impl Rng,
) -> Vec<Vec<u8>> {
    let usable: Vec<&Vec<u8>> = genomes.iter().map(|g| &g.1).filter(|g| g.len() >= len).collect();
    if usable.is_empty() {
        return Vec::new();
    }
    (0..count)
        .map(|_| {
            let g = usable[rng.gen_range(0..usable.len())];
            let s = rng.gen_range(0..=g.len() - len);
            let mut p = g[s..s + len].to_vec();
            for _ in 0..mutations {
                let i = rng.gen_range(0..len);
                p[i] = BASES[rng.gen_range(0..4)];
            }
            p
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lz77::parse;

    fn starts(v: &[Occurrence]) -> Vec<usize> {
        v.iter().map(|o| o.global_start).collect()
    }

    /// Edit distance by the full table, for checking the pruned scan.
    fn edit_distance(a: &[u8], b: &[u8]) -> usize {
        let mut prev: Vec<usize> = (0..=b.len()).collect();
        for (i, &x) in a.iter().enumerate() {
            let mut cur = vec![i + 1; b.len() + 1];
            for (j, &y) in b.iter().enumerate() {
                cur[j + 1] = (prev[j] + usize::from(x != y)).min(prev[j + 1] + 1).min(cur[j] + 1);
            }
            prev = cur;
        }
        prev[b.len()]
    }

    #[test]
    fn naive_examples() {
        assert_eq!(starts(&naive_find_all(b"abaabab", b"ab", 0)), vec![1, 4, 6]);
        assert_eq!(naive_find_all(b"gattaca", b"gattaca", 0), vec![Occurrence::new(1, 7, 0)]);
    }

    #[test]
    fn naive_matches_full_table() {
        let text = b"aaaa#abba#baab";
        for pat in [&b"ab"[..], b"a", b"bab", b"aaaa"] {
            for k in 0..3 {
                let mut want = Vec::new();
                for s in 1..=text.len() {
                    for e in s..=text.len().min(s + pat.len() + k - 1) {
                        let sub = &text[s - 1..e];
                        if sub.contains(&SEPARATOR) {
                            continue;
                        }
                        let d = edit_distance(pat, sub);
                        if d <= k {
                            want.push(Occurrence::new(s, e - s + 1, d));
                        }
                    }
                }
                assert_eq!(naive_find_all(text, pat, k), want, "{pat:?} k={k}");
            }
        }
    }

    #[test]
    fn covering_examples() {
        assert_eq!(naive_covering_sources(&[(1, 3), (2, 2)], 1, 2), vec![(1, 3)]);
        assert!(naive_covering_sources(&[], 1, 1).is_empty());
    }

    #[test]
    fn classify_running_example() {
        let text = b"abaabab";
        let occ = naive_find_all(text, b"ab", 0);
        let (p, s) = classify_lz(&parse(text), &occ);
        assert_eq!(starts(&p), vec![1, 6]);
        assert_eq!(starts(&s), vec![4]);
    }

    #[test]
    fn generator_examples() {
        let one = SyntheticSpec {
            base_length: 100,
            genome_count: 1,
            snp_rate: 0.0,
            indel_rate: 0.0,
            ..SyntheticSpec::default()
        };
        let c = gen_synthetic(&one).unwrap();
        assert_eq!(c.genomes.len(), 1);
        assert_eq!(c.alignments(), "g1\t100=\n");
        let three = SyntheticSpec { genome_count: 3, ..one };
        let c = gen_synthetic(&three).unwrap();
        assert!(c.genomes.iter().all(|g| g.1 == c.genomes[0].1));

        let spec = SyntheticSpec {
            base_length: 5000,
            genome_count: 20,
            snp_rate: 0.005,
            indel_rate: 0.0005,
            max_indel_len: 4,
            seed: 42,
        };
        let c = gen_synthetic(&spec).unwrap();
        for (g, s) in c.genomes.iter().zip(&c.scripts) {
            assert_eq!(s.apply(&c.genomes[0].1).unwrap(), g.1);
        }
        assert_eq!(gen_synthetic(&spec).unwrap(), c);
        let fewer = gen_synthetic(&SyntheticSpec { genome_count: 7, ..spec }).unwrap();
        assert_eq!(&c.genomes[..7], &fewer.genomes[..]);
        assert!(gen_synthetic(&SyntheticSpec { snp_rate: 1.5, ..spec }).is_err());
    }
}
