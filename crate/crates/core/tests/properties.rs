use std::collections::HashSet;

use alibi_index::alibi::{compress_pointers, decompress_pointers, mark, AlibiIndex, AlibiOptions, Marker, Pointer, RegionGrid};
use alibi_index::hybrid::{HybridIndex, IndexOptions};
use alibi_index::kernel::{KernelParams, KernelText};
use alibi_index::lz77::{brute_force_parse, decode, parse, PhraseKind};
use alibi_index::seq::{ConcatenatedText, Occurrence};
use alibi_index::succinct::gaplist::GapList;
use alibi_index::succinct::rmq::RangeMaxIndex;
use alibi_index::testkit::{classify_lz, gen_synthetic, naive_covering_sources, naive_find_all, sample_patterns, SyntheticSpec};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn text(alphabet: &'static [u8], max: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(prop::sample::select(alphabet), 1..max)
}

fn collection() -> impl Strategy<Value = SyntheticSpec> {
    (200usize..600, 2usize..6, 0u32..30, 0u32..5, any::<u64>()).prop_map(|(len, g, snp, indel, seed)| SyntheticSpec {
        base_length: len,
        genome_count: g,
        snp_rate: snp as f64 / 1000.0,
        indel_rate: indel as f64 / 1000.0,
        max_indel_len: 3,
        seed,
    })
}

fn keys(v: &[Occurrence]) -> HashSet<(usize, usize)> {
    v.iter().map(|o| (o.global_start, o.end())).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parse_matches_quadratic_parser(t in text(b"ab", 300)) {
        let p = parse(&t);
        prop_assert_eq!(&p, &brute_force_parse(&t));
        prop_assert_eq!(decode(&p).unwrap(), t.clone());
        for ph in p.phrases() {
            match ph.kind {
                PhraseKind::Literal(c) => {
                    prop_assert_eq!(ph.len, 1);
                    prop_assert!(!t[..ph.start - 1].contains(&c));
                }
                PhraseKind::Copy { source } => prop_assert!(source < ph.start),
            }
        }
    }

    #[test]
    fn kernel_bytes_follow_position_law(t in text(b"ACGT", 400), m in 1usize..8, k in 0usize..3) {
        prop_assume!(t.len() >= m + k);
        let p = parse(&t);
        let kt = KernelText::build(&t, &p, KernelParams::new(m, k)).unwrap();
        for s in &kt.layout.segments {
            prop_assert_eq!(&kt.bytes[s.kernel_start - 1..s.kernel_end()], &t[s.t_start - 1..s.t_end()]);
        }
        let d = kt.dedup().unwrap();
        prop_assert!(d.len() <= kt.len());
    }

    #[test]
    fn gaplist_neighbours_match_scan(mut v in prop::collection::vec(1usize..500, 0..200), x in 0usize..520, rate in 1usize..20) {
        v.sort_unstable();
        let g = GapList::with_rate(&v, rate, false).unwrap();
        let pred = v.iter().rposition(|&y| y <= x).map(|i| (i + 1, v[i]));
        let succ = v.iter().position(|&y| y >= x).map(|i| (i + 1, v[i]));
        prop_assert_eq!(g.predecessor(x), pred);
        prop_assert_eq!(g.successor(x), succ);
    }

    #[test]
    fn rmq_matches_scan(v in prop::collection::vec(0u32..50, 1..300), a in 0usize..300, b in 0usize..300) {
        let q = RangeMaxIndex::new(&v).unwrap();
        let (l, r) = (a.min(b) % v.len() + 1, a.max(b) % v.len() + 1);
        let (l, r) = (l.min(r), l.max(r));
        let best = (l..=r).max_by_key(|&i| (v[i - 1], std::cmp::Reverse(i))).unwrap();
        prop_assert_eq!(q.query(l, r).unwrap(), best);
    }

    #[test]
    fn region_grid_covering_matches_scan(iv in prop::collection::vec((1usize..300, 0usize..40), 0..150), l in 1usize..340, w in 0usize..20) {
        let mut markers: Vec<Marker> = iv.iter().enumerate()
            .map(|(i, &(a, len))| Marker { a, b: a + len, genome: i, delta: i as i64 - 7 })
            .collect();
        let grid = RegionGrid::build(&mut markers, 4).unwrap();
        let r = l + w;
        let mut got: Vec<(usize, usize)> = grid.covering(l, r).iter().map(|m| (m.a, m.b)).collect();
        let pairs: Vec<(usize, usize)> = iv.iter().map(|&(a, len)| (a, a + len)).collect();
        let mut want = naive_covering_sources(&pairs, l, r);
        got.sort_unstable();
        want.sort_unstable();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn pointer_blocks_round_trip(mut v in prop::collection::vec((0usize..20, 1usize..5000, 1usize..5000), 0..40)) {
        v.sort_unstable();
        let ptrs: Vec<Pointer> = v.iter()
            .map(|&(genome, genome_start, ref_projected_start)| Pointer { genome, genome_start, ref_projected_start })
            .collect();
        prop_assert_eq!(decompress_pointers(&compress_pointers(&ptrs)).unwrap(), ptrs);
    }

    #[test]
    fn marking_partitions_each_genome(spec in collection(), m in 1usize..12, k in 0usize..3) {
        let col = gen_synthetic(&spec).unwrap();
        let params = KernelParams::new(m, k);
        let reference = &col.genomes[0].1;
        for (script, (_, genome)) in col.scripts.iter().zip(&col.genomes) {
            let regions = mark(reference, script, params).unwrap();
            let mut covered = vec![0u8; genome.len() + 1];
            for w in regions.marked.windows(2) {
                prop_assert!(w[0].1 + 1 < w[1].0);
            }
            for &(s, e) in &regions.marked {
                prop_assert!(1 <= s && s <= e && e <= genome.len());
                covered[s..=e].iter_mut().for_each(|c| *c += 1);
            }
            for u in &regions.unmarked {
                prop_assert_eq!(&genome[u.genome_start - 1..u.genome_end], &reference[u.ref_start - 1..u.ref_end()]);
                covered[u.genome_start..=u.genome_end].iter_mut().for_each(|c| *c += 1);
            }
            prop_assert!(covered[1..].iter().all(|&c| c == 1));

            let ext = regions.extend_unmarked(params);
            prop_assert_eq!(&ext.marked, &regions.marked);
            for u in &ext.unmarked {
                prop_assert_eq!(&genome[u.genome_start - 1..u.genome_end], &reference[u.ref_start - 1..u.ref_end()]);
                prop_assert!(regions.unmarked.iter().any(|o| u.contains(o.genome_start, o.genome_end)));
            }
        }
    }

    #[test]
    fn indexes_agree_with_naive_scan(spec in collection(), m in 4usize..12, k in 0usize..3, dedup in any::<bool>()) {
        let col = gen_synthetic(&spec).unwrap();
        let text = ConcatenatedText::concatenate(&col.genomes).unwrap();
        let params = KernelParams::new(m, k);
        let opts = IndexOptions { dedup, ..IndexOptions::default() };
        let hybrid = HybridIndex::build(&text, params, opts).unwrap();
        let alibi = AlibiIndex::build(&col.genomes, &col.scripts, None, params, AlibiOptions { index: opts, ..AlibiOptions::default() }).unwrap();
        let lz = parse(text.bytes());
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        for pat in sample_patterns(&col.genomes, 6, m, 1, &mut rng) {
            let want = naive_find_all(text.bytes(), &pat, k);
            let unsorted = hybrid.find_all_unsorted(&pat, k).unwrap();
            prop_assert_eq!(keys(&unsorted).len(), unsorted.len());
            prop_assert_eq!(&hybrid.find_all(&pat, k).unwrap(), &want);
            let unsorted = alibi.find_all_unsorted(&pat, k).unwrap();
            prop_assert_eq!(keys(&unsorted).len(), unsorted.len());
            prop_assert_eq!(&alibi.find_all(&pat, k).unwrap(), &want);

            let (primary, secondary) = classify_lz(&lz, &want);
            prop_assert_eq!(primary.len() + secondary.len(), want.len());
            let found = keys(&hybrid.find_primary(&pat, k).unwrap());
            prop_assert!(keys(&primary).is_subset(&found));
            prop_assert!(found.is_subset(&keys(&want)));
        }
    }
}
