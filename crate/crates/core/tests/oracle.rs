use alibi_index::alibi::{AlibiIndex, AlibiOptions};
use alibi_index::hybrid::{HybridIndex, IndexOptions};
use alibi_index::kernel::KernelParams;
use alibi_index::seq::ConcatenatedText;
use alibi_index::testkit::{gen_synthetic, naive_find_all, sample_patterns, SyntheticSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn check(spec: SyntheticSpec, m: usize, k_max: usize, per_len: usize) {
    let col = gen_synthetic(&spec).unwrap();
    let text = ConcatenatedText::concatenate(&col.genomes).unwrap();
    let params = KernelParams::new(m, k_max);
    let hybrid = HybridIndex::build(&text, params, IndexOptions::default()).unwrap();
    let alibi = AlibiIndex::build(&col.genomes, &col.scripts, None, params, AlibiOptions::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed + 1);
    for len in [4, 8, 16, 32].into_iter().filter(|&l| l <= m) {
        for mutations in [0, 1] {
            for pat in sample_patterns(&col.genomes, per_len, len, mutations, &mut rng) {
                for k in 0..=k_max {
                    let want = naive_find_all(text.bytes(), &pat, k);
                    let got = hybrid.find_all(&pat, k).unwrap();
                    assert_eq!(got, want, "hybrid {:?} k={k}", String::from_utf8_lossy(&pat));
                    let got = alibi.find_all(&pat, k).unwrap();
                    assert_eq!(got, want, "alibi {:?} k={k}", String::from_utf8_lossy(&pat));
                }
            }
        }
    }
}

#[test]
fn small_collections_match_naive_scan() {
    for seed in 0..4 {
        let spec = SyntheticSpec {
            base_length: 3000,
            genome_count: 8,
            snp_rate: 0.01,
            indel_rate: 0.001,
            max_indel_len: 4,
            seed,
        };
        check(spec, 32, 1, 4);
        check(spec, 8, 2, 4);
    }
}
