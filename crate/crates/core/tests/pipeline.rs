use frs_core::frs::{corrupt, encode, folded_distance, read_word, word_to_string};
use frs_core::harness::{brute_force_list, plant};
use frs_core::interp::find_container;
use frs_core::subspace::{read_subspace, write_subspace};
use frs_core::{decode_end_to_end, det_prune, Algo, DecodeOptions, FrsParams, Polynomial, Rational};
use proptest::prelude::*;

#[test]
fn word_files_round_trip_through_corruption() {
    let params = FrsParams::new(31, 15, 3, 5).unwrap();
    let f = Polynomial::from_u64s(params.field(), &[1, 2, 3, 4, 5]);
    let c = encode(&params, &f).unwrap();
    let g = corrupt(params.field(), &c, 2, 99).unwrap();
    let text = word_to_string(31, &g);
    assert!(text.starts_with("31 15 3 5\n"));
    let (q, back) = read_word(text.as_bytes()).unwrap();
    assert_eq!((q, &back), (31, &g));
    assert_eq!(folded_distance(&back, &c).unwrap(), Rational::new(2, 5));
}

#[test]
fn container_survives_serialization_and_prunes_to_the_list() {
    let params = FrsParams::new(17, 16, 4, 3).unwrap();
    let inst = plant(&params, 2, 1, 4).unwrap();
    let radius = params.radius(3).unwrap();
    let h = find_container(&params, &inst.g, 3).unwrap();
    let mut buf = Vec::new();
    write_subspace(&mut buf, 17, &h).unwrap();
    let (_, back) = read_subspace(buf.as_slice()).unwrap();
    assert_eq!(back.canonical_key(params.field()), h.canonical_key(params.field()));

    let delta = params.designed_distance();
    let got = det_prune(params.field(), &inst.g, delta - radius, &back, delta).unwrap();
    assert_eq!(got, brute_force_list(&params, &inst.g, &radius, 1_000_000).unwrap());
}

#[test]
fn every_algorithm_reports_only_verified_codewords() {
    let params = FrsParams::new(17, 16, 4, 2).unwrap();
    let inst = plant(&params, 1, 2, 21).unwrap();
    for algo in [Algo::Det, Algo::Rand, Algo::Krsw, Algo::Brute] {
        let opts = DecodeOptions { s: Some(3), seed: 8, oracle: true, ..DecodeOptions::default() };
        let r = decode_end_to_end(&params, &inst.g, algo, &opts).unwrap();
        assert!(r.verified, "{algo}");
        assert!(r.list.iter().all(|w| params.is_codeword(w)));
        if matches!(algo, Algo::Det | Algo::Brute) {
            assert_eq!(r.agreement, Some(true), "{algo}");
            assert!(r.contains(inst.transmitted()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn det_decoding_matches_brute_force(seed in any::<u64>(), s in 1usize..=3, planted in 1usize..=2) {
        let params = FrsParams::new(17, 16, 4, 3).unwrap();
        let radius = params.radius(s).unwrap();
        let e = frs_core::harness::max_errors_below(&radius, params.blocks());
        let inst = plant(&params, planted, e, seed).unwrap();
        let opts = DecodeOptions { s: Some(s), seed, ..DecodeOptions::default() };
        let r = decode_end_to_end(&params, &inst.g, Algo::Det, &opts).unwrap();
        let expect = brute_force_list(&params, &inst.g, &radius, 1_000_000).unwrap();
        prop_assert_eq!(&r.list, &expect);
        prop_assert!(expect.len() <= s);
    }
}
