use mubh_core::cover::{certify_fusion, double_cover, fusion_four, verify_cover_tables};
use mubh_core::hadamard::{build_mubh, is_bush_type, regular_sum, unbiased_witness, HadamardMatrix};
use mubh_core::mubh_scheme::{build_five_class, build_three_class, extract_mubh, gramian, FiveClassScheme};
use mubh_core::spectral::QStructure;

fn five_from(hs: &[HadamardMatrix], n: usize) -> FiveClassScheme {
    build_five_class(&gramian(hs, n).unwrap()).unwrap()
}

/// Deterministic shuffle (LCG-driven Fisher–Yates).
fn shuffle(len: usize, mut seed: u64) -> Vec<usize> {
    let mut p: Vec<usize> = (0..len).collect();
    for i in (1..len).rev() {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        p.swap(i, (seed >> 33) as usize % (i + 1));
    }
    p
}

#[test]
fn round_trip_reproduces_the_scheme() {
    for (n, m) in [(2, 2), (2, 3), (4, 7)] {
        let s = five_from(&build_mubh(n, m).unwrap(), n);
        let ex = extract_mubh(s.rels(), n, m).unwrap();
        assert_eq!(ex.hadamards.len(), m);
        for h in &ex.hadamards {
            assert!(is_bush_type(h).unwrap());
            assert_eq!(regular_sum(h), Some(2 * n as i64));
        }
        for a in 0..m {
            for b in a + 1..m {
                assert!(unbiased_witness(&ex.hadamards[a], &ex.hadamards[b]).unwrap().is_some());
            }
        }
        let again = five_from(&ex.hadamards, n);
        assert_eq!(again.rels(), &s.rels().permuted(&ex.permutation).unwrap(), "({n},{m})");
    }
}

#[test]
fn scrambled_input_round_trips_through_the_recorded_permutation() {
    let (n, m) = (2, 3);
    let s = five_from(&build_mubh(n, m).unwrap(), n);
    let size = s.rels().size();
    for seed in [1, 7, 42] {
        let sigma = shuffle(size, seed);
        let scrambled = s.rels().permuted(&sigma).unwrap();
        let ex = extract_mubh(&scrambled, n, m).unwrap();
        let again = five_from(&ex.hadamards, n);
        for a in 0..size {
            for b in 0..size {
                let (x, y) = (ex.permutation[a], ex.permutation[b]);
                assert_eq!(again.rels().get(a, b), scrambled.get(x, y));
                // Composed back to the original labelling.
                assert_eq!(again.rels().get(a, b), s.rels().get(sigma[x], sigma[y]));
            }
        }
    }
}

#[test]
fn wrong_inputs_are_rejected() {
    let hs = build_mubh(2, 3).unwrap();
    let bundle = gramian(&hs, 2).unwrap();
    let three = build_three_class(&bundle).unwrap();
    assert!(extract_mubh(three.rels(), 2, 3).is_err());
    let five = build_five_class(&bundle).unwrap();
    assert!(extract_mubh(five.rels(), 2, 2).is_err());
    assert!(extract_mubh(five.rels(), 1, 3).is_err());
}

#[test]
fn cover_tables_and_fusion_on_the_grid() {
    for (n, m) in [(2, 2), (2, 3), (4, 7)] {
        let c = double_cover(&five_from(&build_mubh(n, m).unwrap(), n)).unwrap();
        let report = verify_cover_tables(&c).unwrap();
        assert_eq!(report.krein_match.index, 8, "({n},{m})");
        assert!(report.uniformity.uniform);
        assert!(report.krein.is_admissible());
        let f = fusion_four(&c).unwrap();
        let r = certify_fusion(&f, n, m).unwrap();
        assert_eq!(r.structure, QStructure { q_polynomial: true, q_bipartite: true, q_antipodal: true }, "({n},{m})");
    }
}
