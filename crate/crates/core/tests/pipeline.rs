use proptest::prelude::*;

use wreath_hsp::solver::{solve, FourierSampler, SolverParams};
use wreath_hsp::subgroup::{closure, perp_bruteforce, perp_linear, random_subgroup};
use wreath_hsp::{seeded_rng, GroupElement, HiddenFunction};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn verified_reports_are_exact(n in 1u32..=3, seed in any::<u64>()) {
        let u = random_subgroup(n, &mut seeded_rng(seed, 0));
        let f = HiddenFunction::build(&u);
        let report = solve(&f, &SolverParams::new(n).with_seed(seed)).unwrap();
        if report.verified {
            prop_assert_eq!(closure(n, &report.generators), u.elements().to_vec());
        }
        prop_assert!(report.rounds_used <= 6 * n as usize + 10);
        prop_assert_eq!(report.transcript.len(), report.rounds_used);
    }

    #[test]
    fn samples_lie_in_one_of_the_two_perps(n in 1u32..=3, seed in any::<u64>()) {
        let mut rng = seeded_rng(seed, 1);
        let u = random_subgroup(n, &mut rng);
        let perp = u.perp().unwrap();
        let perp_t = u.conjugate_swap().perp().unwrap();
        let sampler = FourierSampler::new(&HiddenFunction::build(&u), true).unwrap();
        for _ in 0..8 {
            let (g, _) = sampler.sample(&mut rng).unwrap();
            prop_assert!(perp.binary_search(&g).is_ok() || perp_t.binary_search(&g).is_ok());
        }
    }

    #[test]
    fn linear_and_bruteforce_perp_agree_on_sets(
        n in 1u32..=3,
        picks in proptest::collection::vec(any::<u64>(), 0..6),
    ) {
        let order = 1u64 << (2 * n + 1);
        let set: Vec<GroupElement> = picks.iter().map(|p| GroupElement::from_index(n, p % order)).collect();
        prop_assert_eq!(perp_linear(n, &set).unwrap(), perp_bruteforce(n, &set).unwrap());
    }
}

#[test]
fn distribution_without_label_measurement_matches_mixture() {
    // unmeasured label: half the weight on each perp, uniformly
    for seed in 0..20 {
        let u = random_subgroup(2, &mut seeded_rng(seed, 2));
        let perp = u.perp().unwrap();
        let perp_t = u.conjugate_swap().perp().unwrap();
        let dist = FourierSampler::new(&HiddenFunction::build(&u), false)
            .unwrap()
            .output_distribution()
            .unwrap();
        for (i, p) in dist.iter().enumerate() {
            let g = GroupElement::from_index(2, i as u64);
            let mut expected = 0.0;
            if perp.binary_search(&g).is_ok() {
                expected += 0.5 / perp.len() as f64;
            }
            if perp_t.binary_search(&g).is_ok() {
                expected += 0.5 / perp_t.len() as f64;
            }
            assert!((p - expected).abs() < 1e-10, "{u:?} at {g}");
        }
    }
}

#[test]
fn label_measurement_leaves_the_distribution_unchanged() {
    use wreath_hsp::qft::qft_circuit;
    use wreath_hsp::sim::StateVector;
    for seed in 0..20 {
        let n = 2;
        let u = random_subgroup(n, &mut seeded_rng(seed, 3));
        let f = HiddenFunction::build(&u);
        let unmeasured = FourierSampler::new(&f, false)
            .unwrap()
            .output_distribution()
            .unwrap();
        // measuring the label first leaves a uniformly chosen coset
        let mut mixed = vec![0.0; unmeasured.len()];
        let cosets = f.label_count() as f64;
        for label in 0..f.label_count() {
            let coset: Vec<u64> = GroupElement::all(n)
                .filter(|g| f.eval(g) == label)
                .map(|g| g.index())
                .collect();
            let mut s = StateVector::uniform_over(5, &coset).unwrap();
            qft_circuit(n).circuit.run(&mut s).unwrap();
            for (m, p) in mixed.iter_mut().zip(s.probabilities(&[0, 1, 2, 3, 4])) {
                *m += p / cosets;
            }
        }
        for (a, b) in unmeasured.iter().zip(&mixed) {
            assert!((a - b).abs() < 1e-10, "{u:?}");
        }
    }
}
