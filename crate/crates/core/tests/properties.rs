use binloc_core::fitness::{count_local_maxima, OneMaxTarget};
use binloc_core::gea::{run_sa, SaConfig};
use binloc_core::locality::*;
use binloc_core::markov::{evolve_distribution, MarkovModel, Schedule};
use binloc_core::representation::*;
use num_rational::Ratio;
use proptest::prelude::*;

fn any_repr() -> impl Strategy<Value = Representation> {
    (1u32..=8, any::<u64>(), 0usize..5).prop_map(|(ell, seed, kind)| match kind {
        0 => make_sb(ell).unwrap(),
        1 => make_brg(ell).unwrap(),
        2 => make_harper_min(ell, seed).unwrap(),
        3 => make_harper_max(ell, seed).unwrap(),
        _ => make_random(ell, seed).unwrap(),
    })
}

fn is_permutation(r: &Representation) -> bool {
    let mut seen = vec![false; r.size()];
    r.perm()
        .iter()
        .all(|&p| (p as usize) < seen.len() && !std::mem::replace(&mut seen[p as usize], true))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn point_locality_is_affine_in_dm(r in any_repr()) {
        let ell = r.ell() as u64;
        let p = point_locality(&r).value();
        let via_dm = Ratio::new(rothlauf_dm(&r), ell << (ell - 1)) + 1;
        prop_assert_eq!(p, via_dm);
    }

    #[test]
    fn point_locality_within_bounds(r in any_repr()) {
        let p = point_locality(&r).value();
        prop_assert!(p >= point_locality_lower_bound(r.ell()));
        prop_assert!(p <= point_locality_upper_bound(r.ell()));
    }

    #[test]
    fn constructors_yield_permutations(r in any_repr()) {
        prop_assert!(is_permutation(&r));
        prop_assert!(Representation::from_perm(r.ell(), r.perm().to_vec()).is_ok());
    }

    #[test]
    fn broken_tables_are_rejected(ell in 1u32..=6, seed: u64, i: usize, j: usize) {
        let mut perm = make_random(ell, seed).unwrap().into_perm();
        let n = perm.len();
        let (i, j) = (i % n, j % n);
        prop_assume!(i != j);
        perm[i] = perm[j];
        prop_assert!(Representation::from_perm(ell, perm).is_err());
    }

    #[test]
    fn gray_constructors_are_gray(ell in 1u32..=12, seed: u64) {
        prop_assert!(make_brg(ell).unwrap().is_gray());
        if ell >= 3 {
            prop_assert!(make_suboptimal_gray(ell.min(9), seed).unwrap().is_gray());
        }
    }

    #[test]
    fn gray_codes_have_one_local_maximum(ell in 2u32..=7, seed: u64, a: u32) {
        let target = OneMaxTarget::new(ell, a % (1 << ell)).unwrap();
        let gray = if ell >= 3 { make_suboptimal_gray(ell, seed).unwrap() } else { make_brg(ell).unwrap() };
        prop_assert_eq!(count_local_maxima(&target, &gray).unwrap().count, 1);
    }

    #[test]
    fn general_locality_respects_bound(r in any_repr()) {
        let g = general_locality(&r).unwrap();
        let exact = Ratio::new(g.numerator as i128, g.pairs as i128);
        prop_assert!(exact >= general_locality_lower_bound_exact(r.ell()).unwrap());
    }

    #[test]
    fn constructors_are_deterministic(ell in 1u32..=10, seed: u64) {
        prop_assert_eq!(make_random(ell, seed).unwrap(), make_random(ell, seed).unwrap());
        prop_assert_eq!(make_harper_min(ell, seed).unwrap(), make_harper_min(ell, seed).unwrap());
        prop_assert_eq!(make_harper_max(ell, seed).unwrap(), make_harper_max(ell, seed).unwrap());
        if ell >= 3 {
            prop_assert_eq!(make_suboptimal_gray(ell, seed).unwrap(), make_suboptimal_gray(ell, seed).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn annealing_is_deterministic(seed: u64, a in 0u32..32) {
        let mut cfg = SaConfig::new(5, a);
        cfg.trials = 20;
        cfg.max_generations = 50;
        cfg.master_seed = seed;
        let r = make_ubl32();
        prop_assert_eq!(run_sa(&cfg, &r).unwrap(), run_sa(&cfg, &r).unwrap());
    }

    #[test]
    fn chain_conserves_mass(ell in 1u32..=6, seed: u64, a: u32, steps in 0usize..200) {
        let r = make_random(ell, seed).unwrap();
        let model = MarkovModel::new(r, a % (1 << ell), Schedule::Cooling { initial: 50.0, factor: 0.98 }).unwrap();
        let d = evolve_distribution(&model, steps);
        prop_assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        prop_assert!(d.iter().all(|&m| m >= 0.0));
    }
}
