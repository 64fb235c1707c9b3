//! Greedy and weak-greedy subspace selection: closed-form profiles,
//! the weak-selection contract, and invariance properties.

mod common;

use common::random_cloud;
use entropy_greedy::greedy::{run_greedy, sigma_profile, GreedyStop, PointCloud};
use entropy_greedy::space::AmbientSpace;
use entropy_greedy::Error;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Orthogonal decaying axes 2^-j e_j: every quantity is an exact binary
/// power, so the whole trace is exact in floating point.
#[test]
fn decaying_axes_select_in_order_with_halving_sigmas() {
    let dim = 8;
    let pts: Vec<Vec<f64>> = (0..dim)
        .map(|j| {
            let mut v = vec![0.0; dim];
            v[j] = 0.5f64.powi(j as i32);
            v
        })
        .collect();
    let cloud = PointCloud::new(AmbientSpace::euclidean(dim), pts).unwrap();
    let tr = run_greedy(&cloud, 6, 1.0, 0).unwrap();
    assert_eq!(tr.selected, vec![0, 1, 2, 3, 4, 5]);
    for (k, s) in tr.sigmas.iter().enumerate() {
        assert!(
            (s - 0.5f64.powi(k as i32)).abs() <= 1e-15,
            "sigma_{k} = {s}"
        );
        if k < tr.dists.len() {
            assert!((tr.dists[k] - 0.5f64.powi(k as i32)).abs() <= 1e-15);
        }
    }
    assert_eq!(tr.stop, GreedyStop::ReachedNMax);
}

#[test]
fn single_point_cloud_converges_in_one_step() {
    let cloud = PointCloud::new(AmbientSpace::euclidean(3), vec![vec![0.3f64, -0.4, 1.2]]).unwrap();
    let tr = run_greedy(&cloud, 1, 1.0, 0).unwrap();
    assert_eq!(tr.selected, vec![0]);
    assert!((tr.sigmas[0] - (0.09f64 + 0.16 + 1.44).sqrt()).abs() < 1e-12);
    assert!(tr.sigmas[1] <= 1e-10);
}

#[test]
fn invalid_parameters_are_rejected() {
    let cloud = PointCloud::new(AmbientSpace::euclidean(2), vec![vec![1.0f64, 0.0]]).unwrap();
    assert!(matches!(
        run_greedy(&cloud, 1, 0.0, 0).unwrap_err(),
        Error::InvalidParameter(_)
    ));
    assert!(matches!(
        run_greedy(&cloud, 1, 1.5, 0).unwrap_err(),
        Error::InvalidParameter(_)
    ));
    assert!(matches!(
        run_greedy(&cloud, 2, 1.0, 0).unwrap_err(),
        Error::InvalidParameter(_)
    ));
    assert!(matches!(
        PointCloud::<f64>::new(AmbientSpace::euclidean(2), vec![]).unwrap_err(),
        Error::EmptySet
    ));
}

#[test]
fn weak_selection_contract_holds_for_five_seeds() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let cloud = random_cloud(&mut rng, 6, 12);
    for seed in 0..5u64 {
        let tr = run_greedy(&cloud, 6, 0.5, seed).unwrap();
        assert_eq!(tr.selected.len(), 6);
        for k in 0..tr.dists.len() {
            assert!(
                tr.dists[k] >= 0.5 * tr.sigmas[k] - 1e-12,
                "seed {seed} step {k}: {} < 0.5 * {}",
                tr.dists[k],
                tr.sigmas[k]
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // selected dist is within [gamma * max, max]; sigma never increases;
    // no index is selected twice
    #[test]
    fn selection_contract(seed in 0u64..1u64 << 32, dim in 2usize..8, extra in 0usize..12, gi in 0usize..4) {
        let gamma = [0.3f64, 0.5, 0.7, 1.0][gi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = dim + extra;
        let cloud = random_cloud(&mut rng, dim, m);
        let nmax = dim.min(m).min(5);
        let tr = run_greedy(&cloud, nmax, gamma, seed ^ 0xabcd).unwrap();
        let mut seen = std::collections::HashSet::new();
        for idx in &tr.selected {
            prop_assert!(seen.insert(*idx), "index {idx} selected twice");
        }
        for k in 0..tr.dists.len() {
            prop_assert!(tr.dists[k] >= gamma * tr.sigmas[k] - 1e-12);
            prop_assert!(tr.dists[k] <= tr.sigmas[k] + 1e-12);
        }
        for k in 1..tr.sigmas.len() {
            prop_assert!(tr.sigmas[k] <= tr.sigmas[k - 1] + 1e-12);
        }
    }

    // with gamma = 1 the selected point attains the max exactly
    #[test]
    fn strong_greedy_attains_the_max(seed in 0u64..1u64 << 32, dim in 2usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cloud = random_cloud(&mut rng, dim, dim + 6);
        let tr = run_greedy(&cloud, dim.min(5), 1.0, 0).unwrap();
        for k in 0..tr.dists.len() {
            prop_assert!((tr.dists[k] - tr.sigmas[k]).abs() <= 1e-12);
        }
    }

    // the sigma sequence is a function of the point set, not its order
    #[test]
    fn sigma_sequence_is_permutation_invariant(seed in 0u64..1u64 << 32, dim in 2usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = dim + 5;
        let cloud = random_cloud(&mut rng, dim, m);
        let mut perm: Vec<usize> = (0..m).collect();
        perm.shuffle(&mut rng);
        let shuffled: Vec<Vec<f64>> = perm.iter().map(|i| cloud.points[*i].clone()).collect();
        let cloud2 = PointCloud::new(cloud.space.clone(), shuffled).unwrap();
        let t1 = run_greedy(&cloud, dim.min(4), 1.0, 0).unwrap();
        let t2 = run_greedy(&cloud2, dim.min(4), 1.0, 0).unwrap();
        for (a, b) in t1.sigmas.iter().zip(&t2.sigmas) {
            prop_assert!((a - b).abs() <= 1e-9 * a.max(1.0), "{a} vs {b}");
        }
    }

    // replaying the selected points through sigma_profile reproduces the trace
    #[test]
    fn sigma_profile_replays_the_trace(seed in 0u64..1u64 << 32, dim in 2usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cloud = random_cloud(&mut rng, dim, dim + 4);
        let tr = run_greedy(&cloud, dim.min(4), 1.0, 0).unwrap();
        let picked: Vec<Vec<f64>> =
            tr.selected.iter().map(|i| cloud.points[*i].clone()).collect();
        let prof = sigma_profile(&cloud, &picked).unwrap();
        prop_assert_eq!(prof.len(), tr.sigmas.len());
        for (a, b) in prof.iter().zip(&tr.sigmas) {
            prop_assert!((a - b).abs() <= 1e-10 * a.max(1.0));
        }
    }

    // non-Euclidean norms run through the LP / descent distance paths
    #[test]
    fn lp_norm_selection_contract(seed in 0u64..1u64 << 32, dim in 2usize..6, pi in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let space = match pi {
            0 => AmbientSpace::<f64>::lp(dim, 1.0),
            1 => AmbientSpace::linf(dim),
            _ => AmbientSpace::lp(dim, 3.0),
        };
        let pts: Vec<Vec<f64>> = (0..dim + 3)
            .map(|_| (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect())
            .collect();
        let cloud = PointCloud::new(space, pts).unwrap();
        let tr = run_greedy(&cloud, dim.min(4), 1.0, 0).unwrap();
        let slack = if pi == 2 { 1e-5 } else { 1e-9 };
        for k in 1..tr.sigmas.len() {
            prop_assert!(tr.sigmas[k] <= tr.sigmas[k - 1] + slack);
        }
        for k in 0..tr.dists.len() {
            prop_assert!((tr.dists[k] - tr.sigmas[k]).abs() <= slack);
        }
    }
}
