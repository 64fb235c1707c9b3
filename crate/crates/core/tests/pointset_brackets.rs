//! Certified covering-number brackets for finite point sets: closed-form
//! anchors, witness verification, and cross-n consistency.

mod common;

use common::random_cloud;
use entropy_greedy::cover::verify_cover;
use entropy_greedy::entropy::{
    entropy_pointset, estimates_to_csv, monotone_upper_envelope, EntropyMethod, EntropyWitness,
};
use entropy_greedy::greedy::PointCloud;
use entropy_greedy::space::AmbientSpace;
use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn two_points_cover_themselves() {
    let cloud = PointCloud::new(
        AmbientSpace::euclidean(2),
        vec![vec![0.0f64, 0.0], vec![1.0, 0.0]],
    )
    .unwrap();
    let est = entropy_pointset(&cloud, 1).unwrap();
    assert_eq!(est.lower, 0.0);
    assert_eq!(est.upper, 0.0);
}

// Unit-square corners with a 2-ball budget: optimal is two side-midpoint
// balls of radius 1/2, found by the exact assignment search.
#[test]
fn square_corners_split_at_one_half() {
    let corners = vec![
        vec![0.0f64, 0.0],
        vec![1.0, 0.0],
        vec![0.0, 1.0],
        vec![1.0, 1.0],
    ];
    let cloud = PointCloud::new(AmbientSpace::euclidean(2), corners).unwrap();
    let est = entropy_pointset(&cloud, 1).unwrap();
    assert!((est.lower - 0.5).abs() <= 1e-12, "lower {}", est.lower);
    assert!((est.upper - 0.5).abs() <= 1e-12, "upper {}", est.upper);
    assert_eq!(est.method_upper, EntropyMethod::ExactSmall);
}

// epsilon_{s+t}(A union B) <= epsilon_s(A) + epsilon_t(B): the union of the
// two witness covers is itself a valid cover, and on these sizes every
// bracket comes from the exact search.
#[test]
fn union_bracket_is_subadditive() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..10 {
        let dim = rng.gen_range(2..=4);
        let a_pts: Vec<Vec<f64>> = (0..5)
            .map(|_| (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect())
            .collect();
        let b_pts: Vec<Vec<f64>> = (0..5)
            .map(|_| (0..dim).map(|_| 4.0 + rng.gen_range(-1.0..=1.0)).collect())
            .collect();
        let space = AmbientSpace::euclidean(dim);
        let a = PointCloud::new(space.clone(), a_pts.clone()).unwrap();
        let b = PointCloud::new(space.clone(), b_pts.clone()).unwrap();
        let mut union_pts = a_pts;
        union_pts.extend(b_pts);
        let u = PointCloud::new(space, union_pts).unwrap();
        let ea = entropy_pointset(&a, 1).unwrap();
        let eb = entropy_pointset(&b, 1).unwrap();
        let eu = entropy_pointset(&u, 2).unwrap();
        assert!(
            eu.upper <= ea.upper + eb.upper + 1e-12,
            "{} vs {} + {}",
            eu.upper,
            ea.upper,
            eb.upper
        );
    }
}

#[test]
fn csv_lists_one_row_per_budget() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cloud = random_cloud(&mut rng, 3, 12);
    let ests: Vec<_> = (1..=3)
        .map(|n| entropy_pointset(&cloud, n).unwrap())
        .collect();
    let csv = estimates_to_csv(&ests);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,lower,upper,method_lower,method_upper");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("1,"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // lower <= upper, witness centers within budget, witness actually covers
    #[test]
    fn bracket_is_valid_and_witnessed(seed in 0u64..1u64 << 32, dim in 1usize..6, m in 2usize..21, n in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cloud = random_cloud(&mut rng, dim, m);
        let est = entropy_pointset(&cloud, n).unwrap();
        prop_assert!(est.lower <= est.upper + 1e-12);
        prop_assert!(est.lower >= 0.0);
        match &est.witness {
            EntropyWitness::Centers(centers) => {
                prop_assert!(centers.len() <= 1usize << n);
                prop_assert!(verify_cover(&cloud.space, &cloud.points, centers, est.upper));
            }
            other => prop_assert!(false, "pointset witness should be centers, got {other:?}"),
        }
    }

    // self-cover: m <= 2^n points need no radius at all
    #[test]
    fn small_sets_have_zero_bracket(seed in 0u64..1u64 << 32, dim in 1usize..5, n in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = rng.gen_range(1..=(1usize << n));
        let cloud = random_cloud(&mut rng, dim, m);
        let est = entropy_pointset(&cloud, n).unwrap();
        prop_assert_eq!(est.upper, 0.0);
        prop_assert_eq!(est.lower, 0.0);
    }

    // raw lower at n+1 stays below raw upper at n; envelope is monotone
    #[test]
    fn brackets_are_consistent_across_budgets(seed in 0u64..1u64 << 32, dim in 2usize..5, m in 6usize..24) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cloud = random_cloud(&mut rng, dim, m);
        let ests: Vec<_> = (1..=5).map(|n| entropy_pointset(&cloud, n).unwrap()).collect();
        for w in ests.windows(2) {
            prop_assert!(w[1].lower <= w[0].upper + 1e-9);
        }
        let env = monotone_upper_envelope(&ests);
        for w in env.windows(2) {
            prop_assert!(w[1] <= w[0]);
        }
        for (e, v) in ests.iter().zip(&env) {
            prop_assert!(*v <= e.upper);
        }
    }
}
