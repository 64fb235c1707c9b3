//! The four verification experiments and their shared instance generators.
//!
//! Generators are deterministic in the master seed; the per-instance draw
//! order is part of the contract, since re-running with the same seed must
//! reproduce every table byte for byte.

pub mod lp_example;
pub mod oga_bounds;
pub mod pde;
pub mod rbm_theorem2;

use entropy_greedy::greedy::PointCloud;
use entropy_greedy::oga::Dictionary;
use entropy_greedy::space::AmbientSpace;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn box_points(rng: &mut ChaCha8Rng, dim: usize, m: usize) -> Vec<Vec<f64>> {
    (0..m)
        .map(|_| (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect())
        .collect()
}

/// Random Euclidean clouds: dim uniform in [2, max_dim], m uniform in
/// [max(dim, 3), max_m], coordinates uniform in [-1, 1].
pub fn euclidean_cloud_suite(
    seed: u64,
    count: usize,
    max_dim: usize,
    max_m: usize,
) -> Vec<PointCloud<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let dim = rng.gen_range(2..=max_dim);
            let m = rng.gen_range(dim.max(3)..=max_m);
            PointCloud::new(AmbientSpace::euclidean(dim), box_points(&mut rng, dim, m))
                .expect("generator produces valid clouds")
        })
        .collect()
}

/// The same random coordinates viewed in l_1 and in l_inf, for the
/// delta_n-factor comparison (dim uniform in [2, max_dim], m in [dim, max_m]).
pub fn lp_cloud_suite(
    seed: u64,
    count: usize,
    max_dim: usize,
    max_m: usize,
) -> Vec<(PointCloud<f64>, PointCloud<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let dim = rng.gen_range(2..=max_dim);
            let m = rng.gen_range(dim..=max_m);
            let pts = box_points(&mut rng, dim, m);
            (
                PointCloud::new(AmbientSpace::lp(dim, 1.0), pts.clone())
                    .expect("generator produces valid clouds"),
                PointCloud::new(AmbientSpace::linf(dim), pts)
                    .expect("generator produces valid clouds"),
            )
        })
        .collect()
}

pub struct DictInstance {
    pub dict: Dictionary<f64>,
    /// Convex combination of the normalized atoms, so its variation norm is
    /// at most one.
    pub f: Vec<f64>,
}

/// Random normalized dictionaries with hull targets: dim uniform in
/// [dim_lo, max_dim], raw atom count in [3, max_atoms] (near-zero atoms are
/// dropped before normalization).
pub fn dict_suite(
    seed: u64,
    count: usize,
    dim_lo: usize,
    max_dim: usize,
    max_atoms: usize,
) -> Vec<DictInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let dim = rng.gen_range(dim_lo..=max_dim);
            let m = rng.gen_range(3..=max_atoms);
            let atoms: Vec<Vec<f64>> = box_points(&mut rng, dim, m)
                .into_iter()
                .filter(|a| a.iter().any(|x| x.abs() > 1e-9))
                .collect();
            let dict = Dictionary::new(AmbientSpace::euclidean(dim), atoms, true)
                .expect("generator produces valid dictionaries");
            let mut w: Vec<f64> = (0..dict.len()).map(|_| rng.gen_range(0.0..1.0)).collect();
            let s: f64 = w.iter().sum();
            for x in w.iter_mut() {
                *x /= s;
            }
            let mut f = vec![0.0; dim];
            for (wi, g) in w.iter().zip(&dict.atoms) {
                for (fi, gi) in f.iter_mut().zip(g) {
                    *fi += wi * gi;
                }
            }
            DictInstance { dict, f }
        })
        .collect()
}

/// Orthogonal decaying axes 2^{-j} e_j, j = 0..dim-1, in Euclidean space.
pub fn decaying_axes(dim: usize) -> PointCloud<f64> {
    let pts: Vec<Vec<f64>> = (0..dim)
        .map(|j| {
            let mut v = vec![0.0; dim];
            v[j] = 0.5f64.powi(j as i32);
            v
        })
        .collect();
    PointCloud::new(AmbientSpace::euclidean(dim), pts).expect("valid axes cloud")
}

/// Coordinates x_j = 2^{-k alpha} on the k-th dyadic block
/// 2^{k-1} <= j <= 2^k - 1, together with the generator set {x_j e_j},
/// in dimension 2^depth - 1.
pub fn dyadic_coordinates(alpha: f64, depth: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
    let dim = (1usize << depth) - 1;
    let xs: Vec<f64> = (1..=dim)
        .map(|j| {
            let k = (j as f64).log2().floor() + 1.0;
            2f64.powf(-k * alpha)
        })
        .collect();
    let pts: Vec<Vec<f64>> = (0..dim)
        .map(|j| {
            let mut v = vec![0.0; dim];
            v[j] = xs[j];
            v
        })
        .collect();
    (xs, pts)
}

/// Piecewise-linear ramp atoms max(x-b, 0) and max(b-x, 0) for biases b on an
/// equispaced grid of [0, 1], sampled on grid_m points with the h-weighted
/// discrete L2 norm, normalized. Zero atoms are dropped.
pub fn ramp_dictionary(grid_m: usize, biases: usize) -> Dictionary<f64> {
    let h = 1.0 / (grid_m as f64 - 1.0);
    let space = AmbientSpace::weighted(vec![h; grid_m]);
    let xs: Vec<f64> = (0..grid_m).map(|i| i as f64 * h).collect();
    let mut atoms = Vec::new();
    for bi in 0..biases {
        let b = bi as f64 / (biases as f64 - 1.0);
        let up: Vec<f64> = xs.iter().map(|x| (x - b).max(0.0)).collect();
        let dn: Vec<f64> = xs.iter().map(|x| (b - x).max(0.0)).collect();
        if up.iter().any(|v| *v > 0.0) {
            atoms.push(up);
        }
        if dn.iter().any(|v| *v > 0.0) {
            atoms.push(dn);
        }
    }
    Dictionary::new(space, atoms, true).expect("valid ramp dictionary")
}

/// Smooth benchmark target sin(2 pi x) + cos(3x)/2 on the ramp grid.
pub fn ramp_target(grid_m: usize) -> Vec<f64> {
    let h = 1.0 / (grid_m as f64 - 1.0);
    (0..grid_m)
        .map(|i| {
            let x = i as f64 * h;
            (2.0 * std::f64::consts::PI * x).sin() + 0.5 * (3.0 * x).cos()
        })
        .collect()
}
