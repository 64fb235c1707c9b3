//! Instance generators shared by the integration suites.
#![allow(dead_code)]

use entropy_greedy::entropy::ConvexHullSet;
use entropy_greedy::greedy::PointCloud;
use entropy_greedy::oga::Dictionary;
use entropy_greedy::space::AmbientSpace;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random cloud with coordinates uniform in [-1, 1], Euclidean norm.
pub fn random_cloud(rng: &mut ChaCha8Rng, dim: usize, m: usize) -> PointCloud<f64> {
    let pts: Vec<Vec<f64>> = (0..m)
        .map(|_| (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect())
        .collect();
    PointCloud::new(AmbientSpace::euclidean(dim), pts).unwrap()
}

pub fn hull_of(cloud: &PointCloud<f64>) -> ConvexHullSet<f64> {
    ConvexHullSet::new(cloud.clone()).unwrap()
}

/// Normalized random dictionary plus a target inside its convex hull, so
/// the variation norm of the target is at most 1.
pub struct HullInstance {
    pub dict: Dictionary<f64>,
    pub f: Vec<f64>,
}

pub fn random_hull_instance(rng: &mut ChaCha8Rng, dim: usize, m: usize) -> HullInstance {
    let atoms: Vec<Vec<f64>> = (0..m)
        .map(|_| (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect())
        .collect();
    let atoms: Vec<Vec<f64>> = atoms
        .into_iter()
        .filter(|a| a.iter().any(|x| x.abs() > 1e-9))
        .collect();
    let dict = Dictionary::new(AmbientSpace::euclidean(dim), atoms, true).unwrap();
    let mut w: Vec<f64> = (0..dict.len()).map(|_| rng.gen_range(0.0..=1.0)).collect();
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
    HullInstance { dict, f }
}

/// Piecewise-linear ramp atoms max(wx - b, 0) for w in {1, -1} and biases on
/// an equispaced grid, sampled on grid_m points of [0, 1] with the
/// h-weighted discrete L2 norm. Zero atoms are dropped.
pub fn ramp_dictionary(grid_m: usize, biases: usize, normalize: bool) -> Dictionary<f64> {
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
    Dictionary::new(space, atoms, normalize).unwrap()
}

/// Ramp atoms max(wx + b, 0) with b spanning [-1, 1]; unnormalized, which
/// keeps the hull's coordinate box well spread for covering.
pub fn ramp_hull_atoms(grid_m: usize, biases: usize) -> (AmbientSpace<f64>, Vec<Vec<f64>>) {
    let h = 1.0 / (grid_m as f64 - 1.0);
    let space = AmbientSpace::weighted(vec![h; grid_m]);
    let xs: Vec<f64> = (0..grid_m).map(|i| i as f64 * h).collect();
    let mut atoms = Vec::new();
    for bi in 0..biases {
        let b = -1.0 + 2.0 * bi as f64 / (biases as f64 - 1.0);
        for w in [1.0, -1.0] {
            let a: Vec<f64> = xs.iter().map(|x| (w * x + b).max(0.0)).collect();
            if a.iter().any(|v| *v > 0.0) {
                atoms.push(a);
            }
        }
    }
    (space, atoms)
}

/// Decaying coordinate generators x_j e_j with x_j = 2^(-k alpha) on the
/// k-th dyadic block 2^(k-1) <= j <= 2^k - 1, in dimension 2^depth - 1.
pub fn dyadic_coordinate_points(alpha: f64, depth: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
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
