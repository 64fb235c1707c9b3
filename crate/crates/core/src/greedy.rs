//! Greedy and weak greedy reduced-basis selection over a finite compact set,
//! with the full trace needed to verify the convergence bounds.

use crate::distance::dist_to_span;
use crate::error::{Error, Result};
use crate::ortho::OrthoBasis;
use crate::scalar::{cast, Scalar};
use crate::space::AmbientSpace;
use crate::tol;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Finite compact set: a list of vectors in a common ambient space.
/// Doubles as a snapshot manifold, in which case `labels` carries per-point
/// provenance (e.g. the coefficient sample that produced a snapshot).
#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Serialize")]
pub struct PointCloud<T: Scalar> {
    pub points: Vec<Vec<T>>,
    pub space: AmbientSpace<T>,
    pub labels: Option<Vec<String>>,
}

impl<T: Scalar> PointCloud<T> {
    pub fn new(space: AmbientSpace<T>, points: Vec<Vec<T>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySet);
        }
        for p in &points {
            space.check_dim(p)?;
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidParameter(
                    "non-finite point coordinate".into(),
                ));
            }
        }
        Ok(Self {
            points,
            space,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.points.len());
        self.labels = Some(labels);
        self
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Final basis produced by a greedy run: orthonormalized in inner-product
/// spaces, the raw selected vectors otherwise (no orthonormalization exists
/// in l_p).
#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Serialize")]
pub enum GreedyBasis<T: Scalar> {
    Orthonormal(OrthoBasis<T>),
    Raw(Vec<Vec<T>>),
}

/// Why a greedy run returned before reaching `n_max` steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GreedyStop {
    ReachedNMax,
    /// sigma fell below the early-stopping tolerance at the recorded step.
    Converged(usize),
}

#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Serialize")]
pub struct GreedyTrace<T: Scalar> {
    /// Point index selected at each step, in order.
    pub selected: Vec<usize>,
    /// dist(f_k, X_{k-1}) of the selected point, one entry per step.
    pub dists: Vec<T>,
    /// sigma_k = max over the cloud of dist(., X_k), for k = 0..=steps.
    pub sigmas: Vec<T>,
    pub gamma: T,
    pub basis: GreedyBasis<T>,
    pub stop: GreedyStop,
}

impl<T: Scalar> GreedyTrace<T> {
    /// CSV rows `step,selected_index,dist,sigma`: one row per step k >= 1 with
    /// sigma_k (the post-selection max distance). sigma_0 lives in the JSON
    /// report, not the CSV.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,selected_index,dist,sigma\n");
        for (k, idx) in self.selected.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                k + 1,
                idx,
                self.dists[k],
                self.sigmas[k + 1]
            ));
        }
        out
    }
}

/// Distances of every cloud point to the current subspace.
fn all_dists<T: Scalar>(cloud: &PointCloud<T>, basis: &GreedyBasis<T>) -> Result<Vec<T>> {
    match basis {
        GreedyBasis::Orthonormal(b) => cloud.points.iter().map(|p| b.residual_norm(p)).collect(),
        GreedyBasis::Raw(sel) => cloud
            .points
            .iter()
            .map(|p| dist_to_span(&cloud.space, sel, p))
            .collect(),
    }
}

/// Algorithm: at each step select a point whose distance to the current span
/// is at least `gamma` times the maximum (exactly the maximum for gamma = 1,
/// ties broken by lowest index; uniform seeded-random among admissible points
/// for gamma < 1). Stops early when sigma falls below `TOL_RANK_REL * sigma_0`.
pub fn run_greedy<T: Scalar>(
    cloud: &PointCloud<T>,
    n_max: usize,
    gamma: T,
    seed: u64,
) -> Result<GreedyTrace<T>> {
    if cloud.is_empty() {
        return Err(Error::EmptySet);
    }
    if gamma <= T::zero() || gamma > T::one() {
        return Err(Error::InvalidParameter("gamma must lie in (0, 1]".into()));
    }
    if n_max > cloud.len() {
        return Err(Error::InvalidParameter(format!(
            "n_max {} exceeds point count {}",
            n_max,
            cloud.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut basis = if cloud.space.is_inner_product() {
        GreedyBasis::Orthonormal(OrthoBasis::new(cloud.space.clone())?)
    } else {
        GreedyBasis::Raw(Vec::new())
    };
    let mut selected = Vec::new();
    let mut dists = Vec::new();
    let mut sigmas = Vec::new();
    let mut stop = GreedyStop::ReachedNMax;

    let d0 = all_dists(cloud, &basis)?;
    let sigma0 = d0.iter().fold(T::zero(), |m, x| m.max(*x));
    if sigma0 == T::zero() {
        return Err(Error::DegenerateSet);
    }
    sigmas.push(sigma0);
    let stop_tol = cast::<T>(tol::TOL_RANK_REL) * sigma0;

    let mut cur = d0;
    for step in 0..n_max {
        let sigma_prev = sigmas[step];
        if sigma_prev <= stop_tol {
            stop = GreedyStop::Converged(step);
            break;
        }
        // already-selected points have distance 0 in exact arithmetic;
        // excluding them guards against tolerance-level re-selection
        let pick = if gamma == T::one() {
            // argmax, lowest index on ties
            let mut best: Option<usize> = None;
            for (i, d) in cur.iter().enumerate() {
                if selected.contains(&i) {
                    continue;
                }
                match best {
                    None => best = Some(i),
                    Some(b) if *d > cur[b] => best = Some(i),
                    _ => {}
                }
            }
            best.expect("n_max <= point count leaves a candidate")
        } else {
            let admissible: Vec<usize> = (0..cur.len())
                .filter(|i| !selected.contains(i) && cur[*i] >= gamma * sigma_prev)
                .collect();
            admissible[rng.gen_range(0..admissible.len())]
        };
        selected.push(pick);
        dists.push(cur[pick]);
        match &mut basis {
            GreedyBasis::Orthonormal(b) => {
                // Selection guarantees the residual clears the rank tolerance.
                b.extend(&cloud.points[pick])?;
            }
            GreedyBasis::Raw(sel) => sel.push(cloud.points[pick].clone()),
        }
        cur = all_dists(cloud, &basis)?;
        sigmas.push(cur.iter().fold(T::zero(), |m, x| m.max(*x)));
    }
    Ok(GreedyTrace {
        selected,
        dists,
        sigmas,
        gamma,
        basis,
        stop,
    })
}

/// Re-evaluates sigma_k for an externally supplied selection: returns
/// sigma_0..sigma_len for the nested spans of the prefixes of `basis_points`.
/// Prefix vectors already inside the running span leave sigma unchanged.
pub fn sigma_profile<T: Scalar>(cloud: &PointCloud<T>, basis_points: &[Vec<T>]) -> Result<Vec<T>> {
    if cloud.is_empty() {
        return Err(Error::EmptySet);
    }
    for b in basis_points {
        cloud.space.check_dim(b)?;
    }
    let mut sigmas = Vec::with_capacity(basis_points.len() + 1);
    if cloud.space.is_inner_product() {
        let mut b = OrthoBasis::new(cloud.space.clone())?;
        let max_dist = |b: &OrthoBasis<T>| -> Result<T> {
            let mut m = T::zero();
            for p in &cloud.points {
                m = m.max(b.residual_norm(p)?);
            }
            Ok(m)
        };
        sigmas.push(max_dist(&b)?);
        for v in basis_points {
            match b.extend(v) {
                Ok(()) => {}
                Err(Error::RankDeficient) => {} // span unchanged
                Err(e) => return Err(e),
            }
            sigmas.push(max_dist(&b)?);
        }
    } else {
        for k in 0..=basis_points.len() {
            let prefix = &basis_points[..k];
            let mut m = T::zero();
            for p in &cloud.points {
                m = m.max(dist_to_span(&cloud.space, prefix, p)?);
            }
            sigmas.push(m);
        }
    }
    Ok(sigmas)
}
