//! End-to-end acceptance battery: twelve independent checks covering the
//! greedy/entropy inequalities, the coordinate construction, the orthogonal
//! greedy bounds, the recurrence lemma, the Stirling anchor, the elliptic
//! solver, and byte-level reproducibility of the experiment binary.
//!
//! Every check prints exactly one line on real stdout (bypassing harness
//! capture) so a full run always shows the complete scoreboard, then the test
//! fails if any check failed.

use entropy_greedy::entropy::{
    delta_n_for_space, dyadic_block_rate_bound, entropy_hull, loglog_slope, stirling_factor,
    ConvexHullSet,
};
use entropy_greedy::greedy::{run_greedy, PointCloud};
use entropy_greedy::oga::{best_n_term, check_recurrence, run_oga, variation_norm};
use entropy_greedy::pde::{
    sample_manifold, solve_1d, CoefficientFamily, EllipticProblem1D, FamilyKind, ManifoldConfig,
};
use entropy_greedy::space::AmbientSpace;
use entropy_greedy_cli::experiments::{
    dict_suite, dyadic_coordinates, euclidean_cloud_suite, lp_cloud_suite, ramp_dictionary,
    ramp_target,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::io::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;

type Check = (&'static str, fn() -> Result<String, String>);

fn emit(line: &str) {
    // direct handle write, so the line survives libtest's output capture
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
}

fn fail(msg: impl Into<String>) -> Result<String, String> {
    Err(msg.into())
}

// 1: products of achieved greedy distances against the volume entropy bound
fn greedy_distance_products() -> Result<String, String> {
    let suite = euclidean_cloud_suite(1, 50, 12, 40);
    let mut violations = 0usize;
    let mut worst = f64::INFINITY;
    for cloud in &suite {
        let hull = ConvexHullSet::new(cloud.clone()).map_err(|e| e.to_string())?;
        let n_max = 8usize.min(cloud.space.dim).min(cloud.len());
        let tr = run_greedy(cloud, n_max, 1.0, 0).map_err(|e| e.to_string())?;
        for n in 1..=tr.dists.len() {
            let prod: f64 = tr.dists[..n].iter().product();
            let lhs = prod.powf(1.0 / n as f64);
            let est = entropy_hull(&hull, n).map_err(|e| e.to_string())?;
            let rhs = stirling_factor::<f64>(n) * est.upper;
            worst = worst.min(rhs - lhs);
            if lhs > rhs {
                violations += 1;
            }
        }
    }
    if violations > 0 {
        return fail(format!("{violations} violations, worst margin {worst:.3e}"));
    }
    Ok(format!(
        "50 Euclidean clouds, n <= 8, zero violations, tightest margin {worst:.3e}"
    ))
}

// 2: greedy distances under the inverse-gamma volume bound, strong and weak
fn greedy_sigma_bound_both_gammas() -> Result<String, String> {
    let suite = euclidean_cloud_suite(1, 50, 12, 40);
    let mut violations = 0usize;
    let mut worst = f64::INFINITY;
    for cloud in &suite {
        let hull = ConvexHullSet::new(cloud.clone()).map_err(|e| e.to_string())?;
        let n_max = 8usize.min(cloud.space.dim).min(cloud.len());
        for gamma in [1.0f64, 0.5] {
            let tr = run_greedy(cloud, n_max, gamma, 0).map_err(|e| e.to_string())?;
            for n in 1..tr.sigmas.len() {
                let est = entropy_hull(&hull, n).map_err(|e| e.to_string())?;
                let rhs = (1.0 / gamma) * stirling_factor::<f64>(n) * est.upper;
                worst = worst.min(rhs - tr.sigmas[n]);
                if tr.sigmas[n] > rhs {
                    violations += 1;
                }
            }
        }
    }
    if violations > 0 {
        return fail(format!("{violations} violations, worst margin {worst:.3e}"));
    }
    Ok(format!(
        "gamma in {{1, 0.5}} on 50 clouds, zero violations, tightest margin {worst:.3e}"
    ))
}

// 3: the same bound with the sqrt(n) dimension factor in l_1 and l_inf
fn lp_sigma_bound_with_dimension_factor() -> Result<String, String> {
    let suite = lp_cloud_suite(3, 30, 8, 16);
    let mut violations = 0usize;
    let mut worst = f64::INFINITY;
    for (c1, cinf) in &suite {
        for cloud in [c1, cinf] {
            let hull = ConvexHullSet::new(cloud.clone()).map_err(|e| e.to_string())?;
            let n_max = 6usize.min(cloud.space.dim).min(cloud.len());
            let tr = run_greedy(cloud, n_max, 1.0, 0).map_err(|e| e.to_string())?;
            for n in 1..tr.sigmas.len() {
                let est = entropy_hull(&hull, n).map_err(|e| e.to_string())?;
                let delta = delta_n_for_space(&cloud.space, n);
                let rhs = delta * stirling_factor::<f64>(n) * est.upper;
                worst = worst.min(rhs - tr.sigmas[n]);
                if tr.sigmas[n] > rhs {
                    violations += 1;
                }
            }
        }
    }
    if violations > 0 {
        return fail(format!("{violations} violations, worst margin {worst:.3e}"));
    }
    Ok(format!(
        "30 paired l_1/l_inf clouds, n^(1/2) factor, zero violations, tightest margin {worst:.3e}"
    ))
}

// 4: dyadic-block coordinate construction: exact greedy behavior and the
// predicted decay slope of the reference entropy rate
fn coordinate_construction_is_exact() -> Result<String, String> {
    let mut slopes = Vec::new();
    for (p, alpha) in [(2.0f64, 1.5f64), (4.0, 1.5)] {
        let (xs, pts) = dyadic_coordinates(alpha, 6);
        let dim = pts.len();
        let cloud = PointCloud::new(AmbientSpace::lp(dim, p), pts).map_err(|e| e.to_string())?;
        let run_n = 33usize.min(dim);
        let tr = run_greedy(&cloud, run_n, 1.0, 0).map_err(|e| e.to_string())?;
        if let Some((k, s)) = tr.selected.iter().enumerate().find(|(k, s)| **s != *k) {
            return fail(format!("p={p}: greedy picked coordinate {s} at step {k}"));
        }
        let mut sigma_err = 0.0f64;
        for (s, x) in tr.sigmas.iter().zip(&xs).take(run_n.min(dim - 1)) {
            sigma_err = sigma_err.max((s - x).abs());
        }
        if sigma_err > 1e-12 {
            return fail(format!("p={p}: max |sigma_n - x_(n+1)| = {sigma_err:.3e}"));
        }
        let ns: Vec<f64> = (8..=32).map(|n| n as f64).collect();
        let es: Vec<f64> = (8..=32)
            .map(|n| dyadic_block_rate_bound(alpha, p, n))
            .collect();
        let slope = loglog_slope(&ns, &es).ok_or("degenerate rate sequence")?;
        let target = -alpha - 1.0 + 1.0 / p + 0.2;
        if slope > target {
            return fail(format!(
                "p={p}: rate slope {slope:.3} above target {target:.3}"
            ));
        }
        slopes.push(format!("p={p}: slope {slope:.2} <= {target:.2}"));
    }
    Ok(format!(
        "index order and sigma_n = x_(n+1) exact; {}",
        slopes.join(", ")
    ))
}

// 5: orthogonal greedy residuals under the (n+1)^(-1/2) variation bound,
// with variation norms from the exact linear program
fn oga_classical_bound() -> Result<String, String> {
    let suite = dict_suite(2, 200, 3, 20, 40);
    let mut violations = 0usize;
    let mut worst = f64::INFINITY;
    for inst in &suite {
        let n_max = 15usize.min(inst.dict.space.dim).min(inst.dict.len());
        let tr = run_oga(&inst.dict, &inst.f, n_max, 1.0, 0).map_err(|e| e.to_string())?;
        let cert = variation_norm(&inst.dict, &inst.f).map_err(|e| e.to_string())?;
        let Some(v) = cert.value else {
            return fail("variation LP infeasible on a hull target".to_string());
        };
        for (n, r) in tr.residual_norms.iter().enumerate() {
            let rhs = v / ((n as f64) + 1.0).sqrt();
            worst = worst.min(rhs - r);
            if *r > rhs {
                violations += 1;
            }
        }
    }
    if violations > 0 {
        return fail(format!("{violations} violations, worst margin {worst:.3e}"));
    }
    Ok(format!(
        "200 random dictionaries, n <= 15, zero violations, tightest margin {worst:.3e}"
    ))
}

// 6: entropy-based residual bound on the same suite, plus the exact
// per-step residual recursion
fn oga_entropy_bound_and_recursion() -> Result<String, String> {
    let suite = dict_suite(2, 200, 3, 20, 40);
    let mut violations = 0usize;
    let mut worst = f64::INFINITY;
    let mut worst_rec = 0.0f64;
    for inst in &suite {
        let n_max = 15usize.min(inst.dict.space.dim).min(inst.dict.len());
        let tr = run_oga(&inst.dict, &inst.f, n_max, 1.0, 0).map_err(|e| e.to_string())?;
        for k in 0..tr.selected.len() {
            let lhs = tr.residual_norms[k + 1].powi(2);
            let rhs = tr.residual_norms[k].powi(2)
                - (tr.inner_products[k] / tr.atom_residual_norms[k]).powi(2);
            worst_rec = worst_rec.max((lhs - rhs).abs());
        }
        let Some(v) = variation_norm(&inst.dict, &inst.f)
            .map_err(|e| e.to_string())?
            .value
        else {
            return fail("variation LP infeasible on a hull target".to_string());
        };
        let cloud = PointCloud::new(inst.dict.space.clone(), inst.dict.atoms.clone())
            .map_err(|e| e.to_string())?;
        let hull = ConvexHullSet::new(cloud).map_err(|e| e.to_string())?;
        for n in 1..tr.residual_norms.len() {
            let est = entropy_hull(&hull, n).map_err(|e| e.to_string())?;
            if !est.upper.is_finite() {
                continue;
            }
            let rhs = stirling_factor::<f64>(n) / (n as f64).sqrt() * v * est.upper;
            worst = worst.min(rhs - tr.residual_norms[n]);
            if tr.residual_norms[n] > rhs {
                violations += 1;
            }
        }
    }
    if violations > 0 {
        return fail(format!("{violations} violations, worst margin {worst:.3e}"));
    }
    if worst_rec > 1e-10 {
        return fail(format!(
            "per-step recursion drift {worst_rec:.3e} above 1e-10"
        ));
    }
    Ok(format!(
        "zero violations, tightest margin {worst:.3e}, recursion drift {worst_rec:.1e}"
    ))
}

// 7: simulated damped recurrences against the closed-form harmonic bound
fn recurrence_bound_holds() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut violations = 0usize;
    for i in 0..100 {
        let big = i % 2 == 0;
        let a0: f64 = if big {
            rng.gen_range(0.5..=10.0)
        } else {
            rng.gen_range(0.01..=1.0)
        };
        let mut a = vec![a0];
        let mut bs = Vec::new();
        for _ in 0..1000 {
            let prev = *a.last().unwrap();
            let b = if big {
                // the admissible range scales like 1/prev; cap it so the
                // range stays finite once the sequence has decayed to the
                // subnormal floor
                if prev > 0.0 {
                    rng.gen_range(0.0..=(0.999 / prev).min(1e9))
                } else {
                    0.0
                }
            } else {
                rng.gen_range(0.0..=1.0)
            };
            let theta = rng.gen_range(0.5..=1.0);
            bs.push(b);
            a.push(theta * prev * (1.0 - b * prev).max(0.0));
        }
        let chk = check_recurrence(&a, &bs).map_err(|e| e.to_string())?;
        if !chk.recurrence_ok || !chk.bound_ok {
            violations += 1;
        }
    }
    if violations > 0 {
        return fail(format!("{violations} of 100 sequences broke the bound"));
    }
    Ok("100 sequences of 1000 steps, zero violations".to_string())
}

// 8: Stirling anchor for (n! V_n)^(1/n) / sqrt(n)
fn stirling_anchor() -> Result<String, String> {
    let limit = (2.0 * std::f64::consts::PI / std::f64::consts::E).sqrt();
    let r = |n: usize| stirling_factor::<f64>(n) / (n as f64).sqrt();
    let r100 = r(100);
    let rel = (r100 - limit).abs() / limit;
    if rel > 0.02 {
        return fail(format!(
            "n=100 value {r100:.6} off the limit by {:.2}%",
            rel * 100.0
        ));
    }
    let (r10, r1000) = (r(10), r(1000));
    if !(r10 > r100 && r100 > r1000 && r1000 > limit) {
        return fail(format!(
            "not monotone toward the limit: {r10:.6}, {r100:.6}, {r1000:.6}"
        ));
    }
    Ok(format!(
        "n=100 within {:.2}% of sqrt(2 pi / e), monotone at n in {{10, 100, 1000}}",
        rel * 100.0
    ))
}

// 9: elliptic solver anchors and fast greedy decay of a smooth snapshot set
fn elliptic_anchors_and_snapshot_decay() -> Result<String, String> {
    let p = EllipticProblem1D::<f64>::from_fns(199, |_| 1.0, |_| 1.0).map_err(|e| e.to_string())?;
    let u = solve_1d(&p).map_err(|e| e.to_string())?;
    let h = p.h();
    let mut err = 0.0f64;
    for (i, ui) in u.iter().enumerate() {
        let x = (i as f64 + 1.0) * h;
        err = err.max((ui - x * (1.0 - x) / 2.0).abs());
    }
    if err > 1e-4 {
        return fail(format!("unit-coefficient solve error {err:.3e} above 1e-4"));
    }

    let pi = std::f64::consts::PI;
    let mut errs = Vec::new();
    for gn in [99usize, 199, 399] {
        let p = EllipticProblem1D::<f64>::from_fns(
            gn,
            |x| 1.0 + x,
            |x| -pi * (pi * x).cos() + (1.0 + x) * pi * pi * (pi * x).sin(),
        )
        .map_err(|e| e.to_string())?;
        let u = solve_1d(&p).map_err(|e| e.to_string())?;
        let hh = 1.0 / (gn as f64 + 1.0);
        let mut e = 0.0f64;
        for (i, ui) in u.iter().enumerate() {
            e = e.max((ui - (pi * (i as f64 + 1.0) * hh).sin()).abs());
        }
        errs.push(e);
    }
    let (f1, f2) = (errs[0] / errs[1], errs[1] / errs[2]);
    if f1 < 3.5 || f2 < 3.5 {
        return fail(format!("convergence factors {f1:.2}, {f2:.2} below 3.5"));
    }

    let family = CoefficientFamily {
        kind: FamilyKind::HolderSmooth {
            smoothness: 2.0,
            terms: 24,
            m0: 1.0,
            m1: 3.0,
        },
        sample_count: 64,
    };
    let ms = sample_manifold(
        &family,
        &ManifoldConfig {
            grid_n: 199,
            seed: 42,
        },
    )
    .map_err(|e| e.to_string())?;
    if ms.failed > 0 {
        return fail(format!("{} snapshot solves failed", ms.failed));
    }
    let tr = run_greedy(&ms.cloud, 9, 1.0, 0).map_err(|e| e.to_string())?;
    let ratio = tr.sigmas[8] / tr.sigmas[1];
    if ratio > 0.2 {
        return fail(format!("sigma_8/sigma_1 = {ratio:.4} above 0.2"));
    }
    Ok(format!(
        "solve error {err:.1e}, factors {f1:.2}/{f2:.2}, sigma_8/sigma_1 = {ratio:.4}"
    ))
}

// 10: fitted decay of orthogonal greedy residuals on the ramp dictionary
// beats the generic -1/2 exponent with real room
fn ramp_dictionary_rate() -> Result<String, String> {
    let dict = ramp_dictionary(129, 65);
    let f = ramp_target(129);
    let tr = run_oga(&dict, &f, 20, 1.0, 0).map_err(|e| e.to_string())?;
    let last = tr.residual_norms.len() - 1;
    let ns: Vec<f64> = (4..=20).map(|n| n as f64).collect();
    let rs: Vec<f64> = (4..=20).map(|n| tr.residual_norms[n.min(last)]).collect();
    let slope = loglog_slope(&ns, &rs).ok_or("degenerate residual sequence")?;
    if slope > -0.75 {
        return fail(format!("fitted slope {slope:.3} above -0.75"));
    }
    Ok(format!(
        "fitted slope {slope:.2} <= -0.75 over n in [4, 20]"
    ))
}

// 11: best n-term errors sit under the greedy residuals and under the
// entropy bound for hull targets
fn best_n_term_floors() -> Result<String, String> {
    let suite = dict_suite(4, 100, 3, 10, 12);
    let mut viol_oga = 0usize;
    let mut viol_entropy = 0usize;
    for inst in &suite {
        let n_max = 6usize.min(inst.dict.space.dim).min(inst.dict.len());
        let tr = run_oga(&inst.dict, &inst.f, n_max, 1.0, 0).map_err(|e| e.to_string())?;
        let Some(v) = variation_norm(&inst.dict, &inst.f)
            .map_err(|e| e.to_string())?
            .value
        else {
            return fail("variation LP infeasible on a hull target".to_string());
        };
        let cloud = PointCloud::new(inst.dict.space.clone(), inst.dict.atoms.clone())
            .map_err(|e| e.to_string())?;
        let hull = ConvexHullSet::new(cloud).map_err(|e| e.to_string())?;
        for n in 1..tr.residual_norms.len() {
            let en = best_n_term(&inst.dict, &inst.f, n).map_err(|e| e.to_string())?;
            if en > tr.residual_norms[n] + 1e-9 {
                viol_oga += 1;
            }
            let est = entropy_hull(&hull, n).map_err(|e| e.to_string())?;
            let rhs = stirling_factor::<f64>(n) / (n as f64).sqrt() * v * est.upper;
            if en > rhs {
                viol_entropy += 1;
            }
        }
    }
    if viol_oga > 0 || viol_entropy > 0 {
        return fail(format!(
            "{viol_oga} violations against greedy, {viol_entropy} against the entropy bound"
        ));
    }
    Ok("100 small instances, zero violations on both comparisons".to_string())
}

// 12: every experiment reruns to byte-identical tables under the same seed
fn reruns_are_bit_identical() -> Result<String, String> {
    let exe = env!("CARGO_BIN_EXE_egx");
    let mut compared = 0usize;
    for sub in ["rbm-theorem2", "lp-example", "oga-bounds", "pde"] {
        let d1 = tempfile::tempdir().map_err(|e| e.to_string())?;
        let d2 = tempfile::tempdir().map_err(|e| e.to_string())?;
        for dir in [d1.path(), d2.path()] {
            let out = Command::new(exe)
                .args([sub, "--out"])
                .arg(dir)
                .output()
                .map_err(|e| e.to_string())?;
            if !out.status.success() {
                return fail(format!("{sub} exited with {:?}", out.status.code()));
            }
        }
        let names = csv_names(d1.path())?;
        if names != csv_names(d2.path())? {
            return fail(format!("{sub}: runs produced different table sets"));
        }
        if names.is_empty() {
            return fail(format!("{sub}: no tables written"));
        }
        for name in &names {
            let a = std::fs::read(d1.path().join(name)).map_err(|e| e.to_string())?;
            let b = std::fs::read(d2.path().join(name)).map_err(|e| e.to_string())?;
            if a != b {
                return fail(format!("{sub}: {name} differs between identical-seed runs"));
            }
            compared += 1;
        }
    }
    Ok(format!(
        "4 experiments rerun, {compared} tables byte-identical"
    ))
}

fn csv_names(dir: &Path) -> Result<Vec<String>, String> {
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".csv"))
        .collect();
    names.sort();
    Ok(names)
}

#[test]
fn acceptance_battery() {
    let checks: [Check; 12] = [
        (
            "greedy distance products vs volume entropy bound",
            greedy_distance_products,
        ),
        (
            "greedy sigma bound at gamma 1 and 1/2",
            greedy_sigma_bound_both_gammas,
        ),
        (
            "lp sigma bound with dimension factor",
            lp_sigma_bound_with_dimension_factor,
        ),
        (
            "dyadic coordinate construction",
            coordinate_construction_is_exact,
        ),
        ("orthogonal greedy classical bound", oga_classical_bound),
        (
            "orthogonal greedy entropy bound and recursion",
            oga_entropy_bound_and_recursion,
        ),
        ("damped recurrence harmonic bound", recurrence_bound_holds),
        ("stirling volume anchor", stirling_anchor),
        (
            "elliptic anchors and snapshot decay",
            elliptic_anchors_and_snapshot_decay,
        ),
        ("ramp dictionary greedy rate", ramp_dictionary_rate),
        ("best n-term floors", best_n_term_floors),
        (
            "identical-seed reruns byte-identical",
            reruns_are_bit_identical,
        ),
    ];
    let mut failures = Vec::new();
    for (i, (name, check)) in checks.iter().enumerate() {
        let tag = i + 1;
        match catch_unwind(AssertUnwindSafe(check)) {
            Ok(Ok(detail)) => emit(&format!("ACCEPT {tag:02} pass  {name}: {detail}")),
            Ok(Err(detail)) => {
                emit(&format!("ACCEPT {tag:02} FAIL  {name}: {detail}"));
                failures.push(tag);
            }
            Err(panic) => {
                let msg = panic
                    .downcast_ref::<&str>()
                    .map(|s| s.to_string())
                    .or_else(|| panic.downcast_ref::<String>().cloned())
                    .unwrap_or_else(|| "non-string panic".to_string());
                emit(&format!("ACCEPT {tag:02} FAIL  {name}: panicked: {msg}"));
                failures.push(tag);
            }
        }
    }
    assert!(
        failures.is_empty(),
        "acceptance checks failed: {failures:?}"
    );
}
