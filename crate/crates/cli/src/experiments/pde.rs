//! Elliptic model problems end-to-end: solver anchors with known solutions,
//! snapshot manifolds for a smooth and a geometric coefficient family, greedy
//! decay of the manifolds in discrete H^1, entropy brackets of the snapshot
//! cloud, and the coefficient-perturbation ratio family.

use crate::config::Config;
use crate::report::{write_table, ExperimentReport, SlopeFit, Verdict};
use crate::svg::{loglog_plot, Series};
use anyhow::Result;
use entropy_greedy::entropy::{entropy_pointset, loglog_slope};
use entropy_greedy::greedy::run_greedy;
use entropy_greedy::pde::{
    h1_norm_1d, perturbation_family_report, sample_manifold, solve_1d, CoefficientFamily,
    EllipticProblem1D, FamilyKind, ManifoldConfig,
};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

const PI: f64 = std::f64::consts::PI;

pub fn run(cfg: &Config) -> Result<ExperimentReport> {
    let t0 = Instant::now();
    let seed = cfg.get_u64("seed", 42)?;
    let smooth_samples = cfg.get_usize("smooth_samples", 64)?;
    let smooth_grid = cfg.get_usize("smooth_grid", 199)?;
    let smooth_terms = cfg.get_usize("smooth_terms", 24)?;
    let smoothness = cfg.get_f64("smoothness", 2.0)?;
    let m0 = cfg.get_f64("m0", 1.0)?;
    let m1 = cfg.get_f64("m1", 3.0)?;
    let geo_seed = cfg.get_u64("geo_seed", 7)?;
    let geo_samples = cfg.get_usize("geo_samples", 24)?;
    let geo_grid = cfg.get_usize("geo_grid", 23)?;
    let geo_terms = cfg.get_usize("geo_terms", 12)?;
    let n_max = cfg.get_usize("n_max", 16)?;
    let perturb_pairs = cfg.get_usize("perturb_pairs", 100)?;
    let perturb_grid = cfg.get_usize("perturb_grid", 99)?;
    let perturb_seed = cfg.get_u64("perturb_seed", 11)?;
    let p_exp = cfg.get_f64("p", 2.0)?;
    let out_dir = PathBuf::from(cfg.get_str("out_dir", "out/pde"));

    let mut report = ExperimentReport::new("pde", seed);

    // solver anchors
    let prob = EllipticProblem1D::<f64>::from_fns(199, |_| 1.0, |_| 1.0)?;
    let u = solve_1d(&prob)?;
    let h = prob.h();
    let mut par_err = 0.0f64;
    for (i, ui) in u.iter().enumerate() {
        let x = (i as f64 + 1.0) * h;
        par_err = par_err.max((ui - x * (1.0 - x) / 2.0).abs());
    }
    report.push(Verdict::le(
        "solver.parabola",
        "max nodal error of the unit-coefficient solve at grid_n = 199".into(),
        par_err,
        1e-4,
        true,
    ));

    let exact = |x: f64| (PI * x).sin();
    let mut errs = Vec::new();
    for gn in [99usize, 199, 399] {
        let p = EllipticProblem1D::<f64>::from_fns(
            gn,
            |x| 1.0 + x,
            |x| -PI * (PI * x).cos() + (1.0 + x) * PI * PI * (PI * x).sin(),
        )?;
        let u = solve_1d(&p)?;
        let hh = 1.0 / (gn as f64 + 1.0);
        let mut err = 0.0f64;
        for (i, ui) in u.iter().enumerate() {
            err = err.max((ui - exact((i as f64 + 1.0) * hh)).abs());
        }
        errs.push(err);
    }
    report.push(Verdict::ge(
        "solver.order2_99_199",
        "error reduction factor from grid 99 to 199 (variable coefficient)".into(),
        errs[0] / errs[1],
        3.5,
        true,
    ));
    report.push(Verdict::ge(
        "solver.order2_199_399",
        "error reduction factor from grid 199 to 399".into(),
        errs[1] / errs[2],
        3.5,
        true,
    ));

    // discrete H^1 norm of the parabola against the analytic value
    let gn = 399usize;
    let hh = 1.0 / (gn as f64 + 1.0);
    let up: Vec<f64> = (1..=gn)
        .map(|i| {
            let x = i as f64 * hh;
            x * (1.0 - x) / 2.0
        })
        .collect();
    let h1_expect = (1.0f64 / 120.0 + 1.0 / 12.0).sqrt();
    let h1_got = h1_norm_1d(&up);
    report.push(Verdict::le(
        "solver.h1_consistency",
        format!("|H1 norm - analytic {h1_expect:.6}| / analytic at grid_n = 399"),
        (h1_got - h1_expect).abs() / h1_expect,
        0.01,
        true,
    ));

    // smooth snapshot manifold
    let smooth_fam = CoefficientFamily {
        kind: FamilyKind::HolderSmooth {
            smoothness,
            terms: smooth_terms,
            m0,
            m1,
        },
        sample_count: smooth_samples,
    };
    let ms = sample_manifold(
        &smooth_fam,
        &ManifoldConfig {
            grid_n: smooth_grid,
            seed,
        },
    )?;
    report.push(Verdict::le(
        "manifold.smooth_failed",
        format!("failed snapshot solves out of {smooth_samples}"),
        ms.failed as f64,
        0.0,
        true,
    ));
    let n_run = n_max.min(ms.cloud.len());
    let tr = run_greedy(&ms.cloud, n_run, 1.0, 0)?;
    let mono = tr
        .sigmas
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(0.0f64, f64::max);
    report.push(Verdict::le(
        "manifold.smooth_monotone",
        "max increase between consecutive sigma_n (smooth family)".into(),
        mono,
        1e-12,
        true,
    ));
    let i8 = 8.min(tr.sigmas.len() - 1);
    report.push(Verdict::le(
        "manifold.smooth_decay",
        format!("sigma_8 / sigma_1 over {smooth_samples} snapshots at grid_n = {smooth_grid}"),
        tr.sigmas[i8] / tr.sigmas[1],
        0.2,
        true,
    ));
    let fit_hi = 12.min(tr.sigmas.len() - 1);
    let ns: Vec<f64> = (1..=fit_hi).map(|n| n as f64).collect();
    let ss: Vec<f64> = (1..=fit_hi).map(|n| tr.sigmas[n]).collect();
    if let Some(slope) = loglog_slope(&ns, &ss) {
        report.push_slope(SlopeFit {
            id: "manifold.smooth".into(),
            n_lo: 1,
            n_hi: fit_hi,
            slope,
        });
        report.push(Verdict::le(
            "manifold.smooth_slope",
            "fitted sigma_n slope of the smooth family".into(),
            slope,
            -0.5,
            false,
        ));
    }

    // geometric (interface) snapshot manifold
    let geo_fam = CoefficientFamily {
        kind: FamilyKind::Geometric {
            smoothness,
            terms: geo_terms,
        },
        sample_count: geo_samples,
    };
    let mg = sample_manifold(
        &geo_fam,
        &ManifoldConfig {
            grid_n: geo_grid,
            seed: geo_seed,
        },
    )?;
    report.push(Verdict::le(
        "manifold.geometric_failed",
        format!("failed snapshot solves out of {geo_samples}"),
        mg.failed as f64,
        0.0,
        true,
    ));
    let tg = run_greedy(&mg.cloud, n_max.min(12).min(mg.cloud.len()), 1.0, 0)?;
    let mono_g = tg
        .sigmas
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(0.0f64, f64::max);
    report.push(Verdict::le(
        "manifold.geometric_monotone",
        "max increase between consecutive sigma_n (geometric family)".into(),
        mono_g,
        1e-12,
        true,
    ));
    let g8 = 8.min(tg.sigmas.len() - 1);
    report.push(Verdict::le(
        "manifold.contrast",
        "smooth sigma_8/sigma_1 should undercut the interface family's".into(),
        tr.sigmas[i8] / tr.sigmas[1],
        tg.sigmas[g8] / tg.sigmas[1],
        false,
    ));

    let mut decay_table = String::from("n,sigma_smooth,sigma_geometric\n");
    for n in 0..tr.sigmas.len().max(tg.sigmas.len()) {
        let s = tr.sigmas.get(n).map(|v| v.to_string()).unwrap_or_default();
        let g = tg.sigmas.get(n).map(|v| v.to_string()).unwrap_or_default();
        let _ = writeln!(decay_table, "{n},{s},{g}");
    }

    // entropy brackets of the smooth snapshot cloud (collapse to zero once
    // 2^n reaches the snapshot count)
    let mut ent_table = String::from("n,lower,upper,method_lower,method_upper\n");
    let mut bracket_violation = 0.0f64;
    for n in 1..=6 {
        let est = entropy_pointset(&ms.cloud, n)?;
        bracket_violation = bracket_violation.max(est.lower - est.upper);
        let _ = writeln!(
            ent_table,
            "{n},{},{},{},{}",
            est.lower,
            est.upper,
            est.method_lower.as_str(),
            est.method_upper.as_str()
        );
    }
    report.push(Verdict::le(
        "manifold.entropy_brackets",
        "max (lower - upper) over snapshot-cloud entropy brackets, n <= 6".into(),
        bracket_violation,
        0.0,
        true,
    ));

    // coefficient-perturbation ratios across the smooth family
    let kind = FamilyKind::HolderSmooth {
        smoothness,
        terms: smooth_terms,
        m0,
        m1,
    };
    let rep = perturbation_family_report(&kind, perturb_grid, perturb_pairs, p_exp, perturb_seed)?;
    report.push(Verdict::le(
        "perturbation.finite",
        format!("non-finite ratios over {perturb_pairs} coefficient pairs (p = {p_exp})"),
        rep.ratios.iter().filter(|r| !r.is_finite()).count() as f64,
        0.0,
        true,
    ));
    report.push(Verdict::le(
        "perturbation.spread",
        "max/median perturbation ratio across the family".into(),
        rep.max_over_median,
        50.0,
        true,
    ));
    let mut perturb_table = String::from("pair,ratio\n");
    for (i, r) in rep.ratios.iter().enumerate() {
        let _ = writeln!(perturb_table, "{i},{r}");
    }

    write_table(&out_dir, "sigma_decay.csv", &decay_table, &mut report)?;
    write_table(&out_dir, "entropy_snapshots.csv", &ent_table, &mut report)?;
    write_table(&out_dir, "perturbation.csv", &perturb_table, &mut report)?;
    write_table(&out_dir, "snapshots_smooth.csv", &ms.to_csv(), &mut report)?;
    write_table(
        &out_dir,
        "snapshots_geometric.csv",
        &mg.to_csv(),
        &mut report,
    )?;

    let ns_s: Vec<f64> = (1..tr.sigmas.len()).map(|n| n as f64).collect();
    let ss_s: Vec<f64> = tr.sigmas[1..].iter().map(|s| s / tr.sigmas[0]).collect();
    let ns_g: Vec<f64> = (1..tg.sigmas.len()).map(|n| n as f64).collect();
    let ss_g: Vec<f64> = tg.sigmas[1..].iter().map(|s| s / tg.sigmas[0]).collect();
    loglog_plot(
        "greedy decay: smooth vs geometric coefficient family",
        "n",
        "sigma_n / sigma_0",
        &[
            Series {
                label: "smooth (1D, grid 199)",
                xs: &ns_s,
                ys: &ss_s,
            },
            Series {
                label: "geometric (2D, grid 23)",
                xs: &ns_g,
                ys: &ss_g,
            },
        ],
        &out_dir.join("manifold_decay.svg"),
    )?;
    report.plots.push("manifold_decay.svg".into());

    report.runtime_secs = t0.elapsed().as_secs_f64();
    report.write_json(&out_dir)?;
    Ok(report)
}
