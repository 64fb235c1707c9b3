//! Experiment reports: one record per verified inequality, slope fits with
//! their declared windows, and the manifest of emitted tables and plots.
//!
//! Every verdict stores the operands of the tightest instance it covers, so
//! a reader can recompute it from the emitted tables alone.

use anyhow::{Context, Result};
use serde::Serialize;
use std::fs;
use std::path::Path;

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    /// Short inequality identifier, e.g. `theorem2.gamma1`.
    pub id: String,
    /// The inequality with its operands, human-readable.
    pub statement: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs` at the tightest instance; nonnegative means pass.
    pub margin: f64,
    pub pass: bool,
    /// Hard verdicts gate the process exit code; soft ones are diagnostics.
    pub hard: bool,
}

impl Verdict {
    /// Asserts `lhs <= rhs`.
    pub fn le(id: &str, statement: String, lhs: f64, rhs: f64, hard: bool) -> Self {
        Self {
            id: id.to_string(),
            statement,
            lhs,
            rhs,
            margin: rhs - lhs,
            pass: lhs <= rhs,
            hard,
        }
    }

    /// Asserts `value >= threshold`, stored as `threshold <= value`.
    pub fn ge(id: &str, statement: String, value: f64, threshold: f64, hard: bool) -> Self {
        Self::le(id, statement, threshold, value, hard)
    }
}

/// OLS slope of ln(y) against ln(x) over the recorded n-window.
#[derive(Debug, Clone, Serialize)]
pub struct SlopeFit {
    pub id: String,
    pub n_lo: usize,
    pub n_hi: usize,
    pub slope: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub seed: u64,
    pub verdicts: Vec<Verdict>,
    pub slopes: Vec<SlopeFit>,
    pub tables: Vec<String>,
    pub plots: Vec<String>,
    pub runtime_secs: f64,
}

impl ExperimentReport {
    pub fn new(experiment: &str, seed: u64) -> Self {
        Self {
            experiment: experiment.to_string(),
            seed,
            verdicts: Vec::new(),
            slopes: Vec::new(),
            tables: Vec::new(),
            plots: Vec::new(),
            runtime_secs: 0.0,
        }
    }

    pub fn push(&mut self, v: Verdict) {
        self.verdicts.push(v);
    }

    pub fn push_slope(&mut self, s: SlopeFit) {
        self.slopes.push(s);
    }

    pub fn all_hard_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass || !v.hard)
    }

    pub fn write_json(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let path = dir.join("report.json");
        let json = serde_json::to_string_pretty(self).context("serializing report")?;
        fs::write(&path, json + "\n").with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }

    /// One line per verdict plus a closing status line, to stdout.
    pub fn print_summary(&self) {
        for v in &self.verdicts {
            println!(
                "{} [{}] {}: {} (lhs={:.6e} rhs={:.6e} margin={:.3e})",
                if v.pass { "PASS" } else { "FAIL" },
                if v.hard { "hard" } else { "soft" },
                v.id,
                v.statement,
                v.lhs,
                v.rhs,
                v.margin,
            );
        }
        for s in &self.slopes {
            println!(
                "SLOPE {}: {:.4} over n in [{}, {}]",
                s.id, s.slope, s.n_lo, s.n_hi
            );
        }
        println!(
            "{}: {} in {:.2}s",
            self.experiment,
            if self.all_hard_pass() {
                "all hard verdicts pass"
            } else {
                "HARD VERDICT FAILED"
            },
            self.runtime_secs,
        );
    }
}

/// Writes a table and records it in the report manifest.
pub fn write_table(
    dir: &Path,
    name: &str,
    content: &str,
    report: &mut ExperimentReport,
) -> Result<()> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, content).with_context(|| format!("writing {}", path.display()))?;
    report.tables.push(name.to_string());
    Ok(())
}

/// Tracks the tightest (largest `lhs - rhs`) instance of an inequality over
/// a suite.
#[derive(Debug, Clone, Copy, Default)]
pub struct Tightest {
    seen: Option<(f64, f64)>,
}

impl Tightest {
    pub fn update(&mut self, lhs: f64, rhs: f64) {
        let keep = match self.seen {
            None => true,
            Some((l, r)) => lhs - rhs > l - r,
        };
        if keep {
            self.seen = Some((lhs, rhs));
        }
    }

    /// (lhs, rhs) of the tightest instance; (0, 0) when nothing was seen.
    pub fn pair(&self) -> (f64, f64) {
        self.seen.unwrap_or((0.0, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hard_failures_gate_the_report() {
        let mut r = ExperimentReport::new("x", 0);
        r.push(Verdict::le("a", "a <= b".into(), 1.0, 2.0, true));
        assert!(r.all_hard_pass());
        r.push(Verdict::le("b", "soft miss".into(), 3.0, 2.0, false));
        assert!(r.all_hard_pass());
        r.push(Verdict::le("c", "hard miss".into(), 3.0, 2.0, true));
        assert!(!r.all_hard_pass());
    }

    #[test]
    fn tightest_keeps_the_worst_pair() {
        let mut t = Tightest::default();
        t.update(1.0, 5.0);
        t.update(2.0, 3.0);
        t.update(0.0, 9.0);
        assert_eq!(t.pair(), (2.0, 3.0));
    }
}
