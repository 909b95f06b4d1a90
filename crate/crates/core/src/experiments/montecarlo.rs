//! Arrowing probabilities of `G(n,p)`, threshold bisection and sharpness
//! windows.
//!
//! Trials are keyed by `(seed, index)` through [`Seed::child`], so results do
//! not depend on the thread count. Undecided trials are counted and left out
//! of every estimate.

use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arrowing::{decide_arrow, SolverOptions, SolverStats};
use crate::error::{LabError, Result};
use crate::graph::{Graph, Seed};

/// Two-sided normal quantile for 95% intervals.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson(k: usize, n: usize, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let (k, n) = (k as f64, n as f64);
    let ph = k / n;
    let z2 = z * z;
    let den = 1.0 + z2 / n;
    let centre = (ph + z2 / (2.0 * n)) / den;
    let half = z * (ph * (1.0 - ph) / n + z2 / (4.0 * n * n)).sqrt() / den;
    let lo = if k == 0.0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if k == n { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

/// Something that answers "does this random instance have the property".
pub trait VerdictOracle: Sync {
    /// `None` for an undecided trial.
    fn trial(&self, n: usize, p: f64, seed: Seed) -> Result<Option<bool>>;
}

/// The real thing: `G(n,p) -> (F)_2^e` via the solver.
pub struct ArrowOracle<'a> {
    pub f: &'a Graph,
    pub opts: SolverOptions,
}

impl VerdictOracle for ArrowOracle<'_> {
    fn trial(&self, n: usize, p: f64, seed: Seed) -> Result<Option<bool>> {
        Ok(arrow_trial(self.f, n, p, seed, &self.opts)?.verdict.decided())
    }
}

/// Verdict `p > p0`.
pub struct StepOracle {
    pub p0: f64,
}

impl VerdictOracle for StepOracle {
    fn trial(&self, _n: usize, p: f64, _seed: Seed) -> Result<Option<bool>> {
        Ok(Some(p > self.p0))
    }
}

/// Bernoulli verdicts with `P = 1/(1 + exp(-(c - c_mid)/s))` in the scaled
/// constant `c = p n^{exponent}`, with `s` chosen so the window
/// `(c_0.9 - c_0.1)/c_0.5` equals `width(n)`.
pub struct LogisticOracle {
    pub exponent: f64,
    pub c_mid: f64,
    pub width: fn(usize) -> f64,
}

impl LogisticOracle {
    pub fn scale(&self, n: usize) -> f64 {
        (self.width)(n) * self.c_mid / (2.0 * 9f64.ln())
    }
}

impl VerdictOracle for LogisticOracle {
    fn trial(&self, n: usize, p: f64, seed: Seed) -> Result<Option<bool>> {
        let c = p * (n as f64).powf(self.exponent);
        let prob = 1.0 / (1.0 + (-(c - self.c_mid) / self.scale(n)).exp());
        Ok(Some(seed.rng().gen::<f64>() < prob))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum TrialVerdict {
    Arrows,
    NotArrows,
    Undecided,
}

impl TrialVerdict {
    pub fn decided(self) -> Option<bool> {
        match self {
            TrialVerdict::Arrows => Some(true),
            TrialVerdict::NotArrows => Some(false),
            TrialVerdict::Undecided => None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TrialRecord {
    pub n: usize,
    pub p: f64,
    pub seed: Seed,
    pub verdict: TrialVerdict,
    pub stats: Option<SolverStats>,
    pub wall_ms: f64,
}

pub fn arrow_trial(f: &Graph, n: usize, p: f64, seed: Seed, opts: &SolverOptions) -> Result<TrialRecord> {
    let start = Instant::now();
    let g = Graph::gnp(n, p, seed)?;
    let (verdict, stats) = match decide_arrow(&g, f, opts) {
        Ok(r) => (if r.arrows() { TrialVerdict::Arrows } else { TrialVerdict::NotArrows }, Some(r.stats)),
        Err(LabError::BudgetExceeded { .. }) => (TrialVerdict::Undecided, None),
        Err(e) => return Err(e),
    };
    Ok(TrialRecord { n, p, seed, verdict, stats, wall_ms: start.elapsed().as_secs_f64() * 1e3 })
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Estimate {
    pub n: usize,
    pub p: f64,
    pub trials: usize,
    pub successes: usize,
    pub undecided: usize,
    pub estimate: f64,
    pub low: f64,
    pub high: f64,
}

fn summarize(n: usize, p: f64, verdicts: &[Option<bool>]) -> Result<Estimate> {
    let undecided = verdicts.iter().filter(|v| v.is_none()).count();
    let decided = verdicts.len() - undecided;
    if decided == 0 {
        return Err(LabError::Empty(format!("all {} trials undecided at n={n}, p={p}", verdicts.len())));
    }
    let successes = verdicts.iter().filter(|v| **v == Some(true)).count();
    let (low, high) = wilson(successes, decided, Z95);
    Ok(Estimate {
        n,
        p,
        trials: verdicts.len(),
        successes,
        undecided,
        estimate: successes as f64 / decided as f64,
        low,
        high,
    })
}

/// Runs `trials` independent oracle trials at `(n, p)`.
pub fn estimate_with(oracle: &dyn VerdictOracle, n: usize, p: f64, trials: usize, seed: Seed) -> Result<Estimate> {
    if trials == 0 {
        return Err(LabError::param("trials must be at least 1"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(LabError::param("p must lie in [0, 1]"));
    }
    let verdicts: Vec<Option<bool>> = (0..trials)
        .into_par_iter()
        .map(|i| oracle.trial(n, p, seed.child(i as u64)))
        .collect::<Result<_>>()?;
    summarize(n, p, &verdicts)
}

/// `P(G(n,p) -> (F)_2^e)` with a Wilson interval over decided trials.
pub fn estimate_arrow_probability(
    f: &Graph,
    n: usize,
    p: f64,
    trials: usize,
    seed: Seed,
    opts: &SolverOptions,
) -> Result<Estimate> {
    estimate_with(&ArrowOracle { f, opts: opts.clone() }, n, p, trials, seed)
}

/// Like [`estimate_arrow_probability`] but keeps every trial record.
pub fn arrow_trials(
    f: &Graph,
    n: usize,
    p: f64,
    trials: usize,
    seed: Seed,
    opts: &SolverOptions,
) -> Result<(Estimate, Vec<TrialRecord>)> {
    if trials == 0 {
        return Err(LabError::param("trials must be at least 1"));
    }
    let records: Vec<TrialRecord> = (0..trials)
        .into_par_iter()
        .map(|i| arrow_trial(f, n, p, seed.child(i as u64), opts))
        .collect::<Result<_>>()?;
    let verdicts: Vec<Option<bool>> = records.iter().map(|r| r.verdict.decided()).collect();
    Ok((summarize(n, p, &verdicts)?, records))
}

/// `p = c n^{-exponent}`, clamped to 1.
pub fn scaled_p(c: f64, n: usize, exponent: f64) -> (f64, bool) {
    let p = c * (n as f64).powf(-exponent);
    if p > 1.0 {
        (1.0, true)
    } else {
        (p, false)
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Probe {
    pub c: f64,
    pub p: f64,
    pub clamped: bool,
    pub estimate: f64,
    pub undecided: usize,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Bisection {
    pub n: usize,
    pub level: f64,
    pub c_hat: f64,
    pub clamped: bool,
    pub probes: Vec<Probe>,
}

#[derive(Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BisectParams {
    /// `1/m2(F)`.
    pub exponent: f64,
    pub trials: usize,
    pub level: f64,
    pub tol: f64,
    pub c_lo: f64,
    pub c_hi: f64,
}

/// Bisection on `c` for the point where the estimate crosses `level`, with
/// fresh trials at every probe.
pub fn bisect_threshold_constant(
    oracle: &dyn VerdictOracle,
    n: usize,
    params: &BisectParams,
    seed: Seed,
) -> Result<Bisection> {
    let BisectParams { exponent, trials, level, tol, c_lo, c_hi } = *params;
    if !(c_lo >= 0.0 && c_lo < c_hi) || tol <= 0.0 || !(0.0 < level && level < 1.0) {
        return Err(LabError::param("need 0 <= c_lo < c_hi, tol > 0 and 0 < level < 1"));
    }
    let mut probes = Vec::new();
    let probe = |c: f64, probes: &mut Vec<Probe>| -> Result<f64> {
        let (p, clamped) = scaled_p(c, n, exponent);
        let est = estimate_with(oracle, n, p, trials, seed.child(probes.len() as u64))?;
        probes.push(Probe { c, p, clamped, estimate: est.estimate, undecided: est.undecided });
        Ok(est.estimate)
    };
    let (mut lo, mut hi) = (c_lo, c_hi);
    if probe(lo, &mut probes)? >= level || probe(hi, &mut probes)? < level {
        return Err(LabError::Empty(format!(
            "no bracket for level {level} in c range [{c_lo}, {c_hi}] at n={n}"
        )));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if probe(mid, &mut probes)? >= level {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let c_hat = 0.5 * (lo + hi);
    let clamped = probes.iter().any(|p| p.clamped);
    Ok(Bisection { n, level, c_hat, clamped, probes })
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WindowRow {
    pub n: usize,
    pub c10: f64,
    pub c50: f64,
    pub c90: f64,
    pub width: f64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WindowTable {
    pub rows: Vec<WindowRow>,
    /// "narrowing", "widening", "flat" or "mixed" as `n` grows.
    pub trend: String,
}

/// `(ĉ_0.9 - ĉ_0.1)/ĉ_0.5` for each `n`.
pub fn sharpness_window(
    oracle: &dyn VerdictOracle,
    ns: &[usize],
    params: &BisectParams,
    seed: Seed,
) -> Result<WindowTable> {
    let mut rows = Vec::new();
    for (i, &n) in ns.iter().enumerate() {
        let mut cs = [0.0; 3];
        for (j, level) in [0.1, 0.5, 0.9].into_iter().enumerate() {
            let p = BisectParams { level, ..*params };
            cs[j] = bisect_threshold_constant(oracle, n, &p, seed.child((i * 3 + j) as u64))?.c_hat;
        }
        let width = (cs[2] - cs[0]) / cs[1];
        rows.push(WindowRow { n, c10: cs[0], c50: cs[1], c90: cs[2], width });
    }
    let diffs: Vec<f64> = rows.windows(2).map(|w| w[1].width - w[0].width).collect();
    let trend = if diffs.is_empty() || diffs.iter().all(|d| d.abs() <= 1e-12) {
        "flat"
    } else if diffs.iter().all(|&d| d <= 0.0) {
        "narrowing"
    } else if diffs.iter().all(|&d| d >= 0.0) {
        "widening"
    } else {
        "mixed"
    };
    Ok(WindowTable { rows, trend: trend.to_string() })
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CurvePoint {
    pub n: usize,
    pub c: f64,
    pub p: f64,
    pub clamped: bool,
    pub estimate: f64,
    pub low: f64,
    pub high: f64,
    pub undecided: usize,
    pub trials: usize,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ThresholdCurve {
    pub points: Vec<CurvePoint>,
    /// Linear interpolation of the estimates at 1/2.
    pub crossing: Option<f64>,
    pub window: (Option<f64>, Option<f64>),
}

fn interpolate(points: &[CurvePoint], level: f64) -> Option<f64> {
    points.windows(2).find_map(|w| {
        let (a, b) = (&w[0], &w[1]);
        if a.estimate < level && b.estimate >= level {
            Some(a.c + (level - a.estimate) / (b.estimate - a.estimate) * (b.c - a.c))
        } else {
            None
        }
    })
}

/// Estimates on a grid of `c` values with `p = c n^{-exponent}`.
pub fn threshold_curve(
    oracle: &dyn VerdictOracle,
    n: usize,
    exponent: f64,
    cs: &[f64],
    trials: usize,
    seed: Seed,
) -> Result<ThresholdCurve> {
    let mut points = Vec::new();
    for (i, &c) in cs.iter().enumerate() {
        let (p, clamped) = scaled_p(c, n, exponent);
        let e = estimate_with(oracle, n, p, trials, seed.child(i as u64))?;
        points.push(CurvePoint {
            n,
            c,
            p,
            clamped,
            estimate: e.estimate,
            low: e.low,
            high: e.high,
            undecided: e.undecided,
            trials,
        });
    }
    let crossing = interpolate(&points, 0.5);
    let window = (interpolate(&points, 0.1), interpolate(&points, 0.9));
    Ok(ThresholdCurve { points, crossing, window })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::complete;

    #[test]
    fn wilson_interval() {
        let (lo, hi) = wilson(0, 10, Z95);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.2 && hi < 0.35);
        assert_eq!(wilson(0, 50, Z95).0, 0.0);
        assert_eq!(wilson(50, 50, Z95).1, 1.0);
        let (lo, hi) = wilson(50, 100, Z95);
        assert!((lo + hi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn extremes() {
        let k3 = complete(3);
        let opts = SolverOptions::default();
        let e = estimate_arrow_probability(&k3, 6, 1.0, 10, Seed::new(1), &opts).unwrap();
        assert_eq!((e.estimate, e.undecided), (1.0, 0));
        let e = estimate_arrow_probability(&k3, 10, 0.0, 10, Seed::new(1), &opts).unwrap();
        assert_eq!(e.estimate, 0.0);
        assert!(estimate_arrow_probability(&k3, 10, 0.5, 0, Seed::new(1), &opts).is_err());
        let tiny = SolverOptions { budget_nodes: 0, ..opts };
        assert!(matches!(
            estimate_arrow_probability(&k3, 12, 1.0, 3, Seed::new(1), &tiny),
            Err(LabError::Empty(_))
        ));
    }

    #[test]
    fn step_bisection() {
        let n = 20;
        let exponent = 0.5;
        let oracle = StepOracle { p0: 0.3 };
        let params = BisectParams { exponent, trials: 5, level: 0.5, tol: 1e-3, c_lo: 0.0, c_hi: 4.0 };
        let b = bisect_threshold_constant(&oracle, n, &params, Seed::new(3)).unwrap();
        assert!((b.c_hat - 0.3 * 20f64.sqrt()).abs() <= 1e-3);
        let again = bisect_threshold_constant(&oracle, n, &params, Seed::new(3)).unwrap();
        assert_eq!(b.probes.len(), again.probes.len());
        let bad = BisectParams { c_lo: 2.0, ..params };
        assert!(bisect_threshold_constant(&oracle, n, &bad, Seed::new(3)).is_err());
    }

    #[test]
    fn clamping_is_flagged() {
        let oracle = StepOracle { p0: 0.9 };
        let params = BisectParams { exponent: 0.5, trials: 3, level: 0.5, tol: 1e-2, c_lo: 0.0, c_hi: 10.0 };
        let b = bisect_threshold_constant(&oracle, 6, &params, Seed::new(0)).unwrap();
        assert!(b.clamped);
    }
}
