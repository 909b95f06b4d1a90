//! Empirical rates of the random-graph properties (Z1)-(Z5).

use std::collections::HashMap;

use rand::seq::index::sample;
use rayon::prelude::*;
use serde::Serialize;

use super::montecarlo::{wilson, Z95};
use crate::booster::{classify_bad, random_embedding, BoosterSpec};
use crate::counting::copies::{p_candidates, p_count};
use crate::counting::embed::automorphisms;
use crate::counting::{count_f_minus, count_f_minus_through, f_minus_two_members};
use crate::error::{LabError, Result};
use crate::graph::{Edge, Graph, Seed};
use crate::pattern::m2;
use crate::rational::{self, Rational};

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ZParams {
    pub n: usize,
    pub p: f64,
    pub d: f64,
    pub zeta: f64,
    #[serde(with = "crate::rational::serde_str")]
    pub delta: Rational,
    pub trials: usize,
    /// Edge pairs examined for (Z4); `None` checks all pairs.
    pub pair_samples: Option<usize>,
    /// Uniform embeddings examined for (Z5).
    pub embedding_samples: usize,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ZTrial {
    pub seed: Seed,
    pub edges: usize,
    pub f_minus: usize,
    /// `|F-(Z)| / n²`.
    pub f_minus_norm: f64,
    /// `max_e |F-(Z,e)| · p`.
    pub max_through_p: f64,
    pub pairs_checked: usize,
    pub heavy_pairs: usize,
    pub heavy_fraction: f64,
    /// Heavy pairs scaled to all pairs.
    pub heavy_estimate: f64,
    pub embeddings_checked: usize,
    pub bad_fraction: f64,
    pub z: [bool; 5],
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Rate {
    pub rate: f64,
    pub low: f64,
    pub high: f64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ZReport {
    pub params: ZParams,
    /// `p = 0` makes every bound hold trivially.
    pub degenerate: bool,
    pub rates: Vec<Rate>,
    pub max_f_minus_norm: f64,
    pub max_through_p: f64,
    pub trials: Vec<ZTrial>,
}

fn check_delta(f: &Graph, delta: &Rational) -> Result<()> {
    let (m, _) = m2(f)?;
    let inv = m.recip();
    let one = rational::int(1);
    let cap = rational::min(&inv, &(&one - &inv));
    if *delta <= rational::int(0) || *delta >= cap {
        return Err(LabError::param(format!(
            "delta must lie in (0, {})",
            rational::to_fraction_string(&cap)
        )));
    }
    Ok(())
}

/// `(heavy, checked)` over all or sampled pairs of distinct edges.
pub fn heavy_pair_count(
    f: &Graph,
    z: &Graph,
    threshold: f64,
    samples: Option<usize>,
    seed: Seed,
) -> Result<(usize, usize)> {
    let members = f_minus_two_members(f);
    let m = z.e();
    let total = m * m.saturating_sub(1) / 2;
    let pairs: Vec<(usize, usize)> = match samples {
        Some(k) if k < total => {
            let mut rng = seed.rng();
            sample(&mut rng, total, k).into_iter().map(|i| unrank(i, m)).collect()
        }
        _ => (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect(),
    };
    let mut cands: HashMap<usize, Vec<_>> = HashMap::new();
    for &(i, j) in &pairs {
        for e in [i, j] {
            if !cands.contains_key(&e) {
                cands.insert(e, p_candidates(f, &members, z, z.edges()[e])?);
            }
        }
    }
    let heavy = pairs
        .par_iter()
        .filter(|&&(i, j)| p_count(&cands[&i], &cands[&j]) as f64 > threshold)
        .count();
    Ok((heavy, pairs.len()))
}

/// The `k`-th pair `(i, j)`, `i < j < m`, in lexicographic order.
fn unrank(mut k: usize, m: usize) -> (usize, usize) {
    let mut i = 0;
    while k >= m - i - 1 {
        k -= m - i - 1;
        i += 1;
    }
    (i, i + 1 + k)
}

fn trial(f: &Graph, spec: &BoosterSpec, params: &ZParams, seed: Seed) -> Result<ZTrial> {
    let ZParams { n, p, d, zeta, .. } = *params;
    let nf = n as f64;
    let delta = rational::to_f64(&params.delta);
    let z = Graph::gnp(n, p, seed.child(0))?;
    let edges = z.e();
    let f_minus = count_f_minus(f, &z)?;
    let max_through = z
        .edges()
        .iter()
        .map(|&e: &Edge| count_f_minus_through(f, &z, e))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .unwrap_or(0);
    let threshold = if p > 0.0 { d / (p * nf.powf(delta)) } else { f64::INFINITY };
    let (heavy, checked) = heavy_pair_count(f, &z, threshold, params.pair_samples, seed.child(1))?;
    let total_pairs = (edges * edges.saturating_sub(1) / 2) as f64;
    let heavy_fraction = if checked > 0 { heavy as f64 / checked as f64 } else { 0.0 };
    let heavy_estimate = heavy_fraction * total_pairs;

    let auts = automorphisms(&spec.b);
    let mut rng = seed.child(2).rng();
    let mut bad = 0;
    let samples = if spec.b.n() <= n { params.embedding_samples } else { 0 };
    for _ in 0..samples {
        let h = random_embedding(&spec.b, n, &auts, &mut rng);
        if classify_bad(&z, &h, spec, f)?.any() {
            bad += 1;
        }
    }
    let bad_fraction = if samples > 0 { bad as f64 / samples as f64 } else { 0.0 };

    let pn2 = p * nf * nf;
    let z1 = 0.25 * pn2 <= edges as f64 && edges as f64 <= pn2;
    let z2 = f_minus as f64 <= d * nf * nf;
    let z3 = p == 0.0 || max_through as f64 <= d / p;
    let z4 = heavy_estimate <= d * pn2 / nf.powf(delta);
    let z5 = bad_fraction <= nf.powf(-zeta);
    Ok(ZTrial {
        seed,
        edges,
        f_minus,
        f_minus_norm: f_minus as f64 / (nf * nf),
        max_through_p: max_through as f64 * p,
        pairs_checked: checked,
        heavy_pairs: heavy,
        heavy_fraction,
        heavy_estimate,
        embeddings_checked: samples,
        bad_fraction,
        z: [z1, z2, z3, z4, z5],
    })
}

pub fn z_property_rates(f: &Graph, spec: &BoosterSpec, params: &ZParams, seed: Seed) -> Result<ZReport> {
    check_delta(f, &params.delta)?;
    if params.trials == 0 {
        return Err(LabError::param("trials must be at least 1"));
    }
    if !(0.0..=1.0).contains(&params.p) || params.d <= 0.0 {
        return Err(LabError::param("need p in [0, 1] and D > 0"));
    }
    let trials: Vec<ZTrial> = (0..params.trials)
        .into_par_iter()
        .map(|i| trial(f, spec, params, seed.child(i as u64)))
        .collect::<Result<_>>()?;
    let rates = (0..5)
        .map(|k| {
            let s = trials.iter().filter(|t| t.z[k]).count();
            let (low, high) = wilson(s, trials.len(), Z95);
            Rate { rate: s as f64 / trials.len() as f64, low, high }
        })
        .collect();
    let max_f_minus_norm = trials.iter().map(|t| t.f_minus_norm).fold(0.0, f64::max);
    let max_through_p = trials.iter().map(|t| t.max_through_p).fold(0.0, f64::max);
    Ok(ZReport {
        params: params.clone(),
        degenerate: params.p == 0.0,
        rates,
        max_f_minus_norm,
        max_through_p,
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle};

    fn params(n: usize, p: f64) -> ZParams {
        ZParams {
            n,
            p,
            d: 100.0,
            zeta: 0.1,
            delta: rational::ratio(1, 12),
            trials: 4,
            pair_samples: None,
            embedding_samples: 20,
        }
    }

    #[test]
    fn unrank_is_a_bijection() {
        let m = 7;
        let all: Vec<(usize, usize)> = (0..21).map(|k| unrank(k, m)).collect();
        let want: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
        assert_eq!(all, want);
    }

    #[test]
    fn zero_p_is_degenerate() {
        let k3 = complete(3);
        let spec = BoosterSpec::new(cycle(5), &k3).unwrap();
        let r = z_property_rates(&k3, &spec, &params(12, 0.0), Seed::new(0)).unwrap();
        assert!(r.degenerate);
        assert!(r.rates.iter().all(|x| x.rate == 1.0));
    }

    #[test]
    fn delta_range() {
        let k3 = complete(3);
        let spec = BoosterSpec::new(cycle(5), &k3).unwrap();
        let mut p = params(12, 0.3);
        p.delta = rational::ratio(1, 2);
        assert!(z_property_rates(&k3, &spec, &p, Seed::new(0)).is_err());
    }

    #[test]
    fn live_rates_are_reproducible() {
        let k3 = complete(3);
        let spec = BoosterSpec::new(cycle(5), &k3).unwrap();
        let a = z_property_rates(&k3, &spec, &params(14, 0.3), Seed::new(5)).unwrap();
        let b = z_property_rates(&k3, &spec, &params(14, 0.3), Seed::new(5)).unwrap();
        assert_eq!(a.max_f_minus_norm, b.max_f_minus_norm);
        assert_eq!(a.rates[1].rate, 1.0);
    }
}
