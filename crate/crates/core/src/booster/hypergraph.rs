//! The hypergraph `H(Z, Ξ)` on `E(Z)` and its degree statistics.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::index::{profile_of, Profile};
use super::{focus_data, BoosterSpec, Embedding};
use crate::error::{LabError, Result};
use crate::graph::Graph;
use crate::rational::{self, Rational};

#[derive(Clone, Debug, Serialize)]
pub struct BoosterHypergraph {
    /// `m = e(Z)`; vertices are edge ids `0..m`.
    pub m: usize,
    /// Distinct focus sets, each sorted.
    pub edges: Vec<Vec<u32>>,
    /// Shared profile, when every embedding has the same one.
    pub profile: Option<Profile>,
}

impl BoosterHypergraph {
    pub fn from_edges(m: usize, edges: Vec<Vec<u32>>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for mut e in edges {
            e.sort_unstable();
            e.dedup();
            if let Some(&x) = e.last() {
                if x as usize >= m {
                    return Err(LabError::VertexOutOfRange { vertex: x as usize, n: m });
                }
            }
            set.insert(e);
        }
        Ok(BoosterHypergraph { m, edges: set.into_iter().collect(), profile: None })
    }

    pub fn build(z: &Graph, xi: &[Embedding], spec: &BoosterSpec, f: &Graph) -> Result<Self> {
        let mut edges = Vec::new();
        let mut profiles = BTreeSet::new();
        let mut regular = true;
        for h in xi {
            let d = focus_data(z, h, spec, f)?;
            match profile_of(&d) {
                Some(p) => {
                    profiles.insert(p);
                }
                None => regular = false,
            }
            edges.push(d.members().into_iter().map(|e| e.0).collect());
        }
        let mut hg = Self::from_edges(z.e(), edges)?;
        if regular && profiles.len() == 1 {
            hg.profile = profiles.into_iter().next();
        }
        Ok(hg)
    }

    pub fn uniformity(&self) -> Option<usize> {
        let l = self.edges.first()?.len();
        self.edges.iter().all(|e| e.len() == l).then_some(l)
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HypergraphStats {
    pub m: usize,
    pub e: usize,
    pub l: usize,
    #[serde(with = "crate::rational::serde_str")]
    pub d: Rational,
    pub delta1: usize,
    pub delta2: usize,
    /// `δ_j` for `j = 2..=ℓ`.
    #[serde(serialize_with = "ser_vec")]
    pub delta_j: Vec<Rational>,
    #[serde(with = "crate::rational::serde_str")]
    pub delta_tau: Rational,
    pub delta_tau_f64: f64,
}

fn ser_vec<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(rational::to_fraction_string))
}

fn subsets(items: &[u32], k: usize, mut visit: impl FnMut(&[u32])) {
    fn rec(items: &[u32], k: usize, start: usize, cur: &mut Vec<u32>, visit: &mut impl FnMut(&[u32])) {
        if cur.len() == k {
            visit(cur);
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, visit);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut Vec::new(), &mut visit);
}

fn pow2(exp: i64) -> Rational {
    rational::powi(&rational::int(2), exp)
}

fn choose2(k: usize) -> i64 {
    (k * k.saturating_sub(1) / 2) as i64
}

/// `d^{(j)}(v)` for every `v`: the largest number of hyperedges containing a
/// `j`-set through `v`. Only `j`-sets inside some hyperedge can have
/// positive degree, so those are the only ones counted.
fn max_degrees(h: &BoosterHypergraph, j: usize) -> Vec<usize> {
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); h.m];
    for (i, e) in h.edges.iter().enumerate() {
        for &v in e {
            incident[v as usize].push(i);
        }
    }
    (0..h.m)
        .map(|v| {
            let mut deg: HashMap<Vec<u32>, usize> = HashMap::new();
            for &i in &incident[v] {
                let rest: Vec<u32> = h.edges[i].iter().copied().filter(|&x| x as usize != v).collect();
                subsets(&rest, j - 1, |s| *deg.entry(s.to_vec()).or_insert(0) += 1);
            }
            deg.values().copied().max().unwrap_or(0)
        })
        .collect()
}

pub fn hypergraph_stats(h: &BoosterHypergraph, tau: &Rational) -> Result<HypergraphStats> {
    if *tau <= Rational::zero() {
        return Err(LabError::param("tau must be positive"));
    }
    if h.edges.is_empty() {
        return Err(LabError::pre("zero average degree"));
    }
    let l = h.uniformity().ok_or_else(|| LabError::pre("hypergraph is not uniform"))?;
    if l < 2 {
        return Err(LabError::pre("hyperedges must have at least two vertices"));
    }
    let m = h.m;
    let e = h.edges.len();
    let d = Rational::new(BigInt::from(l * e), BigInt::from(m));
    let delta1 = max_degrees(h, 1).into_iter().max().unwrap_or(0);
    let delta2 = max_degrees(h, 2).into_iter().max().unwrap_or(0);
    let mut delta_j = Vec::new();
    let mut sum = Rational::zero();
    for j in 2..=l {
        let total: usize = max_degrees(h, j).into_iter().sum();
        let denom = rational::powi(tau, j as i64 - 1) * Rational::from_integer(BigInt::from(m)) * &d;
        let dj = Rational::from_integer(BigInt::from(total)) / denom;
        sum += pow2(-choose2(j - 1)) * &dj;
        delta_j.push(dj);
    }
    let delta_tau = pow2(choose2(l) - 1) * sum;
    let delta_tau_f64 = rational::to_f64(&delta_tau);
    Ok(HypergraphStats { m, e, l, d, delta1, delta2, delta_j, delta_tau, delta_tau_f64 })
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DegreeBounds {
    pub delta1_bound: f64,
    pub delta1_ok: bool,
    pub delta2_bound: f64,
    pub delta2_ok: bool,
}

/// Compares `Δ₁` with `D/p · C(v(F),2)` and `Δ₂` with `1/(p n^{δ/2})`.
pub fn degree_bounds(stats: &HypergraphStats, d: f64, p: f64, n: usize, delta: f64, vf: usize) -> DegreeBounds {
    let delta1_bound = d / p * (vf * (vf - 1) / 2) as f64;
    let delta2_bound = 1.0 / (p * (n as f64).powf(delta / 2.0));
    DegreeBounds {
        delta1_bound,
        delta1_ok: stats.delta1 as f64 <= delta1_bound,
        delta2_bound,
        delta2_ok: stats.delta2 as f64 <= delta2_bound,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn single_edge() {
        let h = BoosterHypergraph::from_edges(2, vec![vec![0, 1]]).unwrap();
        let s = hypergraph_stats(&h, &ratio(1, 2)).unwrap();
        assert_eq!(s.d, rational::int(1));
        assert_eq!(s.delta_j, vec![rational::int(2)]);
        assert_eq!(s.delta_tau, rational::int(2));
        assert_eq!((s.delta1, s.delta2), (1, 1));
    }

    #[test]
    fn errors() {
        let h = BoosterHypergraph::from_edges(3, vec![]).unwrap();
        assert!(hypergraph_stats(&h, &ratio(1, 2)).is_err());
        let h = BoosterHypergraph::from_edges(3, vec![vec![0, 1]]).unwrap();
        assert!(hypergraph_stats(&h, &rational::int(0)).is_err());
        let h = BoosterHypergraph::from_edges(3, vec![vec![0, 1], vec![0, 1, 2]]).unwrap();
        assert!(hypergraph_stats(&h, &ratio(1, 2)).is_err());
    }

    #[test]
    fn degree_identities() {
        let h = BoosterHypergraph::from_edges(6, vec![vec![0, 1, 2], vec![0, 1, 3], vec![2, 4, 5], vec![0, 4, 5]]).unwrap();
        let s = hypergraph_stats(&h, &ratio(1, 3)).unwrap();
        assert_eq!(s.d * Rational::from_integer(BigInt::from(s.m)), Rational::from_integer(BigInt::from(s.l * s.e)));
        assert!(s.delta2 <= s.delta1 && s.delta1 <= s.e);
        assert_eq!((s.delta1, s.delta2), (3, 2));
    }
}
