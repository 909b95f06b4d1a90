//! Profiles and the restriction to an index-consistent family.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{focus_data, BoosterSpec, Embedding, FocusData};
use crate::error::{LabError, Result};
use crate::graph::{EdgeId, Graph, Seed};

/// `π : [ℓ] -> [K]`, zero-based: `map[i] = j` when the `i`-th focus edge
/// focuses on `h(b_j)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Profile {
    pub map: Vec<usize>,
}

impl Profile {
    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// The profile of `h`, or `None` if some focus edge targets two booster
/// edges.
pub fn profile_of(d: &FocusData) -> Option<Profile> {
    let mut map = Vec::with_capacity(d.focus.len());
    for s in d.focus.values() {
        if s.len() != 1 {
            return None;
        }
        map.push(*s.iter().next().unwrap());
    }
    Some(Profile { map })
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct IndexParams {
    /// Embeddings with longer focus sets are dropped; `None` keeps all.
    pub max_len: Option<usize>,
    pub partition: Partition,
}

/// How the edges of `Z` are split into the classes `E_1, ..., E_ℓ`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Partition {
    /// Uniform random classes; an embedding survives when its `i`-th focus
    /// edge lands in class `i`, which happens with probability `ℓ^-ℓ`.
    #[default]
    Random,
    /// Embeddings in seeded random order, each kept when its focus edges
    /// fit the classes fixed so far, which it then extends. Never empty.
    Greedy,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IndexReport {
    pub input: usize,
    pub dropped_long: usize,
    pub distinct_profiles: usize,
    pub majority: usize,
    pub partition: Partition,
    pub kept: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct IndexConsistent {
    pub xi: Vec<Embedding>,
    pub profile: Profile,
    pub report: IndexReport,
}

pub fn restrict_index_consistent(
    z: &Graph,
    xi0: &[Embedding],
    spec: &BoosterSpec,
    f: &Graph,
    params: &IndexParams,
    seed: Seed,
) -> Result<IndexConsistent> {
    let mut profiled = Vec::new();
    for h in xi0 {
        let d = focus_data(z, h, spec, f)?;
        let p = profile_of(&d).ok_or_else(|| LabError::pre("input family is not regular"))?;
        profiled.push((h.clone(), d.members(), p));
    }
    let input = profiled.len();
    if let Some(l) = params.max_len {
        profiled.retain(|(_, ms, _)| ms.len() <= l);
    }
    let dropped_long = input - profiled.len();
    let mut counts: BTreeMap<&Profile, usize> = BTreeMap::new();
    for (_, _, p) in &profiled {
        *counts.entry(p).or_insert(0) += 1;
    }
    let distinct_profiles = counts.len();
    // BTreeMap order makes the first maximum the lexicographically smallest.
    let (profile, majority) = counts
        .iter()
        .fold(None::<(&Profile, usize)>, |best, (&p, &c)| match best {
            Some((_, bc)) if bc >= c => best,
            _ => Some((p, c)),
        })
        .map(|(p, c)| (p.clone(), c))
        .ok_or_else(|| LabError::Empty("no embeddings to restrict".into()))?;
    let cands: Vec<(Embedding, Vec<EdgeId>)> = profiled
        .into_iter()
        .filter(|(_, _, p)| *p == profile)
        .map(|(h, ms, _)| (h, ms))
        .collect();
    let l = profile.len();
    let xi: Vec<Embedding> = if cands.len() == 1 || l == 0 {
        // Any partition placing the focus edges in order keeps a lone
        // embedding; with ℓ = 0 the condition is empty.
        cands.into_iter().map(|(h, _)| h).collect()
    } else if params.partition == Partition::Random {
        let mut rng = seed.rng();
        let class: Vec<usize> = (0..z.e()).map(|_| rng.gen_range(0..l)).collect();
        cands
            .into_iter()
            .filter(|(_, ms)| ms.iter().enumerate().all(|(i, e)| class[e.index()] == i))
            .map(|(h, _)| h)
            .collect()
    } else {
        let mut order: Vec<usize> = (0..cands.len()).collect();
        order.shuffle(&mut seed.rng());
        let mut class: Vec<Option<usize>> = vec![None; z.e()];
        let mut keep = vec![false; cands.len()];
        for k in order {
            let ms = &cands[k].1;
            if ms.iter().enumerate().all(|(i, e)| class[e.index()].is_none_or(|c| c == i)) {
                for (i, e) in ms.iter().enumerate() {
                    class[e.index()] = Some(i);
                }
                keep[k] = true;
            }
        }
        cands.into_iter().zip(keep).filter(|(_, k)| *k).map(|((h, _), _)| h).collect()
    };
    if xi.is_empty() {
        return Err(LabError::Empty(
            "no embedding survived the random partition; retry with another seed".into(),
        ));
    }
    let report =
        IndexReport { input, dropped_long, distinct_profiles, majority, partition: params.partition, kept: xi.len() };
    Ok(IndexConsistent { xi, profile, report })
}

/// Checks index consistency directly; returns one message per problem.
pub fn verify_index_consistent(
    z: &Graph,
    xi: &[Embedding],
    spec: &BoosterSpec,
    f: &Graph,
    profile: &Profile,
) -> Result<Vec<String>> {
    let mut problems = Vec::new();
    let mut position: HashMap<EdgeId, usize> = HashMap::new();
    for h in xi {
        let d = focus_data(z, h, spec, f)?;
        match profile_of(&d) {
            None => problems.push(format!("{h:?} is not regular")),
            Some(p) if p != *profile => problems.push(format!("{h:?} has profile {:?}", p.map)),
            Some(_) => {}
        }
        for (i, e) in d.members().into_iter().enumerate() {
            match position.get(&e) {
                Some(&j) if j != i => {
                    problems.push(format!("edge {} sits at positions {j} and {i}", e.0))
                }
                None => {
                    position.insert(e, i);
                }
                _ => {}
            }
        }
    }
    Ok(problems)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, complete_minus_edge};

    #[test]
    fn single_embedding_is_kept() {
        let z = complete_minus_edge(6);
        let spec = BoosterSpec::new(complete(2), &complete(3)).unwrap();
        let out = restrict_index_consistent(&z, &[vec![0, 1]], &spec, &complete(3), &IndexParams::default(), Seed::new(0))
            .unwrap();
        assert_eq!(out.xi, vec![vec![0, 1]]);
        assert_eq!(out.profile.map, vec![0; 8]);
        assert!(verify_index_consistent(&z, &out.xi, &spec, &complete(3), &out.profile).unwrap().is_empty());
    }

    #[test]
    fn disjoint_cherries_keep_rate() {
        // Two cherries a-c-b; each booster edge {a,b} has a focus set of size 2.
        let z = Graph::from_edges(6, [(0, 2), (1, 2), (3, 5), (4, 5)]).unwrap();
        let spec = BoosterSpec::new(complete(2), &complete(3)).unwrap();
        let xi0 = vec![vec![0, 1], vec![3, 4]];
        let trials = 2000;
        let mut nonempty = 0;
        for s in 0..trials {
            match restrict_index_consistent(&z, &xi0, &spec, &complete(3), &IndexParams::default(), Seed::new(s)) {
                Ok(r) => {
                    nonempty += 1;
                    assert!(verify_index_consistent(&z, &r.xi, &spec, &complete(3), &r.profile).unwrap().is_empty());
                }
                Err(LabError::Empty(_)) => {}
                Err(e) => panic!("{e}"),
            }
        }
        let p = 7.0 / 16.0;
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((nonempty as f64 / trials as f64 - p).abs() <= 3.0 * sigma);
    }

    #[test]
    fn greedy_keeps_compatible_embeddings() {
        // Two K6 - e blocks: focus sets are disjoint, so both survive.
        let mut es: Vec<(u32, u32)> = complete_minus_edge(6).edges().to_vec();
        es.extend(complete_minus_edge(6).edges().iter().map(|&(a, b)| (a + 6, b + 6)));
        let z = Graph::from_edges(12, es).unwrap();
        let spec = BoosterSpec::new(complete(2), &complete(3)).unwrap();
        let xi0 = vec![vec![0, 1], vec![6, 7]];
        let params = IndexParams { partition: Partition::Greedy, ..Default::default() };
        let out = restrict_index_consistent(&z, &xi0, &spec, &complete(3), &params, Seed::new(3)).unwrap();
        assert_eq!(out.xi.len(), 2);
        assert!(verify_index_consistent(&z, &out.xi, &spec, &complete(3), &out.profile).unwrap().is_empty());
        let random = restrict_index_consistent(&z, &xi0, &spec, &complete(3), &IndexParams::default(), Seed::new(3));
        assert!(matches!(random, Err(LabError::Empty(_))));
    }

    #[test]
    fn irregular_input_is_rejected() {
        let z = Graph::from_edges(4, [(1, 2)]).unwrap();
        let b = Graph::from_edges(3, [(0, 1), (0, 2)]).unwrap();
        let spec = BoosterSpec::new(b, &complete(3)).unwrap();
        let r = restrict_index_consistent(&z, &[vec![3, 2, 1]], &spec, &complete(3), &IndexParams::default(), Seed::new(0));
        assert!(matches!(r, Err(LabError::Precondition(_))));
    }
}
