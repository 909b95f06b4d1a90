use std::collections::BTreeSet;

use num_traits::Zero;
use serde::Serialize;

use crate::counting::CopyFamily;
use crate::error::{LabError, Result};
use crate::graph::Edge;
use crate::rational::{self, Rational};

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Janson {
    #[serde(with = "crate::rational::serde_str")]
    pub mu: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub delta: Rational,
    /// `min(1, exp(-μ + Δ/2))`.
    pub bound: f64,
    /// The family is empty, so the bound says nothing.
    pub vacuous: bool,
}

/// Janson's bound on `P(no copy present)` when each edge is kept with
/// probability `q`.
pub fn janson_bound_edges(copies: &[Vec<Edge>], q: &Rational) -> Result<Janson> {
    if *q <= Rational::zero() || *q > rational::int(1) {
        return Err(LabError::param("q must lie in (0, 1]"));
    }
    let sets: Vec<BTreeSet<Edge>> = copies.iter().map(|c| c.iter().copied().collect()).collect();
    let mut mu = Rational::zero();
    let mut delta = Rational::zero();
    for (i, a) in sets.iter().enumerate() {
        mu += rational::powi(q, a.len() as i64);
        for (j, b) in sets.iter().enumerate() {
            if i != j && !a.is_disjoint(b) {
                delta += rational::powi(q, a.union(b).count() as i64);
            }
        }
    }
    let exponent = -&mu + &delta / rational::int(2);
    let bound = rational::to_f64(&exponent).exp().min(1.0);
    Ok(Janson { vacuous: sets.is_empty(), mu, delta, bound })
}

pub fn janson_bound(family: &CopyFamily, q: &Rational) -> Result<Janson> {
    janson_bound_edges(&family.edge_sets(), q)
}
