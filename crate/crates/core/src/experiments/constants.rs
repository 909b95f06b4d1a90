//! The explicit constants chosen in the proofs, computed exactly.
//!
//! `α'` and `β` contain `(KL)^L` with `L` in the hundreds of thousands even
//! for triangles, so they are kept as `coeff · base^(-exp)` and compared in
//! that form.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::booster::pipeline::alpha_tilde;
use crate::error::{LabError, Result};
use crate::graph::Graph;
use crate::pattern::{bipartition, classify};
use crate::rational::{self, binomial, int, powi, Rational};

/// `coeff · base^(-exp)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerTerm {
    pub coeff: Rational,
    pub base: BigInt,
    pub exp: BigInt,
}

impl PowerTerm {
    pub fn scale(&self, by: &Rational) -> PowerTerm {
        PowerTerm { coeff: &self.coeff * by, ..self.clone() }
    }

    pub fn log10(&self) -> f64 {
        let ln_base = rational::ln_abs(&Rational::from_integer(self.base.clone()));
        let e = self.exp.to_f64().unwrap_or(f64::INFINITY);
        (rational::ln_abs(&self.coeff) - e * ln_base) / std::f64::consts::LN_10
    }

    /// Exact value; only sensible for small exponents.
    pub fn value(&self) -> Option<Rational> {
        let e = self.exp.to_i64().filter(|e| e.abs() <= 4096)?;
        Some(&self.coeff * powi(&Rational::from_integer(self.base.clone()), -e))
    }
}

impl Serialize for PowerTerm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("PowerTerm", 4)?;
        st.serialize_field("coeff", &rational::to_fraction_string(&self.coeff))?;
        st.serialize_field("base", &self.base.to_string())?;
        st.serialize_field("exponent", &(-&self.exp).to_string())?;
        st.serialize_field("log10", &self.log10())?;
        st.end()
    }
}

#[derive(Clone, Debug, Default)]
pub struct ConstantInputs {
    pub booster_vertices: Option<usize>,
    /// `K = e(B)`.
    pub booster_edges: Option<usize>,
    /// `D`.
    pub d: Option<Rational>,
    /// Uniformity `ℓ` of the hypergraph, for `τ`.
    pub ell: Option<usize>,
    pub lambda: Option<Rational>,
    /// `C₀`, `C₁` bounding `c(n)`.
    pub c0: Option<Rational>,
    pub c1: Option<Rational>,
    pub rho: Option<Rational>,
    /// `c₀` of the dense-graph counting lemma.
    pub c_dense: Option<Rational>,
    pub xi_cl: Option<Rational>,
    pub eps_cl: Option<Rational>,
    pub t0_big: Option<u64>,
}

fn ser_opt<S: Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_some(&rational::to_fraction_string(r)),
        None => s.serialize_none(),
    }
}

fn ser_opt_big<S: Serializer>(r: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_some(&r.to_string()),
        None => s.serialize_none(),
    }
}

/// `τ = n^exponent`.
#[derive(Clone, Debug, Serialize)]
pub struct Tau {
    pub base: &'static str,
    #[serde(with = "crate::rational::serde_str")]
    pub exponent: Rational,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConstantChain {
    #[serde(with = "crate::rational::serde_str")]
    pub m2: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub delta: Rational,
    #[serde(serialize_with = "ser_opt")]
    pub alpha_tilde: Option<Rational>,
    #[serde(serialize_with = "ser_opt_big")]
    pub l: Option<BigInt>,
    /// `L` was not an integer and was rounded up.
    pub l_rounded: bool,
    pub alpha_prime: Option<PowerTerm>,
    #[serde(serialize_with = "ser_opt_big")]
    pub k_small: Option<BigInt>,
    pub beta: Option<PowerTerm>,
    #[serde(serialize_with = "ser_opt")]
    pub gamma: Option<Rational>,
    #[serde(with = "crate::rational::serde_str")]
    pub eps_container: Rational,
    pub tau: Option<Tau>,
    pub a: Option<usize>,
    pub b: Option<usize>,
    #[serde(serialize_with = "ser_opt")]
    pub c0_prime: Option<Rational>,
    #[serde(serialize_with = "ser_opt")]
    pub d_reg: Option<Rational>,
    #[serde(serialize_with = "ser_opt")]
    pub gamma_kst: Option<Rational>,
    #[serde(serialize_with = "ser_opt")]
    pub eps_reg: Option<Rational>,
    #[serde(serialize_with = "ser_opt")]
    pub t0: Option<Rational>,
    #[serde(serialize_with = "ser_opt")]
    pub eta: Option<Rational>,
    /// Outputs left out and the inputs they need.
    pub missing: Vec<String>,
}

fn ri(x: usize) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

/// Sizes `(a, b)` of the bipartition of `F' = F - a1a2`, with `a1, a2` in the
/// class of size `a`.
pub fn bipartition_sizes(f: &Graph) -> Option<(usize, usize)> {
    let prof = classify(f).ok()?;
    let (a1, a2) = prof.nearly_bipartite_witness?;
    let fp = prof.bipartite_part()?;
    let side = bipartition(&fp)?;
    if side[a1 as usize] != side[a2 as usize] {
        return None;
    }
    let a = side.iter().filter(|&&s| s == side[a1 as usize]).count();
    Some((a, f.n() - a))
}

pub fn derive_proof_constants(f: &Graph, inp: &ConstantInputs) -> Result<ConstantChain> {
    let prof = classify(f)?;
    if !prof.strictly_balanced {
        return Err(LabError::pre("F must be strictly balanced"));
    }
    let (v, e) = (f.n(), f.e());
    let one = int(1);
    let inv = prof.m2.recip();
    let delta = rational::min(&inv, &(&one - &inv)) / int(6);
    let mut missing = Vec::new();
    let mut need = |what: &str, ok: bool| {
        if !ok {
            missing.push(what.to_string());
        }
        ok
    };

    let alpha_t = inp.booster_vertices.map(alpha_tilde);
    need("alphaTilde: boosterVertices", alpha_t.is_some());
    let (mut l, mut l_rounded) = (None, false);
    if let (Some(at), Some(d)) = (&alpha_t, &inp.d) {
        let raw = ri(e - 1) * (int(2) / at) * ri(v * v) * d;
        l_rounded = !raw.is_integer();
        l = Some(rational::ceil_to_bigint(&raw));
    } else {
        need("L: boosterVertices, D", false);
    }
    let mut alpha_prime = None;
    let mut k_small = None;
    let mut beta = None;
    let mut gamma = None;
    if let Some(lv) = &l {
        let lr = Rational::from_integer(lv.clone());
        gamma = Some(&delta / (int(10) * &lr));
        if let (Some(at), Some(kb)) = (&alpha_t, inp.booster_edges) {
            let ap = PowerTerm {
                coeff: at / (int(2) * &lr),
                base: BigInt::from(kb) * lv,
                exp: lv.clone(),
            };
            let k = binomial(lv, (e - 1) as u64) * BigInt::from(v * (v - 1) / 2);
            let d = inp.d.as_ref().unwrap();
            let denom = d * Rational::from_integer(k.clone()) * ri(v * v);
            beta = Some(ap.scale(&denom.recip()));
            alpha_prime = Some(ap);
            k_small = Some(k);
        } else {
            need("alphaPrime, k, beta: boosterEdges", false);
        }
    }
    let tau = match inp.ell {
        Some(ell) if ell >= 2 => Some(Tau { base: "n", exponent: -(&delta) / (int(4) * ri(ell - 1)) }),
        _ => {
            need("tau: ell >= 2", false);
            None
        }
    };

    let ab = bipartition_sizes(f);
    if ab.is_none() {
        need("regularity chain: F nearly bipartite", false);
    }
    let (a, b) = ab.map_or((None, None), |(a, b)| (Some(a), Some(b)));
    let c0_prime = inp.c0.as_ref().map(|c| rational::min(&one, &powi(c, (e - 1) as i64)));
    let gamma_kst = match (ab, &inp.lambda) {
        (Some((a, b)), Some(lam)) => Some(
            Rational::new(1.into(), 2.into()) / (powi(&ri(a - 1), (a - 1) as i64) * powi(&ri(b), b as i64))
                * powi(&(lam / int(6)), ((a - 1) * b) as i64),
        ),
        _ => {
            need("gammaKst: lambda", ab.is_none() || inp.lambda.is_some());
            None
        }
    };
    let d_reg = match (ab, &inp.lambda, &inp.xi_cl, &inp.c0, &inp.c1, &c0_prime) {
        (Some((a, b)), Some(lam), Some(xi), Some(c0), Some(c1), Some(c0p)) => {
            let ee = (2 * (e - 1)) as i64;
            let num = powi(&(lam / int(6)), (2 * (a - 1) * b) as i64) * xi * xi * powi(c0, ee) * c0p;
            let den = int(64)
                * powi(&ri(a), 2 * a as i64)
                * powi(&ri(b), 2 * b as i64)
                * powi(&ri(v + 1), v as i64)
                * powi(c1, ee);
            Some(num / den)
        }
        _ => {
            need("d: lambda, xiCl, C0, C1", ab.is_none());
            None
        }
    };
    let eps_reg = match (&inp.rho, &inp.eps_cl, &inp.lambda) {
        (Some(rho), Some(ec), Some(lam)) => Some(rational::min(&(rho * ec / int(4)), &(lam / int(48)))),
        _ => {
            need("epsReg: rho, epsCl, lambda", false);
            None
        }
    };
    let t0 = match (ab, &inp.lambda) {
        (Some((a, b)), Some(lam)) => Some(int(48) / lam * ri(a * b)),
        _ => None,
    };
    let eta = match (&inp.c_dense, inp.t0_big) {
        (Some(c), Some(t)) if t > 0 => Some(c * powi(&Rational::from_integer(BigInt::from(t)), -(v as i64))),
        _ => {
            need("eta: cDense, T0", false);
            None
        }
    };
    if let Some(x) = [&inp.lambda, &inp.c0, &inp.c1, &inp.rho, &inp.xi_cl, &inp.eps_cl, &inp.c_dense, &inp.d]
        .into_iter()
        .flatten()
        .find(|x| !x.is_positive())
    {
        return Err(LabError::param(format!("constant inputs must be positive, got {x}")));
    }
    Ok(ConstantChain {
        m2: prof.m2,
        delta,
        alpha_tilde: alpha_t,
        l,
        l_rounded,
        alpha_prime,
        k_small,
        beta,
        gamma,
        eps_container: Rational::new(BigInt::one(), 4.into()),
        tau,
        a,
        b,
        c0_prime,
        d_reg,
        gamma_kst,
        eps_reg,
        t0,
        eta,
        missing,
    })
}

impl ConstantChain {
    /// `β D k v(F)² = α'` and `γ 10 L = δ`, where available.
    pub fn identities_hold(&self, d: &Rational, vf: usize) -> Option<bool> {
        let (beta, ap, k, l, g) = (
            self.beta.as_ref()?,
            self.alpha_prime.as_ref()?,
            self.k_small.as_ref()?,
            self.l.as_ref()?,
            self.gamma.as_ref()?,
        );
        let scale = d * Rational::from_integer(k.clone()) * ri(vf * vf);
        let first = beta.scale(&scale) == *ap;
        let second = g * int(10) * Rational::from_integer(l.clone()) == self.delta;
        Some(first && second && !Rational::zero().eq(&self.delta))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle};
    use crate::rational::ratio;

    #[test]
    fn triangle_chain() {
        let inp = ConstantInputs {
            booster_vertices: Some(3),
            booster_edges: Some(3),
            d: Some(int(1)),
            ell: Some(4),
            lambda: Some(ratio(1, 2)),
            ..Default::default()
        };
        let c = derive_proof_constants(&complete(3), &inp).unwrap();
        assert_eq!(c.alpha_tilde, Some(ratio(1, 6318)));
        assert_eq!(c.delta, ratio(1, 12));
        assert_eq!(c.gamma_kst, Some(ratio(1, 24)));
        assert_eq!((c.a, c.b), (Some(2), Some(1)));
        assert_eq!(c.l, Some(BigInt::from(2 * 2 * 6318 * 9)));
        assert_eq!(c.identities_hold(&int(1), 3), Some(true));
        assert_eq!(c.tau.unwrap().exponent, ratio(-1, 144));
        assert!(c.alpha_prime.unwrap().log10() < -1e6);
    }

    #[test]
    fn partial_inputs() {
        let c = derive_proof_constants(&cycle(5), &ConstantInputs::default()).unwrap();
        assert_eq!(c.delta, ratio(1, 24));
        assert!(c.alpha_tilde.is_none() && !c.missing.is_empty());
        assert!(derive_proof_constants(&crate::graph::path(4), &ConstantInputs::default()).is_err());
    }

    #[test]
    fn power_term_value() {
        let t = PowerTerm { coeff: ratio(3, 2), base: BigInt::from(2), exp: BigInt::from(3) };
        assert_eq!(t.value(), Some(ratio(3, 16)));
        assert!((t.log10() - (3.0f64 / 16.0).log10()).abs() < 1e-12);
    }
}
