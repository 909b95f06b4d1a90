use std::collections::BTreeSet;

use super::{focus_data, BoosterSpec, Embedding};
use crate::arrowing::{is_f_free, EdgeColoring};
use crate::error::{LabError, Result};
use crate::graph::{EdgeId, Graph};

/// `A_φ^σ`: edges of `Z` lying in a monochromatic copy of `F` in the joint
/// colouring of `Z ∪ h(B)` (`φ` on `Z`, `σ` transported to `h(B)`) that uses
/// a booster edge, over all `h` in the family.
pub fn activated_set(
    z: &Graph,
    xi: &[Embedding],
    spec: &BoosterSpec,
    f: &Graph,
    phi: &EdgeColoring,
) -> Result<BTreeSet<EdgeId>> {
    if phi.len() != z.e() {
        return Err(LabError::param("phi must colour every edge of Z"));
    }
    if !is_f_free(phi, z, f)?.free {
        return Err(LabError::pre("phi is not F-free on Z"));
    }
    if !is_f_free(&spec.sigma, &spec.b, f)?.free {
        return Err(LabError::pre("sigma is not F-free on B"));
    }
    let mut out = BTreeSet::new();
    for h in xi {
        let d = focus_data(z, h, spec, f)?;
        if d.booster_edges.iter().any(|&(a, b)| z.has_edge(a, b)) {
            return Err(LabError::pre("h(B) shares an edge with Z"));
        }
        for c in &d.mixed {
            let colours = c
                .z_edges
                .iter()
                .map(|&id| phi.get(id))
                .chain(c.booster.iter().map(|&j| spec.sigma.colors[j]));
            let set: BTreeSet<u8> = colours.collect();
            if set.len() == 1 {
                out.extend(c.z_edges.iter().copied());
            }
        }
    }
    Ok(out)
}
