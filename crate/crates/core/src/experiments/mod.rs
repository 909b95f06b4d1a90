//! Monte Carlo threshold experiments, property rates, Janson bounds and the
//! proof constants, plus CSV output for the curve data.

pub mod constants;
pub mod janson;
pub mod montecarlo;
pub mod zprops;

use serde::Serialize;

use crate::error::Result;

pub use constants::{derive_proof_constants, ConstantChain, ConstantInputs, PowerTerm};
pub use janson::{janson_bound, janson_bound_edges, Janson};
pub use montecarlo::{
    arrow_trials, bisect_threshold_constant, estimate_arrow_probability, estimate_with,
    sharpness_window, threshold_curve, wilson, ArrowOracle, BisectParams, Bisection, Estimate,
    LogisticOracle, StepOracle, ThresholdCurve, TrialRecord, VerdictOracle, WindowTable,
};
pub use zprops::{z_property_rates, ZParams, ZReport};

/// Column order of curve CSV files.
pub const CURVE_COLUMNS: [&str; 9] = ["n", "c", "p", "clamped", "estimate", "low", "high", "undecided", "trials"];

/// One header row then one row per record, columns in field order.
pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| crate::error::LabError::param(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| crate::error::LabError::param(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Seed;

    #[test]
    fn curve_csv_header() {
        let c = threshold_curve(&StepOracle { p0: 0.5 }, 10, 0.5, &[1.0, 2.0], 4, Seed::new(0)).unwrap();
        let text = to_csv(&c.points).unwrap();
        assert_eq!(text.lines().next().unwrap(), CURVE_COLUMNS.join(","));
        assert_eq!(text.lines().count(), 3);
    }
}
