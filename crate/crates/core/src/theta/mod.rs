//! The Lovász number `ϑ(G)`: the maximum of `Σ_ij X_ij` over positive
//! semidefinite `X` with unit trace and `X_ij = 0` on every edge.
//!
//! Circulant graphs reduce to linear programs ([`theta_circulant`]); general
//! graphs go through a certified first-order SDP solver ([`theta_sdp`]).

mod circulant;
mod report;
mod sdp;

pub use circulant::{
    assemble_lp, theta_circulant, theta_circulant_all, theta_circulant_bracket, unfold, CirculantLp,
    LpFormulation, MAX_CIRCULANT_N,
};
pub use report::{product_identity_check, sandwich_report, ProductIdentity, SandwichReport, SANDWICH_TOL};
pub use sdp::{theta_sdp, theta_sdp_with, SdpOptions, MAX_SDP_N, SDP_DEFAULT_TOL};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThetaMethod {
    LpTimePrimal,
    LpFreqPrimal,
    LpFreqDual,
    LpTimeDual,
    Sdp,
}

impl ThetaMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            ThetaMethod::LpTimePrimal => "lp-time-primal",
            ThetaMethod::LpFreqPrimal => "lp-freq-primal",
            ThetaMethod::LpFreqDual => "lp-freq-dual",
            ThetaMethod::LpTimeDual => "lp-time-dual",
            ThetaMethod::Sdp => "sdp",
        }
    }
}

/// A Lovász number estimate with its certificates.
///
/// `value - gap <= ϑ <= value + gap`. For the LP paths the witness and
/// certificate are length-`n` vectors (time or frequency domain, unfolded);
/// for the SDP path the witness is the row-major `n × n` matrix `X` and the
/// certificate holds one weight per edge of `G` (in [`crate::Graph::edges`]
/// order) such that `λ_max(J + Σ_e z_e (E_ij + E_ji))` bounds `ϑ` from above.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ThetaResult {
    pub value: f64,
    pub gap: f64,
    pub method: ThetaMethod,
    pub n: usize,
    pub primal_witness: Vec<f64>,
    pub dual_certificate: Vec<f64>,
    /// False when the solver stopped at its iteration cap with a gap above
    /// the requested tolerance.
    pub converged: bool,
    pub iterations: usize,
}

impl ThetaResult {
    pub fn lower(&self) -> f64 {
        self.value - self.gap
    }

    pub fn upper(&self) -> f64 {
        self.value + self.gap
    }
}

/// Compact JSON record of a theta computation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaRecord {
    pub value: f64,
    pub gap: f64,
    pub method: ThetaMethod,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub conn: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub edges_hash: Option<String>,
    pub wallclock_ms: f64,
}

impl ThetaRecord {
    pub fn for_circulant(r: &ThetaResult, spec: &crate::CirculantSpec, wallclock_ms: f64) -> Self {
        ThetaRecord {
            value: r.value,
            gap: r.gap,
            method: r.method,
            n: r.n,
            conn: Some(spec.conn().iter().copied().collect()),
            edges_hash: None,
            wallclock_ms,
        }
    }

    pub fn for_graph(r: &ThetaResult, g: &crate::Graph, wallclock_ms: f64) -> Self {
        ThetaRecord {
            value: r.value,
            gap: r.gap,
            method: r.method,
            n: r.n,
            conn: None,
            edges_hash: Some(format!("{:016x}", g.edges_hash())),
            wallclock_ms,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_json_shape() {
        let spec = crate::CirculantSpec::new(5, [1]).unwrap();
        let r = theta_circulant(&spec, LpFormulation::FreqPrimal).unwrap();
        let rec = ThetaRecord::for_circulant(&r, &spec, 1.5);
        let v: serde_json::Value = serde_json::to_value(&rec).unwrap();
        assert_eq!(v["method"], "lp-freq-primal");
        assert_eq!(v["conn"], serde_json::json!([1]));
        assert!(v.get("edges_hash").is_none());
        let back: ThetaRecord = serde_json::from_value(v).unwrap();
        assert_eq!(back, rec);
    }
}
