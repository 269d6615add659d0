use serde::{Deserialize, Serialize};

use super::{theta_circulant, theta_sdp, LpFormulation, SDP_DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::graph::{complement, small_invariants, CirculantSpec, Graph};

pub const SANDWICH_TOL: f64 = 1e-4;
const PRODUCT_IDENTITY_CAP: usize = 2000;

/// `ω(G) <= ϑ(Ḡ) <= χ(G)`, with exact `ω`, `χ` and the SDP value of `ϑ(Ḡ)`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SandwichReport {
    pub clique: usize,
    pub theta_complement: f64,
    pub theta_gap: f64,
    pub chromatic: usize,
    pub holds: bool,
}

pub fn sandwich_report(g: &Graph) -> Result<SandwichReport> {
    let inv = small_invariants(g)?;
    let t = theta_sdp(&complement(g), SDP_DEFAULT_TOL)?;
    let holds = inv.clique as f64 <= t.value + SANDWICH_TOL && t.value <= inv.chromatic as f64 + SANDWICH_TOL;
    Ok(SandwichReport {
        clique: inv.clique,
        theta_complement: t.value,
        theta_gap: t.gap,
        chromatic: inv.chromatic,
        holds,
    })
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ProductIdentity {
    pub theta_g: f64,
    pub theta_gbar: f64,
    pub product: f64,
}

/// `ϑ(G) ϑ(Ḡ)` for a circulant graph, which is vertex-transitive, so the
/// product equals `n`.
pub fn product_identity_check(spec: &CirculantSpec) -> Result<ProductIdentity> {
    if spec.n() > PRODUCT_IDENTITY_CAP {
        return Err(Error::CapExceeded { what: "product identity vertex count", value: spec.n(), cap: PRODUCT_IDENTITY_CAP });
    }
    let a = theta_circulant(spec, LpFormulation::FreqPrimal)?.value;
    let b = theta_circulant(&spec.complement(), LpFormulation::FreqPrimal)?.value;
    Ok(ProductIdentity { theta_g: a, theta_gbar: b, product: a * b })
}
