//! Lovász number of a general graph by ADMM on the SDP
//!
//! ```text
//! maximize ⟨J, X⟩  s.t.  X ⪰ 0,  Tr X = 1,  X_ij = 0 for ij ∈ E
//! ```
//!
//! The iteration (an alternating-direction augmented Lagrangian on the dual,
//! scaled so that the cost matrix is `-J/n`) only produces approximately
//! feasible iterates, so every few steps both sides are certified from
//! scratch:
//!
//! * upper bound: for any edge weights `z`, `ϑ <= λ_max(J + Σ z_e (E_ij + E_ji))`;
//! * lower bound: the iterate with edge entries zeroed, shifted by a multiple
//!   of the identity until it is PSD and renormalized to unit trace, is
//!   exactly feasible and its entry sum is a valid lower bound.

use nalgebra::DMatrix;

use super::{ThetaMethod, ThetaResult};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{lambda_max, lambda_min};

pub const MAX_SDP_N: usize = 200;
pub const SDP_DEFAULT_TOL: f64 = 1e-5;

/// The penalty is rebalanced at every check during the first
/// `WARMUP_ITERS` iterations and every `SLOW_ADAPT` iterations afterwards.
/// Rebalancing at every check for the whole run keeps the iteration from
/// settling on circulant instances.
const WARMUP_ITERS: usize = 300;
const SLOW_ADAPT: usize = 200;

#[derive(Clone, Debug)]
pub struct SdpOptions {
    /// Target half-width of the certified bracket.
    pub tol: f64,
    pub max_iters: usize,
    pub check_every: usize,
}

impl Default for SdpOptions {
    fn default() -> Self {
        SdpOptions { tol: SDP_DEFAULT_TOL, max_iters: 20_000, check_every: 10 }
    }
}

pub fn theta_sdp(g: &Graph, tol: f64) -> Result<ThetaResult> {
    theta_sdp_with(g, &SdpOptions { tol, ..Default::default() })
}

struct Bracket {
    lower: f64,
    lower_x: Vec<f64>,
    upper: f64,
    upper_z: Vec<f64>,
}

/// Exactly feasible primal point built from an ADMM iterate, and its value.
fn certify_lower(x: &DMatrix<f64>, edges: &[(usize, usize)]) -> Option<(f64, DMatrix<f64>)> {
    let n = x.nrows();
    let mut p = (x + x.transpose()) * 0.5;
    for &(i, j) in edges {
        p[(i, j)] = 0.0;
        p[(j, i)] = 0.0;
    }
    let tr = p.trace();
    if !(tr > 0.0) {
        return None;
    }
    p /= tr;
    let lmin = lambda_min(&p);
    if lmin < 0.0 {
        for i in 0..n {
            p[(i, i)] -= lmin;
        }
        p /= 1.0 - n as f64 * lmin;
    }
    Some((p.sum(), p))
}

fn certify_upper(n: usize, edges: &[(usize, usize)], z: &[f64]) -> f64 {
    let mut m = DMatrix::from_element(n, n, 1.0);
    for (&(i, j), &w) in edges.iter().zip(z) {
        m[(i, j)] += w;
        m[(j, i)] += w;
    }
    lambda_max(&m)
}

pub fn theta_sdp_with(g: &Graph, opts: &SdpOptions) -> Result<ThetaResult> {
    let n = g.n();
    if n == 0 {
        return Err(Error::invalid("theta of the graph on zero vertices"));
    }
    if n > MAX_SDP_N {
        return Err(Error::CapExceeded { what: "SDP vertex count", value: n, cap: MAX_SDP_N });
    }
    if !(opts.tol >= 1e-6) {
        return Err(Error::invalid(format!("SDP tolerance {} below 1e-6", opts.tol)));
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let nf = n as f64;
    let r2 = std::f64::consts::SQRT_2;

    let c = DMatrix::from_element(n, n, -1.0 / nf);
    let mut x = DMatrix::<f64>::identity(n, n) / nf;
    let mut s = DMatrix::<f64>::zeros(n, n);

    let mut ye = vec![0.0; edges.len()];
    let mut mu = 1.0;

    let mut best = Bracket { lower: f64::NEG_INFINITY, lower_x: vec![], upper: f64::INFINITY, upper_z: vec![] };
    let mut iterations = 0;
    for it in 1..=opts.max_iters {
        iterations = it;
        // y-update: AA* is diag(n, 1, ..., 1) in this scaling.
        let r0 = x.trace() - 1.0;
        let t0 = s.trace() + 1.0;
        let y0 = -(mu * r0 + t0) / nf;
        for (k, &(i, j)) in edges.iter().enumerate() {
            let re = r2 * x[(i, j)];
            let te = r2 * (s[(i, j)] - c[(i, j)]);
            ye[k] = -(mu * re + te);
        }
        // V = C - A*(y) - μX, then S = V₊ and X = (S - V)/μ.
        let mut v = &c - &x * mu;
        for i in 0..n {
            v[(i, i)] -= y0;
        }
        for (k, &(i, j)) in edges.iter().enumerate() {
            let w = ye[k] / r2;
            v[(i, j)] -= w;
            v[(j, i)] -= w;
        }
        let eig = v.clone().symmetric_eigen();
        let q = &eig.eigenvectors;
        let pos = DMatrix::from_fn(n, n, |r, col| q[(r, col)] * eig.eigenvalues[col].max(0.0));
        s = &pos * q.transpose();
        s = (&s + s.transpose()) * 0.5;
        x = (&s - &v) / mu;

        if it % opts.check_every == 0 || it == opts.max_iters {
            if let Some((lo, xw)) = certify_lower(&x, &edges) {
                if lo > best.lower {
                    best.lower = lo;
                    best.lower_x = xw.transpose().as_slice().to_vec();
                }
            }
            let z: Vec<f64> = ye.iter().map(|w| nf * w / r2).collect();
            let up = certify_upper(n, &edges, &z);
            if up < best.upper {
                best.upper = up;
                best.upper_z = z;
            }
            if best.upper - best.lower <= 2.0 * opts.tol {
                break;
            }
            if it > WARMUP_ITERS && it % SLOW_ADAPT != 0 {
                continue;
            }
            // Balance primal and dual residuals through the penalty.
            let mut pinf = (x.trace() - 1.0).powi(2);
            for &(i, j) in &edges {
                pinf += 2.0 * x[(i, j)].powi(2);
            }
            let pinf = pinf.sqrt();
            let mut dual_res = &s - &c;
            for i in 0..n {
                dual_res[(i, i)] += y0;
            }
            for (k, &(i, j)) in edges.iter().enumerate() {
                dual_res[(i, j)] += ye[k] / r2;
                dual_res[(j, i)] += ye[k] / r2;
            }
            let dinf = dual_res.norm() / 2.0;
            if pinf > 2.0 * dinf {
                mu = (mu / 0.7).min(1e4);
            } else if dinf > 2.0 * pinf {
                mu = (mu * 0.7).max(1e-4);
            }
        }
    }

    if !best.lower.is_finite() {
        // Fall back to the trivially feasible X = I/n (value 1).
        best.lower = 1.0;
        best.lower_x = DMatrix::<f64>::identity(n, n).as_slice().iter().map(|v| v / nf).collect();
    }
    let value = 0.5 * (best.lower + best.upper);
    let gap = 0.5 * (best.upper - best.lower).max(0.0);
    Ok(ThetaResult {
        value,
        gap,
        method: ThetaMethod::Sdp,
        n,
        primal_witness: best.lower_x,
        dual_certificate: best.upper_z,
        converged: gap <= opts.tol.max(1e-4 * value),
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complement, sample_er};
    use crate::linalg::sym_eigenvalues;

    fn check_certificates(g: &Graph, r: &ThetaResult) {
        let n = g.n();
        let x = DMatrix::from_row_slice(n, n, &r.primal_witness);
        assert!((x.trace() - 1.0).abs() < 1e-10);
        assert!(sym_eigenvalues(&x)[0] > -1e-10);
        for (i, j) in g.edges() {
            assert_eq!(x[(i, j)], 0.0);
        }
        assert!(x.sum() >= r.lower() - 1e-9);
        let edges: Vec<_> = g.edges().collect();
        assert!(certify_upper(n, &edges, &r.dual_certificate) <= r.upper() + 1e-9);
    }

    #[test]
    fn complete_graph() {
        for n in [1, 2, 5, 8] {
            let r = theta_sdp(&Graph::complete(n), SDP_DEFAULT_TOL).unwrap();
            assert!((r.value - 1.0).abs() < 1e-4, "K{n}: {}", r.value);
            assert!(r.converged);
        }
    }

    #[test]
    fn five_cycle() {
        let g = Graph::cycle(5);
        let r = theta_sdp(&g, SDP_DEFAULT_TOL).unwrap();
        assert!((r.value - 5f64.sqrt()).abs() < 1e-4, "{}", r.value);
        assert!(r.gap <= 1e-4);
        check_certificates(&g, &r);
    }

    #[test]
    fn empty_graph() {
        let r = theta_sdp(&Graph::empty(7), SDP_DEFAULT_TOL).unwrap();
        assert!((r.value - 7.0).abs() < 1e-4);
    }

    #[test]
    fn random_graphs_bracket_is_certified() {
        for seed in 0..10 {
            let g = sample_er(12 + seed as usize, 0.5, seed).unwrap();
            let r = theta_sdp(&g, SDP_DEFAULT_TOL).unwrap();
            assert!(r.converged, "seed {seed}: gap {}", r.gap);
            check_certificates(&g, &r);
            assert!(r.value >= 1.0 - 1e-9 && r.value <= g.n() as f64 + 1e-9);
            let rc = theta_sdp(&complement(&g), SDP_DEFAULT_TOL).unwrap();
            assert!(r.upper() * rc.upper() >= g.n() as f64 * (1.0 - 1e-3));
        }
    }

    #[test]
    fn circulant_matches_lp() {
        let spec = crate::CirculantSpec::new(40, [3, 4, 5, 7, 9, 10, 13, 14, 18, 19]).unwrap();
        let lp = crate::theta::theta_circulant(&spec, crate::theta::LpFormulation::FreqPrimal).unwrap().value;
        let r = theta_sdp(&spec.to_graph(), SDP_DEFAULT_TOL).unwrap();
        assert!(r.converged, "gap {}", r.gap);
        assert!(r.lower() - 1e-9 <= lp && lp <= r.upper() + 1e-9, "{lp} outside [{}, {}]", r.lower(), r.upper());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(theta_sdp(&Graph::empty(0), 1e-5).is_err());
        assert!(theta_sdp(&Graph::empty(201), 1e-5).is_err());
        assert!(theta_sdp(&Graph::empty(3), 1e-8).is_err());
    }

    #[test]
    fn iteration_cap_flags_non_convergence() {
        let g = sample_er(30, 0.5, 3).unwrap();
        let r = theta_sdp_with(&g, &SdpOptions { tol: 1e-6, max_iters: 3, check_every: 1 }).unwrap();
        assert!(!r.converged);
        assert!(r.gap > 1e-6);
        check_certificates(&g, &r);
    }
}
