//! Exact clique, independence and chromatic numbers for small graphs.
//!
//! All searches work on single-word neighbourhood masks, so graphs are capped
//! at 64 vertices (32 when the chromatic number is involved).

use serde::{Deserialize, Serialize};

use super::{complement, strong_power, Graph, STRONG_PRODUCT_CAP};
use crate::error::{Error, Result};
use crate::theta::{theta_sdp, SDP_DEFAULT_TOL};

pub const SMALL_INVARIANTS_CAP: usize = 32;
pub const EXACT_ALPHA_CAP: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphInvariants {
    pub clique: usize,
    pub independence: usize,
    pub chromatic: usize,
}

fn masks(g: &Graph, cap: usize) -> Result<Vec<u64>> {
    if g.n() > cap {
        return Err(Error::CapExceeded { what: "exact invariant vertex count", value: g.n(), cap });
    }
    Ok((0..g.n()).map(|i| g.mask(i)).collect())
}

fn full(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Branch and bound with a greedy colouring bound.
fn max_clique(adj: &[u64], cand: u64, size: usize, best: &mut usize) {
    if cand == 0 {
        *best = (*best).max(size);
        return;
    }
    // Colour classes give an upper bound on the clique inside `cand`.
    let mut order: Vec<(usize, usize)> = Vec::with_capacity(cand.count_ones() as usize);
    let mut uncoloured = cand;
    let mut colour = 0;
    while uncoloured != 0 {
        colour += 1;
        let mut avail = uncoloured;
        while avail != 0 {
            let v = avail.trailing_zeros() as usize;
            avail &= !(1 << v) & !adj[v];
            uncoloured &= !(1 << v);
            order.push((v, colour));
        }
    }
    let mut cand = cand;
    for &(v, c) in order.iter().rev() {
        if size + c <= *best {
            return;
        }
        max_clique(adj, cand & adj[v], size + 1, best);
        cand &= !(1 << v);
    }
}

/// Maximum independent set size by degree branching (independent of the
/// clique search, which the invariant check relies on).
fn max_independent(adj: &[u64], cand: u64) -> usize {
    if cand == 0 {
        return 0;
    }
    let (mut vmin, mut dmin, mut vmax, mut dmax) = (0, u32::MAX, 0, 0);
    let mut rest = cand;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let d = (adj[v] & cand).count_ones();
        if d < dmin {
            (vmin, dmin) = (v, d);
        }
        if d > dmax {
            (vmax, dmax) = (v, d);
        }
    }
    if dmin <= 1 {
        // A vertex of degree <= 1 lies in some maximum independent set.
        return 1 + max_independent(adj, cand & !(1 << vmin) & !adj[vmin]);
    }
    let without = max_independent(adj, cand & !(1 << vmax));
    let with = 1 + max_independent(adj, cand & !(1 << vmax) & !adj[vmax]);
    without.max(with)
}

fn k_colourable(adj: &[u64], n: usize, k: usize) -> bool {
    fn go(adj: &[u64], n: usize, k: usize, colours: &mut [Option<usize>], used: usize, left: usize) -> bool {
        if left == 0 {
            return true;
        }
        // DSatur choice: most distinct neighbour colours, then highest degree.
        let mut pick = None;
        let mut key = (0usize, 0u32);
        for v in 0..n {
            if colours[v].is_some() {
                continue;
            }
            let mut seen = 0u64;
            let mut nb = adj[v];
            while nb != 0 {
                let u = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                if let Some(c) = colours[u] {
                    seen |= 1 << c;
                }
            }
            let cand = (seen.count_ones() as usize, adj[v].count_ones());
            if pick.is_none() || cand > key {
                pick = Some((v, seen));
                key = cand;
            }
        }
        let (v, seen) = pick.expect("uncoloured vertex exists");
        for c in 0..k.min(used + 1) {
            if seen >> c & 1 == 0 {
                colours[v] = Some(c);
                if go(adj, n, k, colours, used.max(c + 1), left - 1) {
                    return true;
                }
                colours[v] = None;
            }
        }
        false
    }
    let mut colours = vec![None; n];
    go(adj, n, k, &mut colours, 0, n)
}

pub fn clique_number(g: &Graph) -> Result<usize> {
    let adj = masks(g, EXACT_ALPHA_CAP)?;
    let mut best = 0;
    max_clique(&adj, full(g.n()), 0, &mut best);
    Ok(best)
}

pub fn independence_number(g: &Graph) -> Result<usize> {
    let adj = masks(g, EXACT_ALPHA_CAP)?;
    Ok(max_independent(&adj, full(g.n())))
}

pub fn chromatic_number(g: &Graph) -> Result<usize> {
    let adj = masks(g, SMALL_INVARIANTS_CAP)?;
    let n = g.n();
    if n == 0 {
        return Ok(0);
    }
    let mut lower = 0;
    max_clique(&adj, full(n), 0, &mut lower);
    let mut k = lower.max(1);
    while !k_colourable(&adj, n, k) {
        k += 1;
    }
    Ok(k)
}

/// Exact `(ω, α, χ)` for `n <= 32`. The clique number is computed twice, by
/// the clique search on `G` and the independent-set search on the complement,
/// and the two must agree.
pub fn small_invariants(g: &Graph) -> Result<GraphInvariants> {
    if g.n() > SMALL_INVARIANTS_CAP {
        return Err(Error::CapExceeded { what: "exact invariant vertex count", value: g.n(), cap: SMALL_INVARIANTS_CAP });
    }
    let clique = clique_number(g)?;
    let via_complement = independence_number(&complement(g))?;
    if clique != via_complement {
        return Err(Error::Internal(format!("clique search {clique} != independent-set search {via_complement}")));
    }
    Ok(GraphInvariants { clique, independence: independence_number(g)?, chromatic: chromatic_number(g)? })
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ShannonBounds {
    /// `α(G^{⊠k})`.
    pub alpha_power: usize,
    /// `α(G^{⊠k})^{1/k}`, a lower bound on the Shannon capacity.
    pub lower: f64,
    /// Lovász number, an upper bound on the Shannon capacity.
    pub theta: f64,
    pub theta_gap: f64,
}

pub fn shannon_bounds(g: &Graph, k: u32) -> Result<ShannonBounds> {
    if k == 0 {
        return Err(Error::invalid("power k must be >= 1"));
    }
    let power = strong_power(g, k, STRONG_PRODUCT_CAP)?;
    if power.n() > SMALL_INVARIANTS_CAP {
        return Err(Error::CapExceeded { what: "strong power vertex count", value: power.n(), cap: SMALL_INVARIANTS_CAP });
    }
    let alpha_power = independence_number(&power)?;
    let theta = theta_sdp(g, SDP_DEFAULT_TOL)?;
    Ok(ShannonBounds {
        alpha_power,
        lower: (alpha_power as f64).powf(1.0 / k as f64),
        theta: theta.value,
        theta_gap: theta.gap,
    })
}
