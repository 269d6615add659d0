use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::FrameMatrix;
use crate::error::{Error, Result};
use crate::graph::circulant::{check_paley_prime, quadratic_residues};
use crate::linalg::complex_singular_values;
use crate::rng::rng_from_seed;

/// `(p+1)/2 x (p+1)` frame. Column `j ∈ Z_p` is
/// `(1/√p, √(2/p) ζ^{q j} for q in the quadratic residues)` with
/// `ζ = exp(2πi/p)`, i.e. the residue rows of the DFT plus a constant row;
/// the last column is `e_0`. All columns are unit norm, the frame operator
/// is `2I`, and every pairwise inner product has modulus `1/√p`.
pub fn paley_etf(p: usize) -> Result<FrameMatrix> {
    check_paley_prime(p)?;
    let qr = quadratic_residues(p);
    let d = qr.len() + 1;
    let pf = p as f64;
    let head = 1.0 / pf.sqrt();
    let tail = (2.0 / pf).sqrt();
    let m = DMatrix::from_fn(d, p + 1, |r, c| {
        if c == p {
            Complex64::from(if r == 0 { 1.0 } else { 0.0 })
        } else if r == 0 {
            Complex64::from(head)
        } else {
            let q = qr[r - 1];
            Complex64::from_polar(tail, 2.0 * PI * ((q * c) % p) as f64 / pf)
        }
    });
    FrameMatrix::unit_norm(m)
}

/// Condition numbers `σ_max / σ_min` of random `m`-column submatrices.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RipStats {
    pub m: usize,
    pub trials: usize,
    /// Draws whose submatrix has rank below `m`; their condition number is
    /// infinite and excluded from the statistics below.
    pub rank_deficient: usize,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub mean: Option<f64>,
    /// `(q, value)` pairs for q in 0.05, 0.25, 0.5, 0.75, 0.95.
    pub quantiles: Vec<(f64, f64)>,
    pub samples: Vec<Option<f64>>,
}

pub(crate) fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.len() == 1 {
        return sorted[0];
    }
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn rip_condition_sample(f: &FrameMatrix, m: usize, trials: usize, seed: u64) -> Result<RipStats> {
    if m == 0 || m > f.n() {
        return Err(Error::invalid(format!("column count {m} outside 1..={}", f.n())));
    }
    let mut rng = rng_from_seed(seed);
    let mut samples = Vec::with_capacity(trials);
    for _ in 0..trials {
        let mut cols = rand::seq::index::sample(&mut rng, f.n(), m).into_vec();
        cols.sort_unstable();
        let sub = f.matrix().select_columns(&cols);
        let sv = complex_singular_values(&sub);
        let top = sv[0];
        let thresh = (f.d().max(m) as f64 * f64::EPSILON * top).max(1e-12);
        let cond = if m > f.d() || sv.len() < m || sv[m - 1] <= thresh { None } else { Some(top / sv[m - 1]) };
        samples.push(cond);
    }
    let mut finite: Vec<f64> = samples.iter().flatten().copied().collect();
    finite.sort_by(f64::total_cmp);
    let rank_deficient = trials - finite.len();
    let (min, max, mean) = if finite.is_empty() {
        (None, None, None)
    } else {
        (Some(finite[0]), Some(finite[finite.len() - 1]), Some(finite.iter().sum::<f64>() / finite.len() as f64))
    };
    let quantiles = if finite.is_empty() {
        vec![]
    } else {
        [0.05, 0.25, 0.5, 0.75, 0.95].iter().map(|&q| (q, quantile(&finite, q))).collect()
    };
    Ok(RipStats { m, trials, rank_deficient, min, max, mean, quantiles, samples })
}

#[cfg(test)]
mod tests {
    use super::super::{coherence, verify_etf, welch_bound};
    use super::*;

    #[test]
    fn paley_13() {
        let f = paley_etf(13).unwrap();
        assert_eq!((f.d(), f.n()), (7, 14));
        let r = verify_etf(&f, 1e-9);
        assert!(r.pass, "{r:?}");
        assert!((r.welch_bound - 1.0 / 13f64.sqrt()).abs() < 1e-15);
        assert!((r.coherence - r.welch_bound).abs() < 1e-12);
    }

    #[test]
    fn paley_5_tight() {
        let f = paley_etf(5).unwrap();
        assert_eq!((f.d(), f.n()), (3, 6));
        assert!(verify_etf(&f, 1e-10).tightness_dev < 1e-10);
    }

    #[test]
    fn paley_family() {
        for p in [5usize, 13, 17, 29, 37, 41, 53] {
            let r = verify_etf(&paley_etf(p).unwrap(), 1e-9);
            assert!(r.pass, "p={p}: {r:?}");
            assert!(r.tightness_dev <= 1e-9);
        }
    }

    #[test]
    fn invalid_primes() {
        assert!(paley_etf(11).is_err());
        assert!(paley_etf(15).is_err());
        assert!(paley_etf(2).is_err());
    }

    #[test]
    fn welch_is_a_lower_bound() {
        for p in [5usize, 13, 17] {
            let f = paley_etf(p).unwrap();
            assert!(coherence(&f) >= welch_bound(f.d(), f.n()) - 1e-12);
        }
    }

    #[test]
    fn single_columns_are_perfectly_conditioned() {
        let s = rip_condition_sample(&paley_etf(13).unwrap(), 1, 50, 3).unwrap();
        assert_eq!(s.rank_deficient, 0);
        assert!(s.samples.iter().all(|c| (c.unwrap() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn three_columns_are_independent() {
        let s = rip_condition_sample(&paley_etf(13).unwrap(), 3, 200, 4).unwrap();
        assert_eq!(s.rank_deficient, 0);
        assert!(s.min.unwrap() >= 1.0 && s.max.unwrap().is_finite());
        assert_eq!(s.quantiles.len(), 5);
    }

    #[test]
    fn too_many_columns_are_deficient() {
        let s = rip_condition_sample(&paley_etf(5).unwrap(), 4, 30, 5).unwrap();
        assert_eq!(s.rank_deficient, 30);
        assert!(s.min.is_none());
        assert!(rip_condition_sample(&paley_etf(5).unwrap(), 7, 1, 0).is_err());
    }

    #[test]
    fn quantile_interpolates() {
        assert_eq!(quantile(&[1.0, 2.0, 3.0], 0.5), 2.0);
        assert_eq!(quantile(&[1.0, 3.0], 0.5), 2.0);
    }
}
