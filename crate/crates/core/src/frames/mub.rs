use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{welch_bound, VerificationReport};
use crate::error::{Error, Result};
use crate::graph::is_prime;

/// A list of bases of `C^d`, each stored as the columns of a `d x d` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct MubSystem {
    d: usize,
    bases: Vec<DMatrix<Complex64>>,
}

impl MubSystem {
    /// Checks dimensions and that every basis is orthonormal within `1e-10`.
    pub fn new(d: usize, bases: Vec<DMatrix<Complex64>>) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("dimension must be positive"));
        }
        for b in &bases {
            if b.nrows() != d || b.ncols() != d {
                return Err(Error::invalid(format!("basis is {}x{}, expected {d}x{d}", b.nrows(), b.ncols())));
            }
            let dev = (b.adjoint() * b - DMatrix::<Complex64>::identity(d, d)).iter().fold(0.0f64, |m, z| m.max(z.norm()));
            if dev > 1e-10 {
                return Err(Error::invalid(format!("basis not orthonormal (deviation {dev:e})")));
            }
        }
        Ok(MubSystem { d, bases })
    }

    /// Skips the orthonormality check, for scoring arbitrary candidates.
    pub fn candidate(d: usize, bases: Vec<DMatrix<Complex64>>) -> Self {
        MubSystem { d, bases }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn bases(&self) -> &[DMatrix<Complex64>] {
        &self.bases
    }
}

/// Serialized as `{d, bases: [{re, im}]}` with column-major vectors.
#[derive(Serialize, Deserialize)]
struct BasisJson {
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl Serialize for MubSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out<'a> {
            d: usize,
            bases: &'a [BasisJson],
        }
        let bases: Vec<BasisJson> = self
            .bases
            .iter()
            .map(|b| BasisJson {
                re: b.column_iter().map(|c| c.iter().map(|z| z.re).collect()).collect(),
                im: b.column_iter().map(|c| c.iter().map(|z| z.im).collect()).collect(),
            })
            .collect();
        Out { d: self.d, bases: &bases }.serialize(s)
    }
}

/// One basis for each `a ∈ Z_d` with vectors
/// `v_b(t) = d^{-1/2} exp(2πi (a t² + b t) / d)`, plus the standard basis.
/// For `d = 2` the quadratic phase degenerates (`t² = t`), so the chirp is
/// taken as `i^{a t²}` instead, which yields the circular basis.
pub fn mub_prime(d: usize) -> Result<MubSystem> {
    if !is_prime(d) {
        return Err(Error::invalid(format!("{d} is not prime")));
    }
    let df = d as f64;
    let scale = 1.0 / df.sqrt();
    let mut bases = vec![DMatrix::<Complex64>::identity(d, d)];
    for a in 0..d {
        bases.push(DMatrix::from_fn(d, d, |t, b| {
            let phase = if d == 2 {
                PI / 2.0 * (a * t * t) as f64 + PI * (b * t) as f64
            } else {
                2.0 * PI * ((a * t * t + b * t) % d) as f64 / df
            };
            Complex64::from_polar(scale, phase)
        }));
    }
    MubSystem::new(d, bases)
}

/// Compares `|<v_i^(k), v_j^(l)>|²` with 1 (same vector), 0 (same basis) and
/// `1/d` (different bases).
pub fn verify_mub(system: &MubSystem, tol: f64) -> Result<VerificationReport> {
    let d = system.d;
    for b in &system.bases {
        if b.nrows() != d || b.ncols() != d {
            return Err(Error::invalid("basis dimension mismatch"));
        }
    }
    let target = 1.0 / d as f64;
    let (mut norm_dev, mut orth_dev, mut unb_dev, mut mu) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (k, bk) in system.bases.iter().enumerate() {
        let g = bk.adjoint() * bk;
        for i in 0..d {
            norm_dev = norm_dev.max((g[(i, i)].norm_sqr() - 1.0).abs());
            for j in 0..d {
                if i != j {
                    orth_dev = orth_dev.max(g[(i, j)].norm_sqr());
                    mu = mu.max(g[(i, j)].norm());
                }
            }
        }
        for bl in &system.bases[k + 1..] {
            let c = bk.adjoint() * bl;
            for z in c.iter() {
                unb_dev = unb_dev.max((z.norm_sqr() - target).abs());
                mu = mu.max(z.norm());
            }
        }
    }
    let k = system.bases.len();
    let mut s = DMatrix::<Complex64>::zeros(d, d);
    for b in &system.bases {
        s += b * b.adjoint();
    }
    s -= DMatrix::<Complex64>::identity(d, d) * Complex64::from(k as f64);
    let tightness_dev = crate::linalg::complex_singular_values(&s).first().copied().unwrap_or(0.0);
    Ok(VerificationReport {
        max_norm_dev: norm_dev,
        max_orthogonality_dev: Some(orth_dev),
        max_unbiasedness_dev: Some(unb_dev),
        max_equiangularity_dev: None,
        tightness_dev,
        coherence: mu,
        welch_bound: welch_bound(d, k * d),
        tol,
        pass: norm_dev <= tol && orth_dev <= tol && unb_dev <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::super::testutil::random_unitary;
    use super::*;

    #[test]
    fn qubit_bases() {
        let s = mub_prime(2).unwrap();
        assert_eq!(s.bases().len(), 3);
        for (k, a) in s.bases().iter().enumerate() {
            for b in &s.bases()[k + 1..] {
                for z in (a.adjoint() * b).iter() {
                    assert!((z.norm() - 0.5f64.sqrt()).abs() < 1e-14);
                }
            }
        }
        assert!(verify_mub(&s, 1e-10).unwrap().pass);
    }

    #[test]
    fn prime_dimensions_pass() {
        for d in [2usize, 3, 5, 7, 11, 13] {
            let s = mub_prime(d).unwrap();
            assert_eq!(s.bases().len(), d + 1);
            let r = verify_mub(&s, 1e-10).unwrap();
            assert!(r.pass, "d={d}: {r:?}");
            assert!(r.max_unbiasedness_dev.unwrap() < 1e-12);
            // d+1 unbiased bases form a tight frame with constant d+1.
            assert!(r.tightness_dev < 1e-10);
        }
    }

    #[test]
    fn composite_rejected() {
        assert!(mub_prime(6).is_err());
        assert!(mub_prime(1).is_err());
    }

    #[test]
    fn identical_bases_are_biased() {
        let d = 4;
        let s = MubSystem::new(d, vec![DMatrix::identity(d, d), DMatrix::identity(d, d)]).unwrap();
        let r = verify_mub(&s, 1e-10).unwrap();
        assert!((r.max_unbiasedness_dev.unwrap() - (1.0 - 1.0 / d as f64)).abs() < 1e-15);
        assert!(!r.pass);
    }

    #[test]
    fn random_pair_reports_failure() {
        let s = MubSystem::new(2, vec![random_unitary(2, 1), random_unitary(2, 2)]).unwrap();
        let r = verify_mub(&s, 1e-10).unwrap();
        assert!(r.max_unbiasedness_dev.unwrap() > 1e-6);
        assert!(r.max_orthogonality_dev.unwrap() < 1e-12);
    }

    #[test]
    fn mismatched_dimensions() {
        let s = MubSystem::candidate(3, vec![DMatrix::identity(3, 3), DMatrix::identity(2, 2)]);
        assert!(verify_mub(&s, 1e-10).is_err());
        assert!(MubSystem::new(3, vec![DMatrix::identity(2, 2)]).is_err());
    }

    #[test]
    fn serializes() {
        let v: serde_json::Value = serde_json::to_value(mub_prime(3).unwrap()).unwrap();
        assert_eq!(v["d"], 3);
        assert_eq!(v["bases"].as_array().unwrap().len(), 4);
    }
}
