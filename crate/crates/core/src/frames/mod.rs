//! Finite frames in `C^d`: mutually unbiased bases, equiangular tight
//! frames, restricted-isometry sampling and a numerical SIC search.

mod etf;
mod mub;
mod sic;

pub use etf::{paley_etf, rip_condition_sample, RipStats};
pub use mub::{mub_prime, verify_mub, MubSystem};
pub use sic::{sic_search, sic_search_with, SicOptions, SicResult};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::complex_singular_values;

/// `n` vectors in `C^d`, stored as the columns of a `d x n` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameMatrix {
    cols: DMatrix<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct FrameJson {
    d: usize,
    n: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl FrameMatrix {
    pub fn new(cols: DMatrix<Complex64>) -> Result<Self> {
        if cols.nrows() == 0 || cols.ncols() == 0 {
            return Err(Error::invalid("frame needs d >= 1 and n >= 1"));
        }
        if cols.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::invalid("frame has non-finite entries"));
        }
        Ok(FrameMatrix { cols })
    }

    /// Builds a frame and checks every column is unit norm within `1e-12`.
    pub fn unit_norm(cols: DMatrix<Complex64>) -> Result<Self> {
        let f = FrameMatrix::new(cols)?;
        let dev = f.max_norm_dev();
        if dev > 1e-12 {
            return Err(Error::invalid(format!("frame column norms deviate from 1 by {dev:e}")));
        }
        Ok(f)
    }

    pub fn d(&self) -> usize {
        self.cols.nrows()
    }

    pub fn n(&self) -> usize {
        self.cols.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.cols
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        self.cols.column(j).iter().copied().collect()
    }

    pub fn gram(&self) -> DMatrix<Complex64> {
        self.cols.adjoint() * &self.cols
    }

    /// `Σ φ φ*`.
    pub fn frame_operator(&self) -> DMatrix<Complex64> {
        &self.cols * self.cols.adjoint()
    }

    /// Applies `u` to every vector.
    pub fn transformed(&self, u: &DMatrix<Complex64>) -> Result<Self> {
        if u.nrows() != self.d() || u.ncols() != self.d() {
            return Err(Error::invalid("transform dimension mismatch"));
        }
        FrameMatrix::new(u * &self.cols)
    }

    fn max_norm_dev(&self) -> f64 {
        self.cols.column_iter().map(|c| (c.norm() - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Columns span `C^d`.
    pub fn spans(&self) -> bool {
        let sv = complex_singular_values(&self.cols);
        let top = sv.first().copied().unwrap_or(0.0);
        sv.len() >= self.d() && sv[self.d() - 1] > 1e-10 * top.max(1.0)
    }

    pub fn to_json(&self) -> Result<String> {
        let col = |f: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            self.cols.column_iter().map(|c| c.iter().map(f).collect()).collect()
        };
        let j = FrameJson { d: self.d(), n: self.n(), re: col(|z| z.re), im: col(|z| z.im) };
        Ok(serde_json::to_string(&j)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: FrameJson = serde_json::from_str(s)?;
        if j.re.len() != j.n || j.im.len() != j.n {
            return Err(Error::invalid("frame JSON column count does not match n"));
        }
        if j.re.iter().chain(&j.im).any(|c| c.len() != j.d) {
            return Err(Error::invalid("frame JSON column length does not match d"));
        }
        FrameMatrix::new(DMatrix::from_fn(j.d, j.n, |r, c| Complex64::new(j.re[c][r], j.im[c][r])))
    }
}

/// `sqrt((n - d) / ((n - 1) d))`, zero when `n <= d`.
pub fn welch_bound(d: usize, n: usize) -> f64 {
    if n <= d || n < 2 {
        return 0.0;
    }
    (((n - d) as f64) / (((n - 1) * d) as f64)).sqrt()
}

/// Largest `|<φ_i, φ_j>|` over `i != j`.
pub fn coherence(f: &FrameMatrix) -> f64 {
    let g = f.gram();
    let n = f.n();
    let mut mu = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            mu = mu.max(g[(i, j)].norm());
        }
    }
    mu
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub max_norm_dev: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_orthogonality_dev: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_unbiasedness_dev: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_equiangularity_dev: Option<f64>,
    pub tightness_dev: f64,
    pub coherence: f64,
    pub welch_bound: f64,
    pub tol: f64,
    pub pass: bool,
}

fn spectral_norm_hermitian(a: &DMatrix<Complex64>) -> f64 {
    complex_singular_values(a).first().copied().unwrap_or(0.0)
}

/// Unit norms, tightness `‖Σφφ* - (n/d) I‖`, equiangularity spread and
/// coherence against the Welch value. Passes when the norm, tightness and
/// spread deviations and `|μ - welch|` are all within `tol`.
pub fn verify_etf(f: &FrameMatrix, tol: f64) -> VerificationReport {
    let (d, n) = (f.d(), f.n());
    let s = f.frame_operator() - DMatrix::<Complex64>::identity(d, d) * Complex64::from(n as f64 / d as f64);
    let tightness_dev = spectral_norm_hermitian(&s);
    let g = f.gram();
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for i in 0..n {
        for j in i + 1..n {
            let v = g[(i, j)].norm();
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    let spread = if n < 2 { 0.0 } else { hi - lo };
    let welch = welch_bound(d, n);
    let norm_dev = f.max_norm_dev();
    let pass = norm_dev <= tol && tightness_dev <= tol && spread <= tol && (hi - welch).abs() <= tol;
    VerificationReport {
        max_norm_dev: norm_dev,
        max_equiangularity_dev: Some(spread),
        tightness_dev,
        coherence: hi,
        welch_bound: welch,
        tol,
        pass,
        ..Default::default()
    }
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;
    use crate::rng::rng_from_seed;
    use rand::Rng;
    use rand_distr::StandardNormal;

    /// Haar-ish random unitary from the QR factor of a complex Gaussian matrix.
    pub fn random_unitary(d: usize, seed: u64) -> DMatrix<Complex64> {
        let mut rng = rng_from_seed(seed);
        let g = DMatrix::from_fn(d, d, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        g.qr().q()
    }
}
