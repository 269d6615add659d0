use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{coherence, FrameMatrix};
use crate::error::{Error, Result};
use crate::rng::{derive_indexed, rng_from_seed};

pub const SIC_SUCCESS_TOL: f64 = 1e-6;
const LM_ITERS: usize = 60;

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SicOptions {
    pub restarts: usize,
    /// Iterations of the annealed smooth-max stage.
    pub iters: usize,
    /// Cap on the iterations of the fourth-moment descent that follows; a
    /// short least-squares polish on the equiangularity residuals runs last.
    pub polish_iters: usize,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct SicResult {
    pub frame: FrameMatrix,
    pub coherence: f64,
    /// `1/√(d+1)`.
    pub target: f64,
    /// Whether `|coherence - target| <= 1e-6`.
    pub success: bool,
    pub best_restart: usize,
    pub restarts: usize,
}

/// `n` unit vectors in `C^d`, vector `i` at `x[i*d..(i+1)*d]`.
struct Config {
    d: usize,
    n: usize,
    x: Vec<Complex64>,
}

/// Which smooth surrogate of the coherence is being minimized.
#[derive(Clone, Copy)]
enum Objective {
    /// `(1/T) ln Σ_{i<j} exp(T g_ij)` with `g_ij = |<φ_i, φ_j>|²`.
    SmoothMax(f64),
    /// `Σ_{i<j} g_ij²`; over `d²` unit vectors its minimizers are exactly the
    /// SICs.
    FourthMoment,
}

impl Config {
    fn random(d: usize, seed: u64) -> Self {
        let n = d * d;
        let mut rng = rng_from_seed(seed);
        let mut x: Vec<Complex64> =
            (0..n * d).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
        normalize(&mut x, d);
        Config { d, n, x }
    }

    fn inner(&self, i: usize, j: usize) -> Complex64 {
        let d = self.d;
        self.x[i * d..(i + 1) * d].iter().zip(&self.x[j * d..(j + 1) * d]).map(|(a, b)| a.conj() * b).sum()
    }

    fn max_overlap(&self) -> f64 {
        let mut m = 0.0f64;
        for i in 0..self.n {
            for j in i + 1..self.n {
                m = m.max(self.inner(i, j).norm_sqr());
            }
        }
        m
    }

    /// Objective value and Riemannian gradient on the product of spheres.
    fn value_grad(&self, obj: Objective) -> (f64, Vec<Complex64>) {
        let (d, n) = (self.d, self.n);
        let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                pairs.push((i, j, self.inner(i, j)));
            }
        }
        // Per-pair weight w with gradient contribution w * ∇g_ij.
        let (value, weights): (f64, Vec<f64>) = match obj {
            Objective::SmoothMax(t) => {
                let gmax = pairs.iter().map(|p| p.2.norm_sqr()).fold(0.0, f64::max);
                let e: Vec<f64> = pairs.iter().map(|p| (t * (p.2.norm_sqr() - gmax)).exp()).collect();
                let s: f64 = e.iter().sum();
                (gmax + s.ln() / t, e.into_iter().map(|v| v / s).collect())
            }
            Objective::FourthMoment => {
                let v = pairs.iter().map(|p| p.2.norm_sqr().powi(2)).sum();
                (v, pairs.iter().map(|p| 2.0 * p.2.norm_sqr()).collect())
            }
        };
        let mut g = vec![Complex64::new(0.0, 0.0); n * d];
        for (&(i, j, c), w) in pairs.iter().zip(&weights) {
            // ∇_{φ_i} |φ_i^H φ_j|² = 2 conj(c) φ_j, and symmetrically for φ_j.
            let (a, b) = (2.0 * w * c.conj(), 2.0 * w * c);
            for k in 0..d {
                let (xi, xj) = (self.x[i * d + k], self.x[j * d + k]);
                g[i * d + k] += a * xj;
                g[j * d + k] += b * xi;
            }
        }
        for i in 0..n {
            let r = &self.x[i * d..(i + 1) * d];
            let gi = &mut g[i * d..(i + 1) * d];
            let radial: f64 = r.iter().zip(gi.iter()).map(|(a, b)| (a.conj() * b).re).sum();
            for (gk, rk) in gi.iter_mut().zip(r) {
                *gk -= rk * radial;
            }
        }
        (value, g)
    }

    fn value(&self, obj: Objective) -> f64 {
        self.value_grad(obj).0
    }

    fn stepped(&self, g: &[Complex64], t: f64) -> Config {
        let mut x: Vec<Complex64> = self.x.iter().zip(g).map(|(a, b)| a - b * t).collect();
        normalize(&mut x, self.d);
        Config { d: self.d, n: self.n, x }
    }

    /// Armijo backtracking descent; returns the final step size.
    fn descend(&mut self, obj: Objective, iters: usize, mut step: f64, grad_tol: f64) -> f64 {
        for _ in 0..iters {
            let (f, g) = self.value_grad(obj);
            let gn2: f64 = g.iter().map(|z| z.norm_sqr()).sum();
            if gn2.sqrt() < grad_tol {
                break;
            }
            step *= 2.0;
            loop {
                let cand = self.stepped(&g, step);
                if cand.value(obj) <= f - 1e-4 * step * gn2 {
                    *self = cand;
                    break;
                }
                step *= 0.5;
                if step < 1e-20 {
                    return step;
                }
            }
        }
        step
    }

    /// Levenberg-Marquardt on the residuals `g_ij - 1/(d+1)` and
    /// `|φ_i|² - 1`, for quadratic convergence once the descent stages are
    /// close to a SIC.
    fn least_squares_polish(&mut self, iters: usize) {
        let (d, n) = (self.d, self.n);
        let target = 1.0 / (d + 1) as f64;
        let p = 2 * n * d;
        let residuals = |c: &Config| -> Vec<f64> {
            let mut r = Vec::with_capacity(n * (n - 1) / 2 + n);
            for i in 0..n {
                for j in i + 1..n {
                    r.push(c.inner(i, j).norm_sqr() - target);
                }
                r.push(c.inner(i, i).re - 1.0);
            }
            r
        };
        let cost = |r: &[f64]| r.iter().map(|v| v * v).sum::<f64>();
        let mut r = residuals(self);
        let mut lambda = 1e-3;
        for _ in 0..iters {
            if r.iter().fold(0.0f64, |m, v| m.max(v.abs())) < 1e-15 {
                break;
            }
            let mut jac = DMatrix::<f64>::zeros(r.len(), p);
            let mut row = 0;
            for i in 0..n {
                for j in i + 1..n {
                    let c = self.inner(i, j);
                    let (a, b) = (2.0 * c.conj(), 2.0 * c);
                    for k in 0..d {
                        let gi = a * self.x[j * d + k];
                        let gj = b * self.x[i * d + k];
                        jac[(row, 2 * (i * d + k))] = gi.re;
                        jac[(row, 2 * (i * d + k) + 1)] = gi.im;
                        jac[(row, 2 * (j * d + k))] = gj.re;
                        jac[(row, 2 * (j * d + k) + 1)] = gj.im;
                    }
                    row += 1;
                }
                for k in 0..d {
                    let z = self.x[i * d + k];
                    jac[(row, 2 * (i * d + k))] = 2.0 * z.re;
                    jac[(row, 2 * (i * d + k) + 1)] = 2.0 * z.im;
                }
                row += 1;
            }
            let rv = nalgebra::DVector::from_vec(r.clone());
            let jtj = jac.transpose() * &jac;
            let jtr = jac.transpose() * rv;
            let c0 = cost(&r);
            let mut improved = false;
            for _ in 0..30 {
                let mut a = jtj.clone();
                for q in 0..p {
                    a[(q, q)] += lambda * (1.0 + jtj[(q, q)]);
                }
                let Some(ch) = a.cholesky() else {
                    lambda *= 4.0;
                    continue;
                };
                let delta = ch.solve(&jtr);
                let x: Vec<Complex64> = self
                    .x
                    .iter()
                    .enumerate()
                    .map(|(q, z)| z - Complex64::new(delta[2 * q], delta[2 * q + 1]))
                    .collect();
                let cand = Config { d, n, x };
                let rc = residuals(&cand);
                if cost(&rc) < c0 {
                    *self = cand;
                    r = rc;
                    lambda = (lambda / 3.0).max(1e-15);
                    improved = true;
                    break;
                }
                lambda *= 4.0;
            }
            if !improved {
                break;
            }
        }
        normalize(&mut self.x, d);
    }

    fn to_frame(&self) -> Result<FrameMatrix> {
        let d = self.d;
        FrameMatrix::new(DMatrix::from_fn(d, self.n, |r, c| self.x[c * d + r]))
    }
}

fn normalize(x: &mut [Complex64], d: usize) {
    for v in x.chunks_mut(d) {
        let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in v {
            *z /= nrm;
        }
    }
}

fn run_restart(d: usize, opts: &SicOptions, r: usize) -> Config {
    let mut c = Config::random(d, derive_indexed(opts.seed, "sic", &[d as u64, r as u64]));
    // Temperature annealed geometrically from 1e2 to 1e5 in blocks.
    let blocks = 20usize.min(opts.iters.max(1));
    let per = opts.iters / blocks;
    let mut step = 1e-2;
    for b in 0..blocks {
        let t = 1e2 * 1e3f64.powf(b as f64 / (blocks - 1).max(1) as f64);
        step = c.descend(Objective::SmoothMax(t), per, step, 0.0);
    }
    c.descend(Objective::FourthMoment, opts.polish_iters, 1e-2, 1e-12);
    c.least_squares_polish(LM_ITERS);
    c
}

/// Searches for `d²` equiangular unit vectors in `C^d`. Each restart
/// anneals a smoothed maximum overlap, descends on the fourth frame moment
/// and finishes with Levenberg-Marquardt on the overlap residuals; the restart with the lowest exact coherence is returned.
pub fn sic_search_with(d: usize, opts: &SicOptions) -> Result<SicResult> {
    if !(2..=8).contains(&d) {
        return Err(Error::invalid(format!("dimension {d} outside 2..=8")));
    }
    if opts.restarts == 0 {
        return Err(Error::invalid("at least one restart required"));
    }
    let runs: Vec<(usize, f64, Config)> = (0..opts.restarts)
        .into_par_iter()
        .map(|r| {
            let c = run_restart(d, opts, r);
            (r, c.max_overlap().sqrt(), c)
        })
        .collect();
    let (best_restart, _, best) = runs
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
        .expect("restarts > 0");
    let frame = best.to_frame()?;
    let mu = coherence(&frame);
    let target = 1.0 / ((d + 1) as f64).sqrt();
    Ok(SicResult {
        frame,
        coherence: mu,
        target,
        success: (mu - target).abs() <= SIC_SUCCESS_TOL,
        best_restart,
        restarts: opts.restarts,
    })
}

pub fn sic_search(d: usize, restarts: usize, iters: usize, seed: u64) -> Result<SicResult> {
    sic_search_with(d, &SicOptions { restarts, iters, polish_iters: 4 * iters.max(100), seed })
}

#[cfg(test)]
mod tests {
    use super::super::{verify_etf, welch_bound};
    use super::*;

    #[test]
    fn gradient_matches_finite_differences() {
        let c = Config::random(3, 11);
        for obj in [Objective::SmoothMax(50.0), Objective::FourthMoment] {
            let (_, g) = c.value_grad(obj);
            // Directional derivative along the (tangent) gradient itself.
            let h = 1e-6;
            let plus = c.stepped(&g, -h).value(obj);
            let minus = c.stepped(&g, h).value(obj);
            let fd = (plus - minus) / (2.0 * h);
            let gn2: f64 = g.iter().map(|z| z.norm_sqr()).sum();
            assert!((fd - gn2).abs() <= 1e-5 * gn2.max(1.0), "{fd} vs {gn2}");
        }
    }

    #[test]
    fn qubit_tetrahedron() {
        let r = sic_search(2, 8, 400, 1).unwrap();
        assert!(r.success, "{}", r.coherence);
        assert!((r.coherence - 1.0 / 3f64.sqrt()).abs() <= 1e-6);
        assert!(r.coherence >= welch_bound(2, 4) - 1e-12);
        assert!(verify_etf(&r.frame, 1e-6).pass);
    }

    #[test]
    fn qutrit() {
        let r = sic_search(3, 16, 400, 2).unwrap();
        assert!(r.success, "{}", r.coherence);
        assert!((r.coherence - 0.5).abs() <= 1e-6);
    }

    #[test]
    fn never_below_welch() {
        for d in [2usize, 3, 4] {
            let r = sic_search(d, 2, 50, 3).unwrap();
            assert!(r.coherence >= welch_bound(d, d * d) - 1e-12);
        }
    }

    #[test]
    fn validation() {
        assert!(sic_search(2, 0, 10, 0).is_err());
        assert!(sic_search(1, 1, 10, 0).is_err());
        assert!(sic_search(9, 1, 10, 0).is_err());
    }
}
