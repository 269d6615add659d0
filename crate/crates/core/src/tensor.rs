//! Symmetric tensors, their injective `ℓp` norms, and Monte Carlo probes of
//! Gaussian tensor series `E ‖Σ g_i T_i‖_{I_p}`.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{derive_indexed, rng_from_seed};

/// Cap on `d^r`, the cost of one gradient evaluation.
pub const DENSE_CAP: usize = 10_000_000;
pub const DEFAULT_ASCENT_ITERS: usize = 1000;

/// A symmetric tensor in `(R^d)^{⊗r}`. The canonical data is one value per
/// multiset of indices; a dense copy is kept for contractions.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTensor {
    d: usize,
    r: usize,
    dense: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TensorEntry {
    pub idx: Vec<usize>,
    pub val: f64,
}

#[derive(Serialize, Deserialize)]
struct TensorJson {
    d: usize,
    r: usize,
    entries: Vec<TensorEntry>,
}

fn dense_len(d: usize, r: usize) -> Result<usize> {
    let len = (d as u64).checked_pow(r as u32).unwrap_or(u64::MAX);
    if len > DENSE_CAP as u64 {
        return Err(Error::CapExceeded { what: "tensor entries d^r", value: len.min(usize::MAX as u64) as usize, cap: DENSE_CAP });
    }
    Ok(len as usize)
}

/// Visits every sorted index tuple of length `r` over `0..d`.
fn for_each_multiset(d: usize, r: usize, mut f: impl FnMut(&[usize])) {
    if d == 0 {
        return;
    }
    let mut idx = vec![0usize; r];
    loop {
        f(&idx);
        let mut k = r;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            if idx[k] + 1 < d {
                idx[k] += 1;
                let v = idx[k];
                for t in &mut idx[k + 1..] {
                    *t = v;
                }
                break;
            }
        }
    }
}

impl SymTensor {
    fn check_shape(d: usize, r: usize) -> Result<usize> {
        if d == 0 || r == 0 {
            return Err(Error::invalid("tensor needs d >= 1 and r >= 1"));
        }
        dense_len(d, r)
    }

    fn offset(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |o, &k| o * self.d + k)
    }

    /// Builds a tensor from multiset coefficients; every permutation of an
    /// index tuple gets the same value. Unlisted multisets are zero.
    pub fn from_entries(d: usize, r: usize, entries: &[TensorEntry]) -> Result<Self> {
        let len = Self::check_shape(d, r)?;
        let mut t = SymTensor { d, r, dense: vec![0.0; len] };
        let mut seen = std::collections::HashSet::new();
        for e in entries {
            if e.idx.len() != r || e.idx.iter().any(|&k| k >= d) {
                return Err(Error::invalid(format!("entry index {:?} does not fit d={d}, r={r}", e.idx)));
            }
            if e.idx.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::invalid(format!("entry index {:?} is not sorted", e.idx)));
            }
            if !e.val.is_finite() {
                return Err(Error::invalid("non-finite tensor entry"));
            }
            if !seen.insert(e.idx.clone()) {
                return Err(Error::invalid(format!("entry index {:?} repeated", e.idx)));
            }
            t.set_orbit(&e.idx, e.val);
        }
        Ok(t)
    }

    fn set_orbit(&mut self, sorted: &[usize], val: f64) {
        let mut perm = sorted.to_vec();
        // Walk all distinct permutations in lexicographic order.
        loop {
            let o = self.offset(&perm);
            self.dense[o] = val;
            let Some(i) = (0..perm.len().saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else { break };
            let j = (i + 1..perm.len()).rev().find(|&j| perm[j] > perm[i]).unwrap();
            perm.swap(i, j);
            perm[i + 1..].reverse();
        }
    }

    /// Multiset coefficients in lexicographic order.
    pub fn entries(&self) -> Vec<TensorEntry> {
        let mut out = Vec::new();
        for_each_multiset(self.d, self.r, |idx| {
            let v = self.dense[self.offset(idx)];
            if v != 0.0 {
                out.push(TensorEntry { idx: idx.to_vec(), val: v });
            }
        });
        out
    }

    /// From a full array in row-major order; must be symmetric to `1e-12`.
    pub fn from_dense(d: usize, r: usize, dense: Vec<f64>) -> Result<Self> {
        let len = Self::check_shape(d, r)?;
        if dense.len() != len {
            return Err(Error::invalid("dense tensor has wrong length"));
        }
        let t = SymTensor { d, r, dense };
        let mut bad = false;
        for_each_multiset(d, r, |idx| {
            let v = t.dense[t.offset(idx)];
            let mut probe = t.clone();
            probe.set_orbit(idx, f64::NAN);
            for (a, b) in probe.dense.iter().zip(&t.dense) {
                if a.is_nan() && (b - v).abs() > 1e-12 {
                    bad = true;
                }
            }
        });
        if bad {
            return Err(Error::invalid("dense tensor is not symmetric"));
        }
        Ok(t)
    }

    pub fn rank_one(v: &[f64], r: usize) -> Result<Self> {
        let d = v.len();
        let len = Self::check_shape(d, r)?;
        let mut dense = vec![1.0; len];
        for (o, x) in dense.iter_mut().enumerate() {
            let mut rest = o;
            for _ in 0..r {
                *x *= v[rest % d];
                rest /= d;
            }
        }
        Ok(SymTensor { d, r, dense })
    }

    pub fn coordinate(d: usize, r: usize, i: usize) -> Result<Self> {
        if i >= d {
            return Err(Error::invalid("coordinate index out of range"));
        }
        let mut e = vec![0.0; d];
        e[i] = 1.0;
        Self::rank_one(&e, r)
    }

    pub fn zeros(d: usize, r: usize) -> Result<Self> {
        Ok(SymTensor { d, r, dense: vec![0.0; Self::check_shape(d, r)?] })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn dense(&self) -> &[f64] {
        &self.dense
    }

    pub fn scaled(&self, c: f64) -> Self {
        SymTensor { d: self.d, r: self.r, dense: self.dense.iter().map(|v| v * c).collect() }
    }

    pub fn axpy(&mut self, c: f64, other: &SymTensor) {
        for (a, b) in self.dense.iter_mut().zip(&other.dense) {
            *a += c * b;
        }
    }

    /// `T(x, ..., x, ·)`: contraction with `x` in all but the first slot.
    pub fn contract_all_but_one(&self, x: &[f64]) -> Vec<f64> {
        let d = self.d;
        let mut cur = self.dense.clone();
        for _ in 1..self.r {
            let next: Vec<f64> = cur.chunks(d).map(|c| c.iter().zip(x).map(|(a, b)| a * b).sum()).collect();
            cur = next;
        }
        cur
    }

    /// `<T, x^{⊗r}>`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.contract_all_but_one(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&TensorJson { d: self.d, r: self.r, entries: self.entries() })?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: TensorJson = serde_json::from_str(s)?;
        SymTensor::from_entries(j.d, j.r, &j.entries)
    }

    /// As a `d x d` matrix; requires `r = 2`.
    pub fn as_matrix(&self) -> Result<nalgebra::DMatrix<f64>> {
        if self.r != 2 {
            return Err(Error::invalid(format!("order {} tensor is not a matrix", self.r)));
        }
        Ok(nalgebra::DMatrix::from_row_slice(self.d, self.d, &self.dense))
    }
}

fn lp_norm(x: &[f64], p: f64) -> f64 {
    x.iter().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
}

fn to_sphere(x: &mut [f64], p: f64) {
    let n = lp_norm(x, p);
    if n > 0.0 {
        x.iter_mut().for_each(|v| *v /= n);
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NormEstimate {
    /// `|<T, witness^{⊗r}>|`, a lower bound on the injective norm.
    pub value: f64,
    pub witness: Vec<f64>,
    pub restarts_used: usize,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct AscentOptions {
    pub restarts: usize,
    pub iters: usize,
}

/// Projected gradient ascent of `s <T, x^{⊗r}>` on the `ℓp` sphere for a
/// fixed sign `s`, from the start `x`. Steps move a fixed Euclidean
/// distance along the normalized gradient and are then rescaled onto the
/// sphere; the step length doubles after every accepted step and halves on
/// every rejected one.
fn ascend(t: &SymTensor, p: f64, sign: f64, mut x: Vec<f64>, iters: usize) -> (f64, Vec<f64>) {
    let r = t.r as f64;
    let mut f = sign * t.eval(&x);
    let mut eta = 0.5;
    let mut stalled = 0;
    for _ in 0..iters {
        let g: Vec<f64> = t.contract_all_but_one(&x).iter().map(|v| sign * r * v).collect();
        let gn = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if gn == 0.0 {
            break;
        }
        let mut moved = false;
        while eta > 1e-14 {
            let mut y: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a + eta * b / gn).collect();
            to_sphere(&mut y, p);
            let fy = sign * t.eval(&y);
            if fy > f {
                let gain = fy - f;
                x = y;
                f = fy;
                if gain <= 1e-16 * f.abs() {
                    stalled += 1;
                } else {
                    stalled = 0;
                }
                eta = (eta * 2.0).min(1e6);
                moved = true;
                break;
            }
            eta *= 0.5;
        }
        if !moved || stalled >= 5 {
            break;
        }
    }
    (f, x)
}

const POLISH_ITERS: usize = 5000;
/// Near a maximum `f` is flat to second order, so value comparisons there
/// only see rounding; the polish tolerates losses this small.
const POLISH_SLACK: f64 = 1e-12;

/// Shifted fixed-point iteration `x ← J_p(∇f(x) + α x^{p-1})` on the `ℓp`
/// sphere, where `J_p` is the duality map `u ↦ sign(u)|u|^{1/(p-1)}` followed
/// by normalization and `α = r|f(x)|`. Its fixed points are the stationary
/// points of `f`, and it converges in `x` rather than in `f`, which pins the
/// witness to rounding level where the ascent alone stops near `√ε`. Every
/// quantity scales with `T`, so `c·T` polishes to the same point.
fn polish(t: &SymTensor, p: f64, x0: &[f64]) -> Vec<f64> {
    let r = t.r as f64;
    let f0 = t.eval(x0);
    let sign = if f0 < 0.0 { -1.0 } else { 1.0 };
    let alpha = r * f0.abs();
    let mut x = x0.to_vec();
    let mut f = sign * f0;
    for _ in 0..POLISH_ITERS {
        let g = t.contract_all_but_one(&x);
        let mut y: Vec<f64> = g
            .iter()
            .zip(&x)
            .map(|(gi, xi)| {
                let u = sign * r * gi + alpha * xi.signum() * xi.abs().powf(p - 1.0);
                u.signum() * u.abs().powf(1.0 / (p - 1.0))
            })
            .collect();
        to_sphere(&mut y, p);
        let fy = sign * t.eval(&y);
        if !(fy >= f - POLISH_SLACK * f.abs()) {
            break;
        }
        let step = x.iter().zip(&y).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        x = y;
        f = fy;
        if step <= 4.0 * f64::EPSILON {
            break;
        }
    }
    if f >= (1.0 - POLISH_SLACK) * sign * f0 {
        x
    } else {
        x0.to_vec()
    }
}

pub fn injective_norm_with(t: &SymTensor, p: f64, opts: AscentOptions, seed: u64) -> Result<NormEstimate> {
    if !(p >= 2.0) || !p.is_finite() {
        return Err(Error::invalid(format!("p = {p} must be a finite value >= 2")));
    }
    if opts.restarts == 0 {
        return Err(Error::invalid("at least one restart required"));
    }
    let mut best = (f64::NEG_INFINITY, vec![]);
    for k in 0..opts.restarts {
        let mut rng = rng_from_seed(derive_indexed(seed, "ascent", &[k as u64]));
        let mut x0: Vec<f64> = (0..t.d).map(|_| rng.sample(StandardNormal)).collect();
        to_sphere(&mut x0, p);
        for sign in [1.0, -1.0] {
            let (_, x) = ascend(t, p, sign, x0.clone(), opts.iters);
            let v = t.eval(&x).abs();
            // Later restarts must win clearly, so rounding cannot pick
            // between two copies of the same maximum.
            if v > best.0 + POLISH_SLACK * best.0.abs() || best.1.is_empty() {
                best = (v, x);
            }
        }
    }
    let mut witness = polish(t, p, &best.1);
    // |f(-x)| = |f(x)|; report the sign with a positive largest entry.
    let lead = witness.iter().fold(0.0f64, |m, v| if v.abs() > m.abs() { *v } else { m });
    if lead < 0.0 {
        witness.iter_mut().for_each(|v| *v = -*v);
    }
    Ok(NormEstimate { value: t.eval(&witness).abs(), witness, restarts_used: opts.restarts })
}

/// Best local maximum of `|<T, x^{⊗r}>|` over `‖x‖_p = 1` from `restarts`
/// random starts, each ascended for both signs.
pub fn injective_norm(t: &SymTensor, p: f64, restarts: usize, seed: u64) -> Result<NormEstimate> {
    injective_norm_with(t, p, AscentOptions { restarts, iters: DEFAULT_ASCENT_ITERS }, seed)
}

#[derive(Clone, Debug)]
pub struct TensorSeries {
    terms: Vec<SymTensor>,
    p: f64,
}

impl TensorSeries {
    pub fn new(terms: Vec<SymTensor>, p: f64) -> Result<Self> {
        let first = terms.first().ok_or_else(|| Error::invalid("series needs at least one term"))?;
        if terms.iter().any(|t| t.d != first.d || t.r != first.r) {
            return Err(Error::invalid("series terms have different shapes"));
        }
        if !(p >= 2.0) || !p.is_finite() {
            return Err(Error::invalid("p must be a finite value >= 2"));
        }
        Ok(TensorSeries { terms, p })
    }

    pub fn terms(&self) -> &[SymTensor] {
        &self.terms
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn d(&self) -> usize {
        self.terms[0].d
    }

    pub fn negated(&self) -> TensorSeries {
        TensorSeries { terms: self.terms.iter().map(|t| t.scaled(-1.0)).collect(), p: self.p }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeriesEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: Vec<f64>,
}

pub fn gaussian_series(series: &TensorSeries, trials: usize, restarts: usize, seed: u64) -> Result<SeriesEstimate> {
    if trials < 10 {
        return Err(Error::invalid("at least 10 trials required"));
    }
    let samples: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = rng_from_seed(derive_indexed(seed, "series", &[k as u64]));
            let mut sum = SymTensor::zeros(series.d(), series.terms[0].r)?;
            for t in &series.terms {
                sum.axpy(rng.sample(StandardNormal), t);
            }
            Ok(injective_norm(&sum, series.p, restarts, derive_indexed(seed, "series-norm", &[k as u64]))?.value)
        })
        .collect::<Result<Vec<_>>>()?;
    let (mean, stderr) = mean_stderr(&samples);
    Ok(SeriesEstimate { mean, stderr, samples })
}

pub(crate) fn mean_stderr(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Injective norms of the individual terms, with the same estimator settings
/// as the series.
pub fn term_norms(series: &TensorSeries, restarts: usize, seed: u64) -> Result<Vec<f64>> {
    series
        .terms
        .iter()
        .enumerate()
        .map(|(i, t)| Ok(injective_norm(t, series.p, restarts, derive_indexed(seed, "term", &[i as u64]))?.value))
        .collect()
}

/// `d^{1/2 - 1/p} sqrt(Σ ‖T_i‖²_{I_p})`, using estimated term norms.
pub fn nck_rhs(series: &TensorSeries, restarts: usize, seed: u64) -> Result<f64> {
    let norms = term_norms(series, restarts, seed)?;
    Ok(nck_from_norms(series.d(), series.p, &norms))
}

fn nck_from_norms(d: usize, p: f64, norms: &[f64]) -> f64 {
    (d as f64).powf(0.5 - 1.0 / p) * norms.iter().map(|v| v * v).sum::<f64>().sqrt()
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TraceSandwich {
    /// `Tr(M^{2k})^{1/2k}`.
    pub value: f64,
    pub norm: f64,
    /// `d^{1/2k} ‖M‖`.
    pub upper: f64,
    pub holds: bool,
}

/// `‖M‖ <= Tr(M^{2k})^{1/2k} <= d^{1/2k} ‖M‖` for a symmetric matrix. The
/// trace is computed as `‖M^k‖_F²` by repeated multiplication of the matrix
/// scaled to unit max entry, and the norm by a dense eigendecomposition.
pub fn trace_moment_sandwich(m: &SymTensor, k: u32) -> Result<TraceSandwich> {
    if m.r != 2 {
        return Err(Error::invalid("trace moments need an order-2 tensor"));
    }
    if m.d > 500 {
        return Err(Error::CapExceeded { what: "trace moment dimension", value: m.d, cap: 500 });
    }
    if k == 0 {
        return Err(Error::invalid("k must be positive"));
    }
    let a = m.as_matrix()?;
    let scale = a.amax();
    let norm = crate::linalg::sym_spectral_norm(&a);
    if scale == 0.0 {
        return Ok(TraceSandwich { value: 0.0, norm: 0.0, upper: 0.0, holds: true });
    }
    let b = &a / scale;
    let mut pw = b.clone();
    for _ in 1..k {
        pw = &pw * &b;
    }
    let tr = pw.norm_squared();
    let value = scale * tr.powf(1.0 / (2.0 * k as f64));
    let upper = (m.d as f64).powf(1.0 / (2.0 * k as f64)) * norm;
    let slack = 1e-9 * norm.max(1.0);
    Ok(TraceSandwich { value, norm, upper, holds: norm <= value + slack && value <= upper + slack })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TensorFamily {
    /// `T_i = v_i^{⊗r}` with `v_i` uniform on the unit sphere.
    RandomRankOne,
    /// `T_i = e_i^{⊗r}`.
    Coordinate,
    /// Independent standard Gaussian multiset coefficients.
    RandomSymmetric,
}

impl std::str::FromStr for TensorFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random-rank-one" => Ok(TensorFamily::RandomRankOne),
            "coordinate" => Ok(TensorFamily::Coordinate),
            "random-symmetric" => Ok(TensorFamily::RandomSymmetric),
            _ => Err(Error::invalid(format!("unknown tensor family {s:?}"))),
        }
    }
}

/// `n` terms of the family in dimension `d`.
pub fn family_terms(family: TensorFamily, d: usize, r: usize, n: usize, seed: u64) -> Result<Vec<SymTensor>> {
    let mut rng = rng_from_seed(seed);
    (0..n)
        .map(|i| match family {
            TensorFamily::Coordinate => SymTensor::coordinate(d, r, i % d),
            TensorFamily::RandomRankOne => {
                let mut v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
                to_sphere(&mut v, 2.0);
                SymTensor::rank_one(&v, r)
            }
            TensorFamily::RandomSymmetric => {
                let mut entries = Vec::new();
                for_each_multiset(d, r, |idx| entries.push(TensorEntry { idx: idx.to_vec(), val: 0.0 }));
                for e in &mut entries {
                    e.val = rng.sample(StandardNormal);
                }
                SymTensor::from_entries(d, r, &entries)
            }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RatioSweep {
    pub family: TensorFamily,
    pub r: usize,
    pub p: f64,
    pub d: Vec<usize>,
    /// Number of terms per dimension (equal to `d`).
    pub n: Vec<usize>,
    pub lhs_mean: Vec<f64>,
    pub lhs_stderr: Vec<f64>,
    pub nck_rhs: Vec<f64>,
    pub ratio: Vec<f64>,
    /// `sqrt(log(d+1)) sqrt(Σ ‖M_i‖²)`, only for `r = p = 2`.
    pub aw_rhs: Option<Vec<f64>>,
    pub aw_ratio: Option<Vec<f64>>,
    /// Per-trial injective norms of the series, per dimension.
    pub samples: Vec<Vec<f64>>,
    pub trials: usize,
    pub restarts: usize,
    pub seed: u64,
}

/// For each `d`, draws `n = d` terms of the family and compares the Monte
/// Carlo series norm with `nck_rhs` (and, for `r = p = 2`, with the matrix
/// bound `sqrt(log(d+1)) sqrt(Σ ‖M_i‖²)`).
#[allow(clippy::too_many_arguments)]
pub fn conjecture_ratio_sweep(
    family: TensorFamily,
    r: usize,
    d_list: &[usize],
    p: f64,
    trials: usize,
    restarts: usize,
    seed: u64,
) -> Result<RatioSweep> {
    if d_list.is_empty() {
        return Err(Error::invalid("d_list must not be empty"));
    }
    if !(r == 2 || r == 3) {
        return Err(Error::invalid(format!("order {r} not in {{2, 3}}")));
    }
    if p != 2.0 && p != 4.0 {
        return Err(Error::invalid(format!("p = {p} not in {{2, 4}}")));
    }
    let mut out = RatioSweep {
        family,
        r,
        p,
        d: d_list.to_vec(),
        n: d_list.to_vec(),
        lhs_mean: vec![],
        lhs_stderr: vec![],
        nck_rhs: vec![],
        ratio: vec![],
        aw_rhs: None,
        aw_ratio: None,
        samples: vec![],
        trials,
        restarts,
        seed,
    };
    let aw = r == 2 && p == 2.0;
    let (mut aw_rhs, mut aw_ratio) = (vec![], vec![]);
    for &d in d_list {
        if d == 0 {
            return Err(Error::invalid("dimension must be positive"));
        }
        let terms = family_terms(family, d, r, d, derive_indexed(seed, "family", &[d as u64]))?;
        let series = TensorSeries::new(terms, p)?;
        let lhs = gaussian_series(&series, trials, restarts, derive_indexed(seed, "lhs", &[d as u64]))?;
        let norms = term_norms(&series, restarts, derive_indexed(seed, "rhs", &[d as u64]))?;
        let rhs = nck_from_norms(d, p, &norms);
        out.lhs_mean.push(lhs.mean);
        out.lhs_stderr.push(lhs.stderr);
        out.nck_rhs.push(rhs);
        out.ratio.push(lhs.mean / rhs);
        if aw {
            let b = ((d + 1) as f64).ln().sqrt() * norms.iter().map(|v| v * v).sum::<f64>().sqrt();
            aw_rhs.push(b);
            aw_ratio.push(lhs.mean / b);
        }
        out.samples.push(lhs.samples);
    }
    if aw {
        out.aw_rhs = Some(aw_rhs);
        out.aw_ratio = Some(aw_ratio);
    }
    Ok(out)
}
