//! Graph matrices in the restricted setting where the left and right sides
//! of the shape partition its vertices.
//!
//! For a shape `α` with sides `U`, `V` and edges `E`, and iid signs
//! `ε_{ij}` on pairs of `[n]`, `M_α` is the `n^{|U|} x n^{|V|}` matrix
//! `Σ_φ (Π_{(x,y)∈E} ε_{φ(x)φ(y)}) e_{φ(U)} e_{φ(V)}^T` over injective
//! `φ: U ∪ V → [n]`. Rows and columns are indexed by tuples in mixed radix
//! (first coordinate most significant); tuples with a repeated index are
//! identically zero.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::least_squares;
use crate::rng::{derive_indexed, rng_from_seed};

pub const REALIZE_ENTRY_CAP: u64 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shape {
    labels: Vec<String>,
    left: Vec<usize>,
    right: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

impl Shape {
    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    /// Same shape with the two sides exchanged.
    pub fn transposed(&self) -> Shape {
        validate_shape(
            &self.labels.iter().map(String::as_str).collect::<Vec<_>>(),
            &self.right.iter().map(|&i| self.labels[i].as_str()).collect::<Vec<_>>(),
            &self.left.iter().map(|&i| self.labels[i].as_str()).collect::<Vec<_>>(),
            &self.edges.iter().map(|&(a, b)| (self.labels[a].as_str(), self.labels[b].as_str())).collect::<Vec<_>>(),
        )
        .expect("transposing a valid shape")
    }

    /// FNV-1a of the canonical text form.
    pub fn hash_hex(&self) -> String {
        let mut h: u64 = 0xcbf29ce484222325;
        for b in self.to_string().bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        format!("{h:016x}")
    }

    /// Single edge between one left and one right vertex.
    pub fn edge() -> Shape {
        "shape U: u | V: v | E: (u,v)".parse().expect("edge shape")
    }
}

/// Checks the shape invariants: `vertices` is exactly the disjoint union of
/// `left` and `right`, every edge joins two distinct listed vertices, and no
/// edge repeats. Vertices are renumbered left side first, then right side.
pub fn validate_shape(vertices: &[&str], left: &[&str], right: &[&str], edges: &[(&str, &str)]) -> Result<Shape> {
    let mut labels: Vec<String> = Vec::new();
    for v in left.iter().chain(right) {
        if labels.iter().any(|l| l == v) {
            return Err(Error::invalid(format!("vertex {v:?} appears twice among the sides")));
        }
        if v.is_empty() {
            return Err(Error::invalid("empty vertex label"));
        }
        labels.push(v.to_string());
    }
    for v in vertices {
        if !labels.iter().any(|l| l == v) {
            return Err(Error::invalid(format!("vertex {v:?} is on neither side")));
        }
    }
    let index = |v: &str| -> Result<usize> {
        labels
            .iter()
            .position(|l| l == v)
            .ok_or_else(|| Error::invalid(format!("edge endpoint {v:?} is not a shape vertex")))
    };
    let mut es = Vec::new();
    for &(a, b) in edges {
        let (i, j) = (index(a)?, index(b)?);
        if i == j {
            return Err(Error::invalid(format!("loop at {a:?}")));
        }
        let e = (i.min(j), i.max(j));
        if es.contains(&e) {
            return Err(Error::invalid(format!("repeated edge ({a},{b})")));
        }
        es.push(e);
    }
    es.sort_unstable();
    let nl = left.len();
    Ok(Shape { left: (0..nl).collect(), right: (nl..labels.len()).collect(), labels, edges: es })
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |ix: &[usize]| ix.iter().map(|&i| self.labels[i].as_str()).collect::<Vec<_>>().join(",");
        let edges = self
            .edges
            .iter()
            .map(|&(a, b)| format!("({},{})", self.labels[a], self.labels[b]))
            .collect::<Vec<_>>()
            .join(",");
        write!(f, "shape U: {} | V: {} | E: {}", side(&self.left), side(&self.right), edges)
    }
}

impl FromStr for Shape {
    type Err = Error;

    /// `shape U: u1,u2 | V: v1 | E: (u1,v1),(u2,v1)`.
    fn from_str(s: &str) -> Result<Shape> {
        let bad = |m: &str| Error::invalid(format!("shape text {s:?}: {m}"));
        let body = s.trim().strip_prefix("shape").ok_or_else(|| bad("missing 'shape' prefix"))?;
        let parts: Vec<&str> = body.split('|').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(bad("expected three sections U, V, E"));
        }
        let section = |p: &str, key: &str| -> Result<String> {
            p.strip_prefix(key)
                .map(|r| r.trim().to_string())
                .ok_or_else(|| bad(&format!("expected section {key}")))
        };
        let list = |t: &str| -> Vec<String> {
            t.split(',').map(str::trim).filter(|x| !x.is_empty()).map(String::from).collect()
        };
        let u = list(&section(parts[0], "U:")?);
        let v = list(&section(parts[1], "V:")?);
        let e_txt = section(parts[2], "E:")?;
        let mut edges = Vec::new();
        let mut rest = e_txt.as_str();
        loop {
            rest = rest.trim_start_matches(|c: char| c == ',' || c.is_whitespace());
            if rest.is_empty() {
                break;
            }
            let inner = rest.strip_prefix('(').ok_or_else(|| bad("edge must start with '('"))?;
            let close = inner.find(')').ok_or_else(|| bad("unclosed edge"))?;
            let pair: Vec<&str> = inner[..close].split(',').map(str::trim).collect();
            if pair.len() != 2 {
                return Err(bad("edge must have two endpoints"));
            }
            edges.push((pair[0].to_string(), pair[1].to_string()));
            rest = &inner[close + 1..];
        }
        let us: Vec<&str> = u.iter().map(String::as_str).collect();
        let vs: Vec<&str> = v.iter().map(String::as_str).collect();
        let es: Vec<(&str, &str)> = edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        validate_shape(&[], &us, &vs, &es)
    }
}

/// Symmetric ±1 signs `ε_{ij}`, `i != j`, evaluated on demand from a hash of
/// `(seed, min(i,j), max(i,j))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RademacherField {
    n: usize,
    seed: u64,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

impl RademacherField {
    pub fn new(n: usize, seed: u64) -> Self {
        RademacherField { n, seed }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sign(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i != j && i < self.n && j < self.n);
        let (a, b) = (i.min(j) as u64, i.max(j) as u64);
        let h = splitmix(splitmix(self.seed ^ splitmix(a)) ^ b);
        if h >> 63 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

#[derive(Clone, Debug)]
pub struct GraphMatrix {
    pub shape: Shape,
    pub n: usize,
    pub matrix: DMatrix<f64>,
}

fn decode(mut idx: usize, n: usize, len: usize, out: &mut [usize]) {
    for k in (0..len).rev() {
        out[k] = idx % n;
        idx /= n;
    }
}

fn distinct(t: &[usize]) -> bool {
    t.iter().enumerate().all(|(k, x)| !t[..k].contains(x))
}

pub fn realize(shape: &Shape, n: usize, seed: u64) -> Result<GraphMatrix> {
    let (nu, nv) = (shape.left.len(), shape.right.len());
    if n < shape.vertex_count() {
        return Err(Error::invalid(format!("ground set {n} smaller than the shape's {} vertices", shape.vertex_count())));
    }
    let entries = (n as u64).checked_pow((nu + nv) as u32).unwrap_or(u64::MAX);
    if entries > REALIZE_ENTRY_CAP {
        return Err(Error::CapExceeded {
            what: "graph matrix entries",
            value: entries.min(usize::MAX as u64) as usize,
            cap: REALIZE_ENTRY_CAP as usize,
        });
    }
    let rows = n.pow(nu as u32);
    let cols = n.pow(nv as u32);
    let field = RademacherField::new(n, seed);
    let mut m = DMatrix::<f64>::zeros(rows, cols);
    let mut phi = vec![0usize; nu + nv];
    for r in 0..rows {
        decode(r, n, nu, &mut phi[..nu]);
        if !distinct(&phi[..nu]) {
            continue;
        }
        for c in 0..cols {
            decode(c, n, nv, &mut phi[nu..]);
            // In the restricted setting the realization with φ(U) = row and
            // φ(V) = column is unique when it exists.
            if !distinct(&phi) {
                continue;
            }
            m[(r, c)] = shape.edges.iter().map(|&(a, b)| field.sign(phi[a], phi[b])).product();
        }
    }
    Ok(GraphMatrix { shape: shape.clone(), n, matrix: m })
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SpectralNormEstimate {
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

const KRYLOV_CAP: usize = 400;

/// Largest singular value of `m` by power iteration on the symmetrized
/// block operator, accelerated with a Lanczos recurrence (full
/// reorthogonalization) on the Gram operator of the smaller side. Stops when
/// the Ritz residual bound falls below `tol` relative to the estimate. The
/// estimate is a Ritz value, so it never exceeds the true norm.
pub fn norm_estimate(m: &DMatrix<f64>, tol: f64, seed: u64) -> Result<SpectralNormEstimate> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let tall = m.nrows() >= m.ncols();
    let dim = if tall { m.ncols() } else { m.nrows() };
    if dim == 0 {
        return Ok(SpectralNormEstimate { value: 0.0, iterations: 0, converged: true });
    }
    let apply = |x: &DVector<f64>| -> DVector<f64> {
        if tall {
            m.tr_mul(&(m * x))
        } else {
            m * m.tr_mul(x)
        }
    };
    let mut rng = rng_from_seed(seed);
    let mut q = DVector::from_fn(dim, |_, _| rng.sample::<f64, _>(StandardNormal));
    q /= q.norm();
    let cap = dim.min(KRYLOV_CAP);
    let mut basis: Vec<DVector<f64>> = vec![q];
    let (mut alpha, mut beta): (Vec<f64>, Vec<f64>) = (vec![], vec![]);
    let mut theta = 0.0;
    for k in 0..cap {
        let mut w = apply(&basis[k]);
        alpha.push(basis[k].dot(&w));
        for _ in 0..2 {
            for b in &basis {
                let c = b.dot(&w);
                w.axpy(-c, b, 1.0);
            }
        }
        let bk = w.norm();
        let t = DMatrix::from_fn(k + 1, k + 1, |i, j| {
            if i == j {
                alpha[i]
            } else if i + 1 == j {
                beta[i]
            } else if j + 1 == i {
                beta[j]
            } else {
                0.0
            }
        });
        let eig = t.symmetric_eigen();
        let top = (0..=k).max_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b])).unwrap();
        theta = eig.eigenvalues[top].max(0.0);
        let resid = bk * eig.eigenvectors[(k, top)].abs();
        // Residual on σ² translates to roughly half that on σ.
        let done = resid <= tol * theta || bk <= 1e-14 * theta.max(f64::MIN_POSITIVE) || theta == 0.0;
        if done || k + 1 == cap {
            let exhausted = k + 1 == dim;
            return Ok(SpectralNormEstimate { value: theta.sqrt(), iterations: k + 1, converged: done || exhausted });
        }
        beta.push(bk);
        basis.push(w / bk);
    }
    Ok(SpectralNormEstimate { value: theta.sqrt(), iterations: cap, converged: false })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExponentSweep {
    pub shape: String,
    pub shape_hash: String,
    pub n: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// `norms[i][t]` for size `n[i]`, trial `t`.
    pub norms: Vec<Vec<f64>>,
    pub mean_norm: Vec<f64>,
    pub f_hat: f64,
    pub intercept: f64,
    /// `ln mean - (intercept + f_hat ln n)` per size.
    pub fit_residuals: Vec<f64>,
    /// Slope and correlation of the residuals against `ln ln n`. A polylog
    /// factor shows up as a systematic trend here.
    pub loglog_slope: f64,
    pub loglog_correlation: f64,
    pub all_converged: bool,
}

pub const NORM_TOL: f64 = 1e-6;

pub fn exponent_sweep(shape: &Shape, n_list: &[usize], trials: usize, seed: u64) -> Result<ExponentSweep> {
    if trials == 0 {
        return Err(Error::invalid("trials must be positive"));
    }
    let mut sizes = n_list.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.len() < 4 {
        return Err(Error::invalid("at least 4 distinct sizes required"));
    }
    if sizes.iter().any(|&n| n < 3) {
        return Err(Error::invalid("sizes must be at least 3"));
    }
    let jobs: Vec<(usize, usize)> = n_list.iter().flat_map(|&n| (0..trials).map(move |t| (n, t))).collect();
    let out: Vec<SpectralNormEstimate> = jobs
        .par_iter()
        .map(|&(n, t)| {
            let s = derive_indexed(seed, "gmatrix", &[n as u64, t as u64]);
            let gm = realize(shape, n, s)?;
            norm_estimate(&gm.matrix, NORM_TOL, s ^ 0x5eed)
        })
        .collect::<Result<Vec<_>>>()?;
    let norms: Vec<Vec<f64>> = out.chunks(trials).map(|c| c.iter().map(|e| e.value).collect()).collect();
    let mean_norm: Vec<f64> = norms.iter().map(|v| v.iter().sum::<f64>() / v.len() as f64).collect();
    let xs: Vec<f64> = n_list.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = mean_norm.iter().map(|m| m.ln()).collect();
    let (f_hat, intercept, _) = least_squares(&xs, &ys);
    let fit_residuals: Vec<f64> = xs.iter().zip(&ys).map(|(x, y)| y - intercept - f_hat * x).collect();
    let ll: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let (loglog_slope, _, _) = least_squares(&ll, &fit_residuals);
    Ok(ExponentSweep {
        shape: shape.to_string(),
        shape_hash: shape.hash_hex(),
        n: n_list.to_vec(),
        trials,
        seed,
        norms,
        mean_norm,
        f_hat,
        intercept,
        loglog_correlation: correlation(&ll, &fit_residuals),
        fit_residuals,
        loglog_slope,
        all_converged: out.iter().all(|e| e.converged),
    })
}

fn correlation(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 || syy == 0.0 {
        0.0
    } else {
        sxy / (sxx * syy).sqrt()
    }
}
