//! Real phase retrieval: the stability constant `ω(A)` and the complement
//! property.
//!
//! For `A ∈ R^{N×M}`,
//! `ω(A) = min { σ_M(A_S) : S ⊆ [N], rank(A_{S^c}) < M }`, where `A_S` keeps
//! the rows in `S` and `σ_M` is the `M`-th singular value (zero when `A_S`
//! has fewer than `M` rows or is rank deficient). `x ↦ |Ax|` is injective up
//! to sign iff `ω(A) > 0`, iff every bipartition of the rows leaves one side
//! spanning `R^M`.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{rank, singular_values};
use crate::rng::{derive_indexed, rng_from_seed};

/// Row cap for the exhaustive subset enumeration.
pub const EXHAUSTIVE_CAP: usize = 24;
/// Row cap for the generic fast path.
pub const GENERIC_CAP: usize = 2000;
/// Above this many `M`-row subsets the genericity check samples instead of
/// enumerating.
const GENERICITY_ENUM_BUDGET: u64 = 2_000_000;
const GENERICITY_SAMPLES: usize = 20_000;
/// Cap on the number of size `M - 1` complements the generic path screens.
pub const GENERIC_ENUM_CAP: u64 = 5_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementMatrix {
    a: DMatrix<f64>,
}

impl MeasurementMatrix {
    pub fn new(a: DMatrix<f64>) -> Result<Self> {
        if a.nrows() == 0 || a.ncols() == 0 {
            return Err(Error::invalid("measurement matrix needs N >= 1 and M >= 1"));
        }
        if a.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("measurement matrix has non-finite entries"));
        }
        Ok(MeasurementMatrix { a })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::invalid("ragged measurement rows"));
        }
        MeasurementMatrix::new(DMatrix::from_fn(rows.len(), m, |i, j| rows[i][j]))
    }

    /// `N x M` matrix with iid standard Gaussian entries.
    pub fn gaussian(n: usize, m: usize, seed: u64) -> Result<Self> {
        let mut rng = rng_from_seed(seed);
        MeasurementMatrix::new(DMatrix::from_fn(n, m, |_, _| rng.sample::<f64, _>(StandardNormal)))
    }

    pub fn rows(&self) -> usize {
        self.a.nrows()
    }

    pub fn cols(&self) -> usize {
        self.a.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn scaled(&self, c: f64) -> Self {
        MeasurementMatrix { a: &self.a * c }
    }

    pub fn max_row_norm(&self) -> f64 {
        self.a.row_iter().map(|r| r.norm()).fold(0.0, f64::max)
    }

    fn select(&self, rows: &[usize]) -> DMatrix<f64> {
        DMatrix::from_fn(rows.len(), self.cols(), |i, j| self.a[(rows[i], j)])
    }

    fn rank_of(&self, rows: &[usize]) -> usize {
        if rows.is_empty() {
            0
        } else {
            rank(&self.select(rows))
        }
    }

    /// `σ_M(A_S)`, zero when `A_S` does not have full column rank.
    pub fn sigma_m(&self, rows: &[usize]) -> f64 {
        let m = self.cols();
        if rows.len() < m {
            return 0.0;
        }
        let sub = self.select(rows);
        if rank(&sub) < m {
            return 0.0;
        }
        singular_values(&sub)[m - 1]
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OmegaResult {
    pub value: f64,
    /// Row set `S` attaining the minimum, ascending.
    pub argmin_subset: Vec<usize>,
    /// Rank of `A` restricted to the complement of `argmin_subset`; always
    /// below `M`.
    pub complement_rank: usize,
    pub rank_deficient_complement: bool,
}

fn check_exhaustive(a: &MeasurementMatrix) -> Result<()> {
    if a.rows() > EXHAUSTIVE_CAP {
        return Err(Error::CapExceeded { what: "exhaustive measurement rows", value: a.rows(), cap: EXHAUSTIVE_CAP });
    }
    Ok(())
}

fn split(mask: u32, n: usize) -> (Vec<usize>, Vec<usize>) {
    (0..n).partition(|&i| mask >> i & 1 == 1)
}

/// Exact `ω(A)` by enumerating every row subset.
pub fn omega(a: &MeasurementMatrix) -> Result<OmegaResult> {
    check_exhaustive(a)?;
    let (n, m) = (a.rows(), a.cols());
    let mut best: Option<OmegaResult> = None;
    for mask in 0u32..(1u32 << n) {
        let (s, sc) = split(mask, n);
        let rc = a.rank_of(&sc);
        if rc >= m {
            continue;
        }
        let v = a.sigma_m(&s);
        if best.as_ref().is_none_or(|b| v < b.value) {
            best = Some(OmegaResult {
                value: v,
                argmin_subset: s,
                complement_rank: rc,
                rank_deficient_complement: true,
            });
        }
    }
    // S = [N] always qualifies (empty complement), so a minimum exists.
    best.ok_or_else(|| Error::Internal("no admissible subset".into()))
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order; stops
/// early if `f` returns false.
pub(crate) fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !f(&idx) {
            return;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        if idx[i] == i + n - k {
            return;
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u64 = 1;
    for i in 0..k {
        r = r.saturating_mul((n - i) as u64) / (i as u64 + 1);
    }
    r
}

/// How the genericity of a matrix was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Genericity {
    /// Every `M`-row subset was checked to span.
    Enumerated,
    /// A random sample of `M`-row subsets spans.
    Sampled,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GenericOmega {
    pub result: OmegaResult,
    pub certificate: Genericity,
    /// Smallest `σ_M` seen over the `M`-row subsets that were checked.
    pub min_square_sigma: f64,
}

/// Fast path for matrices whose every `M` rows span `R^M`. Then the
/// rank-deficient complements are exactly the sets of at most `M - 1` rows,
/// and since `σ_M(A_S)` can only drop when rows leave `S`, the minimum is
/// attained with `|S^c| = M - 1`. Returns `None` when the genericity check
/// fails.
pub fn omega_generic(a: &MeasurementMatrix, seed: u64) -> Result<Option<GenericOmega>> {
    let (n, m) = (a.rows(), a.cols());
    if n > GENERIC_CAP {
        return Err(Error::CapExceeded { what: "generic-path measurement rows", value: n, cap: GENERIC_CAP });
    }
    if n < m {
        return Ok(None);
    }
    let combos = binomial(n, m - 1);
    if combos > GENERIC_ENUM_CAP {
        return Err(Error::CapExceeded {
            what: "generic-path row subsets",
            value: combos.min(usize::MAX as u64) as usize,
            cap: GENERIC_ENUM_CAP as usize,
        });
    }
    let margin = 1e-10 * a.max_row_norm().max(f64::MIN_POSITIVE);
    let square = n == 2 * m - 1;

    // Screen every complement T with the Gram downdate A^T A - A_T^T A_T,
    // whose smallest eigenvalue is σ_M(A_S)² up to rounding bounded by
    // `err`, then recompute the near-minimal candidates with a full SVD.
    let mat = a.matrix();
    let gram = mat.tr_mul(mat);
    let err = 64.0 * (m as f64) * f64::EPSILON * gram.trace();
    let mut approx: Vec<(f64, Vec<usize>)> = Vec::new();
    let mut floor = f64::INFINITY;
    for_each_combination(n, m - 1, |t| {
        let mut g = gram.clone();
        for &i in t {
            let row = mat.row(i);
            g.ger(-1.0, &row.transpose(), &row.transpose(), 1.0);
        }
        if floor.is_finite() {
            // A successful Cholesky factorization of G - cI proves λ_min > c.
            let mut shifted = g.clone();
            for k in 0..m {
                shifted[(k, k)] -= floor + 2.0 * err;
            }
            if shifted.cholesky().is_some() {
                return true;
            }
        }
        let lam = crate::linalg::lambda_min(&g);
        if lam <= floor + 2.0 * err {
            floor = floor.min(lam);
            approx.push((lam, t.to_vec()));
        }
        true
    });
    let mut best: Option<OmegaResult> = None;
    let mut in_s = vec![true; n];
    for (lam, t) in &approx {
        if *lam > floor + 2.0 * err {
            continue;
        }
        in_s.iter_mut().for_each(|b| *b = true);
        for &i in t {
            in_s[i] = false;
        }
        let s: Vec<usize> = (0..n).filter(|&i| in_s[i]).collect();
        let v = a.sigma_m(&s);
        if best.as_ref().is_none_or(|b| v < b.value) {
            best = Some(OmegaResult {
                value: v,
                argmin_subset: s,
                complement_rank: m - 1,
                rank_deficient_complement: true,
            });
        }
    }
    let mut min_square = f64::INFINITY;
    let best = best.ok_or_else(|| Error::Internal("no complement of size M-1".into()))?;

    let certificate = if square {
        // Each S above has exactly M rows, so the screen covered every M-row
        // subset and the exact minimum is among the recomputed candidates.
        min_square = best.value;
        Genericity::Enumerated
    } else if binomial(n, m) <= GENERICITY_ENUM_BUDGET {
        for_each_combination(n, m, |rows| {
            min_square = min_square.min(a.sigma_m(rows));
            min_square > margin
        });
        Genericity::Enumerated
    } else {
        let mut rng = rng_from_seed(seed);
        for _ in 0..GENERICITY_SAMPLES {
            let mut rows = rand::seq::index::sample(&mut rng, n, m).into_vec();
            rows.sort_unstable();
            min_square = min_square.min(a.sigma_m(&rows));
        }
        Genericity::Sampled
    };
    if !(min_square > margin) {
        return Ok(None);
    }
    Ok(Some(GenericOmega { result: best, certificate, min_square_sigma: min_square }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplementProperty {
    pub holds: bool,
    /// A bipartition with neither side spanning, when the property fails.
    pub witness: Option<(Vec<usize>, Vec<usize>)>,
}

pub fn complement_property(a: &MeasurementMatrix) -> Result<ComplementProperty> {
    check_exhaustive(a)?;
    let (n, m) = (a.rows(), a.cols());
    // Masks with the top row fixed on the first side cover every unordered
    // bipartition once.
    let half = 1u32 << (n - 1);
    for mask in 0..half {
        let full_mask = mask | half;
        let (s, sc) = split(full_mask, n);
        if a.rank_of(&s) < m && a.rank_of(&sc) < m {
            let (mut p, mut q) = (s, sc);
            if p.first() > q.first() || p.is_empty() {
                std::mem::swap(&mut p, &mut q);
            }
            if q.is_empty() {
                std::mem::swap(&mut p, &mut q);
            }
            return Ok(ComplementProperty { holds: false, witness: Some((p, q)) });
        }
    }
    Ok(ComplementProperty { holds: true, witness: None })
}

/// Injectivity of `x mod ±1 ↦ |Ax|` over the reals. The complement property
/// answer is cross-checked against `ω(A) > 1e-12`.
pub fn injective_real(a: &MeasurementMatrix) -> Result<bool> {
    let cp = complement_property(a)?;
    let om = omega(a)?;
    if cp.holds != (om.value > 1e-12) {
        return Err(Error::Internal(format!(
            "complement property ({}) disagrees with omega ({})",
            cp.holds, om.value
        )));
    }
    Ok(cp.holds)
}

/// For a non-injective `A`, two vectors `x ≠ ±y` with `|Ax| = |Ay|`, built
/// from kernel vectors of both sides of a violating bipartition.
pub fn collision_pair(a: &MeasurementMatrix) -> Result<Option<(Vec<f64>, Vec<f64>)>> {
    let cp = complement_property(a)?;
    let Some((s, sc)) = cp.witness else { return Ok(None) };
    let kernel = |rows: &[usize]| -> Vec<f64> {
        let m = a.cols();
        if rows.is_empty() {
            let mut e = vec![0.0; m];
            e[0] = 1.0;
            return e;
        }
        // Right singular vector of the smallest singular value.
        let sub = a.select(rows);
        let padded = if sub.nrows() < m { sub.clone().resize_vertically(m, 0.0) } else { sub };
        let svd = padded.svd(false, true);
        let vt = svd.v_t.expect("requested V^T");
        let k = (0..m).min_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j])).unwrap();
        vt.row(k).iter().copied().collect()
    };
    let u = kernel(&s);
    let v = kernel(&sc);
    let x = v.iter().zip(&u).map(|(a, b)| a + b).collect();
    let y = v.iter().zip(&u).map(|(a, b)| a - b).collect();
    Ok(Some((x, y)))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepFit {
    pub beta_hat: f64,
    pub intercept: f64,
    pub fit_residual: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct SweepResult {
    pub M: Vec<usize>,
    pub mean_omega: Vec<f64>,
    pub median_omega: Vec<f64>,
    /// Mean of `ln ω` per `M`.
    pub log_mean: Vec<f64>,
    pub beta_hat: f64,
    pub fit_residual: f64,
    pub fit: SweepFit,
    /// Same fit after dividing each `ω(A)` by `max_k ||A_k||`.
    pub normalized_mean_omega: Vec<f64>,
    pub normalized_fit: SweepFit,
    pub trials: usize,
    pub seed: u64,
    /// `samples[i][t]` is `ω` for `M[i]`, trial `t`.
    pub samples: Vec<Vec<f64>>,
    pub resampled: usize,
}

/// Ordinary least squares of `ys` on `xs`; returns (slope, intercept, rms
/// residual).
pub fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = (xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum::<f64>() / n).sqrt();
    (slope, intercept, rms)
}

pub(crate) fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let k = s.len();
    if k == 0 {
        f64::NAN
    } else if k % 2 == 1 {
        s[k / 2]
    } else {
        0.5 * (s[k / 2 - 1] + s[k / 2])
    }
}

fn fit_beta(ms: &[usize], means: &[f64]) -> SweepFit {
    let xs: Vec<f64> = ms.iter().map(|&m| m as f64).collect();
    let ys: Vec<f64> = means.iter().map(|v| v.ln()).collect();
    let (slope, intercept, rms) = least_squares(&xs, &ys);
    SweepFit { beta_hat: slope.exp(), intercept, fit_residual: rms }
}

/// One trial of the Gaussian sweep: `(ω, max row norm, resamples needed)`.
pub fn gaussian_trial(m: usize, trial: usize, seed: u64) -> Result<(f64, f64, usize)> {
    for attempt in 0..16u64 {
        let s = derive_indexed(seed, "phase-omega", &[m as u64, trial as u64, attempt]);
        let a = MeasurementMatrix::gaussian(2 * m - 1, m, s)?;
        if let Some(g) = omega_generic(&a, s)? {
            return Ok((g.result.value, a.max_row_norm(), attempt as usize));
        }
    }
    Err(Error::Internal(format!("no generic Gaussian sample for M={m}, trial {trial}")))
}

/// `ω(A)` for `A ∈ R^{(2M-1)×M}` with iid standard Gaussian entries, for each
/// `M` in `lo..=hi`, and the least-squares fit `ln mean ω ≈ a + M ln β`.
pub fn omega_gaussian_sweep(lo: usize, hi: usize, trials: usize, seed: u64) -> Result<SweepResult> {
    if lo < 2 || hi > 12 || lo > hi {
        return Err(Error::invalid(format!("M range {lo}..={hi} must lie within [2, 12]")));
    }
    if trials < 50 {
        return Err(Error::invalid("at least 50 trials per M"));
    }
    use rayon::prelude::*;
    let ms: Vec<usize> = (lo..=hi).collect();
    let jobs: Vec<(usize, usize)> = ms.iter().flat_map(|&m| (0..trials).map(move |t| (m, t))).collect();
    let out: Vec<(f64, f64, usize)> =
        jobs.par_iter().map(|&(m, t)| gaussian_trial(m, t, seed)).collect::<Result<Vec<_>>>()?;

    let mut samples = Vec::new();
    let mut norm_samples = Vec::new();
    let mut resampled = 0;
    for (i, _) in ms.iter().enumerate() {
        let chunk = &out[i * trials..(i + 1) * trials];
        samples.push(chunk.iter().map(|c| c.0).collect::<Vec<_>>());
        norm_samples.push(chunk.iter().map(|c| c.0 / c.1).collect::<Vec<_>>());
        resampled += chunk.iter().map(|c| c.2).sum::<usize>();
    }
    let mean = |v: &Vec<f64>| v.iter().sum::<f64>() / v.len() as f64;
    let mean_omega: Vec<f64> = samples.iter().map(mean).collect();
    let normalized_mean_omega: Vec<f64> = norm_samples.iter().map(mean).collect();
    let fit = fit_beta(&ms, &mean_omega);
    let normalized_fit = fit_beta(&ms, &normalized_mean_omega);
    Ok(SweepResult {
        median_omega: samples.iter().map(|v| median(v)).collect(),
        log_mean: samples.iter().map(|v| v.iter().map(|x| x.ln()).sum::<f64>() / v.len() as f64).collect(),
        M: ms,
        mean_omega,
        beta_hat: fit.beta_hat,
        fit_residual: fit.fit_residual,
        fit,
        normalized_mean_omega,
        normalized_fit,
        trials,
        seed,
        samples,
        resampled,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    fn mat(rows: &[&[f64]]) -> MeasurementMatrix {
        MeasurementMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn one_by_one() {
        let r = omega(&mat(&[&[-3.5]])).unwrap();
        assert_eq!(r.value, 3.5);
        assert_eq!(r.argmin_subset, vec![0]);
    }

    #[test]
    fn two_dimensional_frame() {
        // Oracle: S = {e1, (e1+e2)/√2} has Gram [[1.5, 0.5], [0.5, 0.5]],
        // smallest eigenvalue 1 - √2/2, so σ_2 = sqrt(1 - √2/2) ≈ 0.5412.
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let a = mat(&[&[1.0, 0.0], &[0.0, 1.0], &[h, h]]);
        let r = omega(&a).unwrap();
        let expected = (1.0 - h).sqrt();
        assert!((r.value - expected).abs() < 1e-12, "{}", r.value);
        assert!((r.value - 0.5412).abs() < 1e-4);
        assert_eq!(r.argmin_subset.len(), 2);
        assert!(r.argmin_subset == vec![0, 2] || r.argmin_subset == vec![1, 2]);
        let g = omega_generic(&a, 0).unwrap().unwrap();
        assert!((g.result.value - r.value).abs() < 1e-12);
    }

    #[test]
    fn repeated_row_is_not_injective() {
        let a = mat(&[&[1.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]);
        assert_eq!(omega(&a).unwrap().value, 0.0);
        let cp = complement_property(&a).unwrap();
        assert!(!cp.holds);
        assert_eq!(cp.witness, Some((vec![0, 1], vec![2])));
        assert!(!injective_real(&a).unwrap());
        let (x, y) = collision_pair(&a).unwrap().unwrap();
        let ax = a.matrix() * nalgebra::DVector::from_vec(x.clone());
        let ay = a.matrix() * nalgebra::DVector::from_vec(y.clone());
        for i in 0..3 {
            assert!((ax[i].abs() - ay[i].abs()).abs() < 1e-12);
        }
        let differ = x.iter().zip(&y).any(|(p, q)| (p - q).abs() > 1e-6);
        let differ_neg = x.iter().zip(&y).any(|(p, q)| (p + q).abs() > 1e-6);
        assert!(differ && differ_neg);
        assert!(omega_generic(&a, 0).unwrap().is_none());
    }

    #[test]
    fn three_generic_vectors_are_injective() {
        let a = mat(&[&[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]]);
        assert!(complement_property(&a).unwrap().holds);
        assert!(injective_real(&a).unwrap());
        assert!(collision_pair(&a).unwrap().is_none());
    }

    #[test]
    fn zero_column_is_not_injective() {
        let a = mat(&[&[1.0, 0.0], &[2.0, 0.0], &[3.0, 0.0], &[4.0, 0.0]]);
        assert!(!injective_real(&a).unwrap());
    }

    #[test]
    fn too_few_rows_fail() {
        let mut rng = rng_from_seed(1);
        for _ in 0..40 {
            let m = rng.random_range(2..=4);
            let n = rng.random_range(1..(2 * m - 1));
            let a = MeasurementMatrix::gaussian(n, m, rng.random()).unwrap();
            assert!(!complement_property(&a).unwrap().holds);
        }
    }

    #[test]
    fn combinations_enumerate_binomially() {
        for n in 0..8 {
            for k in 0..=n {
                let mut count = 0;
                let mut last: Option<Vec<usize>> = None;
                for_each_combination(n, k, |c| {
                    assert!(c.windows(2).all(|w| w[0] < w[1]));
                    if let Some(l) = &last {
                        assert!(l.as_slice() < c);
                    }
                    last = Some(c.to_vec());
                    count += 1;
                    true
                });
                assert_eq!(count as u64, binomial(n, k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn caps() {
        let a = MeasurementMatrix::new(DMatrix::from_element(25, 2, 1.0)).unwrap();
        assert!(omega(&a).is_err());
        assert!(complement_property(&a).is_err());
        assert!(MeasurementMatrix::new(DMatrix::from_element(0, 2, 1.0)).is_err());
        assert!(MeasurementMatrix::new(DMatrix::from_element(2, 2, f64::NAN)).is_err());
    }

    #[test]
    fn least_squares_recovers_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 0.5 - 0.25 * x).collect();
        let (s, i, r) = least_squares(&xs, &ys);
        assert!((s + 0.25).abs() < 1e-12 && (i - 0.5).abs() < 1e-12 && r < 1e-12);
    }

    #[test]
    fn sweep_validation() {
        assert!(omega_gaussian_sweep(1, 3, 50, 0).is_err());
        assert!(omega_gaussian_sweep(2, 13, 50, 0).is_err());
        assert!(omega_gaussian_sweep(2, 3, 10, 0).is_err());
    }
}
