//! The experiment catalogue. Each experiment parses its parameters into a
//! typed struct, produces flat samples, and derives its summary from those
//! samples and the parameters alone.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use super::{Check, LabError, LabResult, Params, Sample, Summary};
use crate::frames::{self, mub_prime, paley_etf, sic_search, verify_etf, verify_mub};
use crate::graph::{paley_localization, sample_er, sample_random_circulant};
use crate::graphmatrix::{norm_estimate, realize, Shape, NORM_TOL};
use crate::phase::{gaussian_trial, least_squares};
use crate::rng::{derive_indexed, derive_seed, rng_from_seed};
use crate::tensor::{conjecture_ratio_sweep, TensorFamily};
use crate::theta::{sandwich_report, theta_circulant, theta_sdp, LpFormulation, SANDWICH_TOL};

pub const EXPERIMENTS: &[&str] = &[
    "theta-er-sweep",
    "theta-circulant-sweep",
    "paley-localization",
    "phase-omega-sweep",
    "frames-verify",
    "sic-search",
    "gmatrix-sweep",
    "tensor-ratio-sweep",
    "sandwich-audit",
];

/// CSV column order; every sample of the experiment has exactly these keys.
pub fn columns(experiment: &str) -> &'static [&'static str] {
    match experiment {
        "theta-er-sweep" => &["n", "trial", "theta", "gap", "converged"],
        "theta-circulant-sweep" => &["n", "trial", "connection_size", "theta"],
        "paley-localization" => &["p", "m", "theta", "ratio"],
        "phase-omega-sweep" => &["M", "trial", "omega"],
        "frames-verify" => &[
            "family",
            "param",
            "d",
            "n",
            "max_norm_dev",
            "max_orthogonality_dev",
            "max_unbiasedness_dev",
            "max_equiangularity_dev",
            "tightness_dev",
            "coherence",
            "welch_bound",
        ],
        "sic-search" => &["d", "coherence", "target", "best_restart"],
        "gmatrix-sweep" => &["n", "trial", "norm", "converged"],
        "tensor-ratio-sweep" => &["d", "trial", "lhs", "nck_rhs", "aw_rhs"],
        "sandwich-audit" => &["graph", "n", "edges", "clique", "theta_complement", "chromatic"],
        _ => &[],
    }
}

fn schema(msg: impl Into<String>) -> LabError {
    LabError::Schema(msg.into())
}

fn record(pairs: Vec<(&str, Value)>) -> Sample {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn num(s: &Sample, key: &str) -> LabResult<f64> {
    s.get(key)
        .and_then(Value::as_f64)
        .ok_or_else(|| LabError::Corrupt { path: format!("$.samples[].{key}"), msg: "expected a number".into() })
}

fn opt_num(s: &Sample, key: &str) -> LabResult<Option<f64>> {
    match s.get(key) {
        Some(Value::Null) | None => Ok(None),
        _ => num(s, key).map(Some),
    }
}

fn int(s: &Sample, key: &str) -> LabResult<u64> {
    s.get(key)
        .and_then(Value::as_u64)
        .ok_or_else(|| LabError::Corrupt { path: format!("$.samples[].{key}"), msg: "expected an integer".into() })
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Groups a numeric column by an integer key, in key order.
fn group(samples: &[Sample], key: &str, value: &str) -> LabResult<BTreeMap<u64, Vec<f64>>> {
    let mut g: BTreeMap<u64, Vec<f64>> = BTreeMap::new();
    for s in samples {
        g.entry(int(s, key)?).or_default().push(num(s, value)?);
    }
    Ok(g)
}

fn per_key(g: &BTreeMap<u64, Vec<f64>>, f: impl Fn(u64, &[f64]) -> f64) -> Value {
    Value::Object(g.iter().map(|(k, v)| (k.to_string(), json!(f(*k, v)))).collect())
}

fn require(cond: bool, msg: &str) -> LabResult<()> {
    if cond {
        Ok(())
    } else {
        Err(schema(msg))
    }
}

struct ErSweep {
    n: Vec<usize>,
    trials: usize,
    edge_prob: f64,
    tol: f64,
}

struct CirculantSweep {
    n: Vec<usize>,
    trials: usize,
}

struct Localization {
    p: Vec<usize>,
}

struct OmegaSweep {
    m_min: usize,
    m_max: usize,
    trials: usize,
}

struct FramesVerify {
    mub_d: Vec<usize>,
    etf_p: Vec<usize>,
    mub_tol: f64,
    etf_tol: f64,
}

struct SicSearch {
    d: Vec<usize>,
    restarts: usize,
    iters: usize,
}

struct GmatrixSweep {
    shape: Shape,
    n: Vec<usize>,
    trials: usize,
}

struct TensorSweep {
    family: TensorFamily,
    r: usize,
    p: f64,
    d: Vec<usize>,
    trials: usize,
    restarts: usize,
}

struct SandwichAudit {
    graphs: usize,
    n_max: usize,
}

enum Plan {
    Er(ErSweep),
    Circulant(CirculantSweep),
    Localization(Localization),
    Omega(OmegaSweep),
    Frames(FramesVerify),
    Sic(SicSearch),
    Gmatrix(GmatrixSweep),
    Tensor(TensorSweep),
    Sandwich(SandwichAudit),
}

fn parse(experiment: &str, params: &Map<String, Value>) -> LabResult<Plan> {
    let mut p = Params::new(params);
    let plan = match experiment {
        "theta-er-sweep" => {
            let c = ErSweep {
                n: p.usize_list("n", &[50, 100, 150])?,
                trials: p.usize("trials", 10)?,
                edge_prob: p.f64("edge_prob", 0.5)?,
                tol: p.f64("tol", 1e-4)?,
            };
            require(c.n.iter().all(|&n| (2..=crate::theta::MAX_SDP_N).contains(&n)), "params.n entries must lie in 2..=200")?;
            require(c.trials > 0, "params.trials must be positive")?;
            require((0.0..=1.0).contains(&c.edge_prob), "params.edge_prob must lie in [0, 1]")?;
            require(c.tol > 0.0, "params.tol must be positive")?;
            Plan::Er(c)
        }
        "theta-circulant-sweep" => {
            let c = CirculantSweep { n: p.usize_list("n", &[64, 128, 256])?, trials: p.usize("trials", 20)? };
            require(c.n.iter().all(|&n| (2..=4096).contains(&n)), "params.n entries must lie in 2..=4096")?;
            require(c.trials > 0, "params.trials must be positive")?;
            Plan::Circulant(c)
        }
        "paley-localization" => {
            let c = Localization { p: p.usize_list("p", &[101, 229, 401])? };
            require(
                c.p.iter().all(|&q| q <= 2000 && crate::graph::is_prime(q) && q % 4 == 1),
                "params.p entries must be primes ≡ 1 mod 4, at most 2000",
            )?;
            Plan::Localization(c)
        }
        "phase-omega-sweep" => {
            let c = OmegaSweep { m_min: p.usize("m_min", 3)?, m_max: p.usize("m_max", 10)?, trials: p.usize("trials", 200)? };
            require(c.m_min >= 2 && c.m_max <= 12 && c.m_min < c.m_max, "params.m_min..m_max must lie within [2, 12] with at least two values")?;
            require(c.trials > 0, "params.trials must be positive")?;
            Plan::Omega(c)
        }
        "frames-verify" => {
            let c = FramesVerify {
                mub_d: p.usize_list("mub_d", &[2, 3, 5, 7, 11])?,
                etf_p: p.usize_list("etf_p", &[13, 17, 29])?,
                mub_tol: p.f64("mub_tol", 1e-10)?,
                etf_tol: p.f64("etf_tol", 1e-9)?,
            };
            require(c.mub_d.iter().all(|&d| d <= 200 && crate::graph::is_prime(d)), "params.mub_d entries must be primes up to 200")?;
            require(
                c.etf_p.iter().all(|&q| q <= 400 && crate::graph::is_prime(q) && q % 4 == 1),
                "params.etf_p entries must be primes ≡ 1 mod 4, at most 400",
            )?;
            Plan::Frames(c)
        }
        "sic-search" => {
            let c = SicSearch { d: p.usize_list("d", &[2, 3])?, restarts: p.usize("restarts", 64)?, iters: p.usize("iters", 400)? };
            require(c.d.iter().all(|&d| (2..=8).contains(&d)), "params.d entries must lie in 2..=8")?;
            require(c.restarts > 0 && c.iters > 0, "params.restarts and params.iters must be positive")?;
            Plan::Sic(c)
        }
        "gmatrix-sweep" => {
            let shape: Shape = p
                .string("shape", &Shape::edge().to_string())?
                .parse()
                .map_err(|e: crate::Error| schema(format!("params.shape: {e}")))?;
            let c = GmatrixSweep { shape, n: p.usize_list("n", &[50, 100, 200, 400, 800])?, trials: p.usize("trials", 5)? };
            let mut distinct = c.n.clone();
            distinct.sort_unstable();
            distinct.dedup();
            require(distinct.len() == c.n.len() && c.n.len() >= 4, "params.n needs at least 4 distinct sizes")?;
            require(c.n.iter().all(|&n| (3..=4000).contains(&n)), "params.n entries must lie in 3..=4000")?;
            require(c.trials > 0, "params.trials must be positive")?;
            Plan::Gmatrix(c)
        }
        "tensor-ratio-sweep" => {
            let family = p
                .string("family", "random-rank-one")?
                .parse()
                .map_err(|e: crate::Error| schema(format!("params.family: {e}")))?;
            let c = TensorSweep {
                family,
                r: p.usize("r", 2)?,
                p: p.f64("p", 4.0)?,
                d: p.usize_list("d", &[4, 8, 16])?,
                trials: p.usize("trials", 50)?,
                restarts: p.usize("restarts", 4)?,
            };
            require(c.r == 2 || c.r == 3, "params.r must be 2 or 3")?;
            require(c.p == 2.0 || c.p == 4.0, "params.p must be 2 or 4")?;
            require(c.d.iter().all(|&d| (1..=64).contains(&d)), "params.d entries must lie in 1..=64")?;
            require(c.trials >= 10 && c.restarts > 0, "params.trials must be at least 10 and params.restarts positive")?;
            Plan::Tensor(c)
        }
        "sandwich-audit" => {
            let c = SandwichAudit { graphs: p.usize("graphs", 200)?, n_max: p.usize("n_max", 10)? };
            require(c.graphs > 0, "params.graphs must be positive")?;
            require((2..=12).contains(&c.n_max), "params.n_max must lie in 2..=12")?;
            Plan::Sandwich(c)
        }
        other => return Err(LabError::UnknownExperiment(other.to_string())),
    };
    p.finish()?;
    Ok(plan)
}

pub(super) fn validate_params(experiment: &str, params: &Map<String, Value>) -> LabResult<()> {
    parse(experiment, params).map(|_| ())
}

pub fn run_experiment(experiment: &str, params: &Map<String, Value>, seed: u64) -> LabResult<Vec<Sample>> {
    Ok(match parse(experiment, params)? {
        Plan::Er(c) => {
            let jobs: Vec<(usize, usize)> = c.n.iter().flat_map(|&n| (0..c.trials).map(move |t| (n, t))).collect();
            jobs.par_iter()
                .map(|&(n, t)| {
                    let g = sample_er(n, c.edge_prob, derive_indexed(seed, "er", &[n as u64, t as u64]))?;
                    let r = theta_sdp(&g, c.tol)?;
                    Ok(record(vec![
                        ("n", json!(n)),
                        ("trial", json!(t)),
                        ("theta", json!(r.value)),
                        ("gap", json!(r.gap)),
                        ("converged", json!(r.converged)),
                    ]))
                })
                .collect::<crate::Result<Vec<_>>>()?
        }
        Plan::Circulant(c) => {
            let jobs: Vec<(usize, usize)> = c.n.iter().flat_map(|&n| (0..c.trials).map(move |t| (n, t))).collect();
            jobs.par_iter()
                .map(|&(n, t)| {
                    let spec = sample_random_circulant(n, derive_indexed(seed, "circulant", &[n as u64, t as u64]))?;
                    let r = theta_circulant(&spec, LpFormulation::FreqPrimal)?;
                    Ok(record(vec![
                        ("n", json!(n)),
                        ("trial", json!(t)),
                        ("connection_size", json!(spec.conn().len())),
                        ("theta", json!(r.value)),
                    ]))
                })
                .collect::<crate::Result<Vec<_>>>()?
        }
        Plan::Localization(c) => c
            .p
            .par_iter()
            .map(|&p| {
                let loc = paley_localization(p)?;
                let r = theta_circulant(&loc.spec.complement(), LpFormulation::FreqPrimal)?;
                Ok(record(vec![
                    ("p", json!(p)),
                    ("m", json!(loc.spec.n())),
                    ("theta", json!(r.value)),
                    ("ratio", json!(r.value / (p as f64 / 2.0).sqrt())),
                ]))
            })
            .collect::<crate::Result<Vec<_>>>()?,
        Plan::Omega(c) => {
            let jobs: Vec<(usize, usize)> = (c.m_min..=c.m_max).flat_map(|m| (0..c.trials).map(move |t| (m, t))).collect();
            jobs.par_iter()
                .map(|&(m, t)| {
                    let (w, _, _) = gaussian_trial(m, t, seed)?;
                    Ok(record(vec![("M", json!(m)), ("trial", json!(t)), ("omega", json!(w))]))
                })
                .collect::<crate::Result<Vec<_>>>()?
        }
        Plan::Frames(c) => {
            let mut out = vec![];
            for &d in &c.mub_d {
                let sys = mub_prime(d)?;
                let rep = verify_mub(&sys, c.mub_tol)?;
                out.push(frame_record("mub", d, d, d * (d + 1), &rep));
            }
            for &p in &c.etf_p {
                let f = paley_etf(p)?;
                let rep = verify_etf(&f, c.etf_tol);
                out.push(frame_record("paley-etf", p, f.d(), f.n(), &rep));
            }
            out
        }
        Plan::Sic(c) => {
            let mut out = vec![];
            for &d in &c.d {
                let r = sic_search(d, c.restarts, c.iters, derive_indexed(seed, "sic", &[d as u64]))?;
                out.push(record(vec![
                    ("d", json!(d)),
                    ("coherence", json!(r.coherence)),
                    ("target", json!(r.target)),
                    ("best_restart", json!(r.best_restart)),
                ]));
            }
            out
        }
        Plan::Gmatrix(c) => {
            let jobs: Vec<(usize, usize)> = c.n.iter().flat_map(|&n| (0..c.trials).map(move |t| (n, t))).collect();
            jobs.par_iter()
                .map(|&(n, t)| {
                    let s = derive_indexed(seed, "gmatrix", &[n as u64, t as u64]);
                    let gm = realize(&c.shape, n, s)?;
                    let e = norm_estimate(&gm.matrix, NORM_TOL, s ^ 0x5eed)?;
                    Ok(record(vec![
                        ("n", json!(n)),
                        ("trial", json!(t)),
                        ("norm", json!(e.value)),
                        ("converged", json!(e.converged)),
                    ]))
                })
                .collect::<crate::Result<Vec<_>>>()?
        }
        Plan::Tensor(c) => {
            let sw = conjecture_ratio_sweep(c.family, c.r, &c.d, c.p, c.trials, c.restarts, seed)?;
            let mut out = vec![];
            for (i, &d) in sw.d.iter().enumerate() {
                let aw = sw.aw_rhs.as_ref().map(|v| v[i]);
                for (t, &lhs) in sw.samples[i].iter().enumerate() {
                    out.push(record(vec![
                        ("d", json!(d)),
                        ("trial", json!(t)),
                        ("lhs", json!(lhs)),
                        ("nck_rhs", json!(sw.nck_rhs[i])),
                        ("aw_rhs", aw.map_or(Value::Null, |b| json!(b))),
                    ]));
                }
            }
            out
        }
        Plan::Sandwich(c) => (0..c.graphs)
            .into_par_iter()
            .map(|i| {
                let s = derive_indexed(seed, "sandwich", &[i as u64]);
                let mut rng = rng_from_seed(s);
                let n = rng.random_range(1..=c.n_max);
                let prob = rng.random_range(0.1..0.9);
                let g = sample_er(n, prob, derive_seed(s, "graph"))?;
                let r = sandwich_report(&g)?;
                Ok(record(vec![
                    ("graph", json!(i)),
                    ("n", json!(n)),
                    ("edges", json!(g.edge_count())),
                    ("clique", json!(r.clique)),
                    ("theta_complement", json!(r.theta_complement)),
                    ("chromatic", json!(r.chromatic)),
                ]))
            })
            .collect::<crate::Result<Vec<_>>>()?,
    })
}

fn frame_record(family: &str, param: usize, d: usize, n: usize, r: &frames::VerificationReport) -> Sample {
    let opt = |v: Option<f64>| v.map_or(Value::Null, |x| json!(x));
    record(vec![
        ("family", json!(family)),
        ("param", json!(param)),
        ("d", json!(d)),
        ("n", json!(n)),
        ("max_norm_dev", json!(r.max_norm_dev)),
        ("max_orthogonality_dev", opt(r.max_orthogonality_dev)),
        ("max_unbiasedness_dev", opt(r.max_unbiasedness_dev)),
        ("max_equiangularity_dev", opt(r.max_equiangularity_dev)),
        ("tightness_dev", json!(r.tightness_dev)),
        ("coherence", json!(r.coherence)),
        ("welch_bound", json!(r.welch_bound)),
    ])
}

pub fn summarize(experiment: &str, params: &Map<String, Value>, samples: &[Sample]) -> LabResult<Summary> {
    let mut s = Summary::default();
    match parse(experiment, params)? {
        Plan::Er(c) => {
            let g = group(samples, "n", "theta")?;
            s.aggregates.insert("mean_theta".into(), per_key(&g, |_, v| mean(v)));
            s.aggregates.insert("mean_theta_over_sqrt_n".into(), per_key(&g, |n, v| mean(v) / (n as f64).sqrt()));
            let gaps = samples.iter().map(|x| num(x, "gap")).collect::<LabResult<Vec<_>>>()?;
            s.aggregates.insert("max_gap".into(), json!(gaps.iter().cloned().fold(0.0, f64::max)));
            if c.edge_prob == 0.5 {
                for (n, v) in &g {
                    s.checks.push(Check::within(format!("theta/sqrt(n) at n={n}"), mean(v) / (*n as f64).sqrt(), Some(0.9), Some(1.5)));
                }
            }
        }
        Plan::Circulant(_) => {
            let g = group(samples, "n", "theta")?;
            s.aggregates.insert("mean_theta".into(), per_key(&g, |_, v| mean(v)));
            s.aggregates.insert("mean_theta_over_sqrt_n".into(), per_key(&g, |n, v| mean(v) / (n as f64).sqrt()));
            for (n, v) in &g {
                s.checks.push(Check::within(format!("theta/sqrt(n) at n={n}"), mean(v) / (*n as f64).sqrt(), Some(0.95), Some(1.35)));
            }
        }
        Plan::Localization(_) => {
            let g = group(samples, "p", "theta")?;
            s.aggregates.insert("theta_over_sqrt_half_p".into(), per_key(&g, |p, v| v[0] / (p as f64 / 2.0).sqrt()));
            for (p, v) in &g {
                s.checks.push(Check::within(format!("theta/sqrt(p/2) at p={p}"), v[0] / (*p as f64 / 2.0).sqrt(), Some(0.9), Some(1.1)));
            }
        }
        Plan::Omega(_) => {
            let g = group(samples, "M", "omega")?;
            let ms: Vec<f64> = g.keys().map(|&m| m as f64).collect();
            let means: Vec<f64> = g.values().map(|v| mean(v)).collect();
            let logs: Vec<f64> = means.iter().map(|m| m.ln()).collect();
            let (slope, intercept, rms) = least_squares(&ms, &logs);
            s.aggregates.insert("mean_omega".into(), per_key(&g, |_, v| mean(v)));
            s.aggregates.insert("beta_hat".into(), json!(slope.exp()));
            s.aggregates.insert("fit_intercept".into(), json!(intercept));
            s.aggregates.insert("fit_residual".into(), json!(rms));
            s.checks.push(Check::strictly_within("beta_hat", slope.exp(), 0.0, 1.0));
            s.checks.push(Check::flag("mean omega decreasing in M", means.windows(2).all(|w| w[1] < w[0])));
        }
        Plan::Frames(c) => {
            for x in samples {
                let family = x.get("family").and_then(Value::as_str).unwrap_or_default();
                let param = int(x, "param")?;
                let tol = if family == "mub" { c.mub_tol } else { c.etf_tol };
                let mut worst = num(x, "max_norm_dev")?.max(num(x, "tightness_dev")?);
                for k in ["max_orthogonality_dev", "max_unbiasedness_dev", "max_equiangularity_dev"] {
                    if let Some(v) = opt_num(x, k)? {
                        worst = worst.max(v);
                    }
                }
                if family != "mub" {
                    worst = worst.max((num(x, "coherence")? - num(x, "welch_bound")?).abs());
                }
                s.aggregates.insert(format!("coherence {family} {param}"), json!(num(x, "coherence")?));
                s.checks.push(Check::within(format!("{family} {param} worst deviation"), worst, None, Some(tol)));
            }
        }
        Plan::Sic(_) => {
            for x in samples {
                let d = int(x, "d")?;
                let dev = (num(x, "coherence")? - num(x, "target")?).abs();
                s.aggregates.insert(format!("coherence_d{d}"), json!(num(x, "coherence")?));
                s.checks.push(Check::within(format!("|coherence - 1/sqrt(d+1)| at d={d}"), dev, None, Some(1e-6)));
            }
        }
        Plan::Gmatrix(c) => {
            let g = group(samples, "n", "norm")?;
            let xs: Vec<f64> = g.keys().map(|&n| (n as f64).ln()).collect();
            let ys: Vec<f64> = g.values().map(|v| mean(v).ln()).collect();
            let (f_hat, intercept, rms) = least_squares(&xs, &ys);
            s.aggregates.insert("mean_norm".into(), per_key(&g, |_, v| mean(v)));
            s.aggregates.insert("f_hat".into(), json!(f_hat));
            s.aggregates.insert("fit_intercept".into(), json!(intercept));
            s.aggregates.insert("fit_residual".into(), json!(rms));
            let converged = samples.iter().all(|x| x.get("converged") == Some(&Value::Bool(true)));
            s.aggregates.insert("all_converged".into(), json!(converged));
            if c.shape == Shape::edge() {
                s.checks.push(Check::within("f_hat", f_hat, Some(0.45), Some(0.55)));
            }
        }
        Plan::Tensor(c) => {
            let g = group(samples, "d", "lhs")?;
            let mut rhs = BTreeMap::new();
            let mut aw = BTreeMap::new();
            for x in samples {
                rhs.insert(int(x, "d")?, num(x, "nck_rhs")?);
                if let Some(b) = opt_num(x, "aw_rhs")? {
                    aw.insert(int(x, "d")?, b);
                }
            }
            s.aggregates.insert("lhs_mean".into(), per_key(&g, |_, v| mean(v)));
            s.aggregates.insert("ratio".into(), per_key(&g, |d, v| mean(v) / rhs[&d]));
            for (d, v) in &g {
                let m = mean(v);
                if c.p == 4.0 {
                    let bound = 5.0 * ((*d + 1) as f64).ln();
                    s.checks.push(Check::within(format!("ratio at d={d}"), m / rhs[d], None, Some(bound)));
                }
                if let Some(b) = aw.get(d) {
                    s.checks.push(Check::within(format!("lhs / aw bound at d={d}"), m / b, None, Some(3.0)));
                }
            }
        }
        Plan::Sandwich(_) => {
            let mut violations = 0usize;
            for x in samples {
                let t = num(x, "theta_complement")?;
                if int(x, "clique")? as f64 > t + SANDWICH_TOL || t > int(x, "chromatic")? as f64 + SANDWICH_TOL {
                    violations += 1;
                }
            }
            s.aggregates.insert("graphs".into(), json!(samples.len()));
            s.aggregates.insert("violations".into(), json!(violations));
            s.checks.push(Check::within("sandwich violations", violations as f64, None, Some(0.0)));
        }
    }
    Ok(s)
}
