//! Derivative-free search over affine positions: Nelder–Mead with seeded
//! restarts, the affine facet-ratio search and the random-polytope prober.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::isoperimetric::{exact_max_ratio, RatioModel};
use crate::polytope::{convex_hull, AffineMap, VPolytope, Vector};
use crate::scalar::{from_f64, ApproxScalar};

pub const DEFAULT_RESTARTS: usize = 8;

#[derive(Clone, Debug)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    /// Objective value at every evaluation, in order.
    pub history: Vec<f64>,
}

/// Minimizes `f` from `x0` with an axis-aligned initial simplex of size
/// `step`, stopping after `max_evals` evaluations or when the simplex
/// values agree to `1e-14`.
pub fn nelder_mead(f: impl Fn(&[f64]) -> f64, x0: &[f64], step: f64, max_evals: usize) -> NelderMeadResult {
    let m = x0.len();
    let mut history = Vec::with_capacity(max_evals);
    let eval = |x: &[f64], history: &mut Vec<f64>| {
        let v = f(x);
        let v = if v.is_nan() { f64::INFINITY } else { v };
        history.push(v);
        v
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(m + 1);
    let v0 = eval(x0, &mut history);
    simplex.push((x0.to_vec(), v0));
    for i in 0..m {
        if history.len() >= max_evals {
            break;
        }
        let mut x = x0.to_vec();
        x[i] += step;
        let v = eval(&x, &mut history);
        simplex.push((x, v));
    }
    while history.len() < max_evals && simplex.len() == m + 1 {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (best, worst) = (simplex[0].1, simplex[m].1);
        if (worst - best).abs() <= 1e-14 * best.abs().max(1e-300) {
            break;
        }
        let centroid: Vec<f64> =
            (0..m).map(|j| simplex[..m].iter().map(|(x, _)| x[j]).sum::<f64>() / m as f64).collect();
        let along = |t: f64| -> Vec<f64> { (0..m).map(|j| centroid[j] + t * (simplex[m].0[j] - centroid[j])).collect() };
        let xr = along(-1.0);
        let fr = eval(&xr, &mut history);
        if fr < simplex[0].1 {
            if history.len() < max_evals {
                let xe = along(-2.0);
                let fe = eval(&xe, &mut history);
                simplex[m] = if fe < fr { (xe, fe) } else { (xr, fr) };
            } else {
                simplex[m] = (xr, fr);
            }
            continue;
        }
        if fr < simplex[m - 1].1 {
            simplex[m] = (xr, fr);
            continue;
        }
        if history.len() >= max_evals {
            break;
        }
        let (xc, fc) = if fr < simplex[m].1 {
            let x = along(-0.5);
            let v = eval(&x, &mut history);
            (x, v)
        } else {
            let x = along(0.5);
            let v = eval(&x, &mut history);
            (x, v)
        };
        if fc < simplex[m].1.min(fr) {
            simplex[m] = (xc, fc);
            continue;
        }
        // shrink towards the best vertex
        let x_best = simplex[0].0.clone();
        for k in 1..=m {
            if history.len() >= max_evals {
                break;
            }
            let x: Vec<f64> = (0..m).map(|j| x_best[j] + 0.5 * (simplex[k].0[j] - x_best[j])).collect();
            let v = eval(&x, &mut history);
            simplex[k] = (x, v);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    NelderMeadResult { x, value, evaluations: history.len(), history }
}

/// Number of log-Cholesky coordinates for `n × n` SPD matrices.
pub fn spd_params(n: usize) -> usize {
    n * (n + 1) / 2
}

/// `θ ↦ S = L Lᵀ / det(L Lᵀ)^{1/n}` with `L` lower triangular and
/// `L_ii = exp(θ_ii)`; coordinates are clamped to keep `S` well conditioned.
pub fn spd_from_params(theta: &[f64], n: usize) -> Vec<Vec<f64>> {
    let mut l = vec![vec![0.0; n]; n];
    let mut k = 0;
    let mut log_det = 0.0;
    for i in 0..n {
        for j in 0..=i {
            let v = theta[k];
            k += 1;
            if i == j {
                let d = v.clamp(-4.0, 4.0);
                log_det += 2.0 * d;
                l[i][j] = d.exp();
            } else {
                l[i][j] = v.clamp(-20.0, 20.0);
            }
        }
    }
    let scale = (-log_det / n as f64).exp();
    (0..n)
        .map(|i| (0..n).map(|j| scale * (0..n).map(|k| l[i][k] * l[j][k]).sum::<f64>()).collect())
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceEntry {
    pub restart: usize,
    pub evaluation: usize,
    pub ratio: f64,
    pub best_so_far: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AffineSearchResult {
    #[serde(serialize_with = "serialize_map")]
    pub best_t: AffineMap,
    /// Ratio of `best_t · P` recomputed by the exact pipeline.
    pub best_ratio: ApproxScalar,
    /// Ratio reported by the float model during the search.
    pub model_ratio: f64,
    /// Facet of `best_t · P` attaining the maximum.
    #[serde(serialize_with = "crate::scalar::serde_bigint_vec::serialize")]
    pub witness_normal: Vec<num_bigint::BigInt>,
    pub identity_ratio: f64,
    pub trace: Vec<TraceEntry>,
    pub seed: u64,
    pub budget: usize,
    pub restarts: usize,
    pub evaluations: usize,
}

fn serialize_map<S: serde::Serializer>(t: &AffineMap, s: S) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&crate::io::affine_map_to_json(t), s)
}

/// Maximizes `max_F Isop(TF)/Isop(TP)` over unit-determinant SPD maps `T`.
///
/// Restart 0 starts at the identity; the others start at points drawn from
/// `seed` before any evaluation, so the parallel schedule cannot change the
/// result. Ties keep the lowest restart index.
pub fn affine_search(p: &VPolytope, budget: usize, seed: u64, restarts: usize) -> Result<AffineSearchResult> {
    let model = RatioModel::new(p)?;
    let n = p.dim();
    let m = spd_params(n);
    let restarts = restarts.max(1).min((budget / (m + 1)).max(1));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts: Vec<Vec<f64>> = (0..restarts)
        .map(|r| if r == 0 { vec![0.0; m] } else { (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect() })
        .collect();
    let shares: Vec<usize> = (0..restarts).map(|r| budget / restarts + usize::from(r < budget % restarts)).collect();
    let objective = |theta: &[f64]| -> f64 {
        match model.evaluate(&spd_from_params(theta, n)) {
            Some((r, _)) => -r,
            None => f64::INFINITY,
        }
    };
    let runs: Vec<NelderMeadResult> =
        starts.par_iter().zip(&shares).map(|(x0, &b)| nelder_mead(objective, x0, 0.5, b.max(1))).collect();

    let mut best = 0;
    for (r, run) in runs.iter().enumerate() {
        if run.value < runs[best].value {
            best = r;
        }
    }
    let mut trace = Vec::new();
    let mut running = f64::NEG_INFINITY;
    for (r, run) in runs.iter().enumerate() {
        for (i, v) in run.history.iter().enumerate() {
            running = running.max(-v);
            trace.push(TraceEntry { restart: r, evaluation: i, ratio: -v, best_so_far: running });
        }
    }
    let s = spd_from_params(&runs[best].x, n);
    let t = AffineMap::linear(
        s.iter().map(|row| row.iter().map(|&x| from_f64(x)).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?,
    )?;
    let exact = exact_max_ratio(p, &t)?;
    let identity_ratio = model.evaluate(&spd_from_params(&vec![0.0; m], n)).map_or(f64::NAN, |r| r.0);
    Ok(AffineSearchResult {
        best_ratio: exact.max_ratio,
        model_ratio: -runs[best].value,
        witness_normal: exact.witness_normal().to_vec(),
        identity_ratio,
        evaluations: runs.iter().map(|r| r.evaluations).sum(),
        best_t: t,
        trace,
        seed,
        budget,
        restarts,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    /// Hull of `points` random integer points in `[-10, 10]^n`.
    Hull { points: usize },
    /// Corner simplex scaled by 10 with integer perturbations in `[-3, 3]`.
    Simplex,
    /// Sum of `segments` random integer segments in `[-5, 5]^n`.
    Zonotope { segments: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeTrial {
    pub index: usize,
    pub vertices: usize,
    pub facets: usize,
    pub is_simplex: bool,
    pub skipped: bool,
    pub identity_ratio: Option<f64>,
    pub best_ratio: Option<f64>,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub generator: Generator,
    pub dim: usize,
    pub trials: Vec<ProbeTrial>,
    /// Non-simplices whose search never exceeded `1 + tol`: material for
    /// closer inspection, not counterexamples.
    pub candidates: Vec<usize>,
    pub seed: u64,
    pub budget: usize,
    pub tol: f64,
}

fn random_point(rng: &mut ChaCha8Rng, n: usize, r: i64) -> Vector {
    Vector::from_ints(&(0..n).map(|_| rng.gen_range(-r..=r)).collect::<Vec<_>>())
}

/// Draws a full-dimensional body from the generator (resampling degenerate
/// draws).
pub fn generate(g: Generator, n: usize, rng: &mut ChaCha8Rng) -> Result<VPolytope> {
    for _ in 0..1000 {
        let body = match g {
            Generator::Hull { points } => convex_hull(&(0..points).map(|_| random_point(rng, n, 10)).collect::<Vec<_>>())?,
            Generator::Simplex => {
                let mut pts = vec![random_point(rng, n, 3)];
                for i in 0..n {
                    let e = Vector::unit(n, i).scale(&crate::scalar::int(10));
                    pts.push(e.add(&random_point(rng, n, 3)));
                }
                convex_hull(&pts)?
            }
            Generator::Zonotope { segments } => {
                let mut z = convex_hull(&[Vector::zeros(n)])?;
                for _ in 0..segments {
                    let s = convex_hull(&[Vector::zeros(n), random_point(rng, n, 5)])?;
                    z = z.minkowski_sum(&s)?;
                }
                z
            }
        };
        if body.is_full_dimensional() {
            return Ok(body);
        }
    }
    Err(Error::Degenerate("generator kept producing flat bodies".into()))
}

pub fn question1_probe(
    g: Generator,
    n: usize,
    trials: usize,
    budget: usize,
    seed: u64,
    tol: f64,
) -> Result<ProbeReport> {
    if n < 2 {
        return Err(Error::InvalidParameter("probe needs dimension at least 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bodies: Vec<VPolytope> = (0..trials).map(|_| generate(g, n, &mut rng)).collect::<Result<_>>()?;
    let skip_simplices = matches!(g, Generator::Hull { points } if points <= n + 1);
    let results: Vec<ProbeTrial> = bodies
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let trial_seed = seed.wrapping_add(i as u64 + 1);
            let is_simplex = b.is_simplex();
            if is_simplex && skip_simplices {
                return Ok(ProbeTrial {
                    index: i,
                    vertices: b.vertices().len(),
                    facets: b.facets().len(),
                    is_simplex,
                    skipped: true,
                    identity_ratio: None,
                    best_ratio: None,
                    seed: trial_seed,
                });
            }
            let r = affine_search(b, budget, trial_seed, DEFAULT_RESTARTS)?;
            Ok(ProbeTrial {
                index: i,
                vertices: b.vertices().len(),
                facets: b.facets().len(),
                is_simplex,
                skipped: false,
                identity_ratio: Some(r.identity_ratio),
                best_ratio: Some(r.best_ratio.value),
                seed: trial_seed,
            })
        })
        .collect::<Result<_>>()?;
    let candidates = results
        .iter()
        .filter(|t| !t.is_simplex && t.best_ratio.is_some_and(|r| r <= 1.0 + tol))
        .map(|t| t.index)
        .collect();
    Ok(ProbeReport { generator: g, dim: n, trials: results, candidates, seed, budget, tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{cube, regular_simplex};

    #[test]
    fn nelder_mead_finds_quadratic_minimum() {
        let r = nelder_mead(|x| (x[0] - 1.0).powi(2) + 10.0 * (x[1] + 2.0).powi(2), &[0.0, 0.0], 0.5, 2000);
        assert!((r.x[0] - 1.0).abs() < 1e-5 && (r.x[1] + 2.0).abs() < 1e-5);
        assert!(r.evaluations <= 2000);
        let capped = nelder_mead(|x| x[0] * x[0], &[3.0], 1.0, 7);
        assert_eq!(capped.evaluations, 7);
    }

    #[test]
    fn spd_parametrization_has_unit_determinant() {
        let s = spd_from_params(&[0.3, -0.7, 0.1, 0.5, 0.2, -1.2], 3);
        assert!((crate::linalg::det_f64(s.clone()) - 1.0).abs() < 1e-12);
        assert!((s[0][1] - s[1][0]).abs() < 1e-15);
        let id = spd_from_params(&[0.0; 6], 3);
        assert!((id[0][0] - 1.0).abs() < 1e-15 && id[0][1] == 0.0);
    }

    #[test]
    fn cube_search_stretches_past_one() {
        let r = affine_search(&cube(3).unwrap(), 60, 3, DEFAULT_RESTARTS).unwrap();
        assert!(r.best_ratio.value > 1.0);
        assert!((r.best_ratio.value - r.model_ratio).abs() < 1e-9 * r.model_ratio);
        let again = affine_search(&cube(3).unwrap(), 60, 3, DEFAULT_RESTARTS).unwrap();
        assert_eq!(
            r.trace.iter().map(|e| e.ratio.to_bits()).collect::<Vec<_>>(),
            again.trace.iter().map(|e| e.ratio.to_bits()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn simplex_search_stays_below_one() {
        let r = affine_search(&regular_simplex(3).unwrap(), 200, 5, DEFAULT_RESTARTS).unwrap();
        assert!(r.best_ratio.value <= 1.0 + 1e-6);
    }

    #[test]
    fn probe_flags_simplices() {
        let rep = question1_probe(Generator::Hull { points: 4 }, 3, 2, 30, 9, 1e-7).unwrap();
        assert!(rep.trials.iter().all(|t| t.skipped && t.is_simplex));
        assert!(rep.candidates.is_empty());
        let rep = question1_probe(Generator::Zonotope { segments: 4 }, 3, 2, 60, 9, 1e-7).unwrap();
        assert!(rep.trials.iter().all(|t| !t.is_simplex && t.best_ratio.is_some()));
    }
}
