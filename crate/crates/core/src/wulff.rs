//! Wulff shapes `W(Ω, g) = ⋂ {x : <x,u> ≤ g(u)}`, perturbation families
//! `W_t = W(Ω, h_K + t f)`, derivative checks and the facet-driven
//! counterexample construction.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::bezout::{bezout_form, BezoutWitness};
use crate::error::{Error, Result};
use crate::isoperimetric::facet_ratios;
use crate::linalg::primitive;
use crate::mixed::{hyperplane_mixed_volume, mixed_volume};
use crate::polytope::{vertex_enumeration, vertex_enumeration_brute, HPolytope, VPolytope, Vector};
use crate::scalar::{serde_scalar, sqrt_f64, to_f64, ApproxScalar, Scalar};

/// Values on primitive integer normals. A value `f(a)` at a primitive
/// normal `a` is the 1-homogeneous extension, so the unit-sphere value is
/// `f(a) / |a|`; offsets `h_K(a) + t f(a)` stay rational.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SphereFunction {
    pub entries: BTreeMap<Vec<BigInt>, Scalar>,
}

fn describe_normal(a: &[BigInt]) -> String {
    let parts: Vec<String> = a.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

impl SphereFunction {
    pub fn new() -> Self {
        SphereFunction::default()
    }

    /// Non-primitive normals are reduced; the value is rescaled
    /// homogeneously (`f(a/g) = f(a)/g`).
    pub fn insert(&mut self, normal: Vec<BigInt>, value: Scalar) -> Result<()> {
        if normal.iter().all(|x| x.is_zero()) {
            return Err(Error::InvalidParameter("zero normal in sphere function".into()));
        }
        let g = normal.iter().fold(BigInt::zero(), |g, x| num_integer::Integer::gcd(&g, x));
        let p = primitive(normal);
        self.entries.insert(p, value / Scalar::from_integer(g));
        Ok(())
    }

    pub fn get(&self, normal: &[BigInt]) -> Option<&Scalar> {
        self.entries.get(normal)
    }

    /// Unit-sphere value `f(a)/|a|`.
    pub fn unit_value(&self, normal: &[BigInt]) -> Option<f64> {
        self.get(normal).map(|v| to_f64(v) / sqrt_f64(&Scalar::from_integer(crate::linalg::norm_sq_int(normal))))
    }

    pub fn constant(normals: &[Vec<BigInt>], value: Scalar) -> Self {
        SphereFunction { entries: normals.iter().map(|a| (a.clone(), value.clone())).collect() }
    }

    pub fn indicator(normals: &[Vec<BigInt>], u0: &[BigInt]) -> Self {
        SphereFunction {
            entries: normals
                .iter()
                .map(|a| (a.clone(), if a.as_slice() == u0 { Scalar::one() } else { Scalar::zero() }))
                .collect(),
        }
    }

    /// `{"entries": [{"normal": [1,0,0], "value": "1"}, ...]}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let entries = v
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("sphere function needs an \"entries\" array".into()))?;
        let mut f = SphereFunction::new();
        for e in entries {
            let normal = crate::io::int_vector_from_json(
                e.get("normal").ok_or_else(|| Error::Parse("entry without \"normal\"".into()))?,
            )?;
            let value =
                crate::io::scalar_from_json(e.get("value").ok_or_else(|| Error::Parse("entry without \"value\"".into()))?)?;
            f.insert(normal, value)?;
        }
        Ok(f)
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "entries": self.entries.iter().map(|(a, v)| serde_json::json!({
                "normal": crate::io::int_vector_to_json(a),
                "value": crate::io::scalar_to_json(v),
            })).collect::<Vec<_>>()
        })
    }
}

/// `W(Ω, g)` by vertex enumeration about `interior_point`.
pub fn wulff_shape(omega: &[Vec<BigInt>], g: &[Scalar], interior_point: &Vector) -> Result<VPolytope> {
    if omega.len() != g.len() {
        return Err(Error::WrongCount { expected: omega.len(), found: g.len() });
    }
    let n = interior_point.dim();
    let constraints = omega.iter().zip(g).map(|(a, b)| (Vector::from_bigints(a), b.clone())).collect();
    vertex_enumeration(&HPolytope::new(n, constraints, interior_point.clone())?)
}

#[derive(Clone, Debug)]
pub struct WulffFamily {
    pub base: VPolytope,
    pub f: SphereFunction,
    pub omega: Vec<Vec<BigInt>>,
    base_offsets: Vec<Scalar>,
    /// Below this parameter the family is estimated to collapse; `None` when
    /// no collapse was found on the negative side.
    pub t_min_estimate: Option<Scalar>,
}

impl WulffFamily {
    /// `Ω = E(K)`; `f` must be defined on every facet normal.
    pub fn new(base: VPolytope, f: SphereFunction) -> Result<Self> {
        if !base.is_full_dimensional() {
            return Err(Error::Degenerate("Wulff families need a full-dimensional base".into()));
        }
        let omega = base.facet_normals();
        if let Some(a) = omega.iter().find(|a| f.get(a).is_none()) {
            return Err(Error::MissingSphereValue(describe_normal(a)));
        }
        let base_offsets = base.facets().iter().map(|fc| fc.offset.clone()).collect();
        let mut fam = WulffFamily { base, f, omega, base_offsets, t_min_estimate: None };
        fam.t_min_estimate = fam.estimate_t_min();
        Ok(fam)
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn offsets_at(&self, t: &Scalar) -> Vec<Scalar> {
        self.omega.iter().zip(&self.base_offsets).map(|(a, h)| h + t * self.f.get(a).expect("checked")).collect()
    }

    /// `W_t`, exact. `W_0` is the base body itself.
    pub fn family_at(&self, t: &Scalar) -> Result<VPolytope> {
        if t.is_zero() {
            return Ok(self.base.clone());
        }
        let g = self.offsets_at(t);
        let n = self.dim();
        let c = self.base.centroid();
        let strictly_inside = self.omega.iter().zip(&g).all(|(a, b)| c.dot_int(a) < *b);
        let w = if strictly_inside {
            wulff_shape(&self.omega, &g, &c)?
        } else {
            let cons: Vec<(Vector, Scalar)> =
                self.omega.iter().zip(&g).map(|(a, b)| (Vector::from_bigints(a), b.clone())).collect();
            vertex_enumeration_brute(n, &cons).ok_or_else(|| Error::Collapsed(crate::scalar::format_scalar(t)))?
        };
        if !w.is_full_dimensional() {
            return Err(Error::Collapsed(crate::scalar::format_scalar(t)));
        }
        Ok(w)
    }

    fn collapses(&self, t: &Scalar) -> bool {
        self.family_at(t).is_err()
    }

    fn estimate_t_min(&self) -> Option<Scalar> {
        let mut good = Scalar::zero();
        let mut step = Scalar::new(BigInt::one(), BigInt::from(64));
        let mut bad = None;
        for _ in 0..24 {
            let t = -step.clone();
            if self.collapses(&t) {
                bad = Some(t);
                break;
            }
            good = -step.clone();
            step *= Scalar::from_integer(BigInt::from(2));
        }
        let mut bad = bad?;
        let two = Scalar::from_integer(BigInt::from(2));
        for _ in 0..24 {
            let mid = (&good + &bad) / &two;
            if self.collapses(&mid) {
                bad = mid;
            } else {
                good = mid;
            }
        }
        Some(bad)
    }

    /// `Σ_u f(u) |K^u|` with unit-sphere values of `f`.
    pub fn surface_integral(&self) -> ApproxScalar {
        let (mut v, mut tol) = (0.0, 0.0);
        for (i, a) in self.omega.iter().enumerate() {
            let fu = self.f.unit_value(a).expect("checked");
            let m = self.base.facet_measure(i);
            v += fu * m.value;
            tol += fu.abs() * m.tol + 1e-16 * (fu * m.value).abs();
        }
        ApproxScalar::with_tol(v, tol)
    }
}

/// Vertex-to-incident-normals map: constant along `t` exactly when the
/// combinatorial type (and hence the polynomial piece) does not change.
fn fan_signature(p: &VPolytope) -> BTreeSet<Vec<usize>> {
    let mut inc: Vec<Vec<usize>> = vec![Vec::new(); p.vertices().len()];
    for (i, f) in p.facets().iter().enumerate() {
        for &v in &f.vertex_indices {
            inc[v].push(i);
        }
    }
    inc.into_iter().collect()
}

fn same_fan(a: &VPolytope, b: &VPolytope) -> bool {
    a.facet_normals() == b.facet_normals() && fan_signature(a) == fan_signature(b)
}

/// Exact derivative at 0 of the polynomial through `(t_i, y_i)`.
fn lagrange_derivative_at_zero(ts: &[Scalar], ys: &[Scalar]) -> Scalar {
    // p'(0) = Σ_i y_i L_i'(0), L_i(t) = Π_{j≠i} (t - t_j)/(t_i - t_j)
    let mut total = Scalar::zero();
    for i in 0..ts.len() {
        let mut denom = Scalar::one();
        for j in 0..ts.len() {
            if j != i {
                denom *= &ts[i] - &ts[j];
            }
        }
        // derivative of Π_{j≠i}(t - t_j) at 0 = Σ_k Π_{j≠i,k} (-t_j)
        let mut deriv = Scalar::zero();
        for k in 0..ts.len() {
            if k == i {
                continue;
            }
            let mut prod = Scalar::one();
            for j in 0..ts.len() {
                if j != i && j != k {
                    prod *= -&ts[j];
                }
            }
            deriv += prod;
        }
        total += &ys[i] * deriv / denom;
    }
    total
}

fn lagrange_value_at_zero(ts: &[Scalar], ys: &[Scalar]) -> Scalar {
    let mut total = Scalar::zero();
    for i in 0..ts.len() {
        let mut w = Scalar::one();
        for j in 0..ts.len() {
            if j != i {
                w *= -&ts[j] / (&ts[i] - &ts[j]);
            }
        }
        total += &ys[i] * w;
    }
    total
}

#[derive(Clone, Debug, Serialize)]
pub struct AlexandrovReport {
    /// `d/dt V(W_t)` at 0, exact.
    #[serde(with = "serde_scalar")]
    pub lhs_volume_derivative: Scalar,
    /// `d/dt V(W_t, K[n-1])` at 0, exact.
    #[serde(with = "serde_scalar")]
    pub lhs_mixed_derivative: Scalar,
    /// `Σ f(u)|K^u|`.
    pub rhs_integral: ApproxScalar,
    /// `(1/n) Σ f(u)|K^u|`.
    pub rhs_mixed: ApproxScalar,
    pub volume_rel_error: f64,
    pub mixed_rel_error: f64,
    #[serde(with = "serde_scalar")]
    pub step: Scalar,
    pub shrinks: usize,
}

fn rel_err(exact: &Scalar, approx: &ApproxScalar) -> f64 {
    let e = to_f64(exact);
    (e - approx.value).abs() / e.abs().max(approx.value.abs()).max(1e-300)
}

/// Interpolates `t ↦ V(W_t)` and `t ↦ V(W_t, K[n-1])` at the nodes
/// `h, 2h, ..., (n+1)h`, shrinking `h` until the fan is constant on the
/// nodes and the interpolant reproduces `V(K)` at 0.
pub fn alexandrov_check(fam: &WulffFamily) -> Result<AlexandrovReport> {
    let n = fam.dim();
    let base_volume = fam.base.volume()?;
    let mut h = Scalar::new(BigInt::one(), BigInt::from(32));
    let max_abs = fam.f.entries.values().map(|v| v.abs()).max().unwrap_or_else(Scalar::one);
    if max_abs > Scalar::one() {
        h /= max_abs;
    }
    let two = Scalar::from_integer(BigInt::from(2));
    for shrinks in 0..40 {
        let ts: Vec<Scalar> = (1..=n + 1).map(|j| &h * Scalar::from_integer(BigInt::from(j))).collect();
        let bodies: Vec<Result<VPolytope>> = ts.par_iter().map(|t| fam.family_at(t)).collect();
        let stable = bodies.iter().all(|b| b.as_ref().is_ok_and(|b| same_fan(b, &fam.base)));
        if stable {
            let bodies: Vec<VPolytope> = bodies.into_iter().map(|b| b.expect("checked")).collect();
            let vols: Vec<Scalar> = bodies.iter().map(|b| b.volume().expect("full")).collect();
            if lagrange_value_at_zero(&ts, &vols) == base_volume {
                let mixed: Vec<Scalar> = bodies
                    .par_iter()
                    .map(|b| {
                        let mut args = vec![b];
                        args.extend(std::iter::repeat(&fam.base).take(n - 1));
                        mixed_volume(&args)
                    })
                    .collect::<Result<_>>()?;
                let dv = lagrange_derivative_at_zero(&ts, &vols);
                let dm = lagrange_derivative_at_zero(&ts, &mixed);
                let rhs = fam.surface_integral();
                let rhs_mixed = ApproxScalar::with_tol(rhs.value / n as f64, rhs.tol / n as f64);
                return Ok(AlexandrovReport {
                    volume_rel_error: rel_err(&dv, &rhs),
                    mixed_rel_error: rel_err(&dm, &rhs_mixed),
                    lhs_volume_derivative: dv,
                    lhs_mixed_derivative: dm,
                    rhs_integral: rhs,
                    rhs_mixed,
                    step: h,
                    shrinks,
                });
            }
        }
        h /= &two;
    }
    Err(Error::Degenerate("normal fan did not stabilize near t = 0".into()))
}

#[derive(Clone, Debug, Serialize)]
pub struct PointwiseRow {
    #[serde(with = "serde_scalar")]
    pub t: Scalar,
    #[serde(with = "serde_scalar")]
    pub support: Scalar,
    /// Whether `u` is still a facet normal of `W_t`.
    pub active: bool,
    #[serde(serialize_with = "crate::scalar::serde_scalar_opt::serialize")]
    pub quotient: Option<Scalar>,
    pub matches_f: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointwiseReport {
    #[serde(serialize_with = "crate::scalar::serde_bigint_vec::serialize")]
    pub normal: Vec<BigInt>,
    #[serde(with = "serde_scalar")]
    pub f_value: Scalar,
    pub rows: Vec<PointwiseRow>,
    /// Every active row has quotient exactly `f(u)`.
    pub all_match: bool,
    /// Slopes of `t ↦ h_{W_t}(u)` over the sampled points (with `t = 0`) are
    /// non-increasing.
    pub concave: bool,
}

/// `(h_{W_t}(u) - h_K(u)) / t` against `f(u)`, exactly.
pub fn pointwise_check(fam: &WulffFamily, u: &[BigInt], t_values: &[Scalar]) -> Result<PointwiseReport> {
    let idx = fam.base.facet_index(u).ok_or_else(|| Error::NotAFacetNormal(describe_normal(u)))?;
    let h0 = fam.base.facets()[idx].offset.clone();
    let fu = fam.f.get(u).expect("checked").clone();
    let mut rows: Vec<PointwiseRow> = t_values
        .par_iter()
        .map(|t| {
            let w = fam.family_at(t)?;
            let support = w.support_int(u);
            let active = w.facet_index(u).is_some();
            let quotient = (!t.is_zero()).then(|| (&support - &h0) / t);
            let matches_f = quotient.as_ref().is_some_and(|q| *q == fu);
            Ok(PointwiseRow { t: t.clone(), support, active, quotient, matches_f })
        })
        .collect::<Result<_>>()?;
    let all_match = rows.iter().filter(|r| r.active && !r.t.is_zero()).all(|r| r.matches_f);
    let mut pts: Vec<(Scalar, Scalar)> = rows.iter().map(|r| (r.t.clone(), r.support.clone())).collect();
    pts.push((Scalar::zero(), h0));
    pts.sort();
    pts.dedup_by(|a, b| a.0 == b.0);
    let slopes: Vec<Scalar> = pts.windows(2).map(|w| (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0)).collect();
    let concave = slopes.windows(2).all(|s| s[1] <= s[0]);
    rows.sort_by(|a, b| a.t.cmp(&b.t));
    Ok(PointwiseReport { normal: u.to_vec(), f_value: fu, rows, all_match, concave })
}

#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleDiagnostics {
    pub facet_isop_ratio: ApproxScalar,
    pub facet_boundary: ApproxScalar,
    pub facet_measure: ApproxScalar,
    #[serde(with = "serde_scalar")]
    pub body_volume: Scalar,
    pub body_surface: ApproxScalar,
    /// `|∂F||K|/(n-1) - |∂K||F|/n`.
    pub c0: ApproxScalar,
    /// `2|∂F||K|/(n-1)`.
    pub c: ApproxScalar,
    pub c_exceeds_2c0: bool,
    /// `V_{n-1}(M^{u0}, F[n-2])` in the hyperplane `u0^⊥`.
    pub sigma_u0: ApproxScalar,
    /// `|∂F|/(n-1)`, the value for a round disk.
    pub sigma_target: f64,
    pub sigma_rel_error: f64,
    pub half_ball_vertices: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub witness: BezoutWitness,
    pub diagnostics: CounterexampleDiagnostics,
    pub warnings: Vec<String>,
    #[serde(with = "serde_scalar")]
    pub t: Scalar,
    #[serde(serialize_with = "crate::scalar::serde_bigint_vec::serialize")]
    pub u0: Vec<BigInt>,
    pub sphere_res: usize,
}

/// `L_t = W(E(K), h_K + t·1_{u0})` against a polytopal half-ball `M` whose
/// flat facet has outer normal `u0`.
pub fn counterexample_construct(k: &VPolytope, u0: &[BigInt], t: &Scalar, sphere_res: usize) -> Result<Counterexample> {
    let n = k.dim();
    if u0.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: u0.len() });
    }
    if !t.is_positive() {
        return Err(Error::InvalidParameter("t must be positive".into()));
    }
    if u0.iter().all(|x| x.is_zero()) {
        return Err(Error::InvalidParameter("zero normal".into()));
    }
    let u0 = primitive(u0.to_vec());
    let idx = k.facet_index(&u0).ok_or_else(|| Error::NotAFacetNormal(describe_normal(&u0)))?;

    let mut warnings = Vec::new();
    let ratios = facet_ratios(k)?;
    let facet_ratio = ratios.per_facet[idx].ratio;
    if facet_ratio.value <= 1.0 {
        warnings.push(format!("Isop(F)/Isop(K) = {} does not exceed 1 for this facet", facet_ratio.value));
    }

    let f = SphereFunction::indicator(&k.facet_normals(), &u0);
    let fam = WulffFamily::new(k.clone(), f)?;
    let l_t = fam.family_at(t)?;
    let m = crate::special::half_ball_with_normal(&u0, sphere_res)?;
    let witness = bezout_form(&l_t, &m, k)?;

    let face = k.facet_polytope(idx);
    let boundary = face.boundary_measure();
    let measure = k.facet_measure(idx);
    let volume = k.volume()?;
    let surface = k.surface_area()?;
    let (nf, vf) = (n as f64, to_f64(&volume));
    let c0 = boundary.value * vf / (nf - 1.0) - surface.value * measure.value / nf;
    let c0_tol = boundary.tol * vf / (nf - 1.0) + surface.tol * measure.value / nf + surface.value * measure.tol / nf;
    let c = 2.0 * boundary.value * vf / (nf - 1.0);

    let flat = m.facet_index(&u0).ok_or_else(|| Error::Degenerate("half ball lost its flat facet".into()))?;
    let disk = m.facet_polytope(flat);
    let mut args: Vec<&VPolytope> = vec![&disk];
    args.extend(std::iter::repeat(&face).take(n - 2));
    let sigma = if n == 2 {
        // V_1 of a segment in a line is its length; F[0] is empty.
        disk.intrinsic_volume()
    } else {
        hyperplane_mixed_volume(&u0, &args)?
    };
    let sigma_target = boundary.value / (nf - 1.0);

    Ok(Counterexample {
        witness,
        diagnostics: CounterexampleDiagnostics {
            facet_isop_ratio: facet_ratio,
            facet_boundary: boundary,
            facet_measure: measure,
            body_volume: volume,
            body_surface: surface,
            c0: ApproxScalar::with_tol(c0, c0_tol.max(1e-15)),
            c: ApproxScalar::with_tol(c, 2.0 * boundary.tol * vf / (nf - 1.0)),
            c_exceeds_2c0: c > 2.0 * c0,
            sigma_rel_error: (sigma.value - sigma_target).abs() / sigma_target,
            sigma_u0: sigma,
            sigma_target,
            half_ball_vertices: m.vertices().len(),
        },
        warnings,
        t: t.clone(),
        u0,
        sphere_res,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};
    use crate::special::{box_body, corner_simplex, cube};

    fn e(n: usize, i: usize) -> Vec<BigInt> {
        (0..n).map(|j| BigInt::from((i == j) as i64)).collect()
    }

    #[test]
    fn wulff_shape_examples() {
        let c = cube(3).unwrap();
        let g: Vec<Scalar> = c.facets().iter().map(|f| f.offset.clone()).collect();
        assert_eq!(wulff_shape(&c.facet_normals(), &g, &c.centroid()).unwrap(), c);
        let f = SphereFunction::indicator(&c.facet_normals(), &e(3, 0));
        let fam = WulffFamily::new(c.clone(), f).unwrap();
        let t = ratio(1, 4);
        assert_eq!(fam.family_at(&t).unwrap(), box_body(&[ratio(5, 4), int(1), int(1)]).unwrap());
        assert_eq!(fam.family_at(&Scalar::zero()).unwrap(), c);
    }

    #[test]
    fn simplex_family_collapses() {
        let s = corner_simplex(3).unwrap();
        let mut f = SphereFunction::constant(&s.facet_normals(), Scalar::zero());
        f.insert(vec![1, 1, 1].into_iter().map(BigInt::from).collect(), int(1)).unwrap();
        let fam = WulffFamily::new(s, f).unwrap();
        assert!(matches!(fam.family_at(&int(-2)), Err(Error::Collapsed(_))));
        assert_eq!(fam.family_at(&int(1)).unwrap().volume().unwrap(), ratio(8, 6));
        let tmin = fam.t_min_estimate.clone().unwrap();
        assert!((to_f64(&tmin) + 1.0).abs() < 1e-5, "t_min {tmin}");
        let mut g = SphereFunction::constant(&fam.omega, int(1));
        g.entries.remove(&e(3, 0).iter().map(|x| -x).collect::<Vec<_>>());
        assert!(matches!(WulffFamily::new(corner_simplex(3).unwrap(), g), Err(Error::MissingSphereValue(_))));
    }

    #[test]
    fn alexandrov_on_the_cube() {
        let c = cube(3).unwrap();
        let fam = WulffFamily::new(c.clone(), SphereFunction::indicator(&c.facet_normals(), &e(3, 0))).unwrap();
        let r = alexandrov_check(&fam).unwrap();
        assert_eq!(r.lhs_volume_derivative, int(1));
        assert_eq!(r.lhs_mixed_derivative, ratio(1, 3));
        assert!(r.rhs_integral.approx_eq(1.0));
        let ones = WulffFamily::new(c.clone(), SphereFunction::constant(&c.facet_normals(), int(1))).unwrap();
        assert_eq!(alexandrov_check(&ones).unwrap().lhs_volume_derivative, int(6));
    }

    #[test]
    fn pointwise_quotients() {
        let c = cube(3).unwrap();
        let fam = WulffFamily::new(c.clone(), SphereFunction::indicator(&c.facet_normals(), &e(3, 0))).unwrap();
        let ts = [ratio(1, 8), ratio(-1, 8)];
        let r = pointwise_check(&fam, &e(3, 0), &ts).unwrap();
        assert!(r.all_match && r.concave);
        assert!(r.rows.iter().all(|row| row.quotient == Some(int(1))));
        let r = pointwise_check(&fam, &e(3, 1), &ts).unwrap();
        assert!(r.rows.iter().all(|row| row.quotient == Some(int(0))));
        assert!(matches!(
            pointwise_check(&fam, &[1, 1, 0].map(BigInt::from), &ts),
            Err(Error::NotAFacetNormal(_))
        ));
    }

    #[test]
    fn lagrange_helpers() {
        // p(t) = 2 + 3t - t^2 + t^3
        let ts: Vec<Scalar> = (1..=4).map(int).collect();
        let ys: Vec<Scalar> = ts.iter().map(|t| int(2) + int(3) * t - t * t + t * t * t).collect();
        assert_eq!(lagrange_value_at_zero(&ts, &ys), int(2));
        assert_eq!(lagrange_derivative_at_zero(&ts, &ys), int(3));
    }

    #[test]
    fn sphere_function_json() {
        let v = serde_json::json!({"entries": [{"normal": [2, 0], "value": "1"}, {"normal": [0, -1], "value": 3}]});
        let f = SphereFunction::from_json(&v).unwrap();
        assert_eq!(f.get(&e(2, 0)), Some(&ratio(1, 2)));
        assert_eq!(SphereFunction::from_json(&f.to_json()).unwrap(), f);
    }
}
