//! Surface area measures, the Isop functional, facet ratios and the
//! facet excluding check.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::polytope::{convex_hull, VPolytope, Vector};
use crate::scalar::{from_f64, to_f64, ApproxScalar, Scalar};

/// Relative band around 1 inside which facet ratios are not decisive.
pub const EXCLUDING_TOL: f64 = 1e-7;

#[derive(Clone, Debug, Serialize)]
pub struct Atom {
    #[serde(serialize_with = "crate::scalar::serde_bigint_vec::serialize")]
    pub primitive_normal: Vec<num_bigint::BigInt>,
    pub unit_normal: Vec<f64>,
    pub weight: ApproxScalar,
}

/// `S_P = Σ_F |F| δ_{u_F}`.
#[derive(Clone, Debug, Serialize)]
pub struct SurfaceMeasure {
    pub atoms: Vec<Atom>,
}

impl SurfaceMeasure {
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight.value).sum()
    }

    /// `|Σ w·u|`, zero for a closed measure.
    pub fn closedness_defect(&self) -> f64 {
        let n = self.atoms.first().map_or(0, |a| a.unit_normal.len());
        let mut s = vec![0.0; n];
        for a in &self.atoms {
            for (si, ui) in s.iter_mut().zip(&a.unit_normal) {
                *si += a.weight.value * ui;
            }
        }
        s.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

pub fn surface_measure(p: &VPolytope) -> Result<SurfaceMeasure> {
    if !p.is_full_dimensional() {
        return Err(Error::Degenerate("surface measure needs a full-dimensional body".into()));
    }
    let atoms = p
        .facets()
        .iter()
        .enumerate()
        .map(|(i, f)| Atom {
            primitive_normal: f.primitive_normal.clone(),
            unit_normal: f.unit_normal(),
            weight: p.facet_measure(i),
        })
        .collect();
    Ok(SurfaceMeasure { atoms })
}

/// `Isop(C) = |∂C| / (d |C|)` for a full-dimensional body with `d ≥ 2`.
pub fn isop(c: &VPolytope) -> Result<ApproxScalar> {
    if c.dim() < 2 {
        return Err(Error::InvalidParameter("Isop needs dimension at least 2".into()));
    }
    if !c.is_full_dimensional() {
        return Err(Error::Degenerate("Isop needs a full-dimensional body; embed faces first".into()));
    }
    let s = c.surface_area()?;
    let d = c.dim() as f64;
    let v = to_f64(&c.volume()?);
    Ok(ApproxScalar::with_tol(s.value / (d * v), s.tol / (d * v) + 1e-15 * s.value / (d * v)))
}

/// Isop of a body measured inside its own affine hull (any `d ≥ 1`; a
/// segment of length `l` has `2 / l`).
pub fn intrinsic_isop(c: &VPolytope) -> Result<ApproxScalar> {
    let d = c.affine_dim();
    if d == 0 {
        return Err(Error::Degenerate("Isop of a point".into()));
    }
    let b = c.boundary_measure();
    let v = c.intrinsic_volume();
    let value = b.value / (d as f64 * v.value);
    let tol = value * (b.tol / b.value.max(f64::MIN_POSITIVE) + v.tol / v.value);
    Ok(ApproxScalar::with_tol(value, tol.max(1e-15 * value)))
}

/// Facet `i` in an orthonormal frame of its hyperplane, as an
/// `(n-1)`-dimensional body. Coordinates are floats converted exactly,
/// so measures agree with the intrinsic ones up to rounding.
pub fn embed_facet(p: &VPolytope, i: usize) -> Result<VPolytope> {
    let f = p.facets().get(i).ok_or_else(|| Error::InvalidParameter(format!("no facet {i}")))?;
    let verts: Vec<Vec<f64>> = f.vertex_indices.iter().map(|&j| p[j].to_f64()).collect();
    let origin = verts[0].clone();
    let mut frame: Vec<Vec<f64>> = Vec::new();
    for v in &verts[1..] {
        let mut w: Vec<f64> = v.iter().zip(&origin).map(|(a, b)| a - b).collect();
        // two passes of Gram–Schmidt for stability
        for _ in 0..2 {
            for e in &frame {
                let c: f64 = w.iter().zip(e).map(|(a, b)| a * b).sum();
                w.iter_mut().zip(e).for_each(|(a, b)| *a -= c * b);
            }
        }
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        let scale = v.iter().zip(&origin).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if norm > 1e-9 * scale.max(1.0) {
            frame.push(w.into_iter().map(|x| x / norm).collect());
        }
        if frame.len() + 1 == p.dim() {
            break;
        }
    }
    let pts = verts
        .iter()
        .map(|v| {
            let d: Vec<f64> = v.iter().zip(&origin).map(|(a, b)| a - b).collect();
            let coords = frame
                .iter()
                .map(|e| from_f64(d.iter().zip(e).map(|(a, b)| a * b).sum()))
                .collect::<Result<Vec<Scalar>>>()?;
            Ok(Vector(coords))
        })
        .collect::<Result<Vec<_>>>()?;
    convex_hull(&pts)
}

#[derive(Clone, Debug, Serialize)]
pub struct FacetIsop {
    pub facet: usize,
    #[serde(serialize_with = "crate::scalar::serde_bigint_vec::serialize")]
    pub normal: Vec<num_bigint::BigInt>,
    pub isop: ApproxScalar,
    pub ratio: ApproxScalar,
}

#[derive(Clone, Debug, Serialize)]
pub struct IsopReport {
    pub isop_k: ApproxScalar,
    pub per_facet: Vec<FacetIsop>,
    pub max_ratio: ApproxScalar,
    pub witness: usize,
}

impl IsopReport {
    pub fn witness_normal(&self) -> &[num_bigint::BigInt] {
        &self.per_facet[self.witness].normal
    }
}

/// `Isop(F) / Isop(K)` for every facet `F`, each facet measured in its own
/// affine hull.
pub fn facet_ratios(p: &VPolytope) -> Result<IsopReport> {
    if p.dim() < 2 {
        return Err(Error::InvalidParameter("facet ratios need dimension at least 2".into()));
    }
    let isop_k = isop(p)?;
    let mut per_facet = Vec::with_capacity(p.facets().len());
    for (i, f) in p.facets().iter().enumerate() {
        let face = p.facet_polytope(i);
        let boundary = face.boundary_measure();
        let measure = p.facet_measure(i);
        let d = (p.dim() - 1) as f64;
        let v = boundary.value / (d * measure.value);
        let tol = v * (boundary.tol / boundary.value.max(f64::MIN_POSITIVE) + measure.tol / measure.value) + 1e-15 * v;
        let fi = ApproxScalar::with_tol(v, tol);
        let r = fi.value / isop_k.value;
        let ratio = ApproxScalar::with_tol(r, r * (fi.tol / fi.value + isop_k.tol / isop_k.value));
        per_facet.push(FacetIsop { facet: i, normal: f.primitive_normal.clone(), isop: fi, ratio });
    }
    let mut witness = 0;
    for (i, f) in per_facet.iter().enumerate() {
        if f.ratio.value > per_facet[witness].ratio.value {
            witness = i;
        }
    }
    let max_ratio = per_facet[witness].ratio;
    Ok(IsopReport { isop_k, per_facet, max_ratio, witness })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Excluded,
    Boundary,
    Inconclusive,
}

pub fn classify(ratio: f64, tol: f64) -> Verdict {
    if ratio > 1.0 + tol {
        Verdict::Excluded
    } else if ratio >= 1.0 - tol {
        Verdict::Boundary
    } else {
        Verdict::Inconclusive
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExcludingCheck {
    pub verdict: Verdict,
    pub max_ratio: ApproxScalar,
    pub witness: usize,
    #[serde(serialize_with = "crate::scalar::serde_bigint_vec::serialize")]
    pub witness_normal: Vec<num_bigint::BigInt>,
    pub tol: f64,
}

/// A facet with `Isop(F) > Isop(K)` excludes `K`; anything else is
/// inconclusive, since the condition is only sufficient.
pub fn excluding_check(p: &VPolytope, tol: f64) -> Result<ExcludingCheck> {
    let r = facet_ratios(p)?;
    Ok(ExcludingCheck {
        verdict: classify(r.max_ratio.value, tol),
        max_ratio: r.max_ratio,
        witness: r.witness,
        witness_normal: r.witness_normal().to_vec(),
        tol,
    })
}

#[derive(Clone, Debug)]
struct Ridge {
    other: usize,
    measure: f64,
}

/// Float evaluator of `max_F Isop(TF)/Isop(TK)` over linear maps `T`.
///
/// Measures transform by the generalized Nanson formula: a face whose
/// normal space is spanned by `N` satisfies
/// `|T R| = |det T| · |∧ T^{-T} N| / |∧ N| · |R|`.
#[derive(Clone, Debug)]
pub struct RatioModel {
    dim: usize,
    normals: Vec<Vec<f64>>,
    measures: Vec<f64>,
    ridges: Vec<Vec<Ridge>>,
    volume: f64,
}

impl RatioModel {
    pub fn new(p: &VPolytope) -> Result<Self> {
        if !p.is_full_dimensional() || p.dim() < 2 {
            return Err(Error::Degenerate("ratio model needs a full-dimensional body in dimension ≥ 2".into()));
        }
        let n = p.dim();
        let facets = p.facets();
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); p.vertices().len()];
        for (i, f) in facets.iter().enumerate() {
            for &v in &f.vertex_indices {
                incident[v].push(i);
            }
        }
        let mut ridges = vec![Vec::new(); facets.len()];
        for (i, f) in facets.iter().enumerate() {
            let mut shared: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
            for &v in &f.vertex_indices {
                for &g in &incident[v] {
                    if g != i {
                        shared.entry(g).or_default().push(v);
                    }
                }
            }
            for (g, verts) in shared {
                if verts.len() + 1 < n {
                    continue;
                }
                let pts: Vec<Vector> = verts.iter().map(|&v| p[v].clone()).collect();
                let ridge = convex_hull(&pts)?;
                if ridge.affine_dim() + 2 == n {
                    ridges[i].push(Ridge { other: g, measure: ridge.intrinsic_volume().value });
                }
            }
        }
        Ok(RatioModel {
            dim: n,
            normals: facets
                .iter()
                .map(|f| f.primitive_normal.iter().map(|x| to_f64(&Scalar::from_integer(x.clone()))).collect())
                .collect(),
            measures: (0..facets.len()).map(|i| p.facet_measure(i).value).collect(),
            ridges,
            volume: to_f64(&p.volume()?),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `(max ratio, facet index)` for the body `T P`.
    pub fn evaluate(&self, t: &[Vec<f64>]) -> Option<(f64, usize)> {
        let n = self.dim;
        let det = linalg::det_f64(t.to_vec()).abs();
        let inv = linalg::inverse_f64(t)?;
        // rows of T^{-T} applied to a: (T^{-T} a)_i = Σ_j inv[j][i] a_j
        let mapped: Vec<Vec<f64>> = self
            .normals
            .iter()
            .map(|a| (0..n).map(|i| (0..n).map(|j| inv[j][i] * a[j]).sum()).collect())
            .collect();
        let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let facet_measure: Vec<f64> = (0..self.normals.len())
            .map(|i| det * norm(&mapped[i]) / norm(&self.normals[i]) * self.measures[i])
            .collect();
        let surface: f64 = facet_measure.iter().sum();
        let isop_k = surface / (n as f64 * det * self.volume);
        let mut best = (f64::NEG_INFINITY, 0);
        for (i, rs) in self.ridges.iter().enumerate() {
            let mut boundary = 0.0;
            for r in rs {
                let g_t = linalg::gram_det_f64(&[mapped[i].clone(), mapped[r.other].clone()]).max(0.0);
                let g_0 = linalg::gram_det_f64(&[self.normals[i].clone(), self.normals[r.other].clone()]);
                boundary += det * (g_t / g_0).sqrt() * r.measure;
            }
            let isop_f = boundary / ((n - 1) as f64 * facet_measure[i]);
            let ratio = isop_f / isop_k;
            if ratio > best.0 {
                best = (ratio, i);
            }
        }
        best.0.is_finite().then_some(best)
    }
}

/// Facet isop ratios of `T P` recomputed by the exact pipeline.
pub fn exact_max_ratio(p: &VPolytope, t: &crate::polytope::AffineMap) -> Result<IsopReport> {
    facet_ratios(&p.affine_image(t)?)
}

/// `Isop(C) ≥ κ_d^{1/d} / |C|^{1/d}`, the isoperimetric inequality in Isop
/// form; returns the lower bound for a body of intrinsic dimension `d`.
pub fn isoperimetric_lower_bound(d: usize, volume: f64) -> f64 {
    let kappa = crate::special::kappa(d).to_f64();
    (kappa / volume).powf(1.0 / d as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::AffineMap;
    use crate::scalar::int;

    fn cube() -> VPolytope {
        VPolytope::from_int_points(&[
            &[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 0], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1],
        ])
        .unwrap()
    }

    fn simplex() -> VPolytope {
        VPolytope::from_int_points(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap()
    }

    fn octahedron() -> VPolytope {
        VPolytope::from_int_points(&[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, -1, 0], &[0, 0, 1], &[0, 0, -1]])
            .unwrap()
    }

    #[test]
    fn surface_measures() {
        let s = surface_measure(&cube()).unwrap();
        assert_eq!(s.atoms.len(), 6);
        assert!(s.atoms.iter().all(|a| (a.weight.value - 1.0).abs() < 1e-12));
        let mut w: Vec<f64> = surface_measure(&simplex()).unwrap().atoms.iter().map(|a| a.weight.value).collect();
        w.sort_by(f64::total_cmp);
        assert!((w[3] - 3f64.sqrt() / 2.0).abs() < 1e-12 && (w[0] - 0.5).abs() < 1e-12);
        assert!(surface_measure(&simplex()).unwrap().closedness_defect() < 1e-12);
    }

    #[test]
    fn isop_examples() {
        assert!((isop(&cube()).unwrap().value - 2.0).abs() < 1e-12);
        assert!((isop(&simplex()).unwrap().value - (3.0 + 3f64.sqrt())).abs() < 1e-12);
        let seg = VPolytope::from_int_points(&[&[0, 0], &[3, 0]]).unwrap();
        assert!(isop(&seg).is_err());
        assert!((intrinsic_isop(&seg).unwrap().value - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn embedded_facets_preserve_measure() {
        let sq = embed_facet(&cube(), 0).unwrap();
        assert_eq!(sq.dim(), 2);
        assert!((to_f64(&sq.volume().unwrap()) - 1.0).abs() < 1e-12);
        let tri = embed_facet(&octahedron(), 3).unwrap();
        assert_eq!(tri.vertices().len(), 3);
        assert!((to_f64(&tri.volume().unwrap()) - 3f64.sqrt() / 2.0).abs() < 1e-12);
        let e = tri.vertices();
        let d: f64 = e[0].sub(&e[1]).to_f64().iter().map(|x| x * x).sum();
        assert!((d - 2.0).abs() < 1e-12);
    }

    #[test]
    fn facet_ratio_examples() {
        assert!((facet_ratios(&cube()).unwrap().max_ratio.value - 1.0).abs() < 1e-12);
        let boxed = cube().affine_image(&AffineMap::diagonal(&[int(2), int(1), int(1)]).unwrap()).unwrap();
        let r = facet_ratios(&boxed).unwrap();
        assert!((r.isop_k.value - 5.0 / 3.0).abs() < 1e-12);
        assert!((r.max_ratio.value - 1.2).abs() < 1e-12);
        assert_eq!(num_traits::Signed::abs(&r.witness_normal()[0]), 1.into());
        assert!((facet_ratios(&octahedron()).unwrap().max_ratio.value - 2f64.sqrt()).abs() < 1e-12);
        let expected = (2.0 + 2f64.sqrt()) / (3.0 + 3f64.sqrt());
        assert!((facet_ratios(&simplex()).unwrap().max_ratio.value - expected).abs() < 1e-12);
    }

    #[test]
    fn excluding_verdicts() {
        let boxed = cube().affine_image(&AffineMap::diagonal(&[int(2), int(1), int(1)]).unwrap()).unwrap();
        assert_eq!(excluding_check(&boxed, EXCLUDING_TOL).unwrap().verdict, Verdict::Excluded);
        assert_eq!(excluding_check(&cube(), EXCLUDING_TOL).unwrap().verdict, Verdict::Boundary);
        assert_eq!(excluding_check(&simplex(), EXCLUDING_TOL).unwrap().verdict, Verdict::Inconclusive);
        let cyl = VPolytope::from_int_points(&[
            &[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 0], &[0, 0, 2], &[1, 0, 2], &[0, 1, 2], &[1, 1, 2],
        ])
        .unwrap();
        let c = excluding_check(&cyl, EXCLUDING_TOL).unwrap();
        assert_eq!(c.verdict, Verdict::Excluded);
        assert!((c.max_ratio.value - 1.2).abs() < 1e-12);
    }

    #[test]
    fn ratio_model_matches_exact_pipeline() {
        let p = VPolytope::from_int_points(&[&[0, 0, 0], &[3, 1, 0], &[1, 4, 1], &[0, 1, 5], &[2, 2, 2], &[4, 0, 3]])
            .unwrap();
        let model = RatioModel::new(&p).unwrap();
        let t = vec![vec![1.5, 0.25, 0.0], vec![0.25, 0.75, -0.5], vec![0.0, -0.5, 2.0]];
        let (fast, _) = model.evaluate(&t).unwrap();
        let map = AffineMap::linear(t.iter().map(|r| r.iter().map(|&x| from_f64(x).unwrap()).collect()).collect())
            .unwrap();
        let exact = exact_max_ratio(&p, &map).unwrap().max_ratio.value;
        assert!((fast - exact).abs() < 1e-10 * exact);
        let id = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
        let (r0, _) = model.evaluate(&id).unwrap();
        assert!((r0 - facet_ratios(&p).unwrap().max_ratio.value).abs() < 1e-10);
    }
}
