//! Mixed volumes by inclusion–exclusion (exact), by the surface-area
//! measure, and by iterated segment projection.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, gram_det};
use crate::polytope::{VPolytope, Vector};
use crate::scalar::{binomial, factorial, sqrt_f64, to_f64, ApproxScalar, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    InclusionExclusion,
    SurfaceMeasure,
    SegmentProjection,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::InclusionExclusion => "inclusion_exclusion",
            Method::SurfaceMeasure => "surface_measure",
            Method::SegmentProjection => "segment_projection",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MixedValue {
    Exact(Scalar),
    Approx(ApproxScalar),
}

impl MixedValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            MixedValue::Exact(x) => to_f64(x),
            MixedValue::Approx(a) => a.value,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MixedVolumeResult {
    pub value: MixedValue,
    pub method: Method,
    pub bodies: Vec<String>,
}

fn check_bodies(bodies: &[&VPolytope]) -> Result<usize> {
    let n = bodies.first().ok_or(Error::Empty("mixed volume of no bodies"))?.dim();
    if let Some(b) = bodies.iter().find(|b| b.dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: b.dim() });
    }
    if bodies.len() != n {
        return Err(Error::WrongCount { expected: n, found: bodies.len() });
    }
    Ok(n)
}

/// Groups equal bodies so repeated arguments share their Minkowski sums.
fn group(bodies: &[&VPolytope]) -> (Vec<VPolytope>, Vec<usize>) {
    let mut distinct: Vec<VPolytope> = Vec::new();
    let mut mult = Vec::new();
    for b in bodies {
        match distinct.iter().position(|d| d == *b) {
            Some(i) => mult[i] += 1,
            None => {
                distinct.push((*b).clone());
                mult.push(1);
            }
        }
    }
    (distinct, mult)
}

fn volume_or_zero(p: &VPolytope) -> Scalar {
    if p.is_full_dimensional() {
        p.volume().expect("full-dimensional")
    } else {
        Scalar::zero()
    }
}

/// `V(K_1, ..., K_n) = (1/n!) Σ_J (-1)^{n-|J|} |Σ_{i∈J} K_i|`, exact.
///
/// Subsets are enumerated by multiplicity vectors over the distinct bodies;
/// each sum is built from its parent with the last component dilated.
pub fn mixed_volume(bodies: &[&VPolytope]) -> Result<Scalar> {
    let n = check_bodies(bodies)?;
    let (distinct, mult) = group(bodies);
    let m = distinct.len();

    let mut counts: Vec<Vec<usize>> = vec![vec![]];
    for &mj in &mult {
        counts = counts
            .into_iter()
            .flat_map(|c| {
                (0..=mj).map(move |k| {
                    let mut c = c.clone();
                    c.push(k);
                    c
                })
            })
            .collect();
    }
    counts.retain(|c| c.iter().any(|&k| k > 0));

    let support = |c: &Vec<usize>| c.iter().filter(|&&k| k > 0).count();
    let mut sums: HashMap<Vec<usize>, VPolytope> = HashMap::new();
    for level in 1..=m {
        let layer: Vec<&Vec<usize>> = counts.iter().filter(|c| support(c) == level).collect();
        let built: Vec<(Vec<usize>, VPolytope)> = layer
            .par_iter()
            .map(|c| {
                let last = c.iter().rposition(|&k| k > 0).expect("nonzero count");
                let part = distinct[last].dilate(&Scalar::from_integer(BigInt::from(c[last]))).expect("positive");
                let body = if level == 1 {
                    part
                } else {
                    let mut parent = (*c).clone();
                    parent[last] = 0;
                    sums[&parent].minkowski_sum(&part).expect("same dimension")
                };
                ((*c).clone(), body)
            })
            .collect();
        sums.extend(built);
    }

    let terms: Vec<Scalar> = counts
        .par_iter()
        .map(|c| {
            let size: usize = c.iter().sum();
            let mut coeff = BigInt::one();
            for (k, mj) in c.iter().zip(&mult) {
                coeff *= binomial(*mj, *k);
            }
            let v = volume_or_zero(&sums[c]) * Scalar::from_integer(coeff);
            if (n - size) % 2 == 1 {
                -v
            } else {
                v
            }
        })
        .collect();
    let total: Scalar = terms.into_iter().sum();
    Ok(total / Scalar::from_integer(factorial(n)))
}

/// `V(L, K[n-1]) = (1/n) Σ_u h_L(u) |K^u|` over unit facet normals of `K`.
pub fn first_mixed_volume(l: &VPolytope, k: &VPolytope) -> Result<ApproxScalar> {
    if l.dim() != k.dim() {
        return Err(Error::DimensionMismatch { expected: k.dim(), found: l.dim() });
    }
    if !k.is_full_dimensional() {
        return Err(Error::Degenerate("surface-measure route needs a full-dimensional body".into()));
    }
    let n = k.dim() as f64;
    let (mut v, mut tol) = (0.0, 0.0);
    for (i, f) in k.facets().iter().enumerate() {
        let h = to_f64(&l.support_int(&f.primitive_normal)) / sqrt_f64(&Scalar::from_integer(f.normal_norm_sq()));
        let m = k.facet_measure(i);
        v += h * m.value;
        tol += h.abs() * m.tol + 1e-15 * (h * m.value).abs();
    }
    Ok(ApproxScalar::with_tol(v / n, tol / n))
}

/// `V([0,u_1], ..., [0,u_k], K[n-k]) = (n-k)!/n! · sqrt(Gram(u)) · |π_U K|_{n-k}`.
pub fn segment_mixed_volume(directions: &[Vector], k: &VPolytope) -> Result<ApproxScalar> {
    let n = k.dim();
    let kk = directions.len();
    if kk == 0 || kk > n {
        return Err(Error::InvalidParameter(format!("need 1..={n} segment directions, got {kk}")));
    }
    let rows: Vec<Vec<Scalar>> = directions.iter().map(|d| d.0.clone()).collect();
    if let Some(d) = directions.iter().find(|d| d.dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: d.dim() });
    }
    if linalg::rank(&rows) != kk {
        return Err(Error::DependentDirections);
    }
    let g = gram_det(&rows);
    let (coord_volume, basis_gram) = if kk == n {
        (Scalar::one(), Scalar::one())
    } else {
        let p = k.project_out(directions)?;
        (p.coordinate_volume(), p.gram)
    };
    let coeff = coord_volume * Scalar::new(factorial(n - kk), factorial(n));
    let v = to_f64(&coeff) * sqrt_f64(&(g * basis_gram));
    Ok(ApproxScalar::with_tol(v, 1e-14 * v.abs()))
}

/// Exact form of [`segment_mixed_volume`]. With `B` spanning the
/// complement of `U`, `sqrt(Gram(U)·det(B^T B)) = |det[U; B]|`, so the
/// square root disappears.
pub fn segment_mixed_volume_exact(directions: &[Vector], k: &VPolytope) -> Result<Scalar> {
    let n = k.dim();
    let kk = directions.len();
    let rows: Vec<Vec<Scalar>> = directions.iter().map(|d| d.0.clone()).collect();
    if kk == 0 || kk > n || linalg::rank(&rows) != kk {
        return Err(Error::DependentDirections);
    }
    let mut frame = rows;
    let coord_volume = if kk == n {
        Scalar::one()
    } else {
        let p = k.project_out(directions)?;
        frame.extend(p.basis.iter().map(|b| b.0.clone()));
        p.coordinate_volume()
    };
    let det = linalg::det(frame).abs();
    Ok(coord_volume * det * Scalar::new(factorial(n - kk), factorial(n)))
}

/// Mixed volume of `n-1` bodies lying in hyperplanes orthogonal to
/// `normal`, measured intrinsically in that hyperplane.
pub fn hyperplane_mixed_volume(normal: &[BigInt], bodies: &[&VPolytope]) -> Result<ApproxScalar> {
    let n = normal.len();
    let k = normal.iter().rposition(|x| !x.is_zero()).ok_or(Error::InvalidParameter("zero normal".into()))?;
    let dropped: Vec<VPolytope> = bodies
        .iter()
        .map(|b| {
            if b.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: b.dim() });
            }
            let pts: Vec<Vector> = b
                .vertices()
                .iter()
                .map(|v| Vector(v.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, x)| x.clone()).collect()))
                .collect();
            crate::polytope::convex_hull(&pts)
        })
        .collect::<Result<_>>()?;
    let refs: Vec<&VPolytope> = dropped.iter().collect();
    let shadow = mixed_volume(&refs)?;
    let ak = Scalar::from_integer(normal[k].abs());
    let scale = sqrt_f64(&Scalar::from_integer(linalg::norm_sq_int(normal))) / to_f64(&ak);
    let v = to_f64(&shadow) * scale;
    Ok(ApproxScalar::with_tol(v, 1e-14 * v.abs()))
}

/// Direction of a segment body, or `None` if the body is not a segment.
pub fn segment_direction(b: &VPolytope) -> Option<Vector> {
    (b.affine_dim() == 1).then(|| b.vertices()[1].sub(&b.vertices()[0]))
}

#[derive(Clone, Debug)]
pub struct CrossValidation {
    pub results: Vec<MixedVolumeResult>,
    /// Largest pairwise difference relative to the exact value (absolute
    /// when the exact value is zero).
    pub max_discrepancy: f64,
}

/// Which methods accept the argument list.
pub fn applicable_methods(bodies: &[&VPolytope]) -> Vec<Method> {
    let mut out = vec![Method::InclusionExclusion];
    if sam_split(bodies).is_some() {
        out.push(Method::SurfaceMeasure);
    }
    if segment_split(bodies).is_some() {
        out.push(Method::SegmentProjection);
    }
    out
}

/// `(L, K)` when the list is `L, K, ..., K` up to order with `K` full-dimensional.
fn sam_split<'a>(bodies: &[&'a VPolytope]) -> Option<(&'a VPolytope, &'a VPolytope)> {
    let n = bodies.len();
    for i in 0..n {
        let k = bodies[(i + 1) % n];
        if k.is_full_dimensional() && (0..n).filter(|&j| j != i).all(|j| bodies[j] == k) {
            return Some((bodies[i], k));
        }
    }
    None
}

/// Segment directions plus the repeated body (if any).
fn segment_split<'a>(bodies: &[&'a VPolytope]) -> Option<(Vec<Vector>, Option<&'a VPolytope>)> {
    let mut dirs = Vec::new();
    let mut rest: Vec<&VPolytope> = Vec::new();
    for b in bodies {
        match segment_direction(b) {
            Some(d) if rest.is_empty() || **b != *rest[0] => dirs.push(d),
            _ => rest.push(b),
        }
    }
    if dirs.is_empty() || rest.iter().any(|b| *b != rest[0]) {
        return None;
    }
    let rows: Vec<Vec<Scalar>> = dirs.iter().map(|d| d.0.clone()).collect();
    if linalg::rank(&rows) != dirs.len() {
        return None;
    }
    Some((dirs, rest.first().copied()))
}

pub fn compute(bodies: &[&VPolytope], method: Method) -> Result<MixedVolumeResult> {
    check_bodies(bodies)?;
    let names = bodies.iter().map(|b| describe(b)).collect();
    let value = match method {
        Method::InclusionExclusion => MixedValue::Exact(mixed_volume(bodies)?),
        Method::SurfaceMeasure => {
            let (l, k) = sam_split(bodies).ok_or_else(|| {
                Error::InvalidParameter("surface-measure route needs arguments (L, K, ..., K)".into())
            })?;
            MixedValue::Approx(first_mixed_volume(l, k)?)
        }
        Method::SegmentProjection => {
            let (dirs, k) = segment_split(bodies).ok_or_else(|| {
                Error::InvalidParameter("segment route needs independent segments plus copies of one body".into())
            })?;
            match k {
                Some(k) => MixedValue::Approx(segment_mixed_volume(&dirs, k)?),
                None => {
                    let n = bodies.len();
                    let det = linalg::det(dirs.iter().map(|d| d.0.clone()).collect()).abs();
                    MixedValue::Exact(det / Scalar::from_integer(factorial(n)))
                }
            }
        }
    };
    Ok(MixedVolumeResult { value, method, bodies: names })
}

pub fn cross_validate(bodies: &[&VPolytope]) -> Result<CrossValidation> {
    let results: Vec<MixedVolumeResult> =
        applicable_methods(bodies).into_iter().map(|m| compute(bodies, m)).collect::<Result<_>>()?;
    let exact = results[0].value.to_f64();
    let scale = if exact == 0.0 { 1.0 } else { exact.abs() };
    let mut max_discrepancy: f64 = 0.0;
    for a in &results {
        for b in &results {
            max_discrepancy = max_discrepancy.max((a.value.to_f64() - b.value.to_f64()).abs() / scale);
        }
    }
    Ok(CrossValidation { results, max_discrepancy })
}

pub fn describe(b: &VPolytope) -> String {
    format!("{}-dim polytope in R^{} with {} vertices", b.affine_dim(), b.dim(), b.vertices().len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn cube() -> VPolytope {
        VPolytope::from_int_points(&[
            &[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 0], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1],
        ])
        .unwrap()
    }

    fn seg(v: &[i64]) -> VPolytope {
        VPolytope::from_int_points(&[&[0, 0, 0], v]).unwrap()
    }

    fn octahedron() -> VPolytope {
        VPolytope::from_int_points(&[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, -1, 0], &[0, 0, 1], &[0, 0, -1]])
            .unwrap()
    }

    fn simplex() -> VPolytope {
        VPolytope::from_int_points(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap()
    }

    #[test]
    fn inclusion_exclusion_examples() {
        let c = cube();
        assert_eq!(mixed_volume(&[&c, &c, &c]).unwrap(), int(1));
        let (a, b, d) = (seg(&[1, 0, 0]), seg(&[0, 1, 0]), seg(&[0, 0, 1]));
        assert_eq!(mixed_volume(&[&a, &b, &d]).unwrap(), ratio(1, 6));
        assert_eq!(mixed_volume(&[&a, &c, &c]).unwrap(), ratio(1, 3));
        assert!(matches!(mixed_volume(&[&a]), Err(Error::WrongCount { .. })));
    }

    #[test]
    fn surface_measure_route() {
        let c = cube();
        assert!(first_mixed_volume(&c, &c).unwrap().approx_eq(1.0));
        assert!((first_mixed_volume(&seg(&[1, 0, 0]), &c).unwrap().value - 1.0 / 3.0).abs() < 1e-9);
        let s = simplex();
        let exact = to_f64(&mixed_volume(&[&s, &c, &c]).unwrap());
        assert!((first_mixed_volume(&s, &c).unwrap().value - exact).abs() < 1e-9);
    }

    #[test]
    fn segment_route() {
        let c = cube();
        let e1 = Vector::from_ints(&[1, 0, 0]);
        assert!((segment_mixed_volume(&[e1], &c).unwrap().value - 1.0 / 3.0).abs() < 1e-12);
        // (2!/3!)·|(1,1,0)×(1,-1,0)|·(length 2 of the shadow) / 2! = 2/3
        let dirs = [Vector::from_ints(&[1, 1, 0]), Vector::from_ints(&[1, -1, 0])];
        let v = segment_mixed_volume(&dirs, &octahedron()).unwrap();
        assert!((v.value - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(segment_mixed_volume_exact(&dirs, &octahedron()).unwrap(), ratio(2, 3));
        let o = octahedron();
        let ie = mixed_volume(&[&seg(&[1, 1, 0]), &seg(&[1, -1, 0]), &o]).unwrap();
        assert_eq!(ie, ratio(2, 3));
        let units = [Vector::unit(3, 0), Vector::unit(3, 1), Vector::unit(3, 2)];
        assert!((segment_mixed_volume(&units, &c).unwrap().value - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn cross_validation_examples() {
        let c = cube();
        let a = seg(&[1, 0, 0]);
        let r = cross_validate(&[&a, &c, &c]).unwrap();
        assert_eq!(r.results.len(), 3);
        assert!(r.max_discrepancy <= 1e-9);
        let s = simplex();
        let r = cross_validate(&[&s, &s, &s]).unwrap();
        assert_eq!(r.results.len(), 2);
        assert!(r.max_discrepancy <= 1e-9);
        let o = octahedron();
        assert_eq!(mixed_volume(&[&c, &o, &s]).unwrap(), mixed_volume(&[&s, &c, &o]).unwrap());
    }

    #[test]
    fn hyperplane_mixed_volume_of_squares() {
        // Two unit squares in parallel planes x = 0 and x = 1.
        let sq0 = VPolytope::from_int_points(&[&[0, 0, 0], &[0, 1, 0], &[0, 0, 1], &[0, 1, 1]]).unwrap();
        let sq1 = sq0.translate(&Vector::from_ints(&[1, 0, 0]));
        let e1 = [1, 0, 0].map(BigInt::from);
        assert!(hyperplane_mixed_volume(&e1, &[&sq0, &sq1]).unwrap().approx_eq(1.0));
    }
}
