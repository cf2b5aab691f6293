use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polytope::{convex_hull, VPolytope, Vector};
use crate::scalar::{from_f64, int, Scalar};

/// Dyadic precision used to round sphere points to rationals.
const SPHERE_BITS: i32 = 24;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BodyKind {
    Cube { n: usize },
    Box { sides: Vec<String> },
    CrossPolytope { n: usize },
    CornerSimplex { n: usize },
    RegularSimplex { n: usize },
    Ball { n: usize, res: usize },
    HalfBall { n: usize, res: usize },
}

pub fn make_body(kind: &BodyKind) -> Result<VPolytope> {
    match kind {
        BodyKind::Cube { n } => cube(*n),
        BodyKind::Box { sides } => {
            let s: Vec<Scalar> = sides.iter().map(|x| crate::scalar::parse_scalar(x)).collect::<Result<_>>()?;
            box_body(&s)
        }
        BodyKind::CrossPolytope { n } => cross_polytope(*n),
        BodyKind::CornerSimplex { n } => corner_simplex(*n),
        BodyKind::RegularSimplex { n } => regular_simplex(*n),
        BodyKind::Ball { n, res } => ball(*n, *res),
        BodyKind::HalfBall { n, res } => half_ball(*n, *res),
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidParameter("dimension must be positive".into()))
    } else {
        Ok(())
    }
}

/// `[0,1]^n`.
pub fn cube(n: usize) -> Result<VPolytope> {
    box_body(&vec![int(1); n])
}

/// `[0,a_1] × ... × [0,a_n]`.
pub fn box_body(sides: &[Scalar]) -> Result<VPolytope> {
    check_dim(sides.len())?;
    if sides.iter().any(|s| *s <= Scalar::zero()) {
        return Err(Error::InvalidParameter("box sides must be positive".into()));
    }
    let n = sides.len();
    let pts: Vec<Vector> = (0..1usize << n)
        .map(|mask| Vector((0..n).map(|i| if mask >> i & 1 == 1 { sides[i].clone() } else { Scalar::zero() }).collect()))
        .collect();
    convex_hull(&pts)
}

/// `conv(±e_i)`.
pub fn cross_polytope(n: usize) -> Result<VPolytope> {
    check_dim(n)?;
    let mut pts = Vec::with_capacity(2 * n);
    for i in 0..n {
        pts.push(Vector::unit(n, i));
        pts.push(Vector::unit(n, i).scale(&int(-1)));
    }
    convex_hull(&pts)
}

/// `conv(0, e_1, ..., e_n)`.
pub fn corner_simplex(n: usize) -> Result<VPolytope> {
    check_dim(n)?;
    let mut pts = vec![Vector::zeros(n)];
    pts.extend((0..n).map(|i| Vector::unit(n, i)));
    convex_hull(&pts)
}

/// `conv(e_1, ..., e_{n+1}) ⊂ R^{n+1}` mapped isometrically into `R^n`
/// with the Helmert basis; edge length `√2`, coordinates approximate.
pub fn regular_simplex(n: usize) -> Result<VPolytope> {
    check_dim(n)?;
    let pts = (0..=n)
        .map(|i| {
            let coords = (1..=n)
                .map(|k| {
                    let s = ((k * (k + 1)) as f64).sqrt();
                    let c = if i < k {
                        1.0 / s
                    } else if i == k {
                        -(k as f64) / s
                    } else {
                        0.0
                    };
                    from_f64(c)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Vector(coords))
        })
        .collect::<Result<Vec<_>>>()?;
    convex_hull(&pts)
}

/// `L × [0, t]` for a full-dimensional `L ⊂ R^{n-1}`.
pub fn cylinder(base: &VPolytope, t: &Scalar) -> Result<VPolytope> {
    if *t <= Scalar::zero() {
        return Err(Error::InvalidParameter("cylinder height must be positive".into()));
    }
    let mut pts = Vec::with_capacity(2 * base.vertices().len());
    for v in base.vertices() {
        for h in [Scalar::zero(), t.clone()] {
            let mut c = v.0.clone();
            c.push(h);
            pts.push(Vector(c));
        }
    }
    convex_hull(&pts)
}

/// Roughly `count` unit vectors spread over `S^{n-1}`.
fn sphere_grid(n: usize, count: usize) -> Vec<Vec<f64>> {
    match n {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..count)
            .map(|i| {
                let a = 2.0 * PI * i as f64 / count as f64;
                vec![a.cos(), a.sin()]
            })
            .collect(),
        3 => {
            let golden = PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|i| {
                    let z = 1.0 - (2 * i + 1) as f64 / count as f64;
                    let r = (1.0 - z * z).sqrt();
                    let phi = golden * i as f64;
                    vec![r * phi.cos(), r * phi.sin(), z]
                })
                .collect()
        }
        _ => {
            // boundary points of the cube lattice {-m..m}^n, normalized
            let mut m = 1i64;
            while (2 * m + 1).pow(n as u32) - (2 * m - 1).pow(n as u32) < count as i64 {
                m += 1;
            }
            let side = (2 * m + 1) as usize;
            let mut out = Vec::new();
            for idx in 0..side.pow(n as u32) {
                let mut rest = idx;
                let p: Vec<i64> = (0..n)
                    .map(|_| {
                        let c = (rest % side) as i64 - m;
                        rest /= side;
                        c
                    })
                    .collect();
                if p.iter().any(|c| c.abs() == m) {
                    let norm = p.iter().map(|&c| (c * c) as f64).sum::<f64>().sqrt();
                    out.push(p.iter().map(|&c| c as f64 / norm).collect());
                }
            }
            out
        }
    }
}

/// Rounds a point of the unit sphere to a dyadic rational inside the closed
/// unit ball.
fn round_inward(p: &[f64]) -> Option<Vector> {
    let n = p.len() as f64;
    let unit = 2f64.powi(SPHERE_BITS);
    let shrink = 1.0 - n.sqrt() / unit;
    let v = Vector(
        p.iter()
            .map(|x| Scalar::new(BigInt::from((x * shrink * unit).round() as i64), BigInt::from(unit as i64)))
            .collect(),
    );
    (v.norm_sq() <= Scalar::one()).then_some(v)
}

/// Inscribed polytope of the unit ball from about `res` sphere points.
pub fn ball(n: usize, res: usize) -> Result<VPolytope> {
    check_dim(n)?;
    if res < n + 1 {
        return Err(Error::InvalidParameter(format!("ball resolution must be at least {}", n + 1)));
    }
    let pts: Vec<Vector> = sphere_grid(n, res).iter().filter_map(|p| round_inward(p)).collect();
    convex_hull(&pts)
}

/// Inscribed polytope of `{x ∈ B : x_1 ≤ 0}`, flat facet normal `e_1`.
pub fn half_ball(n: usize, res: usize) -> Result<VPolytope> {
    let mut u = vec![BigInt::zero(); n];
    if n > 0 {
        u[0] = BigInt::one();
    }
    half_ball_with_normal(&u, res)
}

/// Inscribed polytope of `{x ∈ B : <x, u> ≤ 0}`: sphere points strictly on
/// the negative side (from a grid of `4·res` points) together with a ring
/// of `res` points lying exactly on `u^⊥`, so the flat facet has outer
/// normal `u`.
pub fn half_ball_with_normal(u: &[BigInt], res: usize) -> Result<VPolytope> {
    let n = u.len();
    if n < 2 {
        return Err(Error::InvalidParameter("half ball needs dimension at least 2".into()));
    }
    if u.iter().all(|x| x.is_zero()) {
        return Err(Error::InvalidParameter("zero normal".into()));
    }
    if res < n {
        return Err(Error::InvalidParameter(format!("half ball resolution must be at least {n}")));
    }
    let ur = Vector::from_bigints(u);
    let uf = ur.to_f64();
    let unorm = uf.iter().map(|x| x * x).sum::<f64>().sqrt();
    let uhat: Vec<f64> = uf.iter().map(|x| x / unorm).collect();

    let mut pts: Vec<Vector> = sphere_grid(n, 4 * res)
        .iter()
        .filter_map(|p| round_inward(p))
        .filter(|p| p.dot_int(u) < Scalar::zero())
        .collect();

    // orthonormal frame of u^⊥ by Gram–Schmidt against û
    let mut frame: Vec<Vec<f64>> = Vec::new();
    for i in 0..n {
        let mut w: Vec<f64> = (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect();
        for _ in 0..2 {
            for e in std::iter::once(&uhat).chain(frame.iter()) {
                let c: f64 = w.iter().zip(e).map(|(a, b)| a * b).sum();
                w.iter_mut().zip(e).for_each(|(a, b)| *a -= c * b);
            }
        }
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 && frame.len() + 1 < n {
            frame.push(w.into_iter().map(|x| x / norm).collect());
        }
    }
    let u_sq = ur.norm_sq();
    for q in sphere_grid(n - 1, res) {
        let p: Vec<f64> = (0..n).map(|j| frame.iter().zip(&q).map(|(e, c)| e[j] * c).sum()).collect();
        if let Some(r) = round_inward(&p) {
            // exact orthogonal projection onto u^⊥ only shortens r
            let s = r.dot_int(u) / &u_sq;
            pts.push(r.sub(&ur.scale(&s)));
        }
    }
    convex_hull(&pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, to_f64};

    #[test]
    fn simplices() {
        assert_eq!(corner_simplex(3).unwrap().volume().unwrap(), ratio(1, 6));
        let t = regular_simplex(3).unwrap();
        assert!((to_f64(&t.volume().unwrap()) - 1.0 / 3.0).abs() < 1e-9);
        let v = t.vertices();
        let d: f64 = v[0].sub(&v[1]).to_f64().iter().map(|x| x * x).sum();
        assert!((d - 2.0).abs() < 1e-12);
    }

    #[test]
    fn cross_polytope_facets() {
        let o = cross_polytope(3).unwrap();
        assert_eq!(o.facets().len(), 8);
        for i in 0..8 {
            assert!((o.facet_measure(i).value - 3f64.sqrt() / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn half_ball_volume_and_flat_facet() {
        let m = half_ball(3, 200).unwrap();
        let v = to_f64(&m.volume().unwrap());
        let target = 2.0 * PI / 3.0;
        assert!(v < target && v > 0.98 * target, "volume {v}");
        let e1 = [1, 0, 0].map(BigInt::from);
        let flat = m.facet_index(&e1).expect("flat facet");
        assert_eq!(m.facets()[flat].offset, Scalar::zero());
        for p in m.vertices() {
            assert!(p.norm_sq() <= Scalar::one());
        }
    }

    #[test]
    fn tilted_half_ball() {
        let u = [1, 1, 0].map(BigInt::from);
        let m = half_ball_with_normal(&u, 60).unwrap();
        let f = m.facet_index(&u).expect("flat facet");
        assert!((m.facet_measure(f).value - PI).abs() < 0.05 * PI);
    }

    #[test]
    fn balls_are_inscribed() {
        for n in 2..=4 {
            let b = ball(n, 60).unwrap();
            assert!(b.is_full_dimensional());
            assert!(to_f64(&b.volume().unwrap()) < super::super::kappa(n).to_f64());
        }
    }

    #[test]
    fn cylinder_over_square() {
        let c = cylinder(&cube(2).unwrap(), &int(2)).unwrap();
        assert_eq!(c.volume().unwrap(), int(2));
        assert!(cylinder(&cube(2).unwrap(), &int(0)).is_err());
    }
}
