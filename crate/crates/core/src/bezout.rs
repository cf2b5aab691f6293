//! The bilinear form `F_K(A,B) = V(A,K[n-1])V(B,K[n-1]) - V(A,B,K[n-2])V(K)`,
//! Bezout ratios and segment-pair lower bounds for `b_2(K)`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, primitive, sign_normalized};
use crate::mixed::{mixed_volume, segment_mixed_volume_exact};
use crate::polytope::{VPolytope, Vector};
use crate::scalar::{serde_scalar, serde_scalar_opt, Scalar};

#[derive(Clone, Debug, Serialize)]
pub struct BezoutWitness {
    pub a: String,
    pub b: String,
    #[serde(with = "serde_scalar")]
    pub v_ab: Scalar,
    #[serde(with = "serde_scalar")]
    pub v_a: Scalar,
    #[serde(with = "serde_scalar")]
    pub v_b: Scalar,
    #[serde(with = "serde_scalar")]
    pub v_k: Scalar,
    #[serde(with = "serde_scalar")]
    pub f_value: Scalar,
    /// `None` when `v_a·v_b = 0`.
    #[serde(serialize_with = "serde_scalar_opt::serialize")]
    pub ratio: Option<Scalar>,
}

impl BezoutWitness {
    fn from_values(a: String, b: String, v_ab: Scalar, v_a: Scalar, v_b: Scalar, v_k: Scalar) -> Self {
        let f_value = &v_a * &v_b - &v_ab * &v_k;
        let den = &v_a * &v_b;
        let ratio = (!den.is_zero()).then(|| &v_ab * &v_k / den);
        BezoutWitness { a, b, v_ab, v_a, v_b, v_k, f_value, ratio }
    }
}

fn check(a: &VPolytope, b: &VPolytope, k: &VPolytope) -> Result<usize> {
    let n = k.dim();
    for body in [a, b] {
        if body.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: body.dim() });
        }
    }
    if n < 2 {
        return Err(Error::InvalidParameter("the Bezout form needs n ≥ 2".into()));
    }
    if !k.is_full_dimensional() {
        return Err(Error::Degenerate("K must be full-dimensional".into()));
    }
    Ok(n)
}

/// All four mixed volumes by inclusion–exclusion, exact.
pub fn bezout_form(a: &VPolytope, b: &VPolytope, k: &VPolytope) -> Result<BezoutWitness> {
    let n = check(a, b, k)?;
    let mut ab: Vec<&VPolytope> = vec![a, b];
    ab.extend(std::iter::repeat_n(k, n - 2));
    let mut only_a: Vec<&VPolytope> = vec![a];
    only_a.extend(std::iter::repeat_n(k, n - 1));
    let mut only_b: Vec<&VPolytope> = vec![b];
    only_b.extend(std::iter::repeat_n(k, n - 1));
    let v_ab = mixed_volume(&ab)?;
    let v_a = mixed_volume(&only_a)?;
    let v_b = mixed_volume(&only_b)?;
    let v_k = k.volume()?;
    Ok(BezoutWitness::from_values(crate::mixed::describe(a), crate::mixed::describe(b), v_ab, v_a, v_b, v_k))
}

/// `V(L1,L2,K[n-2]) V(K) / (V(L1,K[n-1]) V(L2,K[n-1]))`, or `None` when the
/// denominator vanishes.
pub fn bezout_ratio(l1: &VPolytope, l2: &VPolytope, k: &VPolytope) -> Result<Option<Scalar>> {
    Ok(bezout_form(l1, l2, k)?.ratio)
}

pub fn segment(u: &[BigInt]) -> VPolytope {
    let n = u.len();
    crate::polytope::convex_hull(&[Vector::zeros(n), Vector::from_bigints(u)]).expect("two points")
}

/// Exact witness for the segments `[0,u]`, `[0,v]` through the segment
/// projection formulas.
pub fn segment_witness(u: &[BigInt], v: &[BigInt], k: &VPolytope) -> Result<BezoutWitness> {
    let n = k.dim();
    let (uu, vv) = (Vector::from_bigints(u), Vector::from_bigints(v));
    let v_a = segment_mixed_volume_exact(std::slice::from_ref(&uu), k)?;
    let v_b = segment_mixed_volume_exact(std::slice::from_ref(&vv), k)?;
    let rows = vec![uu.0.clone(), vv.0.clone()];
    let v_ab = if linalg::rank(&rows) < 2 {
        Scalar::zero()
    } else if n == 2 {
        linalg::det(rows).abs() / Scalar::from_integer(BigInt::from(2))
    } else {
        segment_mixed_volume_exact(&[uu, vv], k)?
    };
    Ok(BezoutWitness::from_values(fmt_dir(u), fmt_dir(v), v_ab, v_a, v_b, k.volume()?))
}

fn fmt_dir(u: &[BigInt]) -> String {
    let parts: Vec<String> = u.iter().map(|x| x.to_string()).collect();
    format!("[0,({})]", parts.join(","))
}

/// Primitive integer directions in `{-m..m}^n`, one per line through the
/// origin (first nonzero entry positive), in descending lexicographic order.
pub fn direction_grid(n: usize, m: i64) -> Vec<Vec<BigInt>> {
    let side = (2 * m + 1) as usize;
    let mut out: Vec<Vec<i64>> = Vec::new();
    for idx in 0..side.pow(n as u32) {
        let mut rest = idx;
        let mut p = vec![0i64; n];
        for c in p.iter_mut().rev() {
            *c = (rest % side) as i64 - m;
            rest /= side;
        }
        let first = p.iter().find(|&&c| c != 0);
        if first.is_none_or(|&c| c < 0) {
            continue;
        }
        let g = p.iter().fold(0i64, |g, &c| num_integer::gcd(g, c));
        if g == 1 {
            out.push(p);
        }
    }
    out.sort_by(|a, b| b.cmp(a));
    out.into_iter().map(|p| p.into_iter().map(BigInt::from).collect()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct B2Bound {
    #[serde(serialize_with = "crate::scalar::serde_bigint_vec::serialize")]
    pub u: Vec<BigInt>,
    #[serde(serialize_with = "crate::scalar::serde_bigint_vec::serialize")]
    pub v: Vec<BigInt>,
    /// Certified by inclusion–exclusion on the returned pair.
    pub witness: BezoutWitness,
    pub grid: i64,
    pub pairs_evaluated: usize,
    pub refinement_evaluations: usize,
    /// Largest ratio over every evaluated pair, exact.
    #[serde(with = "serde_scalar")]
    pub max_ratio_seen: Scalar,
    /// Every evaluated ratio is at most 2.
    pub fenchel_ok: bool,
    pub seed: u64,
}

/// Maximizes the Bezout ratio over pairs of grid segments, then refines the
/// best pairs by seeded integer perturbations while the budget lasts.
///
/// Ties keep the earliest pair in grid order; the winner is re-evaluated by
/// inclusion–exclusion.
pub fn b2_lower_bound(k: &VPolytope, grid: i64, budget: usize, seed: u64) -> Result<B2Bound> {
    let n = k.dim();
    if n < 2 || !k.is_full_dimensional() {
        return Err(Error::Degenerate("b_2 search needs a full-dimensional body in dimension ≥ 2".into()));
    }
    if grid < 1 {
        return Err(Error::InvalidParameter("grid resolution must be at least 1".into()));
    }
    let dirs = direction_grid(n, grid);
    let pairs: Vec<(usize, usize)> =
        (0..dirs.len()).flat_map(|i| (i + 1..dirs.len()).map(move |j| (i, j))).collect();
    let ratios: Vec<Scalar> = pairs
        .par_iter()
        .map(|&(i, j)| pair_ratio(&dirs[i], &dirs[j], k))
        .collect::<Result<_>>()?;

    let two = Scalar::from_integer(BigInt::from(2));
    let mut max_seen = Scalar::zero();
    let mut best = 0;
    for (idx, r) in ratios.iter().enumerate() {
        if *r > ratios[best] {
            best = idx;
        }
        if *r > max_seen {
            max_seen = r.clone();
        }
    }
    let (mut bu, mut bv) = (dirs[pairs[best].0].clone(), dirs[pairs[best].1].clone());
    let mut best_ratio = ratios[best].clone();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut used = 0;
    while used < budget {
        let batch: Vec<(Vec<BigInt>, Vec<BigInt>)> = (0..budget.saturating_sub(used).min(16))
            .map(|_| (perturb(&bu, &mut rng), perturb(&bv, &mut rng)))
            .collect();
        used += batch.len();
        let scored: Vec<Scalar> =
            batch.par_iter().map(|(u, v)| pair_ratio(u, v, k)).collect::<Result<_>>()?;
        for ((u, v), r) in batch.into_iter().zip(scored) {
            if r > max_seen {
                max_seen = r.clone();
            }
            if r > best_ratio {
                best_ratio = r;
                bu = u;
                bv = v;
            }
        }
    }

    let witness = bezout_form(&segment(&bu), &segment(&bv), k)?;
    debug_assert_eq!(witness.ratio.as_ref(), Some(&best_ratio));
    Ok(B2Bound {
        u: bu,
        v: bv,
        witness,
        grid,
        pairs_evaluated: pairs.len(),
        refinement_evaluations: used,
        fenchel_ok: max_seen <= two,
        max_ratio_seen: max_seen,
        seed,
    })
}

fn pair_ratio(u: &[BigInt], v: &[BigInt], k: &VPolytope) -> Result<Scalar> {
    Ok(segment_witness(u, v, k)?.ratio.unwrap_or_else(Scalar::zero))
}

/// Doubles the direction and nudges each coordinate by -1, 0 or 1.
fn perturb(u: &[BigInt], rng: &mut ChaCha8Rng) -> Vec<BigInt> {
    loop {
        let w: Vec<BigInt> = u.iter().map(|x| x * BigInt::from(2) + BigInt::from(rng.gen_range(-1i64..=1))).collect();
        if w.iter().any(|x| !x.is_zero()) {
            return sign_normalized(primitive(w));
        }
    }
}

pub fn is_negative(w: &BezoutWitness) -> bool {
    w.f_value.is_negative()
}

pub fn ratio_exceeds_one(w: &BezoutWitness) -> bool {
    w.ratio.as_ref().is_some_and(|r| *r > Scalar::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};
    use crate::special::{corner_simplex, cross_polytope, cube};

    fn dir(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn form_vanishes_on_the_diagonal() {
        let s = corner_simplex(3).unwrap();
        let w = bezout_form(&s, &s, &s).unwrap();
        assert!(w.f_value.is_zero());
        assert_eq!(w.ratio, Some(int(1)));
    }

    #[test]
    fn octahedron_diagonal_pair() {
        let o = cross_polytope(3).unwrap();
        let w = bezout_form(&segment(&dir(&[1, 1, 0])), &segment(&dir(&[1, -1, 0])), &o).unwrap();
        assert_eq!(w.v_k, ratio(4, 3));
        assert_eq!(w.v_ab, ratio(2, 3));
        assert_eq!(w.v_a, ratio(2, 3));
        assert_eq!(w.ratio, Some(int(2)));
        assert!(is_negative(&w));
        let fast = segment_witness(&dir(&[1, 1, 0]), &dir(&[1, -1, 0]), &o).unwrap();
        assert_eq!((fast.v_ab, fast.v_a, fast.v_b), (w.v_ab, w.v_a, w.v_b));
    }

    #[test]
    fn octahedron_axis_pair() {
        let o = cross_polytope(3).unwrap();
        let w = bezout_form(&segment(&dir(&[1, 0, 0])), &segment(&dir(&[0, 1, 0])), &o).unwrap();
        assert_eq!(w.v_a, ratio(2, 3));
        assert_eq!(w.v_ab * &w.v_k, ratio(4, 9));
        assert_eq!(w.ratio, Some(int(1)));
    }

    #[test]
    fn grid_has_one_direction_per_line() {
        let g = direction_grid(3, 1);
        assert_eq!(g.len(), 13);
        assert_eq!(g[0], dir(&[1, 1, 1]));
        assert_eq!(direction_grid(2, 2).len(), 8);
    }

    #[test]
    fn octahedron_lower_bound() {
        let o = cross_polytope(3).unwrap();
        let b = b2_lower_bound(&o, 1, 0, 7).unwrap();
        assert_eq!(b.witness.ratio, Some(int(2)));
        assert_eq!((b.u.clone(), b.v.clone()), (dir(&[1, 1, 0]), dir(&[1, -1, 0])));
        assert!(b.fenchel_ok);
    }

    #[test]
    fn cube_and_simplex_bounds() {
        let c = cube(3).unwrap();
        assert!(ratio_exceeds_one(&b2_lower_bound(&c, 1, 16, 1).unwrap().witness));
        let s = corner_simplex(3).unwrap();
        let b = b2_lower_bound(&s, 2, 16, 1).unwrap();
        assert!(b.max_ratio_seen <= int(1));
    }
}
