//! Exact incremental convex hull of integer points (beneath-beyond with
//! outside sets). Orientation tests run on a float filter first and fall back
//! to exact integer arithmetic when the filter cannot decide.
//!
//! The engine expects deduplicated, full-dimensional input; lower-dimensional
//! sets are handled by the caller through a coordinate chart.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::linalg::{cross_int, dot_int, primitive, rank_int};

pub(crate) struct RawFacet {
    pub normal: Vec<BigInt>,
    pub offset: BigInt,
    /// Simplices (d point indices each) triangulating the facet.
    pub pieces: Vec<Vec<usize>>,
}

pub(crate) struct RawHull {
    pub extreme: Vec<usize>,
    pub facets: Vec<RawFacet>,
}

/// Greedy affinely independent subset, far points first. The first entry is
/// always index 0.
pub(crate) fn affine_basis(points: &[Vec<BigInt>]) -> Vec<usize> {
    if points.is_empty() {
        return Vec::new();
    }
    let d = points[0].len();
    let (fpts, _) = scaled_floats(points);
    let mut chosen = vec![0usize];
    // exact echelon rows of the chosen difference vectors
    let mut echelon: Vec<(usize, Vec<BigInt>)> = Vec::new();
    // float orthonormal basis of the chosen directions
    let mut ortho: Vec<Vec<f64>> = Vec::new();
    while chosen.len() <= d {
        let origin = &fpts[0];
        let mut cands: Vec<(f64, usize)> = fpts
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, p)| {
                let mut r: Vec<f64> = p.iter().zip(origin).map(|(a, b)| a - b).collect();
                for q in &ortho {
                    let t: f64 = r.iter().zip(q).map(|(a, b)| a * b).sum();
                    for (x, y) in r.iter_mut().zip(q) {
                        *x -= t * y;
                    }
                }
                (r.iter().map(|x| x * x).sum::<f64>(), i)
            })
            .collect();
        cands.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut found = None;
        for &(_, i) in &cands {
            let diff: Vec<BigInt> = points[i].iter().zip(&points[0]).map(|(a, b)| a - b).collect();
            if let Some(reduced) = reduce_against(&echelon, diff) {
                found = Some((i, reduced));
                break;
            }
        }
        let Some((i, reduced)) = found else { break };
        let pivot = reduced.iter().position(|x| !x.is_zero()).unwrap();
        echelon.push((pivot, reduced));
        chosen.push(i);
        let mut r: Vec<f64> = fpts[i].iter().zip(&fpts[0]).map(|(a, b)| a - b).collect();
        for q in &ortho {
            let t: f64 = r.iter().zip(q).map(|(a, b)| a * b).sum();
            for (x, y) in r.iter_mut().zip(q) {
                *x -= t * y;
            }
        }
        let nrm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nrm > 0.0 {
            ortho.push(r.into_iter().map(|x| x / nrm).collect());
        }
    }
    chosen
}

/// Reduces `v` against integer echelon rows; `None` when it becomes zero.
fn reduce_against(echelon: &[(usize, Vec<BigInt>)], mut v: Vec<BigInt>) -> Option<Vec<BigInt>> {
    for (p, row) in echelon {
        if v[*p].is_zero() {
            continue;
        }
        let a = row[*p].clone();
        let b = v[*p].clone();
        for (x, y) in v.iter_mut().zip(row) {
            *x = &*x * &a - &b * y;
        }
        v = primitive(v);
    }
    if v.iter().all(Zero::is_zero) {
        None
    } else {
        Some(v)
    }
}

fn bits(x: &BigInt) -> u64 {
    x.bits()
}

fn shifted_f64(x: &BigInt, shift: u64) -> f64 {
    if shift == 0 {
        x.to_f64().unwrap_or(0.0)
    } else {
        (x >> shift as usize).to_f64().unwrap_or(0.0)
    }
}

/// Points as floats scaled by a common power of two so magnitudes stay in range.
fn scaled_floats(points: &[Vec<BigInt>]) -> (Vec<Vec<f64>>, u64) {
    let maxbits = points.iter().flat_map(|p| p.iter().map(bits)).max().unwrap_or(0);
    let shift = maxbits.saturating_sub(62);
    let f = points
        .iter()
        .map(|p| p.iter().map(|x| shifted_f64(x, shift)).collect())
        .collect();
    (f, shift)
}

struct Facet {
    verts: Vec<usize>,
    normal: Vec<BigInt>,
    offset: BigInt,
    fnormal: Vec<f64>,
    foffset: f64,
    fbound: f64,
    neighbors: Vec<usize>,
    outside: Vec<usize>,
    alive: bool,
}

struct Engine<'a> {
    d: usize,
    pts: &'a [Vec<BigInt>],
    fpts: Vec<Vec<f64>>,
    pshift: u64,
    pmax: f64,
    interior_sum: Vec<BigInt>,
    interior_weight: BigInt,
    facets: Vec<Facet>,
}

impl<'a> Engine<'a> {
    fn make_facet(&self, verts: Vec<usize>) -> Facet {
        let base = &self.pts[verts[0]];
        let rows: Vec<Vec<BigInt>> = verts[1..]
            .iter()
            .map(|&v| self.pts[v].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        let mut normal = primitive(cross_int(&rows));
        debug_assert!(normal.iter().any(|x| !x.is_zero()), "degenerate facet");
        let mut offset = dot_int(&normal, base);
        let probe = dot_int(&normal, &self.interior_sum) - &offset * &self.interior_weight;
        if probe.is_positive() {
            normal = normal.into_iter().map(|x| -x).collect();
            offset = -offset;
        }
        let nshift = normal.iter().map(bits).max().unwrap_or(0).saturating_sub(62);
        let fnormal: Vec<f64> = normal.iter().map(|x| shifted_f64(x, nshift)).collect();
        let foffset = shifted_f64(&offset, nshift + self.pshift);
        let fbound = fnormal.iter().map(|x| x.abs()).sum::<f64>() * self.pmax + foffset.abs();
        Facet {
            neighbors: vec![usize::MAX; verts.len()],
            verts,
            normal,
            offset,
            fnormal,
            foffset,
            fbound,
            outside: Vec::new(),
            alive: true,
        }
    }

    /// Float distance proxy; only meaningful for comparing points against one facet.
    fn fdist(&self, f: &Facet, p: usize) -> f64 {
        f.fnormal.iter().zip(&self.fpts[p]).map(|(a, x)| a * x).sum::<f64>() - f.foffset
    }

    fn side(&self, f: &Facet, p: usize) -> Ordering {
        let s = self.fdist(f, p);
        let eps = f.fbound * 1e-11;
        if s.is_finite() && eps.is_finite() {
            if s > eps {
                return Ordering::Greater;
            }
            if s < -eps {
                return Ordering::Less;
            }
        }
        (dot_int(&f.normal, &self.pts[p]) - &f.offset).cmp(&BigInt::zero())
    }
}

/// Hull of deduplicated full-dimensional integer points in `Z^d`, `d >= 1`.
pub(crate) fn hull(points: &[Vec<BigInt>]) -> RawHull {
    let d = points[0].len();
    if d == 1 {
        return hull_1d(points);
    }
    let basis = affine_basis(points);
    assert_eq!(basis.len(), d + 1, "hull engine requires full-dimensional input");

    let (fpts, pshift) = scaled_floats(points);
    let pmax = fpts.iter().flat_map(|p| p.iter().map(|x| x.abs())).fold(0.0, f64::max);
    let mut interior_sum = vec![BigInt::zero(); d];
    for &i in &basis {
        for (s, x) in interior_sum.iter_mut().zip(&points[i]) {
            *s += x;
        }
    }
    let mut eng = Engine {
        d,
        pts: points,
        fpts,
        pshift,
        pmax,
        interior_sum,
        interior_weight: BigInt::from(d + 1),
        facets: Vec::new(),
    };

    // initial simplex: facet i omits basis[i]
    for i in 0..=d {
        let verts: Vec<usize> = basis.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect();
        let f = eng.make_facet(verts);
        eng.facets.push(f);
    }
    for i in 0..=d {
        for k in 0..d {
            let v = eng.facets[i].verts[k];
            let j = basis.iter().position(|&b| b == v).unwrap();
            eng.facets[i].neighbors[k] = j;
        }
    }

    let mut in_basis = vec![false; points.len()];
    for &b in &basis {
        in_basis[b] = true;
    }
    for p in 0..points.len() {
        if in_basis[p] {
            continue;
        }
        for fi in 0..eng.facets.len() {
            if eng.side(&eng.facets[fi], p) == Ordering::Greater {
                eng.facets[fi].outside.push(p);
                break;
            }
        }
    }

    let mut pending: Vec<usize> = (0..eng.facets.len()).filter(|&i| !eng.facets[i].outside.is_empty()).collect();
    let mut stamp: Vec<usize> = vec![0; eng.facets.len()];
    let mut visible_mark: Vec<usize> = vec![0; eng.facets.len()];
    let mut round = 0usize;

    while let Some(fi) = pending.pop() {
        if !eng.facets[fi].alive || eng.facets[fi].outside.is_empty() {
            continue;
        }
        round += 1;
        let apex = {
            let f = &eng.facets[fi];
            *f.outside
                .iter()
                .max_by(|&&a, &&b| eng.fdist(f, a).total_cmp(&eng.fdist(f, b)).then(b.cmp(&a)))
                .unwrap()
        };

        // visible region by breadth-first search over facet adjacency
        let mut visible = vec![fi];
        stamp[fi] = round;
        visible_mark[fi] = round;
        let mut head = 0;
        while head < visible.len() {
            let f = visible[head];
            head += 1;
            for k in 0..d {
                let g = eng.facets[f].neighbors[k];
                if stamp[g] == round {
                    continue;
                }
                stamp[g] = round;
                if eng.side(&eng.facets[g], apex) == Ordering::Greater {
                    visible_mark[g] = round;
                    visible.push(g);
                }
            }
        }

        let mut new_ids = Vec::new();
        let mut ridge_map: HashMap<Vec<usize>, (usize, usize)> = HashMap::new();
        for &f in &visible {
            for k in 0..d {
                let g = eng.facets[f].neighbors[k];
                if visible_mark[g] == round {
                    continue;
                }
                let mut verts = eng.facets[f].verts.clone();
                verts[k] = apex;
                let mut nf = eng.make_facet(verts);
                nf.neighbors[k] = g;
                let id = eng.facets.len();
                let slot = eng.facets[g].neighbors.iter().position(|&x| x == f).unwrap();
                eng.facets[g].neighbors[slot] = id;
                for i in 0..d {
                    if i == k {
                        continue;
                    }
                    let mut key: Vec<usize> =
                        nf.verts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect();
                    key.sort_unstable();
                    if let Some((other, oslot)) = ridge_map.remove(&key) {
                        nf.neighbors[i] = other;
                        eng.facets[other].neighbors[oslot] = id;
                    } else {
                        ridge_map.insert(key, (id, i));
                    }
                }
                eng.facets.push(nf);
                stamp.push(0);
                visible_mark.push(0);
                new_ids.push(id);
            }
        }
        debug_assert!(ridge_map.is_empty(), "unmatched ridges in horizon");

        let mut orphans = Vec::new();
        for &f in &visible {
            eng.facets[f].alive = false;
            orphans.append(&mut eng.facets[f].outside);
        }
        for p in orphans {
            if p == apex {
                continue;
            }
            for &nf in &new_ids {
                if eng.side(&eng.facets[nf], p) == Ordering::Greater {
                    eng.facets[nf].outside.push(p);
                    break;
                }
            }
        }
        for &nf in &new_ids {
            if !eng.facets[nf].outside.is_empty() {
                pending.push(nf);
            }
        }
    }

    finish(eng)
}

fn finish(eng: Engine<'_>) -> RawHull {
    let d = eng.d;
    let mut groups: HashMap<Vec<BigInt>, usize> = HashMap::new();
    let mut facets: Vec<RawFacet> = Vec::new();
    let mut incident: HashMap<usize, Vec<usize>> = HashMap::new();
    for f in eng.facets.into_iter().filter(|f| f.alive) {
        let gi = *groups.entry(f.normal.clone()).or_insert_with(|| {
            facets.push(RawFacet { normal: f.normal.clone(), offset: f.offset.clone(), pieces: Vec::new() });
            facets.len() - 1
        });
        for &v in &f.verts {
            let e = incident.entry(v).or_default();
            if !e.contains(&gi) {
                e.push(gi);
            }
        }
        facets[gi].pieces.push(f.verts);
    }
    let mut extreme: Vec<usize> = incident
        .into_iter()
        .filter(|(_, fs)| {
            fs.len() >= d && {
                let normals: Vec<Vec<BigInt>> = fs.iter().map(|&g| facets[g].normal.clone()).collect();
                rank_int(&normals) == d
            }
        })
        .map(|(v, _)| v)
        .collect();
    extreme.sort_unstable();
    RawHull { extreme, facets }
}

fn hull_1d(points: &[Vec<BigInt>]) -> RawHull {
    let lo = (0..points.len()).min_by(|&a, &b| points[a][0].cmp(&points[b][0])).unwrap();
    let hi = (0..points.len()).max_by(|&a, &b| points[a][0].cmp(&points[b][0])).unwrap();
    assert_ne!(lo, hi, "hull engine requires full-dimensional input");
    let mut extreme = vec![lo, hi];
    extreme.sort_unstable();
    RawHull {
        extreme,
        facets: vec![
            RawFacet { normal: vec![BigInt::from(-1)], offset: -points[lo][0].clone(), pieces: vec![vec![lo]] },
            RawFacet { normal: vec![BigInt::from(1)], offset: points[hi][0].clone(), pieces: vec![vec![hi]] },
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[&[i64]]) -> Vec<Vec<BigInt>> {
        let mut p: Vec<Vec<BigInt>> = v.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        p.sort();
        p.dedup();
        p
    }

    #[test]
    fn square_with_interior_and_edge_points() {
        let p = pts(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2], &[1, 1], &[1, 0], &[2, 1]]);
        let h = hull(&p);
        assert_eq!(h.extreme.len(), 4);
        assert_eq!(h.facets.len(), 4);
    }

    #[test]
    fn cube_faces_merge_coplanar_pieces() {
        let mut v = Vec::new();
        for x in 0..=2 {
            for y in 0..=2 {
                for z in 0..=2 {
                    v.push(vec![x, y, z]);
                }
            }
        }
        let refs: Vec<&[i64]> = v.iter().map(|r| r.as_slice()).collect();
        let p = pts(&refs);
        let h = hull(&p);
        assert_eq!(h.extreme.len(), 8);
        assert_eq!(h.facets.len(), 6);
        for f in &h.facets {
            assert_eq!(f.normal.iter().filter(|x| !x.is_zero()).count(), 1);
        }
    }

    #[test]
    fn affine_basis_detects_rank() {
        let p = pts(&[&[0, 0, 0], &[1, 1, 0], &[2, 2, 0], &[1, 0, 0]]);
        assert_eq!(affine_basis(&p).len(), 3);
    }
}
