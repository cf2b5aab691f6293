//! Exact V-polytopes: hulls, volumes, facet measures, Minkowski sums,
//! support functions, projections and affine images.

use std::fmt;
use std::ops::{Deref, Index};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hull;
use crate::linalg::{self, dot, gram_det, rref};
use crate::scalar::{factorial, sqrt_f64, to_f64, ApproxScalar, Scalar};

/// A point or direction with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vector(pub Vec<Scalar>);

impl Vector {
    pub fn new(coords: Vec<Scalar>) -> Self {
        Vector(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![Scalar::zero(); dim])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Vector(v.iter().map(|&x| Scalar::from_integer(BigInt::from(x))).collect())
    }

    pub fn from_bigints(v: &[BigInt]) -> Self {
        Vector(v.iter().map(|x| Scalar::from_integer(x.clone())).collect())
    }

    /// `e_i` in dimension `dim`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Vector::zeros(dim);
        v.0[i] = Scalar::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn add(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Scalar) -> Vector {
        Vector(self.0.iter().map(|a| a * s).collect())
    }

    pub fn dot(&self, other: &[Scalar]) -> Scalar {
        dot(&self.0, other)
    }

    pub fn dot_int(&self, other: &[BigInt]) -> Scalar {
        self.0.iter().zip(other).map(|(a, b)| a * Scalar::from_integer(b.clone())).sum()
    }

    pub fn norm_sq(&self) -> Scalar {
        dot(&self.0, &self.0)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(to_f64).collect()
    }
}

impl Deref for Vector {
    type Target = [Scalar];
    fn deref(&self) -> &[Scalar] {
        &self.0
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(crate::scalar::format_scalar).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A facet of a full-dimensional polytope, `{x in P : <x, a> = offset}`.
#[derive(Clone, Debug)]
pub struct Facet {
    /// Outer normal as a gcd-reduced integer vector.
    pub primitive_normal: Vec<BigInt>,
    /// `h_P(primitive_normal)`.
    pub offset: Scalar,
    /// Indices into the owning polytope's vertex list.
    pub vertex_indices: Vec<usize>,
    pieces: Vec<Vec<usize>>,
    measure: OnceLock<f64>,
}

impl Facet {
    pub fn unit_normal(&self) -> Vec<f64> {
        let v: Vec<f64> = self.primitive_normal.iter().map(|x| to_f64(&Scalar::from_integer(x.clone()))).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.into_iter().map(|x| x / n).collect()
    }

    pub fn normal_norm_sq(&self) -> BigInt {
        linalg::norm_sq_int(&self.primitive_normal)
    }

    /// Simplices triangulating the facet, as indices into
    /// [`VPolytope::triangulation_points`].
    pub fn pieces(&self) -> &[Vec<usize>] {
        &self.pieces
    }
}

#[derive(Clone, Debug)]
struct Chart {
    origin: Vector,
    coords: Vec<usize>,
    directions: Vec<Vector>,
    gram: Scalar,
    inner: VPolytope,
}

impl Chart {
    fn lift(&self, c: &Vector) -> Vector {
        let mut x = self.origin.clone();
        for (i, dir) in self.directions.iter().enumerate() {
            let t = &c[i] - &self.origin[self.coords[i]];
            x = x.add(&dir.scale(&t));
        }
        x
    }
}

/// Convex hull of finitely many rational points.
///
/// Vertices are the extreme points in lexicographic order. Full-dimensional
/// polytopes carry their facets; lower-dimensional ones carry a coordinate
/// chart onto their affine hull.
#[derive(Clone, Debug)]
pub struct VPolytope {
    dim: usize,
    vertices: Vec<Vector>,
    affine_dim: usize,
    facets: Vec<Facet>,
    aux: Vec<Vector>,
    chart: Option<Box<Chart>>,
}

impl PartialEq for VPolytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}

impl Eq for VPolytope {}

pub fn convex_hull(points: &[Vector]) -> Result<VPolytope> {
    let first = points.first().ok_or(Error::Empty("convex hull of no points"))?;
    let n = first.dim();
    if n == 0 {
        return Err(Error::Degenerate("zero-dimensional ambient space".into()));
    }
    if let Some(p) = points.iter().find(|p| p.dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: p.dim() });
    }
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    let ints = to_integer_points(&pts);
    let basis = hull::affine_basis(&ints.0);
    let r = basis.len() - 1;
    if r == n {
        Ok(full_hull(pts, &ints.0, &ints.1))
    } else if r == 0 {
        Ok(VPolytope { dim: n, vertices: pts, affine_dim: 0, facets: Vec::new(), aux: Vec::new(), chart: None })
    } else {
        lower_hull(pts, &basis)
    }
}

/// Scales rational points by the lcm of their denominators.
fn to_integer_points(pts: &[Vector]) -> (Vec<Vec<BigInt>>, BigInt) {
    let l = pts.iter().flat_map(|p| p.iter()).fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints = pts
        .iter()
        .map(|p| p.iter().map(|x| x.numer() * (&l / x.denom())).collect())
        .collect();
    (ints, l)
}

fn full_hull(pts: Vec<Vector>, ints: &[Vec<BigInt>], scale: &BigInt) -> VPolytope {
    let raw = hull::hull(ints);
    let mut index = vec![usize::MAX; pts.len()];
    let mut vertices = Vec::with_capacity(raw.extreme.len());
    for &e in &raw.extreme {
        index[e] = vertices.len();
        vertices.push(pts[e].clone());
    }
    let mut aux = Vec::new();
    let nv = vertices.len();
    for f in &raw.facets {
        for piece in &f.pieces {
            for &p in piece {
                if index[p] == usize::MAX {
                    index[p] = nv + aux.len();
                    aux.push(pts[p].clone());
                }
            }
        }
    }
    let mut facets: Vec<Facet> = raw
        .facets
        .into_iter()
        .map(|f| {
            let pieces: Vec<Vec<usize>> = f.pieces.iter().map(|pc| pc.iter().map(|&p| index[p]).collect()).collect();
            let mut vi: Vec<usize> = pieces.iter().flatten().copied().filter(|&i| i < nv).collect();
            vi.sort_unstable();
            vi.dedup();
            Facet {
                primitive_normal: f.normal,
                offset: Scalar::new(f.offset, scale.clone()),
                vertex_indices: vi,
                pieces,
                measure: OnceLock::new(),
            }
        })
        .collect();
    facets.sort_by(|a, b| a.primitive_normal.cmp(&b.primitive_normal));
    let dim = vertices[0].dim();
    VPolytope { dim, vertices, affine_dim: dim, facets, aux, chart: None }
}

fn lower_hull(pts: Vec<Vector>, basis: &[usize]) -> Result<VPolytope> {
    let n = pts[0].dim();
    let origin = pts[basis[0]].clone();
    let dirs: Vec<Vec<Scalar>> = basis[1..].iter().map(|&b| pts[b].sub(&origin).0).collect();
    let (rows, coords) = rref(dirs);
    let directions: Vec<Vector> = rows.into_iter().map(Vector).collect();
    let gram = gram_det(&directions.iter().map(|d| d.0.clone()).collect::<Vec<_>>());
    let projected: Vec<Vector> = pts.iter().map(|p| Vector(coords.iter().map(|&c| p[c].clone()).collect())).collect();
    let inner = convex_hull(&projected)?;
    let chart = Chart { origin, coords, directions, gram, inner };
    let mut vertices: Vec<Vector> = chart.inner.vertices.iter().map(|c| chart.lift(c)).collect();
    vertices.sort();
    let affine_dim = chart.directions.len();
    Ok(VPolytope { dim: n, vertices, affine_dim, facets: Vec::new(), aux: Vec::new(), chart: Some(Box::new(chart)) })
}

fn simplex_measure(points: &[&Vector]) -> f64 {
    let edges: Vec<Vec<Scalar>> = points[1..].iter().map(|p| p.sub(points[0]).0).collect();
    let k = edges.len();
    let g = gram_det(&edges);
    sqrt_f64(&g) / to_f64(&Scalar::from_integer(factorial(k)))
}

impl VPolytope {
    pub fn from_points(points: &[Vector]) -> Result<Self> {
        convex_hull(points)
    }

    /// Convenience constructor from integer coordinates.
    pub fn from_int_points(points: &[&[i64]]) -> Result<Self> {
        convex_hull(&points.iter().map(|p| Vector::from_ints(p)).collect::<Vec<_>>())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == self.dim
    }

    pub fn is_simplex(&self) -> bool {
        self.vertices.len() == self.affine_dim + 1
    }

    /// Facets, sorted by primitive normal. Empty unless full-dimensional.
    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Vertices followed by the non-extreme boundary points used by the
    /// facet triangulations.
    pub fn triangulation_points(&self) -> impl Iterator<Item = &Vector> + '_ {
        self.vertices.iter().chain(self.aux.iter())
    }

    fn point(&self, i: usize) -> &Vector {
        if i < self.vertices.len() {
            &self.vertices[i]
        } else {
            &self.aux[i - self.vertices.len()]
        }
    }

    pub fn facet_index(&self, normal: &[BigInt]) -> Option<usize> {
        self.facets.binary_search_by(|f| f.primitive_normal.as_slice().cmp(normal)).ok()
    }

    pub fn facet_normals(&self) -> Vec<Vec<BigInt>> {
        self.facets.iter().map(|f| f.primitive_normal.clone()).collect()
    }

    fn require_full(&self, what: &str) -> Result<()> {
        if self.is_full_dimensional() {
            Ok(())
        } else {
            Err(Error::Degenerate(format!(
                "{what} needs a full-dimensional body (affine dimension {} in R^{})",
                self.affine_dim, self.dim
            )))
        }
    }

    /// Exact volume by coning the facet triangulations from the first vertex.
    pub fn volume(&self) -> Result<Scalar> {
        self.require_full("volume")?;
        let n = self.dim;
        let apex = &self.vertices[0];
        let pts: Vec<Vector> = self.triangulation_points().map(|p| p.sub(apex)).collect();
        let (ints, l) = to_integer_points(&pts);
        let mut total = BigInt::zero();
        for f in &self.facets {
            if f.vertex_indices.first() == Some(&0) {
                continue;
            }
            for piece in &f.pieces {
                let m: Vec<Vec<BigInt>> = piece.iter().map(|&i| ints[i].clone()).collect();
                total += linalg::det_int(m).abs();
            }
        }
        let denom = num_traits::pow(l, n) * factorial(n);
        Ok(Scalar::new(total, denom))
    }

    /// (n-1)-measure of facet `i`: one Gram determinant and one square root
    /// per simplex of its triangulation.
    pub fn facet_measure(&self, i: usize) -> ApproxScalar {
        let f = &self.facets[i];
        let v = *f.measure.get_or_init(|| {
            f.pieces
                .iter()
                .map(|pc| simplex_measure(&pc.iter().map(|&j| self.point(j)).collect::<Vec<_>>()))
                .sum()
        });
        ApproxScalar::with_tol(v, 1e-12 * v.max(1.0) * f.pieces.len() as f64)
    }

    pub fn surface_area(&self) -> Result<ApproxScalar> {
        self.require_full("surface area")?;
        let (mut v, mut tol) = (0.0, 0.0);
        for i in 0..self.facets.len() {
            let m = self.facet_measure(i);
            v += m.value;
            tol += m.tol;
        }
        Ok(ApproxScalar::with_tol(v, tol))
    }

    /// d-dimensional measure for a d-dimensional polytope sitting in R^n.
    pub fn intrinsic_volume(&self) -> ApproxScalar {
        match (&self.chart, self.affine_dim) {
            (_, 0) => ApproxScalar::with_tol(1.0, 0.0),
            (None, _) => {
                let v = to_f64(&self.volume().expect("full-dimensional"));
                ApproxScalar::with_tol(v, 1e-15 * v)
            }
            (Some(c), _) => {
                let v = to_f64(&c.inner.volume().expect("chart hull is full-dimensional")) * sqrt_f64(&c.gram);
                ApproxScalar::with_tol(v, 1e-13 * v)
            }
        }
    }

    /// (d-1)-dimensional measure of the relative boundary.
    pub fn boundary_measure(&self) -> ApproxScalar {
        match (&self.chart, self.affine_dim) {
            (_, 0) => ApproxScalar::with_tol(0.0, 0.0),
            (None, _) => self.surface_area().expect("full-dimensional"),
            (Some(c), _) => {
                let mut v = 0.0;
                let mut count = 0;
                for f in &c.inner.facets {
                    for pc in &f.pieces {
                        let lifted: Vec<Vector> = pc.iter().map(|&j| c.lift(c.inner.point(j))).collect();
                        v += simplex_measure(&lifted.iter().collect::<Vec<_>>());
                        count += 1;
                    }
                }
                ApproxScalar::with_tol(v, 1e-12 * v.max(1.0) * count as f64)
            }
        }
    }

    /// Simplices (each `affine_dim + 1` points) triangulating the polytope.
    pub fn triangulation(&self) -> Vec<Vec<Vector>> {
        match (&self.chart, self.affine_dim) {
            (_, 0) => vec![vec![self.vertices[0].clone()]],
            (None, _) => {
                let apex = &self.vertices[0];
                let mut out = Vec::new();
                for f in &self.facets {
                    if f.vertex_indices.first() == Some(&0) {
                        continue;
                    }
                    for pc in &f.pieces {
                        let mut s = vec![apex.clone()];
                        s.extend(pc.iter().map(|&j| self.point(j).clone()));
                        out.push(s);
                    }
                }
                out
            }
            (Some(c), _) => c
                .inner
                .triangulation()
                .into_iter()
                .map(|s| s.iter().map(|p| c.lift(p)).collect())
                .collect(),
        }
    }

    /// The facet with index `i` as a lower-dimensional polytope.
    pub fn facet_polytope(&self, i: usize) -> VPolytope {
        let pts: Vec<Vector> = self.facets[i].vertex_indices.iter().map(|&j| self.vertices[j].clone()).collect();
        convex_hull(&pts).expect("facet vertices are nonempty")
    }

    /// `h_P(u) = max <v, u>` over vertices.
    pub fn support(&self, u: &[Scalar]) -> Result<Scalar> {
        if u.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: u.len() });
        }
        Ok(self.vertices.iter().map(|v| v.dot(u)).max().expect("nonempty"))
    }

    pub fn support_int(&self, u: &[BigInt]) -> Scalar {
        self.vertices.iter().map(|v| v.dot_int(u)).max().expect("nonempty")
    }

    pub fn support_f64(&self, u: &[f64]) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.iter().zip(u).map(|(a, b)| to_f64(a) * b).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn minkowski_sum(&self, other: &VPolytope) -> Result<VPolytope> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let mut pts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push(a.add(b));
            }
        }
        convex_hull(&pts)
    }

    pub fn translate(&self, x: &Vector) -> VPolytope {
        let mut p = self.map_preserving(|v| v.add(x));
        for f in &mut p.facets {
            f.offset = &f.offset + x.dot_int(&f.primitive_normal);
        }
        p
    }

    /// `lambda * P` for `lambda > 0`.
    pub fn dilate(&self, lambda: &Scalar) -> Result<VPolytope> {
        if !lambda.is_positive() {
            return Err(Error::InvalidParameter("dilation factor must be positive".into()));
        }
        let mut p = self.map_preserving(|v| v.scale(lambda));
        for f in &mut p.facets {
            f.offset = &f.offset * lambda;
        }
        Ok(p)
    }

    /// Applies an order-preserving map to every point, keeping combinatorics.
    fn map_preserving(&self, m: impl Fn(&Vector) -> Vector) -> VPolytope {
        match &self.chart {
            Some(_) => convex_hull(&self.vertices.iter().map(&m).collect::<Vec<_>>()).expect("nonempty"),
            None => VPolytope {
                dim: self.dim,
                vertices: self.vertices.iter().map(&m).collect(),
                affine_dim: self.affine_dim,
                facets: self
                    .facets
                    .iter()
                    .map(|f| Facet { measure: OnceLock::new(), ..f.clone() })
                    .collect(),
                aux: self.aux.iter().map(&m).collect(),
                chart: None,
            },
        }
    }

    pub fn affine_image(&self, t: &AffineMap) -> Result<VPolytope> {
        if t.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: t.dim() });
        }
        convex_hull(&self.vertices.iter().map(|v| t.apply(v)).collect::<Vec<_>>())
    }

    /// Orthogonal projection onto the complement of `directions`.
    ///
    /// The image is expressed in a rational basis `B` of the complement, with
    /// coordinates `c = (B^T B)^{-1} B^T x`; Lebesgue measures of the true
    /// orthogonal image equal measures in `c`-coordinates times
    /// `sqrt(det(B^T B))`. Axis-aligned directions give an orthonormal `B`.
    pub fn project_out(&self, directions: &[Vector]) -> Result<Projection> {
        let n = self.dim;
        for d in directions {
            if d.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: d.dim() });
            }
        }
        let rows: Vec<Vec<Scalar>> = directions.iter().map(|d| d.0.clone()).collect();
        if linalg::rank(&rows) != directions.len() {
            return Err(Error::DependentDirections);
        }
        let k = directions.len();
        if k == n {
            return Err(Error::InvalidParameter("projection onto the zero space".into()));
        }
        let basis: Vec<Vector> = complement_basis(&rows, n);
        let gram_m: Vec<Vec<Scalar>> =
            basis.iter().map(|a| basis.iter().map(|b| dot(a, b)).collect()).collect();
        let gram = linalg::det(gram_m.clone());
        let ginv = linalg::inverse(&gram_m).expect("complement basis is independent");
        let coords: Vec<Vector> = self
            .vertices
            .iter()
            .map(|v| {
                let bt: Vec<Scalar> = basis.iter().map(|b| b.dot(v)).collect();
                Vector(ginv.iter().map(|row| dot(row, &bt)).collect())
            })
            .collect();
        let body = convex_hull(&coords)?;
        let axis_aligned = gram.is_one()
            && basis.iter().all(|b| b.iter().filter(|x| !x.is_zero()).count() == 1);
        Ok(Projection { body, basis, gram, axis_aligned })
    }

    pub fn centroid(&self) -> Vector {
        let mut s = Vector::zeros(self.dim);
        for v in &self.vertices {
            s = s.add(v);
        }
        s.scale(&Scalar::new(BigInt::one(), BigInt::from(self.vertices.len())))
    }

    /// Halfspace description `{x : <x, a_F> <= h(a_F)}` with the vertex
    /// centroid as interior point.
    pub fn to_hpolytope(&self) -> Result<HPolytope> {
        self.require_full("halfspace description")?;
        let constraints = self
            .facets
            .iter()
            .map(|f| (Vector::from_bigints(&f.primitive_normal), f.offset.clone()))
            .collect();
        HPolytope::new(self.dim, constraints, self.centroid())
    }
}

fn complement_basis(rows: &[Vec<Scalar>], n: usize) -> Vec<Vector> {
    // Nullspace basis vectors are unit vectors whenever the directions are
    // coordinate axes, which keeps the axis-aligned case orthonormal.
    let mut basis: Vec<Vector> = linalg::nullspace(rows, n).into_iter().map(Vector).collect();
    for b in &mut basis {
        let scaled = linalg::primitive_from_rational(b);
        *b = Vector::from_bigints(&scaled);
    }
    basis
}

/// Orthogonal image of a polytope, see [`VPolytope::project_out`].
#[derive(Clone, Debug)]
pub struct Projection {
    pub body: VPolytope,
    pub basis: Vec<Vector>,
    pub gram: Scalar,
    pub axis_aligned: bool,
}

impl Projection {
    /// Full-dimensional measure of the projected body; zero when it is
    /// lower-dimensional.
    pub fn volume(&self) -> ApproxScalar {
        if !self.body.is_full_dimensional() {
            return ApproxScalar::with_tol(0.0, 0.0);
        }
        let v = to_f64(&self.body.volume().expect("full-dimensional")) * sqrt_f64(&self.gram);
        ApproxScalar::with_tol(v, 1e-14 * v)
    }

    /// Exact volume in basis coordinates; the true measure is this times
    /// `sqrt(gram)`.
    pub fn coordinate_volume(&self) -> Scalar {
        if self.body.is_full_dimensional() {
            self.body.volume().expect("full-dimensional")
        } else {
            Scalar::zero()
        }
    }
}

/// `x -> A x + b` with invertible `A`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap {
    pub matrix: Vec<Vec<Scalar>>,
    pub translation: Vector,
}

impl AffineMap {
    pub fn new(matrix: Vec<Vec<Scalar>>, translation: Vector) -> Result<Self> {
        let n = matrix.len();
        if matrix.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameter("affine map matrix must be square".into()));
        }
        if translation.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: translation.dim() });
        }
        if linalg::det(matrix.clone()).is_zero() {
            return Err(Error::SingularMap);
        }
        Ok(AffineMap { matrix, translation })
    }

    pub fn linear(matrix: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = matrix.len();
        AffineMap::new(matrix, Vector::zeros(n))
    }

    pub fn identity(n: usize) -> Self {
        let m = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect())
            .collect();
        AffineMap { matrix: m, translation: Vector::zeros(n) }
    }

    pub fn diagonal(entries: &[Scalar]) -> Result<Self> {
        let n = entries.len();
        let m = (0..n)
            .map(|i| (0..n).map(|j| if i == j { entries[i].clone() } else { Scalar::zero() }).collect())
            .collect();
        AffineMap::linear(m)
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn det(&self) -> Scalar {
        linalg::det(self.matrix.clone())
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        Vector(self.matrix.iter().zip(self.translation.iter()).map(|(row, t)| dot(row, v) + t).collect())
    }
}

/// `{x : <x, a_i> <= b_i}` with a strictly feasible interior point.
#[derive(Clone, Debug)]
pub struct HPolytope {
    pub dim: usize,
    pub constraints: Vec<(Vector, Scalar)>,
    pub interior_point: Vector,
}

impl HPolytope {
    pub fn new(dim: usize, constraints: Vec<(Vector, Scalar)>, interior_point: Vector) -> Result<Self> {
        if interior_point.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: interior_point.dim() });
        }
        for (i, (a, b)) in constraints.iter().enumerate() {
            if a.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: a.dim() });
            }
            if a.dot(&interior_point) >= *b {
                return Err(Error::InfeasibleInteriorPoint(i));
            }
        }
        Ok(HPolytope { dim, constraints, interior_point })
    }
}

/// Vertices of an H-polytope by polarity about its interior point.
///
/// Translating the interior point to the origin turns each constraint into
/// `<a, y> <= c` with `c > 0`; the polar body is the hull of the points
/// `a / c`, and its facets `<w, q> <= beta` dualize back to the vertices
/// `w / beta`. The system is bounded exactly when the origin lies in the
/// interior of the polar hull.
pub fn vertex_enumeration(h: &HPolytope) -> Result<VPolytope> {
    let z = &h.interior_point;
    if h.constraints.is_empty() {
        return Err(Error::Unbounded);
    }
    let mut polar = Vec::with_capacity(h.constraints.len());
    for (i, (a, b)) in h.constraints.iter().enumerate() {
        let c = b - a.dot(z);
        if !c.is_positive() {
            return Err(Error::InfeasibleInteriorPoint(i));
        }
        polar.push(a.scale(&c.recip()));
    }
    let q = convex_hull(&polar)?;
    if !q.is_full_dimensional() {
        return Err(Error::Unbounded);
    }
    let mut verts = Vec::with_capacity(q.facets.len());
    for f in &q.facets {
        if !f.offset.is_positive() {
            return Err(Error::Unbounded);
        }
        let y = Vector::from_bigints(&f.primitive_normal).scale(&f.offset.recip());
        verts.push(y.add(z));
    }
    convex_hull(&verts)
}

/// Vertex enumeration by solving every `n`-subset of constraints. Needs no
/// interior point; returns `None` when the feasible set has no vertex.
/// Intended for small systems (tests, interior-point recovery).
pub fn vertex_enumeration_brute(dim: usize, constraints: &[(Vector, Scalar)]) -> Option<VPolytope> {
    let m = constraints.len();
    let mut verts = Vec::new();
    let mut idx: Vec<usize> = (0..dim).collect();
    if m < dim {
        return None;
    }
    loop {
        let a: Vec<Vec<Scalar>> = idx.iter().map(|&i| constraints[i].0 .0.clone()).collect();
        let b: Vec<Scalar> = idx.iter().map(|&i| constraints[i].1.clone()).collect();
        if let Some(x) = linalg::solve(&a, &b) {
            let x = Vector(x);
            if constraints.iter().all(|(a, b)| a.dot(&x) <= *b) {
                verts.push(x);
            }
        }
        // next combination
        let mut i = dim;
        loop {
            if i == 0 {
                return if verts.is_empty() { None } else { convex_hull(&verts).ok() };
            }
            i -= 1;
            if idx[i] != i + m - dim {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..dim {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

impl Index<usize> for VPolytope {
    type Output = Vector;
    fn index(&self, i: usize) -> &Vector {
        &self.vertices[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn cube3() -> VPolytope {
        let mut pts = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    pts.push(Vector::from_ints(&[x, y, z]));
                }
            }
        }
        convex_hull(&pts).unwrap()
    }

    fn octahedron3() -> VPolytope {
        VPolytope::from_int_points(&[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, -1, 0], &[0, 0, 1], &[0, 0, -1]])
            .unwrap()
    }

    fn simplex3() -> VPolytope {
        VPolytope::from_int_points(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap()
    }

    #[test]
    fn hull_examples() {
        let s = simplex3();
        assert_eq!((s.vertices().len(), s.facets().len()), (4, 4));

        let mut pts: Vec<Vector> = cube3().vertices().to_vec();
        pts.push(Vector(vec![ratio(1, 2); 3]));
        let c = convex_hull(&pts).unwrap();
        assert_eq!(c.vertices().len(), 8);

        let o = octahedron3();
        assert_eq!((o.vertices().len(), o.facets().len()), (6, 8));
    }

    #[test]
    fn facet_vertices_satisfy_their_equation_exactly() {
        for p in [cube3(), octahedron3(), simplex3()] {
            for f in p.facets() {
                for &i in &f.vertex_indices {
                    assert_eq!(p[i].dot_int(&f.primitive_normal), f.offset);
                }
                for v in p.vertices() {
                    assert!(v.dot_int(&f.primitive_normal) <= f.offset);
                }
            }
        }
    }

    #[test]
    fn volume_examples() {
        assert_eq!(cube3().volume().unwrap(), int(1));
        assert_eq!(simplex3().volume().unwrap(), ratio(1, 6));
        assert_eq!(octahedron3().volume().unwrap(), ratio(4, 3));
        let seg = VPolytope::from_int_points(&[&[0, 0, 0], &[1, 0, 0]]).unwrap();
        assert!(matches!(seg.volume(), Err(Error::Degenerate(_))));
    }

    #[test]
    fn facet_measures() {
        let c = cube3();
        for i in 0..6 {
            assert!((c.facet_measure(i).value - 1.0).abs() < 1e-12);
        }
        let o = octahedron3();
        for i in 0..8 {
            assert!((o.facet_measure(i).value - 3f64.sqrt() / 2.0).abs() < 1e-12);
        }
        let s = simplex3();
        let diag = s.facet_index(&[1, 1, 1].map(BigInt::from)).unwrap();
        assert!((s.facet_measure(diag).value - 3f64.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn surface_areas() {
        assert!((cube3().surface_area().unwrap().value - 6.0).abs() < 1e-12);
        assert!((simplex3().surface_area().unwrap().value - (3.0 + 3f64.sqrt()) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn facet_measure_matches_projection_formula() {
        // |F| = |a| / |a_k| * (area of F projected along coordinate k)
        let p = VPolytope::from_int_points(&[&[0, 0, 0], &[3, 1, 0], &[1, 4, 1], &[0, 1, 5], &[2, 2, 2], &[4, 0, 3]])
            .unwrap();
        for (i, f) in p.facets().iter().enumerate() {
            let k = f.primitive_normal.iter().position(|x| !x.is_zero()).unwrap();
            let pts: Vec<Vector> = f
                .vertex_indices
                .iter()
                .map(|&j| Vector(p[j].iter().enumerate().filter(|&(c, _)| c != k).map(|(_, x)| x.clone()).collect()))
                .collect();
            let shadow = to_f64(&convex_hull(&pts).unwrap().volume().unwrap());
            let a_k = to_f64(&Scalar::from_integer(f.primitive_normal[k].clone())).abs();
            let expected = shadow * to_f64(&Scalar::from_integer(f.normal_norm_sq())).sqrt() / a_k;
            assert!((p.facet_measure(i).value - expected).abs() < 1e-10);
        }
    }

    #[test]
    fn minkowski_examples() {
        let c = cube3();
        let pt = VPolytope::from_int_points(&[&[5, -1, 2]]).unwrap();
        let moved = c.minkowski_sum(&pt).unwrap();
        assert_eq!(moved, c.translate(&Vector::from_ints(&[5, -1, 2])));
        let s1 = VPolytope::from_int_points(&[&[0, 0, 0], &[1, 0, 0]]).unwrap();
        let s2 = VPolytope::from_int_points(&[&[0, 0, 0], &[0, 1, 0]]).unwrap();
        let sq = s1.minkowski_sum(&s2).unwrap();
        assert_eq!(sq.affine_dim(), 2);
        assert_eq!(sq.vertices().len(), 4);
        assert!((sq.intrinsic_volume().value - 1.0).abs() < 1e-12);
        assert_eq!(c.minkowski_sum(&c).unwrap().volume().unwrap(), int(8));
    }

    #[test]
    fn support_examples() {
        assert_eq!(cube3().support(&Vector::from_ints(&[1, 0, 0])).unwrap(), int(1));
        assert_eq!(octahedron3().support(&Vector::from_ints(&[1, 1, 1])).unwrap(), int(1));
        assert_eq!(simplex3().support(&Vector::from_ints(&[-1, 0, 0])).unwrap(), int(0));
        assert!(cube3().support(&Vector::from_ints(&[1, 0])).is_err());
    }

    #[test]
    fn projection_examples() {
        let sq = cube3().project_out(&[Vector::from_ints(&[1, 0, 0])]).unwrap();
        assert!(sq.axis_aligned);
        assert_eq!(sq.coordinate_volume(), int(1));
        let seg = octahedron3()
            .project_out(&[Vector::from_ints(&[1, 0, 0]), Vector::from_ints(&[0, 1, 0])])
            .unwrap();
        assert_eq!(seg.coordinate_volume(), int(2));
        let diamond = octahedron3().project_out(&[Vector::from_ints(&[1, 1, 0])]).unwrap();
        assert!(!diamond.axis_aligned);
        assert!((diamond.volume().value - 2f64.sqrt()).abs() < 1e-12);
        assert!(matches!(
            cube3().project_out(&[Vector::from_ints(&[1, 1, 0]), Vector::from_ints(&[2, 2, 0])]),
            Err(Error::DependentDirections)
        ));
    }

    #[test]
    fn affine_images() {
        let c = cube3();
        assert_eq!(c.affine_image(&AffineMap::identity(3)).unwrap(), c);
        let t = AffineMap::diagonal(&[int(2), int(1), int(1)]).unwrap();
        assert_eq!(c.affine_image(&t).unwrap().volume().unwrap(), int(2));
        assert!(matches!(AffineMap::diagonal(&[int(1), int(0), int(1)]), Err(Error::SingularMap)));
    }

    #[test]
    fn vertex_enumeration_examples() {
        let mut cons = Vec::new();
        for i in 0..3 {
            cons.push((Vector::unit(3, i), int(1)));
            cons.push((Vector::unit(3, i).scale(&int(-1)), int(1)));
        }
        let h = HPolytope::new(3, cons.clone(), Vector::zeros(3)).unwrap();
        let cube = vertex_enumeration(&h).unwrap();
        assert_eq!(cube.vertices().len(), 8);
        assert_eq!(cube.volume().unwrap(), int(8));

        let s = simplex3();
        let back = vertex_enumeration(&s.to_hpolytope().unwrap()).unwrap();
        assert_eq!(back, s);

        let t = ratio(1, 3);
        cons[0].1 = int(1) + &t;
        let h = HPolytope::new(3, cons, Vector::zeros(3)).unwrap();
        assert_eq!(vertex_enumeration(&h).unwrap().volume().unwrap(), (int(2) + t) * int(4));
    }

    #[test]
    fn vertex_enumeration_errors() {
        let cons = vec![(Vector::from_ints(&[1, 0]), int(1)), (Vector::from_ints(&[0, 1]), int(1))];
        let h = HPolytope::new(2, cons.clone(), Vector::zeros(2)).unwrap();
        assert!(matches!(vertex_enumeration(&h), Err(Error::Unbounded)));
        assert!(matches!(
            HPolytope::new(2, cons, Vector::from_ints(&[1, 0])),
            Err(Error::InfeasibleInteriorPoint(0))
        ));
    }

    #[test]
    fn brute_force_enumeration_agrees() {
        let o = octahedron3();
        let h = o.to_hpolytope().unwrap();
        let a = vertex_enumeration(&h).unwrap();
        let b = vertex_enumeration_brute(3, &h.constraints).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, o);
    }

    #[test]
    fn lower_dimensional_bookkeeping() {
        let tri = VPolytope::from_int_points(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[0, 0, 1]]).unwrap();
        assert_eq!(tri.affine_dim(), 2);
        assert!((tri.intrinsic_volume().value - 3f64.sqrt() / 2.0).abs() < 1e-12);
        assert!((tri.boundary_measure().value - 3.0 * 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(tri.triangulation().len(), 1);
        let pt = VPolytope::from_int_points(&[&[1, 2], &[1, 2]]).unwrap();
        assert_eq!(pt.affine_dim(), 0);
        assert!(matches!(
            convex_hull(&[Vector::from_ints(&[1, 2]), Vector::from_ints(&[1])]),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
