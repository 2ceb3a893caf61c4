//! Vertex/facet conversion. Both directions go through the double
//! description method: vertices of `{a x <= b}` directly, facets of a point
//! set as the vertices of its polar around the centroid.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::dd::extreme_rays;
use super::{Halfspace, MAX_DIM, MAX_ELEMENTS, MAX_HULL_ELEMENTS};
use crate::error::{Error, Result};
use crate::linalg::{
    denom_lcm, dot, make_primitive, primitive_integer_row, rref, solve, sub, Rational,
    RationalMatrix, RationalVector,
};

/// Guard on user-supplied vertex and inequality lists.
pub(crate) fn check_guard(dim: usize, count: usize, what: &str) -> Result<()> {
    check_limit(dim, count, MAX_ELEMENTS, what)
}

/// Guard on point and inequality sets formed internally, e.g. Minkowski sums.
fn check_internal(dim: usize, count: usize, what: &str) -> Result<()> {
    check_limit(dim, count, MAX_HULL_ELEMENTS, what)
}

fn check_limit(dim: usize, count: usize, limit: usize, what: &str) -> Result<()> {
    if dim > MAX_DIM {
        return Err(Error::TooLarge(format!("dimension {dim} exceeds {MAX_DIM}")));
    }
    if count > limit {
        return Err(Error::TooLarge(format!("{count} {what} exceeds {limit}")));
    }
    Ok(())
}

/// Vertices of the bounded polyhedron `{x : <a_i, x> <= b_i}`.
pub(crate) fn enumerate_vertices(dim: usize, ineqs: &[Halfspace]) -> Result<Vec<RationalVector>> {
    check_internal(dim, ineqs.len(), "inequalities")?;
    let d = dim + 1;
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(ineqs.len() + 1);
    let mut t_row = vec![BigInt::zero(); d];
    t_row[0] = BigInt::one();
    rows.push(t_row);
    for h in ineqs {
        let mut r = Vec::with_capacity(d);
        r.push(h.offset.clone());
        r.extend(h.normal.iter().map(|a| -a));
        rows.push(primitive_integer_row(&r));
    }
    let rays = extreme_rays(&rows, d).map_err(|_| Error::Unbounded)?;
    let mut vertices = Vec::new();
    for ray in rays {
        if ray[0].is_zero() {
            return Err(Error::Unbounded);
        }
        let t = Rational::from_integer(ray[0].clone());
        vertices.push(ray[1..].iter().map(|x| Rational::from_integer(x.clone()) / &t).collect());
    }
    if vertices.is_empty() {
        return Err(Error::Empty);
    }
    vertices.sort();
    vertices.dedup();
    Ok(vertices)
}

/// Dimension of the affine hull plus an affine frame `(origin, directions)`.
pub(crate) fn affine_hull(points: &[RationalVector]) -> (usize, RationalVector, Vec<RationalVector>) {
    let p0 = points[0].clone();
    let dim = p0.len();
    let diffs: Vec<RationalVector> = points[1..].iter().map(|p| sub(p, &p0)).collect();
    if diffs.is_empty() {
        return (0, p0, Vec::new());
    }
    let red = rref(&RationalMatrix::from_rows(dim, &diffs).expect("equal lengths"));
    let dirs: Vec<RationalVector> = (0..red.rank).map(|r| red.matrix.row(r).to_vec()).collect();
    (red.rank, p0, dirs)
}

/// Irredundant facets `<a, x> <= b` (primitive integer `a`) of a
/// full-dimensional point set, sorted.
pub(crate) fn facets_of_points(dim: usize, points: &[RationalVector]) -> Result<Vec<Halfspace>> {
    check_internal(dim, points.len(), "points")?;
    let (affine_dim, _, _) = affine_hull(points);
    if affine_dim < dim {
        return Err(Error::NotFullDimensional { dim, affine_dim });
    }
    let count = Rational::from_integer(BigInt::from(points.len()));
    let mut centroid = vec![Rational::zero(); dim];
    for p in points {
        for (c, x) in centroid.iter_mut().zip(p) {
            *c += x;
        }
    }
    for c in centroid.iter_mut() {
        *c /= &count;
    }
    // Polar around the centroid: {y : <p - c, y> <= 1}.
    let d = dim + 1;
    let mut rows = Vec::with_capacity(points.len() + 1);
    let mut t_row = vec![BigInt::zero(); d];
    t_row[0] = BigInt::one();
    rows.push(t_row);
    for p in points {
        let mut r = Vec::with_capacity(d);
        r.push(Rational::one());
        r.extend(sub(p, &centroid).into_iter().map(|x| -x));
        rows.push(primitive_integer_row(&r));
    }
    let rays = extreme_rays(&rows, d).map_err(|_| Error::NotFullDimensional {
        dim,
        affine_dim: dim,
    })?;
    let mut facets = Vec::with_capacity(rays.len());
    for ray in rays {
        debug_assert!(ray[0].is_positive(), "polar around an interior point is bounded");
        let t = Rational::from_integer(ray[0].clone());
        let y: RationalVector = ray[1..]
            .iter()
            .map(|x| Rational::from_integer(x.clone()) / &t)
            .collect();
        let offset = Rational::one() + dot(&y, &centroid);
        facets.push(normalize_halfspace(y, offset));
    }
    facets.sort_by(|a, b| (&a.normal, &a.offset).cmp(&(&b.normal, &b.offset)));
    facets.dedup();
    Ok(facets)
}

/// Scales `<a, x> <= b` by a positive factor so `a` is a primitive integer vector.
pub(crate) fn normalize_halfspace(normal: RationalVector, offset: Rational) -> Halfspace {
    let l = denom_lcm(&normal);
    let ints: Vec<BigInt> = normal.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let g = ints
        .iter()
        .fold(BigInt::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
    if g.is_zero() {
        return Halfspace { normal, offset };
    }
    let factor = Rational::new(l, g);
    Halfspace {
        normal: make_primitive(ints).iter().map(|x| Rational::from_integer(x.clone())).collect(),
        offset: offset * factor,
    }
}

/// Points scaled by the common denominator `l`, so incidence tests run in
/// integer arithmetic.
pub(crate) struct Scaled {
    pub(crate) l: BigInt,
    pub(crate) pts: Vec<Vec<BigInt>>,
}

impl Scaled {
    pub(crate) fn new(points: &[RationalVector]) -> Self {
        let l = points
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
        let pts = points
            .iter()
            .map(|p| p.iter().map(|x| x.numer() * (&l / x.denom())).collect())
            .collect();
        Self { l, pts }
    }
}

/// `<a, x> <= b` rewritten against scaled points as `<a', y> <= num / den`.
pub(crate) struct IntFacet {
    a: Vec<BigInt>,
    num: BigInt,
    den: BigInt,
}

impl IntFacet {
    pub(crate) fn new(h: &Halfspace, l: &BigInt) -> Self {
        let m = denom_lcm(&h.normal);
        let a = h.normal.iter().map(|x| x.numer() * (&m / x.denom())).collect();
        let rhs = &h.offset * Rational::from_integer(&m * l);
        Self {
            a,
            num: rhs.numer().clone(),
            den: rhs.denom().clone(),
        }
    }

    /// Sign of `<a, x> - b`.
    pub(crate) fn side(&self, y: &[BigInt]) -> std::cmp::Ordering {
        let lhs: BigInt = self.a.iter().zip(y).map(|(a, x)| a * x).sum();
        (lhs * &self.den).cmp(&self.num)
    }
}

/// Extreme points of a full-dimensional point set given its facets.
fn extreme_points(
    dim: usize,
    points: &[RationalVector],
    scaled: &Scaled,
    facets: &[Halfspace],
) -> Vec<RationalVector> {
    let int_facets: Vec<IntFacet> = facets.iter().map(|h| IntFacet::new(h, &scaled.l)).collect();
    let mut out: Vec<RationalVector> = points
        .iter()
        .zip(&scaled.pts)
        .filter(|(_, y)| {
            let tight: Vec<RationalVector> = facets
                .iter()
                .zip(&int_facets)
                .filter(|(_, f)| f.side(y).is_eq())
                .map(|(h, _)| h.normal.clone())
                .collect();
            tight.len() >= dim
                && RationalMatrix::from_rows(dim, &tight)
                    .expect("normals have length dim")
                    .rank()
                    == dim
        })
        .map(|(p, _)| p.clone())
        .collect();
    out.sort();
    out.dedup();
    out
}

/// `±e_i ± e_j` for `i <= j`, and every non-zero vector of `{-1, 0, 1}^dim` when `dim <= 4`.
fn probe_directions(dim: usize) -> Vec<Vec<i64>> {
    if dim <= 4 {
        let mut out = Vec::new();
        for code in 0..3usize.pow(dim as u32) {
            let v: Vec<i64> = (0..dim).map(|i| (code / 3usize.pow(i as u32) % 3) as i64 - 1).collect();
            if v.iter().any(|&x| x != 0) {
                out.push(v);
            }
        }
        return out;
    }
    let mut out = Vec::new();
    for i in 0..dim {
        for j in i..dim {
            for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let mut v = vec![0; dim];
                v[i] += si;
                v[j] += sj;
                if v.iter().any(|&x| x != 0) {
                    out.push(v);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Discards points inside the hull of a few certain vertices. For each probe
/// direction the lexicographically largest maximiser is a vertex; any other
/// point in the hull of those vertices is a convex combination of them.
/// Expects sorted, deduplicated input.
fn prune_interior(dim: usize, pts: Vec<RationalVector>, scaled: Scaled) -> Result<(Vec<RationalVector>, Scaled)> {
    if pts.len() <= 4 * (dim + 1) {
        return Ok((pts, scaled));
    }
    let mut chosen = std::collections::BTreeSet::new();
    for d in probe_directions(dim) {
        let mut best: Option<(BigInt, usize)> = None;
        for (i, y) in scaled.pts.iter().enumerate() {
            let v: BigInt = y
                .iter()
                .zip(&d)
                .filter(|(_, &c)| c != 0)
                .map(|(x, &c)| if c > 0 { x.clone() } else { -x })
                .sum();
            if best.as_ref().is_none_or(|(b, _)| &v >= b) {
                best = Some((v, i));
            }
        }
        chosen.insert(best.expect("non-empty").1);
    }
    let core: Vec<RationalVector> = chosen.iter().map(|&i| pts[i].clone()).collect();
    if affine_hull(&core).0 < dim {
        return Ok((pts, scaled));
    }
    let facets: Vec<IntFacet> = facets_of_points(dim, &core)?
        .iter()
        .map(|h| IntFacet::new(h, &scaled.l))
        .collect();
    let Scaled { l, pts: ys } = scaled;
    let (kept, kept_ys): (Vec<_>, Vec<_>) = pts
        .into_iter()
        .zip(ys)
        .enumerate()
        .filter(|(i, (_, y))| chosen.contains(i) || facets.iter().any(|f| f.side(y).is_gt()))
        .map(|(_, pair)| pair)
        .unzip();
    Ok((kept, Scaled { l, pts: kept_ys }))
}

/// Vertices and facets of the convex hull of a full-dimensional point set.
pub(crate) fn full_hull(
    dim: usize,
    points: &[RationalVector],
) -> Result<(Vec<RationalVector>, Vec<Halfspace>)> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    let scaled = Scaled::new(&pts);
    let (pts, scaled) = prune_interior(dim, pts, scaled)?;
    let facets = facets_of_points(dim, &pts)?;
    let vertices = extreme_points(dim, &pts, &scaled, &facets);
    Ok((vertices, facets))
}

/// Extreme points of `conv(points)` in any affine dimension, lexicographically sorted.
pub(crate) fn hull_vertices(dim: usize, points: &[RationalVector]) -> Result<Vec<RationalVector>> {
    if points.is_empty() {
        return Err(Error::Empty);
    }
    if let Some(p) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: p.len(),
        });
    }
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    let (affine_dim, origin, dirs) = affine_hull(&pts);
    if affine_dim == dim {
        return full_hull(dim, &pts).map(|(v, _)| v);
    }
    if affine_dim == 0 {
        return Ok(vec![origin]);
    }
    // Work in coordinates of the affine frame.
    let frame = RationalMatrix::from_columns(dim, &dirs).expect("directions have length dim");
    let coords: Vec<RationalVector> = pts
        .iter()
        .map(|p| solve(&frame, &sub(p, &origin)).expect("point lies in its affine hull"))
        .collect();
    let low = if affine_dim == 1 {
        let lo = coords.iter().min().expect("non-empty").clone();
        let hi = coords.iter().max().expect("non-empty").clone();
        vec![lo, hi]
    } else {
        full_hull(affine_dim, &coords)?.0
    };
    let mut out: Vec<RationalVector> = low
        .iter()
        .map(|t| {
            let mut x = origin.clone();
            for (d, ti) in dirs.iter().zip(t) {
                for (xk, dk) in x.iter_mut().zip(d) {
                    *xk += ti * dk;
                }
            }
            x
        })
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}
