//! Exact volume: a fan from the vertex centroid over the facets, each facet
//! split by a pulling triangulation (every face is coned from its
//! lowest-indexed vertex over its own facets not containing it). Facets of a
//! face are the maximal proper intersections of the face with the facets of
//! the polytope, so only vertex/facet incidences are needed.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::hull::{IntFacet, Scaled};
use super::Halfspace;
use crate::linalg::{Rational, RationalVector};

pub(crate) fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * BigInt::from(k))
}

fn incidences(scaled: &Scaled, facets: &[Halfspace]) -> Vec<Vec<usize>> {
    facets
        .iter()
        .map(|h| {
            let f = IntFacet::new(h, &scaled.l);
            (0..scaled.pts.len())
                .filter(|&v| f.side(&scaled.pts[v]).is_eq())
                .collect()
        })
        .collect()
}

/// Boundary simplices (vertex index lists, `dim` each) of a pulling
/// triangulation of every facet.
pub(crate) fn facet_triangulation(
    vertices: &[RationalVector],
    facets: &[Halfspace],
) -> Vec<Vec<usize>> {
    let dim = vertices.first().map_or(0, Vec::len);
    let incidence = incidences(&Scaled::new(vertices), facets);
    let mut memo = HashMap::new();
    let mut out = Vec::new();
    for face in &incidence {
        out.extend(triangulate_face(face, dim - 1, &incidence, &mut memo));
    }
    out
}

fn triangulate_face(
    face: &[usize],
    k: usize,
    incidence: &[Vec<usize>],
    memo: &mut HashMap<Vec<usize>, Vec<Vec<usize>>>,
) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![face[0]]];
    }
    if let Some(done) = memo.get(face) {
        return done.clone();
    }
    let apex = face[0];
    let mut candidates: Vec<Vec<usize>> = incidence
        .iter()
        .map(|inc| face.iter().copied().filter(|v| inc.contains(v)).collect::<Vec<_>>())
        .filter(|s: &Vec<usize>| !s.is_empty() && s.len() < face.len())
        .collect();
    candidates.sort();
    candidates.dedup();
    let maximal: Vec<&Vec<usize>> = candidates
        .iter()
        .filter(|c| {
            !candidates
                .iter()
                .any(|o| o.len() > c.len() && c.iter().all(|v| o.contains(v)))
        })
        .collect();
    let mut out = Vec::new();
    for sub_face in maximal {
        if sub_face.contains(&apex) {
            continue;
        }
        for mut simplex in triangulate_face(sub_face, k - 1, incidence, memo) {
            simplex.push(apex);
            out.push(simplex);
        }
    }
    memo.insert(face.to_vec(), out.clone());
    out
}

/// Fraction-free determinant of an integer matrix.
fn bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    if sign < 0 {
        -prev
    } else {
        prev
    }
}

/// Works on the vertices scaled by `l * count`, which makes the centroid
/// integral too; the sum of `|det|` is divided out once at the end.
pub(crate) fn volume_from_hull(vertices: &[RationalVector], facets: &[Halfspace]) -> Rational {
    let dim = vertices[0].len();
    let scaled = Scaled::new(vertices);
    let count = BigInt::from(vertices.len());
    let apex: Vec<BigInt> = (0..dim)
        .map(|i| scaled.pts.iter().map(|y| &y[i]).sum())
        .collect();
    let pts: Vec<Vec<BigInt>> = scaled
        .pts
        .iter()
        .map(|y| y.iter().map(|x| x * &count).collect())
        .collect();
    let total: BigInt = facet_triangulation(vertices, facets)
        .par_iter()
        .map(|s| {
            let rows = s
                .iter()
                .map(|&i| pts[i].iter().zip(&apex).map(|(x, a)| x - a).collect())
                .collect();
            bareiss(rows).abs()
        })
        .reduce(BigInt::zero, |acc, v| acc + v);
    let scale = num_traits::pow(&scaled.l * &count, dim) * factorial(dim);
    Rational::new(total, scale)
}
