//! Standard bodies.

use num_traits::One;

use super::{HPolytope, Halfspace, VPolytope};
use crate::linalg::{int, scale, unit_vec, zero_vec, Rational, RationalVector};

/// The box `prod [-w_i, w_i]`.
pub fn centered_box(half_widths: &[Rational]) -> HPolytope {
    let n = half_widths.len();
    let mut ineqs = Vec::with_capacity(2 * n);
    for (i, w) in half_widths.iter().enumerate() {
        ineqs.push(Halfspace::new(unit_vec(n, i), w.clone()));
        ineqs.push(Halfspace::new(scale(&int(-1), &unit_vec(n, i)), w.clone()));
    }
    HPolytope::from_bounded(n, ineqs)
}

/// The cube `[-w, w]^n`.
pub fn cube(n: usize, w: i64) -> HPolytope {
    centered_box(&vec![int(w); n])
}

/// The box `prod [lo_i, hi_i]` as a V-polytope.
pub fn box_vertices(lo: &[Rational], hi: &[Rational]) -> VPolytope {
    let n = lo.len();
    let mut pts: Vec<RationalVector> = vec![Vec::new()];
    for i in 0..n {
        pts = pts
            .into_iter()
            .flat_map(|p| {
                [&lo[i], &hi[i]].into_iter().map(move |x| {
                    let mut q = p.clone();
                    q.push(x.clone());
                    q
                })
            })
            .collect();
    }
    pts.sort();
    pts.dedup();
    VPolytope::from_canonical(n, pts)
}

/// `[0, 1]^n`.
pub fn unit_cube(n: usize) -> VPolytope {
    box_vertices(&vec![int(0); n], &vec![int(1); n])
}

/// `conv{±λ_i e_i}` in H-representation: `sum ±x_i / λ_i <= 1`.
pub fn cross_polytope(lambdas: &[Rational]) -> HPolytope {
    let n = lambdas.len();
    let mut ineqs = Vec::with_capacity(1 << n);
    for mask in 0..(1usize << n) {
        let normal: RationalVector = lambdas
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let s = if mask >> i & 1 == 1 { -Rational::one() } else { Rational::one() };
                s / l
            })
            .collect();
        ineqs.push(Halfspace::new(normal, Rational::one()));
    }
    HPolytope::from_bounded(n, ineqs)
}

/// `conv{±λ_i e_i}` in V-representation.
pub fn cross_polytope_vertices(lambdas: &[Rational]) -> VPolytope {
    let n = lambdas.len();
    let mut pts = Vec::with_capacity(2 * n);
    for (i, l) in lambdas.iter().enumerate() {
        pts.push(scale(l, &unit_vec(n, i)));
        pts.push(scale(&-l, &unit_vec(n, i)));
    }
    pts.sort();
    VPolytope::from_canonical(n, pts)
}

/// `conv{0, e_1, ..., e_n}`.
pub fn standard_simplex(n: usize) -> VPolytope {
    let mut pts: Vec<RationalVector> = (0..n).map(|i| unit_vec(n, i)).collect();
    pts.push(zero_vec(n));
    pts.sort();
    VPolytope::from_canonical(n, pts)
}
