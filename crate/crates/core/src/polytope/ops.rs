//! Sections, projections, gauges on subspaces and Minkowski constructions.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{hull, HPolytope, Halfspace, MeasureValue, VPolytope};
use crate::error::{Error, Result};
use crate::linalg::{add, dot, gram, determinant, scale, Rational, RationalVector};
use crate::subspace::{is_direct_sum_decomposition, pairwise_orthogonal, Subspace};

/// Cap on the number of vertex pairs formed in one step of a Minkowski combination.
pub const MAX_TUPLES: u64 = 1_000_000;

/// `p ∩ E` in basis coordinates of `E`, with its `dim E`-dimensional measure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Section {
    pub coords: HPolytope,
    pub measure: MeasureValue,
}

/// `P_E p` in basis coordinates of `E`, with its `dim E`-dimensional measure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Projection {
    pub coords: VPolytope,
    pub measure: MeasureValue,
}

fn check_subspace(n: usize, e: &Subspace) -> Result<()> {
    if e.ambient_dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: e.ambient_dim(),
        });
    }
    if e.is_trivial() {
        return Err(Error::TrivialSubspace);
    }
    Ok(())
}

fn gram_det(e: &Subspace) -> Rational {
    determinant(&gram(e.basis()).expect("basis vectors share a length")).expect("gram is square")
}

pub fn section(p: &HPolytope, e: &Subspace) -> Result<Section> {
    check_subspace(p.dim(), e)?;
    if !p.origin_is_interior() {
        return Err(Error::OriginNotInterior);
    }
    let ineqs: Vec<Halfspace> = p
        .inequalities()
        .iter()
        .map(|h| Halfspace::new(e.basis().iter().map(|b| dot(&h.normal, b)).collect(), h.offset.clone()))
        .filter(|h| h.normal.iter().any(|x| !x.is_zero()))
        .collect();
    let coords = HPolytope::from_bounded(e.dim(), ineqs);
    let vol = coords.volume()?;
    let measure = MeasureValue::new(vol, gram_det(e))?;
    Ok(Section { coords, measure })
}

pub fn project(p: &VPolytope, e: &Subspace) -> Result<Projection> {
    check_subspace(p.dim(), e)?;
    let pts: Vec<RationalVector> = p
        .vertices()
        .iter()
        .map(|v| e.projected_coordinates(v))
        .collect::<Result<_>>()?;
    let coords = VPolytope::new(e.dim(), pts)?;
    let vol = if coords.is_full_dimensional() {
        coords.volume()?
    } else {
        Rational::zero()
    };
    let measure = MeasureValue::new(vol, gram_det(e))?;
    Ok(Projection { coords, measure })
}

/// The gauge of `p ∩ E` at the basis coordinates of `x ∈ E`.
pub fn gauge_restricted(p: &HPolytope, e: &Subspace, x: &[Rational]) -> Result<Rational> {
    check_subspace(p.dim(), e)?;
    let t = e.coordinates(x)?;
    let s = section(p, e)?;
    s.coords.gauge(&t)
}

/// `sum c_i P_i` for positive `c_i`, combined pairwise with a hull after each step.
pub fn minkowski_combination(terms: &[(Rational, VPolytope)]) -> Result<VPolytope> {
    let (first, rest) = terms
        .split_first()
        .ok_or_else(|| Error::Invalid("empty Minkowski combination".into()))?;
    let n = first.1.dim();
    for (i, (c, p)) in terms.iter().enumerate() {
        if !c.is_positive() {
            return Err(Error::NonPositiveWeight { index: i });
        }
        if p.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.dim(),
            });
        }
    }
    let mut acc: Vec<RationalVector> = first.1.vertices().iter().map(|v| scale(&first.0, v)).collect();
    for (c, p) in rest {
        let pairs = (acc.len() as u64).saturating_mul(p.vertices().len() as u64);
        if pairs > MAX_TUPLES {
            return Err(Error::TooLarge(format!(
                "{pairs} vertex pairs exceed {MAX_TUPLES}"
            )));
        }
        let mut sums = Vec::with_capacity(acc.len() * p.vertices().len());
        for a in &acc {
            for v in p.vertices() {
                sums.push(add(a, &scale(c, v)));
            }
        }
        acc = hull::hull_vertices(n, &sums)?;
    }
    Ok(VPolytope::from_canonical(n, acc))
}

fn check_parts(n: usize, parts: &[Subspace]) -> Result<()> {
    for s in parts {
        if s.ambient_dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: s.ambient_dim(),
            });
        }
    }
    if !pairwise_orthogonal(parts)? {
        return Err(Error::NotOrthogonal);
    }
    if !is_direct_sum_decomposition(parts, n) {
        return Err(Error::NotSpanning);
    }
    Ok(())
}

/// `conv ∪_j (p ∩ F_j)` for an orthogonal decomposition `⊕ F_j = R^n`.
pub fn conv_of_sections(p: &HPolytope, parts: &[Subspace]) -> Result<VPolytope> {
    check_parts(p.dim(), parts)?;
    let mut pts = Vec::new();
    for f in parts.iter().filter(|f| !f.is_trivial()) {
        let s = section(p, f)?;
        for t in s.coords.vertices()?.vertices() {
            pts.push(f.lift(t)?);
        }
    }
    VPolytope::new(p.dim(), pts)
}

/// `P_{F_1} p + ... + P_{F_l} p` for an orthogonal decomposition `⊕ F_j = R^n`.
pub fn direct_sum_of_projections(p: &VPolytope, parts: &[Subspace]) -> Result<VPolytope> {
    check_parts(p.dim(), parts)?;
    let one = Rational::from_integer(BigInt::from(1));
    let terms: Vec<(Rational, VPolytope)> = parts
        .iter()
        .filter(|f| !f.is_trivial())
        .map(|f| {
            let pts = p
                .vertices()
                .iter()
                .map(|v| f.project(v))
                .collect::<Result<Vec<_>>>()?;
            Ok((one.clone(), VPolytope::new(p.dim(), pts)?))
        })
        .collect::<Result<_>>()?;
    minkowski_combination(&terms)
}
