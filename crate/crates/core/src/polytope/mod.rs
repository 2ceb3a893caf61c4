//! Exact convex polytopes in H- and V-representation.

mod dd;
mod hull;
mod measure;
mod ops;
pub mod shapes;
mod volume;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{add, dot, scale, unit_vec, Rational, RationalVector};
use crate::optimize::{solve_lp, LinearProgram, LpOutcome};

pub use measure::MeasureValue;
pub use ops::{
    conv_of_sections, direct_sum_of_projections, gauge_restricted, minkowski_combination,
    project, section, Projection, Section, MAX_TUPLES,
};

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 6;
/// Largest supported number of vertices or inequalities in a constructed polytope.
pub const MAX_ELEMENTS: usize = 512;
/// Cap on points or inequalities in an intermediate hull computation.
pub const MAX_HULL_ELEMENTS: usize = 16_384;

/// The halfspace `<normal, x> <= offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Halfspace {
    #[serde(rename = "a", with = "crate::serde_q::vector")]
    pub normal: RationalVector,
    #[serde(rename = "b", with = "crate::serde_q::scalar")]
    pub offset: Rational,
}

impl Halfspace {
    pub fn new(normal: RationalVector, offset: Rational) -> Self {
        Self { normal, offset }
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        dot(&self.normal, x) <= self.offset
    }
}

/// A bounded polyhedron `{x : <a_i, x> <= b_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "HRepr")]
pub struct HPolytope {
    dim: usize,
    inequalities: Vec<Halfspace>,
}

#[derive(Deserialize)]
struct HRepr {
    dim: usize,
    inequalities: Vec<Halfspace>,
}

impl TryFrom<HRepr> for HPolytope {
    type Error = Error;
    fn try_from(r: HRepr) -> Result<Self> {
        HPolytope::new(r.dim, r.inequalities)
    }
}

impl HPolytope {
    /// Checks dimensions, drops trivial rows `<0, x> <= b` with `b >= 0`, and
    /// proves boundedness with one LP per signed coordinate direction.
    pub fn new(dim: usize, inequalities: Vec<Halfspace>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Invalid("polytope dimension must be positive".into()));
        }
        hull::check_guard(dim, inequalities.len(), "inequalities")?;
        let mut kept = Vec::with_capacity(inequalities.len());
        for h in inequalities {
            if h.normal.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: h.normal.len(),
                });
            }
            if h.normal.iter().all(Zero::is_zero) {
                if h.offset.is_negative() {
                    return Err(Error::Empty);
                }
                continue;
            }
            kept.push(h);
        }
        let p = Self {
            dim,
            inequalities: kept,
        };
        for i in 0..dim {
            for sign in [1, -1] {
                let e = scale(&Rational::from_integer(sign.into()), &unit_vec(dim, i));
                let mut lp = LinearProgram::new(e);
                for h in &p.inequalities {
                    lp.le(h.normal.clone(), h.offset.clone())?;
                }
                match solve_lp(&lp) {
                    LpOutcome::Optimal { .. } => {}
                    LpOutcome::Infeasible => return Err(Error::Empty),
                    LpOutcome::Unbounded => return Err(Error::Unbounded),
                }
            }
        }
        Ok(p)
    }

    /// For inequality systems already known to describe a bounded set.
    pub(crate) fn from_bounded(dim: usize, inequalities: Vec<Halfspace>) -> Self {
        Self { dim, inequalities }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn inequalities(&self) -> &[Halfspace] {
        &self.inequalities
    }

    /// `o ∈ int p`, i.e. every offset is positive.
    pub fn origin_is_interior(&self) -> bool {
        self.inequalities.iter().all(|h| h.offset.is_positive())
    }

    fn check_point(&self, x: &[Rational]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        Ok(())
    }

    pub fn contains(&self, x: &[Rational]) -> Result<bool> {
        self.check_point(x)?;
        Ok(self.inequalities.iter().all(|h| h.contains(x)))
    }

    /// Minkowski functional `max(0, max_i <a_i, x> / b_i)`.
    pub fn gauge(&self, x: &[Rational]) -> Result<Rational> {
        self.check_point(x)?;
        if !self.origin_is_interior() {
            return Err(Error::OriginNotInterior);
        }
        Ok(self
            .inequalities
            .iter()
            .map(|h| dot(&h.normal, x) / &h.offset)
            .fold(Rational::zero(), |m, v| if v > m { v } else { m }))
    }

    pub fn vertices(&self) -> Result<VPolytope> {
        let v = hull::enumerate_vertices(self.dim, &self.inequalities)?;
        Ok(VPolytope::from_canonical(self.dim, v))
    }

    pub fn volume(&self) -> Result<Rational> {
        self.vertices()?.volume()
    }
}

/// The convex hull of finitely many points, stored as its sorted extreme points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "VRepr")]
pub struct VPolytope {
    dim: usize,
    #[serde(with = "crate::serde_q::matrix")]
    vertices: Vec<RationalVector>,
}

#[derive(Deserialize)]
struct VRepr {
    dim: usize,
    #[serde(with = "crate::serde_q::matrix")]
    vertices: Vec<RationalVector>,
}

impl TryFrom<VRepr> for VPolytope {
    type Error = Error;
    fn try_from(r: VRepr) -> Result<Self> {
        VPolytope::new(r.dim, r.vertices)
    }
}

impl VPolytope {
    pub fn new(dim: usize, points: Vec<RationalVector>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Invalid("polytope dimension must be positive".into()));
        }
        hull::check_guard(dim, points.len(), "points")?;
        let vertices = hull::hull_vertices(dim, &points)?;
        Ok(Self { dim, vertices })
    }

    pub(crate) fn from_canonical(dim: usize, vertices: Vec<RationalVector>) -> Self {
        Self { dim, vertices }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[RationalVector] {
        &self.vertices
    }

    pub fn affine_dim(&self) -> usize {
        hull::affine_hull(&self.vertices).0
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim() == self.dim
    }

    pub fn facets(&self) -> Result<HPolytope> {
        let f = hull::facets_of_points(self.dim, &self.vertices)?;
        Ok(HPolytope::from_bounded(self.dim, f))
    }

    pub fn volume(&self) -> Result<Rational> {
        let facets = hull::facets_of_points(self.dim, &self.vertices)?;
        Ok(volume::volume_from_hull(&self.vertices, &facets))
    }

    /// Exact membership through the facet description (any affine dimension).
    pub fn contains(&self, x: &[Rational]) -> Result<bool> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        let mut with_x = self.vertices.clone();
        with_x.push(x.to_vec());
        Ok(hull::hull_vertices(self.dim, &with_x)? == self.vertices)
    }

    pub fn translated(&self, t: &[Rational]) -> Result<VPolytope> {
        if t.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: t.len(),
            });
        }
        let v = self.vertices.iter().map(|p| add(p, t)).collect();
        Ok(Self::from_canonical(self.dim, v))
    }

    /// `λ p`; `λ = 0` collapses to the origin.
    pub fn dilated(&self, lambda: &Rational) -> VPolytope {
        let mut v: Vec<RationalVector> = self.vertices.iter().map(|p| scale(lambda, p)).collect();
        v.sort();
        v.dedup();
        Self::from_canonical(self.dim, v)
    }
}

/// Either representation, as accepted on input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, try_from = "BodyRepr")]
pub enum Body {
    H(HPolytope),
    V(VPolytope),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum BodyRepr {
    H(HRepr),
    V(VRepr),
}

impl TryFrom<BodyRepr> for Body {
    type Error = Error;
    fn try_from(r: BodyRepr) -> Result<Self> {
        Ok(match r {
            BodyRepr::H(h) => Body::H(h.try_into()?),
            BodyRepr::V(v) => Body::V(v.try_into()?),
        })
    }
}

impl From<HPolytope> for Body {
    fn from(h: HPolytope) -> Self {
        Body::H(h)
    }
}

impl From<VPolytope> for Body {
    fn from(v: VPolytope) -> Self {
        Body::V(v)
    }
}

impl Body {
    pub fn dim(&self) -> usize {
        match self {
            Body::H(h) => h.dim(),
            Body::V(v) => v.dim(),
        }
    }

    pub fn to_v(&self) -> Result<VPolytope> {
        match self {
            Body::H(h) => h.vertices(),
            Body::V(v) => Ok(v.clone()),
        }
    }

    pub fn to_h(&self) -> Result<HPolytope> {
        match self {
            Body::H(h) => Ok(h.clone()),
            Body::V(v) => v.facets(),
        }
    }

    pub fn volume(&self) -> Result<Rational> {
        match self {
            Body::H(h) => h.volume(),
            Body::V(v) => v.volume(),
        }
    }
}

pub fn vertices_of(h: &HPolytope) -> Result<VPolytope> {
    h.vertices()
}

pub fn facets_of(v: &VPolytope) -> Result<HPolytope> {
    v.facets()
}

pub fn volume(p: &Body) -> Result<Rational> {
    p.volume()
}
