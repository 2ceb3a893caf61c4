//! Linear subspaces of Q^n carried by an exact basis and the exact
//! orthogonal projection `B (B^T B)^{-1} B^T`.
//!
//! Bases are never orthonormalized, so every projection stays rational.
//! Equality is decided on projection matrices, which are basis-free.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    dot, kernel_basis, rref, solve, unit_vec, Rational, RationalMatrix, RationalVector,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SubspaceRepr", into = "SubspaceRepr")]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<RationalVector>,
    projection: RationalMatrix,
}

#[derive(Serialize, Deserialize)]
struct SubspaceRepr {
    ambient_dim: usize,
    #[serde(with = "crate::serde_q::matrix")]
    basis: Vec<RationalVector>,
}

impl TryFrom<SubspaceRepr> for Subspace {
    type Error = Error;
    fn try_from(r: SubspaceRepr) -> Result<Self> {
        Subspace::new(r.ambient_dim, &r.basis)
    }
}

impl From<Subspace> for SubspaceRepr {
    fn from(s: Subspace) -> Self {
        SubspaceRepr {
            ambient_dim: s.ambient_dim,
            basis: s.basis,
        }
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

impl Subspace {
    /// Span of `spanning`; the basis is the maximal independent prefix-greedy subset.
    pub fn new(ambient_dim: usize, spanning: &[RationalVector]) -> Result<Self> {
        for v in spanning {
            check_dim(ambient_dim, v.len())?;
        }
        let cols = RationalMatrix::from_columns(ambient_dim, spanning)?;
        let basis: Vec<RationalVector> = rref(&cols)
            .pivots
            .iter()
            .map(|&c| spanning[c].clone())
            .collect();
        let projection = projection_matrix(ambient_dim, &basis);
        Ok(Self {
            ambient_dim,
            basis,
            projection,
        })
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Vec::new(),
            projection: RationalMatrix::zeros(ambient_dim, ambient_dim),
        }
    }

    pub fn whole(ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim).map(|i| unit_vec(ambient_dim, i)).collect();
        Self {
            ambient_dim,
            basis,
            projection: RationalMatrix::identity(ambient_dim),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_whole(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    pub fn basis(&self) -> &[RationalVector] {
        &self.basis
    }

    pub fn projection(&self) -> &RationalMatrix {
        &self.projection
    }

    /// Basis as the columns of an `n x dim` matrix.
    pub fn basis_matrix(&self) -> RationalMatrix {
        RationalMatrix::from_columns(self.ambient_dim, &self.basis).expect("basis lengths checked")
    }

    pub fn project(&self, x: &[Rational]) -> Result<RationalVector> {
        self.projection.mul_vec(x)
    }

    pub fn contains(&self, x: &[Rational]) -> Result<bool> {
        Ok(self.project(x)? == x)
    }

    /// `true` iff `other` is a subspace of `self`.
    pub fn contains_subspace(&self, other: &Subspace) -> Result<bool> {
        check_dim(self.ambient_dim, other.ambient_dim)?;
        for b in &other.basis {
            if !self.contains(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_orthogonal_to(&self, other: &Subspace) -> Result<bool> {
        check_dim(self.ambient_dim, other.ambient_dim)?;
        Ok(self
            .basis
            .iter()
            .all(|a| other.basis.iter().all(|b| dot(a, b).is_zero())))
    }

    /// Coordinates `t` with `B t = x`, for `x` in the subspace.
    pub fn coordinates(&self, x: &[Rational]) -> Result<RationalVector> {
        check_dim(self.ambient_dim, x.len())?;
        solve(&self.basis_matrix(), x).map_err(|e| match e {
            Error::Inconsistent => Error::NotInSubspace,
            other => other,
        })
    }

    /// Coordinates of the orthogonal projection of `x`.
    pub fn projected_coordinates(&self, x: &[Rational]) -> Result<RationalVector> {
        let p = self.project(x)?;
        self.coordinates(&p)
    }

    /// Ambient point `B t`.
    pub fn lift(&self, t: &[Rational]) -> Result<RationalVector> {
        check_dim(self.dim(), t.len())?;
        let mut x = vec![Rational::zero(); self.ambient_dim];
        for (b, ti) in self.basis.iter().zip(t) {
            if ti.is_zero() {
                continue;
            }
            for (xk, bk) in x.iter_mut().zip(b) {
                *xk += ti * bk;
            }
        }
        Ok(x)
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        check_dim(self.ambient_dim, other.ambient_dim)?;
        let n = self.ambient_dim;
        let id = RationalMatrix::identity(n);
        let mut rows = id.sub(&self.projection)?.row_vectors();
        rows.extend(id.sub(&other.projection)?.row_vectors());
        let stacked = RationalMatrix::from_rows(n, &rows)?;
        Subspace::new(n, &kernel_basis(&stacked))
    }

    pub fn orthogonal_complement(&self) -> Subspace {
        let n = self.ambient_dim;
        let constraints =
            RationalMatrix::from_rows(n, &self.basis).expect("basis lengths checked");
        Subspace::new(n, &kernel_basis(&constraints)).expect("kernel vectors have length n")
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        check_dim(self.ambient_dim, other.ambient_dim)?;
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Subspace::new(self.ambient_dim, &all)
    }

    pub fn equals(&self, other: &Subspace) -> Result<bool> {
        check_dim(self.ambient_dim, other.ambient_dim)?;
        Ok(self.projection == other.projection)
    }
}

fn projection_matrix(n: usize, basis: &[RationalVector]) -> RationalMatrix {
    if basis.is_empty() {
        return RationalMatrix::zeros(n, n);
    }
    let b = RationalMatrix::from_columns(n, basis).expect("basis lengths checked");
    let bt = b.transpose();
    let g_inv = bt
        .mul(&b)
        .expect("conformable")
        .inverse()
        .expect("gram matrix of an independent basis is invertible");
    b.mul(&g_inv)
        .and_then(|m| m.mul(&bt))
        .expect("conformable")
}

/// True iff the dimensions add to `ambient_dim` and the union of bases has full rank.
pub fn is_direct_sum_decomposition(parts: &[Subspace], ambient_dim: usize) -> bool {
    if parts.iter().any(|p| p.ambient_dim != ambient_dim) {
        return false;
    }
    let total: usize = parts.iter().map(Subspace::dim).sum();
    if total != ambient_dim {
        return false;
    }
    let all: Vec<RationalVector> = parts.iter().flat_map(|p| p.basis.iter().cloned()).collect();
    RationalMatrix::from_rows(ambient_dim, &all)
        .map(|m| m.rank() == ambient_dim)
        .unwrap_or(false)
}

/// Pairwise orthogonality of a family of subspaces.
pub fn pairwise_orthogonal(parts: &[Subspace]) -> Result<bool> {
    for (i, a) in parts.iter().enumerate() {
        for b in &parts[i + 1..] {
            if !a.is_orthogonal_to(b)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub(crate) fn identity_like(p: &RationalMatrix) -> bool {
    p.is_square()
        && (0..p.rows()).all(|r| {
            (0..p.cols()).all(|c| {
                if r == c {
                    p[(r, c)].is_one()
                } else {
                    p[(r, c)].is_zero()
                }
            })
        })
}
