//! Both sides of the classical volume inequalities, compared exactly where
//! possible and otherwise by certified interval enclosures.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::compare::{
    compare, compare_with, Comparison, DecimalInterval, EqualityChannel, PowerProduct,
    INTERVAL_ROUNDS,
};
use crate::cover::{coordinate_subspace, validate_cover, UniformCover};
use crate::datum::BLDatum;
use crate::error::{Error, Result};
use crate::linalg::{determinant, format_rational, sub, unit_vec, Rational};
use crate::polytope::{minkowski_combination, project, section, Body, HPolytope, VPolytope};
use crate::subspace::Subspace;

/// Direction of the inequality `lhs REL rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
}

/// One side of an inequality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quantity {
    pub expression: String,
    #[serde(with = "crate::serde_q::option_scalar")]
    pub exact: Option<Rational>,
    pub interval: DecimalInterval,
}

impl Quantity {
    fn from_product(p: &PowerProduct) -> Self {
        Self {
            expression: p.to_string(),
            exact: p.as_rational(),
            interval: DecimalInterval::enclosing(&p.interval(INTERVAL_ROUNDS[0])),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: String,
    pub relation: Relation,
    pub lhs: Quantity,
    pub rhs: Quantity,
    /// Enclosure of `lhs / rhs`.
    pub ratio: Option<DecimalInterval>,
    /// False only when the inequality is proven violated.
    pub holds: bool,
    pub equality: EqualityChannel,
    /// Bits of the deciding interval round; zero when decided exactly.
    pub precision_bits: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl InequalityReport {
    /// Equality proven exactly.
    pub fn is_exact_equality(&self) -> bool {
        self.equality == EqualityChannel::ExactYes
    }

    /// Strict inequality proven.
    pub fn is_strict(&self) -> bool {
        self.equality == EqualityChannel::ExactNo
    }
}

fn build(
    name: &str,
    relation: Relation,
    lhs: Quantity,
    rhs: Quantity,
    cmp: Comparison,
    notes: Vec<String>,
) -> InequalityReport {
    let violated = match (relation, cmp.ordering) {
        (Relation::Le, Some(Ordering::Greater)) => true,
        (Relation::Ge, Some(Ordering::Less)) => true,
        _ => false,
    };
    InequalityReport {
        name: name.to_string(),
        relation,
        lhs,
        rhs,
        ratio: cmp.ratio.as_ref().map(DecimalInterval::enclosing),
        holds: !violated,
        equality: cmp.channel,
        precision_bits: cmp.precision,
        notes,
    }
}

fn report(name: &str, relation: Relation, lhs: &PowerProduct, rhs: &PowerProduct) -> InequalityReport {
    build(
        name,
        relation,
        Quantity::from_product(lhs),
        Quantity::from_product(rhs),
        compare(lhs, rhs),
        Vec::new(),
    )
}

fn factorial(n: usize) -> Rational {
    Rational::from_integer((1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k)))
}

fn positive_volume(v: &VPolytope) -> Result<Rational> {
    let vol = v.volume()?;
    if !vol.is_positive() {
        return Err(Error::NotFullDimensional {
            dim: v.dim(),
            affine_dim: v.affine_dim(),
        });
    }
    Ok(vol)
}

fn hyperplane(n: usize, i: usize) -> Result<Subspace> {
    Ok(Subspace::new(n, &[unit_vec(n, i)])?.orthogonal_complement())
}

fn check_dim_at_least_two(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Invalid("inequality needs dimension at least 2".into()));
    }
    Ok(())
}

/// `|K|^{n-1} <= prod_i |P_{e_i^⊥} K|`.
pub fn verify_loomis_whitney(k: &Body) -> Result<InequalityReport> {
    let n = k.dim();
    check_dim_at_least_two(n)?;
    let v = k.to_v()?;
    let vol = positive_volume(&v)?;
    let lhs = PowerProduct::rational(num_traits::pow(vol, n - 1));
    let mut rhs = PowerProduct::one();
    for i in 0..n {
        rhs = rhs.mul(&PowerProduct::measure(&project(&v, &hyperplane(n, i)?)?.measure));
    }
    Ok(report("loomis-whitney", Relation::Le, &lhs, &rhs))
}

/// `|K|^s <= prod_i |P_{E_{σ_i}} K|` for an s-uniform cover.
pub fn verify_bollobas_thomason(k: &Body, c: &UniformCover) -> Result<InequalityReport> {
    let n = k.dim();
    if c.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: c.n(),
        });
    }
    if !validate_cover(c).valid {
        return Err(Error::InvalidCover("multiplicities are not uniform".into()));
    }
    let v = k.to_v()?;
    let vol = positive_volume(&v)?;
    let lhs = PowerProduct::rational(num_traits::pow(vol, c.s()));
    let mut rhs = PowerProduct::one();
    for sigma in c.sets() {
        let e = coordinate_subspace(n, sigma)?;
        rhs = rhs.mul(&PowerProduct::measure(&project(&v, &e)?.measure));
    }
    Ok(report("bollobas-thomason", Relation::Le, &lhs, &rhs))
}

/// `|K|^{n-1} >= (n!/n^n) prod_i |K ∩ e_i^⊥|`.
pub fn verify_meyer(k: &HPolytope) -> Result<InequalityReport> {
    let n = k.dim();
    check_dim_at_least_two(n)?;
    if !k.origin_is_interior() {
        return Err(Error::OriginNotInterior);
    }
    let vol = positive_volume(&k.vertices()?)?;
    let lhs = PowerProduct::rational(num_traits::pow(vol, n - 1));
    let nn = Rational::from_integer(BigInt::from(n).pow(n as u32));
    let mut rhs = PowerProduct::rational(factorial(n) / nn);
    for i in 0..n {
        rhs = rhs.mul(&PowerProduct::measure(&section(k, &hyperplane(n, i)?)?.measure));
    }
    Ok(report("meyer", Relation::Ge, &lhs, &rhs))
}

fn check_datum(k: &HPolytope, d: &BLDatum) -> Result<()> {
    if d.ambient_dim() != k.dim() {
        return Err(Error::DimensionMismatch {
            expected: k.dim(),
            found: d.ambient_dim(),
        });
    }
    if !d.is_valid() {
        return Err(Error::InvalidDatum(
            "weighted projections do not sum to the identity".into(),
        ));
    }
    if !k.origin_is_interior() {
        return Err(Error::OriginNotInterior);
    }
    Ok(())
}

/// The constant `prod_i (d_i!)^{c_i} / n!`.
pub fn liakopoulos_constant(d: &BLDatum) -> PowerProduct {
    let mut c = PowerProduct::rational(factorial(d.ambient_dim()).recip());
    for e in d.entries() {
        c = c.mul(&PowerProduct::power(factorial(e.subspace.dim()), e.weight.clone()));
    }
    c
}

/// `|K| >= (prod_i (d_i!)^{c_i} / n!) prod_i |K ∩ E_i|^{c_i}`.
pub fn verify_liakopoulos(k: &HPolytope, d: &BLDatum) -> Result<InequalityReport> {
    check_datum(k, d)?;
    let vol = positive_volume(&k.vertices()?)?;
    let lhs = PowerProduct::rational(vol);
    let mut rhs = liakopoulos_constant(d);
    for e in d.entries() {
        let m = section(k, &e.subspace)?.measure;
        rhs = rhs.mul(&PowerProduct::measure(&m).pow(&e.weight));
    }
    Ok(report("liakopoulos", Relation::Ge, &lhs, &rhs))
}

/// `Y = λ X + z` with `λ > 0`, when it holds.
fn homothety(x: &VPolytope, y: &VPolytope, vx: &Rational, vy: &Rational) -> Option<Rational> {
    if x.vertices().len() != y.vertices().len() {
        return None;
    }
    let n = x.dim();
    let lambda = PowerProduct::power(vy / vx, Rational::new(BigInt::one(), BigInt::from(n))).as_rational()?;
    // Positive scaling preserves the lexicographic vertex order.
    let z = sub(&y.vertices()[0], &crate::linalg::scale(&lambda, &x.vertices()[0]));
    let image = x.dilated(&lambda).translated(&z).ok()?;
    (image.vertices() == y.vertices()).then_some(lambda)
}

/// `|αX + βY|^{1/n} >= α|X|^{1/n} + β|Y|^{1/n}`.
pub fn verify_brunn_minkowski(
    x: &VPolytope,
    y: &VPolytope,
    alpha: &Rational,
    beta: &Rational,
) -> Result<InequalityReport> {
    let n = x.dim();
    if y.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: y.dim(),
        });
    }
    if !alpha.is_positive() || !beta.is_positive() {
        return Err(Error::Invalid("Brunn-Minkowski weights must be positive".into()));
    }
    let vx = positive_volume(x)?;
    let vy = positive_volume(y)?;
    let z = minkowski_combination(&[(alpha.clone(), x.clone()), (beta.clone(), y.clone())])?;
    let vz = z.volume()?;
    let inv_n = Rational::new(BigInt::one(), BigInt::from(n));
    let lhs = PowerProduct::power(vz.clone(), inv_n.clone());
    let tx = PowerProduct::rational(alpha.clone()).mul(&PowerProduct::power(vx.clone(), inv_n.clone()));
    let ty = PowerProduct::rational(beta.clone()).mul(&PowerProduct::power(vy.clone(), inv_n));

    let mut notes = Vec::new();
    let exact = match (lhs.as_rational(), tx.as_rational(), ty.as_rational()) {
        (Some(l), Some(a), Some(b)) => Some(l.cmp(&(a + b))),
        _ => match homothety(x, y, &vx, &vy) {
            Some(lambda) => {
                notes.push(format!("Y = {} X + z", format_rational(&lambda)));
                let expected = num_traits::pow(alpha + beta * &lambda, n) * &vx;
                if expected == vz {
                    Some(Ordering::Equal)
                } else {
                    None
                }
            }
            None => None,
        },
    };
    let enclose = |p: u64| {
        let r = tx.interval(p).add(&ty.interval(p));
        (lhs.interval(p), r)
    };
    let cmp = compare_with(exact, enclose);
    let rhs_interval = tx.interval(INTERVAL_ROUNDS[0]).add(&ty.interval(INTERVAL_ROUNDS[0]));
    let rhs = Quantity {
        expression: format!("{tx} + {ty}"),
        exact: match (tx.as_rational(), ty.as_rational()) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        },
        interval: DecimalInterval::enclosing(&rhs_interval),
    };
    Ok(build(
        "brunn-minkowski",
        Relation::Ge,
        Quantity::from_product(&lhs),
        rhs,
        cmp,
        notes,
    ))
}

/// Sections `K ∩ E_i` as lower-dimensional V-polytopes in the ambient space.
pub fn lifted_section(k: &HPolytope, e: &Subspace) -> Result<VPolytope> {
    let s = section(k, e)?;
    let pts = s
        .coords
        .vertices()?
        .vertices()
        .iter()
        .map(|t| e.lift(t))
        .collect::<Result<Vec<_>>>()?;
    VPolytope::new(k.dim(), pts)
}

/// Indicator case: `|sum c_i (K ∩ E_i)| >= prod_i |K ∩ E_i|^{c_i}`.
pub fn verify_rbl_indicators(k: &HPolytope, d: &BLDatum) -> Result<InequalityReport> {
    check_datum(k, d)?;
    let mut terms = Vec::with_capacity(d.len());
    let mut rhs = PowerProduct::one();
    for e in d.entries() {
        let m = section(k, &e.subspace)?.measure;
        rhs = rhs.mul(&PowerProduct::measure(&m).pow(&e.weight));
        terms.push((e.weight.clone(), lifted_section(k, &e.subspace)?));
    }
    let sum = minkowski_combination(&terms)?;
    let vol = if sum.is_full_dimensional() {
        sum.volume()?
    } else {
        Rational::zero()
    };
    let lhs = PowerProduct::rational(vol);
    Ok(report("rbl-indicators", Relation::Ge, &lhs, &rhs))
}

/// `det(sum c_i P_{E_i})`; equals 1 for a geometric datum.
pub fn gaussian_bl_constant(d: &BLDatum) -> Rational {
    determinant(&d.weighted_projection_sum()).expect("square")
}

/// Encloses `lhs / rhs` from a report for sorting and display.
pub fn ratio_midpoint(r: &InequalityReport) -> Option<Rational> {
    r.ratio.as_ref().map(|q| q.0.midpoint())
}

#[cfg(test)]
mod tests;
