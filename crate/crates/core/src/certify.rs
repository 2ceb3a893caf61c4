//! Equality certificates: rebuild the candidate extremal body from the
//! structure of the cover or datum and compare volumes exactly.

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cover::{coordinate_subspace, induced_partition, validate_cover, UniformCover};
use crate::datum::{decompose, BLDatum};
use crate::error::{Error, Result};
use crate::linalg::{format_rational, Rational, RationalVector};
use crate::optimize::norm_decompose;
use crate::polytope::{conv_of_sections, direct_sum_of_projections, Body, HPolytope, VPolytope};
use crate::random::{random_point, random_rational, stream_rng, SAMPLE_BOUND};
use crate::subspace::{is_direct_sum_decomposition, Subspace};
use crate::verify::{lifted_section, verify_bollobas_thomason, verify_liakopoulos};
use crate::compare::EqualityChannel;

pub const REASON_DEPENDENT: &str = "dependent space nontrivial";
pub const REASON_NOT_SPANNING: &str = "independent subspaces do not span";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Equality,
    Strict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub check: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Witness {
    fn new(check: &str, passed: bool, detail: String) -> Self {
        Self {
            check: check.to_string(),
            passed,
            detail,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqualityCertificate {
    pub verdict: Verdict,
    pub independent: Vec<Subspace>,
    pub spanning: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub reconstruction: Option<VPolytope>,
    #[serde(with = "crate::serde_q::scalar")]
    pub volume_k: Rational,
    #[serde(with = "crate::serde_q::option_scalar")]
    pub volume_reconstruction: Option<Rational>,
    pub witnesses: Vec<Witness>,
}

impl EqualityCertificate {
    pub fn is_equality(&self) -> bool {
        self.verdict == Verdict::Equality
    }

    /// Every recorded check passed.
    pub fn consistent(&self) -> bool {
        self.witnesses.iter().all(|w| w.passed)
    }
}

fn agreement(verdict: Verdict, channel: EqualityChannel) -> Witness {
    let (passed, detail) = match channel {
        EqualityChannel::ExactYes => (verdict == Verdict::Equality, "verifier: exact equality"),
        EqualityChannel::ExactNo => (verdict == Verdict::Strict, "verifier: exact strict"),
        _ => (true, "verifier channel not exact; no comparison"),
    };
    Witness::new("verifier agreement", passed, detail.to_string())
}

fn contained(inner: &VPolytope, outer: &HPolytope) -> Result<bool> {
    for v in inner.vertices() {
        if !outer.contains(v)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `K` equals the sum of its projections onto the blocks of the induced partition.
pub fn certify_bt_equality(k: &Body, c: &UniformCover) -> Result<EqualityCertificate> {
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
    let volume_k = v.volume()?;
    let parts = induced_partition(c)?
        .iter()
        .map(|b| coordinate_subspace(n, b))
        .collect::<Result<Vec<_>>>()?;
    let b = direct_sum_of_projections(&v, &parts)?;
    let volume_b = b.volume()?;
    let verdict = if volume_k == volume_b {
        Verdict::Equality
    } else {
        Verdict::Strict
    };
    let mut witnesses = vec![
        Witness::new("K inside B", contained(&v, &b.facets()?)?, String::new()),
        Witness::new(
            "volumes",
            true,
            format!("|K| = {}, |B| = {}", format_rational(&volume_k), format_rational(&volume_b)),
        ),
    ];
    let report = verify_bollobas_thomason(k, c)?;
    witnesses.push(agreement(verdict, report.equality));
    Ok(EqualityCertificate {
        verdict,
        independent: parts,
        spanning: true,
        reason: None,
        reconstruction: Some(b),
        volume_k,
        volume_reconstruction: Some(volume_b),
        witnesses,
    })
}

fn check_liakopoulos_inputs(k: &HPolytope, d: &BLDatum) -> Result<()> {
    if d.ambient_dim() != k.dim() {
        return Err(Error::DimensionMismatch {
            expected: k.dim(),
            found: d.ambient_dim(),
        });
    }
    if !k.origin_is_interior() {
        return Err(Error::OriginNotInterior);
    }
    if !d.is_valid() {
        return Err(Error::InvalidDatum(
            "weighted projections do not sum to the identity".into(),
        ));
    }
    Ok(())
}

/// Equality iff the independent subspaces span and `K = conv{K ∩ F_j}`.
pub fn certify_liakopoulos_equality(k: &HPolytope, d: &BLDatum) -> Result<EqualityCertificate> {
    check_liakopoulos_inputs(k, d)?;
    let n = k.dim();
    let volume_k = k.volume()?;
    let dec = decompose(d)?;
    let independent = dec.independent.clone();
    let report = verify_liakopoulos(k, d)?;

    let reason = if !dec.dependent_is_trivial() {
        Some(REASON_DEPENDENT)
    } else if !is_direct_sum_decomposition(&independent, n) {
        Some(REASON_NOT_SPANNING)
    } else {
        None
    };
    if let Some(reason) = reason {
        let verdict = Verdict::Strict;
        return Ok(EqualityCertificate {
            verdict,
            independent,
            spanning: false,
            reason: Some(reason.to_string()),
            reconstruction: None,
            volume_k,
            volume_reconstruction: None,
            witnesses: vec![
                Witness::new("structure", true, format!("dim F_dep = {}", dec.dependent.dim())),
                agreement(verdict, report.equality),
            ],
        });
    }

    let m = conv_of_sections(k, &independent)?;
    let volume_m = m.volume()?;
    let verdict = if volume_m == volume_k {
        Verdict::Equality
    } else {
        Verdict::Strict
    };
    let witnesses = vec![
        Witness::new("dependent space", true, "F_dep = {0}".to_string()),
        Witness::new("M inside K", contained(&m, k)?, String::new()),
        Witness::new(
            "volumes",
            true,
            format!("|K| = {}, |M| = {}", format_rational(&volume_k), format_rational(&volume_m)),
        ),
        agreement(verdict, report.equality),
    ];
    Ok(EqualityCertificate {
        verdict,
        independent,
        spanning: true,
        reason: None,
        reconstruction: Some(m),
        volume_k,
        volume_reconstruction: Some(volume_m),
        witnesses,
    })
}

/// One exact comparison `lhs = rhs` at a point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointCheck {
    #[serde(with = "crate::serde_q::vector")]
    pub point: RationalVector,
    #[serde(with = "crate::serde_q::scalar")]
    pub lhs: Rational,
    #[serde(with = "crate::serde_q::scalar")]
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdditivityReport {
    /// Points of the `E_i` tested for `||x||_K = sum_j ||P_{F_j} x||_K`.
    pub subspace_checks: usize,
    pub subspace_failures: Vec<PointCheck>,
    /// Ambient points tested for `||z||_M = sum_j ||P_{F_j} z||_K`.
    pub ambient_checks: usize,
    pub ambient_failures: Vec<PointCheck>,
    pub all_pass: bool,
}

fn split_gauge(k: &HPolytope, parts: &[Subspace], x: &[Rational]) -> Result<Rational> {
    parts.iter().try_fold(Rational::zero(), |acc, f| Ok(acc + k.gauge(&f.project(x)?)?))
}

/// Exact additivity of the gauge across the independent subspaces, on
/// seeded random points of each `E_i`, on the vertices of each section, and
/// on random ambient points against `M = conv{K ∩ F_j}`.
pub fn check_norm_additivity(
    k: &HPolytope,
    d: &BLDatum,
    samples: usize,
    seed: u64,
) -> Result<AdditivityReport> {
    check_liakopoulos_inputs(k, d)?;
    let n = k.dim();
    let dec = decompose(d)?;
    if !dec.dependent_is_trivial() || !is_direct_sum_decomposition(&dec.independent, n) {
        return Err(Error::NotSpanning);
    }
    let parts = dec.independent;

    let mut points: Vec<RationalVector> = Vec::new();
    for (i, e) in d.entries().iter().enumerate() {
        let mut rng = stream_rng(seed, i as u64);
        for _ in 0..samples {
            let t: RationalVector = (0..e.subspace.dim())
                .map(|_| random_rational(&mut rng, SAMPLE_BOUND))
                .collect();
            points.push(e.subspace.lift(&t)?);
        }
        points.extend(lifted_section(k, &e.subspace)?.vertices().iter().cloned());
    }
    let subspace_failures: Vec<PointCheck> = points
        .par_iter()
        .map(|x| -> Result<Option<PointCheck>> {
            let lhs = k.gauge(x)?;
            let rhs = split_gauge(k, &parts, x)?;
            Ok((lhs != rhs).then(|| PointCheck {
                point: x.clone(),
                lhs,
                rhs,
            }))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let m = conv_of_sections(k, &parts)?.facets()?;
    let mut rng = stream_rng(seed, d.len() as u64);
    let ambient: Vec<RationalVector> = (0..samples)
        .map(|_| random_point(&mut rng, n, SAMPLE_BOUND))
        .collect();
    let ambient_failures: Vec<PointCheck> = ambient
        .par_iter()
        .map(|z| -> Result<Option<PointCheck>> {
            let lhs = m.gauge(z)?;
            let rhs = split_gauge(k, &parts, z)?;
            Ok((lhs != rhs).then(|| PointCheck {
                point: z.clone(),
                lhs,
                rhs,
            }))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    Ok(AdditivityReport {
        subspace_checks: points.len(),
        all_pass: subspace_failures.is_empty() && ambient_failures.is_empty(),
        subspace_failures,
        ambient_checks: ambient.len(),
        ambient_failures,
    })
}

/// `inf { sum ||y_i||_K : z = sum y_i, y_i ∈ E_i } - ||z||_K`, never negative.
pub fn inf_decomposition_gap(k: &HPolytope, d: &BLDatum, z: &[Rational]) -> Result<Rational> {
    let value = norm_decompose(k, &d.subspaces(), z)?.value;
    Ok(value - k.gauge(z)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfDecompositionReport {
    pub points: Vec<PointCheck>,
    #[serde(with = "crate::serde_q::scalar")]
    pub max_gap: Rational,
    pub all_zero: bool,
}

/// Gap between the infimal decomposition and the gauge at seeded random points.
/// Each [`PointCheck`] holds the LP value as `lhs` and the gauge as `rhs`.
pub fn check_inf_decomposition_equality(
    k: &HPolytope,
    d: &BLDatum,
    samples: usize,
    seed: u64,
) -> Result<InfDecompositionReport> {
    check_liakopoulos_inputs(k, d)?;
    let mut rng = stream_rng(seed, 0);
    let zs: Vec<RationalVector> = (0..samples)
        .map(|_| random_point(&mut rng, k.dim(), SAMPLE_BOUND))
        .collect();
    let subspaces = d.subspaces();
    let points = zs
        .par_iter()
        .map(|z| {
            let value = norm_decompose(k, &subspaces, z)?.value;
            Ok(PointCheck {
                point: z.clone(),
                lhs: value,
                rhs: k.gauge(z)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_gap = points
        .iter()
        .map(|p| &p.lhs - &p.rhs)
        .fold(Rational::zero(), |a, g| if g > a { g } else { a });
    Ok(InfDecompositionReport {
        all_zero: max_gap.is_zero(),
        max_gap,
        points,
    })
}

#[cfg(test)]
mod tests;
