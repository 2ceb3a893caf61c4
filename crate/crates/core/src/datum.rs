//! Geometric Brascamp-Lieb data `(E_i, c_i)` with `sum c_i P_{E_i} = I_n`,
//! and their structure: critical subspaces, independent subspaces and the
//! dependent space.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{int, Rational, RationalMatrix};
use crate::subspace::{identity_like, Subspace};

/// Enumeration over sign patterns is capped at this many subspaces.
pub const MAX_ENTRIES: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumEntry {
    pub subspace: Subspace,
    #[serde(with = "crate::serde_q::scalar")]
    pub weight: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DatumRepr", into = "DatumRepr")]
pub struct BLDatum {
    ambient_dim: usize,
    entries: Vec<DatumEntry>,
    valid: bool,
}

#[derive(Serialize, Deserialize)]
struct DatumRepr {
    ambient_dim: usize,
    entries: Vec<DatumEntry>,
}

impl TryFrom<DatumRepr> for BLDatum {
    type Error = Error;
    fn try_from(r: DatumRepr) -> Result<Self> {
        BLDatum::new(r.ambient_dim, r.entries)
    }
}

impl From<BLDatum> for DatumRepr {
    fn from(d: BLDatum) -> Self {
        DatumRepr {
            ambient_dim: d.ambient_dim,
            entries: d.entries,
        }
    }
}

/// Outcome of [`validate_datum`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DatumValidation {
    pub valid: bool,
    /// `sum c_i P_{E_i} - I_n`.
    pub residual: RationalMatrix,
    /// `sum c_i dim E_i - n`.
    pub trace_defect: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalReport {
    /// `sum c_i dim(E_i ∩ V)`.
    pub weighted_dimension: Rational,
    pub dim: usize,
    /// The dimension identity holds.
    pub critical: bool,
    /// Every `E_i` splits as `(E_i ∩ V) + (E_i ∩ V^⊥)`.
    pub splits: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    /// Independent subspaces in lexicographic sign-pattern order.
    pub independent: Vec<Subspace>,
    pub dependent: Subspace,
    /// For each independent subspace, the indices `i` with `F_j ⊆ E_i`.
    pub membership: Vec<Vec<usize>>,
}

impl DecompositionReport {
    pub fn dependent_is_trivial(&self) -> bool {
        self.dependent.is_trivial()
    }
}

impl BLDatum {
    /// Rejects trivial or full subspaces and non-positive weights. The datum
    /// identity itself is not required; see [`BLDatum::is_valid`].
    pub fn new(ambient_dim: usize, entries: Vec<DatumEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidDatum("no entries".into()));
        }
        for (index, e) in entries.iter().enumerate() {
            if e.subspace.ambient_dim() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: e.subspace.ambient_dim(),
                });
            }
            if e.subspace.is_trivial() {
                return Err(Error::TrivialSubspace);
            }
            if e.subspace.is_whole() {
                return Err(Error::FullSubspace { index });
            }
            if e.weight <= Rational::zero() {
                return Err(Error::NonPositiveWeight { index });
            }
        }
        let mut d = Self {
            ambient_dim,
            entries,
            valid: false,
        };
        d.valid = validate_datum(&d).valid;
        Ok(d)
    }

    pub fn from_pairs(ambient_dim: usize, pairs: Vec<(Subspace, Rational)>) -> Result<Self> {
        Self::new(
            ambient_dim,
            pairs
                .into_iter()
                .map(|(subspace, weight)| DatumEntry { subspace, weight })
                .collect(),
        )
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn entries(&self) -> &[DatumEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn subspaces(&self) -> Vec<Subspace> {
        self.entries.iter().map(|e| e.subspace.clone()).collect()
    }

    pub fn weights(&self) -> Vec<Rational> {
        self.entries.iter().map(|e| e.weight.clone()).collect()
    }

    /// Whether `sum c_i P_{E_i} = I_n` holds exactly.
    pub fn is_valid(&self) -> bool {
        self.valid
    }

    /// `sum c_i P_{E_i}`.
    pub fn weighted_projection_sum(&self) -> RationalMatrix {
        let n = self.ambient_dim;
        self.entries
            .iter()
            .fold(RationalMatrix::zeros(n, n), |acc, e| {
                acc.add(&e.subspace.projection().scaled(&e.weight))
                    .expect("projections are n x n")
            })
    }

    fn require_valid(&self) -> Result<()> {
        if self.valid {
            Ok(())
        } else {
            Err(Error::InvalidDatum(
                "weighted projections do not sum to the identity".into(),
            ))
        }
    }
}

pub fn validate_datum(d: &BLDatum) -> DatumValidation {
    let sum = d.weighted_projection_sum();
    let valid = identity_like(&sum);
    let residual = sum
        .sub(&RationalMatrix::identity(d.ambient_dim))
        .expect("square");
    DatumValidation {
        valid,
        residual,
        trace_defect: datum_dimension_check(d),
    }
}

/// `sum c_i dim E_i - n`; zero for every valid datum.
pub fn datum_dimension_check(d: &BLDatum) -> Rational {
    d.entries
        .iter()
        .fold(Rational::zero(), |acc, e| acc + &e.weight * int(e.subspace.dim() as i64))
        - int(d.ambient_dim as i64)
}

pub fn is_critical_subspace(d: &BLDatum, v: &Subspace) -> Result<CriticalReport> {
    if v.ambient_dim() != d.ambient_dim {
        return Err(Error::DimensionMismatch {
            expected: d.ambient_dim,
            found: v.ambient_dim(),
        });
    }
    if v.is_trivial() {
        return Err(Error::TrivialSubspace);
    }
    d.require_valid()?;
    let v_perp = v.orthogonal_complement();
    let mut weighted = Rational::zero();
    let mut splits = true;
    for e in &d.entries {
        let inside = e.subspace.intersect(v)?;
        weighted += &e.weight * int(inside.dim() as i64);
        let across = e.subspace.intersect(&v_perp)?;
        if inside.dim() + across.dim() != e.subspace.dim() {
            splits = false;
        }
    }
    Ok(CriticalReport {
        critical: weighted == int(v.dim() as i64),
        weighted_dimension: weighted,
        dim: v.dim(),
        splits,
    })
}

/// Enumerates sign patterns `ε` depth-first (`E_i` before `E_i^⊥`, i.e.
/// lexicographic order), pruning a branch once the running intersection
/// collapses to `{0}`.
pub fn decompose(d: &BLDatum) -> Result<DecompositionReport> {
    d.require_valid()?;
    let k = d.entries.len();
    if k > MAX_ENTRIES {
        return Err(Error::TooManySubspaces(k));
    }
    let n = d.ambient_dim;
    let spaces = d.subspaces();
    let complements: Vec<Subspace> = spaces.iter().map(Subspace::orthogonal_complement).collect();

    let mut independent = Vec::new();
    let mut membership = Vec::new();
    let mut pattern = Vec::with_capacity(k);
    walk(
        &spaces,
        &complements,
        Subspace::whole(n),
        &mut pattern,
        &mut independent,
        &mut membership,
    )?;

    let total = independent
        .iter()
        .try_fold(Subspace::zero(n), |acc: Subspace, f| acc.sum(f))?;
    Ok(DecompositionReport {
        dependent: total.orthogonal_complement(),
        independent,
        membership,
    })
}

fn walk(
    spaces: &[Subspace],
    complements: &[Subspace],
    current: Subspace,
    pattern: &mut Vec<bool>,
    out: &mut Vec<Subspace>,
    membership: &mut Vec<Vec<usize>>,
) -> Result<()> {
    let i = pattern.len();
    if i == spaces.len() {
        membership.push(
            pattern
                .iter()
                .enumerate()
                .filter(|(_, &inside)| inside)
                .map(|(j, _)| j)
                .collect(),
        );
        out.push(current);
        return Ok(());
    }
    for (inside, factor) in [(true, &spaces[i]), (false, &complements[i])] {
        let next = current.intersect(factor)?;
        if next.is_trivial() {
            continue;
        }
        pattern.push(inside);
        walk(spaces, complements, next, pattern, out, membership)?;
        pattern.pop();
    }
    Ok(())
}

/// `sum_{i : F ⊆ E_i} c_i`, which equals one for each independent subspace.
pub fn containing_weight(d: &BLDatum, f: &Subspace) -> Result<Rational> {
    let mut total = Rational::zero();
    for e in &d.entries {
        if e.subspace.contains_subspace(f)? {
            total += &e.weight;
        }
    }
    Ok(total)
}

/// `E_i = e_i^⊥` with weight `1/(n-1)`.
pub fn loomis_whitney_datum(n: usize) -> BLDatum {
    assert!(n >= 2, "Loomis-Whitney datum needs n >= 2");
    let w = Rational::new(One::one(), (n as i64 - 1).into());
    let pairs = (0..n)
        .map(|i| {
            let basis: Vec<_> = (0..n)
                .filter(|&j| j != i)
                .map(|j| crate::linalg::unit_vec(n, j))
                .collect();
            (Subspace::new(n, &basis).expect("unit vectors"), w.clone())
        })
        .collect();
    BLDatum::from_pairs(n, pairs).expect("coordinate hyperplanes are proper")
}

/// `E_i = span(e_i)` with weight one.
pub fn axes_datum(n: usize) -> BLDatum {
    assert!(n >= 2, "axes datum needs n >= 2");
    let pairs = (0..n)
        .map(|i| {
            (
                Subspace::new(n, &[crate::linalg::unit_vec(n, i)]).expect("unit vector"),
                Rational::one(),
            )
        })
        .collect();
    BLDatum::from_pairs(n, pairs).expect("coordinate axes are proper")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, rvec};

    fn span(n: usize, vs: &[&[i64]]) -> Subspace {
        Subspace::new(n, &vs.iter().map(|v| rvec(v)).collect::<Vec<_>>()).unwrap()
    }

    fn datum(n: usize, pairs: &[(&[&[i64]], Rational)]) -> BLDatum {
        BLDatum::from_pairs(
            n,
            pairs
                .iter()
                .map(|(vs, c)| (span(n, vs), c.clone()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn validate_examples() {
        let d = datum(2, &[(&[&[1, 0]], int(1)), (&[&[0, 1]], int(1))]);
        assert!(validate_datum(&d).valid);

        let lw = loomis_whitney_datum(3);
        let v = validate_datum(&lw);
        assert!(v.valid);
        assert!(v.residual.is_zero());
        assert_eq!(v.trace_defect, int(0));

        let bad = datum(
            2,
            &[
                (&[&[1, 0]], rat(1, 2)),
                (&[&[0, 1]], rat(1, 2)),
                (&[&[1, 1]], int(1)),
            ],
        );
        let v = validate_datum(&bad);
        assert!(!v.valid);
        // residual = P_{(1,1)} - (1/2) I = [[0, 1/2], [1/2, 0]]
        assert_eq!(v.residual[(0, 1)], rat(1, 2));
        assert_eq!(v.residual[(0, 0)], int(0));
        assert!(!bad.is_valid());
    }

    #[test]
    fn construction_errors() {
        let r = BLDatum::from_pairs(2, vec![(Subspace::whole(2), int(1))]);
        assert!(matches!(r, Err(Error::FullSubspace { index: 0 })));
        let r = BLDatum::from_pairs(2, vec![(Subspace::zero(2), int(1))]);
        assert_eq!(r, Err(Error::TrivialSubspace));
        let r = BLDatum::from_pairs(2, vec![(span(2, &[&[1, 0]]), int(0))]);
        assert!(matches!(r, Err(Error::NonPositiveWeight { .. })));
    }

    #[test]
    fn critical_examples() {
        let lw = loomis_whitney_datum(3);
        let r = is_critical_subspace(&lw, &span(3, &[&[1, 0, 0]])).unwrap();
        assert!(r.critical && r.splits);
        assert_eq!(r.weighted_dimension, int(1));

        let r = is_critical_subspace(&lw, &span(3, &[&[1, 1, 1]])).unwrap();
        assert!(!r.critical && !r.splits);
        assert_eq!(r.weighted_dimension, int(0));

        let r = is_critical_subspace(&lw, &Subspace::whole(3)).unwrap();
        assert!(r.critical && r.splits);

        assert_eq!(
            is_critical_subspace(&lw, &Subspace::zero(3)),
            Err(Error::TrivialSubspace)
        );
    }

    #[test]
    fn decompose_examples() {
        let cover = datum(
            3,
            &[
                (&[&[1, 0, 0], &[0, 1, 0]], rat(1, 2)),
                (&[&[0, 1, 0], &[0, 0, 1]], rat(1, 2)),
                (&[&[1, 0, 0], &[0, 0, 1]], rat(1, 2)),
            ],
        );
        let r = decompose(&cover).unwrap();
        assert_eq!(r.independent.len(), 3);
        assert!(r.dependent.is_trivial());
        // ε = (0,0,1) gives E1 ∩ E2 ∩ E3^⊥ = span(e2), first in lexicographic order
        assert!(r.independent[0].equals(&span(3, &[&[0, 1, 0]])).unwrap());
        assert_eq!(r.membership[0], vec![0, 1]);

        let axes = axes_datum(2);
        let r = decompose(&axes).unwrap();
        assert_eq!(r.independent.len(), 2);
        assert!(r.independent[0].equals(&span(2, &[&[1, 0]])).unwrap());
        assert!(r.independent[1].equals(&span(2, &[&[0, 1]])).unwrap());
        assert!(r.dependent.is_trivial());

        let dup = datum(
            2,
            &[
                (&[&[1, 0]], rat(1, 2)),
                (&[&[0, 1]], int(1)),
                (&[&[1, 0]], rat(1, 2)),
            ],
        );
        let r = decompose(&dup).unwrap();
        assert_eq!(r.independent.len(), 2);
        assert!(r.independent[0].equals(&span(2, &[&[1, 0]])).unwrap());
        assert_eq!(r.membership[0], vec![0, 2]);
        assert!(r.dependent.is_trivial());
    }

    #[test]
    fn frame_without_independent_subspaces() {
        let h = rat(1, 2);
        let d = datum(
            2,
            &[
                (&[&[1, 0]], h.clone()),
                (&[&[0, 1]], h.clone()),
                (&[&[1, 1]], h.clone()),
                (&[&[1, -1]], h),
            ],
        );
        assert!(d.is_valid());
        let r = decompose(&d).unwrap();
        assert!(r.independent.is_empty());
        assert!(r.dependent.is_whole());
    }

    #[test]
    fn dimension_check_examples() {
        assert_eq!(datum_dimension_check(&loomis_whitney_datum(3)), int(0));
        let doubled = datum(
            3,
            &[
                (&[&[0, 1, 0], &[0, 0, 1]], int(1)),
                (&[&[1, 0, 0], &[0, 0, 1]], int(1)),
                (&[&[1, 0, 0], &[0, 1, 0]], int(1)),
            ],
        );
        assert_eq!(datum_dimension_check(&doubled), int(3));
        let d = datum(2, &[(&[&[1, 0]], int(1)), (&[&[0, 1]], rat(1, 2))]);
        assert_eq!(datum_dimension_check(&d), rat(-1, 2));
    }

    #[test]
    fn independent_subspace_properties() {
        let h = rat(1, 2);
        let tilted = datum(
            3,
            &[
                (&[&[1, 1, 0]], int(1)),
                (&[&[1, -1, 0]], int(1)),
                (&[&[0, 0, 1]], h.clone()),
                (&[&[0, 0, 1]], h),
            ],
        );
        assert!(tilted.is_valid());
        let r = decompose(&tilted).unwrap();
        assert_eq!(r.independent.len(), 3);
        for (f, members) in r.independent.iter().zip(&r.membership) {
            for (i, e) in tilted.entries().iter().enumerate() {
                let inside = e.subspace.contains_subspace(f).unwrap();
                let across = e.subspace.orthogonal_complement().contains_subspace(f).unwrap();
                assert!(inside || across);
                assert_eq!(inside, members.contains(&i));
            }
            assert_eq!(containing_weight(&tilted, f).unwrap(), int(1));
            assert!(is_critical_subspace(&tilted, f).unwrap().critical);
        }
        for (i, a) in r.independent.iter().enumerate() {
            for b in &r.independent[i + 1..] {
                assert!(a.is_orthogonal_to(b).unwrap());
            }
        }
    }

    #[test]
    fn json_roundtrip() {
        let d = loomis_whitney_datum(3);
        let s = serde_json::to_string(&d).unwrap();
        assert!(s.contains("\"weight\":\"1/2\""));
        let back: BLDatum = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
    }
}
