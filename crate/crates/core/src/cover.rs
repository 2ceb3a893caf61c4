//! s-uniform covers of `[n]`, their induced partitions, and the coordinate
//! Brascamp-Lieb data they generate.
//!
//! Elements are 0-based in memory and 1-based in JSON.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::datum::{BLDatum, DatumEntry};
use crate::error::{Error, Result};
use crate::linalg::{unit_vec, Rational};
use crate::subspace::Subspace;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CoverRepr", into = "CoverRepr")]
pub struct UniformCover {
    n: usize,
    s: usize,
    sets: Vec<BTreeSet<usize>>,
}

#[derive(Serialize, Deserialize)]
struct CoverRepr {
    n: usize,
    s: usize,
    sets: Vec<Vec<usize>>,
}

impl TryFrom<CoverRepr> for UniformCover {
    type Error = Error;
    fn try_from(r: CoverRepr) -> Result<Self> {
        let mut sets = Vec::with_capacity(r.sets.len());
        for set in r.sets {
            let mut zero_based = BTreeSet::new();
            for j in set {
                if j == 0 || j > r.n {
                    return Err(Error::InvalidCover(format!(
                        "element {j} outside 1..={}",
                        r.n
                    )));
                }
                zero_based.insert(j - 1);
            }
            sets.push(zero_based);
        }
        UniformCover::new(r.n, r.s, sets)
    }
}

impl From<UniformCover> for CoverRepr {
    fn from(c: UniformCover) -> Self {
        CoverRepr {
            n: c.n,
            s: c.s,
            sets: c
                .sets
                .iter()
                .map(|s| s.iter().map(|j| j + 1).collect())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverValidation {
    pub valid: bool,
    /// Number of sets containing each element.
    pub multiplicity: Vec<usize>,
}

impl UniformCover {
    /// Structural checks only (elements in range, sets non-empty and proper);
    /// uniformity is reported by [`validate_cover`].
    pub fn new(n: usize, s: usize, sets: Vec<BTreeSet<usize>>) -> Result<Self> {
        if n == 0 || s == 0 {
            return Err(Error::InvalidCover("n and s must be positive".into()));
        }
        for (i, set) in sets.iter().enumerate() {
            if set.is_empty() {
                return Err(Error::InvalidCover(format!("set {} is empty", i + 1)));
            }
            if set.len() == n {
                return Err(Error::InvalidCover(format!("set {} is all of [n]", i + 1)));
            }
            if let Some(&j) = set.iter().find(|&&j| j >= n) {
                return Err(Error::InvalidCover(format!("element {} outside [n]", j + 1)));
            }
        }
        Ok(Self { n, s, sets })
    }

    /// Builds from 1-based element lists.
    pub fn from_one_based(n: usize, s: usize, sets: &[&[usize]]) -> Result<Self> {
        CoverRepr {
            n,
            s,
            sets: sets.iter().map(|s| s.to_vec()).collect(),
        }
        .try_into()
    }

    /// `σ_i = [n] \ {i}`, the Loomis-Whitney cover with `s = n - 1`.
    pub fn loomis_whitney(n: usize) -> Self {
        let sets = (0..n).map(|i| (0..n).filter(|&j| j != i).collect()).collect();
        Self::new(n, n - 1, sets).expect("n >= 2")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn sets(&self) -> &[BTreeSet<usize>] {
        &self.sets
    }
}

pub fn validate_cover(c: &UniformCover) -> CoverValidation {
    let mut multiplicity = vec![0; c.n];
    for set in &c.sets {
        for &j in set {
            multiplicity[j] += 1;
        }
    }
    CoverValidation {
        valid: multiplicity.iter().all(|&m| m == c.s),
        multiplicity,
    }
}

fn require_valid(c: &UniformCover) -> Result<()> {
    let v = validate_cover(c);
    if v.valid {
        Ok(())
    } else {
        Err(Error::InvalidCover(format!(
            "multiplicities {:?} differ from s = {}",
            v.multiplicity, c.s
        )))
    }
}

/// Refines `{[n]}` by each `σ_i` in turn. Blocks are returned sorted by
/// their smallest element.
pub fn induced_partition(c: &UniformCover) -> Result<Vec<BTreeSet<usize>>> {
    require_valid(c)?;
    let mut blocks: Vec<BTreeSet<usize>> = vec![(0..c.n).collect()];
    for set in &c.sets {
        blocks = blocks
            .into_iter()
            .flat_map(|b| {
                let (inside, outside): (BTreeSet<usize>, BTreeSet<usize>) =
                    b.into_iter().partition(|j| set.contains(j));
                [inside, outside]
            })
            .filter(|b| !b.is_empty())
            .collect();
    }
    blocks.sort_by_key(|b| *b.iter().next().expect("blocks are non-empty"));
    Ok(blocks)
}

/// `E_σ = lin{e_i : i ∈ σ}` for a 0-based `σ`.
pub fn coordinate_subspace(n: usize, sigma: &BTreeSet<usize>) -> Result<Subspace> {
    if sigma.is_empty() {
        return Err(Error::Invalid("coordinate set must be non-empty".into()));
    }
    if let Some(&j) = sigma.iter().find(|&&j| j >= n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: j + 1,
        });
    }
    let basis: Vec<_> = sigma.iter().map(|&i| unit_vec(n, i)).collect();
    Subspace::new(n, &basis)
}

/// The datum `(E_{σ_i}, 1/s)`.
pub fn datum_from_cover(c: &UniformCover) -> Result<BLDatum> {
    require_valid(c)?;
    let w = Rational::new(1.into(), (c.s as i64).into());
    let entries = c
        .sets
        .iter()
        .map(|set| {
            Ok(DatumEntry {
                subspace: coordinate_subspace(c.n, set)?,
                weight: w.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    BLDatum::new(c.n, entries)
}
