//! Randomized exploration of the Liakopoulos ratio `|K| / rhs` over seeded
//! random polytopes.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certify::{certify_liakopoulos_equality, EqualityCertificate};
use crate::compare::{DecimalInterval, EqualityChannel};
use crate::datum::BLDatum;
use crate::error::{Error, Result};
use crate::linalg::Rational;
use crate::polytope::VPolytope;
use crate::random::{random_body, stream_rng};
use crate::verify::{ratio_midpoint, verify_liakopoulos};

/// Bound on the numerators of extra random vertices.
pub const COORD_BOUND: i64 = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchEntry {
    pub trial: u64,
    pub ratio: DecimalInterval,
    #[serde(with = "crate::serde_q::option_scalar")]
    pub exact_ratio: Option<Rational>,
    pub equality: EqualityChannel,
    pub body: VPolytope,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<EqualityCertificate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchTable {
    pub trials: u64,
    pub seed: u64,
    /// Trials whose ratio is exactly 1.
    pub exact_hits: usize,
    /// Exact hits the certifier confirms as equality cases.
    pub certified_hits: usize,
    /// Trials proven to violate the inequality; always zero for a sound build.
    pub violations: usize,
    pub entries: Vec<SearchEntry>,
}

impl SearchTable {
    pub fn min_ratio(&self) -> Option<&DecimalInterval> {
        self.entries.first().map(|e| &e.ratio)
    }
}

struct Trial {
    entry: SearchEntry,
    key: Rational,
    violated: bool,
}

fn run_trial(d: &BLDatum, seed: u64, trial: u64) -> Result<Trial> {
    let n = d.ambient_dim();
    let mut rng = stream_rng(seed, trial);
    let extra = rng.random_range(0..=n + 1);
    let body = random_body(&mut rng, n, extra, COORD_BOUND)?;
    let k = body.facets()?;
    let report = verify_liakopoulos(&k, d)?;
    let exact_ratio = match (&report.lhs.exact, &report.rhs.exact) {
        (Some(l), Some(r)) => Some(l / r),
        _ => None,
    };
    let key = exact_ratio
        .clone()
        .or_else(|| ratio_midpoint(&report))
        .ok_or_else(|| Error::Invalid("missing ratio".into()))?;
    let ratio = report
        .ratio
        .clone()
        .ok_or_else(|| Error::Invalid("missing ratio".into()))?;
    let certificate = if report.is_exact_equality() {
        Some(certify_liakopoulos_equality(&k, d)?)
    } else {
        None
    };
    Ok(Trial {
        entry: SearchEntry {
            trial,
            ratio,
            exact_ratio,
            equality: report.equality,
            body,
            certificate,
        },
        key,
        violated: !report.holds,
    })
}

/// Runs `trials` seeded trials and keeps the `keep` smallest ratios.
/// Results depend only on `(datum, trials, seed)`.
pub fn search(d: &BLDatum, trials: u64, seed: u64, keep: usize) -> Result<SearchTable> {
    if !d.is_valid() {
        return Err(Error::InvalidDatum(
            "weighted projections do not sum to the identity".into(),
        ));
    }
    let mut results = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(d, seed, t))
        .collect::<Result<Vec<_>>>()?;
    let exact_hits = results
        .iter()
        .filter(|t| t.entry.equality == EqualityChannel::ExactYes)
        .count();
    let certified_hits = results
        .iter()
        .filter(|t| t.entry.certificate.as_ref().is_some_and(|c| c.is_equality()))
        .count();
    let violations = results.iter().filter(|t| t.violated).count();
    results.sort_by(|a, b| a.key.cmp(&b.key).then(a.entry.trial.cmp(&b.entry.trial)));
    results.truncate(keep);
    Ok(SearchTable {
        trials,
        seed,
        exact_hits,
        certified_hits,
        violations,
        entries: results.into_iter().map(|t| t.entry).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::{axes_datum, loomis_whitney_datum};
    use num_traits::One;

    #[test]
    fn axes_datum_in_the_plane() {
        let t = search(&axes_datum(2), 2000, 17, 10).unwrap();
        assert_eq!(t.violations, 0);
        assert!(t.exact_hits > 0);
        assert_eq!(t.exact_hits, t.certified_hits);
        let one = Rational::one();
        for e in &t.entries {
            assert!(e.ratio.0.hi >= one);
            if e.exact_ratio.as_ref() == Some(&one) {
                assert!(e.certificate.as_ref().unwrap().is_equality());
            }
        }
        assert_eq!(t.entries.len(), 10);
        assert_eq!(t.entries[0].exact_ratio, Some(one));
    }

    #[test]
    fn zero_trials_and_determinism() {
        let d = loomis_whitney_datum(3);
        let t = search(&d, 0, 1, 5).unwrap();
        assert!(t.entries.is_empty() && t.min_ratio().is_none());
        let a = search(&d, 40, 3, 5).unwrap();
        let b = search(&d, 40, 3, 5).unwrap();
        assert_eq!(a, b);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(serde_json::from_str::<SearchTable>(&s).unwrap(), a);
    }

    #[test]
    fn invalid_datum_is_rejected() {
        let d = BLDatum::from_pairs(2, vec![(axes_datum(2).subspaces()[0].clone(), Rational::one())]).unwrap();
        assert!(matches!(search(&d, 5, 0, 1), Err(Error::InvalidDatum(_))));
    }
}
