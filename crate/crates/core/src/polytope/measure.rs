use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{format_rational, Rational};

/// A measure `q * sqrt(g)` with rational `q >= 0` and `g > 0`.
///
/// Canonical form: `g` is a positive integer with no square factor below
/// 2^16 and not itself a perfect square (so `g = 1` exactly when the value is
/// rational for every Gram determinant that arises from small bases).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MeasureRepr", into = "MeasureRepr")]
pub struct MeasureValue {
    q: Rational,
    g: Rational,
}

#[derive(Serialize, Deserialize)]
struct MeasureRepr {
    #[serde(with = "crate::serde_q::scalar")]
    q: Rational,
    #[serde(with = "crate::serde_q::scalar")]
    g: Rational,
}

impl TryFrom<MeasureRepr> for MeasureValue {
    type Error = Error;
    fn try_from(r: MeasureRepr) -> Result<Self> {
        MeasureValue::new(r.q, r.g)
    }
}

impl From<MeasureValue> for MeasureRepr {
    fn from(m: MeasureValue) -> Self {
        MeasureRepr { q: m.q, g: m.g }
    }
}

const SQUARE_FACTOR_BOUND: u64 = 1 << 16;

impl MeasureValue {
    pub fn new(q: Rational, g: Rational) -> Result<Self> {
        if q.is_negative() || !g.is_positive() {
            return Err(Error::Invalid(format!(
                "measure needs q >= 0 and g > 0, got q = {}, g = {}",
                format_rational(&q),
                format_rational(&g)
            )));
        }
        // sqrt(a/b) = sqrt(a b) / b
        let b = g.denom().clone();
        let mut radicand = g.numer() * &b;
        let mut q = q / Rational::from_integer(b);
        if q.is_zero() {
            return Ok(Self {
                q,
                g: Rational::one(),
            });
        }
        let mut outside = BigInt::one();
        let mut f = 2u64;
        while f < SQUARE_FACTOR_BOUND {
            let sq = BigInt::from(f * f);
            if sq > radicand {
                break;
            }
            while radicand.is_multiple_of(&sq) {
                radicand /= &sq;
                outside *= f;
            }
            f += 1;
        }
        let root = radicand.sqrt();
        if &root * &root == radicand {
            outside *= root;
            radicand = BigInt::one();
        }
        q *= Rational::from_integer(outside);
        Ok(Self {
            q,
            g: Rational::from_integer(radicand),
        })
    }

    pub fn rational(q: Rational) -> Self {
        Self::new(q, Rational::one()).expect("non-negative")
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn g(&self) -> &Rational {
        &self.g
    }

    pub fn is_rational(&self) -> bool {
        self.g.is_one()
    }

    pub fn is_zero(&self) -> bool {
        self.q.is_zero()
    }

    /// The exact value when it is rational.
    pub fn as_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.q.clone())
    }

    /// `value^2 = q^2 g`, always rational.
    pub fn squared(&self) -> Rational {
        &self.q * &self.q * &self.g
    }

    pub fn to_f64(&self) -> f64 {
        self.q.to_f64().unwrap_or(f64::NAN) * self.g.to_f64().unwrap_or(f64::NAN).sqrt()
    }

    pub fn mul(&self, other: &MeasureValue) -> MeasureValue {
        MeasureValue::new(&self.q * &other.q, &self.g * &other.g).expect("non-negative")
    }

    pub fn scale(&self, k: &Rational) -> Result<MeasureValue> {
        MeasureValue::new(&self.q * k, self.g.clone())
    }
}

impl PartialOrd for MeasureValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MeasureValue {
    /// Exact: both sides are non-negative, so compare squares.
    fn cmp(&self, other: &Self) -> Ordering {
        self.squared().cmp(&other.squared())
    }
}

impl fmt::Display for MeasureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "{}", format_rational(&self.q))
        } else {
            write!(f, "{}*sqrt({})", format_rational(&self.q), format_rational(&self.g))
        }
    }
}
