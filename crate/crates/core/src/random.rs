//! Seeded generators for rationals, bodies, covers and data.
//!
//! Every stream is a ChaCha8 generator keyed by `(seed, stream)`, so
//! parallel consumers draw independent, reproducible sequences.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cover::{datum_from_cover, UniformCover};
use crate::datum::{BLDatum, DatumEntry};
use crate::error::Result;
use crate::linalg::{rat, scale, unit_vec, Rational, RationalMatrix, RationalVector};
use crate::polytope::VPolytope;
use crate::subspace::Subspace;

/// Default bound on numerators and denominators of sampled rationals.
pub const SAMPLE_BOUND: i64 = 1000;

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `p/q` with `|p| <= bound` and `1 <= q <= bound`.
pub fn random_rational<R: Rng>(rng: &mut R, bound: i64) -> Rational {
    rat(rng.random_range(-bound..=bound), rng.random_range(1..=bound))
}

pub fn random_point<R: Rng>(rng: &mut R, n: usize, bound: i64) -> RationalVector {
    (0..n).map(|_| random_rational(rng, bound)).collect()
}

/// Random rational in `[lo, hi]` on a grid of step `1/den`.
pub fn random_in_range<R: Rng>(rng: &mut R, lo: &Rational, hi: &Rational, den: i64) -> Rational {
    let d = Rational::from_integer(BigInt::from(den));
    let a = (lo * &d).ceil().to_integer();
    let b = (hi * &d).floor().to_integer();
    let span: i64 = (&b - &a).try_into().expect("small range");
    let k = rng.random_range(0..=span);
    Rational::new(a + BigInt::from(k), BigInt::from(den))
}

/// Hull of `extra` random points (coordinates `p/q`, `|p| <= coord_bound`,
/// `q <= 4`) together with `±δ_i e_i`, so the origin is interior.
pub fn random_body<R: Rng>(rng: &mut R, n: usize, extra: usize, coord_bound: i64) -> Result<VPolytope> {
    let mut pts: Vec<RationalVector> = (0..extra)
        .map(|_| {
            (0..n)
                .map(|_| rat(rng.random_range(-coord_bound..=coord_bound), rng.random_range(1..=4)))
                .collect()
        })
        .collect();
    for i in 0..n {
        let delta = rat(rng.random_range(1..=4), rng.random_range(1..=4));
        pts.push(scale(&delta, &unit_vec(n, i)));
        pts.push(scale(&-delta.clone(), &unit_vec(n, i)));
    }
    VPolytope::new(n, pts)
}

/// A random full-dimensional simplex.
pub fn random_simplex<R: Rng>(rng: &mut R, n: usize) -> Result<VPolytope> {
    loop {
        let pts: Vec<RationalVector> = (0..=n)
            .map(|_| (0..n).map(|_| rat(rng.random_range(-9..=9), rng.random_range(1..=3))).collect())
            .collect();
        let v = VPolytope::new(n, pts)?;
        if v.vertices().len() == n + 1 && v.is_full_dimensional() {
            return Ok(v);
        }
    }
}

/// A random s-uniform cover of `[n]` by `m` proper non-empty sets.
pub fn random_cover<R: Rng>(rng: &mut R, n: usize) -> UniformCover {
    assert!(n >= 2, "covers need n >= 2");
    loop {
        let s = rng.random_range(1..=n.min(3));
        let m = rng.random_range(s + 1..=s + 3);
        let mut sets = vec![BTreeSet::new(); m];
        for elem in 0..n {
            for j in sample(rng, m, s) {
                sets[j].insert(elem);
            }
        }
        if sets.iter().all(|x| !x.is_empty() && x.len() < n) {
            return UniformCover::new(n, s, sets).expect("uniform by construction");
        }
    }
}

/// The rational orthogonal matrix `(I - S)(I + S)^{-1}` for a random
/// skew-symmetric integer `S`.
pub fn random_rotation<R: Rng>(rng: &mut R, n: usize) -> RationalMatrix {
    let mut s = RationalMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let x = rat(rng.random_range(-3..=3), rng.random_range(1..=2));
            s[(i, j)] = x.clone();
            s[(j, i)] = -x;
        }
    }
    let id = RationalMatrix::identity(n);
    let plus = id.add(&s).expect("same shape");
    let minus = id.sub(&s).expect("same shape");
    minus
        .mul(&plus.inverse().expect("I + S is invertible for skew S"))
        .expect("same shape")
}

/// `Q E_i` with the same weights; valid whenever the input is.
pub fn rotate_datum(d: &BLDatum, q: &RationalMatrix) -> Result<BLDatum> {
    let n = d.ambient_dim();
    let entries = d
        .entries()
        .iter()
        .map(|e| {
            let basis: Vec<RationalVector> = e
                .subspace
                .basis()
                .iter()
                .map(|b| q.mul_vec(b))
                .collect::<Result<_>>()?;
            Ok(DatumEntry {
                subspace: Subspace::new(n, &basis)?,
                weight: e.weight.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    BLDatum::new(n, entries)
}

/// A cover datum, rotated by a random rational orthogonal map half of the time.
pub fn random_datum<R: Rng>(rng: &mut R, n: usize) -> Result<BLDatum> {
    let d = datum_from_cover(&random_cover(rng, n))?;
    if rng.random_bool(0.5) {
        let q = random_rotation(rng, n);
        rotate_datum(&d, &q)
    } else {
        Ok(d)
    }
}
