//! Double description method for the extreme rays of a pointed cone
//! `{x : <row, x> >= 0}` over the integers.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::linalg::{make_primitive, primitive_integer_row, Rational, RationalMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new(bits: usize) -> Self {
        BitSet(vec![0; bits.div_ceil(64)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &BitSet) -> BitSet {
        BitSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_subset(&self, other: &BitSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

#[derive(Clone, Debug)]
struct Ray {
    v: Vec<BigInt>,
    zeros: BitSet,
}

fn eval(row: &[BigInt], v: &[BigInt]) -> BigInt {
    row.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// The rows do not have full column rank, so the cone has a lineality space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct NotPointed;

/// Extreme rays (primitive integer vectors) of `{x ∈ Q^d : A x >= 0}`.
pub(crate) fn extreme_rays(rows: &[Vec<BigInt>], d: usize) -> Result<Vec<Vec<BigInt>>, NotPointed> {
    let m = rows.len();
    // Greedy choice of d independent rows.
    let mut chosen = Vec::with_capacity(d);
    let mut chosen_rows: Vec<Vec<Rational>> = Vec::with_capacity(d);
    for (i, r) in rows.iter().enumerate() {
        if chosen.len() == d {
            break;
        }
        let mut trial = chosen_rows.clone();
        trial.push(r.iter().map(|x| Rational::from_integer(x.clone())).collect());
        let mat = RationalMatrix::from_rows(d, &trial).expect("row widths are d");
        if mat.rank() == trial.len() {
            chosen.push(i);
            chosen_rows = trial;
        }
    }
    if chosen.len() < d {
        return Err(NotPointed);
    }
    let basis = RationalMatrix::from_rows(d, &chosen_rows).expect("square");
    let inv = basis.inverse().expect("independent rows");

    let mut processed = vec![false; m];
    for &i in &chosen {
        processed[i] = true;
    }
    let mut rays: Vec<Ray> = (0..d)
        .map(|j| {
            let v = primitive_integer_row(&inv.column(j));
            let mut zeros = BitSet::new(m);
            for &i in &chosen {
                if eval(&rows[i], &v).is_zero() {
                    zeros.insert(i);
                }
            }
            Ray { v, zeros }
        })
        .collect();

    for (i, row) in rows.iter().enumerate() {
        if processed[i] {
            continue;
        }
        processed[i] = true;
        let values: Vec<BigInt> = rays.iter().map(|r| eval(row, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| values[k].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| values[k].is_negative()).collect();
        if neg.is_empty() {
            for (r, val) in rays.iter_mut().zip(&values) {
                if val.is_zero() {
                    r.zeros.insert(i);
                }
            }
            continue;
        }

        let mut created = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].zeros.and(&rays[q].zeros);
                if common.count() + 2 < d {
                    continue;
                }
                let blocked = rays.iter().enumerate().any(|(k, r)| {
                    k != p && k != q && common.is_subset(&r.zeros)
                });
                if blocked {
                    continue;
                }
                let sp = &values[p];
                let sq = &values[q];
                let v: Vec<BigInt> = rays[q]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(nq, np)| sp * nq - sq * np)
                    .collect();
                let mut zeros = common;
                zeros.insert(i);
                created.push(Ray {
                    v: make_primitive(v),
                    zeros,
                });
            }
        }

        let mut next = Vec::with_capacity(pos.len() + created.len());
        for (k, mut r) in rays.into_iter().enumerate() {
            if values[k].is_negative() {
                continue;
            }
            if values[k].is_zero() {
                r.zeros.insert(i);
            }
            next.push(r);
        }
        next.extend(created);
        rays = next;
    }
    Ok(rays.into_iter().map(|r| r.v).collect())
}
