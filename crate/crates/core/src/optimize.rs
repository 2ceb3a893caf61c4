//! Exact rational linear programming (two-phase simplex, Bland's rule) and
//! the infimal decomposition `inf { sum ||y_i||_K : z = sum y_i, y_i ∈ E_i }`.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, Rational, RationalVector};
use crate::polytope::HPolytope;
use crate::subspace::Subspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: RationalVector,
    pub relation: Relation,
    pub rhs: Rational,
}

/// Minimize `<objective, x>` over free variables `x` subject to the constraints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    num_vars: usize,
    objective: RationalVector,
    constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        point: RationalVector,
    },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

impl LinearProgram {
    pub fn new(objective: RationalVector) -> Self {
        Self {
            num_vars: objective.len(),
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn add(&mut self, coeffs: RationalVector, relation: Relation, rhs: Rational) -> Result<()> {
        if coeffs.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: coeffs.len(),
            });
        }
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        Ok(())
    }

    pub fn le(&mut self, coeffs: RationalVector, rhs: Rational) -> Result<()> {
        self.add(coeffs, Relation::Le, rhs)
    }

    pub fn ge(&mut self, coeffs: RationalVector, rhs: Rational) -> Result<()> {
        self.add(coeffs, Relation::Ge, rhs)
    }

    pub fn equal(&mut self, coeffs: RationalVector, rhs: Rational) -> Result<()> {
        self.add(coeffs, Relation::Eq, rhs)
    }
}

/// Dense simplex tableau over `x >= 0` with rows `A x = b`, `b >= 0`.
struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    cols: usize,
}

enum Phase {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        self.rhs[r] *= &inv;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (x, p) in self.rows[i].iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        self.basis[r] = c;
    }

    fn reduced_costs(&self, cost: &[Rational], allowed: usize) -> Vec<Rational> {
        (0..allowed)
            .map(|j| {
                let mut d = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_zero() && !self.rows[i][j].is_zero() {
                        d -= &cost[b] * &self.rows[i][j];
                    }
                }
                d
            })
            .collect()
    }

    /// Bland: lowest-index improving column, lowest-index leaving variable on ties.
    fn run(&mut self, cost: &[Rational], allowed: usize) -> Phase {
        loop {
            let reduced = self.reduced_costs(cost, allowed);
            let Some(enter) = (0..allowed).find(|&j| reduced[j].is_negative()) else {
                return Phase::Optimal;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, enter),
                None => return Phase::Unbounded,
            }
        }
    }

    fn value(&self, cost: &[Rational]) -> Rational {
        self.basis
            .iter()
            .zip(&self.rhs)
            .fold(Rational::zero(), |acc, (&b, v)| acc + &cost[b] * v)
    }
}

/// Exact two-phase simplex. Variables are free; each is split as `u - v`.
pub fn solve_lp(lp: &LinearProgram) -> LpOutcome {
    let n = lp.num_vars;
    let m = lp.constraints.len();
    let slack_count = lp
        .constraints
        .iter()
        .filter(|c| c.relation != Relation::Eq)
        .count();
    let structural = 2 * n + slack_count;
    // Artificial columns follow the structural ones.
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut needs_artificial = Vec::new();
    let mut slack = 2 * n;
    for (i, con) in lp.constraints.iter().enumerate() {
        let mut row = vec![Rational::zero(); structural];
        for (j, a) in con.coeffs.iter().enumerate() {
            row[j] = a.clone();
            row[n + j] = -a;
        }
        let mut slack_col = None;
        match con.relation {
            Relation::Le => {
                row[slack] = Rational::one();
                slack_col = Some(slack);
                slack += 1;
            }
            Relation::Ge => {
                row[slack] = -Rational::one();
                slack_col = Some(slack);
                slack += 1;
            }
            Relation::Eq => {}
        }
        let mut b = con.rhs.clone();
        if b.is_negative() {
            for x in row.iter_mut() {
                *x = -&*x;
            }
            b = -b;
        }
        match slack_col {
            Some(s) if row[s].is_one() => basis.push(s),
            _ => {
                basis.push(usize::MAX);
                needs_artificial.push(i);
            }
        }
        rows.push(row);
        rhs.push(b);
    }
    let cols = structural + needs_artificial.len();
    for row in rows.iter_mut() {
        row.resize(cols, Rational::zero());
    }
    for (k, &i) in needs_artificial.iter().enumerate() {
        rows[i][structural + k] = Rational::one();
        basis[i] = structural + k;
    }
    let mut t = Tableau {
        rows,
        rhs,
        basis,
        cols,
    };

    if !needs_artificial.is_empty() {
        let mut phase1 = vec![Rational::zero(); cols];
        for c in phase1.iter_mut().skip(structural) {
            *c = Rational::one();
        }
        if let Phase::Unbounded = t.run(&phase1, cols) {
            unreachable!("phase one objective is bounded below by zero");
        }
        if t.value(&phase1).is_positive() {
            return LpOutcome::Infeasible;
        }
        // Drive zero-valued artificials out; drop rows that are redundant.
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= structural {
                match (0..structural).find(|&j| !t.rows[i][j].is_zero()) {
                    Some(j) => t.pivot(i, j),
                    None => {
                        t.rows.remove(i);
                        t.rhs.remove(i);
                        t.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }
    for row in t.rows.iter_mut() {
        row.truncate(structural);
    }
    t.cols = structural;

    let mut cost = vec![Rational::zero(); t.cols];
    for (j, c) in lp.objective.iter().enumerate() {
        cost[j] = c.clone();
        cost[n + j] = -c;
    }
    if let Phase::Unbounded = t.run(&cost, t.cols) {
        return LpOutcome::Unbounded;
    }
    let mut full = vec![Rational::zero(); t.cols];
    for (&b, v) in t.basis.iter().zip(&t.rhs) {
        full[b] = v.clone();
    }
    let point: RationalVector = (0..n).map(|j| &full[j] - &full[n + j]).collect();
    LpOutcome::Optimal {
        value: dot(&lp.objective, &point),
        point,
    }
}

/// Optimal value and witnessing decomposition of
/// `inf { sum ||y_i||_K : z = sum y_i, y_i ∈ E_i }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormDecomposition {
    #[serde(with = "crate::serde_q::scalar")]
    pub value: Rational,
    #[serde(with = "crate::serde_q::matrix")]
    pub parts: Vec<RationalVector>,
    /// `||y_i||_K` for each part.
    #[serde(with = "crate::serde_q::vector")]
    pub part_gauges: Vec<Rational>,
}

/// Variables: basis coordinates `t_i` of each `y_i = B_i t_i`, then one
/// level `λ_i` per subspace. Minimizes `sum λ_i` subject to
/// `<a_m, B_i t_i> <= λ_i b_m` for every facet `m` and `sum B_i t_i = z`.
pub fn norm_decompose(
    k: &HPolytope,
    subspaces: &[Subspace],
    z: &[Rational],
) -> Result<NormDecomposition> {
    let n = k.dim();
    if z.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: z.len(),
        });
    }
    if let Some(bad) = subspaces.iter().find(|s| s.ambient_dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bad.ambient_dim(),
        });
    }
    if !k.origin_is_interior() {
        return Err(Error::OriginNotInterior);
    }
    let offsets: Vec<usize> = subspaces
        .iter()
        .scan(0, |acc, s| {
            let start = *acc;
            *acc += s.dim();
            Some(start)
        })
        .collect();
    let coord_count: usize = subspaces.iter().map(Subspace::dim).sum();
    let num_vars = coord_count + subspaces.len();

    let mut objective = vec![Rational::zero(); num_vars];
    for c in objective.iter_mut().skip(coord_count) {
        *c = Rational::one();
    }
    let mut lp = LinearProgram::new(objective);

    for (i, s) in subspaces.iter().enumerate() {
        for h in k.inequalities() {
            let mut row = vec![Rational::zero(); num_vars];
            for (d, b) in s.basis().iter().enumerate() {
                row[offsets[i] + d] = dot(&h.normal, b);
            }
            row[coord_count + i] = -h.offset.clone();
            lp.le(row, Rational::zero())?;
        }
    }
    for (coord, target) in z.iter().enumerate() {
        let mut row = vec![Rational::zero(); num_vars];
        for (i, s) in subspaces.iter().enumerate() {
            for (d, b) in s.basis().iter().enumerate() {
                row[offsets[i] + d] = b[coord].clone();
            }
        }
        lp.equal(row, target.clone())?;
    }

    match solve_lp(&lp) {
        LpOutcome::Optimal { value, point } => {
            let parts: Vec<RationalVector> = subspaces
                .iter()
                .enumerate()
                .map(|(i, s)| s.lift(&point[offsets[i]..offsets[i] + s.dim()]))
                .collect::<Result<_>>()?;
            let part_gauges = parts
                .iter()
                .map(|y| k.gauge(y))
                .collect::<Result<Vec<_>>>()?;
            Ok(NormDecomposition {
                value,
                parts,
                part_gauges,
            })
        }
        LpOutcome::Infeasible => Err(Error::Infeasible),
        LpOutcome::Unbounded => Err(Error::LpUnbounded),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat, rvec, unit_vec};
    use crate::polytope::shapes::{cross_polytope, cube};
    use proptest::prelude::*;

    #[test]
    fn lp_examples() {
        let mut lp = LinearProgram::new(rvec(&[1]));
        lp.ge(rvec(&[1]), int(3)).unwrap();
        assert_eq!(solve_lp(&lp).value(), Some(&int(3)));

        let mut lp = LinearProgram::new(rvec(&[1]));
        lp.le(rvec(&[1]), int(-1)).unwrap();
        lp.ge(rvec(&[1]), int(0)).unwrap();
        assert_eq!(solve_lp(&lp), LpOutcome::Infeasible);

        let mut lp = LinearProgram::new(rvec(&[-1]));
        lp.ge(rvec(&[1]), int(0)).unwrap();
        assert_eq!(solve_lp(&lp), LpOutcome::Unbounded);
    }

    #[test]
    fn lp_with_equalities_and_redundancy() {
        // min x + 2y s.t. x + y = 3, 2x + 2y = 6, x >= 1, y >= 1/2
        let mut lp = LinearProgram::new(rvec(&[1, 2]));
        lp.equal(rvec(&[1, 1]), int(3)).unwrap();
        lp.equal(rvec(&[2, 2]), int(6)).unwrap();
        lp.ge(rvec(&[1, 0]), int(1)).unwrap();
        lp.ge(vec![int(0), int(1)], rat(1, 2)).unwrap();
        match solve_lp(&lp) {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, rat(7, 2));
                assert_eq!(point, vec![rat(5, 2), rat(1, 2)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_lp_terminates() {
        // Beale's classic cycling example under the textbook rule.
        let mut lp = LinearProgram::new(vec![rat(-3, 4), int(150), rat(-1, 50), int(6)]);
        lp.le(vec![rat(1, 4), int(-60), rat(-1, 25), int(9)], int(0)).unwrap();
        lp.le(vec![rat(1, 2), int(-90), rat(-1, 50), int(3)], int(0)).unwrap();
        lp.le(vec![int(0), int(0), int(1), int(0)], int(1)).unwrap();
        for j in 0..4 {
            lp.ge(unit_vec(4, j), int(0)).unwrap();
        }
        assert_eq!(solve_lp(&lp).value(), Some(&rat(-1, 20)));
    }

    /// Minimum of c·x over the vertices of a bounded 2D feasible region,
    /// found by intersecting every pair of constraint lines.
    fn brute_force_2d(c: &[Rational], rows: &[(RationalVector, Rational)]) -> Option<Rational> {
        let mut best: Option<Rational> = None;
        for i in 0..rows.len() {
            for j in i + 1..rows.len() {
                let (a, b) = (&rows[i], &rows[j]);
                let det = &a.0[0] * &b.0[1] - &a.0[1] * &b.0[0];
                if det.is_zero() {
                    continue;
                }
                let x = (&a.1 * &b.0[1] - &b.1 * &a.0[1]) / &det;
                let y = (&a.0[0] * &b.1 - &b.0[0] * &a.1) / &det;
                let p = vec![x, y];
                if rows.iter().all(|(r, h)| dot(r, &p) <= *h) {
                    let v = dot(c, &p);
                    if best.as_ref().is_none_or(|b| v < *b) {
                        best = Some(v);
                    }
                }
            }
        }
        best
    }

    proptest! {
        #[test]
        fn lp_matches_vertex_enumeration(
            c in prop::collection::vec(-5i64..=5, 2),
            extra in prop::collection::vec((prop::collection::vec(-4i64..=4, 2), -3i64..=6), 0..5)
        ) {
            // box [-3,3]^2 keeps the region bounded
            let mut rows: Vec<(RationalVector, Rational)> = vec![
                (rvec(&[1, 0]), int(3)), (rvec(&[-1, 0]), int(3)),
                (rvec(&[0, 1]), int(3)), (rvec(&[0, -1]), int(3)),
            ];
            rows.extend(extra.iter().map(|(a, b)| (rvec(a), int(*b))));
            let c = rvec(&c);
            let mut lp = LinearProgram::new(c.clone());
            for (a, b) in &rows {
                lp.le(a.clone(), b.clone()).unwrap();
            }
            let expected = brute_force_2d(&c, &rows);
            match solve_lp(&lp) {
                LpOutcome::Optimal { value, point } => {
                    prop_assert_eq!(Some(value.clone()), expected);
                    prop_assert!(rows.iter().all(|(a, b)| dot(a, &point) <= *b));
                    prop_assert_eq!(dot(&c, &point), value);
                }
                LpOutcome::Infeasible => prop_assert!(expected.is_none()),
                LpOutcome::Unbounded => prop_assert!(false, "bounded region"),
            }
        }
    }

    fn axes(n: usize) -> Vec<Subspace> {
        (0..n)
            .map(|i| Subspace::new(n, &[unit_vec(n, i)]).unwrap())
            .collect()
    }

    #[test]
    fn norm_decompose_examples() {
        let square = cube(2, 1);
        let r = norm_decompose(&square, &axes(2), &rvec(&[1, 1])).unwrap();
        assert_eq!(r.value, int(2));
        assert_eq!(r.parts, vec![rvec(&[1, 0]), rvec(&[0, 1])]);
        assert_eq!(square.gauge(&rvec(&[1, 1])).unwrap(), int(1));

        let cross = cross_polytope(&[int(1), int(1)]);
        let r = norm_decompose(&cross, &axes(2), &rvec(&[1, 1])).unwrap();
        assert_eq!(r.value, int(2));
        assert_eq!(cross.gauge(&rvec(&[1, 1])).unwrap(), int(2));

        let r = norm_decompose(&cross, &axes(2), &rvec(&[0, 0])).unwrap();
        assert_eq!(r.value, int(0));
        assert!(r.parts.iter().all(|p| crate::linalg::is_zero_vec(p)));
    }

    #[test]
    fn norm_decompose_infeasible_when_not_spanning() {
        let square = cube(2, 1);
        let only_x = vec![Subspace::new(2, &[unit_vec(2, 0)]).unwrap()];
        assert_eq!(
            norm_decompose(&square, &only_x, &rvec(&[1, 1])),
            Err(Error::Infeasible)
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn norm_decompose_bounds_gauge_and_scales(
            z in prop::collection::vec((-9i64..=9, 1i64..=5), 3),
            lam in (1i64..=7, 1i64..=4)
        ) {
            let k = cube(3, 2);
            let spaces = vec![
                Subspace::new(3, &[rvec(&[1, 1, 0]), rvec(&[0, 0, 1])]).unwrap(),
                Subspace::new(3, &[rvec(&[1, -1, 0])]).unwrap(),
                Subspace::new(3, &[rvec(&[0, 1, 0])]).unwrap(),
            ];
            let z: RationalVector = z.iter().map(|&(a, b)| rat(a, b)).collect();
            let r = norm_decompose(&k, &spaces, &z).unwrap();
            prop_assert!(r.value >= k.gauge(&z).unwrap());
            let total = r.parts.iter().fold(crate::linalg::zero_vec(3), |acc, p| crate::linalg::add(&acc, p));
            prop_assert_eq!(total, z.clone());
            let sum: Rational = r.part_gauges.iter().sum();
            prop_assert_eq!(sum, r.value.clone());
            let l = rat(lam.0, lam.1);
            let scaled = norm_decompose(&k, &spaces, &crate::linalg::scale(&l, &z)).unwrap();
            prop_assert_eq!(scaled.value, &l * &r.value);
        }
    }
}
