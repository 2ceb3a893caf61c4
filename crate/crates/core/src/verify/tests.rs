use super::*;
use crate::datum::{axes_datum, loomis_whitney_datum, DatumEntry};
use crate::linalg::{int, rat, rvec};
use crate::polytope::shapes::*;
use proptest::prelude::*;

fn v(n: usize, pts: &[&[i64]]) -> VPolytope {
    VPolytope::new(n, pts.iter().map(|p| rvec(p)).collect()).unwrap()
}

fn exact(q: &Quantity) -> Rational {
    q.exact.clone().expect("rational side")
}

#[test]
fn loomis_whitney_examples() {
    let r = verify_loomis_whitney(&Body::V(unit_cube(3))).unwrap();
    assert!(r.holds && r.is_exact_equality());
    assert_eq!((exact(&r.lhs), exact(&r.rhs)), (int(1), int(1)));

    let r = verify_loomis_whitney(&Body::V(standard_simplex(2))).unwrap();
    assert!(r.holds && r.is_strict());
    assert_eq!((exact(&r.lhs), exact(&r.rhs)), (rat(1, 2), int(1)));

    let b = box_vertices(&[int(0), int(0)], &[int(2), int(3)]);
    let r = verify_loomis_whitney(&Body::V(b)).unwrap();
    assert!(r.is_exact_equality());
    assert_eq!(exact(&r.lhs), int(6));
    assert_eq!(r.precision_bits, 0);
}

#[test]
fn bollobas_thomason_examples() {
    let cover = UniformCover::from_one_based(3, 2, &[&[1, 2], &[2, 3], &[1, 3]]).unwrap();
    let r = verify_bollobas_thomason(&Body::V(unit_cube(3)), &cover).unwrap();
    assert!(r.is_exact_equality());
    let r = verify_bollobas_thomason(&Body::V(standard_simplex(3)), &cover).unwrap();
    assert!(r.holds && r.is_strict());
    assert_eq!((exact(&r.lhs), exact(&r.rhs)), (rat(1, 36), rat(1, 8)));
    let split = UniformCover::from_one_based(2, 1, &[&[1], &[2]]).unwrap();
    let b = box_vertices(&[int(0), int(0)], &[int(2), int(3)]);
    let r = verify_bollobas_thomason(&Body::V(b), &split).unwrap();
    assert!(r.is_exact_equality());
    assert_eq!(exact(&r.lhs), int(6));
}

#[test]
fn loomis_whitney_agrees_with_its_cover() {
    for body in [standard_simplex(3), unit_cube(3), cross_polytope_vertices(&[int(1), int(2), rat(1, 2)])] {
        let a = verify_loomis_whitney(&Body::V(body.clone())).unwrap();
        let b = verify_bollobas_thomason(&Body::V(body), &UniformCover::loomis_whitney(3)).unwrap();
        assert_eq!((a.lhs, a.rhs, a.equality), (b.lhs, b.rhs, b.equality));
    }
}

#[test]
fn meyer_examples() {
    let r = verify_meyer(&cross_polytope(&[int(1), int(1)])).unwrap();
    assert!(r.is_exact_equality());
    assert_eq!((exact(&r.lhs), exact(&r.rhs)), (int(2), int(2)));
    let r = verify_meyer(&cube(2, 1)).unwrap();
    assert!(r.holds && r.is_strict());
    assert_eq!((exact(&r.lhs), exact(&r.rhs)), (int(4), int(2)));
    let r = verify_meyer(&cross_polytope(&[int(2), int(3)])).unwrap();
    assert!(r.is_exact_equality());
    assert_eq!(exact(&r.lhs), int(12));
    let shifted = HPolytope::new(2, vec![
        crate::polytope::Halfspace::new(rvec(&[1, 0]), int(1)),
        crate::polytope::Halfspace::new(rvec(&[-1, 0]), int(0)),
        crate::polytope::Halfspace::new(rvec(&[0, 1]), int(1)),
        crate::polytope::Halfspace::new(rvec(&[0, -1]), int(1)),
    ]).unwrap();
    assert_eq!(verify_meyer(&shifted), Err(Error::OriginNotInterior));
}

#[test]
fn liakopoulos_examples() {
    let r = verify_liakopoulos(&cross_polytope(&[int(1), int(1)]), &axes_datum(2)).unwrap();
    assert!(r.is_exact_equality());
    assert_eq!((exact(&r.lhs), exact(&r.rhs)), (int(2), int(2)));
    let r = verify_liakopoulos(&cube(2, 1), &axes_datum(2)).unwrap();
    assert!(r.holds && r.is_strict());
    assert_eq!((exact(&r.lhs), exact(&r.rhs)), (int(4), int(2)));

    // Octahedron with the LW datum, oracle by hand: constant (2!)^{3/2}/3!,
    // sections of area 2, so rhs = (2 sqrt 2 / 6) * 2 sqrt 2 = 4/3 = |K|.
    let oct = cross_polytope(&[int(1), int(1), int(1)]);
    let r = verify_liakopoulos(&oct, &loomis_whitney_datum(3)).unwrap();
    assert_eq!(exact(&r.lhs), rat(4, 3));
    assert_eq!(exact(&r.rhs), rat(4, 3));
    assert!(r.is_exact_equality());
}

#[test]
fn liakopoulos_on_tilted_datum_resolves_exactly() {
    let n = 3;
    let s = |vs: &[&[i64]]| Subspace::new(n, &vs.iter().map(|x| rvec(x)).collect::<Vec<_>>()).unwrap();
    let d = BLDatum::new(
        n,
        vec![
            DatumEntry { subspace: s(&[&[1, 1, 0]]), weight: int(1) },
            DatumEntry { subspace: s(&[&[1, -1, 0]]), weight: int(1) },
            DatumEntry { subspace: s(&[&[0, 0, 1]]), weight: rat(1, 2) },
            DatumEntry { subspace: s(&[&[0, 0, 1]]), weight: rat(1, 2) },
        ],
    )
    .unwrap();
    assert!(d.is_valid());
    let r = verify_liakopoulos(&cube(3, 1), &d).unwrap();
    assert!(r.holds);
    // Two sections of length 2 sqrt 2 with weight 1 and two of length 2 with weight 1/2.
    assert_eq!(exact(&r.rhs), rat(8, 3));
    assert_eq!(r.equality, EqualityChannel::ExactNo);
    assert_eq!(r.precision_bits, 0);
}

#[test]
fn irrational_rhs_decided_by_cross_exponentiation() {
    let s = |x: &[i64]| Subspace::new(2, &[rvec(x)]).unwrap();
    let half = rat(1, 2);
    let d = BLDatum::from_pairs(
        2,
        vec![
            (s(&[1, 0]), half.clone()),
            (s(&[0, 1]), half.clone()),
            (s(&[1, 1]), half.clone()),
            (s(&[1, -1]), half),
        ],
    )
    .unwrap();
    assert!(d.is_valid());
    let r = verify_liakopoulos(&cube(2, 1), &d).unwrap();
    // rhs = (1/2) * 2 * (2 sqrt 2) = 2 sqrt 2 < 4.
    assert!(r.rhs.exact.is_none());
    let i = &r.rhs.interval.0;
    assert!(i.lo > rat(28_284, 10_000) && i.hi < rat(28_285, 10_000));
    assert!(r.holds && r.is_strict());
    assert_eq!(r.precision_bits, 0);
}

#[test]
fn invalid_datum_rejected() {
    let mut entries = axes_datum(2).entries().to_vec();
    entries[0].weight = int(2);
    let d = BLDatum::new(2, entries).unwrap();
    assert!(matches!(verify_liakopoulos(&cube(2, 1), &d), Err(Error::InvalidDatum(_))));
    assert_eq!(gaussian_bl_constant(&d), int(2));
    assert_eq!(gaussian_bl_constant(&axes_datum(2)), int(1));
    assert_eq!(gaussian_bl_constant(&loomis_whitney_datum(3)), int(1));
}

#[test]
fn brunn_minkowski_examples() {
    let half = rat(1, 2);
    let r = verify_brunn_minkowski(&unit_cube(2), &unit_cube(2), &half, &half).unwrap();
    assert!(r.is_exact_equality());
    let r = verify_brunn_minkowski(&unit_cube(2), &standard_simplex(2), &half, &half).unwrap();
    assert!(r.holds);
    assert_eq!(r.equality, EqualityChannel::ExactNo);
    assert!(r.precision_bits >= 256);
    // Y = 2X + z with X a triangle: equality for any weights.
    let x = v(2, &[&[0, 0], &[3, 0], &[1, 2]]);
    let y = x.dilated(&int(2)).translated(&rvec(&[5, -7])).unwrap();
    let r = verify_brunn_minkowski(&x, &y, &rat(1, 3), &rat(5, 7)).unwrap();
    assert!(r.is_exact_equality());
    assert_eq!(r.notes, vec!["Y = 2 X + z".to_string()]);
    // Irrational homothety ratio is still detected when it is rational after roots.
    let y = x.dilated(&rat(3, 2));
    let r = verify_brunn_minkowski(&x, &y, &int(1), &int(1)).unwrap();
    assert!(r.is_exact_equality());
}

#[test]
fn rbl_indicator_examples() {
    let r = verify_rbl_indicators(&cube(2, 1), &axes_datum(2)).unwrap();
    assert!(r.is_exact_equality());
    assert_eq!(exact(&r.lhs), int(4));
    let r = verify_rbl_indicators(&cross_polytope(&[int(1), int(1)]), &axes_datum(2)).unwrap();
    assert!(r.is_exact_equality());
    assert_eq!(exact(&r.lhs), int(4));
    let r = verify_rbl_indicators(&cube(3, 1), &loomis_whitney_datum(3)).unwrap();
    assert!(r.holds);
    assert_eq!(exact(&r.lhs), int(8));
}

#[test]
fn report_json_round_trip() {
    let oct = cross_polytope(&[int(1), int(1), int(1)]);
    let cube3 = cube(3, 1);
    for r in [
        verify_liakopoulos(&oct, &loomis_whitney_datum(3)).unwrap(),
        verify_rbl_indicators(&cube3, &loomis_whitney_datum(3)).unwrap(),
        verify_brunn_minkowski(&unit_cube(2), &standard_simplex(2), &rat(1, 2), &rat(1, 2)).unwrap(),
    ] {
        let text = serde_json::to_string(&r).unwrap();
        let back: InequalityReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }
    let j = serde_json::to_value(verify_meyer(&cube(2, 1)).unwrap()).unwrap();
    assert_eq!(j["relation"], ">=");
    assert_eq!(j["equality"], "exact-no");
    assert_eq!(j["lhs"]["exact"], "4");
}

fn body3() -> impl Strategy<Value = HPolytope> {
    prop::collection::vec(prop::collection::vec((-9i64..=9, 1i64..=3), 3), 1..6).prop_map(|pts| {
        let mut pts: Vec<Vec<Rational>> = pts
            .into_iter()
            .map(|p| p.into_iter().map(|(a, b)| rat(a, b)).collect())
            .collect();
        for i in 0..3 {
            let mut e = vec![int(0); 3];
            e[i] = rat(1, 2);
            pts.push(e.clone());
            e[i] = rat(-1, 4);
            pts.push(e);
        }
        VPolytope::new(3, pts).unwrap().facets().unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn liakopoulos_ratio_invariant_under_dilation(k in body3(), l in (1i64..=5, 1i64..=4)) {
        let d = loomis_whitney_datum(3);
        let lambda = rat(l.0, l.1);
        let scaled_ineqs = k
            .inequalities()
            .iter()
            .map(|h| crate::polytope::Halfspace::new(h.normal.clone(), &h.offset * &lambda))
            .collect();
        let scaled = HPolytope::new(3, scaled_ineqs).unwrap();
        let a = verify_liakopoulos(&k, &d).unwrap();
        let b = verify_liakopoulos(&scaled, &d).unwrap();
        prop_assert!(a.holds && b.holds);
        prop_assert_eq!(a.equality, b.equality);
        // lhs and rhs both scale by lambda^3.
        let l3 = num_traits::pow(lambda, 3);
        prop_assert_eq!(exact(&b.lhs), exact(&a.lhs) * &l3);
        let ra = a.ratio.unwrap().0;
        let rb = b.ratio.unwrap().0;
        prop_assert!(ra.lo <= rb.hi && rb.lo <= ra.hi);
    }

    #[test]
    fn meyer_and_axes_liakopoulos_agree(k in body3()) {
        let m = verify_meyer(&k).unwrap();
        let l = verify_liakopoulos(&k, &axes_datum(3)).unwrap();
        prop_assert!(m.holds && l.holds);
        prop_assert_eq!(m.is_exact_equality(), l.is_exact_equality());
    }

    #[test]
    fn all_verifiers_hold(k in body3()) {
        let body = Body::H(k.clone());
        prop_assert!(verify_loomis_whitney(&body).unwrap().holds);
        prop_assert!(verify_bollobas_thomason(&body, &UniformCover::loomis_whitney(3)).unwrap().holds);
        prop_assert!(verify_meyer(&k).unwrap().holds);
        prop_assert!(verify_liakopoulos(&k, &loomis_whitney_datum(3)).unwrap().holds);
        prop_assert!(verify_rbl_indicators(&k, &axes_datum(3)).unwrap().holds);
        let v = k.vertices().unwrap();
        prop_assert!(verify_brunn_minkowski(&v, &unit_cube(3), &rat(1, 2), &rat(2, 3)).unwrap().holds);
    }
}
