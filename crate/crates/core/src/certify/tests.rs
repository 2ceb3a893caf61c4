use super::*;
use crate::datum::{axes_datum, loomis_whitney_datum};
use crate::linalg::{int, rat, rvec};
use crate::polytope::shapes::*;
use crate::random::{random_rotation, rotate_datum};

fn frame_datum() -> BLDatum {
    let s = |x: &[i64]| Subspace::new(2, &[rvec(x)]).unwrap();
    let half = rat(1, 2);
    BLDatum::from_pairs(
        2,
        vec![
            (s(&[1, 0]), half.clone()),
            (s(&[0, 1]), half.clone()),
            (s(&[1, 1]), half.clone()),
            (s(&[1, -1]), half),
        ],
    )
    .unwrap()
}

#[test]
fn box_is_extremal_for_bollobas_thomason() {
    let k = Body::from(cube(3, 1));
    let cert = certify_bt_equality(&k, &UniformCover::loomis_whitney(3)).unwrap();
    assert!(cert.is_equality() && cert.consistent());
    assert_eq!(cert.volume_k, int(8));
    assert_eq!(cert.volume_reconstruction, Some(int(8)));
    assert_eq!(cert.independent.len(), 3);
}

#[test]
fn octahedron_is_strict_for_bollobas_thomason() {
    let k = Body::from(cross_polytope(&[int(1), int(1), int(1)]));
    let cert = certify_bt_equality(&k, &UniformCover::loomis_whitney(3)).unwrap();
    assert_eq!(cert.verdict, Verdict::Strict);
    assert!(cert.consistent());
    // Sum of three segments [-1, 1] e_i is the cube.
    assert_eq!(cert.volume_reconstruction, Some(int(8)));
}

#[test]
fn bt_blocks_follow_the_cover() {
    // {1,2},{3} each covered twice: blocks are {1,2} and {3}.
    let c = UniformCover::from_one_based(3, 2, &[&[1, 2], &[1, 2], &[3], &[3]]).unwrap();
    let k = Body::from(cross_polytope_vertices(&[int(1), int(1), int(2)]));
    let cert = certify_bt_equality(&k, &c).unwrap();
    assert_eq!(cert.independent.len(), 2);
    assert_eq!(cert.verdict, Verdict::Strict);
    // Bicone over the diamond: the cylinder diamond x [-2, 2] has volume 8.
    assert_eq!(cert.volume_reconstruction, Some(int(8)));
}

#[test]
fn octahedron_is_extremal_for_liakopoulos() {
    let oct = cross_polytope(&[int(1), int(2), int(3)]);
    for d in [loomis_whitney_datum(3), axes_datum(3)] {
        let cert = certify_liakopoulos_equality(&oct, &d).unwrap();
        assert!(cert.is_equality(), "{cert:?}");
        assert!(cert.consistent());
        assert_eq!(cert.volume_k, int(8));
    }
}

#[test]
fn cube_is_strict_for_liakopoulos() {
    let cert = certify_liakopoulos_equality(&cube(3, 1), &loomis_whitney_datum(3)).unwrap();
    assert_eq!(cert.verdict, Verdict::Strict);
    assert!(cert.consistent());
    assert_eq!(cert.volume_reconstruction, Some(rat(4, 3)));
}

#[test]
fn dependent_datum_is_strict_with_reason() {
    let cert = certify_liakopoulos_equality(&cube(2, 1), &frame_datum()).unwrap();
    assert_eq!(cert.verdict, Verdict::Strict);
    assert_eq!(cert.reason.as_deref(), Some(REASON_DEPENDENT));
    assert!(cert.reconstruction.is_none());
    assert!(cert.consistent());
}

#[test]
fn certificates_reject_bad_inputs() {
    let shifted = HPolytope::new(
        2,
        vec![
            crate::polytope::Halfspace::new(rvec(&[1, 0]), int(1)),
            crate::polytope::Halfspace::new(rvec(&[-1, 0]), int(0)),
            crate::polytope::Halfspace::new(rvec(&[0, 1]), int(1)),
            crate::polytope::Halfspace::new(rvec(&[0, -1]), int(1)),
        ],
    )
    .unwrap();
    assert_eq!(
        certify_liakopoulos_equality(&shifted, &axes_datum(2)).unwrap_err(),
        Error::OriginNotInterior
    );
    let bad = BLDatum::from_pairs(2, vec![(Subspace::new(2, &[rvec(&[1, 0])]).unwrap(), int(1))]).unwrap();
    assert!(matches!(
        certify_liakopoulos_equality(&cube(2, 1), &bad),
        Err(Error::InvalidDatum(_))
    ));
    let c = UniformCover::loomis_whitney(2);
    assert!(matches!(
        certify_bt_equality(&Body::from(cube(3, 1)), &c),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn rotated_octahedron_stays_extremal() {
    let mut rng = stream_rng(7, 0);
    for _ in 0..3 {
        let q = random_rotation(&mut rng, 3);
        let d = rotate_datum(&loomis_whitney_datum(3), &q).unwrap();
        let pts = cross_polytope_vertices(&[int(1), int(2), int(1)])
            .vertices()
            .iter()
            .map(|v| q.mul_vec(v).unwrap())
            .collect();
        let k = VPolytope::new(3, pts).unwrap().facets().unwrap();
        let cert = certify_liakopoulos_equality(&k, &d).unwrap();
        assert!(cert.is_equality() && cert.consistent());
        assert!(check_norm_additivity(&k, &d, 20, 3).unwrap().all_pass);
    }
}

#[test]
fn norm_additivity_separates_octahedron_from_cube() {
    let d = loomis_whitney_datum(3);
    let oct = cross_polytope(&[int(1), int(1), int(1)]);
    let r = check_norm_additivity(&oct, &d, 50, 1).unwrap();
    assert!(r.all_pass);
    assert_eq!(r.ambient_checks, 50);
    assert!(r.subspace_checks >= 150);
    let r = check_norm_additivity(&cube(3, 1), &d, 50, 1).unwrap();
    assert!(!r.all_pass);
    assert!(!r.subspace_failures.is_empty());
    assert_eq!(
        check_norm_additivity(&cube(2, 1), &frame_datum(), 5, 1).unwrap_err(),
        Error::NotSpanning
    );
}

#[test]
fn inf_decomposition_matches_gauge_only_at_equality() {
    let d = loomis_whitney_datum(3);
    let oct = cross_polytope(&[int(1), int(1), int(1)]);
    let r = check_inf_decomposition_equality(&oct, &d, 25, 9).unwrap();
    assert!(r.all_zero);
    let r = check_inf_decomposition_equality(&cube(3, 1), &d, 25, 9).unwrap();
    assert!(!r.all_zero && r.max_gap > int(0));
    // Oracle by hand: z = (1,1,1) splits as (1/2,1/2,0)+(0,1/2,1/2)+(1/2,0,1/2), sum of norms 3/2.
    let gap = inf_decomposition_gap(&cube(3, 1), &d, &rvec(&[1, 1, 1])).unwrap();
    assert_eq!(gap, rat(1, 2));
}

#[test]
fn certificate_json_round_trip() {
    let cert = certify_liakopoulos_equality(&cube(3, 1), &loomis_whitney_datum(3)).unwrap();
    let s = serde_json::to_string(&cert).unwrap();
    let back: EqualityCertificate = serde_json::from_str(&s).unwrap();
    assert_eq!(back, cert);
    assert!(s.contains("\"verdict\":\"strict\""));
}
