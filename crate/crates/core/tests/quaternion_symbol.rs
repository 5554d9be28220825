mod common;

use common::{group, rba_file};
use rba_core::decomp::{central_idempotents, character_table, star_rep_extract};
use rba_core::degree::degree_map;
use rba_core::indicator::fs_indicator;
use rba_core::quaternion::{
    dc_change_of_basis, hilbert_symbol, quaternion_verify, reduced_charpoly_from_matrix, symbol, x_generator,
    y_generator, Place, SplitVerdict,
};
use rba_core::{Scalar, ToleranceConfig};

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

#[test]
fn pair_detection() {
    let p = dc_change_of_basis(&group("s3")).unwrap();
    assert_eq!((p.p, p.p_star), (1, 2));
    let p = dc_change_of_basis(&group("d8")).unwrap();
    assert_eq!((p.p, p.p_star), (1, 3));
    assert!(dc_change_of_basis(&group("q8")).is_err());
}

#[test]
fn s3_generators() {
    let a = group("s3");
    let dm = degree_map(&a, &tol()).unwrap();
    let t = character_table(&a, &dm, &central_idempotents(&a, &tol()).unwrap(), &tol()).unwrap();
    let rep = star_rep_extract(&a, &dm, &t, 2, &tol()).unwrap();
    let pair = dc_change_of_basis(&a).unwrap();
    let xg = x_generator(&rep, &pair, &dm, 2.0, &tol()).unwrap();
    assert!((xg.a + 12.0).abs() < 1e-9);
    let xd = rep.of(&pair.d);
    let sq = &xd * &xd;
    assert!((sq[(0, 0)] + 3.0).abs() < 1e-9 && sq[(0, 1)].abs() < 1e-9);
    let yg = y_generator(&rep, &a, &pair, &xg, &tol()).unwrap();
    assert_eq!(yg.ell, Some(3));
    assert!((yg.beta - 4.0).abs() < 1e-9);
    assert!(yg.anticommutator < 1e-8);
}

#[test]
fn symbols_split_over_q() {
    for (name, a, beta) in [("s3", group("s3"), "4"), ("d8", group("d8"), "4")] {
        let s = symbol(&a, &tol()).unwrap();
        assert_eq!(s.overall, SplitVerdict::Split, "{name}");
        assert_eq!(s.beta.to_string(), beta, "{name}");
        assert!(s.verdicts.iter().all(|v| v.value == 1));
    }
    let s = symbol(&group("s3"), &tol()).unwrap();
    assert_eq!(s.a, Scalar::ratio(-12, 1));
    let s = symbol(&group("d8"), &tol()).unwrap();
    assert_eq!(s.a, Scalar::ratio(-16, 1));
}

#[test]
fn deformed_symbol_splits() {
    let s = symbol(&rba_file("s3_deformed"), &tol()).unwrap();
    assert_eq!(s.overall, SplitVerdict::Split);
    assert!(s.beta.to_f64() > 0.0);
}

#[test]
fn symbol_rejects_many_pairs() {
    assert_eq!(symbol(&group("q8"), &tol()).unwrap_err().code(), "precondition");
}

#[test]
fn q8_quaternionic_component() {
    let a = group("q8");
    let dm = degree_map(&a, &tol()).unwrap();
    let mut t = character_table(&a, &dm, &central_idempotents(&a, &tol()).unwrap(), &tol()).unwrap();
    fs_indicator(&t, &a, &dm, &tol()).unwrap().annotate(&mut t);
    let rep = star_rep_extract(&a, &dm, &t, 4, &tol()).unwrap();
    assert_eq!(rep.dim, 4);
    assert!(rep.product_residual(&a) < 1e-9);
    // -1 ↦ -1 and i ↦ a unit pure quaternion: u² + 1
    let cp = reduced_charpoly_from_matrix(&rep.mats[2]);
    assert!((cp[0] - 1.0).abs() < 1e-9 && cp[1].abs() < 1e-9);
    let chi = t.characters[4].real_values();
    use rba_core::Quaternion;
    let one = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    let i = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    let j = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    let k = Quaternion::new(0.0, 0.0, 0.0, 1.0);
    let images = vec![one.clone(), -one, i.clone(), -i, j.clone(), -j, k.clone(), -k];
    let chk = quaternion_verify(&a, &images, &chi, &tol()).unwrap();
    assert!(chk.spans);
}

#[test]
fn hilbert_places() {
    let m1 = rba_core::scalar::rat(-1, 1);
    assert_eq!(hilbert_symbol(&m1, &m1, Place::Prime(2)).unwrap(), -1);
    assert_eq!(hilbert_symbol(&m1, &m1, Place::Infinity).unwrap(), -1);
}
