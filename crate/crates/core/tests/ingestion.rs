mod common;

use common::read_fixture;
use rba_core::degree::degree_map;
use rba_core::ingest::{from_group, from_scheme, valencies, CayleyTable, Scheme};
use rba_core::validate::validate;
use rba_core::ToleranceConfig;

#[test]
fn groups_validate_with_unit_degrees() {
    for (name, order, pairs) in [("c2", 2, 0), ("c3", 3, 1), ("s3", 6, 1), ("d8", 8, 1), ("q8", 8, 3)] {
        let t = CayleyTable::parse(&read_fixture(&format!("{name}.cayley"))).unwrap();
        let a = from_group(&t).unwrap();
        assert_eq!(a.rank(), order);
        assert_eq!(a.nonreal_pairs().len(), pairs, "{name}");
        assert!(validate(&a, &ToleranceConfig::default()).passed);
        let dm = degree_map(&a, &ToleranceConfig::default()).unwrap();
        assert_eq!(dm.order.to_string(), order.to_string());
    }
}

#[test]
fn cayley_text_roundtrip() {
    let t = CayleyTable::parse(&read_fixture("d8.cayley")).unwrap();
    assert_eq!(CayleyTable::parse(&t.to_text()).unwrap(), t);
}

#[test]
fn pentagon_degrees_are_valencies() {
    let s = Scheme::parse(&read_fixture("pentagon.scheme")).unwrap();
    assert_eq!(valencies(&s), vec![1, 2, 2]);
    let a = from_scheme(&s).unwrap();
    let dm = degree_map(&a, &ToleranceConfig::default()).unwrap();
    let d: Vec<String> = dm.values.iter().map(|v| v.to_string()).collect();
    assert_eq!(d, ["1", "2", "2"]);
    assert_eq!(Scheme::parse(&s.to_text()).unwrap(), s);
}

#[test]
fn group_to_thin_scheme_and_back() {
    for name in ["c3", "q8"] {
        let t = CayleyTable::parse(&read_fixture(&format!("{name}.cayley"))).unwrap();
        let g = from_group(&t).unwrap();
        let s = from_scheme(&t.thin_scheme().unwrap()).unwrap();
        assert_eq!(g.exact_slice(), s.exact_slice());
        assert_eq!(g.star_map(), s.star_map());
    }
}

#[test]
fn parse_errors_name_the_line() {
    let err = CayleyTable::parse("order 2\n0 1\n1 x\n").unwrap_err();
    assert_eq!(err.code(), "parse");
    assert!(err.to_string().contains('3'), "{err}");
    assert_eq!(Scheme::parse("points 2 classes 1\n1 0\n").unwrap_err().code(), "parse");
}
