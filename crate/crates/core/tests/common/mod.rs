#![allow(dead_code)]

use std::path::PathBuf;

use rba_core::ingest::{from_group, from_scheme, CayleyTable, Scheme};
use rba_core::Rba;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn group(name: &str) -> Rba {
    from_group(&CayleyTable::parse(&read_fixture(&format!("{name}.cayley"))).unwrap()).unwrap()
}

pub fn scheme(name: &str) -> Rba {
    from_scheme(&Scheme::parse(&read_fixture(&format!("{name}.scheme"))).unwrap()).unwrap()
}

pub fn rba_file(name: &str) -> Rba {
    Rba::parse(&read_fixture(&format!("{name}.rba"))).unwrap()
}
