#![allow(dead_code)]

use ebloch::triangulation::{parse_triangulation, Triangulation};

pub fn fixture_text(name: &str) -> String {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn fixture(name: &str) -> Triangulation {
    parse_triangulation(&fixture_text(name)).expect("fixture parses")
}

pub fn figure8() -> Triangulation {
    fixture("figure8.json")
}

pub fn figure8_unordered() -> Triangulation {
    fixture("figure8_unordered.json")
}
