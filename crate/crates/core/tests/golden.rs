//! Frozen drawings. Set `UPDATE_GOLDEN=1` to rewrite them after an
//! intentional change to the renderer or the solvers.

use std::fs;
use std::path::PathBuf;

use turncover::approx::approx_tour;
use turncover::geometry::approx_geo_tour;
use turncover::io::{parse_instance, Instance};
use turncover::svg::{render_geo_svg, render_svg};

fn check(fixture: &str) {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests");
    let text = fs::read_to_string(root.join("fixtures").join(format!("{fixture}.txt"))).unwrap();
    let svg = match parse_instance(&text).unwrap() {
        Instance::Grid(g) => render_svg(&g, &approx_tour(&g).unwrap().cover),
        Instance::Geo(g) => render_geo_svg(&g, &approx_geo_tour(&g).unwrap().cover),
    };
    let golden = root.join("golden").join(format!("{fixture}.svg"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::create_dir_all(golden.parent().unwrap()).unwrap();
        fs::write(&golden, &svg).unwrap();
    }
    let expected = fs::read_to_string(&golden).unwrap_or_else(|_| panic!("missing {}", golden.display()));
    assert_eq!(svg, expected, "{fixture} drawing changed");
}

#[test]
fn domino() {
    check("domino");
}

#[test]
fn ring() {
    check("ring");
}

#[test]
fn geo_square() {
    check("geo_square");
}
