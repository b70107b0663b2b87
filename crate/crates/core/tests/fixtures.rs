//! Every fixture parses, and writing it back gives the file minus comments.

use std::fs;
use std::path::PathBuf;

use turncover::io::{parse_instance, write_instance, Instance};

fn fixtures() -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "txt"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read_to_string(&p).unwrap()))
        .collect();
    out.sort();
    out
}

fn strip_comments(text: &str) -> String {
    text.lines()
        .map(|l| l.split('#').next().unwrap().trim())
        .filter(|l| !l.is_empty())
        .map(|l| l.split_whitespace().collect::<Vec<_>>().join(" ") + "\n")
        .collect()
}

#[test]
fn corpus_covers_kinds_and_variants() {
    let all = fixtures();
    assert!(all.len() >= 20, "only {} fixtures", all.len());
    let headers: Vec<String> = all.iter().map(|(_, t)| strip_comments(t).lines().next().unwrap().to_string()).collect();
    for kind in ["grid", "geo"] {
        for variant in ["full", "subset", "penalty"] {
            let prefix = format!("{kind} {variant} ");
            assert!(headers.iter().any(|h| h.starts_with(&prefix)), "no {kind} {variant} fixture");
        }
    }
}

#[test]
fn write_after_parse_is_normal_form() {
    for (name, text) in fixtures() {
        let inst = parse_instance(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let written = write_instance(&inst);
        assert_eq!(written, strip_comments(&text), "{name}");
        let again = write_instance(&parse_instance(&written).unwrap());
        assert_eq!(again, written, "{name}");
    }
}

#[test]
fn sizes_survive_round_trip() {
    for (name, text) in fixtures() {
        let count = |i: &Instance| match i {
            Instance::Grid(g) => g.pixels().len(),
            Instance::Geo(g) => g.points().len(),
        };
        let inst = parse_instance(&text).unwrap();
        let body = strip_comments(&text).lines().filter(|l| !l.starts_with("obstacle")).count() - 1;
        assert_eq!(count(&inst), body, "{name}");
        assert_eq!(count(&parse_instance(&write_instance(&inst)).unwrap()), body, "{name}");
    }
}
