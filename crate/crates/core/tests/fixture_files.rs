//! The shipped fixture files are generated from the in-crate builders; this
//! suite keeps them in exact sync. Run the ignored regeneration test after
//! changing a builder:
//!
//! ```text
//! cargo test -p indexsys --test fixture_files regenerate_fixture_files -- --ignored
//! ```

use std::path::PathBuf;

use indexsys::fixtures;
use indexsys::format;

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join("fixtures")
}

fn expected_files() -> Vec<(&'static str, String)> {
    let eps = fixtures::default_eps();
    vec![
        ("tent.map", format::map_to_string(&fixtures::tent_map())),
        (
            "doubling.map",
            format::map_to_string(&fixtures::doubling_map()),
        ),
        (
            "tent.system",
            format::system_to_string(&fixtures::tent_system(&eps)),
        ),
        (
            "doubling.system",
            format::system_to_string(&fixtures::doubling_system(&eps)),
        ),
        (
            "trivial.system",
            format::system_to_string(&fixtures::trivial_tent_system(&eps)),
        ),
        (
            "word-doubling-135.json",
            String::from("{\n  \"preperiod\": [],\n  \"period\": [\"1\", \"3\", \"5\"]\n}\n"),
        ),
        (
            "word-trivial-0.json",
            String::from("{\n  \"preperiod\": [],\n  \"period\": [\"0\"]\n}\n"),
        ),
        (
            "word-tent-124.json",
            String::from("{\n  \"preperiod\": [],\n  \"period\": [\"1\", \"2\", \"4\"]\n}\n"),
        ),
    ]
}

#[test]
fn fixture_files_match_builders() {
    for (name, expected) in expected_files() {
        let path = fixtures_dir().join(name);
        let on_disk = std::fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("fixture {name} unreadable at {path:?}: {e}"));
        assert_eq!(on_disk, expected, "fixture {name} is stale");
    }
}

#[test]
#[ignore = "writes the fixture files; run explicitly after builder changes"]
fn regenerate_fixture_files() {
    let dir = fixtures_dir();
    std::fs::create_dir_all(&dir).unwrap();
    for (name, contents) in expected_files() {
        std::fs::write(dir.join(name), contents).unwrap();
    }
}
