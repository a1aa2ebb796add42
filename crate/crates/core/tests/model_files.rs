use std::path::PathBuf;

use anyon_core::model::{builtin_model, load_model, verify_model, BUILTIN_NAMES, DEFAULT_TOLERANCE};

fn models_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("models")
}

#[test]
fn shipped_files_match_builtins() {
    for name in BUILTIN_NAMES {
        let text = std::fs::read_to_string(models_dir().join(format!("{name}.json"))).unwrap();
        let loaded = load_model(&text).unwrap();
        let builtin = builtin_model(name).unwrap();
        assert!(loaded.approx_eq(&builtin, 1e-15), "{name}");
        assert!(verify_model(&loaded, DEFAULT_TOLERANCE).all_passed(), "{name}");
    }
}

#[test]
fn every_shipped_file_is_a_builtin() {
    let mut names: Vec<String> = std::fs::read_dir(models_dir())
        .unwrap()
        .map(|e| e.unwrap().path().file_stem().unwrap().to_string_lossy().into_owned())
        .collect();
    names.sort();
    let mut expected: Vec<String> = BUILTIN_NAMES.iter().map(|s| s.to_string()).collect();
    expected.sort();
    assert_eq!(names, expected);
}
