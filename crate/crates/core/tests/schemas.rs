use std::path::{Path, PathBuf};

use plurilab::genus0::GenusZeroFamily;
use plurilab::regions::RegionSpec;

fn examples(kind: &str) -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas/examples").join(kind);
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    v.sort();
    v
}

#[test]
fn region_examples_parse_and_validate() {
    let files = examples("regions");
    assert_eq!(files.len(), 12, "one example per constructor");
    for f in files {
        let spec: RegionSpec = serde_json::from_str(&std::fs::read_to_string(&f).unwrap())
            .unwrap_or_else(|e| panic!("{}: {e}", f.display()));
        spec.validate().unwrap_or_else(|e| panic!("{}: {e}", f.display()));
        let back: RegionSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(back, spec);
    }
}

#[test]
fn family_examples_parse_and_validate() {
    let files = examples("families");
    assert_eq!(files.len(), 5, "one example per constructor");
    for f in files {
        let fam: GenusZeroFamily = serde_json::from_str(&std::fs::read_to_string(&f).unwrap())
            .unwrap_or_else(|e| panic!("{}: {e}", f.display()));
        fam.validate().unwrap_or_else(|e| panic!("{}: {e}", f.display()));
    }
}
