use std::path::Path;
use std::process::{Command, Output};

use sextic_cli::dto::{profile_from_doc, profile_to_doc, ClassifyDoc, LatticeDataDoc};
use sextic_lattice::classify::classify_ade;
use sextic_lattice::{demo, ADEType};

fn sextic(args: &[&str], cache: Option<&Path>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_sextic"));
    c.args(args).env_remove("SEXTIC_CACHE_DIR");
    if let Some(d) = cache {
        c.env("SEXTIC_CACHE_DIR", d);
    }
    c.output().unwrap()
}

fn write_doc(dir: &Path, name: &str, doc: &LatticeDataDoc) -> String {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string(doc).unwrap()).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn lattice_data_round_trip() {
    for l in [demo::target_lattice(2).unwrap(), demo::source_lattice().unwrap()] {
        let doc = LatticeDataDoc::from_data(&l);
        let back: LatticeDataDoc = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
        assert_eq!(back, doc);
        let l2 = back.to_data().unwrap();
        assert_eq!(l2.glue().elements, l.glue().elements);
        assert_eq!(LatticeDataDoc::from_data(&l2), doc);
    }
    let x = demo::target_extended().unwrap();
    let doc = LatticeDataDoc::from_extended(&x);
    assert_eq!(doc.to_extended().unwrap().unwrap().v_plus, x.v_plus);
}

#[test]
fn profile_round_trip() {
    let r = ADEType::parse("A3+2A7").unwrap();
    for (i, t) in classify_ade(&r).unwrap().iter().enumerate() {
        let doc = profile_to_doc(i, &t.data, &t.profile, &t.fingerprint.0);
        let text = serde_json::to_string(&doc).unwrap();
        let back = serde_json::from_str(&text).unwrap();
        assert_eq!(profile_from_doc("A3+2A7", &back).unwrap(), t.profile);
    }
}

#[test]
fn rationals_are_exact_strings() {
    let q = sextic_cli::dto::parse_rat("-6/8").unwrap();
    assert_eq!(sextic_cli::dto::rat_str(&q), "-3/4");
    assert!(sextic_cli::dto::parse_rat("1/0").is_err());
    assert!(sextic_cli::dto::parse_rat("0.5").is_err());
}

#[test]
fn classify_six_a2() {
    let out = sextic(&["classify", "6A2", "--format", "json"], None);
    assert!(out.status.success());
    let doc: ClassifyDoc = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc.types.len(), 2);
    let t: Vec<_> = doc.types.iter().filter(|t| t.z2 == 1).collect();
    assert_eq!(t.len(), 1);
    assert_eq!(t[0].g, vec![3]);
    assert_eq!(t[0].f, vec![3]);
}

#[test]
fn cache_hits_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = sextic(&["classify", "A3+2A7", "--format", "json"], Some(dir.path()));
    assert!(a.status.success());
    let file = sextic_cli::cache::Cache::new(dir.path()).path("A3+2A7");
    let cached = std::fs::read(&file).unwrap();
    assert_eq!(cached, a.stdout);
    let b = sextic(&["classify", "A3+2A7", "--format", "json"], Some(dir.path()));
    assert_eq!(a.stdout, b.stdout);
    let fresh = sextic(&["classify", "A3+2A7", "--format", "json"], None);
    assert_eq!(a.stdout, fresh.stdout);
}

#[test]
fn enumerate_is_independent_of_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let a = sextic(&["enumerate", "--max-mu", "7", "--jobs", "1", "--format", "csv"], None);
    let b = sextic(&["enumerate", "--max-mu", "7", "--jobs", "3", "--format", "csv"], Some(dir.path()));
    let c = sextic(&["enumerate", "--max-mu", "7", "--format", "csv"], Some(dir.path()));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("mu,lattice_types,config_types\n0,1,1\n"));
}

#[test]
fn exit_codes() {
    assert_eq!(sextic(&["classify", "D3"], None).status.code(), Some(2));
    assert_eq!(sextic(&["classify", "10A2"], None).status.code(), Some(2));
    assert_eq!(sextic(&["criterion", "--deg", "2", "--t", "0", "--sing", "A2:5"], None).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"ade\": \"A2\"}").unwrap();
    let b = bad.to_str().unwrap();
    assert_eq!(sextic(&["specialize", b, b], None).status.code(), Some(2));
}

#[test]
fn specialize_files() {
    let dir = tempfile::tempdir().unwrap();
    let src = write_doc(dir.path(), "s.json", &LatticeDataDoc::from_extended(&demo::source_extended().unwrap()));
    let dst = write_doc(dir.path(), "t.json", &LatticeDataDoc::from_extended(&demo::target_extended().unwrap()));
    let ok = sextic(&["specialize", &src, &dst, "--format", "json"], None);
    assert_eq!(ok.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["embeddings"][0]["flags"]["vanishing_h1"], true);
    // The larger lattice never embeds into the smaller one.
    assert_eq!(sextic(&["specialize", &dst, &src], None).status.code(), Some(1));
    assert_eq!(sextic(&["specialize", &src, &dst, "--budget", "10"], None).status.code(), Some(4));
}

#[test]
fn criterion_cases() {
    let torus = sextic(&["criterion", "--deg", "2", "--t", "0", "--sing", "A2:1", "A2:1", "A2:1", "A2:1", "A2:1", "A2:2"], None);
    assert!(String::from_utf8(torus.stdout).unwrap().contains("equality"));
    let line = sextic(&["criterion", "--deg", "1", "--t", "3"], None);
    assert!(String::from_utf8(line.stdout).unwrap().contains("strict-inequality"));
}

#[test]
fn demo_runs() {
    let out = sextic(&["demo"], None);
    assert!(out.status.success());
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("q = -3/4 mod 2"));
    assert!(s.contains("vanishing_h1: Some(true)"));
}
