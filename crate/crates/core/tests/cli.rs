//! End-to-end runs of the `zcohom` binary.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::Command;

use zcohom::cli::{docs::matrix_entry, CoefficientDocument, MapDocument, MonoidDocument};
use zcohom::exactalg::IntMatrix;
use zcohom::monoid::{builtin, BUILTIN_MONOIDS};
use zcohom::natsys::NaturalSystem;

struct Run {
    stdout: String,
    stderr: String,
    code: i32,
}

fn zcohom(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_zcohom"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
        code: out.status.code().unwrap(),
    }
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("zcohom-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn h_lines(stdout: &str) -> Vec<&str> {
    stdout.lines().filter(|l| l.starts_with("H^")).collect()
}

#[test]
fn list_builtins_names_everything() {
    let r = zcohom(&["--list-builtins"]);
    assert_eq!(r.code, 0);
    for name in BUILTIN_MONOIDS {
        assert!(r.stdout.contains(name), "{name}");
    }
    for kind in ["trivial-Z", "zero-module", "bar", "natural-system"] {
        assert!(r.stdout.contains(kind), "{kind}");
    }
}

#[test]
fn documented_cohomology_examples() {
    let r = zcohom(&["cohomology", "--monoid", "z2-with-zero", "--coeff", "trivial-Z", "--max-degree", "2"]);
    assert_eq!(r.code, 0);
    assert_eq!(h_lines(&r.stdout), ["H^0 = Z", "H^1 = 0", "H^2 = Z/2"]);
    assert!(r.stdout.contains("|Ner_2| = 4"));
    assert!(r.stderr.contains("elapsed"));

    let r = zcohom(&["cohomology", "--monoid", "example-uvw", "--coeff", "zero-module:z2:identity", "--max-degree", "2"]);
    assert_eq!(r.code, 0);
    let h2 = h_lines(&r.stdout)[2];
    assert!(h2.starts_with("H^2 = ") && h2 != "H^2 = 0", "{h2}");

    let r = zcohom(&["cohomology", "--monoid", "trivial", "--coeff", "trivial-Z", "--max-degree", "3"]);
    assert_eq!(h_lines(&r.stdout), ["H^0 = Z", "H^1 = 0", "H^2 = 0", "H^3 = 0"]);
}

#[test]
fn cd_probe_examples() {
    let r = zcohom(&["cd-probe", "--monoid", "m3"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("no nonvanishing H^n for n ≥ 2 across battery"));
    assert!(r.stdout.contains("evidence"));

    let r = zcohom(&["cd-probe", "--monoid", "example-uvw"]);
    assert!(r.stdout.contains("H^2 nonzero for coefficient zero-module:z2:identity"));
    assert!(r.stdout.contains("c.d. evidence 2"));

    let r = zcohom(&["cd-probe", "--monoid", "trivial"]);
    assert!(r.stdout.contains("c.d. evidence 0"));
}

#[test]
fn structural_checks_pass_on_builtins() {
    for name in BUILTIN_MONOIDS {
        let r = zcohom(&["resolution-check", "--monoid", name, "--max-degree", "3"]);
        assert_eq!(r.code, 0, "{name}: {}", r.stdout);
        assert!(r.stdout.contains("result: PASS"));
        let r = zcohom(&["psi-check", "--monoid", name, "--max-degree", "2"]);
        assert_eq!(r.code, 0, "{name}: {}", r.stdout);
    }
}

#[test]
fn psi_check_ranks_on_uvw() {
    let r = zcohom(&["psi-check", "--monoid", "example-uvw", "--max-degree", "2"]);
    assert!(r.stdout.contains("degree 1: C^1 rank 4 (Z^4), Hom(B_1,D) rank 4 (Z^4)"));
    assert!(r.stdout.contains("C^2 rank 11"));
    assert!(r.stdout.contains("Hom(B_2,D) rank 11"));
}

#[test]
fn output_is_deterministic() {
    let cases: [&[&str]; 4] = [
        &["cohomology", "--monoid", "example-uvw", "--coeff", "zero-module:z3:identity"],
        &["--format", "json", "cd-probe", "--monoid", "free2-len1"],
        &["psi-check", "--monoid", "example-uvw", "--seed", "11"],
        &["nerve", "--monoid", "example-uvw"],
    ];
    for args in cases {
        let a = zcohom(args);
        let b = zcohom(args);
        assert_eq!(a.code, 0);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn json_reports_parse() {
    let r = zcohom(&["--format", "json", "cohomology", "--monoid", "z2-with-zero", "--max-degree", "2"]);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert!(v.is_object());
}

#[test]
fn guardrail_and_force() {
    let r = zcohom(&["cohomology", "--monoid", "trivial", "--max-degree", "5"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("--force"));
    let r = zcohom(&["cohomology", "--monoid", "trivial", "--max-degree", "5", "--force"]);
    assert_eq!(r.code, 0);
    assert_eq!(h_lines(&r.stdout).len(), 6);
}

#[test]
fn validate_reports_witnesses() {
    let r = zcohom(&["validate", "--monoid", "example-uvw"]);
    assert_eq!(r.code, 0);

    let mut doc = MonoidDocument::from_monoid(&builtin("example-uvw").unwrap());
    // u·w = u breaks (u·u)·w = 0 ≠ w = u·(u·w)
    doc.table[1][3] = "u".into();
    let path = temp_file("corrupt.json", &serde_json::to_string(&doc).unwrap());
    let r = zcohom(&["validate", "--monoid", path.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("not associative"), "{}", r.stderr);

    let mut doc = MonoidDocument::from_monoid(&builtin("z2-with-zero").unwrap());
    doc.table.pop();
    let path = temp_file("missing-row.json", &serde_json::to_string(&doc).unwrap());
    let r = zcohom(&["validate", "--monoid", path.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("rows"), "{}", r.stderr);

    let path = temp_file("truncated.json", "{\"elements\": [\n  \"1\",");
    let r = zcohom(&["validate", "--monoid", path.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 2"), "{}", r.stderr);

    let r = zcohom(&["validate", "--monoid", "no-such-monoid"]);
    assert_eq!(r.code, 2);
}

#[test]
fn monoid_documents_round_trip() {
    for name in BUILTIN_MONOIDS {
        let m = builtin(name).unwrap();
        let doc = MonoidDocument::from_monoid(&m);
        let text = serde_json::to_string_pretty(&doc).unwrap();
        let back = MonoidDocument::parse(&text, name).unwrap().to_monoid().unwrap();
        assert_eq!(back, m);
        let path = temp_file(&format!("{name}.json"), &text);
        let from_file = zcohom(&["cohomology", "--monoid", path.to_str().unwrap()]);
        let builtin_run = zcohom(&["cohomology", "--monoid", name]);
        assert_eq!(h_lines(&from_file.stdout), h_lines(&builtin_run.stdout), "{name}");
    }
}

#[test]
fn zero_module_document_matches_builtin_name() {
    let text = r#"{"kind": "zero-module", "group": [2], "action": {"u": [[1]], "v": [[1]], "w": [[1]]}}"#;
    let path = temp_file("z2-identity.json", text);
    let a = zcohom(&["cohomology", "--monoid", "example-uvw", "--coeff", path.to_str().unwrap()]);
    let b = zcohom(&["cohomology", "--monoid", "example-uvw", "--coeff", "zero-module:z2:identity"]);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(h_lines(&a.stdout), h_lines(&b.stdout));

    // u·u = w forces action(u)² = action(w)
    let text = r#"{"kind": "zero-module", "group": [3], "action": {"u": [[2]], "v": [[1]], "w": [[2]]}}"#;
    let path = temp_file("z3-bad.json", text);
    let r = zcohom(&["cohomology", "--monoid", "example-uvw", "--coeff", path.to_str().unwrap()]);
    assert_eq!(r.code, 2);
}

fn natural_system_document(m: &zcohom::monoid::MonoidWithZero, d: &NaturalSystem) -> CoefficientDocument {
    let mut objects = BTreeMap::new();
    let mut left = Vec::new();
    let mut right = Vec::new();
    for a in m.nonzero() {
        objects.insert(m.name(a).to_string(), vec![0; d.value(a).rank()]);
        for x in m.nonzero() {
            if let Some(mat) = d.left(x, a) {
                left.push(MapDocument {
                    element: m.name(x).into(),
                    object: m.name(a).into(),
                    matrix: matrix_entry(mat),
                });
            }
            if let Some(mat) = d.right(a, x) {
                right.push(MapDocument {
                    element: m.name(x).into(),
                    object: m.name(a).into(),
                    matrix: matrix_entry(mat),
                });
            }
        }
    }
    CoefficientDocument::NaturalSystem { objects, left, right }
}

#[test]
fn natural_system_document_reproduces_bar_coefficients() {
    let m = builtin("example-uvw").unwrap();
    let d = zcohom::natsys::bar_system(&m, 0);
    let doc = natural_system_document(&m, &d);
    let text = serde_json::to_string(&doc).unwrap();
    let parsed = CoefficientDocument::parse(&text, "doc").unwrap();
    assert_eq!(parsed, doc);
    let path = temp_file("bar0.json", &text);
    let a = zcohom(&["cohomology", "--monoid", "example-uvw", "--coeff", path.to_str().unwrap()]);
    let b = zcohom(&["cohomology", "--monoid", "example-uvw", "--coeff", "bar:0"]);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(h_lines(&a.stdout), h_lines(&b.stdout));
}

#[test]
fn broken_natural_system_is_rejected() {
    let m = builtin("z2-with-zero").unwrap();
    let d = zcohom::natsys::trivial_z(&m);
    let mut doc = natural_system_document(&m, &d);
    if let CoefficientDocument::NaturalSystem { left, .. } = &mut doc {
        let g = left.iter_mut().find(|l| l.element == "g" && l.object == "g").unwrap();
        g.matrix = matrix_entry(&IntMatrix::scalar(1, 2));
    }
    let path = temp_file("broken.json", &serde_json::to_string(&doc).unwrap());
    let r = zcohom(&["cohomology", "--monoid", "z2-with-zero", "--coeff", path.to_str().unwrap()]);
    assert_ne!(r.code, 0);
    assert!(!r.stderr.is_empty());
}

#[test]
fn zero_cancellative_names_witness() {
    let r = zcohom(&["zero-cancellative", "--monoid", "example-uvw"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("not 0-cancellative"));
    assert!(r.stdout.contains("u·u = v·u"));
    let r = zcohom(&["zero-cancellative", "--monoid", "m3"]);
    assert!(r.stdout.contains("m3: 0-cancellative"));
}

#[test]
fn missing_subcommand_is_an_input_error() {
    assert_eq!(zcohom(&[]).code, 2);
}
