use std::path::PathBuf;
use std::process::Command;

use hamhier::schema::{DiffPolyJson, ProfileJson, VerdictJson};
use hamhier::{run, ExitStatus};
use hamhier_core::diffpoly::{parse_diffpoly, VarNames};
use hamhier_core::LocalFunctional;

fn here(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join(rel)
}

fn cli_with_stdin(args: &[&str], input: &str) -> (ExitStatus, String, String) {
    let mut argv = vec!["hamhier".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let status = run(&argv, &mut input.as_bytes(), &mut out, &mut err);
    (status, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn cli(args: &[&str]) -> (ExitStatus, String, String) {
    cli_with_stdin(args, "")
}

fn table() -> String {
    here("data/hodge_3spin_g2.json").display().to_string()
}

fn golden(name: &str, args: &[&str]) {
    let (status, out, err) = cli(args);
    assert!(matches!(status, ExitStatus::Ok), "{:?}: {}", status, err);
    let expect = std::fs::read_to_string(here(&format!("golden/{}", name))).unwrap();
    assert_eq!(out, expect, "golden file {} differs", name);
}

#[test]
fn golden_outputs() {
    let t = table();
    golden("gd_r2_m3.txt", &["gd", "--r", "2", "--m", "3"]);
    golden("rspin_r2.txt", &["rspin", "--r", "2", "--alpha", "1", "--d", "1", "--format", "text"]);
    golden("rspin_r4.txt", &["rspin", "--r", "4", "--alpha", "1", "--d", "1"]);
    golden("rspin_r3.tex", &["rspin", "--r", "3", "--format", "latex"]);
    golden("verify_r4.txt", &["verify-main", "--r", "4"]);
    golden("enumerate_r5.txt", &["enumerate", "--r", "5"]);
    golden("assemble_3spin.json", &["assemble", "--r", "3", "--table-file", &t, "--format", "json"]);
    golden("quantize_r4.txt", &["quantize-check", "--r", "4", "--window", "1"]);
}

#[test]
fn output_is_byte_stable() {
    for args in [&["rspin", "--r", "5", "--format", "json"][..], &["verify-main", "--r", "5", "--format", "json"]] {
        assert_eq!(cli(args).1, cli(args).1);
    }
}

#[test]
fn two_spin_pair_matches_closed_form() {
    let (_, out, _) = cli(&["rspin", "--r", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let h: DiffPolyJson = serde_json::from_value(v["hamiltonian"].clone()).unwrap();
    assert!(h.is_integrated());
    let got = LocalFunctional::new(h.to_poly().unwrap());
    let expect = LocalFunctional::new(parse_diffpoly("1/6*w^3 + 1/24*eps^2*w*w_2", &VarNames::w(1)).unwrap());
    assert!(got.local_eq(&expect).unwrap());
    let k = &v["operator"]["entries"][0][0];
    assert_eq!(k.as_object().unwrap().keys().collect::<Vec<_>>(), vec!["1"]);
}

#[test]
fn verdicts_and_exit_codes() {
    for r in ["3", "4", "5"] {
        let (status, out, _) = cli(&["verify-main", "--r", r, "--format", "json"]);
        assert_eq!(status, ExitStatus::Ok);
        let v: VerdictJson = serde_json::from_str(&out).unwrap();
        assert_eq!(v.conditions, [true, true, true]);
        assert!(v.diffs.is_empty());
    }
    let (status, out, _) = cli(&["verify-main", "--r", "4", "--identity", "--format", "json"]);
    assert_eq!(status, ExitStatus::VerdictFailed);
    let v: VerdictJson = serde_json::from_str(&out).unwrap();
    assert_eq!(v.conditions, [true, false, false]);
    assert!(v.diffs.iter().any(|d| d.label == "K[1,1] dx^3"));
}

#[test]
fn enumeration_lists() {
    let (_, out, _) = cli(&["enumerate", "--r", "3", "--format", "json"]);
    let ps: Vec<ProfileJson> = serde_json::from_str(&out).unwrap();
    let got: Vec<(u32, Vec<u32>)> = ps.into_iter().map(|p| (p.g, p.counts)).collect();
    assert_eq!(got, vec![(0, vec![0, 4]), (0, vec![2, 1]), (1, vec![0, 3]), (1, vec![2, 0]), (2, vec![0, 2])]);
    let (_, out, _) = cli(&["enumerate", "--r", "5", "--format", "json"]);
    assert_eq!(serde_json::from_str::<Vec<ProfileJson>>(&out).unwrap().len(), 26);
}

#[test]
fn table_pipeline() {
    let t = table();
    let (status, out, _) = cli(&["hain-pair", "--table-file", &t]);
    assert_eq!(status, ExitStatus::Ok);
    // (2g-2+n) = 4 times (7/4320 (a1^4 + a2^4)/8 + 13/4320 a1^2 a2^2 / 4).
    assert_eq!(out, "7/8640*a1^4 + 13/4320*a1^2*a2^2 + 7/8640*a2^4\n");
    let (_, out, _) = cli(&["assemble", "--r", "3", "--table-file", &t, "--format", "json"]);
    let h: DiffPolyJson = serde_json::from_str(&out).unwrap();
    let expect = parse_diffpoly("1/432*eps^4*u2*u2_4", &VarNames::u(2)).unwrap();
    assert!(LocalFunctional::new(h.to_poly().unwrap()).local_eq(&LocalFunctional::new(expect)).unwrap());
}

#[test]
fn failure_classes_have_distinct_codes() {
    let t = table();
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"g\": 2").unwrap();
    let bad = bad.display().to_string();
    let missing = dir.path().join("none.json").display().to_string();
    let cases: Vec<(Vec<&str>, ExitStatus)> = vec![
        (vec!["frobnicate"], ExitStatus::UnknownVerb),
        (vec!["rspin", "--r", "1"], ExitStatus::BadOptions),
        (vec!["rspin", "--r", "3", "--alpha", "3"], ExitStatus::BadOptions),
        (vec!["gd", "--r", "2"], ExitStatus::BadOptions),
        (vec!["hain-pair", "--table-file", &missing], ExitStatus::MissingFile),
        (vec!["hain-pair", "--table-file", &t, "--strict"], ExitStatus::TableMiss),
        (vec!["hain-pair", "--table-file", &bad], ExitStatus::BadInput),
        (vec!["render", "--expr", "u1*"], ExitStatus::BadInput),
        (vec!["reconstruct", "--r", "3", "--t-degree", "16"], ExitStatus::BadOptions),
        (vec!["gd", "--r", "2", "--m", "3", "--depth", "1"], ExitStatus::ComputeError),
        (vec!["verify-main", "--r", "4", "--identity"], ExitStatus::VerdictFailed),
    ];
    let mut seen = std::collections::BTreeSet::new();
    for (args, want) in cases {
        let (status, out, err) = cli(&args);
        assert_eq!(status, want, "{:?}", args);
        if want == ExitStatus::VerdictFailed {
            assert!(out.contains("verdict: FAIL"));
        } else {
            assert!(out.is_empty() && !err.is_empty(), "{:?}", args);
        }
        seen.insert(want as i32);
    }
    assert_eq!(seen.len(), 7);
    assert!(!seen.contains(&0));
}

#[test]
fn render_roundtrip_through_stdin() {
    let (_, json, _) = cli(&["render", "--n", "2", "--expr", "u2_3*u1 + 1/2*eps^2*u1_2", "--format", "json"]);
    let (status, text, _) = cli_with_stdin(&["render", "--vars", "w"], &json);
    assert_eq!(status, ExitStatus::Ok);
    let (_, again, _) = cli_with_stdin(&["render", "--vars", "w", "--format", "json"], &json);
    assert_eq!(json, again);
    let (_, direct, _) = cli(&["render", "--vars", "w", "--n", "2", "--expr", "w1*w2_3 + 1/2*eps^2*w1_2"]);
    assert_eq!(text, direct);
}

#[test]
fn reconstruct_verb_reports_zero_residuals() {
    let (status, out, _) = cli(&["reconstruct", "--r", "2"]);
    assert_eq!(status, ExitStatus::Ok);
    assert!(out.ends_with("string/dilaton residuals: zero\nrecursion: closed\n"));
    let (status, _, _) = cli(&["reconstruct", "--r", "3", "--t-max", "2", "--t-degree", "3", "--format", "json"]);
    assert_eq!(status, ExitStatus::Ok);
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_hamhier");
    let ok = Command::new(bin).args(["verify-main", "--r", "3"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("verdict: PASS"));
    let miss = Command::new(bin).args(["hain-pair", "--strict", "--table-file", &table()]).output().unwrap();
    assert_eq!(miss.status.code(), Some(ExitStatus::TableMiss as i32));
}
