use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::{Command, Output};

use cuntz_core::ExtScalar;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn cuntz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cuntz"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn result_block(out: &Output) -> BTreeMap<String, String> {
    let text = stdout(out);
    let body = text
        .split("```result\n")
        .nth(1)
        .and_then(|rest| rest.split("\n```").next())
        .expect("result block present");
    body.lines()
        .filter_map(|l| l.split_once(" = "))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn scalar(block: &BTreeMap<String, String>, key: &str) -> ExtScalar {
    block[key].parse().expect("exact scalar")
}

fn temp_doc(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cuntz-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn reciprocal_values_round_trip() {
    let out = cuntz(&["rho", fixture("reciprocal.cu").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(scalar(&result_block(&out), "value"), ExtScalar::one());

    let swapped = std::fs::read_to_string(fixture("reciprocal.cu"))
        .unwrap()
        .replace("x = a", "x = tmp")
        .replace("y = b", "y = a")
        .replace("x = tmp", "x = b");
    let out = cuntz(&["rho", temp_doc("swapped.cu", &swapped).to_str().unwrap()]);
    assert_eq!(scalar(&result_block(&out), "value"), ExtScalar::from_int(2));
}

#[test]
fn output_is_byte_identical_across_runs() {
    for (cmd, doc) in [("rho", "reciprocal.cu"), ("rc", "perforated_search.cu"), ("osc", "ramp.cu")] {
        let path = fixture(doc);
        let a = cuntz(&[cmd, path.to_str().unwrap()]);
        let b = cuntz(&[cmd, path.to_str().unwrap()]);
        assert_eq!(a.status.code(), Some(0), "{cmd} {doc}");
        assert_eq!(a.stdout, b.stdout, "{cmd} {doc}");
    }
}

#[test]
fn search_reports_certified_bound() {
    let out = cuntz(&["rc", fixture("perforated_search.cu").to_str().unwrap()]);
    let block = result_block(&out);
    assert_eq!(scalar(&block, "value"), ExtScalar::from_int(3));
    assert_eq!(block["op"], "rc_search");
}

#[test]
fn oscillation_of_the_ramp() {
    let out = cuntz(&["osc", fixture("ramp.cu").to_str().unwrap()]);
    let block = result_block(&out);
    assert_eq!(scalar(&block, "omega"), ExtScalar::frac(1, 2));
    assert_eq!(scalar(&block, "limit_rho_cutdown"), ExtScalar::from_int(2));
}

#[test]
fn infinite_multiples_have_zero_ratio() {
    let out = cuntz(&["rho", fixture("infinite_multiple.cu").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(scalar(&result_block(&out), "value"), ExtScalar::zero());
}

#[test]
fn malformed_payload_exits_with_usage_code() {
    let out = cuntz(&["rho", fixture("bad_payload.cu").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("elements.a"), "{err}");
}

#[test]
fn parse_errors_name_the_line() {
    let doc = temp_doc("broken.cu", "[model]\nkind = perforated\nnonsense\n");
    let out = cuntz(&["rc", doc.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn validation_errors_name_the_field() {
    let doc = temp_doc(
        "zero_weight.cu",
        "[model]\nkind = perforated\ngap = 3\n\n[elements]\nw = 0\n\n[query]\nop = rc\nw = w\n",
    );
    let out = cuntz(&["rc", doc.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("query.w"));
}

#[test]
fn missing_file_is_an_io_error() {
    let out = cuntz(&["rho", "/nonexistent/doc.cu"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn examples_match_and_filter() {
    let out = cuntz(&["examples"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert_eq!(result_block(&out)["mismatches"], "0");

    let out = cuntz(&["examples", "--filter", "Exa.RecipricalValue"]);
    let text = stdout(&out);
    assert!(text.contains("Exa.RecipricalValue"));
    assert!(!text.contains("RCPand1"));
}

#[test]
fn perturbed_expectation_is_reported() {
    let src = std::fs::read_to_string(
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("golden/examples.expected"),
    )
    .unwrap();
    let key = "RCPand1.kappa";
    let perturbed: String = src
        .lines()
        .map(|l| {
            if l.trim_start().starts_with(key) {
                format!("{key} = 1/7")
            } else {
                l.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join("\n");
    let path = temp_doc("perturbed.expected", &perturbed);
    let out = cuntz(&["examples", "--expected", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains(key), "{text}");
    assert_eq!(result_block(&out)["mismatches"], "1");
}

#[test]
fn verify_runs_a_named_property() {
    let out = cuntz(&["verify", "--only", "Rkrc.sandwich", "--cases", "96"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let block = result_block(&out);
    assert!(block["property.Rkrc.sandwich"].starts_with("pass"));
    assert_eq!(block["failed"], "0");
}

#[test]
fn verify_rejects_unknown_properties() {
    let out = cuntz(&["verify", "--only", "NoSuchProperty"]);
    assert_eq!(out.status.code(), Some(2));
}
