use std::process::{Command, Output};

use ltphi_core::phigamma::{ModuleJson, PhiGammaModule};
use serde_json::Value;

fn ltphi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ltphi")).args(args).env_remove("LTPHI_PREC").output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn mult_cyclotomic_two() {
    let out = ltphi(&["mult", "--p", "3", "--deg", "1", "--f", "cyclotomic", "--a", "2", "--window", "5", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let s = &json_of(&out)["result"]["series"];
    assert_eq!(s["n_max"], 5);
    for k in 0..=5 {
        let want = match k {
            1 => 2,
            2 => 1,
            _ => 0,
        };
        let c = &s["coeffs"][k.to_string()];
        if !c.is_null() {
            assert_eq!(c["coeffs"][0], want, "T^{k}");
            assert_eq!(c["prec"], 12);
        } else {
            assert_eq!(want, 0);
        }
    }
}

#[test]
fn mult_plain_text() {
    let out = ltphi(&["mult", "--f", "cyclotomic", "--a", "2", "--window", "5"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("[2](T) = (2)*T + (1)*T^2 + O(T^6)"), "{text}");
}

#[test]
fn val_box() {
    let out = ltphi(&["val", "--series", "p+T", "--s", "1/2", "--r", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "1/2");
}

#[test]
fn twist_frobenius_demo_passes() {
    let out = ltphi(&["twist", "--module", "frobenius-demo", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json_of(&out);
    assert_eq!(j["result"]["report"]["verdict"], "pass");
    assert_eq!(j["meta"]["deg"], 2);
}

#[test]
fn frobenius_demo_is_not_analytic() {
    let j = json_of(&ltphi(&["analytic", "--module", "frobenius-demo", "--json"]));
    assert_eq!(j["result"]["analytic"], false);
    let j = json_of(&ltphi(&["analytic", "--module", "identity-char", "--deg", "2", "--json"]));
    assert_eq!(j["result"]["analytic"], true);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(ltphi(&["bogus"]).status.code(), Some(2));
    assert_eq!(ltphi(&["mult"]).status.code(), Some(2));
    assert_eq!(ltphi(&["mult", "--a", "T"]).status.code(), Some(2));
    assert_eq!(ltphi(&["val", "--series", "T+(", "--r", "1"]).status.code(), Some(2));
    assert_eq!(ltphi(&["twist", "--module", "nope"]).status.code(), Some(2));
    assert_eq!(ltphi(&["mult", "--a", "2", "--f", "cyclotomic", "--deg", "2"]).status.code(), Some(2));
}

#[test]
fn computational_errors_exit_1() {
    // 1/3 is not in O_F.
    assert_eq!(ltphi(&["mult", "--a", "1/3"]).status.code(), Some(1));
}

#[test]
fn precision_from_environment_is_echoed() {
    let out = Command::new(env!("CARGO_BIN_EXE_ltphi"))
        .args(["mult", "--a", "2", "--window", "3", "--json"])
        .env("LTPHI_PREC", "7")
        .output()
        .unwrap();
    let j = json_of(&out);
    assert_eq!(j["meta"]["prec"], 7);
    assert_eq!(j["meta"]["prec_env"], "7");
    assert_eq!(j["meta"]["prec_source"], "env");
    assert_eq!(j["result"]["series"]["coeffs"]["1"]["prec"], 7);

    let j = json_of(&ltphi(&["mult", "--a", "2", "--window", "3", "--json", "--prec-p", "9"]));
    assert_eq!(j["meta"]["prec"], 9);
    assert_eq!(j["meta"]["prec_env"], Value::Null);
}

#[test]
fn module_json_round_trips() {
    let first = json_of(&ltphi(&["analytic", "--module", "frobenius-demo", "--window", "12", "--json"]));
    let module = &first["result"]["module"];
    let parsed: ModuleJson = serde_json::from_value(module.clone()).unwrap();
    let m = PhiGammaModule::from_json(&parsed).unwrap();
    assert_eq!(serde_json::to_value(m.to_json()).unwrap(), *module);

    let dir = std::env::temp_dir().join(format!("ltphi-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("module.json");
    std::fs::write(&path, serde_json::to_string(module).unwrap()).unwrap();
    let arg = format!("@{}", path.display());
    let second = json_of(&ltphi(&["analytic", "--module", &arg, "--json"]));
    assert_eq!(second["result"]["module"], *module);
    assert_eq!(second["result"]["defect_valuations"], first["result"]["defect_valuations"]);
    assert_eq!(second["result"]["constants"], first["result"]["constants"]);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn selftest_is_reproducible_under_seed() {
    let run = || {
        let j = json_of(&ltphi(&["selftest", "--only", "3,4", "--seed", "7", "--json"]));
        assert_eq!(j["result"]["passed"], true);
        j["result"]["criteria"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| (c["id"].clone(), c["detail"].clone()))
            .collect::<Vec<_>>()
    };
    assert_eq!(run(), run());
}

#[test]
fn act_examples() {
    let out = ltphi(&["act", "--phi", "--series", "T", "--window", "4"]);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("phi(T) = (3)*T + (1)*T^3 + O(T^5)"));
    let j = json_of(&ltphi(&["act", "--u", "-1", "--series", "T", "--window", "4", "--json"]));
    // pT + T^3 is odd, so [-1](T) = -T.
    assert_eq!(j["result"]["series"]["coeffs"]["1"]["coeffs"][0], 3u64.pow(12) - 1);
}
