use std::path::{Path, PathBuf};
use std::process::Command as Process;

use deloc_cli::{
    execute, load_scenario, Command, LoadError, Options, EXIT_FAIL, EXIT_PASS, EXIT_USAGE,
};
use sha2::{Digest, Sha256};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn run(command: Command, name: &str) -> deloc_cli::Outcome {
    execute(command, &fixture(name), &Options::default())
}

const ALL: [Command; 8] = [
    Command::Inertia,
    Command::Induce,
    Command::Chern,
    Command::Todd,
    Command::RrgIso,
    Command::RrgZeroSection,
    Command::RrgGeneral,
    Command::GroupoidCheck,
];

#[test]
fn minimal_and_s3_fixtures_load() {
    let sc = load_scenario(&fixture("trivial.json"), None).unwrap();
    assert_eq!(sc.groups.len(), 1);
    assert_eq!(sc.groups[0].1.order(), 1);

    let sc = load_scenario(&fixture("s3_c2.json"), None).unwrap();
    assert_eq!(sc.trunc, 4);
    assert_eq!(sc.groups[0].1.order(), 6);
    assert!(sc.iso_spatial.iter().all(|b| b.built.is_ok()));
    assert!(sc.zero_section.iter().all(|b| b.built.is_ok()));
    assert!(sc.general.iter().all(|b| b.built.is_ok()));
    for (_, c) in &sc.complexes {
        assert!(c.validate().is_valid());
    }
    assert_eq!(
        load_scenario(&fixture("s3_c2.json"), Some(2))
            .unwrap()
            .trunc,
        2
    );
}

fn load_error(name: &str) -> (String, String) {
    match load_scenario(&fixture(&format!("load_errors/{name}")), None) {
        Err(LoadError::Invalid { pointer, message }) => (pointer, message),
        other => panic!("{name}: expected a load error, got {other:?}"),
    }
}

#[test]
fn load_errors_carry_pointers() {
    let (pointer, message) = load_error("non_homomorphism.json");
    assert_eq!(pointer, "/representations/0/generators");
    assert!(message.contains("not a homomorphism: rho("), "{message}");
    let (pointer, message) = load_error("unknown_reference.json");
    assert_eq!(pointer, "/representations/0/group");
    assert!(message.contains("'S4'"));
    let (pointer, message) = load_error("bad_expression.json");
    assert_eq!(pointer, "/representations/0/generators/0/0/0");
    assert!(message.contains("offset 0"));
    assert_eq!(
        load_error("non_invariant_subspace.json").0,
        "/rrg/general/0/subspace"
    );
    assert_eq!(load_error("unknown_field.json").0, "/groups/0/order");
    assert_eq!(load_error("syntax.json").0, "/groups");
}

#[test]
fn rrg_iso_table_shows_induced_character() {
    let out = run(Command::RrgIso, "s3_c2.json");
    assert_eq!(out.code, EXIT_PASS, "{}", out.stdout);
    assert!(
        out.stdout.matches("(3, 1, 0)").count() >= 2,
        "{}",
        out.stdout
    );
}

#[test]
fn todd_of_a_trivial_line() {
    let opts = Options {
        trunc: Some(2),
        ..Options::default()
    };
    let out = execute(Command::Todd, &fixture("todd_one.json"), &opts);
    assert_eq!(out.code, EXIT_PASS);
    assert!(
        out.stdout.contains("todd=1 + x/2 + x^2/12"),
        "{}",
        out.stdout
    );
}

#[test]
fn corrupted_zero_section_reports_monomial() {
    let out = run(Command::RrgZeroSection, "corrupt/zero_section_direct.json");
    assert_eq!(out.code, EXIT_FAIL);
    assert!(out.stdout.contains("at monomial 1"), "{}", out.stdout);
    let report = out.report.unwrap();
    let witness = report.checks[0].first_failure.as_ref().unwrap();
    assert_eq!(witness.monomial.as_deref(), Some("1"));
}

/// `(fixture, command, expected exit code)` over the whole fixture corpus.
fn contract() -> Vec<(String, Command, i32)> {
    let mut out = Vec::new();
    let passing: [(&str, &[Command]); 6] = [
        ("s3_c2.json", &ALL),
        (
            "c2_in_c4.json",
            &[Command::Induce, Command::Chern, Command::RrgGeneral],
        ),
        (
            "c12_mixed.json",
            &[
                Command::Inertia,
                Command::Chern,
                Command::Todd,
                Command::RrgZeroSection,
            ],
        ),
        (
            "groupoids.json",
            &[Command::Inertia, Command::GroupoidCheck],
        ),
        ("todd_one.json", &[Command::Todd]),
        ("trivial.json", &[]),
    ];
    for (name, commands) in passing {
        for c in ALL {
            let code = if commands.contains(&c) {
                EXIT_PASS
            } else {
                EXIT_USAGE
            };
            out.push((name.to_string(), c, code));
        }
    }
    let corrupt = [
        ("iso_unit_weight.json", Command::RrgIso),
        ("iso_bad_differential.json", Command::RrgIso),
        ("zero_section_direct.json", Command::RrgZeroSection),
        (
            "zero_section_bad_differential.json",
            Command::RrgZeroSection,
        ),
        ("general_unit_weight.json", Command::RrgGeneral),
        ("general_direct.json", Command::RrgGeneral),
    ];
    for (name, c) in corrupt {
        out.push((format!("corrupt/{name}"), c, EXIT_FAIL));
    }
    for entry in std::fs::read_dir(fixture("load_errors")).unwrap() {
        let name = entry.unwrap().file_name().into_string().unwrap();
        for c in ALL {
            out.push((format!("load_errors/{name}"), c, EXIT_USAGE));
        }
    }
    out
}

#[test]
fn exit_code_contract_on_fixture_corpus() {
    let mut seen = 0;
    for (name, command, code) in contract() {
        let out = run(command, &name);
        assert_eq!(
            out.code,
            code,
            "{name} {}: {}{}",
            command.name(),
            out.stdout,
            out.stderr
        );
        if code == EXIT_USAGE {
            assert!(out.stdout.is_empty() && out.stderr.starts_with("error: "));
        }
        seen += 1;
    }
    assert!(seen > 60);
}

#[test]
fn json_is_identical_across_worker_counts() {
    for (name, command, code) in contract() {
        if code == EXIT_USAGE {
            continue;
        }
        let outputs: Vec<String> = [None, Some(1), Some(2), Some(4)]
            .into_iter()
            .map(|parallel| {
                execute(
                    command,
                    &fixture(&name),
                    &Options {
                        json: true,
                        parallel,
                        trunc: None,
                    },
                )
                .stdout
            })
            .collect();
        assert!(
            outputs.windows(2).all(|w| w[0] == w[1]),
            "{name} {}",
            command.name()
        );
    }
}

#[test]
fn json_envelope() {
    let path = fixture("s3_c2.json");
    let out = execute(
        Command::RrgGeneral,
        &path,
        &Options {
            json: true,
            ..Options::default()
        },
    );
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "rrg-general");
    assert_eq!(v["passed"], true);
    let digest = hex::encode(Sha256::digest(std::fs::read(&path).unwrap()));
    assert_eq!(v["scenario_sha256"], digest.as_str());
    let rows = v["checks"][0]["rows"].as_array().unwrap();
    let statuses: Vec<&str> = rows.iter().map(|r| r["status"].as_str().unwrap()).collect();
    assert_eq!(statuses, ["skipped", "skipped", "pass"]);
    assert!(v["checks"][0]["first_failure"].is_null());
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_deloc");
    let status = |args: &[&str]| Process::new(bin).args(args).output().unwrap();
    let s3 = fixture("s3_c2.json");
    let s3 = s3.to_str().unwrap();
    let out = status(&["rrg-iso", s3]);
    assert_eq!(out.status.code(), Some(EXIT_PASS));
    assert!(String::from_utf8_lossy(&out.stdout).contains("(3, 1, 0)"));
    let bad = fixture("corrupt/iso_unit_weight.json");
    assert_eq!(
        status(&["rrg-iso", bad.to_str().unwrap(), "--json"])
            .status
            .code(),
        Some(EXIT_FAIL)
    );
    assert_eq!(status(&["frobnicate", s3]).status.code(), Some(EXIT_USAGE));
    assert_eq!(
        status(&["rrg-iso", s3, "--parallel", "0"]).status.code(),
        Some(EXIT_USAGE)
    );
    let nonhom = fixture("load_errors/non_homomorphism.json");
    let out = status(&["inertia", nonhom.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/representations/0/generators"));
}
