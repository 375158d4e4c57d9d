use std::process::Command;

use ckhopf_cli::run;

fn ok(args: &[&str]) -> String {
    let mut argv = vec!["ckhopf"];
    argv.extend_from_slice(args);
    let (code, out) = run(argv);
    assert_eq!(code, 0, "{args:?} failed:\n{out}");
    out
}

fn code_of(args: &[&str]) -> (i32, String) {
    let mut argv = vec!["ckhopf"];
    argv.extend_from_slice(args);
    run(argv)
}

#[test]
fn antipode_of_the_cherry() {
    assert_eq!(
        ok(&["antipode", "[[][]]"]),
        "-[[][]] + 2 [] [[]] - [] [] []\n"
    );
    for m in ["left", "right", "geometric"] {
        assert_eq!(
            ok(&["antipode", "[[][]]", "--method", m]),
            "-[[][]] + 2 [] [[]] - [] [] []\n"
        );
    }
}

#[test]
fn trees_of_degree_three() {
    let out = ok(&["trees", "--degree", "3"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    let mut sorted = lines.clone();
    sorted.sort();
    assert_eq!(sorted, ["[[[]]]", "[[][]]"]);
    let json: serde_json::Value =
        serde_json::from_str(&ok(&["trees", "--degree", "4", "--format", "structured"])).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 4);
}

#[test]
fn coproduct_text_and_json() {
    assert_eq!(
        ok(&["coproduct", "[[]]"]),
        "1 ⊗ [[]] + [] ⊗ [] + [[]] ⊗ 1\n"
    );
    let json: serde_json::Value =
        serde_json::from_str(&ok(&["--format", "structured", "coproduct", "[]"])).unwrap();
    assert!(json.is_array() || json.is_object());
}

#[test]
fn char_eval_window_follows_z_hi() {
    let out = ok(&["--max-degree", "2", "--z-hi", "2", "char-eval", "toy", "[]"]);
    assert_eq!(
        out,
        "z^-1 - L + (L^2/2 + pi^2/6) z + (-L^3/6 - pi^2 L/6) z^2 + O(z^3)\n"
    );
    let json: serde_json::Value = serde_json::from_str(&ok(&[
        "--max-degree",
        "1",
        "--z-hi",
        "1",
        "--format",
        "structured",
        "char-eval",
        "toy",
        "[]",
    ]))
    .unwrap();
    assert_eq!(json["window"], serde_json::json!([-1, 1]));
    assert_eq!(json["coeffs"]["-1"][0]["num"], "1");
}

#[test]
fn birkhoff_of_a_vertex() {
    let out = ok(&["--max-degree", "1", "--z-hi", "1", "birkhoff", "toy", "[]"]);
    let minus = out.lines().find(|l| l.starts_with("phi_minus")).unwrap();
    assert_eq!(minus, "phi_minus = -z^-1");
    let json: serde_json::Value = serde_json::from_str(&ok(&[
        "--max-degree",
        "1",
        "--z-hi",
        "1",
        "--format",
        "structured",
        "birkhoff",
        "toy",
        "[]",
    ]))
    .unwrap();
    for key in ["phi", "phi_minus", "phi_plus"] {
        assert!(json[key]["window"].is_array(), "{key}");
    }
}

#[test]
fn coproduct_matrix_layout() {
    let out = ok(&["coproduct-matrix"]);
    let expected = "basis: 1, [], [[]], [[][]], [[][][]]\nM:\n1\n[] | 1\n[[]] | [] | 1\n\
                    [[][]] | [] [] | 2 [] | 1\n[[][][]] | [] [] [] | 3 [] [] | 3 [] | 1\n";
    assert_eq!(out, expected);
}

#[test]
fn beta_methods_agree() {
    let args = |m: &'static str| {
        vec![
            "--max-degree",
            "3",
            "--z-hi",
            "3",
            "--seed",
            "[[[]]]",
            "beta",
            "--method",
            m,
        ]
    };
    let first = ok(&args("conjugation"));
    assert_eq!(ok(&args("commutator")), first);
    assert_eq!(ok(&args("bch")), first);
    assert!(first.contains("\n1 | 0\n"), "{first}");
}

#[test]
fn matrix_birkhoff_methods_agree() {
    let base = [
        "--max-degree",
        "3",
        "--z-hi",
        "3",
        "--seed",
        "[[][]]",
        "matrix-birkhoff",
    ];
    let a = ok(&[&base[..], &["--method", "atkinson"]].concat());
    let b = ok(&[&base[..], &["--method", "nonrecursive"]].concat());
    assert_eq!(a, b);
}

#[test]
fn flow_and_scattering_checks_pass() {
    let small = [
        "--max-degree",
        "3",
        "--z-hi",
        "3",
        "--tau-cap",
        "2",
        "--seed",
        "[[[]]]",
    ];
    let out = ok(&[&small[..], &["flow-check"]].concat());
    assert_eq!(out.lines().count(), 5);
    assert!(out.lines().all(|l| l.starts_with("ok")), "{out}");
    let out = ok(&[&small[..], &["scattering-check"]].concat());
    assert!(out.ends_with("limit U -> 0 equals phi_minus\n"), "{out}");
}

#[test]
fn bad_usage_exits_with_two() {
    for args in [
        vec!["frobnicate"],
        vec!["trees"],
        vec!["--max-degree", "0", "trees", "--degree", "1"],
        vec!["--max-degree", "5", "--z-hi", "4", "trees", "--degree", "1"],
        vec!["--tau-cap", "1", "trees", "--degree", "1"],
        vec!["--format", "yaml", "trees", "--degree", "1"],
        vec!["antipode", "[[]"],
        vec!["antipode", "[]", "--method", "nope"],
        vec!["char-eval", "nope", "[]"],
        vec!["--seed", "[x]", "coproduct-matrix"],
    ] {
        let (code, out) = code_of(&args);
        assert_eq!(code, 2, "{args:?}: {out}");
        assert!(!out.is_empty());
    }
    let (_, out) = code_of(&["antipode", "[]", "--method", "nope"]);
    assert_eq!(
        out,
        "error: unknown antipode method 'nope' (available: memo, left, right, geometric)\n"
    );
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = std::env::temp_dir().join(format!("ckhopf-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cfg.toml");
    std::fs::write(&path, "max_degree = 1\nz_hi = 1\nformat = \"structured\"\n").unwrap();
    let p = path.to_str().unwrap();
    let out = ok(&["--config", p, "char-eval", "toy", "[]"]);
    let json: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(json["window"], serde_json::json!([-1, 1]));
    let out = ok(&[
        "--config",
        p,
        "--format",
        "text",
        "--z-hi",
        "2",
        "--max-degree",
        "2",
        "char-eval",
        "toy",
        "[]",
    ]);
    assert!(out.ends_with("+ O(z^3)\n"), "{out}");

    std::fs::write(&path, "max_degre = 1\n").unwrap();
    assert_eq!(code_of(&["--config", p, "trees", "--degree", "1"]).0, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn config_path_from_environment() {
    let dir = std::env::temp_dir().join(format!("ckhopf-cli-env-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cfg.toml");
    std::fs::write(&path, "format = \"structured\"\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_ckhopf"))
        .args(["trees", "--degree", "2"])
        .env(ckhopf_cli::CONFIG_ENV, &path)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "[\n  \"[[]]\"\n]\n");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_ckhopf");
    let out = Command::new(bin)
        .args(["antipode", "[[][]]"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "-[[][]] + 2 [] [[]] - [] [] []\n"
    );
    let out = Command::new(bin).args(["--bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("Usage"));
}

#[test]
fn verify_is_deterministic() {
    let args = [
        "--max-degree",
        "3",
        "--z-hi",
        "3",
        "--tau-cap",
        "2",
        "--seed",
        "[[[]]]",
        "verify",
    ];
    let a = ok(&args);
    let b = ok(&args);
    assert_eq!(a, b);
    assert!(a.lines().last().unwrap().starts_with("all "));
    let sa = ok(&[&args[..], &["--format", "structured"]].concat());
    let sb = ok(&[&args[..], &["--format", "structured"]].concat());
    assert_eq!(sa, sb);
}

#[test]
fn verify_at_degree_four() {
    let (code, out) = code_of(&["verify", "--max-degree", "4"]);
    assert_eq!(code, 0, "{out}");
    let last = out.lines().last().unwrap();
    assert!(
        last.starts_with("all ") && last.ends_with(" identities hold"),
        "{last}"
    );
}

#[test]
fn verify_reports_failures_with_exit_one() {
    let (code, out) = code_of(&[
        "verify",
        "--max-degree",
        "2",
        "--z-hi",
        "2",
        "--seed",
        "[[[]]]",
    ]);
    assert_eq!(code, 1);
    assert!(out.contains("FAIL [[[[]]]] coideal"), "{out}");
    assert!(out.trim_end().ends_with("identities failed"));
}
