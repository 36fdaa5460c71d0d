use hahn_cli::app::{EXIT_BUDGET, EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION_FAILED};
use hahn_cli::{run, Outcome};

fn hahn(args: &[&str]) -> Outcome {
    run(std::iter::once("hahn").chain(args.iter().copied()))
}

fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

const FIB: [&str; 8] = ["eval", "inv(1 - t^(1) - t^(2))", "--group", "Z", "--field", "Q", "--exp-bound", "6"];

#[test]
fn fibonacci_text_is_byte_exact() {
    let out = hahn(&FIB);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert_eq!(out.stdout, golden("fibonacci.txt"));
    assert_eq!(out.stdout, "1 + 1*t^(1) + 2*t^(2) + 3*t^(3) + 5*t^(4) + 8*t^(5) + 13*t^(6)\n");
    assert!(out.stderr.is_empty());
}

#[test]
fn fibonacci_json_is_byte_exact() {
    let mut args = FIB.to_vec();
    args.push("--json");
    assert_eq!(hahn(&args).stdout, golden("fibonacci.json"));
}

#[test]
fn classify_goldens() {
    for (family, file) in [
        ("W(Z)", "classify_w_z.json"),
        ("W(Z>=0)", "classify_w_z_nonneg.json"),
        ("FIN(Z)", "classify_fin_z.json"),
    ] {
        let out = hahn(&["classify", "--field", "Q", "--family", family, "--json"]);
        assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
        assert_eq!(out.stdout, golden(file), "{family}");
    }
}

#[test]
fn w_z_nonneg_is_a_ring_but_not_a_field() {
    let out = hahn(&["classify", "--field", "Q", "--family", "W(Z>=0)", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["flags"]["subring"]["value"], "yes");
    assert_eq!(v["flags"]["has_identity"]["value"], "yes");
    assert_eq!(v["flags"]["subfield"]["value"], "no");
    assert_eq!(v["flags"]["rayner_field"]["failed"][0]["condition"], "A3");
}

#[test]
fn fp_gap_suite_reports_bounded_pass() {
    let out = hahn(&["suite", "--filter", "fp-gap"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines.len(), 6);
    for (line, p) in lines.iter().zip([2, 3, 5, 7, 11, 13]) {
        assert!(line.contains(&format!("p={p}]")), "{line}");
        assert!(line.ends_with("bounded-pass"), "{line}");
    }
}

#[test]
fn other_subcommands() {
    let out = hahn(&["support", "(1 + t^(2))*(1 - t^(2))", "--exp-bound", "6"]);
    assert_eq!(out.stdout, "{0,4}\n");
    let out = hahn(&["vmin", "t^(-3) + 5*t^(2)"]);
    assert_eq!(out.stdout, "-3\n");
    let out = hahn(&["trunc", "1 + 2*t^(1) + 3*t^(2)", "2"]);
    assert_eq!(out.stdout, "1 + 2*t^(1)\n");
    let out = hahn(&["invert", "t^(1) - t^(2)", "--g0", "1", "--exp-bound", "3"]);
    assert_eq!(out.stdout, "1*t^(-1) + 1 + 1*t^(1) + 1*t^(2) + 1*t^(3)\n");
    let out = hahn(&["--group", "Q", "eval", "inv(1 - t^(1/2))", "--exp-bound", "1"]);
    assert_eq!(out.stdout, "1 + 1*t^(1/2) + 1*t^(1)\n");
    let out = hahn(&["--group", "Z^2", "eval", "t^((1,-1)) * t^((0,2))", "--exp-bound", "(2,0)"]);
    assert_eq!(out.stdout, "1*t^((1,1))\n");
    let out = hahn(&["--field", "F3(x)", "eval", "x*t^(1) + {1/x}*t^(1)"]);
    assert_eq!(out.stdout, "{(x^2+1)/x}*t^(1)\n");
}

#[test]
fn check_family_single_and_all() {
    let out = hahn(&["check-family", "FIN(Z)", "--condition", "A4"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.starts_with("A4: fails"), "{}", out.stdout);
    let out = hahn(&["check-family", "W(mon{2,3})"]);
    assert_eq!(out.stdout.lines().count(), 11);
    let out = hahn(&["check-family", "W(Z)", "--condition", "B7"]);
    assert_eq!(out.code, EXIT_USAGE);
}

#[test]
fn exit_codes() {
    let cases: &[(&[&str], i32)] = &[
        (&["eval", "1 + t^(1)"], EXIT_OK),
        (&["eval", "t^(1/2"], EXIT_USAGE),
        (&["eval", "t^(1/2)"], EXIT_USAGE),
        (&["eval", "inv(1 - t^(1))"], EXIT_USAGE),
        (&["eval", "inv(1 - t^(1); g0=0)"], EXIT_OK),
        (&["eval", "inv(t^(2) - t^(2))", "--exp-bound", "5"], EXIT_BUDGET),
        (&["eval", "inv(1 - t^(1))", "--exp-bound", "50", "--term-bound", "5"], EXIT_BUDGET),
        (&["eval", "x"], EXIT_USAGE),
        (&["--field", "F4", "eval", "1"], EXIT_USAGE),
        (&["--group", "R", "eval", "1"], EXIT_USAGE),
        (&["classify", "--family", "W(Q)"], EXIT_USAGE),
        (&["suite", "--filter", "nothing-matches"], EXIT_USAGE),
        (&["frobnicate"], EXIT_USAGE),
        (&["--help"], EXIT_OK),
    ];
    for (args, code) in cases {
        let out = hahn(args);
        assert_eq!(out.code, *code, "{args:?}: {}", out.stderr);
        if *code != EXIT_OK {
            assert!(!out.stderr.is_empty(), "{args:?}");
        }
    }
    assert_ne!(EXIT_VERIFICATION_FAILED, EXIT_OK);
}

#[test]
fn syntax_errors_carry_positions() {
    let out = hahn(&["eval", "t^(1/2"]);
    assert!(out.stderr.contains("line 1, column 7"), "{}", out.stderr);
}

#[test]
fn json_output_is_deterministic() {
    let args = ["suite", "--filter", "closure-probe", "--seed", "7", "--json"];
    let a = hahn(&args);
    let b = hahn(&args);
    assert_eq!(a.code, EXIT_OK, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout);
}
