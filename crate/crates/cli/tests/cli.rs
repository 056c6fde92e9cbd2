use std::path::PathBuf;
use std::process::{Command, Output};

use jetspace_cli::{run_from_args, Report, EXIT_FAILURE, EXIT_OK, EXIT_PRECISION_LIMITED};
use jetspace_core::analysis::Verdict;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

fn jetspace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jetspace"))
        .args(args)
        .env_remove("JETSPACE_PRECISION_CAP")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Report, i32) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = jetspace(&all);
    let text = String::from_utf8(out.stdout).unwrap();
    let report: Report = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    // re-serializing reproduces the bytes exactly
    assert_eq!(format!("{}\n", report.to_json()), text);
    (report, out.status.code().unwrap())
}

#[test]
fn fiber_dim_on_the_cusp() {
    let (r, code) = json(&["fiber-dim", &fixture("cusp.json"), "--n", "3"]);
    assert_eq!(code, EXIT_OK);
    let Report::FiberDim(f) = r else {
        panic!("{r:?}")
    };
    assert_eq!((f.value, f.oracle_corank, f.betti), (7, 7, 1));
    assert!(f.oracle_agrees);
    assert_eq!(f.precision.working_precision, 24);
    assert_eq!(f.precision.orders["c_1"].to_string(), "3");
}

#[test]
fn task_entries_supply_defaults() {
    // cusp.json has a fiber-dim task with n = 3
    let (r, _) = json(&["fiber-dim", &fixture("cusp.json")]);
    let Report::FiberDim(f) = r else {
        panic!("{r:?}")
    };
    assert_eq!((f.level, f.value), (3, 7));
    let (r, _) = json(&["fiber-dim", &fixture("cusp.json"), "--n", "1"]);
    let Report::FiberDim(f) = r else {
        panic!("{r:?}")
    };
    assert_eq!(f.value, 4);
}

#[test]
fn whitney_singular_arc_is_suspected_infinite() {
    let args = [
        "embdim-arc",
        &fixture("whitney.json"),
        "--arc",
        "singular-generic",
    ];
    let (r, code) = json(&args);
    assert_eq!(code, EXIT_OK);
    let Report::EmbdimArc(s) = &r else {
        panic!("{r:?}")
    };
    assert_eq!(s.report.verdict, Verdict::NotStabilizedUpTo(12));
    assert!(s.interpretation.contains("suspected infinite"));
    assert!(s.precision.precision_limited);
    let mut strict = args.to_vec();
    strict.push("--strict");
    assert_eq!(json(&strict).1, EXIT_PRECISION_LIMITED);
}

#[test]
fn strict_is_quiet_on_exact_results() {
    let (_, code) = json(&[
        "embdim-arc",
        &fixture("whitney.json"),
        "--arc",
        "generic",
        "--strict",
    ]);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn blowup_commands() {
    let (r, code) = json(&["mather-check", &fixture("blowup.json")]);
    assert_eq!(code, EXIT_OK);
    let Report::MatherCheck(m) = r else {
        panic!("{r:?}")
    };
    assert_eq!((m.report.discrepancy, m.report.expected_embdim), (1, 2));
    assert_eq!(m.report.divisor_var, "u");

    let (r, _) = json(&[
        "mather-check",
        &fixture("blowup.json"),
        "--q",
        "3",
        "--divisor-var",
        "1",
    ]);
    let Report::MatherCheck(m) = r else {
        panic!("{r:?}")
    };
    assert_eq!(m.report.embdim.value(), Some(6));

    let (r, code) = json(&["btr", &fixture("blowup.json")]);
    assert_eq!(code, EXIT_OK);
    let Report::Btr(b) = r else { panic!("{r:?}") };
    assert_eq!(
        (b.report.embdim_source, b.report.embdim_target),
        (Some(1), Some(2))
    );
    assert_eq!(b.report.equality_holds, Some(true));

    let (r, _) = json(&["divisorial", &fixture("blowup.json")]);
    let Report::Divisorial(d) = r else {
        panic!("{r:?}")
    };
    assert_eq!((d.q, d.working_precision, d.transcendentals), (2, 6, 10));
    assert_eq!(d.source_arc[0], "u_2*t^2 + u_3*t^3 + u_4*t^4 + u_5*t^5");
}

#[test]
fn jet_ideal_and_profile() {
    let (r, _) = json(&["jet-ideal", &fixture("cusp.json"), "--n", "1"]);
    let Report::JetIdeal(j) = r else {
        panic!("{r:?}")
    };
    assert_eq!(j.variables, ["x_0", "x_1", "y_0", "y_1"]);
    let polys: Vec<&str> = j.generators.iter().map(|g| g.polynomial.as_str()).collect();
    assert_eq!(polys, ["-x_0^3 + y_0^2", "-3*x_0^2*x_1 + 2*y_0*y_1"]);

    let (r, _) = json(&["profile", &fixture("cusp.json"), "--arc", "t2-t3"]);
    let Report::Profile(p) = r else {
        panic!("{r:?}")
    };
    assert_eq!(p.profile.betti, 1);
    assert_eq!(
        p.profile
            .factors
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>(),
        ["3"]
    );
}

#[test]
fn oracle_check_agrees_on_fixtures() {
    for f in ["cusp.json", "whitney.json"] {
        let (r, code) = json(&["oracle-check", &fixture(f), "--n-max", "4"]);
        assert_eq!(code, EXIT_OK);
        let Report::OracleCheck(o) = r else {
            panic!("{r:?}")
        };
        assert!(o.all_agree);
        assert!(!o.rows.is_empty());
    }
}

#[test]
fn errors_are_reported_with_their_module() {
    let dir = std::env::temp_dir().join(format!("jetspace-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let unknown = dir.join("unknown.json");
    std::fs::write(
        &unknown,
        r#"{"field":{"kind":"rationals"},"variety":{"variables":["x"],"generators":["x + q"]}}"#,
    )
    .unwrap();
    let (r, code) = json(&["profile", unknown.to_str().unwrap()]);
    assert_eq!(code, EXIT_FAILURE);
    let Report::Error(e) = r else { panic!("{r:?}") };
    assert_eq!(e.kind, "ParseError");
    assert!(e.message.contains("`q`"), "{}", e.message);

    let broken = dir.join("broken.json");
    std::fs::write(
        &broken,
        "{\"field\": {\"kind\": \"rationals\"},\n \"variety\": [}",
    )
    .unwrap();
    let (r, _) = json(&["profile", broken.to_str().unwrap()]);
    let Report::Error(e) = r else { panic!("{r:?}") };
    assert!(e.message.starts_with("2:"), "{}", e.message);

    let off = dir.join("off.json");
    std::fs::write(
        &off,
        r#"{"field":{"kind":"rationals"},"variety":{"variables":["x","y"],"generators":["y^2 - x^3"]},
            "arcs":[{"name":"bad","components":["t","t"]}]}"#,
    )
    .unwrap();
    let (r, code) = json(&["fiber-dim", off.to_str().unwrap(), "--n", "2"]);
    assert_eq!(code, EXIT_FAILURE);
    let Report::Error(e) = r else { panic!("{r:?}") };
    assert_eq!(e.kind, "NotOnVariety");
    std::fs::remove_dir_all(&dir).ok();

    let (r, code) = json(&["btr", &fixture("cusp.json")]);
    assert_eq!(code, EXIT_FAILURE);
    assert!(matches!(r, Report::Error(_)));
}

#[test]
fn bad_flags_exit_with_one() {
    let out = jetspace(&["fiber-dim", &fixture("cusp.json"), "--bogus"]);
    assert_eq!(out.status.code(), Some(EXIT_FAILURE));
    let out = jetspace(&["--help"]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
}

#[test]
fn precision_cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_jetspace"))
        .args([
            "embdim-arc",
            &fixture("whitney.json"),
            "--arc",
            "singular-generic",
            "--format",
            "json",
        ])
        .env("JETSPACE_PRECISION_CAP", "32")
        .output()
        .unwrap();
    let Report::EmbdimArc(s) = serde_json::from_slice(&out.stdout).unwrap() else {
        panic!()
    };
    assert_eq!(s.report.precision, 32);

    let out = Command::new(env!("CARGO_BIN_EXE_jetspace"))
        .args(["profile", &fixture("cusp.json")])
        .env("JETSPACE_PRECISION_CAP", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_FAILURE));
}

#[test]
fn text_output_matches_the_library() {
    let outcome =
        run_from_args(["jetspace", "embdim-jet", &fixture("cusp.json"), "--n", "3"]).unwrap();
    let out = jetspace(&["embdim-jet", &fixture("cusp.json"), "--n", "3"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), outcome.render());
    assert!(outcome.render().contains("embedding dimension  7"));
}
