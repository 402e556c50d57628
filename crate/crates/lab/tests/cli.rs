use std::process::{Command, Output};

use krivine_lab::report::{trace_rows, RunJson};
use krivine_lab_core::machine::{run_with, MachineKind, RunOptions};
use krivine_lab_core::{alpha_eq, parse, Term};
use proptest::prelude::*;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_krivine-lab"))
        .args(args)
        .env_remove("KRIVINE_LAB_FUEL")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn run_prints_steps_and_final_term() {
    let o = lab(&["run", "--machine", "head", "--fuel", "100", "(\\x.(x)x)\\y.y"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("steps: 9"), "{out}");
    assert!(out.contains("final: \\y.y"), "{out}");
}

#[test]
fn trace_table_has_a_row_per_configuration() {
    let o = lab(&["run", "--trace", "(\\x.(x)x)\\y.y"]);
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().take_while(|l| !l.is_empty()).collect();
    assert_eq!(rows.len(), 11, "{out}");
    let header: Vec<&str> = rows[0].split('|').map(str::trim).collect();
    assert_eq!(header, ["step", "output", "current subterm", "environment", "stack"]);
    assert!(rows[9].starts_with("8    | \\y."), "{}", rows[9]);
}

#[test]
fn json_trace() {
    let o = lab(&["run", "--trace", "--format", "json", "(\\x.(x)x)\\y.y"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["steps"], 9);
    assert_eq!(v["final"], "\\y.y");
    let trace = v["trace"].as_array().unwrap();
    assert_eq!(trace.len(), 9);
    assert_eq!(trace[0]["rule"], "push");
    assert_eq!(trace[1]["term"], "(\\y.y)\\y.y");
    assert_eq!(trace[8]["rule"], "stuck-var");
}

#[test]
fn steps_agree_with_run() {
    for (machine, term) in [("head", "(\\f.\\x.(f)x)\\y.y"), ("beta", "\\x.(x)(\\y.y)z")] {
        let s = stdout(&lab(&["steps", "--machine", machine, term]));
        let r = stdout(&lab(&["run", "--machine", machine, term]));
        assert!(r.contains(&format!("steps: {}", s.trim())), "{machine}: {s} vs {r}");
    }
    assert_eq!(stdout(&lab(&["steps", "(\\f.\\x.(f)x)\\y.y"])).trim(), "8");
}

#[test]
fn fuel_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_krivine-lab"))
        .args(["run", "(\\x.(x)x)\\x.(x)x"])
        .env("KRIVINE_LAB_FUEL", "50")
        .output()
        .unwrap();
    let out = stdout(&o);
    assert!(out.contains("status: fuel_exhausted") && out.contains("steps: 50"), "{out}");
    let o = Command::new(env!("CARGO_BIN_EXE_krivine-lab"))
        .args(["steps", "(\\x.(x)x)\\x.(x)x"])
        .env("KRIVINE_LAB_FUEL", "50")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn predict_reports_the_witness() {
    let o = lab(&["predict", "--mode", "head", "--bound", "16", "\\x.(x)x", "\\y.y"]);
    let out = stdout(&o);
    assert!(out.contains("steps: 9"), "{out}");
    assert!(out.contains("(size 4)\nargs:") && out.contains("] (size 4)\nunifier"), "{out}");
    let o = lab(&["--format", "json", "predict", "\\x.(x)x", "\\y.y"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["steps"], 9);
    assert_eq!(v["witness"]["point_size"], 4);
    assert_eq!(v["witness"]["args_size"], 4);
    assert_eq!(v["witness"]["cost"], 9);
}

#[test]
fn exit_codes() {
    let o = lab(&["parse", "((x)"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("syntax error"));
    assert_eq!(lab(&["run", "--machine", "sideways", "x"]).status.code(), Some(2));
    assert_eq!(lab(&["verify", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(lab(&["predict", "(\\x.x)\\y.y", "\\y.y"]).status.code(), Some(1));
    assert_eq!(lab(&["typing", "(\\x.x)\\y.y"]).status.code(), Some(1));
    assert_eq!(lab(&["parse", "@/nonexistent/file"]).status.code(), Some(2));
}

#[test]
fn typing_and_search_commands() {
    assert_eq!(stdout(&lab(&["typing", "\\y.y"])).trim(), "⊢ ([γ0], γ0)");
    let ones = stdout(&lab(&["typing", "--kind", "one", "\\x.\\y.(x)y"]));
    assert_eq!(ones.lines().count(), 2, "{ones}");
    let min = stdout(&lab(&["min-derivation", "--bound", "9", "(\\x.(x)x)\\y.y"]));
    assert!(min.starts_with("size: 9\n"), "{min}");
    let o = lab(&["min-derivation", "--bound", "8", "(\\x.(x)x)\\y.y"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value =
        serde_json::from_slice(&lab(&["--format", "json", "min-derivation", "--exact", "\\y.y"]).stdout).unwrap();
    assert_eq!(v["size"], 2);
    assert_eq!(v["rule"], "abs");
    let sem = stdout(&lab(&["interpret", "--bound", "3", "\\x.\\y.y"]));
    assert!(sem.lines().any(|l| l == "([], ([γ0], γ0))"), "{sem}");
}

#[test]
fn term_from_file() {
    let path = std::env::temp_dir().join(format!("krivine-lab-cli-{}", std::process::id()));
    std::fs::write(&path, "(\\x.(x)x)\\y.y\n").unwrap();
    let out = stdout(&lab(&["steps", &format!("@{}", path.display())]));
    std::fs::remove_file(&path).unwrap();
    assert_eq!(out.trim(), "9");
}

#[test]
fn verify_small_suites() {
    let o = lab(&["verify", "golden-example"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("golden-example  PASS"));
    let o = lab(&["--format", "json", "verify", "theorem-head", "--corpus-size", "6"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["passed"], true);
}

fn term_strategy() -> impl Strategy<Value = Term> {
    let names = ["x", "y", "z"];
    let leaf = proptest::sample::select(names.to_vec()).prop_map(Term::var);
    leaf.prop_recursive(5, 24, 2, move |inner| {
        prop_oneof![
            (proptest::sample::select(names.to_vec()), inner.clone()).prop_map(|(x, b)| Term::abs(x, b)),
            (inner.clone(), inner).prop_map(|(f, a)| Term::app(f, a)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // One row per configuration; the last row of a finished run is the output.
    #[test]
    fn trace_rows_follow_the_run(t in term_strategy()) {
        let opts = RunOptions { fuel: 300, trace: true, detect_cycles: false };
        for kind in [MachineKind::Head, MachineKind::Beta] {
            let r = run_with(&t, kind, &opts);
            let rows = trace_rows(&r);
            prop_assert_eq!(rows.len(), r.steps + 1);
            if let Some(nf) = r.normal_form() {
                let last = rows.last().unwrap();
                prop_assert!(last.subterm.is_empty());
                prop_assert!(alpha_eq(&parse(&last.output).unwrap(), &nf));
            }
            let json = serde_json::to_value(RunJson::of(kind, &r)).unwrap();
            prop_assert_eq!(json["trace"].as_array().unwrap().len(), r.steps);
        }
    }
}
