use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn nptkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nptkit"))
        .args(args)
        .output()
        .expect("spawn nptkit")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("nptkit-cli-{}-{name}", std::process::id()));
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn parse_prints_a_summary() {
    let o = nptkit(&["parse", &fixture("fig1.nps")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "level 2, 3 states, 4 transitions");
}

#[test]
fn check_exit_codes() {
    let f = fixture("fig1.nps");
    let yes = nptkit(&[
        "check",
        &f,
        "--formula",
        "exists x. exists y. jump(x,y)",
        "--mode",
        "bounded:3",
    ]);
    assert_eq!(yes.status.code(), Some(0));
    let no = nptkit(&["check", &f, "--formula", "exists x. jump(x,x)", "--mode", "bounded:3"]);
    assert_eq!(no.status.code(), Some(1));
    let bad = nptkit(&["check", &f, "--formula", "exists x jump(x)", "--mode", "bounded:3"]);
    assert_eq!(bad.status.code(), Some(3));
    let usage = nptkit(&["check", &f, "--formula", "exists x. root(x)", "--mode", "sideways"]);
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn json_lines_output() {
    let o = nptkit(&[
        "--format",
        "json-lines",
        "check",
        &fixture("fig1.nps"),
        "--formula",
        "exists x. jump(x,x)",
        "--mode",
        "bounded:3",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["result"], serde_json::Value::Bool(false));
    assert_eq!(v["rank"], 1);
}

#[test]
fn canonical_form_is_a_fixed_point() {
    for name in ["fig1.nps", "level1.nps", "mixed.nps"] {
        let once = stdout(&nptkit(&["parse", "--canonical", &fixture(name)]));
        let p = scratch(name, &once);
        let twice = nptkit(&["parse", "--canonical", p.to_str().unwrap()]);
        assert_eq!(twice.status.code(), Some(0));
        assert_eq!(stdout(&twice), once);
        std::fs::remove_file(p).unwrap();
    }
}

#[test]
fn malformed_systems_exit_with_3() {
    let no_initial = scratch(
        "no-initial",
        "level: 2\nbottom: _\nalphabet: _ a\nstates: q0\ndelta:\n  q0 _ -> q0 push a\n",
    );
    let o = nptkit(&["parse", no_initial.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));

    let undeclared = scratch(
        "undeclared",
        "level: 2\nbottom: _\nalphabet: _ a\nstates: q0\ninitial: q0\ndelta:\n  q0 _ -> q9 push a\n",
    );
    let o = nptkit(&["parse", undeclared.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("line 7"), "{}", stderr(&o));
    std::fs::remove_file(no_initial).unwrap();
    std::fs::remove_file(undeclared).unwrap();
}

#[test]
fn run_and_tree() {
    let f = fixture("fig1.nps");
    let o = nptkit(&["run", &f, "--steps", "0,1,3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().last().unwrap().contains("(q2, _)"));
    assert_eq!(nptkit(&["run", &f, "--steps", "3"]).status.code(), Some(3));

    let t = stdout(&nptkit(&["tree", &f, "--depth", "3"]));
    assert!(t.starts_with("digraph"));
    assert_eq!(t.lines().filter(|l| l.contains("dashed")).count(), 1);
    assert_eq!(t, stdout(&nptkit(&["tree", &f, "--depth", "3"])));
}

#[test]
fn analysis_commands() {
    let f = fixture("fig1.nps");
    let anc = stdout(&nptkit(&["ancestors", &f, "--steps", "0,1,3", "--level", "2"]));
    assert_eq!(anc.lines().count(), 4);
    let ms = stdout(&nptkit(&["milestones", &f, "--stack", "_:_.a"]));
    assert!(ms.contains("operations: clone2 push a"));
    let loops = stdout(&nptkit(&["loops", &f, "--word", "_.a"]));
    assert!(loops.contains("return: [0, 0, 0] [0, 0, 2] [0, 0, 0]"));
    let w = nptkit(&["wtype", &f, "--word", "_.a", "--other", "_.a.a"]);
    assert_eq!(w.status.code(), Some(1));
    let b = nptkit(&["bounds", &f, "--lambda", "3", "--classes", "2"]);
    assert_eq!(b.status.code(), Some(0));
    assert!(stdout(&b).contains("n=0"));
}
