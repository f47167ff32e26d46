use std::path::PathBuf;
use std::process::{Command, Output};

fn core_fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slickcw"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = run(args);
    assert_eq!(
        o.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    stdout(&o)
}

fn path(p: PathBuf) -> String {
    p.to_string_lossy().into_owned()
}

#[test]
fn diag_prints_worked_example() {
    let out = ok(&["diag", "--input", &path(core_fixture("fig1.slick")), "--c", "0"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines,
        ["-2", "2", "-1/2", "-3/2", "2/3", "1/2", "0", "inertia: n+=3 n0=1 n-=3"]
    );
}

#[test]
fn diag_on_k2_with_shift() {
    let out = ok(&["diag", "--input", &path(core_fixture("k2.slick")), "--c", "2"]);
    assert!(out.ends_with("inertia: n+=0 n0=0 n-=2\n"));
}

#[test]
fn diag_laplacian_has_no_negative_entries() {
    let out = ok(&[
        "diag",
        "--input",
        &path(core_fixture("fig1.slick")),
        "--spec",
        "laplacian",
    ]);
    assert!(out.ends_with("inertia: n+=6 n0=1 n-=0\n"));
}

#[test]
fn diag_custom_spec() {
    let k2 = path(core_fixture("k2.slick"));
    let diagonal = path(fixture("k2.diagonal"));
    let out = ok(&[
        "diag",
        "--input",
        &k2,
        "--spec",
        "custom",
        "--w",
        "2",
        "--diagonal",
        &diagonal,
    ]);
    assert!(out.ends_with("inertia: n+=1 n0=0 n-=1\n"));
    let o = run(&["diag", "--input", &k2, "--spec", "custom"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&[
        "diag",
        "--input",
        &k2,
        "--spec",
        "custom",
        "--w",
        "0",
        "--diagonal",
        &diagonal,
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn diag_trace_lines() {
    let out = ok(&["diag", "--input", &path(core_fixture("fig1.slick")), "--trace"]);
    assert!(out.contains("node=11 kp=0 kpp=2 emit=[-2,2,-1/2]\n"));
    assert!(out.contains("node=12 kp=0 kpp=1 emit=[-3/2,2/3,1/2,0]\n"));
}

#[test]
fn count_intervals() {
    let fig1 = path(core_fixture("fig1.slick"));
    for (iv, want) in [
        ("(0,1)", 2),
        ("[0,0]", 1),
        ("(-inf,inf)", 7),
        ("(-2,-1)", 3),
        ("(-1,0)", 0),
    ] {
        assert_eq!(
            ok(&["count", "--input", &fig1, "--interval", iv]),
            format!("count: {want}\n")
        );
    }
    let below = ok(&["count", "--input", &fig1, "--interval", "(-inf,1/2)"]);
    let above = ok(&["count", "--input", &fig1, "--interval", "[1/2,inf)"]);
    let n = |s: &str| s.trim().strip_prefix("count: ").unwrap().parse::<usize>().unwrap();
    assert_eq!(n(&below) + n(&above), 7);
}

#[test]
fn count_rejects_bad_interval() {
    let fig1 = path(core_fixture("fig1.slick"));
    assert_eq!(
        run(&["count", "--input", &fig1, "--interval", "(1,0)"]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["count", "--input", &fig1, "--interval", "0,1"]).status.code(),
        Some(1)
    );
}

#[test]
fn translate_both_ways() {
    let classic = ok(&["translate", "--input", &path(core_fixture("p4.classic"))]);
    assert!(classic.starts_with("k 3\n(join"));
    let wide = ok(&["translate", "--input", &path(core_fixture("fig1.slick"))]);
    assert!(wide.starts_with("k 4\n"));
    let dir = std::env::temp_dir().join(format!("slickcw-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let back = dir.join("fig1.classic");
    std::fs::write(&back, &wide).unwrap();
    let out = ok(&["count", "--input", &path(back), "--interval", "(0,1)"]);
    assert_eq!(out, "count: 2\n");
    assert_eq!(
        ok(&["translate", "--input", &path(core_fixture("atom.slick"))]),
        "k 2\n(v 1 a)\n"
    );
}

#[test]
fn check_against_oracle() {
    let out = ok(&["check", "--input", &path(core_fixture("fig1.slick"))]);
    assert!(out.ends_with("MATCH\n"));
    assert_eq!(
        ok(&["check", "--fuzz", "40", "--max-n", "12", "--max-k", "4"]),
        "40/40 MATCH\n"
    );
    let o = run(&[
        "check",
        "--input",
        &path(core_fixture("fig1.slick")),
        "--oracle-limit",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn check_box_dumps() {
    assert_eq!(ok(&["check", "--boxes", &path(fixture("fig1.boxes"))]), "13 boxes OK\n");
    let o = run(&["check", "--boxes", &path(fixture("asymmetric.boxes"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("node 10"));
}

#[test]
fn dumped_boxes_validate() {
    let dir = std::env::temp_dir().join(format!("slickcw-dump-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let dump = dir.join("p4.boxes");
    ok(&[
        "diag",
        "--input",
        &path(core_fixture("p4.slick")),
        "--dump-boxes",
        &path(dump.clone()),
    ]);
    assert_eq!(ok(&["check", "--boxes", &path(dump)]), "7 boxes OK\n");
}

#[test]
fn gen_is_deterministic() {
    assert_eq!(ok(&["gen", "--n", "1", "--k", "1", "--seed", "0"]), "k 1\n(v 1 v0)\n");
    let a = ok(&["gen", "--n", "12", "--k", "4", "--seed", "7"]);
    assert_eq!(a, ok(&["gen", "--n", "12", "--k", "4", "--seed", "7"]));
    let dir = std::env::temp_dir().join(format!("slickcw-gen-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("g.slick");
    std::fs::write(&file, &a).unwrap();
    assert!(ok(&["check", "--input", &path(file)]).ends_with("MATCH\n"));
    assert_eq!(run(&["gen", "--n", "0"]).status.code(), Some(1));
}

#[test]
fn gen_families() {
    let dir = std::env::temp_dir().join(format!("slickcw-fam-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p4 = dir.join("p4x3.slick");
    std::fs::write(&p4, ok(&["gen", "--family", "p4", "--n", "3"])).unwrap();
    assert_eq!(
        ok(&["count", "--input", &path(p4), "--interval", "(-1,1)"]),
        "count: 6\n"
    );
    let cg = dir.join("cograph.slick");
    std::fs::write(&cg, ok(&["gen", "--family", "cograph", "--n", "20", "--seed", "3"])).unwrap();
    assert_eq!(
        ok(&["count", "--input", &path(cg), "--interval", "(-1,0)"]),
        "count: 0\n"
    );
}

#[test]
fn bench_table() {
    let out = ok(&["bench", "--sizes", "1,200,400", "--k", "2"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].contains("ops"));
    assert!(lines[1].trim_end().ends_with('-'));
}

#[test]
fn usage_and_input_errors_exit_one() {
    assert_eq!(run(&["bogus"]).status.code(), Some(1));
    assert_eq!(run(&["diag", "--input", "/nonexistent/x.slick"]).status.code(), Some(1));
    let dir = std::env::temp_dir().join(format!("slickcw-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.slick");
    std::fs::write(&bad, "k 2\n(v 3 a)").unwrap();
    let o = run(&["diag", "--input", &path(bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("out of range"));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
