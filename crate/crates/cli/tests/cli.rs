use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn twostage(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twostage"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn gen(dir: &Path, name: &str, kind: &str, n: &str, l: &str) {
    let out = twostage(
        &[
            "gen", "--kind", kind, "--n", n, "--m", "3", "--k", "2", "--l", l, "--seed", "5",
            "--out", name,
        ],
        dir,
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn gen_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    gen(dir.path(), "a.json", "mixed", "8", "4");
    gen(dir.path(), "b.json", "mixed", "8", "4");
    assert_eq!(
        fs::read(dir.path().join("a.json")).unwrap(),
        fs::read(dir.path().join("b.json")).unwrap()
    );
}

#[test]
fn solve_twice_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    gen(dir.path(), "inst.json", "graph_cut", "8", "4");
    let solve = |out: &str, threads: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_twostage"))
            .args([
                "solve",
                "--instance",
                "inst.json",
                "--algo",
                "sampling-greedy",
                "--trials",
                "100",
                "--seed",
                "3",
                "--out",
                out,
                "--omit-timing",
            ])
            .env("RAYON_NUM_THREADS", threads)
            .current_dir(dir.path())
            .output()
            .unwrap();
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        fs::read(dir.path().join(out)).unwrap()
    };
    let a = solve("a.csv", "1");
    let b = solve("b.csv", "4");
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "instance_id,algorithm,seed,F_reported,F_mode,sum_fT,F_opt,ratio,evals,wall_ms"
    );
    // 100 trials + mean + stddev
    assert_eq!(lines.count(), 102);
}

#[test]
fn eval_prints_json() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("cov.json"),
        r#"{"n":3,"k":1,"l":2,"functions":[
            {"type":"coverage","universe_weights":[1,1,1,1],"covers":[[0,1],[1,2],[3]]},
            {"type":"graph_cut","edges":[[0,1,1.0],[1,2,1.0]]}]}"#,
    )
    .unwrap();
    let out = twostage(
        &["eval", "--instance", "cov.json", "--set", "0,1"],
        dir.path(),
    );
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["F"], 4.0);
    assert_eq!(v["mode"], "exact");
    assert_eq!(v["witnesses"], serde_json::json!([[0], [1]]));

    let out = twostage(
        &[
            "eval",
            "--instance",
            "cov.json",
            "--set",
            "0,1,2",
            "--f-eval",
            "greedy",
        ],
        dir.path(),
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["mode"], "greedy");
    assert_eq!(v["F"], 4.0);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("bad.json"),
        r#"{"n":3,"k":1,"l":0,"functions":[{"type":"modular","values":[1,2,3]}]}"#,
    )
    .unwrap();
    let out = twostage(
        &[
            "solve",
            "--instance",
            "bad.json",
            "--algo",
            "random",
            "--out",
            "x.csv",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("l must be ≥ 1"));

    fs::write(
        dir.path().join("range.json"),
        r#"{"n":3,"k":1,"l":1,"functions":[{"type":"graph_cut","edges":[[0,5,1.0]]}]}"#,
    )
    .unwrap();
    let out = twostage(
        &["eval", "--instance", "range.json", "--set", "0"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));

    gen(dir.path(), "big.json", "coverage", "60", "30");
    let out = twostage(
        &[
            "solve",
            "--instance",
            "big.json",
            "--algo",
            "replacement-greedy",
            "--f-eval",
            "exact",
            "--out",
            "big.csv",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
    let out = twostage(
        &[
            "solve",
            "--instance",
            "big.json",
            "--algo",
            "replacement-greedy",
            "--out",
            "big.csv",
        ],
        dir.path(),
    );
    assert!(out.status.success());
}

#[test]
fn bench_runs_config() {
    let dir = tempfile::tempdir().unwrap();
    gen(dir.path(), "file.json", "facility_location", "6", "3");
    fs::write(
        dir.path().join("bench.json"),
        r#"[{"instance":"file.json","algorithm":"sampling_greedy","trials":4,"base_seed":1},
            {"generator":{"kind":"graph_cut","n":6,"m":2,"k":2,"l":3,"seed":2},
             "algorithm":"replacement_greedy","trials":2},
            {"instance":"file.json","algorithm":"brute_force"}]"#,
    )
    .unwrap();
    let out = twostage(
        &[
            "bench",
            "--config",
            "bench.json",
            "--out",
            "r.csv",
            "--omit-timing",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(dir.path().join("r.csv")).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    // 4 + 2 + 1 trial rows and two aggregate rows for each of 3 groups
    assert_eq!(rows.len(), 13);
    assert!(rows[0].starts_with("file,brute_force,0,"));
}
