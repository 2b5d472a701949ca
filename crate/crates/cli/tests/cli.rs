use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shortcover"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn xi_solve() {
    let o = run(&["xi", "--n", "7", "--method", "solve"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("xi(7) = 5\n"));
    assert!(stdout(&o).contains("verified: yes"));
}

#[test]
fn xi_trivial_board() {
    assert!(stdout(&run(&["xi", "--n", "1"])).starts_with("xi(1) = 1\n"));
    let o = run(&["xi", "--n", "1", "--variant", "punctured"]);
    assert!(stdout(&o).starts_with("xi_D(1) = 0\n"));
}

#[test]
fn xi_construct_and_bounds() {
    let o = run(&[
        "xi",
        "--n",
        "12",
        "--variant",
        "punctured",
        "--method",
        "construct",
    ]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.starts_with("xi_D(12) <= 6"));
    assert!(out.contains("(2,12)") && out.contains("(12,6)"));
    assert!(out.contains("verified: yes"));

    let o = run(&["xi", "--n", "13", "--method", "bounds"]);
    assert_eq!(stdout(&o).trim(), "7 <= xi(13) <= 9");
    let o = run(&["xi", "--n", "8", "--method", "bounds"]);
    assert_eq!(stdout(&o).trim(), "xi(8) = 5");
    assert_eq!(code(&run(&["xi", "--n", "8", "--method", "construct"])), 2);
}

#[test]
fn ascii_rendering_has_row_n_on_top() {
    let o = run(&["xi", "--n", "6", "--method", "construct", "--ascii"]);
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().skip(3).collect();
    assert_eq!(rows.len(), 6);
    // Center (2,6) sits in the top row, second column.
    assert_eq!(rows[0], ".Q....");
    assert_eq!(rows[4], ".....Q");
}

#[test]
fn c_values() {
    let o = run(&["c", "--q", "5", "--method", "solve"]);
    assert!(stdout(&o).starts_with("c(5) = 4\n"));
    let o = run(&["c", "--q", "8", "--method", "solve"]);
    assert!(stdout(&o).starts_with("c(8) = 6\n"));
    let o = run(&["c", "--q", "11", "--method", "lift"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("c(11) <= 7\n"));
    assert!(stdout(&o).contains("verified: yes"));
}

#[test]
fn bad_arguments_exit_2() {
    assert_eq!(code(&run(&["c", "--q", "6"])), 2);
    assert_eq!(code(&run(&["c", "--q", "4", "--method", "lift"])), 2);
    assert_eq!(code(&run(&["xi", "--n", "0"])), 2);
    assert_eq!(code(&run(&["xi", "--n", "5", "--variant", "diagonal"])), 2);
    assert_eq!(code(&run(&["lp", "--n", "3", "--q", "3"])), 2);
}

#[test]
fn timeout_exit_3() {
    let o = run(&["xi", "--n", "13", "--time-limit", "0.001", "--threads", "1"]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).starts_with("xi(13) <= "));
}

#[test]
fn json_documents_are_deterministic() {
    let args = [
        "xi",
        "--n",
        "9",
        "--variant",
        "punctured",
        "--json",
        "--threads",
        "2",
    ];
    let a = stdout(&run(&args));
    let b = stdout(&run(&[
        "xi",
        "--n",
        "9",
        "--variant",
        "punctured",
        "--json",
        "--threads",
        "1",
    ]));
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["kind"], "board");
    assert_eq!(v["indexing"], "zero-based");
    assert_eq!(v["size"], 6);
    assert_eq!(v["verified"], true);
}

#[test]
fn lift_extract_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let board = dir.path().join("board.json");
    let short = dir.path().join("short.json");
    let back = dir.path().join("back.json");
    let o = run(&[
        "xi",
        "--n",
        "8",
        "--variant",
        "punctured",
        "--method",
        "construct",
        "--json",
    ]);
    fs::write(&board, stdout(&o)).unwrap();

    assert_eq!(
        code(&run(&[
            "lift",
            "--q",
            "9",
            "--in",
            path(&board),
            "--out",
            path(&short)
        ])),
        0
    );
    let s: Value = serde_json::from_str(&fs::read_to_string(&short).unwrap()).unwrap();
    assert_eq!(
        (s["kind"].as_str(), s["size"].as_u64()),
        (Some("short"), Some(6))
    );
    assert_eq!(s["field"]["modulus"], serde_json::json!([1, 0, 1]));
    assert_eq!(code(&run(&["verify", "--in", path(&short)])), 0);

    assert_eq!(
        code(&run(&[
            "extract",
            "--q",
            "9",
            "--in",
            path(&short),
            "--out",
            path(&back)
        ])),
        0
    );
    let b: Value = serde_json::from_str(&fs::read_to_string(&back).unwrap()).unwrap();
    let orig: Value = serde_json::from_str(&fs::read_to_string(&board).unwrap()).unwrap();
    assert_eq!(b["centers"], orig["centers"]);
    assert_eq!(b["variant"], "punctured");
    let o = run(&["verify", "--in", path(&back)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("valid:"));

    assert_eq!(
        code(&run(&["extract", "--q", "7", "--in", path(&short)])),
        2
    );
}

#[test]
fn verify_rejects_tampered_cover() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("cover.json");
    let o = run(&["xi", "--n", "6", "--method", "construct", "--json"]);
    let mut v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    v["centers"].as_array_mut().unwrap().pop();
    v["size"] = Value::from(2);
    fs::write(&file, v.to_string()).unwrap();
    let o = run(&["verify", "--in", path(&file)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("uncovered: ("));
}

#[test]
fn verify_checks_declared_size() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("cover.json");
    let o = run(&["xi", "--n", "6", "--method", "construct", "--json"]);
    let mut v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    v["size"] = Value::from(4);
    fs::write(&file, v.to_string()).unwrap();
    assert_eq!(code(&run(&["verify", "--in", path(&file)])), 1);
}

#[test]
fn malformed_json_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("cover.json");
    fs::write(
        &file,
        "{\"kind\": \"board\",\n  \"n\": 5,\n  \"centers\": [[1, 2], [9]]\n",
    )
    .unwrap();
    let o = run(&["verify", "--in", path(&file)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));

    let o = run(&["xi", "--n", "5", "--method", "construct", "--json"]);
    let mut v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    v["centers"][1] = serde_json::json!([9]);
    fs::write(&file, v.to_string()).unwrap();
    let o = run(&["verify", "--in", path(&file)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("centers[1]"));
}

#[test]
fn lp_export() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("model.lp");
    assert_eq!(
        code(&run(&[
            "lp",
            "--n",
            "9",
            "--variant",
            "punctured",
            "--out",
            path(&file)
        ])),
        0
    );
    let text = fs::read_to_string(&file).unwrap();
    assert_eq!(text.lines().filter(|l| l.ends_with(">= 1")).count(), 72);
    let o = run(&["lp", "--q", "2"]);
    assert_eq!(
        stdout(&o).lines().filter(|l| l.ends_with(">= 1")).count(),
        7
    );
}

#[test]
fn table_matches_known_values() {
    let o = run(&["table", "--max-n", "11", "--max-q", "8"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let value = |row: &str, col: usize| -> u32 {
        let line = out
            .lines()
            .find(|l| l.split_whitespace().next() == Some(row))
            .unwrap();
        line.split_whitespace().nth(col).unwrap().parse().unwrap()
    };
    for (n, xi, xid) in [(3, 2, 2), (5, 3, 3), (7, 5, 4), (9, 6, 6), (11, 7, 7)] {
        assert_eq!(value(&n.to_string(), 1), xi, "xi({n})");
        assert_eq!(value(&n.to_string(), 3), xid, "xi_D({n})");
    }
    let c_rows: Vec<&str> = out
        .lines()
        .skip_while(|l| !l.contains("c(q)"))
        .skip(1)
        .collect();
    let cs: Vec<(u32, u32)> = c_rows
        .iter()
        .map(|l| {
            let mut it = l.split_whitespace();
            (
                it.next().unwrap().parse().unwrap(),
                it.next().unwrap().parse().unwrap(),
            )
        })
        .collect();
    assert_eq!(cs, vec![(2, 1), (3, 3), (4, 3), (5, 4), (7, 5), (8, 6)]);
}
