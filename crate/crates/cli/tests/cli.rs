use std::io::Write;
use std::process::{Command, Output, Stdio};

fn cutpaste(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cutpaste"))
        .args(args)
        .output()
        .unwrap()
}

fn cutpaste_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_cutpaste"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(text: &str, key: &str) -> String {
    text.split_whitespace()
        .find_map(|t| t.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key}= in {text:?}"))
        .to_owned()
}

#[test]
fn sort_examples() {
    let o = cutpaste(&["sort", "--algo", "refined", "--perm", "2 4 1 3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(field(&out, "moves").parse::<usize>().unwrap() <= 2);
    assert_eq!(field(&out, "ok"), "true");

    let out = stdout(&cutpaste(&["sort", "--algo", "refined", "--perm", "1 2 3"]));
    assert_eq!(field(&out, "moves"), "0");

    let out = stdout(&cutpaste(&[
        "sort",
        "--algo",
        "monotone",
        "--perm",
        "5 4 3 2 1",
    ]));
    assert_eq!(field(&out, "moves"), "1");
}

#[test]
fn sort_reads_stdin_and_writes_trace_that_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.trace");
    let o = cutpaste_stdin(
        &["sort", "--trace", path.to_str().unwrap()],
        "6 3 1 5 2 4\n",
    );
    assert!(o.status.success());
    let v = cutpaste(&["verify", "--trace", path.to_str().unwrap()]);
    assert!(v.status.success());
    let out = stdout(&v);
    assert!(out.contains("final=1 2 3 4 5 6"));
    assert!(out.contains("broken_adjacencies=none"));
}

#[test]
fn verify_examples() {
    let golden = "n 5\ninit 3 4 5 1 2\nmove 0 3 5 swap\n";
    let o = cutpaste_stdin(&["verify"], golden);
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "ok"), "true");

    let o = cutpaste_stdin(&["verify"], "n 4\ninit 1 2 3 4\n");
    assert!(o.status.success());

    let o = cutpaste_stdin(&["verify"], "n 3\ninit 1 2 3\nmove 0 2 9 swap\n");
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    let o = cutpaste_stdin(&["verify"], "n 3\ninit 2 1 3\n");
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(field(&stdout(&o), "ok"), "false");
}

#[test]
fn bound_distance_table_witness() {
    let out = stdout(&cutpaste(&["bound", "--perm", "2 4 1 3"]));
    assert_eq!(out.trim(), "parity_bound=2 adjacency_bound=2 best=2");

    let out = stdout(&cutpaste(&["distance", "--perm", "2 4 1 3"]));
    assert_eq!(field(&out, "distance"), "2");
    assert_eq!(field(&out, "refined_moves"), "2");

    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t4.csv");
    let o = cutpaste(&["table", "--n", "4", "--out", csv.to_str().unwrap()]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("n=4 fmax=2 lower=2 upper=2"));
    assert!(
        !String::from_utf8_lossy(&o.stderr).is_empty(),
        "progress goes to stderr"
    );
    let table = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(table.lines().filter(|l| !l.starts_with('#')).count(), 25);
    let witnesses = std::fs::read_to_string(dir.path().join("t4.csv.witnesses")).unwrap();
    assert_eq!(witnesses.lines().count(), 8);

    let out = stdout(&cutpaste(&["witness", "--n", "5", "--limit", "3"]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 3);
    for l in lines {
        // Neighbours of opposite parity, with 0 and n+1 at the ends.
        let mut v: Vec<u32> = vec![0];
        v.extend(l.split_whitespace().map(|t| t.parse::<u32>().unwrap()));
        v.push(6);
        let parity = v.windows(2).filter(|w| w[0] % 2 != w[1] % 2).count();
        assert_eq!(parity, 2, "{l}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(
        cutpaste(&["sort", "--perm", "1 1 2"]).status.code(),
        Some(1)
    );
    assert_eq!(
        cutpaste(&["distance", "--perm", "1 2 3 4 5 6 7 8 9"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        cutpaste(&["table", "--n", "10", "--allow-n9"])
            .status
            .code(),
        Some(3)
    );
    assert_ne!(
        cutpaste(&["sort", "--algo", "quick", "--perm", "1"])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn bench_and_random_are_deterministic() {
    let args = [
        "bench",
        "--n",
        "60,120",
        "--algo",
        "refined,insertion",
        "--reps",
        "3",
        "--seed",
        "4",
    ];
    let a = stdout(&cutpaste(&args));
    let b = stdout(&cutpaste(&args));
    let strip = |s: &str| -> Vec<String> {
        s.lines()
            .map(|l| l.rsplit_once(',').unwrap().0.to_owned())
            .collect()
    };
    assert_eq!(strip(&a), strip(&b));
    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(lines[0], "n,algo,reps,mean_moves,max_moves,bound,mean_ms");
    assert_eq!(lines.len(), 5);
    for row in &lines[1..] {
        let cols: Vec<&str> = row.split(',').collect();
        assert!(cols[4].parse::<usize>().unwrap() <= cols[5].parse::<usize>().unwrap());
    }

    let r1 = stdout(&cutpaste(&["random", "--n", "12", "--seed", "9"]));
    assert_eq!(
        r1,
        stdout(&cutpaste(&["random", "--n", "12", "--seed", "9"]))
    );
    assert_ne!(
        r1,
        stdout(&cutpaste(&["random", "--n", "12", "--seed", "10"]))
    );
    assert_eq!(
        stdout(&cutpaste(&["random", "--n", "12"])),
        stdout(&cutpaste(&["random", "--n", "12", "--seed", "0"]))
    );
}
