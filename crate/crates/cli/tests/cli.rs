use std::fs;
use std::process::{Command, Output};

fn egyptfrac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_egyptfrac")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn classify_and_trajectory() {
    let o = egyptfrac(&["classify", "20"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("pp_pseudoperfect: true"));
    assert!(text.contains("murthy: true"));
    assert!(text.contains("pp_giuga: false"));

    let o = egyptfrac(&["classify", "30", "--format", "record"]);
    let rec: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rec["giuga"], true);
    assert_eq!(rec["factorization"], serde_json::json!([[2, 1], [3, 1], [5, 1]]));

    assert_eq!(stdout(&egyptfrac(&["trajectory", "20"])), "20 10 5 4 2 1\n");
}

#[test]
fn enumerate_formats() {
    let o = egyptfrac(&["enumerate", "ppgiuga", "--limit", "60"]);
    assert_eq!(stdout(&o), "12 = 2^2 · 3\n30 = 2 · 3 · 5\n56 = 2^3 · 7\n");
    let o = egyptfrac(&["enumerate", "pppn", "--limit", "21", "--format", "bfile"]);
    assert_eq!(stdout(&o), "1 2\n2 4\n3 6\n4 8\n5 16\n6 18\n7 20\n");
    let o = egyptfrac(&["enumerate", "murthy", "--limit", "50"]);
    assert_eq!(stdout(&o), "2\n4\n6\n8\n16\n18\n20\n32\n42\n");
}

#[test]
fn trees_and_constructions() {
    let o = egyptfrac(&["tree", "murthy", "--limit", "80000", "--max-depth", "2", "--format", "dot"]);
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph murthy {"));
    assert_eq!(dot.matches(" -> ").count(), 6);
    let o = egyptfrac(&["tree", "efp", "--limit", "100000", "--format", "record"]);
    assert!(stdout(&o).contains("\"value\":\"77659\""));

    let o = egyptfrac(&["construct", "--variant", "iv", "--n", "18"]);
    assert_eq!(stdout(&o), "306 = 2 · 3^2 · 17 (pp-giuga: true)\n");
    let o = egyptfrac(&["construct", "--variant", "iv", "--n", "16"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("n - 1 = 15 is not prime"));
}

#[test]
fn efp_and_scans() {
    assert_eq!(stdout(&egyptfrac(&["efp", "43"])), "43 level 3 (prime)\n");
    assert_eq!(stdout(&egyptfrac(&["efp", "11"])), "11 not an extended Fermat prime (prime)\n");
    let o = egyptfrac(&["scan", "a003306", "--limit", "9"]);
    assert_eq!(stdout(&o), "0\n1\n2\n4\n5\n6\n9\n");
    let o = egyptfrac(&["scan", "strict-giuga", "--limit", "100000"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "");
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.txt");
    fs::write(&good, "# A286497\n1 12\n2 30\n3 56\n4 306\n").unwrap();
    let o = egyptfrac(&["verify", "--sequence", "A286497", "--bfile", good.to_str().unwrap(), "--limit", "1000"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "1 12\n2 30\n3 57\n").unwrap();
    let o = egyptfrac(&["verify", "--sequence", "A286497", "--bfile", bad.to_str().unwrap(), "--limit", "1000"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("index 3"));

    let broken = dir.path().join("broken.txt");
    fs::write(&broken, "1 12\nnonsense\n").unwrap();
    let o = egyptfrac(&["verify", "--sequence", "A286497", "--bfile", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let murthy = dir.path().join("a073935.txt");
    fs::write(&murthy, "1 1\n2 2\n3 4\n4 6\n5 8\n6 16\n7 18\n8 20\n").unwrap();
    let o = egyptfrac(&["verify", "--sequence", "A073935", "--bfile", murthy.to_str().unwrap(), "--limit", "100"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn argument_and_resource_errors() {
    assert_eq!(egyptfrac(&["classify"]).status.code(), Some(2));
    assert_eq!(egyptfrac(&["classify", "1"]).status.code(), Some(2));
    assert_eq!(egyptfrac(&["enumerate", "ppgiuga", "--limit", "1"]).status.code(), Some(2));
    assert_eq!(egyptfrac(&["bogus"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_egyptfrac"))
        .args(["enumerate", "ppgiuga", "--limit", "1000000"])
        .env("EGYPTFRAC_SIEVE_BYTES", "1000")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(String::from_utf8_lossy(&o.stderr).lines().count(), 1);
}

#[test]
fn output_is_deterministic() {
    let args = ["tree", "efp", "--limit", "1020101", "--format", "dot"];
    assert_eq!(egyptfrac(&args).stdout, egyptfrac(&args).stdout);
    let args = ["enumerate", "pppn", "--limit", "1000000"];
    assert_eq!(egyptfrac(&args).stdout, egyptfrac(&args).stdout);
}
