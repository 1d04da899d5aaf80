use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn tmp(name: &str, content: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    fs::write(&path, content).unwrap();
    path
}

fn oasm(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_oasm"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn abcd() -> String {
    tmp("abcd.txt", "A\nB\nC\nD\n").display().to_string()
}

#[test]
fn worked_example_search() {
    let alpha = abcd();
    let o = oasm(
        &["search", "--pattern", "ACBDA", "--k", "2", "--alphabet", &alpha, "--quiet"],
        "CCCCDACCBDACBDAA\n",
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        stdout(&o),
        "pattern_id\tstart\tlength\tdistance\tmatched_substring\n0\t10\t5\t0\tACBDA\n0\t3\t3\t2\tCDA\n"
    );
    assert!(o.stderr.is_empty());
}

#[test]
fn summary_goes_to_stderr() {
    let o = oasm(&["search", "--pattern", "acgt", "--k", "1"], ">r1\nacgtacct\n>r2\nggg\n");
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "#record\tr1"));
    assert!(!String::from_utf8_lossy(&o.stderr).is_empty());
}

#[test]
fn json_output() {
    let alpha = abcd();
    let o = oasm(
        &["search", "--pattern", "ACBDA", "--k", "2", "--alphabet", &alpha, "--format", "json", "--quiet"],
        "CCCCDACCBDACBDAA",
    );
    let lines: Vec<_> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with(r#"{"pattern_id":0,"start":10,"length":5,"distance":0"#));
}

#[test]
fn error_exit_codes() {
    let bad_symbol = oasm(&["search", "--pattern", "acgt", "--k", "1", "--quiet"], "acgxt\n");
    assert_eq!(bad_symbol.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad_symbol.stderr).contains("error"));
    let k_too_large = oasm(&["search", "--pattern", "acg", "--k", "3"], "acgt");
    assert_eq!(k_too_large.status.code(), Some(1));
    let missing_file = oasm(&["search", "--pattern", "acg", "--k", "1", "--input", "/nonexistent/x.fa"], "");
    assert_eq!(missing_file.status.code(), Some(1));
    let usage = oasm(&["search", "--k", "1"], "");
    assert_eq!(usage.status.code(), Some(1));
    let help = oasm(&["--help"], "");
    assert_eq!(help.status.code(), Some(0));
    assert!(stdout(&help).contains("msearch"));
}

#[test]
fn msearch_worker_counts_agree() {
    let patterns = tmp("patterns.tsv", "# id pattern K\n1\tacgt\t1\n2\tggcc\t1\n3\ttata\t0\n");
    let fasta = tmp("input.fa", &format!(">x\n{}\n", "acgtggcctatacgaatata".repeat(30)));
    let run = |workers: &str| {
        let o = oasm(
            &[
                "msearch",
                "--patterns",
                patterns.to_str().unwrap(),
                "--input",
                fasta.to_str().unwrap(),
                "--workers",
                workers,
                "--quiet",
            ],
            "",
        );
        assert!(o.status.success());
        stdout(&o)
    };
    let one = run("1");
    assert!(one.lines().count() > 30);
    assert_eq!(run("3"), one);
    let streamed = oasm(
        &["msearch", "--patterns", patterns.to_str().unwrap(), "--workers", "2", "--quiet"],
        &fs::read_to_string(&fasta).unwrap(),
    );
    assert_eq!(stdout(&streamed), one);
}

#[test]
fn baselines() {
    let alpha = abcd();
    let run = |algo: &str| {
        let o = oasm(
            &["baseline", "--algo", algo, "--pattern", "ABCD", "--k", "1", "--alphabet", &alpha],
            "ABBDABCDACDB",
        );
        assert!(o.status.success());
        stdout(&o)
    };
    assert_eq!(run("fully-naive").lines().count(), 8);
    assert_eq!(run("less-naive"), "end\tdistance\n3\t1\n6\t1\n7\t0\n8\t1\n10\t1\n");
    assert_eq!(
        run("oracle"),
        "start\tlength\tdistance\tmatched_substring\n0\t4\t1\tABBD\n4\t4\t0\tABCD\n8\t3\t1\tACD\n"
    );
}

#[test]
fn simulate_with_trace() {
    let alpha = abcd();
    let trace = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("trace.tsv");
    let o = oasm(
        &[
            "simulate", "--pattern", "ACBDA", "--k", "2", "--alphabet", &alpha, "--trace",
            trace.to_str().unwrap(),
        ],
        "CCCCDACCBDACBDAA",
    );
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("cycles_per_window=11"));
    let trace = fs::read_to_string(trace).unwrap();
    assert!(trace.starts_with("cycle\tcnt\tpe0\tpe1\tpe2\tpe3\tpe4\tout\n"));
    assert_eq!(trace.lines().count(), 12);
}

#[test]
fn bench_rows() {
    let o = oasm(&["bench", "--lp", "5,7", "--k", "2", "--lt", "200", "--reps", "2"], "");
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<_> = out.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("l_p\tK\tl_t"));
    assert!(lines[1].starts_with("5\t2\t200\t2\t"));
}
