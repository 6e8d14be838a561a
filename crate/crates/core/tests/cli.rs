use std::process::Command;

use apwenian::cli::run;

fn invoke(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut argv = vec!["apwenian"];
    argv.extend_from_slice(args);
    let mut input = stdin.as_bytes();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut input, &mut out, &mut err, false);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn count_table_text() {
    let (code, out, _) = invoke(&["--format", "text", "count", "--pmax", "19"], "");
    assert_eq!(code, 0);
    let values: Vec<u64> = out
        .lines()
        .map(|l| l.split_whitespace().nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(
        values,
        [1, 2, 1, 2, 0, 0, 1, 4, 0, 2, 0, 2, 0, 16, 1, 4, 0, 2]
    );
}

#[test]
fn count_defaults_to_json_off_terminal() {
    let (code, out, _) = invoke(&["count", "--pmax", "5"], "");
    assert_eq!(code, 0);
    let first: serde_json::Value = serde_json::from_str(out.lines().nth(1).unwrap()).unwrap();
    assert_eq!(first["p"], 3);
    assert_eq!(first["n_p"], 2);
    assert_eq!(first["n_prime"], 1);
}

#[test]
fn classify_nine() {
    let (code, out, _) = invoke(&["classify", "--p", "9", "--enumerate"], "");
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["k"], 2);
    assert_eq!(v["mu"], 6);
    assert_eq!(v["n_p"], 4);
    assert_eq!(v["vectors"].as_array().unwrap().len(), 4);
    assert_eq!(v["cycles"], serde_json::json!([[0, 1, 3, 7, 6, 4], [2, 5]]));
}

#[test]
fn check_failure_exit_code() {
    let (code, out, _) = invoke(
        &["--format", "text", "check", "--alphabet", "01", "111"],
        "",
    );
    assert_eq!(code, 1);
    assert_eq!(out.trim(), "FAIL at n=0");
}

#[test]
fn check_reads_stdin() {
    let (_, pd, _) = invoke(&["gen", "--family", "period-doubling", "--len", "101"], "");
    let (code, out, _) = invoke(&["--format", "json", "check", "--alphabet", "01"], &pd);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["checked_up_to"], 49);
}

#[test]
fn data_errors_name_the_index() {
    let (code, _, err) = invoke(&["check", "--alphabet", "pm", "++x-"], "");
    assert_eq!(code, 2);
    assert!(err.contains("index 2"), "{err}");
}

#[test]
fn usage_errors() {
    let (code, _, err) = invoke(&["frobnicate"], "");
    assert_eq!(code, 2);
    assert!(err.contains("Usage"));
    let (code, _, _) = invoke(&["classify", "--p", "8"], "");
    assert_eq!(code, 2);
}

#[test]
fn gen_variants() {
    let (_, out, _) = invoke(&["gen", "--family", "coded-morphism", "--len", "16"], "");
    assert_eq!(out.trim(), "++-++--+-++-+--+");
    let (_, out, _) = invoke(
        &["gen", "--family", "doubled-thue-morse", "--len", "16"],
        "",
    );
    assert_eq!(out.trim(), "++----++--++++--");
    let (_, out, _) = invoke(
        &[
            "gen",
            "--family",
            "substitution",
            "--image1",
            "10",
            "--image0",
            "11",
            "--len",
            "15",
        ],
        "",
    );
    assert_eq!(out.trim(), "101110101011101");
    let (_, out, _) = invoke(
        &[
            "gen",
            "--family",
            "sturmian",
            "--directives",
            "1,1,1,1,1",
            "--len",
            "8",
        ],
        "",
    );
    assert_eq!(out.trim(), "10110101");
    let (_, out, _) = invoke(
        &[
            "gen",
            "--family",
            "thue-morse-pm",
            "--len",
            "16",
            "--project",
        ],
        "",
    );
    assert_eq!(out.trim(), "11001111110011");
}

#[test]
fn hankel_modes() {
    let (code, out, _) = invoke(
        &[
            "--format", "text", "hankel", "--mode", "exact", "--n", "3", "+--+-",
        ],
        "",
    );
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "1\t1\n2\t-2\n3\t4");
    let (_, out, _) = invoke(
        &[
            "--format",
            "text",
            "hankel",
            "--mode",
            "pm-profile",
            "--n",
            "4",
            "--exact-path",
            "+--+-++",
        ],
        "",
    );
    assert_eq!(out.trim(), "1111");
    let (_, out, _) = invoke(
        &[
            "--format", "text", "hankel", "--mode", "exact", "--n", "2", "1,3,9",
        ],
        "",
    );
    assert_eq!(out.trim(), "1\t1\n2\t0");
}

#[test]
fn jfrac_modes() {
    let (_, pd, _) = invoke(&["gen", "--family", "period-doubling", "--len", "9"], "");
    let (code, out, _) = invoke(
        &["--format", "text", "jfrac", "--depth", "4", pd.trim()],
        "",
    );
    assert_eq!(code, 0);
    assert_eq!(out.trim().len(), 4);
    let (code, out, _) = invoke(
        &[
            "--format",
            "json",
            "jfrac",
            "--rational",
            "--depth",
            "2",
            "+--+-",
        ],
        "",
    );
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 2);
    let (code, _, err) = invoke(&["jfrac", "--depth", "2", "11111"], "");
    assert_eq!(code, 2);
    assert!(err.contains("order 2"));
}

#[test]
fn pade_and_approx() {
    let (code, out, _) = invoke(&["--format", "json", "pade", "--n", "1"], "");
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["Q"], serde_json::json!(["1/1", "1/1"]));
    assert_eq!(v["error_valuation"], 2);
    assert_eq!(v["error_leading"], "-2/1");

    let (code, out, _) = invoke(
        &["--format", "text", "approx", "--b", "2", "--n-max", "4"],
        "",
    );
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert!(lines.next().unwrap().starts_with("# xi ~ 0.3501838"));
    assert_eq!(lines.next().unwrap(), "n\tr\ts\terr_log\texponent_estimate");
    let first: Vec<&str> = lines.next().unwrap().split('\t').collect();
    assert_eq!(&first[..3], ["1", "2", "3"]);
    assert_eq!(first[4].split('.').nth(1).unwrap().len(), 6);
}

#[test]
fn scan_output_matches_across_thread_counts() {
    let args = |t: &'static str| {
        vec![
            "--threads",
            t,
            "--format",
            "json",
            "scan",
            "--family",
            "general_pm",
            "--p",
            "4",
            "--depth",
            "256",
        ]
    };
    let (c1, one, _) = invoke(&args("1"), "");
    let (c4, four, _) = invoke(&args("4"), "");
    assert_eq!((c1, c4), (0, 0));
    assert_eq!(one, four);
}

#[test]
fn out_file() {
    let dir = std::env::temp_dir().join(format!("apw-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("table.txt");
    let (code, out, _) = invoke(
        &[
            "--format",
            "text",
            "--out",
            path.to_str().unwrap(),
            "count",
            "--pmax",
            "4",
        ],
        "",
    );
    assert_eq!(code, 0);
    assert!(out.is_empty());
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        "   2  1\n   3  2\n   4  1\n"
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn binary_exit_codes_and_env_threads() {
    let bin = env!("CARGO_BIN_EXE_apwenian");
    let status = Command::new(bin)
        .args(["check", "--alphabet", "01", "111"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(1));
    let a = Command::new(bin)
        .env("APW_THREADS", "1")
        .args(["scan", "--family", "type2_pm", "--p", "9", "--depth", "256"])
        .output()
        .unwrap();
    let b = Command::new(bin)
        .env("APW_THREADS", "3")
        .args(["scan", "--family", "type2_pm", "--p", "9", "--depth", "256"])
        .output()
        .unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let report: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["survivors"].as_array().unwrap().len(), 4);
}
