//! End-to-end checks of the `meshpat` binary: golden outputs and the exit-code
//! contract (0 verified, 1 counterexample, 2 usage/parse error).

use std::process::{Command, Output};

fn meshpat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_meshpat"))
        .args(args)
        .env_remove("MESHPAT_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap_or(-1)
}

#[test]
fn count_golden_values() {
    let out = meshpat(&["count", "12:", "21"]);
    assert_eq!((code(&out), stdout(&out)), (0, "0\n".to_string()));
    let out = meshpat(&["count", "123:", "123"]);
    assert_eq!((code(&out), stdout(&out)), (0, "1\n".to_string()));
    // brute-forced truth for the classic 132 example: one occurrence
    let out = meshpat(&["count", "132:(0,0)(1,1)(1,2)(3,1)", "24513"]);
    assert_eq!((code(&out), stdout(&out)), (0, "1\n".to_string()));
}

#[test]
fn count_parse_errors_name_the_token() {
    let out = meshpat(&["count", "132:(0,zz)", "123"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("(0,zz)"));
    let out = meshpat(&["count", "132:", "12x"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("x"));
}

#[test]
fn check_pair_exit_codes() {
    let out = meshpat(&["check-pair", "X1_19", "--nmax", "5"]);
    assert_eq!(code(&out), 0);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["verdict"], "verified-at-depth");
    assert_eq!(json["pair"], "X1_19");

    let out = meshpat(&["check-pair", "123:", "132:", "--nmax", "5"]);
    assert_eq!(code(&out), 1);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["verdict"], "refuted-at-depth");
    assert!(json["first_failure"].is_object());

    let out = meshpat(&["check-pair", "X1_999"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn check_pair_conjecture_is_supported_not_verified() {
    let out = meshpat(&["check-pair", "P117", "--nmax", "5"]);
    assert_eq!(code(&out), 0);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["verdict"], "supported-at-depth");
}

#[test]
fn check_pair_csv_layout() {
    let out = meshpat(&["check-pair", "X1_17", "--nmax", "3", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "n,k,l,count\n1,0,0,1\n2,0,0,2\n3,0,0,4\n3,0,1,1\n3,1,0,1\n"
    );
}

#[test]
fn jobs_flag_is_deterministic() {
    let one = meshpat(&["check-pair", "X2_13", "--nmax", "5", "--jobs", "1"]);
    let many = meshpat(&["check-pair", "X2_13", "--nmax", "5", "--jobs", "4"]);
    assert_eq!(stdout(&one), stdout(&many));
    assert_eq!(code(&one), code(&many));
}

#[test]
fn bijection_trace_golden() {
    let out = meshpat(&[
        "bijection-trace",
        "12:(0,1)(0,2)(1,1)(1,2)",
        "21:(0,1)(0,2)(1,1)(1,2)",
        "263518497",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out).trim(),
        r#"[{"step":1,"swap":[8,9],"result":"263519487"},{"step":2,"swap":[6,9],"result":"293516487"},{"step":3,"swap":[9,5],"result":"253916487"},{"step":4,"swap":[5,3],"result":"235916487"},{"step":5,"swap":[2,3],"result":"325916487"}]"#
    );
}

#[test]
fn bijection_trace_empty_and_errors() {
    // a permutation free of occurrences gives an empty step list
    let out = meshpat(&["bijection-trace", "X2_10", "41235"]);
    assert_eq!(
        (code(&out), stdout(&out).trim().to_string()),
        (0, "[]".to_string())
    );
    // one swap on a (1,0) permutation
    let out = meshpat(&["bijection-trace", "X2_10", "123"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out).trim(),
        r#"[{"step":1,"swap":[2,3],"result":"132"}]"#
    );
    // conjectured entries carry no registered map
    let out = meshpat(&["bijection-trace", "P117", "123"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn verify_tables_small_run() {
    let out = meshpat(&["verify-tables", "--tables", "2", "--nmax", "4"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(
        text.lines().filter(|l| l.starts_with("TABLE 2")).count(),
        44
    );
    assert!(text.contains("44 pass, 0 fail"));
}

#[test]
fn verify_tables_reports_known_failures() {
    let out = meshpat(&["verify-tables", "--tables", "5", "--nmax", "4"]);
    // X4_4/Y4_4 witness maps only break at n = 6; nmax 4 keeps this quick
    assert_eq!(code(&out), 0);
    let out = meshpat(&["verify-tables", "--tables", "3", "--nmax", "6"]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("X2_11") && text.contains("map[single-swap]=FAIL"));
    assert!(text.contains("30 pass, 4 fail"));
}

#[test]
fn discover_shallow_contains_catalog() {
    let out = meshpat(&["discover", "--nmax", "4"]);
    assert_eq!(code(&out), 2);
    let out = meshpat(&["discover", "--nmax", "5"]);
    assert_eq!(code(&out), 0);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["catalog_shadings_missing_from_result"], 0);
    assert!(json["passing_count"].as_u64().unwrap() >= 126);
}

#[test]
fn jobs_env_var_is_honored() {
    let via_env = Command::new(env!("CARGO_BIN_EXE_meshpat"))
        .args(["check-pair", "X3_9", "--nmax", "5"])
        .env("MESHPAT_JOBS", "2")
        .output()
        .expect("binary runs");
    let via_flag = meshpat(&["check-pair", "X3_9", "--nmax", "5", "--jobs", "2"]);
    assert_eq!(stdout(&via_env), stdout(&via_flag));
    assert_eq!(code(&via_env), 0);
}
