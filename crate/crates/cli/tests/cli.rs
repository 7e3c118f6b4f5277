use std::process::{Command, Output};

fn irrcyc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_irrcyc")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code_args(p: u64, s: u32, m: u32, n: u64) -> Vec<String> {
    vec![
        "--p".into(),
        p.to_string(),
        "--s".into(),
        s.to_string(),
        "--m".into(),
        m.to_string(),
        "--N".into(),
        n.to_string(),
    ]
}

fn run(cmd: &str, p: u64, s: u32, m: u32, n: u64, extra: &[&str]) -> Output {
    let mut args = vec![cmd.to_string()];
    args.extend(code_args(p, s, m, n));
    args.extend(extra.iter().map(|a| a.to_string()));
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    irrcyc(&refs)
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_str(stdout(out).trim()).expect("valid json")
}

#[test]
fn dist_prints_the_enumerator() {
    let out = run("dist", 3, 1, 4, 2, &["--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim_end(), "1 + 40x^24 + 40x^30");
    let out = run("dist", 5, 1, 4, 4, &[]);
    assert_eq!(stdout(&out).trim_end(), "1 + 156x^112 + 156x^124 + 156x^128 + 156x^136");
}

#[test]
fn dist_is_byte_stable() {
    let a = run("dist", 2, 1, 12, 65, &[]);
    let b = run("dist", 2, 1, 12, 65, &["--threads", "1"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bad_input_exits_two() {
    let out = run("dist", 2, 1, 4, 7, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("7 does not divide 15"));
    assert_eq!(run("dist", 4, 1, 2, 3, &[]).status.code(), Some(2));
}

#[test]
fn missing_closed_form_exits_three() {
    assert_eq!(run("dist", 2, 1, 11, 89, &["--budget", "100"]).status.code(), Some(3));
    assert_eq!(run("dist", 2, 1, 11, 89, &["--method", "closed"]).status.code(), Some(3));
    let out = run("dist", 2, 1, 11, 89, &["--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["enumerator"], "1 + 506x^8 + 1288x^12 + 253x^16");
    assert_eq!(json(&out)["method"], "brute");
    let out = run("verify", 2, 1, 11, 89, &[]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("oracle: 1 + "));
}

#[test]
fn verify_matches() {
    for (p, s, m, n, tag) in [(3, 1, 4, 4, "thm24"), (2, 2, 3, 9, "thm24"), (2, 1, 21, 49, "thm22")] {
        let out = run("verify", p, s, m, n, &["--format", "json"]);
        assert_eq!(out.status.code(), Some(0), "{p} {s} {m} {n}");
        let v = json(&out);
        assert_eq!(v["method"], tag);
        assert_eq!(v["verify"]["match"], true);
        assert_eq!(v["verify"]["oracle_method"], "brute");
    }
    let out = run("verify", 2, 2, 3, 9, &[]);
    assert!(stdout(&out).starts_with("MATCH method thm24\nclosed form: 1 + 21x^4 + 42x^6\n"));
}

#[test]
fn json_record_has_every_field() {
    let keys = [
        "p", "s", "m", "N", "q", "r", "n", "N1", "m0", "method", "weights", "divisor", "bounds", "thm14", "verify",
        "elapsed_ms",
    ];
    for cmd in ["dist", "verify", "bounds", "periods"] {
        let v = json(&run(cmd, 3, 1, 4, 2, &["--format", "json"]));
        for k in keys {
            assert!(v.get(k).is_some(), "{cmd} lacks {k}");
        }
    }
    let v = json(&run("dist", 3, 1, 4, 2, &["--format", "json"]));
    assert_eq!(v["weights"], serde_json::json!([{"w": "24", "count": "40"}, {"w": "30", "count": "40"}]));
    assert_eq!((v["q"].as_str(), v["r"].as_str(), v["n"].as_str()), (Some("3"), Some("81"), Some("40")));
    assert_eq!(v["bounds"], serde_json::json!({"lower": "24", "upper": "30"}));
    assert!(v["verify"].is_null());
}

#[test]
fn large_counts_are_strings() {
    let v = json(&run("dist", 2, 1, 42, 49, &["--format", "json"]));
    let weights: Vec<&str> = v["weights"].as_array().unwrap().iter().map(|e| e["w"].as_str().unwrap()).collect();
    assert_eq!(weights.first(), Some(&"44877307904"));
    assert_eq!(weights.last(), Some(&"44878356480"));
    let v = json(&run("dist", 2, 1, 84, 49, &["--format", "json"]));
    let c = v["weights"][0]["count"].as_str().unwrap();
    assert!(c.parse::<u64>().is_err() && c.len() > 20);
}

#[test]
fn periods_listing() {
    let out = run("periods", 3, 1, 4, 2, &[]);
    assert!(stdout(&out).starts_with("eta_0 = -5\neta_1 = 4\n"));
    let out = run("periods", 2, 1, 6, 3, &[]);
    let text = stdout(&out);
    assert!(text.contains("period polynomial: X^3 + X^2 - 21X - 45"));
    let v = json(&run("periods", 2, 1, 6, 3, &["--format", "json"]));
    let mut roots: Vec<i64> = v["periods"].as_array().unwrap().iter().map(|x| x.as_str().unwrap().parse().unwrap()).collect();
    roots.sort();
    assert_eq!(roots, vec![-3, -3, 5]);
    let out = run("periods", 3, 1, 4, 4, &[]);
    let text = stdout(&out);
    assert!(text.starts_with("eta_0 = -7\neta_1 = 2\neta_2 = 2\neta_3 = 2\n"));
    assert!(text.contains("congruence holds"));
    let out = run("periods", 3, 1, 4, 4, &["--method", "closed"]);
    assert!(stdout(&out).contains("periods (unordered): -7, 2, 2, 2"));
    assert_eq!(run("periods", 2, 1, 11, 89, &["--method", "brute", "--budget", "100"]).status.code(), Some(3));
}

#[test]
fn table_flags_one_row() {
    let out = irrcyc(&["table1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let disagree: Vec<&str> = text.lines().filter(|l| l.ends_with("DISAGREE")).collect();
    assert_eq!(disagree.len(), 1);
    let cols: Vec<&str> = disagree[0].split_whitespace().collect();
    assert_eq!(&cols[..6], &["312", "4", "240", "5", "240", "236"]);
    assert_eq!(text.lines().skip(1).filter(|l| l.ends_with(" agree")).count(), 7);
    let v: serde_json::Value = serde_json::from_str(stdout(&irrcyc(&["table1", "--format", "json"])).trim()).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 8);
    assert_eq!(rows[0]["n"], "5");
    assert_eq!(rows[7]["table"]["agree"], false);
}
