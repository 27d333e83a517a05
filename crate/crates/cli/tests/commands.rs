use std::path::PathBuf;
use std::process::{Command, Output};

fn iterasym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_iterasym"))
        .args(args)
        .env_remove("ITERASYM_PRECISION_DEFAULT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("iterasym-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn estimate_logistic_half() {
    let o = iterasym(&[
        "estimate",
        "--map",
        "logistic(p=1/2,x0=1/2)",
        "--digits",
        "15",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("0.196453426377889"), "{out}");
    assert!(out.contains("rigorous"), "{out}");
}

#[test]
fn estimate_json_has_the_stable_schema() {
    let o = iterasym(&[
        "estimate",
        "--map",
        "power-sum(q=2)",
        "--digits",
        "20",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let obj = v.as_object().unwrap();
    let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(
        keys,
        [
            "certification",
            "certified_digits",
            "elapsed_ms",
            "k_used",
            "map",
            "method",
            "name",
            "params",
            "precision_digits",
            "value",
            "x0"
        ]
    );
    for k in ["map", "x0", "method", "name", "value", "certification"] {
        assert!(obj[k].is_string(), "{k}");
    }
    for k in ["certified_digits", "k_used", "precision_digits"] {
        assert!(obj[k].is_u64(), "{k}");
    }
    assert!(obj["elapsed_ms"].is_number());
    assert_eq!(obj["params"]["q"], "2");
    assert_eq!(obj["name"], "c(q)");
    assert!(obj["value"]
        .as_str()
        .unwrap()
        .starts_with("0.86157118756871173053"));
}

#[test]
fn invalid_parameter_exits_2_without_output() {
    let o = iterasym(&["estimate", "--map", "logistic(p=2,x0=1/2)"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(
        stderr(&o).contains("p must satisfy 0<p≤1"),
        "{}",
        stderr(&o)
    );

    let o = iterasym(&["estimate", "--map", "no-such-map"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
}

#[test]
fn impossible_depth_exits_3_and_names_the_stage() {
    let o = iterasym(&["estimate", "--map", "sqrt-map", "--k-max", "3000000"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("estimate sqrt-map"), "{}", stderr(&o));
}

#[test]
fn environment_sets_the_default_digits() {
    let o = Command::new(env!("CARGO_BIN_EXE_iterasym"))
        .args([
            "estimate",
            "--map",
            "logistic(p=1/2,x0=1/2)",
            "--format",
            "json",
        ])
        .env("ITERASYM_PRECISION_DEFAULT", "25")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["certified_digits"], 25);
}

#[test]
fn estimate_csv_parses_back() {
    let o = iterasym(&["estimate", "--map", "sylvester", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let mut rd = csv::Reader::from_reader(o.stdout.as_slice());
    let rows: Vec<iterasym_cli::output::EstimateCsvRow> =
        rd.deserialize().collect::<Result<_, _>>().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].name, "sqrtC");
    assert!(rows[0].value.starts_with("1.264084735305301"));
}

fn table_row<'a>(csv_text: &'a str, key: &str) -> Vec<&'a str> {
    csv_text
        .lines()
        .map(|l| l.split(',').collect::<Vec<_>>())
        .find(|cells| cells[0] == key)
        .unwrap_or_else(|| panic!("no row {key} in\n{csv_text}"))
}

#[test]
fn table_one_and_two() {
    let o = iterasym(&["table", "--paper-table", "1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t = stdout(&o);
    assert!(t.starts_with("p,C,certified_digits"));
    assert_eq!(t.lines().count(), 11);
    assert!(table_row(&t, "2/5")[1].starts_with("0.211947268934865"));
    assert_eq!(table_row(&t, "2/5")[3], "rigorous");
    assert_eq!(table_row(&t, "1*")[3], "two-depth-heuristic");

    let o = iterasym(&[
        "table",
        "--paper-table",
        "2",
        "--format",
        "csv",
        "--jobs",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t = stdout(&o);
    assert!(table_row(&t, "2/3")[1].starts_with("0.690744393761287"));
    assert_eq!(table_row(&t, "1*")[4], "doubling-log");
}

#[test]
fn table_rows_come_out_in_order_whatever_the_parallelism() {
    let one = stdout(&iterasym(&[
        "table",
        "--paper-table",
        "2",
        "--format",
        "csv",
        "--jobs",
        "1",
    ]));
    let many = stdout(&iterasym(&[
        "table",
        "--paper-table",
        "2",
        "--format",
        "csv",
        "--jobs",
        "8",
    ]));
    let keys = |t: &str| {
        t.lines()
            .map(|l| l.split(',').next().unwrap().to_string())
            .collect::<Vec<_>>()
    };
    assert_eq!(keys(&one), keys(&many));
}

#[test]
fn addendum_table_has_the_three_reciprocal_rows() {
    let o = iterasym(&["table", "--section", "addendum", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    let keys: Vec<&str> = rows
        .iter()
        .map(|r| r["constant"].as_str().unwrap())
        .collect();
    assert_eq!(keys, ["Λ", "c(2) via ζ", "c(3) via η"]);
    assert!(rows[1]["delta"].is_string());
    assert!(rows[0]["value"]
        .as_str()
        .unwrap()
        .starts_with("0.80108888490396"));
}

#[test]
fn table_selector_is_required() {
    let o = iterasym(&["table"]);
    assert_eq!(o.status.code(), Some(2));
    let o = iterasym(&["table", "--paper-table", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn expand_both_is_identical_for_sqrt_map() {
    let o = iterasym(&[
        "expand", "--map", "sqrt-map", "--order", "6", "--source", "both",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("IDENTICAL"), "{}", stdout(&o));
}

#[test]
fn expand_power_sum_two_ends_with_the_cubic_constant_term() {
    let o = iterasym(&["expand", "--map", "power-sum(q=2)", "--order", "5/2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let terms: Vec<&str> = out.lines().filter(|l| l.contains(" * ")).collect();
    assert_eq!(
        *terms.last().unwrap(),
        "(1/64*C^3 - 1/16*C^2 + 5/64*C - 11/384) * 1/k^(5/2)"
    );
}

#[test]
fn expand_without_fixture_is_labelled_derived() {
    let o = iterasym(&["expand", "--map", "reciprocal(s=3/2)", "--order", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("derived (no reference fixture)"));
    let o = iterasym(&[
        "expand",
        "--map",
        "reciprocal(s=3/2)",
        "--order",
        "3",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["provenance"], "derived");
    assert_eq!(v["series"]["terms"][0]["alpha"], "2/3");
}

#[test]
fn verify_templates_passes_and_lists_residual_orders() {
    let o = iterasym(&["verify", "--suite", "templates"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.lines().all(|l| !l.starts_with("FAIL")));
    assert!(out.contains("first residual level 7/2"));
}

#[test]
fn verify_published_values_at_twelve_digits() {
    let o = iterasym(&["verify", "--suite", "paper", "--tolerance-digits", "12"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert_eq!(
        out.lines().filter(|l| l.starts_with("PASS table")).count(),
        20
    );
}

#[test]
fn verify_with_a_corrupted_fixture_fails_and_names_the_term() {
    let dir = scratch("fixtures");
    let raw = iterasym_core::templates::FixtureSet::builtin()
        .raw("power-sum-q3.json")
        .unwrap()
        .replace("43/486", "44/486");
    std::fs::write(dir.join("power-sum-q3.json"), raw).unwrap();
    let o = iterasym(&[
        "verify",
        "--suite",
        "paper",
        "--fixtures",
        dir.to_str().unwrap(),
    ]);
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let fail = out.lines().find(|l| l.starts_with("FAIL")).unwrap();
    assert!(fail.contains("power-sum(q=3)"), "{fail}");
    assert!(
        fail.contains("stored coefficient of ln(k) k^-8/3"),
        "{fail}"
    );
}

#[test]
fn out_flag_writes_the_file() {
    let dir = scratch("out");
    let path = dir.join("t.csv");
    let o = iterasym(&[
        "table",
        "--section",
        "2",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_dir_all(&dir).ok();
    assert!(table_row(&text, "C(4/9)")[1].starts_with("1.968468820984954"));
}
