use iterasym_core::exact::ratio;
use iterasym_web::*;
use serde_json::Value;

fn parse(s: Result<String, String>) -> Value {
    serde_json::from_str(&s.unwrap()).unwrap()
}

#[test]
fn estimate_reports_the_table_value() {
    let v = parse(estimate_json("logistic(p=1/2, x0=1/2)", 15));
    assert!(v["value"]
        .as_str()
        .unwrap()
        .starts_with("0.196453426377889"));
    assert_eq!(v["certification"], "rigorous");
    assert!(estimate_json("logistic(p=2, x0=1/2)", 15)
        .unwrap_err()
        .contains("0<p≤1"));
    assert!(estimate_json("sylvester", 0).is_err());
}

#[test]
fn grid_is_exact() {
    let g = grid("2/5", "1/2", 5).unwrap();
    assert_eq!(g[1], ratio(17, 40));
    assert_eq!(g[4], ratio(1, 2));
    assert!(grid("1/2", "1/2", 3).is_err());
    assert!(grid("0", "1", 1).is_err());
}

#[test]
fn scan_marks_the_smallest_constant() {
    let v = parse(scan_json("sqrt-map", "2/5", "1/2", 5, 10));
    let pts = v["points"].as_array().unwrap();
    assert_eq!(pts.len(), 5);
    let i = v["argmin"].as_u64().unwrap() as usize;
    assert_eq!(pts[i]["x0"], "9/20");
    assert!((pts[i]["x"].as_f64().unwrap() - 0.45).abs() < 1e-15);
}

#[test]
fn expansion_uses_the_fixture_then_matching() {
    let v = parse(expand_json("power-sum(q=2)", "5/2"));
    assert!(v["provenance"].as_str().unwrap().starts_with("reference"));
    assert!(v["verify"].as_str().unwrap().starts_with("PASS"));
    let v = parse(expand_json("cos-map", "7/2"));
    assert_eq!(v["provenance"], "derived (no reference fixture)");
    assert!(v["text"].as_str().unwrap().contains("ln(k)"));
}
