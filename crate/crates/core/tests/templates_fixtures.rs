use iterasym_core::exact::{fmt_rational, int, ratio, Rational};
use iterasym_core::maps::{make_map, RecurrenceMap};
use iterasym_core::series::{AsymptoticSeries, CoeffPoly, TermKey};
use iterasym_core::templates::*;

fn m(s: &str) -> RecurrenceMap {
    make_map(s.parse().unwrap()).unwrap()
}

fn poly(c: &[Rational]) -> CoeffPoly {
    CoeffPoly::from_coeffs(c.to_vec())
}

const POWER_SUM: [(&str, i64, i64, i64, i64); 3] = [
    // (spec, order num/den, first residual num/den)
    ("power-sum(q=2)", 5, 2, 7, 2),
    ("power-sum(q=3)", 8, 3, 11, 3),
    ("power-sum(q=3/2)", 4, 3, 7, 3),
];

#[test]
fn every_stored_template_passes_residual_verification() {
    let t = template_for(&m("sqrt-map(x0=1/2)")).unwrap();
    assert_eq!(t.order, int(6));
    let r = verify_template(&t, &int(6)).unwrap();
    assert!(r.pass, "{r}");
    assert_eq!(r.first_residual_level, Some(int(7)));

    for (spec, on, od, rn, rd) in POWER_SUM {
        let t = template_for(&m(spec)).unwrap();
        let r = verify_template(&t, &ratio(on, od)).unwrap();
        assert!(r.pass, "{spec}: {r}");
        assert_eq!(r.first_residual_level, Some(ratio(rn, rd)), "{spec}");
    }
}

#[test]
fn matching_rederives_every_stored_template_exactly() {
    let t = template_for(&m("sqrt-map(x0=1/2)")).unwrap();
    let d = derive_expansion(&m("sqrt-map(x0=1/2)"), &int(6)).unwrap();
    assert_eq!(t.series, d.series);
    for (spec, on, od, _, _) in POWER_SUM {
        let t = template_for(&m(spec)).unwrap();
        let d = derive_expansion(&m(spec), &ratio(on, od)).unwrap();
        assert_eq!(t.series, d.series, "{spec}");
    }
}

#[test]
fn stored_coefficients_spot_checks() {
    let s = template_for(&m("sqrt-map(x0=1/2)")).unwrap().series;
    assert_eq!(s.get(&int(3), 0), poly(&[int(0), int(-8)]));
    assert_eq!(
        s.get(&int(6), 0),
        poly(&[ratio(731, 12), ratio(-345, 2), int(188), int(-94), int(20)])
    );
    let q2 = template_for(&m("power-sum(q=2)")).unwrap().series;
    assert_eq!(q2.get(&ratio(3, 2), 2), poly(&[ratio(-1, 64)]));
    assert_eq!(q2.get(&ratio(5, 2), 3), poly(&[ratio(1, 512)]));
    assert_eq!(
        q2.get(&ratio(5, 2), 0),
        poly(&[ratio(-11, 384), ratio(5, 64), ratio(-1, 16), ratio(1, 64)])
    );
    let q3 = template_for(&m("power-sum(q=3)")).unwrap().series;
    assert_eq!(
        q3.get(&ratio(8, 3), 0),
        poly(&[ratio(-1, 18), ratio(43, 486), ratio(-7, 162), ratio(5, 729)])
    );
}

#[test]
fn corrupted_coefficient_fails_at_its_order() {
    let mut t = template_for(&m("sqrt-map(x0=1/2)")).unwrap();
    let key = TermKey::new(int(3), 0);
    let terms = t.series.terms().map(|(k, c)| {
        let c = if *k == key {
            poly(&[int(0), int(-7)])
        } else {
            c.clone()
        };
        (k.clone(), c)
    });
    t.series = AsymptoticSeries::from_terms(terms.collect::<Vec<_>>(), int(6));
    let r = verify_template(&t, &int(6)).unwrap();
    assert!(!r.pass);
    // a shift of C alone is a solution, so the recurrence first breaks one level up;
    // comparison with a fresh matching pins the corrupted k^-3 coefficient
    assert_eq!(r.first_residual_level, Some(int(4)));
    let su = r.suspect.clone().expect("localized");
    assert_eq!(su.key, key);
    assert_eq!(su.stored, poly(&[int(0), int(-7)]));
    assert_eq!(su.matched, poly(&[int(0), int(-8)]));
    let text = r.to_string();
    assert!(text.starts_with("FAIL") && text.contains("k^-3"), "{text}");
}

#[test]
fn corrupted_fixture_file_is_detected() {
    let dir = std::env::temp_dir().join(format!("iterasym-fixture-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let raw = FixtureSet::builtin()
        .raw("power-sum-q3.json")
        .unwrap()
        .replace("43/486", "44/486");
    std::fs::write(dir.join("power-sum-q3.json"), raw).unwrap();
    let set = FixtureSet::with_overrides(&dir).unwrap();
    let t = set.template_for(&m("power-sum(q=3)")).unwrap();
    let r = verify_template(&t, &ratio(8, 3)).unwrap();
    std::fs::remove_dir_all(&dir).ok();
    assert!(!r.pass, "{r}");
    assert_eq!(r.first_residual_level, Some(ratio(8, 3)));
    let su = r.suspect.expect("localized");
    assert_eq!(su.key, TermKey::new(ratio(8, 3), 1));
    assert_eq!(su.stored.coeff(0), ratio(44, 486));
}

#[test]
fn t_and_p_tables_have_the_printed_shapes() {
    let tabs = FixtureSet::builtin().sqrt_map_tables().unwrap();
    for m in 2..=6u32 {
        let p = tabs.p_poly(m).unwrap();
        let t = &tabs.t[&m];
        assert_eq!(p.degree(), Some(m as usize), "P_{m}");
        assert_eq!(t.degree(), Some(m as usize - 1), "T_{m}");
    }
    assert_eq!(tabs.t[&2], poly(&[int(-1), ratio(3, 2)]));
    assert_eq!(tabs.p_poly(6).unwrap().coeff(6), ratio(7, 64));
    assert_eq!(tabs.p_poly(6).unwrap().coeff(0), ratio(3091081, 19200));
    assert_eq!(tabs.t[&6].coeff(5), ratio(3, 10));
    assert_eq!(tabs.p_poly(1).unwrap(), CoeffPoly::symbol());
}

#[test]
fn p_form_agrees_with_the_matched_expansion_through_order_eight() {
    let tabs = FixtureSet::builtin().sqrt_map_tables().unwrap();
    let p = tabs.p_form_series(6);
    let d = derive_expansion(&m("sqrt-map(x0=1/2)"), &int(8)).unwrap();
    assert!(same_through(&p, &d.series, &int(8)));
}

#[test]
fn general_q_display_specializes_to_each_fixed_q() {
    let g = FixtureSet::builtin().power_sum_general().unwrap();
    for q in [int(2), int(3), ratio(3, 2)] {
        let sp = g.specialize(&q);
        let t = template_for(&m(&format!("power-sum(q={})", fmt_rational(&q)))).unwrap();
        assert!(same_through(&sp, &t.series, sp.truncation()), "q={q}");
    }
}

#[test]
fn y_form_raised_to_one_over_q_gives_the_x_form() {
    for q in [int(2), int(3), ratio(3, 2)] {
        let x = power_sum_coeffs(&q).x_form().unwrap();
        let t = template_for(&m(&format!("power-sum(q={})", fmt_rational(&q)))).unwrap();
        let through = int(2) - q.recip();
        assert!(same_through(&x, &t.series, &through), "q={q}");
    }
}

#[test]
fn power_sum_y_coefficients() {
    let c = power_sum_coeffs(&int(2));
    assert_eq!(
        (c.alpha.clone(), c.beta.clone(), c.gamma.clone()),
        (int(2), ratio(1, 2), ratio(1, 8))
    );
    assert_eq!(c.delta, poly(&[ratio(-1, 8), ratio(1, 4)]));
    let c = power_sum_coeffs(&int(3));
    assert_eq!((c.beta.clone(), c.gamma.clone()), (int(1), ratio(1, 3)));
    assert_eq!(c.delta, poly(&[ratio(-5, 18), ratio(1, 3)]));
    let c = power_sum_coeffs(&ratio(3, 2));
    assert_eq!(
        (c.beta.clone(), c.gamma.clone()),
        (ratio(1, 4), ratio(1, 24))
    );
    assert_eq!(c.delta, poly(&[ratio(-1, 18), ratio(1, 6)]));
}

#[test]
fn reciprocal_expansions_reproduce_the_stored_limits() {
    for l in FixtureSet::builtin().reciprocal_limits().unwrap() {
        let map = m(&format!("reciprocal(s={})", fmt_rational(&l.s)));
        let order = (&l.s + int(4)) / &l.s;
        let d = derive_expansion(&map, &order).unwrap();
        assert!(
            same_through(&d.series, &l.as_series(), &l.limit_alpha),
            "s={}",
            l.s
        );
        let r = verify_template(&d, &order).unwrap();
        assert!(r.pass, "s={}: {r}", l.s);
    }
}

#[test]
fn reader_map_expansions_pass_verification() {
    for spec in [
        "half-cubic(x0=1/2)",
        "cos-map(x0=1/2)",
        "gauss-exp(x0=1/2)",
        "logistic(p=1, x0=1/2)",
    ] {
        let d = derive_expansion(&m(spec), &ratio(11, 2)).unwrap();
        let r = verify_template(&d, d.series.truncation()).unwrap();
        assert!(r.pass, "{spec}: {r}");
    }
}

#[test]
fn logistic_unit_expansion_starts_with_the_defining_terms() {
    let d = derive_expansion(&m("logistic(p=1, x0=1/2)"), &int(6)).unwrap();
    assert_eq!(d.series.get(&int(1), 0), poly(&[int(1)]));
    assert_eq!(d.series.get(&int(2), 1), poly(&[int(-1)]));
    assert_eq!(d.series.get(&int(2), 0), poly(&[int(0), int(-1)]));
}
