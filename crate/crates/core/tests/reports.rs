use serde_json::Value;
use virasoro_core::exactalg::{int, rat, Rational};
use virasoro_core::fock::{verify_fock_relations, RealizationTag};
use virasoro_core::geometry::check_kirillov_consistency;
use virasoro_core::nomizu::{fiber_compare, solve_local_family_vir};
use virasoro_core::sl2verma::{verify_sl2, Sl2Context};
use virasoro_core::virasoro::verify_virasoro;

fn no_floats(v: &Value) -> bool {
    match v {
        Value::Number(n) => n.is_i64() || n.is_u64(),
        Value::Array(a) => a.iter().all(no_floats),
        Value::Object(m) => m.values().all(no_floats),
        _ => true,
    }
}

#[test]
fn reports_are_exact_json() {
    let mut reports = verify_sl2(&Sl2Context::new(rat(5, 2), 8), 3).unwrap();
    reports.extend(verify_virasoro(&rat(1, 3), &rat(-2, 5), 3).unwrap());
    reports.push(verify_fock_relations(RealizationTag::FE, 1, 4).unwrap());
    reports.push(check_kirillov_consistency(2, 5).unwrap());
    for r in &reports {
        let v = serde_json::to_value(r).unwrap();
        assert!(no_floats(&v), "{}", r.suite);
        assert_eq!(v["passed"], r.passed);
    }
    // The recorded printed-FE check fails with a rational witness.
    let fe = serde_json::to_value(&reports[reports.len() - 2]).unwrap();
    let printed = fe["checks"].as_array().unwrap().iter().find(|c| c["asserted"] == false).unwrap();
    assert_eq!(printed["passed"], false);
}

#[test]
fn fiber_identification_at_another_point() {
    let (h, c): (Rational, Rational) = (rat(5, 2), rat(1, 3));
    for n in [-2, 2] {
        let f = fiber_compare(n, &h, &c, 5).unwrap();
        assert!(f.passed, "{f:?}");
    }
    let sol = solve_local_family_vir(2, &h, &c, 5, RealizationTag::OE).unwrap();
    assert!(sol.unique());
    assert!(sol.inconsistent_at.is_none());
    assert!(solve_local_family_vir(2, &int(1), &int(2), 5, RealizationTag::Wc).is_err());
}
