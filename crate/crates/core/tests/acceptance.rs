//! End-to-end acceptance run. Each criterion prints one PASS/FAIL line; the
//! run exits nonzero when a criterion fails that is not listed in `KNOWN_SHORTFALLS`.

use std::time::Instant;

use virasoro_core::exactalg::{int, rat, RatFn, Var};
use virasoro_core::fock::{verify_fock_relations, wc_quotient_check, RealizationTag};
use virasoro_core::geometry::{
    check_kirillov_consistency, cocycle_cohomology_check, gf_cocycle, kirillov_variation, symbolic_s1_jet, CocycleForm, Variant,
};
use virasoro_core::nomizu::{fiber_compare, solve_local_family_vir, solve_tensor_family_sl2, verify_equivariance};
use virasoro_core::partitions::partition_count_min_part;
use virasoro_core::sl2verma::{check_lb_relations, check_qr_relations, Sl2Context};
use virasoro_core::virasoro::{
    discrete_series_point, gram_kernel, is_annihilated, kac_det_compare, unitarity_scan, Definiteness, KacVariant,
};

/// Criteria that cannot be met as stated; see the README.
const KNOWN_SHORTFALLS: &[&str] = &["AC9"];

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn ac1() -> Outcome {
    let mut failed = Vec::new();
    for tag in [RealizationTag::FE, RealizationTag::OE] {
        let r = verify_fock_relations(tag, 3, 8).expect("suite runs");
        if !r.passed {
            failed.push(format!("{}: {:?}", tag.name(), r.failures().iter().map(|c| &c.relation).collect::<Vec<_>>()));
        }
    }
    outcome(failed.is_empty(), if failed.is_empty() { "FE and OE, |n|,|m| ≤ 3, truncation 8".into() } else { failed.join("; ") })
}

fn ac2() -> Outcome {
    let mut ok = true;
    let mut consts = Vec::new();
    for n in 1..=4 {
        let k = kac_det_compare(n, KacVariant::Corrected).expect("comparison runs");
        let a = k.constant.clone();
        ok &= k.matches && a.as_ref().is_some_and(|a| *a > int(0));
        consts.push(a.map_or("-".into(), |a| a.to_string()));
    }
    ok &= consts[0] == "2";
    let printed = kac_det_compare(2, KacVariant::AsPrinted).expect("comparison runs");
    ok &= !printed.matches;
    outcome(ok, format!("A_1..A_4 = {}; as-printed level 2 matches = {}", consts.join(", "), printed.matches))
}

fn ac3() -> Outcome {
    let (h, c) = discrete_series_point(3, 2, 1).expect("valid parameters");
    let point = h == rat(1, 16) && c == rat(1, 2);
    let kernel = gram_kernel(&h, &c, 2);
    let annihilated = kernel.iter().all(|v| is_annihilated(&h, &c, v));
    outcome(point && kernel.len() == 1 && annihilated, format!("(h,c) = ({h}, {c}); level-2 kernel dimension {}", kernel.len()))
}

fn ac4() -> Outcome {
    let pos = unitarity_scan(&int(1), &int(2), 5);
    let pos_ok = pos.verdict == Definiteness::PositiveDefinite && pos.levels.iter().all(|l| l.positive == l.dim && l.negative == 0 && l.zero == 0);
    let neg = unitarity_scan(&int(-1), &int(2), 1);
    let neg_ok = neg.levels[1].negative > 0;
    outcome(pos_ok && neg_ok && neg.verdict == Definiteness::Indefinite, format!("(1,2): {:?}; (-1,2) level 1: {:?}", pos.verdict, neg.levels[1]))
}

fn ac5() -> Outcome {
    let mut ok = true;
    for h in [rat(1, 3), int(1), rat(5, 2)] {
        ok &= check_lb_relations(&Sl2Context::new(h, 18)).is_ok_and(|r| r.passed);
    }
    let pole = check_lb_relations(&Sl2Context::new(rat(1, 2), 18));
    ok &= pole.is_err();
    outcome(ok, format!("h ∈ {{1/3, 1, 5/2}} on degrees ≤ 18; h = 1/2: {}", pole.err().map_or("no error".into(), |e| e.to_string())))
}

fn ac6() -> Outcome {
    let ctx = Sl2Context::new(RatFn::var(Var::H), 10);
    let rel = check_qr_relations(&ctx, 4).expect("suite runs");
    let mut dims = Vec::new();
    let mut ok = rel.passed;
    for n in [-4, -2, 2, 3, 4] {
        let f = solve_tensor_family_sl2(n, &ctx).expect("solver runs");
        ok &= f.passed;
        dims.push(f.solution.fiber_dimension);
    }
    outcome(ok, format!("relations at N = 10, symbolic h; solver dimensions {dims:?}"))
}

fn ac7() -> Outcome {
    let r = check_kirillov_consistency(4, 8).expect("suite runs");
    let mut s1 = true;
    for k in 1..=4 {
        let v = kirillov_variation(k, &symbolic_s1_jet(8), Variant::S1).expect("variation runs");
        s1 &= v.coefficient(2).is_ok_and(|x| x.is_zero());
    }
    outcome(r.passed && s1, format!("modes 1..4, truncation 8; S1 kills the z² coefficient: {s1}"))
}

fn ac8() -> Outcome {
    let r = cocycle_cohomology_check(5).expect("check runs");
    let mut values = true;
    for j in -5..=5i64 {
        let expect = rat(j * j * j - j, 12);
        values &= gf_cocycle(j, -j, CocycleForm::Modified).to_string() == expect.to_string();
    }
    outcome(r.unique && r.residual_zero && values, format!("unique {}, residual zero {}, modified values {values}", r.unique, r.residual_zero))
}

fn ac9() -> Outcome {
    let (h, c) = (int(1), int(2));
    let mut unique = true;
    let mut kernel_dims = Vec::new();
    for n in [-3, -2, 2, 3] {
        let s = solve_local_family_vir(n, &h, &c, 6, RealizationTag::OE).expect("solver runs");
        unique &= s.unique() && s.mode_fiber_dimension[&n] == 1;
        kernel_dims.push(s.kernel_dimension);
    }
    let mut scalar_one = true;
    for n in [-3, -2, 2, 3] {
        scalar_one &= fiber_compare(n, &h, &c, 6).is_ok_and(|f| f.passed);
    }
    let eq = verify_equivariance(3, &h, &c, 6).expect("suite runs");
    let strict: Vec<&str> = eq.checks.iter().filter(|c| !c.passed).map(|c| c.relation.as_str()).collect();
    outcome(
        unique && scalar_one && eq.passed && strict.is_empty(),
        format!(
            "dimension 1 modulo the ĉ ideal: {unique} (raw kernel dimensions {kernel_dims:?}); fiber scalar 1: {scalar_one}; \
             asserted equivariance: {}; failing for all X: {strict:?}",
            eq.passed
        ),
    )
}

fn ac10() -> Outcome {
    let expected = [1usize, 0, 1, 1, 2, 2, 4];
    let independent: Vec<usize> = (0..=6).map(|n| partition_count_min_part(n, 2) as usize).collect();
    let mut ok = independent == expected;
    for c in [rat(1, 2), int(2)] {
        let r = wc_quotient_check(&c, 6).expect("check runs");
        let dims: Vec<usize> = r.levels.iter().map(|l| l.wc_dim).collect();
        ok &= dims == expected && r.module_map && r.passed;
    }
    outcome(ok, format!("dimensions {independent:?} at c ∈ {{1/2, 2}}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("AC1", ac1),
        ("AC2", ac2),
        ("AC3", ac3),
        ("AC4", ac4),
        ("AC5", ac5),
        ("AC6", ac6),
        ("AC7", ac7),
        ("AC8", ac8),
        ("AC9", ac9),
        ("AC10", ac10),
    ];
    let mut unexpected = Vec::new();
    for (name, f) in criteria {
        let t = Instant::now();
        let o = f();
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        println!("{name} {verdict} ({:.1}s) {}", t.elapsed().as_secs_f64(), o.detail);
        if !o.passed && !KNOWN_SHORTFALLS.contains(&name) {
            unexpected.push(name);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("failed: {unexpected:?}");
        std::process::exit(1);
    }
}
