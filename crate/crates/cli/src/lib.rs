//! Report builders behind the `virasoro` binary. Every command produces a JSON
//! value with sorted keys and exact rational strings, plus an overall verdict.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};
use thiserror::Error;
use virasoro_core::exactalg::{bareiss_det, int, parse_rational, rat, Matrix, RatFn, Rational, Ring, ToJson, Var};
use virasoro_core::fock::{pbw_to_fock, verify_fock_relations, wc_quotient_check, RealizationTag};
use virasoro_core::geometry::{check_kirillov_consistency, cocycle_cohomology_check};
use virasoro_core::nomizu::{
    chat_operators, equivariance_checks, fiber_compare_with, realization_at, solve_family, verify_nomizu,
};
use virasoro_core::report::{RelationCheck, SuiteReport};
use virasoro_core::sl2verma::{verify_sl2, Sl2Context};
use virasoro_core::virasoro::{
    degeneracy_classify, discrete_series_point, eval_hc, gram_level, gram_level_symbolic, kac_compare_with,
    kac_product, unitarity_scan, verify_virasoro, KacVariant,
};

pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "VIRASORO_OUT_DIR";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] virasoro_core::Error),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    /// 2 for configuration problems, 1 when a computation refuses its input.
    pub fn exit_code(&self) -> i32 {
        use virasoro_core::Error as E;
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Core(E::Parse(_) | E::OutOfRange(_) | E::Truncation(_)) => 2,
            CliError::Core(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// A finished command: its payload and whether every asserted check passed.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub config: Value,
    pub result: Value,
    pub passed: bool,
}

impl Report {
    pub fn to_value(&self) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "config": self.config,
            "passed": self.passed,
            "result": self.result,
        })
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

/// A point `(h, c)` or the symbolic parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    Symbolic,
    At(Rational, Rational),
}

pub fn parse_q(s: &str) -> Result<Rational> {
    parse_rational(s).map_err(|e| CliError::Usage(e.to_string()))
}

fn q(x: &Rational) -> Value {
    x.to_json()
}

fn matrix_json<T: Ring + ToJson>(m: &Matrix<T>) -> Value {
    Value::Array(m.to_rows().iter().map(|r| Value::Array(r.iter().map(ToJson::to_json).collect())).collect())
}

fn suites_json(suites: &[SuiteReport]) -> Value {
    serde_json::to_value(suites).expect("reports serialize")
}

fn point_json(p: &Point) -> Value {
    match p {
        Point::Symbolic => json!("symbolic"),
        Point::At(h, c) => json!({ "h": q(h), "c": q(c) }),
    }
}

pub fn gram(level: u32, point: &Point, kac: KacVariant) -> Result<Report> {
    let symbolic_det = bareiss_det(&gram_level_symbolic(level))?;
    let cmp = kac_compare_with(level, kac, symbolic_det)?;
    let mut result = Map::new();
    result.insert("level".into(), json!(level));
    result.insert("kac_variant".into(), serde_json::to_value(kac).expect("variant serializes"));
    result.insert("matches".into(), json!(cmp.matches));
    result.insert("constant".into(), cmp.constant.as_ref().map_or(Value::Null, q));
    match point {
        Point::Symbolic => {
            result.insert("gram".into(), matrix_json(&gram_level_symbolic(level)));
            result.insert("determinant".into(), cmp.determinant.to_json());
            result.insert("phi_product".into(), cmp.phi_product.to_json());
            result.insert("witness".into(), cmp.witness.as_ref().map_or(Value::Null, ToJson::to_json));
        }
        Point::At(h, c) => {
            let g = gram_level(level, h, c);
            let det = bareiss_det(&g)?;
            let phi = eval_hc(&kac_product(level, kac), h, c);
            let value_matches = cmp.constant.as_ref().is_some_and(|a| a * &phi == det);
            result.insert("gram".into(), matrix_json(&g));
            result.insert("determinant".into(), q(&det));
            result.insert("phi_product".into(), q(&phi));
            result.insert("value_matches".into(), json!(value_matches));
        }
    }
    Ok(Report {
        command: "gram".into(),
        config: json!({ "level": level, "point": point_json(point), "kac": serde_json::to_value(kac).expect("variant serializes") }),
        result: Value::Object(result),
        passed: true,
    })
}

/// Bounds shared by the `verify` suites.
#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub point: Point,
    pub n: usize,
    pub max_mode: i64,
    pub trunc: usize,
    pub tag: RealizationTag,
    pub max_level: u32,
}

pub const SUITES: [&str; 6] = ["sl2", "virasoro", "fock", "m1", "geometry", "nomizu"];

fn numeric(p: &Point, what: &str) -> Result<(Rational, Rational)> {
    match p {
        Point::At(h, c) => Ok((h.clone(), c.clone())),
        Point::Symbolic => Err(CliError::Usage(format!("{what} needs numeric --h and --c"))),
    }
}

pub fn run_suite(suite: &str, cfg: &VerifyConfig) -> Result<Vec<SuiteReport>> {
    match suite {
        "sl2" => match &cfg.point {
            Point::Symbolic => Ok(verify_sl2(&Sl2Context::new(RatFn::var(Var::H), cfg.n), cfg.max_mode)?),
            Point::At(h, _) => Ok(verify_sl2(&Sl2Context::new(h.clone(), cfg.n), cfg.max_mode)?),
        },
        "virasoro" => {
            let (h, c) = numeric(&cfg.point, "verify virasoro")?;
            Ok(verify_virasoro(&h, &c, cfg.max_level)?)
        }
        "fock" => {
            let mut out = vec![verify_fock_relations(cfg.tag, cfg.max_mode, cfg.trunc)?];
            if let Point::At(h, c) = &cfg.point {
                let level = cfg.max_level.min(cfg.trunc as u32);
                let r = pbw_to_fock(level, h, c)?;
                let checks = vec![
                    RelationCheck::flag("PBW map intertwines", r.intertwines),
                    RelationCheck::flag("pairing pulls back to the Gram form", r.gram_matches),
                    RelationCheck::flag("PBW map is bijective", r.bijective),
                ];
                out.push(SuiteReport::new("pbw-to-fock", params(&[("level", json!(level)), ("h", q(h)), ("c", q(c))]), checks));
            }
            Ok(out)
        }
        "m1" => {
            let c = match &cfg.point {
                Point::At(_, c) => c.clone(),
                Point::Symbolic => int(2),
            };
            let mut out = vec![
                verify_fock_relations(RealizationTag::OEc, cfg.max_mode, cfg.trunc)?,
                verify_fock_relations(RealizationTag::Wc, cfg.max_mode, cfg.trunc)?,
            ];
            let wc = wc_quotient_check(&c, cfg.max_level)?;
            let mut checks = vec![RelationCheck::flag("quotient map is a module map", wc.module_map)];
            checks.push(RelationCheck::flag("quotient map is onto", wc.surjective));
            out.push(SuiteReport::new("wc-quotient", params(&[("c", q(&c)), ("max_level", json!(cfg.max_level))]), checks));
            Ok(out)
        }
        "geometry" => {
            let k = check_kirillov_consistency(cfg.max_mode, cfg.trunc)?;
            let co = cocycle_cohomology_check(cfg.max_mode)?;
            let checks = vec![
                RelationCheck::flag("normalization pair is unique", co.unique),
                RelationCheck::flag("residual vanishes", co.residual_zero),
                RelationCheck::flag("trivial cocycle is a coboundary", co.trivial_is_coboundary),
            ];
            Ok(vec![k, SuiteReport::new("cocycle", params(&[("max_mode", json!(cfg.max_mode))]), checks)])
        }
        "nomizu" => {
            let (h, c) = numeric(&cfg.point, "verify nomizu")?;
            Ok(verify_nomizu(&h, &c, cfg.trunc, cfg.max_mode)?)
        }
        other => Err(CliError::Usage(format!("unknown suite {other:?}; expected one of {}", SUITES.join(", ")))),
    }
}

fn params(kv: &[(&str, Value)]) -> Map<String, Value> {
    kv.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

pub fn verify(suite: &str, cfg: &VerifyConfig) -> Result<Report> {
    let config = json!({
        "suite": suite,
        "point": point_json(&cfg.point),
        "N": cfg.n,
        "max_mode": cfg.max_mode,
        "trunc": cfg.trunc,
        "tag": cfg.tag.name(),
        "max_level": cfg.max_level,
    });
    let suites = run_suite(suite, cfg)?;
    Ok(Report {
        command: "verify".into(),
        config,
        passed: suites.iter().all(|s| s.passed),
        result: json!({ "suites": suites_json(&suites) }),
    })
}

/// Points for `scan`: one point or a grid.
pub fn scan(points: &[(Rational, Rational)], max_level: u32, bound: i64, discrete: Option<(i64, i64, i64)>) -> Result<Report> {
    let mut rows = Vec::new();
    for (h, c) in points {
        let u = unitarity_scan(h, c, max_level);
        let class = degeneracy_classify(h, c, bound)?;
        let kernels: Vec<Value> = u.levels.iter().filter(|l| l.zero > 0).map(|l| json!({ "level": l.level, "dim": l.zero })).collect();
        rows.push(json!({
            "h": q(h),
            "c": q(c),
            "inertia": serde_json::to_value(&u.levels).expect("inertia serializes"),
            "verdict": serde_json::to_value(u.verdict).expect("verdict serializes"),
            "kernels": kernels,
            "classification": serde_json::to_value(&class).expect("classification serializes"),
        }));
    }
    let config = json!({
        "max_level": max_level,
        "bound": bound,
        "discrete": discrete.map(|(p, a, b)| json!({ "p": p, "a": a, "b": b })),
        "points": points.len(),
    });
    Ok(Report { command: "scan".into(), config, result: json!({ "points": rows }), passed: true })
}

pub fn discrete_point(p: i64, a: i64, b: i64) -> Result<(Rational, Rational)> {
    Ok(discrete_series_point(p, a, b)?)
}

/// `count` evenly spaced points from `lo` to `hi`.
pub fn grid(lo: &Rational, hi: &Rational, count: usize) -> Vec<Rational> {
    match count {
        0 => Vec::new(),
        1 => vec![lo.clone()],
        _ => (0..count).map(|i| lo + (hi - lo) * rat(i as i64, (count - 1) as i64)).collect(),
    }
}

pub fn nomizu(n: i64, h: &Rational, c: &Rational, trunc: usize) -> Result<Report> {
    let real = realization_at(RealizationTag::OE, h, c, trunc)?;
    let reach = n.abs().max(2) + 2;
    let sol = solve_family(&real, reach, c)?;
    // Below this truncation, uniqueness and the fiber match are reported, not asserted.
    let enough = trunc as i64 >= 2 * n.abs() + 2;
    let mut checks = Vec::new();
    let unique = sol.normalized && sol.mode_fiber_dimension.get(&n) == Some(&1);
    checks.push(RelationCheck { asserted: enough, ..RelationCheck::flag(format!("A_{n} is unique modulo the ĉ ideal"), unique) });
    let mut fiber = Value::Null;
    if sol.normalized {
        let a = sol.operator(n)?;
        for (name, m) in chat_operators(trunc)? {
            let diff = a.commutator(&m);
            if !diff.determined_degrees().is_empty() {
                checks.push(RelationCheck::vanishing(format!("[A_{n}, {name}] = 0"), &diff));
            }
        }
        if let Some(classes) = sol.fiber_classes.get(&n) {
            let f = fiber_compare_with(n, h, c, trunc, classes)?;
            checks.push(RelationCheck { asserted: enough && unique, ..RelationCheck::flag(format!("A_{n} on the fiber is L_{n} of V_h"), f.passed) });
            fiber = serde_json::to_value(&f).expect("comparison serializes");
        }
        let (eq, central) = equivariance_checks(&real, &sol, &[n], c)?;
        checks.extend(eq);
        if let Some(s) = central {
            fiber.as_object_mut().map(|o| o.insert("central_scalar".into(), q(&s)));
        }
    }
    let passed = checks.iter().all(RelationCheck::ok);
    let pinned = (-1..=1).contains(&n);
    let result = json!({
        "n": n,
        "pinned_on_fiber": pinned,
        "dimension": sol.mode_fiber_dimension.get(&n),
        "family_dimension": sol.fiber_dimension,
        "kernel_dimension": sol.kernel_dimension,
        "unknowns": sol.unknowns,
        "rank_profile": sol.rank_profile,
        "constraint_groups": sol.constraint_groups,
        "dropped": sol.dropped,
        "undetermined": sol.undetermined.iter().filter(|u| u.starts_with(&format!("A_{n} "))).collect::<Vec<_>>(),
        "inconsistent_at": sol.inconsistent_at,
        "operator": sol.operators.get(&n).map(|a| serde_json::to_value(a).expect("operator serializes")),
        "fiber": fiber,
        "checks": serde_json::to_value(&checks).expect("checks serialize"),
    });
    Ok(Report {
        command: "nomizu".into(),
        config: json!({ "n": n, "h": q(h), "c": q(c), "trunc": trunc }),
        result,
        passed,
    })
}

/// Every suite at small bounds, flattened to one line per identity with its
/// status: `pass`, `fail`, or `recorded` for deviations kept as data.
pub fn seed_report() -> Result<Report> {
    let one = int(1);
    let two = int(2);
    let runs: Vec<(&str, VerifyConfig)> = vec![
        ("sl2", VerifyConfig { point: Point::At(one.clone(), two.clone()), n: 8, max_mode: 3, trunc: 5, tag: RealizationTag::OE, max_level: 4 }),
        ("virasoro", VerifyConfig { point: Point::At(one.clone(), two.clone()), n: 8, max_mode: 3, trunc: 5, tag: RealizationTag::OE, max_level: 4 }),
        ("fock", VerifyConfig { point: Point::At(one.clone(), two.clone()), n: 8, max_mode: 2, trunc: 5, tag: RealizationTag::OE, max_level: 3 }),
        ("fock", VerifyConfig { point: Point::Symbolic, n: 8, max_mode: 1, trunc: 4, tag: RealizationTag::FE, max_level: 3 }),
        ("m1", VerifyConfig { point: Point::At(one.clone(), two.clone()), n: 8, max_mode: 1, trunc: 4, tag: RealizationTag::OEc, max_level: 6 }),
        ("geometry", VerifyConfig { point: Point::Symbolic, n: 8, max_mode: 3, trunc: 6, tag: RealizationTag::OE, max_level: 4 }),
        ("nomizu", VerifyConfig { point: Point::At(one, two), n: 8, max_mode: 2, trunc: 5, tag: RealizationTag::OE, max_level: 4 }),
    ];
    let mut entries = Vec::new();
    let mut passed = true;
    for (suite, cfg) in &runs {
        for r in run_suite(suite, cfg)? {
            passed &= r.passed;
            for c in &r.checks {
                let status = match (c.asserted, c.passed) {
                    (true, true) => "pass",
                    (true, false) => "fail",
                    (false, _) => "recorded",
                };
                entries.push(json!({ "suite": r.suite, "relation": c.relation, "status": status, "holds": c.passed }));
            }
        }
    }
    let deviations = entries.iter().filter(|e| e["status"] == "recorded" && e["holds"] == false).count();
    Ok(Report {
        command: "seed-report".into(),
        config: json!({ "suites": runs.iter().map(|(s, _)| *s).collect::<Vec<_>>() }),
        result: json!({ "identities": entries, "recorded_deviations": deviations }),
        passed,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Pretty => "txt",
        }
    }
}

pub fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(v).expect("value serializes") + "\n",
        Format::Csv => render_csv(v),
        Format::Pretty => {
            let mut out = String::new();
            pretty(v, 0, &mut out);
            out
        }
    }
}

fn leaf(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(path: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                flatten(&p, x, out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{path}[{i}]"), x, out);
            }
        }
        other => out.push((path.to_string(), leaf(other))),
    }
}

/// One `path,value` row per scalar; matrices come out row-major as `m[i][j]`.
/// The manifest rows at the top name the schema and the command.
fn render_csv(v: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["path", "value"]).expect("in-memory write");
    let manifest = ["schema_version", "command", "passed"];
    for key in manifest {
        if let Some((k, x)) = rows.iter().find(|(k, _)| k == key) {
            w.write_record([k, x]).expect("in-memory write");
        }
    }
    for (k, x) in rows.iter().filter(|(k, _)| !manifest.contains(&k.as_str())) {
        w.write_record([k, x]).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

fn is_matrix(v: &Value) -> bool {
    matches!(v, Value::Array(rows) if !rows.is_empty() && rows.iter().all(|r| matches!(r, Value::Array(xs) if xs.iter().all(|x| !x.is_array() && !x.is_object()))))
}

fn pretty(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match x {
                    Value::Object(_) => {
                        let _ = writeln!(out, "{pad}{k}:");
                        pretty(x, indent + 1, out);
                    }
                    Value::Array(a) if is_matrix(x) => {
                        let _ = writeln!(out, "{pad}{k}:");
                        for r in a {
                            let cells: Vec<String> = r.as_array().expect("matrix row").iter().map(leaf).collect();
                            let _ = writeln!(out, "{pad}  [{}]", cells.join(", "));
                        }
                    }
                    Value::Array(a) if a.iter().any(|y| y.is_object() || y.is_array()) => {
                        let _ = writeln!(out, "{pad}{k}:");
                        for y in a {
                            let _ = writeln!(out, "{pad}  -");
                            pretty(y, indent + 2, out);
                        }
                    }
                    Value::Array(a) => {
                        let _ = writeln!(out, "{pad}{k}: [{}]", a.iter().map(leaf).collect::<Vec<_>>().join(", "));
                    }
                    other => {
                        let _ = writeln!(out, "{pad}{k}: {}", leaf(other));
                    }
                }
            }
        }
        Value::Array(a) => {
            for y in a {
                pretty(y, indent, out);
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", leaf(other));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        parse_q(s).unwrap()
    }

    #[test]
    fn gram_level_one_at_minimal_point() {
        let rep = gram(1, &Point::At(r("1/16"), r("1/2")), KacVariant::Corrected).unwrap();
        assert_eq!(rep.result["determinant"], "1/8");
        assert_eq!(rep.result["value_matches"], true);
    }

    #[test]
    fn gram_level_zero() {
        let rep = gram(0, &Point::At(r("1"), r("2")), KacVariant::Corrected).unwrap();
        assert_eq!(rep.result["gram"], json!([["1"]]));
        assert_eq!(rep.result["determinant"], "1");
    }

    #[test]
    fn csv_is_row_major() {
        let v = json!({ "schema_version": 1, "m": [["1", "2"], ["3", "4"]] });
        let out = render(&v, Format::Csv);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "path,value");
        assert_eq!(lines[1], "schema_version,1");
        assert_eq!(&lines[2..], ["m[0][0],1", "m[0][1],2", "m[1][0],3", "m[1][1],4"]);
    }

    #[test]
    fn pretty_prints_matrices_by_row() {
        let out = render(&json!({ "g": [["1", "0"], ["0", "2"]] }), Format::Pretty);
        assert_eq!(out, "g:\n  [1, 0]\n  [0, 2]\n");
    }

    #[test]
    fn grid_endpoints() {
        let g = grid(&r("0"), &r("1"), 3);
        assert_eq!(g, vec![r("0"), r("1/2"), r("1")]);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
        assert_eq!(CliError::Core(virasoro_core::Error::QrPole).exit_code(), 1);
    }
}
