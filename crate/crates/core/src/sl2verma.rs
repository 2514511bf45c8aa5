//! The sl(2) Verma module `V_h` realized on `C[z]` truncated at degree `N`.
//!
//! `z^n` has degree `n`. The generators are `l_{-1} = z`, `l_0 = z∂ + h`,
//! `l_1 = z∂² + 2h∂`; every operator here is diagonal in the monomial basis up
//! to its degree shift, so each block is a single scalar. Rational functions
//! of `ξ = z∂` are evaluated on eigenvalues: `ξ z^n = n z^n`.
//!
//! Orientation: `L_n` shifts degree by `-n`, which gives `[l_0, L_n] = -n L_n`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{Field, Matrix, ToJson};
use crate::graded::GradedMap;
use crate::params;
use crate::report::{RelationCheck, SuiteReport};

#[derive(Clone, Debug)]
pub struct Sl2Context<T> {
    h: T,
    n: usize,
    dims: Arc<Vec<usize>>,
}

fn falling(n: usize, k: usize) -> i64 {
    (0..k).map(|j| n as i64 - j as i64).product()
}

impl<T: Field + ToJson> Sl2Context<T> {
    pub fn new(h: T, truncation: usize) -> Self {
        Sl2Context { h, n: truncation, dims: Arc::new(vec![1; truncation + 1]) }
    }

    pub fn h(&self) -> &T {
        &self.h
    }

    pub fn truncation(&self) -> usize {
        self.n
    }

    pub fn dims(&self) -> Arc<Vec<usize>> {
        self.dims.clone()
    }

    /// `2h + m ≠ 0` for `0 ≤ m ≤ N`.
    pub fn check_nondegenerate(&self) -> Result<()> {
        for m in 0..=self.n {
            if self.two_h_plus(m).is_zero() {
                return Err(Error::Degenerate(format!("2h + {m} = 0 with h = {}", self.h)));
            }
        }
        Ok(())
    }

    fn two_h_plus(&self, m: usize) -> T {
        self.h.scaled(&crate::exactalg::int(2)).plus(&T::from_int(m as i64))
    }

    /// Operator with one scalar per source degree.
    pub fn diagonal_map(&self, shift: i64, f: impl Fn(usize) -> T) -> GradedMap<T> {
        GradedMap::build(self.dims(), shift, |n| Some(Matrix::scalar(1, f(n))))
    }
}

/// `l_i` for `i ∈ {-1, 0, 1}`.
pub fn sl2_generator<T: Field + ToJson>(i: i32, ctx: &Sl2Context<T>) -> Result<GradedMap<T>> {
    let h = ctx.h.clone();
    match i {
        -1 => Ok(ctx.diagonal_map(1, |_| T::one())),
        0 => Ok(ctx.diagonal_map(0, |n| T::from_int(n as i64).plus(&h))),
        1 => Ok(ctx.diagonal_map(-1, |n| {
            T::from_int(n as i64).times(&T::from_int(n as i64 - 1).plus(&h.scaled(&crate::exactalg::int(2))))
        })),
        _ => Err(Error::OutOfRange(format!("sl2 generator index {i}"))),
    }
}

/// `D = ∂` and `F = z (ξ + 2h)^{-1}`.
pub fn lb_operators<T: Field + ToJson>(ctx: &Sl2Context<T>) -> Result<(GradedMap<T>, GradedMap<T>)> {
    ctx.check_nondegenerate()?;
    let d = ctx.diagonal_map(-1, |n| T::from_int(n as i64));
    let f = ctx.diagonal_map(1, |n| ctx.two_h_plus(n).inv().expect("nondegenerate"));
    Ok((d, f))
}

/// `q_R = 1/(2h - 1)`.
pub fn q_r<T: Field>(h: &T) -> Result<T> {
    h.scaled(&crate::exactalg::int(2)).minus(&T::one()).inv().ok_or(Error::QrPole)
}

fn params_of<T: Field + ToJson>(ctx: &Sl2Context<T>) -> serde_json::Map<String, serde_json::Value> {
    params! { "h" => ctx.h.to_json(), "truncation" => ctx.n }
}

/// Both Lobachevskii–Berezin relations, plus the two index readings of the
/// `[l_{±1}, F]` identities.
pub fn check_lb_relations<T: Field + ToJson>(ctx: &Sl2Context<T>) -> Result<SuiteReport> {
    let q = q_r(&ctx.h)?;
    let (d, f) = lb_operators(ctx)?;
    let one = GradedMap::identity(ctx.dims());
    let df = d.compose(&f);
    let fd = f.compose(&d);
    let lhs = d.commutator(&f);
    let rhs = one.sub(&df).compose(&one.sub(&fd)).scale(&q);
    let lm1 = sl2_generator(-1, ctx)?;
    let l1 = sl2_generator(1, ctx)?;
    let checks = vec![
        RelationCheck::vanishing("[FD,DF] = 0", &fd.commutator(&df)),
        RelationCheck::vanishing("[D,F] = q_R(1-DF)(1-FD)", &lhs.sub(&rhs)),
        RelationCheck::vanishing("[l_1,F] = 1", &l1.commutator(&f).sub(&one)),
        RelationCheck::vanishing("[l_-1,F] = F^2", &lm1.commutator(&f).sub(&f.compose(&f))),
        RelationCheck::recorded("[l_-1,F] = 1 (as printed)", &lm1.commutator(&f).sub(&GradedMap::zero(ctx.dims(), 2))),
    ];
    let mut p = params_of(ctx);
    p.insert("q_R".into(), q.to_json());
    Ok(SuiteReport::new("lobachevskii-berezin", p, checks))
}

/// The q_R-conformal symmetry `L_n`.
///
/// `L_k = (ξ + (k+1)h) ∂^k` for `k ≥ 0` and
/// `L_{-k} = z^k (ξ + (k+1)h) / ((ξ+2h)(ξ+2h+1)⋯(ξ+2h+k-1))` for `k ≥ 1`.
pub fn qr_symmetry<T: Field + ToJson>(n: i64, ctx: &Sl2Context<T>) -> Result<GradedMap<T>> {
    let h = ctx.h.clone();
    if n >= 0 {
        let k = n as usize;
        let kh = h.times(&T::from_int(n + 1));
        return Ok(ctx.diagonal_map(-n, |m| {
            T::from_int(falling(m, k)).times(&T::from_int(m as i64 - n).plus(&kh))
        }));
    }
    ctx.check_nondegenerate()?;
    let k = (-n) as usize;
    let kh = h.times(&T::from_int(k as i64 + 1));
    Ok(ctx.diagonal_map(k as i64, |m| {
        let num = T::from_int(m as i64).plus(&kh);
        let den = (0..k).fold(T::one(), |acc, j| acc.times(&ctx.two_h_plus(m + j)));
        num.times(&den.inv().expect("nondegenerate"))
    }))
}

/// `[L_a, L_b] - (a - b) L_{a+b}`.
pub fn witt_defect<T: Field + ToJson>(a: i64, b: i64, ctx: &Sl2Context<T>) -> Result<GradedMap<T>> {
    let la = qr_symmetry(a, ctx)?;
    let lb = qr_symmetry(b, ctx)?;
    let lab = qr_symmetry(a + b, ctx)?;
    Ok(la.commutator(&lb).sub(&lab.scale(&T::from_int(a - b))))
}

/// Tensor relations `[l_i, L_n] = (i-n) L_{i+n}`, the restricted Witt
/// relations, and the mixed-sign defects (recorded only).
pub fn check_qr_relations<T: Field + ToJson>(ctx: &Sl2Context<T>, max_mode: i64) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for i in -1..=1 {
        let li = sl2_generator(i as i32, ctx)?;
        for n in -max_mode..=max_mode {
            let ln = qr_symmetry(n, ctx)?;
            let target = qr_symmetry(i + n, ctx)?.scale(&T::from_int(i - n));
            checks.push(RelationCheck::vanishing(
                format!("[l_{i},L_{n}] = ({})L_{}", i - n, i + n),
                &li.commutator(&ln).sub(&target),
            ));
        }
    }
    checks.extend(witt_checks(ctx, max_mode)?);
    for a in 2..=max_mode {
        for b in -max_mode..=-2 {
            checks.push(RelationCheck::recorded(format!("[L_{a},L_{b}] = ({})L_{}", a - b, a + b), &witt_defect(a, b, ctx)?));
        }
    }
    let mut p = params_of(ctx);
    p.insert("max_mode".into(), max_mode.into());
    Ok(SuiteReport::new("q_R tensor relations", p, checks))
}

fn witt_checks<T: Field + ToJson>(ctx: &Sl2Context<T>, max_mode: i64) -> Result<Vec<RelationCheck>> {
    let mut checks = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (lo, hi) in [(-1, max_mode), (-max_mode, 1)] {
        for a in lo..=hi {
            for b in lo..=hi {
                if a >= b || !seen.insert((a, b)) {
                    continue;
                }
                checks.push(RelationCheck::vanishing(
                    format!("[L_{a},L_{b}] = ({})L_{}", a - b, a + b),
                    &witt_defect(a, b, ctx)?,
                ));
            }
        }
    }
    Ok(checks)
}

/// Diagonal Gram matrix of the contravariant form with `(1, 1) = 1` and
/// `l_{-1}` adjoint to `l_1`: `(z^n, z^n) = n! (2h)(2h+1)⋯(2h+n-1)`.
pub fn sl2_gram<T: Field + ToJson>(ctx: &Sl2Context<T>) -> Matrix<T> {
    let mut g = vec![T::one()];
    for n in 1..=ctx.n {
        let prev = g[n - 1].clone();
        g.push(prev.times(&T::from_int(n as i64)).times(&ctx.two_h_plus(n - 1)));
    }
    Matrix::diagonal(g)
}

/// `Gram·L_n - (L_{-n})ᵀ·Gram` on each determined component.
pub fn adjointness_defect<T: Field + ToJson>(n: i64, ctx: &Sl2Context<T>) -> Result<GradedMap<T>> {
    let g = sl2_gram(ctx);
    let ln = qr_symmetry(n, ctx)?;
    let lmn = qr_symmetry(-n, ctx)?;
    Ok(GradedMap::build(ctx.dims(), -n, |m| {
        let t = (m as i64 - n) as usize;
        let a = g.get(t, t).times(ln.block(m)?.get(0, 0));
        let b = g.get(m, m).times(lmn.block(t)?.get(0, 0));
        Some(Matrix::scalar(1, a.minus(&b)))
    }))
}

/// The Lie-composite structure: `L` restricted to `p_+ = span(e_i, i ≥ -1)`,
/// to `p_- = span(e_i, i ≤ 1)`, and agreement with `l_i` on the overlap.
#[derive(Clone, Debug, Serialize)]
pub struct CompositeReport {
    pub p_plus: Vec<RelationCheck>,
    pub p_minus: Vec<RelationCheck>,
    pub overlap: Vec<RelationCheck>,
    pub passed: bool,
}

pub fn composite_check<T: Field + ToJson>(ctx: &Sl2Context<T>, max_mode: i64) -> Result<CompositeReport> {
    let range = |lo: i64, hi: i64| -> Result<Vec<RelationCheck>> {
        let mut out = Vec::new();
        for a in lo..=hi {
            for b in (a + 1)..=hi {
                out.push(RelationCheck::vanishing(
                    format!("[L_{a},L_{b}] = ({})L_{}", a - b, a + b),
                    &witt_defect(a, b, ctx)?,
                ));
            }
        }
        Ok(out)
    };
    let p_plus = range(-1, max_mode)?;
    let p_minus = range(-max_mode, 1)?;
    let mut overlap = range(-1, 1)?;
    for i in -1..=1 {
        let same = qr_symmetry(i, ctx)? == sl2_generator(i as i32, ctx)?;
        overlap.push(RelationCheck::flag(format!("L_{i} = l_{i}"), same));
    }
    let passed = [&p_plus, &p_minus, &overlap].iter().all(|c| crate::report::all_ok(c));
    Ok(CompositeReport { p_plus, p_minus, overlap, passed })
}

/// Every asserted sl2 suite at once: LB relations, tensor relations, adjointness.
pub fn verify_sl2<T: Field + ToJson>(ctx: &Sl2Context<T>, max_mode: i64) -> Result<Vec<SuiteReport>> {
    let lb = check_lb_relations(ctx)?;
    let qr = check_qr_relations(ctx, max_mode)?;
    let mut adj = Vec::new();
    for n in 1..=max_mode {
        adj.push(RelationCheck::vanishing(format!("Gram·L_{n} = (L_-{n})ᵀ·Gram"), &adjointness_defect(n, ctx)?));
    }
    let gram = sl2_gram(ctx);
    let diag_ok = (0..=ctx.n).all(|i| (0..=ctx.n).all(|j| i == j || gram.get(i, j).is_zero()));
    adj.push(RelationCheck::flag("Gram is diagonal", diag_ok));
    let composite = composite_check(ctx, max_mode)?;
    adj.push(RelationCheck::flag("Lie composite checks", composite.passed));
    let adj = SuiteReport::new("sl2 form and composite", params_of(ctx), adj);
    Ok(vec![lb, qr, adj])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{int, rat, RatFn, Rational, Var};

    fn ctx(h: Rational, n: usize) -> Sl2Context<Rational> {
        Sl2Context::new(h, n)
    }

    fn entry(m: &GradedMap<Rational>, n: usize) -> Rational {
        m.block(n).unwrap().get(0, 0).clone()
    }

    #[test]
    fn generators_on_z_squared() {
        let c = ctx(rat(1, 3), 5);
        let h = rat(1, 3);
        assert_eq!(entry(&sl2_generator(-1, &c).unwrap(), 2), int(1));
        assert_eq!(entry(&sl2_generator(0, &c).unwrap(), 2), int(2) + &h);
        assert_eq!(entry(&sl2_generator(1, &c).unwrap(), 2), int(2) + int(4) * &h);
        assert!(sl2_generator(2, &c).is_err());
    }

    #[test]
    fn lb_values() {
        let c = ctx(int(1), 4);
        let (d, f) = lb_operators(&c).unwrap();
        assert_eq!(entry(&d, 1), int(1));
        assert_eq!(entry(&f, 0), rat(1, 2));
        let degenerate = ctx(rat(-3, 2), 4);
        assert!(matches!(lb_operators(&degenerate), Err(Error::Degenerate(_))));
        assert_eq!(check_lb_relations(&ctx(rat(1, 2), 6)).unwrap_err(), Error::QrPole);
    }

    #[test]
    fn qr_values() {
        let h = rat(2, 7);
        let c = ctx(h.clone(), 6);
        assert_eq!(entry(&qr_symmetry(0, &c).unwrap(), 2), int(2) + &h);
        assert_eq!(entry(&qr_symmetry(2, &c).unwrap(), 2), int(6) * &h);
        let l_m2 = qr_symmetry(-2, &c).unwrap();
        let expect = int(3) * &h / ((int(2) * &h) * (int(2) * &h + int(1)));
        assert_eq!(entry(&l_m2, 0), expect);
        for i in -1..=1 {
            assert_eq!(qr_symmetry(i, &c).unwrap(), sl2_generator(i as i32, &c).unwrap());
        }
    }

    #[test]
    fn grading_orientation() {
        let c = ctx(int(1), 8);
        let l0 = sl2_generator(0, &c).unwrap();
        for n in -3i64..=3 {
            let ln = qr_symmetry(n, &c).unwrap();
            assert!(l0.commutator(&ln).add(&ln.scale(&int(n))).zero_check().1.is_none());
        }
    }

    #[test]
    fn gram_diagonal() {
        let c = ctx(int(1), 3);
        let g = sl2_gram(&c);
        assert_eq!(g.get(0, 0), &int(1));
        assert_eq!(g.get(1, 1), &int(2));
        assert_eq!(g.get(2, 2), &int(2 * 2 * 3));
        let hs = Sl2Context::new(RatFn::var(Var::H), 2);
        let gs = sl2_gram(&hs);
        assert_eq!(gs.get(1, 1).to_string(), "2*h");
    }

    #[test]
    fn printed_index_fails() {
        let r = check_lb_relations(&ctx(int(1), 8)).unwrap();
        assert!(r.passed);
        assert!(!r.find("[l_-1,F] = 1 (as printed)").unwrap().passed);
        assert!(r.find("[l_1,F] = 1").unwrap().passed);
    }

    #[test]
    fn mixed_sign_is_recorded_not_asserted() {
        let r = check_qr_relations(&ctx(int(1), 8), 2).unwrap();
        assert!(r.passed);
        let mixed = r.find("[L_2,L_-2] = (4)L_0").unwrap();
        assert!(!mixed.asserted);
        assert!(!mixed.passed);
    }
}
