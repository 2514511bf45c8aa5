//! Formal-series geometry of univalent jets.
//!
//! Jets are `f(z) = z + c_1 z^2 + … + c_N z^{N+1}` with polynomial coefficients.
//! Contour integrals are formal residues at `w = 0` with `1/(f(w) - f(z))`
//! expanded as `Σ_{m≥0} f(z)^m / f(w)^{m+1}`; the overall constant of the
//! variation is `+1`, the value for which mode `k ≥ 1` gives `z^{k+1} f'(z)`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::linalg::rank;
use crate::exactalg::{int, rat, solve, ExactDiv, Field, MPoly, Matrix, Ring, ToJson, TruncSeries, Var, QI};
use crate::fock::oe_field;
use crate::params;
use crate::report::{RelationCheck, SuiteReport};

pub type Jet = TruncSeries<MPoly>;

/// `z + Σ_{n≤N} c_n z^{n+1}`, known through `z^{N+1}`.
pub fn symbolic_jet(n: usize) -> Jet {
    let coeffs = (0..=n).map(|j| if j == 0 { MPoly::one() } else { MPoly::coord(j) }).collect();
    TruncSeries::new(Var::Z, 1, coeffs, Some(n as i64 + 1))
}

/// The same jet with `c_1 = 0`.
pub fn symbolic_s1_jet(n: usize) -> Jet {
    let coeffs = (0..=n).map(|j| match j {
        0 => MPoly::one(),
        1 => MPoly::zero(),
        _ => MPoly::coord(j),
    });
    TruncSeries::new(Var::Z, 1, coeffs.collect(), Some(n as i64 + 1))
}

/// `f(0) = 0` and `f'(0) = 1`.
pub fn is_normalized<T: Ring>(f: &TruncSeries<T>) -> bool {
    f.coefficient(0).is_ok_and(|c| c.is_zero()) && f.coefficient(1).is_ok_and(|c| c.is_one())
}

/// `S(g) = g'''/g' - (3/2)(g''/g')²`.
pub fn schwarzian<T: ExactDiv>(g: &TruncSeries<T>) -> Result<TruncSeries<T>> {
    let d1 = g.derivative();
    let lead = d1.coefficient(0)?;
    if lead.is_zero() || T::one().exact_div(&lead).is_none() {
        return Err(Error::NotInvertible);
    }
    let d2 = d1.derivative();
    let d3 = d2.derivative();
    let r = d2.div(&d1)?;
    Ok(d3.div(&d1)?.sub(&r.mul(&r).scale(&T::from_rational(&rat(3, 2)))))
}

/// A quadratic differential `p(z) dz²` with central coordinate `b`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadDiffJet<T> {
    pub p: TruncSeries<T>,
    pub b: T,
}

/// `K(g)(p, b) = ((p∘g)(g')² - b S(g), b)`.
///
/// In this convention `K(g₁∘g₂) = K(g₂)∘K(g₁)`.
pub fn coadjoint_action<T: ExactDiv>(g: &TruncSeries<T>, q: &QuadDiffJet<T>) -> Result<QuadDiffJet<T>> {
    let d = g.derivative();
    let moved = q.p.compose(g)?.mul(&d.mul(&d));
    let p = moved.sub(&schwarzian(g)?.scale(&q.b));
    Ok(QuadDiffJet { p, b: q.b.clone() })
}

/// `f/(1 - b f)`.
pub fn ovsienko_fiber<T: ExactDiv>(f: &TruncSeries<T>, b: &T) -> Result<TruncSeries<T>> {
    let one = TruncSeries::constant(f.var(), T::one());
    Ok(f.mul(&one.sub(&f.scale(b)).invert()?))
}

/// The projection `f ↦ f_{-c_1}` onto jets with vanishing `z²` coefficient.
pub fn project_s1(f: &Jet) -> Result<Jet> {
    ovsienko_fiber(f, &f.coefficient(2)?.negated())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Variant {
    S,
    S1,
}

/// Formal residue form of the variation along `e_k = z^{k+1}∂`:
/// `Σ_m f(z)^{m+2} Res_w[w^{k+1} f'(w)² / f(w)^{m+3}]`.
pub fn kirillov_variation(k: i64, f: &Jet, variant: Variant) -> Result<Jet> {
    if !is_normalized(f) {
        return Err(Error::Precondition("jet must satisfy f(0) = 0, f'(0) = 1".into()));
    }
    if variant == Variant::S1 && !f.coefficient(2)?.is_zero() {
        return Err(Error::Precondition("S1 variation needs a jet with vanishing z² coefficient".into()));
    }
    let top = f.order().ok_or_else(|| Error::Truncation("jet needs a finite order".into()))?;
    let d = f.derivative();
    let weight = d.mul(&d).shift(k + 1);
    let finv = f.invert()?;
    let mut fw = finv.pow(3);
    let mut fz = f.mul(f);
    let mut out = TruncSeries::big_o(Var::Z, top);
    let mut known = top;
    for m in 0.. {
        if m + 2 > top {
            break;
        }
        match weight.mul(&fw).coefficient(-1) {
            Ok(r) => {
                if !r.is_zero() {
                    out = out.add(&fz.scale(&r));
                }
            }
            Err(Error::BeyondOrder { .. }) => {
                known = m + 1;
                break;
            }
            Err(e) => return Err(e),
        }
        fw = fw.mul(&finv);
        fz = fz.mul(f);
    }
    if known < 2 {
        return Err(Error::Truncation(format!("jet of order {top} does not determine mode {k}")));
    }
    let out = out.truncate(known);
    match variant {
        Variant::S => Ok(out),
        Variant::S1 => {
            let c2 = out.coefficient(2)?;
            Ok(out.sub(&f.mul(f).scale(&c2)))
        }
    }
}

/// `δc_m`, the coefficient of `z^{m+1}` in the variation, for every `m ≤ N`
/// the jet of order `N` determines (all of them unless `k < 0`).
pub fn induced_coordinate_action(k: i64, n: usize, variant: Variant) -> Result<Vec<MPoly>> {
    let f = match variant {
        Variant::S => symbolic_jet(n),
        Variant::S1 => symbolic_s1_jet(n),
    };
    let v = kirillov_variation(k, &f, variant)?;
    let top = v.order().unwrap_or(n as i64 + 1).min(n as i64 + 1);
    (1..top).map(|j| v.coefficient(j + 1)).collect()
}

/// `∂_m` components of the closed-form section field for mode `k`, with `h = c = 0`.
pub fn oe_field_components(k: i64, n: usize) -> Vec<MPoly> {
    let op = oe_field(k, n);
    (1..=n).map(|m| op.field.get(&m).cloned().unwrap_or_else(MPoly::zero)).collect()
}

/// The differential of the projection at `f` applied to `δf`.
fn projection_differential(f: &Jet, df: &Jet) -> Result<Jet> {
    let c1 = f.coefficient(2)?;
    let dc1 = df.coefficient(2)?;
    let one = TruncSeries::constant(Var::Z, MPoly::one());
    let u = one.add(&f.scale(&c1)).invert()?;
    let corr = f.mul(&f.scale(&dc1).add(&df.scale(&c1))).mul(&u).mul(&u);
    Ok(df.mul(&u).sub(&corr))
}

/// Induced fields against the section fields, the S1 normalization and the
/// compatibility of the projection with the action.
pub fn check_kirillov_consistency(max_mode: i64, n: usize) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for k in -1..=max_mode {
        let got = induced_coordinate_action(k, n, Variant::S)?;
        let expect = oe_field_components(k, n);
        let name = format!("induced field of e_{k} = section field of L_{k} ({} of {n} coordinates)", got.len());
        let check = RelationCheck::flag(name, expect.starts_with(&got) && got.len() + 1 >= n);
        checks.push(if k >= 1 { check } else { RelationCheck { asserted: false, ..check } });
    }
    let s1 = symbolic_s1_jet(n);
    for k in -1..=max_mode {
        let ok = kirillov_variation(k, &s1, Variant::S1)?.coefficient(2)?.is_zero();
        checks.push(RelationCheck::flag(format!("S1 variation of e_{k} has no z² term"), ok));
    }
    let m = n.min(6);
    let f = symbolic_jet(m);
    let pf = project_s1(&f)?;
    for k in 1..=max_mode {
        let lhs = projection_differential(&f, &kirillov_variation(k, &f, Variant::S)?)?;
        let rhs = kirillov_variation(k, &pf, Variant::S1)?;
        let upto = lhs.order().unwrap().min(rhs.order().unwrap()).min(m as i64 + 1);
        let ok = lhs.coefficients(0, upto)? == rhs.coefficients(0, upto)?;
        checks.push(RelationCheck::flag(format!("projection commutes with e_{k} through z^{upto}"), ok));
    }
    Ok(SuiteReport::new("kirillov", params! { "max_mode" => max_mode, "truncation" => n }, checks))
}

/// Finite Fourier sum `Σ a_n e^{int}`.
#[derive(Clone, Debug, Default, PartialEq)]
struct Fourier(BTreeMap<i64, QI>);

impl Fourier {
    /// `i e^{ijt}`, the component of `e_j = i e^{ijt} ∂_t`.
    fn field(j: i64) -> Self {
        Fourier(BTreeMap::from([(j, QI::i())]))
    }

    fn derivative(&self) -> Self {
        Fourier(self.0.iter().map(|(&n, a)| (n, a.times(&QI::new(int(0), int(n))))).collect())
    }

    fn mul(&self, o: &Self) -> Self {
        let mut out: BTreeMap<i64, QI> = BTreeMap::new();
        for (&n, a) in &self.0 {
            for (&m, b) in &o.0 {
                let e = out.entry(n + m).or_insert_with(QI::zero);
                *e = e.plus(&a.times(b));
            }
        }
        Fourier(out)
    }

    fn sub(&self, o: &Self) -> Self {
        let mut out = self.0.clone();
        for (&n, b) in &o.0 {
            let e = out.entry(n).or_insert_with(QI::zero);
            *e = e.minus(b);
        }
        Fourier(out)
    }

    /// `(1/2π) ∫_0^{2π}`.
    fn mean(&self) -> QI {
        self.0.get(&0).cloned().unwrap_or_else(QI::zero)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CocycleForm {
    /// `(1/2π) ∫ (v₁'v₂'' - v₂'v₁'') dt`, equal to `2i j³ δ_{j+k,0}`.
    Raw,
    /// The raw value divided by `24i`: `j³/12`.
    Normalized,
    /// `(j³ - j)/12 δ_{j+k,0}`.
    Modified,
}

/// Divisor taking the raw cocycle to `j³/12`.
pub fn cocycle_normalization() -> QI {
    QI::new(int(0), int(24))
}

pub fn gf_cocycle(j: i64, k: i64, form: CocycleForm) -> QI {
    let (v1, v2) = (Fourier::field(j), Fourier::field(k));
    let raw = v1.derivative().mul(&v2.derivative().derivative()).sub(&v2.derivative().mul(&v1.derivative().derivative())).mean();
    match form {
        CocycleForm::Raw => raw,
        CocycleForm::Normalized => raw.div(&cocycle_normalization()).expect("nonzero"),
        CocycleForm::Modified => {
            if j + k == 0 {
                QI::real(rat(j * j * j - j, 12))
            } else {
                QI::zero()
            }
        }
    }
}

/// `(1/2π) ∫ (v₁v₂' - v₂v₁') dt`, a coboundary.
pub fn trivial_cocycle(j: i64, k: i64) -> QI {
    let (v1, v2) = (Fourier::field(j), Fourier::field(k));
    v1.mul(&v2.derivative()).sub(&v2.mul(&v1.derivative())).mean()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CohomologyReport {
    pub max_mode: i64,
    #[serde(serialize_with = "crate::virasoro::ser_opt_json")]
    pub s: Option<QI>,
    #[serde(serialize_with = "crate::virasoro::ser_opt_json")]
    pub mu0: Option<QI>,
    pub unique: bool,
    pub residual_zero: bool,
    /// The second cocycle equals `2ij δ_{j+k,0}`, proportional to the coboundary of `e_0^*`.
    pub trivial_is_coboundary: bool,
    pub passed: bool,
}

/// Solves `raw(j,-j)·s = (j³ - j)/12 + 2j·μ₀` for `1 ≤ j ≤ max_mode`.
pub fn cocycle_cohomology_check(max_mode: i64) -> Result<CohomologyReport> {
    cohomology_with(max_mode, &|j| gf_cocycle(j, -j, CocycleForm::Raw))
}

/// The same solve with an arbitrary raw column, used to show that wrong
/// normalizations are rejected.
pub fn cohomology_with(max_mode: i64, raw: &dyn Fn(i64) -> QI) -> Result<CohomologyReport> {
    if max_mode < 2 {
        return Err(Error::OutOfRange("need at least two modes".into()));
    }
    let rows: Vec<Vec<QI>> = (1..=max_mode).map(|j| vec![raw(j), QI::real(int(-2 * j))]).collect();
    let a = Matrix::from_rows(rows)?;
    let b: Vec<QI> = (1..=max_mode).map(|j| QI::real(rat(j * j * j - j, 12))).collect();
    let sol = solve(&a, &b)?;
    let unique = rank(&a) == 2;
    let residual_zero = sol.as_ref().is_some_and(|x| a.mul_vec(x) == b);
    let trivial_is_coboundary = (-max_mode..=max_mode).all(|j| {
        (-max_mode..=max_mode).all(|k| {
            let expect = if j + k == 0 { QI::new(int(0), int(2 * j)) } else { QI::zero() };
            trivial_cocycle(j, k) == expect
        })
    });
    let (s, mu0) = match sol {
        Some(x) => (Some(x[0].clone()), Some(x[1].clone())),
        None => (None, None),
    };
    Ok(CohomologyReport {
        max_mode,
        passed: s.is_some() && unique && residual_zero && trivial_is_coboundary,
        s,
        mu0,
        unique,
        residual_zero,
        trivial_is_coboundary,
    })
}

/// Jet coefficients as a list starting at `z^0`.
pub fn jet_to_json<T: Ring + ToJson>(f: &TruncSeries<T>) -> serde_json::Value {
    let top = f.order().or(f.degree()).unwrap_or(0);
    let coeffs: Vec<serde_json::Value> = (0..=top).map(|e| f.coefficient(e).map(|c| c.to_json()).unwrap_or_default()).collect();
    serde_json::json!({ "order": f.order(), "coefficients": coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Rational;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        int(n)
    }

    fn poly(c: &[i64], order: i64) -> TruncSeries<Rational> {
        TruncSeries::new(Var::Z, 0, c.iter().map(|&x| q(x)).collect(), Some(order))
    }

    #[test]
    fn schwarzian_examples() {
        let z = poly(&[0, 1], 8);
        assert!(schwarzian(&z).unwrap().is_known_zero());
        let mobius = TruncSeries::new(Var::Z, 1, vec![q(1); 9], Some(9));
        assert!(schwarzian(&mobius).unwrap().is_known_zero());
        let s = schwarzian(&poly(&[0, 1, 1], 6)).unwrap();
        assert_eq!(s.coefficients(0, 3).unwrap(), vec![q(-6), q(24), q(-72), q(192)]);
        assert!(schwarzian(&poly(&[0, 0, 1], 5)).is_err());
    }

    #[test]
    fn coadjoint_examples() {
        let g = poly(&[0, 1, 2, -1], 6);
        let zero = QuadDiffJet { p: TruncSeries::big_o(Var::Z, 6), b: rat(3, 2) };
        let k = coadjoint_action(&g, &zero).unwrap();
        assert_eq!(k.p, schwarzian(&g).unwrap().scale(&rat(-3, 2)));
        let id = TruncSeries::polynomial(Var::Z, vec![q(0), q(1)]);
        let p = QuadDiffJet { p: poly(&[1, 2, 3], 6), b: q(5) };
        assert_eq!(coadjoint_action(&id, &p).unwrap(), p);
    }

    proptest! {
        #[test]
        fn coadjoint_composition(a in -3i64..=3, b in -3i64..=3, x in -3i64..=3, y in -3i64..=3, p0 in -3i64..=3, p1 in -3i64..=3, bb in -3i64..=3) {
            let g1 = poly(&[0, 1, a, b], 5);
            let g2 = poly(&[0, 1, x, y], 5);
            let p = QuadDiffJet { p: poly(&[p0, p1], 5), b: q(bb) };
            let lhs = coadjoint_action(&g1.compose(&g2).unwrap(), &p).unwrap();
            let rhs = coadjoint_action(&g2, &coadjoint_action(&g1, &p).unwrap()).unwrap();
            let o = 4.min(lhs.p.order().unwrap()).min(rhs.p.order().unwrap());
            prop_assert_eq!(lhs.p.coefficients(0, o).unwrap(), rhs.p.coefficients(0, o).unwrap());
            // chain rule S(g₁∘g₂) = (S(g₁)∘g₂)(g₂')² + S(g₂)
            let d = g2.derivative();
            let chain = schwarzian(&g1).unwrap().compose(&g2).unwrap().mul(&d.mul(&d)).add(&schwarzian(&g2).unwrap());
            let s = schwarzian(&g1.compose(&g2).unwrap()).unwrap();
            let o = chain.order().unwrap().min(s.order().unwrap());
            prop_assert_eq!(chain.coefficients(0, o).unwrap(), s.coefficients(0, o).unwrap());
        }

        #[test]
        fn fiber_composition(b1 in -4i64..=4, b2 in -4i64..=4, c in -3i64..=3, d in -3i64..=3) {
            let f = poly(&[0, 1, c, d], 5);
            let lhs = ovsienko_fiber(&ovsienko_fiber(&f, &q(b1)).unwrap(), &q(b2)).unwrap();
            let rhs = ovsienko_fiber(&f, &q(b1 + b2)).unwrap();
            prop_assert_eq!(lhs.coefficients(0, 4).unwrap(), rhs.coefficients(0, 4).unwrap());
        }

        #[test]
        fn cocycle_support(j in -6i64..=6, k in -6i64..=6) {
            let r = gf_cocycle(j, k, CocycleForm::Raw);
            prop_assert_eq!(r.clone(), gf_cocycle(-j, -k, CocycleForm::Raw).negated());
            if j + k != 0 {
                prop_assert!(r.is_zero());
            }
        }
    }

    #[test]
    fn fiber_examples() {
        let f = symbolic_jet(2);
        assert_eq!(ovsienko_fiber(&f, &MPoly::zero()).unwrap(), f);
        let p = project_s1(&f).unwrap();
        assert!(p.coefficient(2).unwrap().is_zero());
        let c = |k| MPoly::coord(k);
        assert_eq!(p.coefficient(3).unwrap(), &c(2) - &(&c(1) * &c(1)));
    }

    #[test]
    fn cocycle_values() {
        assert_eq!(gf_cocycle(1, -1, CocycleForm::Raw), QI::new(int(0), int(2)));
        assert_eq!(gf_cocycle(1, -1, CocycleForm::Normalized), QI::real(rat(1, 12)));
        assert_eq!(gf_cocycle(2, -2, CocycleForm::Modified), QI::real(rat(1, 2)));
        assert!(gf_cocycle(1, -1, CocycleForm::Modified).is_zero());
        let r = cocycle_cohomology_check(5).unwrap();
        assert!(r.passed);
        assert_eq!(r.s, Some(QI::new(int(0), rat(-1, 24))));
        assert_eq!(r.mu0, Some(QI::real(rat(1, 24))));
        // the first row pins μ₀ = s·raw(1,-1)/2
        let raw1 = gf_cocycle(1, -1, CocycleForm::Raw);
        assert_eq!(r.mu0.unwrap(), r.s.unwrap().times(&raw1).scaled(&rat(1, 2)));
        let bad = cohomology_with(5, &|j| gf_cocycle(j, -j, CocycleForm::Raw).plus(&QI::real(int(j.pow(5))))).unwrap();
        assert!(!bad.passed && bad.s.is_none());
    }

    #[test]
    fn variation_low_modes() {
        let n = 5;
        for k in 1..=3 {
            let f = symbolic_jet(n);
            let v = kirillov_variation(k, &f, Variant::S).unwrap();
            let expect = f.derivative().shift(k + 1);
            let o = v.order().unwrap();
            assert_eq!(v.coefficients(0, o).unwrap(), expect.coefficients(0, o).unwrap());
        }
        // k = 0: δc_n = n c_n
        let d0 = induced_coordinate_action(0, n, Variant::S).unwrap();
        assert_eq!(d0, (1..=n).map(|m| MPoly::coord(m).scale(&int(m as i64))).collect::<Vec<_>>());
        let dm1 = induced_coordinate_action(-1, n, Variant::S).unwrap();
        assert_eq!(dm1.len(), n - 1);
        assert!(oe_field_components(-1, n).starts_with(&dm1));
    }

    #[test]
    fn consistency_report() {
        let r = check_kirillov_consistency(3, 6).unwrap();
        assert!(r.passed, "{:?}", r.failures());
    }

    #[test]
    fn s1_requires_s1_jet() {
        assert!(kirillov_variation(1, &symbolic_jet(3), Variant::S1).is_err());
        let f = symbolic_s1_jet(4);
        let v = kirillov_variation(2, &f, Variant::S1).unwrap();
        assert!(v.coefficient(2).unwrap().is_zero());
    }
}
