//! Sparse multivariate polynomials over the rationals.
//!
//! Variables come from one fixed symbol table: the module parameters `h` and
//! `c` (weight 0), the series variables `z`, `w` (weight 1) and the Fock
//! coordinates `c1, c2, ...` with `deg c_k = k`. Contexts simply use the
//! variables they need.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use super::rational::{format_rational, int, Rational};
use super::ring::{self, ExactDiv};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Var(u16);

impl Var {
    pub const H: Var = Var(0);
    /// The central charge.
    pub const C: Var = Var(1);
    pub const Z: Var = Var(2);
    pub const W: Var = Var(3);

    /// The Fock coordinate `c_k`, `k >= 1`.
    pub fn coord(k: usize) -> Var {
        assert!(k >= 1, "Fock coordinates start at c1");
        Var(3 + u16::try_from(k).expect("coordinate index fits in u16"))
    }

    pub fn coord_index(self) -> Option<usize> {
        (self.0 >= 4).then(|| usize::from(self.0 - 3))
    }

    pub fn name(self) -> String {
        match self.0 {
            0 => "h".into(),
            1 => "c".into(),
            2 => "z".into(),
            3 => "w".into(),
            k => format!("c{}", k - 3),
        }
    }

    pub fn weight(self) -> u32 {
        match self.0 {
            0 | 1 => 0,
            2 | 3 => 1,
            k => u32::from(k - 3),
        }
    }

    pub fn parse(name: &str) -> Option<Var> {
        match name {
            "h" => Some(Var::H),
            "c" => Some(Var::C),
            "z" => Some(Var::Z),
            "w" => Some(Var::W),
            _ => name
                .strip_prefix('c')
                .and_then(|k| k.parse::<usize>().ok())
                .filter(|&k| k >= 1)
                .map(Var::coord),
        }
    }
}

/// A power product, stored as `(variable, exponent)` pairs sorted by variable,
/// every exponent positive.
///
/// The `Ord` impl is graded lexicographic: total degree first, then the
/// exponent of `h`, `c`, `z`, `w`, `c1`, ... in that precedence.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, e)])
        }
    }

    pub fn from_pairs(mut pairs: Vec<(Var, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_by_key(|&(v, _)| v);
        let mut out: Vec<(Var, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some((lv, le)) if *lv == v => *le += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn pairs(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn weighted_degree(&self) -> u32 {
        self.0.iter().map(|&(v, e)| v.weight() * e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            let mut e = e;
            if j < other.0.len() && other.0[j].0 == v {
                if other.0[j].1 > e {
                    return None;
                }
                e -= other.0[j].1;
                j += 1;
            } else if j < other.0.len() && other.0[j].0 < v {
                return None;
            }
            if e > 0 {
                out.push((v, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Splits off the exponent of `v`.
    pub fn without(&self, v: Var) -> (u32, Monomial) {
        let e = self.exponent(v);
        let rest = self.0.iter().copied().filter(|&(w, _)| w != v).collect();
        (e, Monomial(rest))
    }

    pub fn partition_by(&self, pred: impl Fn(Var) -> bool) -> (Monomial, Monomial) {
        let (a, b): (Vec<_>, Vec<_>) = self.0.iter().partition(|&&(v, _)| pred(v));
        (Monomial(a), Monomial(b))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self.total_degree().cmp(&other.total_degree());
        if d != Ordering::Equal {
            return d;
        }
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    // `va` appears in `a` but not in `b`.
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&(v, e)| if e == 1 { v.name() } else { format!("{}^{}", v.name(), e) })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct MPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn one() -> Self {
        MPoly::constant(int(1))
    }

    pub fn constant(q: Rational) -> Self {
        MPoly::term(q, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        MPoly::constant(int(n))
    }

    pub fn var(v: Var) -> Self {
        MPoly::term(int(1), Monomial::var(v, 1))
    }

    pub fn coord(k: usize) -> Self {
        MPoly::var(Var::coord(k))
    }

    pub fn term(q: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(m, q);
        }
        MPoly { terms }
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = MPoly::zero();
        for (m, q) in iter {
            p.add_term(m, &q);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, q: &Rational) {
        if q.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(c) => {
                *c += q;
                if c.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, q.clone());
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The value of a constant polynomial.
    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_zero() {
            Some(int(0))
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(|| int(0))
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(|| int(0))
    }

    /// Leading term under the graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.leading().map(|(_, q)| q.clone()).unwrap_or_else(|| int(0))
    }

    pub fn scale(&self, q: &Rational) -> MPoly {
        if q.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, q: &Rational) -> MPoly {
        if q.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(n, c)| (n.mul(m), c * q)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        ring::Ring::pow(self, e)
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .terms
            .keys()
            .flat_map(|m| m.pairs().iter().map(|&(v, _)| v))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    /// `Some(d)` when every term has weighted degree `d`; zero is homogeneous of any degree.
    pub fn weighted_homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::weighted_degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn derivative(&self, v: Var) -> MPoly {
        let mut out = MPoly::zero();
        for (m, q) in &self.terms {
            let (e, rest) = m.without(v);
            if e > 0 {
                let mut pairs = rest.pairs().to_vec();
                pairs.push((v, e - 1));
                out.add_term(Monomial::from_pairs(pairs), &(q * int(i64::from(e))));
            }
        }
        out
    }

    /// Substitutes rational values for the variables `assign` returns `Some` for.
    pub fn eval_partial(&self, assign: &dyn Fn(Var) -> Option<Rational>) -> MPoly {
        let mut out = MPoly::zero();
        for (m, q) in &self.terms {
            let mut coeff = q.clone();
            let mut rest = Vec::new();
            for &(v, e) in m.pairs() {
                match assign(v) {
                    Some(x) => coeff *= num_traits::pow(x, e as usize),
                    None => rest.push((v, e)),
                }
            }
            out.add_term(Monomial(rest), &coeff);
        }
        out
    }

    /// Full evaluation; `None` if some variable has no value.
    pub fn eval(&self, assign: &dyn Fn(Var) -> Option<Rational>) -> Option<Rational> {
        self.eval_partial(assign).constant_value()
    }

    pub fn substitute(&self, v: Var, value: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        let mut powers: Vec<MPoly> = vec![MPoly::one()];
        for (m, q) in &self.terms {
            let (e, rest) = m.without(v);
            while powers.len() <= e as usize {
                let next = &powers[powers.len() - 1] * value;
                powers.push(next);
            }
            out = &out + &powers[e as usize].mul_monomial(&rest, q);
        }
        out
    }

    /// Coefficients as a univariate polynomial in `v`: entry `i` multiplies `v^i`.
    pub fn coefficients_in(&self, v: Var) -> Vec<MPoly> {
        let mut out = vec![MPoly::zero(); self.degree_in(v) as usize + 1];
        for (m, q) in &self.terms {
            let (e, rest) = m.without(v);
            out[e as usize].add_term(rest, q);
        }
        out
    }

    fn from_coefficients_in(v: Var, coeffs: &[MPoly]) -> MPoly {
        let mut out = MPoly::zero();
        for (i, c) in coeffs.iter().enumerate() {
            out = &out + &c.mul_monomial(&Monomial::var(v, i as u32), &int(1));
        }
        out
    }

    /// Division with remainder by a single divisor under the graded-lex order.
    /// When `d` divides `self` the remainder is zero.
    pub fn div_rem(&self, d: &MPoly) -> Option<(MPoly, MPoly)> {
        let (lm, lc) = d.leading()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut p = self.clone();
        let mut q = MPoly::zero();
        let mut r = MPoly::zero();
        while let Some((m, c)) = p.leading() {
            let (m, c) = (m.clone(), c.clone());
            match m.div(&lm) {
                Some(t) => {
                    let coeff = &c / &lc;
                    p = &p - &d.mul_monomial(&t, &coeff);
                    q.add_term(t, &coeff);
                }
                None => {
                    p.terms.remove(&m);
                    r.add_term(m, &c);
                }
            }
        }
        Some((q, r))
    }

    /// Scales so that the graded-lex leading coefficient is 1.
    pub fn monic(&self) -> MPoly {
        match self.leading() {
            Some((_, lc)) => self.scale(&lc.recip()),
            None => MPoly::zero(),
        }
    }

    /// Greatest common divisor, normalized to leading coefficient 1 (`gcd(0, 0) = 0`).
    ///
    /// Recursive primitive remainder sequences over `Q[other vars][x]`, with `x`
    /// the largest variable present.
    pub fn gcd(&self, other: &MPoly) -> MPoly {
        gcd_rec(self, other).monic()
    }

    pub fn is_weighted_homogeneous(&self) -> bool {
        self.is_zero() || self.weighted_homogeneous_degree().is_some()
    }
}

fn content_in(p: &MPoly, x: Var) -> MPoly {
    let mut g = MPoly::zero();
    for c in p.coefficients_in(x) {
        if c.is_zero() {
            continue;
        }
        g = gcd_rec(&g, &c);
        if g.is_constant() {
            return MPoly::one();
        }
    }
    g
}

fn primitive_part_in(p: &MPoly, x: Var) -> MPoly {
    let c = content_in(p, x);
    if c.is_constant() {
        return p.clone();
    }
    p.exact_div(&c).expect("content divides the polynomial")
}

/// Pseudo-remainder of `p` by `q` as polynomials in `x`, up to a factor free of `x`.
fn pseudo_rem(p: &MPoly, q: &MPoly, x: Var) -> MPoly {
    let qc = q.coefficients_in(x);
    let n = qc.len() - 1;
    let lc = qc[n].clone();
    let mut r = p.clone();
    loop {
        let dr = r.degree_in(x) as usize;
        if r.is_zero() || dr < n {
            return r;
        }
        let lr = r.coefficients_in(x)[dr].clone();
        let shift = MPoly::term(int(1), Monomial::var(x, (dr - n) as u32));
        r = &(&r * &lc) - &(&(&lr * &shift) * q);
    }
}

fn gcd_rec(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one();
    }
    let x = *a
        .vars()
        .iter()
        .chain(b.vars().iter())
        .max()
        .expect("nonconstant polynomial has a variable");
    let (da, db) = (a.degree_in(x), b.degree_in(x));
    if da == 0 {
        return gcd_rec(a, &content_in(b, x));
    }
    if db == 0 {
        return gcd_rec(&content_in(a, x), b);
    }
    let g = gcd_rec(&content_in(a, x), &content_in(b, x));
    let (mut p, mut q) = (primitive_part_in(a, x), primitive_part_in(b, x));
    if p.degree_in(x) < q.degree_in(x) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        let r = pseudo_rem(&p, &q, x);
        if r.is_zero() {
            break;
        }
        if r.degree_in(x) == 0 {
            return g;
        }
        p = q;
        q = primitive_part_in(&r, x);
    }
    &g * &primitive_part_in(&q, x)
}

impl ExactDiv for MPoly {
    fn exact_div(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if let Some(c) = divisor.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let (q, r) = self.div_rem(divisor)?;
        r.is_zero().then_some(q)
    }
}

impl ring::Ring for MPoly {
    fn zero() -> Self {
        MPoly::zero()
    }
    fn one() -> Self {
        MPoly::one()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn from_rational(q: &Rational) -> Self {
        MPoly::constant(q.clone())
    }
}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let (big, small) = if self.terms.len() >= rhs.terms.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, q) in &small.terms {
            out.add_term(m.clone(), q);
        }
        out
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, q) in &rhs.terms {
            out.add_term(m.clone(), &-q);
        }
        out
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        let mut terms: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, qa) in &self.terms {
            for (mb, qb) in &rhs.terms {
                let m = ma.mul(mb);
                let q = qa * qb;
                match terms.get_mut(&m) {
                    Some(c) => *c += q,
                    None => {
                        terms.insert(m, q);
                    }
                }
            }
        }
        terms.retain(|_, q| !q.is_zero());
        MPoly { terms }
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(m, q)| (m.clone(), -q)).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $f(self, rhs: MPoly) -> MPoly { (&self).$f(&rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, q)) in self.terms.iter().rev().enumerate() {
            let neg = q.is_negative();
            let a = q.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{}", format_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", format_rational(&a))?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct VarRecord {
    name: String,
    weight: u32,
}

#[derive(Serialize)]
struct TermRecord {
    coeff: String,
    exponents: Vec<u32>,
}

/// `{vars: [{name, weight}], terms: [{coeff, exponents}]}`, terms in
/// increasing graded-lex order and exponents aligned with `vars`.
impl Serialize for MPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let vars = self.vars();
        let var_records: Vec<VarRecord> = vars
            .iter()
            .map(|v| VarRecord { name: v.name(), weight: v.weight() })
            .collect();
        let terms: Vec<TermRecord> = self
            .terms
            .iter()
            .map(|(m, q)| TermRecord {
                coeff: format_rational(q),
                exponents: vars.iter().map(|&v| m.exponent(v)).collect(),
            })
            .collect();
        let mut st = s.serialize_struct("MPoly", 2)?;
        st.serialize_field("vars", &var_records)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

/// Polynomial in `variable` from its coefficient list.
pub fn univariate(variable: Var, coeffs: &[Rational]) -> MPoly {
    MPoly::from_terms(
        coeffs
            .iter()
            .enumerate()
            .map(|(i, q)| (Monomial::var(variable, i as u32), q.clone())),
    )
}

#[doc(hidden)]
pub fn rebuild_from_coefficients(v: Var, coeffs: &[MPoly]) -> MPoly {
    MPoly::from_coefficients_in(v, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::rat;
    use proptest::prelude::*;

    fn h() -> MPoly {
        MPoly::var(Var::H)
    }
    fn c() -> MPoly {
        MPoly::var(Var::C)
    }

    #[test]
    fn graded_lex_leading_term() {
        let p = &(&h() * &h()) + &(&c() * &MPoly::int(3));
        assert_eq!(p.leading().unwrap().0, &Monomial::var(Var::H, 2));
        let q = &(&h() * &c()) + &(&c() * &c());
        // h*c > c^2 because h has precedence.
        assert_eq!(q.leading().unwrap().0, &Monomial::from_pairs(vec![(Var::H, 1), (Var::C, 1)]));
    }

    #[test]
    fn exact_division_and_remainder() {
        let f = &(&h() + &MPoly::int(1)) * &(&h() - &c());
        let g = &h() - &c();
        assert_eq!(f.exact_div(&g).unwrap(), &h() + &MPoly::int(1));
        let (_, r) = (&f + &MPoly::int(1)).div_rem(&g).unwrap();
        assert!(!r.is_zero());
        assert!((&f + &MPoly::int(1)).exact_div(&g).is_none());
    }

    #[test]
    fn gcd_examples() {
        let a = &(&h() * &h()).scale(&int(2)) * &c();
        let b = (&h() * &c()).scale(&int(4));
        assert_eq!(a.gcd(&b), &h() * &c());
        let x = &h() + &c();
        let y = &h() - &c();
        let z = &h() * &h() + MPoly::int(1);
        assert_eq!((&x * &y).gcd(&(&x * &z)), x.monic());
        assert_eq!(y.gcd(&z), MPoly::one());
        assert_eq!(MPoly::zero().gcd(&y.scale(&int(3))), y.monic());
    }

    #[test]
    fn derivative_and_substitution() {
        let p = &(&h() * &h()) * &c();
        assert_eq!(p.derivative(Var::H), (&h() * &c()).scale(&int(2)));
        let s = p.substitute(Var::H, &(&c() + &MPoly::int(1)));
        let expect = &(&(&c() + &MPoly::int(1)) * &(&c() + &MPoly::int(1))) * &c();
        assert_eq!(s, expect);
        assert_eq!(p.eval(&|v| Some(if v == Var::H { int(2) } else { rat(1, 2) })), Some(int(2)));
    }

    #[test]
    fn display_and_serialization() {
        let p = &(&h() * &h()).scale(&rat(-1, 2)) + &MPoly::int(3);
        assert_eq!(p.to_string(), "-1/2*h^2 + 3");
        let js = serde_json::to_string(&p).unwrap();
        assert_eq!(
            js,
            r#"{"vars":[{"name":"h","weight":0}],"terms":[{"coeff":"3","exponents":[0]},{"coeff":"-1/2","exponents":[2]}]}"#
        );
    }

    #[test]
    fn variable_weights() {
        assert_eq!(Var::coord(3).weight(), 3);
        assert_eq!(Var::coord(3).name(), "c3");
        assert_eq!(Var::parse("c12"), Some(Var::coord(12)));
        let b1 = &(&MPoly::coord(1) * &MPoly::coord(2)).scale(&int(2)) - &MPoly::coord(3);
        assert_eq!(b1.weighted_homogeneous_degree(), Some(3));
    }

    fn small_poly() -> impl Strategy<Value = MPoly> {
        prop::collection::vec((0u32..3, 0u32..3, 0u32..2, -4i64..5), 0..4).prop_map(|ts| {
            MPoly::from_terms(ts.into_iter().map(|(a, b, k, q)| {
                (Monomial::from_pairs(vec![(Var::H, a), (Var::C, b), (Var::coord(1), k)]), int(q))
            }))
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn gcd_divides_both(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assume!(!c.is_zero());
            let x = &a * &c;
            let y = &b * &c;
            let g = x.gcd(&y);
            if !x.is_zero() || !y.is_zero() {
                prop_assert!(x.exact_div(&g).is_some());
                prop_assert!(y.exact_div(&g).is_some());
                prop_assert!(g.exact_div(&c.monic()).is_some());
            }
        }
    }
}
