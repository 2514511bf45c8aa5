//! Rational functions in the formal parameters, kept in lowest terms.

use std::fmt;

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use super::mpoly::{MPoly, Var};
use super::rational::{int, Rational};
use super::ring::{self, ExactDiv};
use crate::error::{Error, Result};

/// `num / den` with `gcd(num, den) = 1` and the graded-lex leading
/// coefficient of `den` equal to 1. Zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFn {
    num: MPoly,
    den: MPoly,
}

impl RatFn {
    pub fn new(num: MPoly, den: MPoly) -> Result<RatFn> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFn::zero());
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.is_constant() {
                (num, den)
            } else {
                (
                    num.exact_div(&g).expect("gcd divides numerator"),
                    den.exact_div(&g).expect("gcd divides denominator"),
                )
            }
        };
        let lc = den.leading_coefficient().recip();
        Ok(RatFn { num: num.scale(&lc), den: den.scale(&lc) })
    }

    pub fn zero() -> RatFn {
        RatFn { num: MPoly::zero(), den: MPoly::one() }
    }

    pub fn one() -> RatFn {
        RatFn::from_poly(MPoly::one())
    }

    pub fn from_poly(p: MPoly) -> RatFn {
        RatFn { num: p, den: MPoly::one() }
    }

    pub fn constant(q: Rational) -> RatFn {
        RatFn::from_poly(MPoly::constant(q))
    }

    pub fn var(v: Var) -> RatFn {
        RatFn::from_poly(MPoly::var(v))
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_poly(&self) -> Option<MPoly> {
        self.den.constant_value().map(|d| self.num.scale(&d.recip()))
    }

    pub fn constant_value(&self) -> Option<Rational> {
        Some(self.num.constant_value()? / self.den.constant_value()?)
    }

    /// Evaluates at a point; errors if the denominator vanishes there.
    pub fn eval_partial(&self, assign: &dyn Fn(Var) -> Option<Rational>) -> Result<RatFn> {
        RatFn::new(self.num.eval_partial(assign), self.den.eval_partial(assign))
    }

    pub fn eval(&self, assign: &dyn Fn(Var) -> Option<Rational>) -> Result<Option<Rational>> {
        Ok(self.eval_partial(assign)?.constant_value())
    }

    fn combine(&self, other: &RatFn, sub: bool) -> RatFn {
        if self.den == other.den {
            let n = if sub { &self.num - &other.num } else { &self.num + &other.num };
            return RatFn::new(n, self.den.clone()).expect("nonzero denominator");
        }
        let a = &self.num * &other.den;
        let b = &other.num * &self.den;
        let n = if sub { &a - &b } else { &a + &b };
        RatFn::new(n, &self.den * &other.den).expect("nonzero denominator")
    }
}

impl ring::Ring for RatFn {
    fn zero() -> Self {
        RatFn::zero()
    }
    fn one() -> Self {
        RatFn::one()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn plus(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        self.combine(other, false)
    }
    fn minus(&self, other: &Self) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        self.combine(other, true)
    }
    fn times(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return RatFn::zero();
        }
        if self.is_polynomial() && other.is_polynomial() {
            return RatFn::from_poly(&self.as_poly().unwrap() * &other.as_poly().unwrap());
        }
        RatFn::new(&self.num * &other.num, &self.den * &other.den).expect("nonzero denominator")
    }
    fn negated(&self) -> Self {
        RatFn { num: -&self.num, den: self.den.clone() }
    }
    fn from_rational(q: &Rational) -> Self {
        RatFn::constant(q.clone())
    }
}

impl ring::Field for RatFn {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(RatFn::new(self.den.clone(), self.num.clone()).expect("nonzero numerator"))
        }
    }
}

impl From<MPoly> for RatFn {
    fn from(p: MPoly) -> Self {
        RatFn::from_poly(p)
    }
}

impl From<Rational> for RatFn {
    fn from(q: Rational) -> Self {
        RatFn::constant(q)
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == MPoly::one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &MPoly| {
            if p.num_terms() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl Serialize for RatFn {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("RatFn", 2)?;
        st.serialize_field("num", &self.num)?;
        st.serialize_field("den", &self.den)?;
        st.end()
    }
}

/// `p / q` for polynomials, as a normalized rational function.
pub fn ratfn_normalize(num: MPoly, den: MPoly) -> Result<RatFn> {
    RatFn::new(num, den)
}

/// Sign-free test of `a/b == c/d` by cross-multiplication.
pub fn cross_equal(a: &MPoly, b: &MPoly, c: &MPoly, d: &MPoly) -> bool {
    &(a * d) - &(b * c) == MPoly::zero()
}

pub fn h_ratfn() -> RatFn {
    RatFn::var(Var::H)
}

pub fn c_ratfn() -> RatFn {
    RatFn::var(Var::C)
}

pub fn rat_ratfn(n: i64, d: i64) -> RatFn {
    RatFn::constant(int(n) / int(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::ring::{Field, Ring};
    use proptest::prelude::*;

    fn h() -> MPoly {
        MPoly::var(Var::H)
    }
    fn c() -> MPoly {
        MPoly::var(Var::C)
    }

    #[test]
    fn normalization_examples() {
        let r = RatFn::new((&h() * &h()).scale(&int(2)), h().scale(&int(2))).unwrap();
        assert_eq!(r, RatFn::from_poly(h()));
        assert_eq!(RatFn::new(h(), MPoly::one()).unwrap(), RatFn::from_poly(h()));
        // 16h^2 + 2(c-5)h + c
        let phi = &(&(&(&h() * &h()).scale(&int(16)) + &(&h() * &c()).scale(&int(2)))
            - &h().scale(&int(10)))
            + &c();
        let r = RatFn::new(&phi * &h(), h()).unwrap();
        assert_eq!(r, RatFn::from_poly(phi));
        assert_eq!(RatFn::new(h(), MPoly::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn denominator_is_monic() {
        let r = RatFn::new(MPoly::one(), h().scale(&int(-3))).unwrap();
        assert_eq!(r.den(), &h());
        assert_eq!(r.num(), &MPoly::constant(int(-1) / int(3)));
        assert_eq!(r.to_string(), "-1/3/h");
    }

    #[test]
    fn field_operations() {
        let a = RatFn::new(MPoly::one(), &h() + &MPoly::one()).unwrap();
        let b = RatFn::new(h(), &h() + &MPoly::one()).unwrap();
        assert_eq!(a.plus(&b), RatFn::one());
        assert_eq!(b.times(&b.inv().unwrap()), RatFn::one());
        assert!(b.minus(&b).is_zero());
    }

    fn small() -> impl Strategy<Value = RatFn> {
        let lin = (-3i64..4, -3i64..4, -3i64..4).prop_map(|(a, b, k)| {
            &(&h().scale(&int(a)) + &c().scale(&int(b))) + &MPoly::int(k)
        });
        (lin.clone(), lin).prop_filter_map("nonzero denominator", |(n, d)| RatFn::new(n, d).ok())
    }

    proptest! {
        #[test]
        fn equality_matches_cross_multiplication(a in small(), b in small()) {
            let eq = a == b;
            prop_assert_eq!(eq, cross_equal(a.num(), a.den(), b.num(), b.den()));
            prop_assert_eq!(a.plus(&b).minus(&b), a.clone());
            if !b.is_zero() {
                prop_assert_eq!(a.times(&b).div(&b).unwrap(), a);
            }
        }
    }
}
