//! Truncated Laurent series with an explicit order of validity.
//!
//! A series knows its coefficients for every exponent up to and including
//! `order`; higher coefficients are unknown and reading them is an error.
//! An order of `None` marks an exact (finite) series.

use std::fmt;

use super::mpoly::Var;
use super::ring::{ExactDiv, Ring};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Debug)]
pub struct TruncSeries<T> {
    var: Var,
    start: i64,
    coeffs: Vec<T>,
    order: Option<i64>,
}

fn min_order(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl<T: Ring> TruncSeries<T> {
    /// `Σ coeffs[i] var^(start+i)`, known through exponent `order`.
    pub fn new(var: Var, start: i64, coeffs: Vec<T>, order: Option<i64>) -> Self {
        TruncSeries { var, start, coeffs, order }.normalized()
    }

    pub fn exact(var: Var, start: i64, coeffs: Vec<T>) -> Self {
        TruncSeries::new(var, start, coeffs, None)
    }

    pub fn polynomial(var: Var, coeffs: Vec<T>) -> Self {
        TruncSeries::exact(var, 0, coeffs)
    }

    pub fn constant(var: Var, c: T) -> Self {
        TruncSeries::exact(var, 0, vec![c])
    }

    pub fn monomial(var: Var, e: i64, c: T) -> Self {
        TruncSeries::exact(var, e, vec![c])
    }

    /// The unknown-beyond-`order` zero series, `O(var^(order+1))`.
    pub fn big_o(var: Var, order: i64) -> Self {
        TruncSeries { var, start: 0, coeffs: Vec::new(), order: Some(order) }
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn order(&self) -> Option<i64> {
        self.order
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// Drops known-zero leading coefficients and anything beyond the order.
    fn normalized(mut self) -> Self {
        if let Some(o) = self.order {
            let keep = (o - self.start + 1).max(0) as usize;
            self.coeffs.truncate(keep);
        }
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            Some(k) => {
                self.coeffs.drain(..k);
                self.start += k as i64;
            }
            None => {
                self.coeffs.clear();
                self.start = 0;
            }
        }
        while self.coeffs.last().is_some_and(T::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    /// Exponent of the first nonzero known coefficient.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.start)
    }

    pub fn is_known_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, e: i64) -> Result<T> {
        if let Some(o) = self.order {
            if e > o {
                return Err(Error::BeyondOrder { exponent: e, order: o });
            }
        }
        if e < self.start {
            return Ok(T::zero());
        }
        Ok(self.coeffs.get((e - self.start) as usize).cloned().unwrap_or_else(T::zero))
    }

    /// Known coefficients of exponents `from..=to`.
    pub fn coefficients(&self, from: i64, to: i64) -> Result<Vec<T>> {
        (from..=to).map(|e| self.coefficient(e)).collect()
    }

    /// Highest exponent carrying a nonzero coefficient.
    pub fn degree(&self) -> Option<i64> {
        self.valuation().map(|s| s + self.coeffs.len() as i64 - 1)
    }

    pub fn truncate(&self, order: i64) -> Self {
        TruncSeries::new(self.var, self.start, self.coeffs.clone(), min_order(self.order, Some(order)))
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> TruncSeries<U> {
        TruncSeries::new(self.var, self.start, self.coeffs.iter().map(f).collect(), self.order)
    }

    pub fn try_map<U: Ring>(&self, f: impl Fn(&T) -> Result<U>) -> Result<TruncSeries<U>> {
        let coeffs = self.coeffs.iter().map(f).collect::<Result<Vec<U>>>()?;
        Ok(TruncSeries::new(self.var, self.start, coeffs, self.order))
    }

    fn check_var(&self, o: &Self) {
        assert_eq!(self.var, o.var, "series in different variables");
    }

    fn combine(&self, o: &Self, sign: bool) -> Self {
        self.check_var(o);
        let order = min_order(self.order, o.order);
        let lo = match (self.valuation(), o.valuation()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => return TruncSeries { var: self.var, start: 0, coeffs: Vec::new(), order },
        };
        let hi = self.degree().into_iter().chain(o.degree()).max().unwrap();
        let hi = order.map_or(hi, |ord| hi.min(ord));
        let coeffs = (lo..=hi)
            .map(|e| {
                let a = self.raw(e);
                let b = o.raw(e);
                if sign {
                    a.plus(&b)
                } else {
                    a.minus(&b)
                }
            })
            .collect();
        TruncSeries::new(self.var, lo, coeffs, order)
    }

    fn raw(&self, e: i64) -> T {
        if e < self.start {
            return T::zero();
        }
        self.coeffs.get((e - self.start) as usize).cloned().unwrap_or_else(T::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        self.combine(o, true)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.combine(o, false)
    }

    pub fn neg(&self) -> Self {
        self.map(T::negated)
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|c| c.times(s))
    }

    /// Product; known through `min(o1 + v2, o2 + v1)`.
    pub fn mul(&self, o: &Self) -> Self {
        self.check_var(o);
        let (va, vb) = (self.valuation(), o.valuation());
        let order = match (va, vb) {
            (Some(a), Some(b)) => min_order(self.order.map(|x| x + b), o.order.map(|x| x + a)),
            (None, Some(b)) => self.order.map(|x| x + b),
            (Some(a), None) => o.order.map(|x| x + a),
            (None, None) => match (self.order, o.order) {
                (Some(x), Some(y)) => Some(x.max(y)),
                (x, y) => x.or(y),
            },
        };
        let (Some(a), Some(b)) = (va, vb) else {
            return TruncSeries { var: self.var, start: 0, coeffs: Vec::new(), order };
        };
        let mut len = self.coeffs.len() + o.coeffs.len() - 1;
        if let Some(ord) = order {
            len = len.min((ord - a - b + 1).max(0) as usize);
        }
        let mut coeffs = vec![T::zero(); len];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() || i >= len {
                continue;
            }
            for (j, y) in o.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if !y.is_zero() {
                    coeffs[i + j] = coeffs[i + j].plus(&x.times(y));
                }
            }
        }
        TruncSeries::new(self.var, a + b, coeffs, order)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = TruncSeries::constant(self.var, T::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplies by `var^k`.
    pub fn shift(&self, k: i64) -> Self {
        TruncSeries::new(self.var, self.start + k, self.coeffs.clone(), self.order.map(|o| o + k))
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.times(&T::from_int(self.start + i as i64)))
            .collect();
        TruncSeries::new(self.var, self.start - 1, coeffs, self.order.map(|o| o - 1))
    }

    /// Substitution `self(g)`; `g` must have positive valuation. Laurent `self`
    /// is allowed when `g` can be inverted.
    pub fn compose(&self, g: &Self) -> Result<Self>
    where
        T: ExactDiv,
    {
        if g.coefficient(0).map(|c| !c.is_zero()).unwrap_or(true) || g.start < 0 && !g.is_known_zero() {
            return Err(Error::NotComposable);
        }
        let Some(v) = g.valuation() else {
            // g is O(z^(order+1)) with nothing known
            return Err(Error::NotComposable);
        };
        let s = self.valuation().unwrap_or(0);
        // Unknown tail of self starts at exponent order+1 and lands at v(order+1).
        let from_self = self.order.map(|o| v * (o + 1) - 1);
        // g^e is known through e*v + (order_g - v); the constant term is exact.
        let from_g = g.order.and_then(|og| {
            (0..self.coeffs.len())
                .map(|i| self.start + i as i64)
                .filter(|&e| e != 0 && !self.raw(e).is_zero())
                .map(|e| e * v + og - v)
                .min()
        });
        let order = min_order(from_self, from_g);
        let gt = |x: &Self| match order {
            Some(o) => x.truncate(o),
            None => x.clone(),
        };
        let mut out = TruncSeries { var: g.var, start: 0, coeffs: Vec::new(), order };
        if self.is_known_zero() {
            return Ok(out);
        }
        let top = self.degree().unwrap();
        let mut power = if s >= 0 {
            gt(&g.pow(s as u32))
        } else {
            let inv = g.invert()?;
            gt(&inv.pow((-s) as u32))
        };
        for e in s..=top {
            let c = self.raw(e);
            if !c.is_zero() {
                out = out.add(&power.scale(&c));
            }
            if e < top {
                power = gt(&power.mul(g));
            }
        }
        Ok(gt(&out))
    }

    /// Multiplicative inverse; needs a known, invertible leading coefficient.
    pub fn invert(&self) -> Result<Self>
    where
        T: ExactDiv,
    {
        let Some(v) = self.valuation() else {
            return Err(Error::NotInvertible);
        };
        let Some(ord) = self.order else {
            if self.coeffs.len() == 1 {
                let inv = T::one().exact_div(&self.coeffs[0]).ok_or(Error::NotInvertible)?;
                return Ok(TruncSeries::exact(self.var, -v, vec![inv]));
            }
            return Err(Error::Truncation("inverse of an exact series needs an order".into()));
        };
        let lead_inv = T::one().exact_div(&self.coeffs[0]).ok_or(Error::NotInvertible)?;
        let rel = ord - v;
        let n = (rel + 1) as usize;
        let a: Vec<T> = (0..n).map(|i| self.raw(v + i as i64)).collect();
        let mut b: Vec<T> = Vec::with_capacity(n);
        for k in 0..n {
            let mut s = if k == 0 { T::one() } else { T::zero() };
            for i in 1..=k {
                if !a[i].is_zero() {
                    s = s.minus(&a[i].times(&b[k - i]));
                }
            }
            b.push(s.times(&lead_inv));
        }
        Ok(TruncSeries::new(self.var, -v, b, Some(ord - 2 * v)))
    }

    pub fn div(&self, o: &Self) -> Result<Self>
    where
        T: ExactDiv,
    {
        Ok(self.mul(&o.invert()?))
    }
}

impl<T: Ring> fmt::Display for TruncSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = self.var.name();
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.start + i as i64;
            let mon = match e {
                0 => String::new(),
                1 => x.clone(),
                _ => format!("{x}^{e}"),
            };
            let cs = c.to_string();
            parts.push(match (mon.is_empty(), cs.as_str()) {
                (true, _) => cs,
                (false, "1") => mon,
                (false, _) => format!("({cs})*{mon}"),
            });
        }
        if let Some(o) = self.order {
            parts.push(format!("O({x}^{})", o + 1));
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::mpoly::MPoly;
    use crate::exactalg::rational::{int, Rational};
    use proptest::prelude::*;

    fn z() -> Var {
        Var::Z
    }

    fn jet(n: usize) -> TruncSeries<MPoly> {
        // z + c1 z^2 + ... + cn z^(n+1), known through z^(n+1)
        let mut cs = vec![MPoly::zero(), MPoly::one()];
        cs.extend((1..=n).map(MPoly::coord));
        TruncSeries::new(z(), 0, cs, Some(n as i64 + 1))
    }

    fn c(k: usize) -> MPoly {
        MPoly::coord(k)
    }

    #[test]
    fn inverse_of_z_f() {
        let zf = jet(4).shift(1);
        let inv = zf.invert().unwrap();
        assert_eq!(inv.order(), Some(2));
        assert_eq!(inv.coefficient(-2).unwrap(), MPoly::one());
        assert_eq!(inv.coefficient(-1).unwrap(), -c(1));
        assert_eq!(inv.coefficient(0).unwrap(), &(&c(1) * &c(1)) - &c(2));
        let b1 = &(&(&c(1) * &c(2)).scale(&int(2)) - &c(1).pow(3)) - &c(3);
        assert_eq!(inv.coefficient(1).unwrap(), b1);
        assert!(inv.coefficient(3).is_err());
    }

    #[test]
    fn trivial_inverses() {
        let one = TruncSeries::constant(z(), int(1));
        assert_eq!(one.invert().unwrap(), one);
        let zz = TruncSeries::monomial(z(), 1, int(1));
        assert_eq!(zz.invert().unwrap().mul(&zz), one);
    }

    #[test]
    fn composition() {
        let f = jet(3);
        let id = TruncSeries::monomial(z(), 1, MPoly::one());
        assert_eq!(f.compose(&id).unwrap(), f);
        let sq = TruncSeries::monomial(z(), 2, int(1));
        let g = TruncSeries::polynomial(z(), vec![int(0), int(1), int(1)]);
        assert_eq!(sq.compose(&g).unwrap(), TruncSeries::exact(z(), 2, vec![int(1), int(2), int(1)]));
        let constant = TruncSeries::polynomial(z(), vec![int(1), int(1)]);
        assert_eq!(sq.compose(&constant), Err(Error::NotComposable));
    }

    #[test]
    fn ovsienko_projection_series() {
        // f / (1 + c1 f) = z + (c2 - c1^2) z^3 + O(z^4)
        let f = jet(2);
        let den = TruncSeries::constant(z(), MPoly::one()).add(&f.scale(&c(1)));
        let p = f.div(&den).unwrap();
        assert_eq!(p.order(), Some(3));
        assert_eq!(p.coefficient(1).unwrap(), MPoly::one());
        assert_eq!(p.coefficient(2).unwrap(), MPoly::zero());
        assert_eq!(p.coefficient(3).unwrap(), &c(2) - &(&c(1) * &c(1)));
    }

    #[test]
    fn orders_propagate() {
        let a = TruncSeries::new(z(), 0, vec![int(1), int(1)], Some(3));
        let b = TruncSeries::new(z(), 1, vec![int(1)], Some(5));
        assert_eq!(a.mul(&b).order(), Some(4));
        assert_eq!(a.add(&b).order(), Some(3));
        assert_eq!(a.derivative().order(), Some(2));
        assert_eq!(TruncSeries::<Rational>::big_o(z(), 2).coefficient(3), Err(Error::BeyondOrder { exponent: 3, order: 2 }));
    }

    proptest! {
        #[test]
        fn invert_then_multiply(cs in prop::collection::vec(-5i64..6, 1..7), ord in 3i64..9) {
            prop_assume!(cs[0] != 0);
            let s = TruncSeries::new(z(), 0, cs.iter().map(|&x| int(x)).collect(), Some(ord));
            let p = s.mul(&s.invert().unwrap());
            prop_assert_eq!(p.order(), Some(ord));
            for e in 0..=ord {
                prop_assert_eq!(p.coefficient(e).unwrap(), int(i64::from(e == 0)));
            }
        }
    }
}
