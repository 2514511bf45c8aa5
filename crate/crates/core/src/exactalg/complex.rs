use std::fmt;

use num_traits::Signed;

use super::rational::{format_rational, int, Rational};
use super::ring::{Field, Ring};

/// Gaussian rational `re + i·im`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QI {
    pub re: Rational,
    pub im: Rational,
}

impl QI {
    pub fn new(re: Rational, im: Rational) -> QI {
        QI { re, im }
    }

    pub fn real(re: Rational) -> QI {
        QI { re, im: int(0) }
    }

    pub fn i() -> QI {
        QI { re: int(0), im: int(1) }
    }

    pub fn conj(&self) -> QI {
        QI { re: self.re.clone(), im: -&self.im }
    }
}

impl Ring for QI {
    fn zero() -> Self {
        QI::real(int(0))
    }
    fn one() -> Self {
        QI::real(int(1))
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        QI::new(&self.re + &o.re, &self.im + &o.im)
    }
    fn minus(&self, o: &Self) -> Self {
        QI::new(&self.re - &o.re, &self.im - &o.im)
    }
    fn times(&self, o: &Self) -> Self {
        QI::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
    fn negated(&self) -> Self {
        QI::new(-&self.re, -&self.im)
    }
    fn from_rational(q: &Rational) -> Self {
        QI::real(q.clone())
    }
}

impl Field for QI {
    fn inv(&self) -> Option<Self> {
        let n = &self.re * &self.re + &self.im * &self.im;
        if n.is_zero() {
            return None;
        }
        Some(QI::new(&self.re / &n, -&self.im / &n))
    }
}

impl fmt::Display for QI {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", format_rational(&self.re)),
            (true, false) => write!(f, "{}i", format_rational(&self.im)),
            (false, false) => {
                let s = if self.im.is_negative() { "-" } else { "+" };
                write!(f, "{} {s} {}i", format_rational(&self.re), format_rational(&self.im.abs()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_squared() {
        assert_eq!(QI::i().times(&QI::i()), QI::from_int(-1));
        let z = QI::new(int(1), int(2));
        assert_eq!(z.times(&z.inv().unwrap()), QI::one());
        assert_eq!(z.to_string(), "1 + 2i");
    }
}
