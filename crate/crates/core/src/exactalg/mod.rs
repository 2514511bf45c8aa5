//! Exact scalars, polynomials, rational functions, series and linear algebra.

pub mod complex;
pub mod linalg;
pub mod matrix;
pub mod mpoly;
pub mod ratfn;
pub mod rational;
pub mod ring;
pub mod series;

pub use complex::QI;
pub use linalg::{bareiss_det, det_ratfn, kernel_basis, ldlt_signature, rank, rref, solve, SparseEchelon};
pub use matrix::Matrix;
pub use mpoly::{MPoly, Monomial, Var};
pub use ratfn::{ratfn_normalize, RatFn};
pub use rational::{int, parse_rational, rat, Rational};
pub use ring::{ExactDiv, Field, Ring};
pub use series::TruncSeries;

/// JSON form used in reports: rationals as `"p/q"` strings, polynomials and
/// rational functions in their structured forms.
pub trait ToJson {
    fn to_json(&self) -> serde_json::Value;
}

impl ToJson for Rational {
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(rational::format_rational(self))
    }
}

impl ToJson for MPoly {
    fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("polynomial serializes")
    }
}

impl ToJson for RatFn {
    fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("rational function serializes")
    }
}

impl ToJson for QI {
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }
}
