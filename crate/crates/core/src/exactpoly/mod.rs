//! Exact polynomial algebra over the rationals.
//!
//! Everything here is a pure function of immutable values. Gröbner bases are
//! computed by Buchberger's algorithm ([`buchberger`]) and drive elimination,
//! saturation, radical membership and dimension.

mod groebner;
mod ideal;
mod matrix;
mod monomial;
mod polynomial;
mod ring;

pub use groebner::{GroebnerBasis, ResourceLimits, DEFAULT_MAX_BASIS, DEFAULT_MAX_DEGREE};
pub use ideal::{
    buchberger, eliminate, eliminate_names, ideal_dimension, intersect, normal_form,
    radical_membership, saturate, Ideal,
};
pub use matrix::{combinations, jacobian, minors, PolyMatrix};
pub use monomial::{Monomial, MonomialOrder};
pub use polynomial::{Polynomial, Term};
pub use ring::{Ring, VariableSet};

pub(crate) use polynomial::rational_to_f64;

/// Arbitrary-precision rational numbers.
pub type Rational = num_rational::BigRational;

/// `Rational` from a pair of machine integers.
pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}
