//! Exact rational linear algebra and a small commutative Gröbner kernel.

mod groebner;
mod matrix;
mod poly;
mod univariate;

pub use groebner::{
    find_rational_point, groebner_basis, groebner_inconsistent, normal_form, variable_min_poly, Consistency, GroebnerCaps,
    GroebnerOutcome,
};
pub use matrix::{solve_and_kernel, solve_matrix, Coordinates, LinearSolution, RatMatrix, RowSpace, Rref};
pub use poly::{variable_names, Monomial, Polynomial};
pub use univariate::UniPoly;

/// Arbitrary-precision rational number.
pub type Rat = num_rational::BigRational;

/// Integer as a rational.
pub fn ri(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// `n / d` in lowest terms. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

/// Converts an integral rational to `i64`, if it fits.
pub fn to_i64(x: &Rat) -> Option<i64> {
    use num_traits::ToPrimitive;
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}
