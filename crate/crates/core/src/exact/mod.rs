//! Exact arithmetic: rationals, half-integers, univariate and multivariate
//! polynomials, dense matrices, special numbers and an exact linear solver.

mod combinatorics;
mod half_int;
mod linsolve;
mod matrix;
mod mpoly;
mod poly;
mod rational;

pub use combinatorics::{
    bernoulli, bernoulli_recurrence_witness, binom_poly, binomial, factorial, pochhammer_poly,
    stirling_duality_witness, stirling_first_unsigned, stirling_second,
};
pub use half_int::HalfInt;
pub use linsolve::solve_linear_exact;
pub use matrix::{Matrix, NuMatrix, RationalMatrix, Ring};
pub use mpoly::{Monomial, MPoly};
pub use poly::{NuPolynomial, Poly};
pub use rational::{format_rational, int, parse_rational, rat, rational_str, Rational};
