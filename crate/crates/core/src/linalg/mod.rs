//! Arbitrary-precision integer and rational linear algebra, and exact LP.

mod lp;
mod matrix;
mod normal_form;

use std::fmt;
use std::ops::Deref;

use num_rational::BigRational;

pub use lp::{lp_solve, LpOutcome, LpProblem, Sense};
pub use matrix::{
    dot, integer_kernel_basis, make_primitive, rank_of_rows, rational_to_primitive, solve_combination,
    IntMatrix,
};
pub use normal_form::{hnf, snf, Hermite, Smith};

/// Vector of exact rationals. `BigRational` keeps entries in lowest terms with
/// positive denominators, so derived equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RatVector(pub Vec<BigRational>);

impl Deref for RatVector {
    type Target = [BigRational];
    fn deref(&self) -> &[BigRational] {
        &self.0
    }
}

impl fmt::Debug for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}
