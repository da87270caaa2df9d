//! Exact arithmetic, solving and verification for the twisted Thue forms
//!
//! ```text
//! F_{n,a}(X, Y) = (X - λ0^a Y)(X - λ1^a Y)(X - λ2^a Y)
//! ```
//!
//! attached to Shanks' simplest cubic fields, where `λ0 > 0 > λ1 > -1 > λ2`
//! are the roots of `X^3 - (n-1) X^2 - (n+2) X - 1`.
//!
//! * [`cubic_order`]: exact arithmetic in `Z[λ0]`, norms, the Galois action.
//! * [`forms`]: the coefficients `(u_a, v_a)`, evaluation and symmetries.
//! * [`roots`]: certified root isolation and the classical root brackets.
//! * [`diophantine`]: continued fractions and small-value witnesses.
//! * [`search`]: complete box enumeration of `0 < |F_{n,a}(x, y)| <= m`.
//! * [`units`]: unit decompositions, the Siegel identity, linear forms in logs.
//! * [`laws`]: grid verification of the recurrence lemma and its corollaries.

pub mod cubic_order;
pub mod diophantine;
pub mod error;
pub mod forms;
pub mod interval;
pub mod laws;
pub mod roots;
pub mod search;
pub mod units;

mod util;

pub use cubic_order::OrderElement;
pub use error::{Error, Result};

pub use interval::{Dyadic, Interval};
pub use forms::FormCoefficients;
pub use roots::RootTriple;
pub use search::{SearchConfig, Solution, SolutionClass, Strategy};
pub use units::{GammaTriple, UnitDecomposition};


