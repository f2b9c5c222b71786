//! Sharp Wirtinger-type inequalities in rearrangement-invariant spaces.
//!
//! The crate evaluates norms and fundamental functions of Lebesgue, Grand
//! Lebesgue, Orlicz and Zygmund spaces, the classical sharp constants for
//! higher-order Wirtinger inequalities, and the functionals that compare a
//! function vanishing to prescribed order with its `n`-th derivative.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod constants;
pub mod error;
pub mod function;
pub mod norms;
pub mod optimize;
pub mod quadrature;
pub mod serde_float;
pub mod special;
pub mod wirtinger;

pub use constants::{ConstantValue, FormulaId, GnkExtrema};
pub use error::{Error, Result};
pub use function::{extremal_g, FunctionHandle, Interval, PolynomialFunc, RealFunction, ZeroClassSpec};
pub use norms::{FundamentalExponent, NormValue, OrliczGen, PsiGen, SpaceSpec};
pub use quadrature::{QuadConfig, QuadError, QuadResult};
pub use wirtinger::{Discrepancy, TheoremId, TrialFamily, VerdictReport};
