//! Principal indefinite sums of eventually `p`-convex or `p`-concave functions.
//!
//! Given `g` on the positive reals, [`sigma::sigma`] evaluates the unique
//! solution `Σg` of `Σg(x+1) - Σg(x) = g(x)` with `Σg(1) = 0` that inherits
//! the eventual higher-order convexity of `g`. For `g = ln` this is `ln Γ`.
//!
//! Around that core sit the asymptotic constant and generalized Euler
//! constant ([`constants`]), Binet-type remainders and asymptotic expansions
//! ([`asymptotics`]), identity and inequality residuals ([`identities`]), a
//! small expression language ([`expr`]) and a catalog of worked examples with
//! independent reference implementations ([`catalog`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod catalog;
pub mod constants;
pub mod error;
pub mod expr;
mod gfunc;
pub mod identities;
pub mod numerics;
pub mod shape;
pub mod sigma;

pub use catalog::{builtin, CatalogEntry};
pub use constants::ConstantsReport;
pub use error::{Error, Result};
pub use expr::{parse, Expr, Jet};
pub use gfunc::{GFunction, Shape};
pub use identities::ResidualReport;
pub use numerics::QuadResult;
pub use shape::ShapeReport;
pub use sigma::{SigmaResult, Strategy};
