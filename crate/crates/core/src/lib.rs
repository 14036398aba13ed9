//! Numerical laboratory for the free boundary problem
//! u_t = u_xx + f(u) on (g(t), h(t)), with Stefan-type front laws
//! g' = -μ u_x(t, g) and h' = -μ u_x(t, h).

// `!(x > 0.0)` is how inputs reject NaN along with the out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classify;
pub mod config;
pub mod error;
pub mod experiment;
pub mod fb_solver;
pub mod nonlinearity;
pub mod numerics;
pub mod semiwave;
pub mod stationary;
pub mod stefan;
pub mod zeronum;

pub use error::{Error, Result};
pub use nonlinearity::{Kind, Nonlinearity};
