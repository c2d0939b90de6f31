//! Explicit exponential Runge-Kutta methods for stiff semilinear problems
//! `u' = A u + g(t, u)`.
//!
//! The crate ships the eight-stage fifth-order method `expRK5s8` together
//! with exponential Euler and a two-stage second-order method, a numerical
//! checker for the sixteen stiff order conditions up to order five, a
//! fixed-step integrator, and the semilinear heat test problem used for
//! convergence studies.

pub mod convergence;
pub mod error;
pub mod integrator;
pub mod operator;
pub mod order_conditions;
pub mod phi;
pub mod rational;
pub mod tableau;
pub mod testbed;

pub use error::{ExpRkError, Result};
pub use integrator::{integrate, required_requests, step, Record, SemilinearProblem, StepRecord};
pub use operator::LinearOperator;
pub use phi::{PhiCache, PhiRequest};
pub use tableau::{ExpRkTableau, PhiCombo};
