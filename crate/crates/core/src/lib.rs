//! Self-intersection numbers of curves on a pair of pants, the least degree
//! of a finite cover in which a curve lifts to a simple closed curve, and
//! hyperbolic length estimates for the curves `a·bⁿ`.

pub mod catalog;
pub mod cli;
pub mod cover;
pub mod error;
pub mod exec;
pub mod growth;
pub mod hyperbolic;
pub mod intersection;
pub mod ribbon;
pub mod word;

pub use cover::{min_simple_lift_degree, LiftSearch, LiftWitness, PermCover};
pub use error::{Error, Result};
pub use exec::Execution;
pub use intersection::{is_simple, self_intersection};
pub use ribbon::{pants_base, RibbonGraph};
pub use word::{gamma_n, CyclicWord};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
