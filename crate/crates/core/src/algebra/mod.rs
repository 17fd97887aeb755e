//! Exact arithmetic in F_q and F_q[X].

pub mod field;
pub mod poly;

pub use field::{Elem, FieldSpec};
pub use poly::{Factorization, Poly};
