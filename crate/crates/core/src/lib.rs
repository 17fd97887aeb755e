//! Counting ℓ-cyclic covers of the projective line over F_q.
//!
//! The crate enumerates the degree-ℓ cyclic extensions of F_q(X) through
//! their Kummer representatives, counts them by conductor degree with local
//! ramification and splitting conditions, and checks those counts against
//! exact Euler-product generating series, an independent idèle-side
//! enumeration, and the i.i.d. model for the number of rational points.

pub mod algebra;
pub mod arith;
pub mod covers;
pub mod cyclo;
pub mod error;
pub mod model;
pub mod oracle;
pub mod places;
pub mod rational;
pub mod series;

pub use algebra::{FieldSpec, Poly};
pub use error::{Error, Result};
pub use places::{CharValue, Place, SplittingType};
