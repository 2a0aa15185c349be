//! Arbitrary-precision computation of pi from rapidly convergent
//! hypergeometric-type series, with every series parameter derived from
//! closed-form algebraic constants and cross-checked against independent
//! elliptic-integral numerics.

pub mod analysis;
pub mod constants;
pub mod elliptic;
pub mod error;
pub mod mp;
pub mod series;

pub use error::{Error, Result};
pub use mp::{BigReal, DigitRounding, PrecisionContext};
