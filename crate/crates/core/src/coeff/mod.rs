//! Exact coefficient field Q(q^{1/2}) and q-number combinatorics.

pub mod linalg;
pub mod poly;
pub mod qnum;
pub mod scalar;

pub use poly::IntPoly;
pub use qnum::{qbracket, qbracket_base, qfactorial, qfactorial_base, qnumber_half, qnumber_sym};
pub use scalar::{QScalar, RawScalar};
