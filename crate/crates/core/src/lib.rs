//! Exact symbolic toolkit for the q-deformed isotropic harmonic oscillator on
//! the quantum Euclidean space `R_q^N`.
//!
//! Layers, bottom up: [`coeff`] (exact scalars in `q^{1/2}`), [`structure`]
//! (braid matrix, metric, projectors), [`algebra`] (normal-ordering engine),
//! [`analysis`] (functions, integration, scalar product), [`osc`] (the
//! oscillator) and [`shell`] (the expression grammar).

pub mod algebra;
pub mod analysis;
pub mod coeff;
pub mod error;
pub mod osc;
pub mod report;
pub mod shell;
pub mod structure;

pub use algebra::{Algebra, Element, Generator, Sector, Word};
pub use coeff::QScalar;
pub use error::{Error, Result};
pub use report::{Check, Report};
pub use structure::{build_structure, Dimension, StructureSet};
