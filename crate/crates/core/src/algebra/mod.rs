//! The differential algebra as a rewriting system with a unique normal form.
//!
//! Words are `Λ^{k/2}` first, then coordinates in ascending index order, then
//! derivatives in ascending order. Derivatives are stored with lower indices;
//! `∂^i = C^{ij} ∂_j` with `C^{ij} = C_{ij}`.

mod confluence;
mod constants;
mod element;
mod engine;
mod rules;
mod star;
mod text;

pub use constants::NamedConstants;
pub use element::{Element, Generator, Sector, Word};
pub use engine::Algebra;
pub use rules::{complete_coordinate_rules, Family, RuleSet};
pub use text::{element_to_text, word_to_text};
