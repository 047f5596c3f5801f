//! Non-symmetric quadratic operads: planar trees, quotients, Koszul duals,
//! bar codifferential and Koszul complexes.

mod bar;
mod engine;
mod koszul;
mod presentation;
pub mod tree;

pub use bar::BarLabel;
pub use engine::{pairing_sign, DualBasis, NsOperad, Quotient, TreeBasis};
pub use koszul::{Factor, KoszulCell, KoszulComplex, KoszulEntry, KoszulReport};
pub use presentation::{Generator, Presentation, Relation};
pub use tree::{Node, PlanarTree};
