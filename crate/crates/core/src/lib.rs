pub mod algebra;
pub mod cli;
pub mod diagram;
pub mod invariants;
pub mod poly;
pub mod rack;
pub mod search;
pub mod spec;
pub mod tsrack;

pub use algebra::{AbelianGroup, AlgebraError, QuotientRing};
pub use diagram::{Crossing, DiagramError, LinkDiagram, LinkSpec, Relation};
pub use poly::{order_compare, EnhancedMultiset, InvariantPolynomial, Monomial, PolyOrder};
pub use rack::{FiniteRack, RackError};
pub use spec::{RackInput, TsRackSpec};
pub use tsrack::{TsRack, TsRackError};
