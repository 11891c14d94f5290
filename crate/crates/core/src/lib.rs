//! Rational-line order types, the Henson-graph forcing poset, and maximal
//! chains in positive families built from them.

pub mod chains;
pub mod compactsets;
pub mod forcing;
pub mod gmunu;
pub mod graph;
pub mod henson;
pub mod ordercore;
pub mod qline;
pub mod syntax;

pub use compactsets::{Atom, ClassLabel, CompactDescriptor};
pub use forcing::{Condition, DenseSetId, GenericRun, RunConfig};
pub use graph::RatGraph;
pub use ordercore::OrderTypeExpr;
pub use qline::{jclass, Endpoint, Rat, Window};
pub use chains::{Carrier, ChainElement, ChainTarget};
pub use gmunu::{Family, GraphShape, PeriodicSet, SymbolicSet};
pub use henson::PqrSpec;
