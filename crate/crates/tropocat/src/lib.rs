//! Combinatorics of weighted cospan categories and tropical moduli spaces.
//!
//! The crate provides, over a choice of weighting monoid:
//!
//! * presented sets, cospans of finite sets, and weighted cospans with the
//!   cycle-corrected composite labelling ([`finset`], [`cospan`]);
//! * randomized and small-exhaustive verification of the labelled cospan
//!   axioms and the surgery diagrams ([`axioms`]);
//! * stable weighted graphs: genus, contraction, canonical forms,
//!   automorphisms, and enumeration of all isomorphism classes of a given
//!   genus ([`graph`]), plus nested cut systems turning a graph into a chain
//!   of weighted cospans ([`cuts`]);
//! * metric stable graphs and the explicit evaluation maps from chains of
//!   cospans or contractions into the moduli space of volume-one tropical
//!   curves ([`moduli`]);
//! * two independent rational chain complexes, one built from tropical
//!   moduli cells ([`tropical`]) and one from the loop-free graph complex
//!   ([`graph_complex`]), with exact sparse linear algebra ([`linalg`]) and
//!   shared homology plumbing ([`homology`]).
//!
//! Everything is exact: integer weights, arbitrary-precision rationals for
//! metrics and matrices, no floating point. All operations are pure and
//! deterministic; parallel code paths collect in a fixed order so results do
//! not depend on thread count.

pub mod axioms;
pub mod cospan;
pub mod cuts;
pub mod finset;
pub mod graph;
pub mod graph_complex;
pub mod homology;
pub mod linalg;
pub mod moduli;
pub mod tropical;
pub mod weight;

pub use cospan::{b1_of_class, WeightedCospan, WeightError};
pub use finset::{Classification, Cospan, CospanError, FinSet, PresentedSet};
pub use weight::{GroupWeight, Weight, Weighting};
