//! `gkit` is a computational algebra library for finite groupoids.
//!
//! It provides explicit-table groupoids with the standard constructions
//! (pairs, equivalence relations, action groupoids, products, opposites),
//! groupoid-sets and bisets with their translation groupoids, orbits,
//! stabilizers and coset spaces, tensor products of bisets over a shared
//! groupoid, and a mechanical verifier for the Mackey formula for
//! groupoid-bisets: it builds both sides of the formula on a concrete
//! instance, constructs the explicit isomorphism, and certifies it.
//!
//! Every value is an immutable table; every operation is a pure function,
//! so concurrent use of shared inputs is safe.
//!
//! Start with the runnable examples (`cargo run --example mackey_verify`)
//! or the `gkit` binary; the library surface is organized as:
//!
//! - [`groupoid`]: groupoids, morphisms, subgroupoids, isotropy, components
//! - [`action`]: one-sided groupoid-sets, equivariant maps, orbits, stabilizers
//! - [`biset`]: two-sided actions and their translation groupoids
//! - [`coset`]: coset spaces by a subgroupoid and orbit decomposition
//! - [`tensor`]: tensor product of bisets and its co-equalizer property
//! - [`mackey`]: star products, quotient bisets, and the formula verifier
//! - [`dsl`], [`report`], [`random`]: instance parsing, emitters, generator

pub mod action;
pub mod biset;
pub mod coset;
pub mod dsl;
pub mod groupoid;
pub mod mackey;
pub mod random;
pub mod report;
pub mod tensor;
pub mod util;
pub mod validate;

pub use action::{EquivariantMap, GroupoidAction, Side};
pub use biset::Biset;
pub use groupoid::{ArrowId, FiniteGroupoid, GroupoidMorphism, ObjectId, ProductGroupoid, Subgroupoid};
pub use mackey::{MackeyInstance, MackeyReport};
pub use tensor::TensorProductBiset;
pub use validate::ValidationReport;
