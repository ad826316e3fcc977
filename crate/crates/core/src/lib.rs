//! Exact computations around cube maps in finite groups and solution-free
//! sets in cyclic groups.

pub mod automorphism;
pub mod builders;
pub mod cache;
pub mod classify;
pub mod cubing;
pub mod field;
pub mod group;
pub mod io;
pub mod perm;
pub mod rational;
pub mod sfs;
pub mod structure;
pub mod verify;

pub use group::{AssocCheck, Coset, FiniteGroup, GroupError, Subgroup};
pub use rational::Rational;
pub use structure::{MaxAbelian, Quotient};
