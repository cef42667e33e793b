//! Exact-arithmetic machinery for finitely presented pro-p-groups: cyclic
//! module decomposition over F_p, class-2 quotients of free pro-p-groups,
//! T-group invariants via Reidemeister-Schreier rewriting, low-degree
//! cohomology of presented groups, and detectors that flag groups which
//! cannot be absolute Galois groups.
//!
//! All arithmetic is exact residue arithmetic; the prime p is a runtime
//! parameter. Every value is immutable after construction and every
//! operation is a pure function, so the whole crate is safe to use from
//! multiple threads without synchronization.

pub mod class2;
pub mod cohomology;
pub mod detector;
pub mod error;
pub mod fpmod;
pub mod presentation;
pub mod tgroup;

pub use error::{Error, Result};
